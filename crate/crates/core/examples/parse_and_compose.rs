// Parsing plain and FASTA input, then per-sequence character composition.
//
// ```bash
// cargo run -p kpmlcs --example parse_and_compose
// ```

use kpmlcs::{char_composition, parse_input, InputFormat, SuccessorTable};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let fasta = ">s1 first\nAAcg\n>s2\nAC\nGA\n>s3\nCAGA\n";
    let inst = parse_input(fasta, InputFormat::detect(fasta))?;
    println!("d={} alphabet={:?}", inst.d(), inst.alphabet().symbols().collect::<String>());

    for seq in inst.sequences() {
        let parts: Vec<String> = char_composition(inst.alphabet(), seq)
            .into_iter()
            .map(|(c, comp)| format!("{c}:{}({:.2})", comp.count, comp.fraction))
            .collect();
        println!("{:<8} {}", seq.name, parts.join(" "));
    }

    let tab = SuccessorTable::build(&inst);
    let a = inst.alphabet().code_of('A').ok_or("no A")?;
    println!("next A after position 1 in s2: {}", tab.next(1, a, 1));

    match parse_input("AC\n", InputFormat::PlainLines) {
        Err(e) => println!("rejected: {e}"),
        Ok(_) => return Err("single sequence must be rejected".into()),
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
