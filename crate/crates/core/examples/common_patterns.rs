// Width-1 sections of the DAG: characters shared by every MLCS at the same
// positions.
//
// ```bash
// cargo run -p kpmlcs --example common_patterns
// ```

use kpmlcs::{mine, MineParams, ProblemInstance};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    // A two-way choice up front, then a shared tail.
    let inst = ProblemInstance::from_strs(&["ACGGTT", "CAGGTT", "ACGGTT"])?;
    let out = mine(&inst, &MineParams::exact())?;

    println!("level widths: {:?}", out.stats.level_widths);
    for seg in &out.patterns {
        println!("levels {}..={}: {}", seg.from_level, seg.to_level, seg.text);
    }
    for s in &out.result.distinct_strings {
        println!("mlcs {s}");
    }
    assert_eq!(out.patterns.len(), 1);
    assert_eq!(out.patterns[0].text, "GGTT");
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
