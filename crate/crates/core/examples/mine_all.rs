// Every MLCS of a small instance, with embeddings and gap scores.
//
// ```bash
// cargo run -p kpmlcs --example mine_all
// ```

use kpmlcs::{mine, MineParams, ProblemInstance};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let inst = ProblemInstance::from_strs(&["ABC", "ACB", "ABC"])?;
    let out = mine(&inst, &MineParams::exact())?;

    println!("L={} paths={}", out.dag.mlcs_len(), out.result.total_path_count);
    for p in &out.result.paths {
        let steps: Vec<String> = p.embedding.iter().map(|c| format!("{c:?}")).collect();
        println!("{}  gap={}  {}", p.text, p.gap_score, steps.join(" -> "));
    }
    assert_eq!(out.result.distinct_strings, ["AB", "AC"]);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
