// The ten embeddings with the fewest skipped positions, from a FASTA input.
//
// ```bash
// cargo run -p kpmlcs --example top_k
// ```

use kpmlcs::samples::sample;
use kpmlcs::{mine, MineParams};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let dna = sample("dna-60").ok_or("missing sample")?;
    let inst = dna.instance();
    let out = mine(&inst, &MineParams::topk(10))?;

    println!(
        "{}: d={} L={} total paths={}",
        dna.name,
        inst.d(),
        out.dag.mlcs_len(),
        out.result.total_path_count
    );
    for (rank, p) in out.result.paths.iter().enumerate() {
        println!("{:>2}. gap={:<4} {}", rank + 1, p.gap_score, p.text);
    }
    assert!(out.result.paths.windows(2).all(|w| w[0].gap_score <= w[1].gap_score));
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
