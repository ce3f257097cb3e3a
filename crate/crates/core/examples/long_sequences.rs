// Mines three 1,000-base sequences derived from one template with 5%
// substitutions, long enough for the bounded expansion to switch on.
//
// ```bash
// cargo run --release -p kpmlcs --example long_sequences
// ```

use std::time::Instant;

use kpmlcs::samples::{mutated_family, DEFAULT_SEED};
use kpmlcs::{mine, MineParams};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
    let inst = mutated_family(&mut rng, 3, 1000, 4, 0.05);

    let started = Instant::now();
    let out = mine(&inst, &MineParams::topk(10))?;
    let elapsed = started.elapsed();

    println!(
        "L={} paths={} N={} E={} key_points={} expansion={:?} in {:.2?}",
        out.stats.mlcs_len,
        out.stats.path_count,
        out.stats.nodes_expanded,
        out.stats.edges_examined,
        out.stats.key_points,
        out.expansion,
        elapsed
    );
    println!("common patterns: {}", out.patterns.len());
    for p in out.result.paths.iter().take(3) {
        println!("gap={} {}...", p.gap_score, &p.text[..40.min(p.text.len())]);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
