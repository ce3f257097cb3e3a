// Mining under a tight memory budget: early levels go to disk as they are
// sealed and come back layer by layer at the end.
//
// ```bash
// cargo run -p kpmlcs --example spill_reload
// ```

use std::ops::ControlFlow;

use kpmlcs::pipeline::SpillConfig;
use kpmlcs::samples::sample;
use kpmlcs::{mine, mine_with, LayerStore, MemoryBudget, MineParams, MiningEvent};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let inst = sample("dna-60").ok_or("missing sample")?.instance();
    let reference = mine(&inst, &MineParams::topk(10))?;

    // Half of the full DAG, but never less than two adjacent levels need.
    let d = inst.d();
    let levels = reference.dag.levels();
    let total: u64 = levels.iter().map(|l| MemoryBudget::level_bytes(l, d)).sum();
    let pair = levels
        .windows(2)
        .map(|w| MemoryBudget::level_bytes(&w[0], d) + MemoryBudget::level_bytes(&w[1], d))
        .max()
        .unwrap_or(0);
    let limit = (total / 2).max(pair * 2);
    println!("full DAG estimate {total} bytes, limit {limit} bytes");

    let dir = tempfile::tempdir()?;
    let mut params = MineParams::topk(10);
    params.spill = Some(SpillConfig {
        budget: Some(MemoryBudget::new(limit)),
        store_dir: dir.path().to_path_buf(),
        job_id: "spill-demo".into(),
        persist_all: false,
    });
    let out = mine_with(&inst, &params, |event| {
        if let MiningEvent::Spill { action, spilled_levels } = event {
            println!("spilled level {} ({} bytes), {spilled_levels} on disk", action.level, action.bytes);
        }
        ControlFlow::Continue(())
    })?;

    assert!(!out.spills.is_empty());
    let store = LayerStore::open(dir.path())?;
    println!("manifest: {} levels, L={}", store.level_count(), store.manifest().mlcs_len);
    let first = store.read_levels(1, 1)?;
    println!("level 1 reloaded with {} node(s)", first[0].width());

    assert_eq!(out.result, reference.result);
    assert_eq!(out.dag, reference.dag);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
