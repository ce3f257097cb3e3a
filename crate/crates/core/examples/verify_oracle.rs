// Seeded random instances checked against the exhaustive DP oracle.
//
// ```bash
// cargo run --release -p kpmlcs --example verify_oracle
// ```

use kpmlcs::oracle::{run_verify, VerifyConfig};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = VerifyConfig {
        instances: 40,
        ..Default::default()
    };
    let report = run_verify(&cfg);
    println!(
        "{} instances, {} MLCS strings compared, {} mismatches",
        report.instances,
        report.total_strings,
        report.mismatches.len()
    );
    if !report.passed() {
        return Err(format!("{:?}", report.mismatches[0]).into());
    }

    let broken = run_verify(&VerifyConfig {
        inject_fault: true,
        ..cfg
    });
    println!("with an injected fault: {} mismatches", broken.mismatches.len());
    assert!(!broken.passed());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
