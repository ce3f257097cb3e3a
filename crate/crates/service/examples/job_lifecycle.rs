// Submit a job to an in-process manager and follow its event stream to the end.
//
// ```bash
// cargo run -p kpmlcs-service --example job_lifecycle
// ```

use kpmlcs_service::{EventKind, JobManager, JobRequest, Mode, ServiceConfig};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let dir = tempfile::tempdir()?;
    let runtime = tokio::runtime::Runtime::new()?;
    runtime.block_on(async {
        let jobs = JobManager::start(ServiceConfig::new(dir.path()))?;
        let record = jobs.submit(JobRequest {
            sample: Some("dna-60".into()),
            mode: Mode::Topk,
            k: Some(3),
            // Small enough that finished levels move to disk.
            memory_budget: Some(512),
            ..JobRequest::default()
        })?;
        let job = jobs.get(&record.job_id).ok_or("job vanished")?;
        let (snapshot, mut events) = job.subscribe();
        println!("job {} is {:?}", snapshot.job_id, snapshot.state);

        let mut spills = 0;
        if !snapshot.state.is_terminal() {
            loop {
                let ev = events.recv().await?;
                match ev.kind {
                    EventKind::Spill => spills += 1,
                    EventKind::Progress => println!("wave {:>3}: {} nodes, {} edges", ev.wave, ev.nodes, ev.edges),
                    _ => {}
                }
                if ev.is_terminal() {
                    println!("{:?} after {} ms, {spills} spill event(s)", ev.kind, ev.elapsed_ms);
                    break;
                }
            }
        }

        let out = job.output().ok_or("no output")?;
        print!("{}", out.text);
        println!("artifacts: {:?}", job.record().artifacts);
        assert!((1..=3).contains(&out.result.paths.len()));
        Ok::<_, Box<dyn std::error::Error>>(())
    })
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
