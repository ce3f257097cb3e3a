use std::fs;
use std::io::{self, Read, Write};
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use kpmlcs::oracle::{check_instance, run_verify, VerifyConfig};
use kpmlcs::pipeline::SpillConfig;
use kpmlcs::samples::{bundled, sample, PUBLIC_DATA_NOTE};
use kpmlcs::sequence::{parse_input_with, ParseOptions};
use kpmlcs::{
    char_composition, export_graph_json, export_graphml, export_stats_json, export_text, mine, InputFormat,
    MemoryBudget, MineParams, MiningOutcome, ProblemInstance, PruneMode,
};
use kpmlcs_service::config::DEFAULT_PORT;
use kpmlcs_service::ServiceConfig;

/// Mine all or the top-k multiple longest common subsequences of a set of
/// sequences through a key-point DAG.
#[derive(Debug, Parser)]
#[command(name = "kpmlcs", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Mine an input and write text, GraphML, graph JSON and stats JSON.
    Mine {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        mining: MiningArgs,
        /// Directory receiving the artifacts.
        #[arg(short, long, default_value = "kpmlcs-out")]
        out: PathBuf,
    },
    /// Compare the engine against the dynamic-programming oracle.
    Verify {
        /// File of instances separated by blank lines; random instances when absent.
        file: Option<PathBuf>,
        /// Number of random instances.
        #[arg(long, default_value_t = 200)]
        instances: usize,
        /// Seed of the random instance generator.
        #[arg(long, default_value_t = VerifyConfig::default().seed)]
        seed: u64,
        /// Expansion strategy under test.
        #[arg(long, value_enum, default_value_t = Prune::Off)]
        prune: Prune,
        /// Drop one engine result per instance; the run must then fail.
        #[arg(long)]
        inject_fault: bool,
    },
    /// Print graph statistics and per-sequence composition.
    Stats {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        mining: MiningArgs,
    },
    /// Write a single artifact to a file.
    Export {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        mining: MiningArgs,
        /// Artifact kind.
        #[arg(long = "as", value_enum, default_value_t = Artifact::Graphml)]
        artifact: Artifact,
        /// First level of a graph-json slice (needs --to).
        #[arg(long, requires = "to")]
        from: Option<u32>,
        /// Last level of a graph-json slice (needs --from).
        #[arg(long, requires = "from")]
        to: Option<u32>,
        /// Destination file.
        #[arg(short, long)]
        output: PathBuf,
    },
    /// List the bundled samples, or write one to a file.
    Sample {
        /// Sample name.
        name: Option<String>,
        /// Destination file; the sample goes to standard output when absent.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run the HTTP job service.
    Serve {
        #[arg(long, default_value_t = DEFAULT_PORT)]
        port: u16,
        /// Address to bind.
        #[arg(long, default_value = "127.0.0.1")]
        host: std::net::IpAddr,
        /// Directory holding job artifacts.
        #[arg(long, default_value = "kpmlcs-jobs")]
        artifact_dir: PathBuf,
        /// Jobs mined at the same time.
        #[arg(long)]
        max_jobs: Option<usize>,
        /// Default memory budget in bytes for jobs that set none.
        #[arg(long)]
        memory_budget: Option<u64>,
        /// Directory of static UI assets.
        #[arg(long)]
        ui_dir: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
struct InputArgs {
    /// Input file, `-` for standard input.
    #[arg(required_unless_present = "sample", conflicts_with = "sample")]
    input: Option<PathBuf>,
    /// Use a bundled sample instead of a file.
    #[arg(long)]
    sample: Option<String>,
    /// Input format.
    #[arg(long, value_enum, default_value_t = Format::Auto)]
    format: Format,
}

#[derive(Debug, Args)]
struct MiningArgs {
    /// Enumerate every MLCS, or only the k best by gap score.
    #[arg(long, value_enum, default_value_t = Mode::Exact)]
    mode: Mode,
    /// Result count for top-k mode (default 10).
    #[arg(short)]
    k: Option<usize>,
    /// Resident byte limit for DAG levels; older levels spill into the output directory.
    #[arg(long)]
    memory_budget: Option<u64>,
    /// Abort once this many match points have been expanded.
    #[arg(long)]
    node_budget: Option<u64>,
    /// Expansion strategy.
    #[arg(long, value_enum, default_value_t = Prune::Auto)]
    prune: Prune,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Auto,
    Plain,
    Fasta,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Exact,
    Topk,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Prune {
    Auto,
    On,
    Off,
    Bounded,
}

impl From<Prune> for PruneMode {
    fn from(p: Prune) -> Self {
        match p {
            Prune::Auto => PruneMode::Auto,
            Prune::On => PruneMode::On,
            Prune::Off => PruneMode::Off,
            Prune::Bounded => PruneMode::Bounded,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Artifact {
    Text,
    Graphml,
    GraphJson,
    StatsJson,
}

impl InputArgs {
    fn load(&self) -> Result<ProblemInstance> {
        if let Some(name) = &self.sample {
            return sample(name)
                .map(|s| s.instance())
                .with_context(|| format!("unknown sample {name:?}"));
        }
        let path = self.input.as_deref().expect("clap enforces an input");
        let raw = if path == Path::new("-") {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s)?;
            s
        } else {
            fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?
        };
        let format = match self.format {
            Format::Auto => InputFormat::detect(&raw),
            Format::Plain => InputFormat::PlainLines,
            Format::Fasta => InputFormat::Fasta,
        };
        Ok(parse_input_with(&raw, format, &ParseOptions::default())?)
    }
}

impl MiningArgs {
    fn params(&self, spill_dir: Option<&Path>) -> Result<MineParams> {
        let mut p = match (self.mode, self.k) {
            (Mode::Exact, Some(_)) => return Err(usage("-k is only valid with --mode topk")),
            (Mode::Exact, None) => MineParams::exact(),
            (Mode::Topk, Some(0)) => return Err(usage("k must be at least 1")),
            (Mode::Topk, k) => MineParams::topk(k.unwrap_or(10)),
        };
        if let Some(n) = self.node_budget {
            p.node_budget = n;
        }
        p.prune = self.prune.into();
        if let Some(limit) = self.memory_budget {
            let dir = spill_dir.ok_or_else(|| usage("--memory-budget needs an output directory"))?;
            p.spill = Some(SpillConfig {
                budget: Some(MemoryBudget::new(limit)),
                store_dir: dir.to_path_buf(),
                job_id: "cli".into(),
                persist_all: false,
            });
        }
        Ok(p)
    }
}

/// Flag combinations clap cannot rule out on its own; these exit like parse errors.
#[derive(Debug)]
struct UsageError(&'static str);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: &'static str) -> anyhow::Error {
    UsageError(msg).into()
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.is::<UsageError>() {
                ExitCode::from(1)
            } else {
                ExitCode::from(2)
            }
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Mine { input, mining, out } => cmd_mine(&input, &mining, &out)?,
        Command::Verify {
            file,
            instances,
            seed,
            prune,
            inject_fault,
        } => return cmd_verify(file.as_deref(), instances, seed, prune.into(), inject_fault),
        Command::Stats { input, mining } => cmd_stats(&input, &mining)?,
        Command::Export {
            input,
            mining,
            artifact,
            from,
            to,
            output,
        } => cmd_export(&input, &mining, artifact, from.zip(to), &output)?,
        Command::Sample { name, output } => cmd_sample(name.as_deref(), output.as_deref())?,
        Command::Serve {
            port,
            host,
            artifact_dir,
            max_jobs,
            memory_budget,
            ui_dir,
        } => {
            let mut cfg = ServiceConfig::new(artifact_dir);
            if let Some(n) = max_jobs {
                cfg.max_concurrent_jobs = n;
            }
            cfg.memory_budget = memory_budget;
            cfg.ui_dir = ui_dir;
            cmd_serve(cfg, SocketAddr::new(host, port))?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn mine_input(input: &InputArgs, mining: &MiningArgs, spill_dir: Option<&Path>) -> Result<(ProblemInstance, MiningOutcome)> {
    let inst = input.load()?;
    let params = mining.params(spill_dir)?;
    let out = mine(&inst, &params)?;
    Ok((inst, out))
}

fn cmd_mine(input: &InputArgs, mining: &MiningArgs, out_dir: &Path) -> Result<()> {
    fs::create_dir_all(out_dir).with_context(|| format!("creating {}", out_dir.display()))?;
    let (inst, out) = mine_input(input, mining, Some(out_dir))?;
    let doc = export_graph_json(&out.dag, &out.result, &out.patterns, &out.stats, None)?;
    let files = [
        ("mlcs.text", export_text(&out.result, &out.stats, inst.d())),
        ("graph.xml", export_graphml(&out.dag)),
        ("graph.json", doc.to_json()),
        ("stats.json", export_stats_json(&out.stats)),
    ];
    for (name, body) in &files {
        let path = out_dir.join(name);
        fs::write(&path, body).with_context(|| format!("writing {}", path.display()))?;
    }

    println!("L={} paths={}", out.stats.mlcs_len, out.stats.path_count);
    if let Some(best) = out.result.paths.first() {
        let shown: String = best.text.chars().take(72).collect();
        let more = if best.text.len() > 72 { "..." } else { "" };
        println!("top: {shown}{more} (gap {})", best.gap_score);
    }
    println!(
        "key points {}, match points {}, edges {}, {} common pattern(s), {} level(s) spilled",
        out.stats.key_points,
        out.stats.nodes_expanded,
        out.stats.edges_examined,
        out.patterns.len(),
        out.spills.len()
    );
    println!("artifacts in {}", out_dir.display());
    Ok(())
}

fn cmd_verify(file: Option<&Path>, instances: usize, seed: u64, prune: PruneMode, inject_fault: bool) -> Result<ExitCode> {
    let mismatches = match file {
        Some(path) => {
            let raw = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let blocks: Vec<&str> = raw.split("\n\n").filter(|b| !b.trim().is_empty()).collect();
            let mut found = Vec::new();
            for block in &blocks {
                let inst = parse_input_with(block, InputFormat::PlainLines, &ParseOptions::default())?;
                found.extend(check_instance(&inst, prune, inject_fault));
            }
            println!("checked {} instance(s) from {}", blocks.len(), path.display());
            found
        }
        None => {
            let cfg = VerifyConfig {
                instances,
                seed,
                prune,
                inject_fault,
                ..VerifyConfig::default()
            };
            let report = run_verify(&cfg);
            println!(
                "checked {} random instance(s), seed {seed}, {} MLCS string(s) confirmed",
                report.instances, report.total_strings
            );
            report.mismatches
        }
    };
    if mismatches.is_empty() {
        println!("all instances match the oracle");
        return Ok(ExitCode::SUCCESS);
    }
    eprintln!("{} mismatching instance(s)", mismatches.len());
    for m in &mismatches {
        eprintln!("{}", serde_json::to_string(m)?);
    }
    Ok(ExitCode::from(2))
}

fn cmd_stats(input: &InputArgs, mining: &MiningArgs) -> Result<()> {
    if mining.memory_budget.is_some() {
        return Err(usage("stats does not spill; drop --memory-budget"));
    }
    let (inst, out) = mine_input(input, mining, None)?;
    let s = &out.stats;
    println!("sequences {}  alphabet {}", inst.d(), inst.alphabet().symbols().collect::<String>());
    println!("L {}  paths {}  key points {}", s.mlcs_len, s.path_count, s.key_points);
    println!("match points N {}  edges E {}  expansion {:?}", s.nodes_expanded, s.edges_examined, out.expansion);
    let widest = s.level_widths.iter().max().copied().unwrap_or(0);
    println!("levels {}  widest {}", s.level_widths.len(), widest);
    for seg in &out.patterns {
        println!("pattern levels {}..={}: {}", seg.from_level, seg.to_level, seg.text);
    }
    for seq in inst.sequences() {
        let comp: Vec<String> = char_composition(inst.alphabet(), seq)
            .into_iter()
            .map(|(c, x)| format!("{c}:{:.3}", x.fraction))
            .collect();
        println!("{} len {}  {}", seq.name, seq.len(), comp.join(" "));
    }
    Ok(())
}

fn cmd_export(
    input: &InputArgs,
    mining: &MiningArgs,
    artifact: Artifact,
    range: Option<(u32, u32)>,
    output: &Path,
) -> Result<()> {
    if range.is_some() && !matches!(artifact, Artifact::GraphJson) {
        return Err(usage("--from/--to apply to graph-json only"));
    }
    let spill_dir = output.parent().map(|p| if p.as_os_str().is_empty() { Path::new(".") } else { p });
    let (inst, out) = mine_input(input, mining, spill_dir)?;
    let body = match artifact {
        Artifact::Text => export_text(&out.result, &out.stats, inst.d()),
        Artifact::Graphml => export_graphml(&out.dag),
        Artifact::GraphJson => export_graph_json(&out.dag, &out.result, &out.patterns, &out.stats, range)?.to_json(),
        Artifact::StatsJson => export_stats_json(&out.stats),
    };
    fs::write(output, body).with_context(|| format!("writing {}", output.display()))?;
    println!("wrote {}", output.display());
    Ok(())
}

fn cmd_sample(name: Option<&str>, output: Option<&Path>) -> Result<()> {
    let Some(name) = name else {
        for s in bundled() {
            let inst = s.instance();
            println!("{:<12} d={} lengths={:?}  {}", s.name, inst.d(), inst.lengths(), s.description);
        }
        println!("{PUBLIC_DATA_NOTE}");
        return Ok(());
    };
    let s = sample(name).with_context(|| format!("unknown sample {name:?}"))?;
    match output {
        Some(path) => {
            fs::write(path, &s.content).with_context(|| format!("writing {}", path.display()))?;
            println!("wrote {}", path.display());
        }
        None => io::stdout().write_all(s.content.as_bytes())?,
    }
    Ok(())
}

fn cmd_serve(cfg: ServiceConfig, addr: SocketAddr) -> Result<()> {
    tracing_subscriber::fmt().with_writer(io::stderr).init();
    let runtime = tokio::runtime::Runtime::new()?;
    runtime.block_on(async {
        let listener = tokio::net::TcpListener::bind(addr)
            .await
            .with_context(|| format!("binding {addr}"))?;
        eprintln!("listening on http://{}", listener.local_addr()?);
        kpmlcs_service::serve_on(cfg, listener).await?;
        Ok(())
    })
}
