use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use bvc_core::experiment::{
    csv_header, csv_row, parse_config_text, run_one, seeds, summarize, verify, ExperimentConfig, Record,
};
use clap::{Args, Parser, Subcommand};

const CSV_HELP: &str = "CSV columns, in order: pipeline, graph, seed, n, m, D, max_degree, opt, cover_size, \
matching_size, valid, within_bound, rounds, max_message_bits, total_bits, bandwidth, wall_ms";

#[derive(Parser)]
#[command(name = "bvc", version, about = "Simulated CONGEST vertex cover experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a pipeline over one or more seeds and emit one JSON record per run.
    #[command(after_help = CSV_HELP)]
    Run(Box<RunArgs>),
    /// Re-run stored records and compare them field by field.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct RunArgs {
    /// exact, diameter1, rand-pipeline, det-low-diam, clustering-only or matching-only
    #[arg(long)]
    pipeline: Option<String>,
    /// Edge-list file, or gen:<family> (path:n, cycle:n, complete:a,b, random:a,b,p, ...)
    #[arg(long)]
    graph: Option<String>,
    /// Seed for the first run; later runs use seed+1, seed+2, ...
    #[arg(long)]
    seed: Option<u64>,
    /// Seed for generated graphs
    #[arg(long)]
    graph_seed: Option<u64>,
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long)]
    k: Option<u32>,
    #[arg(long)]
    lambda: Option<f64>,
    /// Bits per edge per round
    #[arg(long)]
    bandwidth: Option<u32>,
    #[arg(long)]
    repeat: Option<u32>,
    /// maximal, eliminate:k=<k>, approx:delta=<d> or det-approx:delta=<d>
    #[arg(long)]
    provider: Option<String>,
    /// Per-cluster solver: eliminate or deterministic
    #[arg(long)]
    inner: Option<String>,
    /// key = value file; flags override its entries
    #[arg(long)]
    config: Option<PathBuf>,
    /// Skip the oracle; records carry opt = null
    #[arg(long)]
    no_oracle: bool,
    /// JSON lines output (stdout when absent)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write a CSV projection
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Worker threads for independent seeds
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

#[derive(Args)]
struct VerifyArgs {
    /// JSON lines file of records
    #[arg(long)]
    record: PathBuf,
    /// Graph source to use instead of the one stored in each record
    #[arg(long)]
    graph: Option<String>,
}

fn build_config(args: &RunArgs) -> anyhow::Result<ExperimentConfig> {
    let mut entries: Vec<(String, String)> = Vec::new();
    if let Some(path) = &args.config {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        entries = parse_config_text(&text).with_context(|| format!("in {}", path.display()))?;
    }
    let mut flag = |key: &str, value: Option<String>| {
        if let Some(v) = value {
            entries.push((key.to_string(), v));
        }
    };
    flag("pipeline", args.pipeline.clone());
    flag("graph", args.graph.clone());
    flag("seed", args.seed.map(|x| x.to_string()));
    flag("graph_seed", args.graph_seed.map(|x| x.to_string()));
    flag("eps", args.eps.map(|x| x.to_string()));
    flag("k", args.k.map(|x| x.to_string()));
    flag("lambda", args.lambda.map(|x| x.to_string()));
    flag("bandwidth", args.bandwidth.map(|x| x.to_string()));
    flag("repeat", args.repeat.map(|x| x.to_string()));
    flag("provider", args.provider.clone());
    flag("inner", args.inner.clone());
    if args.no_oracle {
        flag("oracle", Some("false".into()));
    }
    Ok(ExperimentConfig::from_entries(entries.iter().map(|(k, v)| (k.as_str(), v.as_str())))?)
}

fn open_out(path: &Option<PathBuf>) -> anyhow::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).with_context(|| format!("creating {}", p.display()))?)),
        None => Box::new(BufWriter::new(io::stdout())),
    })
}

fn run(args: RunArgs) -> anyhow::Result<bool> {
    let cfg = build_config(&args)?;
    let graph = cfg.graph.load(cfg.graph_seed)?;
    let all: Vec<u64> = seeds(&cfg).collect();
    let jobs = args.jobs.max(1).min(all.len());
    let chunk = all.len().div_ceil(jobs);
    let results: Vec<bvc_core::Result<Record>> = std::thread::scope(|s| {
        let handles: Vec<_> = all
            .chunks(chunk)
            .map(|part| s.spawn(|| part.iter().map(|&seed| run_one(&cfg, &graph, seed)).collect::<Vec<_>>()))
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("worker panicked")).collect()
    });
    let mut records = Vec::with_capacity(results.len());
    for r in results {
        records.push(r?);
    }

    let mut out = open_out(&args.out)?;
    for r in &records {
        writeln!(out, "{}", r.to_json())?;
    }
    out.flush()?;
    if let Some(path) = &args.csv {
        let mut w = BufWriter::new(File::create(path).with_context(|| format!("creating {}", path.display()))?);
        writeln!(w, "{}", csv_header())?;
        for r in &records {
            writeln!(w, "{}", csv_row(r))?;
        }
        w.flush()?;
    }
    let summary = summarize(&records);
    eprintln!("{}", summary_line(&summary));
    Ok(summary.passed == summary.runs)
}

fn summary_line(s: &bvc_core::experiment::Summary) -> String {
    let f = |x: Option<f64>| x.map_or("null".to_string(), |v| format!("{v:.4}"));
    format!(
        "{{\"runs\":{},\"passed\":{},\"mean_ratio\":{},\"max_ratio\":{},\"mean_rounds\":{:.1}}}",
        s.runs,
        s.passed,
        f(s.mean_ratio),
        f(s.max_ratio),
        s.mean_rounds
    )
}

fn verify_file(args: VerifyArgs) -> anyhow::Result<bool> {
    let file = File::open(&args.record).with_context(|| format!("opening {}", args.record.display()))?;
    let mut all_ok = true;
    let mut count = 0;
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let mut record = Record::from_json(&line).with_context(|| format!("record on line {}", i + 1))?;
        if let Some(g) = &args.graph {
            record.params.insert("graph".into(), g.clone());
        }
        count += 1;
        let report = verify(&record)?;
        if report.passed() {
            println!("line {}: pass", i + 1);
        } else {
            all_ok = false;
            println!("line {}: FAIL", i + 1);
            for m in &report.mismatches {
                println!("  {m}");
            }
        }
    }
    if count == 0 {
        bail!("no records in {}", args.record.display());
    }
    Ok(all_ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Run(a) => run(*a),
        Command::Verify(a) => verify_file(a),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
