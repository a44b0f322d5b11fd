//! Command-line front end: synthesize instances, certify leakage, audit
//! datasets, trace frontiers, train encoders, and re-render reports.
//!
//! Exit codes: 0 success (and certification pass), 1 certification failure,
//! 2 input or flag error, 3 internal invariant violation (a theorem flag or
//! feasibility check failing, which valid inputs cannot produce).

use std::collections::HashMap;
use std::io::IsTerminal;
use std::path::{Path, PathBuf};

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use rand::RngCore;

use lpaudit::certify::{certify_lpp, theorem_report, CertBudget, CertOutcome, LeakageReport};
use lpaudit::dist::{
    channel_from_json, channel_to_json, joint_from_json, joint_to_json, posterior_positivity,
    Alphabet, Channel, JointPmf,
};
use lpaudit::empirical::{
    audit_matrix, average_matrices, split_dataset, AuditMatrix, Dataset, FixedColumns, ReprProvider,
};
use lpaudit::error::{Error, Result};
use lpaudit::fmtnum::round_json_numbers;
use lpaudit::frontier::{
    enumerate_deterministic, feasibility_check, points_to_csv, search_channels, FrontierPoint,
    Provenance, SearchConfig,
};
use lpaudit::manifest::{bytes_digest, RunManifest};
use lpaudit::render::{render_frontier_svg, render_heatmap_svg, HeatmapSpec};
use lpaudit::replab::{
    export_representations, fit_quantizer, train_encoder_censored, train_encoder_erm, LearnedRepr,
    TrainConfig,
};
use lpaudit::rng::substream_indexed;
use lpaudit::synth::{battery_dataset, deterministic_label_joint, random_positive_joint};

#[derive(Parser)]
#[command(
    name = "lpaudit",
    version,
    about = "Exact leakage engine, certifier, and empirical auditor for least-privilege learning"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Seed for every randomized step; equal seeds reproduce whole runs.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Worker threads for parallel sections (0 = one per core). Results do
    /// not depend on this value.
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,

    /// Directory the output bundle is written into.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,

    /// Comparison tolerance for certification, in bits.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tolerance: f64,
}

#[derive(Subcommand)]
enum Command {
    /// Generate seeded joints, channels, and sampled datasets.
    Synth(SynthArgs),
    /// Compute a leakage report for a joint and channel, optionally
    /// certifying against a budget.
    Certify(CertifyArgs),
    /// Estimate the gain matrix of a dataset and render its heatmap.
    Audit(AuditArgs),
    /// Trace the leakage/utility region of a joint and plot it.
    Frontier(FrontierArgs),
    /// Train an encoder on a dataset and export quantized representations.
    Replab(ReplabArgs),
    /// Re-render SVG figures from saved audit or frontier outputs.
    Report(ReportArgs),
}

#[derive(Args)]
#[command(group = ArgGroup::new("generator").required(true).args([
    "positive_posterior", "deterministic_labels", "bsc", "identity", "constant", "battery",
]))]
struct SynthArgs {
    /// Random joint with every posterior strictly positive.
    #[arg(long)]
    positive_posterior: bool,

    /// Joint whose label is a deterministic function of x: parity,
    /// majority, or copy.
    #[arg(long, value_name = "KIND")]
    deterministic_labels: Option<String>,

    /// Binary symmetric channel with flip probability P.
    #[arg(long, value_name = "P")]
    bsc: Option<f64>,

    /// Identity channel over an alphabet of --x-size symbols.
    #[arg(long)]
    identity: bool,

    /// Constant channel collapsing --x-size symbols to one output.
    #[arg(long)]
    constant: bool,

    /// The correlated-attribute audit battery as a sampled dataset.
    #[arg(long)]
    battery: bool,

    /// Also draw N rows from the generated joint into data.csv; for
    /// --battery this sets the row count (default 6000).
    #[arg(long, value_name = "N")]
    sample: Option<usize>,

    /// Input alphabet size for joint and channel generators.
    #[arg(long, default_value_t = 3)]
    x_size: usize,

    /// Label alphabet size for --positive-posterior.
    #[arg(long, default_value_t = 3)]
    y_size: usize,
}

#[derive(Args)]
struct CertifyArgs {
    /// Joint P(x, y) JSON file.
    #[arg(long, value_name = "FILE")]
    joint: PathBuf,

    /// Channel P(z | x) JSON file.
    #[arg(long, value_name = "FILE")]
    channel: PathBuf,

    /// Leakage budget in bits; omit for a report without certification.
    #[arg(long, value_name = "BITS")]
    gamma: Option<f64>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ReprKind {
    /// Audit existing dataset columns as the representation.
    Columns,
    /// Train a task encoder per task, then audit its quantized outputs.
    Erm,
    /// Train censored encoders, targeting each task's top-gain attribute.
    Grad,
}

#[derive(Args)]
struct AuditArgs {
    /// Dataset CSV with a header row.
    data: PathBuf,

    /// Task column; repeat for several tasks.
    #[arg(long, required = true)]
    task: Vec<String>,

    /// Sensitive attribute columns (comma-separated or repeated).
    #[arg(long, required = true, value_delimiter = ',')]
    sensitive: Vec<String>,

    /// Where representations come from.
    #[arg(long, value_enum, default_value_t = ReprKind::Columns)]
    repr: ReprKind,

    /// Representation columns for --repr columns; defaults to all columns
    /// prefixed "z_".
    #[arg(long, value_delimiter = ',')]
    repr_columns: Vec<String>,

    /// Feature columns for encoder training; defaults to every column that
    /// is neither a task nor a sensitive attribute.
    #[arg(long, value_delimiter = ',')]
    features: Vec<String>,

    /// Independent repetitions to average over.
    #[arg(long, default_value_t = 5)]
    repeats: usize,

    /// Encoder output dimensions.
    #[arg(long, default_value_t = 4)]
    k: usize,

    /// Quantizer bins per representation dimension.
    #[arg(long, default_value_t = 4)]
    bins: usize,

    #[arg(long, default_value_t = 40)]
    epochs: usize,

    #[arg(long, default_value_t = 0.05)]
    learning_rate: f64,

    /// Censoring weight for --repr grad.
    #[arg(long, default_value_t = 4.0)]
    lambda: f64,
}

#[derive(Args)]
#[command(group = ArgGroup::new("mode").required(true).args(["enumerate", "search"]))]
struct FrontierArgs {
    /// Joint P(x, y) JSON file.
    joint: PathBuf,

    /// Output alphabet size of the candidate channels.
    #[arg(long, default_value_t = 2)]
    z_size: usize,

    /// Evaluate every deterministic channel (guarded by a size cap).
    #[arg(long)]
    enumerate: bool,

    /// Stochastic hill-climb search for near-frontier channels.
    #[arg(long)]
    search: bool,

    /// Restart count for --search.
    #[arg(long, default_value_t = 32)]
    restarts: usize,

    /// Steps per restart for --search.
    #[arg(long, default_value_t = 500)]
    steps: usize,
}

#[derive(Args)]
struct ReplabArgs {
    /// Dataset CSV with a header row.
    data: PathBuf,

    /// Task column the encoder is trained for.
    #[arg(long)]
    task: String,

    /// Feature columns; defaults to every column except the task.
    #[arg(long, value_delimiter = ',')]
    features: Vec<String>,

    #[arg(long, default_value_t = 4)]
    k: usize,

    #[arg(long, default_value_t = 4)]
    bins: usize,

    #[arg(long, default_value_t = 40)]
    epochs: usize,

    #[arg(long, default_value_t = 0.05)]
    learning_rate: f64,

    /// Censoring weight; 0 trains plain ERM.
    #[arg(long, default_value_t = 0.0)]
    lambda: f64,

    /// Attribute column the adversary head attacks; required when
    /// --lambda > 0.
    #[arg(long)]
    censor_target: Option<String>,
}

#[derive(Args)]
#[command(group = ArgGroup::new("source").required(true).multiple(true).args(["matrix", "frontier"]))]
struct ReportArgs {
    /// Saved matrix.json to re-render as heatmap.svg.
    #[arg(long, value_name = "FILE")]
    matrix: Option<PathBuf>,

    /// Saved frontier.csv to re-render as frontier.svg.
    #[arg(long, value_name = "FILE")]
    frontier: Option<PathBuf>,
}

fn main() {
    let cli = Cli::parse();
    if cli.jobs > 0 {
        // Thread count affects scheduling only, never results.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.jobs)
            .build_global();
    }
    let code = match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("lpaudit: {e}");
            2
        }
    };
    std::process::exit(code);
}

fn run(cli: &Cli) -> Result<i32> {
    std::fs::create_dir_all(&cli.out)?;
    match &cli.command {
        Command::Synth(args) => cmd_synth(cli, args),
        Command::Certify(args) => cmd_certify(cli, args),
        Command::Audit(args) => cmd_audit(cli, args),
        Command::Frontier(args) => cmd_frontier(cli, args),
        Command::Replab(args) => cmd_replab(cli, args),
        Command::Report(args) => cmd_report(cli, args),
    }
}

fn use_color() -> bool {
    std::env::var_os("NO_COLOR").is_none() && std::io::stdout().is_terminal()
}

fn verdict(pass: bool) -> String {
    let word = if pass { "PASS" } else { "FAIL" };
    if use_color() {
        let code = if pass { 32 } else { 31 };
        format!("\x1b[{code}m{word}\x1b[0m")
    } else {
        word.to_string()
    }
}

fn write_text(dir: &Path, name: &str, text: &str) -> Result<()> {
    std::fs::write(dir.join(name), text)?;
    Ok(())
}

/// Serializes with every float rounded to 12 significant digits.
fn write_json_rounded<T: serde::Serialize>(dir: &Path, name: &str, value: &T) -> Result<()> {
    let mut v = serde_json::to_value(value)?;
    round_json_numbers(&mut v);
    let mut text = serde_json::to_string_pretty(&v)?;
    text.push('\n');
    write_text(dir, name, &text)
}

fn read_to_string(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

/// Seed for repetition `index`, decorrelated from the base seed's other uses.
fn repeat_seed(seed: u64, index: u64) -> u64 {
    substream_indexed(seed, "repeat", index).next_u64()
}

fn cmd_synth(cli: &Cli, args: &SynthArgs) -> Result<i32> {
    let mut entries: Vec<(&str, String)> = vec![
        ("x_size", args.x_size.to_string()),
        ("y_size", args.y_size.to_string()),
    ];
    if let Some(n) = args.sample {
        entries.push(("sample", n.to_string()));
    }

    let joint: Option<JointPmf> = if args.positive_posterior {
        entries.push(("generator", "positive-posterior".into()));
        Some(random_positive_joint(args.x_size, args.y_size, cli.seed)?)
    } else if let Some(kind) = &args.deterministic_labels {
        entries.push(("generator", format!("deterministic-labels:{kind}")));
        Some(deterministic_label_joint(kind)?)
    } else {
        None
    };

    let channel: Option<Channel> = if let Some(p) = args.bsc {
        entries.push(("generator", format!("bsc:{p}")));
        Some(Channel::bsc(
            p,
            Alphabet::indexed("x", 2),
            Alphabet::indexed("z", 2),
        )?)
    } else if args.identity {
        entries.push(("generator", "identity".into()));
        Some(Channel::identity(Alphabet::indexed("x", args.x_size)))
    } else if args.constant {
        entries.push(("generator", "constant".into()));
        Some(Channel::constant(
            Alphabet::indexed("x", args.x_size),
            Alphabet::indexed("z", 1),
        ))
    } else {
        None
    };

    let mut manifest = RunManifest::start("synth", cli.seed, entries.iter().cloned());

    if let Some(j) = &joint {
        write_text(&cli.out, "joint.json", &joint_to_json(j))?;
        println!("wrote joint.json ({} x {})", j.dim(0), j.dim(1));
        if let Some(n) = args.sample {
            let ds = Dataset::sample_from_joint(j, n, cli.seed)?;
            write_text(&cli.out, "data.csv", &ds.to_csv_string())?;
            println!("wrote data.csv ({n} rows)");
        }
    } else if let Some(ch) = &channel {
        write_text(&cli.out, "channel.json", &channel_to_json(ch, None))?;
        println!("wrote channel.json ({} -> {})", ch.n_rows(), ch.n_out());
    } else if args.battery {
        let n = args.sample.unwrap_or(6000);
        let ds = battery_dataset(n, cli.seed)?;
        write_text(&cli.out, "data.csv", &ds.to_csv_string())?;
        println!("wrote data.csv ({n} battery rows)");
    } else if args.sample.is_some() {
        return Err(Error::Parse(
            "--sample needs a joint generator to draw from".into(),
        ));
    }

    manifest.finish();
    manifest.write(&cli.out)?;
    Ok(0)
}

fn cmd_certify(cli: &Cli, args: &CertifyArgs) -> Result<i32> {
    let joint_text = read_to_string(&args.joint)?;
    let channel_text = read_to_string(&args.channel)?;
    let jxy = joint_from_json(&joint_text)?;
    let ch = channel_from_json(&channel_text)?;

    let mut entries = vec![
        ("joint", bytes_digest(joint_text.as_bytes())),
        ("channel", bytes_digest(channel_text.as_bytes())),
        ("tolerance", format!("{:e}", cli.tolerance)),
    ];
    if let Some(g) = args.gamma {
        entries.push(("gamma", format!("{g}")));
    }
    let mut manifest = RunManifest::start("certify", cli.seed, entries.iter().cloned());

    let report: LeakageReport = theorem_report(&jxy, &ch)?;
    let certification: Option<CertOutcome> = match args.gamma {
        Some(g) => Some(certify_lpp(&jxy, &ch, CertBudget::new(g)?, cli.tolerance)?),
        None => None,
    };

    let bundle = serde_json::json!({
        "report": report,
        "certification": certification,
    });
    write_json_rounded(&cli.out, "report.json", &bundle)?;
    manifest.finish();
    manifest.write(&cli.out)?;

    let flags_pass = report.all_flags_pass();
    println!(
        "gamma_lpp = {:.6}  gamma_ulpp = {:.6}  epsilon_ldp = {:.6}",
        report.gamma_lpp.0, report.gamma_ulpp.0, report.epsilon_ldp.epsilon.0
    );
    for flag in &report.theorem_flags {
        println!("  {} {}", verdict(flag.pass), flag.name);
    }
    if !flags_pass {
        println!("{}: internal invariant violated", verdict(false));
        return Ok(3);
    }
    if let Some(cert) = &certification {
        println!(
            "certification vs budget {:.6}: {} (achieved {:.6})",
            cert.budget,
            verdict(cert.pass),
            cert.achieved.0
        );
        if !cert.pass {
            return Ok(1);
        }
    }
    Ok(0)
}

/// Highest off-diagonal delta_adv attribute for each task row.
fn top_attributes(matrix: &AuditMatrix) -> Vec<(String, String, f64)> {
    let mut tops = Vec::new();
    for task in &matrix.tasks {
        let mut best: Option<(&str, f64)> = None;
        for sens in &matrix.sensitives {
            let cell = matrix.cell(task, sens).expect("grid is complete");
            if cell.diagonal {
                continue;
            }
            if best.is_none_or(|(_, d)| cell.delta_adv > d) {
                best = Some((sens, cell.delta_adv));
            }
        }
        if let Some((sens, delta)) = best {
            tops.push((task.clone(), sens.to_string(), delta));
        }
    }
    tops
}

fn heatmap_from_matrix(matrix: &AuditMatrix, title: &str) -> Result<String> {
    let values: Vec<f64> = matrix.cells.iter().map(|c| c.delta_adv).collect();
    let spec = HeatmapSpec::new(
        title,
        matrix.tasks.clone(),
        matrix.sensitives.clone(),
        values,
    )?;
    render_heatmap_svg(&spec)
}

fn cmd_audit(cli: &Cli, args: &AuditArgs) -> Result<i32> {
    let data_text = read_to_string(&args.data)?;
    let ds = Dataset::from_csv_str(&data_text)?;
    for col in args.task.iter().chain(&args.sensitive) {
        ds.column(col)?;
    }
    if args.repeats == 0 {
        return Err(Error::EmptyInput("repeats"));
    }

    let repr_name = match args.repr {
        ReprKind::Columns => "columns",
        ReprKind::Erm => "erm",
        ReprKind::Grad => "grad",
    };
    let features = if args.features.is_empty() {
        ds.column_names()
            .into_iter()
            .map(str::to_string)
            .filter(|n| !args.task.contains(n) && !args.sensitive.contains(n))
            .collect()
    } else {
        args.features.clone()
    };

    let entries = [
        ("data", bytes_digest(data_text.as_bytes())),
        ("tasks", args.task.join(",")),
        ("sensitives", args.sensitive.join(",")),
        ("repr", repr_name.to_string()),
        ("features", features.join(",")),
        ("repeats", args.repeats.to_string()),
        ("k", args.k.to_string()),
        ("bins", args.bins.to_string()),
        ("epochs", args.epochs.to_string()),
        ("learning_rate", args.learning_rate.to_string()),
        ("lambda", args.lambda.to_string()),
    ];
    let mut manifest = RunManifest::start("audit", cli.seed, entries.iter().cloned());

    let base_cfg = TrainConfig {
        learning_rate: args.learning_rate,
        epochs: args.epochs,
        ..TrainConfig::default()
    };
    let learned = |censor_targets: HashMap<String, String>, lambda: f64, seed: u64| LearnedRepr {
        features: features.clone(),
        k: args.k,
        bins_per_dim: args.bins,
        base: TrainConfig {
            censor_lambda: lambda,
            seed,
            ..base_cfg.clone()
        },
        censor_targets,
    };

    let run_repeats = |targets: &HashMap<String, String>, lambda: f64| -> Result<AuditMatrix> {
        let mut mats = Vec::with_capacity(args.repeats);
        for r in 0..args.repeats {
            let seed_r = repeat_seed(cli.seed, r as u64);
            let split = split_dataset(&ds, seed_r)?;
            let mut provider: Box<dyn ReprProvider> = match args.repr {
                ReprKind::Columns => {
                    let cols: Vec<String> = if args.repr_columns.is_empty() {
                        ds.column_names()
                            .into_iter()
                            .filter(|n| n.starts_with("z_"))
                            .map(str::to_string)
                            .collect()
                    } else {
                        args.repr_columns.clone()
                    };
                    if cols.is_empty() {
                        return Err(Error::EmptyInput(
                            "representation columns (no z_ columns found)",
                        ));
                    }
                    Box::new(FixedColumns(cols))
                }
                ReprKind::Erm | ReprKind::Grad => {
                    Box::new(learned(targets.clone(), lambda, seed_r))
                }
            };
            mats.push(audit_matrix(
                &ds,
                &split,
                &args.task,
                &args.sensitive,
                provider.as_mut(),
            )?);
        }
        average_matrices(&mats)
    };

    let matrix = match args.repr {
        ReprKind::Columns => run_repeats(&HashMap::new(), 0.0)?,
        ReprKind::Erm => run_repeats(&HashMap::new(), 0.0)?,
        ReprKind::Grad => {
            let erm = run_repeats(&HashMap::new(), 0.0)?;
            let targets: HashMap<String, String> = top_attributes(&erm)
                .into_iter()
                .map(|(task, sens, _)| (task, sens))
                .collect();
            for (task, sens) in &targets {
                println!("task {task}: censoring {sens}");
            }
            run_repeats(&targets, args.lambda)?
        }
    };

    write_json_rounded(&cli.out, "matrix.json", &matrix)?;
    write_text(&cli.out, "matrix.csv", &matrix.to_csv_string())?;
    let title = format!("delta_adv ({repr_name})");
    write_text(
        &cli.out,
        "heatmap.svg",
        &heatmap_from_matrix(&matrix, &title)?,
    )?;
    manifest.finish();
    manifest.write(&cli.out)?;

    for (task, sens, delta) in top_attributes(&matrix) {
        println!("task {task}: max delta_adv attribute is {sens} ({delta:+.4} bits)");
    }
    Ok(0)
}

fn cmd_frontier(cli: &Cli, args: &FrontierArgs) -> Result<i32> {
    let joint_text = read_to_string(&args.joint)?;
    let jxy = joint_from_json(&joint_text)?;

    let mode = if args.enumerate {
        "enumerate"
    } else {
        "search"
    };
    let entries = [
        ("joint", bytes_digest(joint_text.as_bytes())),
        ("z_size", args.z_size.to_string()),
        ("mode", mode.to_string()),
        ("restarts", args.restarts.to_string()),
        ("steps", args.steps.to_string()),
    ];
    let mut manifest = RunManifest::start("frontier", cli.seed, entries.iter().cloned());

    let points = if args.enumerate {
        enumerate_deterministic(&jxy, args.z_size)?
    } else {
        search_channels(
            &jxy,
            &SearchConfig {
                z_size: args.z_size,
                restarts: args.restarts,
                steps_per_restart: args.steps,
                seed: cli.seed,
                ..SearchConfig::default()
            },
        )?
    };

    let posterior = posterior_positivity(&jxy)?;
    let outcome = feasibility_check(&points, &posterior);

    write_text(&cli.out, "frontier.csv", &points_to_csv(&points))?;
    let title = format!("feasible region ({mode}, z={})", args.z_size);
    write_text(
        &cli.out,
        "frontier.svg",
        &render_frontier_svg(&points, &title)?,
    )?;
    write_json_rounded(&cli.out, "feasibility.json", &outcome)?;
    manifest.finish();
    manifest.write(&cli.out)?;

    println!(
        "{} points, worst residual {:+.3e} ({})",
        points.len(),
        outcome.worst_residual,
        if outcome.assumption_met {
            "positivity holds"
        } else {
            "positivity not met"
        }
    );
    if !outcome.pass {
        println!("{}: point above the diagonal", verdict(false));
        return Ok(3);
    }
    Ok(0)
}

fn cmd_replab(cli: &Cli, args: &ReplabArgs) -> Result<i32> {
    let data_text = read_to_string(&args.data)?;
    let ds = Dataset::from_csv_str(&data_text)?;
    let features: Vec<String> = if args.features.is_empty() {
        ds.column_names()
            .into_iter()
            .filter(|n| *n != args.task)
            .map(str::to_string)
            .collect()
    } else {
        args.features.clone()
    };

    let entries = [
        ("data", bytes_digest(data_text.as_bytes())),
        ("task", args.task.clone()),
        ("features", features.join(",")),
        ("k", args.k.to_string()),
        ("bins", args.bins.to_string()),
        ("epochs", args.epochs.to_string()),
        ("learning_rate", args.learning_rate.to_string()),
        ("lambda", args.lambda.to_string()),
        (
            "censor_target",
            args.censor_target.clone().unwrap_or_default(),
        ),
    ];
    let mut manifest = RunManifest::start("replab", cli.seed, entries.iter().cloned());

    let cfg = TrainConfig {
        learning_rate: args.learning_rate,
        epochs: args.epochs,
        censor_lambda: args.lambda,
        censor_target: args.censor_target.clone(),
        seed: cli.seed,
        ..TrainConfig::default()
    };
    let split = split_dataset(&ds, cli.seed)?;
    let model = if args.lambda > 0.0 {
        if args.censor_target.is_none() {
            return Err(Error::Parse("--lambda > 0 needs --censor-target".into()));
        }
        train_encoder_censored(&ds, &split, &features, &args.task, args.k, &cfg)?
    } else {
        train_encoder_erm(&ds, &split, &features, &args.task, args.k, &cfg)?
    };

    let quantizer = fit_quantizer(&model.encoder, &ds, &split.train_idx, args.bins)?;
    let columns = export_representations(&model.encoder, &ds, &quantizer)?;
    let mut exported = ds.clone();
    for col in columns {
        exported.add_column(col)?;
    }

    let accuracy = lpaudit::replab::eval_accuracy(&model, &ds, &args.task, &split.eval_idx)?;

    let bundle = serde_json::json!({
        "model": model,
        "quantizer": quantizer,
    });
    write_json_rounded(&cli.out, "model.json", &bundle)?;
    write_text(&cli.out, "representations.csv", &exported.to_csv_string())?;
    manifest.finish();
    manifest.write(&cli.out)?;

    println!(
        "trained {} epochs, eval accuracy {accuracy:.4}, wrote model.json and representations.csv",
        args.epochs
    );
    Ok(0)
}

fn parse_frontier_csv(text: &str) -> Result<Vec<FrontierPoint>> {
    let mut points = Vec::new();
    let mut lines = text.lines();
    let header = lines.next().ok_or(Error::EmptyInput("frontier csv"))?;
    let expected = "gamma_lpp,gamma_ulpp,utility_i1,utility_iinf,provenance,channel_digest";
    if header.trim() != expected {
        return Err(Error::Parse(format!(
            "unexpected frontier header: {header}"
        )));
    }
    for (i, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 6 {
            return Err(Error::Parse(format!("frontier row {} malformed", i + 2)));
        }
        let num = |s: &str| -> Result<f64> {
            s.trim()
                .parse::<f64>()
                .map_err(|e| Error::Parse(format!("frontier row {}: {e}", i + 2)))
        };
        let provenance = match fields[4].trim() {
            "enumerated" => Provenance::Enumerated,
            "searched" => Provenance::Searched,
            other => {
                return Err(Error::Parse(format!("unknown provenance '{other}'")));
            }
        };
        points.push(FrontierPoint {
            gamma_lpp: num(fields[0])?,
            gamma_ulpp: num(fields[1])?,
            utility_i1: num(fields[2])?,
            utility_iinf: num(fields[3])?,
            provenance,
            channel_digest: fields[5].trim().to_string(),
        });
    }
    Ok(points)
}

fn cmd_report(cli: &Cli, args: &ReportArgs) -> Result<i32> {
    let mut entries: Vec<(&str, String)> = Vec::new();
    let mut rendered = Vec::new();

    let matrix_text = args
        .matrix
        .as_ref()
        .map(|p| read_to_string(p))
        .transpose()?;
    let frontier_text = args
        .frontier
        .as_ref()
        .map(|p| read_to_string(p))
        .transpose()?;
    if let Some(text) = &matrix_text {
        entries.push(("matrix", bytes_digest(text.as_bytes())));
    }
    if let Some(text) = &frontier_text {
        entries.push(("frontier", bytes_digest(text.as_bytes())));
    }
    let mut manifest = RunManifest::start("report", cli.seed, entries.iter().cloned());

    if let Some(text) = &matrix_text {
        let matrix: AuditMatrix = serde_json::from_str(text)?;
        write_text(
            &cli.out,
            "heatmap.svg",
            &heatmap_from_matrix(&matrix, "delta_adv")?,
        )?;
        rendered.push("heatmap.svg");
    }
    if let Some(text) = &frontier_text {
        let points = parse_frontier_csv(text)?;
        write_text(
            &cli.out,
            "frontier.svg",
            &render_frontier_svg(&points, "feasible region")?,
        )?;
        rendered.push("frontier.svg");
    }

    manifest.finish();
    manifest.write(&cli.out)?;
    println!("rendered {}", rendered.join(", "));
    Ok(0)
}
