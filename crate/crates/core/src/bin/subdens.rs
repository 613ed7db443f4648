use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use subdens::experiments::{
    run_experiment, BernoulliEmptyConfig, ExperimentConfig, GroupSweepConfig, IntersectionConfig, MultidimConfig,
    SubsetModel, SweepSummary, TrivializationConfig,
};
use subdens::moments;
use subdens::multidim::TupleFamily;
use subdens::rng::SeedSpec;
use subdens::smallcancel::{max_piece_ratio, parse_presentation, satisfies_c_prime_with, thresholds, PieceRule};
use subdens::universe::{floor_pow, UniverseSize};
use subdens::words::{count_cyclically_reduced, enumerate_cyclically_reduced, WordSampler};
use subdens::Error;

#[derive(Parser)]
#[command(name = "subdens", version, about = "Random subsets with density and random group presentations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print closed-form moments and bounds as JSON.
    Moments(MomentsArgs),
    /// Count, list or sample cyclically reduced words.
    Words {
        #[command(subcommand)]
        command: WordsCommand,
    },
    /// Monte Carlo sweep of |A ∩ B| for random subsets.
    IntersectSim(IntersectArgs),
    /// Monte Carlo sweep of |A^(k) ∩ X| for a fixed tuple set X.
    MultidimSim(MultidimArgs),
    /// Presentations: C'(λ) checks and density sweeps.
    Group {
        #[command(subcommand)]
        command: GroupCommand,
    },
    /// Empty-sample frequency of Bernoulli subsets against the exact value.
    BernoulliEmpty(BernoulliArgs),
    /// Explicit density thresholds for ranks m.
    Thresholds(ThresholdArgs),
}

#[derive(Args)]
struct MomentsArgs {
    #[arg(long)]
    n: u64,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    /// Cardinality of A; defaults to ⌊n^alpha⌋.
    #[arg(long)]
    ka: Option<u64>,
    /// Cardinality of B; defaults to ⌊n^beta⌋.
    #[arg(long)]
    kb: Option<u64>,
    #[arg(long)]
    d: Option<f64>,
    /// Tuple size for inclusion probabilities.
    #[arg(long)]
    r: Option<u64>,
    #[arg(long, default_value_t = 0.5)]
    c: f64,
    #[arg(long, default_value_t = 0.05)]
    eps: f64,
}

#[derive(Subcommand)]
enum WordsCommand {
    Count {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        ell: usize,
    },
    /// Words of length exactly ell, one per line.
    Enumerate {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        ell: usize,
    },
    /// Uniform draws from the words of length at most ell.
    Sample {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        ell: usize,
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args)]
struct Output {
    /// JSON config file; flags given on the command line override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    trials: Option<u32>,
    #[arg(long)]
    seed: Option<u64>,
    /// CSV destination; the summary goes next to it with a .json extension.
    /// Without it the CSV is printed.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelArg {
    Uniform,
    Bernoulli,
    Mixture,
}

#[derive(Args)]
struct IntersectArgs {
    #[command(flatten)]
    output: Output,
    #[arg(long, value_delimiter = ',')]
    n: Option<Vec<u64>>,
    #[arg(long, value_delimiter = ',')]
    alpha: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    beta: Option<Vec<f64>>,
    #[arg(long, value_enum)]
    model: Option<ModelArg>,
    #[arg(long)]
    epsilon: Option<f64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Full,
    Star,
    RandomFixed,
}

#[derive(Args)]
struct MultidimArgs {
    #[command(flatten)]
    output: Output,
    #[arg(long, value_delimiter = ',')]
    n: Option<Vec<u64>>,
    #[arg(long, value_delimiter = ',')]
    d: Option<Vec<f64>>,
    #[arg(long, value_enum)]
    family: Option<FamilyArg>,
    #[arg(long, default_value_t = 2)]
    k: usize,
    /// Density of a random fixed X inside E^(k).
    #[arg(long, default_value_t = 0.9)]
    alpha: f64,
    /// Seed fixing a random X.
    #[arg(long, default_value_t = 0)]
    x_seed: u64,
    #[arg(long)]
    epsilon: Option<f64>,
}

#[derive(Subcommand)]
enum GroupCommand {
    /// Check C'(λ) for a presentation file (`rank m`, then one relator per line).
    Check {
        #[arg(long)]
        presentation: PathBuf,
        #[arg(long)]
        lambda: f64,
    },
    Sweep(SweepArgs),
    Trivialize(SweepArgs),
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    output: Output,
    #[arg(long)]
    m: Option<u32>,
    #[arg(long, value_delimiter = ',')]
    ell: Option<Vec<usize>>,
    #[arg(long, value_delimiter = ',')]
    d: Option<Vec<f64>>,
    #[arg(long)]
    lambda: Option<f64>,
}

#[derive(Args)]
struct BernoulliArgs {
    #[command(flatten)]
    output: Output,
    #[arg(long, value_delimiter = ',')]
    n: Option<Vec<u64>>,
    #[arg(long, value_delimiter = ',')]
    d: Option<Vec<f64>>,
}

#[derive(Args)]
struct ThresholdArgs {
    #[arg(long, value_delimiter = ',', default_value = "2")]
    m: Vec<u32>,
    #[arg(long, default_value_t = 0.0)]
    eps: f64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        // downstream closed the pipe (`| head`); nothing left to report
        Err(Error::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Io(_) | Error::Csv(_) => ExitCode::from(1),
                _ => ExitCode::from(2),
            }
        }
    }
}

fn emit(text: &str) -> Result<(), Error> {
    let mut out = io::stdout().lock();
    out.write_all(text.as_bytes())?;
    out.flush()?;
    Ok(())
}

fn print_json(v: &Value) -> Result<(), Error> {
    emit(&(serde_json::to_string_pretty(v)? + "\n"))
}

fn run(command: Command) -> Result<(), Error> {
    match command {
        Command::Moments(a) => print_json(&moments_report(&a)?),
        Command::Words { command } => words(command),
        Command::IntersectSim(a) => {
            let mut set = Map::new();
            put(&mut set, "n", a.n);
            put(&mut set, "alpha", a.alpha);
            put(&mut set, "beta", a.beta);
            put(&mut set, "epsilon", a.epsilon);
            put(
                &mut set,
                "model",
                a.model.map(|m| match m {
                    ModelArg::Uniform => SubsetModel::Uniform,
                    ModelArg::Bernoulli => SubsetModel::Bernoulli,
                    ModelArg::Mixture => SubsetModel::Mixture,
                }),
            );
            let cfg: IntersectionConfig = build_config(&a.output, set)?;
            sweep(ExperimentConfig::Intersection(cfg), &a.output)
        }
        Command::MultidimSim(a) => {
            let mut set = Map::new();
            put(&mut set, "n", a.n);
            put(&mut set, "d", a.d);
            put(&mut set, "epsilon", a.epsilon);
            put(
                &mut set,
                "family",
                a.family.map(|f| match f {
                    FamilyArg::Full => TupleFamily::Full { k: a.k },
                    FamilyArg::Star => TupleFamily::Star { center: 0 },
                    FamilyArg::RandomFixed => TupleFamily::RandomFixed { k: a.k, alpha: a.alpha, seed: a.x_seed },
                }),
            );
            let cfg: MultidimConfig = build_config(&a.output, set)?;
            sweep(ExperimentConfig::Multidim(cfg), &a.output)
        }
        Command::Group { command } => group(command),
        Command::BernoulliEmpty(a) => {
            let mut set = Map::new();
            put(&mut set, "n", a.n);
            put(&mut set, "d", a.d);
            let cfg: BernoulliEmptyConfig = build_config(&a.output, set)?;
            sweep(ExperimentConfig::BernoulliEmpty(cfg), &a.output)
        }
        Command::Thresholds(a) => {
            let rows = a.m.iter().map(|&m| thresholds(m, a.eps)).collect::<Result<Vec<_>, _>>()?;
            if let Some(bad) = rows.iter().find(|t| !t.all_hold()) {
                return Err(Error::Domain(format!("threshold inequalities fail for m = {}", bad.m)));
            }
            print_json(&json!(rows))
        }
    }
}

fn put<T: serde::Serialize>(map: &mut Map<String, Value>, key: &str, v: Option<T>) {
    if let Some(v) = v {
        map.insert(key.to_string(), serde_json::to_value(v).expect("plain data"));
    }
}

/// Merges the config file (if any) with flag overrides and deserializes.
fn build_config<T: serde::de::DeserializeOwned>(out: &Output, mut set: Map<String, Value>) -> Result<T, Error> {
    let mut base = match &out.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
            match serde_json::from_str::<Value>(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))? {
                Value::Object(m) => m,
                _ => return Err(Error::Config("config file must hold a JSON object".into())),
            }
        }
        None => Map::new(),
    };
    base.remove("kind");
    put(&mut set, "trials", out.trials);
    put(&mut set, "seed", out.seed);
    base.extend(set);
    serde_json::from_value(Value::Object(base)).map_err(|e| Error::Config(e.to_string()))
}

fn sweep(cfg: ExperimentConfig, out: &Output) -> Result<(), Error> {
    let summary = run_experiment(&cfg)?;
    for w in &summary.warnings {
        eprintln!("warning: {w}");
    }
    write_outputs(&summary, out.out.as_deref())
}

fn write_outputs(summary: &SweepSummary, out: Option<&Path>) -> Result<(), Error> {
    match out {
        Some(path) => {
            fs::write(path, summary.csv_string()?)?;
            fs::write(path.with_extension("json"), summary.summary_json()?)?;
        }
        None => emit(&summary.csv_string()?)?,
    }
    Ok(())
}

fn moments_report(a: &MomentsArgs) -> Result<Value, Error> {
    let n = UniverseSize::new(a.n)?;
    let mut out = Map::new();
    out.insert("n".into(), json!(a.n));
    let ka = a.ka.or(a.alpha.map(|x| floor_pow(a.n, x)));
    let kb = a.kb.or(a.beta.map(|x| floor_pow(a.n, x)));
    if let (Some(ka), Some(kb)) = (ka, kb) {
        let m = moments::intersection_moments_uniform(n, ka, kb)?;
        out.insert(
            "intersection_uniform".into(),
            json!({ "ka": ka, "kb": kb, "mean": m.mean, "variance": m.variance }),
        );
    }
    if let (Some(alpha), Some(beta)) = (a.alpha, a.beta) {
        let (lo, hi) = moments::intersection_mean_bracket(n, alpha, beta);
        let mut bounds = json!({
            "mean_bracket": [lo, hi],
            "variance_ceiling": moments::intersection_variance_ceiling(n, alpha, beta),
        });
        if alpha + beta > 1.0 {
            bounds["tail_bound"] = json!(moments::uniform_tail_bound(n, alpha, beta, a.c)?);
            bounds["tail_threshold"] = json!(moments::uniform_tail_threshold(alpha, beta, a.c)?);
            if a.eps < alpha + beta - 1.0 {
                bounds["window_tail_bound"] = json!(moments::window_tail_bound(n, alpha, beta, a.eps)?);
            }
        }
        out.insert("bounds".into(), bounds);
    }
    if let Some(d) = a.d {
        out.insert("bernoulli".into(), json!(moments::bernoulli_moments(n, d)?));
    }
    if let Some(r) = a.r {
        let k = ka
            .or(a.d.map(|d| floor_pow(a.n, d)))
            .ok_or_else(|| Error::Config("--r needs a cardinality via --ka, --alpha or --d".into()))?;
        out.insert("inclusion".into(), json!({ "k": k, "r": r, "p": moments::uniform_inclusion_prob(n, k, r)? }));
        if let Some(d) = a.d {
            if d > 0.0 && d < 1.0 && a.eps > 0.0 && a.eps < d {
                let kk = r.div_ceil(2).max(1);
                out.insert("sandwich".into(), json!(moments::check_uniform_include_sandwich(n, d, a.eps, kk)?));
            }
        }
    }
    Ok(Value::Object(out))
}

fn words(command: WordsCommand) -> Result<(), Error> {
    match command {
        WordsCommand::Count { m, ell } => {
            let t = count_cyclically_reduced(m, ell)?;
            let rows: Vec<Value> = (1..=ell)
                .map(|i| json!({ "t": i, "exact": t.exact(i).to_string(), "ball": t.ball(i).to_string() }))
                .collect();
            print_json(&json!({ "m": m, "rows": rows, "sandwich_holds": t.sandwich_holds() }))
        }
        WordsCommand::Enumerate { m, ell } => {
            let words: Vec<String> = enumerate_cyclically_reduced(m, ell)?.iter().map(|w| format!("{w}\n")).collect();
            emit(&words.concat())
        }
        WordsCommand::Sample { m, ell, count, seed } => {
            let sampler = WordSampler::new(m, ell)?;
            let mut rng = SeedSpec::new(seed, 0).rng();
            let words: Vec<String> = (0..count).map(|_| format!("{}\n", sampler.sample(&mut rng))).collect();
            emit(&words.concat())
        }
    }
}

fn group(command: GroupCommand) -> Result<(), Error> {
    match command {
        GroupCommand::Check { presentation, lambda } => {
            let text = fs::read_to_string(&presentation)
                .map_err(|e| Error::Config(format!("{}: {e}", presentation.display())))?;
            let r = parse_presentation(&text)?;
            let classical = satisfies_c_prime_with(&r, lambda, PieceRule::Classical)?;
            let non_strict = satisfies_c_prime_with(&r, lambda, PieceRule::NonStrict)?;
            let report = max_piece_ratio(&r);
            print_json(&json!({
                "rank": r.rank(),
                "relators": r.len(),
                "lambda": lambda,
                "classical": classical,
                "non_strict": non_strict,
                "pieces": report,
            }))
        }
        GroupCommand::Sweep(a) => {
            let cfg: GroupSweepConfig = build_config(&a.output, sweep_overrides(&a))?;
            sweep(ExperimentConfig::GroupCprimeSweep(cfg), &a.output)
        }
        GroupCommand::Trivialize(a) => {
            let cfg: TrivializationConfig = build_config(&a.output, sweep_overrides(&a))?;
            sweep(ExperimentConfig::TrivializationSweep(cfg), &a.output)
        }
    }
}

fn sweep_overrides(a: &SweepArgs) -> Map<String, Value> {
    let mut set = Map::new();
    put(&mut set, "m", a.m);
    put(&mut set, "ell", a.ell.clone());
    put(&mut set, "d", a.d.clone());
    put(&mut set, "lambda", a.lambda);
    set
}
