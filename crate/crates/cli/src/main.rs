use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use alphaleak::capacity::SolverOptions;
use alphaleak::leakage::Method;
use alphaleak::prob::io::{parse_channel, parse_distribution};
use alphaleak::theorems::{instance_seeds, TheoremSuite, TheoremVerdict, Witness};
use alphaleak::{
    alpha_leakage, arimoto_cond_entropy, arimoto_mi, joint_from, maximal_alpha_leakage_with, maxl, product_channel,
    renyi_divergence, renyi_entropy, sibson_mi, AlphaOrder, Channel, Distribution, LeakageError,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

mod format;

use format::{render_alpha, significant};

const EXIT_INVALID: u8 = 2;
const EXIT_ALPHA: u8 = 3;
const EXIT_NOT_CONVERGED: u8 = 4;
const EXIT_VERDICT_FAILED: u8 = 5;
const EXIT_NOT_MONOTONE: u8 = 6;

/// Tolerance for the monotonicity check of sweeps.
const MONOTONE_TOL: f64 = 1e-9;

#[derive(Parser)]
#[command(name = "alphaleak", version, about = "Tunable information leakage for finite discrete channels")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one measure at one or more orders.
    Compute {
        measure: Measure,
        #[command(flatten)]
        common: Common,
        /// Also print solver diagnostics as `key = value` lines.
        #[arg(long)]
        diagnostics: bool,
    },
    /// Evaluate a measure over a grid of orders and emit CSV.
    Sweep {
        #[arg(default_value = "max-alpha-leakage")]
        measure: Measure,
        #[command(flatten)]
        common: Common,
        /// Exit with status 4 if any solver call fails to converge.
        #[arg(long)]
        strict: bool,
    },
    /// Run the property checks on random instances, witness files, or the
    /// given channels.
    Verify {
        /// Witness or verdict files (JSON or JSON lines) to replay.
        instances: Vec<PathBuf>,
        /// Number of random instances.
        #[arg(long)]
        random: Option<usize>,
        /// Run a single check on the channels given with --channel.
        #[arg(long)]
        check: Option<CheckName>,
        /// Target input distribution for the shatter check.
        #[arg(long)]
        target: Option<PathBuf>,
        /// Copies per input symbol for the shatter check.
        #[arg(long, value_delimiter = ',')]
        copies: Vec<usize>,
        /// Mixture weights for the quasi-convexity check.
        #[arg(long, value_delimiter = ',', default_value = "0,0.25,0.5,0.75,1")]
        lambdas: Vec<f64>,
        /// Random output distributions tried by the Sibson infimum check.
        #[arg(long, default_value_t = 200)]
        trials: usize,
        /// Directory receiving the witness file when a check fails.
        #[arg(long, default_value = ".")]
        witness_dir: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Leakage budget of several releases of the same input.
    Compose {
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args)]
struct Common {
    /// Channel file (CSV or JSON). Repeat for commands taking several.
    #[arg(long)]
    channel: Vec<PathBuf>,
    /// Input distribution file. Defaults to uniform. For renyi-entropy and
    /// renyi-div this is the distribution P.
    #[arg(long)]
    prior: Option<PathBuf>,
    /// Reference distribution Q for renyi-div.
    #[arg(long)]
    q: Option<PathBuf>,
    /// Orders, comma separated; `inf` for infinity.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    alpha: Vec<String>,
    /// Logarithmic grid `start:stop:points`.
    #[arg(long, conflicts_with = "alpha")]
    alpha_grid: Option<String>,
    /// Report values in bits (the default)
    #[arg(long, conflicts_with = "nats")]
    bits: bool,
    /// Report values in nats
    #[arg(long)]
    nats: bool,
    /// Frank-Wolfe gap at which the capacity solver stops.
    #[arg(long)]
    tol: Option<f64>,
    /// Iteration cap for each capacity solver run.
    #[arg(long)]
    max_iterations: Option<usize>,
    /// Solver restart seed; instance seed for `verify --random`.
    #[arg(long)]
    seed: Option<u64>,
    /// Write to this file instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Measure {
    RenyiEntropy,
    RenyiDiv,
    Sibson,
    Arimoto,
    CondEntropy,
    AlphaLeakage,
    MaxAlphaLeakage,
    Maxl,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CheckName {
    Quasiconvexity,
    Dpi,
    Composition,
    Bounds,
    SibsonInfimum,
    Shatter,
}

#[derive(Clone, Copy)]
enum Units {
    Nats,
    Bits,
}

impl Units {
    fn convert(self, nats: f64) -> f64 {
        match self {
            Units::Nats => nats,
            Units::Bits => nats / std::f64::consts::LN_2,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Units::Nats => "nats",
            Units::Bits => "bits",
        }
    }
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn invalid(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_INVALID,
            message: message.into(),
        }
    }
}

impl From<LeakageError> for Failure {
    fn from(e: LeakageError) -> Self {
        let code = match e {
            LeakageError::AlphaOutOfRange(_) => EXIT_ALPHA,
            _ => EXIT_INVALID,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

/// Resolved inputs shared by every command.
struct RunConfig {
    channels: Vec<Channel>,
    prior: Option<Distribution>,
    q: Option<Distribution>,
    alphas: Vec<AlphaOrder>,
    units: Units,
    solver: SolverOptions,
    seed: u64,
    output: Option<PathBuf>,
}

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| Failure::invalid(format!("{}: {e}", path.display())))
}

fn in_file<T>(path: &Path, r: alphaleak::Result<T>) -> CliResult<T> {
    r.map_err(|e| {
        let mut f = Failure::from(e);
        f.message = format!("{}: {}", path.display(), f.message);
        f
    })
}

fn load_distribution(path: &Path) -> CliResult<Distribution> {
    in_file(path, parse_distribution(&read(path)?))
}

fn parse_alpha(text: &str) -> CliResult<AlphaOrder> {
    Ok(text.parse::<AlphaOrder>()?)
}

fn parse_grid(spec: &str) -> CliResult<Vec<AlphaOrder>> {
    let parts: Vec<&str> = spec.split(':').collect();
    let [start, stop, points] = parts.as_slice() else {
        return Err(Failure::invalid(format!("alpha grid must be start:stop:points, got {spec:?}")));
    };
    let num = |s: &str| {
        s.trim()
            .parse::<f64>()
            .map_err(|_| Failure::invalid(format!("not a number in alpha grid: {s:?}")))
    };
    let (start, stop) = (num(start)?, num(stop)?);
    let points: usize = points
        .trim()
        .parse()
        .map_err(|_| Failure::invalid(format!("not a point count: {points:?}")))?;
    if points == 0 {
        return Err(Failure::invalid("alpha grid needs at least one point"));
    }
    for v in [start, stop] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(LeakageError::AlphaOutOfRange(v).into());
        }
    }
    let (ls, le) = (start.ln(), stop.ln());
    (0..points)
        .map(|i| {
            let v = match i {
                0 => start,
                _ if i + 1 == points => stop,
                _ => (ls + (le - ls) * i as f64 / (points - 1) as f64).exp(),
            };
            Ok(AlphaOrder::new(v)?)
        })
        .collect()
}

impl RunConfig {
    fn from_common(c: &Common) -> CliResult<Self> {
        let mut channels = Vec::new();
        for path in &c.channel {
            channels.push(in_file(path, parse_channel(&read(path)?))?);
        }
        let alphas = match &c.alpha_grid {
            Some(grid) => parse_grid(grid)?,
            None => c.alpha.iter().map(|a| parse_alpha(a)).collect::<CliResult<_>>()?,
        };
        let mut solver = SolverOptions::default();
        if let Some(tol) = c.tol {
            if tol.is_nan() || tol <= 0.0 {
                return Err(Failure::invalid("--tol must be positive"));
            }
            solver.kkt_tol = tol;
        }
        if let Some(cap) = c.max_iterations {
            solver.max_iterations = cap;
        }
        if let Some(seed) = c.seed {
            solver.seed = seed;
        }
        Ok(RunConfig {
            channels,
            prior: c.prior.as_deref().map(load_distribution).transpose()?,
            q: c.q.as_deref().map(load_distribution).transpose()?,
            alphas,
            units: if c.nats { Units::Nats } else { Units::Bits },
            solver,
            seed: c.seed.unwrap_or(0),
            output: c.output.clone(),
        })
    }

    fn channel(&self) -> CliResult<&Channel> {
        match self.channels.as_slice() {
            [w] => Ok(w),
            [] => Err(Failure::invalid("--channel is required")),
            _ => Err(Failure::invalid("exactly one --channel is expected")),
        }
    }

    fn prior_for(&self, channel: &Channel) -> CliResult<Distribution> {
        match &self.prior {
            Some(p) => Ok(p.clone()),
            None => Ok(Distribution::uniform(channel.in_size())?),
        }
    }

    fn alphas_or(&self, default: AlphaOrder) -> Vec<AlphaOrder> {
        if self.alphas.is_empty() {
            vec![default]
        } else {
            self.alphas.clone()
        }
    }

    fn emit(&self, text: &str) -> CliResult<()> {
        match &self.output {
            Some(path) => fs::write(path, text).map_err(|e| Failure::invalid(format!("{}: {e}", path.display()))),
            None => {
                let mut out = std::io::stdout().lock();
                out.write_all(text.as_bytes())
                    .and_then(|_| out.flush())
                    .map_err(|e| Failure::invalid(e.to_string()))
            }
        }
    }
}

struct Evaluation {
    nats: f64,
    converged: bool,
    diagnostics: BTreeMap<String, f64>,
}

impl From<f64> for Evaluation {
    fn from(nats: f64) -> Self {
        Evaluation {
            nats,
            converged: true,
            diagnostics: BTreeMap::new(),
        }
    }
}

fn evaluate(cfg: &RunConfig, measure: Measure, alpha: AlphaOrder) -> CliResult<Evaluation> {
    let leakage_checked = |a: AlphaOrder| a.is_leakage_order().then_some(a).ok_or(LeakageError::AlphaOutOfRange(a.value()));
    Ok(match measure {
        Measure::RenyiEntropy => {
            let p = cfg.prior.as_ref().ok_or_else(|| Failure::invalid("--prior is required"))?;
            renyi_entropy(p, alpha).nats.into()
        }
        Measure::RenyiDiv => {
            let p = cfg.prior.as_ref().ok_or_else(|| Failure::invalid("--prior (P) is required"))?;
            let q = cfg.q.as_ref().ok_or_else(|| Failure::invalid("--q is required"))?;
            renyi_divergence(p, q, alpha)?.nats.into()
        }
        Measure::Sibson => {
            let w = cfg.channel()?;
            sibson_mi(&cfg.prior_for(w)?, w, alpha)?.nats.into()
        }
        Measure::Arimoto => {
            let w = cfg.channel()?;
            arimoto_mi(&cfg.prior_for(w)?, w, alpha)?.nats.into()
        }
        Measure::CondEntropy => {
            let w = cfg.channel()?;
            arimoto_cond_entropy(&joint_from(&cfg.prior_for(w)?, w)?, alpha).nats.into()
        }
        Measure::AlphaLeakage => {
            let w = cfg.channel()?;
            let r = alpha_leakage(&cfg.prior_for(w)?, w, leakage_checked(alpha)?, Method::OperationalRatio)?;
            Evaluation {
                nats: r.nats,
                converged: true,
                diagnostics: r.diagnostics,
            }
        }
        Measure::MaxAlphaLeakage => {
            let w = cfg.channel()?;
            let r = maximal_alpha_leakage_with(&cfg.prior_for(w)?, w, leakage_checked(alpha)?, &cfg.solver)?;
            let mut diagnostics = r.diagnostics;
            for (x, p) in r.argmax_input.probs().iter().enumerate() {
                diagnostics.insert(format!("argmax[{x}]"), *p);
            }
            Evaluation {
                nats: r.nats,
                converged: r.converged,
                diagnostics,
            }
        }
        Measure::Maxl => {
            let w = cfg.channel()?;
            maxl(w, cfg.prior_for(w)?.support())?.into()
        }
    })
}

fn measure_name(m: Measure) -> String {
    m.to_possible_value().expect("not skipped").get_name().to_string()
}

fn cmd_compute(cfg: &RunConfig, measure: Measure, diagnostics: bool) -> CliResult<()> {
    let mut out = String::new();
    let name = measure_name(measure);
    let orders = if measure == Measure::Maxl {
        vec![AlphaOrder::Infinity]
    } else if cfg.alphas.is_empty() {
        return Err(Failure::invalid("--alpha or --alpha-grid is required"));
    } else {
        cfg.alphas.clone()
    };
    for alpha in orders {
        let e = evaluate(cfg, measure, alpha)?;
        let label = match measure {
            Measure::Maxl => name.clone(),
            _ => format!("{name}(alpha={})", render_alpha(alpha)),
        };
        let note = if e.converged { "" } else { " (solver did not converge)" };
        out.push_str(&format!(
            "{label} = {} {}{note}\n",
            significant(cfg.units.convert(e.nats)),
            cfg.units.name()
        ));
        if diagnostics {
            for (k, v) in &e.diagnostics {
                out.push_str(&format!("  {k} = {}\n", significant(*v)));
            }
        }
    }
    cfg.emit(&out)
}

fn cmd_sweep(cfg: &RunConfig, measure: Measure, strict: bool) -> CliResult<u8> {
    if measure == Measure::Maxl {
        return Err(Failure::invalid("maxl does not depend on the order; use compute"));
    }
    if cfg.alphas.is_empty() {
        return Err(Failure::invalid("--alpha or --alpha-grid is required"));
    }
    let rows: Vec<(AlphaOrder, f64, bool)> = cfg
        .alphas
        .par_iter()
        .map(|&a| evaluate(cfg, measure, a).map(|e| (a, e.nats, e.converged)))
        .collect::<CliResult<_>>()?;

    let mut out = String::from("alpha,value_nats,value_bits,converged\n");
    for &(a, v, c) in &rows {
        out.push_str(&format!("{},{v},{},{c}\n", render_alpha(a), Units::Bits.convert(v)));
    }

    let mut code = 0;
    if measure == Measure::MaxAlphaLeakage {
        let mut sorted = rows.clone();
        sorted.sort_by(|x, y| x.0.value().total_cmp(&y.0.value()));
        if let Some(w) = sorted.windows(2).find(|w| w[1].1 < w[0].1 - MONOTONE_TOL) {
            let msg = format!(
                "value decreases from alpha={} to alpha={}",
                render_alpha(w[0].0),
                render_alpha(w[1].0)
            );
            out.push_str(&format!("# warning: {msg}\n"));
            eprintln!("warning: {msg}");
            code = EXIT_NOT_MONOTONE;
        }
    }
    cfg.emit(&out)?;
    if strict && rows.iter().any(|r| !r.2) {
        eprintln!("error: the capacity solver did not converge for every order");
        return Ok(EXIT_NOT_CONVERGED);
    }
    Ok(code)
}

fn witnesses_from_file(path: &Path) -> CliResult<Vec<Witness>> {
    let text = read(path)?;
    let parse = |chunk: &str, line: usize| -> CliResult<Witness> {
        let value: serde_json::Value = serde_json::from_str(chunk)
            .map_err(|e| Failure::invalid(format!("{}: line {line}: {e}", path.display())))?;
        let value = match value.get("witness") {
            Some(w) => w.clone(),
            None => value,
        };
        serde_json::from_value(value).map_err(|e| Failure::invalid(format!("{}: line {line}: {e}", path.display())))
    };
    if serde_json::from_str::<serde_json::Value>(&text).is_ok() {
        return Ok(vec![parse(&text, 1)?]);
    }
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| parse(l, i + 1))
        .collect()
}

struct VerifyArgs<'a> {
    instances: &'a [PathBuf],
    random: Option<usize>,
    check: Option<CheckName>,
    target: Option<&'a Path>,
    copies: &'a [usize],
    lambdas: &'a [f64],
    trials: usize,
    witness_dir: &'a Path,
}

fn direct_check(cfg: &RunConfig, suite: &TheoremSuite, check: CheckName, args: &VerifyArgs) -> CliResult<Vec<TheoremVerdict>> {
    let pair = || -> CliResult<(&Channel, &Channel)> {
        match cfg.channels.as_slice() {
            [a, b] => Ok((a, b)),
            _ => Err(Failure::invalid("this check takes two --channel files")),
        }
    };
    let mut out = Vec::new();
    for alpha in cfg.alphas_or(AlphaOrder::Finite(2.0)) {
        match check {
            CheckName::Quasiconvexity => {
                let (w0, w1) = pair()?;
                out.push(suite.check_quasiconvexity(w0, w1, &cfg.prior_for(w0)?, alpha, args.lambdas)?);
            }
            CheckName::Dpi => {
                let (w1, w2) = pair()?;
                let (a, b) = suite.check_dpi(w1, w2, &cfg.prior_for(w1)?, alpha)?;
                out.extend([a, b]);
            }
            CheckName::Composition => {
                let (w1, w2) = pair()?;
                out.push(suite.check_composition(w1, w2, &cfg.prior_for(w1)?, alpha)?);
            }
            CheckName::Bounds => {
                let w = cfg.channel()?;
                out.extend(suite.check_bounds(w, &cfg.prior_for(w)?, alpha)?);
            }
            CheckName::SibsonInfimum => {
                let w = cfg.channel()?;
                out.extend(suite.check_sibson_infimum(&cfg.prior_for(w)?, w, alpha, args.trials, cfg.seed)?);
            }
            CheckName::Shatter => {
                let w = cfg.channel()?;
                let prior = cfg.prior_for(w)?;
                let target = match args.target {
                    Some(p) => load_distribution(p)?,
                    None => prior.clone(),
                };
                let copies = if args.copies.is_empty() {
                    vec![1; w.in_size()]
                } else {
                    args.copies.to_vec()
                };
                out.push(suite.shatter_construction(&prior, w, &target, &copies, alpha)?.1);
            }
        }
    }
    Ok(out)
}

fn cmd_verify(cfg: &RunConfig, args: &VerifyArgs) -> CliResult<u8> {
    // --seed picks random instances here; the solver keeps its default
    // restart seed so that verdict files replay to the same values.
    let suite = TheoremSuite {
        solver: SolverOptions {
            seed: SolverOptions::default().seed,
            ..cfg.solver.clone()
        },
        ..TheoremSuite::default()
    };
    let mut verdicts = Vec::new();
    if let Some(n) = args.random {
        let batches: Vec<Vec<TheoremVerdict>> = instance_seeds(n, cfg.seed)
            .into_par_iter()
            .map(|s| suite.random_instance(s))
            .collect::<alphaleak::Result<_>>()?;
        verdicts.extend(batches.into_iter().flatten());
    }
    for path in args.instances {
        for w in witnesses_from_file(path)? {
            verdicts.extend(in_file(path, suite.replay(&w))?);
        }
    }
    if let Some(check) = args.check {
        verdicts.extend(direct_check(cfg, &suite, check, args)?);
    }
    if args.random.is_none() && args.instances.is_empty() && args.check.is_none() {
        return Err(Failure::invalid("give --random N, --check NAME, or instance files"));
    }

    let mut out = String::new();
    for v in &verdicts {
        out.push_str(&serde_json::to_string(v).expect("verdict serializes"));
        out.push('\n');
    }
    cfg.emit(&out)?;

    let failed: Vec<&TheoremVerdict> = verdicts.iter().filter(|v| !v.passed).collect();
    if failed.is_empty() {
        eprintln!("{} verdicts, all passed", verdicts.len());
        return Ok(0);
    }
    let path = args.witness_dir.join(format!("alphaleak-failed-{}.jsonl", failed[0].instance_digest));
    let body: String = failed
        .iter()
        .map(|v| serde_json::to_string(v).expect("verdict serializes") + "\n")
        .collect();
    fs::write(&path, body).map_err(|e| Failure::invalid(format!("{}: {e}", path.display())))?;
    eprintln!("{} of {} verdicts failed; witnesses written to {}", failed.len(), verdicts.len(), path.display());
    Ok(EXIT_VERDICT_FAILED)
}

fn cmd_compose(cfg: &RunConfig) -> CliResult<u8> {
    let (first, rest) = cfg
        .channels
        .split_first()
        .ok_or_else(|| Failure::invalid("compose needs at least one --channel"))?;
    let prior = cfg.prior_for(first)?;
    let mut joint = first.clone();
    for w in rest {
        joint = product_channel(&joint, w)?;
    }
    let units = cfg.units;
    let mut out = String::new();
    let mut code = 0;
    for alpha in cfg.alphas_or(AlphaOrder::Infinity) {
        if !alpha.is_leakage_order() {
            return Err(LeakageError::AlphaOutOfRange(alpha.value()).into());
        }
        let leak = |w: &Channel| -> CliResult<f64> { Ok(maximal_alpha_leakage_with(&prior, w, alpha, &cfg.solver)?.nats) };
        let parts: Vec<f64> = cfg.channels.iter().map(leak).collect::<CliResult<_>>()?;
        let bound: f64 = parts.iter().sum();
        let exact = leak(&joint)?;
        out.push_str(&format!("alpha={}\n", render_alpha(alpha)));
        for (i, p) in parts.iter().enumerate() {
            out.push_str(&format!("  release {}: {} {}\n", i + 1, significant(units.convert(*p)), units.name()));
        }
        out.push_str(&format!("  sum bound: {} {}\n", significant(units.convert(bound)), units.name()));
        out.push_str(&format!("  exact joint: {} {}\n", significant(units.convert(exact)), units.name()));
        if exact > bound + alphaleak::theorems::DEFAULT_SLACK {
            eprintln!("error: joint leakage exceeds the sum of the parts at alpha={}", render_alpha(alpha));
            code = EXIT_VERDICT_FAILED;
        }
    }
    cfg.emit(&out)?;
    Ok(code)
}

fn run(cli: Cli) -> CliResult<u8> {
    match &cli.command {
        Command::Compute {
            measure,
            common,
            diagnostics,
        } => {
            cmd_compute(&RunConfig::from_common(common)?, *measure, *diagnostics)?;
            Ok(0)
        }
        Command::Sweep { measure, common, strict } => cmd_sweep(&RunConfig::from_common(common)?, *measure, *strict),
        Command::Verify {
            instances,
            random,
            check,
            target,
            copies,
            lambdas,
            trials,
            witness_dir,
            common,
        } => cmd_verify(
            &RunConfig::from_common(common)?,
            &VerifyArgs {
                instances,
                random: *random,
                check: *check,
                target: target.as_deref(),
                copies,
                lambdas,
                trials: *trials,
                witness_dir,
            },
        ),
        Command::Compose { common } => cmd_compose(&RunConfig::from_common(common)?),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
