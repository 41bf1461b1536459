//! `ckn`: classify weighted embeddings, list admissible sets, and run numerical probes.
//!
//! Exit codes: 0 embeds (or the check passed), 1 does not embed, 2 input error,
//! 3 the numerical probe disagrees with the classifier or could not settle the case.

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use ckn::classifier::{
    admissible_set, admissible_set_radial, classify, classify_radial, classify_w0, multiweight_classify, theta_set,
    AdmissibleSet, Decision, MultiWeightSpec, ThetaSet, ThetaSetError, Verdict, W0Decision, W0Verdict,
};
use ckn::exact::{Params, Rational, SpaceParams};
use ckn::exec::Execution;
use ckn::functions::witness_for;
use ckn::quadrature::{
    default_family, falsify_instance, falsify_multiplicative, first_harmonic_family, verify_instance,
    verify_w0_instance, ProbeError, QuadratureConfig, DEFAULT_SCALES,
};
use ckn::sweep::{run_sweep, OutputFormat, SweepRow, SweepSpec};

#[derive(Parser)]
#[command(name = "ckn", version, about = "Weighted Sobolev embeddings and Caffarelli-Kohn-Nirenberg inequalities")]
struct Cli {
    /// Run probes and sweeps on the calling thread only.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether the embedding holds.
    Classify(ClassifyArgs),
    /// The set of target weights c for which the embedding holds.
    Interval(IntervalArgs),
    /// Exponents θ for which the multiplicative inequality holds.
    Theta(ParamArgs),
    /// Check a positive verdict on dilated test functions.
    Verify(ProbeArgs),
    /// Drive a counterexample family past the divergence threshold.
    Falsify(ProbeArgs),
    /// Classify every point of a parameter grid read from a JSON spec file.
    Sweep(SweepArgs),
}

fn rational(s: &str) -> Result<Rational, String> {
    s.parse::<Rational>().map_err(|e| e.to_string())
}

#[derive(Args)]
struct ParamArgs {
    #[arg(long)]
    n: Option<u32>,
    #[arg(long, value_parser = rational, allow_hyphen_values = true)]
    p: Option<Rational>,
    #[arg(long, value_parser = rational, allow_hyphen_values = true)]
    q: Option<Rational>,
    #[arg(long, value_parser = rational, allow_hyphen_values = true)]
    r: Option<Rational>,
    #[arg(long, value_parser = rational, allow_hyphen_values = true)]
    a: Option<Rational>,
    #[arg(long, value_parser = rational, allow_hyphen_values = true)]
    b: Option<Rational>,
    #[arg(long, value_parser = rational, allow_hyphen_values = true)]
    c: Option<Rational>,
}

fn need<T: Clone>(v: &Option<T>, flag: &str) -> Result<T, Failure> {
    v.clone().ok_or_else(|| Failure::Input(format!("missing required flag --{flag}")))
}

impl ParamArgs {
    fn space(&self) -> Result<SpaceParams, Failure> {
        Ok(SpaceParams {
            n: need(&self.n, "n")?,
            p: need(&self.p, "p")?,
            q: need(&self.q, "q")?,
            r: need(&self.r, "r")?,
            a: need(&self.a, "a")?,
            b: need(&self.b, "b")?,
        })
    }

    fn params(&self) -> Result<Params, Failure> {
        Ok(self.space()?.with_c(need(&self.c, "c")?))
    }
}

#[derive(Args)]
struct ClassifyArgs {
    #[command(flatten)]
    params: ParamArgs,
    /// Restrict to radial functions.
    #[arg(long, conflicts_with_all = ["w0", "multiweight"])]
    radial: bool,
    /// Restrict to functions with zero spherical mean (sufficient conditions only).
    #[arg(long, conflicts_with = "multiweight")]
    w0: bool,
    /// Classify several weighted singularities described by a JSON file.
    #[arg(long, value_name = "FILE")]
    multiweight: Option<PathBuf>,
}

#[derive(Args)]
struct IntervalArgs {
    #[command(flatten)]
    params: ParamArgs,
    #[arg(long)]
    radial: bool,
}

#[derive(Args)]
struct ProbeArgs {
    #[command(flatten)]
    params: ParamArgs,
    /// Exponent of the multiplicative inequality.
    #[arg(long, value_parser = rational)]
    theta: Option<Rational>,
    /// Use first-harmonic test functions and the zero-mean verdict (verify only).
    #[arg(long)]
    w0: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct SweepArgs {
    spec: PathBuf,
    /// Overrides the format named in the spec file.
    #[arg(long, value_enum)]
    format: Option<Format>,
}

enum Failure {
    Input(String),
    Probe(String),
}

impl From<ProbeError> for Failure {
    fn from(e: ProbeError) -> Self {
        match e {
            ProbeError::Params(e) => Failure::Input(e.to_string()),
            e => Failure::Probe(e.to_string()),
        }
    }
}

/// What a command prints and how it exits.
struct Outcome {
    text: String,
    code: u8,
}

fn json<T: Serialize>(value: &T, code: u8) -> Result<Outcome, Failure> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| Failure::Probe(e.to_string()))?;
    text.push('\n');
    Ok(Outcome { text, code })
}

fn decision_code(d: Decision) -> u8 {
    match d {
        Decision::Embeds => 0,
        Decision::DoesNotEmbed => 1,
    }
}

#[derive(Serialize)]
struct ClassifyOut<'a> {
    params: &'a Params,
    mode: &'static str,
    verdict: &'a Verdict,
}

#[derive(Serialize)]
struct W0Out<'a> {
    params: &'a Params,
    mode: &'static str,
    verdict: &'a W0Verdict,
}

fn cmd_classify(args: &ClassifyArgs) -> Result<Outcome, Failure> {
    if let Some(path) = &args.multiweight {
        let text = fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
        let spec: MultiWeightSpec =
            serde_json::from_str(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
        let verdict = multiweight_classify(&spec).map_err(|e| Failure::Input(e.to_string()))?;
        return json(&verdict, decision_code(verdict.decision));
    }
    let params = args.params.params()?;
    if args.w0 {
        let verdict = classify_w0(&params).map_err(|e| Failure::Input(e.to_string()))?;
        let code = if verdict.decision == W0Decision::Embeds { 0 } else { 1 };
        return json(&W0Out { params: &params, mode: "w0", verdict: &verdict }, code);
    }
    let (verdict, mode) = if args.radial {
        (classify_radial(&params), "radial")
    } else {
        (classify(&params), "full")
    };
    let verdict = verdict.map_err(|e| Failure::Input(e.to_string()))?;
    json(&ClassifyOut { params: &params, mode, verdict: &verdict }, decision_code(verdict.decision))
}

#[derive(Serialize)]
struct IntervalOut<'a> {
    space: &'a SpaceParams,
    mode: &'static str,
    admissible: &'a AdmissibleSet,
}

fn cmd_interval(args: &IntervalArgs) -> Result<Outcome, Failure> {
    let space = args.params.space()?;
    let (set, mode) = if args.radial {
        (admissible_set_radial(&space), "radial")
    } else {
        (admissible_set(&space), "full")
    };
    let set = set.map_err(|e| Failure::Input(e.to_string()))?;
    json(&IntervalOut { space: &space, mode, admissible: &set }, 0)
}

#[derive(Serialize)]
struct ThetaOut<'a> {
    params: &'a Params,
    theta_set: &'a ThetaSet,
    note: Option<&'static str>,
}

#[derive(Serialize)]
struct Refused<'a> {
    params: &'a Params,
    verdict: &'a Verdict,
    note: &'static str,
}

fn cmd_theta(args: &ParamArgs) -> Result<Outcome, Failure> {
    let params = args.params()?;
    match theta_set(&params) {
        Ok(set) => {
            let note = (set == ThetaSet::Empty).then_some("embedding holds, multiplicative form impossible");
            json(&ThetaOut { params: &params, theta_set: &set, note }, 0)
        }
        Err(ThetaSetError::NotEmbedding(v)) => {
            json(&Refused { params: &params, verdict: &v, note: "the embedding does not hold" }, 1)
        }
        Err(ThetaSetError::Params(e)) => Err(Failure::Input(e.to_string())),
        Err(e) => Err(Failure::Probe(e.to_string())),
    }
}

fn config() -> Result<QuadratureConfig, Failure> {
    QuadratureConfig::from_env().map_err(Failure::Input)
}

fn cmd_verify(args: &ProbeArgs, mode: Execution) -> Result<Outcome, Failure> {
    let params = args.params.params()?;
    let cfg = config()?;
    if args.w0 {
        let w0 = classify_w0(&params).map_err(|e| Failure::Input(e.to_string()))?;
        if w0.decision != W0Decision::Embeds {
            return json(&W0Out { params: &params, mode: "w0", verdict: &w0 }, 1);
        }
        let theta = args.theta.clone().or_else(|| w0.derived.theta_c.clone());
        let report =
            verify_w0_instance(&params, theta.as_ref(), &first_harmonic_family(&params), &DEFAULT_SCALES, &cfg, mode)?;
        return json(&report, if report.passed { 0 } else { 3 });
    }
    let verdict = classify(&params).map_err(|e| Failure::Input(e.to_string()))?;
    if !verdict.embeds() {
        return json(&Refused { params: &params, verdict: &verdict, note: "verification needs an embedding" }, 1);
    }
    let theta = match &args.theta {
        Some(t) => Some(t.clone()),
        None => theta_set(&params).ok().and_then(|s| s.pick()),
    };
    let report = verify_instance(&params, theta.as_ref(), &default_family(&params), &DEFAULT_SCALES, &cfg, mode)?;
    json(&report, if report.passed { 0 } else { 3 })
}

#[derive(Serialize)]
struct Holds<'a> {
    params: &'a Params,
    theta: &'a Rational,
    theta_set: &'a ThetaSet,
    note: &'static str,
}

fn cmd_falsify(args: &ProbeArgs, mode: Execution) -> Result<Outcome, Failure> {
    let params = args.params.params()?;
    let cfg = config()?;
    let verdict = classify(&params).map_err(|e| Failure::Input(e.to_string()))?;
    if let Some(theta) = &args.theta {
        if verdict.embeds() {
            let set = theta_set(&params).map_err(|e| Failure::Probe(e.to_string()))?;
            if set.contains(theta) {
                let note = "the multiplicative inequality holds for this exponent";
                return json(&Holds { params: &params, theta, theta_set: &set, note }, 0);
            }
        }
        let report = falsify_multiplicative(&params, theta, &cfg, mode)?;
        return json(&report, if report.falsified { 1 } else { 3 });
    }
    let Some(reason) = verdict.reason else {
        return json(&ClassifyOut { params: &params, mode: "full", verdict: &verdict }, 0);
    };
    let family = witness_for(reason, &params).map_err(|e| Failure::Probe(e.to_string()))?;
    let report = falsify_instance(&family, &cfg, mode)?;
    json(&report, if report.falsified { 1 } else { 3 })
}

#[derive(Serialize)]
struct CsvRow {
    n: u32,
    p: String,
    q: String,
    r: String,
    a: String,
    b: String,
    c: String,
    decision: String,
    case: String,
    reason: String,
    c0: String,
    c1: String,
    theta_c: String,
    error: String,
}

fn text<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map(ToString::to_string).unwrap_or_default()
}

fn debug<T: std::fmt::Debug>(v: &Option<T>) -> String {
    v.as_ref().map(|x| format!("{x:?}")).unwrap_or_default()
}

fn csv_rows(rows: &[SweepRow]) -> Result<String, Failure> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        let p = &r.params;
        w.serialize(CsvRow {
            n: p.n,
            p: p.p.to_string(),
            q: p.q.to_string(),
            r: p.r.to_string(),
            a: p.a.to_string(),
            b: p.b.to_string(),
            c: p.c.to_string(),
            decision: debug(&r.decision),
            case: debug(&r.case),
            reason: debug(&r.reason),
            c0: text(&r.c0),
            c1: text(&r.c1),
            theta_c: text(&r.theta_c),
            error: r.error.clone().unwrap_or_default(),
        })
        .map_err(|e| Failure::Probe(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Failure::Probe(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Failure::Probe(e.to_string()))
}

fn cmd_sweep(args: &SweepArgs, mode: Execution) -> Result<Outcome, Failure> {
    let path = &args.spec;
    let raw = fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let spec: SweepSpec = serde_json::from_str(&raw).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let rows = run_sweep(&spec, mode).map_err(|e| Failure::Input(e.to_string()))?;
    let format = match args.format {
        Some(Format::Json) => OutputFormat::Json,
        Some(Format::Csv) => OutputFormat::Csv,
        None => spec.format,
    };
    match format {
        OutputFormat::Json => json(&rows, 0),
        OutputFormat::Csv => Ok(Outcome { text: csv_rows(&rows)?, code: 0 }),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mode = if cli.sequential { Execution::Sequential } else { Execution::Parallel };
    let result = match &cli.command {
        Command::Classify(a) => cmd_classify(a),
        Command::Interval(a) => cmd_interval(a),
        Command::Theta(a) => cmd_theta(a),
        Command::Verify(a) => cmd_verify(a, mode),
        Command::Falsify(a) => cmd_falsify(a, mode),
        Command::Sweep(a) => cmd_sweep(a, mode),
    };
    match result {
        Ok(out) => {
            let mut stdout = io::stdout().lock();
            if stdout.write_all(out.text.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                return ExitCode::from(3);
            }
            ExitCode::from(out.code)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Probe(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
