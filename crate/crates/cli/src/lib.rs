//! The `masep` command line: exact lattice operators, Koornwinder polynomials, stationary
//! states and a Monte Carlo cross-check, each reported as canonical JSON.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use masep_algebra::par::Exec;
use masep_algebra::{fmt_rational, parse_rational, Field, Rational, UniRatFun};
use masep_hecke::{
    eigen_residuals, f_family, nonsymmetric_e, symmetrise, HeckeContext, HeckeParams, XPoly,
};
use masep_lattice::{
    generator_direct, generator_from_transfer, generator_with_rates, rates, Convention,
    IdentityName, ModelSpec, ParamPoint, Rates, SparseOperator, TransferBuilder, Verifier,
};
use masep_sim::{simulate, tv_distance, SimConfig, SimReport};
use masep_stationary::{
    config_key, factorisation_check, generalised_check, generalised_stationary, hecke_stationary,
    nullspace_stationary, nullspace_stationary_with, theorem_check, SectorReport,
};
use masep_weyl::{antidominant_rep, Composition};
use serde::Serialize;
use serde_json::{json, Map, Value};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Bad flags or inputs; exit code 1.
    #[error("{0}")]
    Usage(String),
    /// A computation that could not be completed; exit code 2.
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Failed(_) => 2,
        }
    }
}

fn failed(e: impl std::fmt::Display) -> CliError {
    CliError::Failed(e.to_string())
}

fn usage(e: impl std::fmt::Display) -> CliError {
    CliError::Usage(e.to_string())
}

impl From<masep_lattice::LatticeError> for CliError {
    fn from(e: masep_lattice::LatticeError) -> Self {
        match e {
            masep_lattice::LatticeError::InvalidSpec(s) => CliError::Usage(s),
            e => failed(e),
        }
    }
}

impl From<masep_stationary::StationaryError> for CliError {
    fn from(e: masep_stationary::StationaryError) -> Self {
        match e {
            masep_stationary::StationaryError::InvalidInput(s) => CliError::Usage(s),
            e => failed(e),
        }
    }
}

impl From<masep_hecke::HeckeError> for CliError {
    fn from(e: masep_hecke::HeckeError) -> Self {
        match e {
            masep_hecke::HeckeError::InvalidInput(s) => CliError::Usage(s),
            e => failed(e),
        }
    }
}

impl From<masep_sim::SimError> for CliError {
    fn from(e: masep_sim::SimError) -> Self {
        match e {
            masep_sim::SimError::InvalidConfig(s) => CliError::Usage(s),
            masep_sim::SimError::NegativeRate(s) => CliError::Usage(format!("negative rate {s}")),
            e => failed(e),
        }
    }
}

pub fn rational(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

/// Simulator rates may also be given as decimals; they are converted exactly.
pub fn rate(s: &str) -> Result<Rational, String> {
    if let Ok(r) = parse_rational(s) {
        return Ok(r);
    }
    let x: f64 = s.parse().map_err(|_| format!("not a rate: {s:?}"))?;
    Rational::from_float(x).ok_or_else(|| format!("not a finite rate: {s:?}"))
}

pub fn composition(s: &str) -> Result<Composition, String> {
    s.split(',')
        .map(|p| {
            p.trim()
                .parse::<i32>()
                .map_err(|_| format!("bad entry {p:?} in {s:?}"))
        })
        .collect()
}

fn rational_list(s: &str) -> Result<Vec<Rational>, String> {
    s.split(',').map(|p| rational(p.trim())).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ConventionArg {
    Magnitude,
    Mirror,
}

impl From<ConventionArg> for Convention {
    fn from(c: ConventionArg) -> Self {
        match c {
            ConventionArg::Magnitude => Convention::Magnitude,
            ConventionArg::Mirror => Convention::Mirror,
        }
    }
}

/// Flags shared by every subcommand.
#[derive(Args, Clone, Debug)]
pub struct Common {
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    #[arg(long, default_value_t = 1)]
    pub r: usize,
    #[arg(long, default_value = "1/3", value_parser = rational, allow_hyphen_values = true)]
    pub t: Rational,
    #[arg(long, default_value = "-2", value_parser = rational, allow_hyphen_values = true)]
    pub a: Rational,
    #[arg(long, default_value = "-3", value_parser = rational, allow_hyphen_values = true)]
    pub b: Rational,
    #[arg(long, default_value = "1/5", value_parser = rational, allow_hyphen_values = true)]
    pub c: Rational,
    #[arg(long, default_value = "1/7", value_parser = rational, allow_hyphen_values = true)]
    pub d: Rational,
    /// Numeric q; left symbolic when absent (polynomial commands only).
    #[arg(long, value_parser = rational, allow_hyphen_values = true)]
    pub q: Option<Rational>,
    #[arg(long, default_value_t = 0)]
    pub rl: usize,
    #[arg(long, default_value_t = 0)]
    pub rr: usize,
    #[arg(long, value_enum, default_value_t = ConventionArg::Magnitude)]
    pub convention: ConventionArg,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Write the JSON here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Comma-separated composition, e.g. `1,0,-1`.
    #[arg(long, value_parser = composition, allow_hyphen_values = true)]
    pub sector: Option<Composition>,
    /// Run sequentially even when built with parallelism.
    #[arg(long)]
    pub sequential: bool,
}

impl Common {
    pub fn point(&self) -> ParamPoint {
        ParamPoint::new(
            self.t.clone(),
            self.a.clone(),
            self.b.clone(),
            self.c.clone(),
            self.d.clone(),
        )
    }

    pub fn spec(&self) -> Result<ModelSpec, CliError> {
        Ok(ModelSpec::generalised(
            self.n,
            self.r,
            self.point(),
            self.rl,
            self.rr,
            self.convention.into(),
        )?)
    }

    fn sector(&self) -> Result<Composition, CliError> {
        let s = self
            .sector
            .clone()
            .ok_or_else(|| usage("--sector is required"))?;
        if s.len() != self.n {
            return Err(usage(format!(
                "--sector {s:?} has length {}, not n = {}",
                s.len(),
                self.n
            )));
        }
        Ok(s)
    }

    fn exec(&self) -> Exec {
        if self.sequential {
            Exec::Sequential
        } else {
            Exec::default()
        }
    }

    /// Parameters stamped into every report.
    fn stamp(&self) -> Value {
        json!({
            "n": self.n,
            "r": self.r,
            "t": fmt_rational(&self.t),
            "a": fmt_rational(&self.a),
            "b": fmt_rational(&self.b),
            "c": fmt_rational(&self.c),
            "d": fmt_rational(&self.d),
            "q": self.q.as_ref().map(fmt_rational),
            "rl": self.rl,
            "rr": self.rr,
            "convention": Convention::from(self.convention).to_string(),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MatrixFormat {
    Dense,
    Sparse,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Hecke,
    Nullspace,
}

#[derive(Parser, Debug)]
#[command(
    name = "masep",
    version,
    about = "Exact and Monte Carlo tools for the open multi-species ASEP"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
#[allow(clippy::large_enum_variant)]
pub enum Command {
    /// Markov generator L at q = 1.
    BuildGenerator {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = MatrixFormat::Dense)]
        format: MatrixFormat,
        /// Build L as (1-t)/2 T'(1) instead of from the hopping rules.
        #[arg(long)]
        from_transfer: bool,
    },
    /// Transfer matrix T(w; x).
    Transfer {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "1", value_parser = rational, allow_hyphen_values = true)]
        w: Rational,
        /// Comma-separated inhomogeneities; all ones by default.
        #[arg(long, value_parser = rational_list, allow_hyphen_values = true)]
        x: Option<Vec<Rational>>,
        #[arg(long, value_enum, default_value_t = MatrixFormat::Sparse)]
        format: MatrixFormat,
    },
    /// Exact identity checks at random points.
    Verify {
        #[command(flatten)]
        common: Common,
        /// `all`, `local`, `transfer`, or a comma-separated list of identity names.
        #[arg(long, default_value = "all")]
        suite: String,
        /// Number of random points per identity (seeds `seed`, `seed + 1`, ...).
        #[arg(long, default_value_t = 1)]
        points: u64,
    },
    /// Non-symmetric Koornwinder polynomial E_λ for λ = --sector.
    Nonsymmetric {
        #[command(flatten)]
        common: Common,
    },
    /// Symmetric Koornwinder polynomial K_λ = Σ_μ f_μ for λ = --sector.
    Koornwinder {
        #[command(flatten)]
        common: Common,
    },
    /// Stationary weights of the sector of --sector.
    Stationary {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = Method::Hecke)]
        method: Method,
    },
    /// Hecke weights against the generator's null vector.
    Theorem {
        #[command(flatten)]
        common: Common,
    },
    /// Z_λ against the product over columns of λ = --sector.
    Factorise {
        #[command(flatten)]
        common: Common,
        /// Also compare the polynomials in x.
        #[arg(long)]
        polynomial: bool,
    },
    /// Product-formula weights with cutoffs --rl, --rr.
    Generalised {
        #[command(flatten)]
        common: Common,
    },
    /// Continuous-time Monte Carlo from the configuration --sector.
    Simulate {
        #[command(flatten)]
        common: Common,
        /// Explicit rates; when absent they follow from t, a, b, c, d.
        #[arg(long, value_parser = rate)]
        alpha: Option<Rational>,
        #[arg(long, value_parser = rate)]
        beta: Option<Rational>,
        #[arg(long, value_parser = rate)]
        gamma: Option<Rational>,
        #[arg(long, value_parser = rate)]
        delta: Option<Rational>,
        #[arg(long, default_value_t = 1_000_000)]
        events: u64,
        #[arg(long, default_value_t = 10_000)]
        burn_in: u64,
        /// Events per batch of the batch-means error estimate.
        #[arg(long, default_value_t = 10_000)]
        thin: u64,
        #[arg(long, default_value_t = 4)]
        trajectories: usize,
        /// Exit 2 when the distance to the exact measure exceeds this.
        #[arg(long)]
        tolerance: Option<f64>,
    },
}

/// JSON document plus pass/fail.
pub struct Outcome {
    pub json: Value,
    pub pass: bool,
}

impl Command {
    pub fn common(&self) -> &Common {
        match self {
            Command::BuildGenerator { common, .. }
            | Command::Transfer { common, .. }
            | Command::Verify { common, .. }
            | Command::Nonsymmetric { common }
            | Command::Koornwinder { common }
            | Command::Stationary { common, .. }
            | Command::Theorem { common }
            | Command::Factorise { common, .. }
            | Command::Generalised { common }
            | Command::Simulate { common, .. } => common,
        }
    }

    fn name(&self) -> &'static str {
        match self {
            Command::BuildGenerator { .. } => "build-generator",
            Command::Transfer { .. } => "transfer",
            Command::Verify { .. } => "verify",
            Command::Nonsymmetric { .. } => "nonsymmetric",
            Command::Koornwinder { .. } => "koornwinder",
            Command::Stationary { .. } => "stationary",
            Command::Theorem { .. } => "theorem",
            Command::Factorise { .. } => "factorise",
            Command::Generalised { .. } => "generalised",
            Command::Simulate { .. } => "simulate",
        }
    }
}

fn verdict(pass: bool) -> Value {
    Value::String(if pass { "pass" } else { "fail" }.into())
}

fn to_value(x: &impl Serialize) -> Value {
    serde_json::to_value(x).expect("reports serialise")
}

fn matrix_json(op: &SparseOperator<Rational>, format: MatrixFormat) -> Value {
    match format {
        MatrixFormat::Sparse => to_value(&op.to_json()),
        MatrixFormat::Dense => {
            let d = op.dim();
            let rows: Vec<Vec<String>> = (0..d)
                .map(|r| (0..d).map(|c| fmt_rational(&op.get(r, c))).collect())
                .collect();
            json!({ "dim": d, "factors": op.factors(), "matrix": rows })
        }
    }
}

fn poly_json<S: Field>(p: &XPoly<S>, show: impl Fn(&S) -> String) -> Value {
    let terms: Map<String, Value> = p
        .terms()
        .iter()
        .map(|(e, c)| (config_key(e), Value::String(show(c))))
        .collect();
    Value::Object(terms)
}

fn ratfun(c: &UniRatFun) -> String {
    match c.as_constant() {
        Some(r) => fmt_rational(&r),
        None => c.to_string(),
    }
}

fn identities(suite: &str) -> Result<Vec<IdentityName>, CliError> {
    let all = IdentityName::ALL.iter().copied();
    Ok(match suite {
        "all" => all.collect(),
        "local" => all.filter(|i| !i.uses_transfer()).collect(),
        "transfer" => all.filter(|i| i.uses_transfer()).collect(),
        list => list
            .split(',')
            .map(|s| s.trim().parse::<IdentityName>().map_err(usage))
            .collect::<Result<_, _>>()?,
    })
}

fn eigen_pass<S: Field>(
    ctx: &HeckeContext<S>,
    lambda: &[i32],
    e: &XPoly<S>,
) -> Result<bool, CliError> {
    let y = ctx.spectral_values(lambda);
    Ok(eigen_residuals(ctx, e, &y)?.iter().all(|r| r.is_zero()))
}

fn polynomial_params(c: &Common) -> HeckeParams {
    HeckeParams::new(
        c.t.clone(),
        c.a.clone(),
        c.b.clone(),
        c.c.clone(),
        c.d.clone(),
    )
}

pub fn execute(cmd: &Command) -> Result<Outcome, CliError> {
    let common = cmd.common();
    let (mut body, pass) = match cmd {
        Command::BuildGenerator {
            format,
            from_transfer,
            ..
        } => {
            let spec = common.spec()?;
            let l = if *from_transfer {
                generator_from_transfer(&TransferBuilder::new(&spec)?.with_exec(common.exec()))?.0
            } else {
                generator_direct(&spec)?
            };
            let zero_sums = l.column_sums().iter().all(|s| *s == Rational::default());
            let mut v = matrix_json(&l, *format);
            v["column_sums_zero"] = Value::Bool(zero_sums);
            (v, zero_sums)
        }
        Command::Transfer { w, x, format, .. } => {
            let spec = common.spec()?;
            let xs = x
                .clone()
                .unwrap_or_else(|| vec![Rational::from_integer(1.into()); spec.n]);
            let b = TransferBuilder::new(&spec)?.with_exec(common.exec());
            let t = b.transfer(w, &xs)?;
            let mut v = matrix_json(&t, *format);
            v["w"] = json!(fmt_rational(w));
            v["x"] = json!(xs.iter().map(fmt_rational).collect::<Vec<_>>());
            (v, true)
        }
        Command::Verify { suite, points, .. } => {
            let spec = common.spec()?;
            let ids = identities(suite)?;
            let seeds: Vec<u64> = (0..*points).map(|k| common.seed + k).collect();
            let reports = Verifier::new(&spec)?
                .with_exec(common.exec())
                .verify_many(&ids, &seeds)?;
            let pass = reports.iter().all(|r| r.pass);
            (json!({ "reports": reports, "all": verdict(pass) }), pass)
        }
        Command::Nonsymmetric { .. } => {
            let lambda = common.sector()?;
            let p = polynomial_params(common);
            match &common.q {
                Some(q) => {
                    let ctx = HeckeContext::new(common.n, p, q.clone())?;
                    let e = nonsymmetric_e(&ctx, &lambda)?;
                    let ok = eigen_pass(&ctx, &lambda, &e)?;
                    (
                        json!({ "lambda": lambda, "terms": poly_json(&e, fmt_rational), "eigen": verdict(ok) }),
                        ok,
                    )
                }
                None => {
                    let ctx = HeckeContext::symbolic(common.n, p)?;
                    let e = nonsymmetric_e(&ctx, &lambda)?;
                    let ok = eigen_pass(&ctx, &lambda, &e)?;
                    (
                        json!({ "lambda": lambda, "terms": poly_json(&e, ratfun), "eigen": verdict(ok) }),
                        ok,
                    )
                }
            }
        }
        Command::Koornwinder { .. } => {
            let lambda = common.sector()?;
            let p = polynomial_params(common);
            let terms = match &common.q {
                Some(q) => {
                    let ctx = HeckeContext::new(common.n, p, q.clone())?;
                    let k = symmetrise(&ctx, &f_family(&ctx, &lambda)?)?;
                    poly_json(&k, fmt_rational)
                }
                None => {
                    let ctx = HeckeContext::symbolic(common.n, p)?;
                    let k = symmetrise(&ctx, &f_family(&ctx, &lambda)?)?;
                    poly_json(&k, ratfun)
                }
            };
            // symmetrise fails unless K is invariant, so reaching here is a pass
            (
                json!({ "lambda": lambda, "terms": terms, "invariant": verdict(true) }),
                true,
            )
        }
        Command::Stationary { method, .. } => {
            let spec = common.spec()?;
            let lambda = common.sector()?;
            let anchor_cfg = antidominant_rep(&lambda, Some(spec.rl.min(spec.rr) as i32));
            let state = match method {
                Method::Hecke if spec.rl == 0 && spec.rr == 0 => {
                    hecke_stationary(&spec, &lambda)?.0
                }
                Method::Hecke => generalised_stationary(&spec, &lambda)?,
                Method::Nullspace => nullspace_stationary(&spec, &lambda)?,
            };
            let anchor = state.weights.get(&anchor_cfg).cloned().unwrap_or_default();
            let mut v = to_value(&SectorReport::new(&state, &anchor));
            v["provenance"] = to_value(&state.provenance);
            (v, true)
        }
        Command::Theorem { .. } => {
            let spec = common.spec()?;
            let lambda = common.sector()?;
            let rep = theorem_check(&spec, &lambda, None)?;
            let mut v = to_value(&rep);
            v["theorem"] = verdict(rep.pass());
            (v, rep.pass())
        }
        Command::Factorise { polynomial, .. } => {
            let lambda = common.sector()?;
            let rep = factorisation_check(&common.point(), &lambda, *polynomial)?;
            let mut v = to_value(&rep);
            v["factorisation"] = verdict(rep.pass());
            (v, rep.pass())
        }
        Command::Generalised { .. } => {
            let spec = common.spec()?;
            let lambda = common.sector()?;
            let rep = generalised_check(&spec, &lambda)?;
            let mut v = to_value(&rep);
            v["generalised"] = verdict(rep.pass());
            (v, rep.pass())
        }
        Command::Simulate {
            alpha,
            beta,
            gamma,
            delta,
            events,
            burn_in,
            thin,
            trajectories,
            tolerance,
            ..
        } => {
            let spec = common.spec()?;
            let initial = common.sector()?;
            let rt = match (alpha, beta, gamma, delta) {
                (Some(a), Some(b), Some(g), Some(d)) => Rates {
                    alpha: a.clone(),
                    beta: b.clone(),
                    gamma: g.clone(),
                    delta: d.clone(),
                    t: common.t.clone(),
                },
                (None, None, None, None) => rates(&spec.params)?,
                _ => return Err(usage("give all of --alpha --beta --gamma --delta or none")),
            };
            let cfg = SimConfig::with_rates(&spec, &rt, &initial)?
                .events(*events)
                .burn_in(*burn_in)
                .thin(*thin)
                .trajectories(*trajectories)
                .seed(common.seed)
                .exec(common.exec());
            let emp = simulate(&cfg)?;
            let exact =
                nullspace_stationary_with(&spec, &generator_with_rates(&spec, &rt), &initial)?;
            let tv = tv_distance(&emp, &exact)?;
            let pass = tolerance.is_none_or(|tol| tv <= tol);
            let mut v = to_value(&SimReport::new(&emp, tv));
            v["rates"] = json!({
                "alpha": fmt_rational(&rt.alpha),
                "beta": fmt_rational(&rt.beta),
                "gamma": fmt_rational(&rt.gamma),
                "delta": fmt_rational(&rt.delta),
                "t": fmt_rational(&rt.t),
            });
            (v, pass)
        }
    };
    body["command"] = json!(cmd.name());
    body["seed"] = json!(common.seed);
    body["params"] = common.stamp();
    Ok(Outcome { json: body, pass })
}

/// Parses, runs and writes the output; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli.command) {
        Ok(out) => {
            let text = serde_json::to_string_pretty(&out.json).expect("json") + "\n";
            match &cli.command.common().out {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, &text) {
                        eprintln!("cannot write {}: {e}", path.display());
                        return 1;
                    }
                }
                None => print!("{text}"),
            }
            if out.pass {
                0
            } else {
                2
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
