use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, ensure, Context};
use clap::{Args, Subcommand};
use num_complex::Complex64;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{json, Value};

use ugate::compiler::{
    build_net_with, compile_local_gate, parse_bytes, solovay_kitaev, GatePair, Net, NetError,
    NetOptions, Qubit,
};
use ugate::exact::AlgebraElement;
use ugate::field::{
    double_density_approx, embedding_residuals, in_scatter_neighbourhood, scatter_demo,
    Det15Polynomial, Polynomial, QSqrt2, DEFAULT_DIGITS,
};
use ugate::generation::{
    bracket_closure, density_estimate, sample_generator, swap_adjoint, verify_certificate,
    GenerationCertificate, SamplingBounds, Strategy, DEFAULT_MAX_OPS,
};
use ugate::numeric::{
    haar_unitary, power_search, FloatAlgebraElement, UnitaryMatrix, DEFAULT_NORM_CAP,
};

use crate::report::RunReport;
use crate::Status;

pub type Outcome = anyhow::Result<(RunReport, Status)>;

/// Substream of `rng_seed` reserved for one purpose. Every random draw the CLI
/// makes comes from `ChaCha8(rng_seed)` with the ChaCha stream id set to the
/// purpose, so different purposes never share keystream.
#[derive(Clone, Copy)]
enum Stream {
    CompileTarget = 1,
    ScatterTarget = 2,
}

fn stream(rng_seed: u64, purpose: Stream) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    rng.set_stream(purpose as u64);
    rng
}

fn read_json<T: DeserializeOwned>(path: &Path) -> anyhow::Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn bounds(max_abs: i64) -> anyhow::Result<SamplingBounds> {
    ensure!(max_abs > 0, "--max-abs must be positive");
    Ok(SamplingBounds::new(max_abs))
}

#[derive(Args, Serialize)]
pub struct CertifyArgs {
    /// Sample t from this seed.
    #[arg(long, required_unless_present = "matrix", conflicts_with = "matrix")]
    seed: Option<u64>,
    /// Read t from a JSON 4x4 matrix of {"re", "im"} rationals.
    #[arg(long)]
    matrix: Option<PathBuf>,
    #[arg(long, default_value_t = 3)]
    max_abs: i64,
    #[arg(long, value_enum, default_value_t = StrategyArg::Random)]
    strategy: StrategyArg,
    /// Seed of the random bracket choices; defaults to --seed, or 0 with --matrix.
    #[arg(long)]
    rng_seed: Option<u64>,
    #[arg(long, default_value_t = DEFAULT_MAX_OPS)]
    max_ops: usize,
    /// Certificate destination; defaults to `seed-<n>.cert.json` or `<matrix stem>.cert.json`.
    #[arg(long)]
    cert_out: Option<PathBuf>,
}

#[derive(Clone, Copy, clap::ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum StrategyArg {
    Random,
    Bfs,
}

pub fn certify(a: &CertifyArgs) -> Outcome {
    ensure!(a.max_ops > 0, "--max-ops must be positive");
    let (t, default_out) = match (&a.matrix, a.seed) {
        (Some(path), _) => {
            let t: AlgebraElement = read_json(path)?;
            let stem = path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_default();
            (t, PathBuf::from(format!("{stem}.cert.json")))
        }
        (None, Some(seed)) => (
            sample_generator(seed, bounds(a.max_abs)?),
            PathBuf::from(format!("seed-{seed}.cert.json")),
        ),
        (None, None) => bail!("one of --seed or --matrix is required"),
    };
    let strategy = match a.strategy {
        StrategyArg::Random => Strategy::Random,
        StrategyArg::Bfs => Strategy::Bfs,
    };
    let rng_seed = a.rng_seed.or(a.seed).unwrap_or(0);
    match bracket_closure(&t, rng_seed, strategy, a.max_ops) {
        Ok(cert) => {
            verify_certificate(&cert).context("freshly built certificate failed verification")?;
            let out = a.cert_out.clone().unwrap_or(default_out);
            fs::write(&out, cert.to_json()?)
                .with_context(|| format!("writing {}", out.display()))?;
            let result = json!({
                "generates": true,
                "rank": 15,
                "det": ugate::json::rational_string(&cert.det),
                "ops": cert.ops,
                "certificate": out,
            });
            Ok((RunReport::new("certify", a, &result)?, Status::Ok))
        }
        Err(f) => {
            let result = json!({
                "generates": false,
                "rank": f.rank_reached,
                "ops": f.ops,
                "reason": f.reason,
            });
            Ok((
                RunReport::new("certify", a, &result)?,
                Status::NotGenerating,
            ))
        }
    }
}

#[derive(Args, Serialize)]
pub struct VerifyArgs {
    #[arg(long)]
    cert: PathBuf,
}

pub fn verify(a: &VerifyArgs) -> Outcome {
    let text =
        fs::read_to_string(&a.cert).with_context(|| format!("reading {}", a.cert.display()))?;
    let cert = GenerationCertificate::from_json(&text)?;
    Ok(match verify_certificate(&cert) {
        Ok(()) => (
            RunReport::new("verify", a, &json!({ "valid": true }))?,
            Status::Ok,
        ),
        Err(e) => (
            RunReport::new(
                "verify",
                a,
                &json!({ "valid": false, "error": e.to_string() }),
            )?,
            Status::NotGenerating,
        ),
    })
}

#[derive(Args, Serialize)]
pub struct SampleArgs {
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Number of consecutive seeds to sample.
    #[arg(long, default_value_t = 1)]
    count: u64,
    #[arg(long, default_value_t = 3)]
    max_abs: i64,
}

pub fn sample(a: &SampleArgs) -> Outcome {
    ensure!(a.count > 0, "--count must be positive");
    let b = bounds(a.max_abs)?;
    let samples: Vec<Value> = (a.seed..a.seed + a.count)
        .map(|seed| {
            let t = sample_generator(seed, b);
            json!({
                "seed": seed,
                "t": t,
                "t_prime": swap_adjoint(&t),
                "coordinates": t.vectorize(),
            })
        })
        .collect();
    Ok((RunReport::new("sample", a, &samples)?, Status::Ok))
}

#[derive(Args, Serialize)]
pub struct DensityArgs {
    #[arg(long, default_value_t = 42)]
    first_seed: u64,
    #[arg(long)]
    samples: usize,
    #[arg(long, default_value_t = 3)]
    max_abs: i64,
    #[arg(long, default_value_t = DEFAULT_MAX_OPS)]
    max_ops: usize,
}

pub fn density(a: &DensityArgs) -> Outcome {
    ensure!(a.samples > 0, "--samples must be positive");
    ensure!(a.max_ops > 0, "--max-ops must be positive");
    let report = density_estimate(a.first_seed, a.samples, bounds(a.max_abs)?, a.max_ops);
    Ok((RunReport::new("density", a, &report)?, Status::Ok))
}

/// Where the gate comes from.
#[derive(Args, Serialize)]
pub struct GateArgs {
    /// g = exp(scale * t / |t|) for t sampled from this seed.
    #[arg(long, default_value_t = 42)]
    gate_seed: u64,
    #[arg(long, default_value_t = 3)]
    gate_max_abs: i64,
    #[arg(long, default_value_t = 2.0)]
    scale: f64,
    /// Read g from a JSON 4x4 matrix of [re, im] pairs instead.
    #[arg(long)]
    gate: Option<PathBuf>,
}

impl GateArgs {
    fn pair(&self) -> anyhow::Result<GatePair> {
        if let Some(path) = &self.gate {
            let g: UnitaryMatrix = read_json(path)?;
            return Ok(GatePair::new(g));
        }
        ensure!(
            self.scale.is_finite() && self.scale > 0.0,
            "--scale must be positive"
        );
        let t = FloatAlgebraElement::from_exact(&sample_generator(
            self.gate_seed,
            bounds(self.gate_max_abs)?,
        ));
        Ok(GatePair::from_direction(&t, self.scale))
    }
}

#[derive(Args, Serialize)]
pub struct NetArgs {
    #[arg(long, default_value_t = 6)]
    max_len: usize,
    #[arg(long, default_value_t = 0.05)]
    dedup_radius: f64,
    /// Haar targets used to estimate the covering radius.
    #[arg(long, default_value_t = 256)]
    radius_samples: usize,
    #[arg(long, default_value_t = 0)]
    radius_seed: u64,
    /// Memory cap such as `512M`; overrides `UGATE_MEMORY_BUDGET`.
    #[arg(long)]
    memory_budget: Option<String>,
}

impl NetArgs {
    fn options(&self) -> anyhow::Result<NetOptions> {
        ensure!(self.max_len > 0, "--max-len must be positive");
        ensure!(
            self.dedup_radius.is_finite() && self.dedup_radius >= 0.0,
            "--dedup-radius must be non-negative"
        );
        ensure!(self.radius_samples > 0, "--radius-samples must be positive");
        let mut o = NetOptions::new(self.max_len, self.dedup_radius);
        o.radius_samples = self.radius_samples;
        o.radius_seed = self.radius_seed;
        if let Some(b) = &self.memory_budget {
            o.memory_budget =
                parse_bytes(b).with_context(|| format!("bad --memory-budget {b:?}"))?;
        }
        Ok(o)
    }
}

/// Builds a net, turning a budget overrun into the partial net plus a flag.
fn build(gate: &GateArgs, net: &NetArgs) -> anyhow::Result<(Net, bool)> {
    match build_net_with(&gate.pair()?, &net.options()?) {
        Ok(n) => Ok((n, true)),
        Err(NetError::MemoryBudgetExceeded { partial, .. }) => Ok((*partial, false)),
        Err(e) => Err(e.into()),
    }
}

fn net_summary(net: &Net) -> Value {
    json!({
        "entries": net.len(),
        "max_len": net.max_len(),
        "dedup_radius": net.dedup_radius(),
        "complete": net.is_complete(),
        "radius": net.radius(),
        "fingerprint": net.fingerprint(),
    })
}

fn load_net(path: &Path) -> anyhow::Result<Net> {
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    let net = if bytes.starts_with(b"UGNET1") {
        Net::read_binary(bytes.as_slice())?
    } else {
        Net::from_json(
            std::str::from_utf8(&bytes).context("net file is neither binary nor UTF-8")?,
        )?
    };
    Ok(net)
}

#[derive(Args, Serialize)]
pub struct NetBuildArgs {
    #[command(flatten)]
    gate: GateArgs,
    #[command(flatten)]
    net: NetArgs,
    #[arg(long)]
    net_out: PathBuf,
    /// Write the compact binary format instead of JSON.
    #[arg(long)]
    binary: bool,
}

pub fn net_build(a: &NetBuildArgs) -> Outcome {
    let (net, within_budget) = build(&a.gate, &a.net)?;
    if a.binary {
        let f = fs::File::create(&a.net_out)
            .with_context(|| format!("creating {}", a.net_out.display()))?;
        net.write_binary(std::io::BufWriter::new(f))?;
    } else {
        fs::write(&a.net_out, net.to_json()?)
            .with_context(|| format!("writing {}", a.net_out.display()))?;
    }
    let status = if within_budget {
        Status::Ok
    } else {
        Status::MemoryBudgetExceeded
    };
    Ok((RunReport::new("net-build", a, &net_summary(&net))?, status))
}

#[derive(Args, Serialize)]
pub struct CompileArgs {
    /// Load the base net from a file; otherwise it is built from the gate and net flags.
    #[arg(long)]
    net: Option<PathBuf>,
    #[command(flatten)]
    gate: GateArgs,
    #[command(flatten)]
    net_params: NetArgs,
    #[command(flatten)]
    target: TargetArgs,
    #[arg(long, value_enum, default_value_t = QubitArg::First)]
    qubit: QubitArg,
    #[arg(long, default_value_t = 2)]
    depth: usize,
    /// Exit 0 only if the final distance is at most this.
    #[arg(long)]
    goal: Option<f64>,
}

#[derive(Args, Serialize)]
#[group(required = true, multiple = false)]
pub struct TargetArgs {
    /// Unitary target as a JSON 4x4 matrix of [re, im] pairs.
    #[arg(long)]
    target: Option<PathBuf>,
    /// Haar-random target drawn from this seed.
    #[arg(long)]
    haar_seed: Option<u64>,
    #[arg(long)]
    identity: bool,
    /// The gate g itself.
    #[arg(long)]
    generator: bool,
    /// Single-qubit gate as a JSON 2x2 matrix of [re, im] pairs, acting on --qubit.
    #[arg(long)]
    local: Option<PathBuf>,
}

#[derive(Clone, Copy, clap::ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum QubitArg {
    First,
    Second,
}

pub fn compile(a: &CompileArgs) -> Outcome {
    if let Some(goal) = a.goal {
        ensure!(
            goal.is_finite() && goal >= 0.0,
            "--goal must be non-negative"
        );
    }
    let (net, within_budget) = match &a.net {
        Some(path) => (load_net(path)?, true),
        None => build(&a.gate, &a.net_params)?,
    };
    let t = &a.target;
    let compiled = if let Some(path) = &t.local {
        let p: [[[f64; 2]; 2]; 2] = read_json(path)?;
        let m = p.map(|row| row.map(|[re, im]| Complex64::new(re, im)));
        let which = match a.qubit {
            QubitArg::First => Qubit::First,
            QubitArg::Second => Qubit::Second,
        };
        ugate::compiler::local_target(&m, which).context("local gate is not unitary")?;
        compile_local_gate(&m, which, &net, a.depth)
    } else {
        let target = if let Some(path) = &t.target {
            read_json::<UnitaryMatrix>(path)?
        } else if let Some(seed) = t.haar_seed {
            haar_unitary(&mut stream(seed, Stream::CompileTarget))
        } else if t.generator {
            net.pair().g().clone()
        } else {
            UnitaryMatrix::identity()
        };
        solovay_kitaev(&target, &net, a.depth)
    };
    let (result, status) = match compiled {
        Ok(report) => {
            let ok = a.goal.is_none_or(|g| report.distance <= g);
            let result = json!({ "compilation": report, "net": net_summary(&net), "goal_met": ok });
            let status = match (within_budget, ok) {
                (false, _) => Status::MemoryBudgetExceeded,
                (true, true) => Status::Ok,
                (true, false) => Status::GoalMissed,
            };
            (result, status)
        }
        Err(e) => (
            json!({ "error": e.to_string(), "failure": e, "net": net_summary(&net) }),
            Status::ConvergenceFailure,
        ),
    };
    Ok((RunReport::new("compile", a, &result)?, status))
}

#[derive(Args, Serialize)]
pub struct PowerArgs {
    #[command(flatten)]
    gate: GateArgs,
    #[arg(long, default_value_t = 100_000)]
    k_max: u64,
    #[arg(long, default_value_t = DEFAULT_NORM_CAP)]
    cap: f64,
}

pub fn power(a: &PowerArgs) -> Outcome {
    ensure!(a.k_max > 0, "--k-max must be positive");
    ensure!(a.cap.is_finite() && a.cap > 0.0, "--cap must be positive");
    let pair = a.gate.pair()?;
    Ok(match power_search(pair.g(), a.k_max, a.cap) {
        Ok(found) => (
            RunReport::new("power", a, &json!({ "found": true, "power": found }))?,
            Status::Ok,
        ),
        Err(nf) => (
            RunReport::new("power", a, &json!({ "found": false, "closest": nf }))?,
            Status::NotGenerating,
        ),
    })
}

#[derive(Subcommand, Serialize)]
pub enum AppendixCmd {
    /// One element close to p under j+ and to q under j-.
    Double(DoubleArgs),
    /// Push a point of Q(sqrt 2)^15 off the variety of a certificate's words.
    Scatter(ScatterArgs),
}

#[derive(Args, Serialize)]
pub struct DoubleArgs {
    #[arg(long, allow_hyphen_values = true)]
    p: f64,
    #[arg(long, allow_hyphen_values = true)]
    q: f64,
    #[arg(long, default_value_t = 1e-8)]
    eps: f64,
}

#[derive(Args, Serialize)]
pub struct ScatterArgs {
    /// t0 = a + sqrt2 b with a, b sampled from this seed and the next.
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 3)]
    max_abs: i64,
    #[arg(long, default_value_t = 1e-3)]
    eps: f64,
    /// Seed of the real target t1, uniform in [-max_abs, max_abs]^15.
    #[arg(long, default_value_t = 0)]
    rng_seed: u64,
}

pub fn appendix(cmd: &AppendixCmd) -> Outcome {
    match cmd {
        AppendixCmd::Double(a) => {
            ensure!(a.p.is_finite() && a.q.is_finite(), "targets must be finite");
            ensure!(a.eps.is_finite() && a.eps > 0.0, "--eps must be positive");
            let f = double_density_approx(a.p, a.q, a.eps);
            let (rp, rm) = embedding_residuals(&f, a.p, a.q);
            let e = f.embeddings(DEFAULT_DIGITS);
            let result = json!({
                "element": f,
                "display": f.to_string(),
                "plus": e.plus_string(),
                "minus": e.minus_string(),
                "residual_plus": rp,
                "residual_minus": rm,
            });
            Ok((RunReport::new("appendix", cmd, &result)?, Status::Ok))
        }
        AppendixCmd::Scatter(a) => {
            ensure!(a.eps.is_finite() && a.eps > 0.0, "--eps must be positive");
            let b = bounds(a.max_abs)?;
            let base = sample_generator(a.seed, b);
            let cert =
                bracket_closure(&base, a.seed, Strategy::Random, DEFAULT_MAX_OPS).map_err(|f| {
                    anyhow::anyhow!(
                        "seed {} does not generate (rank {})",
                        a.seed,
                        f.rank_reached
                    )
                })?;
            let poly =
                Det15Polynomial::from_certificate(&cert).expect("certificates hold 15 words");
            let shift = sample_generator(a.seed + 1, b).vectorize();
            let t0: Vec<QSqrt2> = base
                .vectorize()
                .0
                .iter()
                .zip(&shift.0)
                .map(|(x, y)| QSqrt2::new(x.clone(), y.clone()))
                .collect();
            let mut rng = stream(a.rng_seed, Stream::ScatterTarget);
            let m = a.max_abs as f64;
            let t1: Vec<f64> = (0..15).map(|_| rng.gen_range(-m..=m)).collect();
            let s = scatter_demo(&t0, &t1, a.eps);
            let conj: Vec<QSqrt2> = s.iter().map(QSqrt2::galois).collect();
            let off = |p: &[QSqrt2]| !poly.eval_qsqrt2(p).is_zero();
            let result = json!({
                "t0": t0,
                "t1": t1,
                "s": s,
                "within_eps": in_scatter_neighbourhood(&s, &t0, &t1, a.eps),
                "t0_off_variety": off(&t0),
                "s_off_variety": off(&s),
                "conjugate_off_variety": off(&conj),
            });
            Ok((RunReport::new("appendix", cmd, &result)?, Status::Ok))
        }
    }
}
