//! Batch front end for certification, compilation and the number-field demos.

pub mod commands;
pub mod report;

use clap::{Parser, Subcommand};

use commands::{
    AppendixCmd, CertifyArgs, CompileArgs, DensityArgs, NetBuildArgs, PowerArgs, SampleArgs,
    VerifyArgs,
};

/// Exit statuses shared by all subcommands.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok = 0,
    BadInput = 1,
    NotGenerating = 2,
    ConvergenceFailure = 3,
    MemoryBudgetExceeded = 4,
    GoalMissed = 5,
}

#[derive(Parser)]
#[command(
    name = "ugate",
    version,
    about = "Single-gate universality toolkit for two qubits"
)]
pub struct Cli {
    /// Write the JSON report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<std::path::PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Search for a generation certificate for t and its swap conjugate.
    Certify(CertifyArgs),
    /// Check a certificate file by exact replay.
    Verify(VerifyArgs),
    /// Print sampled generators.
    Sample(SampleArgs),
    /// Run the closure search over a range of seeds.
    Density(DensityArgs),
    /// Build and save a base net.
    NetBuild(NetBuildArgs),
    /// Compile a target with Solovay-Kitaev.
    Compile(CompileArgs),
    /// Find a power of the gate close to the identity.
    Power(PowerArgs),
    /// Simultaneous approximation in both embeddings of Q(sqrt 2).
    #[command(subcommand)]
    Appendix(AppendixCmd),
}

/// Runs one parsed invocation, emitting its report. Errors are printed and map to
/// [`Status::BadInput`].
pub fn run(cli: &Cli) -> Status {
    let outcome = match &cli.command {
        Command::Certify(a) => commands::certify(a),
        Command::Verify(a) => commands::verify(a),
        Command::Sample(a) => commands::sample(a),
        Command::Density(a) => commands::density(a),
        Command::NetBuild(a) => commands::net_build(a),
        Command::Compile(a) => commands::compile(a),
        Command::Power(a) => commands::power(a),
        Command::Appendix(a) => commands::appendix(a),
    };
    match outcome.and_then(|(report, status)| report.emit(cli.out.as_deref()).map(|_| status)) {
        Ok(status) => status,
        Err(e) => {
            eprintln!("error: {e:#}");
            Status::BadInput
        }
    }
}

#[cfg(test)]
mod tests {
    use std::path::{Path, PathBuf};

    use serde_json::Value;
    use tempfile::TempDir;
    use ugate::exact::pauli::{i_kron, Z};
    use ugate::exact::AlgebraElement;
    use ugate::numeric::{FloatAlgebraElement, UnitaryMatrix};

    use super::*;

    /// Runs `ugate args --out <dir>/report.json` in process.
    fn run(dir: &Path, args: &[&str]) -> (i32, Value) {
        let out = dir.join("report.json");
        let argv = ["ugate"]
            .iter()
            .chain(args)
            .copied()
            .chain(["--out", s(&out)]);
        let code = match Cli::try_parse_from(argv) {
            Ok(cli) => crate::run(&cli) as i32,
            Err(_) => 1,
        };
        let report = std::fs::read_to_string(&out)
            .ok()
            .and_then(|s| serde_json::from_str(&s).ok())
            .unwrap_or(Value::Null);
        let _ = std::fs::remove_file(&out);
        (code, report)
    }

    fn write_json<T: serde::Serialize>(dir: &Path, name: &str, value: &T) -> PathBuf {
        let p = dir.join(name);
        std::fs::write(&p, serde_json::to_string(value).unwrap()).unwrap();
        p
    }

    fn s(p: &Path) -> &str {
        p.to_str().unwrap()
    }

    #[test]
    fn certify_regression_seed_and_verify() {
        let dir = TempDir::new().unwrap();
        let cert = dir.path().join("seed-42.cert.json");
        let (code, report) = run(
            dir.path(),
            &[
                "certify",
                "--seed",
                "42",
                "--max-abs",
                "3",
                "--cert-out",
                s(&cert),
            ],
        );
        assert_eq!(code, 0);
        assert_eq!(report["result"]["generates"], true);
        assert!(cert.exists());
        let (code, report) = run(dir.path(), &["verify", "--cert", s(&cert)]);
        assert_eq!(code, 0);
        assert_eq!(report["result"]["valid"], true);

        // Corrupting one row makes the certificate unsound: exit 2.
        let mut doc: Value =
            serde_json::from_str(&std::fs::read_to_string(&cert).unwrap()).unwrap();
        doc["rows"][6][0] = Value::String("12345/1".into());
        let bad = write_json(dir.path(), "bad.cert.json", &doc);
        let (code, report) = run(dir.path(), &["verify", "--cert", s(&bad)]);
        assert_eq!(code, 2);
        assert_eq!(report["result"]["valid"], false);
    }

    #[test]
    fn degenerate_matrices_do_not_generate() {
        let dir = TempDir::new().unwrap();
        let zero = write_json(dir.path(), "zero.json", &AlgebraElement::zero());
        let (code, report) = run(dir.path(), &["certify", "--matrix", s(&zero)]);
        assert_eq!(code, 2);
        assert_eq!(report["result"]["rank"], 0);

        let zz = write_json(dir.path(), "swap_symmetric.json", &i_kron(Z, Z));
        let (code, report) = run(dir.path(), &["certify", "--matrix", s(&zz)]);
        assert_eq!(code, 2);
        assert_eq!(report["result"]["rank"], 1);
        assert!(!dir.path().join("swap_symmetric.cert.json").exists());
    }

    #[test]
    fn malformed_input_exits_one() {
        let dir = TempDir::new().unwrap();
        let junk = dir.path().join("junk.json");
        std::fs::write(&junk, "{ not json").unwrap();
        assert_eq!(run(dir.path(), &["verify", "--cert", s(&junk)]).0, 1);
        assert_eq!(run(dir.path(), &["certify", "--matrix", s(&junk)]).0, 1);
        assert_eq!(run(dir.path(), &["density", "--samples", "0"]).0, 1);
        assert_eq!(run(dir.path(), &["sample", "--count", "0"]).0, 1);
        assert_eq!(
            run(
                dir.path(),
                &["appendix", "double", "--p", "1", "--q", "1", "--eps", "0"]
            )
            .0,
            1
        );
        assert_eq!(
            run(
                dir.path(),
                &["appendix", "double", "--p", "NaN", "--q", "1"]
            )
            .0,
            1
        );
        assert_eq!(
            run(dir.path(), &["compile", "--identity", "--max-len", "0"]).0,
            1
        );
    }

    #[test]
    fn density_and_sample() {
        let dir = TempDir::new().unwrap();
        let (code, report) = run(
            dir.path(),
            &["density", "--first-seed", "42", "--samples", "1"],
        );
        assert_eq!(code, 0);
        assert_eq!(report["result"]["successes"], 1);
        let (code, report) = run(dir.path(), &["sample", "--seed", "42", "--count", "2"]);
        assert_eq!(code, 0);
        assert_eq!(report["result"].as_array().unwrap().len(), 2);
        assert_eq!(
            report["result"][0]["coordinates"].as_array().unwrap().len(),
            15
        );
    }

    #[test]
    fn compile_trivial_targets() {
        let dir = TempDir::new().unwrap();
        let (code, report) = run(
            dir.path(),
            &["compile", "--generator", "--depth", "0", "--max-len", "3"],
        );
        assert_eq!(code, 0);
        let c = &report["result"]["compilation"];
        assert!(c["distance"].as_f64().unwrap() < 1e-12);
        assert_eq!(c["sequence"], "G");

        let (code, report) = run(
            dir.path(),
            &["compile", "--identity", "--depth", "2", "--max-len", "3"],
        );
        assert_eq!(code, 0);
        assert_eq!(report["result"]["compilation"]["sequence"], "");
        assert_eq!(report["result"]["compilation"]["length"], 0);
    }

    #[test]
    fn compile_haar_target_regression() {
        let dir = TempDir::new().unwrap();
        let net = dir.path().join("net.bin");
        let (code, built) = run(
            dir.path(),
            &[
                "net-build",
                "--max-len",
                "6",
                "--net-out",
                s(&net),
                "--binary",
            ],
        );
        assert_eq!(code, 0);
        let (code, report) = run(
            dir.path(),
            &[
                "compile",
                "--net",
                s(&net),
                "--haar-seed",
                "1",
                "--depth",
                "2",
            ],
        );
        assert_eq!(code, 0);
        let c = &report["result"]["compilation"];
        assert_eq!(c["net_fingerprint"], built["result"]["fingerprint"]);
        let d = c["distance"].as_f64().unwrap();
        assert!((d - 1.0057875343875686).abs() < 1e-9, "{d}");
        assert_eq!(c["per_level_errors"].as_array().unwrap().len(), 3);
        // A goal the compiler cannot meet: exit 5.
        let (code, report) = run(
            dir.path(),
            &[
                "compile",
                "--net",
                s(&net),
                "--haar-seed",
                "1",
                "--depth",
                "2",
                "--goal",
                "0.1",
            ],
        );
        assert_eq!(code, 5);
        assert_eq!(report["result"]["goal_met"], false);
    }

    #[test]
    fn local_gate_target() {
        let dir = TempDir::new().unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let hadamard = write_json(
            dir.path(),
            "h.json",
            &[[[h, 0.0], [h, 0.0]], [[h, 0.0], [-h, 0.0]]],
        );
        let (code, report) = run(
            dir.path(),
            &[
                "compile",
                "--local",
                s(&hadamard),
                "--qubit",
                "second",
                "--depth",
                "1",
                "--max-len",
                "4",
            ],
        );
        assert_eq!(code, 0);
        assert!(
            report["result"]["compilation"]["distance"]
                .as_f64()
                .unwrap()
                <= 2f64.sqrt()
        );
        let not_unitary = write_json(
            dir.path(),
            "bad.json",
            &[[[1.0, 0.0], [1.0, 0.0]], [[0.0, 0.0], [1.0, 0.0]]],
        );
        assert_eq!(
            run(dir.path(), &["compile", "--local", s(&not_unitary)]).0,
            1
        );
    }

    #[test]
    fn convergence_failure_exits_three() {
        // With g = I the net is just the identity, so the residual for the
        // traceless target i Z(x)Z has no phase to align and the commutator split fails.
        let dir = TempDir::new().unwrap();
        let gate = write_json(dir.path(), "id.json", &UnitaryMatrix::identity());
        let zz = FloatAlgebraElement::from_exact(&i_kron(Z, Z))
            .scale(std::f64::consts::FRAC_PI_2)
            .exp();
        let target = write_json(dir.path(), "zz.json", &zz);
        let (code, report) = run(
            dir.path(),
            &[
                "compile",
                "--gate",
                s(&gate),
                "--target",
                s(&target),
                "--depth",
                "1",
                "--max-len",
                "2",
            ],
        );
        assert_eq!(code, 3);
        assert!(report["result"]["error"]
            .as_str()
            .unwrap()
            .contains("level 1"));
    }

    #[test]
    fn memory_budget_exits_four_with_partial_net() {
        let dir = TempDir::new().unwrap();
        let net = dir.path().join("net.json");
        let (code, report) = run(
            dir.path(),
            &[
                "net-build",
                "--max-len",
                "8",
                "--net-out",
                s(&net),
                "--memory-budget",
                "20K",
            ],
        );
        assert_eq!(code, 4);
        assert_eq!(report["result"]["complete"], false);
        assert!(net.exists());
        let (code, report) = run(
            dir.path(),
            &[
                "compile",
                "--identity",
                "--max-len",
                "8",
                "--depth",
                "0",
                "--memory-budget",
                "20K",
            ],
        );
        assert_eq!(code, 4);
        assert_eq!(report["result"]["net"]["complete"], false);
    }

    #[test]
    fn power_search_outcomes() {
        let dir = TempDir::new().unwrap();
        let (code, report) = run(dir.path(), &["power", "--k-max", "100000"]);
        assert_eq!(code, 0);
        assert!(report["result"]["power"]["log_norm"].as_f64().unwrap() <= 0.5);
        let g = FloatAlgebraElement::from_exact(&i_kron(Z, Z))
            .scale(2.0)
            .exp();
        let gate = write_json(dir.path(), "sym.json", &g);
        let (code, report) = run(
            dir.path(),
            &["power", "--gate", s(&gate), "--k-max", "2000"],
        );
        assert_eq!(code, 2);
        assert_eq!(report["result"]["found"], false);
    }

    #[test]
    fn appendix_examples() {
        let dir = TempDir::new().unwrap();
        let (code, report) = run(dir.path(), &["appendix", "double", "--p", "1", "--q", "1"]);
        assert_eq!(code, 0);
        assert_eq!(report["result"]["display"], "1");
        assert_eq!(report["result"]["residual_plus"], 0.0);
        assert_eq!(report["result"]["residual_minus"], 0.0);

        let (code, report) = run(
            dir.path(),
            &[
                "appendix", "double", "--p", "3", "--q", "1", "--eps", "1e-6",
            ],
        );
        assert_eq!(code, 0);
        assert_eq!(report["result"]["element"]["y"], "985/1393");
        assert!(report["result"]["residual_plus"].as_f64().unwrap().abs() < 1e-6);
        assert!(report["result"]["residual_minus"].as_f64().unwrap().abs() < 1e-6);

        let (code, report) = run(
            dir.path(),
            &["appendix", "scatter", "--seed", "42", "--eps", "1e-3"],
        );
        assert_eq!(code, 0);
        let r = &report["result"];
        for key in [
            "within_eps",
            "t0_off_variety",
            "s_off_variety",
            "conjugate_off_variety",
        ] {
            assert_eq!(r[key], true, "{key}");
        }
    }
}
