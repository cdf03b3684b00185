//! `dualgi`: generalized inverses, decompositions and solves of dual matrices
//! stored as JSON files.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use dual_cep::io::{parse_matrix, parse_vector};
use dual_cep::{
    core_ep_residuals, dcepgi_compact, dcepgi_exists, ddgi_exists, dmpgi_exists, drazin_residuals,
    dual_cn_split, dual_core_ep_decompose, dual_core_exists, dual_group, index, mpdgi,
    penrose_residuals, rel_residual, solve_general, solve_unique_in_range, DualMatrix, DualVector,
    Error, ExistenceCertificate, Tol, DEFAULT_TOLERANCE,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

const EXIT_USAGE: u8 = 1;
const EXIT_NONEXISTENCE: u8 = 2;
const EXIT_HYPOTHESIS: u8 = 3;

#[derive(Parser)]
#[command(
    name = "dualgi",
    version,
    about = "Generalized inverses of dual matrices"
)]
struct Cli {
    /// Relative residual tolerance for existence tests.
    #[arg(long, global = true, env = "DUALGI_TOL", default_value_t = DEFAULT_TOLERANCE)]
    tol: f64,
    /// Seed for randomized spot checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute a dual generalized inverse.
    Inverse {
        #[arg(long, value_enum)]
        kind: Kind,
        input: PathBuf,
    },
    /// Dual core-EP decomposition and, when it exists, the core-nilpotent split.
    Decompose { input: PathBuf },
    /// Solve `Âx̂ = b̂` through the dual core-EP inverse.
    Solve {
        #[arg(long, value_enum, default_value_t = Mode::General)]
        mode: Mode,
        /// Number of random ŷ checked against the general solution.
        #[arg(long, default_value_t = 20)]
        samples: usize,
        matrix: PathBuf,
        rhs: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Mpdgi,
    Dmpgi,
    Ddgi,
    Group,
    Core,
    Cep,
    CepCompact,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Mode {
    General,
    UniqueInRange,
}

#[derive(Serialize)]
struct Input {
    path: String,
    sha256: String,
}

#[derive(Serialize)]
struct Report {
    command: String,
    status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    message: Option<String>,
    inputs: Vec<Input>,
    tolerance: f64,
    seed: u64,
    certificates: BTreeMap<String, ExistenceCertificate>,
    matrices: BTreeMap<String, DualMatrix>,
    vectors: BTreeMap<String, DualVector>,
    residuals: BTreeMap<String, f64>,
    details: BTreeMap<String, Value>,
    elapsed_seconds: f64,
}

impl Report {
    fn new(command: String, tol: f64, seed: u64) -> Self {
        Report {
            command,
            status: "ok",
            message: None,
            inputs: Vec::new(),
            tolerance: tol,
            seed,
            certificates: BTreeMap::new(),
            matrices: BTreeMap::new(),
            vectors: BTreeMap::new(),
            residuals: BTreeMap::new(),
            details: BTreeMap::new(),
            elapsed_seconds: 0.0,
        }
    }

    fn read(&mut self, path: &Path) -> anyhow::Result<String> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read {}", path.display()))?;
        self.inputs.push(Input {
            path: path.display().to_string(),
            sha256: hex::encode(Sha256::digest(text.as_bytes())),
        });
        Ok(text)
    }

    fn certificate(&mut self, name: &str, mut cert: ExistenceCertificate) -> ExistenceCertificate {
        // the witness is reported once, under `matrices`
        let witness = cert.witness.take();
        self.certificates.insert(name.into(), cert.clone());
        cert.witness = witness;
        cert
    }

    fn fail(&mut self, err: &Error) -> u8 {
        let (status, code) = match err {
            Error::DoesNotExist(cert) => {
                let mut cert = (**cert).clone();
                cert.witness = None;
                self.certificates.entry("existence".into()).or_insert(cert);
                ("does-not-exist", EXIT_NONEXISTENCE)
            }
            Error::Domain(_) => ("does-not-exist", EXIT_NONEXISTENCE),
            Error::Hypothesis(_) => ("hypothesis-failed", EXIT_HYPOTHESIS),
            _ => ("invalid-input", EXIT_USAGE),
        };
        self.status = status;
        self.message = Some(err.to_string());
        code
    }
}

fn inverse(rep: &mut Report, kind: Kind, x: &DualMatrix, tol: Tol) -> dual_cep::Result<()> {
    let witnessed = |rep: &mut Report, cert: ExistenceCertificate| -> dual_cep::Result<()> {
        let cert = rep.certificate("existence", cert);
        let w = cert.into_result()?;
        rep.matrices.insert("inverse".into(), w);
        Ok(())
    };
    match kind {
        Kind::Mpdgi => {
            let w = mpdgi(x, tol);
            rep.residuals.extend(penrose_residuals(x, &w));
            rep.matrices.insert("inverse".into(), w);
        }
        Kind::Dmpgi => witnessed(rep, dmpgi_exists(x, tol))?,
        Kind::Ddgi => witnessed(rep, ddgi_exists(x, tol)?)?,
        Kind::Cep => witnessed(rep, dcepgi_exists(x, tol)?)?,
        Kind::Core => witnessed(rep, dual_core_exists(x, tol)?)?,
        Kind::Group => {
            let w = dual_group(x, tol)?;
            rep.residuals.extend(drazin_residuals(x, &w, 1)?);
            rep.matrices.insert("inverse".into(), w);
        }
        Kind::CepCompact => {
            rep.certificate("existence", dcepgi_exists(x, tol)?);
            rep.certificate("ddgi_existence", ddgi_exists(x, tol)?);
            let w = dcepgi_compact(x, tol)?;
            let m = index(x.std(), tol)?;
            rep.residuals.extend(core_ep_residuals(x, &w, m)?);
            rep.matrices.insert("inverse".into(), w);
        }
    }
    if let Some(cert) = rep.certificates.get("existence") {
        rep.residuals.extend(cert.witness_residuals.clone());
    }
    Ok(())
}

fn decompose(rep: &mut Report, x: &DualMatrix, tol: Tol) -> dual_cep::Result<()> {
    let d = dual_core_ep_decompose(x, tol)?;
    rep.matrices.insert("u_hat".into(), d.u_hat.clone());
    rep.matrices.insert("t1_hat".into(), d.t1_hat.clone());
    rep.matrices.insert("t2_hat".into(), d.t2_hat.clone());
    rep.matrices.insert("n_hat".into(), d.n_hat.clone());
    rep.matrices
        .insert("u3".into(), DualMatrix::real(d.u3.clone()));
    rep.details.insert("canonical".into(), json!(d.canonical));
    rep.details.insert("rank".into(), json!(d.rank()));
    rep.details.insert("index".into(), json!(d.index()));
    rep.residuals
        .insert("reconstruction".into(), rel_residual(&d.reconstruct(), x));
    rep.residuals
        .insert("unitarity".into(), d.unitarity_residual());
    rep.residuals
        .insert("sylvester".into(), d.sylvester_residual());
    rep.residuals
        .insert("lower_left".into(), d.lower_left_residual(x));
    rep.residuals
        .insert("nilpotency".into(), d.nilpotency_residual());

    let cert = rep.certificate("dcepgi_existence", dcepgi_exists(x, tol)?);
    rep.details
        .insert("split_exists".into(), json!(cert.exists));
    if cert.exists {
        let split = dual_cn_split(x, tol)?;
        let (a, b) = split.orthogonality_residuals();
        rep.residuals.insert("split_orthogonality_left".into(), a);
        rep.residuals.insert("split_orthogonality_right".into(), b);
        rep.residuals.insert(
            "split_nilpotency".into(),
            split.nilpotency_residual(d.index()),
        );
        rep.matrices.insert("core_part".into(), split.core);
        rep.matrices
            .insert("nilpotent_part".into(), split.nilpotent);
    }
    Ok(())
}

fn solve(
    rep: &mut Report,
    mode: Mode,
    samples: usize,
    x: &DualMatrix,
    b: &DualVector,
    tol: Tol,
    seed: u64,
) -> dual_cep::Result<()> {
    match mode {
        Mode::General => {
            let s = solve_general(x, b, tol)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let n = x.nrows();
            let mut worst = 0.0f64;
            for _ in 0..samples {
                let std: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
                let inf: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
                let y = DualVector::from_slices(&std, &inf)?;
                worst = worst.max(s.residual_at(&y)?);
            }
            rep.details.insert("index".into(), json!(s.index));
            rep.details.insert("samples".into(), json!(samples));
            rep.residuals
                .insert("surrogate".into(), s.surrogate_residual);
            rep.residuals.insert("in_range".into(), s.in_range_residual);
            rep.residuals.insert("surrogate_worst_sample".into(), worst);
            rep.vectors
                .insert("particular".into(), s.particular.clone());
            rep.vectors.insert("target".into(), s.target().clone());
            rep.matrices
                .insert("homogeneous_projector".into(), s.homogeneous_projector);
        }
        Mode::UniqueInRange => {
            let u = solve_unique_in_range(x, b, tol)?;
            rep.residuals
                .insert("membership".into(), u.membership_residual);
            rep.residuals.insert("equation".into(), u.equation_residual);
            rep.vectors.insert("solution".into(), u.solution);
        }
    }
    Ok(())
}

fn run(cli: &Cli, rep: &mut Report) -> anyhow::Result<u8> {
    if !(cli.tol.is_finite() && cli.tol > 0.0) {
        bail!("--tol must be a positive number, got {}", cli.tol);
    }
    let tol = Tol::new(cli.tol);
    let outcome = match &cli.command {
        Command::Inverse { kind, input } => {
            let x = parse_matrix(&rep.read(input)?);
            x.and_then(|x| inverse(rep, *kind, &x, tol))
        }
        Command::Decompose { input } => {
            let x = parse_matrix(&rep.read(input)?);
            x.and_then(|x| decompose(rep, &x, tol))
        }
        Command::Solve {
            mode,
            samples,
            matrix,
            rhs,
        } => {
            let x = parse_matrix(&rep.read(matrix)?);
            let b = parse_vector(&rep.read(rhs)?);
            x.and_then(|x| b.and_then(|b| solve(rep, *mode, *samples, &x, &b, tol, cli.seed)))
        }
    };
    Ok(match outcome {
        Ok(()) => 0,
        Err(e) => rep.fail(&e),
    })
}

fn command_name(c: &Command) -> String {
    match c {
        Command::Inverse { kind, .. } => {
            format!("inverse {}", kind.to_possible_value().unwrap().get_name())
        }
        Command::Decompose { .. } => "decompose".into(),
        Command::Solve { mode, .. } => {
            format!("solve {}", mode.to_possible_value().unwrap().get_name())
        }
    }
}

fn emit(report: &Report, output: Option<&Path>) -> anyhow::Result<()> {
    let text = serde_json::to_string_pretty(report)? + "\n";
    match output {
        Some(p) => std::fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    let start = Instant::now();
    let mut rep = Report::new(command_name(&cli.command), cli.tol, cli.seed);
    let code = match run(&cli, &mut rep) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    if let Some(msg) = &rep.message {
        eprintln!("error: {msg}");
    }
    rep.elapsed_seconds = start.elapsed().as_secs_f64();
    if let Err(e) = emit(&rep, cli.output.as_deref()) {
        eprintln!("error: {e:#}");
        return ExitCode::from(EXIT_USAGE);
    }
    ExitCode::from(code)
}
