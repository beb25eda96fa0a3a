//! `kposi` command-line front end. [`run_cli`] holds the whole program so it
//! can be driven in-process by tests.

pub mod docs;
mod worked;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use kposi_core::compound::{mult_compound, wedge};
use kposi_core::cyclic::{analyze_cyclic, build_cyclic, CyclicSpec};
use kposi_core::nonlinear::{
    check_k_content_preserving_with, lyapunov_decrement_report, simulate, wedge_trajectory, ContentCheck, Strictness,
};
use kposi_core::signreg::{classify_sign_regularity, sampled_cone_invariance, Verdict};
use kposi_core::stability::{
    cayley, certify_k_diag_stability, necessary_ct_diag, necessary_dt_diag, solve_top_compound_diagonal, stein_holds,
    KDiagOutcome,
};
use kposi_core::{DEFAULT_PD_TOL, DEFAULT_ZERO_TOL};
use serde::Serialize;
use serde_json::json;
use sha2::{Digest, Sha256};

use docs::{parse_diagonal, parse_json, read_input, CliResult, Input, MatrixDocument, SystemDocument, VectorDocument};

#[derive(Parser, Debug)]
#[command(name = "kposi", version, about = "Compounds, sign-regularity and k-diagonal stability certificates")]
struct Cli {
    /// Zero band for sign tests and Schur margins
    #[arg(long, global = true, env = "KPOSI_TOL", default_value_t = DEFAULT_ZERO_TOL)]
    tol: f64,
    /// Tolerance for positive-definiteness margins
    #[arg(long, global = true, default_value_t = DEFAULT_PD_TOL)]
    pd_tol: f64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Mode {
    Dt,
    Ct,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// k-th multiplicative compound of a matrix
    Compound {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(short)]
        k: usize,
    },
    /// Wedge product of the vectors in {"data": [[...], ...]}
    Wedge {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// SR_k / SSR_k classification, optionally with a sampled cone-invariance test
    Classify {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(short)]
        k: usize,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Certify DT k-diagonal stability
    Certify {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(short)]
        k: usize,
    },
    /// Recover P with P^(n-1) = D
    DlfRecover {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Cayley transform -(A+I)(A-I)^{-1}
    Cayley {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Principal-minor screen necessary for diagonal stability
    CheckNecessary {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum)]
        mode: Mode,
    },
    /// Build, and optionally analyze, a cyclic matrix
    Cyclic {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        alphas: Vec<f64>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        betas: Vec<f64>,
        #[arg(long)]
        ell: u32,
        #[arg(long)]
        analyze: bool,
    },
    /// Iterate x(j+1) = A phi(x(j)); CSV on stdout
    Simulate {
        #[arg(long)]
        system: PathBuf,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        x0: Vec<f64>,
        #[arg(long, default_value_t = 20)]
        steps: usize,
    },
    /// Track V(y(j)) for the wedge of k trajectories; CSV on stdout, report on stderr
    WedgeSim {
        #[arg(long)]
        system: PathBuf,
        #[arg(long)]
        initials: PathBuf,
        #[arg(short)]
        k: usize,
        #[arg(long, default_value_t = 20)]
        steps: usize,
        /// Certify A^(k) and use its D (the default when --dlf is absent)
        #[arg(long, conflicts_with = "dlf")]
        certify: bool,
        #[arg(long)]
        dlf: Option<PathBuf>,
        /// Append every state coordinate to the CSV
        #[arg(long)]
        states: bool,
    },
    /// Sampled test that phi never enlarges a k-wedge coordinate
    CheckContent {
        #[arg(long)]
        system: PathBuf,
        #[arg(short)]
        k: usize,
        #[arg(long, default_value_t = 5)]
        samples: usize,
        #[arg(long, default_value_t = 1000)]
        random: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also reject tuples where q_i vanishes while p_i does not
        #[arg(long)]
        strict: bool,
        /// Skip per-map validation when loading the system
        #[arg(long)]
        unchecked: bool,
    },
    /// Run the bundled regressions and print PASS/FAIL lines
    WorkedExamples,
}

#[derive(Serialize)]
struct Tolerances {
    zero_tol: f64,
    pd_tol: f64,
}

#[derive(Serialize)]
struct Report<'a, T: Serialize> {
    command: &'a str,
    inputs_digest: String,
    tolerances: Tolerances,
    verdicts: T,
}

/// Output of one subcommand before it is written.
struct Emit {
    stdout: String,
    stderr: String,
    code: i32,
}

impl Emit {
    fn json(value: &impl Serialize, code: i32) -> Self {
        Emit { stdout: to_json(value), stderr: String::new(), code }
    }
}

fn to_json(value: &impl Serialize) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

/// sha256 over each input's bytes and the arguments that shape the result.
fn digest(inputs: &[&Input], args: &str) -> String {
    let mut h = Sha256::new();
    for i in inputs {
        h.update((i.bytes.len() as u64).to_le_bytes());
        h.update(&i.bytes);
    }
    h.update(args.as_bytes());
    hex::encode(h.finalize())
}

fn load_matrix(path: &PathBuf) -> CliResult<(Input, kposi_core::Mat)> {
    let input = read_input(path)?;
    let m = parse_json::<MatrixDocument>(&input)?.to_mat()?;
    Ok((input, m))
}

fn load_system(path: &PathBuf, validate: bool) -> CliResult<(Input, kposi_core::nonlinear::NonlinearSystem)> {
    let input = read_input(path)?;
    let sys = parse_json::<SystemDocument>(&input)?.build(validate)?;
    Ok((input, sys))
}

fn dispatch(cli: &Cli) -> CliResult<Emit> {
    let tol = cli.tol;
    let tolerances = || Tolerances { zero_tol: cli.tol, pd_tol: cli.pd_tol };
    match &cli.command {
        Command::Compound { input, k } => {
            let (_, a) = load_matrix(input)?;
            Ok(Emit::json(&MatrixDocument::from_mat(&mult_compound(&a, *k)?), 0))
        }
        Command::Wedge { input } => {
            let input = read_input(input)?;
            let doc: VectorDocument<Vec<Vec<f64>>> = parse_json(&input)?;
            Ok(Emit::json(&wedge(&doc.data)?, 0))
        }
        Command::Classify { input, k, samples, seed } => {
            let (raw, a) = load_matrix(input)?;
            let class = classify_sign_regularity(&a, *k, tol)?;
            let cone = samples.map(|s| sampled_cone_invariance(&a, *k, s, *seed)).transpose()?;
            let code = match (&class.verdict, &cone) {
                (Verdict::None, _) => 1,
                (_, Some(c)) if !c.pass => 1,
                _ => 0,
            };
            let report = Report {
                command: "classify",
                inputs_digest: digest(&[&raw], &format!("k={k};samples={samples:?};seed={seed}")),
                tolerances: tolerances(),
                verdicts: json!({ "sign_class": class, "cone_invariance": cone }),
            };
            Ok(Emit::json(&report, code))
        }
        Command::Certify { input, k } => {
            let (raw, a) = load_matrix(input)?;
            let outcome = certify_k_diag_stability(&a, *k, tol)?;
            // at k = n−1 the certificate also yields a DLF for A itself
            let recovered = match &outcome {
                KDiagOutcome::Certified(c) if *k + 1 == a.n_rows() => {
                    let p = solve_top_compound_diagonal(&c.d)?;
                    let stein = stein_holds(&a, &p, cli.pd_tol)?;
                    Some(json!({ "p": p, "stein_holds": stein.holds, "stein_margin": stein.margin }))
                }
                _ => None,
            };
            let code = if outcome.certificate().is_some() { 0 } else { 1 };
            let report = Report {
                command: "certify",
                inputs_digest: digest(&[&raw], &format!("k={k}")),
                tolerances: tolerances(),
                verdicts: json!({ "outcome": outcome, "recovered_dlf": recovered }),
            };
            Ok(Emit::json(&report, code))
        }
        Command::DlfRecover { input } => {
            let raw = read_input(input)?;
            let d = parse_diagonal(&raw)?;
            Ok(Emit::json(&VectorDocument { data: solve_top_compound_diagonal(&d)?.entries().to_vec() }, 0))
        }
        Command::Cayley { input } => {
            let (_, a) = load_matrix(input)?;
            Ok(Emit::json(&MatrixDocument::from_mat(&cayley(&a, tol)?), 0))
        }
        Command::CheckNecessary { input, mode } => {
            let (raw, a) = load_matrix(input)?;
            let rep = match mode {
                Mode::Dt => necessary_dt_diag(&a, tol)?,
                Mode::Ct => necessary_ct_diag(&a, tol)?,
            };
            let code = if rep.passed { 0 } else { 1 };
            let report = Report {
                command: "check-necessary",
                inputs_digest: digest(&[&raw], &format!("mode={mode:?}")),
                tolerances: tolerances(),
                verdicts: rep,
            };
            Ok(Emit::json(&report, code))
        }
        Command::Cyclic { alphas, betas, ell, analyze } => {
            let spec = CyclicSpec { alphas: alphas.clone(), betas: betas.clone(), ell: *ell };
            if !analyze {
                return Ok(Emit::json(&MatrixDocument::from_mat(&build_cyclic(&spec)?), 0));
            }
            let rep = analyze_cyclic(&spec, tol)?;
            let code = if rep.ell_diag_stable { 0 } else { 1 };
            let report = Report {
                command: "cyclic",
                inputs_digest: digest(&[], &serde_json::to_string(&spec).expect("serializable")),
                tolerances: tolerances(),
                verdicts: rep,
            };
            Ok(Emit::json(&report, code))
        }
        Command::Simulate { system, x0, steps } => {
            let (_, sys) = load_system(system, true)?;
            let sim = simulate(&sys, x0, *steps)?;
            let stderr = match &sim.exit {
                Some(e) => format!("trajectory left the domain at step {}; truncated\n", e.step),
                None => String::new(),
            };
            Ok(Emit { stdout: sim.to_csv(), stderr, code: 0 })
        }
        Command::WedgeSim { system, initials, k, steps, certify: _, dlf, states } => {
            let (sys_raw, sys) = load_system(system, true)?;
            let init_raw = read_input(initials)?;
            let init: VectorDocument<Vec<Vec<f64>>> = parse_json(&init_raw)?;
            let (d, source, outcome) = match dlf {
                Some(path) => (parse_diagonal(&read_input(path)?)?, "file", None),
                None => {
                    let outcome = certify_k_diag_stability(sys.matrix(), *k, tol)?;
                    match outcome.certificate() {
                        Some(c) => (c.d.clone(), "certificate", Some(outcome.clone())),
                        None => {
                            let report = Report {
                                command: "wedge-sim",
                                inputs_digest: digest(&[&sys_raw, &init_raw], &format!("k={k};steps={steps}")),
                                tolerances: tolerances(),
                                verdicts: json!({ "certificate": outcome }),
                            };
                            return Ok(Emit { stdout: String::new(), stderr: to_json(&report), code: 1 });
                        }
                    }
                }
            };
            let traj = wedge_trajectory(&sys, *k, &init.data, &d, *steps)?;
            let dec = lyapunov_decrement_report(&traj, 0.0);
            let code = if traj.increasing_steps.is_empty() { 0 } else { 1 };
            let report = Report {
                command: "wedge-sim",
                inputs_digest: digest(&[&sys_raw, &init_raw], &format!("k={k};steps={steps};dlf={source}")),
                tolerances: tolerances(),
                verdicts: json!({
                    "dlf_source": source,
                    "d": d,
                    "certificate": outcome,
                    "truncated_at": traj.truncated_at,
                    "increasing_steps": traj.increasing_steps,
                    "decrement": dec,
                }),
            };
            Ok(Emit { stdout: traj.to_csv(*states), stderr: to_json(&report), code })
        }
        Command::CheckContent { system, k, samples, random, seed, strict, unchecked } => {
            let (raw, sys) = load_system(system, !unchecked)?;
            let opts = ContentCheck {
                samples_per_axis: *samples,
                random_tuples: *random,
                seed: *seed,
                zero_tol: tol,
                strictness: if *strict { Strictness::Definition } else { Strictness::UpperBound },
            };
            let rep = check_k_content_preserving_with(&sys, *k, &opts)?;
            let code = if rep.pass { 0 } else { 1 };
            let report = Report {
                command: "check-content",
                inputs_digest: digest(&[&raw], &format!("k={k};samples={samples};random={random};seed={seed};strict={strict}")),
                tolerances: tolerances(),
                verdicts: rep,
            };
            Ok(Emit::json(&report, code))
        }
        Command::WorkedExamples => {
            let checks = worked::run_all(tol);
            let mut out = String::new();
            for c in &checks {
                out.push_str(&format!("{}  {}: {}\n", if c.pass { "PASS" } else { "FAIL" }, c.name, c.detail));
            }
            let code = if checks.iter().all(|c| c.pass) { 0 } else { 1 };
            Ok(Emit { stdout: out, stderr: String::new(), code })
        }
    }
}

/// Runs one invocation. Exit codes: 0 success, 1 negative verdict, 2 usage or
/// input error, 3 numeric or capacity error.
pub fn run_cli<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = stderr.write_all(text.as_bytes());
                2
            } else {
                let _ = stdout.write_all(text.as_bytes());
                0
            };
        }
    };
    if !(cli.tol.is_finite() && cli.tol >= 0.0) {
        let _ = writeln!(stderr, "error: --tol must be a nonnegative number");
        return 2;
    }
    match dispatch(&cli) {
        Ok(emit) => {
            let _ = stdout.write_all(emit.stdout.as_bytes());
            let _ = stderr.write_all(emit.stderr.as_bytes());
            emit.code
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
