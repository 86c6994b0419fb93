use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use rumin_core::grid::io::{read_form, write_form};
use rumin_core::grid::GridSpec;
use rumin_core::harness::output::{emit_control, emit_experiment, emit_pairing, write_json};
use rumin_core::harness::{run_degree_one_control, run_gn_experiment, run_pairing_test, run_poincare_experiment, sample_coclosed_form, sample_exact_form, ExperimentConfig, ExperimentOutput};
use rumin_core::solver::primitive::{solve_primitive, Method, SolveOptions};
use rumin_core::verify::{render_table, verify_algebra, VerifyOptions};
use rumin_core::Result;

#[derive(Parser)]
#[command(name = "rumin", version, about = "Rumin complex on Heisenberg groups: exact checks, primitives and Poincaré experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact symbolic certificates for the complex
    VerifyAlgebra {
        /// Largest n checked
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        max_degree: usize,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = VerifyOptions::default().seed)]
        seed: u64,
        /// Write the certificates as JSON
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Solve d_c φ = ω for a form stored on disk
    Solve {
        /// Header of the input form (`.json` next to its `.bin`)
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value = "laplacian")]
        method: Method,
        /// Expected degree of the input
        #[arg(long)]
        degree: Option<usize>,
        /// Relative residual of the linear solve
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        max_iter: Option<usize>,
        /// Admissible closedness residual of the input
        #[arg(long)]
        closed_tol: Option<f64>,
        #[arg(long, default_value = "phi.json")]
        output: PathBuf,
        /// JSON report; printed to stdout when absent
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Write a sampled exact or coclosed form
    Sample {
        /// `exact` (ω = d_cψ of the given degree) or `coclosed` (degree 1)
        #[arg(long, default_value = "exact")]
        kind: String,
        #[arg(long, default_value_t = 2)]
        degree: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 65)]
        points: usize,
        #[arg(long, default_value = "omega.json")]
        output: PathBuf,
    },
    /// ‖φ‖_∞ / ‖ω‖_p over seeded exact forms
    PoincareExperiment(ExperimentArgs),
    /// Gagliardo–Nirenberg and L¹ → L^{4/3} ratios
    GnExperiment(ExperimentArgs),
    /// Growth of ‖u_k‖_∞ / ‖u_k‖_BL for truncated logarithms
    DegreeOneControl(ExperimentArgs),
    /// ∫α∧ω for exact and closed pairs against a non-closed control
    PairingTest(ExperimentArgs),
}

#[derive(Args)]
struct ExperimentArgs {
    /// `key = value` configuration file
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory, overriding `out_dir`
    #[arg(long)]
    out: Option<PathBuf>,
}

impl ExperimentArgs {
    fn load(&self) -> Result<(ExperimentConfig, PathBuf)> {
        let cfg = match &self.config {
            Some(p) => ExperimentConfig::load(p)?,
            None => ExperimentConfig::default(),
        };
        let dir = self.out.clone().or_else(|| cfg.out_dir.clone()).unwrap_or_else(|| PathBuf::from("results"));
        Ok((cfg, dir))
    }
}

fn report_experiment(dir: &Path, name: &str, out: &ExperimentOutput) -> Result<bool> {
    let files = emit_experiment(dir, name, out)?;
    for s in &out.summaries {
        let maxima: Vec<String> = s.meshes.iter().map(|m| format!("{} pts: max {} ({} used, {} failed)", m.points, m.max_ratio.map_or("-".into(), |v| format!("{v:.4e}")), m.used, m.failed)).collect();
        println!("{} h={} [{}]: {}; stability {}; {}", s.experiment, s.degree, s.quantity, maxima.join(", "), s.stability_factor.map_or("-".into(), |v| format!("{v:.3}")), if s.passed { "ok" } else { "FAIL" });
        println!("  {}", s.note);
    }
    println!("wrote {}", files.iter().map(|f| f.display().to_string()).collect::<Vec<_>>().join(", "));
    Ok(out.passed())
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::VerifyAlgebra { n, max_degree, samples, seed, json } => {
            let certs = verify_algebra(&VerifyOptions { n_max: n, samples, max_degree, seed });
            print!("{}", render_table(&certs));
            if let Some(p) = json {
                write_json(&p, &certs)?;
            }
            Ok(certs.iter().all(|c| c.passed))
        }
        Command::Solve { input, method, degree, tol, max_iter, closed_tol, output, report } => {
            let omega = read_form(&input)?;
            if let Some(d) = degree {
                if d != omega.degree {
                    return Err(rumin_core::Error::DegreeMismatch(format!("--degree {d} but the input has degree {}", omega.degree)));
                }
            }
            let mut opts = SolveOptions::with_method(method);
            if let Some(t) = tol {
                opts.laplace.tol = t;
            }
            if let Some(m) = max_iter {
                opts.laplace.max_iter = m;
            }
            if let Some(c) = closed_tol {
                opts.closed_tol = c;
                opts.homotopy.closed_tol = c;
            }
            let (phi, rep) = solve_primitive(&omega, &opts)?;
            write_form(&output, &phi)?;
            match report {
                Some(p) => write_json(&p, &rep)?,
                None => println!("{}", serde_json::to_string_pretty(&rep)?),
            }
            Ok(true)
        }
        Command::Sample { kind, degree, seed, points, output } => {
            let spec = GridSpec::cube(2.0, 1.0, points)?;
            let form = match kind.as_str() {
                "exact" => sample_exact_form(seed, degree, &spec)?.1,
                "coclosed" => sample_coclosed_form(seed, &spec)?,
                other => return Err(rumin_core::Error::Config(format!("unknown sample kind `{other}` (exact | coclosed)"))),
            };
            write_form(&output, &form)?;
            println!("wrote {} (degree {}, {} points per axis)", output.display(), form.degree, points);
            Ok(true)
        }
        Command::PoincareExperiment(a) => {
            let (cfg, dir) = a.load()?;
            report_experiment(&dir, &format!("poincare_h{}", cfg.h), &run_poincare_experiment(&cfg)?)
        }
        Command::GnExperiment(a) => {
            let (cfg, dir) = a.load()?;
            report_experiment(&dir, "gn", &run_gn_experiment(&cfg)?)
        }
        Command::DegreeOneControl(a) => {
            let (cfg, dir) = a.load()?;
            let r = run_degree_one_control(&cfg)?;
            for row in &r.rows {
                println!("k={} points={} sup={} bl={:.4e} ratio={:.4e}", row.k, row.points, row.sup, row.bl_norm, row.ratio);
            }
            println!("growth ratio(k_max)/ratio(1) = {:.3}; refinement change {}; {}", r.growth, r.refinement_change.map_or("-".into(), |v| format!("{:.2}%", 100.0 * v)), if r.passed { "ok" } else { "FAIL" });
            emit_control(&dir, &r)?;
            Ok(r.passed)
        }
        Command::PairingTest(a) => {
            let (cfg, dir) = a.load()?;
            let r = run_pairing_test(&cfg)?;
            println!("max |∫α∧ω| (closed) = {:.3e}, min (⋆ω control) = {:.3e}, tol = {:.1e}; {}", r.max_closed, r.min_control, r.tol, if r.passed { "ok" } else { "FAIL" });
            emit_pairing(&dir, &r)?;
            Ok(r.passed)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
