//! Acceptance run: one PASS/FAIL line per criterion. Arguments restrict the run to the
//! named criteria, e.g. `cargo test --test acceptance -- AC6 AC9`.

use std::process::ExitCode;
use std::time::Instant;

use rumin_core::grid::{dc_squared_residual, discretize_bump, integration_by_parts_residual, GridComplex, GridSpec};
use rumin_core::harness::sample::{exact_symbolic, random_bump_form, SampleOptions};
use rumin_core::harness::{run_degree_one_control, run_gn_experiment, run_pairing_test, run_poincare_experiment, ExperimentConfig};
use rumin_core::rumin::RuminComplex;
use rumin_core::solver::checks::{folland_residual, manufactured_commutation, manufactured_inverse};
use rumin_core::solver::laplace::LaplaceOptions;
use rumin_core::solver::primitive::{solve_primitive, Method, SolveOptions};
use rumin_core::verify::{self, Certificate, VerifyOptions};
use rumin_core::Result;

type Outcome = Result<(bool, String)>;

fn cert(c: Certificate) -> Outcome {
    Ok((c.passed, format!("{} ({:.1}s)", c.detail, c.seconds)))
}

fn opts() -> VerifyOptions {
    VerifyOptions::default()
}

fn ac1() -> Outcome {
    let t = Instant::now();
    let c = verify::chain_property(&opts());
    let secs = t.elapsed().as_secs_f64();
    Ok((c.passed && secs < 60.0, format!("{}; {secs:.1}s including construction of the complexes", c.detail)))
}

fn ac6() -> Outcome {
    let sym = verify::laplacian_commutation(&VerifyOptions { n_max: 2, ..opts() });
    // α = Δ₁g with g compactly supported, so that the box problems see the whole-group inverses
    let g = random_bump_form(21, 1, &SampleOptions::default())?;
    let mut rel = Vec::new();
    for points in [33, 65] {
        let spec = GridSpec::cube(2.0, 1.0, points)?;
        let t = Instant::now();
        let r = manufactured_commutation(&g, &spec, &LaplaceOptions::default())?;
        println!("    d_cΔ₁⁻¹α vs Δ₂⁻¹d_cα at {points} points: relative {:.3e} ({} iterations, {:.0}s)", r.relative, r.iterations, t.elapsed().as_secs_f64());
        rel.push(r.relative);
    }
    let ok = sym.passed && rel[1] <= 0.02 && rel[1] < rel[0];
    Ok((ok, format!("symbolic: {}; numeric relative difference {:.2e} at 33, {:.2e} at 65", sym.detail, rel[0], rel[1])))
}

fn ac8() -> Outcome {
    let gc = GridComplex::get()?;
    let cx = gc.cx.clone();
    let so = SampleOptions { radius: 1.5, power: 8 };
    let mut ok = true;
    let mut notes = Vec::new();
    for h in 0..2 {
        let g = random_bump_form(7 + h as u64, h, &so)?;
        let r: Vec<f64> = [33, 65].iter().map(|&p| dc_squared_residual(&gc, &discretize_bump(&cx, &g, &GridSpec::cube(2.0, 1.0, p)?))).collect::<Result<_>>()?;
        let factor = r[0] / r[1];
        ok &= (3.0..=5.0).contains(&factor);
        notes.push(format!("d_c² h={h}: {:.2e} → {:.2e} (factor {factor:.2})", r[0], r[1]));
    }
    let spec = GridSpec::default_n1();
    let mut worst: f64 = 0.0;
    for a in 0..=2usize {
        let alpha = discretize_bump(&cx, &random_bump_form(11, a, &so)?, &spec);
        let phi = discretize_bump(&cx, &random_bump_form(12, 2 - a, &so)?, &spec);
        worst = worst.max(integration_by_parts_residual(&gc, &alpha, &phi)?);
    }
    ok &= worst < 1e-3;
    notes.push(format!("integration by parts at 65: {worst:.2e}"));
    Ok((ok, notes.join("; ")))
}

fn ac9() -> Outcome {
    let cx = RuminComplex::get(1)?;
    let spec = GridSpec::default_n1();
    let so = SampleOptions::default();
    let mut ok = true;
    let mut notes = Vec::new();
    let runs = [(Method::Homotopy, 1, 0.05), (Method::Homotopy, 2, 0.10), (Method::Homotopy, 3, 0.05), (Method::Laplacian, 2, 0.05), (Method::Laplacian, 3, 0.05)];
    for (method, h, tol) in runs {
        let (_, om) = exact_symbolic(30 + h as u64, h, &so)?;
        let omega = discretize_bump(&cx, &om, &spec);
        let opts = SolveOptions::with_method(method);
        let t = Instant::now();
        let (_, rep) = solve_primitive(&omega, &opts)?;
        let secs = t.elapsed().as_secs_f64();
        let res = if h == 2 { rep.residual_lq_half } else { rep.residual_lq };
        ok &= res <= tol && secs < 300.0;
        println!("    {method} h={h}: residual {res:.3e} (L^{}), closedness {:.1e}, {secs:.0}s", if h == 2 { 2 } else { 4 }, rep.closedness);
        notes.push(format!("{method} h={h} {:.1}%", 100.0 * res));
    }
    let g = random_bump_form(3, 0, &SampleOptions { radius: 1.5, power: 6 })?;
    let m = manufactured_inverse(&g, &spec, &LaplaceOptions::default())?;
    ok &= m.error <= 0.01 && m.seconds < 300.0;
    notes.push(format!("Δ₀⁻¹ manufactured error {:.2}% ({:.0}s)", 100.0 * m.error, m.seconds));
    let f: Vec<f64> = [33, 65].iter().map(|&p| folland_residual(&GridSpec::cube(2.0, 1.0, p)?)).collect::<Result<_>>()?;
    ok &= f[1] < 0.5 * f[0];
    notes.push(format!("ρ⁻² residual {:.2e} → {:.2e}", f[0], f[1]));
    Ok((ok, notes.join("; ")))
}

fn ac10() -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    for h in [2, 3] {
        let out = run_poincare_experiment(&ExperimentConfig { h, ..Default::default() })?;
        let s = &out.summaries[0];
        ok &= out.passed();
        notes.push(format!("h={h} max {:?} stability {:.3}", s.meshes.iter().map(|m| m.max_ratio.map(|v| (v * 1e4).round() / 1e4)).collect::<Vec<_>>(), s.stability_factor.unwrap_or(f64::NAN)));
    }
    let out = run_gn_experiment(&ExperimentConfig::default())?;
    ok &= out.passed();
    for s in &out.summaries {
        notes.push(format!("{} stability {:.3}", s.experiment, s.stability_factor.unwrap_or(f64::NAN)));
    }
    Ok((ok, notes.join("; ")))
}

fn ac11() -> Outcome {
    let r = run_degree_one_control(&ExperimentConfig::default())?;
    Ok((r.passed, format!("ratio(8)/ratio(1) = {:.2}, refinement change {:.1}%", r.growth, 100.0 * r.refinement_change.unwrap_or(f64::NAN))))
}

fn ac12() -> Outcome {
    let r = run_pairing_test(&ExperimentConfig::default())?;
    Ok((r.passed, format!("closed max {:.1e}, ⋆ω control min {:.1e}, tol {:.0e} (random non-closed median {:.1e})", r.max_closed, r.min_control, r.tol, r.median_random_control)))
}

fn main() -> ExitCode {
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| a.starts_with("AC")).collect();
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome>)> = vec![
        ("AC1", Box::new(ac1)),
        ("AC2", Box::new(|| cert(verify::star_identities(&opts())))),
        ("AC3", Box::new(|| cert(verify::projection_contract(&opts())))),
        ("AC4", Box::new(|| cert(verify::dimension_oracle(&opts())))),
        ("AC5", Box::new(|| cert(verify::leibniz_structure(&opts())))),
        ("AC6", Box::new(ac6)),
        ("AC7", Box::new(|| cert(verify::dilation_weights(&opts())))),
        ("AC8", Box::new(ac8)),
        ("AC9", Box::new(ac9)),
        ("AC10", Box::new(ac10)),
        ("AC11", Box::new(ac11)),
        ("AC12", Box::new(ac12)),
    ];
    let mut failed = 0;
    for (id, f) in criteria {
        if !filter.is_empty() && !filter.iter().any(|x| x == id) {
            continue;
        }
        let t = Instant::now();
        let (pass, detail) = f().unwrap_or_else(|e| (false, format!("error: {e}")));
        println!("{id} {} - {detail} [{:.0}s]", if pass { "PASS" } else { "FAIL" }, t.elapsed().as_secs_f64());
        failed += usize::from(!pass);
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
