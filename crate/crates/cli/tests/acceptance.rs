//! Acceptance criteria: prints one PASS/FAIL line per criterion and exits
//! nonzero when any criterion fails.

use std::error::Error;
use std::path::{Path, PathBuf};
use std::process::Command;

use lagvac::elasticity::{crack_solve, crack_weakstar_admissible, slic_fields_at, Admissibility, SlicHistory, StressLaw};
use lagvac::measure::consistency_check;
use lagvac::scenarios::{
    collapse_solution, nonphysical_solution, offcenter_solution, riemann_solution, shock_curve_with,
    shock_through_rarefaction, vacuum_riemann_solve, vint_identity, CollapseParams, CollapseSolution, NormCase,
    OffcenterParams, OffcenterSolution, VrpSolution,
};
use lagvac::solution::{CurveKind, PiecewiseSolution};
use lagvac::thermo::{TableSpec, TabulatedLaw};
use lagvac::verify::{
    check_euler_rh, check_generalized_rh, check_offcenter_rh, entropy_audit, euler_shock, perturb_curve_speed,
    single_jump_solution, verify_solution, weakstar_residual, EulerCurve, EulerSide, EulerState, History, JumpClass,
    Polytropic, TestFunctionFamily, VerifyOptions, WeakStarOptions,
};
use lagvac::waves::shock_jump;
use lagvac::{GasLaw, SymState};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, Box<dyn Error>>;
type Criterion = (&'static str, fn() -> Check);
type RunFiles = (i32, Vec<(String, Vec<u8>)>);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+).into());
        }
    };
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn s(h: f64, u: f64) -> SymState {
    SymState { h, u }
}

fn beta2() -> GasLaw {
    GasLaw::with_beta(2.0).unwrap()
}

fn table_law() -> Result<GasLaw, Box<dyn Error>> {
    let vols: Vec<f64> = (0..=80).map(|k| 10f64.powf(-2.0 + 0.05 * k as f64)).collect();
    let spec: TableSpec = TabulatedLaw::from_law(&GasLaw::gamma(1.4)?, &vols)?.spec().clone();
    Ok(GasLaw::table(spec)?)
}

fn laws() -> Result<Vec<(&'static str, GasLaw)>, Box<dyn Error>> {
    Ok(vec![
        ("beta=2", beta2()),
        ("beta=3.5", GasLaw::with_beta(3.5)?),
        ("gamma=1.4", GasLaw::gamma(1.4)?),
        ("raw gamma=5/3", GasLaw::gamma_raw(5.0 / 3.0, 1.0)?),
        ("table", table_law()?),
    ])
}

/// Uniform times strictly inside `[lo, hi]`, away from events.
fn random_times(r: &mut ChaCha8Rng, sol: &PiecewiseSolution, lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let pad = 1e-3 * (hi - lo);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let t = r.gen_range(lo + pad..hi - pad);
        if !sol.events.iter().any(|e| (e - t).abs() < pad) {
            out.push(t);
        }
    }
    out
}

fn symmetric_collapse() -> lagvac::Result<CollapseSolution> {
    collapse_solution(
        &beta2(),
        CollapseParams { h_l: 1.0, h_r: 1.0, u_minus: 1.0, u_plus: -1.0, a: 2.0, b: 2.0 },
    )
}

fn mixed_collapse() -> lagvac::Result<CollapseSolution> {
    collapse_solution(
        &beta2(),
        CollapseParams { h_l: 0.1, h_r: 1.0, u_minus: 0.0, u_plus: -0.1, a: 2.0, b: 2.0 },
    )
}

fn vrp() -> lagvac::Result<VrpSolution> {
    vacuum_riemann_solve(&beta2(), s(1.0, 0.0), s(1.0, 0.0), 1.0, [-6.0, 6.0])
}

fn nonphysical() -> lagvac::Result<PiecewiseSolution> {
    nonphysical_solution(&beta2(), 1.0, 0.5, -0.5, 1.0, [-1.0, 1.0], 0.8)
}

fn offcenter() -> lagvac::Result<OffcenterSolution> {
    offcenter_solution(
        &beta2(),
        OffcenterParams { h_l: 1.0, u_l: 1.0, h_r: 0.5, u_r: 0.0, w0: 0.5, focus_time: None, domain: None },
    )
}

/// Every piecewise scenario used by the RH, weak* and entropy checks.
fn scenarios() -> Result<Vec<PiecewiseSolution>, Box<dyn Error>> {
    let law = beta2();
    let dom = [-1.0, 1.0];
    Ok(vec![
        riemann_solution(&law, s(1.0, 1.0), s(1.0, -1.0), dom)?.1,
        riemann_solution(&law, s(1.0, 0.0), s(2.0, 0.0), dom)?.1,
        riemann_solution(&law, s(1.0, -2.0), s(1.0, 2.0), [-2.0, 2.0])?.1,
        symmetric_collapse()?.solution,
        mixed_collapse()?.solution,
        vrp()?.solution,
        nonphysical()?,
        offcenter()?.solution,
    ])
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

fn c1_identities() -> Check {
    let mut r = rng(1);
    let mut worst: f64 = 0.0;
    for (name, law) in laws()? {
        for _ in 0..20 {
            let h: f64 = r.gen_range(0.2..5.0);
            let d = 1e-4 * h;
            let diff = |f: &dyn Fn(f64) -> f64| (f(h + d) - f(h - d)) / (2.0 * d);
            let c = law.c(h);
            let errs = [
                rel(diff(&|x| law.p(x)), c),
                rel(diff(&|x| law.v(x)), -1.0 / c),
                rel(diff(&|x| law.eps(x)), law.p(h) / c),
            ];
            let e = errs.iter().fold(0.0f64, |m, x| m.max(*x));
            ensure!(e <= 1e-6, "{name}: relative error {e:.3e} at h = {h}");
            worst = worst.max(e);
        }
    }
    Ok(format!("5 laws x 20 points, max relative error {worst:.2e}"))
}

fn c2_shock_oracle() -> Check {
    let mut r = rng(2);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let beta = r.gen_range(1.0..=5.0);
        let beta = if beta == 1.0 { 1.0 + 1e-9 } else { beta };
        let h = 10.0 * (1.0 - r.gen::<f64>());
        let z = 1.0 + 49.0 * (1.0 - r.gen::<f64>());
        let law = GasLaw::with_beta(beta)?;
        let (du, sigma) = shock_jump(&law, h, z * h);
        let dp = law.p(z * h) - law.p(h);
        let dv = law.v(h) - law.v(z * h);
        let e = rel(du, (dp * dv).sqrt()).max(rel(sigma, (dp / dv).sqrt()));
        ensure!(e <= 1e-10, "beta = {beta}, h = {h}, z = {z}: relative gap {e:.3e}");
        worst = worst.max(e);
    }
    Ok(format!("100 triples, max relative gap {worst:.2e}"))
}

fn c3_generalized_rh() -> Check {
    let mut r = rng(3);
    let mut worst: f64 = 0.0;
    let mut vacuum_rows = 0;
    let all = scenarios()?;
    for sol in &all {
        let [lo, hi] = sol.valid_time;
        let times = random_times(&mut r, sol, lo, hi, 20);
        for row in check_generalized_rh(sol, &times)? {
            ensure!(row.max() <= 1e-9, "{}: curve {} at t = {} residual {:.3e}", sol.label, row.curve, row.t, row.max());
            if row.kind == CurveKind::Vacuum {
                vacuum_rows += 1;
                let snap = &sol.curves_at(row.t)?[row.curve];
                ensure!(row.speed == 0.0, "{}: vacuum curve moves with speed {}", sol.label, row.speed);
                let du = snap.right.u - snap.left.u;
                ensure!((row.w_rate - du).abs() <= 1e-9, "{}: w' = {} but [u] = {du}", sol.label, row.w_rate);
            }
            worst = worst.max(row.max());
        }
    }
    let o = offcenter()?;
    let times = random_times(&mut r, &o.solution, o.shock.endpoint.0, o.shock.t_hash, 20);
    for row in check_offcenter_rh(&o, &times)? {
        ensure!(row.max() <= 1e-9, "offcenter shock at t = {} residual {:.3e}", row.t, row.max());
        worst = worst.max(row.max());
    }
    Ok(format!(
        "{} scenarios plus the curved shock, {vacuum_rows} vacuum rows, max residual {worst:.2e}",
        all.len()
    ))
}

/// Largest residual of a least-squares line through `(t, y)`.
fn line_fit_residual(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    let (st, sy) = pts.iter().fold((0.0, 0.0), |(a, b), (t, y)| (a + t, b + y));
    let (mt, my) = (st / n, sy / n);
    let (sxx, sxy) = pts.iter().fold((0.0, 0.0), |(a, b), (t, y)| (a + (t - mt).powi(2), b + (t - mt) * (y - my)));
    let k = sxy / sxx;
    pts.iter().map(|(t, y)| (y - my - k * (t - mt)).abs()).fold(0.0, f64::max)
}

fn c4_norms() -> Check {
    let mut r = rng(4);
    let mut worst: f64 = 0.0;
    let mut fit: f64 = 0.0;
    let mut cases = Vec::new();
    let mut run = |label: &str,
                   sol: &PiecewiseSolution,
                   lo: f64,
                   hi: f64,
                   closed: &dyn Fn(f64) -> f64|
     -> Result<(), Box<dyn Error>> {
        let times = random_times(&mut r, sol, lo, hi, 20);
        let mut pts = Vec::new();
        for t in times {
            let q = sol.measure_at(t)?.total_variation(1e-10)?.quadrature;
            let e = (q - closed(t)).abs();
            ensure!(e <= 1e-7, "{label}: |quadrature - closed form| = {e:.3e} at t = {t}");
            worst = worst.max(e);
            pts.push((t, q));
        }
        let f = line_fit_residual(&pts);
        ensure!(f <= 1e-8, "{label}: linear fit residual {f:.3e}");
        fit = fit.max(f);
        cases.push(label.to_string());
        Ok(())
    };
    for c in [symmetric_collapse()?, mixed_collapse()?] {
        let [lo, hi] = c.solution.valid_time;
        for (a, b) in [(lo, 0.0), (0.0, hi)] {
            let case = c.norm_case(0.5 * (a + b));
            let name = match case {
                NormCase::PreCollapse => "pre-collapse",
                NormCase::TwoShocks => "two shocks",
                NormCase::ShockRarefaction => "shock+rarefaction",
                _ => return Err(format!("unexpected case {case:?}").into()),
            };
            run(name, &c.solution, a, b, &|t| c.norm_closed_form(t))?;
        }
    }
    let v = vrp()?;
    let [lo, hi] = v.solution.valid_time;
    run("vrp", &v.solution, lo, hi, &|t| v.norm_closed_form(t))?;
    for need in ["pre-collapse", "two shocks", "shock+rarefaction"] {
        ensure!(cases.iter().any(|c| c == need), "case {need} not exercised");
    }
    Ok(format!("cases {}; max error {worst:.2e}, max fit residual {fit:.2e}", cases.join(", ")))
}

fn c5_vint() -> Check {
    let mut r = rng(5);
    let mut worst: f64 = 0.0;
    let mut n = 0;
    for (name, law) in laws()? {
        for _ in 0..10 {
            let h = r.gen_range(0.1..=5.0);
            let e = vint_identity(&law, h)?.abs();
            ensure!(e <= 1e-8, "{name}: residual {e:.3e} at h = {h}");
            worst = worst.max(e);
        }
        n += 1;
    }
    Ok(format!("{n} laws x 10 points, max residual {worst:.2e}"))
}

fn c6_shock_curve() -> Check {
    let mut rel_worst: f64 = 0.0;
    let mut end_worst: f64 = 0.0;
    for beta in [1.5, 2.0, 3.0, 4.5] {
        let law = GasLaw::with_beta(beta)?;
        let (h0, z0, t0) = (1.0, 2.0, 1.0);
        let c = shock_through_rarefaction(&law, h0, z0, t0)?;
        ensure!((c.samples[0].h - h0).abs() <= 1e-12, "beta = {beta}: curve starts at h = {}", c.samples[0].h);
        let t_end = c.endpoint.0;
        for w in c.samples.windows(2) {
            ensure!(w[1].h < w[0].h && w[1].sigma < w[0].sigma, "beta = {beta}: sigma not increasing in h near z = {}", w[1].z);
            // Near the collapse point t - t_end drops below the resolution of t.
            let resolved = w[1].t - t_end > 1e-13 * t_end;
            ensure!(
                w[1].t < w[0].t || (!resolved && w[1].t == w[0].t),
                "beta = {beta}: t not decreasing toward the collapse near z = {}",
                w[1].z
            );
        }
        for p in &c.samples {
            let e = (p.h * lagvac::scenarios::f_of_z(beta, p.z) - c.a_const).abs() / c.a_const.max(1.0);
            ensure!(e <= 1e-10, "beta = {beta}: relation off by {e:.3e} at z = {}", p.z);
            rel_worst = rel_worst.max(e);
        }
        let coarse = shock_curve_with(&law, h0, z0, t0, 1e6, 64)?;
        let fine = shock_curve_with(&law, h0, z0, t0, 1e7, 64)?;
        let e = rel(coarse.endpoint.0, fine.endpoint.0).max(rel(coarse.endpoint.1, fine.endpoint.1));
        ensure!(e <= 1e-6, "beta = {beta}: endpoint moves by {e:.3e} from z_max 1e6 to 1e7");
        end_worst = end_worst.max(e);
    }
    Ok(format!("4 exponents; relation {rel_worst:.2e}, endpoint refinement {end_worst:.2e}"))
}

fn weakstar<H: History>(h: &H) -> Result<lagvac::verify::WeakStarReport, Box<dyn Error>> {
    let fam = TestFunctionFamily::default_for(h)?;
    Ok(weakstar_residual(h, &fam, &WeakStarOptions::default())?)
}

fn c7_weakstar() -> Check {
    let mut worst: f64 = 0.0;
    let mut min_slope = f64::INFINITY;
    let mut labels = Vec::new();
    let mut judge = |label: String, rep: lagvac::verify::WeakStarReport| -> Result<(), Box<dyn Error>> {
        ensure!(rep.max_residual <= 1e-6, "{label}: residual {:.3e}", rep.max_residual);
        if let Some(k) = rep.slope {
            ensure!(k >= 0.9, "{label}: refinement slope {k:.3}");
            min_slope = min_slope.min(k);
        }
        worst = worst.max(rep.max_residual);
        labels.push(label);
        Ok(())
    };
    let all = scenarios()?;
    for sol in all.iter().filter(|s| s.label != "nonphysical") {
        judge(sol.label.clone(), weakstar(sol)?)?;
    }
    judge("crack".into(), weakstar(&SlicHistory::new(StressLaw::power(1.0, 2.0)?, 2.0, 1.5, 1.0)?)?)?;

    let bad = perturb_curve_speed(&all[0], 1, 1e-3)?;
    let rep = weakstar(&bad)?;
    ensure!(rep.max_residual > 1e-6, "speed corruption missed: residual {:.3e}", rep.max_residual);
    let rh = check_generalized_rh(&bad, &[0.2])?;
    ensure!(rh.iter().any(|r| r.max() > 1e-9), "speed corruption missed by the RH check");
    let lin = weakstar(&SlicHistory::new(StressLaw::linear(0.5, 1.0)?, 2.0, 1.5, 1.0)?)?;
    ensure!(lin.max_residual > 1e-6, "crack with L_tau > 0 passes: residual {:.3e}", lin.max_residual);
    Ok(format!(
        "{} histories, max residual {worst:.2e}, min slope {min_slope:.3}; corrupted {:.2e}, L_tau > 0 crack {:.2e}",
        labels.len(),
        rep.max_residual,
        lin.max_residual
    ))
}

fn c8_nonphysical() -> Check {
    let sol = nonphysical()?;
    let rep = verify_solution(&sol, b"nonphysical", &VerifyOptions::default())?;
    ensure!(
        rep.verdicts.equation && !rep.verdicts.consistency,
        "equation {}, consistency {} (want PASS, FAIL)",
        rep.verdicts.equation,
        rep.verdicts.consistency
    );
    let m = sol.measure_at(0.4)?;
    ensure!(!consistency_check(&m, &Default::default()).is_consistent(), "consistency check passes on its own");
    Ok(format!("equation PASS (residual {:.2e}), consistency FAIL", rep.weakstar.max_residual))
}

fn c9_entropy() -> Check {
    let mut r = rng(9);
    let mut vac: f64 = 0.0;
    let mut checked = 0;
    for sol in scenarios()?.iter().filter(|s| s.label != "nonphysical") {
        let [lo, hi] = sol.valid_time;
        let times = random_times(&mut r, sol, lo, hi, 20);
        let a = entropy_audit(sol, &times, 1e-12)?;
        ensure!(a.passed(), "{}: {} violations, first {:?}", sol.label, a.violations.len(), a.violations[0]);
        ensure!(a.vacuum_max <= 1e-12, "{}: vacuum entropy mass {:.3e}", sol.label, a.vacuum_max);
        vac = vac.max(a.vacuum_max);
        checked += a.curves_checked;
    }
    let o = offcenter()?;
    for p in o.shock.samples.iter().step_by((o.shock.samples.len() / 10).max(1)).take(10) {
        let e = o.shock_entropy(p.z);
        ensure!(e < 0.0, "curved shock entropy production {e} at z = {}", p.z);
    }
    let exp = single_jump_solution(&beta2(), 2.0, 1.0, [-1.0, 1.0], 0.5)?;
    let a = entropy_audit(&exp, &[0.25], 1e-12)?;
    ensure!(!a.passed(), "expansion shock not flagged");
    Ok(format!(
        "{checked} jumps clean, vacuum mass max {vac:.2e}; expansion shock flagged with mass {:.3e}",
        a.violations[0].mass
    ))
}

fn c10_euler() -> Check {
    let eos = Polytropic { a: 1.0, gamma: 1.4, cv: 1.0 };
    let ahead = EulerSide { v: 1.0, u: 0.0, s: 0.0 };
    let (behind, sigma) = euler_shock(eos, ahead, 0.5)?;
    let fixtures = [
        (
            "shock",
            JumpClass::Shock,
            EulerState {
                eos,
                regions: vec![behind, ahead],
                curves: vec![EulerCurve { x0: 0.0, speed: sigma, w0: 0.0, rate: 0.0 }],
            },
        ),
        (
            "contact",
            JumpClass::Contact,
            EulerState {
                eos,
                regions: vec![
                    EulerSide { v: 1.0, u: 0.3, s: 0.0 },
                    EulerSide { v: 2.0, u: 0.3, s: 1.4 * 2f64.ln() },
                ],
                curves: vec![EulerCurve { x0: 0.2, speed: 0.0, w0: 0.0, rate: 0.0 }],
            },
        ),
        (
            "vacuum",
            JumpClass::Vacuum,
            EulerState {
                eos,
                regions: vec![
                    EulerSide { v: f64::INFINITY, u: -1.0, s: 0.3 },
                    EulerSide { v: f64::INFINITY, u: 1.0, s: -2.0 },
                ],
                curves: vec![EulerCurve { x0: 0.0, speed: 0.0, w0: 0.5, rate: 2.0 }],
            },
        ),
    ];
    let mut worst: f64 = 0.0;
    for (name, class, st) in &fixtures {
        for row in check_euler_rh(st, &[0.1, 0.4, 0.7, 1.0])? {
            ensure!(row.class == *class, "{name}: classified as {:?}", row.class);
            ensure!(row.max() <= 1e-9, "{name}: residual {:.3e} at t = {}", row.max(), row.t);
            worst = worst.max(row.max());
        }
    }
    ensure!(behind.s > ahead.s, "shock lowers the entropy");
    Ok(format!("shock, contact and vacuum fixtures classified; max residual {worst:.2e}"))
}

fn c11_elasticity() -> Check {
    let mut r = rng(11);
    let mut gap: f64 = 0.0;
    let mut rh: f64 = 0.0;
    for _ in 0..50 {
        let tau_inf = r.gen_range(0.5..3.0);
        let m = r.gen_range(1.2..5.0);
        let lambda = r.gen_range(1.5..4.0);
        let alpha = r.gen_range(1.0..lambda - 0.1);
        let law = StressLaw::power(tau_inf, m)?;
        let c = crack_solve(&law, lambda, alpha)?;
        let tag = format!("tau_inf = {tau_inf}, m = {m}, lambda = {lambda}, alpha = {alpha}");
        let d = (c.theta - c.theta_algebraic).abs();
        ensure!(d <= 1e-10, "{tag}: theta forms differ by {d:.3e}");
        ensure!(c.theta < 0.0, "{tag}: theta = {}", c.theta);
        ensure!(c.crack_mass >= 0.0, "{tag}: crack mass {}", c.crack_mass);
        ensure!(c.energy_gap > 0.0, "{tag}: energy gap {}", c.energy_gap);
        let f = slic_fields_at(&law, &c, r.gen_range(0.1..2.0))?;
        for row in &f.rh {
            ensure!(row.max() <= 1e-10, "{tag}: RH residual {:.3e} at x = {}", row.max(), row.x);
            rh = rh.max(row.max());
        }
        gap = gap.max(c.energy_gap);
    }
    let saturating: Vec<(f64, f64)> = (0..60).map(|k| 0.5 + 0.25 * k as f64).map(|u| (u, 1.0 - 1.0 / u)).collect();
    let linear: Vec<(f64, f64)> = (0..60).map(|k| 0.5 + 0.25 * k as f64).map(|u| (u, 0.5 * (u - 1.0))).collect();
    let verdicts = [
        ("power", StressLaw::power(1.0, 2.0)?, true),
        ("saturating table", StressLaw::table(&saturating)?, true),
        ("linear", StressLaw::linear(0.5, 1.0)?, false),
        ("linear table", StressLaw::table(&linear)?, false),
    ];
    for (name, law, want) in &verdicts {
        let got = crack_weakstar_admissible(law);
        let ok = matches!(got, Admissibility::Admissible);
        ensure!(ok == *want, "{name}: verdict {got:?}");
        if !want {
            ensure!(matches!(got, Admissibility::Inadmissible { .. }), "{name}: verdict {got:?}");
        }
    }
    Ok(format!("50 configurations, max slic RH {rh:.2e}; admissibility flips on 4 fixtures"))
}

fn examples_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("examples")
}

fn run_cli(args: &[&str], out: &Path) -> Result<RunFiles, Box<dyn Error>> {
    std::fs::create_dir_all(out)?;
    let st = Command::new(env!("CARGO_BIN_EXE_lagvac"))
        .args(args)
        .arg("--out-dir")
        .arg(out)
        .current_dir(examples_dir())
        .output()?;
    let mut files = Vec::new();
    for e in std::fs::read_dir(out)? {
        let p = e?.path();
        files.push((p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read(&p)?));
    }
    files.sort();
    files.push(("stdout".into(), st.stdout));
    Ok((st.status.code().unwrap_or(-1), files))
}

fn c12_determinism() -> Check {
    let golden: &[&[&str]] = &[
        &["riemann", "--config", "riemann_symmetric.conf"],
        &["riemann", "--config", "riemann_equal.conf"],
        &["riemann", "--config", "riemann_vacuum.conf"],
        &["collapse", "--config", "collapse.conf"],
        &["collapse", "--config", "collapse_shock_rarefaction.conf"],
        &["vrp", "--config", "vrp.conf"],
        &["offcenter", "--config", "offcenter.conf"],
        &["elastic", "--config", "elastic.conf"],
        &["elastic", "--config", "elastic_linear.conf"],
        &["verify", "nonphysical.json"],
        &["verify", "corrupted.json"],
        &["verify", "measure.json"],
    ];
    let tmp = tempfile::tempdir()?;
    let mut bytes = 0;
    for (i, args) in golden.iter().enumerate() {
        let a = run_cli(args, &tmp.path().join(format!("{i}a")))?;
        let b = run_cli(args, &tmp.path().join(format!("{i}b")))?;
        ensure!(a.0 == b.0, "{args:?}: exit codes {} and {}", a.0, b.0);
        ensure!(a.0 != 1, "{args:?}: runtime error");
        ensure!(a.1.len() == b.1.len(), "{args:?}: different file sets");
        for ((na, da), (nb, db)) in a.1.iter().zip(&b.1) {
            ensure!(na == nb && da == db, "{args:?}: {na} differs between runs");
            bytes += da.len();
        }
    }
    Ok(format!("{} golden runs byte-identical ({bytes} bytes each)", golden.len()))
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("closed-form identities", c1_identities),
        ("shock oracle equivalence", c2_shock_oracle),
        ("generalized RH", c3_generalized_rh),
        ("norm reproduction", c4_norms),
        ("vint identity", c5_vint),
        ("shock through rarefaction", c6_shock_curve),
        ("weak* residual oracle", c7_weakstar),
        ("nonphysical example", c8_nonphysical),
        ("entropy", c9_entropy),
        ("Euler 3x3 jumps", c10_euler),
        ("elasticity", c11_elasticity),
        ("determinism", c12_determinism),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = std::time::Instant::now();
        let out = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match out {
            Ok(detail) => println!("criterion {:2} {name}: PASS ({detail}) [{secs:.1}s]", i + 1),
            Err(e) => {
                failed += 1;
                println!("criterion {:2} {name}: FAIL ({e}) [{secs:.1}s]", i + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} of {} criteria failed", criteria.len());
        std::process::exit(1);
    }
}
