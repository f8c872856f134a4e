//! Subcommand implementations: build a solution from the configuration,
//! sample it, and write CSV/JSON artifacts.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use lagvac::elasticity::{crack_solve, crack_weakstar_admissible, slic_fields_at, Admissibility, Limit};
use lagvac::io::{write_csv, Cell};
use lagvac::measure::{consistency_check, ConsistencyOptions, RadonMeasure};
use lagvac::scenarios::{
    collapse_solution, entropy_production, nonphysical_solution, offcenter_solution, riemann_solution,
    vacuum_riemann_solve, CollapseParams, OffcenterParams, OffcenterSolution,
};
use lagvac::solution::PiecewiseSolution;
use lagvac::verify::{check_offcenter_rh, verify_solution, VerificationReport, VerifyOptions};
use lagvac::waves::WaveFan;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::RunConfig;

/// Flags shared by every subcommand.
#[derive(Debug, Clone)]
pub struct Globals {
    pub out_dir: PathBuf,
    pub tol: Option<f64>,
    pub times: Option<Vec<f64>>,
    pub grid: Option<usize>,
}

/// Result of a subcommand that ran to completion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail,
}

struct Ctx<'a> {
    cfg: &'a RunConfig,
    g: &'a Globals,
}

impl Ctx<'_> {
    fn grid(&self) -> Result<usize> {
        let n = match self.g.grid {
            Some(n) => n,
            None => self.cfg.f64_or("output", "grid", 201.0)? as usize,
        };
        if n < 2 {
            bail!("grid needs at least two points");
        }
        Ok(n)
    }

    /// Explicit times, else `n` points spread over `[lo, hi]`.
    fn times(&self, lo: f64, hi: f64, n: usize) -> Result<Vec<f64>> {
        if let Some(t) = &self.g.times {
            return Ok(t.clone());
        }
        if let Some(s) = self.cfg.get("output", "times") {
            return crate::config::parse_times(s);
        }
        Ok((0..n).map(|k| lo + (hi - lo) * (k + 1) as f64 / n as f64).collect())
    }

    fn tol(&self, default: f64) -> Result<f64> {
        let t = match self.g.tol {
            Some(t) => t,
            None => self.cfg.f64_or("output", "tol", default)?,
        };
        if !(t > 0.0) {
            bail!("tolerance must be positive, got {t}");
        }
        Ok(t)
    }

    fn path(&self, name: &str) -> Result<PathBuf> {
        std::fs::create_dir_all(&self.g.out_dir)
            .with_context(|| format!("creating {}", self.g.out_dir.display()))?;
        Ok(self.g.out_dir.join(name))
    }

    fn csv(&self, name: &str, header: &[&str], rows: &[Vec<Cell>]) -> Result<()> {
        let path = self.path(name)?;
        let f = std::fs::File::create(&path).with_context(|| format!("writing {}", path.display()))?;
        write_csv(std::io::BufWriter::new(f), header, rows)?;
        log::info!("wrote {}", path.display());
        Ok(())
    }

    fn json<T: Serialize>(&self, name: &str, value: &T) -> Result<()> {
        let path = self.path(name)?;
        let mut s = serde_json::to_string_pretty(value)?;
        s.push('\n');
        std::fs::write(&path, s).with_context(|| format!("writing {}", path.display()))?;
        log::info!("wrote {}", path.display());
        Ok(())
    }

    fn text(&self, name: &str, s: &str) -> Result<()> {
        let path = self.path(name)?;
        std::fs::write(&path, s).with_context(|| format!("writing {}", path.display()))?;
        Ok(())
    }

    fn check_times(&self, sol: &PiecewiseSolution, times: &[f64]) -> Result<()> {
        let [lo, hi] = sol.valid_time;
        if let Some(t) = times.iter().find(|t| !(**t >= lo && **t <= hi)) {
            bail!("time {t} outside the validity interval [{lo}, {hi}] of {}", sol.label);
        }
        Ok(())
    }

    fn profiles(&self, sol: &PiecewiseSolution, times: &[f64]) -> Result<()> {
        let n = self.grid()?;
        let rows: Vec<Vec<Cell>> = times
            .par_iter()
            .map(|&t| sol.profile(t, n))
            .collect::<lagvac::Result<Vec<_>>>()?
            .into_iter()
            .flatten()
            .map(|r| vec![r.t.into(), r.x.into(), r.h.into(), r.u.into(), r.p.into(), r.v.into(), r.region_id.into()])
            .collect();
        self.csv("profile.csv", &["t", "x", "h", "u", "p", "v", "region_id"], &rows)
    }

    fn atoms(&self, sol: &PiecewiseSolution, times: &[f64]) -> Result<()> {
        let mut rows = Vec::new();
        for &t in times {
            for c in sol.curves_at(t)? {
                if c.kind == lagvac::solution::CurveKind::Vacuum {
                    rows.push(vec![t.into(), c.x.into(), c.w.into(), c.w_rate.into()]);
                }
            }
        }
        self.csv("atoms.csv", &["t", "x_atom", "w", "rate"], &rows)
    }

    fn entropy(&self, sol: &PiecewiseSolution, times: &[f64]) -> Result<()> {
        let mut rows = Vec::new();
        for &t in times.iter().filter(|t| !sol.is_event(**t)) {
            for (i, a) in entropy_production(sol, t)?.into_iter().enumerate() {
                rows.push(vec![t.into(), a.x.into(), a.kind.name().into(), a.mass.into(), i.into()]);
            }
        }
        self.csv("entropy.csv", &["t", "x_disc", "kind", "mass", "curve"], &rows)
    }

    fn norms(&self, sol: &PiecewiseSolution, times: &[f64], closed: impl Fn(f64) -> (f64, String) + Sync) -> Result<()> {
        let tol = self.tol(1e-10)?;
        let rows: Vec<Vec<Cell>> = times
            .par_iter()
            .map(|&t| -> Result<Vec<Cell>> {
                let q = sol.measure_at(t)?.total_variation(tol)?;
                let (exact, case) = closed(t);
                Ok(vec![
                    t.into(),
                    exact.into(),
                    q.quadrature.into(),
                    (q.quadrature - exact).abs().into(),
                    q.error_estimate.into(),
                    case.into(),
                ])
            })
            .collect::<Result<_>>()?;
        self.csv("norms.csv", &["t", "closed_form", "quadrature", "abs_err", "error_estimate", "case"], &rows)
    }
}

#[derive(Serialize)]
struct FanReport<'a> {
    fan: &'a WaveFan,
    middle: Option<lagvac::SymState>,
    has_vacuum: bool,
}

fn fan_report(fan: &WaveFan) -> FanReport<'_> {
    FanReport {
        fan,
        middle: fan.middle(),
        has_vacuum: fan.has_vacuum(),
    }
}

pub fn riemann(cfg: &RunConfig, g: &Globals) -> Result<Outcome> {
    let c = Ctx { cfg, g };
    let law = cfg.gas_law()?;
    let left = cfg.state("riemann", "l", (1.0, 1.0))?;
    let right = cfg.state("riemann", "r", (1.0, -1.0))?;
    let domain = cfg.pair_or("riemann", "domain", [-1.0, 1.0])?;
    let (fan, sol) = riemann_solution(&law, left, right, domain)?;
    let times = c.times(0.0, sol.valid_time[1], 4)?;
    c.check_times(&sol, &times)?;
    c.json("fan.json", &fan_report(&fan))?;
    c.profiles(&sol, &times)?;
    Ok(Outcome::Pass)
}

fn collapse_params(cfg: &RunConfig) -> Result<CollapseParams> {
    let s = "collapse";
    Ok(CollapseParams {
        h_l: cfg.f64_or(s, "h_l", 1.0)?,
        h_r: cfg.f64_or(s, "h_r", 1.0)?,
        u_minus: cfg.f64_or(s, "u_minus", 1.0)?,
        u_plus: cfg.f64_or(s, "u_plus", -1.0)?,
        a: cfg.f64_or(s, "a", 2.0)?,
        b: cfg.f64_or(s, "b", 2.0)?,
    })
}

pub fn collapse(cfg: &RunConfig, g: &Globals) -> Result<Outcome> {
    let c = Ctx { cfg, g };
    let law = cfg.gas_law()?;
    let col = collapse_solution(&law, collapse_params(cfg)?)?;
    let sol = &col.solution;
    let [lo, hi] = sol.valid_time;
    let times = c.times(lo, hi, 10)?;
    c.check_times(sol, &times)?;
    c.json("fan.json", &fan_report(&col.post_fan))?;
    c.profiles(sol, &times)?;
    c.atoms(sol, &times)?;
    c.entropy(sol, &times)?;
    c.norms(sol, &times, |t| {
        (col.norm_closed_form(t), serde_json::to_value(col.norm_case(t)).unwrap().as_str().unwrap_or("").to_string())
    })?;
    Ok(Outcome::Pass)
}

fn vrp_parts(cfg: &RunConfig) -> Result<lagvac::scenarios::VrpSolution> {
    let law = cfg.gas_law()?;
    let left = cfg.state("vrp", "l", (1.0, 0.0))?;
    let right = cfg.state("vrp", "r", (1.0, 0.0))?;
    let w0 = cfg.f64_or("vrp", "w0", 1.0)?;
    let domain = cfg.pair_or("vrp", "domain", [-2.0, 2.0])?;
    Ok(vacuum_riemann_solve(&law, left, right, w0, domain)?)
}

pub fn vrp(cfg: &RunConfig, g: &Globals) -> Result<Outcome> {
    let c = Ctx { cfg, g };
    let v = vrp_parts(cfg)?;
    let sol = &v.solution;
    let times = c.times(0.0, sol.valid_time[1], 10)?;
    c.check_times(sol, &times)?;
    c.json("fan.json", &fan_report(&v.fan))?;
    c.profiles(sol, &times)?;
    c.atoms(sol, &times)?;
    c.entropy(sol, &times)?;
    c.norms(sol, &times, |t| (v.norm_closed_form(t), "vrp".to_string()))?;
    Ok(Outcome::Pass)
}

fn offcenter_parts(cfg: &RunConfig) -> Result<OffcenterSolution> {
    let s = "offcenter";
    let law = cfg.gas_law()?;
    let domain = match cfg.get(s, "domain") {
        Some(_) => Some(cfg.pair_or(s, "domain", [0.0, 0.0])?),
        None => None,
    };
    Ok(offcenter_solution(
        &law,
        OffcenterParams {
            h_l: cfg.f64_or(s, "h_l", 1.0)?,
            u_l: cfg.f64_or(s, "u_l", 1.0)?,
            h_r: cfg.f64_or(s, "h_r", 0.5)?,
            u_r: cfg.f64_or(s, "u_r", 0.0)?,
            w0: cfg.f64_or(s, "w0", 0.5)?,
            focus_time: cfg.opt_f64(s, "focus_time")?,
            domain,
        },
    )?)
}

#[derive(Serialize)]
struct OffcenterSummary {
    collapse_time: f64,
    delta_u: f64,
    exit_time: Option<f64>,
    transmitted_focus: f64,
    a_const: f64,
    z_hash: f64,
    h_hash: f64,
    t_hash: f64,
    endpoint: (f64, f64),
    post_rarefaction: lagvac::waves::Wave,
}

pub fn offcenter(cfg: &RunConfig, g: &Globals) -> Result<Outcome> {
    let c = Ctx { cfg, g };
    let o = offcenter_parts(cfg)?;
    let sol = &o.solution;
    let times = c.times(0.0, o.collapse_time, 5)?;
    c.check_times(sol, &times)?;
    c.profiles(sol, &times)?;
    c.atoms(sol, &times)?;
    let rows: Vec<Vec<Cell>> = o
        .shock
        .samples
        .iter()
        .map(|s| {
            vec![
                s.h.into(),
                s.z.into(),
                s.t.into(),
                s.x.into(),
                s.sigma.into(),
                o.shock_entropy(s.z).into(),
                o.four_state_residual(s.z).into(),
            ]
        })
        .collect();
    c.csv("shock_curve.csv", &["h", "z", "t", "x", "sigma", "entropy", "four_state_residual"], &rows)?;
    let sh = &o.shock;
    c.json(
        "offcenter.json",
        &OffcenterSummary {
            collapse_time: o.collapse_time,
            delta_u: o.delta_u,
            exit_time: o.exit_time,
            transmitted_focus: o.transmitted_focus,
            a_const: sh.a_const,
            z_hash: sh.z_hash,
            h_hash: sh.h_hash,
            t_hash: sh.t_hash,
            endpoint: sh.endpoint,
            post_rarefaction: o.post_rarefaction,
        },
    )?;
    Ok(Outcome::Pass)
}

#[derive(Serialize)]
struct MeasureReport {
    config_hash: String,
    total_variation: f64,
    consistency: lagvac::measure::Consistency,
}

fn verify_options(c: &Ctx) -> Result<VerifyOptions> {
    Ok(VerifyOptions {
        tol: c.tol(1e-6)?,
        ..VerifyOptions::default()
    })
}

fn finish(c: &Ctx, report: &VerificationReport) -> Result<Outcome> {
    let summary = report.summary();
    c.json("report.json", report)?;
    c.text("summary.txt", &summary)?;
    print!("{summary}");
    Ok(if report.verdicts.all() { Outcome::Pass } else { Outcome::Fail })
}

/// `target`: a scenario id (`riemann`, `collapse`, `vrp`, `offcenter`,
/// `nonphysical`) or a path to a solution or measure JSON file.
pub fn verify(cfg: &RunConfig, g: &Globals, target: &str) -> Result<Outcome> {
    let c = Ctx { cfg, g };
    let opts = verify_options(&c)?;
    let law = cfg.gas_law()?;
    let sol = match target {
        "riemann" => {
            let left = cfg.state("riemann", "l", (1.0, 1.0))?;
            let right = cfg.state("riemann", "r", (1.0, -1.0))?;
            riemann_solution(&law, left, right, cfg.pair_or("riemann", "domain", [-1.0, 1.0])?)?.1
        }
        "collapse" => collapse_solution(&law, collapse_params(cfg)?)?.solution,
        "vrp" => vrp_parts(cfg)?.solution,
        "nonphysical" => {
            let s = "nonphysical";
            nonphysical_solution(
                &law,
                cfg.f64_or(s, "h", 1.0)?,
                cfg.f64_or(s, "u_l", 0.5)?,
                cfg.f64_or(s, "u_r", -0.5)?,
                cfg.f64_or(s, "w0", 1.0)?,
                cfg.pair_or(s, "domain", [-1.0, 1.0])?,
                cfg.f64_or(s, "t_max", 0.8)?,
            )?
        }
        "offcenter" => {
            let o = offcenter_parts(cfg)?;
            let mut report = verify_solution(&o.solution, &cfg.raw, &opts)?;
            let (t0, t1) = (o.shock.endpoint.0, o.shock.t_hash);
            let times: Vec<f64> = (1..=5).map(|k| t0 + (t1 - t0) * k as f64 / 6.0).collect();
            let extra = check_offcenter_rh(&o, &times)?;
            report.rh.extend(extra);
            report.rh_worst = report
                .rh
                .iter()
                .max_by(|a, b| a.max().total_cmp(&b.max()))
                .map(|r| lagvac::verify::RhFailure {
                    curve: r.curve,
                    t: r.t,
                    x: r.x,
                    residual: r.max(),
                });
            report.verdicts.rh = report.rh_worst.is_none_or(|w| w.residual <= opts.rh_tol);
            return finish(&c, &report);
        }
        path => return verify_file(&c, Path::new(path), &opts),
    };
    let report = verify_solution(&sol, &cfg.raw, &opts)?;
    finish(&c, &report)
}

fn verify_file(c: &Ctx, path: &Path, opts: &VerifyOptions) -> Result<Outcome> {
    let bytes = std::fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    let value: serde_json::Value = serde_json::from_slice(&bytes).with_context(|| format!("parsing {}", path.display()))?;
    if value.get("phases").is_some() {
        let sol: PiecewiseSolution = serde_json::from_value(value).context("solution JSON")?;
        sol.validate()?;
        let report = verify_solution(&sol, &bytes, opts)?;
        return finish(c, &report);
    }
    let m: RadonMeasure = serde_json::from_value(value).context("measure JSON")?;
    let consistency = consistency_check(&m, &ConsistencyOptions::default());
    let report = MeasureReport {
        config_hash: lagvac::verify::config_hash(&bytes),
        total_variation: m.total_variation(c.tol(1e-10)?)?.quadrature,
        consistency: consistency.clone(),
    };
    c.json("report.json", &report)?;
    let line = format!("consistency: {}\n", if consistency.is_consistent() { "PASS" } else { "FAIL" });
    c.text("summary.txt", &line)?;
    print!("{line}");
    Ok(if consistency.is_consistent() { Outcome::Pass } else { Outcome::Fail })
}

#[derive(Serialize)]
struct CrackReport {
    law: lagvac::elasticity::StressLaw,
    crack: lagvac::elasticity::CrackSolution,
    admissibility: Admissibility,
    admissible: bool,
    l_tau: Limit,
    l_w: Limit,
    tau_inf: f64,
    u0: f64,
    fields: lagvac::elasticity::SlicFields,
}

pub fn elastic(cfg: &RunConfig, g: &Globals) -> Result<Outcome> {
    let c = Ctx { cfg, g };
    let law = cfg.stress_law()?;
    let lambda = cfg.f64_or("elastic", "lambda", 2.0)?;
    let alpha = cfg.f64_or("elastic", "alpha", 1.5)?;
    let t = cfg.f64_or("elastic", "t", 1.0)?;
    let crack = crack_solve(&law, lambda, alpha)?;
    let admissibility = crack_weakstar_admissible(&law);
    c.json(
        "crack.json",
        &CrackReport {
            crack,
            admissible: admissibility == Admissibility::Admissible,
            admissibility,
            l_tau: law.l_tau(),
            l_w: law.l_w(),
            tau_inf: law.tau_inf(),
            u0: law.u0(),
            fields: slic_fields_at(&law, &crack, t)?,
            law,
        },
    )?;
    Ok(Outcome::Pass)
}
