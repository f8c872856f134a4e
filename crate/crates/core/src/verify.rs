//! Independent checks of candidate solutions: the weak* residual of the
//! equations against smooth test functions, the generalized Rankine-Hugoniot
//! conditions, the entropy inequality, and the 3x3 Euler jump relations.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::measure::{consistency_check, Consistency, ConsistencyOptions};
use crate::quad::{self, QuadOptions};
use crate::scenarios::OffcenterSolution;
use crate::solution::{CurveKind, Line, PiecewiseSolution, Sample};
use crate::thermo::{GasLaw, SymState};

/// `(1 - s²)^4` on `|s| < 1`: compactly supported with three continuous
/// derivatives.
fn bump(s: f64) -> f64 {
    if s.abs() >= 1.0 {
        0.0
    } else {
        (1.0 - s * s).powi(4)
    }
}

fn bump_slope(s: f64) -> f64 {
    if s.abs() >= 1.0 {
        0.0
    } else {
        -8.0 * s * (1.0 - s * s).powi(3)
    }
}

/// Spatial test function centered at `center` with half-width `width`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bump {
    pub center: f64,
    pub width: f64,
}

impl Bump {
    pub fn phi(&self, x: f64) -> f64 {
        bump((x - self.center) / self.width)
    }

    pub fn dphi(&self, x: f64) -> f64 {
        bump_slope((x - self.center) / self.width) / self.width
    }

    pub fn support(&self) -> [f64; 2] {
        [self.center - self.width, self.center + self.width]
    }
}

/// Temporal test function on `(t1, t2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub t1: f64,
    pub t2: f64,
}

impl Window {
    fn s(&self, t: f64) -> f64 {
        (2.0 * t - self.t1 - self.t2) / (self.t2 - self.t1)
    }

    pub fn eta(&self, t: f64) -> f64 {
        bump(self.s(t))
    }

    pub fn deta(&self, t: f64) -> f64 {
        bump_slope(self.s(t)) * 2.0 / (self.t2 - self.t1)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestFunctionFamily {
    pub bumps: Vec<Bump>,
    pub windows: Vec<Window>,
}

impl TestFunctionFamily {
    /// Supports strictly inside the domain and the validity interval.
    pub fn validate(&self, domain: [f64; 2], valid: [f64; 2]) -> Result<()> {
        for b in &self.bumps {
            let [lo, hi] = b.support();
            if !(b.width > 0.0) || !(lo > domain[0] && hi < domain[1]) {
                return Err(Error::Domain(format!(
                    "bump support [{lo}, {hi}] is not strictly inside {domain:?}"
                )));
            }
        }
        for w in &self.windows {
            if !(w.t2 > w.t1) || !(w.t1 >= valid[0] && w.t2 <= valid[1]) {
                return Err(Error::Domain(format!(
                    "window ({}, {}) is not inside the validity interval {valid:?}",
                    w.t1, w.t2
                )));
            }
        }
        Ok(())
    }

    /// Three widths by four centers straddling the discontinuities present at
    /// mid-time, times three overlapping windows.
    pub fn default_for<H: History + ?Sized>(hist: &H) -> Result<Self> {
        let [a, b] = hist.domain();
        let [t0, t1] = hist.valid_time();
        if !(t1 > t0) {
            return Err(Error::Domain("validity interval is empty".into()));
        }
        let len = t1 - t0;
        let windows: Vec<Window> = (0..3)
            .map(|k| Window {
                t1: t0 + 0.02 * len + k as f64 * 0.24 * len,
                t2: t0 + 0.50 * len + k as f64 * 0.24 * len,
            })
            .collect();
        let tm = 0.5 * (t0 + t1);
        let mut marks: Vec<f64> = hist
            .discontinuities(tm)?
            .into_iter()
            .filter(|x| *x > a && *x < b)
            .collect();
        if marks.is_empty() {
            marks.push(0.5 * (a + b));
        }
        let span = b - a;
        let offsets = [-0.08, 0.08, -0.03, 0.03];
        let mut bumps = Vec::with_capacity(12);
        for frac in [0.15, 0.25, 0.35] {
            for (k, off) in offsets.iter().enumerate() {
                let c = marks[k % marks.len()] + off * span;
                let room = (c - a).min(b - c) * 0.98;
                if !(room > 0.0) {
                    return Err(Error::Domain("no room for a test function".into()));
                }
                bumps.push(Bump {
                    center: c,
                    width: (frac * span).min(room),
                });
            }
        }
        Ok(Self { bumps, windows })
    }
}

/// A solution of a 2x2 system `a_t + f(a)_x = 0` sampled at single times.
pub trait History: Sync {
    fn domain(&self) -> [f64; 2];
    fn valid_time(&self) -> [f64; 2];
    fn events(&self) -> Vec<f64>;
    /// Positions of the discontinuities at `t`.
    fn discontinuities(&self, t: f64) -> Result<Vec<f64>>;
    /// `⟨a_eq(t), φ⟩`, atoms included.
    fn pair_conserved(&self, eq: usize, t: f64, b: &Bump, tol: f64) -> Result<f64>;
    /// `⟨f_eq(t), φ'⟩`, atoms included.
    fn pair_flux(&self, eq: usize, t: f64, b: &Bump, tol: f64) -> Result<f64>;
}

fn inner_opts(tol: f64) -> QuadOptions {
    QuadOptions {
        abs_tol: tol,
        rel_tol: 0.0,
        max_intervals: 4000,
    }
}

// ∫ g(state, x) dx over the bump support, split at region boundaries.
fn field_integral<G: Fn(SymState, f64) -> f64>(sol: &PiecewiseSolution, t: f64, b: &Bump, g: G, tol: f64) -> Result<f64> {
    let [lo, hi] = b.support();
    let ph = sol.phase_at(t)?;
    let xs: Vec<f64> = ph.boundaries.iter().map(|l| l.at(t)).collect();
    let mut pts = vec![lo];
    pts.extend(xs.iter().copied().filter(|x| *x > lo && *x < hi));
    pts.push(hi);
    let mut total = 0.0;
    let tol = tol / (pts.len() - 1) as f64;
    for w in pts.windows(2) {
        let region = xs.partition_point(|&p| p <= 0.5 * (w[0] + w[1]));
        let field = &ph.regions[region];
        let q = quad::integrate(|x| g(field.state(&sol.law, t, x), x), w[0], w[1], inner_opts(tol))?;
        total += q.value;
    }
    Ok(total)
}

impl History for PiecewiseSolution {
    fn domain(&self) -> [f64; 2] {
        self.domain
    }

    fn valid_time(&self) -> [f64; 2] {
        self.valid_time
    }

    fn events(&self) -> Vec<f64> {
        self.events.clone()
    }

    fn discontinuities(&self, t: f64) -> Result<Vec<f64>> {
        let ph = self.phase_at(t)?;
        let mut xs: Vec<f64> = ph.curves.iter().map(|c| ph.boundaries[c.boundary].at(t)).collect();
        if xs.is_empty() {
            xs = self.boundary_positions(t)?;
        }
        Ok(xs)
    }

    fn pair_conserved(&self, eq: usize, t: f64, b: &Bump, tol: f64) -> Result<f64> {
        let [lo, hi] = b.support();
        match eq {
            0 => self.measure_at(t)?.pair_on(|x| b.phi(x), lo, hi, tol),
            _ => field_integral(self, t, b, |s, x| s.u * b.phi(x), tol),
        }
    }

    fn pair_flux(&self, eq: usize, t: f64, b: &Bump, tol: f64) -> Result<f64> {
        match eq {
            0 => Ok(-field_integral(self, t, b, |s, x| s.u * b.dphi(x), tol)?),
            _ => field_integral(self, t, b, |s, x| self.law.p(s.h) * b.dphi(x), tol),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResidualRow {
    pub equation: usize,
    pub bump: usize,
    pub window: usize,
    pub residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RefinementPoint {
    pub tol: f64,
    pub max_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeakStarReport {
    /// Residuals at the finest tolerance.
    pub rows: Vec<ResidualRow>,
    pub max_residual: f64,
    pub refinement: Vec<RefinementPoint>,
    /// Log-log slope of the maximum residual against the tolerance; `None`
    /// when every residual is at round-off.
    pub slope: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeakStarOptions {
    /// Tolerances in decreasing order; the last one fills the table.
    pub tolerances: Vec<f64>,
}

impl Default for WeakStarOptions {
    fn default() -> Self {
        Self {
            tolerances: vec![1e-6, 1e-7, 1e-8],
        }
    }
}

/// Residual below which a pairing counts as round-off.
pub const ROUND_OFF: f64 = 1e-13;

// Composite Simpson rule on [a, b] with `n` (even) panels.
fn simpson<F: Fn(f64) -> Result<f64>>(f: F, a: f64, b: f64, n: usize) -> Result<f64> {
    let n = n + n % 2;
    let h = (b - a) / n as f64;
    let mut acc = f(a)? + f(b)?;
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(a + i as f64 * h)?;
    }
    Ok(acc * h / 3.0)
}

/// `|∫η'⟨a, φ⟩ dt + ∫η⟨f, φ'⟩ dt|` for one equation, bump and window. The
/// time integral uses composite Simpson with `O(tol^(-1/4))` panels split at
/// events, so the discretization error scales with `tol`.
pub fn pairing_residual<H: History + ?Sized>(hist: &H, eq: usize, b: &Bump, w: &Window, tol: f64) -> Result<f64> {
    let mut cuts = vec![w.t1];
    cuts.extend(hist.events().into_iter().filter(|e| *e > w.t1 && *e < w.t2));
    cuts.push(w.t2);
    let panels = ((100.0 / tol).powf(0.25).ceil() as usize).max(4);
    let inner = tol * 1e-3;
    let mut total = 0.0;
    for seg in cuts.windows(2) {
        // Keep the nodes off the event itself, where the state is undefined.
        let (a, c) = (seg[0], seg[1]);
        let n = ((panels as f64) * (c - a) / (w.t2 - w.t1)).ceil().max(2.0) as usize;
        let eps = 1e-12 * (c - a);
        let g = |t: f64| -> Result<f64> {
            let t = t.clamp(a + eps, c - eps);
            let (de, e) = (w.deta(t), w.eta(t));
            if de == 0.0 && e == 0.0 {
                return Ok(0.0);
            }
            Ok(de * hist.pair_conserved(eq, t, b, inner)? + e * hist.pair_flux(eq, t, b, inner)?)
        };
        total += simpson(g, a, c, n)?;
    }
    Ok(total.abs())
}

fn residual_table<H: History + ?Sized>(hist: &H, fam: &TestFunctionFamily, tol: f64) -> Result<Vec<ResidualRow>> {
    let jobs: Vec<(usize, usize, usize)> = (0..2)
        .flat_map(|eq| (0..fam.bumps.len()).flat_map(move |bi| (0..fam.windows.len()).map(move |wi| (eq, bi, wi))))
        .collect();
    jobs.par_iter()
        .map(|&(eq, bi, wi)| {
            Ok(ResidualRow {
                equation: eq,
                bump: bi,
                window: wi,
                residual: pairing_residual(hist, eq, &fam.bumps[bi], &fam.windows[wi], tol)?,
            })
        })
        .collect()
}

/// Weak* residual of both equations over the family at every tolerance.
pub fn weakstar_residual<H: History + ?Sized>(hist: &H, fam: &TestFunctionFamily, opts: &WeakStarOptions) -> Result<WeakStarReport> {
    fam.validate(hist.domain(), hist.valid_time())?;
    if opts.tolerances.is_empty() || opts.tolerances.iter().any(|t| !(*t > 0.0)) {
        return Err(Error::Config("weak* tolerances must be positive".into()));
    }
    let mut refinement = Vec::new();
    let mut rows = Vec::new();
    for &tol in &opts.tolerances {
        rows = residual_table(hist, fam, tol)?;
        let max = rows.iter().map(|r| r.residual).fold(0.0, f64::max);
        log::debug!("weak* residual at tol {tol:e}: {max:e}");
        refinement.push(RefinementPoint { tol, max_residual: max });
    }
    let max_residual = refinement.last().unwrap().max_residual;
    let usable: Vec<&RefinementPoint> = refinement.iter().filter(|p| p.max_residual > ROUND_OFF).collect();
    let slope = (usable.len() >= 2).then(|| {
        let xs: Vec<f64> = usable.iter().map(|p| p.tol.ln()).collect();
        let ys: Vec<f64> = usable.iter().map(|p| p.max_residual.ln()).collect();
        ls_slope(&xs, &ys)
    });
    Ok(WeakStarReport {
        rows,
        max_residual,
        refinement,
        slope,
    })
}

fn ls_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Fourth-order central difference of `f` at `t` with step `h`.
pub fn central_diff<F: Fn(f64) -> Result<f64>>(f: F, t: f64, h: f64) -> Result<f64> {
    Ok((f(t - 2.0 * h)? - 8.0 * f(t - h)? + 8.0 * f(t + h)? - f(t + 2.0 * h)?) / (12.0 * h))
}

// Step that keeps the stencil inside (lo, hi).
fn stencil_step(t: f64, lo: f64, hi: f64) -> Result<f64> {
    let room = (t - lo).min(hi - t);
    if !(room > 0.0) {
        return Err(Error::EventTime(t));
    }
    Ok((1e-3 * t.abs().max(1.0)).min(0.45 * room))
}

/// Generalized RH residuals of one discontinuity at one time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RhRow {
    pub curve: usize,
    pub kind: CurveKind,
    pub t: f64,
    pub x: f64,
    pub speed: f64,
    pub w_rate: f64,
    /// `|X'[u] - [p]|`
    pub momentum: f64,
    /// `|[u] - w' + X'[v]|`, with `X'[v] = 0` when `X' = 0`.
    pub volume: f64,
    /// `|w X'|`
    pub atom: f64,
}

impl RhRow {
    pub fn max(&self) -> f64 {
        self.momentum.max(self.volume).max(self.atom)
    }
}

/// Residuals of the generalized RH conditions from one-sided states and the
/// trajectory `(X(t), w(t))`.
pub fn rh_residuals<F>(law: &GasLaw, t: f64, step: f64, track: F, left: SymState, right: SymState) -> Result<(f64, f64, f64, f64, f64, f64)>
where
    F: Fn(f64) -> Result<(f64, f64)>,
{
    let (x, w) = track(t)?;
    let xp = central_diff(|s| Ok(track(s)?.0), t, step)?;
    let wp = central_diff(|s| Ok(track(s)?.1), t, step)?;
    let du = right.u - left.u;
    let dp = law.p(right.h) - law.p(left.h);
    let dv_term = if xp == 0.0 { 0.0 } else { xp * (law.v(right.h) - law.v(left.h)) };
    let _ = x;
    Ok(((xp * du - dp).abs(), (du - wp + dv_term).abs(), (w * xp).abs(), xp, wp, x))
}

/// Generalized RH residuals of every curve of `sol` at every time, with the
/// speeds and atom rates obtained by differencing positions and weights.
pub fn check_generalized_rh(sol: &PiecewiseSolution, times: &[f64]) -> Result<Vec<RhRow>> {
    let mut rows = Vec::new();
    for &t in times {
        if sol.is_event(t) {
            return Err(Error::EventTime(t));
        }
        let ph = sol.phase_at(t)?;
        let (lo, hi) = (ph.t0.max(sol.valid_time[0]), ph.t1.min(sol.valid_time[1]));
        let step = stencil_step(t, lo, hi)?;
        for snap in sol.curves_at(t)? {
            let track = |s: f64| -> Result<(f64, f64)> {
                let c = &sol.phase_at(s)?.curves[snap.index];
                let line: &Line = &ph.boundaries[c.boundary];
                Ok((line.at(s), c.weight.map_or(0.0, |w| w.at(s))))
            };
            let (m, v, a, xp, wp, x) = rh_residuals(&sol.law, t, step, track, snap.left, snap.right)?;
            rows.push(RhRow {
                curve: snap.index,
                kind: snap.kind,
                t,
                x,
                speed: xp,
                w_rate: wp,
                momentum: m,
                volume: v,
                atom: a,
            });
        }
    }
    Ok(rows)
}

/// RH residuals of the shock emerging from an off-center collapse, with its
/// speed differenced from the computed trajectory.
pub fn check_offcenter_rh(o: &OffcenterSolution, times: &[f64]) -> Result<Vec<RhRow>> {
    let t_end = o.shock.endpoint.0;
    let t_hash = o.shock.t_hash;
    let mut rows = Vec::new();
    for &t in times {
        // The trajectory varies on the scale of the distance to the collapse.
        let step = stencil_step(t, t_end, t_hash)?.min(1e-3 * (t - t_end));
        let st = o.shock_states(t)?;
        let track = |s: f64| -> Result<(f64, f64)> { Ok((o.shock.x_of_z(o.shock.z_of_t(s)?), 0.0)) };
        let (m, v, a, xp, wp, x) = rh_residuals(&o.solution.law, t, step, track, st.behind, st.ahead)?;
        rows.push(RhRow {
            curve: 0,
            kind: CurveKind::Shock,
            t,
            x,
            speed: xp,
            w_rate: wp,
            momentum: m,
            volume: v,
            atom: a,
        });
    }
    Ok(rows)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EntropyViolation {
    pub t: f64,
    pub curve: usize,
    pub kind: CurveKind,
    pub x: f64,
    pub mass: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntropyAudit {
    pub violations: Vec<EntropyViolation>,
    /// Largest `|mass|` on vacuum curves.
    pub vacuum_max: f64,
    /// Largest classical entropy residual `|η_t + q_x|` in smooth regions.
    pub interior_max: f64,
    pub curves_checked: usize,
}

impl EntropyAudit {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Entropy production of every curve at every time, plus the classical
/// entropy equality sampled inside the simple-wave regions. Masses above
/// `tol` are violations.
pub fn entropy_audit(sol: &PiecewiseSolution, times: &[f64], tol: f64) -> Result<EntropyAudit> {
    let law = &sol.law;
    let mut violations = Vec::new();
    let mut vacuum_max: f64 = 0.0;
    let mut interior_max: f64 = 0.0;
    let mut checked = 0;
    let eta = |s: SymState| 0.5 * s.u * s.u + law.eps(s.h);
    let flux = |s: SymState| s.u * law.p(s.h);
    for &t in times {
        for a in crate::scenarios::entropy_production(sol, t)? {
            checked += 1;
            if a.kind == CurveKind::Vacuum {
                vacuum_max = vacuum_max.max(a.mass.abs());
            }
            if a.mass > tol {
                let idx = sol
                    .curves_at(t)?
                    .iter()
                    .position(|c| c.x == a.x)
                    .unwrap_or(0);
                violations.push(EntropyViolation {
                    t,
                    curve: idx,
                    kind: a.kind,
                    x: a.x,
                    mass: a.mass,
                });
            }
        }
        let ph = sol.phase_at(t)?;
        let (lo, hi) = (ph.t0.max(sol.valid_time[0]), ph.t1.min(sol.valid_time[1]));
        let xs: Vec<f64> = sol.breakpoints(t)?;
        for (ri, f) in ph.regions.iter().enumerate() {
            if !matches!(f, crate::solution::Field::Centered { .. }) {
                continue;
            }
            let (x0, x1) = (xs[ri], xs[ri + 1]);
            if !(x1 - x0 > 1e-6) {
                continue;
            }
            let Ok(ht) = stencil_step(t, lo, hi) else { continue };
            let ht = ht.min(1e-4);
            for k in 1..8 {
                let x = x0 + (x1 - x0) * k as f64 / 8.0;
                let hx = (1e-4 * (x1 - x0)).min(0.2 * (x - x0)).min(0.2 * (x1 - x));
                let at = |s: f64, y: f64| f.state(law, s, y);
                let et = central_diff(|s| Ok(eta(at(s, x))), t, ht)?;
                let qx = central_diff(|y| Ok(flux(at(t, y))), x, hx)?;
                let scale = eta(at(t, x)).abs().max(flux(at(t, x)).abs()).max(1.0);
                interior_max = interior_max.max((et + qx).abs() / scale);
            }
        }
    }
    Ok(EntropyAudit {
        violations,
        vacuum_max,
        interior_max,
        curves_checked: checked,
    })
}

/// A forward jump from `h_behind` (left) to `h_ahead` (right) moving with the
/// RH speed; an expansion shock when `h_behind < h_ahead`.
pub fn single_jump_solution(law: &GasLaw, h_ahead: f64, h_behind: f64, domain: [f64; 2], t_max: f64) -> Result<PiecewiseSolution> {
    if !(h_ahead > 0.0) || !(h_behind > 0.0) || h_ahead == h_behind {
        return Err(Error::InvalidShock("jump needs two distinct non-vacuum states".into()));
    }
    let dp = law.p(h_ahead) - law.p(h_behind);
    let dv = law.v(h_ahead) - law.v(h_behind);
    let sigma = (-dp / dv).sqrt();
    let right = SymState { h: h_ahead, u: 0.0 };
    let left = SymState { h: h_behind, u: -dp / sigma };
    let sol = PiecewiseSolution {
        label: "jump".into(),
        law: law.clone(),
        domain,
        valid_time: [0.0, t_max],
        events: vec![],
        phases: vec![crate::solution::Phase {
            t0: 0.0,
            t1: t_max,
            boundaries: vec![Line { t0: 0.0, x0: 0.0, speed: sigma }],
            regions: vec![crate::solution::Field::constant(left), crate::solution::Field::constant(right)],
            curves: vec![crate::solution::Curve {
                boundary: 0,
                kind: CurveKind::Shock,
                weight: None,
            }],
        }],
    };
    sol.validate()?;
    Ok(sol)
}

/// Copy of `sol` with the speed of curve `curve` in every phase scaled by
/// `1 + rel`; the states are left untouched.
pub fn perturb_curve_speed(sol: &PiecewiseSolution, curve: usize, rel: f64) -> Result<PiecewiseSolution> {
    let mut out = sol.clone();
    let mut hit = false;
    for ph in &mut out.phases {
        if let Some(c) = ph.curves.get(curve) {
            let line = &mut ph.boundaries[c.boundary];
            line.speed *= 1.0 + rel;
            hit = true;
        }
    }
    if !hit {
        return Err(Error::Config(format!("solution has no curve {curve}")));
    }
    Ok(out)
}

/// Polytropic law `P = A v^(-γ) e^(s/c_v)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Polytropic {
    pub a: f64,
    pub gamma: f64,
    pub cv: f64,
}

impl Polytropic {
    pub fn pressure(&self, v: f64, s: f64) -> f64 {
        if v.is_infinite() {
            return 0.0;
        }
        self.a * v.powf(-self.gamma) * (s / self.cv).exp()
    }

    pub fn energy(&self, v: f64, s: f64) -> f64 {
        if v.is_infinite() {
            return 0.0;
        }
        self.a / (self.gamma - 1.0) * v.powf(1.0 - self.gamma) * (s / self.cv).exp()
    }

    /// Entropy of the state with volume `v` and pressure `p`.
    pub fn entropy(&self, v: f64, p: f64) -> f64 {
        self.cv * (p * v.powf(self.gamma) / self.a).ln()
    }
}

/// Thermodynamic state on one side of a jump; `v = ∞` marks vacuum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EulerSide {
    pub v: f64,
    pub u: f64,
    pub s: f64,
}

/// A discontinuity `X(t) = x0 + speed t` carrying an atom `w0 + rate t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EulerCurve {
    pub x0: f64,
    pub speed: f64,
    pub w0: f64,
    pub rate: f64,
}

/// Piecewise-constant Euler history: `regions[i]` lies between curves
/// `i - 1` and `i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EulerState {
    pub eos: Polytropic,
    pub regions: Vec<EulerSide>,
    pub curves: Vec<EulerCurve>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum JumpClass {
    Shock,
    Contact,
    Vacuum,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EulerRhRow {
    pub curve: usize,
    pub t: f64,
    pub class: JumpClass,
    /// `|X'[u] - [p]|`
    pub momentum: f64,
    /// `|X'[u²/2 + ε] - [u p]|`
    pub energy: f64,
    /// `|[u] - w' + X'[v]|`
    pub volume: f64,
    /// `|w X'|`
    pub atom: f64,
    /// `X'[s]`, the atom of the production of `-s`.
    pub entropy_mass: f64,
}

impl EulerRhRow {
    pub fn max(&self) -> f64 {
        self.momentum.max(self.energy).max(self.volume).max(self.atom)
    }
}

/// Label of a jump: contact if `[u] = 0` with finite volumes, vacuum if
/// `X' = 0` and otherwise a shock.
pub fn classify_jump(du: f64, xp: f64, finite_v: bool, tol: f64) -> JumpClass {
    if du.abs() <= tol {
        if finite_v {
            JumpClass::Contact
        } else {
            JumpClass::Vacuum
        }
    } else if xp.abs() <= tol {
        JumpClass::Vacuum
    } else {
        JumpClass::Shock
    }
}

/// Four jump residuals and a classification for every curve at every time.
pub fn check_euler_rh(state: &EulerState, times: &[f64]) -> Result<Vec<EulerRhRow>> {
    if state.regions.len() != state.curves.len() + 1 {
        return Err(Error::Config("Euler state needs one more region than curves".into()));
    }
    let eos = state.eos;
    let mut rows = Vec::new();
    for &t in times {
        let step = 1e-3 * t.abs().max(1.0);
        for (i, c) in state.curves.iter().enumerate() {
            let (l, r) = (state.regions[i], state.regions[i + 1]);
            let xp = central_diff(|s| Ok(c.x0 + c.speed * s), t, step)?;
            let wp = central_diff(|s| Ok(c.w0 + c.rate * s), t, step)?;
            let w = c.w0 + c.rate * t;
            let (pl, pr) = (eos.pressure(l.v, l.s), eos.pressure(r.v, r.s));
            let (el, er) = (eos.energy(l.v, l.s), eos.energy(r.v, r.s));
            let du = r.u - l.u;
            let dv_term = if xp == 0.0 { 0.0 } else { xp * (r.v - l.v) };
            let ds_term = if xp == 0.0 { 0.0 } else { xp * (r.s - l.s) };
            let scale = 1.0 + l.u.abs().max(r.u.abs());
            rows.push(EulerRhRow {
                curve: i,
                t,
                class: classify_jump(du, xp, l.v.is_finite() && r.v.is_finite(), 1e-12 * scale),
                momentum: (xp * du - (pr - pl)).abs(),
                energy: (xp * (0.5 * r.u * r.u + er - 0.5 * l.u * l.u - el) - (r.u * pr - l.u * pl)).abs(),
                volume: (du - wp + dv_term).abs(),
                atom: (w * xp).abs(),
                entropy_mass: ds_term,
            });
        }
    }
    Ok(rows)
}

/// Euler shock with ahead state `ahead` on the right and behind volume
/// `v_behind < ahead.v`, on the Hugoniot curve of the energy equation.
pub fn euler_shock(eos: Polytropic, ahead: EulerSide, v_behind: f64) -> Result<(EulerSide, f64)> {
    let g = eos.gamma;
    let va = ahead.v;
    if !(v_behind > 0.0 && v_behind < va) {
        return Err(Error::InvalidShock("behind volume must lie in (0, v_ahead)".into()));
    }
    let pa = eos.pressure(va, ahead.s);
    let dv = v_behind - va;
    let pb = pa * (va / (g - 1.0) - 0.5 * dv) / (v_behind / (g - 1.0) + 0.5 * dv);
    let sigma = ((pb - pa) / (va - v_behind)).sqrt();
    // σ [u] = [p] with left = behind, right = ahead.
    let ub = ahead.u - (pa - pb) / sigma;
    Ok((
        EulerSide {
            v: v_behind,
            u: ub,
            s: eos.entropy(v_behind, pb),
        },
        sigma,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Verdicts {
    pub equation: bool,
    pub consistency: bool,
    pub rh: bool,
    pub entropy: bool,
}

impl Verdicts {
    pub fn all(&self) -> bool {
        self.equation && self.consistency && self.rh && self.entropy
    }
}

/// Worst RH residual with its location.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RhFailure {
    pub curve: usize,
    pub t: f64,
    pub x: f64,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub label: String,
    /// SHA-256 of the configuration that produced the report.
    pub config_hash: String,
    pub tolerance: f64,
    pub weakstar: WeakStarReport,
    pub rh: Vec<RhRow>,
    pub rh_worst: Option<RhFailure>,
    pub entropy: EntropyAudit,
    pub consistency: Vec<(f64, Consistency)>,
    pub verdicts: Verdicts,
}

pub fn config_hash(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyOptions {
    /// Threshold on the weak* residual and scale of the other thresholds.
    pub tol: f64,
    pub rh_tol: f64,
    pub entropy_tol: f64,
    pub weakstar: WeakStarOptions,
    /// Sample times; evenly spread over the validity interval when empty.
    pub times: Vec<f64>,
    pub consistency: ConsistencyOptions,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            tol: 1e-6,
            rh_tol: 1e-9,
            entropy_tol: 1e-12,
            weakstar: WeakStarOptions::default(),
            times: Vec::new(),
            consistency: ConsistencyOptions::default(),
        }
    }
}

fn sample_times(sol: &PiecewiseSolution, n: usize) -> Vec<f64> {
    let [a, b] = sol.valid_time;
    (1..=n)
        .map(|k| a + (b - a) * k as f64 / (n + 1) as f64)
        .filter(|t| !sol.is_event(*t))
        .collect()
}

/// Full verification of a piecewise solution.
pub fn verify_solution(sol: &PiecewiseSolution, config: &[u8], opts: &VerifyOptions) -> Result<VerificationReport> {
    let times = if opts.times.is_empty() {
        sample_times(sol, 5)
    } else {
        opts.times.clone()
    };
    let fam = TestFunctionFamily::default_for(sol)?;
    let weakstar = weakstar_residual(sol, &fam, &opts.weakstar)?;
    let rh = check_generalized_rh(sol, &times)?;
    let rh_worst = rh
        .iter()
        .max_by(|a, b| a.max().total_cmp(&b.max()))
        .map(|r| RhFailure {
            curve: r.curve,
            t: r.t,
            x: r.x,
            residual: r.max(),
        });
    let entropy = entropy_audit(sol, &times, opts.entropy_tol)?;
    let consistency = times
        .iter()
        .map(|&t| Ok((t, consistency_check(&sol.measure_at(t)?, &opts.consistency))))
        .collect::<Result<Vec<_>>>()?;
    let verdicts = Verdicts {
        equation: weakstar.max_residual <= opts.tol,
        consistency: consistency.iter().all(|(_, c)| c.is_consistent()),
        rh: rh_worst.is_none_or(|w| w.residual <= opts.rh_tol),
        entropy: entropy.passed(),
    };
    Ok(VerificationReport {
        label: sol.label.clone(),
        config_hash: config_hash(config),
        tolerance: opts.tol,
        weakstar,
        rh,
        rh_worst,
        entropy,
        consistency,
        verdicts,
    })
}

impl VerificationReport {
    /// One line per verdict, e.g. `equation: PASS, consistency: FAIL`.
    pub fn summary(&self) -> String {
        let word = |b: bool| if b { "PASS" } else { "FAIL" };
        let v = &self.verdicts;
        let mut s = format!(
            "{}: {}\nequation: {}, consistency: {}\nRH: {}",
            self.label,
            word(v.all()),
            word(v.equation),
            word(v.consistency),
            word(v.rh)
        );
        if let (false, Some(w)) = (v.rh, self.rh_worst) {
            s.push_str(&format!(" (curve {} at t = {}, x = {}, residual {:e})", w.curve, w.t, w.x, w.residual));
        }
        s.push_str(&format!("\nentropy: {}\n", word(v.entropy)));
        s
    }
}

/// True when a sample lies on a curve of `sol`.
pub fn on_curve(sol: &PiecewiseSolution, t: f64, x: f64) -> Result<bool> {
    Ok(matches!(sol.sample(t, x)?, Sample::OnCurve { .. }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenarios::{nonphysical_solution, vacuum_riemann_solve};
    use crate::solution::{Field, Phase};
    use crate::waves::{shock_from_ratio, Family};

    fn law2() -> GasLaw {
        GasLaw::with_beta(2.0).unwrap()
    }

    fn constant_solution() -> PiecewiseSolution {
        PiecewiseSolution {
            label: "constant".into(),
            law: law2(),
            domain: [-1.0, 1.0],
            valid_time: [0.0, 1.0],
            events: vec![],
            phases: vec![Phase {
                t0: 0.0,
                t1: 1.0,
                boundaries: vec![],
                regions: vec![Field::Constant { h: 1.0, u: 0.3 }],
                curves: vec![],
            }],
        }
    }

    #[test]
    fn bumps_are_smooth_and_supported() {
        let b = Bump { center: 0.0, width: 0.5 };
        assert_eq!(b.phi(0.5), 0.0);
        assert_eq!(b.phi(0.0), 1.0);
        let h = 1e-6;
        let fd = (b.phi(0.2 + h) - b.phi(0.2 - h)) / (2.0 * h);
        assert!((fd - b.dphi(0.2)).abs() < 1e-8);
    }

    #[test]
    fn constant_state_has_zero_residual() {
        let sol = constant_solution();
        let fam = TestFunctionFamily::default_for(&sol).unwrap();
        let r = weakstar_residual(&sol, &fam, &WeakStarOptions::default()).unwrap();
        assert!(r.max_residual < 1e-13, "{}", r.max_residual);
        assert!(r.slope.is_none());
    }

    #[test]
    fn shock_rh_residuals() {
        let law = law2();
        let w = shock_from_ratio(&law, 1.0, 2.0, Family::Forward).unwrap();
        let sol = single_jump_solution(&law, w.right.h, w.left.h, [-1.0, 3.0], 1.0).unwrap();
        let rows = check_generalized_rh(&sol, &[0.3, 0.7]).unwrap();
        assert!(rows.iter().all(|r| r.max() <= 1e-9));
        let bad = perturb_curve_speed(&sol, 0, 1e-3).unwrap();
        let rows = check_generalized_rh(&bad, &[0.3]).unwrap();
        let du = (w.right.u - w.left.u).abs();
        assert!((rows[0].momentum - 1e-3 * w.speeds[0] * du).abs() < 1e-9);
    }

    #[test]
    fn vacuum_curve_rh() {
        let sol = vacuum_riemann_solve(&law2(), SymState { h: 1.0, u: 0.0 }, SymState { h: 1.0, u: 0.0 }, 1.0, [-2.0, 2.0])
            .unwrap()
            .solution;
        let rows = check_generalized_rh(&sol, &[0.1, 0.2, 0.4]).unwrap();
        let vac: Vec<_> = rows.iter().filter(|r| r.kind == CurveKind::Vacuum).collect();
        assert_eq!(vac.len(), 3);
        for r in vac {
            assert_eq!(r.speed, 0.0);
            assert!(r.volume <= 1e-9);
        }
        assert!(matches!(check_generalized_rh(&sol, &[0.5]), Err(Error::EventTime(_))));
    }

    #[test]
    fn nonphysical_passes_equation_fails_consistency() {
        let sol = nonphysical_solution(&law2(), 1.0, 0.5, -0.5, 1.0, [-1.0, 1.0], 0.8).unwrap();
        let fam = TestFunctionFamily::default_for(&sol).unwrap();
        let r = weakstar_residual(&sol, &fam, &WeakStarOptions::default()).unwrap();
        assert!(r.max_residual <= 1e-6, "{:?} {:?}", r.refinement, r.rows.iter().filter(|x| x.residual > 1e-6).collect::<Vec<_>>());
        let c = consistency_check(&sol.measure_at(0.4).unwrap(), &ConsistencyOptions::default());
        assert!(!c.is_consistent());
    }

    #[test]
    fn expansion_shock_flagged() {
        let law = law2();
        let sol = single_jump_solution(&law, 1.0, 0.5, [-1.0, 3.0], 1.0).unwrap();
        let a = entropy_audit(&sol, &[0.5], 1e-12).unwrap();
        assert_eq!(a.violations.len(), 1);
        assert!(a.violations[0].mass > 0.0);
        let ok = single_jump_solution(&law, 1.0, 2.0, [-1.0, 3.0], 1.0).unwrap();
        assert!(entropy_audit(&ok, &[0.5], 1e-12).unwrap().passed());
    }

    #[test]
    fn euler_classification() {
        let eos = Polytropic { a: 1.0, gamma: 1.4, cv: 1.0 };
        let ahead = EulerSide { v: 1.0, u: 0.0, s: 0.0 };
        let (behind, sigma) = euler_shock(eos, ahead, 0.5).unwrap();
        let contact = EulerSide { v: behind.v * 1.3, u: behind.u, s: 0.0 };
        let contact = EulerSide {
            s: eos.entropy(contact.v, eos.pressure(behind.v, behind.s)),
            ..contact
        };
        let state = EulerState {
            eos,
            regions: vec![contact, behind, ahead],
            curves: vec![
                EulerCurve { x0: -0.5, speed: 0.0, w0: 0.0, rate: 0.0 },
                EulerCurve { x0: 0.0, speed: sigma, w0: 0.0, rate: 0.0 },
            ],
        };
        let rows = check_euler_rh(&state, &[0.5]).unwrap();
        assert_eq!(rows[0].class, JumpClass::Contact);
        assert_eq!(rows[1].class, JumpClass::Shock);
        assert!(rows.iter().all(|r| r.max() <= 1e-9));
        assert!(rows[1].entropy_mass < 0.0);
    }
}
