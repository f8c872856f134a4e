//! Exact solutions with vacuums: collapse of a vacuum between two centered
//! compressions, the shock emerging from a collapse into an off-center
//! rarefaction, and the Riemann problem with an embedded vacuum.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quad::{self, QuadOptions, Singular};
use crate::solution::{fan_phase, phase_exit_time, Curve, CurveKind, Field, Line, Phase, PiecewiseSolution, Weight};
use crate::thermo::{GasLaw, SymState};
use crate::waves::{riemann_solve, vacuum_riemann_fan, Family, WaveFan, WaveKind};

/// Residual of `v(h) c(h) + ∫_{c(h)}^0 v(c⁻¹(y)) dy + h`, which vanishes
/// because `v c → 0` at vacuum.
pub fn vint_identity(law: &GasLaw, h: f64) -> Result<f64> {
    if !(h > 0.0) {
        return Err(Error::Domain(format!("h must be positive, got {h}")));
    }
    let c = law.c(h);
    let q = quad::integrate_singular(
        |y| law.v_of_c(y),
        0.0,
        c,
        Singular::Left,
        QuadOptions {
            abs_tol: 1e-12,
            rel_tol: 1e-13,
            max_intervals: 4000,
        },
    )?;
    Ok(law.v(h) * c - q.value + h)
}

/// Entropy production concentrated on one discontinuity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EntropyAtom {
    pub x: f64,
    pub kind: CurveKind,
    pub mass: f64,
}

/// `-X'([u²/2] + [ε]) + [u p]` from one-sided states and a speed.
pub fn jump_entropy(law: &GasLaw, speed: f64, left: SymState, right: SymState) -> f64 {
    let eta = |s: SymState| 0.5 * s.u * s.u + law.eps(s.h);
    let flux = |s: SymState| s.u * law.p(s.h);
    -speed * (eta(right) - eta(left)) + (flux(right) - flux(left))
}

/// Entropy production of every discontinuity of `sol` at time `t`.
pub fn entropy_production(sol: &PiecewiseSolution, t: f64) -> Result<Vec<EntropyAtom>> {
    if sol.is_event(t) {
        return Err(Error::EventTime(t));
    }
    Ok(sol
        .curves_at(t)?
        .into_iter()
        .map(|c| EntropyAtom {
            x: c.x,
            kind: c.kind,
            mass: jump_entropy(&sol.law, c.speed, c.left, c.right),
        })
        .collect())
}

/// Parameters of the collapse of a vacuum between two centered compressions
/// that focus at the origin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CollapseParams {
    pub h_l: f64,
    pub h_r: f64,
    pub u_minus: f64,
    pub u_plus: f64,
    /// Domain is `[-a, b]`.
    pub a: f64,
    pub b: f64,
}

/// Which closed form describes the norm at a given time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NormCase {
    PreCollapse,
    TwoShocks,
    ShockRarefaction,
    RarefactionShock,
    TwoRarefactions,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CollapseSolution {
    pub params: CollapseParams,
    pub solution: PiecewiseSolution,
    /// Outer states `(h_l, u_ℓ)` and `(h_r, u_r)`.
    pub left: SymState,
    pub right: SymState,
    pub delta_u: f64,
    pub post_fan: WaveFan,
}

/// Vacuum collapse: for `t < 0` two compressions bounding an atom of weight
/// `Δu t`; for `t > 0` the Riemann fan of the outer states.
pub fn collapse_solution(law: &GasLaw, p: CollapseParams) -> Result<CollapseSolution> {
    let delta_u = p.u_plus - p.u_minus;
    if !(delta_u < 0.0) {
        return Err(Error::NotACollapse(delta_u));
    }
    if !(p.h_l > 0.0) || !(p.h_r > 0.0) {
        return Err(Error::Domain("collapse states need h > 0".into()));
    }
    if !(p.a > 0.0) || !(p.b > 0.0) {
        return Err(Error::Domain("domain half-widths must be positive".into()));
    }
    let left = SymState::new(p.h_l, p.u_minus + p.h_l)?;
    let right = SymState::new(p.h_r, p.u_plus - p.h_r)?;
    let domain = [-p.a, p.b];
    let (cl, cr) = (law.c(p.h_l), law.c(p.h_r));
    let t_min = -(p.a / cl).min(p.b / cr);
    let origin = |speed| Line { t0: 0.0, x0: 0.0, speed };
    let pre = Phase {
        t0: t_min,
        t1: 0.0,
        boundaries: vec![origin(cl), origin(0.0), origin(-cr)],
        regions: vec![
            Field::constant(left),
            Field::Centered {
                t0: 0.0,
                x0: 0.0,
                family: Family::Forward,
                invariant: left.u - left.h,
            },
            Field::Centered {
                t0: 0.0,
                x0: 0.0,
                family: Family::Backward,
                invariant: right.u + right.h,
            },
            Field::constant(right),
        ],
        curves: vec![Curve {
            boundary: 1,
            kind: CurveKind::Vacuum,
            weight: Some(Weight {
                t0: 0.0,
                w0: 0.0,
                rate: delta_u,
            }),
        }],
    };
    let post_fan = riemann_solve(law, left, right)?;
    let mut post = fan_phase(&post_fan, 0.0, 0.0, 0.0, f64::INFINITY);
    let t_max = phase_exit_time(&post, domain, 0.0, f64::INFINITY);
    post.t1 = t_max;
    let solution = PiecewiseSolution {
        label: "collapse".into(),
        law: law.clone(),
        domain,
        valid_time: [t_min, t_max],
        events: vec![0.0],
        phases: vec![pre, post],
    };
    solution.validate()?;
    Ok(CollapseSolution {
        params: p,
        solution,
        left,
        right,
        delta_u,
        post_fan,
    })
}

impl CollapseSolution {
    pub fn norm_case(&self, t: f64) -> NormCase {
        if t < 0.0 {
            return NormCase::PreCollapse;
        }
        let m = self.post_fan.middle().unwrap_or(self.left);
        match (m.h > self.left.h, m.h > self.right.h) {
            (true, true) => NormCase::TwoShocks,
            (true, false) => NormCase::ShockRarefaction,
            (false, true) => NormCase::RarefactionShock,
            (false, false) => NormCase::TwoRarefactions,
        }
    }

    /// `‖V(t)‖` in closed form.
    pub fn norm_closed_form(&self, t: f64) -> f64 {
        let law = &self.solution.law;
        let (hl, hr) = (self.left.h, self.right.h);
        let base = self.params.b * law.v(hr) + self.params.a * law.v(hl);
        if t < 0.0 {
            return base + t * (self.delta_u - hl - hr);
        }
        let Some(m) = self.post_fan.middle() else {
            return base + t * (self.right.u - self.left.u);
        };
        let vm = law.v(m.h);
        let sigma = |i: usize| self.post_fan.waves[i].speeds[0].abs();
        let slope = match self.norm_case(t) {
            NormCase::TwoShocks => sigma(0) * (vm - law.v(hl)) + sigma(1) * (vm - law.v(hr)),
            NormCase::ShockRarefaction => sigma(0) * (vm - law.v(hl)) + hr - m.h,
            NormCase::RarefactionShock => hl - m.h + sigma(1) * (vm - law.v(hr)),
            NormCase::TwoRarefactions => hl - m.h + hr - m.h,
            NormCase::PreCollapse => unreachable!(),
        };
        base + t * slope
    }
}

/// Closed-form norm of a collapse scenario; other scenarios have none.
pub fn collapse_norm_closed_form(s: &Scenario, t: f64) -> Result<f64> {
    match s {
        Scenario::Collapse(c) => {
            let [lo, hi] = c.solution.valid_time;
            if !(t >= lo && t <= hi) {
                return Err(Error::OutOfTime { t, lo, hi });
            }
            Ok(c.norm_closed_form(t))
        }
        other => Err(Error::Unsupported(format!("{} has no collapse norm", other.solution().label))),
    }
}

/// Vacuum Riemann problem with its exact solution.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VrpSolution {
    pub fan: WaveFan,
    pub solution: PiecewiseSolution,
    pub w0: f64,
    pub delta_u: f64,
    /// `T = -w0/Δu` when the vacuum is compressive.
    pub collapse_time: Option<f64>,
    /// Riemann fan of the outer states, reported for `t > T`; it ignores the
    /// interaction of the emerging shocks with the rarefactions.
    pub post_collapse: Option<WaveFan>,
}

/// Vacuum Riemann solution on `domain`, valid until a wave leaves the domain
/// or the vacuum collapses.
pub fn vacuum_riemann_solve(
    law: &GasLaw,
    left: SymState,
    right: SymState,
    w0: f64,
    domain: [f64; 2],
) -> Result<VrpSolution> {
    if !(left.h > 0.0) || !(right.h > 0.0) {
        return Err(Error::Unsupported("vacuum Riemann data need bounded non-vacuum states".into()));
    }
    let fan = vacuum_riemann_fan(law, left, right, w0)?;
    let delta_u = (right.u - right.h) - (left.u + left.h);
    let collapse_time = (w0 > 0.0 && delta_u < 0.0).then(|| -w0 / delta_u);
    let post_collapse = match collapse_time {
        Some(_) => Some(riemann_solve(law, left, right)?),
        None => None,
    };
    let mut phase = fan_phase(&fan, 0.0, 0.0, 0.0, f64::INFINITY);
    let mut t_max = phase_exit_time(&phase, domain, 0.0, f64::INFINITY);
    if let Some(tc) = collapse_time {
        t_max = t_max.min(tc);
    }
    phase.t1 = t_max;
    let solution = PiecewiseSolution {
        label: "vrp".into(),
        law: law.clone(),
        domain,
        valid_time: [0.0, t_max],
        events: collapse_time.into_iter().collect(),
        phases: vec![phase],
    };
    solution.validate()?;
    Ok(VrpSolution {
        fan,
        solution,
        w0,
        delta_u,
        collapse_time,
        post_collapse,
    })
}

impl VrpSolution {
    /// `‖V(t)‖ = a v_ℓ + b v_r + w0 + t (u_r - u_ℓ)`.
    pub fn norm_closed_form(&self, t: f64) -> f64 {
        let law = &self.solution.law;
        let [a, b] = self.solution.domain;
        let (l, r) = (self.fan.states[0], *self.fan.states.last().unwrap());
        -a * law.v(l.h) + b * law.v(r.h) + self.w0 + t * (r.u - l.u)
    }
}

/// Riemann solution on `domain` for `t ∈ [0, t_max]` (clipped at domain exit).
pub fn riemann_solution(law: &GasLaw, left: SymState, right: SymState, domain: [f64; 2]) -> Result<(WaveFan, PiecewiseSolution)> {
    let fan = riemann_solve(law, left, right)?;
    let mut phase = fan_phase(&fan, 0.0, 0.0, 0.0, f64::INFINITY);
    let mut t_max = phase_exit_time(&phase, domain, 0.0, f64::INFINITY);
    if !t_max.is_finite() {
        t_max = 1.0;
    }
    phase.t1 = t_max;
    let sol = PiecewiseSolution {
        label: "riemann".into(),
        law: law.clone(),
        domain,
        valid_time: [0.0, t_max],
        events: vec![],
        phases: vec![phase],
    };
    sol.validate()?;
    Ok((fan, sol))
}

/// Constant specific volume on both sides of an atom `w0 + [u] t` with no
/// adjacent rarefaction: a weak* solution of the equations whose medium is
/// inconsistent.
pub fn nonphysical_solution(law: &GasLaw, h0: f64, u_left: f64, u_right: f64, w0: f64, domain: [f64; 2], t_max: f64) -> Result<PiecewiseSolution> {
    if !(h0 > 0.0) {
        return Err(Error::Domain("nonphysical example needs h0 > 0".into()));
    }
    let rate = u_right - u_left;
    let t_end = if rate < 0.0 { t_max.min(-w0 / rate) } else { t_max };
    let sol = PiecewiseSolution {
        label: "nonphysical".into(),
        law: law.clone(),
        domain,
        valid_time: [0.0, t_end],
        events: vec![],
        phases: vec![Phase {
            t0: 0.0,
            t1: t_end,
            boundaries: vec![Line { t0: 0.0, x0: 0.0, speed: 0.0 }],
            regions: vec![Field::Constant { h: h0, u: u_left }, Field::Constant { h: h0, u: u_right }],
            curves: vec![Curve {
                boundary: 0,
                kind: CurveKind::Vacuum,
                weight: Some(Weight { t0: 0.0, w0, rate }),
            }],
        }],
    };
    sol.validate()?;
    Ok(sol)
}

/// Point on a shock crossing a centered rarefaction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ShockSample {
    pub h: f64,
    pub z: f64,
    pub t: f64,
    pub x: f64,
    pub sigma: f64,
}

/// Forward shock inside a forward rarefaction centered at the origin,
/// parametrized by the density ratio `z = h_behind / h_ahead`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShockCurve {
    pub beta: f64,
    pub a_const: f64,
    pub h_hash: f64,
    pub z_hash: f64,
    pub t_hash: f64,
    pub samples: Vec<ShockSample>,
    /// `(t, x)` as `z → ∞`.
    pub endpoint: (f64, f64),
    /// `I(∞)`, Richardson-extrapolated from `z_max` and `10 z_max`.
    pub i_inf: f64,
    pub z_max: f64,
    #[serde(skip)]
    law: GasLaw,
    #[serde(skip)]
    nodes: Vec<(f64, f64)>,
}

fn f_parts(beta: f64, z: f64) -> (f64, f64, f64) {
    // P = z^(β+1) q_(β+1), Q = q_(β-1); z^k r = sqrt(P Q), z^k s = sqrt(P / Q).
    let lz = z.ln();
    let pp = ((beta + 1.0) * lz).exp_m1() / (beta + 1.0);
    let qq = -((1.0 - beta) * lz).exp_m1() / (beta - 1.0);
    let g = (pp * qq).sqrt();
    let f = 1.0 + z + g;
    let dg = (z.powf(beta) * qq + pp * z.powf(-beta)) / (2.0 * g);
    let zks = (pp / qq).sqrt();
    (f, 1.0 + dg, zks)
}

/// `F(z) = 1 + z + z^((β+1)/2) r(z)`.
pub fn f_of_z(beta: f64, z: f64) -> f64 {
    f_parts(beta, z).0
}

// dI/d(ln z) = -β z F'/(F (z^k s - 1)).
fn di_dy(beta: f64, y: f64) -> f64 {
    let z = y.exp();
    let (f, df, zks) = f_parts(beta, z);
    -beta * z * df / (f * (zks - 1.0))
}

const NODE_STEP: f64 = 0.05;

impl ShockCurve {
    pub fn h_of_z(&self, z: f64) -> f64 {
        self.a_const / f_of_z(self.beta, z)
    }

    pub fn sigma_of_z(&self, z: f64) -> f64 {
        let (_, _, zks) = f_parts(self.beta, z);
        self.law.c(self.h_of_z(z)) * zks
    }

    /// `I(z) = ln(t(z)/t_#)` for `z ≥ z_#`.
    pub fn i_of_z(&self, z: f64) -> f64 {
        let y = z.ln();
        let y0 = self.z_hash.ln();
        if y <= y0 {
            return 0.0;
        }
        let last = *self.nodes.last().unwrap();
        if y >= last.0 {
            let k = 0.5 * (self.beta + 1.0);
            // Tail I(∞) + C z^(-k), with C matched at the last node.
            let c = (last.1 - self.i_inf) * last.0.exp().powf(k);
            return self.i_inf + c * z.powf(-k);
        }
        let j = (((y - y0) / NODE_STEP).floor() as usize).min(self.nodes.len() - 2);
        let (yj, ij) = self.nodes[j];
        ij + quad::gk21(&|s| di_dy(self.beta, s), yj, y).0
    }

    pub fn t_of_z(&self, z: f64) -> f64 {
        self.t_hash * self.i_of_z(z).exp()
    }

    pub fn x_of_z(&self, z: f64) -> f64 {
        self.law.c(self.h_of_z(z)) * self.t_of_z(z)
    }

    pub fn sample_at(&self, z: f64) -> ShockSample {
        let h = self.h_of_z(z);
        let t = self.t_of_z(z);
        ShockSample {
            h,
            z,
            t,
            x: self.law.c(h) * t,
            sigma: self.sigma_of_z(z),
        }
    }

    /// Density ratio at time `t ∈ (t_end, t_#]`.
    pub fn z_of_t(&self, t: f64) -> Result<f64> {
        let (t_end, _) = self.endpoint;
        if !(t > t_end && t <= self.t_hash) {
            return Err(Error::OutOfTime {
                t,
                lo: t_end,
                hi: self.t_hash,
            });
        }
        let target = (t / self.t_hash).ln();
        let y0 = self.z_hash.ln();
        let mut hi = y0 + 1.0;
        while self.i_of_z(hi.exp()) > target {
            hi += 2.0;
            if hi > 700.0 {
                return Err(Error::Numerical(format!("shock time {t} too close to its endpoint")));
            }
        }
        let y = quad::bisect(|y| self.i_of_z(y.exp()) - target, y0, hi, 1e-16)?;
        Ok(y.exp())
    }
}

/// Shock curve through the reference point `(h_#, z_#, t_#)` of a forward
/// rarefaction centered at the origin.
pub fn shock_through_rarefaction(law: &GasLaw, h_hash: f64, z_hash: f64, t_hash: f64) -> Result<ShockCurve> {
    shock_curve_with(law, h_hash, z_hash, t_hash, 1e6, 200)
}

/// As [`shock_through_rarefaction`] with explicit truncation `z_max` and
/// sample count.
pub fn shock_curve_with(law: &GasLaw, h_hash: f64, z_hash: f64, t_hash: f64, z_max: f64, n_samples: usize) -> Result<ShockCurve> {
    let beta = law
        .beta()
        .ok_or_else(|| Error::Unsupported("shock-through-rarefaction needs a gamma-law gas".into()))?;
    if !(h_hash > 0.0) || !(z_hash > 1.0) || !(t_hash > 0.0) {
        return Err(Error::Domain("need h_# > 0, z_# > 1, t_# > 0".into()));
    }
    if !(z_max > z_hash) {
        return Err(Error::Domain(format!("z_max {z_max} must exceed z_# {z_hash}")));
    }
    let a_const = h_hash * f_of_z(beta, z_hash);
    let y0 = z_hash.ln();
    let y_big = (10.0 * z_max).ln();
    let n = ((y_big - y0) / NODE_STEP).ceil() as usize;
    let opts = QuadOptions {
        abs_tol: 1e-16,
        rel_tol: 1e-15,
        max_intervals: 200,
    };
    let mut nodes = Vec::with_capacity(n + 1);
    let mut acc = 0.0;
    nodes.push((y0, 0.0));
    for j in 0..n {
        let a = y0 + j as f64 * NODE_STEP;
        let b = y0 + (j + 1) as f64 * NODE_STEP;
        let q = match quad::integrate(|s| di_dy(beta, s), a, b, opts) {
            Ok(q) => q.value,
            Err(Error::Quadrature { partial, .. }) => partial,
            Err(e) => return Err(e),
        };
        if !q.is_finite() {
            return Err(Error::Numerical("shock integral is not finite".into()));
        }
        acc += q;
        nodes.push((b, acc));
    }
    let k = 0.5 * (beta + 1.0);
    let interp = |y: f64| -> f64 {
        let j = (((y - y0) / NODE_STEP).floor() as usize).min(nodes.len() - 2);
        nodes[j].1 + quad::gk21(&|s| di_dy(beta, s), nodes[j].0, y).0
    };
    let (z1, z2) = (z_max, 10.0 * z_max);
    let (i1, i2) = (interp(z1.ln()), interp(z2.ln()));
    let (p1, p2) = (z1.powf(-k), z2.powf(-k));
    let c = (i1 - i2) / (p1 - p2);
    let i_inf = i2 - c * p2;
    let mut curve = ShockCurve {
        beta,
        a_const,
        h_hash,
        z_hash,
        t_hash,
        samples: Vec::new(),
        endpoint: (t_hash * i_inf.exp(), 0.0),
        i_inf,
        z_max,
        law: law.clone(),
        nodes,
    };
    let n_samples = n_samples.max(2);
    let ly = (z_max / z_hash).ln();
    curve.samples = (0..n_samples)
        .map(|i| curve.sample_at(z_hash * (ly * i as f64 / (n_samples - 1) as f64).exp()))
        .collect();
    Ok(curve)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OffcenterParams {
    pub h_l: f64,
    pub u_l: f64,
    pub h_r: f64,
    pub u_r: f64,
    /// Vacuum width at `t = 0`, when the rarefaction is centered.
    pub w0: f64,
    /// Focus time of the compression; must equal the collapse time `-w0/Δu`.
    pub focus_time: Option<f64>,
    /// Domain `[-a, b]`; chosen to contain every wave when absent.
    pub domain: Option<[f64; 2]>,
}

/// States on both sides of the emerging shock.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ShockStates {
    pub t: f64,
    pub x: f64,
    pub z: f64,
    pub sigma: f64,
    pub behind: SymState,
    pub ahead: SymState,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OffcenterSolution {
    pub params: OffcenterParams,
    /// Fields up to the collapse; the emerging fan is described by the shock
    /// curve and the backward rarefaction centered at the collapse point.
    pub solution: PiecewiseSolution,
    pub shock: ShockCurve,
    pub collapse_time: f64,
    pub delta_u: f64,
    /// `u_+ = u_r - h_r`, the velocity at the vacuum edge of the rarefaction.
    pub u_plus: f64,
    /// Time at which the shock leaves the rarefaction, if it does.
    pub exit_time: Option<f64>,
    /// Earliest crossing of the transmitted backward characteristics.
    pub transmitted_focus: f64,
    /// Backward rarefaction centered at the collapse point.
    pub post_rarefaction: crate::waves::Wave,
}

/// Vacuum between a compression focusing at the collapse point and a
/// rarefaction centered at `t = 0`.
pub fn offcenter_solution(law: &GasLaw, p: OffcenterParams) -> Result<OffcenterSolution> {
    let beta = law
        .beta()
        .ok_or_else(|| Error::Unsupported("off-center collapse needs a gamma-law gas".into()))?;
    if !(p.h_l > 0.0) || !(p.h_r > 0.0) || !(p.w0 > 0.0) {
        return Err(Error::Domain("need h_l, h_r, w0 > 0".into()));
    }
    let u_minus = p.u_l - p.h_l;
    let u_plus = p.u_r - p.h_r;
    let delta_u = u_plus - u_minus;
    if !(delta_u < 0.0) {
        return Err(Error::NotACollapse(delta_u));
    }
    let tc = -p.w0 / delta_u;
    if let Some(tf) = p.focus_time {
        if (tf - tc).abs() > 1e-12 * tc.abs().max(1.0) {
            return Err(Error::Unsupported(format!(
                "compression focuses at t = {tf} but the vacuum collapses at t = {tc}"
            )));
        }
    }
    let a_const = u_plus.mul_add(-1.0, p.u_l + p.h_l);
    // Reference point: exit from the rarefaction when the shock gets there.
    let (z_hash, exits) = if a_const > 2.0 * p.h_r {
        let g = |y: f64| f_of_z(beta, y.exp()) - a_const / p.h_r;
        let mut hi = 1.0;
        while g(hi) < 0.0 {
            hi *= 2.0;
        }
        (quad::bisect(g, 1e-300, hi, 1e-16)?.exp(), true)
    } else {
        (1.01, false)
    };
    let h_hash = a_const / f_of_z(beta, z_hash);
    let probe = shock_curve_with(law, h_hash, z_hash, 1.0, 1e6, 2)?;
    let t_hash = tc * (-probe.i_inf).exp();
    let shock = shock_through_rarefaction(law, h_hash, z_hash, t_hash)?;

    let (cl, cr) = (law.c(p.h_l), law.c(p.h_r));
    let domain = p.domain.unwrap_or_else(|| {
        let right = if exits { cr * t_hash } else { shock.x_of_z(z_hash) };
        [-1.25 * cl * tc, 1.25 * right.max(cr * tc)]
    });
    if !(domain[0] <= -cl * tc && domain[1] >= cr * tc) {
        return Err(Error::Config("domain does not contain the waves up to the collapse".into()));
    }
    let left = SymState::new(p.h_l, p.u_l)?;
    let right = SymState::new(p.h_r, p.u_r)?;
    let pre = Phase {
        t0: 0.0,
        t1: tc,
        boundaries: vec![
            Line { t0: tc, x0: 0.0, speed: cl },
            Line { t0: 0.0, x0: 0.0, speed: 0.0 },
            Line { t0: 0.0, x0: 0.0, speed: cr },
        ],
        regions: vec![
            Field::constant(left),
            Field::Centered {
                t0: tc,
                x0: 0.0,
                family: Family::Forward,
                invariant: u_minus,
            },
            Field::Centered {
                t0: 0.0,
                x0: 0.0,
                family: Family::Forward,
                invariant: u_plus,
            },
            Field::constant(right),
        ],
        curves: vec![Curve {
            boundary: 1,
            kind: CurveKind::Vacuum,
            weight: Some(Weight {
                t0: 0.0,
                w0: p.w0,
                rate: delta_u,
            }),
        }],
    };
    let solution = PiecewiseSolution {
        label: "offcenter".into(),
        law: law.clone(),
        domain,
        valid_time: [0.0, tc],
        events: vec![tc],
        phases: vec![pre],
    };
    solution.validate()?;
    let mut post_rarefaction =
        crate::waves::rarefaction_wave(law, left, 0.0, Family::Backward, (tc, 0.0))?;
    post_rarefaction.kind = WaveKind::Rarefaction;
    let mut out = OffcenterSolution {
        params: p,
        solution,
        shock,
        collapse_time: tc,
        delta_u,
        u_plus,
        exit_time: exits.then_some(t_hash),
        transmitted_focus: f64::INFINITY,
        post_rarefaction,
    };
    out.transmitted_focus = out.transmitted_focus_estimate();
    log::info!(
        "offcenter: T = {tc:.6}, A = {a_const:.6}, z_# = {z_hash:.6}, t_# = {t_hash:.6}, focus = {:.6}",
        out.transmitted_focus
    );
    Ok(out)
}

impl OffcenterSolution {
    /// States and speed of the shock at density ratio `z`.
    pub fn shock_states_at_z(&self, z: f64) -> ShockStates {
        let s = self.shock.sample_at(z);
        let ahead = SymState {
            h: s.h,
            u: self.u_plus + s.h,
        };
        let hb = z * s.h;
        let behind = SymState {
            h: hb,
            u: self.params.u_l + self.params.h_l - hb,
        };
        ShockStates {
            t: s.t,
            x: s.x,
            z,
            sigma: s.sigma,
            behind,
            ahead,
        }
    }

    pub fn shock_states(&self, t: f64) -> Result<ShockStates> {
        Ok(self.shock_states_at_z(self.shock.z_of_t(t)?))
    }

    /// `|(u_# - u_b) - (h_# - h - h z^k r(z))|` at ratio `z`.
    pub fn four_state_residual(&self, z: f64) -> f64 {
        let beta = self.shock.beta;
        let st = self.shock_states_at_z(z);
        let u_hash = self.u_plus + self.shock.h_hash;
        let h = st.ahead.h;
        let jump = h * z.powf(0.5 * (beta + 1.0)) * crate::waves::r_of_z(beta, z);
        ((u_hash - st.behind.u) - (self.shock.h_hash - h - jump)).abs()
    }

    /// Entropy production of the shock at ratio `z` (behind state on the left).
    pub fn shock_entropy(&self, z: f64) -> f64 {
        let st = self.shock_states_at_z(z);
        jump_entropy(&self.solution.law, st.sigma, st.behind, st.ahead)
    }

    /// Earliest time at which two neighbouring backward characteristics
    /// leaving the shock cross.
    pub fn transmitted_focus_estimate(&self) -> f64 {
        let law = &self.solution.law;
        let mut best = f64::INFINITY;
        let samples = &self.shock.samples;
        for w in samples.windows(2) {
            let (s0, s1) = (w[0], w[1]);
            let (c0, c1) = (law.c(s0.z * s0.h), law.c(s1.z * s1.h));
            // Lines x = x_i - c_i (t - t_i).
            let denom = c1 - c0;
            if denom != 0.0 {
                let t = (s1.x - s0.x + c1 * s1.t - c0 * s0.t) / denom;
                if t > s0.t.max(s1.t) {
                    best = best.min(t);
                }
            }
        }
        best.max(self.collapse_time)
    }
}

/// Any of the worked examples.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "scenario", rename_all = "snake_case")]
pub enum Scenario {
    Collapse(CollapseSolution),
    Vrp(VrpSolution),
    Offcenter(Box<OffcenterSolution>),
    Riemann { fan: WaveFan, solution: PiecewiseSolution },
}

impl Scenario {
    pub fn solution(&self) -> &PiecewiseSolution {
        match self {
            Scenario::Collapse(c) => &c.solution,
            Scenario::Vrp(v) => &v.solution,
            Scenario::Offcenter(o) => &o.solution,
            Scenario::Riemann { solution, .. } => solution,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn law2() -> GasLaw {
        GasLaw::with_beta(2.0).unwrap()
    }

    fn symmetric() -> CollapseSolution {
        collapse_solution(
            &law2(),
            CollapseParams {
                h_l: 1.0,
                h_r: 1.0,
                u_minus: 1.0,
                u_plus: -1.0,
                a: 2.0,
                b: 2.0,
            },
        )
        .unwrap()
    }

    #[test]
    fn collapse_structure() {
        let c = symmetric();
        assert_eq!(c.delta_u, -2.0);
        let m = c.solution.measure_at(-0.5).unwrap();
        assert_eq!(m.atoms()[0].w, 1.0);
        assert_eq!(c.post_fan.middle().unwrap().u, 0.0);
        assert!((c.post_fan.middle().unwrap().h - 2.714_397_050_502_04).abs() < 1e-12);
        let s = c.solution.state(-0.5, -0.25).unwrap();
        assert!((s.h - law2().c_inverse(0.5).unwrap()).abs() < 1e-15);
        assert!(matches!(
            collapse_solution(&law2(), CollapseParams { u_minus: -1.0, u_plus: 1.0, ..c.params }),
            Err(Error::NotACollapse(_))
        ));
    }

    #[test]
    fn collapse_norm_values() {
        let c = symmetric();
        assert_eq!(c.norm_closed_form(0.0), 4.0);
        assert_eq!(c.norm_closed_form(-0.5), 6.0);
        let q = c.solution.measure_at(-0.5).unwrap().total_variation(1e-11).unwrap().quadrature;
        assert!((q - 6.0).abs() < 1e-9);
        let s = Scenario::Collapse(c.clone());
        assert_eq!(collapse_norm_closed_form(&s, -0.5).unwrap(), 6.0);
        assert!((c.norm_closed_form(0.5) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn vint_examples() {
        let law = law2();
        assert!(vint_identity(&law, 1.0).unwrap().abs() < 1e-10);
        assert!(vint_identity(&law, 1e-6).unwrap().abs() < 1e-10);
        assert!(vint_identity(&law, 0.0).is_err());
    }

    #[test]
    fn vrp_example() {
        let law = law2();
        let v = vacuum_riemann_solve(
            &law,
            SymState { h: 1.0, u: 0.0 },
            SymState { h: 1.0, u: 0.0 },
            1.0,
            [-2.0, 2.0],
        )
        .unwrap();
        assert_eq!(v.delta_u, -2.0);
        assert_eq!(v.collapse_time, Some(0.5));
        let m = v.solution.measure_at(0.25).unwrap();
        assert_eq!(m.atoms()[0].w, 0.5);
        let e = entropy_production(&v.solution, 0.25).unwrap();
        assert_eq!(e[0].mass, 0.0);
    }

    #[test]
    fn shock_curve_invariants() {
        let law = law2();
        let c = shock_through_rarefaction(&law, 1.0, 2.0, 1.0).unwrap();
        let first = c.samples[0];
        assert!((first.h - 1.0).abs() < 1e-15 && first.t == 1.0);
        for w in c.samples.windows(2) {
            assert!(w[1].t < w[0].t);
            assert!(w[1].sigma < w[0].sigma && w[1].h < w[0].h);
        }
        for s in &c.samples {
            assert!((s.h * f_of_z(2.0, s.z) - c.a_const).abs() <= 1e-10 * c.a_const);
        }
        let fine = shock_curve_with(&law, 1.0, 2.0, 1.0, 1e7, 2).unwrap();
        assert!((fine.endpoint.0 - c.endpoint.0).abs() <= 1e-6 * c.endpoint.0);
        let t = 0.5 * (c.endpoint.0 + 1.0);
        let z = c.z_of_t(t).unwrap();
        assert!((c.t_of_z(z) - t).abs() < 1e-12);
    }

    #[test]
    fn offcenter_example() {
        let law = law2();
        let p = OffcenterParams {
            h_l: 1.0,
            u_l: 1.0,
            h_r: 0.5,
            u_r: 0.0,
            w0: 0.5,
            focus_time: None,
            domain: None,
        };
        let o = offcenter_solution(&law, p).unwrap();
        assert_eq!(o.collapse_time, 1.0);
        assert!((o.shock.endpoint.0 - o.collapse_time).abs() < 1e-12);
        let ex = o.exit_time.unwrap();
        let st = o.shock_states(ex).unwrap();
        assert!((st.ahead.h - 0.5).abs() < 1e-10);
        for s in o.shock.samples.iter().step_by(20) {
            assert!(o.four_state_residual(s.z) <= 1e-10);
            assert!(o.shock_entropy(s.z) < 0.0);
        }
        assert!(o.transmitted_focus >= o.collapse_time);
        let bad = OffcenterParams { focus_time: Some(2.0), ..p };
        assert!(matches!(offcenter_solution(&law, bad), Err(Error::Unsupported(_))));
    }
}
