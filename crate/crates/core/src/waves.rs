//! Elementary waves of the p-system and the Riemann solvers built from them.
//!
//! Jumps are written `[f] = f_right - f_left`. Across a backward wave `u + h`
//! is carried from the left; across a forward wave `u - h` is carried from the
//! right.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quad;
use crate::thermo::{GasLaw, SymState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Backward,
    Forward,
    Stationary,
}

impl Family {
    /// Sign of the characteristic speed, `-1` backward, `+1` forward.
    pub fn sign(self) -> f64 {
        match self {
            Family::Backward => -1.0,
            Family::Forward => 1.0,
            Family::Stationary => 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WaveKind {
    Shock,
    Rarefaction,
    Compression,
    Vacuum,
    Contact,
}

impl WaveKind {
    pub fn name(self) -> &'static str {
        match self {
            WaveKind::Shock => "shock",
            WaveKind::Rarefaction => "rarefaction",
            WaveKind::Compression => "compression",
            WaveKind::Vacuum => "vacuum",
            WaveKind::Contact => "contact",
        }
    }
}

/// One elementary wave. `speeds` are the similarity coordinates
/// `(x - x0)/(t - t0)` of its left and right edges.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Wave {
    pub family: Family,
    pub kind: WaveKind,
    pub left: SymState,
    pub right: SymState,
    pub speeds: [f64; 2],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub center: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub atom_rate: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub atom_weight: Option<f64>,
}

/// `q_n(z) = (1 - z^(-n)) / n`, accurate near `z = 1`.
pub fn q_n(n: f64, z: f64) -> f64 {
    -(-n * z.ln()).exp_m1() / n
}

/// `r(z) = sqrt(q_(β+1) q_(β-1))`.
pub fn r_of_z(beta: f64, z: f64) -> f64 {
    (q_n(beta + 1.0, z) * q_n(beta - 1.0, z)).sqrt()
}

/// `s(z) = sqrt(q_(β+1) / q_(β-1))`, with `s(1) = 1`.
pub fn s_of_z(beta: f64, z: f64) -> f64 {
    if z == 1.0 {
        return 1.0;
    }
    (q_n(beta + 1.0, z) / q_n(beta - 1.0, z)).sqrt()
}

/// `|[u]|` and `|σ|` of the compressive shock from `h_ahead` to `h_behind`.
pub fn shock_jump(law: &GasLaw, h_ahead: f64, h_behind: f64) -> (f64, f64) {
    if h_behind == h_ahead {
        return (0.0, law.c(h_ahead));
    }
    match law.beta() {
        Some(beta) if h_ahead > 0.0 => {
            let z = h_behind / h_ahead;
            let zk = z.powf(0.5 * (beta + 1.0));
            (h_ahead * zk * r_of_z(beta, z), law.c(h_ahead) * zk * s_of_z(beta, z))
        }
        _ => {
            let dp = law.p(h_behind) - law.p(h_ahead);
            let dv = law.v(h_ahead) - law.v(h_behind);
            ((dp * dv).sqrt(), (dp / dv).sqrt())
        }
    }
}

/// Compressive shock with ahead state `ahead`, behind density ratio `z`.
pub fn shock_wave(law: &GasLaw, ahead: SymState, z: f64, family: Family) -> Result<Wave> {
    if !(z > 1.0) || !z.is_finite() {
        return Err(Error::InvalidShock(format!("density ratio z must exceed 1, got {z}")));
    }
    if !(ahead.h > 0.0) {
        return Err(Error::InvalidShock(format!("ahead state must be non-vacuum, h = {}", ahead.h)));
    }
    let hb = z * ahead.h;
    let (du, sigma) = shock_jump(law, ahead.h, hb);
    let wave = match family {
        Family::Forward => Wave {
            family,
            kind: WaveKind::Shock,
            left: SymState { h: hb, u: ahead.u + du },
            right: ahead,
            speeds: [sigma, sigma],
            center: Some([0.0, 0.0]),
            atom_rate: None,
            atom_weight: None,
        },
        Family::Backward => Wave {
            family,
            kind: WaveKind::Shock,
            left: ahead,
            right: SymState { h: hb, u: ahead.u - du },
            speeds: [-sigma, -sigma],
            center: Some([0.0, 0.0]),
            atom_rate: None,
            atom_weight: None,
        },
        Family::Stationary => {
            return Err(Error::InvalidShock("shocks belong to the forward or backward family".into()))
        }
    };
    Ok(wave)
}

/// Shock into a state at rest with symmetric variable `h_ahead`.
pub fn shock_from_ratio(law: &GasLaw, h_ahead: f64, z: f64, family: Family) -> Result<Wave> {
    shock_wave(law, SymState { h: h_ahead, u: 0.0 }, z, family)
}

/// Centered simple wave joining `ahead` to the state with `h_behind`. The
/// result is a rarefaction when the behind state is rarer and a compression,
/// focusing at `center`, otherwise.
pub fn rarefaction_wave(
    law: &GasLaw,
    ahead: SymState,
    h_behind: f64,
    family: Family,
    center: (f64, f64),
) -> Result<Wave> {
    if !(h_behind >= 0.0) || !(ahead.h >= 0.0) {
        return Err(Error::Domain("simple wave edges need h >= 0".into()));
    }
    let kind = if h_behind <= ahead.h {
        WaveKind::Rarefaction
    } else {
        WaveKind::Compression
    };
    let (ca, cb) = (law.c(ahead.h), law.c(h_behind));
    let (left, right, speeds) = match family {
        Family::Backward => {
            let behind = SymState {
                h: h_behind,
                u: ahead.u + ahead.h - h_behind,
            };
            (ahead, behind, [-ca, -cb])
        }
        Family::Forward => {
            let behind = SymState {
                h: h_behind,
                u: ahead.u - ahead.h + h_behind,
            };
            (behind, ahead, [cb, ca])
        }
        Family::Stationary => return Err(Error::Domain("simple waves are not stationary".into())),
    };
    Ok(Wave {
        family,
        kind,
        left,
        right,
        speeds,
        center: Some([center.0, center.1]),
        atom_rate: None,
        atom_weight: None,
    })
}

impl Wave {
    pub fn is_simple(&self) -> bool {
        matches!(self.kind, WaveKind::Rarefaction | WaveKind::Compression)
    }

    /// State inside a centered simple wave at `(t, x)`.
    pub fn profile(&self, law: &GasLaw, t: f64, x: f64) -> Result<SymState> {
        if !self.is_simple() {
            return Err(Error::Unsupported(format!("{} has no interior profile", self.kind.name())));
        }
        let [t0, x0] = self.center.unwrap_or([0.0, 0.0]);
        let dt = t - t0;
        if self.kind == WaveKind::Compression && dt >= 0.0 {
            return Err(Error::Domain(format!("compression focuses at t = {t0}; queried at t = {t}")));
        }
        if dt == 0.0 {
            return Err(Error::EventTime(t));
        }
        let xi = (x - x0) / dt;
        let (lo, hi) = (self.speeds[0].min(self.speeds[1]), self.speeds[0].max(self.speeds[1]));
        let xi = xi.clamp(lo, hi);
        Ok(simple_state(law, self.family, self.invariant(), xi))
    }

    /// Riemann invariant constant across the wave: `u + h` (backward) or
    /// `u - h` (forward).
    pub fn invariant(&self) -> f64 {
        match self.family {
            Family::Backward => self.left.u + self.left.h,
            _ => self.right.u - self.right.h,
        }
    }
}

/// State of a centered simple wave of `family` at similarity speed `xi`.
pub fn simple_state(law: &GasLaw, family: Family, invariant: f64, xi: f64) -> SymState {
    match family {
        Family::Backward => {
            let h = law.c_inv(-xi);
            SymState { h, u: invariant - h }
        }
        _ => {
            let h = law.c_inv(xi);
            SymState { h, u: invariant + h }
        }
    }
}

/// Ordered sequence of waves with the constant states between them;
/// `states.len() == waves.len() + 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WaveFan {
    pub waves: Vec<Wave>,
    pub states: Vec<SymState>,
}

impl WaveFan {
    /// Middle state of a two-wave fan, if there is a unique one.
    pub fn middle(&self) -> Option<SymState> {
        (self.states.len() == 3).then(|| self.states[1])
    }

    pub fn has_vacuum(&self) -> bool {
        self.waves.iter().any(|w| w.kind == WaveKind::Vacuum)
    }

    /// State at similarity speed `xi = (x - x0)/(t - t0)`, right-continuous
    /// across jumps.
    pub fn sample(&self, law: &GasLaw, xi: f64) -> SymState {
        for (i, w) in self.waves.iter().enumerate() {
            if xi < w.speeds[0] {
                return self.states[i];
            }
            if w.is_simple() && xi < w.speeds[1] {
                return simple_state(law, w.family, w.invariant(), xi);
            }
        }
        *self.states.last().expect("fan has at least one state")
    }
}

fn backward_curve(law: &GasLaw, left: SymState, h: f64) -> f64 {
    if h <= left.h {
        left.u + left.h - h
    } else {
        left.u - shock_jump(law, left.h, h).0
    }
}

fn forward_curve(law: &GasLaw, right: SymState, h: f64) -> f64 {
    if h <= right.h {
        right.u - right.h + h
    } else {
        right.u + shock_jump(law, right.h, h).0
    }
}

/// `Φ(h) = u_backward(h) - u_forward(h)`, strictly decreasing.
pub fn riemann_phi(law: &GasLaw, left: SymState, right: SymState, h: f64) -> f64 {
    backward_curve(law, left, h) - forward_curve(law, right, h)
}

fn side_wave(law: &GasLaw, outer: SymState, mid: SymState, family: Family) -> Option<Wave> {
    if mid.h == outer.h {
        return None;
    }
    if mid.h > outer.h {
        let mut w = shock_wave(law, outer, mid.h / outer.h, family).ok()?;
        match family {
            Family::Backward => w.right = mid,
            _ => w.left = mid,
        }
        Some(w)
    } else {
        let mut w = rarefaction_wave(law, outer, mid.h, family, (0.0, 0.0)).ok()?;
        match family {
            Family::Backward => w.right = mid,
            _ => w.left = mid,
        }
        Some(w)
    }
}

/// Waves of the vacuum-forming or vacuum-bounding fan.
fn vacuum_fan(law: &GasLaw, left: SymState, right: SymState, weight: Option<f64>) -> Result<WaveFan> {
    let um = left.u + left.h;
    let up = right.u - right.h;
    let vl = SymState { h: 0.0, u: um };
    let vr = SymState { h: 0.0, u: up };
    let mut waves = Vec::new();
    let mut states = vec![left];
    if left.h > 0.0 {
        let mut w = rarefaction_wave(law, left, 0.0, Family::Backward, (0.0, 0.0))?;
        w.right = vl;
        waves.push(w);
        states.push(vl);
    }
    waves.push(Wave {
        family: Family::Stationary,
        kind: WaveKind::Vacuum,
        left: vl,
        right: vr,
        speeds: [0.0, 0.0],
        center: Some([0.0, 0.0]),
        atom_rate: Some(up - um),
        atom_weight: weight,
    });
    states.push(vr);
    if right.h > 0.0 {
        let mut w = rarefaction_wave(law, right, 0.0, Family::Forward, (0.0, 0.0))?;
        w.left = vr;
        waves.push(w);
        states.push(right);
    } else {
        let last = states.len() - 1;
        states[last] = right;
    }
    Ok(WaveFan { waves, states })
}

/// Exact Riemann solver in symmetric variables, centered at the origin.
pub fn riemann_solve(law: &GasLaw, left: SymState, right: SymState) -> Result<WaveFan> {
    let left = SymState::new(left.h, left.u)?;
    let right = SymState::new(right.h, right.u)?;
    if left == right {
        return Ok(WaveFan {
            waves: Vec::new(),
            states: vec![left],
        });
    }
    if right.u - left.u >= left.h + right.h {
        return vacuum_fan(law, left, right, None);
    }
    if left.h == 0.0 || right.h == 0.0 {
        return Err(Error::Unsupported(
            "compressive Riemann data with a vacuum side state".into(),
        ));
    }
    let phi = |h: f64| riemann_phi(law, left, right, h);
    let mut hi = left.h.max(right.h);
    let mut guard = 0;
    while phi(hi) > 0.0 {
        hi *= 2.0;
        guard += 1;
        if guard > 2000 || !hi.is_finite() {
            return Err(Error::Numerical(format!(
                "Riemann bracket failed: Φ({hi:e}) = {:e} for left {left:?}, right {right:?}",
                phi(hi)
            )));
        }
    }
    let hm = quad::bisect(phi, 0.0, hi, 1e-15)?;
    let um = 0.5 * (backward_curve(law, left, hm) + forward_curve(law, right, hm));
    let mid = SymState { h: hm, u: um };
    let back = side_wave(law, left, mid, Family::Backward);
    let fwd = side_wave(law, right, mid, Family::Forward);
    let (waves, states) = match (back, fwd) {
        (Some(b), Some(f)) => (vec![b, f], vec![left, mid, right]),
        (Some(mut b), None) => {
            b.right = right;
            (vec![b], vec![left, right])
        }
        (None, Some(mut f)) => {
            f.left = left;
            (vec![f], vec![left, right])
        }
        (None, None) => (Vec::new(), vec![left]),
    };
    log::debug!("riemann: h_m = {hm:.17e}, u_m = {um:.17e}, {} waves", waves.len());
    Ok(WaveFan { waves, states })
}

/// Fan of the Riemann problem with a vacuum of width `w0` at the interface.
/// With `w0 = 0` this is exactly [`riemann_solve`].
pub fn vacuum_riemann_fan(law: &GasLaw, left: SymState, right: SymState, w0: f64) -> Result<WaveFan> {
    if !(w0 >= 0.0) {
        return Err(Error::Domain(format!("vacuum width must be non-negative, got {w0}")));
    }
    if w0 == 0.0 {
        return riemann_solve(law, left, right);
    }
    if !(left.h > 0.0) || !(right.h > 0.0) {
        return Err(Error::Unsupported("vacuum Riemann data need non-vacuum side states".into()));
    }
    vacuum_fan(law, left, right, Some(w0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn law2() -> GasLaw {
        GasLaw::with_beta(2.0).unwrap()
    }

    #[test]
    fn shock_example_values() {
        let w = shock_from_ratio(&law2(), 1.0, 2.0, Family::Forward).unwrap();
        let du = w.right.u - w.left.u;
        assert!((du - -1.080_123_449_734_643_4).abs() < 1e-14);
        assert!((w.speeds[0] - 2.160_246_899_469_286_7).abs() < 1e-14);
        assert!(shock_from_ratio(&law2(), 1.0, 1.0, Family::Forward).is_err());
        assert!(shock_from_ratio(&law2(), 1.0, 0.5, Family::Forward).is_err());
    }

    #[test]
    fn acoustic_limit() {
        let law = law2();
        let w = shock_from_ratio(&law, 1.5, 1.0 + 1e-9, Family::Backward).unwrap();
        assert!((w.right.u - w.left.u).abs() < 1e-8);
        assert!((w.speeds[0] + law.c(1.5)).abs() < 1e-8);
    }

    #[test]
    fn fan_from_vacuum_profile() {
        let law = law2();
        let w = rarefaction_wave(&law, SymState { h: 1.0, u: 0.0 }, 0.0, Family::Forward, (0.0, 0.0)).unwrap();
        let s = w.profile(&law, 1.0, 0.25).unwrap();
        assert!((s.h - 0.5).abs() < 1e-15);
        let b = rarefaction_wave(&law, SymState { h: 1.0, u: 0.0 }, 0.0, Family::Backward, (0.0, 0.0)).unwrap();
        assert_eq!(b.speeds, [-1.0, 0.0]);
        assert_eq!(b.kind, WaveKind::Rarefaction);
        let c = rarefaction_wave(&law, SymState { h: 1.0, u: 0.0 }, 2.0, Family::Backward, (1.0, 0.0)).unwrap();
        assert_eq!(c.kind, WaveKind::Compression);
        assert!(c.profile(&law, 1.0, 0.0).is_err());
        assert!(c.profile(&law, 0.5, 0.9).is_ok());
    }

    #[test]
    fn trivial_and_vacuum_fans() {
        let law = law2();
        let s = SymState { h: 1.0, u: 0.3 };
        let fan = riemann_solve(&law, s, s).unwrap();
        assert!(fan.waves.is_empty());
        let fan = riemann_solve(&law, SymState { h: 1.0, u: 0.0 }, SymState { h: 1.0, u: 3.0 }).unwrap();
        let vac = fan.waves.iter().find(|w| w.kind == WaveKind::Vacuum).unwrap();
        assert_eq!(vac.atom_rate, Some(1.0));
    }

    #[test]
    fn symmetric_collision() {
        let law = law2();
        let fan = riemann_solve(&law, SymState { h: 1.0, u: 1.0 }, SymState { h: 1.0, u: -1.0 }).unwrap();
        let m = fan.middle().unwrap();
        assert_eq!(m.u, 0.0);
        assert!((m.h - 1.932_508_750_255_580_8).abs() < 1e-13);
        assert!(fan.waves.iter().all(|w| w.kind == WaveKind::Shock));
        assert!((fan.waves[1].speeds[0] - 2.072_375_996_177_967_6).abs() < 1e-12);
    }

    #[test]
    fn vacuum_width_zero_defers() {
        let law = law2();
        let l = SymState { h: 1.0, u: 0.4 };
        let r = SymState { h: 2.0, u: -0.3 };
        assert_eq!(vacuum_riemann_fan(&law, l, r, 0.0).unwrap(), riemann_solve(&law, l, r).unwrap());
        let fan = vacuum_riemann_fan(&law, l, r, 1.0).unwrap();
        assert_eq!(fan.waves.len(), 3);
        assert_eq!(fan.waves[1].atom_weight, Some(1.0));
    }

    #[test]
    fn near_vacuum_continuity() {
        let law = law2();
        let fan = riemann_solve(&law, SymState { h: 1.0, u: 0.0 }, SymState { h: 1.0, u: 2.0 - 1e-6 }).unwrap();
        assert!(fan.middle().unwrap().h < 1e-4);
    }
}
