//! Exact piecewise solutions: phases of fixed topology made of straight
//! boundaries, constant or centered-simple-wave regions, and discontinuity
//! curves that may carry a vacuum atom.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measure::{Atom, Density, DensityKind, Piece, RadonMeasure};
use crate::thermo::{GasLaw, SymState};
use crate::waves::{simple_state, Family, WaveFan, WaveKind};

/// `x(t) = x0 + speed (t - t0)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Line {
    pub t0: f64,
    pub x0: f64,
    pub speed: f64,
}

impl Line {
    pub fn at(&self, t: f64) -> f64 {
        self.x0 + self.speed * (t - self.t0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Field {
    Constant {
        h: f64,
        u: f64,
    },
    /// Simple wave centered at `(t0, x0)` with Riemann invariant `u + h`
    /// (backward) or `u - h` (forward).
    Centered {
        t0: f64,
        x0: f64,
        family: Family,
        invariant: f64,
    },
}

impl Field {
    pub fn constant(s: SymState) -> Self {
        Field::Constant { h: s.h, u: s.u }
    }

    pub fn state(&self, law: &GasLaw, t: f64, x: f64) -> SymState {
        match *self {
            Field::Constant { h, u } => SymState { h, u },
            Field::Centered {
                t0,
                x0,
                family,
                invariant,
            } => simple_state(law, family, invariant, (x - x0) / (t - t0)),
        }
    }
}

/// `w(t) = w0 + rate (t - t0)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Weight {
    pub t0: f64,
    pub w0: f64,
    pub rate: f64,
}

impl Weight {
    pub fn at(&self, t: f64) -> f64 {
        self.w0 + self.rate * (t - self.t0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CurveKind {
    Shock,
    Vacuum,
    Contact,
}

impl CurveKind {
    pub fn name(self) -> &'static str {
        match self {
            CurveKind::Shock => "shock",
            CurveKind::Vacuum => "vacuum",
            CurveKind::Contact => "contact",
        }
    }
}

/// Discontinuity located on boundary `boundary` of its phase.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Curve {
    pub boundary: usize,
    pub kind: CurveKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight: Option<Weight>,
}

/// Interval `[t0, t1]` with a fixed arrangement of regions; region `i` lies
/// between boundaries `i - 1` and `i` (domain edges at the ends).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Phase {
    pub t0: f64,
    pub t1: f64,
    pub boundaries: Vec<Line>,
    pub regions: Vec<Field>,
    pub curves: Vec<Curve>,
}

/// Outcome of a point query.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Sample {
    Interior { region: usize, state: SymState },
    OnCurve { curve: usize, left: SymState, right: SymState },
}

impl Sample {
    /// Interior state, or the right limit on a curve.
    pub fn right_state(&self) -> SymState {
        match *self {
            Sample::Interior { state, .. } => state,
            Sample::OnCurve { right, .. } => right,
        }
    }
}

/// One discontinuity at one time, with exact rates from the solution object.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurveSnapshot {
    pub index: usize,
    pub kind: CurveKind,
    pub x: f64,
    pub speed: f64,
    pub w: f64,
    pub w_rate: f64,
    pub left: SymState,
    pub right: SymState,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PiecewiseSolution {
    pub label: String,
    pub law: GasLaw,
    pub domain: [f64; 2],
    pub valid_time: [f64; 2],
    #[serde(default)]
    pub events: Vec<f64>,
    pub phases: Vec<Phase>,
}

impl PiecewiseSolution {
    /// Checks shape and ordering invariants.
    pub fn validate(&self) -> Result<()> {
        let [a, b] = self.domain;
        if !(b > a) {
            return Err(Error::Config(format!("empty domain [{a}, {b}]")));
        }
        let [t0, t1] = self.valid_time;
        if !(t1 >= t0) {
            return Err(Error::Config(format!("empty validity interval [{t0}, {t1}]")));
        }
        if self.phases.is_empty() {
            return Err(Error::Config("solution has no phases".into()));
        }
        for (k, ph) in self.phases.iter().enumerate() {
            if ph.regions.len() != ph.boundaries.len() + 1 {
                return Err(Error::Config(format!("phase {k}: need one more region than boundaries")));
            }
            for c in &ph.curves {
                if c.boundary >= ph.boundaries.len() {
                    return Err(Error::Config(format!("phase {k}: curve on missing boundary {}", c.boundary)));
                }
            }
            for f in &ph.regions {
                if let Field::Constant { h, u } = f {
                    SymState::new(*h, *u)?;
                }
            }
            let mid = 0.5 * (ph.t0 + ph.t1);
            let xs: Vec<f64> = ph.boundaries.iter().map(|l| l.at(mid)).collect();
            if xs.windows(2).any(|w| w[1] < w[0]) {
                return Err(Error::Config(format!("phase {k}: boundaries out of order at t = {mid}")));
            }
            for c in &ph.curves {
                if let Some(w) = c.weight {
                    if w.at(ph.t0) < -1e-12 || w.at(ph.t1) < -1e-12 {
                        return Err(Error::Config(format!("phase {k}: negative atom weight")));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn is_event(&self, t: f64) -> bool {
        self.events.iter().any(|&e| (t - e).abs() <= 1e-14 * e.abs().max(1.0))
    }

    pub fn phase_at(&self, t: f64) -> Result<&Phase> {
        let [lo, hi] = self.valid_time;
        if !(t >= lo && t <= hi) {
            return Err(Error::OutOfTime { t, lo, hi });
        }
        let n = self.phases.len();
        self.phases
            .iter()
            .enumerate()
            .find(|(i, p)| t >= p.t0 && (t < p.t1 || (*i == n - 1 && t <= p.t1)))
            .map(|(_, p)| p)
            .ok_or(Error::OutOfTime { t, lo, hi })
    }

    pub fn boundary_positions(&self, t: f64) -> Result<Vec<f64>> {
        Ok(self.phase_at(t)?.boundaries.iter().map(|l| l.at(t)).collect())
    }

    /// Field value at `(t, x)`; both one-sided limits on a discontinuity.
    pub fn sample(&self, t: f64, x: f64) -> Result<Sample> {
        let ph = self.phase_at(t)?;
        let xs: Vec<f64> = ph.boundaries.iter().map(|l| l.at(t)).collect();
        for (ci, c) in ph.curves.iter().enumerate() {
            let xc = xs[c.boundary];
            if (x - xc).abs() <= 1e-14 * xc.abs().max(1.0) {
                let (left, right) = self.one_sided(ph, c.boundary, t, xc);
                return Ok(Sample::OnCurve { curve: ci, left, right });
            }
        }
        let region = xs.partition_point(|&b| b <= x);
        Ok(Sample::Interior {
            region,
            state: ph.regions[region].state(&self.law, t, x),
        })
    }

    /// State at `(t, x)`, taking the right limit on discontinuities.
    pub fn state(&self, t: f64, x: f64) -> Result<SymState> {
        Ok(self.sample(t, x)?.right_state())
    }

    fn one_sided(&self, ph: &Phase, b: usize, t: f64, x: f64) -> (SymState, SymState) {
        (
            ph.regions[b].state(&self.law, t, x),
            ph.regions[b + 1].state(&self.law, t, x),
        )
    }

    /// Every discontinuity alive at `t` with its one-sided states.
    pub fn curves_at(&self, t: f64) -> Result<Vec<CurveSnapshot>> {
        let ph = self.phase_at(t)?;
        Ok(ph
            .curves
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let line = ph.boundaries[c.boundary];
                let x = line.at(t);
                let (left, right) = self.one_sided(ph, c.boundary, t, x);
                CurveSnapshot {
                    index: i,
                    kind: c.kind,
                    x,
                    speed: line.speed,
                    w: c.weight.map_or(0.0, |w| w.at(t).max(0.0)),
                    w_rate: c.weight.map_or(0.0, |w| w.rate),
                    left,
                    right,
                }
            })
            .collect())
    }

    /// Region boundaries at `t` clipped to the domain, including its edges.
    pub fn breakpoints(&self, t: f64) -> Result<Vec<f64>> {
        let [a, b] = self.domain;
        let mut pts = vec![a];
        pts.extend(self.boundary_positions(t)?.into_iter().map(|x| x.clamp(a, b)));
        pts.push(b);
        Ok(pts)
    }

    /// Specific volume `V(t)` as a Radon measure.
    pub fn measure_at(&self, t: f64) -> Result<RadonMeasure> {
        let ph = self.phase_at(t)?;
        let pts = self.breakpoints(t)?;
        let mut pieces = Vec::new();
        for (i, f) in ph.regions.iter().enumerate() {
            let (x0, x1) = (pts[i], pts[i + 1]);
            if !(x1 > x0) {
                continue;
            }
            let kind = match *f {
                Field::Constant { h, .. } => {
                    if h == 0.0 {
                        return Err(Error::Unsupported("vacuum region of positive width".into()));
                    }
                    DensityKind::Constant { value: self.law.v(h) }
                }
                Field::Centered { t0, x0: xc, family, .. } => DensityKind::SimpleWave {
                    t0,
                    x0: xc,
                    t,
                    family,
                    law: self.law.clone(),
                },
            };
            pieces.push(Piece { x0, x1, kind });
        }
        let atoms = self
            .curves_at(t)?
            .into_iter()
            .filter(|c| c.w > 0.0)
            .map(|c| Atom { x: c.x, w: c.w })
            .collect();
        RadonMeasure::new(
            Density {
                domain: self.domain,
                pieces,
            },
            atoms,
        )
    }

    /// Uniform grid of `n` points over the domain.
    pub fn profile(&self, t: f64, n: usize) -> Result<Vec<ProfileRow>> {
        let [a, b] = self.domain;
        let n = n.max(2);
        (0..n)
            .map(|i| {
                let x = a + (b - a) * i as f64 / (n - 1) as f64;
                let (region, s) = match self.sample(t, x)? {
                    Sample::Interior { region, state } => (region, state),
                    Sample::OnCurve { curve, right, .. } => (self.phase_at(t)?.curves[curve].boundary + 1, right),
                };
                Ok(ProfileRow {
                    t,
                    x,
                    h: s.h,
                    u: s.u,
                    p: self.law.p(s.h),
                    v: self.law.v(s.h),
                    region_id: region,
                })
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProfileRow {
    pub t: f64,
    pub x: f64,
    pub h: f64,
    pub u: f64,
    pub p: f64,
    pub v: f64,
    pub region_id: usize,
}

/// Phase of a fan centered at `(tc, xc)`, valid on `[t0, t1]` with `t0 >= tc`.
pub fn fan_phase(fan: &WaveFan, tc: f64, xc: f64, t0: f64, t1: f64) -> Phase {
    let line = |speed: f64| Line { t0: tc, x0: xc, speed };
    let mut boundaries = Vec::new();
    let mut regions = vec![Field::constant(fan.states[0])];
    let mut curves = Vec::new();
    for (i, w) in fan.waves.iter().enumerate() {
        match w.kind {
            WaveKind::Rarefaction | WaveKind::Compression => {
                boundaries.push(line(w.speeds[0]));
                regions.push(Field::Centered {
                    t0: tc,
                    x0: xc,
                    family: w.family,
                    invariant: w.invariant(),
                });
                boundaries.push(line(w.speeds[1]));
            }
            WaveKind::Shock | WaveKind::Contact | WaveKind::Vacuum => {
                let kind = match w.kind {
                    WaveKind::Shock => CurveKind::Shock,
                    WaveKind::Contact => CurveKind::Contact,
                    _ => CurveKind::Vacuum,
                };
                let weight = (w.kind == WaveKind::Vacuum).then(|| Weight {
                    t0: tc,
                    w0: w.atom_weight.unwrap_or(0.0),
                    rate: w.atom_rate.unwrap_or(0.0),
                });
                curves.push(Curve {
                    boundary: boundaries.len(),
                    kind,
                    weight,
                });
                boundaries.push(line(w.speeds[0]));
            }
        }
        regions.push(Field::constant(fan.states[i + 1]));
    }
    Phase {
        t0,
        t1,
        boundaries,
        regions,
        curves,
    }
}

/// Latest time in `[t0, t_max]` at which every boundary of `phase` is still
/// inside `domain`.
pub fn phase_exit_time(phase: &Phase, domain: [f64; 2], t0: f64, t_max: f64) -> f64 {
    let mut t = t_max;
    for l in &phase.boundaries {
        for edge in domain {
            if l.speed != 0.0 {
                let hit = l.t0 + (edge - l.x0) / l.speed;
                if hit > t0 && hit < t {
                    t = hit;
                }
            }
        }
    }
    t
}
