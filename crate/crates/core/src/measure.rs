//! Radon measures on an interval: a piecewise density plus finitely many atoms.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quad::{self, QuadOptions, Singular};
use crate::thermo::GasLaw;
use crate::waves::Family;

/// Atoms lighter than this are dropped on construction.
pub const ATOM_PRUNE: f64 = 1e-14;

/// Density law on one piece.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "snake_case")]
pub enum DensityKind {
    Constant {
        value: f64,
    },
    /// `v(h)` of a centered simple wave at time `t`: `h = c⁻¹(±(x - x0)/(t - t0))`.
    SimpleWave {
        t0: f64,
        x0: f64,
        t: f64,
        family: Family,
        law: GasLaw,
    },
    /// Linear interpolation through `(xs[i], values[i])`.
    Tabulated {
        xs: Vec<f64>,
        values: Vec<f64>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Piece {
    pub x0: f64,
    pub x1: f64,
    #[serde(flatten)]
    pub kind: DensityKind,
}

impl Piece {
    pub fn constant(x0: f64, x1: f64, value: f64) -> Self {
        Self {
            x0,
            x1,
            kind: DensityKind::Constant { value },
        }
    }

    /// Density at `x`; `f64::INFINITY` at a vacuum edge.
    pub fn eval(&self, x: f64) -> f64 {
        match &self.kind {
            DensityKind::Constant { value } => *value,
            DensityKind::SimpleWave {
                t0,
                x0,
                t,
                family,
                law,
            } => {
                let speed = family.sign() * (x - x0) / (t - t0);
                if speed <= 0.0 {
                    f64::INFINITY
                } else {
                    law.v_of_c(speed)
                }
            }
            DensityKind::Tabulated { xs, values } => {
                let i = xs.partition_point(|&p| p <= x).clamp(1, xs.len() - 1);
                let (a, b) = (xs[i - 1], xs[i]);
                let s = ((x - a) / (b - a)).clamp(0.0, 1.0);
                values[i - 1] + s * (values[i] - values[i - 1])
            }
        }
    }

    fn singular_ends(&self) -> Singular {
        let l = self.eval(self.x0).is_infinite();
        let r = self.eval(self.x1).is_infinite();
        match (l, r) {
            (true, true) => Singular::Both,
            (true, false) => Singular::Left,
            (false, true) => Singular::Right,
            (false, false) => Singular::None,
        }
    }

    fn validate(&self) -> Result<()> {
        match &self.kind {
            DensityKind::Constant { value } if !(*value >= 0.0) || !value.is_finite() => {
                Err(Error::Domain(format!("negative or non-finite density {value}")))
            }
            DensityKind::Tabulated { xs, values } => {
                if xs.len() < 2 || xs.len() != values.len() {
                    return Err(Error::Domain("tabulated density needs matching xs/values, len >= 2".into()));
                }
                if xs.windows(2).any(|w| !(w[1] > w[0])) {
                    return Err(Error::Domain("tabulated density abscissae must increase".into()));
                }
                if values.iter().any(|v| !(*v >= 0.0) || !v.is_finite()) {
                    return Err(Error::Domain("tabulated density values must be non-negative".into()));
                }
                Ok(())
            }
            DensityKind::SimpleWave { t0, t, .. } if t == t0 => {
                Err(Error::Domain("simple-wave density evaluated at its center time".into()))
            }
            _ => Ok(()),
        }
    }
}

/// Absolutely continuous part: pieces covering `domain`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Density {
    pub domain: [f64; 2],
    pub pieces: Vec<Piece>,
}

impl Density {
    pub fn constant(domain: [f64; 2], value: f64) -> Self {
        Self {
            domain,
            pieces: vec![Piece::constant(domain[0], domain[1], value)],
        }
    }

    pub fn zero(domain: [f64; 2]) -> Self {
        Self::constant(domain, 0.0)
    }

    fn validate(&self) -> Result<()> {
        let [a, b] = self.domain;
        if !(b > a) {
            return Err(Error::Domain(format!("empty domain [{a}, {b}]")));
        }
        let first = self.pieces.first().ok_or_else(|| Error::Domain("density has no pieces".into()))?;
        let last = self.pieces.last().unwrap();
        if first.x0 != a || last.x1 != b {
            return Err(Error::Domain("density pieces must cover the domain".into()));
        }
        for w in self.pieces.windows(2) {
            if w[0].x1 != w[1].x0 {
                return Err(Error::Domain(format!("gap or overlap at {} / {}", w[0].x1, w[1].x0)));
            }
        }
        for p in &self.pieces {
            if !(p.x1 > p.x0) {
                return Err(Error::Domain(format!("degenerate piece [{}, {}]", p.x0, p.x1)));
            }
            p.validate()?;
        }
        Ok(())
    }

    /// Density at `x` (right-continuous at breakpoints); zero outside the domain.
    pub fn eval(&self, x: f64) -> f64 {
        if x < self.domain[0] || x > self.domain[1] {
            return 0.0;
        }
        let i = self.pieces.partition_point(|p| p.x1 <= x).min(self.pieces.len() - 1);
        self.pieces[i].eval(x)
    }

    pub fn breakpoints(&self) -> Vec<f64> {
        let mut pts: Vec<f64> = self.pieces.iter().map(|p| p.x0).collect();
        pts.push(self.domain[1]);
        pts
    }

    /// Restriction to `[lo, hi]`.
    pub fn clipped(&self, lo: f64, hi: f64) -> Density {
        let pieces = self
            .pieces
            .iter()
            .filter_map(|p| {
                let (a, b) = (p.x0.max(lo), p.x1.min(hi));
                (b > a).then(|| Piece {
                    x0: a,
                    x1: b,
                    kind: p.kind.clone(),
                })
            })
            .collect();
        Density {
            domain: [lo.max(self.domain[0]), hi.min(self.domain[1])],
            pieces,
        }
    }

    /// `∫ g(density(x), x) dx` piece by piece with singular-end grading; the
    /// tolerance is shared evenly between pieces.
    pub fn integrate_with<G: Fn(f64, f64) -> f64>(&self, g: G, abs_tol: f64) -> Result<quad::Quad> {
        let abs_tol = abs_tol / self.pieces.len() as f64;
        let mut value = 0.0;
        let mut error = 0.0;
        let mut intervals = 0;
        for p in &self.pieces {
            let q = quad::integrate_singular(
                |x| g(p.eval(x), x),
                p.x0,
                p.x1,
                p.singular_ends(),
                QuadOptions {
                    abs_tol,
                    rel_tol: 0.0,
                    max_intervals: 4000,
                },
            )?;
            value += q.value;
            error += q.error;
            intervals += q.intervals;
        }
        Ok(quad::Quad {
            value,
            error,
            intervals,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub x: f64,
    pub w: f64,
}

/// Positive Radon measure `ι(density) + Σ w_i δ_(x_i)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawMeasure")]
pub struct RadonMeasure {
    #[serde(flatten)]
    density: Density,
    atoms: Vec<Atom>,
}

#[derive(Deserialize)]
struct RawMeasure {
    domain: [f64; 2],
    pieces: Vec<Piece>,
    #[serde(default)]
    atoms: Vec<Atom>,
}

impl TryFrom<RawMeasure> for RadonMeasure {
    type Error = Error;
    fn try_from(raw: RawMeasure) -> Result<Self> {
        RadonMeasure::new(
            Density {
                domain: raw.domain,
                pieces: raw.pieces,
            },
            raw.atoms,
        )
    }
}

/// Total variation computed by quadrature, optionally beside a closed form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasureNormReport {
    pub closed_form: Option<f64>,
    pub quadrature: f64,
    pub abs_err: Option<f64>,
    pub error_estimate: f64,
}

impl MeasureNormReport {
    pub fn with_closed_form(mut self, exact: f64) -> Self {
        self.closed_form = Some(exact);
        self.abs_err = Some((exact - self.quadrature).abs());
        self
    }
}

impl RadonMeasure {
    /// Validates the density, drops atoms below [`ATOM_PRUNE`] and requires the
    /// rest to be positive, inside the domain and strictly increasing.
    pub fn new(density: Density, atoms: Vec<Atom>) -> Result<Self> {
        density.validate()?;
        let [a, b] = density.domain;
        let atoms: Vec<Atom> = atoms.into_iter().filter(|at| at.w.abs() >= ATOM_PRUNE).collect();
        for at in &atoms {
            if !(at.w > 0.0) || !at.w.is_finite() {
                return Err(Error::Domain(format!("atom weight must be positive, got {}", at.w)));
            }
            if !(at.x >= a && at.x <= b) {
                return Err(Error::Domain(format!("atom at {} outside [{a}, {b}]", at.x)));
            }
        }
        if atoms.windows(2).any(|w| !(w[1].x > w[0].x)) {
            return Err(Error::Domain("atom locations must be strictly increasing".into()));
        }
        Ok(Self { density, atoms })
    }

    /// `ι`: the absolutely continuous measure with the given density.
    pub fn iota(density: Density) -> Result<Self> {
        Self::new(density, Vec::new())
    }

    pub fn domain(&self) -> [f64; 2] {
        self.density.domain
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn density(&self) -> &Density {
        &self.density
    }

    /// `Π`: the density of the absolutely continuous part.
    pub fn project_pi(&self) -> Density {
        self.density.clone()
    }

    /// Same density with the atoms replaced.
    pub fn with_atoms(&self, atoms: Vec<Atom>) -> Result<Self> {
        Self::new(self.density.clone(), atoms)
    }

    /// `|μ|(domain)` by adaptive quadrature plus atom weights.
    pub fn total_variation(&self, abs_tol: f64) -> Result<MeasureNormReport> {
        let q = self.density.integrate_with(|v, _| v.abs(), abs_tol)?;
        let atoms: f64 = self.atoms.iter().map(|a| a.w).sum();
        Ok(MeasureNormReport {
            closed_form: None,
            quadrature: q.value + atoms,
            abs_err: None,
            error_estimate: q.error,
        })
    }

    /// `⟨μ, φ⟩` including `Σ w_i φ(x_i)`.
    pub fn pair<F: Fn(f64) -> f64>(&self, phi: F, abs_tol: f64) -> Result<f64> {
        let q = self.density.integrate_with(|v, x| v * phi(x), abs_tol)?;
        Ok(q.value + self.atoms.iter().map(|a| a.w * phi(a.x)).sum::<f64>())
    }

    /// `⟨μ, φ⟩` for `φ` supported in `[lo, hi]`.
    pub fn pair_on<F: Fn(f64) -> f64>(&self, phi: F, lo: f64, hi: f64, abs_tol: f64) -> Result<f64> {
        let d = self.density.clipped(lo, hi);
        let q = if d.pieces.is_empty() {
            0.0
        } else {
            d.integrate_with(|v, x| v * phi(x), abs_tol)?.value
        };
        let atoms: f64 = self
            .atoms
            .iter()
            .filter(|a| a.x >= lo && a.x <= hi)
            .map(|a| a.w * phi(a.x))
            .sum();
        Ok(q + atoms)
    }
}

/// Quantity obtained by composing a constitutive function with `Π(V)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Composed {
    Pressure,
    Energy,
}

/// Field `P(Π V)` or `E(Π V)`; atoms of `V` never enter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComposedField {
    pub quantity: Composed,
    pub law: GasLaw,
    pub density: Density,
}

impl ComposedField {
    pub fn eval(&self, x: f64) -> f64 {
        let v = self.density.eval(x);
        match self.quantity {
            Composed::Pressure => self.law.pressure_of_v(v),
            Composed::Energy => self.law.energy_of_v(v),
        }
    }
}

/// Pressure extension `P̂(V) = P(Π V)`.
pub fn extend_pressure(law: &GasLaw, v: &RadonMeasure) -> ComposedField {
    ComposedField {
        quantity: Composed::Pressure,
        law: law.clone(),
        density: v.project_pi(),
    }
}

/// Energy extension `Ê(V) = E(Π V)`.
pub fn extend_energy(law: &GasLaw, v: &RadonMeasure) -> ComposedField {
    ComposedField {
        quantity: Composed::Energy,
        law: law.clone(),
        density: v.project_pi(),
    }
}

/// Rule deciding whether sampled lower bounds diverge.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum DivergenceRule {
    /// Bounds strictly increase and their log-log slope against `1/r` over
    /// the finest half of the probes is at least `min_slope`.
    Slope { min_slope: f64 },
    /// Bound exceeds `r^(-exponent)` on every probe from index `from` on.
    Threshold { exponent: f64, from: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConsistencyOptions {
    pub radii: Vec<f64>,
    pub rule: DivergenceRule,
}

impl Default for ConsistencyOptions {
    fn default() -> Self {
        Self {
            radii: (3..=20).map(|k| 0.5f64.powi(k)).collect(),
            rule: DivergenceRule::Slope { min_slope: 0.01 },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Consistency {
    Consistent,
    Violation { atom: usize, x: f64, liminf: f64 },
}

impl Consistency {
    pub fn is_consistent(&self) -> bool {
        matches!(self, Consistency::Consistent)
    }
}

/// Essential infimum of the density on `(x - r, x + r) \ {x}`; exact for the
/// monotone piece kinds.
pub fn punctured_lower_bound(d: &Density, x: f64, r: f64) -> f64 {
    let (lo, hi) = (x - r, x + r);
    let mut inf = f64::INFINITY;
    for p in &d.pieces {
        let a = p.x0.max(lo);
        let b = p.x1.min(hi);
        if !(b > a) {
            continue;
        }
        inf = inf.min(p.eval(a)).min(p.eval(b));
        if let DensityKind::Tabulated { xs, values } = &p.kind {
            for (xi, vi) in xs.iter().zip(values) {
                if *xi > a && *xi < b {
                    inf = inf.min(*vi);
                }
            }
        }
    }
    inf
}

/// Consistency of the medium: the density must blow up at every atom.
pub fn consistency_check(v: &RadonMeasure, opts: &ConsistencyOptions) -> Consistency {
    for (i, atom) in v.atoms.iter().enumerate() {
        let bounds: Vec<f64> = opts
            .radii
            .iter()
            .map(|&r| punctured_lower_bound(&v.density, atom.x, r))
            .collect();
        let last = *bounds.last().unwrap_or(&0.0);
        let diverges = match opts.rule {
            DivergenceRule::Slope { min_slope } => {
                let increasing = bounds.windows(2).all(|w| w[1] > w[0] || w[1].is_infinite());
                let half = &opts.radii[opts.radii.len() / 2..];
                let hb = &bounds[bounds.len() / 2..];
                let slope = if hb.iter().any(|b| b.is_infinite()) {
                    f64::INFINITY
                } else {
                    log_slope(half, hb)
                };
                increasing && slope >= min_slope
            }
            DivergenceRule::Threshold { exponent, from } => opts
                .radii
                .iter()
                .zip(&bounds)
                .skip(from)
                .all(|(r, b)| *b > r.powf(-exponent)),
        };
        if !diverges {
            return Consistency::Violation {
                atom: i,
                x: atom.x,
                liminf: last,
            };
        }
    }
    Consistency::Consistent
}

// Least-squares slope of ln b against ln(1/r).
fn log_slope(r: &[f64], b: &[f64]) -> f64 {
    if r.len() < 2 || b.iter().any(|v| !(*v > 0.0)) {
        return 0.0;
    }
    let xs: Vec<f64> = r.iter().map(|r| -r.ln()).collect();
    let ys: Vec<f64> = b.iter().map(|b| b.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// `‖μ₁ − μ₂‖`: L¹ distance of the densities plus the atomic part, where
/// coincident atoms contribute `|α − β|` and separate ones `|α| + |β|`.
pub fn measure_distance(m1: &RadonMeasure, m2: &RadonMeasure, abs_tol: f64) -> Result<f64> {
    if m1.domain() != m2.domain() {
        return Err(Error::Domain(format!(
            "measures live on different domains {:?} and {:?}",
            m1.domain(),
            m2.domain()
        )));
    }
    let mut pts = m1.density.breakpoints();
    pts.extend(m2.density.breakpoints());
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    let mut l1 = 0.0;
    for w in pts.windows(2) {
        let f = |x: f64| {
            let d = m1.density.eval(x) - m2.density.eval(x);
            if d.is_nan() {
                0.0
            } else {
                d.abs()
            }
        };
        let q = quad::integrate_singular(f, w[0], w[1], Singular::Both, QuadOptions::abs(abs_tol))?;
        l1 += q.value;
    }
    let mut atomic = 0.0;
    let (a1, a2) = (&m1.atoms, &m2.atoms);
    let (mut i, mut j) = (0, 0);
    while i < a1.len() || j < a2.len() {
        match (a1.get(i), a2.get(j)) {
            (Some(p), Some(q)) if p.x == q.x => {
                atomic += (p.w - q.w).abs();
                i += 1;
                j += 1;
            }
            (Some(p), Some(q)) if p.x < q.x => {
                atomic += p.w.abs();
                i += 1;
            }
            (Some(_), Some(q)) => {
                atomic += q.w.abs();
                j += 1;
            }
            (Some(p), None) => {
                atomic += p.w.abs();
                i += 1;
            }
            (None, Some(q)) => {
                atomic += q.w.abs();
                j += 1;
            }
            (None, None) => break,
        }
    }
    Ok(l1 + atomic)
}

#[cfg(test)]
mod tests {
    use super::*;

    const DOM: [f64; 2] = [-1.0, 1.0];

    fn with_atoms(d: Density, atoms: &[(f64, f64)]) -> RadonMeasure {
        RadonMeasure::new(d, atoms.iter().map(|&(x, w)| Atom { x, w }).collect()).unwrap()
    }

    fn vrp_density(law: &GasLaw, t: f64) -> Density {
        let sw = |x0: f64, x1: f64, family| Piece {
            x0,
            x1,
            kind: DensityKind::SimpleWave {
                t0: 0.0,
                x0: 0.0,
                t,
                family,
                law: law.clone(),
            },
        };
        let c = law.c(1.0) * t;
        Density {
            domain: DOM,
            pieces: vec![
                Piece::constant(-1.0, -c, law.v(1.0)),
                sw(-c, 0.0, Family::Backward),
                sw(0.0, c, Family::Forward),
                Piece::constant(c, 1.0, law.v(1.0)),
            ],
        }
    }

    #[test]
    fn projection_examples() {
        let m = with_atoms(Density::constant(DOM, 2.0), &[(0.0, 3.0)]);
        assert_eq!(m.project_pi(), Density::constant(DOM, 2.0));
        let pure = with_atoms(Density::zero(DOM), &[(0.0, 3.0)]);
        assert_eq!(pure.project_pi().eval(0.3), 0.0);
        let d = Density::constant(DOM, 5.0);
        let back = RadonMeasure::iota(d.clone()).unwrap().project_pi();
        assert_eq!(back, d);
        assert_eq!(RadonMeasure::iota(m.project_pi()).unwrap().project_pi(), m.project_pi());
    }

    #[test]
    fn norms() {
        let m = RadonMeasure::iota(Density::constant(DOM, 2.0)).unwrap();
        assert!((m.total_variation(1e-10).unwrap().quadrature - 4.0).abs() < 1e-12);
        let m = with_atoms(Density::constant(DOM, 2.0), &[(0.0, 3.0)]);
        assert!((m.total_variation(1e-10).unwrap().quadrature - 7.0).abs() < 1e-12);
    }

    #[test]
    fn singular_density_norm() {
        // v = (|x|/t)^(-1/2) near 0 for β = 2; ∫_0^c v dx = 2 sqrt(c t) = 2t at c = t.
        let law = GasLaw::with_beta(2.0).unwrap();
        let t = 0.5;
        let m = RadonMeasure::iota(vrp_density(&law, t)).unwrap();
        let tv = m.total_variation(1e-10).unwrap();
        let exact = 2.0 * (1.0 - t) + 2.0 * 2.0 * t;
        assert!((tv.quadrature - exact).abs() < 1e-9, "{tv:?}");
    }

    #[test]
    fn error_bound_follows_tolerance() {
        let law = GasLaw::with_beta(3.0).unwrap();
        let m = RadonMeasure::iota(vrp_density(&law, 0.5)).unwrap();
        // Each fan carries t (h + v c) = 0.75 by the integrated-by-parts identity.
        let exact = 2.0 * 0.5 * 0.5 + 2.0 * 0.75;
        let mut tol = 1e-6;
        for _ in 0..4 {
            let r = m.total_variation(tol).unwrap();
            assert!(r.error_estimate <= tol);
            assert!((r.quadrature - exact).abs() <= tol);
            tol *= 0.5;
        }
    }

    #[test]
    fn pressure_ignores_atoms() {
        let law = GasLaw::with_beta(2.0).unwrap();
        let m = with_atoms(Density::constant(DOM, 1.0), &[(0.0, 5.0)]);
        let p = extend_pressure(&law, &m);
        assert!((p.eval(0.0) - law.p(1.0)).abs() < 1e-15);
        let doubled = m.with_atoms(vec![Atom { x: 0.0, w: 10.0 }]).unwrap();
        assert_eq!(extend_pressure(&law, &doubled), p);
        assert_eq!(extend_energy(&law, &doubled), extend_energy(&law, &m));
        let pure = with_atoms(Density::zero(DOM), &[(0.0, 2.0)]);
        assert_eq!(extend_energy(&law, &pure).eval(0.1), law.energy_of_v(0.0));
    }

    #[test]
    fn energy_extension_value() {
        let law = GasLaw::with_beta(2.0).unwrap();
        let m = RadonMeasure::iota(Density::constant(DOM, law.v(1.0))).unwrap();
        assert!((extend_energy(&law, &m).eval(0.2) - 1.0 / 6.0).abs() < 1e-15);
        let vrp = RadonMeasure::iota(vrp_density(&law, 0.5)).unwrap();
        assert_eq!(extend_pressure(&law, &vrp).eval(0.0), 0.0);
    }

    #[test]
    fn consistency_examples() {
        let law = GasLaw::with_beta(2.0).unwrap();
        let good = with_atoms(vrp_density(&law, 0.25), &[(0.0, 0.5)]);
        assert!(consistency_check(&good, &ConsistencyOptions::default()).is_consistent());
        let bad = with_atoms(Density::constant(DOM, 1.0), &[(0.0, 0.5)]);
        assert!(matches!(
            consistency_check(&bad, &ConsistencyOptions::default()),
            Consistency::Violation { atom: 0, .. }
        ));
        let none = RadonMeasure::iota(Density::constant(DOM, 1.0)).unwrap();
        assert!(consistency_check(&none, &ConsistencyOptions::default()).is_consistent());
    }

    #[test]
    fn distance_examples() {
        let z = Density::zero(DOM);
        let a = with_atoms(z.clone(), &[(0.0, 3.0)]);
        let b = with_atoms(z.clone(), &[(0.1, 3.0)]);
        let c = with_atoms(z.clone(), &[(0.0, 5.0)]);
        assert_eq!(measure_distance(&a, &b, 1e-12).unwrap(), 6.0);
        assert_eq!(measure_distance(&a, &c, 1e-12).unwrap(), 2.0);
        assert_eq!(measure_distance(&a, &a, 1e-12).unwrap(), 0.0);
        let other = with_atoms(Density::zero([0.0, 1.0]), &[]);
        assert!(measure_distance(&a, &other, 1e-12).is_err());
    }

    #[test]
    fn validation_and_pruning() {
        let m = with_atoms(Density::constant(DOM, 1.0), &[(0.0, 1e-15)]);
        assert!(m.atoms().is_empty());
        assert!(RadonMeasure::new(Density::constant(DOM, 1.0), vec![Atom { x: 2.0, w: 1.0 }]).is_err());
        assert!(RadonMeasure::new(Density::constant(DOM, -1.0), vec![]).is_err());
        let json = r#"{"domain":[-1,1],"pieces":[{"x0":-1,"x1":1,"kind":"constant","params":{"value":2}}],"atoms":[{"x":0,"w":3}]}"#;
        let m: RadonMeasure = serde_json::from_str(json).unwrap();
        assert_eq!(m.atoms().len(), 1);
        let back: RadonMeasure = serde_json::from_str(&serde_json::to_string(&m).unwrap()).unwrap();
        assert_eq!(back, m);
    }
}
