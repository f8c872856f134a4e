//! Constitutive laws of the p-system in physical (v) and symmetric (h) variables.
//!
//! The symmetric variable is `h = H(v) = ∫_v^∞ C`, with `C = sqrt(-P')` the
//! Lagrangian sound speed. Vacuum is `h = 0`, where `p = c = ε = 0` and the
//! specific volume is reported as `f64::INFINITY`.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quad::{self, QuadOptions};

/// `β = (γ + 1) / (γ − 1)`.
pub fn beta_of_gamma(gamma: f64) -> Result<f64> {
    if !(gamma > 1.0) || !gamma.is_finite() {
        return Err(Error::InvalidLaw(format!("gamma must exceed 1, got {gamma}")));
    }
    Ok((gamma + 1.0) / (gamma - 1.0))
}

/// Thermodynamic/kinematic state in symmetric variables.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SymState {
    pub h: f64,
    pub u: f64,
}

impl SymState {
    pub fn new(h: f64, u: f64) -> Result<Self> {
        if !(h >= 0.0) || !h.is_finite() || !u.is_finite() {
            return Err(Error::Domain(format!("invalid state (h = {h}, u = {u})")));
        }
        Ok(Self { h, u })
    }

    pub fn vacuum(u: f64) -> Self {
        Self { h: 0.0, u }
    }

    pub fn is_vacuum(&self) -> bool {
        self.h == 0.0
    }
}

/// Sound speed, specific volume, pressure and internal energy at one `h`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymFields {
    pub c: f64,
    pub v: f64,
    pub p: f64,
    pub eps: f64,
}

/// Normalisation of a γ-law.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "scale", rename_all = "snake_case")]
pub enum GammaScale {
    /// `c = h^β`, `v = h^(1-β)/(β-1)`, `p = h^(1+β)/(β+1)`, `ε = h²/(2(β+1))`.
    Rescaled,
    /// `P(v) = A v^(-γ)` exactly.
    Raw { a: f64 },
}

/// Polytropic pressure law `P(v) = A v^(-γ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GammaLaw {
    pub gamma: f64,
    #[serde(flatten)]
    pub scale: GammaScale,
}

impl GammaLaw {
    pub fn beta(&self) -> f64 {
        (self.gamma + 1.0) / (self.gamma - 1.0)
    }

    /// Pressure constant `A` of the equivalent `P(v) = A v^(-γ)`.
    pub fn pressure_constant(&self) -> f64 {
        match self.scale {
            GammaScale::Raw { a } => a,
            GammaScale::Rescaled => {
                let b = self.beta();
                (b - 1.0).powf(-self.gamma) / (b + 1.0)
            }
        }
    }

    // h = H(v) = (1/κ) v^((1-γ)/2) for P = A v^(-γ).
    fn kappa(&self, a: f64) -> f64 {
        (self.gamma - 1.0) / (2.0 * (a * self.gamma).sqrt())
    }
}

/// Sampled pressure law with power-law extrapolation at both ends.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableSpec {
    /// `(v, P(v))` rows, `v` strictly ascending.
    pub samples: Vec<(f64, f64)>,
    /// Exponent `γ_t` of the tail `P ~ A v^(-γ_t)`; fitted to the last decade
    /// of samples when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tail_exponent: Option<f64>,
}

#[derive(Debug)]
struct TableData {
    spec: TableSpec,
    ls: Vec<f64>,
    lp: Vec<f64>,
    slope: Vec<f64>,
    head: PowerTail,
    tail: PowerTail,
    // H and E at the sample nodes.
    h_nodes: Vec<f64>,
    e_nodes: Vec<f64>,
}

/// `P = a v^(-g)` beyond the sampled range.
#[derive(Debug, Clone, Copy)]
struct PowerTail {
    a: f64,
    g: f64,
}

impl PowerTail {
    fn p(&self, v: f64) -> f64 {
        self.a * v.powf(-self.g)
    }
    fn dp(&self, v: f64) -> f64 {
        -self.g * self.a * v.powf(-self.g - 1.0)
    }
    fn sound(&self, v: f64) -> f64 {
        (-self.dp(v)).sqrt()
    }
    /// ∫_{v0}^{v1} C.
    fn h_integral(&self, v0: f64, v1: f64) -> f64 {
        let k = 0.5 * (self.g + 1.0);
        (self.a * self.g).sqrt() * power_integral(v0, v1, k)
    }
    /// ∫_{v0}^{v1} P.
    fn e_integral(&self, v0: f64, v1: f64) -> f64 {
        self.a * power_integral(v0, v1, self.g)
    }
}

/// ∫_{v0}^{v1} v^(-k) dv, allowing `v1 = ∞` when `k > 1`.
fn power_integral(v0: f64, v1: f64, k: f64) -> f64 {
    if (k - 1.0).abs() < 1e-14 {
        return (v1 / v0).ln();
    }
    let e = 1.0 - k;
    let top = if v1.is_infinite() { 0.0 } else { v1.powf(e) };
    (top - v0.powf(e)) / e
}

/// Monotone sampled pressure law, interpolated by Fritsch-Carlson cubics in
/// `(ln v, ln P)` so that sampled power laws are reproduced exactly.
#[derive(Debug, Clone)]
pub struct TabulatedLaw {
    data: Arc<TableData>,
}

impl PartialEq for TabulatedLaw {
    fn eq(&self, other: &Self) -> bool {
        self.data.spec == other.data.spec
    }
}

impl Serialize for TabulatedLaw {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.data.spec.serialize(s)
    }
}

impl<'de> Deserialize<'de> for TabulatedLaw {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let spec = TableSpec::deserialize(d)?;
        TabulatedLaw::new(spec).map_err(serde::de::Error::custom)
    }
}

fn fit_power(ls: &[f64], lp: &[f64]) -> PowerTail {
    let n = ls.len() as f64;
    let ms = ls.iter().sum::<f64>() / n;
    let mp = lp.iter().sum::<f64>() / n;
    let sxy: f64 = ls.iter().zip(lp).map(|(s, p)| (s - ms) * (p - mp)).sum();
    let sxx: f64 = ls.iter().map(|s| (s - ms) * (s - ms)).sum();
    let slope = sxy / sxx;
    PowerTail {
        a: (mp - slope * ms).exp(),
        g: -slope,
    }
}

impl TabulatedLaw {
    pub fn new(spec: TableSpec) -> Result<Self> {
        let n = spec.samples.len();
        if n < 4 {
            return Err(Error::InvalidLaw("pressure table needs at least 4 rows".into()));
        }
        for w in spec.samples.windows(2) {
            let ((v0, p0), (v1, p1)) = (w[0], w[1]);
            if !(v1 > v0) {
                return Err(Error::InvalidLaw(format!("v must be strictly ascending ({v0}, {v1})")));
            }
            if !(p1 < p0) {
                return Err(Error::InvalidLaw(format!(
                    "P must be strictly decreasing (P({v0}) = {p0}, P({v1}) = {p1})"
                )));
            }
        }
        if spec.samples.iter().any(|&(v, p)| !(v > 0.0) || !(p > 0.0) || !v.is_finite()) {
            return Err(Error::InvalidLaw("table entries must be positive and finite".into()));
        }
        let ls: Vec<f64> = spec.samples.iter().map(|s| s.0.ln()).collect();
        let lp: Vec<f64> = spec.samples.iter().map(|s| s.1.ln()).collect();
        let slope = pchip_slopes(&ls, &lp);

        let decade = std::f64::consts::LN_10;
        let lmax = ls[n - 1];
        let lmin = ls[0];
        let last: Vec<usize> = (0..n).filter(|&i| ls[i] >= lmax - decade).collect();
        let first: Vec<usize> = (0..n).filter(|&i| ls[i] <= lmin + decade).collect();
        let pick = |idx: &[usize], fallback: [usize; 2]| -> Vec<usize> {
            if idx.len() >= 2 {
                idx.to_vec()
            } else {
                fallback.to_vec()
            }
        };
        let last = pick(&last, [n - 2, n - 1]);
        let first = pick(&first, [0, 1]);
        let sel = |idx: &[usize], v: &[f64]| idx.iter().map(|&i| v[i]).collect::<Vec<_>>();
        let mut tail = fit_power(&sel(&last, &ls), &sel(&last, &lp));
        if let Some(g) = spec.tail_exponent {
            tail.g = g;
        }
        // Continuity at the sample edges.
        tail.a = spec.samples[n - 1].1 * spec.samples[n - 1].0.powf(tail.g);
        let mut head = fit_power(&sel(&first, &ls), &sel(&first, &lp));
        head.a = spec.samples[0].1 * spec.samples[0].0.powf(head.g);
        if !(tail.g > 1.0) {
            return Err(Error::InvalidLaw(format!(
                "tail exponent {} <= 1: the integral of sqrt(-P') diverges",
                tail.g
            )));
        }
        if !(head.g > 0.0) {
            return Err(Error::InvalidLaw("pressure must decrease at the small-volume end".into()));
        }

        let mut data = TableData {
            spec,
            ls,
            lp,
            slope,
            head,
            tail,
            h_nodes: vec![0.0; n],
            e_nodes: vec![0.0; n],
        };
        let vmax = data.spec.samples[n - 1].0;
        data.h_nodes[n - 1] = tail.h_integral(vmax, f64::INFINITY);
        data.e_nodes[n - 1] = tail.e_integral(vmax, f64::INFINITY);
        for i in (0..n - 1).rev() {
            let dh = data.segment_integral(i, data.ls[i], data.ls[i + 1], true)?;
            let de = data.segment_integral(i, data.ls[i], data.ls[i + 1], false)?;
            data.h_nodes[i] = data.h_nodes[i + 1] + dh;
            data.e_nodes[i] = data.e_nodes[i + 1] + de;
        }
        if !data.h_nodes[0].is_finite() {
            return Err(Error::InvalidLaw("H(v) is not finite on the sampled range".into()));
        }
        Ok(Self { data: Arc::new(data) })
    }

    /// Table sampling `law` at the given volumes.
    pub fn from_law(law: &GasLaw, volumes: &[f64]) -> Result<Self> {
        let samples = volumes.iter().map(|&v| (v, law.pressure_of_v(v))).collect();
        Self::new(TableSpec {
            samples,
            tail_exponent: None,
        })
    }

    pub fn spec(&self) -> &TableSpec {
        &self.data.spec
    }
}

fn pchip_slopes(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    let d: Vec<f64> = (0..n - 1).map(|i| (y[i + 1] - y[i]) / (x[i + 1] - x[i])).collect();
    let mut m = vec![0.0; n];
    m[0] = d[0];
    m[n - 1] = d[n - 2];
    for i in 1..n - 1 {
        if d[i - 1] * d[i] <= 0.0 {
            m[i] = 0.0;
        } else {
            let h0 = x[i] - x[i - 1];
            let h1 = x[i + 1] - x[i];
            let w1 = 2.0 * h1 + h0;
            let w2 = h1 + 2.0 * h0;
            m[i] = (w1 + w2) / (w1 / d[i - 1] + w2 / d[i]);
        }
    }
    m
}

impl TableData {
    fn vmin(&self) -> f64 {
        self.spec.samples[0].0
    }
    fn vmax(&self) -> f64 {
        self.spec.samples[self.spec.samples.len() - 1].0
    }

    fn segment(&self, s: f64) -> usize {
        let n = self.ls.len();
        match self.ls.binary_search_by(|x| x.total_cmp(&s)) {
            Ok(i) => i.min(n - 2),
            Err(i) => i.saturating_sub(1).min(n - 2),
        }
    }

    /// (ln P, d ln P / d ln v) at `s = ln v` inside the table.
    fn interp(&self, s: f64) -> (f64, f64) {
        let i = self.segment(s);
        let (x0, x1) = (self.ls[i], self.ls[i + 1]);
        let hlen = x1 - x0;
        let t = (s - x0) / hlen;
        let (y0, y1) = (self.lp[i], self.lp[i + 1]);
        let (m0, m1) = (self.slope[i], self.slope[i + 1]);
        let t2 = t * t;
        let t3 = t2 * t;
        let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
        let h10 = t3 - 2.0 * t2 + t;
        let h01 = -2.0 * t3 + 3.0 * t2;
        let h11 = t3 - t2;
        let y = h00 * y0 + h10 * hlen * m0 + h01 * y1 + h11 * hlen * m1;
        let d00 = (6.0 * t2 - 6.0 * t) / hlen;
        let d10 = 3.0 * t2 - 4.0 * t + 1.0;
        let d01 = (-6.0 * t2 + 6.0 * t) / hlen;
        let d11 = 3.0 * t2 - 2.0 * t;
        let dy = d00 * y0 + d10 * m0 + d01 * y1 + d11 * m1;
        (y, dy)
    }

    fn p(&self, v: f64) -> f64 {
        if v <= self.vmin() {
            self.head.p(v)
        } else if v >= self.vmax() {
            self.tail.p(v)
        } else {
            self.interp(v.ln()).0.exp()
        }
    }

    fn sound(&self, v: f64) -> f64 {
        if v <= self.vmin() {
            self.head.sound(v)
        } else if v >= self.vmax() {
            self.tail.sound(v)
        } else {
            let (lp, dlp) = self.interp(v.ln());
            (-(lp.exp() / v) * dlp).max(0.0).sqrt()
        }
    }

    // ∫ C (or P) over v in [e^s0, e^s1] ⊂ segment i, in the log variable.
    fn segment_integral(&self, _i: usize, s0: f64, s1: f64, sound: bool) -> Result<f64> {
        if s0 >= s1 {
            return Ok(0.0);
        }
        let f = |s: f64| {
            let v = s.exp();
            if sound {
                self.sound(v) * v
            } else {
                self.p(v) * v
            }
        };
        let q = quad::integrate(
            f,
            s0,
            s1,
            QuadOptions {
                abs_tol: 0.0,
                rel_tol: 1e-15,
                max_intervals: 200,
            },
        )
        .or_else(|e| match e {
            Error::Quadrature { partial, .. } => Ok(quad::Quad {
                value: partial,
                error: 0.0,
                intervals: 0,
            }),
            other => Err(other),
        })?;
        Ok(q.value)
    }

    fn big_h(&self, v: f64) -> f64 {
        let n = self.ls.len();
        if v >= self.vmax() {
            return self.tail.h_integral(v, f64::INFINITY);
        }
        if v <= self.vmin() {
            return self.h_nodes[0] + self.head.h_integral(v, self.vmin());
        }
        let s = v.ln();
        let i = self.segment(s);
        let upper = if i + 1 < n { self.ls[i + 1] } else { self.ls[n - 1] };
        self.h_nodes[i + 1] + self.segment_integral(i, s, upper, true).unwrap_or(f64::NAN)
    }

    fn big_e(&self, v: f64) -> f64 {
        if v >= self.vmax() {
            return self.tail.e_integral(v, f64::INFINITY);
        }
        if v <= self.vmin() {
            return self.e_nodes[0] + self.head.e_integral(v, self.vmin());
        }
        let s = v.ln();
        let i = self.segment(s);
        self.e_nodes[i + 1] + self.segment_integral(i, s, self.ls[i + 1], false).unwrap_or(f64::NAN)
    }

    /// Inverse of H: safeguarded Newton in ln v (dH/d ln v = -C v).
    fn v_of_h(&self, h: f64) -> f64 {
        if h <= 0.0 {
            return f64::INFINITY;
        }
        // Bracket in ln v.
        let (mut lo, mut hi) = if h <= self.h_nodes[self.ls.len() - 1] {
            // Tail: closed-form inverse.
            let k = 0.5 * (self.tail.g + 1.0);
            let coef = (self.tail.a * self.tail.g).sqrt() / (k - 1.0);
            return (h / coef).powf(1.0 / (1.0 - k));
        } else if h >= self.h_nodes[0] {
            let mut lo = self.ls[0] - 1.0;
            while self.big_h(lo.exp()) < h {
                lo -= 1.0;
                if lo < -700.0 {
                    return 0.0;
                }
            }
            (lo, self.ls[0])
        } else {
            // h_nodes is decreasing.
            let j = self.h_nodes.partition_point(|&x| x > h);
            (self.ls[j - 1], self.ls[j])
        };
        let mut s = 0.5 * (lo + hi);
        for _ in 0..200 {
            let v = s.exp();
            let r = self.big_h(v) - h;
            if r > 0.0 {
                lo = s;
            } else {
                hi = s;
            }
            let d = -self.sound(v) * v;
            let mut next = s - r / d;
            if !(next > lo && next < hi) || !next.is_finite() {
                next = 0.5 * (lo + hi);
            }
            if (next - s).abs() <= 1e-15 * s.abs().max(1.0) || hi - lo <= 1e-15 * s.abs().max(1.0) {
                return next.exp();
            }
            s = next;
        }
        s.exp()
    }
}

/// Pressure law of the p-system.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "law", rename_all = "snake_case")]
pub enum GasLaw {
    Gamma(GammaLaw),
    Table(TabulatedLaw),
}

impl GasLaw {
    /// Rescaled γ-law.
    pub fn gamma(gamma: f64) -> Result<Self> {
        beta_of_gamma(gamma)?;
        Ok(GasLaw::Gamma(GammaLaw {
            gamma,
            scale: GammaScale::Rescaled,
        }))
    }

    /// Rescaled γ-law with `β = (γ+1)/(γ-1)` given.
    pub fn with_beta(beta: f64) -> Result<Self> {
        if !(beta > 1.0) {
            return Err(Error::InvalidLaw(format!("beta must exceed 1, got {beta}")));
        }
        Self::gamma((beta + 1.0) / (beta - 1.0))
    }

    /// `P(v) = A v^(-γ)` without rescaling.
    pub fn gamma_raw(gamma: f64, a: f64) -> Result<Self> {
        beta_of_gamma(gamma)?;
        if !(a > 0.0) {
            return Err(Error::InvalidLaw(format!("pressure scale must be positive, got {a}")));
        }
        Ok(GasLaw::Gamma(GammaLaw {
            gamma,
            scale: GammaScale::Raw { a },
        }))
    }

    pub fn table(spec: TableSpec) -> Result<Self> {
        Ok(GasLaw::Table(TabulatedLaw::new(spec)?))
    }

    pub fn as_gamma(&self) -> Option<&GammaLaw> {
        match self {
            GasLaw::Gamma(g) => Some(g),
            GasLaw::Table(_) => None,
        }
    }

    pub fn beta(&self) -> Option<f64> {
        self.as_gamma().map(GammaLaw::beta)
    }

    /// Sound speed `c(h)`.
    pub fn c(&self, h: f64) -> f64 {
        if h <= 0.0 {
            return 0.0;
        }
        match self {
            GasLaw::Gamma(g) => match g.scale {
                GammaScale::Rescaled => h.powf(g.beta()),
                GammaScale::Raw { a } => {
                    let k = g.kappa(a);
                    (a * g.gamma).sqrt() * (k * h).powf(g.beta())
                }
            },
            GasLaw::Table(t) => t.data.sound(t.data.v_of_h(h)),
        }
    }

    /// Specific volume `v(h)`; infinite at vacuum.
    pub fn v(&self, h: f64) -> f64 {
        if h <= 0.0 {
            return f64::INFINITY;
        }
        match self {
            GasLaw::Gamma(g) => {
                let b = g.beta();
                match g.scale {
                    GammaScale::Rescaled => h.powf(1.0 - b) / (b - 1.0),
                    GammaScale::Raw { a } => (g.kappa(a) * h).powf(1.0 - b),
                }
            }
            GasLaw::Table(t) => t.data.v_of_h(h),
        }
    }

    /// Pressure `p(h)`.
    pub fn p(&self, h: f64) -> f64 {
        if h <= 0.0 {
            return 0.0;
        }
        match self {
            GasLaw::Gamma(g) => {
                let b = g.beta();
                match g.scale {
                    GammaScale::Rescaled => h.powf(1.0 + b) / (b + 1.0),
                    GammaScale::Raw { a } => a * (g.kappa(a) * h).powf(1.0 + b),
                }
            }
            GasLaw::Table(t) => t.data.p(t.data.v_of_h(h)),
        }
    }

    /// Specific internal energy `ε(h)`.
    pub fn eps(&self, h: f64) -> f64 {
        if h <= 0.0 {
            return 0.0;
        }
        match self {
            GasLaw::Gamma(g) => {
                let b = g.beta();
                match g.scale {
                    GammaScale::Rescaled => h * h / (2.0 * (b + 1.0)),
                    GammaScale::Raw { a } => {
                        let kh = g.kappa(a) * h;
                        a * kh * kh / (g.gamma - 1.0)
                    }
                }
            }
            GasLaw::Table(t) => t.data.big_e(t.data.v_of_h(h)),
        }
    }

    /// All four symmetric-variable fields.
    pub fn sym_fields(&self, h: f64) -> Result<SymFields> {
        if !(h >= 0.0) {
            return Err(Error::Domain(format!("h must be non-negative, got {h}")));
        }
        if let GasLaw::Table(t) = self {
            let v = t.data.v_of_h(h);
            if h == 0.0 {
                return Ok(SymFields {
                    c: 0.0,
                    v: f64::INFINITY,
                    p: 0.0,
                    eps: 0.0,
                });
            }
            return Ok(SymFields {
                c: t.data.sound(v),
                v,
                p: t.data.p(v),
                eps: t.data.big_e(v),
            });
        }
        Ok(SymFields {
            c: self.c(h),
            v: self.v(h),
            p: self.p(h),
            eps: self.eps(h),
        })
    }

    /// Pressure as a function of specific volume, `P(v)`; `P(∞) = 0`.
    pub fn pressure_of_v(&self, v: f64) -> f64 {
        if v.is_infinite() {
            return 0.0;
        }
        match self {
            GasLaw::Gamma(g) => g.pressure_constant() * v.powf(-g.gamma),
            GasLaw::Table(t) => t.data.p(v),
        }
    }

    /// Internal energy `E(v) = ∫_v^∞ P`; `E(∞) = 0`.
    pub fn energy_of_v(&self, v: f64) -> f64 {
        if v.is_infinite() {
            return 0.0;
        }
        match self {
            GasLaw::Gamma(g) => g.pressure_constant() * v.powf(1.0 - g.gamma) / (g.gamma - 1.0),
            GasLaw::Table(t) => t.data.big_e(v),
        }
    }

    /// Lagrangian sound speed `C(v) = sqrt(-P'(v))`.
    pub fn sound_of_v(&self, v: f64) -> f64 {
        if v.is_infinite() {
            return 0.0;
        }
        match self {
            GasLaw::Gamma(g) => {
                let a = g.pressure_constant();
                (a * g.gamma).sqrt() * v.powf(-0.5 * (g.gamma + 1.0))
            }
            GasLaw::Table(t) => t.data.sound(v),
        }
    }

    /// `h = H(v)`.
    pub fn h_of_v(&self, v: f64) -> Result<f64> {
        if !(v > 0.0) {
            return Err(Error::Domain(format!("specific volume must be positive, got {v}")));
        }
        if v.is_infinite() {
            return Ok(0.0);
        }
        match self {
            GasLaw::Gamma(g) => {
                let b = g.beta();
                Ok(match g.scale {
                    GammaScale::Rescaled => ((b - 1.0) * v).powf(1.0 / (1.0 - b)),
                    GammaScale::Raw { a } => v.powf(1.0 / (1.0 - b)) / g.kappa(a),
                })
            }
            GasLaw::Table(t) => {
                let h = t.data.big_h(v);
                if h.is_finite() {
                    Ok(h)
                } else {
                    Err(Error::InvalidLaw("H(v) diverged".into()))
                }
            }
        }
    }

    /// `c⁻¹(speed)`.
    pub fn c_inverse(&self, speed: f64) -> Result<f64> {
        if !(speed >= 0.0) {
            return Err(Error::Domain(format!("sound speed must be non-negative, got {speed}")));
        }
        if speed == 0.0 {
            return Ok(0.0);
        }
        match self {
            GasLaw::Gamma(g) => {
                let b = g.beta();
                Ok(match g.scale {
                    GammaScale::Rescaled => speed.powf(1.0 / b),
                    GammaScale::Raw { a } => (speed / (a * g.gamma).sqrt()).powf(1.0 / b) / g.kappa(a),
                })
            }
            GasLaw::Table(_) => self.h_of_v(self.v_of_sound(speed)?),
        }
    }

    /// Specific volume at which the sound speed equals `speed`; `∞` at zero.
    pub fn v_of_sound(&self, speed: f64) -> Result<f64> {
        if !(speed >= 0.0) {
            return Err(Error::Domain(format!("sound speed must be non-negative, got {speed}")));
        }
        if speed == 0.0 {
            return Ok(f64::INFINITY);
        }
        match self {
            GasLaw::Gamma(_) => Ok(self.v(self.c_inverse(speed)?)),
            GasLaw::Table(t) => {
                // C(v) decreases in v.
                let mut lo = 1.0;
                while t.data.sound(lo) < speed {
                    lo *= 0.5;
                    if lo < 1e-300 {
                        return Err(Error::Numerical(format!("v_of_sound({speed}) bracket failed")));
                    }
                }
                let mut hi = 2.0 * lo;
                while t.data.sound(hi) > speed {
                    hi *= 2.0;
                    if hi > 1e300 {
                        return Err(Error::Numerical(format!("v_of_sound({speed}) bracket failed")));
                    }
                }
                quad::bisect(|v| t.data.sound(v) - speed, lo, hi, 1e-15)
            }
        }
    }

    /// Infallible `c⁻¹` for internal use with `speed ≥ 0`.
    pub(crate) fn c_inv(&self, speed: f64) -> f64 {
        self.c_inverse(speed.max(0.0)).unwrap_or(f64::NAN)
    }

    /// Infallible `v(c⁻¹(speed))` for internal use with `speed ≥ 0`.
    pub(crate) fn v_of_c(&self, speed: f64) -> f64 {
        self.v_of_sound(speed.max(0.0)).unwrap_or(f64::NAN)
    }
}
