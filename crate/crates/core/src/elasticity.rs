//! One-dimensional elastodynamics `U_t - v_x = 0`, `v_t - τ(U)_x = 0` with
//! fracture: stress laws, atomic extensions of stress and stored energy,
//! crack jump relations and the self-similar crack-initiation motion.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measure::{Atom, Density, Piece, RadonMeasure};
use crate::quad::{self, QuadOptions};
use crate::verify::{Bump, History};

/// Value of a linear-growth limit `lim f(u)/u`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "limit", content = "value", rename_all = "snake_case")]
pub enum Limit {
    Finite(f64),
    Infinite,
    /// The tail of a table shows no monotone trend.
    Indeterminate,
}

impl Limit {
    pub fn finite(self) -> Option<f64> {
        match self {
            Limit::Finite(v) => Some(v),
            _ => None,
        }
    }
}

/// `f(u) ≈ l u + c + d / u` fitted through the three largest samples.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailFit {
    pub l: f64,
    pub c: f64,
    pub d: f64,
    pub monotone: bool,
}

impl TailFit {
    fn through(u: [f64; 3], f: [f64; 3]) -> Self {
        // Solve for (l, c, d) by elimination on rows [u_i, 1, 1/u_i].
        let rows: Vec<[f64; 4]> = (0..3).map(|i| [u[i], 1.0, 1.0 / u[i], f[i]]).collect();
        let sub = |a: [f64; 4], b: [f64; 4], k: usize| -> [f64; 4] {
            let r = a[k] / b[k];
            [a[0] - r * b[0], a[1] - r * b[1], a[2] - r * b[2], a[3] - r * b[3]]
        };
        // Eliminate c (column 1) then d (column 2).
        let r1 = sub(rows[1], rows[0], 1);
        let r2 = sub(rows[2], rows[0], 1);
        let r3 = sub(r2, r1, 2);
        let l = r3[3] / r3[0];
        let d = (r1[3] - r1[0] * l) / r1[2];
        let c = f[0] - l * u[0] - d / u[0];
        let ratios: Vec<f64> = (0..3).map(|i| f[i] / u[i]).collect();
        let monotone = (ratios[1] - ratios[0]) * (ratios[2] - ratios[1]) > 0.0;
        Self { l, c, d, monotone }
    }

    fn eval(&self, u: f64) -> f64 {
        self.l * u + self.c + self.d / u
    }
}

/// Piecewise-linear stress table with exact stored energy.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "StressTable", into = "StressTable")]
pub struct TabulatedStress {
    u: Vec<f64>,
    tau: Vec<f64>,
    w: Vec<f64>,
    u0: f64,
    tail_tau: TailFit,
    tail_w: TailFit,
}

/// Serialized form of [`TabulatedStress`]: ascending `(u, τ)` rows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StressTable {
    pub samples: Vec<(f64, f64)>,
}

impl TryFrom<StressTable> for TabulatedStress {
    type Error = Error;
    fn try_from(t: StressTable) -> Result<Self> {
        TabulatedStress::new(&t.samples)
    }
}

impl From<TabulatedStress> for StressTable {
    fn from(t: TabulatedStress) -> Self {
        StressTable {
            samples: t.u.iter().copied().zip(t.tau.iter().copied()).collect(),
        }
    }
}

impl TabulatedStress {
    pub fn new(samples: &[(f64, f64)]) -> Result<Self> {
        if samples.len() < 4 {
            return Err(Error::InvalidLaw("stress table needs at least four rows".into()));
        }
        if samples.iter().any(|(u, t)| !(*u > 0.0) || !u.is_finite() || !t.is_finite()) {
            return Err(Error::InvalidLaw("stress table needs finite rows with u > 0".into()));
        }
        if samples.windows(2).any(|w| !(w[1].0 > w[0].0)) {
            return Err(Error::InvalidLaw("stress table strains must increase".into()));
        }
        if samples.windows(2).any(|w| !(w[1].1 > w[0].1)) {
            return Err(Error::InvalidLaw("stress must increase with strain".into()));
        }
        let u: Vec<f64> = samples.iter().map(|s| s.0).collect();
        let tau: Vec<f64> = samples.iter().map(|s| s.1).collect();
        let k = tau.partition_point(|t| *t < 0.0);
        if k == 0 || k == tau.len() {
            return Err(Error::InvalidLaw("stress table does not cross zero".into()));
        }
        let u0 = u[k - 1] - tau[k - 1] * (u[k] - u[k - 1]) / (tau[k] - tau[k - 1]);
        let mut w = vec![0.0; u.len()];
        // Energy at nodes, anchored at u0 inside segment k-1.
        let seg = |i: usize| 0.5 * (tau[i] + tau[i + 1]) * (u[i + 1] - u[i]);
        let tau_at = |x: f64| lerp(&u, &tau, x);
        w[k] = 0.5 * tau[k] * (u[k] - u0);
        w[k - 1] = 0.5 * tau[k - 1] * (u[k - 1] - u0);
        for i in k..u.len() - 1 {
            w[i + 1] = w[i] + seg(i);
        }
        for i in (0..k - 1).rev() {
            w[i] = w[i + 1] - seg(i);
        }
        debug_assert!(tau_at(u0).abs() < 1e-9);
        let n = u.len();
        let last = [u[n - 3], u[n - 2], u[n - 1]];
        let tail_tau = TailFit::through(last, [tau[n - 3], tau[n - 2], tau[n - 1]]);
        let tail_w = TailFit::through(last, [w[n - 3], w[n - 2], w[n - 1]]);
        Ok(Self {
            u,
            tau,
            w,
            u0,
            tail_tau,
            tail_w,
        })
    }

    pub fn samples(&self) -> Vec<(f64, f64)> {
        self.u.iter().copied().zip(self.tau.iter().copied()).collect()
    }

    fn range(&self) -> [f64; 2] {
        [self.u[0], *self.u.last().unwrap()]
    }
}

fn lerp(xs: &[f64], ys: &[f64], x: f64) -> f64 {
    let i = xs.partition_point(|p| *p <= x).clamp(1, xs.len() - 1);
    let s = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
    ys[i - 1] + s * (ys[i] - ys[i - 1])
}

/// Stress-strain law `τ(u)` with stored energy `W(u) = ∫_{u0}^u τ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum StressLaw {
    /// `τ(u) = τ_∞ (1 - u^(-m))`, `m > 1`.
    PowerSaturating { tau_inf: f64, m: f64 },
    /// `τ(u) = slope (u - u0)`: linear growth, unbounded energy growth.
    Linear { slope: f64, u0: f64 },
    Tabulated(TabulatedStress),
}

/// Sampled structural properties of a law.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LawCheck {
    pub hyperbolic: bool,
    pub softening: bool,
    pub energy_convex: bool,
    /// `W` at the smallest sampled strain exceeds the threshold.
    pub energy_blows_up: bool,
}

impl StressLaw {
    pub fn power(tau_inf: f64, m: f64) -> Result<Self> {
        if !(m > 1.0) || !(tau_inf > 0.0) || !m.is_finite() || !tau_inf.is_finite() {
            return Err(Error::InvalidLaw(format!("need m > 1 and tau_inf > 0, got m = {m}, tau_inf = {tau_inf}")));
        }
        Ok(StressLaw::PowerSaturating { tau_inf, m })
    }

    pub fn linear(slope: f64, u0: f64) -> Result<Self> {
        if !(slope > 0.0) || !(u0 > 0.0) {
            return Err(Error::InvalidLaw("linear stress needs slope > 0 and u0 > 0".into()));
        }
        Ok(StressLaw::Linear { slope, u0 })
    }

    pub fn table(samples: &[(f64, f64)]) -> Result<Self> {
        Ok(StressLaw::Tabulated(TabulatedStress::new(samples)?))
    }

    /// Parses `u,tau` rows, with an optional header, ascending in `u`.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(false)
            .trim(csv::Trim::All)
            .comment(Some(b'#'))
            .from_reader(text.as_bytes());
        let mut rows = Vec::new();
        for (i, rec) in rdr.records().enumerate() {
            let rec = rec.map_err(|e| Error::Config(format!("stress table: {e}")))?;
            if rec.len() != 2 {
                return Err(Error::Config(format!("stress table row {}: expected u,tau", i + 1)));
            }
            let parse = |s: &str| s.parse::<f64>();
            match (parse(&rec[0]), parse(&rec[1])) {
                (Ok(u), Ok(t)) => rows.push((u, t)),
                _ if i == 0 => continue,
                _ => return Err(Error::Config(format!("stress table row {}: not numeric", i + 1))),
            }
        }
        Self::table(&rows)
    }

    pub fn tau(&self, u: f64) -> f64 {
        match self {
            StressLaw::PowerSaturating { tau_inf, m } => tau_inf * (1.0 - u.powf(-m)),
            StressLaw::Linear { slope, u0 } => slope * (u - u0),
            StressLaw::Tabulated(t) => {
                if u > t.range()[1] {
                    t.tail_tau.eval(u)
                } else {
                    lerp(&t.u, &t.tau, u)
                }
            }
        }
    }

    pub fn energy(&self, u: f64) -> f64 {
        match self {
            StressLaw::PowerSaturating { tau_inf, m } => {
                tau_inf * (u - 1.0 + (u.powf(1.0 - m) - 1.0) / (m - 1.0))
            }
            StressLaw::Linear { slope, u0 } => 0.5 * slope * (u - u0) * (u - u0),
            StressLaw::Tabulated(t) => {
                if u > t.range()[1] {
                    t.tail_w.eval(u)
                } else {
                    let i = t.u.partition_point(|p| *p <= u).clamp(1, t.u.len() - 1);
                    let (a, ta) = (t.u[i - 1], t.tau[i - 1]);
                    t.w[i - 1] + 0.5 * (ta + lerp(&t.u, &t.tau, u)) * (u - a)
                }
            }
        }
    }

    /// Zero-stress strain.
    pub fn u0(&self) -> f64 {
        match self {
            StressLaw::PowerSaturating { .. } => 1.0,
            StressLaw::Linear { u0, .. } => *u0,
            StressLaw::Tabulated(t) => t.u0,
        }
    }

    /// `L_τ = lim τ(u)/u`.
    pub fn l_tau(&self) -> Limit {
        match self {
            StressLaw::PowerSaturating { .. } => Limit::Finite(0.0),
            StressLaw::Linear { slope, .. } => Limit::Finite(*slope),
            StressLaw::Tabulated(t) if t.tail_tau.monotone => Limit::Finite(t.tail_tau.l),
            StressLaw::Tabulated(_) => Limit::Indeterminate,
        }
    }

    /// `L_W = lim W(u)/u`.
    pub fn l_w(&self) -> Limit {
        match self {
            StressLaw::PowerSaturating { tau_inf, .. } => Limit::Finite(*tau_inf),
            StressLaw::Linear { .. } => Limit::Infinite,
            StressLaw::Tabulated(t) => match self.l_tau() {
                Limit::Finite(l) if l.abs() > ADMISSIBLE_TOL => Limit::Infinite,
                Limit::Finite(_) if t.tail_w.monotone => Limit::Finite(t.tail_w.l),
                _ => Limit::Indeterminate,
            },
        }
    }

    /// `τ_∞ = lim τ(u)`, infinite unless `L_τ = 0`.
    pub fn tau_inf(&self) -> f64 {
        match self {
            StressLaw::PowerSaturating { tau_inf, .. } => *tau_inf,
            StressLaw::Linear { .. } => f64::INFINITY,
            StressLaw::Tabulated(t) => match self.l_tau() {
                Limit::Finite(l) if l.abs() <= ADMISSIBLE_TOL => t.tail_tau.c,
                _ => f64::INFINITY,
            },
        }
    }

    /// Sampled check of the structural assumptions on `[u_lo, u_hi]`.
    pub fn check(&self, u_lo: f64, u_hi: f64, n: usize, blowup: f64) -> LawCheck {
        let n = n.max(3);
        let us: Vec<f64> = (0..n)
            .map(|i| u_lo * (u_hi / u_lo).powf(i as f64 / (n - 1) as f64))
            .collect();
        let taus: Vec<f64> = us.iter().map(|&u| self.tau(u)).collect();
        let slopes: Vec<f64> = us
            .windows(2)
            .zip(taus.windows(2))
            .map(|(u, t)| (t[1] - t[0]) / (u[1] - u[0]))
            .collect();
        let ws: Vec<f64> = us.iter().map(|&u| self.energy(u)).collect();
        let wslopes: Vec<f64> = us
            .windows(2)
            .zip(ws.windows(2))
            .map(|(u, w)| (w[1] - w[0]) / (u[1] - u[0]))
            .collect();
        LawCheck {
            hyperbolic: slopes.iter().all(|s| *s > 0.0),
            softening: slopes.windows(2).all(|s| s[1] < s[0]),
            energy_convex: wslopes.windows(2).all(|s| s[1] >= s[0] - 1e-12 * s[0].abs().max(1.0)),
            energy_blows_up: ws[0] > blowup,
        }
    }
}

/// `|L_τ|` at or below which a law admits fractures.
pub const ADMISSIBLE_TOL: f64 = 1e-10;

/// `τ̂` on an atomic measure: every atom scaled by `L_τ`; empty when `L_τ = 0`.
pub fn extend_stress_atomic(law: &StressLaw, atoms: &[Atom]) -> Result<Vec<Atom>> {
    let l = law
        .l_tau()
        .finite()
        .ok_or_else(|| Error::Numerical("L_tau cannot be estimated from the table tail".into()))?;
    if l == 0.0 {
        return Ok(Vec::new());
    }
    Ok(atoms.iter().map(|a| Atom { x: a.x, w: l * a.w }).collect())
}

/// `Ŵ` on an atomic measure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "atoms", rename_all = "snake_case")]
pub enum EnergyExtension {
    Atoms(Vec<Atom>),
    Infinite,
}

pub fn extend_energy_atomic(law: &StressLaw, atoms: &[Atom]) -> Result<EnergyExtension> {
    if atoms.is_empty() {
        return Ok(EnergyExtension::Atoms(Vec::new()));
    }
    match law.l_w() {
        Limit::Finite(l) => Ok(EnergyExtension::Atoms(atoms.iter().map(|a| Atom { x: a.x, w: l * a.w }).collect())),
        Limit::Infinite => Ok(EnergyExtension::Infinite),
        Limit::Indeterminate => Err(Error::Numerical("L_W cannot be estimated from the table tail".into())),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CrackSolution {
    pub lambda: f64,
    pub alpha: f64,
    pub sigma: f64,
    #[serde(rename = "Y0")]
    pub y0: f64,
    /// Entropy production of each shock, integral form.
    pub theta: f64,
    /// `σ(Y0²/2 + W(α) - W(λ)) + τ(α) Y0`.
    pub theta_algebraic: f64,
    /// Entropy atom of the crack, `2 Y0 (L_W - τ(α))`.
    pub crack_mass: f64,
    /// `2(θ + Y0 (τ_∞ - τ(α)))`: energy excess over the crack-free motion
    /// per unit time.
    pub energy_gap: f64,
}

/// Crack faces at strain `alpha` behind shocks into strain `lambda`.
pub fn crack_solve(law: &StressLaw, lambda: f64, alpha: f64) -> Result<CrackSolution> {
    if !(alpha > 0.0) || !(alpha < lambda) || !lambda.is_finite() {
        return Err(Error::Config(format!("need 0 < alpha < lambda, got alpha = {alpha}, lambda = {lambda}")));
    }
    let (tl, ta) = (law.tau(lambda), law.tau(alpha));
    if !(tl > ta) {
        return Err(Error::InvalidShock(format!(
            "tau(lambda) = {tl} must exceed tau(alpha) = {ta} for a real shock speed"
        )));
    }
    let sigma = ((tl - ta) / (lambda - alpha)).sqrt();
    let y0 = sigma * (lambda - alpha);
    let mid = 0.5 * (tl + ta);
    let mut pts = vec![alpha];
    if let StressLaw::Tabulated(t) = law {
        pts.extend(t.u.iter().copied().filter(|u| *u > alpha && *u < lambda));
    }
    pts.push(lambda);
    let q = quad::integrate_points(
        |s| mid - law.tau(s),
        &pts,
        QuadOptions {
            abs_tol: 1e-14,
            rel_tol: 1e-13,
            max_intervals: 2000,
        },
    )?;
    let theta = sigma * q.value;
    let theta_algebraic = sigma * (0.5 * y0 * y0 + law.energy(alpha) - law.energy(lambda)) + ta * y0;
    if (theta - theta_algebraic).abs() > 1e-10 * (1.0 + theta.abs()) {
        return Err(Error::Numerical(format!(
            "entropy production forms disagree: {theta} vs {theta_algebraic}"
        )));
    }
    let l_w = match law.l_w() {
        Limit::Finite(l) => l,
        Limit::Infinite => f64::INFINITY,
        Limit::Indeterminate => f64::NAN,
    };
    let crack_mass = 2.0 * y0 * (l_w - ta);
    let energy_gap = 2.0 * (theta + y0 * (law.tau_inf() - ta));
    Ok(CrackSolution {
        lambda,
        alpha,
        sigma,
        y0,
        theta,
        theta_algebraic,
        crack_mass,
        energy_gap,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Admissibility {
    Admissible,
    Inadmissible { l_tau: f64 },
    Indeterminate,
}

/// Fractures are weak* solutions exactly when `L_τ = 0`.
pub fn crack_weakstar_admissible(law: &StressLaw) -> Admissibility {
    match law.l_tau() {
        Limit::Finite(l) if l.abs() <= ADMISSIBLE_TOL => Admissibility::Admissible,
        Limit::Finite(l) => Admissibility::Inadmissible { l_tau: l },
        Limit::Infinite => Admissibility::Inadmissible { l_tau: f64::INFINITY },
        Limit::Indeterminate => Admissibility::Indeterminate,
    }
}

/// Jump residuals of one curve of the crack motion.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ElasticRhRow {
    pub x: f64,
    /// `|w' - X'[u] - [v]|`
    pub kinematic: f64,
    /// `|-X'[v] - [τ]|`
    pub momentum: f64,
    /// `|w X'|`
    pub atom: f64,
    /// `|L_τ w|`, nonzero exactly when the crack is not a weak* solution.
    pub stress_atom: f64,
}

impl ElasticRhRow {
    pub fn max(&self) -> f64 {
        self.kinematic.max(self.momentum).max(self.atom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EntropyAtom {
    pub x: f64,
    pub mass: f64,
}

/// The crack-initiation motion at one time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlicFields {
    pub t: f64,
    pub crack: CrackSolution,
    /// Strain atom `2 t Y0` at the origin.
    pub atom_weight: f64,
    /// Breakpoints `-σt, 0, σt`.
    pub breakpoints: [f64; 3],
    /// Strain density on the four intervals cut by the breakpoints.
    pub strain: [f64; 4],
    pub velocity: [f64; 4],
    pub stress: [f64; 4],
    /// `L_τ 2 t Y0`.
    pub stress_atom: f64,
    pub entropy: [EntropyAtom; 3],
    pub rh: [ElasticRhRow; 3],
}

/// Crack motion at time `t`.
pub fn slic_example_fields(law: &StressLaw, lambda: f64, alpha: f64, t: f64) -> Result<SlicFields> {
    if !(t > 0.0) {
        return Err(Error::Domain(format!("crack motion needs t > 0, got {t}")));
    }
    let crack = crack_solve(law, lambda, alpha)?;
    slic_fields_at(law, &crack, t)
}

/// Crack motion of a solved crack at time `t`.
pub fn slic_fields_at(law: &StressLaw, c: &CrackSolution, t: f64) -> Result<SlicFields> {
    if !(t > 0.0) {
        return Err(Error::Domain(format!("crack motion needs t > 0, got {t}")));
    }
    Ok(slic_fields_of(law, c, t))
}

fn slic_fields_of(law: &StressLaw, c: &CrackSolution, t: f64) -> SlicFields {
    let (s, y0) = (c.sigma, c.y0);
    let strain = [c.lambda, c.alpha, c.alpha, c.lambda];
    let velocity = [0.0, -y0, y0, 0.0];
    let stress = strain.map(|u| law.tau(u));
    let w = 2.0 * t * y0;
    let l_tau = law.l_tau().finite().unwrap_or(f64::NAN);
    // Curves: (position, speed, weight, weight rate, left index).
    let curves = [(-s * t, -s, 0.0, 0.0, 0usize), (0.0, 0.0, w, 2.0 * y0, 1), (s * t, s, 0.0, 0.0, 2)];
    let rh = curves.map(|(x, xp, w, wp, i)| {
        let du = strain[i + 1] - strain[i];
        let dv = velocity[i + 1] - velocity[i];
        let dt = stress[i + 1] - stress[i];
        ElasticRhRow {
            x,
            kinematic: (wp - xp * du - dv).abs(),
            momentum: (-xp * dv - dt).abs(),
            atom: (w * xp).abs(),
            stress_atom: (l_tau * w).abs(),
        }
    });
    let shock = EntropyAtom { x: 0.0, mass: c.theta };
    SlicFields {
        t,
        crack: *c,
        atom_weight: w,
        breakpoints: [-s * t, 0.0, s * t],
        strain,
        velocity,
        stress,
        stress_atom: l_tau * w,
        entropy: [
            EntropyAtom { x: -s * t, ..shock },
            EntropyAtom { x: 0.0, mass: c.crack_mass },
            EntropyAtom { x: s * t, ..shock },
        ],
        rh,
    }
}

impl SlicFields {
    fn interval(&self, x: f64) -> usize {
        self.breakpoints.partition_point(|b| *b <= x)
    }

    pub fn strain_at(&self, x: f64) -> f64 {
        self.strain[self.interval(x)]
    }

    pub fn velocity_at(&self, x: f64) -> f64 {
        self.velocity[self.interval(x)]
    }

    /// Strain as a measure on `domain`.
    pub fn strain_measure(&self, domain: [f64; 2]) -> Result<RadonMeasure> {
        let mut edges = vec![domain[0]];
        edges.extend(self.breakpoints.iter().map(|b| b.clamp(domain[0], domain[1])));
        edges.push(domain[1]);
        let pieces = (0..4)
            .filter(|&i| edges[i + 1] > edges[i])
            .map(|i| Piece::constant(edges[i], edges[i + 1], self.strain[i]))
            .collect();
        let atoms = if domain[0] < 0.0 && domain[1] > 0.0 {
            vec![Atom { x: 0.0, w: self.atom_weight }]
        } else {
            vec![]
        };
        RadonMeasure::new(Density { domain, pieces }, atoms)
    }

    /// `η̂(I) - η̂_nc(I)` for `I = domain ⊃ (-σt, σt)`, summed from the
    /// energy measure of both motions.
    pub fn energy_excess(&self, law: &StressLaw, domain: [f64; 2]) -> Result<f64> {
        let [a, b] = domain;
        let s = self.breakpoints[2];
        if !(a < -s && b > s) {
            return Err(Error::Domain("interval must contain the shocks".into()));
        }
        let l_w = law.l_w().finite().unwrap_or(f64::INFINITY);
        let (c, y0) = (&self.crack, self.crack.y0);
        let inner = 0.5 * y0 * y0 + law.energy(c.alpha);
        let with_crack = law.energy(c.lambda) * (b - a - 2.0 * s) + inner * 2.0 * s + l_w * self.atom_weight;
        Ok(with_crack - law.energy(c.lambda) * (b - a))
    }
}

/// The crack motion as a time history for weak* residual checks, with
/// conserved pair `(U, v)` and fluxes `(-v, -τ̂(U))`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlicHistory {
    pub law: StressLaw,
    pub crack: CrackSolution,
    pub domain: [f64; 2],
    pub t_max: f64,
}

impl SlicHistory {
    pub fn new(law: StressLaw, lambda: f64, alpha: f64, t_max: f64) -> Result<Self> {
        let crack = crack_solve(&law, lambda, alpha)?;
        let reach = 1.5 * crack.sigma * t_max;
        Ok(Self {
            law,
            crack,
            domain: [-reach, reach],
            t_max,
        })
    }

    pub fn fields(&self, t: f64) -> SlicFields {
        slic_fields_of(&self.law, &self.crack, t)
    }
}

// ∫ vals(x) g(x) dx over the bump support, split at the breakpoints.
fn piecewise_pair(f: &SlicFields, vals: &[f64; 4], g: impl Fn(f64) -> f64, b: &Bump, tol: f64) -> Result<f64> {
    let [lo, hi] = b.support();
    let mut pts = vec![lo];
    pts.extend(f.breakpoints.iter().copied().filter(|x| *x > lo && *x < hi));
    pts.push(hi);
    let q = quad::integrate_points(
        |x| vals[f.interval(x)] * g(x),
        &pts,
        QuadOptions {
            abs_tol: tol,
            rel_tol: 0.0,
            max_intervals: 2000,
        },
    )?;
    Ok(q.value)
}

impl History for SlicHistory {
    fn domain(&self) -> [f64; 2] {
        self.domain
    }

    fn valid_time(&self) -> [f64; 2] {
        [0.0, self.t_max]
    }

    fn events(&self) -> Vec<f64> {
        Vec::new()
    }

    fn discontinuities(&self, t: f64) -> Result<Vec<f64>> {
        Ok(self.fields(t).breakpoints.to_vec())
    }

    fn pair_conserved(&self, eq: usize, t: f64, b: &Bump, tol: f64) -> Result<f64> {
        let f = self.fields(t);
        match eq {
            0 => Ok(piecewise_pair(&f, &f.strain, |x| b.phi(x), b, tol)? + f.atom_weight * b.phi(0.0)),
            _ => piecewise_pair(&f, &f.velocity, |x| b.phi(x), b, tol),
        }
    }

    fn pair_flux(&self, eq: usize, t: f64, b: &Bump, tol: f64) -> Result<f64> {
        let f = self.fields(t);
        match eq {
            0 => Ok(-piecewise_pair(&f, &f.velocity, |x| b.dphi(x), b, tol)?),
            _ => Ok(-piecewise_pair(&f, &f.stress, |x| b.dphi(x), b, tol)? - f.stress_atom * b.dphi(0.0)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn family() -> StressLaw {
        StressLaw::power(1.0, 2.0).unwrap()
    }

    #[test]
    fn power_law_example() {
        let c = crack_solve(&family(), 2.0, 1.5).unwrap();
        assert!((c.sigma - 0.623_609_564_462_323_6).abs() < 1e-15);
        assert!((c.y0 - 0.311_804_782_231_161_8).abs() < 1e-15);
        assert!((c.theta - -0.004_330_621_975_432_803).abs() < 1e-15);
        assert!((c.crack_mass - 0.277_159_806_427_699_4).abs() < 1e-15);
        assert!((c.energy_gap - 0.268_498_562_476_833_76).abs() < 1e-14);
    }

    #[test]
    fn limits_and_extensions() {
        let law = family();
        assert_eq!(law.l_tau(), Limit::Finite(0.0));
        assert_eq!(law.l_w(), Limit::Finite(1.0));
        let atoms = [Atom { x: 0.0, w: 2.0 }];
        assert!(extend_stress_atomic(&law, &atoms).unwrap().is_empty());
        assert_eq!(extend_energy_atomic(&law, &atoms).unwrap(), EnergyExtension::Atoms(vec![Atom { x: 0.0, w: 2.0 }]));
        let lin = StressLaw::linear(0.5, 1.0).unwrap();
        assert_eq!(extend_stress_atomic(&lin, &[Atom { x: 1.0, w: 2.0 }]).unwrap(), vec![Atom { x: 1.0, w: 1.0 }]);
        assert_eq!(extend_energy_atomic(&lin, &atoms).unwrap(), EnergyExtension::Infinite);
        assert_eq!(extend_energy_atomic(&lin, &[]).unwrap(), EnergyExtension::Atoms(vec![]));
        // Richardson ratio of W(u)/u at large u.
        let r: Vec<f64> = [1e3, 1e4, 1e5].iter().map(|u| law.energy(*u) / u).collect();
        assert!((r[2] + (r[2] - r[1]) / 9.0 - 1.0).abs() < 1e-6);
    }

    #[test]
    fn crack_errors_and_limit() {
        let law = family();
        assert!(matches!(crack_solve(&law, 1.5, 2.0), Err(Error::Config(_))));
        let c = crack_solve(&law, 2.0, 2.0 - 1e-7).unwrap();
        assert!((c.sigma - (2.0f64 * 2.0f64.powi(-3)).sqrt()).abs() < 1e-6);
        assert!(c.theta.abs() < 1e-18 && c.y0 < 1e-7);
    }

    #[test]
    fn table_law_matches_family() {
        let law = family();
        let mut u = 0.2;
        let mut rows = Vec::new();
        while u < 2e5 {
            rows.push((u, law.tau(u)));
            u *= 1.05;
        }
        let t = StressLaw::table(&rows).unwrap();
        assert!((t.u0() - 1.0).abs() < 1e-2);
        assert_eq!(crack_weakstar_admissible(&t), Admissibility::Admissible);
        assert!((t.tau_inf() - 1.0).abs() < 1e-6);
        let lin = StressLaw::table(&[(0.5, -0.25), (1.0, 0.0), (2.0, 0.5), (3.0, 1.0), (4.0, 1.5)]).unwrap();
        match crack_weakstar_admissible(&lin) {
            Admissibility::Inadmissible { l_tau } => assert!((l_tau - 0.5).abs() < 1e-12),
            v => panic!("{v:?}"),
        }
        let csv = "u,tau\n0.5,-0.25\n1.0,0.0\n2.0,0.5\n3.0,1.0\n4.0,1.5\n";
        assert_eq!(StressLaw::from_csv(csv).unwrap(), lin);
    }

    #[test]
    fn slic_fields_example() {
        let law = family();
        let f = slic_example_fields(&law, 2.0, 1.5, 1.0).unwrap();
        assert_eq!(f.atom_weight, 2.0 * f.crack.y0);
        assert!(f.rh.iter().all(|r| r.max() <= 1e-10));
        assert!(f.entropy[1].mass > 0.0 && f.entropy[0].mass < 0.0);
        let gap = f.energy_excess(&law, [-3.0, 3.0]).unwrap();
        assert!((gap - f.crack.energy_gap).abs() < 1e-12);
        assert_eq!(f.velocity_at(-0.1), -f.velocity_at(0.1));
        assert!(slic_example_fields(&law, 2.0, 1.5, 0.0).is_err());
    }
}
