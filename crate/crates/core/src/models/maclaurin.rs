use num_complex::Complex64;

use super::{bisect_root, nonnegative};
use crate::error::{Error, Result};
use crate::krein::IndefiniteMetric;
use crate::msystem::{decompose, MechanicalSystem};
use crate::paradox::load_onset;
use crate::smallalg::{RMatrix, SmallMatrix};

/// Rotation rate at which viscous and radiative strengths are compared.
pub const OMEGA0: f64 = 0.663490;

/// Below this eccentricity the closed forms cancel badly; use the series.
const SERIES_CUTOFF: f64 = 0.2;

// coefficients of e^(2k), k = 0..10
const OMEGA2_SERIES: [f64; 11] = [
    0.0,
    8.0 / 15.0,
    8.0 / 105.0,
    0.0,
    -64.0 / 3465.0,
    -1024.0 / 45045.0,
    -1024.0 / 45045.0,
    -16384.0 / 765765.0,
    -8192.0 / 415701.0,
    -262144.0 / 14549535.0,
    -262144.0 / 15935205.0,
];

const B_SERIES: [f64; 11] = [
    4.0 / 15.0,
    -8.0 / 105.0,
    -4.0 / 105.0,
    -16.0 / 693.0,
    -64.0 / 4095.0,
    -512.0 / 45045.0,
    -512.0 / 58905.0,
    -14336.0 / 2078505.0,
    -16384.0 / 2909907.0,
    -524288.0 / 111546435.0,
    -131072.0 / 32807775.0,
];

fn series(c: &[f64], e2: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &x| acc * e2 + x)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MaclaurinProfile {
    pub e: f64,
    /// Squared rotation rate, units of `πGρ`.
    pub omega2: f64,
    pub b: f64,
}

impl MaclaurinProfile {
    pub fn omega(&self) -> f64 {
        self.omega2.sqrt()
    }
}

fn check_e(e: f64) -> Result<()> {
    if e > 0.0 && e < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("eccentricity must lie in (0, 1), got {e}")))
    }
}

/// Rotation law and the coefficient `b(e)` of the equilibrium spheroid.
pub fn maclaurin_profile(e: f64) -> Result<MaclaurinProfile> {
    check_e(e)?;
    let e2 = e * e;
    if e < SERIES_CUTOFF {
        return Ok(MaclaurinProfile { e, omega2: series(&OMEGA2_SERIES, e2), b: series(&B_SERIES, e2) });
    }
    let s = (1.0 - e2).sqrt();
    let asin = e.asin();
    let omega2 = 2.0 * (3.0 - 2.0 * e2) * asin * s / (e2 * e) - 6.0 * (1.0 - e2) / e2;
    let b = s / (4.0 * e.powi(5)) * (e * (3.0 - 2.0 * e2) * s + (4.0 * e2 - 3.0) * asin);
    Ok(MaclaurinProfile { e, omega2, b })
}

/// `e − sin(e(3 + 4e²)√(1−e²)/(3 + 2e² − 4e⁴))`, vanishing at the Riemann point.
pub fn riemann_sine_residual(e: f64) -> f64 {
    let e2 = e * e;
    e - (e * (3.0 + 4.0 * e2) * (1.0 - e2).sqrt() / (3.0 + 2.0 * e2 - 4.0 * e2 * e2)).sin()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MaclaurinCriticals {
    /// Root of `4b = 2Ω²` (bifurcation with the Jacobi family).
    pub e_ml: f64,
    /// Root of `4b = Ω²` (collision of the two modes).
    pub e_riemann: f64,
    /// Root of the equivalent sine-form equation.
    pub e_riemann_sine: f64,
}

pub fn maclaurin_criticals() -> Result<MaclaurinCriticals> {
    let (lo, hi, tol) = (0.5, 0.999, 1e-12);
    let f = |k: f64| {
        move |e: f64| match maclaurin_profile(e) {
            Ok(p) => 4.0 * p.b - k * p.omega2,
            Err(_) => f64::NAN,
        }
    };
    Ok(MaclaurinCriticals {
        e_ml: bisect_root(f(2.0), lo, hi, tol)?,
        e_riemann: bisect_root(f(1.0), lo, hi, tol)?,
        e_riemann_sine: bisect_root(riemann_sine_residual, lo, hi, tol)?,
    })
}

/// Linearly interpolated table of a coefficient against eccentricity.
#[derive(Clone, Debug, PartialEq)]
pub struct Table1D {
    xs: Vec<f64>,
    ys: Vec<f64>,
}

impl Table1D {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        if xs.len() != ys.len() || xs.len() < 2 {
            return Err(Error::Table("need at least two rows of equal length".into()));
        }
        if xs.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Table("abscissae must be strictly increasing".into()));
        }
        if xs.iter().chain(&ys).any(|v| !v.is_finite()) {
            return Err(Error::Table("non-finite entry".into()));
        }
        Ok(Table1D { xs, ys })
    }

    /// Two numeric columns separated by whitespace or commas; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let (mut xs, mut ys) = (Vec::new(), Vec::new());
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let cols: Vec<&str> = line.split(|c: char| c == ',' || c.is_whitespace()).filter(|s| !s.is_empty()).collect();
            if cols.len() != 2 {
                return Err(Error::Table(format!("line {}: expected 2 columns, got {}", lineno + 1, cols.len())));
            }
            let num = |s: &str| {
                s.parse::<f64>().map_err(|_| Error::Table(format!("line {}: bad number {s:?}", lineno + 1)))
            };
            xs.push(num(cols[0])?);
            ys.push(num(cols[1])?);
        }
        Self::new(xs, ys)
    }

    pub fn range(&self) -> (f64, f64) {
        (self.xs[0], self.xs[self.xs.len() - 1])
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        let (lo, hi) = self.range();
        if !(x >= lo && x <= hi) {
            return Err(Error::Table(format!("{x} outside table range [{lo}, {hi}]")));
        }
        let i = self.xs.partition_point(|&v| v <= x).clamp(1, self.xs.len() - 1);
        let (x0, x1, y0, y1) = (self.xs[i - 1], self.xs[i], self.ys[i - 1], self.ys[i]);
        Ok(y0 + (y1 - y0) * (x - x0) / (x1 - x0))
    }
}

/// A radiative coefficient: a constant or a function of `e` given by a table.
#[derive(Clone, Debug, PartialEq)]
pub enum RadCoeff {
    Const(f64),
    Table(Table1D),
}

impl RadCoeff {
    pub fn eval(&self, e: f64) -> Result<f64> {
        match self {
            RadCoeff::Const(v) => Ok(*v),
            RadCoeff::Table(t) => t.eval(e),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MaclaurinParams {
    pub e: f64,
    /// Viscosity in units of `√(πGρ)`.
    pub mu: f64,
    /// Radiation-reaction strength.
    pub delta: f64,
    pub q1: Option<RadCoeff>,
    pub q2: Option<RadCoeff>,
}

impl MaclaurinParams {
    pub fn new(e: f64) -> Self {
        MaclaurinParams { e, mu: 0.0, delta: 0.0, q1: None, q2: None }
    }

    /// `X = 25/(2Ω₀⁴)·μ/δ`.
    pub fn damping_ratio(&self) -> Result<f64> {
        if !(self.delta > 0.0) {
            return Err(Error::InvalidParameter("damping ratio needs delta > 0".into()));
        }
        Ok(25.0 / (2.0 * OMEGA0.powi(4)) * self.mu / self.delta)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MaclaurinVariant {
    Inviscid,
    Viscous,
    Radiative,
}

/// Matrix polynomial of the ellipsoidal perturbations. The velocity block
/// `[[d, −4Ω], [Ω, d]]` is split into its gyroscopic and symmetric parts.
pub fn build_maclaurin(p: &MaclaurinParams, variant: MaclaurinVariant) -> Result<MechanicalSystem> {
    nonnegative("mu", p.mu)?;
    nonnegative("delta", p.delta)?;
    let prof = maclaurin_profile(p.e)?;
    let (w, w2, b) = (prof.omega(), prof.omega2, prof.b);
    let m = RMatrix::identity(2);
    let (vel, pos) = match variant {
        MaclaurinVariant::Inviscid | MaclaurinVariant::Viscous => {
            let d = if variant == MaclaurinVariant::Viscous { 10.0 * p.mu } else { 0.0 };
            let k = 4.0 * b - 2.0 * w2;
            (RMatrix::from_rows(&[&[d, -4.0 * w], &[w, d]])?, RMatrix::diag(&[k, k]))
        }
        MaclaurinVariant::Radiative => {
            let (Some(q1), Some(q2)) = (&p.q1, &p.q2) else {
                return Err(Error::MissingRadiativeCoefficients);
            };
            let (q1, q2) = (q1.eval(p.e)?, q2.eval(p.e)?);
            let dd = p.delta * 16.0 * w2 * (6.0 * b - w2);
            let g = RMatrix::from_rows(&[&[0.0, -2.5 * w], &[2.5 * w, 0.0]])?;
            let d = RMatrix::from_rows(&[&[dd, -1.5 * w], &[-1.5 * w, dd]])?;
            let k = 4.0 * b - w2;
            let n = RMatrix::from_rows(&[&[2.0 * q1, 2.0 * q2], &[-0.5 * q2, 2.0 * q1]])?.scale(p.delta);
            (&g + &d, &RMatrix::diag(&[k, k]) + &n)
        }
    };
    Ok(decompose(&pos, &vel, &m)?.with_labels(&["x1", "x2"]))
}

/// Closed-form inviscid eigenvalues `±(iΩ ± i√(4b − Ω²))`.
pub fn maclaurin_inviscid_eigenvalues(e: f64) -> Result<[Complex64; 4]> {
    let prof = maclaurin_profile(e)?;
    let i = Complex64::new(0.0, 1.0);
    let w = Complex64::new(prof.omega(), 0.0);
    let r = Complex64::new(4.0 * prof.b - prof.omega2, 0.0).sqrt();
    Ok([i * (w + r), i * (w - r), -i * (w + r), -i * (w - r)])
}

/// Self-adjoint first-order form of the inviscid problem.
///
/// Multiplying the equations by `P = diag(1/4, 1)` makes the velocity block
/// antisymmetric, so the energy `½(q̇ᵀPq̇ + k qᵀPq)` with `k = 4b − 2Ω²`
/// gives the metric `diag(kP, P)` in which `−iA` is self-adjoint.
pub fn maclaurin_energy_form(e: f64) -> Result<(SmallMatrix, IndefiniteMetric)> {
    let sys = build_maclaurin(&MaclaurinParams::new(e), MaclaurinVariant::Inviscid)?;
    let prof = maclaurin_profile(e)?;
    let k = 4.0 * prof.b - 2.0 * prof.omega2;
    let a = sys.state_matrix()?.scale(Complex64::new(0.0, -1.0));
    let metric = IndefiniteMetric::from_diag(&[0.25 * k, k, 0.25, 1.0])?;
    Ok((a, metric))
}

/// Residual of `25Ω²μ² + (x + 5μ)²(Ω² − x² − 10xμ − 4b)` at `x = Re λ`.
pub fn growth_rate_residual(prof: &MaclaurinProfile, mu: f64, re_lambda: f64) -> f64 {
    let x = re_lambda;
    25.0 * prof.omega2 * mu * mu + (x + 5.0 * mu).powi(2) * (prof.omega2 - x * x - 10.0 * x * mu - 4.0 * prof.b)
}

/// Smallest eccentricity in `(0.7, 0.999)` beyond which the viscous
/// spheroid has a growing mode. With `mu = 0` this is the inviscid onset.
pub fn viscous_onset(mu: f64) -> Result<f64> {
    nonnegative("mu", mu)?;
    let variant = if mu > 0.0 { MaclaurinVariant::Viscous } else { MaclaurinVariant::Inviscid };
    let (lo, hi) = (0.7, 0.999);
    let family = |e: f64| build_maclaurin(&MaclaurinParams { mu, ..MaclaurinParams::new(e) }, variant);
    match load_onset(family, (lo, hi), 60, 1e-11) {
        Ok(found) => Ok(found.onset),
        Err(Error::NoOnsetFound) => Err(Error::BracketFailure { lo, hi }),
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::msystem::{spectrum, system_abscissa};
    use crate::tol;

    #[test]
    fn series_matches_closed_form() {
        for e in [0.15, 0.2, 0.25] {
            let e2: f64 = e * e;
            let s = (1.0 - e2).sqrt();
            let om = 2.0 * (3.0 - 2.0 * e2) * e.asin() * s / (e2 * e) - 6.0 * (1.0 - e2) / e2;
            let b = s / (4.0 * e.powi(5)) * (e * (3.0 - 2.0 * e2) * s + (4.0 * e2 - 3.0) * e.asin());
            assert!((series(&OMEGA2_SERIES, e2) - om).abs() < 1e-12, "{e}");
            assert!((series(&B_SERIES, e2) - b).abs() < 1e-12, "{e}");
        }
        let p = maclaurin_profile(1e-4).unwrap();
        assert!(p.omega2 < 1e-8 && p.omega2 > 0.0);
    }

    #[test]
    fn criticals() {
        let c = maclaurin_criticals().unwrap();
        assert!((c.e_ml - 0.8127).abs() < 1e-3);
        assert!((c.e_riemann - 0.9529).abs() < 1e-3);
        assert!((c.e_riemann - c.e_riemann_sine).abs() < 1e-8);
        let p = maclaurin_profile(0.8127).unwrap();
        assert!((4.0 * p.b - 2.0 * p.omega2).abs() < 1e-3 * 2.0 * p.omega2);
    }

    #[test]
    fn inviscid_spectrum_matches_closed_form() {
        for e in [0.5, 0.9, 0.97] {
            let sys = build_maclaurin(&MaclaurinParams::new(e), MaclaurinVariant::Inviscid).unwrap();
            assert!(!sys.g.is_zero() && !sys.d.is_zero());
            let s = spectrum(&sys, tol::EIG).unwrap();
            for z in maclaurin_inviscid_eigenvalues(e).unwrap() {
                let best = s.iter().map(|x| (x.value - z).norm()).fold(f64::INFINITY, f64::min);
                assert!(best < 1e-9, "e={e} z={z} best={best}");
            }
        }
    }

    #[test]
    fn viscosity_destabilizes_window() {
        let p = MaclaurinParams { mu: 0.01, ..MaclaurinParams::new(0.9) };
        assert!(system_abscissa(&build_maclaurin(&p, MaclaurinVariant::Viscous).unwrap()).unwrap() > 0.0);
        let on = viscous_onset(0.01).unwrap();
        assert!((on - 0.8127).abs() < 1e-3);
    }

    #[test]
    fn radiative_needs_coefficients() {
        let p = MaclaurinParams { delta: 0.05, ..MaclaurinParams::new(0.9) };
        assert_eq!(build_maclaurin(&p, MaclaurinVariant::Radiative), Err(Error::MissingRadiativeCoefficients));
        let p = MaclaurinParams { q1: Some(RadCoeff::Const(0.1)), q2: Some(RadCoeff::Const(0.2)), ..p };
        let s = build_maclaurin(&p, MaclaurinVariant::Radiative).unwrap();
        let prof = maclaurin_profile(0.9).unwrap();
        assert!((s.omega() + 2.5 * prof.omega()).abs() < 1e-12);
        // N carries the antisymmetric part of δ[[2q1, 2q2], [−q2/2, 2q1]]
        assert!((s.nu() - 0.05 * 0.5 * (0.4 + 0.1)).abs() < 1e-15);
    }

    #[test]
    fn table_parsing() {
        let t = Table1D::parse("# e q\n0.5, 1.0\n0.7 2.0\n\n0.9 4.0\n").unwrap();
        assert_eq!(t.eval(0.6).unwrap(), 1.5);
        assert_eq!(t.eval(0.9).unwrap(), 4.0);
        assert!(t.eval(0.95).is_err());
        assert!(Table1D::parse("0.5 1 2\n").is_err());
        assert!(Table1D::parse("0.5 1\n0.4 2\n").is_err());
    }

    #[test]
    fn damping_ratio() {
        let p = MaclaurinParams { mu: 2.0 * OMEGA0.powi(4) / 25.0, delta: 1.0, ..MaclaurinParams::new(0.9) };
        assert!((p.damping_ratio().unwrap() - 1.0).abs() < 1e-14);
    }
}
