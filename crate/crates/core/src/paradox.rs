//! Circulatory thresholds with and without damping, the local umbrella
//! approximation of the damped threshold, and a scanner for the limit of
//! vanishing dissipation.

use crate::error::{Error, Result};
use crate::msystem::{spectral_radius, spectrum, spectrum_abscissa, MechanicalSystem};
use crate::smallalg::RMatrix;
use crate::tol;

/// Invariants entering the threshold formulas.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FormulaTerms {
    pub tr_k: f64,
    pub tr_d: f64,
    pub tr_kd: f64,
}

impl FormulaTerms {
    /// `(2 tr(KD) − tr K tr D) / (2 tr D)`.
    pub fn mismatch(&self) -> f64 {
        (2.0 * self.tr_kd - self.tr_k * self.tr_d) / (2.0 * self.tr_d)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ParadoxReport {
    /// Threshold of the circulatory parameter without damping.
    pub nu0: f64,
    /// Threshold in the limit of vanishing damping along `direction`.
    pub nucr: f64,
    /// `ν₀² − ν_cr²`.
    pub gap: f64,
    /// Damping ray, normalized to unit trace.
    pub direction: RMatrix,
    pub formula_terms: FormulaTerms,
}

impl ParadoxReport {
    /// `ν₀ − ν_cr`.
    pub fn gap_linear(&self) -> f64 {
        self.nu0 - self.nucr
    }
}

fn check_pair(k: &RMatrix, d: &RMatrix) -> Result<()> {
    if k.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, got: k.dim() });
    }
    if d.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, got: d.dim() });
    }
    if !k.is_symmetric(tol::SYMMETRY) || !d.is_symmetric(tol::SYMMETRY) {
        return Err(Error::NotSymmetric);
    }
    if !(d.trace() > 0.0) {
        return Err(Error::InvalidParameter("damping ray needs positive trace".into()));
    }
    Ok(())
}

fn terms(k: &RMatrix, d: &RMatrix) -> FormulaTerms {
    FormulaTerms { tr_k: k.trace(), tr_d: d.trace(), tr_kd: (k * d).trace() }
}

/// `ν₀² = (tr K/2)² − det K` and
/// `ν_cr² = ν₀² − [(2 tr(KD) − tr K tr D)/(2 tr D)]²` for `M = I`, `G = 0`.
pub fn circulatory_thresholds(k: &RMatrix, dray: &RMatrix) -> Result<ParadoxReport> {
    check_pair(k, dray)?;
    let direction = dray.scale(1.0 / dray.trace());
    let t = terms(k, &direction);
    let nu0_sq = 0.25 * t.tr_k * t.tr_k - k.det();
    if nu0_sq < 0.0 {
        return Err(Error::NegativeRadicand("nu0^2"));
    }
    let x = t.mismatch();
    let gap = x * x;
    let nucr_sq = nu0_sq - gap;
    if nucr_sq < 0.0 {
        return Err(Error::NegativeRadicand("nucr^2"));
    }
    Ok(ParadoxReport { nu0: nu0_sq.sqrt(), nucr: nucr_sq.sqrt(), gap, direction, formula_terms: t })
}

/// `ν_cr ≈ ν₀ − X(δ)²/(2ν₀)` with `D(δ) = δ₁D₁ + δ₂D₂`; homogeneous of
/// degree zero in δ, so its level sets are rays through the origin.
#[derive(Clone, Debug, PartialEq)]
pub struct UmbrellaApprox {
    pub k: RMatrix,
    pub d1: RMatrix,
    pub d2: RMatrix,
    pub nu0: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UmbrellaSample {
    pub delta1: f64,
    pub delta2: f64,
    pub nucr: f64,
}

impl UmbrellaApprox {
    pub fn new(k: &RMatrix, d1: &RMatrix, d2: &RMatrix) -> Result<Self> {
        for d in [d1, d2] {
            if d.dim() != 2 {
                return Err(Error::DimensionMismatch { expected: 2, got: d.dim() });
            }
            if !d.is_symmetric(tol::SYMMETRY) {
                return Err(Error::NotSymmetric);
            }
        }
        if k.dim() != 2 {
            return Err(Error::DimensionMismatch { expected: 2, got: k.dim() });
        }
        if !k.is_symmetric(tol::SYMMETRY) {
            return Err(Error::NotSymmetric);
        }
        let nu0_sq = 0.25 * k.trace() * k.trace() - k.det();
        if !(nu0_sq > 0.0) {
            return Err(Error::NegativeRadicand("nu0^2"));
        }
        Ok(UmbrellaApprox { k: k.clone(), d1: d1.clone(), d2: d2.clone(), nu0: nu0_sq.sqrt() })
    }

    fn mismatch(&self, delta1: f64, delta2: f64) -> Result<f64> {
        let d = &self.d1.scale(delta1) + &self.d2.scale(delta2);
        if !(d.trace() > 0.0) {
            return Err(Error::InvalidParameter("D(delta) needs positive trace".into()));
        }
        Ok(terms(&self.k, &d).mismatch())
    }

    /// Approximate damped threshold.
    pub fn eval(&self, delta1: f64, delta2: f64) -> Result<f64> {
        let x = self.mismatch(delta1, delta2)?;
        Ok(self.nu0 - x * x / (2.0 * self.nu0))
    }

    /// Exact damped threshold along the same ray.
    pub fn exact(&self, delta1: f64, delta2: f64) -> Result<f64> {
        let x = self.mismatch(delta1, delta2)?;
        let sq = self.nu0 * self.nu0 - x * x;
        if sq < 0.0 {
            return Err(Error::NegativeRadicand("nucr^2"));
        }
        Ok(sq.sqrt())
    }

    /// Samples on `rays` directions in the quarter plane, at each radius.
    pub fn ray_samples(&self, rays: usize, radii: &[f64]) -> Result<Vec<UmbrellaSample>> {
        let mut out = Vec::with_capacity(rays * radii.len());
        for i in 0..rays {
            let theta = std::f64::consts::FRAC_PI_2 * (i as f64 + 0.5) / rays as f64;
            for &r in radii {
                let (delta1, delta2) = (r * theta.cos(), r * theta.sin());
                out.push(UmbrellaSample { delta1, delta2, nucr: self.eval(delta1, delta2)? });
            }
        }
        Ok(out)
    }
}

/// `abscissa − ONSET·max(1, spectral radius)`: positive iff some mode grows.
pub fn growth_margin(sys: &MechanicalSystem) -> Result<f64> {
    let s = spectrum(sys, tol::EIG)?;
    Ok(spectrum_abscissa(&s) - tol::ONSET * spectral_radius(&s).max(1.0))
}

#[derive(Clone, Debug, PartialEq)]
pub struct OnsetEntry {
    pub eps: f64,
    /// First stable-to-unstable crossing, bisected.
    pub onset: f64,
    /// Every crossing bracket midpoint found on the scan grid.
    pub crossings: Vec<f64>,
    pub multiple_crossings: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct VanishingScan {
    pub entries: Vec<OnsetEntry>,
    /// Onset at the smallest ε.
    pub raw_limit: f64,
    /// Extrapolation of the last three onsets to ε = 0.
    pub extrapolated: f64,
    pub warnings: Vec<String>,
}

/// Limit of `v(ε)` from three samples, assuming `v = v0 + C εᵖ`.
/// Falls back to the last value when the differences do not contract.
pub fn richardson(eps: [f64; 3], v: [f64; 3]) -> f64 {
    let d1 = v[1] - v[0];
    let d2 = v[2] - v[1];
    let scale = v.iter().fold(0.0f64, |m, x| m.max(x.abs())).max(1.0);
    if d2.abs() <= 1e-14 * scale || d1 == 0.0 || d1.signum() != d2.signum() || d2.abs() >= d1.abs() {
        return v[2];
    }
    let r1 = eps[1] / eps[0];
    let r2 = eps[2] / eps[1];
    if (r1 - r2).abs() <= 1e-9 * r1.abs() {
        // geometric sequence: Aitken's delta-squared
        return v[2] - d2 * d2 / (d2 - d1);
    }
    // solve d1/d2 = (e0^p − e1^p)/(e1^p − e2^p) for p by bisection
    let target = d1 / d2;
    let f = |p: f64| (eps[0].powf(p) - eps[1].powf(p)) / (eps[1].powf(p) - eps[2].powf(p)) - target;
    let (mut lo, mut hi) = (0.05, 20.0);
    if f(lo).signum() == f(hi).signum() {
        return v[2];
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid).signum() == f(lo).signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let p = 0.5 * (lo + hi);
    let c = d2 / (eps[2].powf(p) - eps[1].powf(p));
    v[2] - c * eps[2].powf(p)
}

fn bisect<F>(f: &F, mut lo: f64, mut hi: f64, rel_tol: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let tol = rel_tol * lo.abs().max(hi.abs()).max(1.0);
    let mut it = 0;
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if f(mid)? > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
        it += 1;
        if it > 200 {
            return Err(Error::NonConvergence { iterations: it });
        }
    }
    Ok(0.5 * (lo + hi))
}

/// First stable-to-unstable crossing of a one-parameter family.
#[derive(Clone, Debug, PartialEq)]
pub struct LoadOnset {
    pub onset: f64,
    /// Midpoints of every grid bracket where the growth margin changes sign.
    pub crossings: Vec<f64>,
}

/// Scan `range` on `grid_points` points for a change of sign of
/// [`growth_margin`] and bisect the first stable-to-unstable crossing to
/// `rel_tol·max(1, |load|)`.
pub fn load_onset<F>(family: F, range: (f64, f64), grid_points: usize, rel_tol: f64) -> Result<LoadOnset>
where
    F: Fn(f64) -> Result<MechanicalSystem>,
{
    let (lo, hi) = range;
    if !(hi > lo) || grid_points < 2 {
        return Err(Error::InvalidParameter("need lo < hi and at least two grid points".into()));
    }
    let margin = |load: f64| growth_margin(&family(load)?);
    let loads: Vec<f64> = (0..grid_points).map(|i| lo + (hi - lo) * i as f64 / (grid_points - 1) as f64).collect();
    let values = loads.iter().map(|&l| margin(l)).collect::<Result<Vec<_>>>()?;
    let mut brackets = Vec::new();
    for i in 1..loads.len() {
        if (values[i - 1] > 0.0) != (values[i] > 0.0) {
            brackets.push((loads[i - 1], loads[i], values[i] > 0.0));
        }
    }
    let Some(&(a, b, _)) = brackets.iter().find(|br| br.2) else {
        return Err(Error::NoOnsetFound);
    };
    Ok(LoadOnset {
        onset: bisect(&margin, a, b, rel_tol)?,
        crossings: brackets.iter().map(|(a, b, _)| 0.5 * (a + b)).collect(),
    })
}

/// Onset of instability in the load parameter for each damping scale.
///
/// `family(ε, load)` builds the system; each ε is handled by [`load_onset`]
/// with bisection to `1e-8` relative.
pub fn vanishing_damping_scan<F>(
    family: F,
    load_range: (f64, f64),
    grid_points: usize,
    eps_list: &[f64],
) -> Result<VanishingScan>
where
    F: Fn(f64, f64) -> Result<MechanicalSystem>,
{
    if eps_list.is_empty() || eps_list.iter().any(|e| !(*e >= 0.0)) {
        return Err(Error::InvalidParameter("eps values must be nonnegative".into()));
    }
    if eps_list.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::InvalidParameter("eps values must be strictly decreasing".into()));
    }
    let mut entries = Vec::with_capacity(eps_list.len());
    let mut warnings = Vec::new();
    for &eps in eps_list {
        let found = load_onset(|load| family(eps, load), load_range, grid_points, 1e-8)?;
        let multiple = found.crossings.len() > 1;
        if multiple {
            warnings.push(format!("eps = {eps:e}: {} sign changes in the load range", found.crossings.len()));
        }
        entries.push(OnsetEntry {
            eps,
            onset: found.onset,
            crossings: found.crossings,
            multiple_crossings: multiple,
        });
    }
    let raw_limit = entries.last().map(|e| e.onset).unwrap_or(f64::NAN);
    let extrapolated = if entries.len() >= 3 && entries.iter().all(|e| e.eps > 0.0) {
        let t = &entries[entries.len() - 3..];
        richardson([t[0].eps, t[1].eps, t[2].eps], [t[0].onset, t[1].onset, t[2].onset])
    } else {
        raw_limit
    };
    Ok(VanishingScan { entries, raw_limit, extrapolated, warnings })
}
