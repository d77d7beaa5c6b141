use std::f64::consts::PI;

use num_complex::Complex64;

use super::nonnegative;
use crate::error::{Error, Result};
use crate::smallalg::{eigenvalues, RMatrix, SmallMatrix};
use crate::tol;

/// Two coupled parametrically forced oscillators (a rotating disk with an
/// oscillating suspension point).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CombResParams {
    /// Rotation parameter.
    pub omega: f64,
    /// Forcing amplitude.
    pub eps: f64,
    /// Damping, entering as `2εμ`.
    pub mu: f64,
    /// Forcing frequency.
    pub omega0: f64,
    /// Detuning of the sum resonance, `ω₀ = W + εδ₊/W` (see [`CombResParams::at_detuning`]).
    pub delta_plus: f64,
    /// Detuning of the frequency difference; the printed linear equations
    /// have no separate knob for it, so it is carried for reporting only.
    pub delta_minus: f64,
    /// Damping detuning: the `x` and `y` dampings are `μ + μ₁` and `μ + μ₂`
    /// with `μ± = μ₁ ± μ₂`.
    pub mu_plus: f64,
    pub mu_minus: f64,
}

impl CombResParams {
    /// Forcing at detuning `δ₊` from the sum resonance.
    pub fn at_detuning(omega: f64, eps: f64, mu: f64, delta_plus: f64) -> Self {
        let w = sum_frequency(omega);
        CombResParams {
            omega,
            eps,
            mu,
            omega0: w + eps * delta_plus / w,
            delta_plus,
            delta_minus: 0.0,
            mu_plus: 0.0,
            mu_minus: 0.0,
        }
    }

    fn dampings(&self) -> (f64, f64) {
        let mu1 = 0.5 * (self.mu_plus + self.mu_minus);
        let mu2 = 0.5 * (self.mu_plus - self.mu_minus);
        (self.mu + mu1, self.mu + mu2)
    }
}

/// Natural frequencies `ω₁,₂ = √(1 + Ω²) ± Ω` at zero forcing.
pub fn combres_frequencies(omega: f64) -> (f64, f64) {
    let r = (1.0 + omega * omega).sqrt();
    (r + omega, r - omega)
}

/// `W = ω₁ + ω₂ = 2√(1 + Ω²)`.
pub fn sum_frequency(omega: f64) -> f64 {
    2.0 * (1.0 + omega * omega).sqrt()
}

/// `x' = (A₀ + cos(ω₀t)·A₁) x` on the state `(x, y, ẋ, ẏ)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PeriodicSystem {
    pub a0: RMatrix,
    pub a1: RMatrix,
    pub omega0: f64,
}

impl PeriodicSystem {
    pub fn period(&self) -> f64 {
        2.0 * PI / self.omega0
    }

    pub fn matrix_at(&self, t: f64) -> RMatrix {
        &self.a0 + &self.a1.scale((self.omega0 * t).cos())
    }
}

/// The gyroscopic coupling enters as `ẍ + 2Ωẏ` and `ÿ − 2Ωẋ`.
pub fn build_combres(p: &CombResParams) -> Result<PeriodicSystem> {
    nonnegative("eps", p.eps)?;
    if !(p.omega0 > 0.0) {
        return Err(Error::InvalidParameter("forcing frequency must be positive".into()));
    }
    let (m1, m2) = p.dampings();
    let (w, e) = (p.omega, p.eps);
    let a0 = RMatrix::from_rows(&[
        &[0.0, 0.0, 1.0, 0.0],
        &[0.0, 0.0, 0.0, 1.0],
        &[-1.0, 0.0, -2.0 * e * m1, -2.0 * w],
        &[0.0, -1.0, 2.0 * w, -2.0 * e * m2],
    ])?;
    let a1 = RMatrix::from_rows(&[
        &[0.0, 0.0, 0.0, 0.0],
        &[0.0, 0.0, 0.0, 0.0],
        &[-e, 0.0, 0.0, 0.0],
        &[0.0, -e, 0.0, 0.0],
    ])?;
    Ok(PeriodicSystem { a0, a1, omega0: p.omega0 })
}

/// Half-widths in `δ₊` of the instability interval.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CombresInterval {
    pub undamped: f64,
    pub damped: f64,
    pub mu: f64,
}

impl CombresInterval {
    /// The half-width that applies at this `μ`.
    pub fn active(&self) -> f64 {
        if self.mu == 0.0 {
            self.undamped
        } else {
            self.damped
        }
    }
}

/// Undamped `|δ₊| ≤ 1`; damped `|δ₊| ≤ ω₀√(1/4 − μ²/ω₀²)`.
pub fn combres_interval(mu: f64, omega0: f64) -> Result<CombresInterval> {
    nonnegative("mu", mu)?;
    if !(omega0 > 0.0) {
        return Err(Error::InvalidParameter("forcing frequency must be positive".into()));
    }
    let r = 0.25 - (mu / omega0).powi(2);
    if r < 0.0 {
        return Err(Error::OverdampedWindowClosed);
    }
    Ok(CombresInterval { undamped: 1.0, damped: omega0 * r.sqrt(), mu })
}

/// First-order averaging of the same system: `|δ₊| ≤ W√(1/4 − 4μ²)` under
/// damping, `|δ₊| ≤ 1` without.
pub fn combres_interval_averaged(mu: f64, omega: f64) -> Result<CombresInterval> {
    nonnegative("mu", mu)?;
    let r = 0.25 - 4.0 * mu * mu;
    if r < 0.0 {
        return Err(Error::OverdampedWindowClosed);
    }
    Ok(CombresInterval { undamped: 1.0, damped: sum_frequency(omega) * r.sqrt(), mu })
}

#[derive(Clone, Debug, PartialEq)]
pub struct Monodromy {
    pub matrix: RMatrix,
    pub multipliers: Vec<Complex64>,
}

impl Monodromy {
    pub fn max_modulus(&self) -> f64 {
        self.multipliers.iter().map(|m| m.norm()).fold(0.0, f64::max)
    }

    pub fn is_unstable(&self) -> bool {
        self.max_modulus() > 1.0 + tol::FLOQUET
    }
}

type Mat4 = [[f64; 4]; 4];

fn mat_of(r: &RMatrix) -> Mat4 {
    let mut m = [[0.0; 4]; 4];
    for (i, row) in m.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            *v = r[(i, j)];
        }
    }
    m
}

fn rhs(a0: &Mat4, a1: &Mat4, c: f64, x: &Mat4) -> Mat4 {
    let mut out = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            let mut s = 0.0;
            for k in 0..4 {
                s += (a0[i][k] + c * a1[i][k]) * x[k][j];
            }
            out[i][j] = s;
        }
    }
    out
}

fn axpy(x: &Mat4, h: f64, k: &Mat4) -> Mat4 {
    let mut out = *x;
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] += h * k[i][j];
        }
    }
    out
}

/// Fundamental matrix over one period by classical RK4, and its eigenvalues.
pub fn monodromy(sys: &PeriodicSystem, steps: usize) -> Result<Monodromy> {
    if steps < 1000 {
        return Err(Error::InvalidParameter(format!("monodromy needs at least 1000 steps, got {steps}")));
    }
    if sys.a0.dim() != 4 || sys.a1.dim() != 4 {
        return Err(Error::DimensionMismatch { expected: 4, got: sys.a0.dim() });
    }
    let (a0, a1) = (mat_of(&sys.a0), mat_of(&sys.a1));
    let h = sys.period() / steps as f64;
    let mut x: Mat4 = [[0.0; 4]; 4];
    for (i, row) in x.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    let c = |t: f64| (sys.omega0 * t).cos();
    for n in 0..steps {
        let t = n as f64 * h;
        let k1 = rhs(&a0, &a1, c(t), &x);
        let k2 = rhs(&a0, &a1, c(t + 0.5 * h), &axpy(&x, 0.5 * h, &k1));
        let k3 = rhs(&a0, &a1, c(t + 0.5 * h), &axpy(&x, 0.5 * h, &k2));
        let k4 = rhs(&a0, &a1, c(t + h), &axpy(&x, h, &k3));
        for i in 0..4 {
            for j in 0..4 {
                x[i][j] += h / 6.0 * (k1[i][j] + 2.0 * k2[i][j] + 2.0 * k3[i][j] + k4[i][j]);
            }
        }
    }
    let matrix = RMatrix::new(4, x.iter().flatten().copied().collect())?;
    let multipliers = eigenvalues(&SmallMatrix::from_real(&matrix))?;
    Ok(Monodromy { matrix, multipliers })
}

/// Edges `(lo, hi)` in `δ₊` of the instability tongue containing `δ₊ = 0`,
/// from the monodromy at `ω₀ = W + εδ₊/W`.
pub fn floquet_tongue(omega: f64, eps: f64, mu: f64, steps: usize) -> Result<(f64, f64)> {
    if !(eps > 0.0) {
        return Err(Error::InvalidParameter("tongue needs eps > 0".into()));
    }
    let excess = |d: f64| -> Result<f64> {
        let sys = build_combres(&CombResParams::at_detuning(omega, eps, mu, d))?;
        Ok(monodromy(&sys, steps)?.max_modulus() - 1.0 - tol::FLOQUET)
    };
    if excess(0.0)? <= 0.0 {
        return Err(Error::NoOnsetFound);
    }
    let edge = |dir: f64| -> Result<f64> {
        let (step, limit) = (0.05, 5.0);
        let mut inside = 0.0;
        let mut outside = step;
        while excess(dir * outside)? > 0.0 {
            inside = outside;
            outside += step;
            if outside > limit {
                return Err(Error::BracketFailure { lo: 0.0, hi: dir * limit });
            }
        }
        while outside - inside > 1e-7 {
            let mid = 0.5 * (inside + outside);
            if excess(dir * mid)? > 0.0 {
                inside = mid;
            } else {
                outside = mid;
            }
        }
        Ok(dir * 0.5 * (inside + outside))
    };
    Ok((edge(-1.0)?, edge(1.0)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn autonomous_spectrum() {
        let p = CombResParams::at_detuning(0.5, 0.0, 0.0, 0.0);
        let sys = build_combres(&p).unwrap();
        let mut im: Vec<f64> = eigenvalues(&SmallMatrix::from_real(&sys.a0)).unwrap().iter().map(|z| z.im).collect();
        im.sort_by(f64::total_cmp);
        let (w1, w2) = combres_frequencies(0.5);
        let expect = [-w1, -w2, w2, w1];
        for (a, b) in im.iter().zip(expect) {
            assert!((a - b).abs() < 1e-12);
        }
        let (w1, w2) = combres_frequencies(0.0);
        assert_eq!((w1, w2), (1.0, 1.0));
    }

    #[test]
    fn multipliers_without_forcing() {
        let sys = build_combres(&CombResParams::at_detuning(0.3, 0.0, 0.0, 0.0)).unwrap();
        let m = monodromy(&sys, 2000).unwrap();
        assert!(m.multipliers.iter().all(|z| (z.norm() - 1.0).abs() < 1e-8));
        // off resonance with damping every multiplier is inside the circle
        let p = CombResParams { omega0: 1.3, ..CombResParams::at_detuning(0.3, 0.05, 0.5, 0.0) };
        let m = monodromy(&build_combres(&p).unwrap(), 2000).unwrap();
        assert!(m.max_modulus() < 1.0);
        assert!(monodromy(&sys, 10).is_err());
    }

    #[test]
    fn resonance_is_unstable() {
        let sys = build_combres(&CombResParams::at_detuning(0.3, 0.05, 0.0, 0.0)).unwrap();
        assert!(monodromy(&sys, 2000).unwrap().is_unstable());
    }

    #[test]
    fn printed_intervals() {
        let i = combres_interval(0.0, 2.5).unwrap();
        assert_eq!(i.active(), 1.0);
        let i = combres_interval(1e-9, 2.0).unwrap();
        assert!((i.active() - 1.0).abs() < 1e-12);
        assert_eq!(combres_interval(1.0, 2.0).unwrap().damped, 0.0);
        assert_eq!(combres_interval(1.1, 2.0), Err(Error::OverdampedWindowClosed));
    }
}
