use super::positive;
use crate::error::{Error, Result};
use crate::msystem::MechanicalSystem;
use crate::smallalg::RMatrix;

/// Point mass near the bottom of a vessel rotating at `omega`, with
/// curvatures `k1`, `k2` and viscous friction `c1`, `c2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BrouwerParams {
    pub g: f64,
    pub k1: f64,
    pub k2: f64,
    pub omega: f64,
    pub c1: f64,
    pub c2: f64,
}

impl Default for BrouwerParams {
    fn default() -> Self {
        BrouwerParams { g: 1.0, k1: 1.0, k2: 1.0, omega: 0.0, c1: 0.0, c2: 0.0 }
    }
}

/// Rotating-frame system with `G = [[0, −2ω], [2ω, 0]]`,
/// `D = diag(c1, c2)` and `K = diag(g k1 − ω², g k2 − ω²)`.
pub fn build_brouwer(p: &BrouwerParams) -> Result<MechanicalSystem> {
    positive("g", p.g)?;
    let w = p.omega;
    MechanicalSystem::new(
        RMatrix::identity(2),
        RMatrix::diag(&[p.c1, p.c2]),
        RMatrix::from_rows(&[&[0.0, -2.0 * w], &[2.0 * w, 0.0]])?,
        RMatrix::diag(&[p.g * p.k1 - w * w, p.g * p.k2 - w * w]),
        RMatrix::zeros(2),
    )
    .map(|s| s.with_labels(&["x", "y"]))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BrouwerCase {
    /// Both curvatures positive.
    SingleWell,
    /// Saddle with `k1 ≥ −k2`.
    WideSaddle,
    /// Saddle with `k1 < −k2` and `3k1 + k2 > 0`.
    NarrowSaddle,
    /// Saddle with `3k1 + k2 ≤ 0`.
    SteepSaddle,
    /// No positive curvature.
    Hill,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BrouwerVerdict {
    pub stable: bool,
    pub case: BrouwerCase,
    /// Stability window in `ω²`, when one exists.
    pub window: Option<(f64, f64)>,
}

/// Undamped stability from the case list (curvatures are ordered so that
/// `k1 ≥ k2`). Stable means Lyapunov stable; the spectrum is then purely
/// imaginary.
pub fn brouwer_undamped_verdict(p: &BrouwerParams) -> Result<BrouwerVerdict> {
    positive("g", p.g)?;
    if p.c1 != 0.0 || p.c2 != 0.0 {
        return Err(Error::InvalidParameter("case list applies to c1 = c2 = 0".into()));
    }
    let (k1, k2) = if p.k1 >= p.k2 { (p.k1, p.k2) } else { (p.k2, p.k1) };
    let (g, w2) = (p.g, p.omega * p.omega);
    let v = if k2 > 0.0 {
        BrouwerVerdict {
            stable: w2 < g * k2 || w2 > g * k1,
            case: BrouwerCase::SingleWell,
            window: None,
        }
    } else if k1 > 0.0 && k1 >= -k2 {
        BrouwerVerdict {
            stable: w2 > g * k1,
            case: BrouwerCase::WideSaddle,
            window: Some((g * k1, f64::INFINITY)),
        }
    } else if k1 > 0.0 && 3.0 * k1 + k2 > 0.0 {
        let hi = -g / 8.0 * (k1 - k2).powi(2) / (k1 + k2);
        BrouwerVerdict {
            stable: g * k1 < w2 && w2 < hi,
            case: BrouwerCase::NarrowSaddle,
            window: Some((g * k1, hi)),
        }
    } else if k1 > 0.0 {
        BrouwerVerdict { stable: false, case: BrouwerCase::SteepSaddle, window: None }
    } else {
        BrouwerVerdict { stable: false, case: BrouwerCase::Hill, window: None }
    };
    Ok(v)
}

/// Parameters of the restricted three-body problem near `L4` in the vessel
/// form, together with the Gascheau discriminant `1 − 27μ(1−μ)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LagrangePoint {
    pub params: BrouwerParams,
    pub gascheau: f64,
}

pub fn lagrange_point_params(mass_ratio: f64) -> Result<LagrangePoint> {
    let mu = mass_ratio;
    if !(0.0..=1.0).contains(&mu) {
        return Err(Error::InvalidParameter(format!("mass ratio must lie in [0, 1], got {mu}")));
    }
    let s = (1.0 - 3.0 * mu * (1.0 - mu)).sqrt();
    Ok(LagrangePoint {
        params: BrouwerParams { g: 1.0, k1: -0.5 + 1.5 * s, k2: -0.5 - 1.5 * s, omega: 1.0, c1: 0.0, c2: 0.0 },
        gascheau: 1.0 - 27.0 * mu * (1.0 - mu),
    })
}

/// Mass ratio where the Gascheau discriminant vanishes.
pub fn gascheau_mass_ratio() -> f64 {
    0.5 * (1.0 - (23.0f64 / 27.0).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::msystem::char_quartic;

    #[test]
    fn quartic_coefficients() {
        let p = BrouwerParams { g: 2.0, k1: 1.5, k2: -0.5, omega: 0.7, c1: 0.3, c2: 0.2 };
        let q = char_quartic(&build_brouwer(&p).unwrap()).unwrap();
        let (g, w2) = (p.g, p.omega * p.omega);
        assert!((q.a1 - 0.5).abs() < 1e-15);
        assert!((q.a2 - (g * (p.k1 + p.k2) + 2.0 * w2 + p.c1 * p.c2)).abs() < 1e-14);
        assert!((q.a3 - (p.c1 * (g * p.k2 - w2) + p.c2 * (g * p.k1 - w2))).abs() < 1e-14);
        assert!((q.a4 - (g * p.k1 - w2) * (g * p.k2 - w2)).abs() < 1e-14);
    }

    #[test]
    fn saddle_window() {
        let v = brouwer_undamped_verdict(&BrouwerParams { k1: 1.0, k2: -2.0, omega: 1.05, ..Default::default() }).unwrap();
        assert_eq!(v.case, BrouwerCase::NarrowSaddle);
        assert_eq!(v.window, Some((1.0, 9.0 / 8.0)));
        assert!(v.stable);
        let v = brouwer_undamped_verdict(&BrouwerParams { k1: 1.0, k2: -4.0, omega: 1.05, ..Default::default() }).unwrap();
        assert_eq!(v.case, BrouwerCase::SteepSaddle);
        assert!(!v.stable);
        let v = brouwer_undamped_verdict(&BrouwerParams { k1: -1.0, k2: -1.0, omega: 3.0, ..Default::default() }).unwrap();
        assert!(!v.stable);
    }

    #[test]
    fn lagrange() {
        let l = lagrange_point_params(0.0).unwrap();
        assert_eq!((l.params.k1, l.params.k2, l.gascheau), (1.0, -2.0, 1.0));
        let l = lagrange_point_params(0.2).unwrap();
        assert!((l.params.k1 + l.params.k2 + 1.0).abs() < 1e-15);
        assert!(lagrange_point_params(0.5).unwrap().gascheau < 0.0);
        let mu = gascheau_mass_ratio();
        assert!((mu - 0.038520896504551).abs() < 1e-12);
        assert!(lagrange_point_params(mu).unwrap().gascheau.abs() < 1e-14);
    }
}
