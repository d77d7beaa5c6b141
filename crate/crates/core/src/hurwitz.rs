//! Stability of real quartics `λ⁴ + a1 λ³ + a2 λ² + a3 λ + a4` from sign
//! conditions on the coefficients, with the asymptotic and marginal cases
//! separated.
//!
//! Condition A (all `a_i` positive except possibly `a4 = 0`, and `H ≤ 0`)
//! covers the asymptotically stable interior and its boundary; condition B
//! (`a1 = a3 = 0`, `a2 > 2√a4`) is the purely gyroscopic case.

use std::fmt;

use crate::error::{Error, Result};
use crate::msystem::QuarticPoly;
use crate::smallalg::{max_real, poly_roots, Root};
use crate::tol;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StabilityClass {
    AsymptoticallyStable,
    MarginallyStable,
    Unstable,
}

impl fmt::Display for StabilityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StabilityClass::AsymptoticallyStable => "asymptotically-stable",
            StabilityClass::MarginallyStable => "marginally-stable",
            StabilityClass::Unstable => "unstable",
        })
    }
}

/// Which part of the boundary of condition A a marginal quartic lies on.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BoundarySubcase {
    /// `a4 = 0`, `H < 0`: a simple zero root, three roots in the left half-plane.
    ZeroRoot,
    /// `H = 0`, `a4 > 0`: a simple imaginary pair `±iμ`.
    ImaginaryPair { mu: f64 },
    /// `a4 = 0` and `H = 0` together: zero root and `±iμ`. Both boundary
    /// surfaces meet here; this subcase is reported rather than either one alone.
    ZeroRootAndImaginaryPair { mu: f64 },
}

#[derive(Clone, Debug, PartialEq)]
pub enum Certificate {
    CondAStrict,
    CondABoundary(BoundarySubcase),
    CondB,
    ViolatedCondition(String),
    /// An imaginary-axis root of multiplicity > 1 at `±iμ`; secular growth.
    ImaginaryPairAt(f64),
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Certificate::CondAStrict => write!(f, "condition A (strict)"),
            Certificate::CondABoundary(BoundarySubcase::ZeroRoot) => {
                write!(f, "condition A boundary: a4 = 0, H < 0")
            }
            Certificate::CondABoundary(BoundarySubcase::ImaginaryPair { mu }) => {
                write!(f, "condition A boundary: H = 0, pair at ±i{mu}")
            }
            Certificate::CondABoundary(BoundarySubcase::ZeroRootAndImaginaryPair { mu }) => write!(
                f,
                "condition A boundary: a4 = 0 and H = 0 (both subcases, ambiguous), pair at ±i{mu}"
            ),
            Certificate::CondB => write!(f, "condition B"),
            Certificate::ViolatedCondition(c) => write!(f, "violated: {c}"),
            Certificate::ImaginaryPairAt(mu) => write!(f, "repeated imaginary root at ±i{mu}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StabilityVerdict {
    pub class: StabilityClass,
    pub certificate: Certificate,
    pub abscissa: f64,
}

/// `H = a1² a4 + a3² − a1 a2 a3`.
pub fn hurwitz_h(q: &QuarticPoly) -> f64 {
    q.a1 * q.a1 * q.a4 + q.a3 * q.a3 - q.a1 * q.a2 * q.a3
}

fn violated(s: &str) -> Certificate {
    Certificate::ViolatedCondition(s.to_string())
}

/// Roots of multiplicity > 1 lying on the imaginary axis (within `tol`).
fn repeated_imaginary(roots: &[Root], tol: f64) -> Option<f64> {
    roots
        .iter()
        .find(|r| r.multiplicity > 1 && r.value.re.abs() <= tol * r.value.norm().max(1.0))
        .map(|r| r.value.im.abs())
}

/// Classify a quartic. Values within `tol` of zero count as zero.
pub fn classify(q: &QuarticPoly, tol: f64) -> Result<StabilityVerdict> {
    let roots = poly_roots(&q.to_poly(), tol::EIG)?;
    let abscissa = max_real(&roots);
    let zero = |x: f64| x.abs() <= tol;
    let pos = |x: f64| x > tol;
    let h = hurwitz_h(q);
    let QuarticPoly { a1, a2, a3, a4 } = *q;

    let (class, certificate) = if pos(a1) && pos(a3) {
        if !pos(a2) {
            (StabilityClass::Unstable, violated("a2 > 0"))
        } else if a4 < -tol {
            (StabilityClass::Unstable, violated("a4 >= 0"))
        } else if h < -tol && pos(a4) {
            (StabilityClass::AsymptoticallyStable, Certificate::CondAStrict)
        } else if h > tol {
            (StabilityClass::Unstable, violated("a2 >= (a1^2 a4 + a3^2)/(a1 a3)"))
        } else {
            let mu = (a3 / a1).sqrt();
            let sub = match (zero(a4), zero(h)) {
                (true, true) => BoundarySubcase::ZeroRootAndImaginaryPair { mu },
                (true, false) => BoundarySubcase::ZeroRoot,
                _ => BoundarySubcase::ImaginaryPair { mu },
            };
            (StabilityClass::MarginallyStable, Certificate::CondABoundary(sub))
        }
    } else if zero(a1) && zero(a3) {
        if !pos(a2) {
            (StabilityClass::Unstable, violated("a2 > 0"))
        } else if !pos(a4) {
            (StabilityClass::Unstable, violated("a4 > 0"))
        } else {
            let gap = a2 - 2.0 * a4.sqrt();
            if gap > tol {
                (StabilityClass::MarginallyStable, Certificate::CondB)
            } else if gap >= -tol {
                (StabilityClass::Unstable, Certificate::ImaginaryPairAt(a4.sqrt().sqrt()))
            } else {
                (StabilityClass::Unstable, violated("a2 > 2 sqrt(a4)"))
            }
        }
    } else if !pos(a1) && !zero(a1) {
        (StabilityClass::Unstable, violated("a1 > 0"))
    } else if zero(a1) {
        (StabilityClass::Unstable, violated("a1 > 0 or a3 = 0"))
    } else {
        (StabilityClass::Unstable, violated("a3 > 0"))
    };

    // a marginal verdict with a repeated root on the axis is secular growth
    if class == StabilityClass::MarginallyStable {
        if let Some(mu) = repeated_imaginary(&roots, tol) {
            return Ok(StabilityVerdict {
                class: StabilityClass::Unstable,
                certificate: Certificate::ImaginaryPairAt(mu),
                abscissa,
            });
        }
    }
    Ok(StabilityVerdict { class, certificate, abscissa })
}

/// Root-based verdict used as an independent check of [`classify`].
pub fn classify_by_roots(q: &QuarticPoly, tol: f64) -> Result<StabilityClass> {
    let roots = poly_roots(&q.to_poly(), tol::EIG)?;
    let abscissa = max_real(&roots);
    Ok(if abscissa < -tol {
        StabilityClass::AsymptoticallyStable
    } else if abscissa > tol || roots.iter().any(|r| r.value.re.abs() <= tol && r.multiplicity > 1) {
        StabilityClass::Unstable
    } else {
        StabilityClass::MarginallyStable
    })
}

/// Rescale so that `a4 = 1`: `c = a4^(1/4)`, `b_i = a_i / c^i`. Returns the
/// normalized quartic and `c`.
pub fn scale_normalize(q: &QuarticPoly) -> Result<(QuarticPoly, f64)> {
    if !(q.a4 > 0.0) {
        return Err(Error::NonPositiveA4);
    }
    let c = q.a4.powf(0.25);
    Ok((QuarticPoly::new(q.a1 / c, q.a2 / (c * c), q.a3 / (c * c * c), 1.0), c))
}

/// A point of the stability boundary surface for `a4 = 1`, in `(a1, a3, a2)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SurfacePoint {
    pub a1: f64,
    pub a3: f64,
    pub a2: f64,
    /// Parameter `m = a3 / a1` of the ruling through the point.
    pub m: f64,
    /// On the segment `a1 = a3 = 0`, `a2 ≥ 2` (gyroscopic stability).
    pub on_double_line: bool,
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n <= 1 {
        return vec![lo];
    }
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

/// Sample the surface `(a1, m + 1/m, m a1)` over a grid of `m > 0` and `a1`,
/// plus points on the double line `a1 = a3 = 0`, `a2 ≥ 2` marked separately.
pub fn surface_v_sample(
    m_range: (f64, f64),
    a1_range: (f64, f64),
    counts: (usize, usize),
) -> Result<Vec<SurfacePoint>> {
    if !(m_range.0 > 0.0 && m_range.1 >= m_range.0) {
        return Err(Error::InvalidParameter("m range must be positive and ordered".into()));
    }
    let mut out = Vec::with_capacity(counts.0 * (counts.1 + 1));
    for &m in &linspace(m_range.0, m_range.1, counts.0) {
        for &a1 in &linspace(a1_range.0, a1_range.1, counts.1) {
            out.push(SurfacePoint { a1, a3: m * a1, a2: m + 1.0 / m, m, on_double_line: a1 == 0.0 });
        }
    }
    for &m in &linspace(m_range.0, m_range.1, counts.0) {
        out.push(SurfacePoint { a1: 0.0, a3: 0.0, a2: m + 1.0 / m, m, on_double_line: true });
    }
    Ok(out)
}

/// Tangent cone to the boundary at the double line: `a1 = a3 > 0`, `a2 > 2`.
pub fn tangent_cone_contains(a1: f64, a3: f64, a2: f64, tol: f64) -> bool {
    (a1 - a3).abs() <= tol * a1.abs().max(1.0) && a1 > 0.0 && a2 > 2.0
}

/// Thresholds on `a2` with damping `a1 = εb1`, `a3 = εb3` (ε ≠ 0) and without.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DampingDiscontinuity {
    /// `(b1² a4 + b3²)/(b1 b3)`, the limit of condition A.
    pub g1: f64,
    /// `2√a4`, condition B.
    pub g2: f64,
    /// `(b1√a4 − b3)²/(b1 b3)`.
    pub gap: f64,
}

pub fn damping_discontinuity(b1: f64, b3: f64, a4: f64) -> Result<DampingDiscontinuity> {
    if !(b1 * b3 > 0.0) {
        return Err(Error::InvalidParameter("need b1 b3 > 0".into()));
    }
    if !(a4 > 0.0) {
        return Err(Error::NonPositiveA4);
    }
    let r = a4.sqrt();
    Ok(DampingDiscontinuity {
        g1: (b1 * b1 * a4 + b3 * b3) / (b1 * b3),
        g2: 2.0 * r,
        gap: (b1 * r - b3).powi(2) / (b1 * b3),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: [f64; 4]) -> QuarticPoly {
        QuarticPoly::new(a[0], a[1], a[2], a[3])
    }

    #[test]
    fn h_of_binomial_quartic() {
        assert_eq!(hurwitz_h(&q([4.0, 6.0, 4.0, 1.0])), -64.0);
    }

    #[test]
    fn examples() {
        let v = classify(&q([1.0, 3.0, 1.0, 6.0]), tol::COEFF).unwrap();
        assert_eq!(v.class, StabilityClass::Unstable);
        let v = classify(&q([4.0, 6.0, 4.0, 1.0]), tol::COEFF).unwrap();
        assert_eq!(v.class, StabilityClass::AsymptoticallyStable);
        assert_eq!(v.certificate, Certificate::CondAStrict);
        assert!((v.abscissa + 1.0).abs() < 1e-12);
        let v = classify(&q([0.0, 3.0, 0.0, 1.0]), tol::COEFF).unwrap();
        assert_eq!(v.class, StabilityClass::MarginallyStable);
        assert_eq!(v.certificate, Certificate::CondB);
        let v = classify(&q([0.0, 2.0, 0.0, 1.0]), tol::COEFF).unwrap();
        assert_eq!(v.class, StabilityClass::Unstable);
        assert!(matches!(v.certificate, Certificate::ImaginaryPairAt(_)));
    }

    #[test]
    fn boundary_subcases() {
        // (λ+1)(λ+2)(λ+3) λ
        let v = classify(&q([6.0, 11.0, 6.0, 0.0]), tol::COEFF).unwrap();
        assert_eq!(v.certificate, Certificate::CondABoundary(BoundarySubcase::ZeroRoot));
        // (λ²+1)(λ²+λ+1) = λ⁴ + λ³ + 2λ² + λ + 1
        let v = classify(&q([1.0, 2.0, 1.0, 1.0]), tol::COEFF).unwrap();
        assert_eq!(v.class, StabilityClass::MarginallyStable);
        match v.certificate {
            Certificate::CondABoundary(BoundarySubcase::ImaginaryPair { mu }) => {
                assert!((mu - 1.0).abs() < 1e-12)
            }
            c => panic!("unexpected {c:?}"),
        }
        // λ(λ+1)(λ²+4) = λ⁴ + λ³ + 4λ² + 4λ
        let v = classify(&q([1.0, 4.0, 4.0, 0.0]), tol::COEFF).unwrap();
        assert!(matches!(
            v.certificate,
            Certificate::CondABoundary(BoundarySubcase::ZeroRootAndImaginaryPair { .. })
        ));
        assert!(v.certificate.to_string().contains("ambiguous"));
    }

    #[test]
    fn normalization() {
        let (b, c) = scale_normalize(&q([2.0, 3.0, 4.0, 16.0])).unwrap();
        assert_eq!(c, 2.0);
        assert_eq!(b, q([1.0, 0.75, 0.5, 1.0]));
        assert_eq!(scale_normalize(&q([1.0, 1.0, 1.0, 0.0])), Err(Error::NonPositiveA4));
    }

    #[test]
    fn surface_points_satisfy_h_zero() {
        let pts = surface_v_sample((0.2, 5.0), (0.0, 3.0), (15, 12)).unwrap();
        for p in &pts {
            let h = hurwitz_h(&QuarticPoly::new(p.a1, p.a2, p.a3, 1.0));
            assert!(h.abs() < 1e-12 * (1.0 + p.a1 * p.a1 * p.a2 * p.m));
            if p.a1 == 0.0 {
                assert!(p.on_double_line && p.a2 >= 2.0);
            }
        }
    }

    #[test]
    fn cone() {
        assert!(tangent_cone_contains(1.0, 1.0, 2.5, 1e-12));
        assert!(!tangent_cone_contains(1.0, 1.0, 2.0, 1e-12));
        assert!(!tangent_cone_contains(1.0, 1.1, 2.5, 1e-12));
    }
}
