//! Indefinite metrics, Krein signatures and tracking of Krein collisions
//! along a one-parameter family of self-adjoint operators.
//!
//! For `B` self-adjoint with respect to a Hermitian Gram matrix `G`, a real
//! simple eigenvalue carries the sign of `ūᵀ G u`. Two real eigenvalues can
//! leave the real axis only after meeting with opposite signs.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::msystem::MechanicalSystem;
use crate::smallalg::{eigenvalues, matrix_eigen, normalized, vec_dot, SmallMatrix};
use crate::tol;

#[derive(Clone, Debug, PartialEq)]
pub struct IndefiniteMetric {
    gram: SmallMatrix,
    signature: (usize, usize, usize),
}

impl IndefiniteMetric {
    /// Validates Hermiticity and computes the inertia `(n₊, n₋, n₀)`.
    pub fn new(gram: SmallMatrix) -> Result<Self> {
        if !gram.is_hermitian(tol::SYMMETRY) {
            return Err(Error::NotHermitian);
        }
        let h = &gram + &gram.conj_transpose();
        let h = h.scale(Complex64::new(0.5, 0.0));
        let scale = h.norm_fro();
        let vals = eigenvalues(&h)?;
        let cut = 100.0 * tol::EIG * scale.max(f64::MIN_POSITIVE);
        let pos = vals.iter().filter(|v| v.re > cut).count();
        let neg = vals.iter().filter(|v| v.re < -cut).count();
        Ok(IndefiniteMetric { signature: (pos, neg, vals.len() - pos - neg), gram: h })
    }

    pub fn from_diag(d: &[f64]) -> Result<Self> {
        let mut g = SmallMatrix::zeros(d.len());
        for (i, &x) in d.iter().enumerate() {
            g[(i, i)] = Complex64::new(x, 0.0);
        }
        Self::new(g)
    }

    pub fn gram(&self) -> &SmallMatrix {
        &self.gram
    }

    pub fn signature(&self) -> (usize, usize, usize) {
        self.signature
    }

    pub fn dim(&self) -> usize {
        self.gram.dim()
    }

    pub fn is_definite(&self) -> bool {
        let (p, n, z) = self.signature;
        z == 0 && (p == 0 || n == 0)
    }

    /// `uᴴ G v`.
    pub fn form(&self, u: &[Complex64], v: &[Complex64]) -> Complex64 {
        vec_dot(u, &self.gram.mul_vec(v))
    }
}

/// Number of negative squares `n₋` of the metric.
pub fn negative_square_count(metric: &IndefiniteMetric) -> usize {
    metric.signature.1
}

fn is_nonreal(lambda: Complex64) -> bool {
    lambda.im.abs() > tol::RANK * lambda.norm().max(1.0)
}

/// Krein sign of an eigenpair: `sign(ūᵀGu)` for real `λ`, and 0 when `λ` is
/// non-real or the form is below `100·tol·‖G‖` (neutral or defective vectors).
pub fn krein_sign(metric: &IndefiniteMetric, u: &[Complex64], lambda: Complex64, tol: f64) -> Result<i8> {
    if u.len() != metric.dim() {
        return Err(Error::DimensionMismatch { expected: metric.dim(), got: u.len() });
    }
    if is_nonreal(lambda) {
        return Ok(0);
    }
    let u = normalized(u);
    let q = metric.form(&u, &u).re;
    let cut = 100.0 * tol * metric.gram.norm_fro();
    Ok(if q > cut {
        1
    } else if q < -cut {
        -1
    } else {
        0
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct KreinEntry {
    pub value: Complex64,
    pub alg_mult: usize,
    pub geom_mult: usize,
    pub sign: i8,
}

/// Eigenvalues of `b` with Krein signs relative to `metric`. Real parts of
/// eigenvalues within the rank threshold of the axis are snapped to it.
pub fn krein_spectrum(b: &SmallMatrix, metric: &IndefiniteMetric, tol: f64) -> Result<Vec<KreinEntry>> {
    if b.dim() != metric.dim() {
        return Err(Error::DimensionMismatch { expected: metric.dim(), got: b.dim() });
    }
    let cut = 100.0 * tol * metric.gram.norm_fro();
    let mut out = Vec::new();
    for e in matrix_eigen(b, tol)? {
        let mut value = e.value;
        if !is_nonreal(value) {
            value.im = 0.0;
        }
        let sign = if is_nonreal(value) || e.is_defective() {
            0
        } else if e.vectors.len() == 1 {
            krein_sign(metric, &e.vectors[0], value, tol)?
        } else {
            // semisimple multiple eigenvalue: sign of the restricted form if definite
            let g = e.vectors.len();
            let mut w = SmallMatrix::zeros(g);
            for i in 0..g {
                for j in 0..g {
                    w[(i, j)] = metric.form(&e.vectors[i], &e.vectors[j]);
                }
            }
            let vals = eigenvalues(&w)?;
            if vals.iter().all(|v| v.re > cut) {
                1
            } else if vals.iter().all(|v| v.re < -cut) {
                -1
            } else {
                0
            }
        };
        out.push(KreinEntry { value, alg_mult: e.algebraic, geom_mult: e.geometric, sign });
    }
    out.sort_by(|a, b| a.value.re.total_cmp(&b.value.re).then(a.value.im.total_cmp(&b.value.im)));
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
pub struct KreinPoint {
    pub param: f64,
    pub entries: Vec<KreinEntry>,
}

impl KreinPoint {
    /// Number of non-real eigenvalues counted with multiplicity.
    pub fn nonreal_count(&self) -> usize {
        self.entries.iter().filter(|e| e.value.im != 0.0).map(|e| e.alg_mult).sum()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct KreinPath {
    pub param_name: String,
    pub points: Vec<KreinPoint>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CollisionKind {
    /// Two real eigenvalues meet and leave the real axis as a complex pair.
    RealToComplex,
    /// A complex pair returns to the real axis and splits.
    ComplexToReal,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CollisionEvent {
    pub kind: CollisionKind,
    /// Grid cell that contains the event.
    pub bracket: (f64, f64),
    /// Refined parameter, bisected to [`tol::BISECT`].
    pub param: f64,
    /// Location of the double eigenvalue.
    pub lambda_d: f64,
    /// Krein signs of the two real eigenvalues on the real side of the event.
    pub signs: (i8, i8),
    /// False when the pair passes through infinity instead of meeting at a
    /// finite double eigenvalue (e.g. a singular metric at the event).
    pub regular: bool,
}

/// Signed discriminant `(λa − λb)²` of the two eigenvalues nearest `reference`,
/// and their midpoint.
fn pair_discriminant(b: &SmallMatrix, reference: f64) -> Result<(f64, f64, f64)> {
    let mut vals = eigenvalues(b)?;
    vals.sort_by(|x, y| {
        (x - reference).norm().total_cmp(&(y - reference).norm())
    });
    let (la, lb) = (vals[0], vals[1]);
    let s = la + lb;
    let p = la * lb;
    let disc = (s * s - p * 4.0).re;
    let scale = la.norm_sqr().max(lb.norm_sqr()).max(1.0);
    Ok((disc, s.re * 0.5, scale))
}

/// Step along `grid`, record Krein spectra, and locate every change in the
/// number of real eigenvalues. Each event is refined by bisection on the
/// sign of the discriminant of the colliding pair.
pub fn collision_scan<F>(
    param_name: &str,
    grid: &[f64],
    family: F,
    tol: f64,
) -> Result<(KreinPath, Vec<CollisionEvent>)>
where
    F: Fn(f64) -> Result<(SmallMatrix, IndefiniteMetric)>,
{
    if grid.len() < 2 {
        return Err(Error::InvalidParameter("collision scan needs at least two grid points".into()));
    }
    if grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidParameter("grid must be strictly increasing".into()));
    }
    let mut points = Vec::with_capacity(grid.len());
    for &x in grid {
        let (b, g) = family(x)?;
        points.push(KreinPoint { param: x, entries: krein_spectrum(&b, &g, tol)? });
    }
    let mut events = Vec::new();
    for i in 0..points.len() - 1 {
        let (left, right) = (&points[i], &points[i + 1]);
        let (nl, nr) = (left.nonreal_count(), right.nonreal_count());
        if nl == nr {
            continue;
        }
        let (kind, cside, rside) = if nr > nl {
            (CollisionKind::RealToComplex, right, left)
        } else {
            (CollisionKind::ComplexToReal, left, right)
        };
        // new complex pairs: upper-half eigenvalues on the complex side farthest
        // from any non-real eigenvalue on the real side
        let mut upper: Vec<&KreinEntry> = cside.entries.iter().filter(|e| e.value.im > 0.0).collect();
        let dist = |e: &KreinEntry| {
            rside
                .entries
                .iter()
                .filter(|r| r.value.im > 0.0)
                .map(|r| (r.value - e.value).norm())
                .fold(f64::INFINITY, f64::min)
        };
        upper.sort_by(|a, b| dist(b).total_cmp(&dist(a)));
        let new_pairs = (nl.abs_diff(nr) / 2).max(1);
        for e in upper.into_iter().take(new_pairs) {
            let mut reference = e.value.re;
            let (mut lo, mut hi) = (left.param, right.param);
            let disc_at = |x: f64, r: f64| -> Result<(f64, f64, f64)> {
                let (b, _) = family(x)?;
                pair_discriminant(&b, r)
            };
            let left_positive = kind == CollisionKind::RealToComplex;
            // a family that fails near the event (singular at the crossing)
            // stops the refinement and marks the event irregular
            let mut failed = false;
            while hi - lo > tol::BISECT {
                let mid = 0.5 * (lo + hi);
                let Ok((d, center, _)) = disc_at(mid, reference) else {
                    failed = true;
                    break;
                };
                reference = center;
                if (d > 0.0) == left_positive {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let param = 0.5 * (lo + hi);
            let (d, center, scale) = match disc_at(param, reference) {
                Ok(v) if !failed => v,
                _ => {
                    failed = true;
                    (f64::NAN, reference, f64::NAN)
                }
            };
            // signs of the pair on the real side, stepping away from the event
            // when the adjacent grid point sits on the double eigenvalue
            let mut signs = (0, 0);
            let away: Box<dyn Iterator<Item = usize>> = if kind == CollisionKind::RealToComplex {
                Box::new((0..=i).rev())
            } else {
                Box::new(i + 1..points.len())
            };
            for j in away {
                let mut reals: Vec<&KreinEntry> =
                    points[j].entries.iter().filter(|r| r.value.im == 0.0).collect();
                reals.sort_by(|a, b| (a.value.re - center).abs().total_cmp(&(b.value.re - center).abs()));
                if let [a, b, ..] = reals.as_slice() {
                    signs = (a.sign, b.sign);
                    if a.sign != 0 && b.sign != 0 {
                        break;
                    }
                }
            }
            let regular = !failed && center.is_finite() && d.abs() <= 1e-6 * scale;
            events.push(CollisionEvent {
                kind,
                bracket: (left.param, right.param),
                param,
                lambda_d: center,
                signs,
                regular,
            });
        }
    }
    Ok((KreinPath { param_name: param_name.to_string(), points }, events))
}

/// Self-adjoint first-order form of a conservative gyroscopic system
/// (`D = 0`, `N = 0`): returns `−i·A` for the state matrix `A` and the
/// energy metric `diag(K, M)`. Eigenvalues `ω` of `−iA` are real exactly
/// when `λ = iω` is on the imaginary axis.
pub fn energy_form(sys: &MechanicalSystem) -> Result<(SmallMatrix, IndefiniteMetric)> {
    if !sys.d.is_zero() || !sys.n.is_zero() {
        return Err(Error::InvalidParameter("energy form needs D = 0 and N = 0".into()));
    }
    let n = sys.dim();
    let a = sys.state_matrix()?.scale(Complex64::new(0.0, -1.0));
    let mut w = SmallMatrix::zeros(2 * n);
    for i in 0..n {
        for j in 0..n {
            w[(i, j)] = Complex64::new(sys.k[(i, j)], 0.0);
            w[(n + i, n + j)] = Complex64::new(sys.m[(i, j)], 0.0);
        }
    }
    Ok((a, IndefiniteMetric::new(w)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::smallalg::RMatrix;

    #[test]
    fn signature_counts() {
        let m = IndefiniteMetric::from_diag(&[1.0, -1.0, -1.0]).unwrap();
        assert_eq!(m.signature(), (1, 2, 0));
        assert_eq!(negative_square_count(&m), 2);
        assert!(!m.is_definite());
        assert!(IndefiniteMetric::from_diag(&[1.0, 2.0]).unwrap().is_definite());
    }

    #[test]
    fn non_hermitian_rejected() {
        let g = SmallMatrix::from_real_rows(&[&[1.0, 2.0], &[0.0, 1.0]]).unwrap();
        assert_eq!(IndefiniteMetric::new(g), Err(Error::NotHermitian));
    }

    #[test]
    fn sign_of_real_vectors() {
        let m = IndefiniteMetric::from_diag(&[1.0, -1.0]).unwrap();
        let e1 = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)];
        let e2 = [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)];
        assert_eq!(krein_sign(&m, &e1, Complex64::new(2.0, 0.0), tol::EIG).unwrap(), 1);
        assert_eq!(krein_sign(&m, &e2, Complex64::new(2.0, 0.0), tol::EIG).unwrap(), -1);
        assert_eq!(krein_sign(&m, &e2, Complex64::new(2.0, 1.0), tol::EIG).unwrap(), 0);
        let neutral = [Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)];
        assert_eq!(krein_sign(&m, &neutral, Complex64::new(1.0, 0.0), tol::EIG).unwrap(), 0);
    }

    #[test]
    fn definite_family_has_no_events() {
        let grid: Vec<f64> = (0..21).map(|i| i as f64 * 0.1).collect();
        let (path, events) = collision_scan(
            "t",
            &grid,
            |t| {
                let b = SmallMatrix::from_real_rows(&[&[1.0, t], &[t, -1.0]])?;
                Ok((b, IndefiniteMetric::from_diag(&[1.0, 1.0])?))
            },
            tol::EIG,
        )
        .unwrap();
        assert!(events.is_empty());
        assert_eq!(path.points.len(), 21);
    }

    #[test]
    fn two_by_two_collision() {
        // B = [[1, t], [-t, -1]] is self-adjoint for G = diag(1, -1);
        // eigenvalues ±sqrt(1 - t²) collide at t = 1 with λ = 0
        let grid: Vec<f64> = (0..11).map(|i| 0.5 + i as f64 * 0.1).collect();
        let (_, events) = collision_scan(
            "t",
            &grid,
            |t| {
                let b = SmallMatrix::from_real_rows(&[&[1.0, t], &[-t, -1.0]])?;
                Ok((b, IndefiniteMetric::from_diag(&[1.0, -1.0])?))
            },
            tol::EIG,
        )
        .unwrap();
        assert_eq!(events.len(), 1);
        let e = &events[0];
        assert_eq!(e.kind, CollisionKind::RealToComplex);
        assert!((e.param - 1.0).abs() < 1e-9);
        assert!(e.lambda_d.abs() < 1e-8);
        assert_eq!(e.signs.0 * e.signs.1, -1);
        assert!(e.regular);
    }

    #[test]
    fn energy_form_of_oscillator() {
        let z = RMatrix::zeros(1);
        let sys = MechanicalSystem::new(RMatrix::identity(1), z.clone(), z.clone(), RMatrix::diag(&[4.0]), z)
            .unwrap();
        let (b, g) = energy_form(&sys).unwrap();
        let s = krein_spectrum(&b, &g, tol::EIG).unwrap();
        assert_eq!(s.len(), 2);
        assert!((s[0].value.re + 2.0).abs() < 1e-12 && s[0].value.im == 0.0);
        assert_eq!((s[0].sign, s[1].sign), (1, 1));
    }
}
