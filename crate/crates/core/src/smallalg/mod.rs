//! Self-contained small-dimension algebra: polynomial roots with
//! multiplicities and complex eigenproblems for n ≤ 8.
//!
//! Roots come from Aberth–Ehrlich iteration with a companion-matrix
//! fallback. Near-coincident roots are grouped: `m` roots lying within
//! `tol^(1/m)` (relative) of their mean are reported as one root of
//! multiplicity `m`, the mean being far more accurate than any member.

mod eigen;
mod matrix;
mod poly;

pub use eigen::{eigenvalues, matrix_eigen, null_space, smallest_singular_vector, svd_right, Eigen};
pub use matrix::{normalized, vec_dot, vec_norm, RMatrix, SmallMatrix, MAX_DIM};
pub use poly::Poly;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tol;

/// A root or eigenvalue together with its algebraic multiplicity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Cluster {
    pub value: Complex64,
    pub multiplicity: usize,
}

pub type Root = Cluster;

fn cluster_threshold(m: usize, tol: f64, center: Complex64) -> f64 {
    tol.powf(1.0 / m as f64) * center.norm().max(1.0)
}

/// Group points into clusters. For each seed the largest group of nearest
/// points that fits inside its multiplicity-dependent radius is taken.
pub fn cluster(points: &[Complex64], tol: f64) -> Vec<Cluster> {
    let mut left: Vec<Complex64> = points.to_vec();
    let mut out = Vec::new();
    while let Some(&seed) = left.first() {
        let mut order: Vec<usize> = (0..left.len()).collect();
        order.sort_by(|&i, &j| (left[i] - seed).norm().total_cmp(&(left[j] - seed).norm()));
        let mut chosen = 1;
        for m in (2..=left.len()).rev() {
            let mean: Complex64 = order[..m].iter().map(|&i| left[i]).sum::<Complex64>() / m as f64;
            let radius = cluster_threshold(m, tol, mean);
            if order[..m].iter().all(|&i| (left[i] - mean).norm() <= radius) {
                chosen = m;
                break;
            }
        }
        let members: Vec<usize> = order[..chosen].to_vec();
        let mean: Complex64 =
            members.iter().map(|&i| left[i]).sum::<Complex64>() / chosen as f64;
        out.push(Cluster { value: mean, multiplicity: chosen });
        let mut keep = Vec::with_capacity(left.len() - chosen);
        for (i, &z) in left.iter().enumerate() {
            if !members.contains(&i) {
                keep.push(z);
            }
        }
        left = keep;
    }
    out
}

/// Make the cluster list closed under conjugation (for real input).
pub(crate) fn enforce_conjugates(clusters: &mut Vec<Cluster>, tol: f64) {
    for c in clusters.iter_mut() {
        if c.value.im.abs() <= cluster_threshold(c.multiplicity, tol, c.value) {
            c.value.im = 0.0;
        }
    }
    let n = clusters.len();
    let mut paired = vec![false; n];
    for i in 0..n {
        if paired[i] || clusters[i].value.im <= 0.0 {
            continue;
        }
        let target = clusters[i].value.conj();
        let partner = (0..n)
            .filter(|&j| {
                !paired[j]
                    && j != i
                    && clusters[j].value.im < 0.0
                    && clusters[j].multiplicity == clusters[i].multiplicity
            })
            .min_by(|&a, &b| {
                (clusters[a].value - target).norm().total_cmp(&(clusters[b].value - target).norm())
            });
        if let Some(j) = partner {
            let avg = (clusters[i].value + clusters[j].value.conj()) * 0.5;
            clusters[i].value = avg;
            clusters[j].value = avg.conj();
            paired[i] = true;
            paired[j] = true;
        }
    }
}

fn sort_clusters(c: &mut [Cluster]) {
    c.sort_by(|a, b| a.value.re.total_cmp(&b.value.re).then(a.value.im.total_cmp(&b.value.im)));
}

/// Aberth–Ehrlich on a monic polynomial of degree ≥ 1. `None` on failure.
fn aberth(p: &Poly) -> Option<Vec<Complex64>> {
    let n = p.degree();
    let c = p.coeffs();
    let center = -c[n - 1] / n as f64;
    // radius from the shifted constant term, kept away from zero
    let r = p.eval(center).norm().powf(1.0 / n as f64);
    let bound = (0..n).map(|i| c[i].norm().powf(1.0 / (n - i) as f64)).fold(0.0, f64::max);
    let radius = if r.is_finite() && r > 1e-8 * bound.max(1.0) { r } else { bound.max(1.0) };
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let th = 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4;
            center + Complex64::from_polar(radius, th)
        })
        .collect();
    let mut done = vec![false; n];
    let slack = 8.0 * n as f64;
    for _ in 0..tol::MAX_ITER {
        let mut all = true;
        for k in 0..n {
            if done[k] {
                continue;
            }
            let (pv, dpv, err) = p.eval_with_bound(z[k]);
            if pv.norm() <= slack * err {
                done[k] = true;
                continue;
            }
            all = false;
            let ratio = if dpv.norm() == 0.0 { pv } else { pv / dpv };
            let s: Complex64 = (0..n)
                .filter(|&j| j != k)
                .map(|j| {
                    let d = z[k] - z[j];
                    if d.norm() == 0.0 {
                        Complex64::new(0.0, 0.0)
                    } else {
                        d.inv()
                    }
                })
                .sum();
            let denom = Complex64::new(1.0, 0.0) - ratio * s;
            let w = if denom.norm() == 0.0 { ratio } else { ratio / denom };
            z[k] -= w;
            if !z[k].is_finite() {
                return None;
            }
            if w.norm() <= f64::EPSILON * z[k].norm() {
                done[k] = true;
            }
        }
        if all {
            return Some(z);
        }
    }
    None
}

/// Newton refinement of a cluster mean on `p^(m-1)`, where an m-fold root
/// is simple. Steps are kept only while they reduce the residual and stay
/// inside the cluster radius.
fn polish(p: &Poly, z0: Complex64, m: usize, tol: f64) -> Complex64 {
    let mut f = p.clone();
    for _ in 1..m {
        f = f.derivative();
    }
    let df = f.derivative();
    let radius = cluster_threshold(m, tol, z0);
    let mut z = z0;
    let mut fz = f.eval(z).norm();
    for _ in 0..4 {
        let d = df.eval(z);
        if d.norm() == 0.0 || fz == 0.0 {
            break;
        }
        let next = z - f.eval(z) / d;
        let fnext = f.eval(next).norm();
        if !next.is_finite() || (next - z0).norm() > radius || fnext >= fz {
            break;
        }
        z = next;
        fz = fnext;
    }
    z
}

/// Companion matrix of a monic polynomial (degree ≤ [`MAX_DIM`]).
pub fn companion(p: &Poly) -> Result<SmallMatrix> {
    let m = p.monic();
    let n = m.degree();
    let c = m.coeffs();
    let mut a = SmallMatrix::zeros(n);
    for i in 1..n {
        a[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    for i in 0..n {
        a[(i, n - 1)] = -c[i];
    }
    Ok(a)
}

/// Roots of `p` with multiplicities, sorted by real then imaginary part.
///
/// Exactly-zero trailing coefficients give exact zero roots. For real
/// polynomials the result is closed under conjugation.
pub fn poly_roots(p: &Poly, tol: f64) -> Result<Vec<Root>> {
    if p.coeffs().iter().any(|c| !c.is_finite()) {
        return Err(Error::DegenerateInput("non-finite coefficient".into()));
    }
    if p.is_zero() {
        return Err(Error::DegenerateInput("zero polynomial".into()));
    }
    let t = p.trimmed();
    if t.degree() == 0 {
        return Err(Error::DegenerateInput("constant polynomial".into()));
    }
    let zeros = t.coeffs().iter().take_while(|c| **c == Complex64::new(0.0, 0.0)).count();
    let reduced = Poly::new(t.coeffs()[zeros..].to_vec()).monic();
    let raw: Vec<Complex64> = if reduced.degree() == 0 {
        vec![]
    } else if reduced.degree() == 1 {
        vec![-reduced.coeffs()[0]]
    } else {
        match aberth(&reduced) {
            Some(z) => z,
            None => {
                if reduced.degree() > MAX_DIM {
                    return Err(Error::NonConvergence { iterations: tol::MAX_ITER });
                }
                eigenvalues(&companion(&reduced)?)?
            }
        }
    };
    let mut clusters = cluster(&raw, tol);
    for c in clusters.iter_mut() {
        c.value = polish(&reduced, c.value, c.multiplicity, tol);
    }
    if zeros > 0 {
        clusters.push(Cluster { value: Complex64::new(0.0, 0.0), multiplicity: zeros });
    }
    if p.is_real() {
        enforce_conjugates(&mut clusters, tol);
    }
    sort_clusters(&mut clusters);
    Ok(clusters)
}

/// Expand clusters into a flat list with repetition.
pub fn flatten(roots: &[Root]) -> Vec<Complex64> {
    roots
        .iter()
        .flat_map(|r| std::iter::repeat_n(r.value, r.multiplicity))
        .collect()
}

/// Largest real part among the roots.
pub fn max_real(roots: &[Root]) -> f64 {
    roots.iter().map(|r| r.value.re).fold(f64::NEG_INFINITY, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn quartic_with_two_unstable_roots() {
        let r = poly_roots(&Poly::from_descending(&[1.0, 0.0, 6.0, 0.0, 25.0]), tol::EIG).unwrap();
        assert_eq!(r.len(), 4);
        assert_eq!(r.iter().filter(|x| x.value.re > 0.0).count(), 2);
        assert_eq!(r.iter().filter(|x| x.value.re < 0.0).count(), 2);
        for x in &r {
            assert!((x.value.re.abs() - 1.0).abs() < 1e-12);
            assert!((x.value.im.abs() - 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn quadruple_root() {
        let r = poly_roots(&Poly::from_descending(&[1.0, 4.0, 6.0, 4.0, 1.0]), tol::EIG).unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].multiplicity, 4);
        assert!((r[0].value - c(-1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn imaginary_pair() {
        let r = poly_roots(&Poly::from_descending(&[1.0, 0.0, 1.0]), tol::EIG).unwrap();
        assert_eq!(r.len(), 2);
        assert!((r[0].value - c(0.0, -1.0)).norm() < 1e-14);
        assert!((r[1].value - c(0.0, 1.0)).norm() < 1e-14);
        assert!(r[0].value.re.abs() < 1e-15);
    }

    #[test]
    fn exact_zero_roots() {
        let r = poly_roots(&Poly::from_descending(&[1.0, 3.0, 0.0, 0.0]), tol::EIG).unwrap();
        assert_eq!(r.len(), 2);
        assert_eq!(r[1].value, c(0.0, 0.0));
        assert_eq!(r[1].multiplicity, 2);
    }

    #[test]
    fn degenerate_inputs() {
        assert!(matches!(poly_roots(&Poly::from_real(&[0.0, 0.0]), 1e-12), Err(Error::DegenerateInput(_))));
        assert!(matches!(poly_roots(&Poly::from_real(&[2.0]), 1e-12), Err(Error::DegenerateInput(_))));
    }

    #[test]
    fn identity_eigen_is_semisimple() {
        let e = matrix_eigen(&SmallMatrix::identity(3), tol::EIG).unwrap();
        assert_eq!(e.len(), 1);
        assert_eq!(e[0].algebraic, 3);
        assert_eq!(e[0].geometric, 3);
    }

    #[test]
    fn jordan_block_is_defective() {
        let a = SmallMatrix::from_real_rows(&[&[2.0, 1.0, 0.0], &[0.0, 2.0, 1.0], &[0.0, 0.0, 2.0]]).unwrap();
        let e = matrix_eigen(&a, tol::EIG).unwrap();
        assert_eq!(e.len(), 1);
        assert_eq!(e[0].algebraic, 3);
        assert_eq!(e[0].geometric, 1);
        assert!(e[0].is_defective());
    }

    #[test]
    fn companion_matches_roots() {
        let p = Poly::from_descending(&[1.0, -2.0, 3.0, 5.0, -7.0]);
        let r = flatten(&poly_roots(&p, tol::EIG).unwrap());
        let e = eigenvalues(&companion(&p).unwrap()).unwrap();
        for z in &r {
            let d = e.iter().map(|w| (w - z).norm()).fold(f64::INFINITY, f64::min);
            assert!(d < 1e-10, "{z} missing, distance {d}");
        }
    }

    #[test]
    fn eigen_residuals() {
        let a = SmallMatrix::from_real_rows(&[
            &[1.0, 2.0, 0.5, -1.0],
            &[0.0, -3.0, 1.0, 4.0],
            &[2.5, 1.0, 0.0, 1.0],
            &[-1.0, 0.0, 2.0, 1.5],
        ])
        .unwrap();
        let norm = a.norm_fro();
        for e in matrix_eigen(&a, tol::EIG).unwrap() {
            for u in &e.vectors {
                let au = a.mul_vec(u);
                let res: f64 = au
                    .iter()
                    .zip(u)
                    .map(|(x, y)| (x - e.value * y).norm_sqr())
                    .sum::<f64>()
                    .sqrt();
                assert!(res <= tol::EIG * norm * vec_norm(u), "residual {res}");
            }
        }
    }

    #[test]
    fn inverse_roundtrip() {
        let a = SmallMatrix::from_real_rows(&[&[4.0, 1.0], &[2.0, 3.0]]).unwrap();
        let p = &a * &a.inverse().unwrap();
        assert!((&p - &SmallMatrix::identity(2)).norm_fro() < 1e-15);
        let s = SmallMatrix::from_real_rows(&[&[1.0, 2.0], &[2.0, 4.0]]).unwrap();
        assert_eq!(s.inverse(), Err(Error::Singular));
    }

    #[test]
    fn sym_eigen_diagonalizes() {
        let m = RMatrix::from_rows(&[&[2.0, 1.0, 0.0], &[1.0, 3.0, 1.0], &[0.0, 1.0, 4.0]]).unwrap();
        let (vals, v) = m.sym_eigen();
        let d = &(&v.transpose() * &m) * &v;
        for i in 0..3 {
            assert!((d[(i, i)] - vals[i]).abs() < 1e-13);
        }
        assert!((vals.iter().sum::<f64>() - 9.0).abs() < 1e-13);
    }

    #[test]
    fn too_large_rejected() {
        assert_eq!(SmallMatrix::new(9, vec![Complex64::new(0.0, 0.0); 81]), Err(Error::TooLarge(9)));
    }
}
