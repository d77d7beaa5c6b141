use num_complex::Complex64;

use super::matrix::{normalized, SmallMatrix};
use super::{cluster, enforce_conjugates, Cluster};
use crate::error::{Error, Result};
use crate::tol;

const CZERO: Complex64 = Complex64::new(0.0, 0.0);

/// One distinct eigenvalue with its multiplicities and an orthonormal basis
/// of its eigenspace (`geometric` vectors).
#[derive(Clone, Debug)]
pub struct Eigen {
    pub value: Complex64,
    pub algebraic: usize,
    pub geometric: usize,
    pub vectors: Vec<Vec<Complex64>>,
}

impl Eigen {
    pub fn is_defective(&self) -> bool {
        self.geometric < self.algebraic
    }
}

/// Reduce to upper Hessenberg form by Householder reflections (similarity).
fn hessenberg(a: &SmallMatrix) -> SmallMatrix {
    let n = a.dim();
    let mut h = a.clone();
    for k in 0..n.saturating_sub(2) {
        let x: Vec<Complex64> = (k + 1..n).map(|i| h[(i, k)]).collect();
        let xnorm = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if xnorm == 0.0 {
            continue;
        }
        let phase = if x[0].norm() == 0.0 { Complex64::new(1.0, 0.0) } else { x[0] / x[0].norm() };
        let mut v = x.clone();
        v[0] += phase * xnorm;
        let vnorm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if vnorm == 0.0 {
            continue;
        }
        for z in v.iter_mut() {
            *z /= vnorm;
        }
        // H <- P H P with P = I - 2 v vᴴ acting on rows/cols k+1..n
        for j in 0..n {
            let s: Complex64 = (0..v.len()).map(|i| v[i].conj() * h[(k + 1 + i, j)]).sum();
            for i in 0..v.len() {
                h[(k + 1 + i, j)] -= v[i] * s * 2.0;
            }
        }
        for i in 0..n {
            let s: Complex64 = (0..v.len()).map(|j| h[(i, k + 1 + j)] * v[j]).sum();
            for j in 0..v.len() {
                h[(i, k + 1 + j)] -= s * v[j].conj() * 2.0;
            }
        }
        for i in k + 2..n {
            h[(i, k)] = CZERO;
        }
    }
    h
}

/// Eigenvalue of the trailing 2x2 block `[[a, b], [c, d]]` closest to `d`.
fn wilkinson_shift(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    let tr = a + d;
    let det = a * d - b * c;
    let disc = (tr * tr * 0.25 - det).sqrt();
    let l1 = tr * 0.5 + disc;
    let l2 = tr * 0.5 - disc;
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// All eigenvalues (with repetition) by shifted QR on the Hessenberg form.
pub fn eigenvalues(a: &SmallMatrix) -> Result<Vec<Complex64>> {
    let n = a.dim();
    if n == 0 {
        return Ok(vec![]);
    }
    if a.data().iter().any(|z| !z.is_finite()) {
        return Err(Error::DegenerateInput("non-finite matrix entry".into()));
    }
    let mut h = hessenberg(a);
    let mut out = vec![CZERO; n];
    let mut hi = n - 1;
    let mut iter = 0usize;
    let mut since_deflation = 0usize;
    loop {
        if hi == 0 {
            out[0] = h[(0, 0)];
            break;
        }
        // locate the start of the active unreduced block
        let mut lo = hi;
        while lo > 0 {
            let sub = h[(lo, lo - 1)].norm();
            let diag = h[(lo, lo)].norm() + h[(lo - 1, lo - 1)].norm();
            let scale = if diag == 0.0 { h.norm_fro() } else { diag };
            if sub <= f64::EPSILON * scale {
                h[(lo, lo - 1)] = CZERO;
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            out[hi] = h[(hi, hi)];
            hi -= 1;
            since_deflation = 0;
            continue;
        }
        iter += 1;
        since_deflation += 1;
        if iter > tol::MAX_ITER * n {
            return Err(Error::NonConvergence { iterations: iter });
        }
        let mut mu = wilkinson_shift(
            h[(hi - 1, hi - 1)],
            h[(hi - 1, hi)],
            h[(hi, hi - 1)],
            h[(hi, hi)],
        );
        if since_deflation % 11 == 10 {
            // exceptional shift to break cycles
            mu = h[(hi, hi)] + Complex64::new(h[(hi, hi - 1)].norm() * 0.75, h[(hi, hi - 1)].norm() * 0.5);
        }
        for i in lo..=hi {
            h[(i, i)] -= mu;
        }
        let mut rots = Vec::with_capacity(hi - lo);
        for k in lo..hi {
            let x = h[(k, k)];
            let y = h[(k + 1, k)];
            let r = (x.norm_sqr() + y.norm_sqr()).sqrt();
            let (c, s) = if r == 0.0 {
                (Complex64::new(1.0, 0.0), CZERO)
            } else {
                (x / r, y / r)
            };
            for j in k..=hi {
                let p = h[(k, j)];
                let q = h[(k + 1, j)];
                h[(k, j)] = c.conj() * p + s.conj() * q;
                h[(k + 1, j)] = -s * p + c * q;
            }
            rots.push((c, s));
        }
        for (idx, k) in (lo..hi).enumerate() {
            let (c, s) = rots[idx];
            let top = (k + 2).min(hi);
            for i in lo..=top {
                let p = h[(i, k)];
                let q = h[(i, k + 1)];
                h[(i, k)] = p * c + q * s;
                h[(i, k + 1)] = -p * s.conj() + q * c.conj();
            }
        }
        for i in lo..=hi {
            h[(i, i)] += mu;
        }
    }
    Ok(out)
}

/// Singular values and right singular vectors by one-sided Jacobi.
/// Returns `(sigma, v)` where `v[j]` is the right singular vector for `sigma[j]`.
pub fn svd_right(a: &SmallMatrix) -> (Vec<f64>, Vec<Vec<Complex64>>) {
    let n = a.dim();
    // work on columns
    let mut x: Vec<Vec<Complex64>> = (0..n).map(|j| (0..n).map(|i| a[(i, j)]).collect()).collect();
    let mut v: Vec<Vec<Complex64>> = (0..n)
        .map(|j| (0..n).map(|i| if i == j { Complex64::new(1.0, 0.0) } else { CZERO }).collect())
        .collect();
    for _sweep in 0..60 {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha: f64 = x[p].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = x[q].iter().map(|z| z.norm_sqr()).sum();
                let gamma: Complex64 = x[p].iter().zip(&x[q]).map(|(a, b)| a.conj() * b).sum();
                let g = gamma.norm();
                if g == 0.0 || g <= f64::EPSILON * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = (gamma / g).conj();
                let zeta = (beta - alpha) / (2.0 * g);
                let t = if zeta == 0.0 {
                    1.0
                } else {
                    zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for i in 0..n {
                    let xp = x[p][i];
                    let yq = x[q][i] * phase;
                    x[p][i] = xp * c - yq * s;
                    x[q][i] = xp * s + yq * c;
                    let vp = v[p][i];
                    let vq = v[q][i] * phase;
                    v[p][i] = vp * c - vq * s;
                    v[q][i] = vp * s + vq * c;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let sigma = x.iter().map(|col| col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()).collect();
    (sigma, v)
}

/// Orthonormal basis of the numerical null space: right singular vectors
/// whose singular value is at most `threshold`.
pub fn null_space(a: &SmallMatrix, threshold: f64) -> Vec<Vec<Complex64>> {
    let (sigma, v) = svd_right(a);
    let mut idx: Vec<usize> = (0..sigma.len()).filter(|&j| sigma[j] <= threshold).collect();
    idx.sort_by(|&i, &j| sigma[i].total_cmp(&sigma[j]));
    idx.into_iter().map(|j| normalized(&v[j])).collect()
}

/// Smallest singular vector (always returns one vector).
pub fn smallest_singular_vector(a: &SmallMatrix) -> (f64, Vec<Complex64>) {
    let (sigma, v) = svd_right(a);
    let j = (0..sigma.len()).min_by(|&i, &j| sigma[i].total_cmp(&sigma[j])).unwrap();
    (sigma[j], normalized(&v[j]))
}

/// Eigenvalues clustered by multiplicity, with eigenvectors from the null
/// space of `A − λI`. The geometric multiplicity is the numerical nullity
/// at relative threshold [`tol::RANK`].
pub fn matrix_eigen(a: &SmallMatrix, tol: f64) -> Result<Vec<Eigen>> {
    let vals = eigenvalues(a)?;
    let mut clusters = cluster(&vals, tol);
    if a.data().iter().all(|z| z.im == 0.0) {
        enforce_conjugates(&mut clusters, tol);
    }
    let scale = a.norm_fro().max(f64::MIN_POSITIVE);
    let mut out = Vec::with_capacity(clusters.len());
    for Cluster { value, multiplicity } in clusters {
        let shifted = a.shift(value);
        let threshold = tol::RANK * scale;
        let mut vectors = null_space(&shifted, threshold);
        vectors.truncate(multiplicity);
        if vectors.is_empty() {
            // never return an eigenvalue without a vector
            vectors.push(smallest_singular_vector(&shifted).1);
        }
        out.push(Eigen { value, algebraic: multiplicity, geometric: vectors.len(), vectors });
    }
    Ok(out)
}
