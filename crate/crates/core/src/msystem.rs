//! Linear mechanical systems `M q'' + (D + G) q' + (K + N) q = 0`.
//!
//! `D`, `K` are symmetric, `G`, `N` antisymmetric, `M` symmetric positive
//! definite. The spectrum is taken from the first-order companion form
//! acting on `(q, q')`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::smallalg::{matrix_eigen, null_space, smallest_singular_vector, Poly, RMatrix, SmallMatrix};
use crate::tol;

#[derive(Clone, Debug, PartialEq)]
pub struct MechanicalSystem {
    pub m: RMatrix,
    pub d: RMatrix,
    pub g: RMatrix,
    pub k: RMatrix,
    pub n: RMatrix,
    pub labels: Vec<String>,
}

/// `λ⁴ + a1 λ³ + a2 λ² + a3 λ + a4`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuarticPoly {
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
    pub a4: f64,
}

impl QuarticPoly {
    pub fn new(a1: f64, a2: f64, a3: f64, a4: f64) -> Self {
        QuarticPoly { a1, a2, a3, a4 }
    }

    pub fn coeffs(&self) -> [f64; 4] {
        [self.a1, self.a2, self.a3, self.a4]
    }

    pub fn to_poly(&self) -> Poly {
        Poly::from_real(&[self.a4, self.a3, self.a2, self.a1, 1.0])
    }
}

#[derive(Clone, Debug)]
pub struct SpectrumEntry {
    pub value: Complex64,
    pub alg_mult: usize,
    pub geom_mult: usize,
    /// Unit kernel vector of the pencil `λ²M + λ(D+G) + (K+N)`.
    pub vector: Option<Vec<Complex64>>,
    pub krein_sign: Option<i8>,
}

fn same_dims(mats: &[&RMatrix]) -> Result<usize> {
    let n = mats[0].dim();
    for m in mats {
        if m.dim() != n {
            return Err(Error::DimensionMismatch { expected: n, got: m.dim() });
        }
    }
    Ok(n)
}

/// Split positional `A` and velocity `B` matrices into symmetry classes.
pub fn decompose(a: &RMatrix, b: &RMatrix, m: &RMatrix) -> Result<MechanicalSystem> {
    let n = same_dims(&[a, b, m])?;
    m.cholesky()?;
    Ok(MechanicalSystem {
        m: m.sym_part(),
        d: b.sym_part(),
        g: b.antisym_part(),
        k: a.sym_part(),
        n: a.antisym_part(),
        labels: (1..=n).map(|i| format!("q{i}")).collect(),
    })
}

impl MechanicalSystem {
    /// Assemble from the five blocks, checking their symmetry classes.
    pub fn new(m: RMatrix, d: RMatrix, g: RMatrix, k: RMatrix, n: RMatrix) -> Result<Self> {
        let dim = same_dims(&[&m, &d, &g, &k, &n])?;
        m.cholesky()?;
        let t = tol::SYMMETRY;
        if !d.is_symmetric(t) || !k.is_symmetric(t) {
            return Err(Error::NotSymmetric);
        }
        let antisym = |x: &RMatrix| (x + &x.transpose()).norm_fro() <= t * x.norm_fro().max(1.0);
        if !antisym(&g) || !antisym(&n) {
            return Err(Error::NotSymmetric);
        }
        Ok(MechanicalSystem {
            m: m.sym_part(),
            d: d.sym_part(),
            g: g.antisym_part(),
            k: k.sym_part(),
            n: n.antisym_part(),
            labels: (1..=dim).map(|i| format!("q{i}")).collect(),
        })
    }

    pub fn with_labels(mut self, labels: &[&str]) -> Self {
        self.labels = labels.iter().map(|s| s.to_string()).collect();
        self
    }

    pub fn dim(&self) -> usize {
        self.m.dim()
    }

    /// `K + N`.
    pub fn positional(&self) -> RMatrix {
        &self.k + &self.n
    }

    /// `D + G`.
    pub fn velocity(&self) -> RMatrix {
        &self.d + &self.g
    }

    /// Circulatory coefficient `ν = N[0][1]` (two degrees of freedom).
    pub fn nu(&self) -> f64 {
        self.n[(0, 1)]
    }

    /// Gyroscopic coefficient `Ω = G[0][1]` (two degrees of freedom).
    pub fn omega(&self) -> f64 {
        self.g[(0, 1)]
    }

    pub fn is_identity_mass(&self) -> bool {
        (&self.m - &RMatrix::identity(self.dim())).norm_fro() <= tol::SYMMETRY
    }

    /// First-order state matrix `[[0, I], [−M⁻¹(K+N), −M⁻¹(D+G)]]`.
    pub fn state_matrix(&self) -> Result<SmallMatrix> {
        let n = self.dim();
        if 2 * n > crate::smallalg::MAX_DIM {
            return Err(Error::TooLarge(2 * n));
        }
        let minv = self.m.inverse()?;
        let pa = &minv * &self.positional();
        let pb = &minv * &self.velocity();
        let mut c = SmallMatrix::zeros(2 * n);
        for i in 0..n {
            c[(i, n + i)] = Complex64::new(1.0, 0.0);
            for j in 0..n {
                c[(n + i, j)] = Complex64::new(-pa[(i, j)], 0.0);
                c[(n + i, n + j)] = Complex64::new(-pb[(i, j)], 0.0);
            }
        }
        Ok(c)
    }

    /// Pencil `λ²M + λ(D+G) + (K+N)` evaluated at `λ`.
    pub fn pencil(&self, lambda: Complex64) -> SmallMatrix {
        let m = SmallMatrix::from_real(&self.m).scale(lambda * lambda);
        let b = SmallMatrix::from_real(&self.velocity()).scale(lambda);
        let a = SmallMatrix::from_real(&self.positional());
        &(&m + &b) + &a
    }
}

/// Congruence with `M^(-1/2)`; the result has `M = I` and keeps the
/// symmetry class of every block.
pub fn mass_normalize(sys: &MechanicalSystem) -> Result<MechanicalSystem> {
    sys.m.cholesky()?;
    let (vals, v) = sys.m.sym_eigen();
    let inv_sqrt = RMatrix::diag(&vals.iter().map(|x| 1.0 / x.sqrt()).collect::<Vec<_>>());
    let s = &(&v * &inv_sqrt) * &v.transpose();
    let s = s.sym_part();
    let cong = |x: &RMatrix| &(&s * x) * &s;
    Ok(MechanicalSystem {
        m: RMatrix::identity(sys.dim()),
        d: cong(&sys.d).sym_part(),
        g: cong(&sys.g).antisym_part(),
        k: cong(&sys.k).sym_part(),
        n: cong(&sys.n).antisym_part(),
        labels: sys.labels.clone(),
    })
}

/// Characteristic quartic of a two-degree-of-freedom system, from the
/// trace/determinant invariants. Systems with `M ≠ I` are mass-normalized first.
pub fn char_quartic(sys: &MechanicalSystem) -> Result<QuarticPoly> {
    if sys.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, got: sys.dim() });
    }
    let s = if sys.is_identity_mass() { sys.clone() } else { mass_normalize(sys)? };
    let (k, d) = (&s.k, &s.d);
    let om = s.omega();
    let nu = s.nu();
    let tr_k = k.trace();
    let tr_d = d.trace();
    let tr_kd = (k * d).trace();
    Ok(QuarticPoly {
        a1: tr_d,
        a2: tr_k + d.det() + om * om,
        a3: tr_k * tr_d - tr_kd + 2.0 * om * nu,
        a4: k.det() + nu * nu,
    })
}

/// Eigenvalues of the system with multiplicities and pencil kernel vectors.
/// Dimension n ≤ 4.
pub fn spectrum(sys: &MechanicalSystem, tol: f64) -> Result<Vec<SpectrumEntry>> {
    let c = sys.state_matrix()?;
    let eig = matrix_eigen(&c, tol)?;
    let (nm, nb, na) = (sys.m.norm_fro(), sys.velocity().norm_fro(), sys.positional().norm_fro());
    let mut out: Vec<SpectrumEntry> = eig
        .into_iter()
        .map(|e| {
            let l = e.value;
            let p = sys.pencil(l);
            let scale = (l.norm_sqr() * nm + l.norm() * nb + na).max(f64::MIN_POSITIVE);
            let mut kernel = null_space(&p, tol::RANK * scale);
            kernel.truncate(e.algebraic);
            let geom = kernel.len().max(1);
            let vector = kernel.into_iter().next().unwrap_or_else(|| smallest_singular_vector(&p).1);
            SpectrumEntry {
                value: l,
                alg_mult: e.algebraic,
                geom_mult: geom,
                vector: Some(vector),
                krein_sign: None,
            }
        })
        .collect();
    out.sort_by(|a, b| a.value.re.total_cmp(&b.value.re).then(a.value.im.total_cmp(&b.value.im)));
    Ok(out)
}

/// Largest real part over the spectrum.
pub fn system_abscissa(sys: &MechanicalSystem) -> Result<f64> {
    Ok(spectrum_abscissa(&spectrum(sys, tol::EIG)?))
}

pub fn spectrum_abscissa(s: &[SpectrumEntry]) -> f64 {
    s.iter().map(|e| e.value.re).fold(f64::NEG_INFINITY, f64::max)
}

/// Largest modulus over the spectrum.
pub fn spectral_radius(s: &[SpectrumEntry]) -> f64 {
    s.iter().map(|e| e.value.norm()).fold(0.0, f64::max)
}

/// Eigenvalue with the largest real part (ties broken by larger imaginary part).
pub fn leading_eigenvalue(s: &[SpectrumEntry]) -> Option<Complex64> {
    s.iter()
        .map(|e| e.value)
        .max_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)))
}

/// True when some eigenvalue grows: abscissa above [`tol::ONSET`] relative
/// to the spectral scale.
pub fn is_growing(s: &[SpectrumEntry]) -> bool {
    spectrum_abscissa(s) > tol::ONSET * spectral_radius(s).max(1.0)
}
