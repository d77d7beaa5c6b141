use num_complex::Complex64;

/// Polynomial with complex coefficients stored in ascending order:
/// `coeffs[i]` multiplies `λ^i`.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly {
    coeffs: Vec<Complex64>,
}

impl Poly {
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        Poly { coeffs }
    }

    /// From real coefficients in ascending order.
    pub fn from_real(coeffs: &[f64]) -> Self {
        Poly {
            coeffs: coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect(),
        }
    }

    /// From real coefficients listed from the leading term down.
    pub fn from_descending(coeffs: &[f64]) -> Self {
        let mut c: Vec<f64> = coeffs.to_vec();
        c.reverse();
        Self::from_real(&c)
    }

    /// Monic polynomial with the given roots (repeat a root to give it multiplicity).
    pub fn from_roots(roots: &[Complex64]) -> Self {
        let mut c = vec![Complex64::new(1.0, 0.0)];
        for &r in roots {
            let mut next = vec![Complex64::new(0.0, 0.0); c.len() + 1];
            for (i, &ci) in c.iter().enumerate() {
                next[i + 1] += ci;
                next[i] -= ci * r;
            }
            c = next;
        }
        Poly { coeffs: c }
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Degree ignoring exactly-zero leading coefficients. The zero polynomial has degree 0.
    pub fn degree(&self) -> usize {
        self.coeffs
            .iter()
            .rposition(|c| *c != Complex64::new(0.0, 0.0))
            .unwrap_or(0)
    }

    pub fn leading(&self) -> Complex64 {
        self.coeffs
            .get(self.degree())
            .copied()
            .unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| *c == Complex64::new(0.0, 0.0))
    }

    pub fn is_real(&self) -> bool {
        self.coeffs.iter().all(|c| c.im == 0.0)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    pub fn derivative(&self) -> Poly {
        if self.coeffs.len() <= 1 {
            return Poly::new(vec![Complex64::new(0.0, 0.0)]);
        }
        Poly {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| c * i as f64)
                .collect(),
        }
    }

    /// Copy with trailing zero coefficients removed.
    pub fn trimmed(&self) -> Poly {
        let d = self.degree();
        Poly {
            coeffs: self.coeffs[..=d.min(self.coeffs.len().saturating_sub(1))].to_vec(),
        }
    }

    pub fn monic(&self) -> Poly {
        let t = self.trimmed();
        let lead = t.leading();
        Poly {
            coeffs: t.coeffs.iter().map(|&c| c / lead).collect(),
        }
    }

    /// Euclidean norm of the coefficient vector.
    pub fn norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Value and derivative at `z`, plus a running bound on the rounding
    /// error of the Horner evaluation.
    pub(crate) fn eval_with_bound(&self, z: Complex64) -> (Complex64, Complex64, f64) {
        let az = z.norm();
        let mut p = Complex64::new(0.0, 0.0);
        let mut dp = Complex64::new(0.0, 0.0);
        let mut bound = 0.0;
        for &c in self.coeffs.iter().rev() {
            dp = dp * z + p;
            p = p * z + c;
            bound = bound * az + c.norm();
        }
        (p, dp, bound * f64::EPSILON)
    }
}
