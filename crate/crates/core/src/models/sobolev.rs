use std::f64::consts::PI;

use num_complex::Complex64;

use super::positive;
use crate::error::{Error, Result};
use crate::krein::IndefiniteMetric;
use crate::smallalg::{RMatrix, SmallMatrix};

/// Top with an ellipsoidal cavity (semi-axes `a, a, c`) filled with fluid.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SobolevParams {
    pub a: f64,
    pub c: f64,
    /// Transverse moment of inertia of the shell.
    pub a1: f64,
    /// Axial moment of inertia of the shell.
    pub c1: f64,
    /// Shell mass and the distance of its centre of mass from the support.
    pub m1: f64,
    pub l1: f64,
    /// Fluid mass and the distance of its centre of mass from the support.
    pub m2: f64,
    pub l2: f64,
    pub rho: f64,
    pub omega: f64,
    pub g: f64,
}

impl SobolevParams {
    /// Massless shell supported at the centre of mass.
    pub fn massless(a: f64, c: f64, rho: f64) -> Self {
        SobolevParams { a, c, a1: 0.0, c1: 0.0, m1: 0.0, l1: 0.0, m2: 0.0, l2: 0.0, rho, omega: 1.0, g: 0.0 }
    }

    /// `(c² − a²)/(c² + a²)`.
    pub fn m_ratio(&self) -> f64 {
        let (a2, c2) = (self.a * self.a, self.c * self.c);
        (c2 - a2) / (c2 + a2)
    }

    /// Axial moment of inertia of the frozen fluid.
    pub fn fluid_c2(&self) -> f64 {
        8.0 * PI * self.rho / 15.0 * self.a.powi(4) * self.c
    }

    /// Transverse moment of inertia of the frozen fluid.
    pub fn fluid_a2(&self) -> f64 {
        let (a, c) = (self.a, self.c);
        self.l2 * self.l2 * self.m2 + 4.0 * PI * self.rho / 15.0 * a * a * c * (a * a + c * c)
    }

    /// `K = g(l1 M1 + l2 M2)`.
    pub fn k_const(&self) -> f64 {
        self.g * (self.l1 * self.m1 + self.l2 * self.m2)
    }

    /// `L = C1 + C2 − A1 − A2 − K/Ω²`.
    pub fn l_const(&self) -> Result<f64> {
        let k = self.k_const();
        let gravity = if k == 0.0 {
            0.0
        } else if self.omega != 0.0 {
            k / (self.omega * self.omega)
        } else {
            return Err(Error::InvalidParameter("L needs omega != 0 when K != 0".into()));
        };
        Ok(self.c1 + self.fluid_c2() - self.a1 - self.fluid_a2() - gravity)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SobolevModel {
    /// `B = A⁻¹C`; the motion is `x' = iΩBx`.
    pub b: SmallMatrix,
    pub metric: IndefiniteMetric,
    pub l: f64,
    pub k: f64,
}

/// Reduced three-mode model `(Z, W, ξ)` with its metric `G`.
pub fn build_sobolev(p: &SobolevParams) -> Result<SobolevModel> {
    positive("a", p.a)?;
    positive("c", p.c)?;
    positive("rho", p.rho)?;
    let (a, c, rho) = (p.a, p.c, p.rho);
    let (a2, c2) = (a * a, c * c);
    let m = p.m_ratio();
    let l = p.l_const()?;
    let k4 = 4.0 * PI * rho / 15.0;
    let a22 = p.a1 + p.l2 * p.l2 * p.m2 + k4 * a2 * c * (c2 - a2).powi(2) / (c2 + a2);
    let a33 = c2 + a2;
    let scale = p.a1.abs() + p.l2 * p.l2 * p.m2.abs() + k4 * a2 * c * (a2 + c2) + 1.0;
    if a22.abs() <= 1e-14 * scale {
        return Err(Error::SingularA);
    }
    let c22 = p.c1 - 2.0 * p.a1 - 2.0 * p.l2 * p.l2 * p.m2 - 2.0 * k4 * a2 * c.powi(3) * m * m;
    let c23 = -2.0 * k4 * a2 * a2 * c.powi(3) * m * m;
    let cmat = RMatrix::from_rows(&[&[0.0, 1.0, 0.0], &[l, c22, c23], &[0.0, -2.0, -2.0 * a2]])?;
    // A is diagonal, so A⁻¹C scales the rows of C
    let b = RMatrix::diag(&[1.0, 1.0 / a22, 1.0 / a33]).checked_mul(&cmat)?;
    let g33 = k4 * a2 * a2 * c.powi(3) * (c2 - a2).powi(2) / (c2 + a2);
    let gram = RMatrix::diag(&[l, a22, g33]);
    let gb = gram.checked_mul(&b)?;
    if (&gb - &gb.transpose()).norm_fro() > 1e-10 * gb.norm_fro().max(f64::MIN_POSITIVE) {
        return Err(Error::NotHermitian);
    }
    Ok(SobolevModel {
        b: SmallMatrix::from_real(&b),
        metric: IndefiniteMetric::new(SmallMatrix::from_real(&gram))?,
        l,
        k: p.k_const(),
    })
}

/// `λ₁ = −1`, `λ₂± = −1/2 ± ½√(1 + 8a²/(a² − c²))` for the massless shell.
pub fn sobolev_massless_spectrum(a: f64, c: f64) -> Result<[Complex64; 3]> {
    positive("a", a)?;
    positive("c", c)?;
    if a == c {
        return Err(Error::InvalidParameter("spherical cavity (c = a) is excluded".into()));
    }
    let r = Complex64::new(1.0 + 8.0 * a * a / (a * a - c * c), 0.0).sqrt() * 0.5;
    let h = Complex64::new(-0.5, 0.0);
    Ok([Complex64::new(-1.0, 0.0), h - r, h + r])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::krein::krein_spectrum;
    use crate::smallalg::matrix_eigen;
    use crate::tol;

    fn closest(vals: &[Complex64], z: Complex64) -> f64 {
        vals.iter().map(|v| (v - z).norm()).fold(f64::INFINITY, f64::min)
    }

    #[test]
    fn massless_l_matches_closed_form() {
        let p = SobolevParams::massless(1.0, 2.0, 0.7);
        let expect = 4.0 * PI * 0.7 / 15.0 * 2.0 * (1.0 - 4.0);
        assert!((p.l_const().unwrap() - expect).abs() < 1e-14);
    }

    #[test]
    fn massless_spectrum_agrees() {
        for c in [0.5, 2.0, 2.5, 4.0] {
            let m = build_sobolev(&SobolevParams::massless(1.0, c, 1.3)).unwrap();
            let vals: Vec<Complex64> = matrix_eigen(&m.b, tol::EIG).unwrap().iter().map(|e| e.value).collect();
            for z in sobolev_massless_spectrum(1.0, c).unwrap() {
                assert!(closest(&vals, z) < 1e-9, "c={c} z={z}");
            }
        }
    }

    #[test]
    fn greenhill_zone() {
        let complex = |c: f64| sobolev_massless_spectrum(1.0, c).unwrap()[2].im != 0.0;
        assert!(!complex(0.99));
        assert!(complex(1.01));
        assert!(complex(2.99));
        assert!(!complex(3.01));
        let d = sobolev_massless_spectrum(1.0, 3.0).unwrap();
        assert_eq!(d[1], d[2]);
        assert_eq!(d[1], Complex64::new(-0.5, 0.0));
    }

    #[test]
    fn oblate_is_definite() {
        let m = build_sobolev(&SobolevParams::massless(1.0, 0.5, 1.0)).unwrap();
        assert!(m.l > 0.0);
        assert!(m.metric.is_definite());
        let s = krein_spectrum(&m.b, &m.metric, tol::EIG).unwrap();
        assert!(s.iter().all(|e| e.value.im == 0.0 && e.sign == 1));
    }

    #[test]
    fn spherical_cavity_is_singular() {
        assert_eq!(build_sobolev(&SobolevParams::massless(1.0, 1.0, 1.0)), Err(Error::SingularA));
    }

    #[test]
    fn double_root_is_defective() {
        let m = build_sobolev(&SobolevParams::massless(1.0, 3.0, 1.0)).unwrap();
        let eig = matrix_eigen(&m.b, tol::EIG).unwrap();
        let d = eig.iter().find(|e| e.algebraic == 2).unwrap();
        assert!((d.value + 0.5).norm() < 1e-7);
        assert_eq!(d.geometric, 1);
    }
}
