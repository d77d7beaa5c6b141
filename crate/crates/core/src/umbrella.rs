//! Whitney umbrella coordinates for the stability boundary, the set of
//! exceptional points, heavy damping, and minimization of the spectral
//! abscissa over an affine family of monic polynomials.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hurwitz::hurwitz_h;
use crate::msystem::QuarticPoly;
use crate::smallalg::{max_real, poly_roots, Poly, Root};
use crate::tol;

/// A point `(y1, y2, y3)`; on the umbrella when `y3² = y1 y2²`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WhitneyPoint {
    pub y1: f64,
    pub y2: f64,
    pub y3: f64,
}

impl WhitneyPoint {
    pub fn umbrella_residual(&self) -> f64 {
        self.y3 * self.y3 - self.y1 * self.y2 * self.y2
    }
}

/// `(x1, x2) ↦ (x1², x2, x1 x2)`.
pub fn whitney_map(x1: f64, x2: f64) -> WhitneyPoint {
    WhitneyPoint { y1: x1 * x1, y2: x2, y3: x1 * x2 }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branch {
    Plus,
    Minus,
}

/// Quartic coefficients `(a1, a3, a2)` at `a4 = 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BottemaPoint {
    pub a1: f64,
    pub a3: f64,
    pub a2: f64,
}

impl BottemaPoint {
    pub fn quartic(&self) -> QuarticPoly {
        QuarticPoly::new(self.a1, self.a2, self.a3, 1.0)
    }

    /// `H` of the quartic with `a4 = 1`.
    pub fn h(&self) -> f64 {
        hurwitz_h(&self.quartic())
    }
}

/// `a1 = y3/2 + w`, `a3 = −y3/2 + w`, `a2 = 2 + y2` with `w = ±√(y3²/4 + y1 y2)`.
/// Under this change of variables `H = y3² − y1 y2²`.
pub fn bottema_from_whitney(y: &WhitneyPoint, branch: Branch) -> Result<BottemaPoint> {
    let rad = 0.25 * y.y3 * y.y3 + y.y1 * y.y2;
    if rad < 0.0 {
        return Err(Error::NegativeWRadicand);
    }
    let w = match branch {
        Branch::Plus => rad.sqrt(),
        Branch::Minus => -rad.sqrt(),
    };
    Ok(BottemaPoint { a1: 0.5 * y.y3 + w, a3: -0.5 * y.y3 + w, a2: 2.0 + y.y2 })
}

/// Inverse chart: `y2 = a2 − 2`, `y3 = a1 − a3`, `y1 = a1 a3 / y2`.
pub fn whitney_from_bottema(p: &BottemaPoint) -> Result<WhitneyPoint> {
    let y2 = p.a2 - 2.0;
    if y2 == 0.0 {
        return Err(Error::DegenerateInput("a2 = 2 has no umbrella preimage".into()));
    }
    Ok(WhitneyPoint { y1: p.a1 * p.a3 / y2, y2, y3: p.a1 - p.a3 })
}

/// A point of the exceptional-point set with its two double roots.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EpPoint {
    pub quartic: QuarticPoly,
    pub roots: [Complex64; 2],
}

/// `(a1, 2 + a1²/4, a1, 1) = (λ² + a1 λ/2 + 1)²`; double roots `−a1/4 ∓ √(a1² − 16)/4`.
pub fn ep_set_point(a1: f64) -> EpPoint {
    let s = Complex64::new(a1 * a1 - 16.0, 0.0).sqrt() * 0.25;
    let base = Complex64::new(-0.25 * a1, 0.0);
    EpPoint {
        quartic: QuarticPoly::new(a1, 2.0 + 0.25 * a1 * a1, a1, 1.0),
        roots: [base - s, base + s],
    }
}

/// True when all roots are real, negative and pairwise separated by more than `tol`.
pub fn heavy_damping_test(q: &QuarticPoly, tol: f64) -> Result<bool> {
    let roots = poly_roots(&q.to_poly(), tol::EIG)?;
    if roots.iter().any(|r| r.multiplicity > 1) {
        return Ok(false);
    }
    let all_real = roots.iter().all(|r| r.value.im.abs() <= tol * r.value.norm().max(1.0));
    let negative = roots.iter().all(|r| r.value.re < 0.0);
    let mut re: Vec<f64> = roots.iter().map(|r| r.value.re).collect();
    re.sort_by(f64::total_cmp);
    let separated = re.windows(2).all(|w| w[1] - w[0] > tol);
    Ok(all_real && negative && separated)
}

/// Largest real part of the roots.
pub fn poly_abscissa(p: &Poly) -> Result<f64> {
    Ok(max_real(&poly_roots(p, tol::EIG)?))
}

/// Linear constraint `b0 + Σ_{j=1..n} b_j a_j = 0` on the coefficients of
/// `λⁿ + a1 λⁿ⁻¹ + … + an`.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineConstraint {
    pub b: Vec<Complex64>,
}

impl AffineConstraint {
    pub fn new(b: Vec<Complex64>) -> Self {
        AffineConstraint { b }
    }

    pub fn real(b: &[f64]) -> Self {
        AffineConstraint { b: b.iter().map(|&x| Complex64::new(x, 0.0)).collect() }
    }

    /// Polynomial degree `n`.
    pub fn n(&self) -> usize {
        self.b.len().saturating_sub(1)
    }

    /// Value of the constraint at a monic polynomial's coefficients `a1..an`.
    pub fn residual(&self, a: &[Complex64]) -> Complex64 {
        self.b[0] + self.b[1..].iter().zip(a).map(|(b, a)| b * a).sum::<Complex64>()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Field {
    Real,
    Complex,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AbscissaMin {
    /// Infimum of the abscissa over the constrained family.
    pub a_star: f64,
    /// Whether the infimum is a minimum.
    pub attained: bool,
    /// The common root of the minimizer `(λ − γ)ⁿ`.
    pub gamma: Complex64,
    /// The minimizer, when attained.
    pub p_star: Option<Poly>,
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// `h(z) = Σ b_j C(n, j) z^j`; `(λ − γ)ⁿ` satisfies the constraint iff `h(−γ) = 0`.
pub fn constraint_polynomial(c: &AffineConstraint) -> Poly {
    let n = c.n();
    Poly::new(c.b.iter().enumerate().map(|(j, &b)| b * binomial(n, j)).collect())
}

/// Infimum of the spectral abscissa over monic degree-n polynomials
/// satisfying the constraint.
///
/// Real field: `a* = −max{ζ ∈ ℝ : h^(i)(ζ) = 0, 0 ≤ i < k}` with `k` the
/// degree of `h`; attained iff that ζ is a root of `h` itself.
/// Complex field: `−γ` is the root of `h` with the largest real part.
pub fn abscissa_min_affine(c: &AffineConstraint, field: Field) -> Result<AbscissaMin> {
    let n = c.n();
    if n == 0 {
        return Err(Error::InvalidConstraint("constraint needs at least b0 and b1".into()));
    }
    if c.b[1..].iter().all(|b| *b == Complex64::new(0.0, 0.0)) {
        return Err(Error::InvalidConstraint("all coefficients b1..bn are zero".into()));
    }
    let h = constraint_polynomial(c);
    let k = h.degree();
    let power = |gamma: Complex64| Poly::from_roots(&vec![gamma; n]);
    match field {
        Field::Complex => {
            let roots = poly_roots(&h, tol::EIG)?;
            let r = roots
                .iter()
                .max_by(|a, b| a.value.re.total_cmp(&b.value.re))
                .ok_or(Error::NoRealCriticalPoint)?;
            let gamma = -r.value;
            Ok(AbscissaMin { a_star: gamma.re, attained: true, gamma, p_star: Some(power(gamma)) })
        }
        Field::Real => {
            if c.b.iter().any(|b| b.im != 0.0) {
                return Err(Error::InvalidConstraint("real field needs real coefficients".into()));
            }
            let mut best: Option<(f64, bool)> = None;
            let mut d = h.clone();
            for i in 0..k {
                for r in poly_roots(&d, tol::EIG)? {
                    if r.value.im != 0.0 {
                        continue;
                    }
                    let z = r.value.re;
                    match best {
                        Some((b, _)) if b > z => {}
                        Some((b, hit)) if b == z => best = Some((b, hit || i == 0)),
                        _ => best = Some((z, i == 0)),
                    }
                }
                d = d.derivative();
            }
            let (zeta, from_h) = best.ok_or(Error::NoRealCriticalPoint)?;
            let scale = h.coeffs().iter().map(|x| x.norm()).fold(0.0, f64::max);
            let attained = from_h
                || h.eval(Complex64::new(zeta, 0.0)).norm() <= 1e3 * tol::EIG * scale * zeta.abs().max(1.0).powi(k as i32);
            let gamma = Complex64::new(-zeta, 0.0);
            Ok(AbscissaMin {
                a_star: -zeta,
                attained,
                gamma,
                p_star: attained.then(|| power(gamma)),
            })
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProbeLabel {
    /// All roots real, negative and simple.
    HeavyDamped,
    /// A repeated root: the point lies on the discriminant surface.
    Discriminant,
    Other,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProbePoint {
    pub point: BottemaPoint,
    pub label: ProbeLabel,
}

fn grid(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |i| if n <= 1 { lo } else { lo + (hi - lo) * i as f64 / (n - 1) as f64 })
}

fn label(p: &BottemaPoint) -> Result<ProbeLabel> {
    let roots = poly_roots(&p.quartic().to_poly(), tol::EIG)?;
    if roots.iter().any(|r| r.multiplicity > 1) {
        return Ok(ProbeLabel::Discriminant);
    }
    if roots.iter().all(|r| r.value.im == 0.0 && r.value.re < 0.0) {
        return Ok(ProbeLabel::HeavyDamped);
    }
    Ok(ProbeLabel::Other)
}

/// Label every point of an `(a1, a3, a2)` grid at `a4 = 1`.
pub fn discriminant_swallowtail_probe(
    a1: (f64, f64),
    a3: (f64, f64),
    a2: (f64, f64),
    counts: (usize, usize, usize),
) -> Result<Vec<ProbePoint>> {
    let mut out = Vec::with_capacity(counts.0 * counts.1 * counts.2);
    for x in grid(a1.0, a1.1, counts.0) {
        for z in grid(a3.0, a3.1, counts.1) {
            for y in grid(a2.0, a2.1, counts.2) {
                let point = BottemaPoint { a1: x, a3: z, a2: y };
                out.push(ProbePoint { point, label: label(&point)? });
            }
        }
    }
    Ok(out)
}

/// Heavy-damping indicator: every root is real and negative.
fn all_roots_real_negative(p: &BottemaPoint) -> Result<bool> {
    let roots = poly_roots(&p.quartic().to_poly(), tol::EIG)?;
    Ok(roots.iter().all(|r| r.value.im == 0.0 && r.value.re < 0.0))
}

/// Monic quartic with roots `−e^{u1}, −e^{u2}, −e^{u3}, −e^{−u1−u2−u3}`.
fn from_log_roots(u: [f64; 3]) -> BottemaPoint {
    let r = [u[0].exp(), u[1].exp(), u[2].exp(), (-u[0] - u[1] - u[2]).exp()];
    let e1: f64 = r.iter().sum();
    let mut e2 = 0.0;
    let mut e3 = 0.0;
    for i in 0..4 {
        for j in i + 1..4 {
            e2 += r[i] * r[j];
            for k in j + 1..4 {
                e3 += r[i] * r[j] * r[k];
            }
        }
    }
    BottemaPoint { a1: e1, a3: e3, a2: e2 }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CuspEstimate {
    pub point: BottemaPoint,
    /// Box half-width (in log-root coordinates) at the last level.
    pub half_width: f64,
    pub levels: usize,
}

/// Locate the vertex of the heavy-damping region by recursive box
/// refinement, starting from a heavy-damped point `start`.
///
/// Near the vertex the region is a thin spire: at distance `d` its
/// cross-section is of order `d^{3/2} × d²`, so boxes in `(a1, a3, a2)` stop
/// containing region points long before they reach the vertex. The boxes
/// are therefore laid out in the coordinates `u_i = ln(−r_i)` of the first
/// three roots (the fourth fixed by `a4 = 1`), where every grid point maps to
/// a heavy-damped quartic. On each level the point with the smallest
/// `a1 + a3 + a2` becomes the new centre and the box shrinks; the vertex is
/// the unique minimizer of that sum over the region (AM–GM on the roots).
pub fn locate_swallowtail_cusp(
    start: BottemaPoint,
    half_width: f64,
    per_axis: usize,
    levels: usize,
    shrink: f64,
) -> Result<CuspEstimate> {
    if per_axis < 2 || !(shrink > 0.0 && shrink < 1.0) || !(half_width > 0.0) {
        return Err(Error::InvalidParameter("need per_axis >= 2, 0 < shrink < 1 and half_width > 0".into()));
    }
    if !all_roots_real_negative(&start)? {
        return Err(Error::InvalidParameter("start point is not heavy-damped".into()));
    }
    let mut r: Vec<f64> = flatten_real(&poly_roots(&start.quartic().to_poly(), tol::EIG)?);
    r.sort_by(f64::total_cmp);
    let mut c = [(-r[0]).ln(), (-r[1]).ln(), (-r[2]).ln()];
    let mut w = half_width;
    for _ in 0..levels {
        let mut best = (f64::INFINITY, c);
        for x in grid(c[0] - w, c[0] + w, per_axis) {
            for y in grid(c[1] - w, c[1] + w, per_axis) {
                for z in grid(c[2] - w, c[2] + w, per_axis) {
                    let p = from_log_roots([x, y, z]);
                    let score = p.a1 + p.a3 + p.a2;
                    if score < best.0 {
                        best = (score, [x, y, z]);
                    }
                }
            }
        }
        c = best.1;
        w *= shrink;
    }
    Ok(CuspEstimate { point: from_log_roots(c), half_width: w, levels })
}

fn flatten_real(roots: &[Root]) -> Vec<f64> {
    roots.iter().flat_map(|r| std::iter::repeat_n(r.value.re, r.multiplicity)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn whitney_examples() {
        assert_eq!(whitney_map(0.0, 1.0), WhitneyPoint { y1: 0.0, y2: 1.0, y3: 0.0 });
        assert_eq!(whitney_map(1.0, 1.0), WhitneyPoint { y1: 1.0, y2: 1.0, y3: 1.0 });
        let p = bottema_from_whitney(&WhitneyPoint { y1: 0.0, y2: 1.5, y3: 0.0 }, Branch::Plus).unwrap();
        assert_eq!(p, BottemaPoint { a1: 0.0, a3: 0.0, a2: 3.5 });
        let p = bottema_from_whitney(&WhitneyPoint { y1: 1.0, y2: 1.0, y3: 0.0 }, Branch::Plus).unwrap();
        assert_eq!(p, BottemaPoint { a1: 1.0, a3: 1.0, a2: 3.0 });
        assert_eq!(p.h(), -1.0);
        assert_eq!(
            bottema_from_whitney(&WhitneyPoint { y1: -1.0, y2: 1.0, y3: 0.0 }, Branch::Plus),
            Err(Error::NegativeWRadicand)
        );
    }

    #[test]
    fn chart_roundtrip() {
        let y = WhitneyPoint { y1: 0.7, y2: 1.3, y3: -0.4 };
        let p = bottema_from_whitney(&y, Branch::Minus).unwrap();
        let back = whitney_from_bottema(&p).unwrap();
        assert!((back.y1 - y.y1).abs() < 1e-14);
        assert!((back.y2 - y.y2).abs() < 1e-14);
        assert!((back.y3 - y.y3).abs() < 1e-14);
    }

    #[test]
    fn ep_points() {
        let e = ep_set_point(4.0);
        assert_eq!(e.quartic, QuarticPoly::new(4.0, 6.0, 4.0, 1.0));
        assert_eq!(e.roots[0], Complex64::new(-1.0, 0.0));
        let e = ep_set_point(5.0);
        assert_eq!(e.roots, [Complex64::new(-2.0, 0.0), Complex64::new(-0.5, 0.0)]);
        let r = poly_roots(&ep_set_point(2.0).quartic.to_poly(), tol::EIG).unwrap();
        assert_eq!(r.len(), 2);
        assert!(r.iter().all(|x| x.multiplicity == 2));
    }

    #[test]
    fn heavy_damping() {
        // (λ+1)^4 − 0.1 has two complex roots
        assert!(!heavy_damping_test(&QuarticPoly::new(4.0, 6.0, 4.0, 0.9), 1e-9).unwrap());
        // roots −0.5, −0.8, −1.25, −2 (product 1)
        let p = Poly::from_roots(&[-0.5, -0.8, -1.25, -2.0].map(|x| Complex64::new(x, 0.0)));
        let c = p.coeffs();
        let q = QuarticPoly::new(c[3].re, c[2].re, c[1].re, c[0].re);
        assert!(heavy_damping_test(&q, 1e-9).unwrap());
        assert!(!heavy_damping_test(&QuarticPoly::new(4.0, 6.0, 4.0, 1.0), 1e-9).unwrap());
    }

    #[test]
    fn abscissa_of_quartic() {
        let a = poly_abscissa(&Poly::from_descending(&[1.0, 0.0, 6.0, 0.0, 25.0])).unwrap();
        assert!((a - 1.0).abs() < 1e-12);
    }

    #[test]
    fn abscissa_min_unit_constant() {
        let c = AffineConstraint::real(&[-1.0, 0.0, 0.0, 0.0, 1.0]);
        let m = abscissa_min_affine(&c, Field::Real).unwrap();
        assert_eq!(m.a_star, -1.0);
        assert!(m.attained);
        let p = m.p_star.unwrap();
        let expect = Poly::from_descending(&[1.0, 4.0, 6.0, 4.0, 1.0]);
        assert!(p.coeffs().iter().zip(expect.coeffs()).all(|(a, b)| (a - b).norm() < 1e-14));
    }

    #[test]
    fn abscissa_min_not_attained() {
        // a2 = −1 for λ² + a1 λ + a2: infimum 0, never reached
        let c = AffineConstraint::real(&[1.0, 0.0, 1.0]);
        let m = abscissa_min_affine(&c, Field::Real).unwrap();
        assert_eq!(m.a_star, 0.0);
        assert!(!m.attained);
        assert!(m.p_star.is_none());
        // over ℂ the minimizer is (λ ∓ i)² with abscissa 0
        let m = abscissa_min_affine(&c, Field::Complex).unwrap();
        assert!(m.a_star.abs() < 1e-14 && m.attained);
    }

    #[test]
    fn abscissa_min_rejects_zero() {
        let c = AffineConstraint::real(&[0.0, 0.0, 0.0]);
        assert!(matches!(abscissa_min_affine(&c, Field::Real), Err(Error::InvalidConstraint(_))));
    }

    #[test]
    fn probe_labels() {
        let pts = discriminant_swallowtail_probe((4.0, 4.0), (4.0, 4.0), (6.0, 6.0), (1, 1, 1)).unwrap();
        assert_eq!(pts[0].label, ProbeLabel::Discriminant);
        let pts = discriminant_swallowtail_probe((0.0, 0.0), (0.0, 0.0), (3.0, 3.0), (1, 1, 1)).unwrap();
        assert_eq!(pts[0].label, ProbeLabel::Other);
    }

    #[test]
    fn cusp_search() {
        let est = locate_swallowtail_cusp(BottemaPoint { a1: 4.5, a3: 4.5, a2: 7.0 }, 0.5, 5, 50, 0.7).unwrap();
        assert!((est.point.a1 - 4.0).abs() < 1e-6 && (est.point.a3 - 4.0).abs() < 1e-6 && (est.point.a2 - 6.0).abs() < 1e-6);
        let p = from_log_roots([0.3, -0.2, 0.1]);
        assert!(all_roots_real_negative(&p).unwrap());
        let v = p.quartic().to_poly().eval(Complex64::new(-0.3f64.exp(), 0.0));
        assert!(v.norm() < 1e-13);
        assert!(locate_swallowtail_cusp(BottemaPoint { a1: 0.0, a3: 0.0, a2: 2.0 }, 0.5, 5, 5, 0.7).is_err());
    }
}