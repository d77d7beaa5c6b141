use super::{nonnegative, positive};
use crate::error::Result;
use crate::msystem::{decompose, MechanicalSystem};
use crate::paradox::load_onset;
use crate::smallalg::RMatrix;

/// Double pendulum under a follower load with equal joint damping,
/// masses `2m` and `m`, rod length `l`, joint stiffness `c`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ZieglerParams {
    pub m: f64,
    pub c: f64,
    pub l: f64,
    pub p: f64,
    pub b: f64,
}

impl Default for ZieglerParams {
    fn default() -> Self {
        ZieglerParams { m: 1.0, c: 1.0, l: 1.0, p: 0.0, b: 0.0 }
    }
}

impl ZieglerParams {
    pub fn validate(&self) -> Result<()> {
        positive("m", self.m)?;
        positive("c", self.c)?;
        positive("l", self.l)?;
        nonnegative("b", self.b)?;
        if !self.p.is_finite() {
            return Err(crate::Error::InvalidParameter("P must be finite".into()));
        }
        Ok(())
    }
}

pub fn build_ziegler(p: &ZieglerParams) -> Result<MechanicalSystem> {
    p.validate()?;
    let ml2 = p.m * p.l * p.l;
    let pl = p.p * p.l;
    let m = RMatrix::from_rows(&[&[3.0 * ml2, ml2], &[ml2, ml2]])?;
    let d = RMatrix::from_rows(&[&[2.0 * p.b, -p.b], &[-p.b, p.b]])?;
    let a = RMatrix::from_rows(&[&[-pl + 2.0 * p.c, pl - p.c], &[-p.c, p.c]])?;
    Ok(decompose(&a, &d, &m)?.with_labels(&["phi1", "phi2"]))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ZieglerCriticals {
    /// Flutter load without damping, `(7/2 − √2) c/l`.
    pub pk_undamped: f64,
    /// Onset with damping `b`, `41/28·c/l + b²/(2ml³)`.
    pub pk_damped: f64,
    /// Limit of the damped onset as `b → 0`, `41/28·c/l`.
    pub pk_limit: f64,
}

pub fn ziegler_criticals(p: &ZieglerParams) -> ZieglerCriticals {
    let cl = p.c / p.l;
    ZieglerCriticals {
        pk_undamped: (3.5 - std::f64::consts::SQRT_2) * cl,
        pk_damped: 41.0 / 28.0 * cl + p.b * p.b / (2.0 * p.m * p.l.powi(3)),
        pk_limit: 41.0 / 28.0 * cl,
    }
}

/// Onset load found from the spectrum by scanning `P ∈ (0, 3c/l)`.
pub fn ziegler_onset(p: &ZieglerParams) -> Result<f64> {
    p.validate()?;
    let hi = 3.0 * p.c / p.l;
    let found = load_onset(|load| build_ziegler(&ZieglerParams { p: load, ..*p }), (0.0, hi), 61, 1e-10)?;
    Ok(found.onset)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::msystem::system_abscissa;

    #[test]
    fn matrices() {
        let s = build_ziegler(&ZieglerParams { p: 0.5, b: 0.1, ..Default::default() }).unwrap();
        assert_eq!(s.m.rows(), vec![vec![3.0, 1.0], vec![1.0, 1.0]]);
        assert_eq!(s.d.rows(), vec![vec![0.2, -0.1], vec![-0.1, 0.1]]);
        // K + N reproduces the positional matrix
        let a = s.positional();
        assert_eq!(a.rows(), vec![vec![1.5, -0.5], vec![-1.0, 1.0]]);
        assert!(s.g.is_zero());
    }

    #[test]
    fn criticals() {
        let c = ziegler_criticals(&ZieglerParams::default());
        assert!((c.pk_undamped - 2.085_786_437_626_905).abs() < 1e-15);
        assert_eq!(c.pk_limit, 41.0 / 28.0);
        assert_eq!(c.pk_damped, 41.0 / 28.0);
        let c = ziegler_criticals(&ZieglerParams { b: 1.0, ..Default::default() });
        assert_eq!(c.pk_damped, 41.0 / 28.0 + 0.5);
    }

    #[test]
    fn flutter_without_damping() {
        let a0 = system_abscissa(&build_ziegler(&ZieglerParams::default()).unwrap()).unwrap();
        assert!(a0.abs() < 1e-12);
        let a = system_abscissa(&build_ziegler(&ZieglerParams { p: 2.2, ..Default::default() }).unwrap()).unwrap();
        assert!(a > 0.1);
    }

    #[test]
    fn damped_onset() {
        let b = 0.1;
        let on = ziegler_onset(&ZieglerParams { b, ..Default::default() }).unwrap();
        assert!((on - (41.0 / 28.0 + b * b / 2.0)).abs() < 1e-6, "{on}");
    }
}
