//! Example systems: Ziegler's pendulum, Brouwer's rotating vessel and the
//! triangular Lagrange points, Maclaurin spheroids, Sobolev's top with a
//! fluid-filled cavity, and two parametrically forced coupled oscillators.

mod brouwer;
mod combres;
mod maclaurin;
mod sobolev;
mod ziegler;

pub use brouwer::*;
pub use combres::*;
pub use maclaurin::*;
pub use sobolev::*;
pub use ziegler::*;

use crate::error::{Error, Result};

/// Sign-change bisection of a scalar function on `[lo, hi]` to absolute `tol`.
pub(crate) fn bisect_root<F>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let (flo, fhi) = (f(lo), f(hi));
    if !(flo.is_finite() && fhi.is_finite()) || flo.signum() == fhi.signum() {
        return Err(Error::BracketFailure { lo, hi });
    }
    let neg_lo = flo < 0.0;
    for _ in 0..400 {
        if hi - lo <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if (f(mid) < 0.0) == neg_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

pub(crate) fn positive(name: &str, x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} must be positive, got {x}")))
    }
}

pub(crate) fn nonnegative(name: &str, x: f64) -> Result<()> {
    if x >= 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} must be nonnegative, got {x}")))
    }
}
