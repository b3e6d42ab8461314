//! Sin-power integrals, the spherical volume profile `v`, and its inverse.
//!
//! Everything here is driven by the one-dimensional integrand `sin^(n-1)(t)`
//! on `[0, pi]`. Full-interval values come from the closed Wallis recursion;
//! partial intervals go through adaptive Simpson quadrature.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Absolute tolerance for partial-interval quadrature.
pub const QUAD_TOL: f64 = 1e-12;
/// Recursion depth cap for the adaptive subdivision.
const MAX_DEPTH: u32 = 50;
/// Bisection stops once the bracket is this narrow.
const BISECT_TOL: f64 = 1e-12;

/// `∫_0^pi sin^m(t) dt` by the Wallis recursion.
///
/// `m = 0` gives pi, `m = 1` gives 2, and each further power multiplies by
/// `(m-1)/m`.
pub fn full_sin_integral(m: usize) -> f64 {
    let mut value = if m % 2 == 0 { PI } else { 2.0 };
    let mut k = if m % 2 == 0 { 2 } else { 3 };
    while k <= m {
        value *= (k - 1) as f64 / k as f64;
        k += 2;
    }
    value
}

/// `∫_a^b sin^m(t) dt` for `0 <= a <= b <= pi`.
///
/// The full interval is answered by [`full_sin_integral`]; anything else is
/// integrated adaptively to absolute tolerance [`QUAD_TOL`].
pub fn sin_power_integral(m: usize, a: f64, b: f64) -> Result<f64> {
    check_range("a", a, 0.0, PI)?;
    check_range("b", b, 0.0, PI)?;
    if a > b {
        return Err(Error::InvertedInterval { a, b });
    }
    if a == 0.0 && b == PI {
        return Ok(full_sin_integral(m));
    }
    Ok(integrate(|t| t.sin().powi(m as i32), a, b, QUAD_TOL))
}

fn check_range(what: &'static str, value: f64, min: f64, max: f64) -> Result<()> {
    if !value.is_finite() || value < min || value > max {
        return Err(Error::OutOfDomain {
            what,
            value,
            min,
            max,
        });
    }
    Ok(())
}

/// Adaptive Simpson quadrature with Richardson extrapolation.
///
/// Internal building block; the public surface only exposes the sin-power
/// family and the profile integrals derived from it.
pub(crate) fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let whole = (b - a) * (fa + 4.0 * fm + fb) / 6.0;
    simpson_step(&f, a, b, fa, fm, fb, whole, tol, MAX_DEPTH)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) * (fa + 4.0 * flm + fm) / 6.0;
    let right = (b - m) * (fm + 4.0 * frm + fb) / 6.0;
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        left + right + delta / 15.0
    } else {
        simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
            + simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
}

/// The spherical model profile for a fixed dimension:
/// `v(r) = ∫_0^r sin^(n-1) / ∫_0^pi sin^(n-1)`,
/// the volume fraction of a closed geodesic `r`-ball on the round n-sphere.
#[derive(Debug, Clone)]
pub struct ModelProfile {
    dim: usize,
    total: f64,
    tolerance: f64,
}

impl ModelProfile {
    /// Profile for the round `dim`-sphere, `dim >= 1`.
    pub fn new(dim: usize) -> Result<Self> {
        if dim < 1 {
            return Err(Error::InvalidDimension { dim });
        }
        Ok(ModelProfile {
            dim,
            total: full_sin_integral(dim - 1),
            tolerance: 1e-10,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `∫_0^pi sin^(dim-1)(t) dt`, cached at construction.
    pub fn total(&self) -> f64 {
        self.total
    }

    /// Guaranteed absolute accuracy of `v` round trips.
    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    /// Volume fraction `v(r)` for `r` in `[0, pi]`.
    pub fn v(&self, r: f64) -> Result<f64> {
        check_range("r", r, 0.0, PI)?;
        Ok(self.v_clamped(r))
    }

    /// `v` with the argument clamped into `[0, pi]`; for internal integrands
    /// whose nodes may fall a rounding error outside the domain.
    pub(crate) fn v_clamped(&self, r: f64) -> f64 {
        let r = r.clamp(0.0, PI);
        if r == 0.0 {
            return 0.0;
        }
        if r == PI {
            return 1.0;
        }
        integrate(|t| t.sin().powi((self.dim - 1) as i32), 0.0, r, QUAD_TOL) / self.total
    }

    /// The unique `r` with `v(r) = y`, by bisection.
    ///
    /// Bisection rather than Newton: `v'` vanishes at both endpoints for
    /// `dim >= 2`.
    pub fn v_inverse(&self, y: f64) -> Result<f64> {
        check_range("y", y, 0.0, 1.0)?;
        if y == 0.0 {
            return Ok(0.0);
        }
        if y == 1.0 {
            return Ok(PI);
        }
        let mut lo = 0.0_f64;
        let mut hi = PI;
        while hi - lo > BISECT_TOL {
            let mid = 0.5 * (lo + hi);
            if self.v_clamped(mid) < y {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }
}
