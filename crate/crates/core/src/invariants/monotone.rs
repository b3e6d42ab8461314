//! Strictly monotone weight functions on `[0, pi]` with exact inverses.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Grid resolution of the construction-time monotonicity and round-trip
/// checks.
const CHECK_GRID: usize = 10_000;
/// Allowed `|f^-1(f(r)) - r|` on the check grid.
const ROUND_TRIP_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Increasing,
    Decreasing,
}

#[derive(Debug, Clone)]
enum Kind {
    Identity,
    /// `a r + b`, `a != 0`.
    Affine { scale: f64, offset: f64 },
    /// `r^p`, `p > 0`.
    Power { exponent: f64 },
    /// `exp(c r)`, `c != 0`.
    Exponential { rate: f64 },
    /// Piecewise-linear through knots covering `[0, pi]`.
    Table { xs: Vec<f64>, ys: Vec<f64> },
}

/// A continuous, strictly monotone function on `[0, pi]` together with its
/// inverse and direction. Built-ins cover the identity, affine maps, powers
/// and exponentials; arbitrary shapes come in as monotone tables.
#[derive(Debug, Clone)]
pub struct MonotoneFunction {
    kind: Kind,
    direction: Direction,
}

impl MonotoneFunction {
    pub fn identity() -> Self {
        MonotoneFunction {
            kind: Kind::Identity,
            direction: Direction::Increasing,
        }
    }

    /// `f(r) = scale * r + offset`.
    pub fn affine(scale: f64, offset: f64) -> Result<Self> {
        if !(scale.is_finite() && offset.is_finite()) || scale == 0.0 {
            return Err(Error::NotStrictlyMonotone { at: 0.0 });
        }
        Ok(MonotoneFunction {
            kind: Kind::Affine { scale, offset },
            direction: if scale > 0.0 {
                Direction::Increasing
            } else {
                Direction::Decreasing
            },
        })
    }

    /// `f(r) = r^p` for `p > 0`.
    pub fn power(exponent: f64) -> Result<Self> {
        if !(exponent.is_finite() && exponent > 0.0) {
            return Err(Error::NotStrictlyMonotone { at: 0.0 });
        }
        Ok(MonotoneFunction {
            kind: Kind::Power { exponent },
            direction: Direction::Increasing,
        })
    }

    /// `f(r) = exp(rate * r)` for `rate != 0`.
    pub fn exponential(rate: f64) -> Result<Self> {
        if !rate.is_finite() || rate == 0.0 {
            return Err(Error::NotStrictlyMonotone { at: 0.0 });
        }
        Ok(MonotoneFunction {
            kind: Kind::Exponential { rate },
            direction: if rate > 0.0 {
                Direction::Increasing
            } else {
                Direction::Decreasing
            },
        })
    }

    /// Monotone piecewise-linear interpolation through `(r, f(r))` knots.
    /// The abscissae must strictly increase and cover `[0, pi]`.
    pub fn from_table(points: &[(f64, f64)]) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::TableTooShort);
        }
        let xs: Vec<f64> = points.iter().map(|p| p.0).collect();
        let ys: Vec<f64> = points.iter().map(|p| p.1).collect();
        if xs[0] != 0.0 || *xs.last().unwrap() < PI || xs.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::BadTableDomain);
        }
        if ys.iter().any(|y| !y.is_finite()) {
            return Err(Error::NotStrictlyMonotone { at: 0.0 });
        }
        let increasing = ys[1] > ys[0];
        for w in ys.windows(2) {
            let ok = if increasing { w[1] > w[0] } else { w[1] < w[0] };
            if !ok {
                return Err(Error::NotStrictlyMonotone { at: w[0] });
            }
        }
        let f = MonotoneFunction {
            kind: Kind::Table { xs, ys },
            direction: if increasing {
                Direction::Increasing
            } else {
                Direction::Decreasing
            },
        };
        f.check_grid()?;
        Ok(f)
    }

    /// Parse a compact tag: `id`, `pow<p>`, `exp<rate>`, `scale<a>`.
    pub fn from_tag(tag: &str) -> Result<Self> {
        let unknown = || Error::UnknownFunctionTag {
            tag: tag.to_string(),
        };
        if tag == "id" || tag == "identity" {
            return Ok(Self::identity());
        }
        if let Some(rest) = tag.strip_prefix("pow") {
            let p: f64 = rest.parse().map_err(|_| unknown())?;
            return Self::power(p);
        }
        if let Some(rest) = tag.strip_prefix("exp") {
            let rate: f64 = if rest.is_empty() {
                1.0
            } else {
                rest.parse().map_err(|_| unknown())?
            };
            return Self::exponential(rate);
        }
        if let Some(rest) = tag.strip_prefix("scale") {
            let a: f64 = rest.parse().map_err(|_| unknown())?;
            return Self::affine(a, 0.0);
        }
        Err(unknown())
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn is_increasing(&self) -> bool {
        self.direction == Direction::Increasing
    }

    /// `f(r)`.
    pub fn forward(&self, r: f64) -> f64 {
        match &self.kind {
            Kind::Identity => r,
            Kind::Affine { scale, offset } => scale * r + offset,
            Kind::Power { exponent } => r.powf(*exponent),
            Kind::Exponential { rate } => (rate * r).exp(),
            Kind::Table { xs, ys } => {
                let i = segment(xs, r);
                let t = (r - xs[i]) / (xs[i + 1] - xs[i]);
                ys[i] + t * (ys[i + 1] - ys[i])
            }
        }
    }

    /// `f^-1(y)` on `[f(0), f(pi)]` (flipped when decreasing).
    pub fn inverse(&self, y: f64) -> f64 {
        match &self.kind {
            Kind::Identity => y,
            Kind::Affine { scale, offset } => (y - offset) / scale,
            Kind::Power { exponent } => y.max(0.0).powf(1.0 / exponent),
            Kind::Exponential { rate } => y.ln() / rate,
            Kind::Table { xs, ys } => {
                let i = value_segment(ys, y, self.is_increasing());
                let span = ys[i + 1] - ys[i];
                let t = if span == 0.0 { 0.0 } else { (y - ys[i]) / span };
                xs[i] + t * (xs[i + 1] - xs[i])
            }
        }
    }

    /// Strict monotonicity and inverse round trips on a dense grid of
    /// `[0, pi]`; continuity is asserted by the same sampling.
    pub fn check_grid(&self) -> Result<()> {
        let mut prev = self.forward(0.0);
        if !prev.is_finite() {
            return Err(Error::NotStrictlyMonotone { at: 0.0 });
        }
        for k in 1..=CHECK_GRID {
            let r = k as f64 * PI / CHECK_GRID as f64;
            let y = self.forward(r);
            if !y.is_finite() {
                return Err(Error::NotStrictlyMonotone { at: r });
            }
            let ok = match self.direction {
                Direction::Increasing => y > prev,
                Direction::Decreasing => y < prev,
            };
            if !ok {
                return Err(Error::NotStrictlyMonotone { at: r });
            }
            prev = y;
            let back = self.inverse(y);
            let error = (back - r).abs();
            if !(error <= ROUND_TRIP_TOL) {
                return Err(Error::InverseRoundTrip { r, error });
            }
        }
        Ok(())
    }
}

/// Index of the knot interval containing `r` (clamped to the table range).
fn segment(xs: &[f64], r: f64) -> usize {
    match xs.binary_search_by(|x| x.total_cmp(&r)) {
        Ok(i) => i.min(xs.len() - 2),
        Err(0) => 0,
        Err(i) => (i - 1).min(xs.len() - 2),
    }
}

fn value_segment(ys: &[f64], y: f64, increasing: bool) -> usize {
    let n = ys.len();
    if increasing {
        match ys.binary_search_by(|v| v.total_cmp(&y)) {
            Ok(i) => i.min(n - 2),
            Err(0) => 0,
            Err(i) => (i - 1).min(n - 2),
        }
    } else {
        // decreasing: find i with ys[i] >= y >= ys[i+1]
        match ys.binary_search_by(|v| y.total_cmp(v)) {
            Ok(i) => i.min(n - 2),
            Err(0) => 0,
            Err(i) => (i - 1).min(n - 2),
        }
    }
}
