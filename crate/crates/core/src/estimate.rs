//! Exact pairwise reductions and seeded Monte Carlo pair integrals.
//!
//! Determinism over raw speed: work is cut into fixed-size blocks whose
//! partial sums are compensated and merged in block order, so results are
//! bit-identical for any worker count. The Monte Carlo path keys one
//! counter-based generator stream per sample block.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::mmspace::{sphere::draw_unit_vector, DiscreteMMSpace, ModelSphere};

/// Rows per block of the exact reduction. Fixed: the blocking must not
/// depend on the worker count.
const ROW_BLOCK: usize = 256;
/// Samples per Monte Carlo block, one generator stream each.
const MC_BLOCK: u64 = 8192;

/// Neumaier-compensated accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct KahanSum {
    sum: f64,
    compensation: f64,
}

impl KahanSum {
    pub(crate) fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub(crate) fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub(crate) fn total(&self) -> f64 {
        self.sum + self.compensation
    }
}

/// How an [`Estimate`] was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EstimateMode {
    Exact,
    MonteCarlo { seed: u64 },
}

/// Numerical carrier for pair integrals over a space or model sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    /// Zero in exact mode; sample standard deviation over sqrt(samples) in
    /// Monte Carlo mode.
    pub std_error: f64,
    pub n_terms: u64,
    pub mode: EstimateMode,
}

/// Weighted average of `kernel(d(i, j))` over all ordered pairs:
/// `Σ_ij w_i w_j k(d_ij) / (Σ w)^2`.
///
/// Row blocks are summed with per-block compensation and merged in block
/// order; the result is independent of the worker count.
pub fn exact_pair_reduction<K>(space: &DiscreteMMSpace, kernel: K) -> Result<Estimate>
where
    K: Fn(f64) -> f64 + Sync,
{
    let n = space.n_points();
    let weights = space.weights();
    let blocks = n.div_ceil(ROW_BLOCK);
    let partials: Vec<Result<f64>> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let lo = b * ROW_BLOCK;
            let hi = ((b + 1) * ROW_BLOCK).min(n);
            let mut acc = KahanSum::new();
            for i in lo..hi {
                let row = space.tri_row(i);
                let wi = weights[i];
                let mut row_acc = KahanSum::new();
                for (j, (&d, &wj)) in row[..i].iter().zip(&weights[..i]).enumerate() {
                    let k = kernel(d);
                    if !k.is_finite() {
                        return Err(Error::KernelFailure { i, j, value: k });
                    }
                    row_acc.add(wj * k);
                }
                let k_diag = kernel(row[i]);
                if !k_diag.is_finite() {
                    return Err(Error::KernelFailure {
                        i,
                        j: i,
                        value: k_diag,
                    });
                }
                // ordered pairs: both (i,j) and (j,i), plus the diagonal
                acc.add(wi * (2.0 * row_acc.total() + wi * k_diag));
            }
            Ok(acc.total())
        })
        .collect();

    let mut total = KahanSum::new();
    for partial in partials {
        total.add(partial?);
    }
    let w = space.total_weight();
    Ok(Estimate {
        value: total.total() / (w * w),
        std_error: 0.0,
        n_terms: (n as u64) * (n as u64),
        mode: EstimateMode::Exact,
    })
}

/// Monte Carlo estimate of `E[kernel(d(P, Q))]` for independent uniform
/// points `P, Q` on the model sphere. Deterministic for a fixed seed: block
/// `b` draws from the ChaCha stream `b` of `seed`, and partial sums merge in
/// block order.
pub fn mc_estimate<K>(
    model: &ModelSphere,
    kernel: K,
    samples: u64,
    seed: u64,
) -> Result<Estimate>
where
    K: Fn(f64) -> f64 + Sync,
{
    if samples < 2 {
        return Err(Error::TooFewSamples { samples });
    }
    let ambient = model.ambient();
    let blocks = samples.div_ceil(MC_BLOCK);
    let partials: Vec<Result<(f64, f64)>> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let lo = b * MC_BLOCK;
            let hi = ((b + 1) * MC_BLOCK).min(samples);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(b);
            let mut p = vec![0.0_f64; ambient];
            let mut q = vec![0.0_f64; ambient];
            let mut sum = KahanSum::new();
            let mut sum_sq = KahanSum::new();
            for s in lo..hi {
                draw_unit_vector(&mut rng, &mut p);
                draw_unit_vector(&mut rng, &mut q);
                let k = kernel(ModelSphere::geodesic(&p, &q));
                if !k.is_finite() {
                    return Err(Error::KernelFailure {
                        i: s as usize,
                        j: s as usize,
                        value: k,
                    });
                }
                sum.add(k);
                sum_sq.add(k * k);
            }
            Ok((sum.total(), sum_sq.total()))
        })
        .collect();

    let mut sum = KahanSum::new();
    let mut sum_sq = KahanSum::new();
    for partial in partials {
        let (s, s2) = partial?;
        sum.add(s);
        sum_sq.add(s2);
    }
    let m = samples as f64;
    let mean = sum.total() / m;
    let variance = ((sum_sq.total() - sum.total() * mean) / (m - 1.0)).max(0.0);
    Ok(Estimate {
        value: mean,
        std_error: (variance / m).sqrt(),
        n_terms: samples,
        mode: EstimateMode::MonteCarlo { seed },
    })
}
