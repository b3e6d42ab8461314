//! The analytic round sphere and empirical samples drawn from it.

use std::f64::consts::PI;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use super::{index_labels, DiscreteMMSpace};

/// The standard round n-sphere with its geodesic distance and uniform
/// probability measure. Never materialized as a matrix unless sampled.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ModelSphere {
    dim: usize,
}

impl ModelSphere {
    pub fn new(dim: usize) -> Result<Self> {
        if dim < 1 {
            return Err(Error::InvalidDimension { dim });
        }
        Ok(ModelSphere { dim })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Ambient dimension of the unit vectors representing points.
    pub fn ambient(&self) -> usize {
        self.dim + 1
    }

    /// Geodesic distance of two unit vectors: arccos of the clamped inner
    /// product, always in `[0, pi]`.
    pub fn geodesic(p: &[f64], q: &[f64]) -> f64 {
        let dot: f64 = p.iter().zip(q).map(|(a, b)| a * b).sum();
        dot.clamp(-1.0, 1.0).acos()
    }

    /// `count` i.i.d. uniform points, flat-packed with stride
    /// [`ambient`](Self::ambient). Deterministic for a fixed seed.
    pub fn sample_points(&self, count: usize, seed: u64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ambient = self.ambient();
        let mut points = vec![0.0_f64; count * ambient];
        for point in points.chunks_mut(ambient) {
            draw_unit_vector(&mut rng, point);
        }
        points
    }
}

/// Normalized Gaussian vector, resampled in the (measure-zero) case of a
/// vanishing norm.
pub(crate) fn draw_unit_vector(rng: &mut ChaCha8Rng, out: &mut [f64]) {
    loop {
        let mut norm_sq = 0.0;
        for slot in out.iter_mut() {
            let g: f64 = StandardNormal.sample(rng);
            *slot = g;
            norm_sq += g * g;
        }
        let norm = norm_sq.sqrt();
        if norm > 1e-12 {
            for slot in out.iter_mut() {
                *slot /= norm;
            }
            return;
        }
    }
}

impl DiscreteMMSpace {
    /// Empirical approximation of the round sphere: `n_points` i.i.d. uniform
    /// points with their pairwise geodesic distances and uniform weights.
    pub fn sample_sphere(model: &ModelSphere, n_points: usize, seed: u64) -> Result<Self> {
        if n_points == 0 {
            return Err(Error::EmptySpace);
        }
        let ambient = model.ambient();
        let points = model.sample_points(n_points, seed);
        let tri = Self::build_triangle(n_points, |i, j| {
            ModelSphere::geodesic(
                &points[i * ambient..(i + 1) * ambient],
                &points[j * ambient..(j + 1) * ambient],
            )
        });
        Ok(Self::assemble(
            n_points,
            tri,
            vec![1.0; n_points],
            index_labels(n_points),
        ))
    }
}
