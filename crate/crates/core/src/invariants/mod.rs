//! The metric invariants: mean distance (two routes), generalized means and
//! their model-sphere references, radius, diameter, eccentricity, and the
//! spherical observable-diameter bound.

mod monotone;

pub use monotone::{Direction, MonotoneFunction};

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::estimate::{exact_pair_reduction, KahanSum};
use crate::mmspace::DiscreteMMSpace;
use crate::quadrature::{full_sin_integral, integrate, ModelProfile, QUAD_TOL};

/// Which route computes a pointwise mean distance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointwiseMode {
    /// Weighted average of distances from the point.
    Direct,
    /// Stieltjes sum over superlevel-set masses of the distance function.
    LayerCake,
}

/// A named generalized mean `M_f` value.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeneralizedMean {
    pub tag: String,
    pub value: f64,
}

/// Bundle of the per-space invariants.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InvariantReport {
    pub md: f64,
    pub radius: f64,
    pub diameter: f64,
    pub per_point_eccentricity: Vec<f64>,
    pub per_point_mean: Vec<f64>,
    pub generalized_means: Vec<GeneralizedMean>,
}

/// Mean distance `md(X)`: the average distance of two independent
/// mu-random points, as an exact double sum.
pub fn mean_distance(space: &DiscreteMMSpace) -> f64 {
    exact_pair_reduction(space, |d| d)
        .expect("identity kernel is total on finite distances")
        .value
}

/// Mean distance from point `x` to a mu-random point.
///
/// `Direct` averages distances; `LayerCake` sums `(s_{k+1} - s_k)` times the
/// mass of `{d(x, .) >= s_{k+1}}` over the sorted distinct distance values.
/// The superlevel sets are complements of open balls; the two routes agree
/// up to rounding.
pub fn pointwise_mean_distance(
    space: &DiscreteMMSpace,
    x: usize,
    mode: PointwiseMode,
) -> Result<f64> {
    let n = space.n_points();
    if x >= n {
        return Err(Error::PointIndexOutOfRange {
            index: x,
            n_points: n,
        });
    }
    let distances = space.distances_from(x);
    let weights = space.weights();
    match mode {
        PointwiseMode::Direct => {
            let mut acc = KahanSum::new();
            for (&d, &w) in distances.iter().zip(weights) {
                acc.add(w * d);
            }
            Ok(acc.total() / space.total_weight())
        }
        PointwiseMode::LayerCake => {
            let mut order: Vec<usize> = (0..n).collect();
            order.sort_unstable_by(|&a, &b| distances[a].total_cmp(&distances[b]));
            // suffix[k] = mass of the k-th and all farther points
            let mut suffix = vec![0.0_f64; n + 1];
            let mut acc = KahanSum::new();
            for k in (0..n).rev() {
                acc.add(weights[order[k]]);
                suffix[k] = acc.total();
            }
            let mut total = KahanSum::new();
            let mut prev_s = 0.0;
            let mut k = 0;
            while k < n {
                let s = distances[order[k]];
                total.add((s - prev_s) * suffix[k]);
                prev_s = s;
                while k < n && distances[order[k]] == s {
                    k += 1;
                }
            }
            Ok(total.total() / space.total_weight())
        }
    }
}

/// All pointwise mean distances (direct route), in point order.
pub fn pointwise_means(space: &DiscreteMMSpace) -> Vec<f64> {
    let w = space.total_weight();
    (0..space.n_points())
        .into_par_iter()
        .map(|x| {
            let mut acc = KahanSum::new();
            for (&d, &wj) in space.distances_from(x).iter().zip(space.weights()) {
                acc.add(wj * d);
            }
            acc.total() / w
        })
        .collect()
}

/// Erbar-Sturm generalized mean `M_f(X)`: the weighted average of
/// `f(d(., .))` over ordered pairs. Requires the space diameter to stay in
/// f's domain `[0, pi]`.
pub fn generalized_mean(space: &DiscreteMMSpace, f: &MonotoneFunction) -> Result<f64> {
    let diameter = space.diameter();
    if diameter > PI {
        return Err(Error::DiameterExceedsPi { diameter });
    }
    Ok(exact_pair_reduction(space, |d| f.forward(d))?.value)
}

/// `M_alpha(X)` for a merely continuous kernel `alpha`; no monotonicity or
/// diameter restriction.
pub fn alpha_mean<A>(space: &DiscreteMMSpace, alpha: A) -> Result<f64>
where
    A: Fn(f64) -> f64 + Sync,
{
    Ok(exact_pair_reduction(space, alpha)?.value)
}

/// Model reference `M*_{f,n} = ∫_0^pi f(r) sin^(n-1)(r) dr / ∫_0^pi
/// sin^(n-1)(r) dr`.
pub fn model_reference(f: &MonotoneFunction, dim: usize) -> Result<f64> {
    if dim < 1 {
        return Err(Error::InvalidDimension { dim });
    }
    let m = (dim - 1) as i32;
    let numerator = integrate(|r| f.forward(r) * r.sin().powi(m), 0.0, PI, QUAD_TOL);
    Ok(numerator / full_sin_integral(dim - 1))
}

/// Eccentricities `D(x) = max_y d(x, y)`, the radius (their minimum) and the
/// diameter (their maximum).
pub fn radius_diameter(space: &DiscreteMMSpace) -> (f64, f64, Vec<f64>) {
    let eccentricity: Vec<f64> = (0..space.n_points())
        .into_par_iter()
        .map(|x| {
            space
                .distances_from(x)
                .into_iter()
                .fold(0.0_f64, f64::max)
        })
        .collect();
    let radius = eccentricity.iter().copied().fold(f64::INFINITY, f64::min);
    let diameter = eccentricity.iter().copied().fold(0.0_f64, f64::max);
    (radius, diameter, eccentricity)
}

/// Gromov's spherical observable-diameter bound
/// `pi - 2 v^-1(kappa / 2)` for `0 < kappa <= 1`.
pub fn observable_diameter_bound(dim: usize, kappa: f64) -> Result<f64> {
    if !(kappa.is_finite() && kappa > 0.0 && kappa <= 1.0) {
        return Err(Error::OutOfDomain {
            what: "kappa",
            value: kappa,
            min: 0.0,
            max: 1.0,
        });
    }
    let profile = ModelProfile::new(dim)?;
    Ok(PI - 2.0 * profile.v_inverse(kappa / 2.0)?)
}

/// Compute the invariant bundle, with generalized means for every tagged
/// function supplied.
pub fn invariant_report(
    space: &DiscreteMMSpace,
    functions: &[(String, MonotoneFunction)],
) -> Result<InvariantReport> {
    let md = mean_distance(space);
    let (radius, diameter, per_point_eccentricity) = radius_diameter(space);
    let per_point_mean = pointwise_means(space);
    let mut generalized_means = Vec::with_capacity(functions.len());
    for (tag, f) in functions {
        generalized_means.push(GeneralizedMean {
            tag: tag.clone(),
            value: generalized_mean(space, f)?,
        });
    }
    Ok(InvariantReport {
        md,
        radius,
        diameter,
        per_point_eccentricity,
        per_point_mean,
        generalized_means,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mmspace::Weights;
    use approx::assert_abs_diff_eq;

    fn path3() -> DiscreteMMSpace {
        DiscreteMMSpace::from_distance_matrix(
            &[
                vec![0.0, 1.0, 2.0],
                vec![1.0, 0.0, 1.0],
                vec![2.0, 1.0, 0.0],
            ],
            &Weights::Uniform,
        )
        .unwrap()
    }

    #[test]
    fn mean_distance_examples() {
        let one = DiscreteMMSpace::from_distance_matrix(&[vec![0.0]], &Weights::Uniform).unwrap();
        assert_eq!(mean_distance(&one), 0.0);
        let two = DiscreteMMSpace::from_distance_matrix(
            &[vec![0.0, 1.0], vec![1.0, 0.0]],
            &Weights::Uniform,
        )
        .unwrap();
        assert_eq!(mean_distance(&two), 0.5);
        assert_eq!(mean_distance(&path3()), 8.0 / 9.0);
    }

    #[test]
    fn pointwise_means_on_the_path() {
        let s = path3();
        for mode in [PointwiseMode::Direct, PointwiseMode::LayerCake] {
            assert_abs_diff_eq!(
                pointwise_mean_distance(&s, 1, mode).unwrap(),
                2.0 / 3.0,
                epsilon = 1e-15
            );
            assert_abs_diff_eq!(
                pointwise_mean_distance(&s, 0, mode).unwrap(),
                1.0,
                epsilon = 1e-15
            );
        }
        assert!(matches!(
            pointwise_mean_distance(&s, 3, PointwiseMode::Direct),
            Err(Error::PointIndexOutOfRange { index: 3, .. })
        ));
    }

    #[test]
    fn generalized_mean_reduces_to_md_for_identity() {
        let s = path3();
        let id = MonotoneFunction::identity();
        assert_eq!(generalized_mean(&s, &id).unwrap(), mean_distance(&s));
    }

    #[test]
    fn squared_kernel_on_two_points() {
        let two = DiscreteMMSpace::from_distance_matrix(
            &[vec![0.0, 1.0], vec![1.0, 0.0]],
            &Weights::Uniform,
        )
        .unwrap();
        let f = MonotoneFunction::power(2.0).unwrap();
        assert_eq!(generalized_mean(&two, &f).unwrap(), 0.5);
    }

    #[test]
    fn constant_alpha_gives_the_constant() {
        assert_abs_diff_eq!(
            alpha_mean(&path3(), |_| 2.5).unwrap(),
            2.5,
            epsilon = 1e-15
        );
    }

    #[test]
    fn wide_spaces_are_rejected_for_f_means() {
        let wide = DiscreteMMSpace::from_distance_matrix(
            &[vec![0.0, 3.2], vec![3.2, 0.0]],
            &Weights::Uniform,
        )
        .unwrap();
        assert!(matches!(
            generalized_mean(&wide, &MonotoneFunction::identity()),
            Err(Error::DiameterExceedsPi { .. })
        ));
        // the alpha path has no such restriction
        assert_eq!(alpha_mean(&wide, |d| d).unwrap(), 1.6);
    }

    #[test]
    fn model_reference_closed_forms() {
        let id = MonotoneFunction::identity();
        for dim in 1..=10 {
            assert_abs_diff_eq!(
                model_reference(&id, dim).unwrap(),
                PI / 2.0,
                epsilon = 1e-10
            );
        }
        let sq = MonotoneFunction::power(2.0).unwrap();
        assert_abs_diff_eq!(
            model_reference(&sq, 1).unwrap(),
            PI * PI / 3.0,
            epsilon = 1e-9
        );
    }

    #[test]
    fn radius_and_diameter_of_the_path() {
        let (radius, diameter, ecc) = radius_diameter(&path3());
        assert_eq!(radius, 1.0);
        assert_eq!(diameter, 2.0);
        assert_eq!(ecc, vec![2.0, 1.0, 2.0]);

        let one = DiscreteMMSpace::from_distance_matrix(&[vec![0.0]], &Weights::Uniform).unwrap();
        assert_eq!(radius_diameter(&one), (0.0, 0.0, vec![0.0]));
    }

    #[test]
    fn observable_diameter_bound_values() {
        for dim in 1..=5 {
            assert_abs_diff_eq!(
                observable_diameter_bound(dim, 1.0).unwrap(),
                0.0,
                epsilon = 1e-9
            );
        }
        assert_abs_diff_eq!(
            observable_diameter_bound(2, 0.5).unwrap(),
            PI / 3.0,
            epsilon = 1e-9
        );
        assert!(observable_diameter_bound(2, 0.0).is_err());
        assert!(observable_diameter_bound(2, 1.5).is_err());
    }

    #[test]
    fn report_is_internally_consistent() {
        let s = path3();
        let report = invariant_report(
            &s,
            &[("pow2".to_string(), MonotoneFunction::power(2.0).unwrap())],
        )
        .unwrap();
        assert_eq!(report.md, 8.0 / 9.0);
        assert_eq!(report.radius, 1.0);
        assert_eq!(report.diameter, 2.0);
        assert_eq!(report.generalized_means.len(), 1);
        // md is the weight-average of the pointwise means
        let avg: f64 = report.per_point_mean.iter().sum::<f64>() / 3.0;
        assert_abs_diff_eq!(report.md, avg, epsilon = 1e-12);
    }
}
