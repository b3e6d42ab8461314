//! Spherical suspension: the warped join of a base space with an arc of
//! `[0, pi]` under the spherical cosine rule. A standard near-sphere test
//! space generator.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use super::DiscreteMMSpace;

impl DiscreteMMSpace {
    /// Suspension of `base` (diameter at most pi) over `n_latitudes` grid
    /// latitudes.
    ///
    /// Latitudes sit at the midpoints `(a + 1/2) * pi / L` of a uniform
    /// partition, so the sin-weighted latitude factors stay strictly
    /// positive; weights at the partition endpoints would vanish at the
    /// poles and break full support. Distances follow
    /// `cos d = cos s cos t + sin s sin t cos(min(d_base, pi))`.
    pub fn make_suspension(base: &DiscreteMMSpace, n_latitudes: usize) -> Result<Self> {
        if n_latitudes < 2 {
            return Err(Error::TooFewLatitudes { given: n_latitudes });
        }
        let diameter = base.diameter();
        if diameter > PI {
            return Err(Error::BaseDiameterExceedsPi { diameter });
        }

        let lats: Vec<f64> = (0..n_latitudes)
            .map(|a| (a as f64 + 0.5) * PI / n_latitudes as f64)
            .collect();
        let cos_lat: Vec<f64> = lats.iter().map(|s| s.cos()).collect();
        let sin_lat: Vec<f64> = lats.iter().map(|s| s.sin()).collect();

        let nb = base.n_points();
        let n = n_latitudes * nb;
        let tri = Self::build_triangle(n, |p, q| {
            let (a, x) = (p / nb, p % nb);
            let (b, y) = (q / nb, q % nb);
            let db = base.distance(x, y).min(PI);
            let c = cos_lat[a] * cos_lat[b] + sin_lat[a] * sin_lat[b] * db.cos();
            c.clamp(-1.0, 1.0).acos()
        });

        let mut weights = Vec::with_capacity(n);
        let mut labels = Vec::with_capacity(n);
        for a in 0..n_latitudes {
            for x in 0..nb {
                weights.push(sin_lat[a] * base.weights()[x]);
                labels.push(format!("{a}:{}", base.labels()[x]));
            }
        }
        Ok(Self::assemble(n, tri, weights, labels))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mmspace::Weights;
    use approx::assert_abs_diff_eq;

    fn one_point() -> DiscreteMMSpace {
        DiscreteMMSpace::from_distance_matrix(&[vec![0.0]], &Weights::Uniform).unwrap()
    }

    #[test]
    fn over_one_point_distances_are_latitude_gaps() {
        let s = DiscreteMMSpace::make_suspension(&one_point(), 5).unwrap();
        assert_eq!(s.n_points(), 5);
        let lats: Vec<f64> = (0..5).map(|a| (a as f64 + 0.5) * PI / 5.0).collect();
        for i in 0..5 {
            for j in 0..5 {
                assert_abs_diff_eq!(
                    s.distance(i, j),
                    (lats[i] - lats[j]).abs(),
                    epsilon = 1e-12
                );
            }
        }
        assert!(s.validate().all_ok());
    }

    #[test]
    fn distances_stay_in_zero_pi() {
        let base = DiscreteMMSpace::from_distance_matrix(
            &[vec![0.0, PI], vec![PI, 0.0]],
            &Weights::Uniform,
        )
        .unwrap();
        let s = DiscreteMMSpace::make_suspension(&base, 8).unwrap();
        for i in 0..s.n_points() {
            for j in 0..s.n_points() {
                let d = s.distance(i, j);
                assert!((0.0..=PI).contains(&d));
            }
        }
        assert!(s.validate().all_ok());
    }

    #[test]
    fn wide_base_is_rejected() {
        let base = DiscreteMMSpace::from_distance_matrix(
            &[vec![0.0, 3.5], vec![3.5, 0.0]],
            &Weights::Uniform,
        )
        .unwrap();
        assert!(matches!(
            DiscreteMMSpace::make_suspension(&base, 4),
            Err(Error::BaseDiameterExceedsPi { .. })
        ));
        assert!(matches!(
            DiscreteMMSpace::make_suspension(&one_point(), 1),
            Err(Error::TooFewLatitudes { .. })
        ));
    }
}
