//! Discrete metric measure spaces: representation, construction, validation.
//!
//! A [`DiscreteMMSpace`] is a finite point set with a symmetric distance
//! matrix and strictly positive weights. Only the lower triangle (including
//! the diagonal) is stored; symmetry is structural. Spaces are immutable
//! after construction and safe to share across parallel workers.

mod graph;
pub(crate) mod sphere;
mod suspension;

pub use graph::{EdgeList, GraphWeights};
pub use sphere::ModelSphere;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::estimate::KahanSum;

/// Triangle-inequality checks are O(N^3); below this size constructors run
/// them by default, above it only [`DiscreteMMSpace::validate`] does.
pub const TRIANGLE_AUTO_LIMIT: usize = 512;
/// Slack allowed before a triple counts as a triangle violation.
pub const TRIANGLE_TOL: f64 = 1e-9;

/// Whether a constructor scans all triples for triangle violations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TriangleCheck {
    /// Check when the space has fewer than [`TRIANGLE_AUTO_LIMIT`] points.
    Auto,
    Always,
    Never,
}

/// Point weights for matrix-based constructors.
#[derive(Debug, Clone)]
pub enum Weights {
    Uniform,
    PerPoint(Vec<f64>),
}

/// A compact metric measure space with full support, stored densely.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteMMSpace {
    n_points: usize,
    /// Lower triangle, row-major, diagonal included: `tri[i*(i+1)/2 + j]`
    /// holds `d(i, j)` for `j <= i`.
    tri: Vec<f64>,
    weights: Vec<f64>,
    labels: Vec<String>,
    total_weight: f64,
}

/// Outcome of the full invariant scan. All flags true iff the space is a
/// valid metric measure space with full support.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    /// Structurally true for triangle storage; kept for ingested data paths.
    pub symmetric: bool,
    pub zero_diagonal: bool,
    pub first_nonzero_diagonal: Option<usize>,
    pub triangle_ok: bool,
    /// Worst violating triple `(i, j, k)` and its excess, when any.
    pub worst_triangle_violation: Option<(usize, usize, usize, f64)>,
    pub support_ok: bool,
    pub first_bad_weight: Option<usize>,
}

impl ValidationReport {
    pub fn all_ok(&self) -> bool {
        self.symmetric && self.zero_diagonal && self.triangle_ok && self.support_ok
    }
}

#[inline]
fn tri_len(n: usize) -> usize {
    n * (n + 1) / 2
}

impl DiscreteMMSpace {
    /// Build from a full square matrix with the default triangle policy.
    pub fn from_distance_matrix(rows: &[Vec<f64>], weights: &Weights) -> Result<Self> {
        Self::from_distance_matrix_opt(rows, weights, TriangleCheck::Auto)
    }

    /// Build from a full square matrix, validating shape, finiteness,
    /// nonnegativity, symmetry, the zero diagonal, and the weights.
    pub fn from_distance_matrix_opt(
        rows: &[Vec<f64>],
        weights: &Weights,
        check: TriangleCheck,
    ) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::EmptySpace);
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::MatrixNotSquare {
                    row: i,
                    len: row.len(),
                    n,
                });
            }
        }
        for (i, row) in rows.iter().enumerate() {
            for (j, &d) in row.iter().enumerate() {
                if !d.is_finite() {
                    return Err(Error::NonFiniteDistance { i, j, value: d });
                }
                if d < 0.0 {
                    return Err(Error::NegativeDistance { i, j, value: d });
                }
            }
            if rows[i][i] != 0.0 {
                return Err(Error::NonzeroDiagonal {
                    i,
                    value: rows[i][i],
                });
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if rows[i][j] != rows[j][i] {
                    return Err(Error::AsymmetricDistance {
                        i,
                        j,
                        a: rows[i][j],
                        b: rows[j][i],
                    });
                }
            }
        }
        let weights = resolve_weights(n, weights)?;
        let mut tri = Vec::with_capacity(tri_len(n));
        for (i, row) in rows.iter().enumerate() {
            tri.extend_from_slice(&row[..=i]);
        }
        let space = Self::assemble(n, tri, weights, index_labels(n));
        let run_triangle = match check {
            TriangleCheck::Always => true,
            TriangleCheck::Never => false,
            TriangleCheck::Auto => n < TRIANGLE_AUTO_LIMIT,
        };
        if run_triangle {
            if let Some((i, j, k, excess)) = space.worst_triangle_violation(TRIANGLE_TOL) {
                return Err(Error::TriangleViolation { i, j, k, excess });
            }
        }
        Ok(space)
    }

    /// Assemble a space from a raw lower triangle without any invariant
    /// checks. Escape hatch for ingesting data whose defects you want
    /// [`validate`](Self::validate) to report rather than reject.
    pub fn from_parts_unchecked(
        n_points: usize,
        tri: Vec<f64>,
        weights: Vec<f64>,
        labels: Vec<String>,
    ) -> Self {
        assert_eq!(tri.len(), tri_len(n_points), "triangle length mismatch");
        assert_eq!(weights.len(), n_points, "weight count mismatch");
        assert_eq!(labels.len(), n_points, "label count mismatch");
        Self::assemble(n_points, tri, weights, labels)
    }

    fn assemble(n_points: usize, tri: Vec<f64>, weights: Vec<f64>, labels: Vec<String>) -> Self {
        let mut acc = KahanSum::new();
        for &w in &weights {
            acc.add(w);
        }
        DiscreteMMSpace {
            n_points,
            tri,
            weights,
            labels,
            total_weight: acc.total(),
        }
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    /// `d(i, j)`; symmetric by storage.
    #[inline]
    pub fn distance(&self, i: usize, j: usize) -> f64 {
        let (lo, hi) = if i <= j { (i, j) } else { (j, i) };
        self.tri[hi * (hi + 1) / 2 + lo]
    }

    /// Row `i` of the stored triangle: distances `d(i, j)` for `j <= i`.
    #[inline]
    pub(crate) fn tri_row(&self, i: usize) -> &[f64] {
        &self.tri[i * (i + 1) / 2..i * (i + 1) / 2 + i + 1]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn total_weight(&self) -> f64 {
        self.total_weight
    }

    /// Distances from point `x` to every point, in index order.
    pub fn distances_from(&self, x: usize) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.n_points);
        out.extend_from_slice(self.tri_row(x));
        for j in (x + 1)..self.n_points {
            out.push(self.distance(x, j));
        }
        out
    }

    /// Largest pairwise distance.
    pub fn diameter(&self) -> f64 {
        self.tri.iter().fold(0.0_f64, |m, &d| m.max(d))
    }

    /// Full invariant scan, including the O(N^3) triangle sweep. Problems are
    /// report contents, not failures.
    pub fn validate(&self) -> ValidationReport {
        let first_nonzero_diagonal = (0..self.n_points).find(|&i| self.distance(i, i) != 0.0);
        let first_bad_weight = self
            .weights
            .iter()
            .position(|w| !(w.is_finite() && *w > 0.0));
        let worst = self.worst_triangle_violation(TRIANGLE_TOL);
        ValidationReport {
            symmetric: true,
            zero_diagonal: first_nonzero_diagonal.is_none(),
            first_nonzero_diagonal,
            triangle_ok: worst.is_none(),
            worst_triangle_violation: worst,
            support_ok: first_bad_weight.is_none() && self.total_weight.is_finite(),
            first_bad_weight,
        }
    }

    /// Worst triple violating `d(a,c) <= d(a,b) + d(b,c) + tol`, if any.
    ///
    /// Degenerate triples `(i, j, i)` catch negative entries, which violate
    /// `0 <= 2 d(i,j)`.
    fn worst_triangle_violation(&self, tol: f64) -> Option<(usize, usize, usize, f64)> {
        let n = self.n_points;
        let per_i: Vec<Option<(usize, usize, usize, f64)>> = (0..n)
            .into_par_iter()
            .map(|i| {
                let mut worst: Option<(usize, usize, usize, f64)> = None;
                let mut push = |i, j, k, excess: f64| {
                    if excess > tol && worst.map_or(true, |w| excess > w.3) {
                        worst = Some((i, j, k, excess));
                    }
                };
                for j in (i + 1)..n {
                    let dij = self.distance(i, j);
                    push(i, j, i, -2.0 * dij);
                    for k in (j + 1)..n {
                        let dik = self.distance(i, k);
                        let djk = self.distance(j, k);
                        // three orientations of the unordered triple
                        push(i, j, k, dik - dij - djk); // middle j
                        push(i, k, j, dij - dik - djk); // middle k
                        push(j, i, k, djk - dij - dik); // middle i
                    }
                }
                worst
            })
            .collect();
        per_i
            .into_iter()
            .flatten()
            .max_by(|a, b| a.3.total_cmp(&b.3))
    }

    /// Same space with every distance multiplied by `c > 0`.
    pub fn scaled(&self, c: f64) -> Self {
        let tri = self.tri.iter().map(|&d| c * d).collect();
        Self::assemble(
            self.n_points,
            tri,
            self.weights.clone(),
            self.labels.clone(),
        )
    }

    /// Same space with points renumbered by `perm` (new index -> old index).
    pub fn permuted(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.n_points);
        let n = self.n_points;
        let mut tri = Vec::with_capacity(tri_len(n));
        for i in 0..n {
            for j in 0..=i {
                tri.push(self.distance(perm[i], perm[j]));
            }
        }
        let weights = perm.iter().map(|&p| self.weights[p]).collect();
        let labels = perm.iter().map(|&p| self.labels[p].clone()).collect();
        Self::assemble(n, tri, weights, labels)
    }

    /// Fill a triangle row-parallel from a symmetric distance function.
    pub(crate) fn build_triangle<F>(n: usize, dist: F) -> Vec<f64>
    where
        F: Fn(usize, usize) -> f64 + Sync,
    {
        let mut tri = vec![0.0_f64; tri_len(n)];
        let mut rows: Vec<&mut [f64]> = Vec::with_capacity(n);
        let mut rest = tri.as_mut_slice();
        for i in 0..n {
            let (row, tail) = rest.split_at_mut(i + 1);
            rows.push(row);
            rest = tail;
        }
        rows.into_par_iter().enumerate().for_each(|(i, row)| {
            for (j, slot) in row.iter_mut().enumerate() {
                *slot = if i == j { 0.0 } else { dist(i, j) };
            }
        });
        tri
    }
}

pub(crate) fn resolve_weights(n: usize, weights: &Weights) -> Result<Vec<f64>> {
    let out = match weights {
        Weights::Uniform => vec![1.0; n],
        Weights::PerPoint(w) => {
            if w.len() != n {
                return Err(Error::WeightCountMismatch {
                    expected: n,
                    actual: w.len(),
                });
            }
            w.clone()
        }
    };
    for (index, &value) in out.iter().enumerate() {
        if !(value.is_finite() && value > 0.0) {
            return Err(Error::NonpositiveWeight { index, value });
        }
    }
    Ok(out)
}

pub(crate) fn index_labels(n: usize) -> Vec<String> {
    (0..n).map(|i| i.to_string()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_point_space_is_valid() {
        let rows = vec![vec![0.0, 1.0], vec![1.0, 0.0]];
        let s = DiscreteMMSpace::from_distance_matrix(&rows, &Weights::Uniform).unwrap();
        assert_eq!(s.n_points(), 2);
        assert_eq!(s.distance(0, 1), 1.0);
        assert!(s.validate().all_ok());
    }

    #[test]
    fn asymmetry_is_reported_with_indices() {
        let rows = vec![vec![0.0, 1.0], vec![2.0, 0.0]];
        match DiscreteMMSpace::from_distance_matrix(&rows, &Weights::Uniform) {
            Err(Error::AsymmetricDistance { i: 0, j: 1, .. }) => {}
            other => panic!("expected asymmetry at (0,1), got {other:?}"),
        }
    }

    #[test]
    fn triangle_violation_is_reported_with_excess() {
        let rows = vec![
            vec![0.0, 1.0, 3.0],
            vec![1.0, 0.0, 1.0],
            vec![3.0, 1.0, 0.0],
        ];
        match DiscreteMMSpace::from_distance_matrix(&rows, &Weights::Uniform) {
            Err(Error::TriangleViolation { i, j, k, excess }) => {
                assert_eq!((i.min(k), j, i.max(k)), (0, 1, 2));
                assert_eq!(excess, 1.0);
            }
            other => panic!("expected triangle violation, got {other:?}"),
        }
    }

    #[test]
    fn nonpositive_weight_is_rejected() {
        let rows = vec![vec![0.0, 1.0], vec![1.0, 0.0]];
        let w = Weights::PerPoint(vec![1.0, 0.0]);
        match DiscreteMMSpace::from_distance_matrix(&rows, &w) {
            Err(Error::NonpositiveWeight { index: 1, .. }) => {}
            other => panic!("expected weight error, got {other:?}"),
        }
    }

    #[test]
    fn nonzero_diagonal_and_shape_errors() {
        let rows = vec![vec![0.0, 1.0], vec![1.0, 0.5]];
        assert!(matches!(
            DiscreteMMSpace::from_distance_matrix(&rows, &Weights::Uniform),
            Err(Error::NonzeroDiagonal { i: 1, .. })
        ));
        let rows = vec![vec![0.0, 1.0], vec![1.0]];
        assert!(matches!(
            DiscreteMMSpace::from_distance_matrix(&rows, &Weights::Uniform),
            Err(Error::MatrixNotSquare { row: 1, .. })
        ));
        assert!(matches!(
            DiscreteMMSpace::from_distance_matrix(&[], &Weights::Uniform),
            Err(Error::EmptySpace)
        ));
    }

    #[test]
    fn validate_reports_zero_weight() {
        let rows = vec![
            vec![0.0, 1.0, 1.0, 1.0],
            vec![1.0, 0.0, 1.0, 1.0],
            vec![1.0, 1.0, 0.0, 1.0],
            vec![1.0, 1.0, 1.0, 0.0],
        ];
        let mut tri = Vec::new();
        for (i, row) in rows.iter().enumerate() {
            tri.extend_from_slice(&row[..=i]);
        }
        let s = DiscreteMMSpace::from_parts_unchecked(
            4,
            tri,
            vec![1.0, 1.0, 1.0, 0.0],
            index_labels(4),
        );
        let report = s.validate();
        assert!(!report.support_ok);
        assert_eq!(report.first_bad_weight, Some(3));
        assert!(report.triangle_ok && report.zero_diagonal);
        assert!(!report.all_ok());
    }

    #[test]
    fn validate_reports_worst_triangle_violation() {
        // d(0,2) = 5 against d(0,1) + d(1,2) = 2: excess 3
        let rows = vec![
            vec![0.0, 1.0, 5.0],
            vec![1.0, 0.0, 1.0],
            vec![5.0, 1.0, 0.0],
        ];
        let mut tri = Vec::new();
        for (i, row) in rows.iter().enumerate() {
            tri.extend_from_slice(&row[..=i]);
        }
        let s = DiscreteMMSpace::from_parts_unchecked(3, tri, vec![1.0; 3], index_labels(3));
        let report = s.validate();
        assert!(!report.triangle_ok);
        let (_, _, _, excess) = report.worst_triangle_violation.unwrap();
        assert_eq!(excess, 3.0);
    }

    #[test]
    fn permuted_and_scaled_preserve_structure() {
        let rows = vec![
            vec![0.0, 1.0, 2.0],
            vec![1.0, 0.0, 1.0],
            vec![2.0, 1.0, 0.0],
        ];
        let s = DiscreteMMSpace::from_distance_matrix(&rows, &Weights::Uniform).unwrap();
        let p = s.permuted(&[2, 0, 1]);
        assert_eq!(p.distance(0, 1), s.distance(2, 0));
        assert_eq!(s.scaled(2.0).distance(0, 2), 4.0);
        assert_eq!(s.scaled(2.0).diameter(), 4.0);
    }
}
