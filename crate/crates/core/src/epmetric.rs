//! Finite extended pseudo-metric spaces.
//!
//! An [`EpMetric`] is a nonempty ordered point set with a symmetric matrix of
//! [`ExtDist`] values. The order of `points` is the total order used for
//! every tie-break in the crate. Construction only checks shape; the metric
//! axioms are reported by [`EpMetric::validate`].

use std::collections::HashSet;
use std::fmt;

use crate::dist::ExtDist;
use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::scalar::Scalar;
use crate::union_find::DisjointSet;

/// Partition of a point set into global components (pairwise finite distance).
pub type GlobalPartition = Partition;

#[derive(Clone, Debug, PartialEq)]
pub struct EpMetric<S: Scalar> {
    points: Vec<String>,
    dist: Vec<ExtDist<S>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    NonzeroDiagonal { point: String },
    Negative { a: String, b: String },
    Asymmetric { a: String, b: String },
    /// `d(a,c) > d(a,b) + d(b,c)`.
    Triangle { a: String, b: String, c: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NonzeroDiagonal { point } => write!(f, "d({point},{point}) != 0"),
            Violation::Negative { a, b } => write!(f, "d({a},{b}) < 0"),
            Violation::Asymmetric { a, b } => write!(f, "d({a},{b}) != d({b},{a})"),
            Violation::Triangle { a, b, c } => {
                write!(f, "d({a},{c}) > d({a},{b}) + d({b},{c})")
            }
        }
    }
}

impl<S: Scalar> EpMetric<S> {
    /// Builds a space from identifiers (in total order) and a square matrix.
    pub fn new(points: Vec<String>, rows: Vec<Vec<ExtDist<S>>>) -> Result<Self> {
        check_points(&points)?;
        let n = points.len();
        if rows.len() != n {
            return Err(Error::Structural(format!(
                "distance matrix has {} rows for {} points",
                rows.len(),
                n
            )));
        }
        let mut dist = Vec::with_capacity(n * n);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(Error::Structural(format!(
                    "row {} has {} entries, expected {}",
                    i,
                    row.len(),
                    n
                )));
            }
            dist.extend(row);
        }
        Ok(Self { points, dist })
    }

    pub fn from_fn(points: Vec<String>, mut f: impl FnMut(usize, usize) -> ExtDist<S>) -> Result<Self> {
        check_points(&points)?;
        let n = points.len();
        let mut dist = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                dist.push(f(i, j));
            }
        }
        Ok(Self { points, dist })
    }

    /// The discrete space: every off-diagonal distance is `∞`.
    pub fn discrete(points: Vec<String>) -> Result<Self> {
        Self::from_fn(points, |i, j| if i == j { ExtDist::zero() } else { ExtDist::Inf })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    pub fn id(&self, i: usize) -> &str {
        &self.points[i]
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.points.iter().position(|p| p == id)
    }

    pub fn get(&self, i: usize, j: usize) -> &ExtDist<S> {
        &self.dist[i * self.points.len() + j]
    }

    pub fn row(&self, i: usize) -> &[ExtDist<S>] {
        let n = self.points.len();
        &self.dist[i * n..(i + 1) * n]
    }

    pub fn rows(&self) -> Vec<Vec<ExtDist<S>>> {
        (0..self.len()).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_globally_connected(&self) -> bool {
        self.dist.iter().all(ExtDist::is_finite)
    }

    /// Every violated ep-metric axiom, by offending pair or triple.
    pub fn validate(&self) -> Vec<Violation> {
        let n = self.len();
        let id = |i: usize| self.points[i].clone();
        let mut out = Vec::new();
        for i in 0..n {
            if !self.get(i, i).approx_eq(&ExtDist::zero()) {
                out.push(Violation::NonzeroDiagonal { point: id(i) });
            }
        }
        for i in 0..n {
            for j in 0..n {
                if let ExtDist::Finite(v) = self.get(i, j) {
                    if v.is_negative_value() {
                        out.push(Violation::Negative { a: id(i), b: id(j) });
                    }
                }
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                if !self.get(i, j).approx_eq(self.get(j, i)) {
                    out.push(Violation::Asymmetric { a: id(i), b: id(j) });
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = self.get(a, b);
                if !ab.is_finite() {
                    continue;
                }
                for c in 0..n {
                    if !self.get(a, c).approx_le(&ab.add(self.get(b, c))) {
                        out.push(Violation::Triangle { a: id(a), b: id(b), c: id(c) });
                    }
                }
            }
        }
        out
    }

    fn ensure_valid(&self, what: &str) -> Result<()> {
        let violations = self.validate();
        if violations.is_empty() {
            return Ok(());
        }
        Err(Error::Precondition {
            message: format!("{what} is not an ep-metric"),
            violations: violations.iter().map(ToString::to_string).collect(),
        })
    }

    /// Global components: `x ~ y` iff `d(x,y) < ∞` (closed under transitivity).
    pub fn global_components(&self) -> GlobalPartition {
        let n = self.len();
        let mut ds = DisjointSet::new(n);
        for i in 0..n {
            for j in i + 1..n {
                if self.get(i, j).is_finite() {
                    ds.union(i, j);
                }
            }
        }
        Partition::from_disjoint_set(&mut ds)
    }

    /// Sub-space on `indices`, in the given order. Indices must be distinct.
    pub fn subspace(&self, indices: &[usize]) -> Result<Self> {
        let mut seen = HashSet::new();
        for &i in indices {
            if i >= self.len() || !seen.insert(i) {
                return Err(Error::Structural(format!("invalid subspace index {i}")));
            }
        }
        let points = indices.iter().map(|&i| self.points[i].clone()).collect();
        Self::from_fn(points, |a, b| self.get(indices[a], indices[b]).clone())
    }

    /// Restriction to one global component. The block is taken in the total order.
    pub fn restrict(&self, block: &[usize]) -> Result<Self> {
        let Some(&first) = block.first() else {
            return Err(Error::Structural("empty block".into()));
        };
        if first >= self.len() {
            return Err(Error::Structural(format!("point index {first} out of range")));
        }
        let components = self.global_components();
        let mut sorted = block.to_vec();
        sorted.sort_unstable();
        if components.block_containing(first) != sorted.as_slice() {
            return Err(Error::Structural(format!(
                "points {:?} do not form a global component",
                block.iter().map(|&i| self.points.get(i)).collect::<Vec<_>>()
            )));
        }
        self.subspace(&sorted)
    }

    /// Colimit of several ep-metrics on the same ordered point set: the
    /// infimum over polygonal paths of the sum of per-leg minima.
    pub fn wedge_colimit(metrics: &[EpMetric<S>]) -> Result<Self> {
        let Some(first) = metrics.first() else {
            return Err(Error::Structural("wedge of an empty list of metrics".into()));
        };
        for (k, m) in metrics.iter().enumerate() {
            if m.points != first.points {
                return Err(Error::Structural(format!(
                    "metric {k} is defined on a different ordered point set"
                )));
            }
            m.ensure_valid(&format!("metric {k}"))?;
        }
        let n = first.len();
        let mut weights: Vec<ExtDist<S>> = first.dist.clone();
        for m in &metrics[1..] {
            for (w, d) in weights.iter_mut().zip(&m.dist) {
                if d < w {
                    *w = d.clone();
                }
            }
        }
        shortest_paths(n, &mut weights);
        Ok(Self { points: first.points.clone(), dist: weights })
    }

    pub(crate) fn from_raw(points: Vec<String>, dist: Vec<ExtDist<S>>) -> Self {
        debug_assert_eq!(points.len() * points.len(), dist.len());
        Self { points, dist }
    }
}

/// All-pairs shortest paths, in place, on an `n × n` row-major matrix.
///
/// Relaxation order is fixed (`via`, then `i`, then `j`) and a value is only
/// replaced on a strict decrease, so float results are reproducible bit for bit.
pub(crate) fn shortest_paths<S: Scalar>(n: usize, dist: &mut [ExtDist<S>]) {
    for i in 0..n {
        dist[i * n + i] = ExtDist::zero();
    }
    for via in 0..n {
        for i in 0..n {
            let Some(left) = dist[i * n + via].finite().cloned() else {
                continue;
            };
            for j in 0..n {
                let ExtDist::Finite(right) = &dist[via * n + j] else {
                    continue;
                };
                let candidate = left.add(right);
                let better = match &dist[i * n + j] {
                    ExtDist::Inf => true,
                    ExtDist::Finite(cur) => candidate.cmp_exact(cur) == std::cmp::Ordering::Less,
                };
                if better {
                    dist[i * n + j] = ExtDist::Finite(candidate);
                }
            }
        }
    }
}

fn check_points(points: &[String]) -> Result<()> {
    if points.is_empty() {
        return Err(Error::Structural("empty point set".into()));
    }
    let mut seen = HashSet::new();
    for p in points {
        if !seen.insert(p.as_str()) {
            return Err(Error::Structural(format!("duplicate point identifier `{p}`")));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn ids(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    fn metric(names: &[&str], rows: &[&[Option<f64>]]) -> EpMetric<f64> {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|v| v.map_or(ExtDist::Inf, ExtDist::Finite)).collect())
            .collect();
        EpMetric::new(ids(names), rows).unwrap()
    }

    const INF: Option<f64> = None;

    #[test]
    fn singleton_is_valid() {
        let m = metric(&["a"], &[&[Some(0.0)]]);
        assert!(m.validate().is_empty());
    }

    #[test]
    fn reports_asymmetry() {
        let m = metric(&["a", "b"], &[&[Some(0.0), Some(3.0)], &[Some(5.0), Some(0.0)]]);
        assert_eq!(
            m.validate(),
            vec![Violation::Asymmetric { a: "a".into(), b: "b".into() }]
        );
    }

    #[test]
    fn reports_triangle() {
        let m = metric(
            &["a", "b", "c"],
            &[
                &[Some(0.0), Some(1.0), Some(5.0)],
                &[Some(1.0), Some(0.0), Some(1.0)],
                &[Some(5.0), Some(1.0), Some(0.0)],
            ],
        );
        let v = m.validate();
        assert!(v.contains(&Violation::Triangle { a: "a".into(), b: "b".into(), c: "c".into() }));
        assert!(v.iter().all(|x| matches!(x, Violation::Triangle { .. })));
    }

    #[test]
    fn shape_errors() {
        assert!(matches!(
            EpMetric::<f64>::new(ids(&["a", "b"]), vec![vec![ExtDist::zero()]]),
            Err(Error::Structural(_))
        ));
        assert!(matches!(EpMetric::<f64>::new(vec![], vec![]), Err(Error::Structural(_))));
        assert!(matches!(EpMetric::<f64>::discrete(ids(&["a", "a"])), Err(Error::Structural(_))));
    }

    fn two_legs() -> (EpMetric<f64>, EpMetric<f64>) {
        let d1 = metric(
            &["a", "b", "c"],
            &[&[Some(0.0), Some(1.0), INF], &[Some(1.0), Some(0.0), INF], &[INF, INF, Some(0.0)]],
        );
        let d2 = metric(
            &["a", "b", "c"],
            &[&[Some(0.0), INF, INF], &[INF, Some(0.0), Some(1.0)], &[INF, Some(1.0), Some(0.0)]],
        );
        (d1, d2)
    }

    #[test]
    fn wedge_of_two_legs() {
        let (d1, d2) = two_legs();
        let d = EpMetric::wedge_colimit(&[d1, d2]).unwrap();
        assert_eq!(*d.get(0, 2), ExtDist::Finite(2.0));
        assert_eq!(*d.get(2, 0), ExtDist::Finite(2.0));
        assert!(d.validate().is_empty());
        let parts = d.global_components();
        assert_eq!(parts.blocks(), &[vec![0, 1, 2]]);
        assert_eq!(d.restrict(&[0, 1, 2]).unwrap(), d);
    }

    #[test]
    fn wedge_of_one_is_identity() {
        let (d1, _) = two_legs();
        assert_eq!(EpMetric::wedge_colimit(std::slice::from_ref(&d1)).unwrap(), d1);
    }

    #[test]
    fn wedge_keeps_unreachable_pairs_infinite() {
        let (d1, _) = two_legs();
        let disc = EpMetric::discrete(ids(&["a", "b", "c"])).unwrap();
        let d = EpMetric::wedge_colimit(&[d1, disc]).unwrap();
        assert_eq!(*d.get(0, 2), ExtDist::Inf);
    }

    #[test]
    fn wedge_errors() {
        assert!(matches!(EpMetric::<f64>::wedge_colimit(&[]), Err(Error::Structural(_))));
        let a = EpMetric::<f64>::discrete(ids(&["a", "b"])).unwrap();
        let b = EpMetric::<f64>::discrete(ids(&["b", "a"])).unwrap();
        assert!(matches!(EpMetric::wedge_colimit(&[a, b]), Err(Error::Structural(_))));
    }

    #[test]
    fn discrete_components_and_restriction() {
        let disc = EpMetric::<Rational>::discrete(ids(&["a", "b", "c"])).unwrap();
        let parts = disc.global_components();
        assert_eq!(parts.num_blocks(), 3);
        let single = disc.restrict(&[0]).unwrap();
        assert_eq!(single.len(), 1);
        assert!(single.validate().is_empty());
        assert!(disc.restrict(&[0, 1]).is_err());
    }

    #[test]
    fn all_finite_is_one_component() {
        let m = metric(&["a", "b"], &[&[Some(0.0), Some(2.0)], &[Some(2.0), Some(0.0)]]);
        assert_eq!(m.global_components().num_blocks(), 1);
        assert!(m.restrict(&[0]).is_err());
    }
}
