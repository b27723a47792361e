//! Vietoris–Rips systems at the level of path components, plus the
//! labeled wedge complex and its GF(2) homology.
//!
//! π₀ of a Rips complex only depends on its 1-skeleton, so every
//! filtration here is a union-find over edges `{u, v}` with `d(u, v) <= s`.

mod complex;
mod homology;

pub use complex::{clique_complex_at, wedge_complex, Cell, LabeledComplex, MAX_COMPLEX_POINTS};
pub use homology::{betti_gf2, BettiReport, MAX_HOMOLOGY_CELLS};

use crate::dist::ExtDist;
use crate::epmetric::EpMetric;
use crate::error::Result;
use crate::neighborhood::NeighborhoodSystem;
use crate::partition::Partition;
use crate::scalar::Scalar;
use crate::union_find::DisjointSet;

/// Sorts and deduplicates values, merging values within the scalar tolerance
/// of the last kept value.
pub fn dedup_sorted<S: Scalar>(mut values: Vec<S>) -> Vec<S> {
    values.sort_by(|a, b| a.cmp_exact(b));
    let mut out: Vec<S> = Vec::with_capacity(values.len());
    for v in values {
        match out.last() {
            Some(last) if v.approx_eq(last) => {}
            _ => out.push(v),
        }
    }
    out
}

/// Distinct finite off-diagonal distances, ascending.
pub fn critical_values<S: Scalar>(m: &EpMetric<S>) -> Vec<S> {
    let n = m.len();
    let mut values = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if let ExtDist::Finite(v) = m.get(i, j) {
                values.push(v.clone());
            }
        }
    }
    dedup_sorted(values)
}

/// π₀ of the Rips complex at scale `s`.
pub fn components_at<S: Scalar>(m: &EpMetric<S>, s: &ExtDist<S>) -> Partition {
    let n = m.len();
    let mut ds = DisjointSet::new(n);
    for i in 0..n {
        for j in i + 1..n {
            let d = m.get(i, j);
            if d.is_finite() && d.approx_le(s) {
                ds.union(i, j);
            }
        }
    }
    Partition::from_disjoint_set(&mut ds)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Merge<S> {
    pub scale: S,
    /// Representative of the block that disappears.
    pub absorbed: usize,
    /// Representative of the surviving block (always the smaller index).
    pub into: usize,
}

/// π₀ hierarchy of an ep-metric: critical values, the partition at each of
/// them, and the merges that produce those partitions.
#[derive(Clone, Debug, PartialEq)]
pub struct Filtration<S> {
    n: usize,
    critical_values: Vec<S>,
    partitions: Vec<Partition>,
    merges: Vec<Merge<S>>,
}

impl<S: Scalar> Filtration<S> {
    pub fn num_points(&self) -> usize {
        self.n
    }

    pub fn critical_values(&self) -> &[S] {
        &self.critical_values
    }

    /// Partition at each critical value, parallel to [`Self::critical_values`].
    pub fn partitions(&self) -> &[Partition] {
        &self.partitions
    }

    pub fn merges(&self) -> &[Merge<S>] {
        &self.merges
    }

    /// Partition at an arbitrary scale.
    pub fn partition_at(&self, s: &ExtDist<S>) -> Partition {
        let idx = self
            .critical_values
            .iter()
            .rposition(|c| ExtDist::Finite(c.clone()).approx_le(s));
        match idx {
            Some(i) => self.partitions[i].clone(),
            None => Partition::discrete(self.n),
        }
    }

    /// Representatives of the blocks that are never absorbed.
    pub fn roots(&self) -> Vec<usize> {
        let absorbed: std::collections::HashSet<usize> = self.merges.iter().map(|m| m.absorbed).collect();
        (0..self.n).filter(|i| !absorbed.contains(i)).collect()
    }

    /// Rebuilds the partition at every critical value from the merge list alone.
    pub fn replay(&self) -> Vec<Partition> {
        let mut ds = DisjointSet::new(self.n);
        let mut merges = self.merges.iter().peekable();
        let mut out = Vec::with_capacity(self.critical_values.len());
        for c in &self.critical_values {
            while let Some(m) = merges.next_if(|m| m.scale.approx_le(c)) {
                ds.union(m.absorbed, m.into);
            }
            out.push(Partition::from_disjoint_set(&mut ds));
        }
        out
    }
}

/// Single-linkage merge tree. Edges are processed by increasing distance,
/// ties in lexicographic order of their endpoints; each merge is recorded at
/// the critical value its edge belongs to.
pub fn merge_tree<S: Scalar>(m: &EpMetric<S>) -> Filtration<S> {
    let n = m.len();
    let critical_values = critical_values(m);
    let mut edges: Vec<(usize, usize, &S)> = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if let ExtDist::Finite(d) = m.get(i, j) {
                edges.push((i, j, d));
            }
        }
    }
    edges.sort_by(|a, b| a.2.cmp_exact(b.2).then(a.0.cmp(&b.0)).then(a.1.cmp(&b.1)));

    let mut ds = DisjointSet::new(n);
    let mut merges = Vec::new();
    let mut partitions = Vec::with_capacity(critical_values.len());
    let mut edges = edges.into_iter().peekable();
    for (k, c) in critical_values.iter().enumerate() {
        let next = critical_values.get(k + 1);
        // Every edge below the next critical value belongs to this one.
        while let Some((i, j, _)) = edges.next_if(|e| next.is_none_or(|nx| e.2.cmp_exact(nx).is_lt())) {
            if let Some((absorbed, into)) = ds.union(i, j) {
                merges.push(Merge { scale: c.clone(), absorbed, into });
            }
        }
        partitions.push(Partition::from_disjoint_set(&mut ds));
    }
    Filtration { n, critical_values, partitions, merges }
}

/// Finite values taken by the star metrics of a weighted system.
pub fn wedge_critical_values<S: Scalar>(ns: &NeighborhoodSystem<S>) -> Result<Vec<S>> {
    let mut values = Vec::new();
    for star in ns.star_metrics()? {
        let k = star.members().len();
        for a in 0..k {
            for b in a + 1..k {
                values.push(star.local(a, b).clone());
            }
        }
    }
    Ok(dedup_sorted(values))
}

/// π₀ of the glued complex `∨_x V(X, D_x)` at scale `s`: connectivity over
/// every pair that lies in some `U_x` with `D_x`-distance at most `s`.
pub fn wedge_components_at<S: Scalar>(ns: &NeighborhoodSystem<S>, s: &ExtDist<S>) -> Result<Partition> {
    let mut ds = DisjointSet::new(ns.len());
    for star in ns.star_metrics()? {
        let members = star.members();
        for a in 0..members.len() {
            for b in a + 1..members.len() {
                if ExtDist::Finite(star.local(a, b).clone()).approx_le(s) {
                    ds.union(members[a], members[b]);
                }
            }
        }
    }
    Ok(Partition::from_disjoint_set(&mut ds))
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExcisionMismatch<S> {
    pub scale: ExtDist<S>,
    pub wedge: Partition,
    pub colimit: Partition,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExcisionReport<S> {
    pub scales: Vec<ExtDist<S>>,
    pub mismatches: Vec<ExcisionMismatch<S>>,
}

impl<S> ExcisionReport<S> {
    pub fn verdict(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Compares π₀ of the glued star complexes with π₀ of the Rips complex of
/// the colimit metric, at 0, at every critical value of either side, and at ∞.
pub fn excision_check<S: Scalar>(ns: &NeighborhoodSystem<S>) -> Result<ExcisionReport<S>> {
    let colimit = ns.umap_metric()?;
    let mut values = critical_values(&colimit);
    values.extend(wedge_critical_values(ns)?);
    values.push(S::zero());
    let mut scales: Vec<ExtDist<S>> = dedup_sorted(values).into_iter().map(ExtDist::Finite).collect();
    scales.push(ExtDist::Inf);

    let mut mismatches = Vec::new();
    for s in &scales {
        let wedge = wedge_components_at(ns, s)?;
        let colim = components_at(&colimit, s);
        if wedge != colim {
            mismatches.push(ExcisionMismatch { scale: s.clone(), wedge, colimit: colim });
        }
    }
    Ok(ExcisionReport { scales, mismatches })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::neighborhood::WeightScheme;

    fn line(coords: &[f64]) -> EpMetric<f64> {
        let names: Vec<String> = (0..coords.len()).map(|i| ((b'a' + i as u8) as char).to_string()).collect();
        EpMetric::from_fn(names, |i, j| ExtDist::Finite((coords[i] - coords[j]).abs())).unwrap()
    }

    fn fin(v: f64) -> ExtDist<f64> {
        ExtDist::Finite(v)
    }

    #[test]
    fn critical_values_examples() {
        let disc = EpMetric::<f64>::discrete(vec!["a".into(), "b".into()]).unwrap();
        assert!(critical_values(&disc).is_empty());
        assert_eq!(critical_values(&line(&[0.0, 1.0, 3.0])), vec![1.0, 2.0, 3.0]);
        let equi = EpMetric::<f64>::from_fn(vec!["a".into(), "b".into(), "c".into()], |i, j| {
            fin(if i == j { 0.0 } else { 1.0 })
        })
        .unwrap();
        assert_eq!(critical_values(&equi), vec![1.0]);
        let dup = line(&[0.0, 0.0, 2.0]);
        assert_eq!(critical_values(&dup), vec![0.0, 2.0]);
        let near = line(&[0.0, 1.0, 2.0 + 1e-12]);
        assert_eq!(critical_values(&near).len(), 2);
    }

    #[test]
    fn components_examples() {
        let m = line(&[0.0, 1.0, 3.0]);
        assert_eq!(components_at(&m, &fin(0.5)), Partition::discrete(3));
        assert_eq!(components_at(&m, &fin(1.0)).blocks(), &[vec![0, 1], vec![2]]);
        assert_eq!(components_at(&m, &ExtDist::Inf).num_blocks(), 1);
    }

    #[test]
    fn merge_tree_on_a_line() {
        let f = merge_tree(&line(&[0.0, 1.0, 3.0]));
        assert_eq!(
            f.merges(),
            &[
                Merge { scale: 1.0, absorbed: 1, into: 0 },
                Merge { scale: 2.0, absorbed: 2, into: 0 }
            ]
        );
        assert_eq!(f.roots(), vec![0]);
        assert_eq!(f.replay(), f.partitions().to_vec());
        assert_eq!(f.partition_at(&fin(2.5)).num_blocks(), 1);
        assert_eq!(f.partition_at(&fin(0.1)).num_blocks(), 3);
    }

    #[test]
    fn merge_tree_edge_cases() {
        let one = EpMetric::<f64>::discrete(vec!["a".into()]).unwrap();
        assert!(merge_tree(&one).merges().is_empty());

        let mut rows = vec![vec![ExtDist::Inf; 4]; 4];
        for (i, row) in rows.iter_mut().enumerate() {
            row[i] = fin(0.0);
        }
        rows[0][1] = fin(1.0);
        rows[1][0] = fin(1.0);
        rows[2][3] = fin(2.0);
        rows[3][2] = fin(2.0);
        let m = EpMetric::new((0..4).map(|i| i.to_string()).collect(), rows).unwrap();
        let f = merge_tree(&m);
        assert_eq!(f.roots(), vec![0, 2]);
        assert_eq!(f.partitions().last().unwrap(), &m.global_components());
    }

    #[test]
    fn near_ties_share_a_critical_value() {
        let m = line(&[0.0, 1.0, 2.0 + 1e-12]);
        let f = merge_tree(&m);
        assert_eq!(f.merges().len(), 2);
        assert!(f.merges().iter().all(|m| m.scale == 1.0));
        assert_eq!(f.replay(), f.partitions().to_vec());
        for (c, p) in f.critical_values().iter().zip(f.partitions()) {
            assert_eq!(&components_at(&m, &fin(*c)), p);
        }
    }

    fn star_ab_c() -> NeighborhoodSystem<f64> {
        NeighborhoodSystem::new(vec!["a".into(), "b".into(), "c".into()], vec![vec![1, 2], vec![], vec![]])
            .unwrap()
            .with_weights(vec![vec![1.0, 2.0], vec![], vec![]])
            .unwrap()
    }

    #[test]
    fn wedge_components_examples() {
        let ns = star_ab_c();
        assert_eq!(wedge_components_at(&ns, &fin(0.5)).unwrap(), Partition::discrete(3));
        assert_eq!(wedge_components_at(&ns, &fin(3.0)).unwrap().num_blocks(), 1);
        assert_eq!(wedge_components_at(&ns, &fin(1.0)).unwrap().blocks(), &[vec![0, 1], vec![2]]);
        assert_eq!(wedge_critical_values(&ns).unwrap(), vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn excision_on_small_systems() {
        assert!(excision_check(&star_ab_c()).unwrap().verdict());
        let m = line(&[0.0, 1.0, 3.0, 4.5, 10.0]);
        for k in 0..4 {
            for scheme in WeightScheme::ALL {
                let ns = NeighborhoodSystem::knn(&m, k).unwrap().weighted(&m, scheme, &1e-6).unwrap();
                let report = excision_check(&ns).unwrap();
                assert!(report.verdict(), "k={k} {scheme:?}: {:?}", report.mismatches);
            }
        }
    }
}
