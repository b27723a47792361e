use std::collections::HashMap;

use super::complex::{Cell, LabeledComplex};
use crate::error::{Error, Result};

/// Largest complex (all dimensions together) whose homology is computed.
pub const MAX_HOMOLOGY_CELLS: usize = 20_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BettiReport {
    /// Alternating count of cells in dimensions `0..=cap`.
    pub euler_characteristic: i64,
    /// Betti numbers over GF(2). When the complex was truncated at the cap,
    /// the top dimension is omitted since it is not determined.
    pub betti: Vec<usize>,
    pub cell_counts: Vec<usize>,
    /// The complex has no cells above the cap, so `χ = Σ (-1)^d b_d`.
    pub complete: bool,
}

/// Betti numbers over GF(2). Boundary faces of a labeled cell `(x, σ)` are
/// the cells `(x, τ)` with `τ ⊂ σ` of codimension one; edges bound onto the
/// shared vertices.
pub fn betti_gf2(c: &LabeledComplex) -> Result<BettiReport> {
    let counts = c.cell_counts();
    let total: usize = counts.iter().sum();
    if total > MAX_HOMOLOGY_CELLS {
        return Err(Error::Resource(format!(
            "{total} cells exceed the homology guard of {MAX_HOMOLOGY_CELLS}"
        )));
    }
    let cap = c.cap();
    let mut by_dim: Vec<Vec<&Cell>> = vec![Vec::new(); cap + 1];
    for cell in c.cells() {
        by_dim[cell.dimension()].push(cell);
    }
    let index: Vec<HashMap<(usize, &[usize]), usize>> = by_dim
        .iter()
        .map(|cells| {
            cells
                .iter()
                .enumerate()
                .map(|(i, cell)| ((cell.label, cell.vertices.as_slice()), i))
                .collect()
        })
        .collect();

    // ranks[d] = rank of the boundary map from dimension d to d - 1.
    let mut ranks = vec![0usize; cap + 2];
    for d in 1..=cap {
        let rows = counts[d - 1];
        let mut columns = Vec::with_capacity(by_dim[d].len());
        for cell in &by_dim[d] {
            let mut col = BitColumn::new(rows);
            if d == 1 {
                col.flip(cell.vertices[0]);
                col.flip(cell.vertices[1]);
            } else {
                for skip in 0..cell.vertices.len() {
                    let face: Vec<usize> = cell
                        .vertices
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| *i != skip)
                        .map(|(_, v)| *v)
                        .collect();
                    let row = index[d - 1]
                        .get(&(cell.label, face.as_slice()))
                        .copied()
                        .ok_or_else(|| Error::Structural(format!("face {face:?} of {cell:?} is missing")))?;
                    col.flip(row);
                }
            }
            columns.push(col);
        }
        ranks[d] = rank_gf2(columns, rows);
    }

    let euler_characteristic = counts
        .iter()
        .enumerate()
        .map(|(d, &n)| if d % 2 == 0 { n as i64 } else { -(n as i64) })
        .sum();
    let top = if c.is_truncated() { cap } else { cap + 1 };
    let betti = (0..top).map(|d| counts[d] - ranks[d] - ranks[d + 1]).collect();
    Ok(BettiReport { euler_characteristic, betti, cell_counts: counts, complete: !c.is_truncated() })
}

#[derive(Clone)]
struct BitColumn {
    words: Vec<u64>,
}

impl BitColumn {
    fn new(len: usize) -> Self {
        Self { words: vec![0; len.div_ceil(64)] }
    }

    fn flip(&mut self, i: usize) {
        self.words[i / 64] ^= 1 << (i % 64);
    }

    fn highest(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .rev()
            .find(|(_, w)| **w != 0)
            .map(|(i, w)| i * 64 + 63 - w.leading_zeros() as usize)
    }

    fn add(&mut self, other: &BitColumn) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }
}

/// Column reduction: each nonzero column ends up with a distinct pivot.
fn rank_gf2(columns: Vec<BitColumn>, rows: usize) -> usize {
    let mut pivots: Vec<Option<BitColumn>> = vec![None; rows];
    let mut rank = 0;
    for mut col in columns {
        while let Some(p) = col.highest() {
            match &pivots[p] {
                Some(reducer) => col.add(reducer),
                None => {
                    pivots[p] = Some(col);
                    rank += 1;
                    break;
                }
            }
        }
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::ExtDist;
    use crate::epmetric::EpMetric;
    use crate::neighborhood::NeighborhoodSystem;
    use crate::rips::{clique_complex_at, wedge_complex};

    fn uniform(n: usize) -> EpMetric<f64> {
        EpMetric::from_fn((0..n).map(|i| i.to_string()).collect(), |i, j| {
            ExtDist::Finite(if i == j { 0.0 } else { 1.0 })
        })
        .unwrap()
    }

    #[test]
    fn simplex_is_contractible() {
        for n in 2..6 {
            let c = clique_complex_at(&uniform(n), &ExtDist::Inf, n - 1).unwrap();
            let b = betti_gf2(&c).unwrap();
            assert_eq!(b.euler_characteristic, 1);
            assert_eq!(b.betti[0], 1);
            assert!(b.betti[1..].iter().all(|&x| x == 0));
            assert!(b.complete);
        }
    }

    #[test]
    fn hollow_triangle_has_a_loop() {
        let c = clique_complex_at(&uniform(3), &ExtDist::Inf, 1).unwrap();
        let b = betti_gf2(&c).unwrap();
        // The 1-skeleton of a triangle; the 2-cell is beyond the cap.
        assert!(!b.complete);
        assert_eq!(b.betti, vec![1]);
        assert_eq!(b.euler_characteristic, 0);
    }

    #[test]
    fn square_cycle() {
        // 4-cycle at unit steps: 0-1-2-3-0, diagonals at distance 2.
        let coords = [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)];
        let m = EpMetric::from_fn((0..4).map(|i| i.to_string()).collect(), |i, j| {
            let (a, b): (&(f64, f64), &(f64, f64)) = (&coords[i], &coords[j]);
            ExtDist::Finite((a.0 - b.0).abs() + (a.1 - b.1).abs())
        })
        .unwrap();
        let b = betti_gf2(&clique_complex_at(&m, &ExtDist::Finite(1.0), 2).unwrap()).unwrap();
        assert_eq!(b.betti, vec![1, 1, 0]);
        assert_eq!(b.euler_characteristic, 0);
    }

    #[test]
    fn two_labeled_copies_of_an_edge() {
        let ns = NeighborhoodSystem::new(vec!["a".into(), "b".into()], vec![vec![1], vec![0]])
            .unwrap()
            .with_weights(vec![vec![1.0], vec![1.0]])
            .unwrap();
        let b = betti_gf2(&wedge_complex(&ns, &ExtDist::Inf, 1).unwrap()).unwrap();
        assert_eq!(b.betti, vec![1, 1]);
        assert_eq!(b.euler_characteristic, 0);
    }

    #[test]
    fn rank_of_dependent_columns() {
        let mut a = BitColumn::new(3);
        a.flip(0);
        a.flip(1);
        let mut b = BitColumn::new(3);
        b.flip(1);
        b.flip(2);
        let mut c = BitColumn::new(3);
        c.flip(0);
        c.flip(2);
        assert_eq!(rank_gf2(vec![a, b, c], 3), 2);
    }
}
