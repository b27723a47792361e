use crate::dist::ExtDist;
use crate::epmetric::EpMetric;
use crate::error::{Error, Result};
use crate::neighborhood::NeighborhoodSystem;
use crate::scalar::Scalar;

/// Largest point set for which full complexes are enumerated.
pub const MAX_COMPLEX_POINTS: usize = 25;
/// Largest number of cells (dimension ≥ 1) a complex may hold.
pub const MAX_CELLS: usize = 2_000_000;

/// A cell of dimension `vertices.len() - 1 >= 1`, tagged with the star it comes from.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cell {
    pub label: usize,
    pub vertices: Vec<usize>,
}

impl Cell {
    pub fn dimension(&self) -> usize {
        self.vertices.len() - 1
    }
}

/// Copies of Rips complexes glued along their common vertex set: vertices
/// are shared and unlabeled, every higher cell keeps the label of its copy.
#[derive(Clone, Debug, PartialEq)]
pub struct LabeledComplex {
    num_vertices: usize,
    cap: usize,
    cells: Vec<Cell>,
    truncated: bool,
}

impl LabeledComplex {
    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    /// Cells of dimension ≥ 1, grouped by label, each label in lexicographic order.
    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    /// True when some cell of dimension `cap + 1` was left out.
    pub fn is_truncated(&self) -> bool {
        self.truncated
    }

    /// Number of cells in each dimension `0..=cap`.
    pub fn cell_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.cap + 1];
        counts[0] = self.num_vertices;
        for c in &self.cells {
            counts[c.dimension()] += 1;
        }
        counts
    }
}

fn check_guards(n: usize, cap: usize) -> Result<()> {
    if cap == 0 {
        return Err(Error::Parameter("dimension cap must be at least 1".into()));
    }
    if n > MAX_COMPLEX_POINTS {
        return Err(Error::Resource(format!(
            "{n} points exceed the complex enumeration guard of {MAX_COMPLEX_POINTS}"
        )));
    }
    Ok(())
}

/// Appends every clique of `members` (size 2..=cap+1) under `adjacent`.
/// Returns whether a clique of size cap+2 exists.
fn enumerate_cliques(
    members: &[usize],
    adjacent: &dyn Fn(usize, usize) -> bool,
    label: usize,
    cap: usize,
    out: &mut Vec<Cell>,
) -> Result<bool> {
    fn extend(
        current: &mut Vec<usize>,
        candidates: &[usize],
        adjacent: &dyn Fn(usize, usize) -> bool,
        label: usize,
        cap: usize,
        out: &mut Vec<Cell>,
        truncated: &mut bool,
    ) -> Result<()> {
        for (pos, &v) in candidates.iter().enumerate() {
            if current.len() == cap + 1 {
                *truncated = true;
                return Ok(());
            }
            current.push(v);
            if current.len() >= 2 {
                if out.len() >= MAX_CELLS {
                    return Err(Error::Resource(format!("more than {MAX_CELLS} cells")));
                }
                out.push(Cell { label, vertices: current.clone() });
            }
            let next: Vec<usize> = candidates[pos + 1..].iter().copied().filter(|&w| adjacent(v, w)).collect();
            extend(current, &next, adjacent, label, cap, out, truncated)?;
            current.pop();
        }
        Ok(())
    }
    let mut sorted = members.to_vec();
    sorted.sort_unstable();
    let mut truncated = false;
    extend(&mut Vec::new(), &sorted, adjacent, label, cap, out, &mut truncated)?;
    Ok(truncated)
}

/// The clique complex `{σ ⊆ X : diam σ <= s}` up to dimension `cap`, as a
/// complex with the single label 0.
pub fn clique_complex_at<S: Scalar>(m: &EpMetric<S>, s: &ExtDist<S>, cap: usize) -> Result<LabeledComplex> {
    check_guards(m.len(), cap)?;
    let adjacent = |u: usize, v: usize| m.get(u, v).is_finite() && m.get(u, v).approx_le(s);
    let members: Vec<usize> = (0..m.len()).collect();
    let mut cells = Vec::new();
    let truncated = enumerate_cliques(&members, &adjacent, 0, cap, &mut cells)?;
    Ok(LabeledComplex { num_vertices: m.len(), cap, cells, truncated })
}

/// The glued complex `∨_x V(X, D_x)_s`: for every point `x`, the subsets of
/// `U_x` of `D_x`-diameter at most `s`, labeled by `x`.
pub fn wedge_complex<S: Scalar>(ns: &NeighborhoodSystem<S>, s: &ExtDist<S>, cap: usize) -> Result<LabeledComplex> {
    check_guards(ns.len(), cap)?;
    let mut cells = Vec::new();
    let mut truncated = false;
    for star in ns.star_metrics()? {
        let adjacent = |u: usize, v: usize| star.get(u, v).approx_le(s);
        truncated |= enumerate_cliques(star.members(), &adjacent, star.center(), cap, &mut cells)?;
    }
    Ok(LabeledComplex { num_vertices: ns.len(), cap, cells, truncated })
}
