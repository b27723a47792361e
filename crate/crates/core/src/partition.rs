use crate::union_find::DisjointSet;

/// A partition of `0..n` in canonical form: every block sorted ascending,
/// blocks ordered by their least element. Two partitions are equal exactly
/// when they have the same blocks.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Partition {
    blocks: Vec<Vec<usize>>,
    block_of: Vec<usize>,
}

impl Partition {
    pub fn discrete(n: usize) -> Self {
        Self::from_roots(&(0..n).collect::<Vec<_>>())
    }

    /// Builds a partition from any labelling where equal labels mean same block.
    pub fn from_roots(labels: &[usize]) -> Self {
        let n = labels.len();
        let mut first_seen = std::collections::HashMap::new();
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        let mut block_of = vec![0; n];
        for (i, label) in labels.iter().enumerate() {
            let b = *first_seen.entry(*label).or_insert_with(|| {
                blocks.push(Vec::new());
                blocks.len() - 1
            });
            blocks[b].push(i);
            block_of[i] = b;
        }
        Self { blocks, block_of }
    }

    pub fn from_disjoint_set(ds: &mut DisjointSet) -> Self {
        Self::from_roots(&ds.roots())
    }

    /// Canonicalizes arbitrary blocks over `0..n`. Returns `None` unless the
    /// blocks are pairwise disjoint and cover `0..n`.
    pub fn from_blocks(n: usize, blocks: &[Vec<usize>]) -> Option<Self> {
        let mut labels = vec![usize::MAX; n];
        for (b, block) in blocks.iter().enumerate() {
            for &i in block {
                if i >= n || labels[i] != usize::MAX {
                    return None;
                }
                labels[i] = b;
            }
        }
        if labels.contains(&usize::MAX) {
            return None;
        }
        Some(Self::from_roots(&labels))
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn num_points(&self) -> usize {
        self.block_of.len()
    }

    pub fn block_index(&self, point: usize) -> usize {
        self.block_of[point]
    }

    pub fn block_containing(&self, point: usize) -> &[usize] {
        &self.blocks[self.block_of[point]]
    }

    /// Least point of the block containing `point`.
    pub fn representative(&self, point: usize) -> usize {
        self.blocks[self.block_of[point]][0]
    }

    pub fn same_block(&self, a: usize, b: usize) -> bool {
        self.block_of[a] == self.block_of[b]
    }

    /// True when every block of `self` lies inside a block of `coarser`.
    pub fn refines(&self, coarser: &Partition) -> bool {
        self.num_points() == coarser.num_points()
            && self
                .blocks
                .iter()
                .all(|block| block.iter().all(|&p| coarser.same_block(block[0], p)))
    }

    /// Induced partition on `subset`, re-indexed by position in `subset`.
    pub fn restrict(&self, subset: &[usize]) -> Partition {
        let labels: Vec<usize> = subset.iter().map(|&p| self.block_of[p]).collect();
        Self::from_roots(&labels)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form() {
        let p = Partition::from_roots(&[7, 3, 7, 3, 9]);
        assert_eq!(p.blocks(), &[vec![0, 2], vec![1, 3], vec![4]]);
        let q = Partition::from_blocks(5, &[vec![4], vec![3, 1], vec![2, 0]]).unwrap();
        assert_eq!(p, q);
        assert!(Partition::from_blocks(3, &[vec![0, 1]]).is_none());
        assert!(Partition::from_blocks(2, &[vec![0, 1], vec![1]]).is_none());
    }

    #[test]
    fn refinement_and_restriction() {
        let fine = Partition::from_roots(&[0, 0, 1, 2]);
        let coarse = Partition::from_roots(&[0, 0, 0, 2]);
        assert!(fine.refines(&coarse));
        assert!(!coarse.refines(&fine));
        let r = coarse.restrict(&[1, 3, 2]);
        assert_eq!(r.blocks(), &[vec![0, 2], vec![1]]);
    }
}
