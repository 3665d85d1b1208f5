//! Disjoint-set forest with path halving and union by size.

#[derive(Debug, Clone)]
pub struct DisjointSets {
    parent: Vec<u32>,
    size: Vec<u32>,
    sets: usize,
}

impl DisjointSets {
    /// `n` singleton sets labelled `0..n`.
    ///
    /// Panics if `n` exceeds `u32::MAX`.
    pub fn new(n: usize) -> Self {
        assert!(n <= u32::MAX as usize, "disjoint-set universe too large: {n}");
        DisjointSets {
            parent: (0..n as u32).collect(),
            size: vec![1; n],
            sets: n,
        }
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] as usize != x {
            let grandparent = self.parent[self.parent[x] as usize];
            self.parent[x] = grandparent;
            x = grandparent as usize;
        }
        x
    }

    /// Merges the sets holding `a` and `b`. Returns `true` if they were distinct.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra as u32;
        self.size[ra] += self.size[rb];
        self.sets -= 1;
        true
    }

    pub fn same(&mut self, a: usize, b: usize) -> bool {
        self.find(a) == self.find(b)
    }

    /// Number of disjoint sets currently in the forest.
    pub fn count(&self) -> usize {
        self.sets
    }

    /// Dense relabelling: `labels[x]` is the index of `x`'s set in `0..count()`,
    /// numbered in order of first appearance.
    pub fn labels(&mut self) -> Vec<usize> {
        let n = self.len();
        let mut root_label = vec![usize::MAX; n];
        let mut next = 0;
        let mut labels = Vec::with_capacity(n);
        for x in 0..n {
            let r = self.find(x);
            if root_label[r] == usize::MAX {
                root_label[r] = next;
                next += 1;
            }
            labels.push(root_label[r]);
        }
        labels
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn singletons_then_merges() {
        let mut d = DisjointSets::new(6);
        assert_eq!(d.count(), 6);
        assert!(d.union(0, 1));
        assert!(d.union(2, 3));
        assert!(!d.union(1, 0));
        assert!(d.union(1, 3));
        assert_eq!(d.count(), 3);
        assert!(d.same(0, 2));
        assert!(!d.same(0, 4));
        assert_eq!(d.labels(), vec![0, 0, 0, 0, 1, 2]);
    }

    #[test]
    fn empty_universe() {
        let mut d = DisjointSets::new(0);
        assert!(d.is_empty());
        assert_eq!(d.count(), 0);
        assert!(d.labels().is_empty());
    }

    #[test]
    fn long_chain_collapses() {
        let n = 10_000;
        let mut d = DisjointSets::new(n);
        for i in 1..n {
            d.union(i - 1, i);
        }
        assert_eq!(d.count(), 1);
        assert!(d.same(0, n - 1));
    }
}
