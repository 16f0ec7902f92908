/// Disjoint-set forest with union by size and path compression.
#[derive(Clone, Debug)]
pub struct DisjointSets {
    parent: Vec<u32>,
    size: Vec<u32>,
    sets: usize,
}

impl DisjointSets {
    pub fn new(n: usize) -> Self {
        DisjointSets { parent: (0..n as u32).collect(), size: vec![1; n], sets: n }
    }

    pub fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] as usize != root {
            root = self.parent[root] as usize;
        }
        let mut cur = x;
        while self.parent[cur] as usize != root {
            let next = self.parent[cur] as usize;
            self.parent[cur] = root as u32;
            cur = next;
        }
        root
    }

    /// Merges the sets of `a` and `b`; returns `false` if they were already joined.
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

    pub fn set_size(&mut self, x: usize) -> usize {
        let r = self.find(x);
        self.size[r] as usize
    }

    pub fn set_count(&self) -> usize {
        self.sets
    }

    /// Labels each vertex by the smallest member of its set.
    pub fn canonical_labels(&mut self) -> Vec<usize> {
        let n = self.parent.len();
        let mut smallest = vec![usize::MAX; n];
        let mut out = vec![0; n];
        for v in 0..n {
            let r = self.find(v);
            if smallest[r] == usize::MAX {
                smallest[r] = v;
            }
            out[v] = smallest[r];
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unions_and_labels() {
        let mut d = DisjointSets::new(6);
        assert!(d.union(4, 1));
        assert!(d.union(1, 5));
        assert!(!d.union(5, 4));
        assert!(d.union(2, 3));
        assert_eq!(d.set_count(), 3);
        assert_eq!(d.set_size(5), 3);
        assert_eq!(d.canonical_labels(), vec![0, 1, 2, 2, 1, 1]);
        assert!(d.same(4, 5) && !d.same(0, 1));
    }
}
