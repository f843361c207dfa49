use alloc::vec::Vec;

/// Disjoint sets over `0..len` with path halving and union by index.
///
/// Unions always attach the larger root under the smaller one, so every root
/// is the smallest element of its set. Labels are therefore independent of the
/// order in which unions are applied.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<u32>,
}

impl UnionFind {
    pub fn new(len: usize) -> Self {
        assert!(
            len <= u32::MAX as usize,
            "union-find supports at most 2^32 - 1 elements"
        );
        Self {
            parent: (0..len as u32).collect(),
        }
    }

    /// Wrap an existing parent array. Every entry must point at an index no
    /// larger than itself.
    pub fn from_parents(parent: Vec<u32>) -> Self {
        debug_assert!(parent.iter().enumerate().all(|(i, &p)| p as usize <= i));
        Self { parent }
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn find(&mut self, mut x: u32) -> u32 {
        find_in(&mut self.parent, 0, &mut x)
    }

    pub fn union(&mut self, a: u32, b: u32) -> bool {
        union_in(&mut self.parent, 0, a, b)
    }

    pub fn into_parents(self) -> Vec<u32> {
        self.parent
    }

    pub fn parents_mut(&mut self) -> &mut [u32] {
        &mut self.parent
    }
}

/// `find` on a window of a global parent array that starts at `offset`.
/// All elements reached from `x` must lie inside the window.
#[inline]
pub fn find_in(parent: &mut [u32], offset: u32, x: &mut u32) -> u32 {
    loop {
        let p = parent[(*x - offset) as usize];
        if p == *x {
            return p;
        }
        let gp = parent[(p - offset) as usize];
        parent[(*x - offset) as usize] = gp;
        *x = gp;
    }
}

#[inline]
pub fn union_in(parent: &mut [u32], offset: u32, a: u32, b: u32) -> bool {
    let (mut a, mut b) = (a, b);
    let ra = find_in(parent, offset, &mut a);
    let rb = find_in(parent, offset, &mut b);
    if ra == rb {
        return false;
    }
    let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
    parent[(hi - offset) as usize] = lo;
    true
}
