use crate::block::{num_edges, Block, Edge, Vertex, MAX_ORDER};

/// Position of `{x,y}` (`x < y`) in the row-major upper triangle of `K_v`.
#[inline]
pub fn edge_index(v: usize, x: usize, y: usize) -> usize {
    debug_assert!(x < y && y < v);
    x * v - x * (x + 1) / 2 + (y - x - 1)
}

/// Inverse of [`edge_index`].
pub fn edge_at(v: usize, mut index: usize) -> Edge {
    let mut x = 0;
    while index >= v - x - 1 {
        index -= v - x - 1;
        x += 1;
    }
    Edge::new(x as Vertex, (x + 1 + index) as Vertex).expect("distinct endpoints")
}

/// Set of edges of `K_v`, `v <= MAX_ORDER`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct EdgeMask {
    order: u8,
    bits: u128,
}

impl EdgeMask {
    pub fn empty(v: usize) -> Self {
        assert!(v <= MAX_ORDER, "order {v} exceeds {MAX_ORDER}");
        EdgeMask {
            order: v as u8,
            bits: 0,
        }
    }

    pub fn full(v: usize) -> Self {
        let mut m = EdgeMask::empty(v);
        m.bits = full_bits(v);
        m
    }

    pub fn of_block(v: usize, b: Block) -> Self {
        let mut m = EdgeMask::empty(v);
        m.bits = block_bits(v, b);
        m
    }

    pub fn order(&self) -> usize {
        self.order.into()
    }

    pub fn bits(&self) -> u128 {
        self.bits
    }

    pub fn insert(&mut self, e: Edge) {
        self.bits |= 1 << self.index(e);
    }

    pub fn contains(&self, e: Edge) -> bool {
        self.bits >> self.index(e) & 1 == 1
    }

    pub fn is_disjoint(&self, other: &EdgeMask) -> bool {
        self.bits & other.bits == 0
    }

    pub fn union(&self, other: &EdgeMask) -> EdgeMask {
        EdgeMask {
            order: self.order,
            bits: self.bits | other.bits,
        }
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    pub fn is_full(&self) -> bool {
        self.bits == full_bits(self.order())
    }

    /// Least edge not in the set, if any.
    pub fn first_missing(&self) -> Option<Edge> {
        let free = !self.bits & full_bits(self.order());
        (free != 0).then(|| edge_at(self.order(), free.trailing_zeros() as usize))
    }

    pub fn iter(&self) -> impl Iterator<Item = Edge> + '_ {
        let v = self.order();
        (0..num_edges(v))
            .filter(move |&i| self.bits >> i & 1 == 1)
            .map(move |i| edge_at(v, i))
    }

    fn index(&self, e: Edge) -> usize {
        edge_index(self.order(), e.lo().into(), e.hi().into())
    }
}

pub(crate) fn full_bits(v: usize) -> u128 {
    let n = num_edges(v);
    if n == 128 {
        u128::MAX
    } else {
        (1u128 << n) - 1
    }
}

pub(crate) fn block_bits(v: usize, b: Block) -> u128 {
    b.edges()
        .iter()
        .fold(0, |acc, e| acc | 1 << edge_index(v, e.lo().into(), e.hi().into()))
}
