//! Blocks of a (K4-e)-design and the small graph pieces they are built from.
//!
//! A block `[a,b,c-d]` is the graph on `{a,b,c,d}` with edges
//! `ab, ac, ad, bc, bd`; `a,b` have degree 3, `c,d` have degree 2 and the
//! edge `cd` is missing.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest order handled anywhere in the crate. `C(16,2) = 120` edges fit in
/// one `u128` edge mask and a vertex fits in a nibble.
pub const MAX_ORDER: usize = 16;

pub type Vertex = u8;

/// `v ≡ 0,1 (mod 5)` and `v ≥ 6`.
pub fn admissible_order(v: usize) -> bool {
    v >= 6 && matches!(v % 5, 0 | 1)
}

/// Number of blocks `b_v = v(v-1)/10` of a design of order `v`.
///
/// Only meaningful for admissible `v`; the division truncates otherwise.
pub fn num_blocks(v: usize) -> usize {
    v * v.saturating_sub(1) / 10
}

/// Number of edges of `K_v`.
pub fn num_edges(v: usize) -> usize {
    v * v.saturating_sub(1) / 2
}

fn sorted_pair(x: Vertex, y: Vertex) -> (Vertex, Vertex) {
    if x < y {
        (x, y)
    } else {
        (y, x)
    }
}

/// Unordered pair `{x,y}` stored with `x < y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Edge(Vertex, Vertex);

impl Edge {
    pub fn new(x: Vertex, y: Vertex) -> Result<Self> {
        if x == y {
            return Err(Error::Parse(format!("loop edge {{{x},{x}}}")));
        }
        let (x, y) = sorted_pair(x, y);
        Ok(Edge(x, y))
    }

    pub fn lo(self) -> Vertex {
        self.0
    }

    pub fn hi(self) -> Vertex {
        self.1
    }

    pub fn contains(self, x: Vertex) -> bool {
        self.0 == x || self.1 == x
    }

    pub fn shares_vertex(self, other: Edge) -> bool {
        self.contains(other.0) || self.contains(other.1)
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{},{}}}", self.0, self.1)
    }
}

/// Triangle `{x,y,z}` stored sorted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Triangle([Vertex; 3]);

impl Triangle {
    pub fn new(x: Vertex, y: Vertex, z: Vertex) -> Result<Self> {
        if x == y || y == z || x == z {
            return Err(Error::Parse(format!("degenerate triangle {{{x},{y},{z}}}")));
        }
        let mut t = [x, y, z];
        t.sort_unstable();
        Ok(Triangle(t))
    }

    pub fn vertices(self) -> [Vertex; 3] {
        self.0
    }
}

impl fmt::Display for Triangle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{},{},{}}}", self.0[0], self.0[1], self.0[2])
    }
}

/// One copy of K4-e.
///
/// Both pairs are stored sorted and the derived order compares the
/// degree-3 pair first, which is the lexicographic order on `(a,b,c,d)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "[Vertex; 4]", into = "[Vertex; 4]")]
pub struct Block {
    p: (Vertex, Vertex),
    q: (Vertex, Vertex),
}

impl Block {
    /// Builds `[a,b,c-d]`. Order within each pair does not matter.
    pub fn new(a: Vertex, b: Vertex, c: Vertex, d: Vertex) -> Result<Self> {
        if a == b || a == c || a == d || b == c || b == d || c == d {
            return Err(Error::InvalidBlock(a.into(), b.into(), c.into(), d.into()));
        }
        Ok(Block {
            p: sorted_pair(a, b),
            q: sorted_pair(c, d),
        })
    }

    pub fn from_array(v: [Vertex; 4]) -> Result<Self> {
        Block::new(v[0], v[1], v[2], v[3])
    }

    /// `[a, b, c, d]` with `a < b` and `c < d`.
    pub fn to_array(self) -> [Vertex; 4] {
        [self.p.0, self.p.1, self.q.0, self.q.1]
    }

    /// Degree-3 pair.
    pub fn deg3(self) -> Edge {
        Edge(self.p.0, self.p.1)
    }

    /// Degree-2 pair; the edge missing from the block.
    pub fn deg2(self) -> Edge {
        Edge(self.q.0, self.q.1)
    }

    pub fn vertices(self) -> [Vertex; 4] {
        self.to_array()
    }

    pub fn max_vertex(self) -> Vertex {
        self.p.1.max(self.q.1)
    }

    pub fn contains(self, x: Vertex) -> bool {
        self.to_array().contains(&x)
    }

    /// `{ab, ac, ad, bc, bd}`.
    pub fn edges(self) -> [Edge; 5] {
        let (a, b) = self.p;
        let (c, d) = self.q;
        let e = |x, y| {
            let (x, y) = sorted_pair(x, y);
            Edge(x, y)
        };
        [e(a, b), e(a, c), e(a, d), e(b, c), e(b, d)]
    }

    /// `{{a,b,c}, {a,b,d}}`.
    pub fn triangles(self) -> [Triangle; 2] {
        let (a, b) = self.p;
        let (c, d) = self.q;
        let t = |x: Vertex| {
            let mut t = [a, b, x];
            t.sort_unstable();
            Triangle(t)
        };
        let (t1, t2) = (t(c), t(d));
        if t1 <= t2 {
            [t1, t2]
        } else {
            [t2, t1]
        }
    }

    /// Image of the block under a vertex map.
    pub fn map(self, f: impl Fn(Vertex) -> Vertex) -> Result<Self> {
        let [a, b, c, d] = self.to_array();
        Block::new(f(a), f(b), f(c), f(d))
    }

    /// Packs `(a,b,c,d)` into nibbles; the packing preserves block order.
    pub(crate) fn key(self) -> u16 {
        let [a, b, c, d] = self.to_array();
        (u16::from(a) << 12) | (u16::from(b) << 8) | (u16::from(c) << 4) | u16::from(d)
    }

    pub(crate) fn from_key(key: u16) -> Self {
        let n = |s: u16| ((key >> s) & 0xf) as Vertex;
        Block {
            p: (n(12), n(8)),
            q: (n(4), n(0)),
        }
    }
}

impl TryFrom<[Vertex; 4]> for Block {
    type Error = Error;

    fn try_from(v: [Vertex; 4]) -> Result<Self> {
        Block::from_array(v)
    }
}

impl From<Block> for [Vertex; 4] {
    fn from(b: Block) -> Self {
        b.to_array()
    }
}

impl fmt::Display for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{},{}-{}]", self.p.0, self.p.1, self.q.0, self.q.1)
    }
}

/// Every block on the vertex set `{0..v-1}`, in block order.
pub fn all_blocks(v: usize) -> Vec<Block> {
    let v = v as Vertex;
    let mut out = Vec::new();
    for a in 0..v {
        for b in a + 1..v {
            for c in 0..v {
                for d in c + 1..v {
                    if c != a && c != b && d != a && d != b {
                        out.push(Block { p: (a, b), q: (c, d) });
                    }
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn edge(x: Vertex, y: Vertex) -> Edge {
        Edge::new(x, y).unwrap()
    }

    #[test]
    fn admissible_orders() {
        assert!(admissible_order(6));
        assert!(!admissible_order(5));
        assert!(!admissible_order(12));
        assert!(!admissible_order(0));
        assert!(!admissible_order(1));
        let small: Vec<usize> = (0..30).filter(|&v| admissible_order(v)).collect();
        assert_eq!(small, vec![6, 10, 11, 15, 16, 20, 21, 25, 26]);
    }

    #[test]
    fn edges_of_block() {
        let b = Block::new(0, 1, 2, 3).unwrap();
        assert_eq!(b.edges(), [edge(0, 1), edge(0, 2), edge(0, 3), edge(1, 2), edge(1, 3)]);
        let b = Block::new(2, 3, 4, 5).unwrap();
        assert_eq!(b.edges(), [edge(2, 3), edge(2, 4), edge(2, 5), edge(3, 4), edge(3, 5)]);
        assert!(!b.edges().contains(&b.deg2()));
    }

    #[test]
    fn triangles_of_block() {
        let t = |x, y, z| Triangle::new(x, y, z).unwrap();
        assert_eq!(Block::new(0, 1, 2, 3).unwrap().triangles(), [t(0, 1, 2), t(0, 1, 3)]);
        assert_eq!(Block::new(4, 5, 0, 1).unwrap().triangles(), [t(0, 4, 5), t(1, 4, 5)]);
    }

    #[test]
    fn pair_order_is_irrelevant() {
        assert_eq!(Block::new(1, 0, 3, 2).unwrap(), Block::new(0, 1, 2, 3).unwrap());
        assert_ne!(Block::new(0, 1, 2, 3).unwrap(), Block::new(2, 3, 0, 1).unwrap());
    }

    #[test]
    fn rejects_repeated_vertex() {
        assert!(Block::new(0, 1, 1, 2).is_err());
        assert!(Block::new(0, 0, 1, 2).is_err());
        assert!(Block::new(0, 1, 2, 2).is_err());
    }

    #[test]
    fn key_preserves_order() {
        let blocks = all_blocks(7);
        assert_eq!(blocks.len(), 21 * 10);
        for w in blocks.windows(2) {
            assert!(w[0] < w[1]);
            assert!(w[0].key() < w[1].key());
        }
        for b in blocks {
            assert_eq!(Block::from_key(b.key()), b);
        }
    }
}
