use std::fmt;

use serde::{Deserialize, Serialize};

use crate::block::{admissible_order, num_blocks, num_edges, Block, Triangle, Vertex, MAX_ORDER};
use crate::edges::{edge_at, edge_index};
use crate::error::{Error, Result};
use crate::perm::Permutation;

/// A (K4-e)-design of order `v`: blocks whose edge sets partition `E(K_v)`.
///
/// Blocks are kept sorted, so two designs on the same labels are equal iff
/// their block lists are equal.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "DesignRecord", into = "DesignRecord")]
pub struct Design {
    order: u8,
    blocks: Vec<Block>,
}

/// Interchange form: `{"order": v, "blocks": [[a,b,c,d], ...]}` with the
/// degree-3 pair first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DesignRecord {
    pub order: usize,
    pub blocks: Vec<[Vertex; 4]>,
}

fn check_order(v: usize) -> Result<()> {
    if v > MAX_ORDER {
        return Err(Error::OrderTooLarge {
            order: v,
            max: MAX_ORDER,
        });
    }
    if !admissible_order(v) {
        return Err(Error::InadmissibleOrder(v));
    }
    Ok(())
}

/// Checks that `blocks` partition the edges of `K_v` and returns them as a
/// canonically sorted design.
///
/// Errors are reported in a fixed order: vertex range, block count, then
/// edges by ascending index (a doubly covered edge before a missing one at
/// the same index scan).
pub fn validate_design(v: usize, mut blocks: Vec<Block>) -> Result<Design> {
    check_order(v)?;
    for b in &blocks {
        if let Some(&x) = b.vertices().iter().find(|&&x| usize::from(x) >= v) {
            return Err(Error::VertexOutOfRange {
                vertex: x.into(),
                order: v,
            });
        }
    }
    if blocks.len() != num_blocks(v) {
        return Err(Error::WrongBlockCount {
            expected: num_blocks(v),
            found: blocks.len(),
        });
    }
    let mut cover = vec![0u8; num_edges(v)];
    for b in &blocks {
        for e in b.edges() {
            cover[edge_index(v, e.lo().into(), e.hi().into())] += 1;
        }
    }
    for (i, &c) in cover.iter().enumerate() {
        match c {
            1 => {}
            0 => return Err(Error::EdgeMissing(edge_at(v, i))),
            _ => return Err(Error::EdgeCollision(edge_at(v, i))),
        }
    }
    blocks.sort_unstable();
    Ok(Design { order: v as u8, blocks })
}

/// `π(d)`: each block `[a,b,c-d]` becomes `[π(a),π(b),π(c)-π(d)]`.
pub fn apply_permutation(pi: &Permutation, d: &Design) -> Result<Design> {
    if pi.order() != d.order() {
        return Err(Error::OrderMismatch(pi.order(), d.order()));
    }
    let blocks = d
        .blocks
        .iter()
        .map(|b| b.map(|x| pi.apply(x)))
        .collect::<Result<Vec<_>>>()?;
    validate_design(d.order(), blocks)
}

impl Design {
    pub fn new(v: usize, blocks: Vec<Block>) -> Result<Self> {
        validate_design(v, blocks)
    }

    /// Parses blocks given as `[a,b,c,d]` arrays.
    pub fn from_arrays(v: usize, blocks: &[[Vertex; 4]]) -> Result<Self> {
        let blocks = blocks
            .iter()
            .map(|&b| Block::from_array(b))
            .collect::<Result<Vec<_>>>()?;
        validate_design(v, blocks)
    }

    /// Develops `[a,b,c-d]` under `i ↦ i+1 (mod v)`.
    pub fn cyclic(v: usize, base: [Vertex; 4]) -> Result<Self> {
        check_order(v)?;
        let blocks = (0..v)
            .map(|i| Block::from_array(base.map(|x| ((usize::from(x) + i) % v) as Vertex)))
            .collect::<Result<Vec<_>>>()?;
        validate_design(v, blocks)
    }

    /// Caller guarantees `blocks` is sorted and is a valid design.
    pub(crate) fn from_sorted_unchecked(v: usize, blocks: Vec<Block>) -> Self {
        debug_assert!(blocks.windows(2).all(|w| w[0] < w[1]));
        Design { order: v as u8, blocks }
    }

    pub fn order(&self) -> usize {
        self.order.into()
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn contains(&self, b: &Block) -> bool {
        self.blocks.binary_search(b).is_ok()
    }

    /// `T(𝓑)`, sorted. Always `2·b_v` distinct triangles.
    pub fn triangles(&self) -> Vec<Triangle> {
        let mut t: Vec<Triangle> = self.blocks.iter().flat_map(|b| b.triangles()).collect();
        t.sort_unstable();
        t
    }

    pub fn permuted(&self, pi: &Permutation) -> Result<Design> {
        apply_permutation(pi, self)
    }

    pub fn to_record(&self) -> DesignRecord {
        DesignRecord {
            order: self.order(),
            blocks: self.blocks.iter().map(|b| b.to_array()).collect(),
        }
    }
}

impl TryFrom<DesignRecord> for Design {
    type Error = Error;

    fn try_from(r: DesignRecord) -> Result<Self> {
        Design::from_arrays(r.order, &r.blocks)
    }
}

impl From<Design> for DesignRecord {
    fn from(d: Design) -> Self {
        d.to_record()
    }
}

impl fmt::Display for Design {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, b) in self.blocks.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::block::Edge;

    fn order6() -> Design {
        Design::from_arrays(6, &[[0, 1, 2, 3], [2, 3, 4, 5], [4, 5, 0, 1]]).unwrap()
    }

    #[test]
    fn unique_order6_design_is_valid() {
        let d = order6();
        assert_eq!(d.num_blocks(), 3);
        assert_eq!(d.blocks()[0], Block::new(0, 1, 2, 3).unwrap());
        assert_eq!(d.triangles().len(), 6);
    }

    #[test]
    fn collision_reports_first_edge() {
        let err = Design::from_arrays(6, &[[0, 1, 2, 3], [0, 1, 4, 5], [2, 3, 4, 5]]).unwrap_err();
        assert_eq!(err, Error::EdgeCollision(Edge::new(0, 1).unwrap()));
    }

    #[test]
    fn other_validation_errors() {
        assert_eq!(
            Design::from_arrays(6, &[[0, 1, 2, 3], [2, 3, 4, 5]]).unwrap_err(),
            Error::WrongBlockCount { expected: 3, found: 2 }
        );
        assert_eq!(
            Design::from_arrays(6, &[[0, 1, 2, 3], [2, 3, 4, 5], [4, 6, 0, 1]]).unwrap_err(),
            Error::VertexOutOfRange { vertex: 6, order: 6 }
        );
        assert_eq!(Design::from_arrays(7, &[]).unwrap_err(), Error::InadmissibleOrder(7));
        // 01 is covered once; 02, 03, 12, 13 twice.
        let err = Design::from_arrays(6, &[[0, 1, 2, 3], [2, 3, 0, 1], [4, 5, 0, 1]]).unwrap_err();
        assert_eq!(err, Error::EdgeCollision(Edge::new(0, 2).unwrap()));
    }

    #[test]
    fn cyclic_order11_designs() {
        let b1 = Design::cyclic(11, [0, 1, 3, 5]).unwrap();
        let b2 = Design::cyclic(11, [0, 1, 3, 7]).unwrap();
        assert_eq!(b1.num_blocks(), 11);
        assert_ne!(b1, b2);
    }

    #[test]
    fn transposition_relabels_blocks() {
        let pi = Permutation::parse_cycles(6, "(1 2)").unwrap();
        let img = apply_permutation(&pi, &order6()).unwrap();
        let expected = Design::from_arrays(6, &[[0, 2, 1, 3], [1, 3, 4, 5], [4, 5, 0, 2]]).unwrap();
        assert_eq!(img, expected);
        assert_eq!(
            apply_permutation(&Permutation::identity(6), &order6()).unwrap(),
            order6()
        );
        assert_eq!(
            apply_permutation(&Permutation::identity(7), &order6()).unwrap_err(),
            Error::OrderMismatch(7, 6)
        );
    }

    #[test]
    fn json_record() {
        let d = order6();
        let s = serde_json::to_string(&d).unwrap();
        assert_eq!(s, r#"{"order":6,"blocks":[[0,1,2,3],[2,3,4,5],[4,5,0,1]]}"#);
        let back: Design = serde_json::from_str(&s).unwrap();
        assert_eq!(back, d);
        assert!(serde_json::from_str::<Design>(r#"{"order":6,"blocks":[[0,1,2,3]]}"#).is_err());
    }
}
