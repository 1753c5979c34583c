//! Canonical forms and automorphism groups.
//!
//! The canonical form of a design is its least image under all `v!`
//! relabelings, comparing sorted block lists lexicographically. The least
//! block any design can have is `[0,1,2-3]`, so the minimum is attained by a
//! relabeling that sends some block onto `[0,1,2-3]`. The search therefore
//! starts from each block in each of its four orientations and extends the
//! labeling one point at a time, cutting a branch as soon as a lower bound on
//! its sorted image exceeds the best image found so far.
//!
//! Every relabeling that reaches the minimum is recorded; these form a coset
//! of the automorphism group, which gives the group and its order.

use serde::{Deserialize, Serialize};

use crate::block::{Block, Vertex, MAX_ORDER};
use crate::design::{apply_permutation, Design};
use crate::error::{Error, Result};
use crate::perm::Permutation;

const UNSET: u8 = u8::MAX;

/// Least relabeled design together with `|Aut|`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CanonicalForm {
    #[serde(flatten)]
    pub design: Design,
    pub aut_order: u64,
}

/// Result of a full canonical labeling run.
#[derive(Debug, Clone)]
pub struct Canonization {
    pub form: CanonicalForm,
    /// `π` with `π(d)` equal to the canonical design.
    pub labeling: Permutation,
    /// All of `Aut(d)`, sorted, identity first.
    pub automorphisms: Vec<Permutation>,
}

struct Search<'a> {
    v: usize,
    blocks: &'a [[Vertex; 4]],
    label: [u8; MAX_ORDER],
    next: u8,
    best: Vec<u16>,
    winners: Vec<[u8; MAX_ORDER]>,
    scratch: Vec<u16>,
}

impl Search<'_> {
    /// Lower bound on the key of a block under any completion of the
    /// current labeling: unlabeled points get the smallest free labels.
    fn bound_key(&self, blk: &[Vertex; 4]) -> u16 {
        let fresh = u16::from(self.next);
        let pair = |x: Vertex, y: Vertex| -> (u16, u16) {
            let (lx, ly) = (self.label[usize::from(x)], self.label[usize::from(y)]);
            match (lx != UNSET, ly != UNSET) {
                (true, true) => {
                    let (a, b) = (u16::from(lx), u16::from(ly));
                    (a.min(b), a.max(b))
                }
                (true, false) => (u16::from(lx), fresh),
                (false, true) => (u16::from(ly), fresh),
                (false, false) => (fresh, fresh + 1),
            }
        };
        let (a, b) = pair(blk[0], blk[1]);
        let (c, d) = pair(blk[2], blk[3]);
        (a << 12) | (b << 8) | (c << 4) | d
    }

    /// Sorted bound keys compared with the best image so far.
    fn compare_bound(&mut self) -> std::cmp::Ordering {
        self.scratch.clear();
        for b in self.blocks {
            let k = self.bound_key(b);
            self.scratch.push(k);
        }
        self.scratch.sort_unstable();
        if self.best.is_empty() {
            return std::cmp::Ordering::Less;
        }
        self.scratch.as_slice().cmp(self.best.as_slice())
    }

    fn extend(&mut self) {
        use std::cmp::Ordering::*;
        let order = self.compare_bound();
        if order == Greater {
            return;
        }
        if usize::from(self.next) == self.v {
            // the bound is exact once every point is labeled
            if order == Less {
                self.best.clone_from(&self.scratch);
                self.winners.clear();
            }
            self.winners.push(self.label);
            return;
        }
        for x in 0..self.v {
            if self.label[x] != UNSET {
                continue;
            }
            self.label[x] = self.next;
            self.next += 1;
            self.extend();
            self.next -= 1;
            self.label[x] = UNSET;
        }
    }
}

/// Canonical form, a canonical labeling and the automorphism group of `d`.
pub fn canonicalize(d: &Design) -> Canonization {
    let v = d.order();
    let blocks: Vec<[Vertex; 4]> = d.blocks().iter().map(|b| b.to_array()).collect();
    let mut s = Search {
        v,
        blocks: &blocks,
        label: [UNSET; MAX_ORDER],
        next: 0,
        best: Vec::new(),
        winners: Vec::new(),
        scratch: Vec::with_capacity(blocks.len()),
    };
    for &[a, b, c, e] in &blocks {
        for (x0, x1) in [(a, b), (b, a)] {
            for (x2, x3) in [(c, e), (e, c)] {
                for (l, x) in [x0, x1, x2, x3].into_iter().enumerate() {
                    s.label[usize::from(x)] = l as u8;
                }
                s.next = 4;
                s.extend();
                for x in [x0, x1, x2, x3] {
                    s.label[usize::from(x)] = UNSET;
                }
            }
        }
    }

    let to_perm = |l: &[u8; MAX_ORDER]| Permutation::from_images(l[..v].to_vec()).expect("bijection");
    let labeling = to_perm(&s.winners[0]);
    let inv = labeling.inverse();
    let mut automorphisms: Vec<Permutation> = s
        .winners
        .iter()
        .map(|w| inv.compose(&to_perm(w)).expect("same order"))
        .collect();
    automorphisms.sort();
    let blocks = s.best.iter().map(|&k| Block::from_key(k)).collect();
    let design = Design::from_sorted_unchecked(v, blocks);
    debug_assert_eq!(apply_permutation(&labeling, d).as_ref(), Ok(&design));
    Canonization {
        form: CanonicalForm {
            design,
            aut_order: automorphisms.len() as u64,
        },
        labeling,
        automorphisms,
    }
}

pub fn canonical_form(d: &Design) -> CanonicalForm {
    canonicalize(d).form
}

/// `Aut(d)`, sorted.
pub fn automorphisms(d: &Design) -> Vec<Permutation> {
    canonicalize(d).automorphisms
}

/// `Some(π)` with `π(d1) = d2` when the designs are isomorphic.
pub fn are_isomorphic(d1: &Design, d2: &Design) -> Result<Option<Permutation>> {
    if d1.order() != d2.order() {
        return Err(Error::OrderMismatch(d1.order(), d2.order()));
    }
    let c1 = canonicalize(d1);
    let c2 = canonicalize(d2);
    if c1.form.design != c2.form.design {
        return Ok(None);
    }
    let witness = c2.labeling.inverse().compose(&c1.labeling)?;
    if apply_permutation(&witness, d1)? != *d2 {
        // canonical labelings are exact, so this would be a bug
        return Err(Error::ClassCountMismatch {
            order: d1.order(),
            detail: "isomorphism witness failed to verify".into(),
        });
    }
    Ok(Some(witness))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::{factorial, for_each_permutation};

    fn order6() -> Design {
        Design::from_arrays(6, &[[0, 1, 2, 3], [2, 3, 4, 5], [4, 5, 0, 1]]).unwrap()
    }

    /// Least image over all of `S_v`, by brute force.
    fn brute_force(d: &Design) -> (Design, u64) {
        let mut best: Option<Design> = None;
        let mut count = 0;
        for_each_permutation(d.order(), |p| {
            let pi = Permutation::from_images(p.to_vec()).unwrap();
            let img = apply_permutation(&pi, d).unwrap();
            match &best {
                Some(b) if img > *b => {}
                Some(b) if img == *b => count += 1,
                _ => {
                    best = Some(img);
                    count = 1;
                }
            }
            true
        });
        (best.unwrap(), count)
    }

    #[test]
    fn order6_matches_brute_force() {
        let (design, aut) = brute_force(&order6());
        let c = canonicalize(&order6());
        assert_eq!(c.form.design, design);
        assert_eq!(c.form.aut_order, aut);
        assert_eq!(factorial(6) % aut, 0);
        assert!(c.automorphisms[0].is_identity());
        for a in &c.automorphisms {
            assert_eq!(apply_permutation(a, &order6()).unwrap(), order6());
        }
    }

    #[test]
    fn canonical_form_is_idempotent() {
        let b1 = Design::cyclic(11, [0, 1, 3, 5]).unwrap();
        let c = canonical_form(&b1);
        assert_eq!(canonical_form(&c.design), c);
        assert_eq!(c.aut_order % 11, 0);
    }

    #[test]
    fn isomorphism_witness() {
        let d = order6();
        let pi = Permutation::parse_cycles(6, "(0 4 2)(1 5)").unwrap();
        let img = apply_permutation(&pi, &d).unwrap();
        let w = are_isomorphic(&d, &img).unwrap().unwrap();
        assert_eq!(apply_permutation(&w, &d).unwrap(), img);
        assert!(matches!(
            are_isomorphic(&d, &Design::cyclic(11, [0, 1, 3, 5]).unwrap()),
            Err(Error::OrderMismatch(6, 11))
        ));
    }

    #[test]
    fn cyclic_order11_designs_differ() {
        let b1 = Design::cyclic(11, [0, 1, 3, 5]).unwrap();
        let b2 = Design::cyclic(11, [0, 1, 3, 7]).unwrap();
        assert_eq!(are_isomorphic(&b1, &b2).unwrap(), None);
    }
}
