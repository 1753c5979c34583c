//! Block and fine triangle intersection numbers.
//!
//! For designs `𝓑₁, 𝓑₂` on the same points, `s` is the number of common
//! blocks and `t` the number of common triangles among the blocks that are
//! not common. A triangle lies in at most one block of a design, and a
//! common block gives two common triangles, so the pair shares `t + 2s`
//! triangles in total.
//!
//! `compute_spectrum` runs through every relabeling `π` of each class
//! representative against each representative. Relabelings in the same left
//! coset `π·Aut(𝓑ᵢ)` give the same image `π(𝓑ᵢ)`, so by default only the
//! lexicographically least member of each coset is visited. `π` is that
//! member iff `π(i) < π(x)` for every `x ≠ i` in the orbit of `i` under the
//! pointwise stabilizer of `0..i-1` in `Aut(𝓑ᵢ)`.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::block::{num_blocks, Block, Vertex, MAX_ORDER};
use crate::canon::{automorphisms, canonical_form};
use crate::design::{apply_permutation, Design};
use crate::error::{Error, Result};
use crate::parallel::map_units;
use crate::perm::Permutation;

/// `s` common blocks and `t + 2s` common triangles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FinePair {
    pub s: usize,
    pub t: usize,
}

pub fn fine_pair(d1: &Design, d2: &Design) -> Result<FinePair> {
    if d1.order() != d2.order() {
        return Err(Error::OrderMismatch(d1.order(), d2.order()));
    }
    let (only1, only2, s) = split_common(d1.blocks(), d2.blocks());
    let tri = |bs: &[Block]| {
        let mut t: Vec<_> = bs.iter().flat_map(|b| b.triangles()).collect();
        t.sort_unstable();
        t
    };
    let (t1, t2) = (tri(&only1), tri(&only2));
    let (mut i, mut j, mut t) = (0, 0, 0);
    while i < t1.len() && j < t2.len() {
        match t1[i].cmp(&t2[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                t += 1;
                i += 1;
                j += 1;
            }
        }
    }
    Ok(FinePair { s, t })
}

/// Merge scan of two sorted block lists.
fn split_common(a: &[Block], b: &[Block]) -> (Vec<Block>, Vec<Block>, usize) {
    let (mut i, mut j, mut common) = (0, 0, 0);
    let (mut only_a, mut only_b) = (Vec::new(), Vec::new());
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i] < b[j]) {
            only_a.push(a[i]);
            i += 1;
        } else if i == a.len() || b[j] < a[i] {
            only_b.push(b[j]);
            j += 1;
        } else {
            common += 1;
            i += 1;
            j += 1;
        }
    }
    (only_a, only_b, common)
}

/// Known `(J(v), J_T(v))` for `v ∈ {6, 10, 11}`.
pub fn reference_j_sets(v: usize) -> Result<(BTreeSet<usize>, BTreeSet<usize>)> {
    let b = num_blocks(v);
    let (j, jt): (BTreeSet<usize>, BTreeSet<usize>) = match v {
        6 | 10 => (
            (0..=b).filter(|&s| s + 1 != b && s + 2 != b).collect(),
            if v == 6 {
                [0, 2, 3, 6].into()
            } else {
                (0..=12).chain([14, 15, 18]).collect()
            },
        ),
        11 => ((0..=6).chain([11]).collect(), (0..=16).chain([22]).collect()),
        _ => return Err(Error::UnsupportedOrder(v)),
    };
    Ok((j, jt))
}

/// Number of isomorphism classes for the orders with reference data.
pub fn known_class_count(v: usize) -> Option<usize> {
    match v {
        6 => Some(1),
        10 => Some(3),
        11 => Some(2),
        _ => None,
    }
}

/// `{(s,t) : s + t ≤ b_v, s ∈ J, t + 2s ∈ J_T}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdmEnvelope {
    pub order: usize,
    pub pairs: BTreeSet<(usize, usize)>,
}

pub fn adm(v: usize, j: &BTreeSet<usize>, jt: &BTreeSet<usize>) -> AdmEnvelope {
    let b = num_blocks(v);
    let pairs = (0..=b)
        .flat_map(|s| (0..=b - s).map(move |t| (s, t)))
        .filter(|&(s, t)| j.contains(&s) && jt.contains(&(t + 2 * s)))
        .collect();
    AdmEnvelope { order: v, pairs }
}

/// The envelope built from [`reference_j_sets`].
pub fn reference_adm(v: usize) -> Result<AdmEnvelope> {
    let (j, jt) = reference_j_sets(v)?;
    Ok(adm(v, &j, &jt))
}

/// An achieved `(s,t)` with the least witness `(i, j, π)`:
/// `fine_pair(π(reps[i]), reps[j]) = (s,t)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectrumPoint {
    pub s: usize,
    pub t: usize,
    pub i: usize,
    pub j: usize,
    pub perm: Permutation,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectrumResult {
    pub order: usize,
    /// Sorted by `(s,t)`.
    pub achieved: Vec<SpectrumPoint>,
    /// Pairs of the reference envelope that no design pair realizes.
    pub excluded_within_adm: Vec<(usize, usize)>,
}

impl SpectrumResult {
    pub fn pairs(&self) -> BTreeSet<(usize, usize)> {
        self.achieved.iter().map(|p| (p.s, p.t)).collect()
    }

    /// `{s}` over achieved pairs.
    pub fn j(&self) -> BTreeSet<usize> {
        self.achieved.iter().map(|p| p.s).collect()
    }

    /// `{t + 2s}` over achieved pairs.
    pub fn j_t(&self) -> BTreeSet<usize> {
        self.achieved.iter().map(|p| p.t + 2 * p.s).collect()
    }
}

#[derive(Debug, Clone, Default)]
pub struct SpectrumOptions {
    pub jobs: usize,
    /// Visit all of `S_v` instead of one relabeling per coset of `Aut`.
    pub full_sweep: bool,
}

/// Membership tables for the blocks and triangles of a target design.
struct Target {
    blocks: Vec<u64>,
    triangles: Vec<u64>,
}

impl Target {
    fn new(d: &Design) -> Self {
        let mut blocks = vec![0u64; 1 << 10];
        let mut triangles = vec![0u64; 1 << 6];
        for b in d.blocks() {
            let k = usize::from(b.key());
            blocks[k >> 6] |= 1 << (k & 63);
            for t in b.triangles() {
                let [x, y, z] = t.vertices().map(usize::from);
                let k = x << 8 | y << 4 | z;
                triangles[k >> 6] |= 1 << (k & 63);
            }
        }
        Target { blocks, triangles }
    }

    #[inline]
    fn has_block(&self, k: usize) -> bool {
        self.blocks[k >> 6] >> (k & 63) & 1 == 1
    }

    #[inline]
    fn has_triangle(&self, x: usize, y: usize, z: usize) -> bool {
        // sort three
        let (x, y) = if x < y { (x, y) } else { (y, x) };
        let (y, z) = if y < z { (y, z) } else { (z, y) };
        let (x, y) = if x < y { (x, y) } else { (y, x) };
        let k = x << 8 | y << 4 | z;
        self.triangles[k >> 6] >> (k & 63) & 1 == 1
    }
}

/// One `(source, target, π(0))` slice of the sweep.
struct Sweep<'a> {
    v: usize,
    b: usize,
    /// Source blocks grouped by the largest point they contain.
    completes_at: Vec<Vec<[usize; 4]>>,
    /// `must_exceed[x]`: points `i < x` with the constraint `π(i) < π(x)`.
    must_exceed: &'a [Vec<usize>],
    target: &'a Target,
    image: [usize; MAX_ORDER],
    used: u32,
    found: Vec<Option<[usize; MAX_ORDER]>>,
}

impl Sweep<'_> {
    fn run(&mut self, pos: usize, s: usize, tri: usize) {
        if pos == self.v {
            let t = tri - 2 * s;
            let slot = &mut self.found[s * (self.b + 1) + t];
            if slot.is_none() {
                *slot = Some(self.image);
            }
            return;
        }
        let floor = self.must_exceed[pos]
            .iter()
            .map(|&i| self.image[i] + 1)
            .max()
            .unwrap_or(0);
        for y in floor..self.v {
            if self.used >> y & 1 == 1 {
                continue;
            }
            self.image[pos] = y;
            let (mut s2, mut tri2) = (s, tri);
            for &[a, b, c, d] in &self.completes_at[pos] {
                let [a, b, c, d] = [a, b, c, d].map(|x| self.image[x]);
                let (a, b) = (a.min(b), a.max(b));
                let (c, d) = (c.min(d), c.max(d));
                if self.target.has_block(a << 12 | b << 8 | c << 4 | d) {
                    s2 += 1;
                    tri2 += 2;
                } else {
                    tri2 += usize::from(self.target.has_triangle(a, b, c));
                    tri2 += usize::from(self.target.has_triangle(a, b, d));
                }
            }
            self.used |= 1 << y;
            self.run(pos + 1, s2, tri2);
            self.used &= !(1 << y);
        }
    }
}

/// Constraints selecting the least member of each coset `π·Aut`.
fn coset_constraints(v: usize, auts: &[Permutation]) -> Vec<Vec<usize>> {
    let mut must_exceed = vec![Vec::new(); v];
    let mut stabilizer: Vec<&Permutation> = auts.iter().collect();
    for i in 0..v {
        let orbit: BTreeSet<usize> = stabilizer.iter().map(|a| usize::from(a.apply(i as Vertex))).collect();
        for x in orbit {
            if x != i {
                must_exceed[x].push(i);
            }
        }
        stabilizer.retain(|a| usize::from(a.apply(i as Vertex)) == i);
    }
    must_exceed
}

/// Every achievable `(s,t)` over all pairs of designs built from the class
/// representatives, each with its least witness.
pub fn compute_spectrum(v: usize, reps: &[Design], opts: &SpectrumOptions) -> Result<SpectrumResult> {
    let expected = known_class_count(v).ok_or(Error::UnsupportedOrder(v))?;
    if let Some(d) = reps.iter().find(|d| d.order() != v) {
        return Err(Error::OrderMismatch(v, d.order()));
    }
    let distinct: BTreeSet<_> = reps.iter().map(|d| canonical_form(d).design).collect();
    if reps.len() != expected || distinct.len() != expected {
        return Err(Error::IncompleteClassList {
            order: v,
            expected,
            found: distinct.len(),
        });
    }

    let b = num_blocks(v);
    let targets: Vec<Target> = reps.iter().map(Target::new).collect();
    let constraints: Vec<Vec<Vec<usize>>> = reps
        .iter()
        .map(|d| {
            if opts.full_sweep {
                vec![Vec::new(); v]
            } else {
                coset_constraints(v, &automorphisms(d))
            }
        })
        .collect();
    let sources: Vec<Vec<Vec<[usize; 4]>>> = reps
        .iter()
        .map(|d| {
            let mut by_max = vec![Vec::new(); v];
            for blk in d.blocks() {
                let q = blk.to_array().map(usize::from);
                by_max[usize::from(blk.max_vertex())].push(q);
            }
            by_max
        })
        .collect();

    let k = reps.len();
    let units: Vec<usize> = (0..k * k * v).collect();
    let per_unit = map_units(opts.jobs, &units, |u| {
        let (pair, first) = (u / v, u % v);
        let (i, j) = (pair / k, pair % k);
        let mut sweep = Sweep {
            v,
            b,
            completes_at: sources[i].clone(),
            must_exceed: &constraints[i],
            target: &targets[j],
            image: [0; MAX_ORDER],
            used: 1 << first,
            found: vec![None; (b + 1) * (b + 1)],
        };
        sweep.image[0] = first;
        // no block has 0 as its largest point
        sweep.run(1, 0, 0);
        sweep.found
    });

    // units are in (i, j, π(0)) order, so the first hit is the least witness
    let mut best: BTreeMap<(usize, usize), SpectrumPoint> = BTreeMap::new();
    for (u, found) in per_unit.into_iter().enumerate() {
        let pair = u / v;
        for (idx, hit) in found.into_iter().enumerate() {
            let Some(image) = hit else { continue };
            let (s, t) = (idx / (b + 1), idx % (b + 1));
            best.entry((s, t)).or_insert_with(|| SpectrumPoint {
                s,
                t,
                i: pair / k,
                j: pair % k,
                perm: Permutation::from_images(image[..v].iter().map(|&x| x as Vertex).collect())
                    .expect("sweep builds bijections"),
            });
        }
    }

    let achieved: Vec<SpectrumPoint> = best.into_values().collect();
    for p in &achieved {
        let img = apply_permutation(&p.perm, &reps[p.i])?;
        let got = fine_pair(&img, &reps[p.j])?;
        if got != (FinePair { s: p.s, t: p.t }) {
            return Err(Error::ClassCountMismatch {
                order: v,
                detail: format!("witness for ({},{}) recomputes to ({},{})", p.s, p.t, got.s, got.t),
            });
        }
    }
    let pairs: BTreeSet<_> = achieved.iter().map(|p| (p.s, p.t)).collect();
    let excluded_within_adm = reference_adm(v)?.pairs.difference(&pairs).copied().collect();
    Ok(SpectrumResult {
        order: v,
        achieved,
        excluded_within_adm,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn order6() -> Design {
        Design::from_arrays(6, &[[0, 1, 2, 3], [2, 3, 4, 5], [4, 5, 0, 1]]).unwrap()
    }

    fn moved(cycles: &str, d: &Design) -> Design {
        apply_permutation(&Permutation::parse_cycles(d.order(), cycles).unwrap(), d).unwrap()
    }

    #[test]
    fn fine_pair_examples() {
        let d = order6();
        assert_eq!(fine_pair(&d, &d).unwrap(), FinePair { s: 3, t: 0 });
        assert_eq!(fine_pair(&moved("(1 2)", &d), &d).unwrap(), FinePair { s: 0, t: 2 });
        assert_eq!(
            fine_pair(&moved("(1 3)(2 4)", &d), &d).unwrap(),
            FinePair { s: 0, t: 3 }
        );
        let b1 = Design::cyclic(11, [0, 1, 3, 5]).unwrap();
        assert_eq!(fine_pair(&b1, &b1).unwrap(), FinePair { s: 11, t: 0 });
        assert!(fine_pair(&d, &b1).is_err());
    }

    #[test]
    fn reference_sets() {
        let (j, jt) = reference_j_sets(6).unwrap();
        assert_eq!(j, [0, 3].into());
        assert_eq!(jt, [0, 2, 3, 6].into());
        let (j, jt) = reference_j_sets(10).unwrap();
        assert_eq!(j, (0..=6).chain([9]).collect());
        assert_eq!(jt, (0..=12).chain([14, 15, 18]).collect());
        let (j, _) = reference_j_sets(11).unwrap();
        assert_eq!(j, (0..=6).chain([11]).collect());
        assert_eq!(reference_j_sets(15).unwrap_err(), Error::UnsupportedOrder(15));
    }

    #[test]
    fn adm_filters() {
        assert_eq!(reference_adm(6).unwrap().pairs, [(0, 0), (0, 2), (0, 3), (3, 0)].into());
        assert_eq!(adm(10, &[0].into(), &[0].into()).pairs, [(0, 0)].into());
        assert!(reference_adm(11).unwrap().pairs.contains(&(3, 0)));
    }

    #[test]
    fn coset_constraints_of_trivial_group() {
        let id = [Permutation::identity(4)];
        assert!(coset_constraints(4, &id).iter().all(Vec::is_empty));
        let swap = [Permutation::identity(4), Permutation::parse_cycles(4, "(0 1)").unwrap()];
        assert_eq!(coset_constraints(4, &swap)[1], vec![0]);
    }

    #[test]
    fn order6_spectrum() {
        let r = compute_spectrum(6, &[order6()], &SpectrumOptions::default()).unwrap();
        assert_eq!(r.pairs(), reference_adm(6).unwrap().pairs);
        assert!(r.excluded_within_adm.is_empty());
        let full = compute_spectrum(
            6,
            &[order6()],
            &SpectrumOptions {
                full_sweep: true,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(full, r);
    }

    #[test]
    fn class_list_checks() {
        assert!(matches!(
            compute_spectrum(6, &[order6(), moved("(0 1)", &order6())], &Default::default()),
            Err(Error::IncompleteClassList { .. })
        ));
        assert_eq!(
            compute_spectrum(15, &[], &Default::default()).unwrap_err(),
            Error::UnsupportedOrder(15)
        );
    }
}
