//! Exhaustive generation of labeled designs.
//!
//! Exact cover over the edges of `K_v` with blocks as options, solved with
//! dancing links. Each node branches on the uncovered edge with the fewest
//! compatible blocks (least edge index on ties) and tries those blocks in
//! block order. Distinct choices at a node lead to disjoint subtrees, so each
//! labeled design is produced exactly once. At the root every edge lies in
//! the same number of blocks, so the first branching edge is `{0,1}` unless
//! blocks were fixed beforehand.

use crate::block::{admissible_order, all_blocks, num_blocks, num_edges, Block, MAX_ORDER};
use crate::design::Design;
use crate::edges::block_bits;
use crate::error::{Error, Result};
use crate::parallel::map_units;

/// Dancing-links matrix: items are the edges of `K_v`, options are blocks.
/// Option `k` owns nodes `first + 5k .. first + 5k + 5`.
#[derive(Debug, Clone)]
struct Links {
    /// Item list, index 0 is the root.
    left: Vec<u32>,
    right: Vec<u32>,
    len: Vec<u32>,
    /// Per node: vertical links and owning item. Nodes `1..=items` are headers.
    up: Vec<u32>,
    down: Vec<u32>,
    item: Vec<u32>,
    first: u32,
}

impl Links {
    fn new(items: usize, options: &[u128]) -> Self {
        let n = items as u32;
        let first = n + 1;
        let total = first as usize + 5 * options.len();
        let mut l = Links {
            left: (0..=n).map(|i| if i == 0 { n } else { i - 1 }).collect(),
            right: (0..=n).map(|i| if i == n { 0 } else { i + 1 }).collect(),
            len: vec![0; items + 1],
            up: (0..total as u32).collect(),
            down: (0..total as u32).collect(),
            item: vec![0; total],
            first,
        };
        for (k, &mask) in options.iter().enumerate() {
            let mut bits = mask;
            let mut x = first + 5 * k as u32;
            while bits != 0 {
                let i = bits.trailing_zeros() + 1;
                bits &= bits - 1;
                // append x at the bottom of column i
                let last = l.up[i as usize];
                l.up[x as usize] = last;
                l.down[x as usize] = i;
                l.down[last as usize] = x;
                l.up[i as usize] = x;
                l.item[x as usize] = i;
                l.len[i as usize] += 1;
                x += 1;
            }
        }
        l
    }

    #[inline]
    fn option_of(&self, x: u32) -> u32 {
        (x - self.first) / 5
    }

    #[inline]
    fn next_in_option(&self, x: u32) -> u32 {
        let base = x - (x - self.first) % 5;
        if x + 1 == base + 5 {
            base
        } else {
            x + 1
        }
    }

    #[inline]
    fn prev_in_option(&self, x: u32) -> u32 {
        let base = x - (x - self.first) % 5;
        if x == base {
            base + 4
        } else {
            x - 1
        }
    }

    fn cover(&mut self, i: u32) {
        let (l, r) = (self.left[i as usize], self.right[i as usize]);
        self.right[l as usize] = r;
        self.left[r as usize] = l;
        let mut x = self.down[i as usize];
        while x != i {
            let mut y = self.next_in_option(x);
            while y != x {
                let (u, d) = (self.up[y as usize], self.down[y as usize]);
                self.down[u as usize] = d;
                self.up[d as usize] = u;
                self.len[self.item[y as usize] as usize] -= 1;
                y = self.next_in_option(y);
            }
            x = self.down[x as usize];
        }
    }

    fn uncover(&mut self, i: u32) {
        let mut x = self.up[i as usize];
        while x != i {
            let mut y = self.prev_in_option(x);
            while y != x {
                let (u, d) = (self.up[y as usize], self.down[y as usize]);
                self.down[u as usize] = y;
                self.up[d as usize] = y;
                self.len[self.item[y as usize] as usize] += 1;
                y = self.prev_in_option(y);
            }
            x = self.up[x as usize];
        }
        let (l, r) = (self.left[i as usize], self.right[i as usize]);
        self.right[l as usize] = i;
        self.left[r as usize] = i;
    }

    /// Covers every other item of the option owning node `x`.
    fn select(&mut self, x: u32) {
        let mut y = self.next_in_option(x);
        while y != x {
            self.cover(self.item[y as usize]);
            y = self.next_in_option(y);
        }
    }

    fn deselect(&mut self, x: u32) {
        let mut y = self.prev_in_option(x);
        while y != x {
            self.uncover(self.item[y as usize]);
            y = self.prev_in_option(y);
        }
    }

    /// Uncovered item with the fewest remaining options; lowest index on ties.
    fn is_active(&self, i: u32) -> bool {
        let r = self.right[i as usize];
        self.left[r as usize] == i
    }

    fn is_linked(&self, x: u32) -> bool {
        let u = self.up[x as usize];
        self.down[u as usize] == x
    }

    fn choose(&self) -> Option<u32> {
        let mut best = None;
        let mut best_len = u32::MAX;
        let mut i = self.right[0];
        while i != 0 {
            let n = self.len[i as usize];
            if n < best_len {
                best_len = n;
                best = Some(i);
                if n == 0 {
                    break;
                }
            }
            i = self.right[i as usize];
        }
        best
    }
}

#[derive(Debug, Clone)]
pub struct Enumerator {
    order: usize,
    blocks: Vec<Block>,
    /// Matrix with the fixed blocks already selected.
    links: Links,
    fixed: Vec<u32>,
    /// Item branched on at depth 1, and the option nodes of its branches.
    root_item: u32,
    roots: Vec<u32>,
}

/// Search state: the blocks chosen so far on the path from the root.
#[derive(Debug, Clone, Default)]
pub struct SearchNode {
    pub chosen: Vec<u32>,
}

impl SearchNode {
    pub fn depth(&self) -> usize {
        self.chosen.len()
    }
}

impl Enumerator {
    pub fn new(v: usize) -> Result<Self> {
        if v > MAX_ORDER {
            return Err(Error::OrderTooLarge {
                order: v,
                max: MAX_ORDER,
            });
        }
        if !admissible_order(v) {
            return Err(Error::InadmissibleOrder(v));
        }
        let blocks = all_blocks(v);
        let masks: Vec<u128> = blocks.iter().map(|&b| block_bits(v, b)).collect();
        let links = Links::new(num_edges(v), &masks);
        let mut en = Enumerator {
            order: v,
            blocks,
            links,
            fixed: Vec::new(),
            root_item: 0,
            roots: Vec::new(),
        };
        en.reset_roots();
        Ok(en)
    }

    /// Restricts the search to designs containing `b`.
    pub fn with_fixed_block(mut self, b: Block) -> Result<Self> {
        if usize::from(b.max_vertex()) >= self.order {
            return Err(Error::VertexOutOfRange {
                vertex: b.max_vertex().into(),
                order: self.order,
            });
        }
        let k = self.blocks.binary_search(&b).expect("all blocks listed") as u32;
        if self.fixed.contains(&k) {
            return Ok(self);
        }
        self.fixed.push(k);
        let first = self.links.first + 5 * k;
        // the block is still available iff every one of its nodes is linked
        // into an uncovered column
        let live = (first..first + 5).all(|x| {
            let i = self.links.item[x as usize];
            self.links.is_active(i) && self.links.is_linked(x)
        });
        if live {
            self.links.cover(self.links.item[first as usize]);
            self.links.select(first);
            self.reset_roots();
        } else {
            self.roots.clear();
        }
        Ok(self)
    }

    fn reset_roots(&mut self) {
        self.roots.clear();
        self.root_item = 0;
        if let Some(i) = self.links.choose() {
            self.root_item = i;
            let mut x = self.links.down[i as usize];
            while x != i {
                self.roots.push(x);
                x = self.links.down[x as usize];
            }
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Block chosen at depth 1 in subtree `i`.
    pub fn subtree_block(&self, i: usize) -> Block {
        self.blocks[self.links.option_of(self.roots[i]) as usize]
    }

    fn visit_exact_covers(&self, i: usize, visit: &mut dyn FnMut(&Design)) -> u64 {
        let mut links = self.links.clone();
        let x = self.roots[i];
        links.cover(self.root_item);
        links.select(x);
        let mut node = SearchNode {
            chosen: self.fixed.clone(),
        };
        node.chosen.push(links.option_of(x));
        let mut count = 0;
        self.search(&mut links, &mut node, &mut |d| {
            count += 1;
            visit(d)
        });
        count
    }

    fn search(&self, links: &mut Links, node: &mut SearchNode, visit: &mut dyn FnMut(&Design)) {
        let Some(i) = links.choose() else {
            debug_assert_eq!(node.depth(), num_blocks(self.order));
            let mut blocks: Vec<Block> = node.chosen.iter().map(|&b| self.blocks[b as usize]).collect();
            blocks.sort_unstable();
            visit(&Design::from_sorted_unchecked(self.order, blocks));
            return;
        };
        if links.len[i as usize] == 0 {
            return;
        }
        links.cover(i);
        let mut x = links.down[i as usize];
        while x != i {
            links.select(x);
            node.chosen.push(links.option_of(x));
            self.search(links, node, visit);
            node.chosen.pop();
            links.deselect(x);
            x = links.down[x as usize];
        }
        links.uncover(i);
    }
}

/// A search split into independent depth-1 work units.
pub trait SubtreeSearch: Sync {
    fn order(&self) -> usize;

    fn num_subtrees(&self) -> usize;

    /// Visits every design in subtree `i`; returns how many were visited.
    fn visit_subtree(&self, i: usize, visit: &mut dyn FnMut(&Design)) -> u64;

    fn visit_all(&self, visit: &mut dyn FnMut(&Design)) -> u64 {
        (0..self.num_subtrees()).map(|i| self.visit_subtree(i, visit)).sum()
    }

    /// Folds every subtree not listed in `skip` into its own accumulator,
    /// running up to `jobs` workers. Results come back in subtree order, so
    /// merging them left to right is independent of the worker count.
    fn fold_subtrees<A, I, F>(&self, jobs: usize, skip: &[usize], init: I, fold: F) -> Vec<(usize, A)>
    where
        Self: Sized,
        A: Send,
        I: Fn() -> A + Sync + Send,
        F: Fn(&mut A, &Design) + Sync + Send,
    {
        let units: Vec<usize> = (0..self.num_subtrees()).filter(|i| !skip.contains(i)).collect();
        let results = map_units(jobs, &units, |i| {
            let mut acc = init();
            self.visit_subtree(i, &mut |d| fold(&mut acc, d));
            acc
        });
        units.into_iter().zip(results).collect()
    }

    /// Number of designs produced by the whole search.
    fn count(&self, jobs: usize) -> u64
    where
        Self: Sized,
    {
        self.fold_subtrees(jobs, &[], || 0u64, |n, _| *n += 1)
            .into_iter()
            .map(|(_, n)| n)
            .sum()
    }
}

impl SubtreeSearch for Enumerator {
    fn order(&self) -> usize {
        self.order
    }

    fn num_subtrees(&self) -> usize {
        self.roots.len()
    }

    fn visit_subtree(&self, i: usize, visit: &mut dyn FnMut(&Design)) -> u64 {
        self.visit_exact_covers(i, visit)
    }
}

/// Labeled designs generated from the designs that contain `[0,1,2-3]`.
///
/// For every block `B = [a,b,c-d]` let `σ_B` send `0,1,2,3` to `a,b,c,d` and
/// the remaining points to the remaining points in increasing order. A
/// labeled design `D` whose least block is `B` is `σ_B(F)` for exactly one
/// design `F` containing `[0,1,2-3]`, namely `σ_B⁻¹(D)`. So emitting
/// `σ_B(F)` over all such seeds `F` and all blocks `B`, and keeping the image
/// only when `B` is its least block, produces every labeled design once.
#[derive(Debug, Clone)]
pub struct ExpandedEnumerator {
    seeds: Enumerator,
    /// `σ_B` for every block `B`, in block order.
    relabelings: Vec<(u16, [u8; MAX_ORDER])>,
}

impl ExpandedEnumerator {
    pub fn new(v: usize) -> Result<Self> {
        let seeds = Enumerator::new(v)?.with_fixed_block(seed_block())?;
        let relabelings = all_blocks(v)
            .into_iter()
            .map(|b| {
                let head = b.to_array();
                let mut map = [0u8; MAX_ORDER];
                map[..4].copy_from_slice(&head);
                let rest = (0..v as u8).filter(|x| !head.contains(x));
                for (slot, x) in map[4..v].iter_mut().zip(rest) {
                    *slot = x;
                }
                (b.key(), map)
            })
            .collect();
        Ok(ExpandedEnumerator { seeds, relabelings })
    }

    /// The underlying search over designs containing `[0,1,2-3]`.
    pub fn seeds(&self) -> &Enumerator {
        &self.seeds
    }

    fn expand(&self, seed: &Design, visit: &mut dyn FnMut(&Design)) -> u64 {
        let v = seed.order();
        let target = seed_block();
        let others: Vec<[u8; 4]> = seed
            .blocks()
            .iter()
            .filter(|&&b| b != target)
            .map(|b| b.to_array())
            .collect();
        let mut keys = Vec::with_capacity(others.len() + 1);
        let mut emitted = 0;
        'blocks: for &(least, map) in &self.relabelings {
            keys.clear();
            keys.push(least);
            for q in &others {
                let k = image_key(&map, q);
                if k < least {
                    continue 'blocks;
                }
                keys.push(k);
            }
            keys.sort_unstable();
            let blocks = keys.iter().map(|&k| Block::from_key(k)).collect();
            visit(&Design::from_sorted_unchecked(v, blocks));
            emitted += 1;
        }
        emitted
    }
}

impl SubtreeSearch for ExpandedEnumerator {
    fn order(&self) -> usize {
        self.seeds.order
    }

    fn num_subtrees(&self) -> usize {
        self.seeds.roots.len()
    }

    fn visit_subtree(&self, i: usize, visit: &mut dyn FnMut(&Design)) -> u64 {
        let mut n = 0;
        self.seeds
            .visit_exact_covers(i, &mut |seed| n += self.expand(seed, visit));
        n
    }
}

/// `[0,1,2-3]`; every design has a relabeling containing it.
pub fn seed_block() -> Block {
    Block::new(0, 1, 2, 3).expect("distinct points")
}

#[inline]
fn image_key(map: &[u8; MAX_ORDER], b: &[u8; 4]) -> u16 {
    let [a, b, c, d] = b.map(|x| u16::from(map[usize::from(x)]));
    let (a, b) = if a < b { (a, b) } else { (b, a) };
    let (c, d) = if c < d { (c, d) } else { (d, c) };
    (a << 12) | (b << 8) | (c << 4) | d
}

/// Which search produces labeled designs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strategy {
    /// Plain exact cover over all blocks.
    Direct,
    /// Exact cover for seeds containing `[0,1,2-3]`, then relabeling.
    #[default]
    Expanded,
}

/// A labeled-design search with either strategy.
#[derive(Debug, Clone)]
pub enum LabeledSearch {
    Direct(Enumerator),
    Expanded(ExpandedEnumerator),
}

impl LabeledSearch {
    pub fn new(v: usize, strategy: Strategy) -> Result<Self> {
        Ok(match strategy {
            Strategy::Direct => LabeledSearch::Direct(Enumerator::new(v)?),
            Strategy::Expanded => LabeledSearch::Expanded(ExpandedEnumerator::new(v)?),
        })
    }
}

impl SubtreeSearch for LabeledSearch {
    fn order(&self) -> usize {
        match self {
            LabeledSearch::Direct(e) => e.order(),
            LabeledSearch::Expanded(e) => e.order(),
        }
    }

    fn num_subtrees(&self) -> usize {
        match self {
            LabeledSearch::Direct(e) => e.num_subtrees(),
            LabeledSearch::Expanded(e) => e.num_subtrees(),
        }
    }

    fn visit_subtree(&self, i: usize, visit: &mut dyn FnMut(&Design)) -> u64 {
        match self {
            LabeledSearch::Direct(e) => e.visit_subtree(i, visit),
            LabeledSearch::Expanded(e) => e.visit_subtree(i, visit),
        }
    }
}

/// Streams every labeled design of order `v` to `visitor`, sequentially.
pub fn enumerate_labeled(v: usize, mut visitor: impl FnMut(&Design)) -> Result<u64> {
    Ok(ExpandedEnumerator::new(v)?.visit_all(&mut visitor))
}
