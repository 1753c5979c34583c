//! Structural invariants of designs: per-vertex degree profiles, the sets
//! `D` and `N` of degree-3 and degree-2 pairs, the graph `(X, D)` and
//! subdesigns on vertex subsets.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::block::{admissible_order, num_blocks, Block, Edge, Vertex};
use crate::design::Design;
use crate::error::{Error, Result};

/// `(d2(x), d3(x))` for every vertex `x`: the number of blocks in which `x`
/// has degree 2 and degree 3.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeProfile {
    pub per_vertex: Vec<(u8, u8)>,
}

impl DegreeProfile {
    /// Number of vertices with each `(d2, d3)`.
    pub fn census(&self) -> BTreeMap<(u8, u8), usize> {
        let mut out = BTreeMap::new();
        for &p in &self.per_vertex {
            *out.entry(p).or_insert(0) += 1;
        }
        out
    }

    /// `2·d2 + 3·d3 = v − 1` at every vertex.
    pub fn satisfies_identity(&self) -> bool {
        let v = self.per_vertex.len();
        self.per_vertex
            .iter()
            .all(|&(d2, d3)| 2 * usize::from(d2) + 3 * usize::from(d3) == v - 1)
    }
}

pub fn degree_profile(d: &Design) -> DegreeProfile {
    let p = count_degrees(d);
    assert!(p.satisfies_identity(), "degree identity fails on a valid design: {d}");
    p
}

/// [`degree_profile`] without the identity assertion.
pub(crate) fn count_degrees(d: &Design) -> DegreeProfile {
    let mut per_vertex = vec![(0u8, 0u8); d.order()];
    for b in d.blocks() {
        let [a, bb, c, e] = b.to_array();
        per_vertex[usize::from(a)].1 += 1;
        per_vertex[usize::from(bb)].1 += 1;
        per_vertex[usize::from(c)].0 += 1;
        per_vertex[usize::from(e)].0 += 1;
    }
    DegreeProfile { per_vertex }
}

/// `D = {{x,y} : [x,y,z-u] ∈ 𝓑}` and `N = {{z,u} : [x,y,z-u] ∈ 𝓑}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DnSets {
    pub d: BTreeSet<Edge>,
    pub n: BTreeSet<Edge>,
}

impl DnSets {
    pub fn intersection(&self) -> BTreeSet<Edge> {
        self.d.intersection(&self.n).copied().collect()
    }
}

pub fn dn_sets(d: &Design) -> DnSets {
    DnSets {
        d: d.blocks().iter().map(|b| b.deg3()).collect(),
        n: d.blocks().iter().map(|b| b.deg2()).collect(),
    }
}

/// A connected component of the graph `(X, D)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Component {
    pub vertices: Vec<Vertex>,
    pub edges: usize,
    /// Every vertex has degree two inside the component.
    pub is_cycle: bool,
}

fn d_graph_adjacency(d: &Design) -> Vec<Vec<Vertex>> {
    let mut adj = vec![Vec::new(); d.order()];
    for e in dn_sets(d).d {
        adj[usize::from(e.lo())].push(e.hi());
        adj[usize::from(e.hi())].push(e.lo());
    }
    adj
}

/// Components of `(X, D)`, isolated vertices included, ordered by least vertex.
pub fn d_graph_components(d: &Design) -> Vec<Component> {
    let adj = d_graph_adjacency(d);
    let mut seen = vec![false; d.order()];
    let mut out = Vec::new();
    for start in 0..d.order() {
        if seen[start] {
            continue;
        }
        let mut stack = vec![start];
        let mut vertices = Vec::new();
        seen[start] = true;
        while let Some(x) = stack.pop() {
            vertices.push(x as Vertex);
            for &y in &adj[x] {
                if !std::mem::replace(&mut seen[usize::from(y)], true) {
                    stack.push(y.into());
                }
            }
        }
        vertices.sort_unstable();
        let degree_sum: usize = vertices.iter().map(|&x| adj[usize::from(x)].len()).sum();
        let is_cycle = vertices.iter().all(|&x| adj[usize::from(x)].len() == 2);
        out.push(Component {
            vertices,
            edges: degree_sum / 2,
            is_cycle,
        });
    }
    out
}

/// Sorted cycle lengths of `(X, D)`, or `NotTwoRegular` with the vertex
/// degrees when the graph is not 2-regular.
pub fn check_d_cycle(d: &Design) -> Result<Vec<usize>> {
    let adj = d_graph_adjacency(d);
    if adj.iter().any(|a| a.len() != 2) {
        return Err(Error::NotTwoRegular(adj.iter().map(Vec::len).collect()));
    }
    let mut lengths: Vec<usize> = d_graph_components(d).iter().map(|c| c.vertices.len()).collect();
    lengths.sort_unstable();
    Ok(lengths)
}

/// Blocks of a design confined to a vertex subset that form a design on it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Subdesign {
    pub vertices: Vec<Vertex>,
    pub blocks: Vec<Block>,
}

/// Every `w`-subset `S` whose blocks form a design of order `w`, in
/// lexicographic order of `S`. Proper subsets only: `w >= v` gives nothing.
pub fn find_subdesigns(d: &Design, w: usize) -> Result<Vec<Subdesign>> {
    if !admissible_order(w) {
        return Err(Error::InadmissibleOrder(w));
    }
    let v = d.order();
    if w >= v {
        return Ok(Vec::new());
    }
    let masks: Vec<u32> = d
        .blocks()
        .iter()
        .map(|b| b.vertices().iter().fold(0, |m, &x| m | 1 << x))
        .collect();
    // Edge-disjoint blocks inside S cover at most C(w,2) edges, so exactly
    // b_w of them means they partition the edges of S.
    let need = num_blocks(w);
    let mut out = Vec::new();
    for_each_subset(v, w, |s| {
        let inside = masks.iter().filter(|&&m| m & s == m).count();
        if inside == need {
            out.push(Subdesign {
                vertices: (0..v as Vertex).filter(|&x| s >> x & 1 == 1).collect(),
                blocks: d
                    .blocks()
                    .iter()
                    .zip(&masks)
                    .filter(|&(_, &m)| m & s == m)
                    .map(|(&b, _)| b)
                    .collect(),
            });
        }
    });
    Ok(out)
}

/// Visits the `k`-subsets of `{0..n-1}` as bitmasks, lexicographically.
fn for_each_subset(n: usize, k: usize, mut f: impl FnMut(u32)) {
    fn rec(n: usize, k: usize, from: usize, acc: u32, f: &mut dyn FnMut(u32)) {
        if k == 0 {
            f(acc);
            return;
        }
        for x in from..=n - k {
            rec(n, k - 1, x + 1, acc | 1 << x, f);
        }
    }
    rec(n, k, 0, 0, &mut f);
}

/// Cheap isomorphism invariant used to bucket designs before canonizing.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct InvariantKey {
    profiles: Vec<(u8, u8)>,
    d_components: Vec<(usize, usize)>,
    n_degrees: Vec<u8>,
    d_and_n: usize,
    /// Triangles of the graph with edge set `D ∪ N`.
    dn_triangles: usize,
}

pub fn invariant_key(d: &Design) -> InvariantKey {
    let mut profiles = degree_profile(d).per_vertex;
    profiles.sort_unstable();
    let mut d_components: Vec<(usize, usize)> = d_graph_components(d)
        .iter()
        .map(|c| (c.vertices.len(), c.edges))
        .collect();
    d_components.sort_unstable();
    let dn = dn_sets(d);
    let mut n_degrees = vec![0u8; d.order()];
    for e in &dn.n {
        n_degrees[usize::from(e.lo())] += 1;
        n_degrees[usize::from(e.hi())] += 1;
    }
    n_degrees.sort_unstable();
    let mut adj = vec![0u32; d.order()];
    for e in dn.d.iter().chain(&dn.n) {
        adj[usize::from(e.lo())] |= 1 << e.hi();
        adj[usize::from(e.hi())] |= 1 << e.lo();
    }
    let dn_triangles =
        dn.d.union(&dn.n)
            .map(|e| (adj[usize::from(e.lo())] & adj[usize::from(e.hi())]).count_ones() as usize)
            .sum::<usize>()
            / 3;
    InvariantKey {
        profiles,
        d_components,
        n_degrees,
        d_and_n: dn.intersection().len(),
        dn_triangles,
    }
}
