use std::fmt;

use serde::{Deserialize, Serialize};

use crate::block::{Vertex, MAX_ORDER};
use crate::error::{Error, Result};

/// Bijection on `{0..v-1}`; `image[i] = π(i)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vertex>", into = "Vec<Vertex>")]
pub struct Permutation {
    image: Vec<Vertex>,
}

impl Permutation {
    pub fn identity(v: usize) -> Self {
        Permutation {
            image: (0..v as Vertex).collect(),
        }
    }

    pub fn from_images(image: Vec<Vertex>) -> Result<Self> {
        let v = image.len();
        if v > MAX_ORDER {
            return Err(Error::OrderTooLarge {
                order: v,
                max: MAX_ORDER,
            });
        }
        let mut seen = [false; MAX_ORDER];
        for &x in &image {
            let x = usize::from(x);
            if x >= v || seen[x] {
                return Err(Error::InvalidPermutation(format!("{image:?} is not a bijection")));
            }
            seen[x] = true;
        }
        Ok(Permutation { image })
    }

    /// Parses cycle notation such as `(1 2)(3 4)` on `{0..v-1}`. Points not
    /// listed are fixed; `(1)` and the empty string denote the identity.
    pub fn parse_cycles(v: usize, s: &str) -> Result<Self> {
        let mut image: Vec<Vertex> = (0..v as Vertex).collect();
        let mut seen = vec![false; v];
        let mut rest = s.trim();
        while !rest.is_empty() {
            let body = rest
                .strip_prefix('(')
                .and_then(|r| r.split_once(')'))
                .ok_or_else(|| Error::Parse(format!("bad cycle notation `{s}`")))?;
            let (cycle, tail) = body;
            let points = cycle
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|t| !t.is_empty())
                .map(|t| {
                    t.parse::<usize>()
                        .ok()
                        .filter(|&x| x < v)
                        .ok_or_else(|| Error::Parse(format!("bad point `{t}` in `{s}` for order {v}")))
                })
                .collect::<Result<Vec<_>>>()?;
            for &x in &points {
                if std::mem::replace(&mut seen[x], true) {
                    return Err(Error::Parse(format!("point {x} repeated in `{s}`")));
                }
            }
            for (k, &x) in points.iter().enumerate() {
                image[x] = points[(k + 1) % points.len()] as Vertex;
            }
            rest = tail.trim_start();
        }
        Ok(Permutation { image })
    }

    pub fn order(&self) -> usize {
        self.image.len()
    }

    #[inline]
    pub fn apply(&self, x: Vertex) -> Vertex {
        self.image[usize::from(x)]
    }

    pub fn images(&self) -> &[Vertex] {
        &self.image
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(i, &x)| usize::from(x) == i)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        if self.order() != other.order() {
            return Err(Error::OrderMismatch(self.order(), other.order()));
        }
        Ok(Permutation {
            image: other.image.iter().map(|&x| self.apply(x)).collect(),
        })
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.order()];
        for (i, &x) in self.image.iter().enumerate() {
            inv[usize::from(x)] = i as Vertex;
        }
        Permutation { image: inv }
    }

    /// Disjoint cycles of length at least two, each starting at its least point.
    pub fn cycles(&self) -> Vec<Vec<Vertex>> {
        let mut done = vec![false; self.order()];
        let mut out = Vec::new();
        for start in 0..self.order() {
            if done[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = start;
            while !done[x] {
                done[x] = true;
                cycle.push(x as Vertex);
                x = self.image[x].into();
            }
            if cycle.len() > 1 {
                out.push(cycle);
            }
        }
        out
    }
}

impl TryFrom<Vec<Vertex>> for Permutation {
    type Error = Error;

    fn try_from(image: Vec<Vertex>) -> Result<Self> {
        Permutation::from_images(image)
    }
}

impl From<Permutation> for Vec<Vertex> {
    fn from(p: Permutation) -> Self {
        p.image
    }
}

/// Cycle notation; the identity prints as `()`.
impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return f.write_str("()");
        }
        for c in cycles {
            f.write_str("(")?;
            for (k, x) in c.iter().enumerate() {
                if k > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{x}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

/// Visits every permutation of `{0..v-1}` in lexicographic order of the
/// image array. The callback returns `false` to stop early.
pub fn for_each_permutation(v: usize, mut f: impl FnMut(&[Vertex]) -> bool) {
    let mut image: Vec<Vertex> = (0..v as Vertex).collect();
    loop {
        if !f(&image) {
            return;
        }
        // next lexicographic permutation
        let Some(i) = (0..v.saturating_sub(1)).rev().find(|&i| image[i] < image[i + 1]) else {
            return;
        };
        let j = (i + 1..v).rev().find(|&j| image[j] > image[i]).unwrap();
        image.swap(i, j);
        image[i + 1..].reverse();
    }
}

pub fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}
