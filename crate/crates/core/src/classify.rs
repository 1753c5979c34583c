//! Isomorphism classes of designs of a given order.
//!
//! Labeled designs are streamed from the search and bucketed by a cheap
//! invariant. Each bucket's first design is canonized; a class with
//! automorphism group `A` accounts for exactly `v!/|A|` labeled designs (or
//! `v!/|A| · b_v / #blocks` of them when only designs containing `[0,1,2-3]`
//! are searched), all of which share the bucket. A bucket whose count equals
//! the total share of the classes found in it holds no other class. Buckets
//! that do not balance get a second pass that canonizes every member.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::block::{all_blocks, num_blocks};
use crate::canon::{canonical_form, CanonicalForm};
use crate::design::Design;
use crate::enumerate::{ExpandedEnumerator, LabeledSearch, Strategy, SubtreeSearch};
use crate::error::{Error, Result};
use crate::perm::factorial;
use crate::structure::{invariant_key, InvariantKey};

/// Default largest order accepted by [`enumerate_classes`].
pub const DEFAULT_MAX_ORDER: usize = 11;

/// One isomorphism class.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DesignClass {
    /// Canonical form of the class.
    pub representative: Design,
    pub aut_order: u64,
    /// Number of labeled designs in the class, `v!/aut_order`.
    pub labeled_count: u64,
}

#[derive(Debug, Clone)]
pub struct ClassifyOptions {
    pub jobs: usize,
    /// Search only designs containing `[0,1,2-3]`.
    pub symmetry_breaking: bool,
    /// Search used when `symmetry_breaking` is off.
    pub strategy: Strategy,
    pub max_order: usize,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions {
            jobs: 0,
            symmetry_breaking: true,
            strategy: Strategy::Expanded,
            max_order: DEFAULT_MAX_ORDER,
        }
    }
}

#[derive(Debug, Default)]
struct Bucket {
    count: u64,
    first: Option<Design>,
}

fn merge_buckets(into: &mut BTreeMap<InvariantKey, Bucket>, from: BTreeMap<InvariantKey, Bucket>) {
    for (k, b) in from {
        let e = into.entry(k).or_default();
        e.count += b.count;
        if e.first.is_none() {
            e.first = b.first;
        }
    }
}

enum Source {
    Seeds(ExpandedEnumerator),
    All(LabeledSearch),
}

impl Source {
    fn fold<A, I, F>(&self, jobs: usize, init: I, fold: F) -> Vec<(usize, A)>
    where
        A: Send,
        I: Fn() -> A + Sync + Send,
        F: Fn(&mut A, &Design) + Sync + Send,
    {
        match self {
            Source::Seeds(e) => e.seeds().fold_subtrees(jobs, &[], init, fold),
            Source::All(s) => s.fold_subtrees(jobs, &[], init, fold),
        }
    }
}

/// All isomorphism classes of order `v`, sorted by canonical form.
pub fn enumerate_classes(v: usize, opts: &ClassifyOptions) -> Result<Vec<DesignClass>> {
    if v > opts.max_order {
        return Err(Error::OrderTooLarge {
            order: v,
            max: opts.max_order,
        });
    }
    let source = if opts.symmetry_breaking {
        Source::Seeds(ExpandedEnumerator::new(v)?)
    } else {
        Source::All(LabeledSearch::new(v, opts.strategy)?)
    };

    let mut buckets = BTreeMap::new();
    for (_, part) in source.fold(
        opts.jobs,
        BTreeMap::new,
        |acc: &mut BTreeMap<InvariantKey, Bucket>, d| {
            let b = acc.entry(invariant_key(d)).or_default();
            b.count += 1;
            if b.first.is_none() {
                b.first = Some(d.clone());
            }
        },
    ) {
        merge_buckets(&mut buckets, part);
    }

    let share = |c: &CanonicalForm| -> Result<u64> {
        let total = factorial(v);
        let (num, den) = if opts.symmetry_breaking {
            (total * num_blocks(v) as u64, c.aut_order * all_blocks(v).len() as u64)
        } else {
            (total, c.aut_order)
        };
        if num % den != 0 {
            return Err(Error::ClassCountMismatch {
                order: v,
                detail: format!("class with |Aut| = {} has a fractional share", c.aut_order),
            });
        }
        Ok(num / den)
    };

    let mut classes: BTreeMap<InvariantKey, BTreeSet<CanonicalForm>> = BTreeMap::new();
    let mut unresolved = BTreeSet::new();
    for (key, bucket) in &buckets {
        let form = canonical_form(bucket.first.as_ref().expect("non-empty bucket"));
        if share(&form)? != bucket.count {
            unresolved.insert(key.clone());
        }
        classes.entry(key.clone()).or_default().insert(form);
    }

    if !unresolved.is_empty() {
        let found = source.fold(
            opts.jobs,
            BTreeMap::new,
            |acc: &mut BTreeMap<InvariantKey, BTreeSet<CanonicalForm>>, d| {
                let key = invariant_key(d);
                if unresolved.contains(&key) {
                    acc.entry(key).or_default().insert(canonical_form(d));
                }
            },
        );
        for (_, part) in found {
            for (k, forms) in part {
                classes.entry(k).or_default().extend(forms);
            }
        }
    }

    let mut out = Vec::new();
    for (key, forms) in classes {
        let expected: u64 = forms.iter().map(&share).sum::<Result<u64>>()?;
        let counted = buckets[&key].count;
        if expected != counted {
            return Err(Error::ClassCountMismatch {
                order: v,
                detail: format!("bucket holds {counted} designs but its classes account for {expected}"),
            });
        }
        for f in forms {
            out.push(DesignClass {
                labeled_count: factorial(v) / f.aut_order,
                aut_order: f.aut_order,
                representative: f.design,
            });
        }
    }
    out.sort_by(|a, b| a.representative.cmp(&b.representative));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order6_has_one_class() {
        let classes = enumerate_classes(6, &ClassifyOptions::default()).unwrap();
        assert_eq!(classes.len(), 1);
        assert_eq!(classes[0].aut_order * classes[0].labeled_count, 720);
    }

    #[test]
    fn symmetry_breaking_agrees_with_full_search() {
        for strategy in [Strategy::Direct, Strategy::Expanded] {
            let opts = ClassifyOptions {
                symmetry_breaking: false,
                strategy,
                ..ClassifyOptions::default()
            };
            assert_eq!(
                enumerate_classes(6, &opts).unwrap(),
                enumerate_classes(6, &ClassifyOptions::default()).unwrap()
            );
        }
    }

    #[test]
    fn order_limits() {
        assert!(matches!(
            enumerate_classes(15, &ClassifyOptions::default()),
            Err(Error::OrderTooLarge { order: 15, max: 11 })
        ));
        assert_eq!(
            enumerate_classes(8, &ClassifyOptions::default()).unwrap_err(),
            Error::InadmissibleOrder(8)
        );
    }
}
