//! Sweeps over every labeled design of an order, checking structural
//! properties and collecting counterexamples.

use serde::{Deserialize, Serialize};

use crate::design::{validate_design, Design, DesignRecord};
use crate::enumerate::{LabeledSearch, Strategy, SubtreeSearch};
use crate::error::Result;
use crate::structure::{check_d_cycle, count_degrees, dn_sets, find_subdesigns};

/// Counterexamples kept per check.
pub const MAX_RECORDED: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Check {
    /// Blocks partition the edges of `K_v`.
    EdgePartition,
    /// `2·d2 + 3·d3 = v − 1` at every vertex.
    DegreeIdentity,
    /// Every vertex has `(d2, d3) = (1, 1)`.
    ProfileOrder6,
    /// Four vertices with `(0, 3)` and six with `(3, 1)`.
    CensusOrder10,
    /// Some 6 points carry a design of order 6.
    ContainsOrder6,
    /// Every vertex has `(d2, d3) = (2, 2)`.
    ProfileOrder11,
    /// `(X, D)` is a single cycle through all points.
    HamiltonianD,
    /// `D ∩ N = ∅`.
    DisjointDn,
}

impl Check {
    pub fn name(self) -> &'static str {
        match self {
            Check::EdgePartition => "edge-partition",
            Check::DegreeIdentity => "degree-identity",
            Check::ProfileOrder6 => "profile-1-1",
            Check::CensusOrder10 => "census-4x03-6x31",
            Check::ContainsOrder6 => "order-6-subdesign",
            Check::ProfileOrder11 => "profile-2-2",
            Check::HamiltonianD => "d-graph-hamiltonian-cycle",
            Check::DisjointDn => "d-n-disjoint",
        }
    }

    /// Checks that apply at order `v`.
    pub fn for_order(v: usize) -> Vec<Check> {
        let mut out = vec![Check::EdgePartition, Check::DegreeIdentity];
        match v {
            6 => out.push(Check::ProfileOrder6),
            10 => out.extend([Check::CensusOrder10, Check::ContainsOrder6]),
            11 => out.extend([Check::ProfileOrder11, Check::HamiltonianD, Check::DisjointDn]),
            _ => {}
        }
        out
    }

    pub fn holds(self, d: &Design) -> bool {
        let v = d.order();
        match self {
            Check::EdgePartition => validate_design(v, d.blocks().to_vec()).is_ok(),
            Check::DegreeIdentity => count_degrees(d).satisfies_identity(),
            Check::ProfileOrder6 => count_degrees(d).per_vertex.iter().all(|&p| p == (1, 1)),
            Check::CensusOrder10 => {
                let census = count_degrees(d).census();
                census.len() == 2 && census.get(&(0, 3)) == Some(&4) && census.get(&(3, 1)) == Some(&6)
            }
            Check::ContainsOrder6 => find_subdesigns(d, 6).is_ok_and(|s| !s.is_empty()),
            Check::ProfileOrder11 => count_degrees(d).per_vertex.iter().all(|&p| p == (2, 2)),
            Check::HamiltonianD => check_d_cycle(d).is_ok_and(|c| c == [v]),
            Check::DisjointDn => dn_sets(d).intersection().is_empty(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub name: String,
    pub checked: u64,
    pub violation_count: u64,
    /// At most [`MAX_RECORDED`], in enumeration order.
    pub violations: Vec<DesignRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditReport {
    pub order: usize,
    pub designs: u64,
    pub checks: Vec<CheckReport>,
}

impl AuditReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.violation_count == 0)
    }
}

#[derive(Clone)]
struct Tally {
    designs: u64,
    violations: Vec<(u64, Vec<DesignRecord>)>,
}

/// Runs [`Check::for_order`] over every labeled design of order `v`.
pub fn audit(v: usize, jobs: usize) -> Result<AuditReport> {
    audit_with(&LabeledSearch::new(v, Strategy::default())?, &Check::for_order(v), jobs)
}

pub fn audit_with<S: SubtreeSearch>(search: &S, checks: &[Check], jobs: usize) -> Result<AuditReport> {
    let empty = Tally {
        designs: 0,
        violations: vec![(0, Vec::new()); checks.len()],
    };
    let parts = search.fold_subtrees(
        jobs,
        &[],
        || empty.clone(),
        |acc, d| {
            acc.designs += 1;
            for (c, slot) in checks.iter().zip(&mut acc.violations) {
                if !c.holds(d) {
                    slot.0 += 1;
                    if slot.1.len() < MAX_RECORDED {
                        slot.1.push(d.to_record());
                    }
                }
            }
        },
    );
    let mut total = empty;
    for (_, part) in parts {
        total.designs += part.designs;
        for (slot, (n, found)) in total.violations.iter_mut().zip(part.violations) {
            slot.0 += n;
            let room = MAX_RECORDED - slot.1.len();
            slot.1.extend(found.into_iter().take(room));
        }
    }
    Ok(AuditReport {
        order: search.order(),
        designs: total.designs,
        checks: checks
            .iter()
            .zip(total.violations)
            .map(|(c, (violation_count, violations))| CheckReport {
                name: c.name().to_string(),
                checked: total.designs,
                violation_count,
                violations,
            })
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order6_audit() {
        let r = audit(6, 1).unwrap();
        assert_eq!(r.designs, 30);
        assert!(r.all_passed());
        assert_eq!(r.checks.len(), 3);
    }

    #[test]
    fn violations_are_recorded() {
        let search = LabeledSearch::new(6, Strategy::Direct).unwrap();
        let r = audit_with(&search, &[Check::HamiltonianD, Check::DisjointDn], 1).unwrap();
        // at order 6, D is a perfect matching and D = N
        assert!(r.checks.iter().all(|c| c.violation_count == 30));
        assert_eq!(r.checks[0].violations.len(), MAX_RECORDED);
        assert!(!r.all_passed());
    }

    #[test]
    fn representatives_pass_their_checks() {
        let b1 = Design::cyclic(11, [0, 1, 3, 5]).unwrap();
        let b2 = Design::cyclic(11, [0, 1, 3, 7]).unwrap();
        for c in Check::for_order(11) {
            assert!(c.holds(&b1) && c.holds(&b2), "{}", c.name());
        }
    }
}
