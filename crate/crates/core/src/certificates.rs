//! Permutation certificates: `(s,t)` labels with a relabeling `π` and class
//! names such that `fine_pair(π(source), target) = (s,t)`.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::block::Vertex;
use crate::design::{apply_permutation, Design};
use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::spectrum::{fine_pair, reference_adm, FinePair};

const BUNDLED: &str = include_str!("../data/certificates.json");

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub s: usize,
    pub t: usize,
    /// Cycle notation; omitted points are fixed.
    pub perm: String,
    pub source: String,
    pub target: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateSet {
    pub order: usize,
    pub designs: BTreeMap<String, Vec<[Vertex; 4]>>,
    /// Envelope pairs with no realization.
    #[serde(default)]
    pub excluded: Vec<(usize, usize)>,
    /// Labels whose certificate starts from a class other than the first.
    #[serde(default)]
    pub alternate: Vec<(usize, usize)>,
    pub certificates: Vec<Certificate>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateFile {
    pub sets: Vec<CertificateSet>,
}

impl CertificateFile {
    pub fn bundled() -> Self {
        Self::from_json(BUNDLED).expect("bundled certificates parse")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn for_order(&self, v: usize) -> Option<&CertificateSet> {
        self.sets.iter().find(|s| s.order == v)
    }
}

impl CertificateSet {
    /// Named designs, validated.
    pub fn designs(&self) -> Result<BTreeMap<String, Design>> {
        self.designs
            .iter()
            .map(|(name, bs)| Ok((name.clone(), Design::from_arrays(self.order, bs)?)))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateOutcome {
    pub label: (usize, usize),
    pub perm: String,
    pub source: String,
    pub target: String,
    pub observed: (usize, usize),
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateReport {
    pub order: usize,
    pub checked: usize,
    pub passed: usize,
    pub outcomes: Vec<CertificateOutcome>,
    /// Envelope pairs neither certified nor listed as excluded.
    pub uncovered: Vec<(usize, usize)>,
}

impl CertificateReport {
    pub fn all_passed(&self) -> bool {
        self.passed == self.checked
    }

    pub fn failures(&self) -> impl Iterator<Item = &CertificateOutcome> {
        self.outcomes.iter().filter(|o| !o.passed)
    }
}

pub fn verify_certificate(
    cert: &Certificate,
    designs: &BTreeMap<String, Design>,
    v: usize,
) -> Result<CertificateOutcome> {
    let class = |name: &String| designs.get(name).ok_or_else(|| Error::UnknownClass(name.clone()));
    let (src, dst) = (class(&cert.source)?, class(&cert.target)?);
    let pi = Permutation::parse_cycles(v, &cert.perm)?;
    let FinePair { s, t } = fine_pair(&apply_permutation(&pi, src)?, dst)?;
    Ok(CertificateOutcome {
        label: (cert.s, cert.t),
        perm: cert.perm.clone(),
        source: cert.source.clone(),
        target: cert.target.clone(),
        observed: (s, t),
        passed: (s, t) == (cert.s, cert.t),
    })
}

/// Replays every certificate of `set` against its named designs.
pub fn verify_certificates(set: &CertificateSet) -> Result<CertificateReport> {
    let designs = set.designs()?;
    let outcomes = set
        .certificates
        .iter()
        .map(|c| verify_certificate(c, &designs, set.order))
        .collect::<Result<Vec<_>>>()?;
    let labeled: BTreeSet<_> = outcomes.iter().map(|o| o.label).collect();
    let uncovered = match reference_adm(set.order) {
        Ok(env) => env
            .pairs
            .into_iter()
            .filter(|p| !labeled.contains(p) && !set.excluded.contains(p))
            .collect(),
        Err(_) => Vec::new(),
    };
    Ok(CertificateReport {
        order: set.order,
        checked: outcomes.len(),
        passed: outcomes.iter().filter(|o| o.passed).count(),
        outcomes,
        uncovered,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn find(set: &CertificateSet, s: usize, t: usize) -> &Certificate {
        set.certificates.iter().find(|c| (c.s, c.t) == (s, t)).unwrap()
    }

    #[test]
    fn bundled_examples() {
        let file = CertificateFile::bundled();
        let set10 = file.for_order(10).unwrap();
        let d10 = set10.designs().unwrap();
        let c = find(set10, 0, 7);
        assert_eq!((c.perm.as_str(), c.source.as_str()), ("(1 2)(3 4)", "B1"));
        assert!(verify_certificate(c, &d10, 10).unwrap().passed);
        let c = find(set10, 3, 2);
        assert_eq!((c.perm.as_str(), c.source.as_str()), ("(4 5)(7 8)", "B2"));
        assert!(verify_certificate(c, &d10, 10).unwrap().passed);

        let set11 = file.for_order(11).unwrap();
        let c = find(set11, 2, 7);
        assert_eq!(c.perm, "(1 3 6 7 4 5)");
        assert!(verify_certificate(c, &set11.designs().unwrap(), 11).unwrap().passed);
    }

    #[test]
    fn wrong_label_fails() {
        let file = CertificateFile::bundled();
        let mut set = file.for_order(6).unwrap().clone();
        set.certificates[0].t += 1;
        let r = verify_certificates(&set).unwrap();
        assert!(!r.all_passed());
        assert_eq!(r.failures().count(), 1);
    }

    #[test]
    fn unknown_class() {
        let mut set = CertificateFile::bundled().for_order(6).unwrap().clone();
        set.certificates[0].source = "X".into();
        assert_eq!(verify_certificates(&set).unwrap_err(), Error::UnknownClass("X".into()));
    }
}
