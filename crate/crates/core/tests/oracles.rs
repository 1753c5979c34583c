//! Independent re-derivations checked against the library.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use k4e_core::block::all_blocks;
use k4e_core::canon::{automorphisms, canonical_form};
use k4e_core::classify::{enumerate_classes, ClassifyOptions};
use k4e_core::perm::{factorial, for_each_permutation};
use k4e_core::spectrum::{compute_spectrum, fine_pair, SpectrumOptions};
use k4e_core::{
    apply_permutation, enumerate_labeled, validate_design, Block, Design, LabeledSearch, Permutation, Strategy,
    SubtreeSearch,
};

/// All 3-subsets of blocks whose edges partition `K_6`.
fn naive_order6() -> BTreeSet<Vec<Block>> {
    let blocks = all_blocks(6);
    let mut out = BTreeSet::new();
    for i in 0..blocks.len() {
        for j in i + 1..blocks.len() {
            for k in j + 1..blocks.len() {
                let mut edges: Vec<_> = [i, j, k].iter().flat_map(|&x| blocks[x].edges()).collect();
                edges.sort();
                edges.dedup();
                if edges.len() == 15 {
                    out.insert(vec![blocks[i], blocks[j], blocks[k]]);
                }
            }
        }
    }
    out
}

fn labeled(v: usize, strategy: Strategy) -> Vec<Vec<Block>> {
    let mut out = Vec::new();
    LabeledSearch::new(v, strategy)
        .unwrap()
        .visit_all(&mut |d| out.push(d.blocks().to_vec()));
    out
}

#[test]
fn order6_matches_naive_enumeration() {
    let naive = naive_order6();
    assert_eq!(naive.len(), 30);
    for strategy in [Strategy::Direct, Strategy::Expanded] {
        let found = labeled(6, strategy);
        let set: BTreeSet<_> = found.iter().cloned().collect();
        assert_eq!(set.len(), found.len(), "duplicates under {strategy:?}");
        assert_eq!(set, naive);
    }
}

#[test]
fn order6_orbit_stabilizer() {
    // group the naive designs by brute-force orbit under S_6
    let naive = naive_order6();
    let mut seen = HashSet::new();
    let mut orbits = Vec::new();
    for blocks in &naive {
        if seen.contains(blocks) {
            continue;
        }
        let d = Design::new(6, blocks.clone()).unwrap();
        let mut orbit = BTreeSet::new();
        for_each_permutation(6, |img| {
            let pi = Permutation::from_images(img.to_vec()).unwrap();
            orbit.insert(apply_permutation(&pi, &d).unwrap().blocks().to_vec());
            true
        });
        seen.extend(orbit.iter().cloned());
        orbits.push((d, orbit.len()));
    }
    assert_eq!(orbits.len(), 1);
    let (d, size) = &orbits[0];
    assert_eq!(*size as u64 * automorphisms(d).len() as u64, factorial(6));

    let classes = enumerate_classes(6, &ClassifyOptions::default()).unwrap();
    let total: u64 = classes.iter().map(|c| factorial(6) / c.aut_order).sum();
    assert_eq!(total, naive.len() as u64);
}

#[test]
fn order10_searches_agree() {
    let direct = labeled(10, Strategy::Direct);
    let expanded: HashSet<_> = labeled(10, Strategy::Expanded).into_iter().collect();
    assert_eq!(direct.len(), 567_000);
    assert_eq!(expanded.len(), direct.len());
    assert!(direct.iter().all(|b| expanded.contains(b)));
}

#[test]
fn order10_classes_cover_every_labeled_design() {
    let classes = enumerate_classes(10, &ClassifyOptions::default()).unwrap();
    let mut per_class: BTreeMap<Design, u64> = BTreeMap::new();
    let total = enumerate_labeled(10, |d| {
        validate_design(10, d.blocks().to_vec()).unwrap();
        *per_class.entry(canonical_form(d).design).or_default() += 1;
    })
    .unwrap();
    assert_eq!(per_class.len(), classes.len());
    for c in &classes {
        assert_eq!(per_class[&c.representative], factorial(10) / c.aut_order);
        assert_eq!(c.labeled_count, factorial(10) / c.aut_order);
    }
    assert_eq!(per_class.values().sum::<u64>(), total);
}

#[test]
fn order6_spectrum_witnesses_are_least() {
    let rep = enumerate_classes(6, &ClassifyOptions::default()).unwrap()[0]
        .representative
        .clone();
    let mut least: BTreeMap<(usize, usize), Vec<u8>> = BTreeMap::new();
    for_each_permutation(6, |img| {
        let pi = Permutation::from_images(img.to_vec()).unwrap();
        let p = fine_pair(&apply_permutation(&pi, &rep).unwrap(), &rep).unwrap();
        least.entry((p.s, p.t)).or_insert_with(|| img.to_vec());
        true
    });
    let r = compute_spectrum(6, &[rep], &SpectrumOptions::default()).unwrap();
    let got: BTreeMap<_, _> = r
        .achieved
        .iter()
        .map(|p| ((p.s, p.t), p.perm.images().to_vec()))
        .collect();
    assert_eq!(got, least);
}
