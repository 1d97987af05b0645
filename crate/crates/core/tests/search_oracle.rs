//! Independent oracle for the exhaustive search: enumerate every possible
//! coset assignment outright, keep the ones the even-cover checker
//! accepts, and compare against the pruned backtracking search.

use std::collections::BTreeSet;

use phasefan::fan::{self, FanMode};
use phasefan::fixtures;
use phasefan::gf2::{low_mask, scatter_bits, AffineSubspaceGF2, BitVector};
use phasefan::matroid::Matroid;
use phasefan::phase::{search_phase_structures, RealPhaseStructure};

/// All structures on the fan of `m` by raw enumeration of the cartesian
/// product of coset choices, filtered by the verifier. No sharing with
/// the search implementation beyond the verifier itself.
fn brute_force_structures(m: &Matroid) -> Vec<RealPhaseStructure> {
    let n = m.n();
    let facets = fan::facets(m).unwrap();
    let tangents: Vec<_> = facets
        .iter()
        .map(|f| fan::tangent_z2(m, f, FanMode::Affine))
        .collect();
    let candidates: Vec<Vec<u32>> = tangents
        .iter()
        .map(|t| {
            let free = !t.pivot_mask() & low_mask(n);
            (0..1u32 << free.count_ones())
                .map(|x| scatter_bits(x, free))
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    let mut choice = vec![0usize; facets.len()];
    loop {
        let assignment: Vec<(fan::ChainOfFlats, AffineSubspaceGF2)> = facets
            .iter()
            .zip(&tangents)
            .zip(&choice)
            .map(|((facet, tangent), &c)| {
                let base = BitVector::from_bits(candidates[facets.binary_search(facet).unwrap()][c], n)
                    .unwrap();
                (facet.clone(), AffineSubspaceGF2::from_tangent(base, tangent.clone()).unwrap())
            })
            .collect();
        let e = RealPhaseStructure::from_assignment(m.clone(), FanMode::Affine, assignment)
            .unwrap();
        if e.verify().unwrap().ok {
            out.push(e);
        }
        // Advance the product counter.
        let mut pos = 0;
        loop {
            if pos == facets.len() {
                return out;
            }
            choice[pos] += 1;
            if choice[pos] < candidates[pos].len() {
                break;
            }
            choice[pos] = 0;
            pos += 1;
        }
    }
}

fn keys(structures: &[RealPhaseStructure]) -> BTreeSet<Vec<u32>> {
    structures
        .iter()
        .map(|e| e.spaces().iter().map(|s| s.base().bits()).collect())
        .collect()
}

#[test]
fn search_matches_brute_force_on_small_fans() {
    let carriers = [
        Matroid::uniform(1, 3),
        Matroid::uniform(2, 3),
        Matroid::uniform(2, 4),
        Matroid::uniform(3, 3),
        Matroid::uniform(3, 4),
        fixtures::parallel_pairs_matroid(),
    ];
    for m in carriers {
        let brute = brute_force_structures(&m);
        let searched =
            search_phase_structures(&m, FanMode::Affine, false, None).unwrap().structures;
        assert_eq!(
            keys(&brute),
            keys(&searched),
            "search disagrees with brute force on {m:?}"
        );
    }
}

#[test]
fn up_to_reorientation_classes_cover_everything() {
    for m in [Matroid::uniform(2, 4), Matroid::uniform(3, 4)] {
        let all = search_phase_structures(&m, FanMode::Affine, false, None).unwrap().structures;
        let classes =
            search_phase_structures(&m, FanMode::Affine, true, None).unwrap().structures;
        // Every structure is a reorientation of exactly one class
        // representative.
        for e in &all {
            let hits = classes
                .iter()
                .filter(|rep| rep.equal_up_to_reorientation(e).unwrap().is_some())
                .count();
            assert_eq!(hits, 1);
        }
        // And the representatives are pairwise unrelated.
        for (i, a) in classes.iter().enumerate() {
            for b in &classes[i + 1..] {
                assert!(a.equal_up_to_reorientation(b).unwrap().is_none());
            }
        }
    }
}
