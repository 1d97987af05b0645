//! Acceptance suite: one test per criterion, each printing a summary line
//! (run with `cargo test --test acceptance -- --nocapture` to see them).

use std::collections::BTreeSet;
use std::time::Instant;

use phasefan::bridge::{count_orientations, gamma_from_phase, phase_to_oriented, to_phase};
use phasefan::fan::{self, ChainOfFlats, FanMode};
use phasefan::fixtures;
use phasefan::gf2::{even_cover_check, necklace_check, AffineSubspaceGF2, BitVector};
use phasefan::matroid::Matroid;
use phasefan::phase::{search_phase_structures, NecklaceOrdering, RealPhaseStructure};

fn bv(s: &str) -> BitVector {
    s.parse().unwrap()
}

fn search_all(m: &Matroid, mode: FanMode) -> Vec<RealPhaseStructure> {
    search_phase_structures(m, mode, false, None)
        .unwrap()
        .structures
}

#[test]
fn criterion_01_fano_is_not_orientable_two_routes() {
    let fano = fixtures::fano_matroid();

    let start = Instant::now();
    let found = search_all(&fano, FanMode::Affine);
    let search_time = start.elapsed();
    assert_eq!(found.len(), 0, "no real phase structure on the Fano fan");
    assert!(
        search_time.as_secs() < 30,
        "search route took {search_time:?}"
    );

    let start = Instant::now();
    let count = count_orientations(&fano).unwrap();
    let count_time = start.elapsed();
    assert_eq!(count, 0, "no orientation of the Fano matroid");
    assert!(
        count_time.as_secs() < 30,
        "counting route took {count_time:?}"
    );

    println!("criterion 01 PASS: fano search=0 ({search_time:?}), count=0 ({count_time:?})");
}

#[test]
fn criterion_02_tope_counts_match_characteristic_polynomials() {
    // Figure-3 arrangement: exactly 14 topes.
    let u34 = fixtures::u34_oriented();
    assert_eq!(u34.topes().len(), 14);

    let cases: [(&str, phasefan::OrientedMatroid, i64); 3] = [
        ("u24", fixtures::u24_oriented(), 8),
        ("u34", fixtures::u34_oriented(), 14),
        ("k4", fixtures::k4_oriented(), 24),
    ];
    for (name, om, expected) in &cases {
        let m = om.underlying_matroid();
        let chi = m.characteristic_polynomial().eval(-1).abs();
        assert_eq!(chi, *expected, "chi(-1) for {name}");
        assert_eq!(om.topes().len() as i64, chi, "tope count for {name}");
    }

    // Brute-force region enumeration for K4 over all 2^6 sign patterns:
    // a full sign pattern on the forms x_j - x_i is realizable iff the
    // induced tournament on the four vertices is acyclic.
    let edges = [(0usize, 1usize), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
    let mut regions = 0;
    for pattern in 0u32..64 {
        let mut reach = [[false; 4]; 4];
        for (idx, &(i, j)) in edges.iter().enumerate() {
            // '+' means x_j - x_i > 0, an arc i -> j.
            if pattern >> idx & 1 == 0 {
                reach[i][j] = true;
            } else {
                reach[j][i] = true;
            }
        }
        for k in 0..4 {
            for a in 0..4 {
                for b in 0..4 {
                    if reach[a][k] && reach[k][b] {
                        reach[a][b] = true;
                    }
                }
            }
        }
        if (0..4).all(|v| !reach[v][v]) {
            regions += 1;
        }
    }
    assert_eq!(regions, 24);
    assert_eq!(fixtures::k4_oriented().topes().len(), 24);

    println!("criterion 02 PASS: tope counts 8/14/24 match |chi(-1)| and the region count");
}

#[test]
fn criterion_03_flag_tope_counts() {
    for om in [fixtures::u34_oriented(), fixtures::k4_oriented()] {
        let m = om.underlying_matroid();
        let rank = m.full_rank();
        let mut checked = 0;
        for chain in fan::all_faces(&m).unwrap() {
            let count = om.adjacent_topes(chain.flats()).unwrap().len() as i64;
            let mf = m.chain_minor_sum(chain.flats()).unwrap();
            assert_eq!(count, mf.characteristic_polynomial().eval(-1).abs());
            if chain.len() + 1 == rank {
                assert_eq!(count, 1 << rank, "maximal flag gives 2^d topes");
            }
            checked += 1;
        }
        assert!(checked > 1);
    }
    println!("criterion 03 PASS: |T(F)| = |chi_{{M_F}}(-1)| over every flag of u34 and k4");
}

#[test]
fn criterion_04_k4_worked_values() {
    let e = to_phase(&fixtures::k4_oriented(), FanMode::Affine).unwrap();
    let m = e.matroid().clone();
    let flag = ChainOfFlats::new(&m, vec![0b000001, 0b001011]).unwrap();
    let expected =
        AffineSubspaceGF2::canonicalize(bv("000000"), &[bv("100000"), bv("010100"), bv("001011")])
            .unwrap();
    assert_eq!(e.space(&flag).unwrap(), &expected);
    assert!(e.space(&flag).unwrap().contains(&bv("000000")));

    // gamma on the triangle circuit {e12, e13, e23} at the pair (e13, e23).
    let circuit = 0b001011u32;
    assert_eq!(gamma_from_phase(&e, circuit, 1, 3).unwrap(), -1);

    println!("criterion 04 PASS: k4 flag space and gamma(e13,e23) = -1 match the fixture");
}

#[test]
fn criterion_05_counting_on_small_uniforms() {
    let u24 = Matroid::uniform(2, 4);
    let projective = search_all(&u24, FanMode::Projective);
    assert_eq!(projective.len(), 24);

    // Fixed verified structure on the fan of U_{3,4}, excluding {0, 1111};
    // exactly 12 of the 24 structures are real subfans.
    let reference = fixtures::u34_phase_avoiding_zero();
    let affine = search_all(&u24, FanMode::Affine);
    assert_eq!(affine.len(), 24);
    let subfans = affine
        .iter()
        .filter(|e| e.is_real_subfan_of(&reference).unwrap())
        .count();
    assert_eq!(subfans, 12);

    let u34 = Matroid::uniform(3, 4);
    assert_eq!(search_all(&u34, FanMode::Affine).len(), 8);
    assert_eq!(count_orientations(&u34).unwrap(), 8);

    println!("criterion 05 PASS: 24 structures on u24, 12 subfans of the u34 structure, 8 on u34");
}

#[test]
fn criterion_06_hyperplane_matroid_uniqueness() {
    for (n, expect) in [(3usize, 3usize), (4, 7)] {
        let m = Matroid::uniform(n - 1, n);
        let found = search_all(&m, FanMode::Projective);
        assert!(!found.is_empty());
        for pair in found.windows(2) {
            assert!(
                pair[0]
                    .equal_up_to_reorientation(&pair[1])
                    .unwrap()
                    .is_some(),
                "all structures on the projective fan of U_{{{}, {}}} are reorientations",
                n - 1,
                n
            );
        }
        for e in &found {
            let union = e.extend_to_face(&ChainOfFlats::empty()).unwrap();
            assert_eq!(union.len(), expect, "union size 2^{}-1", n - 1);
        }
    }
    println!("criterion 06 PASS: unique class and |union| = 2^(n-1)-1 for n = 3, 4");
}

#[test]
fn criterion_07_cryptomorphism_round_trips() {
    // Oriented -> phase -> oriented is the identity on every fixture.
    for om in [
        fixtures::u24_oriented(),
        fixtures::u34_oriented(),
        fixtures::u35_oriented(),
        fixtures::k4_oriented(),
    ] {
        let e = to_phase(&om, FanMode::Affine).unwrap();
        assert_eq!(phase_to_oriented(&e).unwrap(), om);
    }
    // Phase -> oriented -> phase is the identity on every structure found
    // by search.
    let mut total = 0;
    for m in [
        Matroid::uniform(2, 4),
        Matroid::uniform(3, 4),
        fixtures::k4_matroid(),
    ] {
        for e in search_all(&m, FanMode::Affine) {
            let om = phase_to_oriented(&e).unwrap();
            assert_eq!(to_phase(&om, FanMode::Affine).unwrap(), e);
            total += 1;
        }
    }
    assert_eq!(total, 24 + 8 + 32);
    println!("criterion 07 PASS: round trips are identities on {total} searched structures");
}

#[test]
fn criterion_08_minor_compatibility() {
    // to_phase commutes with elementary minors on U_{3,5} and K4.
    for om in [fixtures::u35_oriented(), fixtures::k4_oriented()] {
        let e = to_phase(&om, FanMode::Affine).unwrap();
        for i in 0..om.n() {
            let del = to_phase(&om.minor(1 << i, 0).unwrap(), FanMode::Affine).unwrap();
            assert_eq!(del, e.minor(1 << i, 0).unwrap());
            let con = to_phase(&om.minor(0, 1 << i).unwrap(), FanMode::Affine).unwrap();
            assert_eq!(con, e.minor(0, 1 << i).unwrap());
        }
    }

    // All elementary interleavings commute on the n <= 6 fixtures.
    let fixtures_n6: Vec<RealPhaseStructure> = vec![
        search_all(&Matroid::uniform(2, 3), FanMode::Affine).remove(0),
        search_all(&Matroid::uniform(2, 4), FanMode::Affine).remove(0),
        search_all(&Matroid::uniform(3, 4), FanMode::Affine).remove(0),
        search_all(&fixtures::parallel_pairs_matroid(), FanMode::Affine).remove(0),
        to_phase(&fixtures::u35_oriented(), FanMode::Affine).unwrap(),
        to_phase(&fixtures::k4_oriented(), FanMode::Affine).unwrap(),
    ];
    for e in &fixtures_n6 {
        let labels = e.matroid().labels().to_vec();
        let n = labels.len();
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let (bi, bj) = (1u32 << i, 1u32 << j);
                // delete-delete in both orders
                let dd = e.minor(bi | bj, 0).unwrap();
                let step = e.delete_element(i).unwrap();
                if let Ok(jj) = step.matroid().label_index(&labels[j]) {
                    assert_eq!(step.delete_element(jj).unwrap(), dd);
                }
                // delete-contract in both orders
                let dc = e.minor(bi, bj).unwrap();
                let step = e.contract_element(j).unwrap();
                if let Ok(ii) = step.matroid().label_index(&labels[i]) {
                    assert_eq!(step.delete_element(ii).unwrap(), dc);
                }
                let step = e.delete_element(i).unwrap();
                if let Ok(jj) = step.matroid().label_index(&labels[j]) {
                    assert_eq!(step.contract_element(jj).unwrap(), dc);
                }
                // contract-contract in both orders
                let cc = e.minor(0, bi | bj).unwrap();
                let step = e.contract_element(i).unwrap();
                if let Ok(jj) = step.matroid().label_index(&labels[j]) {
                    assert_eq!(step.contract_element(jj).unwrap(), cc);
                }
            }
        }
    }
    println!("criterion 08 PASS: minors commute with the bridge and with each other");
}

#[test]
fn criterion_09_checker_equivalence() {
    // The two checkers agree on every valid structure and on every
    // basepoint mutation, across the n <= 6 fixtures.
    let carriers = [
        Matroid::uniform(2, 3),
        Matroid::uniform(2, 4),
        Matroid::uniform(3, 4),
        fixtures::parallel_pairs_matroid(),
        Matroid::uniform(3, 5),
        fixtures::k4_matroid(),
    ];
    let mut candidates = 0usize;
    for m in &carriers {
        let found = search_all(m, FanMode::Affine);
        for e in found.iter().take(2) {
            assert!(e.verify().unwrap().ok && e.verify_necklace().unwrap().ok);
            candidates += 1;
            let facets = e.facets().to_vec();
            for facet in &facets {
                let tangent = fan::tangent_z2(m, facet, FanMode::Affine);
                let free = !tangent.pivot_mask() & phasefan::gf2::low_mask(m.n());
                let mut sub = free;
                loop {
                    let mutant_base = BitVector::from_bits(sub, m.n()).unwrap();
                    let mut assignment: Vec<(ChainOfFlats, AffineSubspaceGF2)> = facets
                        .iter()
                        .map(|f| (f.clone(), e.space(f).unwrap().clone()))
                        .collect();
                    for (f, s) in &mut assignment {
                        if f == facet {
                            *s = AffineSubspaceGF2::from_tangent(mutant_base, tangent.clone())
                                .unwrap();
                        }
                    }
                    let candidate =
                        RealPhaseStructure::from_assignment(m.clone(), FanMode::Affine, assignment)
                            .unwrap();
                    assert!(
                        candidate.equivalence_witness().unwrap(),
                        "checkers disagree on a mutant"
                    );
                    candidates += 1;
                    if sub == 0 {
                        break;
                    }
                    sub = (sub - 1) & free;
                }
            }
        }
    }
    assert!(candidates > 100);

    // Off matroid fans the two conditions genuinely differ: two disjoint
    // triangles of lines form an even cover but no necklace.
    let triangle = [
        AffineSubspaceGF2::canonicalize(bv("000"), &[bv("100")]).unwrap(),
        AffineSubspaceGF2::canonicalize(bv("100"), &[bv("010")]).unwrap(),
        AffineSubspaceGF2::canonicalize(bv("110"), &[bv("110")]).unwrap(),
    ];
    let mut lines = triangle.to_vec();
    lines.extend(triangle.iter().map(|l| l.translate(&bv("001"))));
    assert!(even_cover_check(&lines).unwrap());
    assert_eq!(necklace_check(&lines).unwrap(), None);

    println!(
        "criterion 09 PASS: checkers agree on {candidates} candidates; six-line config splits them"
    );
}

#[test]
fn criterion_10_real_modification_reconstruction() {
    let m = Matroid::uniform(3, 5);
    let e_del = fixtures::u34_phase_avoiding_zero();

    // The contraction is pinned at the facet {∅ ⊂ {1} ⊂ E\5} of the fan
    // of U_{2,4} = U_{3,5}/5.
    let pinned_contraction_space =
        AffineSubspaceGF2::canonicalize(bv("0001"), &[bv("1000"), bv("1111")]).unwrap();
    let sigma_bar_1 = ChainOfFlats::new(&Matroid::uniform(2, 4), vec![0b0001]).unwrap();

    let completions: Vec<RealPhaseStructure> = search_all(&m, FanMode::Affine)
        .into_iter()
        .filter(|e| {
            let del = e.minor(0b10000, 0).unwrap();
            if del != e_del {
                return false;
            }
            let con = e.minor(0, 0b10000).unwrap();
            con.space(&sigma_bar_1).unwrap() == &pinned_contraction_space
        })
        .collect();
    assert!(!completions.is_empty(), "the example admits a completion");

    // Lemma-level uniqueness: completions with the same full contraction
    // agree up to reorientation by a kernel-of-p5 vector.
    let kernel = [bv("00000"), bv("00001")];
    for a in &completions {
        for b in &completions {
            if a.minor(0, 0b10000).unwrap() == b.minor(0, 0b10000).unwrap() {
                assert!(
                    kernel.iter().any(|eps| &a.reorient(eps) == b),
                    "completions of the same minors differ by the kernel of p5"
                );
            }
        }
    }

    // Pin the facet sigma2 as in the worked example and read off the
    // necklace ordering and the intersection space at tau.
    let sigma2 = ChainOfFlats::new(&m, vec![0b00001, 0b00011]).unwrap();
    let sigma3 = ChainOfFlats::new(&m, vec![0b00001, 0b00101]).unwrap();
    let sigma4 = ChainOfFlats::new(&m, vec![0b00001, 0b01001]).unwrap();
    let sigma5 = ChainOfFlats::new(&m, vec![0b00001, 0b10001]).unwrap();
    let tau = ChainOfFlats::new(&m, vec![0b00001]).unwrap();
    let pinned_sigma2 =
        AffineSubspaceGF2::canonicalize(bv("00010"), &[bv("10000"), bv("01000"), bv("11111")])
            .unwrap();
    let pinned: Vec<&RealPhaseStructure> = completions
        .iter()
        .filter(|e| e.space(&sigma2).unwrap() == &pinned_sigma2)
        .collect();
    assert!(
        !pinned.is_empty(),
        "one completion realizes the pinned facet"
    );
    let expected_ordering = NecklaceOrdering::new(vec![
        sigma2.clone(),
        sigma5.clone(),
        sigma3.clone(),
        sigma4.clone(),
    ]);
    let expected_intersection =
        AffineSubspaceGF2::canonicalize(bv("00010"), &[bv("10000"), bv("11111")]).unwrap();
    for e in &pinned {
        assert_eq!(e.necklace_ordering_at(&tau).unwrap(), expected_ordering);
        let meet = e
            .space(&sigma5)
            .unwrap()
            .intersect(e.space(&sigma2).unwrap())
            .unwrap()
            .unwrap();
        assert_eq!(meet, expected_intersection);
    }

    println!(
        "criterion 10 PASS: {} completions, ordering (s2 s5 s3 s4) and the stated intersection",
        completions.len()
    );
}

/// Off-criterion regression: the searched structure sets are closed under
/// reorientation and the projective/affine counts agree.
#[test]
fn search_sets_are_reorientation_closed() {
    for m in [Matroid::uniform(2, 4), fixtures::parallel_pairs_matroid()] {
        let found = search_all(&m, FanMode::Affine);
        let keys: BTreeSet<Vec<String>> = found
            .iter()
            .map(|e| e.spaces().iter().map(|s| s.base().to_string()).collect())
            .collect();
        for e in &found {
            for eps in 0..1u32 << m.n() {
                let r = e.reorient(&BitVector::from_bits(eps, m.n()).unwrap());
                let key: Vec<String> = r.spaces().iter().map(|s| s.base().to_string()).collect();
                assert!(keys.contains(&key));
            }
        }
        assert_eq!(
            found.len(),
            search_all(&m, FanMode::Projective).len(),
            "mode counts agree"
        );
    }
}
