//! The bundled example corpus: the matroids, orientations and phase
//! structures used throughout the tests and exposed by the CLI.
//!
//! Everything is generated deterministically at call time, so the emitted
//! documents are stable across runs.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Value};

use crate::bridge::to_phase;
use crate::doc;
use crate::fan::{ChainOfFlats, FanMode};
use crate::gf2::BitVector;
use crate::matroid::Matroid;
use crate::oriented::{OrientedMatroid, SignVector};

/// A named document of the corpus.
pub struct Fixture {
    pub name: &'static str,
    pub kind: &'static str,
    pub summary: &'static str,
    pub doc: Value,
}

fn labels(n: usize) -> Vec<String> {
    (1..=n).map(|i| i.to_string()).collect()
}

fn int_matrix(cols: &[Vec<i64>]) -> Vec<Vec<BigRational>> {
    let rows = cols[0].len();
    (0..rows)
        .map(|r| {
            cols.iter()
                .map(|c| BigRational::from_integer(BigInt::from(c[r])))
                .collect()
        })
        .collect()
}

pub fn k4_labels() -> Vec<String> {
    ["e12", "e13", "e14", "e23", "e24", "e34"]
        .iter()
        .map(|s| s.to_string())
        .collect()
}

pub fn k4_matroid() -> Matroid {
    Matroid::from_graph(
        k4_labels(),
        4,
        &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)],
    )
    .unwrap()
}

/// The graphic orientation of K4: edges e_ij oriented from i to j,
/// equivalently the arrangement of the forms x_j - x_i.
pub fn k4_oriented() -> OrientedMatroid {
    let edges = [(0usize, 1usize), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
    let matrix: Vec<Vec<BigRational>> = (0..4)
        .map(|r| {
            edges
                .iter()
                .map(|&(i, j)| {
                    let v: i64 = if r == j {
                        1
                    } else if r == i {
                        -1
                    } else {
                        0
                    };
                    BigRational::from_integer(BigInt::from(v))
                })
                .collect()
        })
        .collect();
    OrientedMatroid::from_matrix(k4_labels(), &matrix).unwrap()
}

/// Topes of an orientation of U_{2,4}, read off a four-line arrangement.
pub fn u24_topes() -> Vec<SignVector> {
    [
        "++++", "++-+", "-+-+", "-+--", "----", "--+-", "+-++", "+-+-",
    ]
    .iter()
    .map(|s| s.parse().unwrap())
    .collect()
}

pub fn u24_oriented() -> OrientedMatroid {
    OrientedMatroid::from_topes(labels(4), &u24_topes()).unwrap()
}

/// Four generic planes in R^3: columns e1, e2, e3, e1+e2+e3.
pub fn u34_oriented() -> OrientedMatroid {
    let cols = vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1], vec![1, 1, 1]];
    OrientedMatroid::from_matrix(labels(4), &int_matrix(&cols)).unwrap()
}

/// A rational realization of U_{3,5}: the four generic planes plus the
/// column (1,2,3).
pub fn u35_oriented() -> OrientedMatroid {
    let cols = vec![
        vec![1, 0, 0],
        vec![0, 1, 0],
        vec![0, 0, 1],
        vec![1, 1, 1],
        vec![1, 2, 3],
    ];
    OrientedMatroid::from_matrix(labels(5), &int_matrix(&cols)).unwrap()
}

/// The Fano circuits: the seven lines and their complements.
pub fn fano_circuit_lists() -> Vec<Vec<&'static str>> {
    vec![
        vec!["1", "2", "3"],
        vec!["1", "4", "5"],
        vec!["1", "6", "7"],
        vec!["2", "4", "6"],
        vec!["2", "5", "7"],
        vec!["3", "4", "7"],
        vec!["3", "5", "6"],
        vec!["4", "5", "6", "7"],
        vec!["2", "3", "6", "7"],
        vec!["2", "3", "4", "5"],
        vec!["1", "3", "5", "7"],
        vec!["1", "3", "4", "6"],
        vec!["1", "2", "5", "6"],
        vec!["1", "2", "4", "7"],
    ]
}

fn fano_doc() -> Value {
    json!({
        "elements": labels(7),
        "by": "circuits",
        "data": fano_circuit_lists(),
    })
}

pub fn fano_matroid() -> Matroid {
    doc::parse_matroid(&fano_doc(), "")
        .unwrap()
        .build()
        .unwrap()
}

/// The phase structure on the affine fan of U_{3,4} reoriented so that the
/// excluded pair is {0000, 1111}.
pub fn u34_phase_avoiding_zero() -> crate::phase::RealPhaseStructure {
    let e = to_phase(&u34_oriented(), FanMode::Affine).unwrap();
    let union = e.extend_to_face(&ChainOfFlats::empty()).unwrap();
    let missing = (0..16u32)
        .map(|x| BitVector::from_bits(x, 4).unwrap())
        .find(|x| !union.contains(x))
        .expect("two points are always excluded");
    e.reorient(&missing)
}

/// Rank 2 on {1,2,3,4} with 1 parallel to 2 and 3 parallel to 4.
pub fn parallel_pairs_matroid() -> Matroid {
    Matroid::from_circuits(labels(4), &[0b0011, 0b1100]).unwrap()
}

/// The whole corpus.
pub fn all() -> Vec<Fixture> {
    let boolean = |n: usize| {
        json!({
            "elements": labels(n),
            "by": "bases",
            "data": [labels(n)],
        })
    };
    vec![
        Fixture {
            name: "u24",
            kind: "matroid",
            summary: "uniform matroid of rank 2 on 4 elements",
            doc: json!({
                "elements": labels(4),
                "by": "bases",
                "data": [["1","2"],["1","3"],["1","4"],["2","3"],["2","4"],["3","4"]],
            }),
        },
        Fixture {
            name: "u24-oriented",
            kind: "oriented",
            summary: "orientation of U_{2,4} from a four-line arrangement (topes)",
            doc: json!({
                "elements": labels(4),
                "by": "topes",
                "data": u24_topes().iter().map(|t| t.to_string()).collect::<Vec<_>>(),
            }),
        },
        Fixture {
            name: "u24-phase",
            kind: "phase",
            summary: "projective phase structure induced by the U_{2,4} orientation",
            doc: doc::phase_to_value(&to_phase(&u24_oriented(), FanMode::Projective).unwrap()),
        },
        Fixture {
            name: "u34",
            kind: "matroid",
            summary: "uniform matroid of rank 3 on 4 elements",
            doc: json!({
                "elements": labels(4),
                "by": "matrix",
                "data": [[1,0,0,1],[0,1,0,1],[0,0,1,1]],
            }),
        },
        Fixture {
            name: "u34-oriented",
            kind: "oriented",
            summary: "orientation of U_{3,4} from four generic planes (matrix)",
            doc: json!({
                "elements": labels(4),
                "by": "matrix",
                "data": [[1,0,0,1],[0,1,0,1],[0,0,1,1]],
            }),
        },
        Fixture {
            name: "u34-phase",
            kind: "phase",
            summary: "affine phase structure on U_{3,4} excluding {0000, 1111}",
            doc: doc::phase_to_value(&u34_phase_avoiding_zero()),
        },
        Fixture {
            name: "u35",
            kind: "matroid",
            summary: "uniform matroid of rank 3 on 5 elements (rational matrix)",
            doc: json!({
                "elements": labels(5),
                "by": "matrix",
                "data": [[1,0,0,1,1],[0,1,0,1,2],[0,0,1,1,3]],
            }),
        },
        Fixture {
            name: "u35-oriented",
            kind: "oriented",
            summary: "orientation of U_{3,5} from the rational realization",
            doc: json!({
                "elements": labels(5),
                "by": "matrix",
                "data": [[1,0,0,1,1],[0,1,0,1,2],[0,0,1,1,3]],
            }),
        },
        Fixture {
            name: "k4",
            kind: "matroid",
            summary: "graphic matroid of the complete graph on 4 vertices",
            doc: json!({
                "elements": k4_labels(),
                "by": "graph",
                "data": { "vertices": 4, "edges": [[0,1],[0,2],[0,3],[1,2],[1,3],[2,3]] },
            }),
        },
        Fixture {
            name: "k4-oriented",
            kind: "oriented",
            summary: "graphic orientation of K4 (signed circuits)",
            doc: doc::om_to_signed_circuits_value(&k4_oriented()),
        },
        Fixture {
            name: "k4-phase",
            kind: "phase",
            summary: "affine phase structure induced by the K4 orientation",
            doc: doc::phase_to_value(&to_phase(&k4_oriented(), FanMode::Affine).unwrap()),
        },
        Fixture {
            name: "fano",
            kind: "matroid",
            summary: "Fano plane (7 points, 7 lines); not orientable",
            doc: fano_doc(),
        },
        Fixture {
            name: "boolean1",
            kind: "matroid",
            summary: "free matroid on 1 element",
            doc: boolean(1),
        },
        Fixture {
            name: "boolean2",
            kind: "matroid",
            summary: "free matroid on 2 elements",
            doc: boolean(2),
        },
        Fixture {
            name: "boolean3",
            kind: "matroid",
            summary: "free matroid on 3 elements",
            doc: boolean(3),
        },
        Fixture {
            name: "boolean4",
            kind: "matroid",
            summary: "free matroid on 4 elements",
            doc: boolean(4),
        },
        Fixture {
            name: "n-parallel",
            kind: "matroid",
            summary: "rank 2 on {1,2,3,4} with parallel pairs {1,2} and {3,4}",
            doc: json!({
                "elements": labels(4),
                "by": "circuits",
                "data": [["1","2"],["3","4"]],
            }),
        },
    ]
}

pub fn by_name(name: &str) -> Option<Fixture> {
    all().into_iter().find(|f| f.name == name)
}
