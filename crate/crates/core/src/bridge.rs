//! The round trip between oriented matroids and real phase structures.
//!
//! One direction sends an oriented matroid to the assignment of tope
//! exponent sets over maximal flags; the other recovers the signed
//! circuits of the orientation from the phase structure through the
//! pairwise sign description gamma and rebuilds the covector set. The
//! module also houses the independent orientation counter used to
//! cross-check the exhaustive phase search.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::fan::{self, ChainOfFlats, FanMode};
use crate::gf2::{AffineSubspaceGF2, BitVector};
use crate::matroid::{Matroid, MatroidError};
use crate::oriented::{
    from_signed_circuits_unchecked, OrientedError, OrientedMatroid, SignVector, SignedCircuitSet,
};
use crate::phase::{PhaseError, RealPhaseStructure};

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum BridgeError {
    #[error(transparent)]
    Oriented(#[from] OrientedError),
    #[error(transparent)]
    Phase(#[from] PhaseError),
    #[error("tope set over flag {0:?} is not an affine subspace parallel to its facet")]
    TopesNotAffine(ChainOfFlats),
    #[error("{0:#b} is not a circuit of the carrier matroid")]
    NotACircuit(u32),
    #[error("gamma needs two distinct circuit elements")]
    DegeneratePair,
    #[error("inconsistent signs over the flag of cl(C \\ ij): not a real phase structure")]
    GammaInconsistent,
    #[error("cocycle violation on circuit {circuit:#b} at elements ({i}, {j}, {k})")]
    CocycleViolation {
        circuit: u32,
        i: usize,
        j: usize,
        k: usize,
    },
    #[error("orientation counting is capped at 8 elements; got {0}")]
    CountCap(usize),
}

impl From<MatroidError> for BridgeError {
    fn from(e: MatroidError) -> Self {
        BridgeError::Phase(e.into())
    }
}

impl From<crate::fan::FanError> for BridgeError {
    fn from(e: crate::fan::FanError) -> Self {
        BridgeError::Phase(e.into())
    }
}

/// The real phase structure induced by an oriented matroid: each facet of
/// the fan of the underlying matroid receives the exponents of the topes
/// adjacent to its flag. Loops are deleted first.
pub fn to_phase(om: &OrientedMatroid, mode: FanMode) -> Result<RealPhaseStructure, BridgeError> {
    let loops = om.loops();
    let om = if loops != 0 {
        om.minor(loops, 0)?
    } else {
        om.clone()
    };
    let matroid = om.underlying_matroid();
    let facets = fan::facets(&matroid)?;
    let topes = om.topes();
    let mut spaces = Vec::with_capacity(facets.len());
    for facet in &facets {
        let adjacent: Vec<BitVector> = topes
            .iter()
            .filter(|t| {
                facet
                    .flats()
                    .iter()
                    .all(|&f| om.covectors().contains(&t.zero_out(f)))
            })
            .map(|t| {
                t.to_exponent()
                    .expect("topes of a loopfree oriented matroid are full")
            })
            .collect();
        let space = AffineSubspaceGF2::from_points(&adjacent)
            .map_err(|_| BridgeError::TopesNotAffine(facet.clone()))?;
        if space.tangent() != &fan::tangent_z2(&matroid, facet, FanMode::Affine) {
            return Err(BridgeError::TopesNotAffine(facet.clone()));
        }
        spaces.push(space);
    }
    Ok(RealPhaseStructure::from_aligned(
        matroid, mode, facets, spaces,
    ))
}

/// The pairwise sign of a circuit recovered from the phase structure: for
/// any point of the extension of the assignment to the flag of
/// cl(C \ {i,j}), the sign is minus the product of the point's signs at i
/// and j. Consistency over all points of the extension is enforced.
pub fn gamma_from_phase(
    e: &RealPhaseStructure,
    circuit: u32,
    i: usize,
    j: usize,
) -> Result<i8, BridgeError> {
    if i == j || circuit >> i & 1 == 0 || circuit >> j & 1 == 0 {
        return Err(BridgeError::DegeneratePair);
    }
    let m = e.matroid();
    if !m.circuits().contains(&circuit) {
        return Err(BridgeError::NotACircuit(circuit));
    }
    let rest = circuit & !(1 << i) & !(1 << j);
    let flat = m.closure(rest);
    let chain = if flat == 0 {
        ChainOfFlats::empty()
    } else {
        ChainOfFlats::new(m, vec![flat])?
    };
    let mut sign = None;
    for eps in e.extend_to_face(&chain)? {
        let s: i8 = if eps.get(i) != eps.get(j) { 1 } else { -1 };
        match sign {
            None => sign = Some(s),
            Some(prev) if prev != s => return Err(BridgeError::GammaInconsistent),
            _ => {}
        }
    }
    sign.ok_or(BridgeError::GammaInconsistent)
}

/// Recovers the signed circuits of the orientation behind a verified real
/// phase structure: assembles gamma on every circuit, checks the triple
/// cocycle condition, and emits the canonical representative with the
/// smallest element positive.
pub fn signed_circuits_from_phase(e: &RealPhaseStructure) -> Result<SignedCircuitSet, BridgeError> {
    let report = e.verify()?;
    if !report.ok {
        return Err(BridgeError::Phase(PhaseError::InvalidStructure(format!(
            "{:?}",
            report.violations[0]
        ))));
    }
    let m = e.matroid();
    let n = m.n();
    let mut vectors = Vec::new();
    for circuit in m.circuits() {
        let elements: Vec<usize> = (0..n).filter(|&x| circuit >> x & 1 == 1).collect();
        // Full pairwise table for the cocycle check.
        let mut gamma = std::collections::BTreeMap::new();
        for (a, &x) in elements.iter().enumerate() {
            for &y in &elements[a + 1..] {
                gamma.insert((x, y), gamma_from_phase(e, circuit, x, y)?);
            }
        }
        for (a, &x) in elements.iter().enumerate() {
            for (b, &y) in elements.iter().enumerate().skip(a + 1) {
                for &z in &elements[b + 1..] {
                    if gamma[&(x, y)] * gamma[&(y, z)] * gamma[&(x, z)] != 1 {
                        return Err(BridgeError::CocycleViolation {
                            circuit,
                            i: x,
                            j: y,
                            k: z,
                        });
                    }
                }
            }
        }
        let lowest = elements[0];
        let mut minus = 0u32;
        for &y in &elements[1..] {
            if gamma[&(lowest, y)] == -1 {
                minus |= 1 << y;
            }
        }
        vectors.push(SignVector::new(circuit & !minus, minus, n));
    }
    Ok(SignedCircuitSet::normalize(n, &vectors))
}

/// The orientation behind a verified real phase structure, rebuilt from
/// its recovered signed circuits.
pub fn phase_to_oriented(e: &RealPhaseStructure) -> Result<OrientedMatroid, BridgeError> {
    let circuits = signed_circuits_from_phase(e)?;
    let om = OrientedMatroid::from_signed_circuits(e.matroid().labels().to_vec(), &circuits)?;
    Ok(om)
}

/// All orientations of a matroid, enumerated by backtracking over signed
/// circuit representatives with weak-elimination pruning; every surviving
/// assignment is validated through the covector reconstruction.
pub fn enumerate_orientations(m: &Matroid) -> Result<Vec<OrientedMatroid>, BridgeError> {
    if m.n() > 8 {
        return Err(BridgeError::CountCap(m.n()));
    }
    let n = m.n();
    let mut circuits = m.circuits();
    circuits.sort_by_key(|c| (c.count_ones(), *c));
    if circuits.is_empty() {
        // Free matroid: the unique orientation has every sign vector as a
        // covector.
        let covectors = crate::oriented::all_sign_vectors(n);
        return Ok(vec![OrientedMatroid::from_covectors(
            m.labels().to_vec(),
            covectors,
        )?]);
    }

    // For each unordered pair of circuits and common separating element,
    // record the depth at which every candidate eliminator is assigned;
    // the pair check runs exactly there.
    let mut checks_at: Vec<Vec<(usize, usize, usize)>> = vec![Vec::new(); circuits.len()];
    for a in 0..circuits.len() {
        for b in a + 1..circuits.len() {
            let union = circuits[a] | circuits[b];
            let mut mask = circuits[a] & circuits[b];
            while mask != 0 {
                let e = mask.trailing_zeros() as usize;
                mask &= mask - 1;
                let ready = circuits
                    .iter()
                    .enumerate()
                    .filter(|&(_, &d)| d & (union & !(1 << e)) == d)
                    .map(|(idx, _)| idx)
                    .max()
                    .unwrap_or(0)
                    .max(b);
                checks_at[ready].push((a, b, e));
            }
        }
    }

    let mut out = Vec::new();
    let mut assigned: Vec<SignVector> = Vec::with_capacity(circuits.len());
    enumerate_rec(m, &circuits, &checks_at, &mut assigned, &mut out);
    Ok(out)
}

fn enumerate_rec(
    m: &Matroid,
    circuits: &[u32],
    checks_at: &[Vec<(usize, usize, usize)>],
    assigned: &mut Vec<SignVector>,
    out: &mut Vec<OrientedMatroid>,
) {
    let n = m.n();
    let depth = assigned.len();
    if depth == circuits.len() {
        let set = SignedCircuitSet::normalize(n, assigned);
        if let Ok(om) = from_signed_circuits_unchecked(m.labels().to_vec(), &set) {
            if &om.underlying_matroid() == m && om.signed_circuits() == set {
                out.push(om);
            }
        }
        return;
    }
    let circuit = circuits[depth];
    let lowest = circuit.trailing_zeros() as usize;
    let free: Vec<usize> = (0..n)
        .filter(|&x| circuit >> x & 1 == 1 && x != lowest)
        .collect();
    for pattern in 0u32..1 << free.len() {
        let mut minus = 0u32;
        for (bit, &x) in free.iter().enumerate() {
            if pattern >> bit & 1 == 1 {
                minus |= 1 << x;
            }
        }
        assigned.push(SignVector::new(circuit & !minus, minus, n));
        let feasible = checks_at[depth]
            .iter()
            .all(|&(a, b, e)| pair_eliminates(circuits, assigned, a, b, e));
        if feasible {
            enumerate_rec(m, circuits, checks_at, assigned, out);
        }
        assigned.pop();
    }
}

/// Weak elimination between the signed circuits with indices a and b at a
/// common element e, quantified over both relative sign choices.
fn pair_eliminates(
    circuits: &[u32],
    assigned: &[SignVector],
    a: usize,
    b: usize,
    e: usize,
) -> bool {
    let union = circuits[a] | circuits[b];
    let inside = union & !(1 << e);
    'variant: for flip in [false, true] {
        let x = assigned[a];
        let y = if flip {
            assigned[b].negate()
        } else {
            assigned[b]
        };
        if x.separation(&y) >> e & 1 == 0 {
            continue;
        }
        let plus = (x.plus() | y.plus()) & !(1 << e);
        let minus = (x.minus() | y.minus()) & !(1 << e);
        for (idx, &d) in circuits.iter().enumerate() {
            if d & inside != d || idx >= assigned.len() {
                continue;
            }
            let z = assigned[idx];
            let fits = z.plus() & plus == z.plus() && z.minus() & minus == z.minus();
            let fits_neg = z.minus() & plus == z.minus() && z.plus() & minus == z.plus();
            if fits || fits_neg {
                continue 'variant;
            }
        }
        return false;
    }
    true
}

/// Number of orientations of a matroid; by the cryptomorphism it equals
/// the number of real phase structures on the fan.
pub fn count_orientations(m: &Matroid) -> Result<u64, BridgeError> {
    Ok(enumerate_orientations(m)?.len() as u64)
}

/// Orientations of `m` whose elementary minors by the element `f` match
/// the two given oriented matroids; the brute-force search side of the
/// rank-one extension statement.
pub fn orientations_with_prescribed_minors(
    m: &Matroid,
    f: usize,
    deletion: &OrientedMatroid,
    contraction: &OrientedMatroid,
) -> Result<Vec<OrientedMatroid>, BridgeError> {
    let mut out = Vec::new();
    for om in enumerate_orientations(m)? {
        if &om.minor(1 << f, 0)? == deletion && &om.minor(0, 1 << f)? == contraction {
            out.push(om);
        }
    }
    Ok(out)
}

/// The tope view of a phase structure: the union over the minimal face,
/// mapped through epsilon -> (-1)^epsilon.
pub fn topes_from_phase(e: &RealPhaseStructure) -> Result<BTreeSet<SignVector>, BridgeError> {
    Ok(e.extend_to_face(&ChainOfFlats::empty())?
        .into_iter()
        .map(|eps| SignVector::from_exponent(&eps))
        .collect())
}
