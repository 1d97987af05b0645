//! The fine fan of a matroid: faces as chains of flats.
//!
//! Faces of the fan of a loopfree matroid correspond to strictly
//! increasing chains of proper nonempty flats; facets are the maximal
//! chains and codimension-one faces are the chains with a single rank-two
//! gap. Cone geometry is never materialized: only the mod-2 reduction of
//! the tangent spaces, which is what the phase conditions consume. The
//! affine fan has the all-ones lineality direction; the projective fan is
//! its quotient, represented by vectors whose coordinate at the smallest
//! ground element is zero.

use thiserror::Error;

use crate::gf2::{scatter_bits, BitVector, LinearSubspaceGF2};
use crate::matroid::{Matroid, MatroidError};

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum FanError {
    #[error(transparent)]
    Matroid(#[from] MatroidError),
    #[error("face is not a codimension-one face of the fan")]
    NotCodimOne,
    #[error("chain is not a facet of the stated minor fan")]
    NotAMinorFacet,
    #[error("element index {0} out of range")]
    BadElement(usize),
}

/// Affine fans keep the all-ones lineality direction; projective fans are
/// the quotient by it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FanMode {
    Affine,
    Projective,
}

/// A face of the fan of a matroid: a strictly increasing chain of proper
/// nonempty flats (the empty chain is the minimal face).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ChainOfFlats {
    flats: Vec<u32>,
}

impl std::fmt::Debug for ChainOfFlats {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Chain[")?;
        for (i, fl) in self.flats.iter().enumerate() {
            if i > 0 {
                write!(f, " < ")?;
            }
            write!(f, "{fl:b}")?;
        }
        write!(f, "]")
    }
}

impl ChainOfFlats {
    pub fn new(m: &Matroid, flats: Vec<u32>) -> Result<Self, FanError> {
        let full = m.full_set();
        for &f in &flats {
            if f == 0 || f == full || !m.is_flat(f) {
                return Err(MatroidError::NotAFlat(f).into());
            }
        }
        for w in flats.windows(2) {
            if w[0] & w[1] != w[0] || w[0] == w[1] {
                return Err(MatroidError::NotAChain.into());
            }
        }
        Ok(ChainOfFlats { flats })
    }

    pub fn empty() -> Self {
        ChainOfFlats { flats: vec![] }
    }

    pub fn flats(&self) -> &[u32] {
        &self.flats
    }

    pub fn len(&self) -> usize {
        self.flats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.flats.is_empty()
    }

    pub fn dim(&self, mode: FanMode) -> usize {
        match mode {
            FanMode::Affine => self.len() + 1,
            FanMode::Projective => self.len(),
        }
    }

    /// True iff this chain is a sub-chain of `other` (the face relation).
    pub fn is_face_of(&self, other: &ChainOfFlats) -> bool {
        self.flats.iter().all(|f| other.flats.contains(f))
    }
}

/// Reduces a vector modulo the all-ones direction: the canonical coset
/// representative has coordinate zero at the smallest ground element.
pub fn projectivize(v: &BitVector) -> BitVector {
    if v.size() > 0 && v.get(0) {
        v.add(&BitVector::ones(v.size()))
    } else {
        *v
    }
}

/// Facets of the fan: all maximal chains of proper nonempty flats, in
/// lexicographic order.
pub fn facets(m: &Matroid) -> Result<Vec<ChainOfFlats>, FanError> {
    require_loopfree(m)?;
    let r = m.full_rank();
    let mut out = Vec::new();
    let mut stack: Vec<Vec<u32>> = vec![vec![]];
    while let Some(chain) = stack.pop() {
        if chain.len() == r.saturating_sub(1) {
            out.push(ChainOfFlats { flats: chain });
            continue;
        }
        let last = chain.last().copied().unwrap_or(0);
        for cover in m.covers_of(last) {
            if cover != m.full_set() {
                let mut next = chain.clone();
                next.push(cover);
                stack.push(next);
            }
        }
    }
    out.sort();
    Ok(out)
}

/// All faces of the fan: every chain of proper nonempty flats, including
/// the empty chain.
pub fn all_faces(m: &Matroid) -> Result<Vec<ChainOfFlats>, FanError> {
    require_loopfree(m)?;
    let proper: Vec<u32> = m
        .flats()
        .iter()
        .map(|f| f.elements)
        .filter(|&f| f != 0 && f != m.full_set())
        .collect();
    let mut out = vec![ChainOfFlats::empty()];
    let mut stack: Vec<Vec<u32>> = proper.iter().map(|&f| vec![f]).collect();
    while let Some(chain) = stack.pop() {
        let last = *chain.last().unwrap();
        out.push(ChainOfFlats {
            flats: chain.clone(),
        });
        for &f in &proper {
            if f != last && f & last == last {
                let mut next = chain.clone();
                next.push(f);
                stack.push(next);
            }
        }
    }
    out.sort();
    Ok(out)
}

/// Codimension-one faces: the chains with exactly one rank-two gap,
/// equivalently the chains of length rank - 2.
pub fn codim1_faces(m: &Matroid) -> Result<Vec<ChainOfFlats>, FanError> {
    require_loopfree(m)?;
    let r = m.full_rank();
    if r < 2 {
        return Ok(vec![]);
    }
    Ok(all_faces(m)?
        .into_iter()
        .filter(|c| c.len() == r - 2)
        .collect())
}

/// The facets adjacent to a codimension-one face: insert each flat lying
/// strictly inside the unique rank-two gap.
pub fn adjacent_facets(m: &Matroid, tau: &ChainOfFlats) -> Result<Vec<ChainOfFlats>, FanError> {
    require_loopfree(m)?;
    if tau.len() + 2 != m.full_rank() {
        return Err(FanError::NotCodimOne);
    }
    let mut bounds = vec![0u32];
    bounds.extend_from_slice(tau.flats());
    bounds.push(m.full_set());
    let gap = bounds
        .windows(2)
        .position(|w| m.rank(w[1]) == m.rank(w[0]) + 2)
        .ok_or(FanError::NotCodimOne)?;
    let (lower, upper) = (bounds[gap], bounds[gap + 1]);
    let mut out = Vec::new();
    for h in m.flats_between(lower, upper) {
        let mut flats = tau.flats().to_vec();
        flats.insert(gap, h);
        out.push(ChainOfFlats { flats });
    }
    out.sort();
    Ok(out)
}

/// Mod-2 tangent space of the cone of a chain: spanned by the indicator
/// vectors of the chain's flats, plus the all-ones vector in affine mode.
pub fn tangent_z2(m: &Matroid, chain: &ChainOfFlats, mode: FanMode) -> LinearSubspaceGF2 {
    let n = m.n();
    let mut gens: Vec<BitVector> = chain
        .flats()
        .iter()
        .map(|&f| BitVector::from_bits(f, n).unwrap())
        .collect();
    match mode {
        FanMode::Affine => gens.push(BitVector::ones(n)),
        FanMode::Projective => {
            gens = gens.iter().map(projectivize).collect();
        }
    }
    LinearSubspaceGF2::span(n, &gens).unwrap()
}

/// How a facet of a minor fan lifts back to the parent fan.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LiftMode {
    /// Deletion of the element with the given parent index.
    Deletion(usize),
    /// Contraction of the element with the given parent index; the whole
    /// closure of the element leaves the ground set.
    Contraction(usize),
}

/// Lifts a facet of the fan of `M\i` or `M/cl(i)` to the facet of the fan
/// of `M` that projects back onto it.
pub fn lift_facet(
    m: &Matroid,
    sigma: &ChainOfFlats,
    mode: LiftMode,
) -> Result<ChainOfFlats, FanError> {
    require_loopfree(m)?;
    let lifted = match mode {
        LiftMode::Deletion(i) => {
            if i >= m.n() {
                return Err(FanError::BadElement(i));
            }
            if m.is_coloop(i) {
                // A coloop behaves like a contracted element: prepend its
                // closure and add it to every flat.
                lift_through_contraction(m, sigma, 1 << i)
            } else {
                let keep = m.full_set() & !(1 << i);
                sigma
                    .flats()
                    .iter()
                    .map(|&f| m.closure(scatter_bits(f, keep)))
                    .collect()
            }
        }
        LiftMode::Contraction(i) => {
            if i >= m.n() {
                return Err(FanError::BadElement(i));
            }
            lift_through_contraction(m, sigma, m.closure(1 << i))
        }
    };
    let chain = ChainOfFlats::new(m, lifted).map_err(|_| FanError::NotAMinorFacet)?;
    if chain.len() + 1 != m.full_rank() {
        return Err(FanError::NotAMinorFacet);
    }
    Ok(chain)
}

fn lift_through_contraction(m: &Matroid, sigma: &ChainOfFlats, closure: u32) -> Vec<u32> {
    let keep = m.full_set() & !closure;
    let mut flats = Vec::with_capacity(sigma.len() + 1);
    // When the closure is the whole ground set (rank-1 parent) the lifted
    // chain is the empty chain.
    if closure != m.full_set() {
        flats.push(closure);
    }
    flats.extend(
        sigma
            .flats()
            .iter()
            .map(|&f| scatter_bits(f, keep) | closure),
    );
    flats
}

/// True iff the fan of `m1` is contained in the fan of `m2`: every flat of
/// `m1` is a flat of `m2`.
pub fn fan_contains(m1: &Matroid, m2: &Matroid) -> Result<bool, FanError> {
    Ok(m1.is_quotient_of(m2)?)
}

fn require_loopfree(m: &Matroid) -> Result<(), FanError> {
    if m.is_loopfree() {
        Ok(())
    } else {
        Err(MatroidError::HasLoops(m.loops()).into())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matroid::fixtures::k4;

    fn chain(m: &Matroid, flats: &[u32]) -> ChainOfFlats {
        ChainOfFlats::new(m, flats.to_vec()).unwrap()
    }

    #[test]
    fn facet_counts_for_uniforms() {
        assert_eq!(facets(&Matroid::uniform(2, 4)).unwrap().len(), 4);
        assert_eq!(facets(&Matroid::uniform(3, 4)).unwrap().len(), 12);
        // U_{1,n}: the single facet is the empty chain.
        let f = facets(&Matroid::uniform(1, 5)).unwrap();
        assert_eq!(f, vec![ChainOfFlats::empty()]);
        // Number of maximal chains of U_{k+1,n} is n(n-1)...(n-k+1).
        assert_eq!(facets(&Matroid::uniform(3, 5)).unwrap().len(), 20);
        assert_eq!(facets(&Matroid::uniform(4, 6)).unwrap().len(), 120);
    }

    #[test]
    fn fan_rejects_loops() {
        let loopy =
            Matroid::from_rank_table(vec!["1".into(), "2".into()], vec![0, 1, 0, 1]).unwrap();
        assert!(facets(&loopy).is_err());
    }

    #[test]
    fn codim1_and_adjacency_u34() {
        let m = Matroid::uniform(3, 4);
        let tau = chain(&m, &[0b0001]);
        let adj = adjacent_facets(&m, &tau).unwrap();
        // Insert {1,2}, {1,3}, {1,4}.
        assert_eq!(
            adj,
            vec![
                chain(&m, &[0b0001, 0b0011]),
                chain(&m, &[0b0001, 0b0101]),
                chain(&m, &[0b0001, 0b1001]),
            ]
        );
    }

    #[test]
    fn codim1_vertex_of_u24_has_four_neighbors() {
        let m = Matroid::uniform(2, 4);
        let vertex = ChainOfFlats::empty();
        assert_eq!(codim1_faces(&m).unwrap(), vec![vertex.clone()]);
        assert_eq!(adjacent_facets(&m, &vertex).unwrap().len(), 4);
    }

    #[test]
    fn codim1_u35_tau_has_four_neighbors() {
        let m = Matroid::uniform(3, 5);
        let tau = chain(&m, &[0b00001]);
        let adj = adjacent_facets(&m, &tau).unwrap();
        assert_eq!(adj.len(), 4);
        assert!(adjacent_facets(&m, &adj[0]).is_err());
    }

    #[test]
    fn tangent_spaces() {
        // K4 facet for the flag with e12 and the triangle {e12,e13,e23}:
        // the tangent matches the affine-space basis from the worked
        // fixture (1,0,0,0,0,0), (0,1,0,1,0,0), (0,0,1,0,1,1).
        let m = k4();
        let f = chain(&m, &[0b000001, 0b001011]);
        let t = tangent_z2(&m, &f, FanMode::Affine);
        let alt = LinearSubspaceGF2::span(
            6,
            &[
                "100000".parse().unwrap(),
                "010100".parse().unwrap(),
                "001011".parse().unwrap(),
            ],
        )
        .unwrap();
        assert_eq!(t, alt);

        // Affine U_{1,n} facet: span of the all-ones vector.
        let u1 = Matroid::uniform(1, 3);
        let t = tangent_z2(&u1, &ChainOfFlats::empty(), FanMode::Affine);
        assert_eq!(t.dim(), 1);
        assert!(t.contains(&BitVector::ones(3)));

        // U_{2,4} facet {∅ ⊂ {2} ⊂ E}: span{e2, ones}, dim 2.
        let m = Matroid::uniform(2, 4);
        let t = tangent_z2(&m, &chain(&m, &[0b0010]), FanMode::Affine);
        assert_eq!(t.dim(), 2);
        assert!(t.contains(&"0100".parse().unwrap()));
        assert!(t.contains(&BitVector::ones(4)));
        // Projective mode drops a dimension.
        let tp = tangent_z2(&m, &chain(&m, &[0b0010]), FanMode::Projective);
        assert_eq!(tp.dim(), 1);
    }

    #[test]
    fn codim1_direction_relation() {
        // Around every codim-1 face the indicator vectors of the inserted
        // flats sum to eps_upper + (k-1) eps_lower mod 2, and the projected
        // directions sum to zero in the quotient by the tangent of tau.
        for m in [Matroid::uniform(3, 4), Matroid::uniform(3, 5), k4()] {
            for tau in codim1_faces(&m).unwrap() {
                let adj = adjacent_facets(&m, &tau).unwrap();
                let inserted: Vec<u32> = adj
                    .iter()
                    .map(|sigma| {
                        *sigma
                            .flats()
                            .iter()
                            .find(|f| !tau.flats().contains(f))
                            .unwrap()
                    })
                    .collect();
                let mut bounds = vec![0u32];
                bounds.extend_from_slice(tau.flats());
                bounds.push(m.full_set());
                let gap = bounds
                    .windows(2)
                    .position(|w| m.rank(w[1]) == m.rank(w[0]) + 2)
                    .unwrap();
                let (lower, upper) = (bounds[gap], bounds[gap + 1]);
                let k = inserted.len() as u32;
                let mut sum = BitVector::zero(m.n());
                for &h in &inserted {
                    sum = sum.add(&BitVector::from_bits(h, m.n()).unwrap());
                }
                let mut expected = BitVector::from_bits(upper, m.n()).unwrap();
                if (k + 1) % 2 == 1 {
                    expected = expected.add(&BitVector::from_bits(lower, m.n()).unwrap());
                }
                assert_eq!(sum, expected);
                let w = tangent_z2(&m, &tau, FanMode::Affine);
                assert!(w.contains(&sum));
            }
        }
    }

    #[test]
    fn lift_contraction_u35() {
        // U_{3,5}/5 facet {∅ ⊂ {1} ⊂ E\5} lifts to {∅ ⊂ {5} ⊂ {1,5} ⊂ E}.
        let m = Matroid::uniform(3, 5);
        let minor = m.contract(0b10000).unwrap();
        let sigma = chain(&minor, &[0b0001]);
        let lifted = lift_facet(&m, &sigma, LiftMode::Contraction(4)).unwrap();
        assert_eq!(lifted, chain(&m, &[0b10000, 0b10001]));
    }

    #[test]
    fn lift_deletion_u35() {
        let m = Matroid::uniform(3, 5);
        let minor = m.delete(0b10000).unwrap();
        let sigma = chain(&minor, &[0b0001, 0b0011]);
        let lifted = lift_facet(&m, &sigma, LiftMode::Deletion(4)).unwrap();
        assert_eq!(lifted, chain(&m, &[0b00001, 0b00011]));
    }

    #[test]
    fn lift_coloop_appends_everywhere() {
        // U_{2,2} \ 2 = U_{1,1}; the empty chain lifts by adding element 2.
        let m = Matroid::uniform(2, 2);
        let lifted = lift_facet(&m, &ChainOfFlats::empty(), LiftMode::Deletion(1)).unwrap();
        assert_eq!(lifted, chain(&m, &[0b10]));
    }

    #[test]
    fn fan_containment() {
        let u24 = Matroid::uniform(2, 4);
        let u34 = Matroid::uniform(3, 4);
        assert!(fan_contains(&u24, &u34).unwrap());
        assert!(fan_contains(&u34, &u34).unwrap());
        let u17 = Matroid::uniform(1, 7);
        assert!(fan_contains(&u17, &crate::matroid::fixtures::fano()).unwrap());
    }

    #[test]
    fn all_faces_include_empty_chain() {
        let m = Matroid::uniform(2, 4);
        let faces = all_faces(&m).unwrap();
        assert!(faces.contains(&ChainOfFlats::empty()));
        // 1 empty chain + 4 rays.
        assert_eq!(faces.len(), 5);
    }
}
