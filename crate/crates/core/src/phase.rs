//! Real phase structures on matroid fans.
//!
//! A real phase structure assigns to every facet of the fan an affine
//! subspace of Z/2^E parallel to the facet, such that around every
//! codimension-one face the assigned spaces form an even cover —
//! equivalently, on matroid fans, a necklace arrangement. This module
//! implements both checkers, necklace orderings, reorientation, the
//! extension of the assignment to lower faces, minors, real subfans,
//! exhaustive search, and comparison up to reorientation.
//!
//! Internally every space is stored in the ambient Z/2^E with the all-ones
//! direction inside its tangent; projective structures are the same data
//! tagged with [`FanMode::Projective`], and only the serialized form and
//! the point sets of [`RealPhaseStructure::extend_to_face`] change, via
//! the quotient that zeroes the coordinate at the smallest ground element.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use thiserror::Error;

use crate::fan::{self, ChainOfFlats, FanError, FanMode, LiftMode};
use crate::gf2::{self, AffineSubspaceGF2, BitVector, Gf2Error, LinearSubspaceGF2};
use crate::matroid::{Matroid, MatroidError};

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum PhaseError {
    #[error(transparent)]
    Fan(#[from] FanError),
    #[error(transparent)]
    Gf2(#[from] Gf2Error),
    #[error("facet {0:?} has no assigned space")]
    PartialAssignment(ChainOfFlats),
    #[error("chain {0:?} is not a facet of the fan")]
    NotAFacet(ChainOfFlats),
    #[error("facet {0:?} is assigned twice")]
    DuplicateAssignment(ChainOfFlats),
    #[error("assigned space lives in Z2^{space} but the ground set has {ground} elements")]
    AmbientMismatch { space: usize, ground: usize },
    #[error("structures have different carriers or modes")]
    CarrierMismatch,
    #[error("operation requires a verified real phase structure: {0}")]
    InvalidStructure(String),
    #[error("necklace condition fails at face {0:?}")]
    NecklaceFails(ChainOfFlats),
}

impl From<MatroidError> for PhaseError {
    fn from(e: MatroidError) -> Self {
        PhaseError::Fan(FanError::Matroid(e))
    }
}

/// A cyclic ordering of facets up to rotation and reversal, stored as the
/// canonical representative (smallest facet first, lexicographically
/// smaller direction).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NecklaceOrdering {
    facets: Vec<ChainOfFlats>,
}

impl NecklaceOrdering {
    pub fn new(cycle: Vec<ChainOfFlats>) -> Self {
        if cycle.is_empty() {
            return NecklaceOrdering { facets: cycle };
        }
        let min_pos = cycle
            .iter()
            .enumerate()
            .min_by_key(|(_, c)| (*c).clone())
            .map(|(i, _)| i)
            .unwrap();
        let forward: Vec<ChainOfFlats> = cycle[min_pos..]
            .iter()
            .chain(&cycle[..min_pos])
            .cloned()
            .collect();
        let mut backward = forward.clone();
        backward[1..].reverse();
        NecklaceOrdering {
            facets: forward.min(backward),
        }
    }

    pub fn facets(&self) -> &[ChainOfFlats] {
        &self.facets
    }
}

/// A single failed check, naming the face and, for covers, the point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PhaseViolation {
    /// Condition (1): the tangent of the assigned space differs from the
    /// tangent of its facet.
    NotParallel { facet: ChainOfFlats },
    /// Condition (2): some point of the union is covered an odd number of
    /// times around the face.
    OddCover {
        face: ChainOfFlats,
        point: BitVector,
    },
    /// Condition (2'): the spaces around the face are not a necklace.
    NoNecklace { face: ChainOfFlats },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyReport {
    pub ok: bool,
    pub violations: Vec<PhaseViolation>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NecklaceReport {
    pub ok: bool,
    pub violations: Vec<PhaseViolation>,
    /// The necklace ordering at every codimension-one face that passed.
    pub orderings: Vec<(ChainOfFlats, NecklaceOrdering)>,
}

/// A real phase structure on the fan of a loopfree matroid.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RealPhaseStructure {
    matroid: Matroid,
    mode: FanMode,
    facets: Vec<ChainOfFlats>,
    spaces: Vec<AffineSubspaceGF2>,
}

impl RealPhaseStructure {
    /// Builds a structure from facet/space pairs. Projective-mode spaces
    /// are given modulo the all-ones vector and are lifted internally;
    /// affine-mode spaces are stored as provided. The assignment must hit
    /// every facet exactly once. Verification is separate: an invalid
    /// structure is still a storable value.
    pub fn from_assignment(
        matroid: Matroid,
        mode: FanMode,
        assignment: Vec<(ChainOfFlats, AffineSubspaceGF2)>,
    ) -> Result<Self, PhaseError> {
        let facets = fan::facets(&matroid)?;
        let n = matroid.n();
        let mut spaces: Vec<Option<AffineSubspaceGF2>> = vec![None; facets.len()];
        for (chain, space) in assignment {
            if space.ambient_size() != n {
                return Err(PhaseError::AmbientMismatch {
                    space: space.ambient_size(),
                    ground: n,
                });
            }
            let idx = facets
                .binary_search(&chain)
                .map_err(|_| PhaseError::NotAFacet(chain.clone()))?;
            if spaces[idx].is_some() {
                return Err(PhaseError::DuplicateAssignment(chain));
            }
            let space = match mode {
                FanMode::Affine => space,
                FanMode::Projective => {
                    let mut gens = space.tangent().basis().to_vec();
                    gens.push(BitVector::ones(n));
                    AffineSubspaceGF2::canonicalize(space.base(), &gens)?
                }
            };
            spaces[idx] = Some(space);
        }
        let spaces = spaces
            .into_iter()
            .zip(&facets)
            .map(|(s, f)| s.ok_or_else(|| PhaseError::PartialAssignment(f.clone())))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(RealPhaseStructure {
            matroid,
            mode,
            facets,
            spaces,
        })
    }

    pub(crate) fn from_aligned(
        matroid: Matroid,
        mode: FanMode,
        facets: Vec<ChainOfFlats>,
        spaces: Vec<AffineSubspaceGF2>,
    ) -> Self {
        debug_assert_eq!(facets.len(), spaces.len());
        RealPhaseStructure {
            matroid,
            mode,
            facets,
            spaces,
        }
    }

    pub fn matroid(&self) -> &Matroid {
        &self.matroid
    }

    pub fn mode(&self) -> FanMode {
        self.mode
    }

    /// Facets in canonical order.
    pub fn facets(&self) -> &[ChainOfFlats] {
        &self.facets
    }

    /// The internally stored (all-ones saturated) space of a facet.
    pub fn space(&self, facet: &ChainOfFlats) -> Option<&AffineSubspaceGF2> {
        self.facets
            .binary_search(facet)
            .ok()
            .map(|i| &self.spaces[i])
    }

    pub fn spaces(&self) -> &[AffineSubspaceGF2] {
        &self.spaces
    }

    /// The space of a facet in the representation matching the mode:
    /// affine structures return the stored space, projective ones the
    /// quotient with zero coordinate at the smallest ground element.
    pub fn display_space(&self, facet: &ChainOfFlats) -> Option<AffineSubspaceGF2> {
        let space = self.space(facet)?;
        Some(match self.mode {
            FanMode::Affine => space.clone(),
            FanMode::Projective => {
                let ones =
                    LinearSubspaceGF2::span(self.matroid.n(), &[BitVector::ones(self.matroid.n())])
                        .unwrap();
                space.quotient_by(&ones)
            }
        })
    }

    // ------------------------------------------------------------------
    // Verification
    // ------------------------------------------------------------------

    /// Checks condition (1) at every facet and the even-cover condition
    /// (2) at every codimension-one face.
    pub fn verify(&self) -> Result<VerifyReport, PhaseError> {
        let mut violations = self.parallel_violations();
        for tau in fan::codim1_faces(&self.matroid)? {
            let around = self.spaces_around(&tau)?;
            if let Some(point) = gf2::odd_cover_witness(&around)? {
                violations.push(PhaseViolation::OddCover {
                    face: tau.clone(),
                    point,
                });
            }
        }
        Ok(VerifyReport {
            ok: violations.is_empty(),
            violations,
        })
    }

    /// Checks condition (1) at every facet and the necklace condition (2')
    /// at every codimension-one face, reporting the orderings found.
    pub fn verify_necklace(&self) -> Result<NecklaceReport, PhaseError> {
        let mut violations = self.parallel_violations();
        let mut orderings = Vec::new();
        for tau in fan::codim1_faces(&self.matroid)? {
            match self.necklace_ordering_at(&tau) {
                Ok(ordering) => orderings.push((tau, ordering)),
                Err(PhaseError::NecklaceFails(face)) => {
                    violations.push(PhaseViolation::NoNecklace { face })
                }
                Err(e) => return Err(e),
            }
        }
        Ok(NecklaceReport {
            ok: violations.is_empty(),
            violations,
            orderings,
        })
    }

    /// True iff the two checkers agree on this structure.
    pub fn equivalence_witness(&self) -> Result<bool, PhaseError> {
        Ok(self.verify()?.ok == self.verify_necklace()?.ok)
    }

    fn parallel_violations(&self) -> Vec<PhaseViolation> {
        let mut out = Vec::new();
        for (facet, space) in self.facets.iter().zip(&self.spaces) {
            let expected = fan::tangent_z2(&self.matroid, facet, FanMode::Affine);
            if space.tangent() != &expected {
                out.push(PhaseViolation::NotParallel {
                    facet: facet.clone(),
                });
            }
        }
        out
    }

    /// The necklace ordering of the facets around a codimension-one face.
    pub fn necklace_ordering_at(&self, tau: &ChainOfFlats) -> Result<NecklaceOrdering, PhaseError> {
        let adjacent = fan::adjacent_facets(&self.matroid, tau)?;
        let w = fan::tangent_z2(&self.matroid, tau, FanMode::Affine);
        let lines: Vec<AffineSubspaceGF2> = adjacent
            .iter()
            .map(|f| {
                self.space(f)
                    .ok_or_else(|| PhaseError::NotAFacet(f.clone()))
                    .map(|s| s.quotient_by(&w))
            })
            .collect::<Result<_, _>>()?;
        match gf2::necklace_check(&lines) {
            Ok(Some(cycle)) => Ok(NecklaceOrdering::new(
                cycle.into_iter().map(|i| adjacent[i].clone()).collect(),
            )),
            Ok(None) => Err(PhaseError::NecklaceFails(tau.clone())),
            // A structure violating condition (1) can produce quotients
            // that are not lines; that is a failed necklace, not an
            // internal error.
            Err(Gf2Error::MixedDimensions | Gf2Error::NoCommonHyperplane { .. }) => {
                Err(PhaseError::NecklaceFails(tau.clone()))
            }
            Err(e) => Err(e.into()),
        }
    }

    fn spaces_around(&self, tau: &ChainOfFlats) -> Result<Vec<AffineSubspaceGF2>, PhaseError> {
        fan::adjacent_facets(&self.matroid, tau)?
            .iter()
            .map(|f| {
                self.space(f)
                    .cloned()
                    .ok_or_else(|| PhaseError::NotAFacet(f.clone()))
            })
            .collect()
    }

    // ------------------------------------------------------------------
    // Reorientation and face extension
    // ------------------------------------------------------------------

    /// Translates every assigned space by a fixed vector.
    pub fn reorient(&self, eps: &BitVector) -> RealPhaseStructure {
        RealPhaseStructure {
            matroid: self.matroid.clone(),
            mode: self.mode,
            facets: self.facets.clone(),
            spaces: self.spaces.iter().map(|s| s.translate(eps)).collect(),
        }
    }

    /// The union of the facet spaces over all facets containing the face.
    /// In projective mode the points are reduced modulo the all-ones
    /// vector. The result need not be an affine subspace.
    pub fn extend_to_face(&self, tau: &ChainOfFlats) -> Result<BTreeSet<BitVector>, PhaseError> {
        let mut out = BTreeSet::new();
        let mut any = false;
        for (facet, space) in self.facets.iter().zip(&self.spaces) {
            if tau.is_face_of(facet) {
                any = true;
                for p in space.points() {
                    out.insert(match self.mode {
                        FanMode::Affine => p,
                        FanMode::Projective => fan::projectivize(&p),
                    });
                }
            }
        }
        if !any {
            return Err(PhaseError::NotAFacet(tau.clone()));
        }
        Ok(out)
    }

    /// Solves for a translation carrying `self` to `other`; the witness is
    /// the numerically smallest solution. Both structures must share the
    /// carrier and mode.
    pub fn equal_up_to_reorientation(
        &self,
        other: &RealPhaseStructure,
    ) -> Result<Option<BitVector>, PhaseError> {
        if self.matroid != other.matroid || self.mode != other.mode {
            return Err(PhaseError::CarrierMismatch);
        }
        let n = self.matroid.n();
        let mut solution = AffineSubspaceGF2::canonicalize(
            BitVector::zero(n),
            &(0..n).map(|i| BitVector::unit(i, n)).collect::<Vec<_>>(),
        )?;
        for (a, b) in self.spaces.iter().zip(&other.spaces) {
            if a.tangent() != b.tangent() {
                return Ok(None);
            }
            let constraint =
                AffineSubspaceGF2::from_tangent(a.base().add(&b.base()), a.tangent().clone())?;
            match solution.intersect(&constraint)? {
                Some(next) => solution = next,
                None => return Ok(None),
            }
        }
        let eps = solution.points().into_iter().min().unwrap();
        debug_assert_eq!(self.reorient(&eps).spaces, other.spaces);
        Ok(Some(eps))
    }

    // ------------------------------------------------------------------
    // Minors
    // ------------------------------------------------------------------

    /// Elementary deletion of the element at ground index `i`. For a
    /// coloop this coincides with contraction.
    pub fn delete_element(&self, i: usize) -> Result<RealPhaseStructure, PhaseError> {
        self.require_valid()?;
        if self.matroid.is_coloop(i) {
            return self.contract_inner(i);
        }
        let minor = self.matroid.delete(1 << i)?;
        let mut assignment = Vec::new();
        for facet in fan::facets(&minor)? {
            let lift = fan::lift_facet(&self.matroid, &facet, LiftMode::Deletion(i))?;
            let space = self
                .space(&lift)
                .ok_or_else(|| PhaseError::NotAFacet(lift.clone()))?
                .project(1 << i)?;
            assignment.push((facet, space));
        }
        Ok(Self::assemble(minor, self.mode, assignment))
    }

    /// Elementary contraction of the element at ground index `i`; the
    /// whole closure cl(i) leaves the ground set, matching the loop
    /// convention for fans.
    pub fn contract_element(&self, i: usize) -> Result<RealPhaseStructure, PhaseError> {
        self.require_valid()?;
        self.contract_inner(i)
    }

    fn contract_inner(&self, i: usize) -> Result<RealPhaseStructure, PhaseError> {
        let closure = self.matroid.closure(1 << i);
        let minor = self.matroid.contract(closure)?;
        let mut assignment = Vec::new();
        for facet in fan::facets(&minor)? {
            let lift = fan::lift_facet(&self.matroid, &facet, LiftMode::Contraction(i))?;
            let space = self
                .space(&lift)
                .ok_or_else(|| PhaseError::NotAFacet(lift.clone()))?
                .project(closure)?;
            assignment.push((facet, space));
        }
        Ok(Self::assemble(minor, self.mode, assignment))
    }

    fn assemble(
        matroid: Matroid,
        mode: FanMode,
        mut assignment: Vec<(ChainOfFlats, AffineSubspaceGF2)>,
    ) -> RealPhaseStructure {
        assignment.sort_by(|a, b| a.0.cmp(&b.0));
        let (facets, spaces) = assignment.into_iter().unzip();
        RealPhaseStructure::from_aligned(matroid, mode, facets, spaces)
    }

    /// Minor by a set of deletions and contractions, applied as a sequence
    /// of elementary steps. Elements swallowed by an earlier closure
    /// contraction are skipped; the result does not depend on the order.
    pub fn minor(&self, delete: u32, contract: u32) -> Result<RealPhaseStructure, PhaseError> {
        if delete & contract != 0 {
            return Err(MatroidError::OverlappingMinorSets.into());
        }
        let to_labels = |mask: u32| -> Vec<String> {
            (0..self.matroid.n())
                .filter(|&i| mask >> i & 1 == 1)
                .map(|i| self.matroid.labels()[i].clone())
                .collect()
        };
        let mut current = self.clone();
        for label in to_labels(delete) {
            if let Ok(idx) = current.matroid.label_index(&label) {
                current = current.delete_element(idx)?;
            }
        }
        for label in to_labels(contract) {
            if let Ok(idx) = current.matroid.label_index(&label) {
                current = current.contract_element(idx)?;
            }
        }
        Ok(current)
    }

    fn require_valid(&self) -> Result<(), PhaseError> {
        let report = self.verify()?;
        if report.ok {
            Ok(())
        } else {
            Err(PhaseError::InvalidStructure(format!(
                "{:?}",
                report.violations[0]
            )))
        }
    }

    // ------------------------------------------------------------------
    // Real subfans
    // ------------------------------------------------------------------

    /// True iff `self` is a real subfan of `other`: the carrier fan is
    /// contained in the other fan and the extended assignment is contained
    /// pointwise at every face of the smaller fan.
    pub fn is_real_subfan_of(&self, other: &RealPhaseStructure) -> Result<bool, PhaseError> {
        if self.matroid.labels() != other.matroid.labels() || self.mode != other.mode {
            return Err(PhaseError::CarrierMismatch);
        }
        if !fan::fan_contains(&self.matroid, &other.matroid)? {
            return Ok(false);
        }
        for tau in fan::all_faces(&self.matroid)? {
            if !self
                .extend_to_face(&tau)?
                .is_subset(&other.extend_to_face(&tau)?)
            {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Result of an exhaustive search.
#[derive(Debug, Clone)]
pub struct SearchOutcome {
    pub structures: Vec<RealPhaseStructure>,
    /// True when a limit cut the enumeration short.
    pub truncated: bool,
}

/// Exhaustively enumerates the real phase structures on the fan of a
/// loopfree matroid by backtracking: facets are visited in breadth-first
/// order over codimension-one adjacency starting from the smallest maximal
/// chain, and candidate translates are pruned by the necklace condition
/// against the already-fixed neighbors.
///
/// With `up_to_reorientation` the first facet is pinned to its linear
/// translate and one representative per reorientation class is returned.
pub fn search_phase_structures(
    matroid: &Matroid,
    mode: FanMode,
    up_to_reorientation: bool,
    limit: Option<usize>,
) -> Result<SearchOutcome, PhaseError> {
    let n = matroid.n();
    let facets = fan::facets(matroid)?;
    let taus = fan::codim1_faces(matroid)?;
    let tangents: Vec<LinearSubspaceGF2> = facets
        .iter()
        .map(|f| fan::tangent_z2(matroid, f, FanMode::Affine))
        .collect();

    // For each codim-1 face: its tangent and the adjacent facets with
    // their projected line directions.
    let mut tau_info: Vec<(LinearSubspaceGF2, Vec<(usize, u32)>)> = Vec::with_capacity(taus.len());
    let mut faces_of_facet: Vec<Vec<usize>> = vec![Vec::new(); facets.len()];
    for (t, tau) in taus.iter().enumerate() {
        let w = fan::tangent_z2(matroid, tau, FanMode::Affine);
        let mut adj = Vec::new();
        for facet in fan::adjacent_facets(matroid, tau)? {
            let idx = facets.binary_search(&facet).expect("adjacent facet exists");
            let inserted = facet
                .flats()
                .iter()
                .find(|f| !tau.flats().contains(f))
                .expect("adjacent facet refines tau");
            let dir = w.reduce(&BitVector::from_bits(*inserted, n).unwrap());
            debug_assert!(!dir.is_zero());
            adj.push((idx, dir.bits()));
            faces_of_facet[idx].push(t);
        }
        tau_info.push((w, adj));
    }

    // Breadth-first assignment order over facet adjacency.
    let mut neighbors: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); facets.len()];
    for (_, adj) in &tau_info {
        for &(a, _) in adj {
            for &(b, _) in adj {
                if a != b {
                    neighbors[a].insert(b);
                }
            }
        }
    }
    let mut order = Vec::with_capacity(facets.len());
    let mut seen = vec![false; facets.len()];
    for root in 0..facets.len() {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(f) = queue.pop_front() {
            order.push(f);
            for &g in &neighbors[f] {
                if !seen[g] {
                    seen[g] = true;
                    queue.push_back(g);
                }
            }
        }
    }

    // Candidate translates of each facet tangent, ascending.
    let candidates: Vec<Vec<u32>> = tangents
        .iter()
        .map(|t| {
            let free = !t.pivot_mask() & gf2::low_mask(n);
            let k = free.count_ones();
            (0..1u32 << k).map(|x| gf2::scatter_bits(x, free)).collect()
        })
        .collect();

    let mut search = Search {
        matroid,
        mode,
        facets: &facets,
        tangents: &tangents,
        tau_info: &tau_info,
        faces_of_facet: &faces_of_facet,
        order: &order,
        candidates: &candidates,
        assignment: vec![None; facets.len()],
        found: Vec::new(),
        limit,
        truncated: false,
        pin_first: up_to_reorientation,
    };
    search.run(0);
    let truncated = search.truncated;
    let mut structures = search.found;
    structures.sort_by_key(structure_key);
    if up_to_reorientation {
        structures = dedupe_reorientation_classes(structures)?;
    }
    Ok(SearchOutcome {
        structures,
        truncated,
    })
}

fn structure_key(s: &RealPhaseStructure) -> Vec<u32> {
    s.spaces().iter().map(|sp| sp.base().bits()).collect()
}

fn dedupe_reorientation_classes(
    structures: Vec<RealPhaseStructure>,
) -> Result<Vec<RealPhaseStructure>, PhaseError> {
    let mut kept: Vec<RealPhaseStructure> = Vec::new();
    for s in structures {
        let mut fresh = true;
        for k in &kept {
            if k.equal_up_to_reorientation(&s)?.is_some() {
                fresh = false;
                break;
            }
        }
        if fresh {
            kept.push(s);
        }
    }
    Ok(kept)
}

struct Search<'a> {
    matroid: &'a Matroid,
    mode: FanMode,
    facets: &'a [ChainOfFlats],
    tangents: &'a [LinearSubspaceGF2],
    tau_info: &'a [(LinearSubspaceGF2, Vec<(usize, u32)>)],
    faces_of_facet: &'a [Vec<usize>],
    order: &'a [usize],
    candidates: &'a [Vec<u32>],
    assignment: Vec<Option<u32>>,
    found: Vec<RealPhaseStructure>,
    limit: Option<usize>,
    truncated: bool,
    pin_first: bool,
}

impl Search<'_> {
    fn run(&mut self, depth: usize) {
        if self.truncated {
            return;
        }
        if depth == self.order.len() {
            self.emit();
            return;
        }
        let facet = self.order[depth];
        if depth == 0 && self.pin_first {
            self.assignment[facet] = Some(0);
            if self.feasible(facet) {
                self.run(depth + 1);
            }
            self.assignment[facet] = None;
            return;
        }
        for idx in 0..self.candidates[facet].len() {
            self.assignment[facet] = Some(self.candidates[facet][idx]);
            if self.feasible(facet) {
                self.run(depth + 1);
            }
            if self.truncated {
                break;
            }
        }
        self.assignment[facet] = None;
    }

    /// Checks every codim-1 face of the newly assigned facet: point
    /// multiplicities stay at most two, open endpoints stay coverable by
    /// the unassigned neighbors, no strict subset closes up early, and a
    /// fully assigned face must be a single cycle.
    fn feasible(&self, facet: usize) -> bool {
        let n = self.matroid.n();
        for &t in &self.faces_of_facet[facet] {
            let (w, adj) = &self.tau_info[t];
            let mut points: Vec<(u32, Vec<usize>)> = Vec::with_capacity(2 * adj.len());
            let mut assigned = 0usize;
            for (slot, &(g, dir)) in adj.iter().enumerate() {
                let Some(rep) = self.assignment[g] else {
                    continue;
                };
                assigned += 1;
                let base = w.reduce(&BitVector::from_bits(rep, n).unwrap()).bits();
                for p in [base, base ^ dir] {
                    match points.iter_mut().find(|(q, _)| *q == p) {
                        Some((_, members)) => members.push(slot),
                        None => points.push((p, vec![slot])),
                    }
                }
            }
            let k = adj.len();
            let remaining = k - assigned;
            let mut open = 0usize;
            for (_, members) in &points {
                match members.len() {
                    1 => open += 1,
                    2 => {}
                    _ => return false,
                }
            }
            if open > 2 * remaining {
                return false;
            }
            if remaining > 0 && open == 0 {
                return false;
            }
            if remaining == 0 && !single_cycle(k, &points) {
                return false;
            }
        }
        true
    }

    fn emit(&mut self) {
        if let Some(limit) = self.limit {
            if self.found.len() >= limit {
                self.truncated = true;
                return;
            }
        }
        let spaces: Vec<AffineSubspaceGF2> = self
            .assignment
            .iter()
            .zip(self.tangents)
            .map(|(rep, tangent)| {
                AffineSubspaceGF2::from_tangent(
                    BitVector::from_bits(rep.unwrap(), self.matroid.n()).unwrap(),
                    tangent.clone(),
                )
                .unwrap()
            })
            .collect();
        self.found.push(RealPhaseStructure::from_aligned(
            self.matroid.clone(),
            self.mode,
            self.facets.to_vec(),
            spaces,
        ));
    }
}

/// True iff the intersection points (each on exactly two of the k lines)
/// link all k lines into one cycle.
fn single_cycle(k: usize, points: &[(u32, Vec<usize>)]) -> bool {
    if points.iter().any(|(_, m)| m.len() != 2) || points.len() != k {
        return false;
    }
    let mut adjacency: Vec<Vec<usize>> = vec![Vec::new(); k];
    for (e, (_, members)) in points.iter().enumerate() {
        adjacency[members[0]].push(e);
        adjacency[members[1]].push(e);
    }
    if adjacency.iter().any(|a| a.len() != 2) {
        return false;
    }
    let mut used = vec![false; points.len()];
    let mut current = 0usize;
    let mut visited = 1usize;
    while let Some(&e) = adjacency[current].iter().find(|&&e| !used[e]) {
        used[e] = true;
        let members = &points[e].1;
        let next = if members[0] == current {
            members[1]
        } else {
            members[0]
        };
        if next == 0 {
            break;
        }
        visited += 1;
        current = next;
    }
    visited == k && used.iter().all(|&u| u)
}

/// Builds the structure assigning each facet the coset of its tangent
/// through the given basepoint; a convenience for tests and fixtures.
pub fn structure_from_basepoints(
    matroid: &Matroid,
    mode: FanMode,
    basepoints: &BTreeMap<ChainOfFlats, BitVector>,
) -> Result<RealPhaseStructure, PhaseError> {
    let mut facets = Vec::new();
    let mut spaces = Vec::new();
    for facet in fan::facets(matroid)? {
        let base = basepoints
            .get(&facet)
            .copied()
            .ok_or_else(|| PhaseError::PartialAssignment(facet.clone()))?;
        let tangent = fan::tangent_z2(matroid, &facet, FanMode::Affine);
        spaces.push(AffineSubspaceGF2::from_tangent(base, tangent)?);
        facets.push(facet);
    }
    Ok(RealPhaseStructure::from_aligned(
        matroid.clone(),
        mode,
        facets,
        spaces,
    ))
}
