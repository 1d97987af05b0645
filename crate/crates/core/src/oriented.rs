//! Oriented matroids as covector sets.
//!
//! The canonical representation is the full set of covectors, stored as
//! sign vectors over the ground set; topes, signed circuits and the
//! underlying matroid are derived views. Constructors from topes, signed
//! circuits and exact rational matrices all normalize into the covector
//! set and are validated against the covector axioms.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

use crate::gf2::{gather_bits, low_mask, BitVector};
use crate::matroid::{determinant, rational_sign, Matroid, MatroidError};

/// Cap for the 3^n brute-force scans used by the constructors.
pub const MAX_OM_GROUND: usize = 10;

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum OrientedError {
    #[error(transparent)]
    Matroid(#[from] MatroidError),
    #[error("covector axiom {axiom} violated: {detail}")]
    Axiom { axiom: &'static str, detail: String },
    #[error("ground set of size {0} exceeds the cap {MAX_OM_GROUND} for covector enumeration")]
    GroundTooLarge(usize),
    #[error("topes must have full support on a loopfree ground set; {0} does not")]
    NotATope(String),
    #[error("sign vector {0:?} does not parse")]
    ParseSignVector(String),
    #[error("signed circuit supports do not form the circuit set of a matroid")]
    BadCircuitSupports,
    #[error("signed circuits are not orientable data: the recovered orientation disagrees with the input")]
    CircuitSignMismatch,
    #[error("ground sets do not match")]
    GroundMismatch,
    #[error("matrix rows must all have the same length")]
    RaggedMatrix,
    #[error("chain entry {0:#b} is not a flat of the underlying matroid")]
    NotAFlat(u32),
}

/// A sign vector in {0, +1, -1}^E, stored as disjoint positive and
/// negative bitmasks.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignVector {
    plus: u32,
    minus: u32,
    size: u8,
}

impl SignVector {
    pub fn new(plus: u32, minus: u32, size: usize) -> Self {
        assert!(plus & minus == 0, "overlapping sign supports");
        assert!((plus | minus) & !low_mask(size) == 0);
        SignVector {
            plus,
            minus,
            size: size as u8,
        }
    }

    pub fn zero(size: usize) -> Self {
        SignVector {
            plus: 0,
            minus: 0,
            size: size as u8,
        }
    }

    pub fn size(&self) -> usize {
        self.size as usize
    }

    pub fn plus(&self) -> u32 {
        self.plus
    }

    pub fn minus(&self) -> u32 {
        self.minus
    }

    pub fn support(&self) -> u32 {
        self.plus | self.minus
    }

    pub fn is_zero(&self) -> bool {
        self.support() == 0
    }

    pub fn sign(&self, i: usize) -> i8 {
        if self.plus >> i & 1 == 1 {
            1
        } else if self.minus >> i & 1 == 1 {
            -1
        } else {
            0
        }
    }

    pub fn negate(&self) -> SignVector {
        SignVector {
            plus: self.minus,
            minus: self.plus,
            size: self.size,
        }
    }

    /// Composition: keeps the signs of `self`, filling zeros from `other`.
    pub fn compose(&self, other: &SignVector) -> SignVector {
        assert_eq!(self.size, other.size);
        let free = !self.support();
        SignVector {
            plus: self.plus | other.plus & free,
            minus: self.minus | other.minus & free,
            size: self.size,
        }
    }

    /// Separation set: the coordinates with opposite nonzero signs.
    pub fn separation(&self, other: &SignVector) -> u32 {
        assert_eq!(self.size, other.size);
        self.plus & other.minus | self.minus & other.plus
    }

    /// Flips the signs on the subset `f`.
    pub fn reflect(&self, f: u32) -> SignVector {
        SignVector {
            plus: self.plus & !f | self.minus & f,
            minus: self.minus & !f | self.plus & f,
            size: self.size,
        }
    }

    /// Sets the coordinates in `f` to zero.
    pub fn zero_out(&self, f: u32) -> SignVector {
        SignVector {
            plus: self.plus & !f,
            minus: self.minus & !f,
            size: self.size,
        }
    }

    pub fn has_full_support(&self) -> bool {
        self.support() == low_mask(self.size())
    }

    /// Deletes the coordinates in `drop` and compresses the rest.
    pub fn delete_coords(&self, drop: u32) -> SignVector {
        let keep = !drop & low_mask(self.size());
        SignVector {
            plus: gather_bits(self.plus, keep),
            minus: gather_bits(self.minus, keep),
            size: keep.count_ones() as u8,
        }
    }

    /// The tope (-1)^eps: minus exactly on the support of eps.
    pub fn from_exponent(eps: &BitVector) -> SignVector {
        SignVector {
            plus: !eps.bits() & low_mask(eps.size()),
            minus: eps.bits(),
            size: eps.size() as u8,
        }
    }

    /// Inverse of [`SignVector::from_exponent`]; requires full support.
    pub fn to_exponent(&self) -> Option<BitVector> {
        if self.has_full_support() {
            Some(BitVector::from_bits(self.minus, self.size()).unwrap())
        } else {
            None
        }
    }
}

impl fmt::Debug for SignVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SignVector({self})")
    }
}

impl fmt::Display for SignVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.size() {
            let c = match self.sign(i) {
                1 => '+',
                -1 => '-',
                _ => '0',
            };
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl FromStr for SignVector {
    type Err = OrientedError;

    fn from_str(s: &str) -> Result<Self, OrientedError> {
        if s.len() > crate::gf2::MAX_GROUND {
            return Err(OrientedError::ParseSignVector(s.to_string()));
        }
        let (mut plus, mut minus) = (0u32, 0u32);
        for (i, c) in s.chars().enumerate() {
            match c {
                '+' => plus |= 1 << i,
                '-' => minus |= 1 << i,
                '0' => {}
                _ => return Err(OrientedError::ParseSignVector(s.to_string())),
            }
        }
        Ok(SignVector {
            plus,
            minus,
            size: s.len() as u8,
        })
    }
}

/// One violation of the covector axioms, with witnesses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AxiomViolation {
    MissingZero,
    NotSymmetric {
        witness: SignVector,
    },
    NotComposable {
        x: SignVector,
        y: SignVector,
    },
    NoElimination {
        x: SignVector,
        y: SignVector,
        at: usize,
    },
}

/// Checks the four covector axioms, naming every violation.
pub fn check_axioms(size: usize, covectors: &BTreeSet<SignVector>) -> Vec<AxiomViolation> {
    let mut violations = Vec::new();
    if !covectors.contains(&SignVector::zero(size)) {
        violations.push(AxiomViolation::MissingZero);
    }
    for x in covectors {
        if !covectors.contains(&x.negate()) {
            violations.push(AxiomViolation::NotSymmetric { witness: *x });
        }
    }
    for x in covectors {
        for y in covectors {
            if !covectors.contains(&x.compose(y)) {
                violations.push(AxiomViolation::NotComposable { x: *x, y: *y });
                continue;
            }
            let sep = x.separation(y);
            if sep == 0 {
                continue;
            }
            let xy = x.compose(y);
            let mut m = sep;
            while m != 0 {
                let i = m.trailing_zeros() as usize;
                m &= m - 1;
                let found = covectors
                    .iter()
                    .any(|z| z.sign(i) == 0 && z.zero_out(sep) == xy.zero_out(sep));
                if !found {
                    violations.push(AxiomViolation::NoElimination {
                        x: *x,
                        y: *y,
                        at: i,
                    });
                }
            }
        }
    }
    violations
}

/// An oriented matroid: ordered ground labels plus the full covector set.
#[derive(Clone, PartialEq, Eq)]
pub struct OrientedMatroid {
    labels: Vec<String>,
    covectors: BTreeSet<SignVector>,
}

impl fmt::Debug for OrientedMatroid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "OrientedMatroid(n={}, covectors={})",
            self.n(),
            self.covectors.len()
        )
    }
}

/// Signed circuits, one canonical representative per ± pair: the smallest
/// element of the support carries +.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SignedCircuitSet {
    pub size: usize,
    pub circuits: Vec<SignVector>,
}

impl SignedCircuitSet {
    /// Normalizes signed vectors into canonical ± representatives sorted by
    /// support.
    pub fn normalize(size: usize, vectors: &[SignVector]) -> SignedCircuitSet {
        let mut circuits: Vec<SignVector> = vectors
            .iter()
            .map(|x| {
                let lowest = x.support().trailing_zeros() as usize;
                if x.sign(lowest) == -1 {
                    x.negate()
                } else {
                    *x
                }
            })
            .collect();
        circuits.sort_by_key(|c| (c.support(), c.minus()));
        circuits.dedup();
        SignedCircuitSet { size, circuits }
    }

    /// Both representatives of every pair.
    pub fn with_negatives(&self) -> Vec<SignVector> {
        self.circuits
            .iter()
            .flat_map(|c| [*c, c.negate()])
            .collect()
    }
}

impl OrientedMatroid {
    pub fn from_covectors(
        labels: Vec<String>,
        covectors: impl IntoIterator<Item = SignVector>,
    ) -> Result<Self, OrientedError> {
        let n = labels.len();
        let covectors: BTreeSet<SignVector> = covectors.into_iter().collect();
        for c in &covectors {
            if c.size() != n {
                return Err(OrientedError::GroundMismatch);
            }
        }
        if let Some(v) = check_axioms(n, &covectors).first() {
            return Err(violation_to_error(v));
        }
        Ok(OrientedMatroid { labels, covectors })
    }

    /// Reconstructs the covector set from the topes: a sign vector is a
    /// covector iff composing it with every tope lands back in the topes.
    /// The result is validated against the axioms.
    pub fn from_topes(labels: Vec<String>, topes: &[SignVector]) -> Result<Self, OrientedError> {
        let n = labels.len();
        if n > MAX_OM_GROUND {
            return Err(OrientedError::GroundTooLarge(n));
        }
        let tope_set: BTreeSet<SignVector> = topes.iter().copied().collect();
        for t in &tope_set {
            if t.size() != n {
                return Err(OrientedError::GroundMismatch);
            }
            if !t.has_full_support() {
                return Err(OrientedError::NotATope(t.to_string()));
            }
        }
        let mut covectors = BTreeSet::new();
        for x in all_sign_vectors(n) {
            if tope_set.iter().all(|t| tope_set.contains(&x.compose(t))) {
                covectors.insert(x);
            }
        }
        if let Some(v) = check_axioms(n, &covectors).first() {
            return Err(violation_to_error(v));
        }
        Ok(OrientedMatroid { labels, covectors })
    }

    /// Builds from one signed vector per circuit (± pairs implied). The
    /// supports must form the circuit set of a matroid; the cocircuits are
    /// found by brute force as the minimal-support nonzero vectors
    /// sign-orthogonal to every signed circuit, and the covectors are
    /// their composition closure. Fails if the data is not an orientation.
    pub fn from_signed_circuits(
        labels: Vec<String>,
        circuits: &SignedCircuitSet,
    ) -> Result<Self, OrientedError> {
        let n = labels.len();
        if n > MAX_OM_GROUND {
            return Err(OrientedError::GroundTooLarge(n));
        }
        let supports: Vec<u32> = circuits.circuits.iter().map(|c| c.support()).collect();
        let underlying = Matroid::from_circuits(labels.clone(), &supports)
            .map_err(|_| OrientedError::BadCircuitSupports)?;
        let om = from_signed_circuits_unchecked(labels, circuits)?;
        // Completeness: the reconstructed oriented matroid must induce the
        // same underlying matroid and recover the input signs.
        if om.underlying_matroid() != underlying || &om.signed_circuits() != circuits {
            return Err(OrientedError::CircuitSignMismatch);
        }
        Ok(om)
    }

    /// Oriented matroid of the hyperplane arrangement whose normals are
    /// the columns of an exact rational matrix.
    pub fn from_matrix(
        labels: Vec<String>,
        matrix: &[Vec<BigRational>],
    ) -> Result<Self, OrientedError> {
        let n = labels.len();
        if n > MAX_OM_GROUND {
            return Err(OrientedError::GroundTooLarge(n));
        }
        for row in matrix {
            if row.len() != n {
                return Err(OrientedError::RaggedMatrix);
            }
        }
        // Work with a row basis; a change of basis scales all maximal
        // minors by one common factor, which cannot change the covector
        // set.
        let rows = independent_rows(matrix);
        let r = rows.len();
        if r == 0 {
            // Zero matrix: every element is a loop.
            return OrientedMatroid::from_covectors(labels, [SignVector::zero(n)]);
        }
        let mut cocircuits: BTreeSet<SignVector> = BTreeSet::new();
        for subset in subsets_of_size(n, r - 1) {
            let cols: Vec<usize> = (0..n).filter(|&c| subset >> c & 1 == 1).collect();
            let mut plus = 0u32;
            let mut minus = 0u32;
            for e in 0..n {
                if subset >> e & 1 == 1 {
                    continue;
                }
                let square: Vec<Vec<BigRational>> = rows
                    .iter()
                    .map(|row| {
                        let mut out: Vec<BigRational> =
                            cols.iter().map(|&c| row[c].clone()).collect();
                        out.push(row[e].clone());
                        out
                    })
                    .collect();
                match rational_sign(&determinant(&square)) {
                    1 => plus |= 1 << e,
                    -1 => minus |= 1 << e,
                    _ => {}
                }
            }
            if plus | minus != 0 {
                let x = SignVector::new(plus, minus, n);
                cocircuits.insert(x);
                cocircuits.insert(x.negate());
            }
        }
        let covectors = composition_closure(n, &cocircuits);
        if let Some(v) = check_axioms(n, &covectors).first() {
            return Err(violation_to_error(v));
        }
        Ok(OrientedMatroid { labels, covectors })
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn covectors(&self) -> &BTreeSet<SignVector> {
        &self.covectors
    }

    /// Maximal covectors in the conformal order.
    pub fn topes(&self) -> Vec<SignVector> {
        self.covectors
            .iter()
            .filter(|x| self.covectors.iter().all(|y| x.compose(y) == **x))
            .copied()
            .collect()
    }

    /// Coordinates vanishing on every covector.
    pub fn loops(&self) -> u32 {
        let mut support = 0u32;
        for c in &self.covectors {
            support |= c.support();
        }
        !support & low_mask(self.n())
    }

    /// The underlying matroid: flats are the complements of covector
    /// supports and ranks come from the lattice height.
    pub fn underlying_matroid(&self) -> Matroid {
        let n = self.n();
        let full = low_mask(n);
        let mut flats: Vec<u32> = self.covectors.iter().map(|x| !x.support() & full).collect();
        flats.sort_unstable();
        flats.dedup();
        flats.sort_by_key(|f| f.count_ones());
        let mut height: std::collections::BTreeMap<u32, u8> = std::collections::BTreeMap::new();
        for &f in &flats {
            let h = flats
                .iter()
                .filter(|&&g| g & f == g && g != f)
                .map(|g| height[g] + 1)
                .max()
                .unwrap_or(0);
            height.insert(f, h);
        }
        // Rank of an arbitrary subset: height of the smallest flat above it.
        let mut rank = vec![0u8; 1 << n];
        for (a, slot) in rank.iter_mut().enumerate() {
            let a = a as u32;
            *slot = flats
                .iter()
                .filter(|&&f| f & a == a)
                .map(|f| height[f])
                .min()
                .expect("the full set is always a flat");
        }
        Matroid::from_rank_table(self.labels.clone(), rank)
            .expect("flats of an oriented matroid define a matroid")
    }

    /// The topes adjacent to a flag of flats: truncation along every flat
    /// of the chain must stay a covector.
    pub fn adjacent_topes(&self, flags: &[u32]) -> Result<Vec<SignVector>, OrientedError> {
        let underlying = self.underlying_matroid();
        for &f in flags {
            if !underlying.is_flat(f) {
                return Err(OrientedError::NotAFlat(f));
            }
        }
        Ok(self
            .topes()
            .into_iter()
            .filter(|t| {
                flags
                    .iter()
                    .all(|&f| self.covectors.contains(&t.zero_out(f)))
            })
            .collect())
    }

    /// Signed circuits: minimal-support nonzero sign vectors orthogonal to
    /// every covector.
    pub fn signed_circuits(&self) -> SignedCircuitSet {
        let n = self.n();
        let orthogonal: Vec<SignVector> = all_sign_vectors(n)
            .into_iter()
            .filter(|x| !x.is_zero() && self.covectors.iter().all(|y| sign_orthogonal(x, y)))
            .collect();
        let minimal: Vec<SignVector> = orthogonal
            .iter()
            .filter(|x| {
                !orthogonal
                    .iter()
                    .any(|y| y.support() != x.support() && y.support() & x.support() == y.support())
            })
            .copied()
            .collect();
        SignedCircuitSet::normalize(n, &minimal)
    }

    /// Reorientation along a subset: flips the signs of every covector.
    pub fn reorient(&self, subset: u32) -> OrientedMatroid {
        OrientedMatroid {
            labels: self.labels.clone(),
            covectors: self.covectors.iter().map(|x| x.reflect(subset)).collect(),
        }
    }

    /// Minor: covectors of a deletion are the projections of all
    /// covectors; covectors of a contraction are the projections of the
    /// covectors vanishing on the contracted set.
    pub fn minor(&self, delete: u32, contract: u32) -> Result<OrientedMatroid, OrientedError> {
        if delete & contract != 0 {
            return Err(MatroidError::OverlappingMinorSets.into());
        }
        let drop = delete | contract;
        let labels: Vec<String> = (0..self.n())
            .filter(|&i| drop >> i & 1 == 0)
            .map(|i| self.labels[i].clone())
            .collect();
        let covectors: BTreeSet<SignVector> = self
            .covectors
            .iter()
            .filter(|x| x.support() & contract == 0)
            .map(|x| x.delete_coords(drop))
            .collect();
        Ok(OrientedMatroid { labels, covectors })
    }
}

/// Composition closure of a seed set together with zero.
pub fn composition_closure(size: usize, seed: &BTreeSet<SignVector>) -> BTreeSet<SignVector> {
    let mut out: BTreeSet<SignVector> = seed.clone();
    out.insert(SignVector::zero(size));
    loop {
        let mut fresh: Vec<SignVector> = Vec::new();
        for x in &out {
            for y in &out {
                let c = x.compose(y);
                if !out.contains(&c) {
                    fresh.push(c);
                }
            }
        }
        if fresh.is_empty() {
            return out;
        }
        out.extend(fresh);
    }
}

/// Sign orthogonality: the supports are disjoint, or the sign products
/// take both values on the common support.
pub fn sign_orthogonal(x: &SignVector, y: &SignVector) -> bool {
    let agree = x.plus() & y.plus() | x.minus() & y.minus();
    let disagree = x.plus() & y.minus() | x.minus() & y.plus();
    (agree == 0) == (disagree == 0)
}

/// All 3^n sign vectors on n coordinates.
pub fn all_sign_vectors(n: usize) -> Vec<SignVector> {
    let mut out = vec![SignVector::zero(n)];
    for i in 0..n {
        let mut next = Vec::with_capacity(out.len() * 3);
        for v in &out {
            next.push(*v);
            next.push(SignVector::new(v.plus() | 1 << i, v.minus(), n));
            next.push(SignVector::new(v.plus(), v.minus() | 1 << i, n));
        }
        out = next;
    }
    out
}

/// Covector reconstruction from signed circuits without the completeness
/// checks; shared by the public constructor and the orientation counter.
pub(crate) fn from_signed_circuits_unchecked(
    labels: Vec<String>,
    circuits: &SignedCircuitSet,
) -> Result<OrientedMatroid, OrientedError> {
    let n = labels.len();
    let signed: Vec<SignVector> = circuits.with_negatives();
    let orthogonal: Vec<SignVector> = all_sign_vectors(n)
        .into_iter()
        .filter(|x| !x.is_zero() && signed.iter().all(|c| sign_orthogonal(x, c)))
        .collect();
    let cocircuits: BTreeSet<SignVector> = orthogonal
        .iter()
        .filter(|x| {
            !orthogonal
                .iter()
                .any(|y| y.support() != x.support() && y.support() & x.support() == y.support())
        })
        .copied()
        .collect();
    let covectors = composition_closure(n, &cocircuits);
    if let Some(v) = check_axioms(n, &covectors).first() {
        return Err(violation_to_error(v));
    }
    Ok(OrientedMatroid { labels, covectors })
}

fn violation_to_error(v: &AxiomViolation) -> OrientedError {
    match v {
        AxiomViolation::MissingZero => OrientedError::Axiom {
            axiom: "zero covector",
            detail: "the zero sign vector is missing".into(),
        },
        AxiomViolation::NotSymmetric { witness } => OrientedError::Axiom {
            axiom: "symmetry",
            detail: format!("negative of {witness} is missing"),
        },
        AxiomViolation::NotComposable { x, y } => OrientedError::Axiom {
            axiom: "composition",
            detail: format!("{x} o {y} is missing"),
        },
        AxiomViolation::NoElimination { x, y, at } => OrientedError::Axiom {
            axiom: "elimination",
            detail: format!("no eliminator for {x}, {y} at coordinate {at}"),
        },
    }
}

fn independent_rows(matrix: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    let mut kept: Vec<Vec<BigRational>> = Vec::new();
    let mut echelon: Vec<Vec<BigRational>> = Vec::new();
    for row in matrix {
        let mut work = row.clone();
        for e in &echelon {
            let pivot = e.iter().position(|x| !x.is_zero()).unwrap();
            if !work[pivot].is_zero() {
                let factor = &work[pivot] / &e[pivot];
                for (w, ev) in work.iter_mut().zip(e.iter()) {
                    let sub = &factor * ev;
                    *w = &*w - sub;
                }
            }
        }
        if work.iter().any(|x| !x.is_zero()) {
            echelon.push(work);
            kept.push(row.clone());
        }
    }
    kept
}

fn subsets_of_size(n: usize, k: usize) -> Vec<u32> {
    (0..1u32 << n)
        .filter(|s| s.count_ones() as usize == k)
        .collect()
}
