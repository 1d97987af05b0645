//! Matroids with exact rank tables.
//!
//! A matroid is stored as its ordered ground-set labels together with the
//! full table of ranks of all 2^n subsets; every constructor normalizes
//! into that representation and the rank axioms are verified at build time.
//! Subsets of the ground set are bitmasks over the label indices.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::gf2::{low_mask, MAX_GROUND};

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum MatroidError {
    #[error("ground set of size {0} exceeds the supported maximum {MAX_GROUND}")]
    GroundTooLarge(usize),
    #[error("rank axiom {axiom} violated at subsets {:#b} and {:#b}", .witness.0, .witness.1)]
    AxiomViolation {
        axiom: &'static str,
        witness: (u32, u32),
    },
    #[error("rank table has {got} entries, expected {expected}")]
    BadTableLength { got: usize, expected: usize },
    #[error("empty basis list")]
    EmptyBases,
    #[error("bases must be equicardinal")]
    UnequalBases,
    #[error("circuits must form a clutter of nonempty sets")]
    NotAClutter,
    #[error("unknown element label {0:?}")]
    UnknownLabel(String),
    #[error("duplicate element label {0:?}")]
    DuplicateLabel(String),
    #[error("graph edge endpoint {0} out of range for {1} vertices")]
    BadEdge(usize, usize),
    #[error("matrix rows must all have {0} entries")]
    RaggedMatrix(usize),
    #[error("delete and contract sets overlap")]
    OverlappingMinorSets,
    #[error("ground sets do not match")]
    GroundMismatch,
    #[error("subset {0:#b} out of range for ground size {1}")]
    SubsetOutOfRange(u32, usize),
    #[error("operation requires a loopfree matroid; loops {0:#b} present")]
    HasLoops(u32),
    #[error("ground set of size {0} exceeds the cap {1} for this operation")]
    SizeCap(usize, usize),
    #[error("chain entry {0:#b} is not a flat")]
    NotAFlat(u32),
    #[error("chain is not strictly increasing")]
    NotAChain,
}

/// A matroid on an ordered ground set of at most [`MAX_GROUND`] elements.
#[derive(Clone, PartialEq, Eq)]
pub struct Matroid {
    labels: Vec<String>,
    rank: Vec<u8>,
}

/// A flat together with its rank.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Flat {
    pub rank: u8,
    pub elements: u32,
}

/// Integer polynomial, coefficients in ascending degree order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntPoly(pub Vec<i64>);

impl IntPoly {
    pub fn zero() -> Self {
        IntPoly(vec![])
    }

    pub fn eval(&self, t: i64) -> i64 {
        self.0.iter().rev().fold(0, |acc, &c| acc * t + c)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }
}

impl fmt::Debug for Matroid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matroid(n={}, rank={})", self.n(), self.full_rank())
    }
}

impl Matroid {
    // ------------------------------------------------------------------
    // Constructors
    // ------------------------------------------------------------------

    pub fn from_rank_table(labels: Vec<String>, rank: Vec<u8>) -> Result<Self, MatroidError> {
        let n = labels.len();
        if n > MAX_GROUND {
            return Err(MatroidError::GroundTooLarge(n));
        }
        check_labels(&labels)?;
        if rank.len() != 1 << n {
            return Err(MatroidError::BadTableLength {
                got: rank.len(),
                expected: 1 << n,
            });
        }
        let m = Matroid { labels, rank };
        m.verify_axioms()?;
        Ok(m)
    }

    /// Builds from the list of bases; the rank of a subset is the largest
    /// intersection with a basis.
    pub fn from_bases(labels: Vec<String>, bases: &[u32]) -> Result<Self, MatroidError> {
        let n = labels.len();
        if n > MAX_GROUND {
            return Err(MatroidError::GroundTooLarge(n));
        }
        check_labels(&labels)?;
        if bases.is_empty() {
            return Err(MatroidError::EmptyBases);
        }
        let full = low_mask(n);
        let cardinality = bases[0].count_ones();
        for &b in bases {
            if b & !full != 0 {
                return Err(MatroidError::SubsetOutOfRange(b, n));
            }
            if b.count_ones() != cardinality {
                return Err(MatroidError::UnequalBases);
            }
        }
        let mut rank = vec![0u8; 1 << n];
        for a in 0..1u32 << n {
            rank[a as usize] = bases
                .iter()
                .map(|&b| (a & b).count_ones() as u8)
                .max()
                .unwrap();
        }
        let m = Matroid { labels, rank };
        m.verify_axioms()?;
        Ok(m)
    }

    /// Builds from the list of circuits (minimal dependent sets). The input
    /// must be a clutter; failures of the circuit exchange property surface
    /// as rank-axiom violations.
    pub fn from_circuits(labels: Vec<String>, circuits: &[u32]) -> Result<Self, MatroidError> {
        let n = labels.len();
        if n > MAX_GROUND {
            return Err(MatroidError::GroundTooLarge(n));
        }
        check_labels(&labels)?;
        let full = low_mask(n);
        for (i, &c) in circuits.iter().enumerate() {
            if c & !full != 0 {
                return Err(MatroidError::SubsetOutOfRange(c, n));
            }
            if c == 0 {
                return Err(MatroidError::NotAClutter);
            }
            for (j, &d) in circuits.iter().enumerate() {
                if i != j && c & d == c {
                    return Err(MatroidError::NotAClutter);
                }
            }
        }
        // dependent[a]: a contains some circuit; closed upwards.
        let mut dependent = vec![false; 1 << n];
        for &c in circuits {
            dependent[c as usize] = true;
        }
        for bit in 0..n {
            for a in 0..1u32 << n {
                if dependent[a as usize] {
                    dependent[(a | 1 << bit) as usize] = true;
                }
            }
        }
        // Rank by dynamic programming over the subset lattice.
        let mut rank = vec![0u8; 1 << n];
        for a in 1..1u32 << n {
            rank[a as usize] = if !dependent[a as usize] {
                a.count_ones() as u8
            } else {
                let mut best = 0;
                let mut m = a;
                while m != 0 {
                    let i = m.trailing_zeros();
                    best = best.max(rank[(a & !(1 << i)) as usize]);
                    m &= m - 1;
                }
                best
            };
        }
        let m = Matroid { labels, rank };
        m.verify_axioms()?;
        Ok(m)
    }

    /// Graphic matroid: the ground set is the edge list (in order), the
    /// rank of an edge subset is `vertices - components`.
    pub fn from_graph(
        labels: Vec<String>,
        vertices: usize,
        edges: &[(usize, usize)],
    ) -> Result<Self, MatroidError> {
        let n = labels.len();
        if n > MAX_GROUND {
            return Err(MatroidError::GroundTooLarge(n));
        }
        check_labels(&labels)?;
        if edges.len() != n {
            return Err(MatroidError::BadTableLength {
                got: edges.len(),
                expected: n,
            });
        }
        for &(u, v) in edges {
            if u >= vertices || v >= vertices {
                return Err(MatroidError::BadEdge(u.max(v), vertices));
            }
        }
        fn find(parent: &mut [usize], x: usize) -> usize {
            let mut root = x;
            while parent[root] != root {
                root = parent[root];
            }
            let mut cur = x;
            while parent[cur] != root {
                let next = parent[cur];
                parent[cur] = root;
                cur = next;
            }
            root
        }
        let mut rank = vec![0u8; 1 << n];
        for a in 0..1u32 << n {
            let mut parent: Vec<usize> = (0..vertices).collect();
            let mut merged = 0u8;
            for (i, &(u, v)) in edges.iter().enumerate() {
                if a >> i & 1 == 1 {
                    let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
                    if ru != rv {
                        parent[ru] = rv;
                        merged += 1;
                    }
                }
            }
            rank[a as usize] = merged;
        }
        let m = Matroid { labels, rank };
        m.verify_axioms()?;
        Ok(m)
    }

    /// Column matroid of an exact rational matrix.
    pub fn from_matrix(
        labels: Vec<String>,
        matrix: &[Vec<BigRational>],
    ) -> Result<Self, MatroidError> {
        let n = labels.len();
        if n > MAX_GROUND {
            return Err(MatroidError::GroundTooLarge(n));
        }
        check_labels(&labels)?;
        for row in matrix {
            if row.len() != n {
                return Err(MatroidError::RaggedMatrix(n));
            }
        }
        let mut rank = vec![0u8; 1 << n];
        for a in 0..1u32 << n {
            rank[a as usize] = column_rank(matrix, a) as u8;
        }
        let m = Matroid { labels, rank };
        m.verify_axioms()?;
        Ok(m)
    }

    /// Uniform matroid U_{r,n} with labels "1".."n".
    pub fn uniform(r: usize, n: usize) -> Matroid {
        let labels = (1..=n).map(|i| i.to_string()).collect();
        let rank = (0..1u32 << n)
            .map(|a| (a.count_ones() as usize).min(r) as u8)
            .collect();
        Matroid::from_rank_table(labels, rank).unwrap()
    }

    // ------------------------------------------------------------------
    // Basic queries
    // ------------------------------------------------------------------

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label_index(&self, label: &str) -> Result<usize, MatroidError> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| MatroidError::UnknownLabel(label.to_string()))
    }

    pub fn full_set(&self) -> u32 {
        low_mask(self.n())
    }

    pub fn rank(&self, subset: u32) -> usize {
        assert!(subset & !self.full_set() == 0, "subset out of range");
        self.rank[subset as usize] as usize
    }

    pub fn full_rank(&self) -> usize {
        self.rank(self.full_set())
    }

    pub fn rank_table(&self) -> &[u8] {
        &self.rank
    }

    pub fn closure(&self, subset: u32) -> u32 {
        let r = self.rank(subset);
        let mut out = subset;
        for i in 0..self.n() {
            if self.rank(subset | 1 << i) == r {
                out |= 1 << i;
            }
        }
        out
    }

    pub fn is_flat(&self, subset: u32) -> bool {
        self.closure(subset) == subset
    }

    pub fn is_independent(&self, subset: u32) -> bool {
        self.rank(subset) == subset.count_ones() as usize
    }

    pub fn loops(&self) -> u32 {
        self.closure(0)
    }

    pub fn is_loopfree(&self) -> bool {
        self.loops() == 0
    }

    pub fn is_coloop(&self, i: usize) -> bool {
        self.full_rank() > 0 && self.rank(self.full_set() & !(1 << i)) == self.full_rank() - 1
    }

    // ------------------------------------------------------------------
    // Lattice of flats
    // ------------------------------------------------------------------

    /// All flats, sorted by (rank, mask).
    pub fn flats(&self) -> Vec<Flat> {
        let mut out: Vec<Flat> = (0..=self.full_set())
            .filter(|&a| self.is_flat(a))
            .map(|a| Flat {
                elements: a,
                rank: self.rank(a) as u8,
            })
            .collect();
        out.sort();
        out
    }

    pub fn flats_of_rank(&self, r: usize) -> Vec<u32> {
        self.flats()
            .into_iter()
            .filter(|f| f.rank as usize == r)
            .map(|f| f.elements)
            .collect()
    }

    /// Covers of a flat in the lattice of flats: the flats of the next
    /// rank containing it.
    pub fn covers_of(&self, flat: u32) -> Vec<u32> {
        let r = self.rank(flat);
        self.flats()
            .into_iter()
            .filter(|g| g.rank as usize == r + 1 && g.elements & flat == flat)
            .map(|g| g.elements)
            .collect()
    }

    /// Flats strictly between two nested flats.
    pub fn flats_between(&self, lower: u32, upper: u32) -> Vec<u32> {
        self.flats()
            .into_iter()
            .map(|f| f.elements)
            .filter(|&h| h != lower && h != upper && h & lower == lower && h & upper == h)
            .collect()
    }

    // ------------------------------------------------------------------
    // Circuits, minors, sums
    // ------------------------------------------------------------------

    /// The minimal dependent sets.
    pub fn circuits(&self) -> Vec<u32> {
        let mut out = Vec::new();
        'outer: for a in 1..=self.full_set() {
            if self.is_independent(a) {
                continue;
            }
            let mut m = a;
            while m != 0 {
                let i = m.trailing_zeros();
                if !self.is_independent(a & !(1 << i)) {
                    continue 'outer;
                }
                m &= m - 1;
            }
            out.push(a);
        }
        out
    }

    /// Minor by deleting and contracting disjoint subsets.
    pub fn minor(&self, delete: u32, contract: u32) -> Result<Matroid, MatroidError> {
        if delete & contract != 0 {
            return Err(MatroidError::OverlappingMinorSets);
        }
        let full = self.full_set();
        if (delete | contract) & !full != 0 {
            return Err(MatroidError::SubsetOutOfRange(delete | contract, self.n()));
        }
        let keep = full & !(delete | contract);
        let labels: Vec<String> = (0..self.n())
            .filter(|&i| keep >> i & 1 == 1)
            .map(|i| self.labels[i].clone())
            .collect();
        let base = self.rank(contract);
        let m = keep.count_ones() as usize;
        let mut rank = vec![0u8; 1 << m];
        for a in 0..1u32 << m {
            let expanded = crate::gf2::scatter_bits(a, keep);
            rank[a as usize] = (self.rank(expanded | contract) - base) as u8;
        }
        Ok(Matroid { labels, rank })
    }

    pub fn delete(&self, subset: u32) -> Result<Matroid, MatroidError> {
        self.minor(subset, 0)
    }

    pub fn contract(&self, subset: u32) -> Result<Matroid, MatroidError> {
        self.minor(0, subset)
    }

    /// Direct sum; label sets must be disjoint.
    pub fn direct_sum(parts: &[Matroid]) -> Result<Matroid, MatroidError> {
        let mut labels: Vec<String> = Vec::new();
        for p in parts {
            for l in p.labels() {
                if labels.contains(l) {
                    return Err(MatroidError::DuplicateLabel(l.clone()));
                }
                labels.push(l.clone());
            }
        }
        let n = labels.len();
        if n > MAX_GROUND {
            return Err(MatroidError::GroundTooLarge(n));
        }
        let mut rank = vec![0u8; 1 << n];
        for a in 0..1u32 << n {
            let mut total = 0u8;
            let mut offset = 0;
            for p in parts {
                let mask = (a >> offset) & low_mask(p.n());
                total += p.rank(mask) as u8;
                offset += p.n();
            }
            rank[a as usize] = total;
        }
        Ok(Matroid { labels, rank })
    }

    /// The direct sum of the minors `M|F_i / F_{i-1}` along a chain of
    /// flats, with the implicit bottom cl(∅) and top E. The ground set is
    /// E minus the loops, keeping the original labels.
    pub fn chain_minor_sum(&self, chain: &[u32]) -> Result<Matroid, MatroidError> {
        let bottom = self.closure(0);
        let mut steps: Vec<u32> = Vec::with_capacity(chain.len() + 2);
        steps.push(bottom);
        for &f in chain {
            if !self.is_flat(f) {
                return Err(MatroidError::NotAFlat(f));
            }
            steps.push(f);
        }
        steps.push(self.full_set());
        for w in steps.windows(2) {
            if w[0] & w[1] != w[0] {
                return Err(MatroidError::NotAChain);
            }
        }
        let mut parts = Vec::new();
        for w in steps.windows(2) {
            let (lower, upper) = (w[0], w[1]);
            if upper == lower {
                continue;
            }
            // Restriction to `upper` contracted by `lower`.
            parts.push(self.minor(self.full_set() & !upper, lower)?);
        }
        if parts.is_empty() {
            return Ok(Matroid {
                labels: vec![],
                rank: vec![0],
            });
        }
        Matroid::direct_sum(&parts)
    }

    /// True iff every flat of `self` is a flat of `other` (matroid
    /// quotient), on an identical ground set.
    pub fn is_quotient_of(&self, other: &Matroid) -> Result<bool, MatroidError> {
        if self.labels != other.labels {
            return Err(MatroidError::GroundMismatch);
        }
        Ok(self.flats().iter().all(|f| other.is_flat(f.elements)))
    }

    // ------------------------------------------------------------------
    // Characteristic polynomial
    // ------------------------------------------------------------------

    /// Characteristic polynomial by Möbius summation over the lattice of
    /// flats. Matroids with loops get the zero polynomial.
    pub fn characteristic_polynomial(&self) -> IntPoly {
        if !self.is_loopfree() {
            return IntPoly::zero();
        }
        let flats = self.flats();
        let r = self.full_rank();
        let mut mu: BTreeMap<u32, i64> = BTreeMap::new();
        for f in &flats {
            let below: i64 = flats
                .iter()
                .filter(|g| g.elements & f.elements == g.elements && g.elements != f.elements)
                .map(|g| mu[&g.elements])
                .sum();
            mu.insert(f.elements, if f.elements == 0 { 1 } else { -below });
        }
        let mut coeffs = vec![0i64; r + 1];
        for f in &flats {
            coeffs[r - f.rank as usize] += mu[&f.elements];
        }
        IntPoly(coeffs)
    }

    // ------------------------------------------------------------------
    // Axiom verification
    // ------------------------------------------------------------------

    /// Local rank-axiom check, equivalent to the three global axioms:
    /// normalization, unit increase, and local submodularity.
    fn verify_axioms(&self) -> Result<(), MatroidError> {
        let n = self.n();
        if self.rank[0] != 0 {
            return Err(MatroidError::AxiomViolation {
                axiom: "rank(empty) = 0",
                witness: (0, 0),
            });
        }
        for a in 0..1u32 << n {
            let ra = self.rank[a as usize];
            for i in 0..n {
                if a >> i & 1 == 1 {
                    continue;
                }
                let rai = self.rank[(a | 1 << i) as usize];
                if rai < ra || rai > ra + 1 {
                    return Err(MatroidError::AxiomViolation {
                        axiom: "unit rank increase",
                        witness: (a, a | 1 << i),
                    });
                }
            }
        }
        for a in 0..1u32 << n {
            let ra = self.rank[a as usize];
            for i in 0..n {
                if a >> i & 1 == 1 || self.rank[(a | 1 << i) as usize] != ra {
                    continue;
                }
                for j in i + 1..n {
                    if a >> j & 1 == 1 || self.rank[(a | 1 << j) as usize] != ra {
                        continue;
                    }
                    if self.rank[(a | 1 << i | 1 << j) as usize] != ra {
                        return Err(MatroidError::AxiomViolation {
                            axiom: "local submodularity",
                            witness: (a | 1 << i, a | 1 << j),
                        });
                    }
                }
            }
        }
        Ok(())
    }
}

fn check_labels(labels: &[String]) -> Result<(), MatroidError> {
    for (i, l) in labels.iter().enumerate() {
        if labels[..i].contains(l) {
            return Err(MatroidError::DuplicateLabel(l.clone()));
        }
    }
    Ok(())
}

/// Rank of the column submatrix selected by `cols`, by exact Gaussian
/// elimination.
fn column_rank(matrix: &[Vec<BigRational>], cols: u32) -> usize {
    let col_idx: Vec<usize> = (0..32).filter(|&i| cols >> i & 1 == 1).collect();
    if col_idx.is_empty() || matrix.is_empty() {
        return 0;
    }
    let mut work: Vec<Vec<BigRational>> = matrix
        .iter()
        .map(|row| col_idx.iter().map(|&c| row[c].clone()).collect())
        .collect();
    let rows = work.len();
    let width = col_idx.len();
    let mut rank = 0;
    for col in 0..width {
        let Some(pivot_row) = (rank..rows).find(|&r| !work[r][col].is_zero()) else {
            continue;
        };
        work.swap(rank, pivot_row);
        let pivot = work[rank].clone();
        for (r, row) in work.iter_mut().enumerate() {
            if r != rank && !row[col].is_zero() {
                let factor = &row[col] / &pivot[col];
                for (w, p) in row[col..width].iter_mut().zip(&pivot[col..width]) {
                    let sub = &factor * p;
                    *w = &*w - sub;
                }
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

/// Parses a rational entry: an integer string or "p/q".
pub fn parse_rational(s: &str) -> Option<BigRational> {
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num.trim().parse().ok()?;
        let d: BigInt = den.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        Some(BigRational::new(n, d))
    } else {
        let n: BigInt = s.trim().parse().ok()?;
        Some(BigRational::from_integer(n))
    }
}

/// Exact determinant of a square rational matrix.
pub fn determinant(m: &[Vec<BigRational>]) -> BigRational {
    let n = m.len();
    let mut work = m.to_vec();
    let mut det = BigRational::from_integer(BigInt::from(1));
    for col in 0..n {
        let Some(pivot_row) = (col..n).find(|&r| !work[r][col].is_zero()) else {
            return BigRational::zero();
        };
        if pivot_row != col {
            work.swap(col, pivot_row);
            det = -det;
        }
        det *= work[col][col].clone();
        let pivot = work[col].clone();
        for row in work.iter_mut().skip(col + 1) {
            if !row[col].is_zero() {
                let factor = &row[col] / &pivot[col];
                for (w, p) in row[col..n].iter_mut().zip(&pivot[col..n]) {
                    let sub = &factor * p;
                    *w = &*w - sub;
                }
            }
        }
    }
    det
}

/// Sign of a rational number as -1, 0, +1.
pub fn rational_sign(x: &BigRational) -> i8 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    pub fn labels(n: usize) -> Vec<String> {
        (1..=n).map(|i| i.to_string()).collect()
    }

    /// K4 with edges in lexicographic order e12, e13, e14, e23, e24, e34.
    pub fn k4() -> Matroid {
        Matroid::from_graph(
            ["e12", "e13", "e14", "e23", "e24", "e34"]
                .iter()
                .map(|s| s.to_string())
                .collect(),
            4,
            &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)],
        )
        .unwrap()
    }

    /// Fano: the seven lines plus their complements are the circuits.
    pub fn fano() -> Matroid {
        let lines: [u32; 7] = [
            0b0000111, // {1,2,3}
            0b0011001, // {1,4,5}
            0b1100001, // {1,6,7}
            0b0101010, // {2,4,6}
            0b1010010, // {2,5,7}
            0b1001100, // {3,4,7}
            0b0110100, // {3,5,6}
        ];
        let mut circuits = lines.to_vec();
        circuits.extend(lines.iter().map(|l| !l & 0b1111111));
        Matroid::from_circuits(labels(7), &circuits).unwrap()
    }

    /// Rank 2 on {1,2,3,4} with 1 parallel to 2 and 3 parallel to 4.
    pub fn parallel_pairs() -> Matroid {
        Matroid::from_circuits(labels(4), &[0b0011, 0b1100]).unwrap()
    }
}
