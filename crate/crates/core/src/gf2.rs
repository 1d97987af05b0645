//! Exact linear and affine algebra over Z/2 on coordinates indexed by a
//! finite ground set.
//!
//! Vectors over Z/2 are bitmasks in a machine word (ground sets are capped
//! at 16 elements), linear subspaces are kept in reduced row echelon form
//! and affine subspaces carry a pivot-reduced basepoint, so equality of
//! subspaces is structural equality of the representations. On top of the
//! elimination routines the module provides the two covering predicates
//! evaluated around codimension-one faces of a fan: even covers and
//! necklaces of lines.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Hard cap on the ground-set size; everything fits in a `u32` word.
pub const MAX_GROUND: usize = 16;

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum Gf2Error {
    #[error("ground size mismatch: {left} vs {right}")]
    GroundSizeMismatch { left: usize, right: usize },
    #[error("ground set of size {0} exceeds the supported maximum {MAX_GROUND}")]
    GroundTooLarge(usize),
    #[error("bit {bit} out of range for ground size {size}")]
    BitOutOfRange { bit: usize, size: usize },
    #[error("necklace check: tangent spaces of the {count} input spaces do not share a codimension-one subspace")]
    NoCommonHyperplane { count: usize },
    #[error("necklace check: input spaces must all have the same dimension")]
    MixedDimensions,
    #[error("cannot parse {0:?} as a 0/1 vector")]
    ParseBitVector(String),
    #[error("point set of size {got} is not an affine subspace (expected a power of two matching its span)")]
    NotAffine { got: usize },
    #[error("empty input")]
    Empty,
}

/// A vector in Z/2^E for a ground set E of at most [`MAX_GROUND`] elements.
///
/// Bit `i` of `bits` is the coordinate of the `i`-th ground element; only
/// the low `size` bits may be set.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitVector {
    bits: u32,
    size: u8,
}

impl BitVector {
    pub fn zero(size: usize) -> Self {
        assert!(size <= MAX_GROUND);
        BitVector {
            bits: 0,
            size: size as u8,
        }
    }

    /// All-ones vector over the given ground set.
    pub fn ones(size: usize) -> Self {
        assert!(size <= MAX_GROUND);
        BitVector {
            bits: low_mask(size),
            size: size as u8,
        }
    }

    pub fn unit(bit: usize, size: usize) -> Self {
        assert!(bit < size && size <= MAX_GROUND);
        BitVector {
            bits: 1 << bit,
            size: size as u8,
        }
    }

    pub fn from_bits(bits: u32, size: usize) -> Result<Self, Gf2Error> {
        if size > MAX_GROUND {
            return Err(Gf2Error::GroundTooLarge(size));
        }
        if bits & !low_mask(size) != 0 {
            return Err(Gf2Error::BitOutOfRange {
                bit: (31 - bits.leading_zeros()) as usize,
                size,
            });
        }
        Ok(BitVector {
            bits,
            size: size as u8,
        })
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn size(&self) -> usize {
        self.size as usize
    }

    pub fn get(&self, bit: usize) -> bool {
        assert!(bit < self.size());
        self.bits >> bit & 1 == 1
    }

    pub fn is_zero(&self) -> bool {
        self.bits == 0
    }

    pub fn weight(&self) -> usize {
        self.bits.count_ones() as usize
    }

    /// Sum in Z/2^E, i.e. bitwise xor. Both operands must share a ground set.
    pub fn add(&self, other: &BitVector) -> BitVector {
        assert_eq!(self.size, other.size, "ground size mismatch");
        BitVector {
            bits: self.bits ^ other.bits,
            size: self.size,
        }
    }

    /// Lowest set coordinate, if any.
    pub fn pivot(&self) -> Option<usize> {
        if self.bits == 0 {
            None
        } else {
            Some(self.bits.trailing_zeros() as usize)
        }
    }

    /// Deletes the coordinates listed in `drop` (a bitmask) and compresses
    /// the remaining ones, preserving their order.
    pub fn delete_coords(&self, drop: u32) -> BitVector {
        let keep = !drop & low_mask(self.size());
        BitVector {
            bits: gather_bits(self.bits, keep),
            size: keep.count_ones() as u8,
        }
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector({self})")
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.size() {
            write!(f, "{}", if self.get(i) { '1' } else { '0' })?;
        }
        Ok(())
    }
}

impl FromStr for BitVector {
    type Err = Gf2Error;

    fn from_str(s: &str) -> Result<Self, Gf2Error> {
        if s.len() > MAX_GROUND {
            return Err(Gf2Error::GroundTooLarge(s.len()));
        }
        let mut bits = 0u32;
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' => bits |= 1 << i,
                _ => return Err(Gf2Error::ParseBitVector(s.to_string())),
            }
        }
        Ok(BitVector {
            bits,
            size: s.len() as u8,
        })
    }
}

/// Mask with the low `size` bits set.
pub fn low_mask(size: usize) -> u32 {
    if size == 0 {
        0
    } else {
        u32::MAX >> (32 - size)
    }
}

/// Extracts the bits of `value` at positions in `keep` and packs them into
/// the low bits, preserving order.
pub fn gather_bits(value: u32, keep: u32) -> u32 {
    let mut out = 0u32;
    let mut out_pos = 0;
    let mut m = keep;
    while m != 0 {
        let pos = m.trailing_zeros();
        if value >> pos & 1 == 1 {
            out |= 1 << out_pos;
        }
        out_pos += 1;
        m &= m - 1;
    }
    out
}

/// Inverse of [`gather_bits`]: spreads the low bits of `value` onto the
/// positions of `keep`, in order.
pub fn scatter_bits(value: u32, keep: u32) -> u32 {
    let mut out = 0u32;
    let mut in_pos = 0;
    let mut m = keep;
    while m != 0 {
        let pos = m.trailing_zeros();
        if value >> in_pos & 1 == 1 {
            out |= 1 << pos;
        }
        in_pos += 1;
        m &= m - 1;
    }
    out
}

/// A linear subspace of Z/2^E in reduced row echelon form.
///
/// Rows have strictly increasing pivot positions (pivot = lowest set bit)
/// and every pivot column is zero in all other rows, so two subspaces are
/// equal as point sets iff their representations are equal.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LinearSubspaceGF2 {
    size: u8,
    rows: Vec<BitVector>,
}

impl LinearSubspaceGF2 {
    pub fn zero(size: usize) -> Self {
        assert!(size <= MAX_GROUND);
        LinearSubspaceGF2 {
            size: size as u8,
            rows: Vec::new(),
        }
    }

    /// Row-reduces the generators into canonical form.
    pub fn span(size: usize, generators: &[BitVector]) -> Result<Self, Gf2Error> {
        if size > MAX_GROUND {
            return Err(Gf2Error::GroundTooLarge(size));
        }
        let mut space = LinearSubspaceGF2::zero(size);
        for g in generators {
            if g.size() != size {
                return Err(Gf2Error::GroundSizeMismatch {
                    left: size,
                    right: g.size(),
                });
            }
            space.insert(*g);
        }
        Ok(space)
    }

    /// The whole ambient space.
    pub fn full(size: usize) -> Self {
        let gens: Vec<BitVector> = (0..size).map(|i| BitVector::unit(i, size)).collect();
        LinearSubspaceGF2::span(size, &gens).unwrap()
    }

    fn insert(&mut self, v: BitVector) {
        let v = self.reduce(&v);
        if v.is_zero() {
            return;
        }
        let p = v.pivot().unwrap();
        // Clear the new pivot from existing rows, then place the row.
        for row in &mut self.rows {
            if row.get(p) {
                *row = row.add(&v);
            }
        }
        let idx = self
            .rows
            .iter()
            .position(|r| r.pivot().unwrap() > p)
            .unwrap_or(self.rows.len());
        self.rows.insert(idx, v);
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient_size(&self) -> usize {
        self.size as usize
    }

    pub fn basis(&self) -> &[BitVector] {
        &self.rows
    }

    /// Canonical coset representative of `v` modulo this subspace: clears
    /// every pivot coordinate. This map is linear with kernel the subspace.
    pub fn reduce(&self, v: &BitVector) -> BitVector {
        assert_eq!(v.size(), self.ambient_size(), "ground size mismatch");
        let mut out = *v;
        for row in &self.rows {
            if out.get(row.pivot().unwrap()) {
                out = out.add(row);
            }
        }
        out
    }

    pub fn contains(&self, v: &BitVector) -> bool {
        self.reduce(v).is_zero()
    }

    /// Bitmask of the pivot coordinates.
    pub fn pivot_mask(&self) -> u32 {
        self.rows.iter().map(|r| 1 << r.pivot().unwrap()).sum()
    }

    /// All 2^dim points.
    pub fn points(&self) -> Vec<BitVector> {
        let d = self.dim();
        let mut out = Vec::with_capacity(1 << d);
        for sel in 0u32..1 << d {
            let mut v = BitVector::zero(self.ambient_size());
            for (i, row) in self.rows.iter().enumerate() {
                if sel >> i & 1 == 1 {
                    v = v.add(row);
                }
            }
            out.push(v);
        }
        out
    }

    pub fn sum(&self, other: &LinearSubspaceGF2) -> Result<LinearSubspaceGF2, Gf2Error> {
        if self.size != other.size {
            return Err(Gf2Error::GroundSizeMismatch {
                left: self.ambient_size(),
                right: other.ambient_size(),
            });
        }
        let mut out = self.clone();
        for row in &other.rows {
            out.insert(*row);
        }
        Ok(out)
    }

    pub fn intersection(&self, other: &LinearSubspaceGF2) -> Result<LinearSubspaceGF2, Gf2Error> {
        if self.size != other.size {
            return Err(Gf2Error::GroundSizeMismatch {
                left: self.ambient_size(),
                right: other.ambient_size(),
            });
        }
        // Dimensions in this crate stay small, so scanning the smaller
        // subspace beats bookkeeping a Zassenhaus double matrix.
        let (small, big) = if self.dim() <= other.dim() {
            (self, other)
        } else {
            (other, self)
        };
        let gens: Vec<BitVector> = small
            .points()
            .into_iter()
            .filter(|p| big.contains(p))
            .collect();
        LinearSubspaceGF2::span(self.ambient_size(), &gens)
    }
}

impl fmt::Debug for LinearSubspaceGF2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "span{{")?;
        for (i, r) in self.rows.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{r}")?;
        }
        write!(f, "}}")
    }
}

/// An affine subspace of Z/2^E: a basepoint plus a tangent space.
///
/// The basepoint is the unique coset representative whose coordinates at
/// the tangent pivots are all zero, so structural equality is equality of
/// point sets.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct AffineSubspaceGF2 {
    base: BitVector,
    tangent: LinearSubspaceGF2,
}

impl AffineSubspaceGF2 {
    /// Canonical form of `basepoint + span(generators)`.
    pub fn canonicalize(basepoint: BitVector, generators: &[BitVector]) -> Result<Self, Gf2Error> {
        let tangent = LinearSubspaceGF2::span(basepoint.size(), generators)?;
        let base = tangent.reduce(&basepoint);
        Ok(AffineSubspaceGF2 { base, tangent })
    }

    pub fn from_tangent(
        basepoint: BitVector,
        tangent: LinearSubspaceGF2,
    ) -> Result<Self, Gf2Error> {
        if basepoint.size() != tangent.ambient_size() {
            return Err(Gf2Error::GroundSizeMismatch {
                left: basepoint.size(),
                right: tangent.ambient_size(),
            });
        }
        let base = tangent.reduce(&basepoint);
        Ok(AffineSubspaceGF2 { base, tangent })
    }

    /// Builds the affine subspace spanned by a set of points and checks
    /// that the set is exactly that subspace.
    pub fn from_points(points: &[BitVector]) -> Result<Self, Gf2Error> {
        let first = *points.first().ok_or(Gf2Error::Empty)?;
        let gens: Vec<BitVector> = points[1..].iter().map(|p| p.add(&first)).collect();
        let space = AffineSubspaceGF2::canonicalize(first, &gens)?;
        let mut distinct: Vec<u32> = points.iter().map(|p| p.bits()).collect();
        distinct.sort_unstable();
        distinct.dedup();
        if distinct.len() != 1 << space.dim() {
            return Err(Gf2Error::NotAffine {
                got: distinct.len(),
            });
        }
        Ok(space)
    }

    pub fn base(&self) -> BitVector {
        self.base
    }

    pub fn tangent(&self) -> &LinearSubspaceGF2 {
        &self.tangent
    }

    pub fn dim(&self) -> usize {
        self.tangent.dim()
    }

    pub fn ambient_size(&self) -> usize {
        self.base.size()
    }

    pub fn contains(&self, v: &BitVector) -> bool {
        self.tangent.contains(&v.add(&self.base))
    }

    /// Membership test with an explicit ground-size check.
    pub fn member(&self, v: &BitVector) -> Result<bool, Gf2Error> {
        if v.size() != self.ambient_size() {
            return Err(Gf2Error::GroundSizeMismatch {
                left: self.ambient_size(),
                right: v.size(),
            });
        }
        Ok(self.contains(v))
    }

    pub fn points(&self) -> Vec<BitVector> {
        self.tangent
            .points()
            .into_iter()
            .map(|p| p.add(&self.base))
            .collect()
    }

    pub fn translate(&self, by: &BitVector) -> AffineSubspaceGF2 {
        AffineSubspaceGF2 {
            base: self.tangent.reduce(&self.base.add(by)),
            tangent: self.tangent.clone(),
        }
    }

    /// Intersection as affine subspaces; `None` when disjoint.
    pub fn intersect(
        &self,
        other: &AffineSubspaceGF2,
    ) -> Result<Option<AffineSubspaceGF2>, Gf2Error> {
        if self.ambient_size() != other.ambient_size() {
            return Err(Gf2Error::GroundSizeMismatch {
                left: self.ambient_size(),
                right: other.ambient_size(),
            });
        }
        // A common point a + u (u in T_A) exists iff a + b is congruent to
        // some u of T_A modulo T_B; solve for u by tracking which T_A
        // generators are used.
        let diff = self.base.add(&other.base);
        let target = other.tangent.reduce(&diff);
        let rows: Vec<(BitVector, BitVector)> = self
            .tangent
            .basis()
            .iter()
            .map(|t| (other.tangent.reduce(t), *t))
            .collect();
        let Some(u) = solve_in_span(&rows, target) else {
            return Ok(None);
        };
        let point = self.base.add(&u);
        debug_assert!(self.contains(&point) && other.contains(&point));
        let tangent = self.tangent.intersection(&other.tangent)?;
        Ok(Some(AffineSubspaceGF2 {
            base: tangent.reduce(&point),
            tangent,
        }))
    }

    /// Coordinate-deletion image: forgets the coordinates in `drop`.
    pub fn project(&self, drop: u32) -> Result<AffineSubspaceGF2, Gf2Error> {
        if drop & !low_mask(self.ambient_size()) != 0 {
            return Err(Gf2Error::BitOutOfRange {
                bit: (31 - drop.leading_zeros()) as usize,
                size: self.ambient_size(),
            });
        }
        let base = self.base.delete_coords(drop);
        let gens: Vec<BitVector> = self
            .tangent
            .basis()
            .iter()
            .map(|g| g.delete_coords(drop))
            .collect();
        AffineSubspaceGF2::canonicalize(base, &gens)
    }

    /// Canonical image modulo a linear subspace `w` (same ambient set):
    /// every basepoint and generator is replaced by its coset
    /// representative, which identifies the quotient with a complement of
    /// the pivot coordinates.
    pub fn quotient_by(&self, w: &LinearSubspaceGF2) -> AffineSubspaceGF2 {
        let base = w.reduce(&self.base);
        let gens: Vec<BitVector> = self.tangent.basis().iter().map(|g| w.reduce(g)).collect();
        AffineSubspaceGF2::canonicalize(base, &gens).unwrap()
    }
}

impl fmt::Debug for AffineSubspaceGF2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {:?}", self.base, self.tangent)
    }
}

/// Expresses `target` as a sum of the left components of `rows`, returning
/// the corresponding sum of tags, or `None` when out of span.
fn solve_in_span(rows: &[(BitVector, BitVector)], target: BitVector) -> Option<BitVector> {
    // Echelonize the tagged rows; pivots end up pairwise distinct because
    // each row is reduced against all previously kept ones.
    let mut echelon: Vec<(BitVector, BitVector)> = Vec::new();
    for &(row, row_tag) in rows {
        let mut v = row;
        let mut tag = row_tag;
        for (e, et) in &echelon {
            if v.get(e.pivot().unwrap()) {
                v = v.add(e);
                tag = tag.add(et);
            }
        }
        if !v.is_zero() {
            echelon.push((v, tag));
            echelon.sort_by_key(|(r, _)| r.pivot().unwrap());
        }
    }
    let mut r = target;
    let mut tag = BitVector::zero(target.size());
    for (e, et) in &echelon {
        if r.get(e.pivot().unwrap()) {
            r = r.add(e);
            tag = tag.add(et);
        }
    }
    if r.is_zero() {
        Some(tag)
    } else {
        None
    }
}

/// True iff every point of the union lies in an even number of the spaces.
pub fn even_cover_check(spaces: &[AffineSubspaceGF2]) -> Result<bool, Gf2Error> {
    Ok(odd_cover_witness(spaces)?.is_none())
}

/// First point of the union covered an odd number of times, if any.
pub fn odd_cover_witness(spaces: &[AffineSubspaceGF2]) -> Result<Option<BitVector>, Gf2Error> {
    let size = common_size(spaces)?;
    let mut counts: std::collections::BTreeMap<u32, usize> = std::collections::BTreeMap::new();
    for s in spaces {
        for p in s.points() {
            *counts.entry(p.bits()).or_insert(0) += 1;
        }
    }
    for (bits, count) in counts {
        if count % 2 == 1 {
            return Ok(Some(BitVector::from_bits(bits, size)?));
        }
    }
    Ok(None)
}

fn common_size(spaces: &[AffineSubspaceGF2]) -> Result<usize, Gf2Error> {
    let first = spaces.first().ok_or(Gf2Error::Empty)?;
    let size = first.ambient_size();
    for s in spaces {
        if s.ambient_size() != size {
            return Err(Gf2Error::GroundSizeMismatch {
                left: size,
                right: s.ambient_size(),
            });
        }
    }
    Ok(size)
}

/// Decides whether the spaces form a necklace arrangement and, if so,
/// returns the cyclic order of the inputs (as indices).
///
/// Two spaces form a necklace exactly when they are equal. For three or
/// more, the tangents must share a codimension-one subspace; the spaces are
/// quotiented to lines and the intersection complex of the lines must be a
/// single cycle through all of them. Parallel arrangements of three or more
/// spaces are never necklaces.
pub fn necklace_check(spaces: &[AffineSubspaceGF2]) -> Result<Option<Vec<usize>>, Gf2Error> {
    common_size(spaces)?;
    let k = spaces.len();
    if k == 1 {
        return Ok(None);
    }
    if k == 2 {
        return Ok(if spaces[0] == spaces[1] {
            Some(vec![0, 1])
        } else {
            None
        });
    }
    let d = spaces[0].dim();
    if spaces.iter().any(|s| s.dim() != d) {
        return Err(Gf2Error::MixedDimensions);
    }
    let lines: Vec<AffineSubspaceGF2> = if d == 1 {
        spaces.to_vec()
    } else {
        let mut w = spaces[0].tangent().clone();
        for s in &spaces[1..] {
            w = w.intersection(s.tangent())?;
        }
        if w.dim() == d {
            // All parallel; only a pair of equal spaces qualifies.
            return Ok(None);
        }
        if w.dim() != d - 1 {
            return Err(Gf2Error::NoCommonHyperplane { count: k });
        }
        spaces.iter().map(|s| s.quotient_by(&w)).collect()
    };
    necklace_of_lines(&lines)
}

/// Cycle extraction on the intersection complex of a family of lines.
fn necklace_of_lines(lines: &[AffineSubspaceGF2]) -> Result<Option<Vec<usize>>, Gf2Error> {
    let k = lines.len();
    let mut incidence: std::collections::BTreeMap<u32, Vec<usize>> =
        std::collections::BTreeMap::new();
    for (i, line) in lines.iter().enumerate() {
        if line.dim() != 1 {
            return Err(Gf2Error::MixedDimensions);
        }
        for p in line.points() {
            incidence.entry(p.bits()).or_default().push(i);
        }
    }
    // Each intersection point is an edge of the complex; a point on three
    // or more lines creates a higher simplex, which is never a cycle graph.
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for members in incidence.values() {
        match members.len() {
            1 => return Ok(None), // dangling endpoint: some vertex has degree < 2
            2 => edges.push((members[0], members[1])),
            _ => return Ok(None),
        }
    }
    if edges.len() != k {
        return Ok(None);
    }
    let mut adjacency: Vec<Vec<usize>> = vec![Vec::new(); k];
    for (e, &(a, b)) in edges.iter().enumerate() {
        adjacency[a].push(e);
        adjacency[b].push(e);
    }
    if adjacency.iter().any(|a| a.len() != 2) {
        return Ok(None);
    }
    // Walk the 2-regular multigraph from vertex 0; a necklace is a single
    // cycle visiting all k vertices and using all k edges.
    let mut order = vec![0usize];
    let mut used_edge = vec![false; edges.len()];
    let mut current = 0usize;
    while let Some(&e) = adjacency[current].iter().find(|&&e| !used_edge[e]) {
        used_edge[e] = true;
        let (a, b) = edges[e];
        let next = if a == current { b } else { a };
        if next == 0 {
            break;
        }
        order.push(next);
        current = next;
    }
    if order.len() == k && used_edge.iter().all(|&u| u) {
        Ok(Some(order))
    } else {
        Ok(None)
    }
}
