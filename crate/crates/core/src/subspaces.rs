//! Canonical subsets of `{1..n}` and subspaces of `F_q^n`.
//!
//! A subspace is stored by its reduced row echelon basis. Each row is a
//! packed integer: coefficient `j` occupies bits `[j*w, (j+1)*w)` where
//! `w = ceil(log2 q)`. Over `GF(2)` this is simply column `j` at bit `j`.
//! The pivot of a row is its lowest nonzero column.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt::Debug;
use std::hash::Hash;
use std::sync::{Arc, RwLock};

use smallvec::SmallVec;

use crate::galois::{prime_power, FieldElement, FieldSpec, FieldTables};
use crate::{Error, Result};

pub type Rows = SmallVec<[u64; 6]>;

/// `[n choose k]_q`; `q = 1` gives the binomial coefficient.
pub fn gaussian(n: u32, k: u32, q: u64) -> u128 {
    if k > n {
        return 0;
    }
    // q-Pascal rule [m, j] = [m-1, j-1] + q^j [m-1, j]; every intermediate
    // value is itself a coefficient no larger than the result
    let k = k.min(n - k) as usize;
    let q = q as u128;
    let mut row = vec![0u128; k + 1];
    row[0] = 1;
    for m in 1..=n as usize {
        for j in (1..=k.min(m)).rev() {
            let shifted = q
                .checked_pow(j as u32)
                .and_then(|p| p.checked_mul(row[j]))
                .and_then(|t| t.checked_add(row[j - 1]))
                .expect("gaussian coefficient overflow");
            row[j] = shifted;
        }
    }
    row[k]
}

/// The q-integer `[m]_q = (q^m - 1)/(q - 1)`, and `m` when `q = 1`.
pub fn q_int(m: u32, q: u64) -> i128 {
    gaussian(m, 1, q) as i128
}

/// Common interface of the subset lattice (`q = 1`) and the subspace
/// lattice of `F_q^n`.
pub trait Lattice: Send + Sync {
    type Elem: Clone + Eq + Hash + Ord + Debug + Send + Sync;

    /// 1 for subsets.
    fn q(&self) -> u64;
    fn n(&self) -> usize;
    fn rank_of(&self, x: &Self::Elem) -> usize;
    /// All elements of rank `k`, sorted in canonical order.
    fn enumerate(&self, k: usize) -> Vec<Self::Elem>;
    fn meet_rank(&self, a: &Self::Elem, b: &Self::Elem) -> usize;
    fn contains(&self, big: &Self::Elem, small: &Self::Elem) -> bool;
    /// All rank-`d` elements below `x`.
    fn sub_objects(&self, x: &Self::Elem, d: usize) -> Vec<Self::Elem>;
    /// Elements of the same rank meeting `x` in rank `rank - 1`, each once.
    fn for_each_neighbor(&self, x: &Self::Elem, f: &mut dyn FnMut(Self::Elem));
    fn format(&self, x: &Self::Elem) -> String;
    fn parse(&self, s: &str) -> Result<Self::Elem>;
}

// ---------------------------------------------------------------------------
// Subsets

/// A subset of `{1..n}`, member `i` stored at bit `i - 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Subset {
    n: u8,
    mask: u64,
}

impl Subset {
    pub fn new(n: usize, members: &[u32]) -> Result<Self> {
        if n > 64 {
            return Err(Error::Unsupported(format!("subsets of an {n}-set")));
        }
        let mut mask = 0u64;
        let mut prev = 0;
        for &m in members {
            if m <= prev || m as usize > n {
                return Err(Error::Parse(format!(
                    "members must be strictly increasing within 1..={n}: {members:?}"
                )));
            }
            prev = m;
            mask |= 1 << (m - 1);
        }
        Ok(Subset { n: n as u8, mask })
    }

    pub fn from_mask(n: usize, mask: u64) -> Self {
        debug_assert!(n == 64 || mask >> n == 0);
        Subset { n: n as u8, mask }
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }

    pub fn len(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }

    /// Members in increasing order, 1-based.
    pub fn members(&self) -> impl Iterator<Item = u32> + '_ {
        BitIter(self.mask).map(|b| b + 1)
    }
}

impl Ord for Subset {
    fn cmp(&self, other: &Self) -> Ordering {
        self.n
            .cmp(&other.n)
            .then_with(|| self.members().cmp(other.members()))
    }
}

impl PartialOrd for Subset {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

struct BitIter(u64);

impl Iterator for BitIter {
    type Item = u32;
    fn next(&mut self) -> Option<u32> {
        if self.0 == 0 {
            return None;
        }
        let b = self.0.trailing_zeros();
        self.0 &= self.0 - 1;
        Some(b)
    }
}

/// All `k`-subsets of the bit positions in `universe`, as masks, in
/// lexicographic order of member lists.
fn subsets_of_mask(universe: u64, k: usize) -> Vec<u64> {
    let bits: Vec<u32> = BitIter(universe).collect();
    let mut out = Vec::new();
    if k > bits.len() {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.iter().fold(0u64, |m, &i| m | 1 << bits[i]));
        // advance to the next combination
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] < bits.len() - k + i {
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsetLattice {
    n: usize,
}

impl SubsetLattice {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 || n > 64 {
            return Err(Error::Unsupported(format!("subsets of an {n}-set")));
        }
        Ok(SubsetLattice { n })
    }

    fn full(&self) -> u64 {
        if self.n == 64 {
            u64::MAX
        } else {
            (1u64 << self.n) - 1
        }
    }
}

impl Lattice for SubsetLattice {
    type Elem = Subset;

    fn q(&self) -> u64 {
        1
    }

    fn n(&self) -> usize {
        self.n
    }

    fn rank_of(&self, x: &Subset) -> usize {
        x.len()
    }

    fn enumerate(&self, k: usize) -> Vec<Subset> {
        subsets_of_mask(self.full(), k)
            .into_iter()
            .map(|m| Subset::from_mask(self.n, m))
            .collect()
    }

    fn meet_rank(&self, a: &Subset, b: &Subset) -> usize {
        (a.mask & b.mask).count_ones() as usize
    }

    fn contains(&self, big: &Subset, small: &Subset) -> bool {
        big.mask & small.mask == small.mask
    }

    fn sub_objects(&self, x: &Subset, d: usize) -> Vec<Subset> {
        subsets_of_mask(x.mask, d)
            .into_iter()
            .map(|m| Subset::from_mask(self.n, m))
            .collect()
    }

    fn for_each_neighbor(&self, x: &Subset, f: &mut dyn FnMut(Subset)) {
        let outside = self.full() & !x.mask;
        for i in BitIter(x.mask) {
            for j in BitIter(outside) {
                f(Subset::from_mask(self.n, x.mask ^ (1 << i) ^ (1 << j)));
            }
        }
    }

    fn format(&self, x: &Subset) -> String {
        x.members()
            .map(|m| m.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }

    fn parse(&self, s: &str) -> Result<Subset> {
        let s = s.trim();
        if s.is_empty() {
            return Subset::new(self.n, &[]);
        }
        let members = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<u32>()
                    .map_err(|e| Error::Parse(format!("subset member {t:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Subset::new(self.n, &members)
    }
}

// ---------------------------------------------------------------------------
// Subspaces

/// A subspace of `F_q^n` in reduced row echelon form.
///
/// Equality is equality of subspaces because the form is canonical.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    n: u8,
    width: u8,
    rows: Rows,
}

impl Subspace {
    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[u64] {
        &self.rows
    }

    fn cmp_row(a: u64, b: u64, width: u32) -> Ordering {
        let d = a ^ b;
        if d == 0 {
            return Ordering::Equal;
        }
        let shift = d.trailing_zeros() / width * width;
        let mask = (1u64 << width) - 1;
        ((a >> shift) & mask).cmp(&((b >> shift) & mask))
    }
}

/// Lexicographic on the flattened basis matrix, coefficient indices read
/// row by row from column 0.
impl Ord for Subspace {
    fn cmp(&self, other: &Self) -> Ordering {
        let w = self.width as u32;
        self.n.cmp(&other.n).then_with(|| {
            for (&a, &b) in self.rows.iter().zip(&other.rows) {
                match Subspace::cmp_row(a, b, w) {
                    Ordering::Equal => continue,
                    o => return o,
                }
            }
            self.rows.len().cmp(&other.rows.len())
        })
    }
}

impl PartialOrd for Subspace {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

type CoordCache = RwLock<HashMap<(usize, usize), Arc<Vec<Rows>>>>;

/// The lattice of subspaces of `F_q^n`.
#[derive(Debug)]
pub struct SubspaceLattice {
    n: usize,
    q: u64,
    width: u32,
    field: FieldSpec,
    tables: FieldTables,
    /// RREF matrices of coordinate subspaces, keyed by `(ambient, dim)`.
    coords: CoordCache,
}

impl Clone for SubspaceLattice {
    fn clone(&self) -> Self {
        SubspaceLattice {
            n: self.n,
            q: self.q,
            width: self.width,
            field: self.field.clone(),
            tables: self.tables.clone(),
            coords: RwLock::new(HashMap::new()),
        }
    }
}

impl SubspaceLattice {
    pub fn new(q: u64, n: usize) -> Result<Self> {
        prime_power(q).ok_or(Error::NotPrimePower(q))?;
        let field = FieldSpec::of_order(q)?;
        Self::with_field(field, n)
    }

    /// Subspaces over the given coefficient field.
    pub fn with_field(field: FieldSpec, n: usize) -> Result<Self> {
        let q = field.order() as u64;
        let tables = field.tables()?;
        let width = 64 - (q - 1).leading_zeros();
        if n == 0 || n * width as usize > 64 {
            return Err(Error::Unsupported(format!(
                "F_{q}^{n} does not fit packed 64-bit rows"
            )));
        }
        Ok(SubspaceLattice {
            n,
            q,
            width,
            field,
            tables,
            coords: RwLock::new(HashMap::new()),
        })
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    #[inline]
    fn binary(&self) -> bool {
        self.q == 2
    }

    #[inline]
    fn mask(&self) -> u64 {
        (1u64 << self.width) - 1
    }

    #[inline]
    pub fn coef(&self, v: u64, j: usize) -> u32 {
        ((v >> (j as u32 * self.width)) & self.mask()) as u32
    }

    /// Packs a coefficient vector of length `n`.
    pub fn pack(&self, coords: &[u32]) -> Result<u64> {
        if coords.len() != self.n || coords.iter().any(|&c| c as u64 >= self.q) {
            return Err(Error::Parse(format!(
                "expected {} coordinates below {}",
                self.n, self.q
            )));
        }
        Ok(coords
            .iter()
            .enumerate()
            .fold(0u64, |v, (j, &c)| v | (c as u64) << (j as u32 * self.width)))
    }

    pub fn unpack(&self, v: u64) -> Vec<u32> {
        (0..self.n).map(|j| self.coef(v, j)).collect()
    }

    /// Coordinates of a field element of `GF(q^n)` as a packed vector of
    /// `F_q^n` (polynomial basis). The coefficient field must be prime.
    pub fn vector_of(&self, big: &FieldSpec, e: FieldElement) -> Result<u64> {
        self.check_extension(big)?;
        if self.binary() {
            return Ok(e.index() as u64);
        }
        self.pack(&big.as_vector(e))
    }

    /// Inverse of [`SubspaceLattice::vector_of`].
    pub fn element_of(&self, big: &FieldSpec, v: u64) -> Result<FieldElement> {
        self.check_extension(big)?;
        if self.binary() {
            return big.element(v as u32);
        }
        big.from_vector(&self.unpack(v))
    }

    fn check_extension(&self, big: &FieldSpec) -> Result<()> {
        if self.field.degree() != 1
            || big.characteristic() as u64 != self.q
            || big.degree() as usize != self.n
        {
            return Err(Error::Unsupported(format!(
                "GF({}^{}) is not a degree-{} extension of the prime field GF({})",
                big.characteristic(),
                big.degree(),
                self.n,
                self.q
            )));
        }
        Ok(())
    }

    /// Value of the standard dot product.
    pub fn dot(&self, x: u64, y: u64) -> u32 {
        if self.binary() {
            return (x & y).count_ones() & 1;
        }
        (0..self.n).fold(0, |acc, j| {
            self.tables
                .add(acc, self.tables.mul(self.coef(x, j), self.coef(y, j)))
        })
    }

    pub fn tables(&self) -> &FieldTables {
        &self.tables
    }

    /// `x + c*y`.
    #[inline]
    pub fn axpy(&self, x: u64, c: u32, y: u64) -> u64 {
        if c == 0 {
            return x;
        }
        if self.binary() {
            return x ^ y;
        }
        let mut out = 0u64;
        for j in 0..self.n {
            let s = self.tables.add(self.coef(x, j), self.tables.mul(c, self.coef(y, j)));
            out |= (s as u64) << (j as u32 * self.width);
        }
        out
    }

    #[inline]
    pub fn scale(&self, v: u64, c: u32) -> u64 {
        if self.binary() || c == 1 {
            return if c == 0 { 0 } else { v };
        }
        self.axpy(0, c, v)
    }

    #[inline]
    fn pivot(&self, v: u64) -> usize {
        (v.trailing_zeros() / self.width) as usize
    }

    /// Scales `v` so that its leading coefficient is one.
    pub fn normalize(&self, v: u64) -> u64 {
        if v == 0 || self.binary() {
            return v;
        }
        let lead = self.coef(v, self.pivot(v));
        self.scale(v, self.tables.inv(lead))
    }

    /// Reduces `v` against an RREF basis.
    #[inline]
    pub fn reduce(&self, mut v: u64, basis: &[u64]) -> u64 {
        for &r in basis {
            let c = self.coef(v, self.pivot(r));
            if c != 0 {
                v = self.axpy(v, self.tables.neg(c), r);
            }
        }
        v
    }

    /// Adds `v` to an RREF basis, keeping it reduced. Returns false when
    /// `v` is already in the span.
    pub fn insert(&self, basis: &mut Rows, v: u64) -> bool {
        let v = self.normalize(self.reduce(v, basis));
        if v == 0 {
            return false;
        }
        let pv = self.pivot(v);
        for r in basis.iter_mut() {
            let c = self.coef(*r, pv);
            if c != 0 {
                *r = self.axpy(*r, self.tables.neg(c), v);
            }
        }
        let pos = basis
            .iter()
            .position(|&r| self.pivot(r) > pv)
            .unwrap_or(basis.len());
        basis.insert(pos, v);
        true
    }

    fn make(&self, rows: Rows) -> Subspace {
        Subspace {
            n: self.n as u8,
            width: self.width as u8,
            rows,
        }
    }

    /// Canonical form of the row space of `rows`.
    pub fn rref<I: IntoIterator<Item = u64>>(&self, rows: I) -> Subspace {
        let mut basis = Rows::new();
        for v in rows {
            self.insert(&mut basis, v);
        }
        self.make(basis)
    }

    pub fn zero_subspace(&self) -> Subspace {
        self.make(Rows::new())
    }

    fn check(&self, u: &Subspace) -> Result<()> {
        if u.n as usize != self.n || u.width as u32 != self.width {
            return Err(Error::AmbientMismatch(format!(
                "subspace of F^{} used in F_{}^{}",
                u.n, self.q, self.n
            )));
        }
        Ok(())
    }

    pub fn in_span(&self, v: u64, u: &Subspace) -> bool {
        self.reduce(v, &u.rows) == 0
    }

    pub fn intersection_dim(&self, u: &Subspace, w: &Subspace) -> Result<usize> {
        self.check(u)?;
        self.check(w)?;
        Ok(self.meet_rank(u, w))
    }

    pub fn sum(&self, u: &Subspace, w: &Subspace) -> Result<Subspace> {
        self.check(u)?;
        self.check(w)?;
        Ok(self.rref(u.rows.iter().chain(&w.rows).copied()))
    }

    /// Whether `w` is a subspace of `u`.
    pub fn is_subspace(&self, u: &Subspace, w: &Subspace) -> Result<bool> {
        self.check(u)?;
        self.check(w)?;
        Ok(Lattice::contains(self, u, w))
    }

    /// The 1-subspaces of `u`.
    pub fn projective_points(&self, u: &Subspace) -> Vec<Subspace> {
        self.sub_objects(u, 1)
    }

    /// Every vector of `u` (including zero), by all coefficient combinations.
    pub fn vectors(&self, u: &Subspace) -> Vec<u64> {
        let k = u.dim();
        let total = self.q.pow(k as u32);
        (0..total)
            .map(|mut t| {
                let mut v = 0u64;
                for &r in &u.rows {
                    let c = (t % self.q) as u32;
                    t /= self.q;
                    v = self.axpy(v, c, r);
                }
                v
            })
            .collect()
    }

    /// RREF matrices of all `k`-subspaces of `F_q^m`, generated pivot
    /// pattern by pivot pattern (unsorted).
    fn rref_matrices(&self, m: usize, k: usize) -> Vec<Rows> {
        let mut out = Vec::new();
        let all = if m == 64 { u64::MAX } else { (1u64 << m) - 1 };
        for pivots in subsets_of_mask(all, k) {
            let piv: Vec<u32> = BitIter(pivots).collect();
            // free slots: (row, column) with column > pivot of row, not a pivot
            let mut slots = Vec::new();
            for (i, &p) in piv.iter().enumerate() {
                for c in p + 1..m as u32 {
                    if pivots >> c & 1 == 0 {
                        slots.push((i, c));
                    }
                }
            }
            let total = self.q.pow(slots.len() as u32);
            for mut t in 0..total {
                let mut rows: Rows = piv
                    .iter()
                    .map(|&p| 1u64 << (p * self.width))
                    .collect();
                for &(i, c) in &slots {
                    let v = t % self.q;
                    t /= self.q;
                    rows[i] |= v << (c * self.width);
                }
                out.push(rows);
            }
        }
        out
    }

    fn coordinate_subspaces(&self, m: usize, d: usize) -> Arc<Vec<Rows>> {
        if let Some(v) = self.coords.read().unwrap().get(&(m, d)) {
            return v.clone();
        }
        let v = Arc::new(self.rref_matrices(m, d));
        self.coords
            .write()
            .unwrap()
            .entry((m, d))
            .or_insert(v)
            .clone()
    }

    /// Image of a packed coordinate vector over `basis`.
    #[inline]
    fn combine(&self, coords: u64, basis: &[u64]) -> u64 {
        if self.binary() {
            let mut v = 0;
            for b in BitIter(coords) {
                v ^= basis[b as usize];
            }
            return v;
        }
        let mut v = 0;
        for (i, &r) in basis.iter().enumerate() {
            v = self.axpy(v, self.coef(coords, i), r);
        }
        v
    }

    /// Spreads the low `free.len()` packed coordinates onto the columns `free`.
    #[inline]
    fn deposit(&self, coords: u64, free: &[u32]) -> u64 {
        let mut v = 0;
        for (t, &c) in free.iter().enumerate() {
            let x = (coords >> (t as u32 * self.width)) & self.mask();
            v |= x << (c * self.width);
        }
        v
    }
}

impl Lattice for SubspaceLattice {
    type Elem = Subspace;

    fn q(&self) -> u64 {
        self.q
    }

    fn n(&self) -> usize {
        self.n
    }

    fn rank_of(&self, x: &Subspace) -> usize {
        x.dim()
    }

    fn enumerate(&self, k: usize) -> Vec<Subspace> {
        if k > self.n {
            return Vec::new();
        }
        let mut all: Vec<Subspace> = self
            .rref_matrices(self.n, k)
            .into_iter()
            .map(|r| self.make(r))
            .collect();
        all.sort_unstable();
        all
    }

    fn meet_rank(&self, a: &Subspace, b: &Subspace) -> usize {
        let mut basis = a.rows.clone();
        let mut extra = 0;
        for &v in &b.rows {
            if self.insert(&mut basis, v) {
                extra += 1;
            }
        }
        b.dim() - extra
    }

    fn contains(&self, big: &Subspace, small: &Subspace) -> bool {
        small.rows.iter().all(|&v| self.in_span(v, big))
    }

    fn sub_objects(&self, x: &Subspace, d: usize) -> Vec<Subspace> {
        let k = x.dim();
        if d > k {
            return Vec::new();
        }
        self.coordinate_subspaces(k, d)
            .iter()
            .map(|c| self.rref(c.iter().map(|&r| self.combine(r, &x.rows))))
            .collect()
    }

    fn for_each_neighbor(&self, x: &Subspace, f: &mut dyn FnMut(Subspace)) {
        let k = x.dim();
        if k == 0 || k == self.n {
            return;
        }
        let points = self.coordinate_subspaces(self.n - k + 1, 1);
        for h in self.sub_objects(x, k - 1) {
            let pivots = h.rows.iter().fold(0u64, |m, &r| m | 1 << self.pivot(r));
            let free: SmallVec<[u32; 24]> = (0..self.n as u32)
                .filter(|c| pivots >> c & 1 == 0)
                .collect();
            for p in points.iter() {
                let v = self.deposit(p[0], &free);
                if self.in_span(v, x) {
                    continue;
                }
                let mut rows = h.rows.clone();
                self.insert(&mut rows, v);
                f(self.make(rows));
            }
        }
    }

    fn format(&self, x: &Subspace) -> String {
        x.rows
            .iter()
            .map(|r| format!("{r:x}"))
            .collect::<Vec<_>>()
            .join(":")
    }

    fn parse(&self, s: &str) -> Result<Subspace> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(self.zero_subspace());
        }
        let mut rows = Vec::new();
        for t in s.split(':') {
            let v = u64::from_str_radix(t.trim(), 16)
                .map_err(|e| Error::Parse(format!("row {t:?}: {e}")))?;
            let valid = self.n as u32 * self.width == 64 || v >> (self.n as u32 * self.width) == 0;
            if !valid || (0..self.n).any(|j| self.coef(v, j) as u64 >= self.q) {
                return Err(Error::Parse(format!(
                    "row {t:?} is not a vector of F_{}^{}",
                    self.q, self.n
                )));
            }
            rows.push(v);
        }
        Ok(self.rref(rows))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::galois::FieldSpec;
    use proptest::prelude::*;
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn e(j: u32) -> u64 {
        1 << j
    }

    #[test]
    fn rref_of_standard_vectors() {
        let l = SubspaceLattice::new(2, 6).unwrap();
        let u = l.rref([e(0), e(1)]);
        assert_eq!(u.rows(), &[e(0), e(1)]);
        let w = l.rref([e(0) | e(1), e(1)]);
        assert_eq!(w, u);
        assert_eq!(l.rref([0u64, 0]).dim(), 0);
    }

    #[test]
    fn rref_of_f4_inside_f64() {
        let f = FieldSpec::new(2, 6, None).unwrap();
        let l = SubspaceLattice::new(2, 6).unwrap();
        // over GF(2) the packed row is the field element index
        let a = |e: u64| f.exp(e).index() as u64;
        let u = l.rref([1, a(21)]);
        let w = l.rref([a(21), a(42)]);
        assert_eq!(u.dim(), 2);
        assert_eq!(u, w);
    }

    #[test]
    fn intersection_and_containment() {
        let l = SubspaceLattice::new(2, 6).unwrap();
        let u = l.rref((0..4).map(e));
        let w = l.rref((1..5).map(e));
        assert_eq!(l.intersection_dim(&u, &u).unwrap(), 4);
        assert_eq!(l.intersection_dim(&u, &w).unwrap(), 3);
        assert!(l.is_subspace(&u, &l.rref([e(1) | e(2)])).unwrap());
        assert!(!l.is_subspace(&u, &l.rref([e(4)])).unwrap());
        let other = SubspaceLattice::new(2, 5).unwrap();
        let x = other.rref([e(0)]);
        assert!(matches!(
            l.intersection_dim(&u, &x),
            Err(Error::AmbientMismatch(_))
        ));
    }

    #[test]
    fn containment_matches_point_sets_on_random_4_spaces() {
        let l = SubspaceLattice::new(2, 7).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let u = l.rref((0..4).map(|_| rng.gen_range(0..128u64)));
            let w = l.rref((0..2).map(|_| rng.gen_range(0..128u64)));
            let uv: std::collections::HashSet<u64> = l.vectors(&u).into_iter().collect();
            let by_points = l.vectors(&w).iter().all(|v| uv.contains(v));
            assert_eq!(l.is_subspace(&u, &w).unwrap(), by_points);
        }
    }

    #[test]
    fn enumeration_counts() {
        let l = SubspaceLattice::new(2, 6).unwrap();
        assert_eq!(l.enumerate(3).len(), 1395);
        assert_eq!(l.enumerate(0), vec![l.zero_subspace()]);
        assert_eq!(SubsetLattice::new(16).unwrap().enumerate(6).len(), 8008);
        assert_eq!(gaussian(6, 3, 2), 1395);
        assert_eq!(gaussian(16, 6, 1), 8008);
        assert_eq!(gaussian(7, 7, 3), 1);
        assert_eq!(gaussian(8, 4, 2), 200787);
    }

    #[test]
    fn enumeration_matches_gaussian_everywhere_small() {
        for (q, nmax) in [(2u64, 10usize), (3, 6), (4, 5), (5, 4)] {
            for n in 1..=nmax {
                let l = SubspaceLattice::new(q, n).unwrap();
                for k in 0..=n {
                    if gaussian(n as u32, k as u32, q) > 1_000_000 {
                        continue;
                    }
                    let all = l.enumerate(k);
                    assert_eq!(all.len() as u128, gaussian(n as u32, k as u32, q));
                    assert!(all.windows(2).all(|w| w[0] < w[1]), "q={q} n={n} k={k}");
                }
            }
        }
        for n in 1..=20usize {
            let l = SubsetLattice::new(n).unwrap();
            for k in 0..=n {
                if gaussian(n as u32, k as u32, 1) > 1_000_000 {
                    continue;
                }
                let all = l.enumerate(k);
                assert_eq!(all.len() as u128, gaussian(n as u32, k as u32, 1));
                assert!(all.windows(2).all(|w| w[0] < w[1]));
            }
        }
    }

    #[test]
    fn projective_points_counts() {
        let l = SubspaceLattice::new(2, 6).unwrap();
        let line = l.rref([e(0), e(3)]);
        assert_eq!(l.projective_points(&line).len(), 3);
        let four = l.rref((0..4).map(e));
        assert_eq!(l.projective_points(&four).len(), 15);
    }

    #[test]
    fn projective_points_of_gf4_line_as_binary_plane() {
        // a GF(4)-line spanned by (1,0),(0,1) inside F_4^2, compared with
        // nonzero vectors deduplicated by scalars
        let l = SubspaceLattice::new(4, 3).unwrap();
        let u = l.rref([l.pack(&[1, 0, 0]).unwrap(), l.pack(&[0, 2, 3]).unwrap()]);
        let mut by_scalars: Vec<u64> = l
            .vectors(&u)
            .into_iter()
            .filter(|&v| v != 0)
            .map(|v| l.normalize(v))
            .collect();
        by_scalars.sort_unstable();
        by_scalars.dedup();
        let pts = l.projective_points(&u);
        assert_eq!(pts.len(), 5);
        assert_eq!(by_scalars.len(), 5);
        for p in pts {
            assert!(by_scalars.contains(&p.rows()[0]));
        }
    }

    #[test]
    fn serialization_round_trip() {
        let l = SubspaceLattice::new(3, 5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let rows: Vec<u64> = (0..3)
                .map(|_| l.pack(&(0..5).map(|_| rng.gen_range(0..3)).collect::<Vec<_>>()).unwrap())
                .collect();
            let u = l.rref(rows);
            assert_eq!(l.parse(&l.format(&u)).unwrap(), u);
        }
        let s = SubsetLattice::new(16).unwrap();
        let x = s.parse("1,5,16").unwrap();
        assert_eq!(s.format(&x), "1,5,16");
        assert!(s.parse("3,2").is_err());
        assert!(s.parse("17").is_err());
        assert!(l.parse("zz").is_err());
    }

    #[test]
    fn canonicity_under_shuffles() {
        let l = SubspaceLattice::new(2, 12).unwrap();
        let l3 = SubspaceLattice::new(3, 7).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..1000 {
            let mut gens: Vec<u64> = (0..rng.gen_range(1..7))
                .map(|_| rng.gen_range(0..4096u64))
                .collect();
            let u = l.rref(gens.clone());
            gens.shuffle(&mut rng);
            assert_eq!(l.rref(gens.clone()), u);
            assert_eq!(l.rref(u.rows().iter().copied()), u);

            let mut g3: Vec<u64> = (0..rng.gen_range(1..5))
                .map(|_| {
                    l3.pack(&(0..7).map(|_| rng.gen_range(0..3)).collect::<Vec<_>>())
                        .unwrap()
                })
                .collect();
            let w = l3.rref(g3.clone());
            g3.shuffle(&mut rng);
            // scaling generators does not change the span
            let scaled: Vec<u64> = g3.iter().map(|&v| l3.scale(v, 2)).collect();
            assert_eq!(l3.rref(scaled), w);
        }
    }

    #[test]
    fn neighbor_counts_grassmann() {
        let l = SubspaceLattice::new(2, 8).unwrap();
        let u = l.rref((0..4).map(e));
        let mut seen = std::collections::HashSet::new();
        l.for_each_neighbor(&u, &mut |w| {
            assert_eq!(l.meet_rank(&u, &w), 3);
            assert!(seen.insert(w));
        });
        assert_eq!(seen.len(), 450);
    }

    proptest! {
        #[test]
        fn modular_law(a in proptest::collection::vec(0u64..1024, 1..6),
                       b in proptest::collection::vec(0u64..1024, 1..6)) {
            let l = SubspaceLattice::new(2, 10).unwrap();
            let u = l.rref(a);
            let w = l.rref(b);
            let meet = l.intersection_dim(&u, &w).unwrap();
            let join = l.sum(&u, &w).unwrap().dim();
            prop_assert_eq!(meet + join, u.dim() + w.dim());
        }
    }
}
