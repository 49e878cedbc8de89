//! Finite fields `GF(p^m)` with `p^m <= 2^16`.
//!
//! Elements are dense indices: the residue polynomial `c_0 + c_1 x + ...`
//! is stored as `c_0 + c_1 p + c_2 p^2 + ...`. In characteristic two this
//! is the usual bit packing, addition is XOR and multiplication is a
//! carry-less product followed by reduction.

use std::fmt;
use std::sync::OnceLock;

use crate::{Error, Result};

/// Largest supported field order.
pub const MAX_ORDER: u64 = 1 << 16;

/// Built-in primitive polynomials, coefficients low to high, monic.
///
/// Every entry is re-verified by [`FieldSpec::new`].
const DEFAULT_MODULI: &[(u32, &[u32])] = &[
    (2, &[1, 1]),
    (2, &[1, 1, 1]),
    (2, &[1, 1, 0, 1]),
    (2, &[1, 1, 0, 0, 1]),
    (2, &[1, 0, 1, 0, 0, 1]),
    (2, &[1, 1, 0, 0, 0, 0, 1]),
    (2, &[1, 1, 0, 0, 0, 0, 0, 1]),
    (2, &[1, 0, 1, 1, 1, 0, 0, 0, 1]),
    (2, &[1, 0, 0, 0, 1, 0, 0, 0, 0, 1]),
    (2, &[1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 1]),
    (2, &[1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1]),
    (2, &[1, 1, 0, 0, 1, 0, 1, 0, 0, 0, 0, 0, 1]),
    (2, &[1, 1, 0, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1]),
    (2, &[1, 1, 0, 0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0, 1]),
    (2, &[1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1]),
    (2, &[1, 1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 1]),
    (3, &[1, 1]),
    (3, &[2, 1, 1]),
    (3, &[1, 0, 2, 1]),
    (3, &[2, 0, 0, 1, 1]),
    (3, &[1, 0, 0, 0, 2, 1]),
    (3, &[2, 0, 0, 0, 0, 1, 1]),
    (3, &[1, 0, 0, 0, 0, 1, 2, 1]),
    (3, &[2, 0, 0, 0, 0, 1, 0, 0, 1]),
    (3, &[1, 0, 0, 0, 0, 0, 2, 1, 0, 1]),
    (3, &[2, 0, 0, 0, 0, 0, 0, 1, 0, 1, 1]),
    (5, &[2, 1]),
    (5, &[2, 1, 1]),
    (5, &[2, 0, 1, 1]),
    (5, &[2, 0, 2, 1, 1]),
    (5, &[2, 0, 0, 0, 3, 1]),
    (5, &[2, 0, 0, 0, 0, 1, 1]),
    (7, &[2, 1]),
    (7, &[3, 1, 1]),
    (7, &[2, 1, 1, 1]),
    (7, &[3, 0, 1, 1, 1]),
    (7, &[2, 0, 0, 0, 2, 1]),
    (11, &[3, 1]),
    (11, &[2, 4, 1]),
    (11, &[3, 0, 1, 1]),
    (13, &[2, 1]),
    (13, &[2, 1, 1]),
    (13, &[2, 0, 1, 1]),
];

/// Built-in modulus for `GF(p^m)`, if the table has one.
pub fn default_modulus(p: u32, m: u32) -> Option<&'static [u32]> {
    DEFAULT_MODULI
        .iter()
        .find(|(pp, c)| *pp == p && c.len() as u32 == m + 1)
        .map(|(_, c)| *c)
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Distinct prime factors in increasing order.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// `Some((p, m))` when `q = p^m` with `p` prime and `m >= 1`.
pub fn prime_power(q: u64) -> Option<(u32, u32)> {
    let p = *prime_factors(q).first()?;
    if prime_factors(q).len() != 1 {
        return None;
    }
    let mut m = 0;
    let mut r = q;
    while r > 1 {
        r /= p;
        m += 1;
    }
    Some((p as u32, m))
}

/// An element of some [`FieldSpec`]. Only meaningful together with its field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FieldElement(u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    pub fn index(self) -> u32 {
        self.0
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Debug, Clone)]
struct LogTables {
    exp: Vec<u32>,
    log: Vec<u32>,
}

/// `GF(p^m)` defined by a primitive polynomial.
#[derive(Debug, Clone)]
pub struct FieldSpec {
    p: u32,
    m: u32,
    order: u32,
    modulus: Vec<u32>,
    /// Modulus as a bitmask, characteristic two only.
    modulus_bits: u64,
    logs: OnceLock<LogTables>,
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.m == other.m && self.modulus == other.modulus
    }
}

impl Eq for FieldSpec {}

impl FieldSpec {
    /// Builds `GF(p^m)`. Without an explicit modulus the built-in table is used.
    pub fn new(p: u32, m: u32, modulus: Option<&[u32]>) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        if m == 0 {
            return Err(Error::BadModulus("degree must be at least 1".into()));
        }
        let order = (p as u64).checked_pow(m).filter(|&o| o <= MAX_ORDER);
        let Some(order) = order else {
            return Err(Error::FieldTooLarge { p, m });
        };
        let modulus = match modulus {
            Some(c) => c.to_vec(),
            None => default_modulus(p, m)
                .ok_or(Error::NoDefaultModulus { p, m })?
                .to_vec(),
        };
        if modulus.len() != m as usize + 1 || modulus[m as usize] != 1 {
            return Err(Error::BadModulus(format!(
                "expected a monic polynomial of degree {m}, got {modulus:?}"
            )));
        }
        if modulus.iter().any(|&c| c >= p) {
            return Err(Error::BadModulus(format!("coefficients must be < {p}")));
        }
        if !poly_irreducible(&modulus, p) {
            return Err(Error::ReducibleModulus(p));
        }
        let modulus_bits = if p == 2 {
            modulus
                .iter()
                .enumerate()
                .fold(0u64, |acc, (i, &c)| acc | ((c as u64) << i))
        } else {
            0
        };
        let field = FieldSpec {
            p,
            m,
            order: order as u32,
            modulus,
            modulus_bits,
            logs: OnceLock::new(),
        };
        let a = field.generator();
        let group = order - 1;
        if a == FieldElement::ZERO
            || prime_factors(group)
                .into_iter()
                .any(|r| field.pow(a, group / r) == FieldElement::ONE)
        {
            return Err(Error::NonPrimitiveModulus);
        }
        Ok(field)
    }

    /// The field of order `q`, `q` a prime power, with the default modulus.
    pub fn of_order(q: u64) -> Result<Self> {
        let (p, m) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
        Self::new(p, m, None)
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement::ZERO
    }

    pub fn one(&self) -> FieldElement {
        FieldElement::ONE
    }

    /// The residue class of `x`, a primitive element by construction.
    pub fn generator(&self) -> FieldElement {
        self.from_poly(&[0, 1])
    }

    pub fn element(&self, index: u32) -> Result<FieldElement> {
        if index < self.order {
            Ok(FieldElement(index))
        } else {
            Err(Error::OutOfRange {
                index: index as u64,
                bound: self.order as u64,
            })
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.order).map(FieldElement)
    }

    /// Coordinates over `GF(p)` in the basis `1, x, ..., x^(m-1)`.
    pub fn as_vector(&self, a: FieldElement) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.m as usize);
        let mut r = a.0;
        for _ in 0..self.m {
            out.push(r % self.p);
            r /= self.p;
        }
        out
    }

    /// Inverse of [`FieldSpec::as_vector`].
    pub fn from_vector(&self, coords: &[u32]) -> Result<FieldElement> {
        if coords.len() != self.m as usize || coords.iter().any(|&c| c >= self.p) {
            return Err(Error::Parse(format!(
                "expected {} coordinates below {}",
                self.m, self.p
            )));
        }
        Ok(FieldElement(
            coords.iter().rev().fold(0, |acc, &c| acc * self.p + c),
        ))
    }

    /// Reduces an arbitrary polynomial (low to high) modulo the field modulus.
    pub fn from_poly(&self, coeffs: &[u32]) -> FieldElement {
        let m = self.m as usize;
        let mut r: Vec<u32> = coeffs.iter().map(|&c| c % self.p).collect();
        self.reduce_in_place(&mut r);
        r.resize(m, 0);
        FieldElement(r.iter().rev().fold(0, |acc, &c| acc * self.p + c))
    }

    fn reduce_in_place(&self, r: &mut Vec<u32>) {
        let m = self.m as usize;
        let p = self.p;
        for d in (m..r.len()).rev() {
            let c = r[d];
            if c == 0 {
                continue;
            }
            for t in 0..=m {
                let idx = d - m + t;
                r[idx] = (r[idx] + (p - c) * self.modulus[t]) % p;
            }
        }
        r.truncate(m);
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if self.p == 2 {
            return FieldElement(a.0 ^ b.0);
        }
        let (mut x, mut y) = (a.0, b.0);
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.m {
            out += ((x % self.p + y % self.p) % self.p) * place;
            x /= self.p;
            y /= self.p;
            place *= self.p;
        }
        FieldElement(out)
    }

    pub fn neg(&self, a: FieldElement) -> FieldElement {
        if self.p == 2 {
            return a;
        }
        let mut x = a.0;
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.m {
            out += ((self.p - x % self.p) % self.p) * place;
            x /= self.p;
            place *= self.p;
        }
        FieldElement(out)
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a.0 == 0 || b.0 == 0 {
            return FieldElement::ZERO;
        }
        if self.p == 2 {
            let (x, y) = (a.0 as u64, b.0 as u64);
            let mut prod = 0u64;
            for i in 0..self.m {
                if (y >> i) & 1 == 1 {
                    prod ^= x << i;
                }
            }
            for d in (self.m..2 * self.m).rev() {
                if (prod >> d) & 1 == 1 {
                    prod ^= self.modulus_bits << (d - self.m);
                }
            }
            return FieldElement(prod as u32);
        }
        let x = self.as_vector(a);
        let y = self.as_vector(b);
        let mut prod = vec![0u32; x.len() + y.len() - 1];
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for (j, &yj) in y.iter().enumerate() {
                prod[i + j] = (prod[i + j] + xi * yj) % self.p;
            }
        }
        self.from_poly(&prod)
    }

    pub fn pow(&self, a: FieldElement, mut e: u64) -> FieldElement {
        let mut base = a;
        let mut acc = FieldElement::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a.0 == 0 {
            return Err(Error::ZeroInverse);
        }
        Ok(self.pow(a, self.order as u64 - 2))
    }

    fn logs(&self) -> &LogTables {
        self.logs.get_or_init(|| {
            let n = self.order as usize - 1;
            let mut exp = Vec::with_capacity(n);
            let mut log = vec![u32::MAX; self.order as usize];
            let a = self.generator();
            let mut cur = FieldElement::ONE;
            for e in 0..n {
                exp.push(cur.0);
                log[cur.0 as usize] = e as u32;
                cur = self.mul(cur, a);
            }
            LogTables { exp, log }
        })
    }

    /// `a^e` for the primitive element `a`, via the lazily built table.
    pub fn exp(&self, e: u64) -> FieldElement {
        let t = self.logs();
        FieldElement(t.exp[(e % t.exp.len() as u64) as usize])
    }

    /// Discrete logarithm to base `a`; `None` for zero.
    pub fn log(&self, x: FieldElement) -> Option<u64> {
        match self.logs().log[x.0 as usize] {
            u32::MAX => None,
            l => Some(l as u64),
        }
    }

    /// The subfield of order `p^d`: `{0} U {a^(j (p^m - 1)/(p^d - 1))}`.
    pub fn subfield(&self, d: u32) -> Result<Vec<FieldElement>> {
        if d == 0 || self.m % d != 0 {
            return Err(Error::NotDivisor { d, m: self.m });
        }
        let big = self.order as u64 - 1;
        let small = (self.p as u64).pow(d) - 1;
        let step = big / small;
        let mut out = vec![FieldElement::ZERO];
        out.extend((0..small).map(|j| self.exp(j * step)));
        let mut members = vec![false; self.order as usize];
        for x in &out {
            members[x.0 as usize] = true;
        }
        for &x in &out {
            for &y in &out {
                if !members[self.add(x, y).0 as usize] || !members[self.mul(x, y).0 as usize] {
                    return Err(Error::Unsupported(format!(
                        "subfield of degree {d} failed the closure check"
                    )));
                }
            }
        }
        Ok(out)
    }

    /// Dense operation tables, for use as a coefficient field.
    pub fn tables(&self) -> Result<FieldTables> {
        if self.order > 256 {
            return Err(Error::Unsupported(format!(
                "coefficient field of order {} (at most 256)",
                self.order
            )));
        }
        let q = self.order as usize;
        let mut add = vec![0u8; q * q];
        let mut mul = vec![0u8; q * q];
        let mut neg = vec![0u8; q];
        let mut inv = vec![0u8; q];
        for a in self.elements() {
            neg[a.0 as usize] = self.neg(a).0 as u8;
            if a.0 != 0 {
                inv[a.0 as usize] = self.inv(a)?.0 as u8;
            }
            for b in self.elements() {
                add[a.0 as usize * q + b.0 as usize] = self.add(a, b).0 as u8;
                mul[a.0 as usize * q + b.0 as usize] = self.mul(a, b).0 as u8;
            }
        }
        Ok(FieldTables {
            q: self.order,
            add,
            mul,
            neg,
            inv,
        })
    }
}

/// Table-driven arithmetic for fields of order at most 256.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldTables {
    q: u32,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>,
}

impl FieldTables {
    pub fn order(&self) -> u32 {
        self.q
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        self.add[(a * self.q + b) as usize] as u32
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.mul[(a * self.q + b) as usize] as u32
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        self.neg[a as usize] as u32
    }

    /// Inverse of a nonzero element; zero maps to zero.
    #[inline]
    pub fn inv(&self, a: u32) -> u32 {
        self.inv[a as usize] as u32
    }
}

fn poly_trim(mut a: Vec<u32>) -> Vec<u32> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

/// Remainder of `a` modulo the monic `b` over `GF(p)`.
fn poly_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    while r.len() > db {
        let c = *r.last().unwrap();
        let shift = r.len() - 1 - db;
        if c != 0 {
            for (t, &bt) in b.iter().enumerate() {
                r[shift + t] = (r[shift + t] + (p - c) * bt) % p;
            }
        }
        r.pop();
    }
    poly_trim(r)
}

/// Trial division by every monic polynomial of degree `1..=m/2`.
fn poly_irreducible(f: &[u32], p: u32) -> bool {
    let m = f.len() - 1;
    for d in 1..=m / 2 {
        let count = (p as u64).pow(d as u32);
        for tail in 0..count {
            let mut g = Vec::with_capacity(d + 1);
            let mut t = tail;
            for _ in 0..d {
                g.push((t % p as u64) as u32);
                t /= p as u64;
            }
            g.push(1);
            if poly_rem(f, &g, p).is_empty() {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_gf2() {
        let f = FieldSpec::new(2, 1, None).unwrap();
        assert_eq!(f.order(), 2);
        assert_eq!(f.generator(), FieldElement::ONE);
    }

    #[test]
    fn gf64_default_modulus_is_primitive_by_brute_force() {
        let f = FieldSpec::new(2, 6, None).unwrap();
        assert_eq!(f.modulus(), &[1, 1, 0, 0, 0, 0, 1]);
        assert_eq!(f.order(), 64);
        // brute-force order of x
        let a = f.generator();
        let mut cur = a;
        let mut ord = 1;
        while cur != FieldElement::ONE {
            cur = f.mul(cur, a);
            ord += 1;
        }
        assert_eq!(ord, 63);
        assert_eq!(f.pow(a, 63), FieldElement::ONE);
    }

    #[test]
    fn non_prime_characteristic_rejected() {
        assert_eq!(FieldSpec::new(4, 1, None).unwrap_err(), Error::NotPrime(4));
    }

    #[test]
    fn reducible_and_non_primitive_moduli_rejected() {
        // x^2 + 1 = (x+1)^2 over GF(2)
        assert_eq!(
            FieldSpec::new(2, 2, Some(&[1, 0, 1])).unwrap_err(),
            Error::ReducibleModulus(2)
        );
        // x^4 + x^3 + x^2 + x + 1 is irreducible, but x has order 5
        assert_eq!(
            FieldSpec::new(2, 4, Some(&[1, 1, 1, 1, 1])).unwrap_err(),
            Error::NonPrimitiveModulus
        );
        // x^2 + 1 is irreducible over GF(3) but x has order 4 of 8
        assert_eq!(
            FieldSpec::new(3, 2, Some(&[1, 0, 1])).unwrap_err(),
            Error::NonPrimitiveModulus
        );
    }

    #[test]
    fn gf4_square_of_generator() {
        let f = FieldSpec::new(2, 2, None).unwrap();
        let a = f.generator();
        // a^2 = a + 1 under x^2 + x + 1: index 0b11
        assert_eq!(f.mul(a, a), FieldElement(3));
        assert_eq!(f.add(a, a), FieldElement::ZERO);
    }

    #[test]
    fn inverse_of_zero_is_an_error() {
        let f = FieldSpec::new(3, 2, None).unwrap();
        assert_eq!(f.inv(FieldElement::ZERO), Err(Error::ZeroInverse));
    }

    #[test]
    fn subfields_of_gf64() {
        let f = FieldSpec::new(2, 6, None).unwrap();
        assert_eq!(f.subfield(1).unwrap(), vec![FieldElement::ZERO, FieldElement::ONE]);
        let f4 = f.subfield(2).unwrap();
        assert_eq!(
            f4,
            vec![FieldElement::ZERO, FieldElement::ONE, f.exp(21), f.exp(42)]
        );
        let mut all = f.subfield(6).unwrap();
        all.sort();
        assert_eq!(all, f.elements().collect::<Vec<_>>());
        assert!(matches!(f.subfield(4), Err(Error::NotDivisor { .. })));
    }

    #[test]
    fn as_vector_conventions() {
        let f = FieldSpec::new(2, 6, None).unwrap();
        assert_eq!(f.as_vector(FieldElement::ZERO), vec![0; 6]);
        assert_eq!(f.as_vector(FieldElement::ONE), vec![1, 0, 0, 0, 0, 0]);
        // x^6 = x + 1
        assert_eq!(f.as_vector(f.exp(6)), vec![1, 1, 0, 0, 0, 0]);
    }

    #[test]
    fn every_table_entry_is_primitive_exhaustively() {
        for &(p, coeffs) in DEFAULT_MODULI {
            let m = coeffs.len() as u32 - 1;
            let f = FieldSpec::new(p, m, None).unwrap();
            let a = f.generator();
            let q = f.order() as u64;
            let mut cur = FieldElement::ONE;
            for j in 1..q - 1 {
                cur = f.mul(cur, a);
                assert_ne!(cur, FieldElement::ONE, "GF({p}^{m}): a^{j} = 1");
            }
            assert_eq!(f.mul(cur, a), FieldElement::ONE);
        }
    }

    #[test]
    fn field_axioms_in_small_fields() {
        for (p, m) in [(2, 3), (3, 2), (5, 1), (2, 4), (7, 2)] {
            let f = FieldSpec::new(p, m, None).unwrap();
            let els: Vec<_> = f.elements().collect();
            for &x in &els {
                assert_eq!(f.add(x, f.neg(x)), FieldElement::ZERO);
                if x != FieldElement::ZERO {
                    assert_eq!(f.mul(x, f.inv(x).unwrap()), FieldElement::ONE);
                }
                for &y in &els {
                    assert_eq!(f.add(x, y), f.add(y, x));
                    assert_eq!(f.mul(x, y), f.mul(y, x));
                    for &z in els.iter().step_by(3) {
                        assert_eq!(
                            f.mul(x, f.add(y, z)),
                            f.add(f.mul(x, y), f.mul(x, z))
                        );
                        assert_eq!(f.mul(f.mul(x, y), z), f.mul(x, f.mul(y, z)));
                    }
                }
            }
        }
    }

    #[test]
    fn as_vector_is_linear_over_prime_field_exhaustive_gf64() {
        let f = FieldSpec::new(2, 6, None).unwrap();
        for x in f.elements() {
            for y in f.elements() {
                let lhs = f.as_vector(f.add(x, y));
                let rhs: Vec<u32> = f
                    .as_vector(x)
                    .iter()
                    .zip(f.as_vector(y))
                    .map(|(a, b)| (a + b) % 2)
                    .collect();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn prime_power_detection() {
        assert_eq!(prime_power(64), Some((2, 6)));
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(6), None);
        assert_eq!(prime_power(1), None);
    }

    #[test]
    fn tables_agree_with_field_ops() {
        let f = FieldSpec::new(2, 2, None).unwrap();
        let t = f.tables().unwrap();
        for a in 0..4 {
            for b in 0..4 {
                assert_eq!(t.mul(a, b), f.mul(FieldElement(a), FieldElement(b)).0);
                assert_eq!(t.add(a, b), a ^ b);
            }
        }
    }

    mod props {
        use super::super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn axioms_gf256(a in 0u32..256, b in 0u32..256, c in 0u32..256) {
                let f = FieldSpec::new(2, 8, None).unwrap();
                let (a, b, c) = (FieldElement(a), FieldElement(b), FieldElement(c));
                prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                if a != FieldElement::ZERO {
                    prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), FieldElement::ONE);
                    prop_assert_eq!(f.exp(f.log(a).unwrap()), a);
                }
            }

            #[test]
            fn as_vector_linear_gf3_5(x in 0u32..243, y in 0u32..243, s in 0u32..3) {
                let f = FieldSpec::new(3, 5, None).unwrap();
                let (x, y) = (FieldElement(x), FieldElement(y));
                let alpha = FieldElement(s);
                let lhs = f.as_vector(f.add(f.mul(alpha, x), y));
                let rhs: Vec<u32> = f.as_vector(x).iter().zip(f.as_vector(y))
                    .map(|(a, b)| (s * a + b) % 3).collect();
                prop_assert_eq!(lhs, rhs);
            }
        }
    }
}
