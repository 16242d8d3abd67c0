//! Truncated power series in non-commuting variables `X_1 .. X_n` with exact
//! integer coefficients, and the Magnus expansion of free-group words.
//!
//! A series is truncated at total degree `q`. It may additionally be truncated
//! at a multiplicity bound `r`: monomials in which some variable occurs more
//! than `r` times span a two-sided ideal, so discarding them is again a ring
//! homomorphism and coefficients of the surviving monomials stay exact.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::freegroup::GroupWord;

/// Largest supported variable count.
pub const MAX_VARIABLES: usize = 16;
/// Largest supported truncation degree.
pub const MAX_DEGREE: usize = 15;

/// Monomials are packed as base-`(n+1)` digit strings (digits `1..=n`), keyed
/// by `(degree, code)` so that map order is degree first, then lexicographic.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Key {
    degree: u8,
    code: u64,
}

/// A monomial `X_{i_1} ... X_{i_d}`; empty for the constant term.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(pub Vec<usize>);

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.0.iter().map(|i| format!("X{i}")).collect();
        write!(f, "{}", parts.join("*"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    n: usize,
    q: usize,
    max_r: usize,
    terms: BTreeMap<Key, BigInt>,
}

impl TruncatedSeries {
    fn check_params(n: usize, q: usize) -> Result<()> {
        if n == 0 || n > MAX_VARIABLES || q > MAX_DEGREE {
            return Err(Error::InvalidParameters(format!(
                "series needs 1 <= n <= {MAX_VARIABLES} and q <= {MAX_DEGREE}, got n={n}, q={q}"
            )));
        }
        Ok(())
    }

    pub fn zero(n: usize, q: usize) -> Result<Self> {
        Self::check_params(n, q)?;
        Ok(TruncatedSeries { n, q, max_r: q, terms: BTreeMap::new() })
    }

    pub fn one(n: usize, q: usize) -> Result<Self> {
        let mut s = Self::zero(n, q)?;
        s.terms.insert(Key { degree: 0, code: 0 }, BigInt::one());
        Ok(s)
    }

    /// Restricts to monomials in which no variable appears more than `r` times.
    pub fn with_max_r(mut self, r: usize) -> Self {
        self.max_r = r.min(self.q);
        let (n, max_r) = (self.n, self.max_r);
        self.terms.retain(|k, _| multiplicity_ok(n, *k, max_r));
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn max_r(&self) -> usize {
        self.max_r
    }

    fn same_shape(&self, other: &TruncatedSeries) -> Result<()> {
        if self.n != other.n || self.q != other.q || self.max_r != other.max_r {
            return Err(Error::SeriesMismatch(self.n, self.q, other.n, other.q));
        }
        Ok(())
    }

    fn empty_like(&self) -> TruncatedSeries {
        TruncatedSeries { n: self.n, q: self.q, max_r: self.max_r, terms: BTreeMap::new() }
    }

    fn encode(&self, vars: &[usize]) -> Result<Key> {
        let base = (self.n + 1) as u64;
        let mut code = 0u64;
        for &v in vars {
            if v == 0 || v > self.n {
                return Err(Error::GeneratorOutOfRange(v, self.n));
            }
            code = code * base + v as u64;
        }
        Ok(Key { degree: vars.len() as u8, code })
    }

    fn admits(&self, key: Key) -> bool {
        key.degree as usize <= self.q && multiplicity_ok(self.n, key, self.max_r)
    }

    /// `1 + X_j` for sign `+1`; `1 - X_j + X_j^2 - ...` for sign `-1`.
    pub fn generator_series(j: usize, sign: i8, n: usize, q: usize) -> Result<Self> {
        Self::check_params(n, q)?;
        if j == 0 || j > n {
            return Err(Error::GeneratorOutOfRange(j, n));
        }
        let mut s = Self::one(n, q)?;
        let top = if sign >= 0 { 1.min(q) } else { q };
        for d in 1..=top {
            let key = s.encode(&vec![j; d])?;
            let c = if sign < 0 && d % 2 == 1 { -BigInt::one() } else { BigInt::one() };
            s.terms.insert(key, c);
        }
        Ok(s)
    }

    /// The single monomial `X_{vars}` with coefficient 1 (zero if truncated away).
    pub fn monomial(vars: &[usize], n: usize, q: usize) -> Result<Self> {
        let mut s = Self::zero(n, q)?;
        let key = s.encode(vars)?;
        if s.admits(key) {
            s.terms.insert(key, BigInt::one());
        }
        Ok(s)
    }

    pub fn multiply(&self, other: &TruncatedSeries) -> Result<TruncatedSeries> {
        self.same_shape(other)?;
        let mut out = self.empty_like();
        out.terms = match self.multiply_small(other) {
            Some(terms) => terms,
            None => self.multiply_big(other),
        };
        Ok(out)
    }

    /// Pairs of terms whose product survives truncation, as `(key, a, b)`.
    fn product_pairs<'a, T>(
        &self,
        left: &'a [(Key, u128, T)],
        right: &'a [(Key, u128, T)],
        mut f: impl FnMut(Key, &'a T, &'a T) -> bool,
    ) -> bool {
        let base = (self.n + 1) as u64;
        let mut pow = vec![1u64; self.q + 1];
        for d in 1..=self.q {
            pow[d] = pow[d - 1] * base;
        }
        let guard = guard_mask(self.n, self.max_r);
        for (ka, la, ca) in left {
            let room = self.q - ka.degree as usize;
            for (kb, lb, cb) in right {
                // terms are sorted by degree
                if kb.degree as usize > room {
                    break;
                }
                if ((la + lb).wrapping_add(guard.0) & guard.1) != 0 {
                    continue;
                }
                let key = Key { degree: ka.degree + kb.degree, code: ka.code * pow[kb.degree as usize] + kb.code };
                if !f(key, ca, cb) {
                    return false;
                }
            }
        }
        true
    }

    /// Machine-integer product; `None` if any coefficient leaves range.
    fn multiply_small(&self, other: &TruncatedSeries) -> Option<BTreeMap<Key, BigInt>> {
        let small = |s: &TruncatedSeries| -> Option<Vec<(Key, u128, i128)>> {
            s.terms
                .iter()
                .map(|(k, v)| i64::try_from(v).ok().map(|c| (*k, lane_counts(s.n, *k), c as i128)))
                .collect()
        };
        let (left, right) = (small(self)?, small(other)?);
        let mut acc: HashMap<Key, i128> = HashMap::new();
        let ok = self.product_pairs(&left, &right, |key, a, b| {
            let prod = a * b;
            let e = acc.entry(key).or_insert(0);
            match e.checked_add(prod) {
                Some(v) => {
                    *e = v;
                    true
                }
                None => false,
            }
        });
        if !ok {
            return None;
        }
        Some(acc.into_iter().filter(|(_, v)| *v != 0).map(|(k, v)| (k, BigInt::from(v))).collect())
    }

    fn multiply_big(&self, other: &TruncatedSeries) -> BTreeMap<Key, BigInt> {
        let big = |s: &TruncatedSeries| -> Vec<(Key, u128, BigInt)> {
            s.terms.iter().map(|(k, v)| (*k, lane_counts(s.n, *k), v.clone())).collect()
        };
        let (left, right) = (big(self), big(other));
        let mut acc: HashMap<Key, BigInt> = HashMap::new();
        self.product_pairs(&left, &right, |key, a, b| {
            *acc.entry(key).or_insert_with(BigInt::zero) += a * b;
            true
        });
        acc.into_iter().filter(|(_, v)| !v.is_zero()).collect()
    }

    pub fn add(&self, other: &TruncatedSeries) -> Result<TruncatedSeries> {
        self.same_shape(other)?;
        let mut out = self.clone();
        for (k, v) in &other.terms {
            let e = out.terms.entry(*k).or_insert_with(BigInt::zero);
            *e += v;
            if e.is_zero() {
                out.terms.remove(k);
            }
        }
        Ok(out)
    }

    pub fn neg(&self) -> TruncatedSeries {
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v = -v.clone();
        }
        out
    }

    pub fn sub(&self, other: &TruncatedSeries) -> Result<TruncatedSeries> {
        self.add(&other.neg())
    }

    /// Multiplies on the right by the variable `X_j`.
    pub fn times_variable(&self, j: usize) -> Result<TruncatedSeries> {
        if j == 0 || j > self.n {
            return Err(Error::GeneratorOutOfRange(j, self.n));
        }
        let base = (self.n + 1) as u64;
        let mut out = self.empty_like();
        for (k, v) in &self.terms {
            let key = Key { degree: k.degree + 1, code: k.code * base + j as u64 };
            if out.admits(key) {
                out.terms.insert(key, v.clone());
            }
        }
        Ok(out)
    }

    pub fn constant_term(&self) -> BigInt {
        self.terms.get(&Key { degree: 0, code: 0 }).cloned().unwrap_or_default()
    }

    /// Inverse of a series with constant term 1, as `sum_k (1 - s)^k`.
    pub fn inverse_unit(&self) -> Result<TruncatedSeries> {
        if !self.constant_term().is_one() {
            return Err(Error::InvalidParameters("series is not a unit with constant 1".into()));
        }
        let one = self.empty_like().add_constant(BigInt::one());
        let t = one.sub(self)?;
        let mut out = one.clone();
        let mut power = one;
        for _ in 0..self.q {
            power = power.multiply(&t)?;
            out = out.add(&power)?;
        }
        Ok(out)
    }

    fn add_constant(mut self, c: BigInt) -> TruncatedSeries {
        let e = self.terms.entry(Key { degree: 0, code: 0 }).or_insert_with(BigInt::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&Key { degree: 0, code: 0 });
        }
        self
    }

    /// Exact coefficient of `X_{i_1} ... X_{i_m}`.
    pub fn coefficient(&self, vars: &[usize]) -> Result<BigInt> {
        if vars.len() > self.q {
            return Err(Error::DegreeExceeded(vars.len(), self.q));
        }
        let key = self.encode(vars)?;
        if !multiplicity_ok(self.n, key, self.max_r) {
            return Err(Error::InvalidParameters(format!(
                "monomial {:?} exceeds multiplicity bound {}",
                vars, self.max_r
            )));
        }
        Ok(self.terms.get(&key).cloned().unwrap_or_default())
    }

    /// Nonzero terms in canonical (degree, lexicographic) order.
    pub fn terms(&self) -> impl Iterator<Item = (Monomial, &BigInt)> {
        self.terms.iter().map(move |(k, v)| (Monomial(decode(self.n, *k)), v))
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.constant_term().is_one()
    }

    /// Reduces to a smaller truncation (degree and multiplicity).
    pub fn truncate(&self, q: usize, max_r: usize) -> TruncatedSeries {
        let q = q.min(self.q);
        let max_r = max_r.min(self.max_r).min(q);
        let mut out = TruncatedSeries { n: self.n, q, max_r, terms: BTreeMap::new() };
        for (k, v) in &self.terms {
            if out.admits(*k) {
                out.terms.insert(*k, v.clone());
            }
        }
        out
    }

    /// Magnus expansion of a word: the product of generator series, in order.
    pub fn expand(word: &GroupWord, n: usize, q: usize) -> Result<TruncatedSeries> {
        if word.rank() != n {
            return Err(Error::RankMismatch(word.rank(), n));
        }
        let plus: Vec<_> = (1..=n).map(|j| Self::generator_series(j, 1, n, q)).collect::<Result<_>>()?;
        let minus: Vec<_> = (1..=n).map(|j| Self::generator_series(j, -1, n, q)).collect::<Result<_>>()?;
        let mut acc = Self::one(n, q)?;
        for l in word.letters() {
            let g = if l.inverse { &minus[l.generator - 1] } else { &plus[l.generator - 1] };
            acc = acc.multiply(g)?;
        }
        Ok(acc)
    }

    /// Like [`expand`](Self::expand) but truncated at a multiplicity bound as well.
    pub fn expand_bounded(word: &GroupWord, n: usize, q: usize, max_r: usize) -> Result<TruncatedSeries> {
        let plus: Vec<_> = (1..=n)
            .map(|j| Self::generator_series(j, 1, n, q).map(|s| s.with_max_r(max_r)))
            .collect::<Result<_>>()?;
        let minus: Vec<_> = (1..=n)
            .map(|j| Self::generator_series(j, -1, n, q).map(|s| s.with_max_r(max_r)))
            .collect::<Result<_>>()?;
        if word.rank() != n {
            return Err(Error::RankMismatch(word.rank(), n));
        }
        let mut acc = Self::one(n, q)?.with_max_r(max_r);
        for l in word.letters() {
            let g = if l.inverse { &minus[l.generator - 1] } else { &plus[l.generator - 1] };
            acc = acc.multiply(g)?;
        }
        Ok(acc)
    }
}

fn decode(n: usize, key: Key) -> Vec<usize> {
    let base = (n + 1) as u64;
    let mut code = key.code;
    let mut out = vec![0usize; key.degree as usize];
    for slot in out.iter_mut().rev() {
        *slot = (code % base) as usize;
        code /= base;
    }
    out
}

/// Per-variable occurrence counts packed into 8-bit lanes.
fn lane_counts(n: usize, key: Key) -> u128 {
    let base = (n + 1) as u64;
    let mut code = key.code;
    let mut lanes = 0u128;
    for _ in 0..key.degree {
        let v = (code % base) as u32;
        code /= base;
        lanes += 1u128 << (8 * (v - 1));
    }
    lanes
}

/// `(offset, mask)` such that `(lanes + offset) & mask != 0` iff some lane exceeds `r`.
fn guard_mask(n: usize, r: usize) -> (u128, u128) {
    let mut offset = 0u128;
    let mut mask = 0u128;
    for v in 0..n {
        offset |= ((127 - r as u128) & 0xff) << (8 * v);
        mask |= 0x80u128 << (8 * v);
    }
    (offset, mask)
}

fn multiplicity_ok(n: usize, key: Key, r: usize) -> bool {
    let (offset, mask) = guard_mask(n, r.min(MAX_DEGREE));
    (lane_counts(n, key).wrapping_add(offset) & mask) == 0
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (mono, c) in self.terms() {
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            first = false;
            if mono.0.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{mag}*{mono}")?;
            }
        }
        Ok(())
    }
}
