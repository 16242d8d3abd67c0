//! Multi-indices and the index families that label generator string links.
//!
//! All indices are 1-based. Enumerations are returned in lexicographic order
//! of their value sequences so every downstream product and report is
//! deterministic.

use std::fmt;
use std::str::FromStr;

use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};

/// A finite sequence of component indices `i_1 i_2 ... i_m`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct MultiIndex(Vec<usize>);

impl MultiIndex {
    pub fn new(entries: Vec<usize>) -> Self {
        MultiIndex(entries)
    }

    pub fn entries(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn last(&self) -> Option<usize> {
        self.0.last().copied()
    }

    /// All entries but the last.
    pub fn prefix(&self) -> &[usize] {
        match self.0.split_last() {
            Some((_, rest)) => rest,
            None => &[],
        }
    }

    /// Maximum number of times any single index appears (`r(I)`).
    pub fn repeat_max(&self) -> usize {
        repeat_max(&self.0)
    }

    /// Checks every entry lies in `1..=n`.
    pub fn check(&self, n: usize) -> Result<()> {
        match self.0.iter().find(|&&i| i == 0 || i > n) {
            Some(bad) => Err(Error::InvalidIndex(format!(
                "entry {bad} of {self} outside 1..={n}"
            ))),
            None => Ok(()),
        }
    }

    /// Rotates left by `shift` positions.
    pub fn rotated(&self, shift: usize) -> MultiIndex {
        let mut v = self.0.clone();
        if !v.is_empty() {
            let s = shift % v.len();
            v.rotate_left(s);
        }
        MultiIndex(v)
    }

    /// Applies a component map `h` (1-based in, 1-based out).
    pub fn mapped(&self, h: &[usize]) -> MultiIndex {
        MultiIndex(self.0.iter().map(|&i| h[i - 1]).collect())
    }
}

/// `r(I)` on a raw slice; 0 for the empty sequence.
pub fn repeat_max(entries: &[usize]) -> usize {
    let mut counts = std::collections::HashMap::new();
    let mut best = 0;
    for &e in entries {
        let c = counts.entry(e).or_insert(0usize);
        *c += 1;
        best = best.max(*c);
    }
    best
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.iter().all(|&i| (1..=9).contains(&i)) {
            for i in &self.0 {
                write!(f, "{i}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.0.iter().map(|i| i.to_string()).collect();
            write!(f, "{}", parts.join(","))
        }
    }
}

impl FromStr for MultiIndex {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().trim_start_matches('[').trim_end_matches(']');
        if s.is_empty() {
            return Ok(MultiIndex::default());
        }
        let entries = if s.contains(',') || s.contains(' ') {
            s.split(|c: char| c == ',' || c.is_whitespace())
                .filter(|t| !t.is_empty())
                .map(|t| {
                    t.parse::<usize>()
                        .map_err(|_| Error::InvalidIndex(format!("bad entry {t:?}")))
                })
                .collect::<Result<Vec<_>>>()?
        } else {
            s.chars()
                .map(|c| {
                    c.to_digit(10)
                        .map(|d| d as usize)
                        .ok_or_else(|| Error::InvalidIndex(format!("bad digit {c:?}")))
                })
                .collect::<Result<Vec<_>>>()?
        };
        if entries.contains(&0) {
            return Err(Error::InvalidIndex("indices are 1-based".into()));
        }
        Ok(MultiIndex(entries))
    }
}

impl Serialize for MultiIndex {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for MultiIndex {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct IndexVisitor;

        impl<'de> Visitor<'de> for IndexVisitor {
            type Value = MultiIndex;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a digit string like \"12233\" or an integer array")
            }

            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<MultiIndex, E> {
                v.parse().map_err(E::custom)
            }

            fn visit_seq<A: de::SeqAccess<'de>>(
                self,
                mut seq: A,
            ) -> std::result::Result<MultiIndex, A::Error> {
                let mut out = Vec::new();
                while let Some(x) = seq.next_element::<usize>()? {
                    if x == 0 {
                        return Err(de::Error::custom("indices are 1-based"));
                    }
                    out.push(x);
                }
                Ok(MultiIndex(out))
            }
        }

        deserializer.deserialize_any(IndexVisitor)
    }
}

/// Every multi-index over `1..=n` with `min_len <= |I| <= max_len` and
/// `r(I) <= max_r`, ordered by length then lexicographically.
pub fn enumerate_indices(n: usize, min_len: usize, max_len: usize, max_r: usize) -> Vec<MultiIndex> {
    let mut out = Vec::new();
    for len in min_len..=max_len {
        let mut counts = vec![0usize; n + 1];
        let mut cur = Vec::with_capacity(len);
        fill_indices(n, len, max_r, &mut counts, &mut cur, &mut out);
    }
    out
}

fn fill_indices(
    n: usize,
    len: usize,
    max_r: usize,
    counts: &mut [usize],
    cur: &mut Vec<usize>,
    out: &mut Vec<MultiIndex>,
) {
    if cur.len() == len {
        out.push(MultiIndex(cur.clone()));
        return;
    }
    for i in 1..=n {
        if counts[i] < max_r {
            counts[i] += 1;
            cur.push(i);
            fill_indices(n, len, max_r, counts, cur, out);
            cur.pop();
            counts[i] -= 1;
        }
    }
}

/// An injection `pi: {1..k} -> {1..n}` with `pi(i) < pi(k-1) < pi(k)` for `i <= k-2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct InjectionPi {
    pub n: usize,
    pub values: Vec<usize>,
}

impl InjectionPi {
    pub fn new(n: usize, values: Vec<usize>) -> Result<Self> {
        let pi = InjectionPi { n, values };
        if pi.is_valid() {
            Ok(pi)
        } else {
            Err(Error::InvalidIndex(format!(
                "{:?} is not an ordered injection into 1..={n}",
                pi.values
            )))
        }
    }

    pub fn arity(&self) -> usize {
        self.values.len()
    }

    pub fn is_valid(&self) -> bool {
        let k = self.values.len();
        if k < 2 || k > self.n || self.values.iter().any(|&v| v == 0 || v > self.n) {
            return false;
        }
        let mut seen = self.values.clone();
        seen.sort_unstable();
        seen.dedup();
        if seen.len() != k {
            return false;
        }
        let top = self.values[k - 1];
        let second = self.values[k - 2];
        second < top && self.values[..k - 2].iter().all(|&v| v < second)
    }

    /// The multi-index `pi(1) pi(2) ... pi(k)`.
    pub fn index(&self) -> MultiIndex {
        MultiIndex(self.values.clone())
    }
}

impl fmt::Display for InjectionPi {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.index())
    }
}

/// Every `pi` in `F_k` for ambient size `n`, in lexicographic order.
pub fn enumerate_f(k: usize, n: usize) -> Result<Vec<InjectionPi>> {
    if k < 2 || k > n {
        return Err(Error::InvalidParameters(format!(
            "F_k needs 2 <= k <= n, got k={k}, n={n}"
        )));
    }
    let mut out = Vec::new();
    // pi(k) = top, pi(k-1) = second, the rest an arrangement of k-2 values below second.
    for top in 2..=n {
        for second in 1..top {
            let pool: Vec<usize> = (1..second).collect();
            let mut used = vec![false; pool.len()];
            let mut cur = Vec::new();
            arrange(&pool, k - 2, &mut used, &mut cur, &mut |head| {
                let mut values = head.to_vec();
                values.push(second);
                values.push(top);
                out.push(InjectionPi { n, values });
            });
        }
    }
    out.sort();
    Ok(out)
}

fn arrange(
    pool: &[usize],
    len: usize,
    used: &mut [bool],
    cur: &mut Vec<usize>,
    emit: &mut dyn FnMut(&[usize]),
) {
    if cur.len() == len {
        emit(cur);
        return;
    }
    for i in 0..pool.len() {
        if !used[i] {
            used[i] = true;
            cur.push(pool[i]);
            arrange(pool, len, used, cur, emit);
            cur.pop();
            used[i] = false;
        }
    }
}

/// All of `F_2 ∪ ... ∪ F_n`, each family in lexicographic order, smaller
/// arity first.
pub fn enumerate_f_all(n: usize) -> Vec<InjectionPi> {
    (2..=n).flat_map(|k| enumerate_f(k, n).unwrap_or_default()).collect()
}

/// A surjection `tau: {1..m-2} -> {1..n} \ {k}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SurjectionTau {
    pub m: usize,
    pub k: usize,
    pub n: usize,
    pub values: Vec<usize>,
}

impl SurjectionTau {
    pub fn new(m: usize, k: usize, n: usize, values: Vec<usize>) -> Result<Self> {
        let tau = SurjectionTau { m, k, n, values };
        if tau.in_b() {
            Ok(tau)
        } else {
            Err(Error::InvalidIndex(format!(
                "{:?} is not in B_{m}({k}) for n={n}",
                tau.values
            )))
        }
    }

    /// Membership in `B_m(k)`.
    pub fn in_b(&self) -> bool {
        let (m, k, n) = (self.m, self.k, self.n);
        if !(n < m && m <= 2 * n) || k == 0 || k > n || self.values.len() + 2 != m {
            return false;
        }
        let mut counts = vec![0usize; n + 1];
        for &v in &self.values {
            if v == 0 || v > n || v == k {
                return false;
            }
            counts[v] += 1;
        }
        (1..=n).all(|i| {
            if i == k {
                true
            } else if i > k {
                counts[i] == 1
            } else {
                (1..=2).contains(&counts[i])
            }
        })
    }

    /// The multi-index `tau(1) ... tau(m-2) k k` read by `mu_tau`.
    pub fn index(&self) -> MultiIndex {
        let mut v = self.values.clone();
        v.push(self.k);
        v.push(self.k);
        MultiIndex(v)
    }

    /// `tau ∘ rho_m`, i.e. the reversed value sequence.
    pub fn apply_rho(&self) -> SurjectionTau {
        let mut values = self.values.clone();
        values.reverse();
        SurjectionTau { values, ..self.clone() }
    }

    /// First position (0-based) where `tau` and `tau ∘ rho` differ.
    fn first_asymmetry(&self) -> Option<usize> {
        let len = self.values.len();
        (0..len).find(|&i| self.values[i] != self.values[len - 1 - i])
    }

    fn is_r(&self) -> bool {
        let (m, n) = (self.m, self.n);
        let v = &self.values;
        if m == 2 * n - 1 && (self.k == n || self.k + 1 == n) {
            // tau(i) = tau(2n-2-i) for i = 1..n-2 and tau(n-1) used once.
            let mid = v[n - 2];
            (0..n - 2).all(|i| v[i] == v[2 * n - 4 - i]) && v.iter().filter(|&&x| x == mid).count() == 1
        } else if m == 2 * n && self.k == n {
            (0..n - 1).all(|i| v[i] == v[2 * n - 3 - i])
        } else {
            false
        }
    }

    fn is_p(&self) -> bool {
        if self.is_r() {
            return false;
        }
        match self.first_asymmetry() {
            Some(p) => self.values[p] < self.values[self.values.len() - 1 - p],
            None => false,
        }
    }
}

impl fmt::Display for SurjectionTau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", MultiIndex(self.values.clone()))
    }
}

fn check_mkn(m: usize, k: usize, n: usize) -> Result<()> {
    if !(n < m && m <= 2 * n) {
        return Err(Error::InvalidParameters(format!(
            "need n < m <= 2n, got m={m}, n={n}"
        )));
    }
    if k == 0 || k > n {
        return Err(Error::InvalidParameters(format!("need 1 <= k <= n, got k={k}, n={n}")));
    }
    Ok(())
}

/// `B_m(k)`: every qualifying surjection, lexicographic.
pub fn enumerate_b(m: usize, k: usize, n: usize) -> Result<Vec<SurjectionTau>> {
    check_mkn(m, k, n)?;
    let mut out = Vec::new();
    if k + n < m {
        return Ok(out);
    }
    let len = m - 2;
    let mut counts = vec![0usize; n + 1];
    let mut cur = Vec::with_capacity(len);
    fill_b(m, k, n, len, &mut counts, &mut cur, &mut out);
    Ok(out)
}

fn fill_b(
    m: usize,
    k: usize,
    n: usize,
    len: usize,
    counts: &mut [usize],
    cur: &mut Vec<usize>,
    out: &mut Vec<SurjectionTau>,
) {
    if cur.len() == len {
        let onto = (1..=n).all(|i| i == k || counts[i] >= 1);
        if onto {
            out.push(SurjectionTau { m, k, n, values: cur.clone() });
        }
        return;
    }
    // prune: remaining slots must cover the still-missing values
    let missing = (1..=n).filter(|&i| i != k && counts[i] == 0).count();
    if missing > len - cur.len() {
        return;
    }
    for v in 1..=n {
        if v == k {
            continue;
        }
        let cap = if v > k { 1 } else { 2 };
        if counts[v] < cap {
            counts[v] += 1;
            cur.push(v);
            fill_b(m, k, n, len, counts, cur, out);
            cur.pop();
            counts[v] -= 1;
        }
    }
}

/// `P_m(k)`: the representatives chosen from each non-symmetric `{tau, tau∘rho}` pair.
pub fn enumerate_p(m: usize, k: usize, n: usize) -> Result<Vec<SurjectionTau>> {
    Ok(enumerate_b(m, k, n)?.into_iter().filter(|t| t.is_p()).collect())
}

/// `R_m(k)`: the symmetric surjections; empty unless `m` is `2n-1` or `2n`.
pub fn enumerate_r(m: usize, k: usize, n: usize) -> Result<Vec<SurjectionTau>> {
    Ok(enumerate_b(m, k, n)?.into_iter().filter(|t| t.is_r()).collect())
}

/// The partner of `phi ∈ R_{2n-1}(n)` in `R_{2n}(n)`: the unique `tau`
/// agreeing with `phi` on `1..n-1`.
pub fn r_partner(phi: &SurjectionTau) -> Result<SurjectionTau> {
    let n = phi.n;
    if phi.m != 2 * n - 1 || phi.k != n || !phi.is_r() {
        return Err(Error::InvalidIndex(format!("{phi} is not in R_(2n-1)(n)")));
    }
    let head = &phi.values[..n - 1];
    let mut values = head.to_vec();
    values.extend(head.iter().rev());
    SurjectionTau::new(2 * n, n, n, values)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn idx(s: &str) -> MultiIndex {
        s.parse().unwrap()
    }

    #[test]
    fn repeat_counts() {
        assert_eq!(idx("1123").repeat_max(), 2);
        assert_eq!(idx("1231223").repeat_max(), 3);
        assert_eq!(MultiIndex::default().repeat_max(), 0);
    }

    #[test]
    fn parse_forms_agree() {
        let a = idx("12233");
        let b: MultiIndex = serde_json::from_str("[1,2,2,3,3]").unwrap();
        let c: MultiIndex = serde_json::from_str("\"12233\"").unwrap();
        assert_eq!(a, b);
        assert_eq!(a, c);
        assert_eq!(MultiIndex::new(vec![1, 10, 2]).to_string(), "1,10,2");
        assert_eq!("1,10,2".parse::<MultiIndex>().unwrap().entries(), &[1, 10, 2]);
        assert!("1a".parse::<MultiIndex>().is_err());
        assert!("102".parse::<MultiIndex>().is_err());
        assert!(idx("124").check(3).is_err());
    }

    #[test]
    fn f_rejects_bad_arity() {
        assert!(enumerate_f(1, 3).is_err());
        assert!(enumerate_f(4, 3).is_err());
    }

    #[test]
    fn b_rejects_bad_m() {
        assert!(enumerate_b(2, 1, 2).is_err());
        assert!(enumerate_b(5, 1, 2).is_err());
        assert!(enumerate_b(4, 3, 2).is_err());
    }

    #[test]
    fn b_empty_below_m_minus_n() {
        assert!(enumerate_b(6, 2, 3).unwrap().is_empty());
        assert!(enumerate_b(4, 1, 2).unwrap().is_empty());
    }

    #[test]
    fn small_families() {
        let b = enumerate_b(4, 2, 2).unwrap();
        assert_eq!(b.len(), 1);
        assert_eq!(b[0].values, vec![1, 1]);
        assert_eq!(enumerate_r(4, 2, 2).unwrap(), b);
        assert!(enumerate_p(4, 2, 2).unwrap().is_empty());

        let t = SurjectionTau::new(5, 3, 3, vec![1, 2, 2]).unwrap();
        assert!(enumerate_b(5, 3, 3).unwrap().contains(&t));
        assert!(enumerate_p(5, 3, 3).unwrap().contains(&t));
        assert_eq!(t.apply_rho().values, vec![2, 2, 1]);
        assert_eq!(t.apply_rho().apply_rho(), t);
        assert_eq!(t.index(), idx("12233"));
    }

    #[test]
    fn r_is_rho_fixed() {
        for n in 2..=4 {
            for t in enumerate_r(2 * n, n, n).unwrap() {
                assert_eq!(t.apply_rho(), t);
            }
        }
    }

    #[test]
    fn r_partner_matches_prefix() {
        for n in 2..=4 {
            let r2n = enumerate_r(2 * n, n, n).unwrap();
            for phi in enumerate_r(2 * n - 1, n, n).unwrap() {
                let tau = r_partner(&phi).unwrap();
                assert!(r2n.contains(&tau));
                assert_eq!(tau.values[..n - 1], phi.values[..n - 1]);
            }
        }
    }
}
