//! Milnor invariants: exact `μ(I)` for string links and residues `μ̄(I)` modulo
//! `Δ(I)` for links.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::diagram::Diagram;
use crate::error::{Error, Result};
use crate::magnus::TruncatedSeries;
use crate::multiindex::{enumerate_indices, repeat_max, MultiIndex};
use crate::wirtinger::WirtingerPresentation;

/// Which subsequences enter the indeterminacy `Δ(I)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DeltaMode {
    /// Proper subsequences together with all their cyclic rotations.
    #[default]
    MilnorCyclic,
    /// Proper subsequences only.
    PaperStrict,
}

impl FromStr for DeltaMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "milnor-cyclic" => Ok(DeltaMode::MilnorCyclic),
            "paper-strict" => Ok(DeltaMode::PaperStrict),
            _ => Err(Error::Parse(format!("unknown delta mode {s:?}"))),
        }
    }
}

impl fmt::Display for DeltaMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DeltaMode::MilnorCyclic => "milnor-cyclic",
            DeltaMode::PaperStrict => "paper-strict",
        })
    }
}

/// A residue class; modulus 0 means an exact integer.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Residue {
    #[serde(serialize_with = "big_json")]
    pub value: BigInt,
    #[serde(serialize_with = "big_json")]
    pub modulus: BigInt,
}

impl Residue {
    pub fn new(value: BigInt, modulus: BigInt) -> Self {
        let modulus = modulus.abs();
        let value = if modulus.is_zero() { value } else { value.mod_floor(&modulus) };
        Residue { value, modulus }
    }

    pub fn exact(value: BigInt) -> Self {
        Residue { value, modulus: BigInt::zero() }
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.modulus)
    }
}

/// JSON numbers when they fit in an `i64`, decimal strings otherwise.
fn big_json<S: Serializer>(v: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    match i64::try_from(v) {
        Ok(x) => s.serialize_i64(x),
        Err(_) => s.serialize_str(&v.to_string()),
    }
}

struct Longitudes {
    q: usize,
    max_r: usize,
    series: Vec<TruncatedSeries>,
}

/// Evaluates Milnor invariants of one diagram, caching longitude expansions.
pub struct MilnorEngine {
    presentation: WirtingerPresentation,
    closed: bool,
    n: usize,
    cache: RwLock<Vec<Arc<Longitudes>>>,
}

impl MilnorEngine {
    pub fn new(d: &Diagram) -> Self {
        MilnorEngine {
            presentation: WirtingerPresentation::new(d),
            closed: d.is_closed(),
            n: d.component_count(),
            cache: RwLock::new(Vec::new()),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    fn longitudes(&self, q: usize, max_r: usize) -> Result<Arc<Longitudes>> {
        let max_r = max_r.min(q);
        {
            let cache = self.cache.read().expect("cache lock");
            if let Some(l) = cache.iter().find(|l| l.q >= q && l.max_r >= max_r) {
                return Ok(l.clone());
            }
        }
        let series = self.presentation.longitude_series(q, max_r, q + 1)?;
        let entry = Arc::new(Longitudes { q, max_r, series });
        let mut cache = self.cache.write().expect("cache lock");
        cache.retain(|l| !(l.q <= q && l.max_r <= max_r));
        cache.push(entry.clone());
        Ok(entry)
    }

    /// Precomputes everything needed for indices up to `max_len` with `r(I) <= max_r`.
    pub fn prepare(&self, max_len: usize, max_r: usize) -> Result<()> {
        if max_len >= 2 {
            self.longitudes(max_len - 1, max_r)?;
        }
        Ok(())
    }

    fn check(&self, index: &MultiIndex) -> Result<()> {
        index.check(self.n)?;
        if index.len() < 2 {
            return Err(Error::InvalidIndex(format!("{index} has length < 2")));
        }
        Ok(())
    }

    /// `μ(I)`: coefficient of `X_{i_1} ... X_{i_{m-1}}` in the longitude of `i_m`,
    /// read from the diagram cut open at its base points.
    pub fn mu(&self, index: &MultiIndex) -> Result<BigInt> {
        self.check(index)?;
        let prefix = index.prefix();
        let l = self.longitudes(prefix.len(), repeat_max(prefix))?;
        l.series[index.last().expect("non-empty") - 1].coefficient(prefix)
    }

    fn mu_entries(&self, entries: &[usize]) -> Result<BigInt> {
        self.mu(&MultiIndex::new(entries.to_vec()))
    }

    /// `Δ(I)`: gcd of `μ(J)` over proper subsequences `J`, `|J| >= 2`.
    pub fn delta(&self, index: &MultiIndex, mode: DeltaMode) -> Result<BigInt> {
        self.check(index)?;
        let mut g = BigInt::zero();
        for j in subsequences(index.entries(), mode) {
            g = g.gcd(&self.mu_entries(&j)?);
            if g == BigInt::from(1) {
                break;
            }
        }
        Ok(g)
    }

    /// `μ̄(I)` as a residue modulo `Δ(I)`.
    pub fn mubar(&self, index: &MultiIndex, mode: DeltaMode) -> Result<Residue> {
        let value = self.mu(index)?;
        Ok(Residue::new(value, self.delta(index, mode)?))
    }

    /// Exact `μ` for string links, `μ̄` for links.
    pub fn invariant(&self, index: &MultiIndex, mode: DeltaMode) -> Result<Residue> {
        if self.closed {
            self.mubar(index, mode)
        } else {
            Ok(Residue::exact(self.mu(index)?))
        }
    }
}

/// Distinct proper subsequences of length at least 2, optionally closed under rotation.
pub fn subsequences(entries: &[usize], mode: DeltaMode) -> BTreeSet<Vec<usize>> {
    let m = entries.len();
    let mut out = BTreeSet::new();
    for mask in 1u64..(1u64 << m) - 1 {
        if mask.count_ones() < 2 {
            continue;
        }
        let j: Vec<usize> = (0..m).filter(|b| mask >> b & 1 == 1).map(|b| entries[b]).collect();
        if mode == DeltaMode::MilnorCyclic {
            for s in 0..j.len() {
                let mut r = j.clone();
                r.rotate_left(s);
                out.insert(r);
            }
        } else {
            out.insert(j);
        }
    }
    out
}

pub fn mu_string(l: &crate::diagram::StringLinkDiagram, index: &MultiIndex) -> Result<BigInt> {
    MilnorEngine::new(l.diagram()).mu(index)
}

pub fn delta(l: &crate::diagram::LinkDiagram, index: &MultiIndex, mode: DeltaMode) -> Result<BigInt> {
    MilnorEngine::new(l.diagram()).delta(index, mode)
}

pub fn mubar(l: &crate::diagram::LinkDiagram, index: &MultiIndex, mode: DeltaMode) -> Result<Residue> {
    MilnorEngine::new(l.diagram()).mubar(index, mode)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TableEntry {
    pub index: MultiIndex,
    #[serde(serialize_with = "big_json")]
    pub value: BigInt,
    #[serde(serialize_with = "big_json")]
    pub modulus: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvariantTable {
    pub subject: String,
    pub kind: String,
    pub components: usize,
    pub max_length: usize,
    pub max_r: usize,
    pub delta_mode: DeltaMode,
    pub entries: Vec<TableEntry>,
}

impl InvariantTable {
    pub fn get(&self, index: &MultiIndex) -> Option<&TableEntry> {
        self.entries.iter().find(|e| &e.index == index)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    /// Aligned `index: value (mod d)` lines; only nonzero rows when `nonzero_only`.
    pub fn to_text(&self, nonzero_only: bool) -> String {
        let rows: Vec<&TableEntry> = self.entries.iter().filter(|e| !nonzero_only || !e.value.is_zero()).collect();
        let width = rows.iter().map(|e| e.index.to_string().len()).max().unwrap_or(0);
        let mut out = format!(
            "# {} ({}, {} components, |I| <= {}, r <= {}, {})\n",
            self.subject, self.kind, self.components, self.max_length, self.max_r, self.delta_mode
        );
        for e in rows {
            let index = format!("{}:", e.index);
            if self.kind == "link" {
                out += &format!("{index:<w$} {} (mod {})\n", e.value, e.modulus, w = width + 1);
            } else {
                out += &format!("{index:<w$} {}\n", e.value, w = width + 1);
            }
        }
        out
    }
}

/// Every index with `2 <= |I| <= max_len` and `r(I) <= max_r`, ordered by length then lexicographically.
pub fn table(d: &Diagram, subject: &str, max_len: usize, max_r: usize, mode: DeltaMode) -> Result<InvariantTable> {
    let engine = MilnorEngine::new(d);
    table_with(&engine, subject, max_len, max_r, mode)
}

pub fn table_with(
    engine: &MilnorEngine,
    subject: &str,
    max_len: usize,
    max_r: usize,
    mode: DeltaMode,
) -> Result<InvariantTable> {
    if max_len < 2 {
        return Err(Error::InvalidParameters("max length must be at least 2".into()));
    }
    engine.prepare(max_len, max_r)?;
    let indices = enumerate_indices(engine.n(), 2, max_len, max_r);
    let entries = indices
        .into_par_iter()
        .map(|index| {
            let r = engine.invariant(&index, mode)?;
            Ok(TableEntry { index, value: r.value, modulus: r.modulus })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(InvariantTable {
        subject: subject.to_string(),
        kind: if engine.is_closed() { "link" } else { "stringlink" }.to_string(),
        components: engine.n(),
        max_length: max_len,
        max_r,
        delta_mode: mode,
        entries,
    })
}
