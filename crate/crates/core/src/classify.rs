//! Link-homotopy normal forms of string links and self-Δ-equivalence decisions for links.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::diagram::{make_v_pi, make_v_tau, power, LinkDiagram, StringLinkDiagram};
use crate::error::{Error, Result};
use crate::invariants::{DeltaMode, MilnorEngine, Residue};
use crate::multiindex::{
    enumerate_f, enumerate_indices, enumerate_p, enumerate_r, r_partner, InjectionPi, MultiIndex, SurjectionTau,
};

fn as_text<T: fmt::Display, S: Serializer>(v: &T, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

fn small(v: &BigInt, what: &str) -> Result<i64> {
    v.to_i64().ok_or_else(|| Error::Inconsistent(format!("{what} exponent {v} does not fit in 64 bits")))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NormalFormEntry {
    #[serde(serialize_with = "as_text")]
    pub pi: InjectionPi,
    pub exponent: i64,
}

/// Exponents `x_π` of `∏ V_π^{x_π}`, ordered by arity, then lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NormalForm {
    pub n: usize,
    pub entries: Vec<NormalFormEntry>,
}

impl NormalForm {
    pub fn exponent(&self, pi: &InjectionPi) -> Option<i64> {
        self.entries.iter().find(|e| &e.pi == pi).map(|e| e.exponent)
    }

    pub fn is_trivial(&self) -> bool {
        self.entries.iter().all(|e| e.exponent == 0)
    }

    /// The string link `∏ V_π^{x_π}` in entry order.
    pub fn build(&self) -> Result<StringLinkDiagram> {
        let mut acc = StringLinkDiagram::trivial(self.n);
        for e in &self.entries {
            if e.exponent != 0 {
                acc = acc.stack(&v_pi_power(&e.pi, e.exponent)?)?;
            }
        }
        Ok(acc)
    }
}

fn v_pi_power(pi: &InjectionPi, e: i64) -> Result<StringLinkDiagram> {
    power(&make_v_pi(pi, 1)?, &make_v_pi(pi, -1)?, e)
}

fn v_tau_power(tau: &SurjectionTau, e: i64) -> Result<StringLinkDiagram> {
    power(&make_v_tau(tau, 1)?, &make_v_tau(tau, -1)?, e)
}

/// Normal form up to link-homotopy: level by level, the exponents are the
/// differences between `μ` of the input and of the partial product built so far.
pub fn homotopy_normal_form(l: &StringLinkDiagram) -> Result<NormalForm> {
    let n = l.n();
    let target = MilnorEngine::new(l.diagram());
    target.prepare(n, 1)?;
    let mut partial = StringLinkDiagram::trivial(n);
    let mut entries = Vec::new();
    for k in 2..=n {
        let measured = MilnorEngine::new(partial.diagram());
        measured.prepare(k, 1)?;
        let mut level = StringLinkDiagram::trivial(n);
        for pi in enumerate_f(k, n)? {
            let x = target.mu(&pi.index())? - measured.mu(&pi.index())?;
            let exponent = small(&x, "normal form")?;
            if exponent != 0 {
                level = level.stack(&v_pi_power(&pi, exponent)?)?;
            }
            entries.push(NormalFormEntry { pi, exponent });
        }
        partial = partial.stack(&level)?;
    }
    Ok(NormalForm { n, entries })
}

/// Equality of `μ(I)` for all `I` with `r(I) = 1` and `2 <= |I| <= k`.
pub fn c1s_ck_equivalent(a: &StringLinkDiagram, b: &StringLinkDiagram, k: usize) -> Result<bool> {
    if a.n() != b.n() {
        return Err(Error::ComponentMismatch(a.n(), b.n()));
    }
    if k == 0 || k > a.n() {
        return Err(Error::InvalidParameters(format!("k = {k} outside 1..={}", a.n())));
    }
    if k < 2 {
        return Ok(true);
    }
    let (ea, eb) = (MilnorEngine::new(a.diagram()), MilnorEngine::new(b.diagram()));
    ea.prepare(k, 1)?;
    eb.prepare(k, 1)?;
    let indices = enumerate_indices(a.n(), 2, k, 1);
    let differs = indices
        .par_iter()
        .map(|i| Ok(ea.mu(i)? != eb.mu(i)?))
        .collect::<Result<Vec<bool>>>()?;
    Ok(!differs.into_iter().any(|d| d))
}

pub fn link_homotopic(a: &StringLinkDiagram, b: &StringLinkDiagram) -> Result<bool> {
    if a.n() != b.n() {
        return Err(Error::ComponentMismatch(a.n(), b.n()));
    }
    if a.n() < 2 {
        return Ok(true);
    }
    c1s_ck_equivalent(a, b, a.n())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ResidueEntry {
    pub index: MultiIndex,
    #[serde(flatten)]
    pub residue: Residue,
}

/// `μ̄(I)` for indices of increasing length, stopping at the first length with
/// a nonzero value. Returns all values computed and the first nonzero one.
fn scan(
    engine: &MilnorEngine,
    max_len: usize,
    max_r: usize,
    mode: DeltaMode,
) -> Result<(Vec<ResidueEntry>, Option<ResidueEntry>)> {
    let mut all = Vec::new();
    for len in 2..=max_len {
        engine.prepare(len, max_r)?;
        let level = enumerate_indices(engine.n(), len, len, max_r)
            .into_par_iter()
            .map(|index| Ok(ResidueEntry { residue: engine.invariant(&index, mode)?, index }))
            .collect::<Result<Vec<_>>>()?;
        let hit = level.iter().find(|e| !e.residue.is_zero()).cloned();
        all.extend(level);
        if hit.is_some() {
            return Ok((all, hit));
        }
    }
    Ok((all, None))
}

/// Values `μ̄(J)`, `|J| = 2n`, `r(J) = 2`, present only when all `μ̄(I)` with
/// `|I| <= 2n-1`, `r(I) <= 2` vanish.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SelfDeltaVector {
    pub n: usize,
    pub hypothesis_ok: bool,
    pub obstruction: Option<ResidueEntry>,
    pub entries: Vec<ResidueEntry>,
}

impl SelfDeltaVector {
    pub fn get(&self, index: &MultiIndex) -> Option<&Residue> {
        self.entries.iter().find(|e| &e.index == index).map(|e| &e.residue)
    }
}

pub fn selfdelta_vector(l: &LinkDiagram, mode: DeltaMode) -> Result<SelfDeltaVector> {
    selfdelta_vector_with(&MilnorEngine::new(l.diagram()), mode)
}

fn selfdelta_vector_with(engine: &MilnorEngine, mode: DeltaMode) -> Result<SelfDeltaVector> {
    let n = engine.n();
    let (_, obstruction) = scan(engine, 2 * n - 1, 2, mode)?;
    if obstruction.is_some() {
        return Ok(SelfDeltaVector { n, hypothesis_ok: false, obstruction, entries: Vec::new() });
    }
    engine.prepare(2 * n, 2)?;
    let entries = enumerate_indices(n, 2 * n, 2 * n, 2)
        .into_par_iter()
        .map(|index| Ok(ResidueEntry { residue: engine.invariant(&index, mode)?, index }))
        .collect::<Result<Vec<_>>>()?;
    Ok(SelfDeltaVector { n, hypothesis_ok: true, obstruction: None, entries })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Yes,
    No,
    Undecided,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// Two residues are provably different when their values differ modulo the
/// gcd of their moduli.
pub fn residues_differ(a: &Residue, b: &Residue) -> bool {
    let g = a.modulus.gcd(&b.modulus);
    let d = &a.value - &b.value;
    if g.is_zero() {
        !d.is_zero()
    } else {
        !d.mod_floor(&g).is_zero()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SelfDeltaDecision {
    pub verdict: Verdict,
    pub left: SelfDeltaVector,
    pub right: SelfDeltaVector,
    /// An `r <= 2` index separating the two links, if one was found.
    pub witness: Option<MultiIndex>,
}

pub fn selfdelta_equivalent(a: &LinkDiagram, b: &LinkDiagram, mode: DeltaMode) -> Result<SelfDeltaDecision> {
    if a.n() != b.n() {
        return Err(Error::ComponentMismatch(a.n(), b.n()));
    }
    let (ea, eb) = (MilnorEngine::new(a.diagram()), MilnorEngine::new(b.diagram()));
    let left = selfdelta_vector_with(&ea, mode)?;
    let right = selfdelta_vector_with(&eb, mode)?;
    let n = a.n();
    let witness = if left.hypothesis_ok && right.hypothesis_ok {
        left.entries
            .iter()
            .zip(&right.entries)
            .find(|(x, y)| residues_differ(&x.residue, &y.residue))
            .map(|(x, _)| x.index.clone())
    } else {
        ea.prepare(2 * n, 2)?;
        eb.prepare(2 * n, 2)?;
        let indices = enumerate_indices(n, 2, 2 * n, 2);
        let found = indices
            .par_iter()
            .map(|i| Ok(residues_differ(&ea.invariant(i, mode)?, &eb.invariant(i, mode)?)))
            .collect::<Result<Vec<bool>>>()?;
        indices.into_iter().zip(found).find(|(_, d)| *d).map(|(i, _)| i)
    };
    let verdict = match (&witness, left.hypothesis_ok && right.hypothesis_ok) {
        (Some(_), _) => Verdict::No,
        (None, true) => Verdict::Yes,
        (None, false) => Verdict::Undecided,
    };
    Ok(SelfDeltaDecision { verdict, left, right, witness })
}

/// Whether `μ̄(I) = 0` for every `I` with `r(I) = 1`, i.e. whether the link
/// is link-homotopic to a trivial link.
pub fn homotopy_trivial(l: &LinkDiagram, mode: DeltaMode) -> Result<bool> {
    let engine = MilnorEngine::new(l.diagram());
    Ok(scan(&engine, l.n(), 1, mode)?.1.is_none())
}

/// Whether `μ̄(I) = 0` for every `I` with `r(I) <= 2` and `|I| <= 2n`.
pub fn selfdelta_trivial(l: &LinkDiagram, mode: DeltaMode) -> Result<bool> {
    let engine = MilnorEngine::new(l.diagram());
    Ok(scan(&engine, 2 * l.n(), 2, mode)?.1.is_none())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TauExponent {
    #[serde(serialize_with = "as_text")]
    pub tau: SurjectionTau,
    pub exponent: i64,
}

/// Exponents of a representative `cl(L' * L'')` with
/// `L' = ∏ V_φ^{ε(φ)}` over `R_{2n-1}(n)` and
/// `L'' = ∏ V_τ^{z_τ}` over `R_{2n}(n)` followed by `∏ V_η^{y_η}` over `P_{2n}(n)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BrunnianRep {
    pub n: usize,
    pub epsilon: Vec<TauExponent>,
    pub r_exponents: Vec<TauExponent>,
    pub p_exponents: Vec<TauExponent>,
}

impl BrunnianRep {
    pub fn build_string_link(&self) -> Result<StringLinkDiagram> {
        let mut acc = StringLinkDiagram::trivial(self.n);
        for e in self.epsilon.iter().chain(&self.r_exponents).chain(&self.p_exponents) {
            if e.exponent != 0 {
                acc = acc.stack(&v_tau_power(&e.tau, e.exponent)?)?;
            }
        }
        Ok(acc)
    }

    pub fn build(&self) -> Result<LinkDiagram> {
        Ok(self.build_string_link()?.closure())
    }
}

/// Representative of the self-Δ class of a Brunnian link whose `r <= 2`
/// invariants vanish up to length `2n-1`. Brunnian-ness is not checked.
pub fn brunnian_representative(l: &LinkDiagram, mode: DeltaMode) -> Result<BrunnianRep> {
    let n = l.n();
    if n < 2 {
        return Err(Error::InvalidParameters("need at least two components".into()));
    }
    let v = selfdelta_vector(l, mode)?;
    if !v.hypothesis_ok {
        let at = v.obstruction.as_ref().map(|o| o.index.to_string()).unwrap_or_default();
        return Err(Error::Hypothesis(format!("mu-bar({at}) is nonzero")));
    }
    let exact = |tau: &SurjectionTau| -> Result<BigInt> {
        let r = v
            .get(&tau.index())
            .ok_or_else(|| Error::Inconsistent(format!("missing entry for {}", tau.index())))?;
        if !r.modulus.is_zero() {
            return Err(Error::Inconsistent(format!("mu-bar({}) has modulus {}", tau.index(), r.modulus)));
        }
        Ok(r.value.clone())
    };

    let mut epsilon = Vec::new();
    for phi in enumerate_r(2 * n - 1, n, n)? {
        let partner = r_partner(&phi)?;
        let odd = exact(&partner)?.is_odd();
        epsilon.push(TauExponent { tau: phi, exponent: odd as i64 });
    }
    let mut l_prime = StringLinkDiagram::trivial(n);
    for e in &epsilon {
        if e.exponent != 0 {
            l_prime = l_prime.stack(&make_v_tau(&e.tau, 1)?)?;
        }
    }
    let measured = MilnorEngine::new(l_prime.diagram());
    measured.prepare(2 * n, 2)?;

    let mut r_exponents = Vec::new();
    for tau in enumerate_r(2 * n, n, n)? {
        let diff = exact(&tau)? - measured.mu(&tau.index())?;
        if diff.is_odd() {
            return Err(Error::Inconsistent(format!(
                "parity obstruction at {}: difference {diff} is odd",
                tau.index()
            )));
        }
        let exponent = small(&(diff / 2), "R")?;
        r_exponents.push(TauExponent { tau, exponent });
    }
    let mut p_exponents = Vec::new();
    for eta in enumerate_p(2 * n, n, n)? {
        let exponent = small(&exact(&eta)?, "P")?;
        p_exponents.push(TauExponent { tau: eta, exponent });
    }
    Ok(BrunnianRep { n, epsilon, r_exponents, p_exponents })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Cor2Report {
    pub selfdelta_trivial: bool,
    pub cable_homotopy_trivial: bool,
    pub consistent: bool,
    /// First nonzero `r <= 2` invariant of the link, if any.
    pub link_witness: Option<ResidueEntry>,
    /// First nonzero `r = 1` invariant of the doubled link, if any.
    pub cable_witness: Option<ResidueEntry>,
}

/// Compares self-Δ triviality of `L` with link-homotopy triviality of its
/// zero-framed 2-parallel, each decided from its own invariants.
pub fn cor2_consistency(l: &LinkDiagram, mode: DeltaMode) -> Result<Cor2Report> {
    let n = l.n();
    let link_witness = scan(&MilnorEngine::new(l.diagram()), 2 * n, 2, mode)?.1;
    let (doubled, _) = l.cable(&vec![2; n])?;
    let cable_witness = scan(&MilnorEngine::new(doubled.diagram()), 2 * n, 1, mode)?.1;
    let selfdelta_trivial = link_witness.is_none();
    let cable_homotopy_trivial = cable_witness.is_none();
    Ok(Cor2Report {
        selfdelta_trivial,
        cable_homotopy_trivial,
        consistent: selfdelta_trivial == cable_homotopy_trivial,
        link_witness,
        cable_witness,
    })
}
