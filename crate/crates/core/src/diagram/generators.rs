//! Generator string links built from commutator words.
//!
//! A strand is threaded around the others by point-pushing loops: for each
//! letter `m_j^e` the moving strand travels over everything to strand `j`,
//! clasps it once and travels back. Letters are applied last to first so that
//! the zero-framed longitude of the moving strand reads the word left to right.

use super::{Diagram, LinkDiagram, StringLinkDiagram, Weave};
use crate::error::{Error, Result};
use crate::freegroup::{iterated_commutator, GroupWord, Letter};
use crate::multiindex::{InjectionPi, SurjectionTau};

/// Pure string link whose `target` strand has longitude `w` (1-based target).
pub fn commutator_tangle(w: &GroupWord, target: usize, n: usize) -> Result<StringLinkDiagram> {
    if target == 0 || target > n {
        return Err(Error::ComponentOutOfRange(target, n));
    }
    if w.rank() != n {
        return Err(Error::RankMismatch(w.rank(), n));
    }
    if w.mentions(target) {
        return Err(Error::InvalidParameters(format!("word mentions the target meridian m_{target}")));
    }
    let mut weave = Weave::new(&vec![true; n]);
    for l in w.letters().iter().rev() {
        weave.push_loop(target - 1, l.generator - 1, l.sign());
    }
    StringLinkDiagram::new(Diagram::new(
        false,
        weave.signs,
        weave.segments.into_iter().map(|s| s.visits).collect(),
    )?)
}

/// Like [`commutator_tangle`], but `w` may mention `m_target`. Strand `target`
/// is folded into a down-up-down zig-zag; the last leg is threaded along `w`,
/// with `m_target` read as the meridian of the first leg.
pub fn self_clasp_tangle(w: &GroupWord, target: usize, n: usize) -> Result<StringLinkDiagram> {
    if target == 0 || target > n {
        return Err(Error::ComponentOutOfRange(target, n));
    }
    if w.rank() != n {
        return Err(Error::RankMismatch(w.rank(), n));
    }
    let k = target - 1;
    let (first, middle, last) = (k, k + 1, k + 2);
    let mut down = vec![true; n + 2];
    down[middle] = false;
    let segment = |j: usize| if j < k { j } else if j == k { first } else { j + 2 };
    let mut weave = Weave::new(&down);
    for l in w.letters().iter().rev() {
        weave.push_loop(last, segment(l.generator - 1), l.sign());
    }
    let mut segs: Vec<_> = weave.segments.into_iter().map(|s| s.visits).collect();
    let tail = segs.split_off(middle);
    let mut tail = tail.into_iter();
    let mut up = tail.next().expect("middle leg");
    let down_leg = tail.next().expect("last leg");
    up.reverse();
    segs[k].extend(up);
    segs[k].extend(down_leg);
    segs.extend(tail);
    StringLinkDiagram::new(Diagram::new(false, weave.signs, segs)?)
}

/// `V_π^{±1}`: strand `π(k)` threaded along `[m_π(1), [..., m_π(k-1)]]`.
pub fn make_v_pi(pi: &InjectionPi, exponent: i8) -> Result<StringLinkDiagram> {
    if !pi.is_valid() {
        return Err(Error::InvalidIndex(format!("{pi}")));
    }
    let k = pi.arity();
    let letters: Vec<Letter> = pi.values[..k - 1].iter().map(|&g| Letter::new(g, 1)).collect();
    let mut w = iterated_commutator(pi.n, &letters)?;
    if exponent < 0 {
        w = w.inverse();
    }
    commutator_tangle(&w, pi.values[k - 1], pi.n)
}

/// `V_τ^{±1}`: strand `k` threaded along `[m_τ(1), [..., [m_τ(m-2), m_k]]]`.
pub fn make_v_tau(tau: &SurjectionTau, exponent: i8) -> Result<StringLinkDiagram> {
    if !tau.in_b() {
        return Err(Error::InvalidIndex(format!("{tau}")));
    }
    let mut letters: Vec<Letter> = tau.values.iter().map(|&g| Letter::new(g, 1)).collect();
    letters.push(Letter::new(tau.k, 1));
    let mut w = iterated_commutator(tau.n, &letters)?;
    if exponent < 0 {
        w = w.inverse();
    }
    self_clasp_tangle(&w, tau.k, tau.n)
}

/// `n`-component Milnor link: closure of `V_(1 2 ... n)`.
pub fn make_milnor_link(n: usize) -> Result<LinkDiagram> {
    if n < 2 {
        return Err(Error::InvalidParameters("Milnor link needs n >= 2".into()));
    }
    let pi = InjectionPi::new(n, (1..=n).collect())?;
    Ok(make_v_pi(&pi, 1)?.closure())
}

/// `l^e` under stacking; `l^0` is the trivial string link and negative
/// powers use `inverse` for each factor.
pub fn power(l: &StringLinkDiagram, inverse: &StringLinkDiagram, e: i64) -> Result<StringLinkDiagram> {
    let factor = if e < 0 { inverse } else { l };
    let mut acc = StringLinkDiagram::trivial(l.n());
    for _ in 0..e.unsigned_abs() {
        acc = acc.stack(factor)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_word_gives_unit() {
        let t = commutator_tangle(&GroupWord::identity(3), 2, 3).unwrap();
        assert_eq!(t, StringLinkDiagram::trivial(3));
    }

    #[test]
    fn single_letter_links_once() {
        let t = commutator_tangle(&GroupWord::parse(2, "1").unwrap(), 2, 2).unwrap();
        let d = t.diagram();
        assert_eq!(d.linking_under(1, 0), 1);
        assert_eq!(d.linking_under(0, 1), 1);
        assert_eq!(d.self_writhe(1), 0);
    }

    #[test]
    fn rejects_target_letters() {
        let w = GroupWord::parse(3, "1 3").unwrap();
        assert!(commutator_tangle(&w, 3, 3).is_err());
        assert!(commutator_tangle(&w, 4, 3).is_err());
        assert!(self_clasp_tangle(&w, 3, 3).is_ok());
    }

    #[test]
    fn milnor_link_needs_two_components() {
        assert!(make_milnor_link(1).is_err());
        assert_eq!(make_milnor_link(4).unwrap().n(), 4);
    }

    #[test]
    fn v_tau_is_pure_and_keeps_component_count() {
        let tau = SurjectionTau::new(5, 3, 3, vec![1, 2, 2]).unwrap();
        let v = make_v_tau(&tau, 1).unwrap();
        assert_eq!(v.n(), 3);
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    assert_eq!(v.diagram().linking_under(i, j), 0);
                }
            }
        }
    }
}
