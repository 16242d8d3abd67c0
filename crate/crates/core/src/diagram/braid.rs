//! Braid words and a small builder for tangles made of vertical segments.
//!
//! Strands run top to bottom. `σ_i` (1-based, positive) crosses the strands at
//! positions `i` and `i+1` with the right-hand strand passing over; `σ_i⁻¹`
//! lets the left-hand strand pass over. For downward strands `σ_i` is a
//! positive crossing.

use serde::{Deserialize, Serialize};

use super::{Diagram, LinkDiagram, StringLinkDiagram, Visit};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum BraidKind {
    #[default]
    Closure,
    Stringlink,
}

/// A braid word in Artin generators, with the intended interpretation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BraidWord {
    pub strands: usize,
    pub word: Vec<i64>,
    #[serde(default)]
    pub kind: BraidKind,
}

impl BraidWord {
    pub fn new(strands: usize, word: Vec<i64>) -> Result<Self> {
        let b = BraidWord { strands, word, kind: BraidKind::Closure };
        b.validate()?;
        Ok(b)
    }

    pub fn validate(&self) -> Result<()> {
        if self.strands == 0 {
            return Err(Error::Parse("braid needs at least one strand".into()));
        }
        for &g in &self.word {
            if g == 0 || g.unsigned_abs() as usize >= self.strands {
                return Err(Error::Parse(format!(
                    "generator {g} out of range for {} strands",
                    self.strands
                )));
            }
        }
        Ok(())
    }

    fn weave(&self) -> Result<Weave> {
        self.validate()?;
        let mut w = Weave::new(&vec![true; self.strands]);
        for &g in &self.word {
            w.cross(g.unsigned_abs() as usize - 1, if g > 0 { 1 } else { -1 });
        }
        Ok(w)
    }

    /// Final position of the strand starting at each position (0-based).
    pub fn permutation(&self) -> Vec<usize> {
        let mut pos: Vec<usize> = (0..self.strands).collect();
        for &g in &self.word {
            let i = g.unsigned_abs() as usize - 1;
            pos.swap(i, i + 1);
        }
        let mut end = vec![0; self.strands];
        for (p, &s) in pos.iter().enumerate() {
            end[s] = p;
        }
        end
    }

    pub fn to_string_link(&self) -> Result<StringLinkDiagram> {
        let perm = self.permutation();
        if perm.iter().enumerate().any(|(i, &p)| i != p) {
            return Err(Error::NonPureBraid(perm.iter().map(|p| p + 1).collect()));
        }
        let w = self.weave()?;
        StringLinkDiagram::new(Diagram::new(false, w.signs, w.segments.into_iter().map(|s| s.visits).collect())?)
    }

    /// Braid closure; one component per cycle of the strand permutation,
    /// ordered by smallest starting strand.
    pub fn closure(&self) -> Result<LinkDiagram> {
        let perm = self.permutation();
        let w = self.weave()?;
        let mut seen = vec![false; self.strands];
        let mut components = Vec::new();
        for start in 0..self.strands {
            if seen[start] {
                continue;
            }
            let mut comp = Vec::new();
            let mut s = start;
            while !seen[s] {
                seen[s] = true;
                comp.extend_from_slice(&w.segments[s].visits);
                s = perm[s];
            }
            components.push(comp);
        }
        LinkDiagram::new(Diagram::new(true, w.signs, components)?)
    }

    pub fn to_diagram(&self) -> Result<Diagram> {
        match self.kind {
            BraidKind::Closure => Ok(self.closure()?.diagram().clone()),
            BraidKind::Stringlink => Ok(self.to_string_link()?.diagram().clone()),
        }
    }
}

pub(crate) struct Segment {
    pub down: bool,
    pub visits: Vec<Visit>,
}

/// Vertical segments, each oriented up or down, crossed in braid time.
/// Visits are recorded in braid time, so upward segments must be read backwards.
pub(crate) struct Weave {
    pub signs: Vec<i8>,
    pub segments: Vec<Segment>,
    at: Vec<usize>,
}

impl Weave {
    pub fn new(down: &[bool]) -> Self {
        Weave {
            signs: Vec::new(),
            segments: down.iter().map(|&d| Segment { down: d, visits: Vec::new() }).collect(),
            at: (0..down.len()).collect(),
        }
    }

    pub fn position(&self, segment: usize) -> usize {
        self.at.iter().position(|&s| s == segment).expect("segment exists")
    }

    /// Crosses positions `i` and `i+1` (0-based).
    pub fn cross(&mut self, i: usize, e: i8) {
        let (left, right) = (self.at[i], self.at[i + 1]);
        let (over, under) = if e > 0 { (right, left) } else { (left, right) };
        let flip = self.segments[left].down != self.segments[right].down;
        let sign = if flip { -e } else { e };
        let c = self.signs.len();
        self.signs.push(sign);
        self.segments[over].visits.push(Visit { crossing: c, over: true });
        self.segments[under].visits.push(Visit { crossing: c, over: false });
        self.at.swap(i, i + 1);
    }

    /// Carries segment `mover` over everything to sit next to `target`, clasps
    /// it with `σ^{2e}` and returns. The mover passes under `target` exactly
    /// once, with sign `e` when both run downward.
    pub fn push_loop(&mut self, mover: usize, target: usize, e: i8) {
        let home = self.position(mover);
        let t = self.position(target);
        if t < home {
            while self.position(mover) > t + 1 {
                let p = self.position(mover);
                self.cross(p - 1, 1);
            }
            self.cross(t, e);
            self.cross(t, e);
            while self.position(mover) < home {
                let p = self.position(mover);
                self.cross(p, -1);
            }
        } else {
            while self.position(mover) + 1 < t {
                let p = self.position(mover);
                self.cross(p, -1);
            }
            self.cross(t - 1, e);
            self.cross(t - 1, e);
            while self.position(mover) > home {
                let p = self.position(mover);
                self.cross(p - 1, 1);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn permutation_and_purity() {
        let b = BraidWord::new(3, vec![1, 2]).unwrap();
        assert!(matches!(b.to_string_link(), Err(Error::NonPureBraid(_))));
        assert_eq!(b.closure().unwrap().n(), 1);
        let p = BraidWord::new(3, vec![1, 1, 2, -2]).unwrap();
        assert_eq!(p.to_string_link().unwrap().n(), 3);
    }

    #[test]
    fn signs_follow_generators() {
        let b = BraidWord::new(2, vec![1, -1, 1]).unwrap();
        let l = b.closure().unwrap();
        assert_eq!(l.diagram().signs(), &[1, -1, 1]);
    }

    #[test]
    fn rejects_out_of_range_generators() {
        assert!(BraidWord::new(2, vec![2]).is_err());
        assert!(BraidWord::new(2, vec![0]).is_err());
        assert!(BraidWord::new(0, vec![]).is_err());
    }

    #[test]
    fn push_loop_is_pure() {
        let mut w = Weave::new(&[true; 4]);
        w.push_loop(3, 0, 1);
        w.push_loop(0, 2, -1);
        assert_eq!(w.at, vec![0, 1, 2, 3]);
        assert_eq!(w.signs.len(), 10);
    }
}
