//! Oriented link and string-link diagrams.
//!
//! A diagram is stored as signed Gauss data: every component is the ordered
//! list of crossings it passes through (over or under), and every crossing
//! carries its sign. Crossing `+1` is right-handed: rotating the under-strand
//! counterclockwise onto the over-strand aligns orientations.
//!
//! Closed components start at their base point. String-link components run
//! from the top endpoint to the bottom endpoint.

mod braid;
mod generators;
mod pd;

pub use braid::{BraidKind, BraidWord};
pub use generators::{
    commutator_tangle, make_milnor_link, make_v_pi, make_v_tau, power, self_clasp_tangle,
};
pub use pd::{parse_diagram_file, DiagramFile, LinkFile, ParsedDiagram};
pub(crate) use braid::Weave;

use crate::error::{Error, Result};

/// One passage of a component through a crossing.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Visit {
    pub crossing: usize,
    pub over: bool,
}

/// Where a crossing sits: the component and position of its over and under passages.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CrossingSite {
    pub sign: i8,
    pub over: (usize, usize),
    pub under: (usize, usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagram {
    closed: bool,
    signs: Vec<i8>,
    components: Vec<Vec<Visit>>,
}

impl Diagram {
    pub fn new(closed: bool, signs: Vec<i8>, components: Vec<Vec<Visit>>) -> Result<Self> {
        let d = Diagram { closed, signs, components };
        d.validate()?;
        Ok(d)
    }

    pub fn trivial(closed: bool, n: usize) -> Self {
        Diagram { closed, signs: Vec::new(), components: vec![Vec::new(); n] }
    }

    fn validate(&self) -> Result<()> {
        if let Some(c) = self.signs.iter().position(|s| *s != 1 && *s != -1) {
            return Err(Error::InvalidDiagram(format!("crossing {c} has sign {}", self.signs[c])));
        }
        let mut over = vec![0usize; self.signs.len()];
        let mut under = vec![0usize; self.signs.len()];
        for comp in &self.components {
            for v in comp {
                if v.crossing >= self.signs.len() {
                    return Err(Error::InvalidDiagram(format!("unknown crossing {}", v.crossing)));
                }
                if v.over {
                    over[v.crossing] += 1;
                } else {
                    under[v.crossing] += 1;
                }
            }
        }
        for c in 0..self.signs.len() {
            if over[c] != 1 || under[c] != 1 {
                return Err(Error::InvalidDiagram(format!(
                    "crossing {c} visited {} times over and {} times under",
                    over[c], under[c]
                )));
            }
        }
        Ok(())
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn component_count(&self) -> usize {
        self.components.len()
    }

    pub fn crossing_count(&self) -> usize {
        self.signs.len()
    }

    pub fn sign(&self, crossing: usize) -> i8 {
        self.signs[crossing]
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    pub fn components(&self) -> &[Vec<Visit>] {
        &self.components
    }

    pub fn sites(&self) -> Vec<CrossingSite> {
        let mut sites = vec![
            CrossingSite { sign: 0, over: (usize::MAX, 0), under: (usize::MAX, 0) };
            self.signs.len()
        ];
        for (ci, comp) in self.components.iter().enumerate() {
            for (pos, v) in comp.iter().enumerate() {
                let s = &mut sites[v.crossing];
                s.sign = self.signs[v.crossing];
                if v.over {
                    s.over = (ci, pos);
                } else {
                    s.under = (ci, pos);
                }
            }
        }
        sites
    }

    /// Signed count of crossings of component `i` with itself.
    pub fn self_writhe(&self, i: usize) -> i64 {
        let sites = self.sites();
        self.components[i]
            .iter()
            .filter(|v| !v.over && sites[v.crossing].over.0 == i)
            .map(|v| self.signs[v.crossing] as i64)
            .sum()
    }

    /// Sum of signs of crossings where component `i` passes under component `j`.
    pub fn linking_under(&self, i: usize, j: usize) -> i64 {
        let sites = self.sites();
        self.components[i]
            .iter()
            .filter(|v| !v.over && sites[v.crossing].over.0 == j)
            .map(|v| self.signs[v.crossing] as i64)
            .sum()
    }

    /// Renumbers crossings by first appearance along the components, so that
    /// two diagrams differing only by crossing labels compare equal.
    pub fn canonical(&self) -> Diagram {
        let mut map = vec![usize::MAX; self.signs.len()];
        let mut next = 0;
        for comp in &self.components {
            for v in comp {
                if map[v.crossing] == usize::MAX {
                    map[v.crossing] = next;
                    next += 1;
                }
            }
        }
        let mut signs = vec![0i8; self.signs.len()];
        for (old, &new) in map.iter().enumerate() {
            signs[new] = self.signs[old];
        }
        let components = self
            .components
            .iter()
            .map(|c| c.iter().map(|v| Visit { crossing: map[v.crossing], over: v.over }).collect())
            .collect();
        Diagram { closed: self.closed, signs, components }
    }

    /// Appends `other`'s crossings with fresh labels; returns the label offset.
    fn absorb_signs(&mut self, other: &Diagram) -> usize {
        let offset = self.signs.len();
        self.signs.extend_from_slice(&other.signs);
        offset
    }

    /// Inserts a Reidemeister-I kink of the given sign at `position` on component `i`.
    pub fn with_kink(&self, i: usize, position: usize, sign: i8) -> Result<Diagram> {
        if i >= self.components.len() {
            return Err(Error::ComponentOutOfRange(i + 1, self.components.len()));
        }
        let mut d = self.clone();
        let c = d.signs.len();
        d.signs.push(if sign < 0 { -1 } else { 1 });
        let pos = position.min(d.components[i].len());
        d.components[i].splice(pos..pos, [Visit { crossing: c, over: true }, Visit { crossing: c, over: false }]);
        Ok(d)
    }
}

/// An `n`-component link diagram.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinkDiagram(Diagram);

/// An `n`-component string-link diagram; component `i` joins the `i`-th top
/// endpoint to the `i`-th bottom endpoint.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StringLinkDiagram(Diagram);

impl LinkDiagram {
    pub fn new(d: Diagram) -> Result<Self> {
        if !d.closed {
            return Err(Error::InvalidDiagram("expected closed components".into()));
        }
        Ok(LinkDiagram(d))
    }

    pub fn trivial(n: usize) -> Self {
        LinkDiagram(Diagram::trivial(true, n))
    }

    pub fn diagram(&self) -> &Diagram {
        &self.0
    }

    pub fn n(&self) -> usize {
        self.0.component_count()
    }

    /// Replaces component `i` by `multiplicities[i]` zero-framed parallel
    /// copies. Returns the cabled diagram and the map `h` from new components
    /// to source components (both 1-based).
    pub fn cable(&self, multiplicities: &[usize]) -> Result<(LinkDiagram, Vec<usize>)> {
        cable(&self.0, multiplicities).map(|(d, h)| (LinkDiagram(d), h))
    }
}

impl StringLinkDiagram {
    pub fn new(d: Diagram) -> Result<Self> {
        if d.closed {
            return Err(Error::InvalidDiagram("expected interval components".into()));
        }
        Ok(StringLinkDiagram(d))
    }

    pub fn trivial(n: usize) -> Self {
        StringLinkDiagram(Diagram::trivial(false, n))
    }

    pub fn diagram(&self) -> &Diagram {
        &self.0
    }

    pub fn n(&self) -> usize {
        self.0.component_count()
    }

    /// `self` on top of `other`, endpoints glued in order.
    pub fn stack(&self, other: &StringLinkDiagram) -> Result<StringLinkDiagram> {
        if self.n() != other.n() {
            return Err(Error::ComponentMismatch(self.n(), other.n()));
        }
        let mut d = self.0.clone();
        let offset = d.absorb_signs(&other.0);
        for (mine, theirs) in d.components.iter_mut().zip(&other.0.components) {
            mine.extend(theirs.iter().map(|v| Visit { crossing: v.crossing + offset, over: v.over }));
        }
        Ok(StringLinkDiagram(d))
    }

    pub fn closure(&self) -> LinkDiagram {
        let mut d = self.0.clone();
        d.closed = true;
        LinkDiagram(d)
    }
}

/// Stacks a sequence of string links top to bottom; an empty list gives the trivial one.
pub fn stack_all<'a>(parts: impl IntoIterator<Item = &'a StringLinkDiagram>, n: usize) -> Result<StringLinkDiagram> {
    let mut acc = StringLinkDiagram::trivial(n);
    for p in parts {
        acc = acc.stack(p)?;
    }
    Ok(acc)
}

fn cable(d: &Diagram, mults: &[usize]) -> Result<(Diagram, Vec<usize>)> {
    let n = d.component_count();
    if mults.len() != n {
        return Err(Error::ComponentMismatch(mults.len(), n));
    }
    if mults.contains(&0) {
        return Err(Error::InvalidParameters("cable multiplicities must be positive".into()));
    }
    // Kink each component to self-writhe 0 so that blackboard parallels are zero framed.
    let mut base = d.clone();
    for (i, &p) in mults.iter().enumerate() {
        if p > 1 {
            let w = base.self_writhe(i);
            for _ in 0..w.unsigned_abs() {
                base = base.with_kink(i, 0, if w > 0 { -1 } else { 1 })?;
            }
        }
    }
    let sites = base.sites();
    // New crossing for (old crossing, over copy s, under copy t).
    let mut first = Vec::with_capacity(sites.len());
    let mut signs = Vec::new();
    for site in &sites {
        first.push(signs.len());
        let (pa, pb) = (mults[site.over.0], mults[site.under.0]);
        signs.extend(std::iter::repeat_n(site.sign, pa * pb));
    }
    let id = |c: usize, s: usize, t: usize| first[c] + s * mults[sites[c].under.0] + t;

    let mut components = Vec::new();
    let mut h = Vec::new();
    for (i, comp) in base.components.iter().enumerate() {
        for copy in 0..mults[i] {
            let mut visits = Vec::new();
            for v in comp {
                let site = &sites[v.crossing];
                let positive = site.sign > 0;
                if v.over {
                    // Over copies cross the under copies left to right for a
                    // positive crossing, right to left otherwise.
                    let pb = mults[site.under.0];
                    let order: Vec<usize> = if positive { (0..pb).collect() } else { (0..pb).rev().collect() };
                    visits.extend(order.into_iter().map(|t| Visit { crossing: id(v.crossing, copy, t), over: true }));
                } else {
                    let pa = mults[site.over.0];
                    let order: Vec<usize> = if positive { (0..pa).rev().collect() } else { (0..pa).collect() };
                    visits.extend(order.into_iter().map(|s| Visit { crossing: id(v.crossing, s, copy), over: false }));
                }
            }
            components.push(visits);
            h.push(i + 1);
        }
    }
    Ok((Diagram::new(base.closed, signs, components)?, h))
}
