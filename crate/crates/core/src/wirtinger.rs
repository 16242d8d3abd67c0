//! Wirtinger presentations and longitudes modulo the lower central series.
//!
//! Arcs of each component are numbered from its base arc (the top arc of a
//! string-link component). At a crossing of sign `ε` whose under-strand runs
//! from arc `a` to arc `b` below over-arc `x`, the relation is `b = x^ε a x^-ε`.
//!
//! Longitudes are read along the component as `x_r^{ε_r} ... x_1^{ε_1}` and
//! then corrected by `m_i^{-w}` for the component's self-writhe `w`.

use rayon::prelude::*;

use crate::diagram::Diagram;
use crate::error::{Error, Result};
use crate::freegroup::GroupWord;
use crate::magnus::TruncatedSeries;

/// `outgoing = over^sign · incoming · over^-sign`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Relation {
    pub crossing: usize,
    pub sign: i8,
    pub over: usize,
    pub incoming: usize,
    pub outgoing: usize,
}

#[derive(Clone, Debug)]
pub struct WirtingerPresentation {
    closed: bool,
    arc_start: Vec<usize>,
    arc_component: Vec<usize>,
    relations: Vec<Relation>,
    unders: Vec<Vec<usize>>,
    writhe: Vec<i64>,
}

/// Arc words in the base meridians, exact modulo `G_{depth+1}`.
#[derive(Clone, Debug)]
pub struct MeridianApproximation {
    pub depth: usize,
    pub words: Vec<GroupWord>,
}

pub fn presentation(d: &Diagram) -> WirtingerPresentation {
    WirtingerPresentation::new(d)
}

impl WirtingerPresentation {
    pub fn new(d: &Diagram) -> Self {
        let n = d.component_count();
        let closed = d.is_closed();
        let mut arc_start = Vec::with_capacity(n);
        let mut arc_component = Vec::new();
        let mut counts = Vec::with_capacity(n);
        for (i, comp) in d.components().iter().enumerate() {
            let u = comp.iter().filter(|v| !v.over).count();
            let count = if closed { u.max(1) } else { u + 1 };
            arc_start.push(arc_component.len());
            arc_component.extend(std::iter::repeat_n(i, count));
            counts.push(count);
        }
        let mut over_arc = vec![0usize; d.crossing_count()];
        let mut under_arcs = vec![(0usize, 0usize, 0usize); d.crossing_count()];
        let mut unders = vec![Vec::new(); n];
        for (i, comp) in d.components().iter().enumerate() {
            let mut seen = 0;
            for v in comp {
                let local = |k: usize| arc_start[i] + k % counts[i];
                if v.over {
                    over_arc[v.crossing] = local(seen);
                } else {
                    under_arcs[v.crossing] = (i, local(seen), local(seen + 1));
                    unders[i].push(v.crossing);
                    seen += 1;
                }
            }
        }
        let relations = (0..d.crossing_count())
            .map(|c| Relation {
                crossing: c,
                sign: d.sign(c),
                over: over_arc[c],
                incoming: under_arcs[c].1,
                outgoing: under_arcs[c].2,
            })
            .collect();
        let writhe = (0..n).map(|i| d.self_writhe(i)).collect();
        WirtingerPresentation { closed, arc_start, arc_component, relations, unders, writhe }
    }

    pub fn component_count(&self) -> usize {
        self.arc_start.len()
    }

    pub fn generator_count(&self) -> usize {
        self.arc_component.len()
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    /// 0-based component of an arc.
    pub fn component_of(&self, arc: usize) -> usize {
        self.arc_component[arc]
    }

    /// Base arc of component `i` (1-based).
    pub fn base_arc(&self, i: usize) -> Result<usize> {
        self.check_component(i)?;
        Ok(self.arc_start[i - 1])
    }

    pub fn writhe(&self, i: usize) -> Result<i64> {
        self.check_component(i)?;
        Ok(self.writhe[i - 1])
    }

    fn check_component(&self, i: usize) -> Result<()> {
        if i == 0 || i > self.component_count() {
            return Err(Error::ComponentOutOfRange(i, self.component_count()));
        }
        Ok(())
    }

    /// Whether the outgoing arc of this relation is the base arc (closed components wrap).
    fn wraps(&self, r: &Relation) -> bool {
        self.closed && r.outgoing == self.arc_start[self.arc_component[r.outgoing]]
    }

    pub fn meridian_approx(&self, t: usize) -> Result<MeridianApproximation> {
        if t == 0 {
            return Err(Error::InvalidParameters("depth must be at least 1".into()));
        }
        let n = self.component_count();
        let mut words: Vec<GroupWord> = self
            .arc_component
            .iter()
            .map(|&i| GroupWord::generator(n, i + 1, 1))
            .collect::<Result<_>>()?;
        for _ in 1..t {
            let mut next = words.clone();
            for i in 0..n {
                let m = GroupWord::generator(n, i + 1, 1)?;
                let mut v = GroupWord::identity(n);
                for &c in &self.unders[i] {
                    let r = &self.relations[c];
                    v = words[r.over].pow(r.sign as i64).multiply(&v)?;
                    if !self.wraps(r) {
                        next[r.outgoing] = m.conjugate(&v)?;
                    }
                }
            }
            words = next;
        }
        Ok(MeridianApproximation { depth: t, words })
    }

    /// Zero-framed longitude of component `i` (1-based) from depth-`t` arc words.
    pub fn longitude(&self, i: usize, t: usize) -> Result<GroupWord> {
        self.check_component(i)?;
        let approx = self.meridian_approx(t)?;
        let n = self.component_count();
        let mut v = GroupWord::identity(n);
        for &c in &self.unders[i - 1] {
            let r = &self.relations[c];
            v = approx.words[r.over].pow(r.sign as i64).multiply(&v)?;
        }
        v.multiply(&GroupWord::generator(n, i, 1)?.pow(-self.writhe[i - 1]))
    }

    /// Magnus expansions of all zero-framed longitudes, computed directly in the
    /// series ring truncated at degree `q` and multiplicity `max_r`, using
    /// depth-`t` arc approximations.
    pub fn longitude_series(&self, q: usize, max_r: usize, t: usize) -> Result<Vec<TruncatedSeries>> {
        if t == 0 {
            return Err(Error::InvalidParameters("depth must be at least 1".into()));
        }
        let n = self.component_count();
        let gen = |j: usize, s: i8| TruncatedSeries::generator_series(j, s, n, q).map(|g| g.with_max_r(max_r));
        let plus: Vec<TruncatedSeries> = (1..=n).map(|j| gen(j, 1)).collect::<Result<_>>()?;
        let minus: Vec<TruncatedSeries> = (1..=n).map(|j| gen(j, -1)).collect::<Result<_>>()?;
        let one = TruncatedSeries::one(n, q)?.with_max_r(max_r);

        let mut arcs: Vec<(TruncatedSeries, TruncatedSeries)> = self
            .arc_component
            .iter()
            .map(|&i| (plus[i].clone(), minus[i].clone()))
            .collect();
        for _ in 1..t {
            let updates: Vec<Vec<(usize, (TruncatedSeries, TruncatedSeries))>> = (0..n)
                .into_par_iter()
                .map(|i| -> Result<_> {
                    let mut out = Vec::with_capacity(self.unders[i].len());
                    let (mut v, mut vinv) = (one.clone(), one.clone());
                    for &c in &self.unders[i] {
                        let r = &self.relations[c];
                        let (a, ainv) = &arcs[r.over];
                        let (a, ainv) = if r.sign > 0 { (a, ainv) } else { (ainv, a) };
                        v = a.multiply(&v)?;
                        vinv = vinv.multiply(ainv)?;
                        if !self.wraps(r) {
                            let conj = v.add(&v.times_variable(i + 1)?)?.multiply(&vinv)?;
                            let conj_inv = v.multiply(&minus[i])?.multiply(&vinv)?;
                            out.push((r.outgoing, (conj, conj_inv)));
                        }
                    }
                    Ok(out)
                })
                .collect::<Result<_>>()?;
            for (arc, s) in updates.into_iter().flatten() {
                arcs[arc] = s;
            }
        }
        (0..n)
            .into_par_iter()
            .map(|i| {
                let mut v = one.clone();
                for &c in &self.unders[i] {
                    let r = &self.relations[c];
                    let (a, ainv) = &arcs[r.over];
                    v = if r.sign > 0 { a } else { ainv }.multiply(&v)?;
                }
                let w = self.writhe[i];
                let fix = if w > 0 { &minus[i] } else { &plus[i] };
                for _ in 0..w.unsigned_abs() {
                    v = v.multiply(fix)?;
                }
                Ok(v)
            })
            .collect()
    }
}
