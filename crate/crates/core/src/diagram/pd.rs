//! JSON diagram files: PD codes with an explicit orientation block, or braid words.
//!
//! A PD tuple `[a, b, c, d]` lists arc labels counterclockwise starting from
//! the incoming under-arc, so the under-strand runs `a -> c`. The over-strand
//! runs `d -> b` at a positive crossing and `b -> d` at a negative one.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use super::{BraidWord, Diagram, LinkDiagram, StringLinkDiagram, Visit};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FileKind {
    Link,
    Stringlink,
}

/// PD link file. `orientation` maps each arc to the next arc of its component;
/// the bottom arc of a string-link component has no successor.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkFile {
    #[serde(default)]
    pub name: String,
    pub components: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<FileKind>,
    pub pd: Vec<[u64; 4]>,
    #[serde(default)]
    pub component_of_arc: BTreeMap<u64, usize>,
    #[serde(default)]
    pub orientation: BTreeMap<u64, u64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DiagramFile {
    Link(LinkFile),
    Braid(BraidWord),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParsedDiagram {
    Link(LinkDiagram),
    StringLink(StringLinkDiagram),
}

impl ParsedDiagram {
    pub fn diagram(&self) -> &Diagram {
        match self {
            ParsedDiagram::Link(l) => l.diagram(),
            ParsedDiagram::StringLink(s) => s.diagram(),
        }
    }

    pub fn from_diagram(d: Diagram) -> Self {
        if d.is_closed() {
            ParsedDiagram::Link(LinkDiagram(d))
        } else {
            ParsedDiagram::StringLink(StringLinkDiagram(d))
        }
    }
}

impl DiagramFile {
    /// Parses either file flavour; braid files are recognised by a `word` key.
    pub fn parse(text: &str) -> Result<DiagramFile> {
        let probe: serde_json::Value =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        if probe.get("word").is_some() {
            let b: BraidWord = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
            b.validate()?;
            Ok(DiagramFile::Braid(b))
        } else {
            let f: LinkFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
            Ok(DiagramFile::Link(f))
        }
    }

    pub fn to_diagram(&self) -> Result<ParsedDiagram> {
        match self {
            DiagramFile::Link(f) => f.to_diagram(),
            DiagramFile::Braid(b) => Ok(ParsedDiagram::from_diagram(b.to_diagram()?)),
        }
    }
}

pub fn parse_diagram_file(text: &str) -> Result<ParsedDiagram> {
    DiagramFile::parse(text)?.to_diagram()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Role {
    Under,
    Over(i8),
}

impl LinkFile {
    pub fn parse(text: &str) -> Result<LinkFile> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn to_diagram(&self) -> Result<ParsedDiagram> {
        let n = self.components;
        let mut uses: HashMap<u64, usize> = HashMap::new();
        for (i, x) in self.pd.iter().enumerate() {
            for &a in x {
                if !self.component_of_arc.contains_key(&a) {
                    return Err(Error::Parse(format!("crossing {} uses arc {a} with no component", i + 1)));
                }
                *uses.entry(a).or_default() += 1;
            }
        }
        if let Some((a, k)) = uses.iter().find(|(_, &k)| k > 2) {
            return Err(Error::Parse(format!("arc {a} used {k} times")));
        }
        let mut arcs: Vec<Vec<u64>> = vec![Vec::new(); n];
        for (&a, &c) in &self.component_of_arc {
            if c == 0 || c > n {
                return Err(Error::Parse(format!("arc {a} assigned to component {c} of {n}")));
            }
            arcs[c - 1].push(a);
        }
        for (&a, &b) in &self.orientation {
            match (self.component_of_arc.get(&a), self.component_of_arc.get(&b)) {
                (Some(x), Some(y)) if x == y => {}
                _ => return Err(Error::Parse(format!("orientation {a} -> {b} leaves its component"))),
            }
        }
        let open = arcs.iter().flatten().any(|a| !self.orientation.contains_key(a));
        let closed = match self.kind {
            Some(FileKind::Link) => true,
            Some(FileKind::Stringlink) => false,
            None => !open,
        };

        // Oriented chains of arcs, and the transitions between consecutive arcs.
        let mut transitions: Vec<(usize, u64, u64)> = Vec::new();
        for (c, list) in arcs.iter().enumerate() {
            if list.is_empty() {
                continue;
            }
            let chain = self.chain(c + 1, list, closed)?;
            let steps = if closed {
                if chain.len() == 1 && !uses.contains_key(&chain[0]) {
                    0
                } else {
                    chain.len()
                }
            } else {
                chain.len() - 1
            };
            for t in 0..steps {
                transitions.push((c, chain[t], chain[(t + 1) % chain.len()]));
            }
            for (t, a) in chain.iter().enumerate() {
                let expected = if closed || (t > 0 && t + 1 < chain.len()) { 2 } else { 1 };
                let found = uses.get(a).copied().unwrap_or(0);
                let isolated = chain.len() == 1 && found == 0;
                if found != expected && !isolated {
                    return Err(Error::Parse(format!("arc {a} used {found} times, expected {expected}")));
                }
            }
        }

        let mut candidates: HashMap<(u64, u64), Vec<(usize, Role)>> = HashMap::new();
        for (i, &[a, b, c, d]) in self.pd.iter().enumerate() {
            candidates.entry((a, c)).or_default().push((i, Role::Under));
            candidates.entry((d, b)).or_default().push((i, Role::Over(1)));
            candidates.entry((b, d)).or_default().push((i, Role::Over(-1)));
        }
        let mut under_taken = vec![false; self.pd.len()];
        let mut over_taken = vec![false; self.pd.len()];
        let mut chosen: Vec<Option<(usize, Role)>> = vec![None; transitions.len()];
        loop {
            let mut progress = false;
            let mut pending = false;
            for (t, &(_, e, f)) in transitions.iter().enumerate() {
                if chosen[t].is_some() {
                    continue;
                }
                let free: Vec<(usize, Role)> = candidates
                    .get(&(e, f))
                    .map(|v| {
                        v.iter()
                            .copied()
                            .filter(|(i, r)| match r {
                                Role::Under => !under_taken[*i],
                                Role::Over(_) => !over_taken[*i],
                            })
                            .collect()
                    })
                    .unwrap_or_default();
                match free.len() {
                    0 => return Err(Error::Parse(format!("no crossing joins arc {e} to arc {f}"))),
                    1 => {
                        let (i, r) = free[0];
                        match r {
                            Role::Under => under_taken[i] = true,
                            Role::Over(_) => over_taken[i] = true,
                        }
                        chosen[t] = Some(free[0]);
                        progress = true;
                    }
                    _ => pending = true,
                }
            }
            if !pending {
                break;
            }
            if !progress {
                return Err(Error::Parse("orientation does not determine the crossings uniquely".into()));
            }
        }

        let mut signs = vec![0i8; self.pd.len()];
        let mut components: Vec<Vec<Visit>> = vec![Vec::new(); n];
        for (t, &(c, _, _)) in transitions.iter().enumerate() {
            let (i, r) = chosen[t].expect("assigned");
            match r {
                Role::Under => components[c].push(Visit { crossing: i, over: false }),
                Role::Over(s) => {
                    signs[i] = s;
                    components[c].push(Visit { crossing: i, over: true });
                }
            }
        }
        if let Some(i) = (0..self.pd.len()).find(|&i| !under_taken[i] || !over_taken[i]) {
            return Err(Error::Parse(format!("crossing {} is not traversed consistently", i + 1)));
        }
        let d = Diagram::new(closed, signs, components)?;
        Ok(ParsedDiagram::from_diagram(d))
    }

    /// Arcs of component `c` in traversal order. Closed components start at
    /// their smallest label.
    fn chain(&self, c: usize, list: &[u64], closed: bool) -> Result<Vec<u64>> {
        let start = if closed {
            *list.iter().min().expect("non-empty")
        } else {
            let has_pred: Vec<u64> = list.iter().filter_map(|a| self.orientation.get(a).copied()).collect();
            let starts: Vec<u64> = list.iter().copied().filter(|a| !has_pred.contains(a)).collect();
            if starts.len() != 1 {
                return Err(Error::Parse(format!("component {c} is not a single interval")));
            }
            starts[0]
        };
        let mut chain = vec![start];
        let mut cur = start;
        loop {
            match self.orientation.get(&cur) {
                Some(&next) if next == start && closed => break,
                Some(&next) => {
                    if chain.contains(&next) || chain.len() > list.len() {
                        return Err(Error::Parse(format!("component {c} orientation is not a single cycle or path")));
                    }
                    chain.push(next);
                    cur = next;
                }
                None if !closed => break,
                None => return Err(Error::Parse(format!("arc {cur} of closed component {c} has no successor"))),
            }
        }
        if chain.len() != list.len() {
            return Err(Error::Parse(format!("component {c} orientation misses some of its arcs")));
        }
        Ok(chain)
    }

    /// PD export. Arc labels run consecutively along each component; the arc
    /// through a closed component's base point carries its smallest label.
    /// A closed component that only passes over two crossings is written with
    /// an extra pair of opposite kinks, since its two arcs could otherwise be
    /// read in either direction.
    pub fn from_diagram(d: &Diagram, name: &str) -> LinkFile {
        let mut padded = d.clone();
        if d.is_closed() {
            for (i, comp) in d.components().iter().enumerate() {
                if comp.len() == 2 && comp.iter().all(|v| v.over) {
                    padded = padded
                        .with_kink(i, 0, 1)
                        .and_then(|p| p.with_kink(i, 0, -1))
                        .expect("component exists");
                }
            }
        }
        let d = &padded;
        let sites = d.sites();
        let mut incoming = vec![[0u64; 2]; d.crossing_count()];
        let mut outgoing = vec![[0u64; 2]; d.crossing_count()];
        let mut component_of_arc = BTreeMap::new();
        let mut orientation = BTreeMap::new();
        let mut next = 1u64;
        for (ci, comp) in d.components().iter().enumerate() {
            let e = comp.len() as u64;
            if e == 0 {
                continue;
            }
            let first = next;
            let count = if d.is_closed() { e } else { e + 1 };
            for a in first..first + count {
                component_of_arc.insert(a, ci + 1);
            }
            for a in first..first + count - 1 {
                orientation.insert(a, a + 1);
            }
            if d.is_closed() {
                orientation.insert(first + count - 1, first);
            }
            for (t, v) in comp.iter().enumerate() {
                let slot = if v.over { 1 } else { 0 };
                let t = t as u64;
                incoming[v.crossing][slot] = first + t;
                outgoing[v.crossing][slot] = if d.is_closed() && t + 1 == e { first } else { first + t + 1 };
            }
            next += count;
        }
        let pd = sites
            .iter()
            .enumerate()
            .map(|(i, s)| {
                let (ui, uo, oi, oo) = (incoming[i][0], outgoing[i][0], incoming[i][1], outgoing[i][1]);
                if s.sign > 0 {
                    [ui, oo, uo, oi]
                } else {
                    [ui, oi, uo, oo]
                }
            })
            .collect();
        LinkFile {
            name: name.to_string(),
            components: d.component_count(),
            kind: Some(if d.is_closed() { FileKind::Link } else { FileKind::Stringlink }),
            pd,
            component_of_arc,
            orientation,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const HOPF: &str = r#"{
        "name": "hopf", "components": 2,
        "pd": [[1, 3, 2, 4], [3, 1, 4, 2]],
        "component_of_arc": {"1": 1, "2": 1, "3": 2, "4": 2},
        "orientation": {"1": 2, "2": 1, "3": 4, "4": 3}
    }"#;

    #[test]
    fn positive_hopf() {
        let d = parse_diagram_file(HOPF).unwrap();
        let ParsedDiagram::Link(l) = d else { panic!("expected a link") };
        assert_eq!(l.n(), 2);
        assert_eq!(l.diagram().signs(), &[1, 1]);
        assert_eq!(l.diagram().linking_under(0, 1), 1);
    }

    #[test]
    fn crossingless() {
        let d = parse_diagram_file(r#"{"components": 3, "pd": []}"#).unwrap();
        assert_eq!(d, ParsedDiagram::Link(LinkDiagram::trivial(3)));
    }

    #[test]
    fn rejects_overused_arc() {
        let text = r#"{"components": 1, "pd": [[1, 1, 1, 2]],
            "component_of_arc": {"1": 1, "2": 1}, "orientation": {"1": 2, "2": 1}}"#;
        assert!(parse_diagram_file(text).is_err());
    }

    #[test]
    fn rejects_ambiguous_orientation() {
        // component 2 passes over at both crossings, so its direction is undetermined
        let text = r#"{"components": 2, "pd": [[1, 3, 2, 4], [2, 4, 1, 3]],
            "component_of_arc": {"1": 1, "2": 1, "3": 2, "4": 2},
            "orientation": {"1": 2, "2": 1, "3": 4, "4": 3}}"#;
        assert!(parse_diagram_file(text).is_err());
    }

    #[test]
    fn rejects_broken_cycle() {
        let text = r#"{"components": 2, "kind": "link",
            "pd": [[1, 3, 2, 4], [3, 1, 4, 2]],
            "component_of_arc": {"1": 1, "2": 1, "3": 2, "4": 2},
            "orientation": {"1": 2, "3": 4, "4": 3}}"#;
        assert!(parse_diagram_file(text).is_err());
        assert!(parse_diagram_file("{not json").is_err());
    }

    #[test]
    fn braid_files() {
        let d = parse_diagram_file(r#"{"strands": 2, "word": [1, 1], "kind": "stringlink"}"#).unwrap();
        assert!(matches!(d, ParsedDiagram::StringLink(_)));
        assert!(parse_diagram_file(r#"{"strands": 2, "word": [1], "kind": "stringlink"}"#).is_err());
        assert!(parse_diagram_file(r#"{"strands": 2, "word": [3]}"#).is_err());
    }

    #[test]
    fn export_round_trip() {
        let braids: [(usize, Vec<i64>); 4] =
            [(2, vec![1, 1]), (3, vec![1, 1, -2, 1, -2]), (3, vec![1, -2, 1, -2, 1, -2]), (2, vec![1, 1, 1])];
        for (s, w) in braids {
            let b = BraidWord::new(s, w).unwrap();
            let d = b.closure().unwrap().diagram().clone();
            let back = LinkFile::parse(&LinkFile::from_diagram(&d, "x").to_json()).unwrap().to_diagram().unwrap();
            assert_eq!(back.diagram().canonical(), d.canonical());
        }
        let s = BraidWord::new(3, vec![1, 1, 2, -2, -1, -1]).unwrap().to_string_link().unwrap();
        let mut f = LinkFile::from_diagram(s.diagram(), "s");
        let back = f.to_diagram().unwrap();
        assert_eq!(back.diagram().canonical(), s.diagram().canonical());
        f.kind = None;
        assert!(matches!(f.to_diagram().unwrap(), ParsedDiagram::StringLink(_)));
    }
}
