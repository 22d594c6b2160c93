use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use super::GroupType;
use crate::error::{Error, Result};

/// A Coxeter diagram on vertices `0..n`. Absent edges carry the label 2.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CoxeterDiagram {
    n: usize,
    edges: BTreeMap<(usize, usize), u32>,
}

/// Isomorphism-invariant key of a diagram: the lexicographically smallest
/// sorted edge list over all vertex relabelings.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalDiagram {
    pub n: usize,
    pub edges: Vec<(usize, usize, u32)>,
}

impl CoxeterDiagram {
    pub fn new<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, u32)>,
    {
        let mut map = BTreeMap::new();
        for (a, b, m) in edges {
            let bad = |reason: String| Error::Parse {
                input: format!("{a}-{b}:{m}"),
                reason,
            };
            if a == b {
                return Err(bad("loop edge".into()));
            }
            if a >= n || b >= n {
                return Err(bad(format!("vertex out of range for {n} vertices")));
            }
            if m < 3 {
                return Err(bad("edge labels must be at least 3".into()));
            }
            let key = (a.min(b), a.max(b));
            if map.insert(key, m).is_some() {
                return Err(bad("duplicate edge".into()));
            }
        }
        Ok(Self { n, edges: map })
    }

    /// Parses a named type (`A3`, `I2(5)`, `A1xB2`) or an explicit edge list
    /// such as `0-1:3,1-2:4`. In an edge list an omitted label means 3 and a
    /// bare index declares an isolated vertex.
    pub fn parse(input: &str) -> Result<Self> {
        let s = input.trim();
        let looks_like_edges = s
            .chars()
            .all(|c| c.is_ascii_digit() || matches!(c, '-' | ':' | ',' | ' '));
        if looks_like_edges && !s.is_empty() {
            return Self::parse_edge_list(s);
        }
        Ok(s.parse::<GroupType>()?.diagram())
    }

    fn parse_edge_list(s: &str) -> Result<Self> {
        let err = |reason: &str| Error::Parse {
            input: s.to_string(),
            reason: reason.to_string(),
        };
        let num = |t: &str| t.trim().parse::<usize>().map_err(|_| err("malformed vertex index"));
        let mut n = 0;
        let mut edges = Vec::new();
        for tok in s.split(',') {
            let tok = tok.trim();
            if tok.is_empty() {
                return Err(err("empty item"));
            }
            let (pair, label) = match tok.split_once(':') {
                Some((p, l)) => (p, l.trim().parse::<u32>().map_err(|_| err("malformed edge label"))?),
                None => (tok, 3),
            };
            match pair.split_once('-') {
                Some((a, b)) => {
                    let (a, b) = (num(a)?, num(b)?);
                    n = n.max(a + 1).max(b + 1);
                    edges.push((a, b, label));
                }
                None if !tok.contains(':') => n = n.max(num(pair)? + 1),
                None => return Err(err("label without an edge")),
            }
        }
        Self::new(n, edges)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn label(&self, i: usize, j: usize) -> u32 {
        if i == j {
            return 1;
        }
        *self.edges.get(&(i.min(j), i.max(j))).unwrap_or(&2)
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, u32)> + '_ {
        self.edges.iter().map(|(&(a, b), &m)| (a, b, m))
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        self.edges
            .keys()
            .filter_map(|&(a, b)| {
                if a == v {
                    Some(b)
                } else if b == v {
                    Some(a)
                } else {
                    None
                }
            })
            .collect()
    }

    /// Vertex sets of connected components, each sorted, ordered by least
    /// vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for start in 0..self.n {
            if seen[start] {
                continue;
            }
            let mut comp = vec![start];
            seen[start] = true;
            let mut i = 0;
            while i < comp.len() {
                for w in self.neighbors(comp[i]) {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                    }
                }
                i += 1;
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.n > 0 && self.components().len() == 1
    }

    /// The induced subdiagram on `vertices`, relabeled `0..k` in the given
    /// order.
    pub fn induced(&self, vertices: &[usize]) -> CoxeterDiagram {
        let mut edges = BTreeMap::new();
        for (i, &a) in vertices.iter().enumerate() {
            for (j, &b) in vertices.iter().enumerate().skip(i + 1) {
                let m = self.label(a, b);
                if m >= 3 {
                    edges.insert((i, j), m);
                }
            }
        }
        CoxeterDiagram {
            n: vertices.len(),
            edges,
        }
    }

    /// The Coxeter matrix `m_ij` (1 on the diagonal).
    pub fn coxeter_matrix(&self) -> Vec<Vec<u32>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.label(i, j)).collect())
            .collect()
    }

    /// Brute-force canonical form: minimum over all vertex permutations of
    /// the sorted relabeled edge list.
    pub fn canonical_form(&self) -> CanonicalDiagram {
        let mut perm: Vec<usize> = (0..self.n).collect();
        let relabel = |perm: &[usize]| {
            let mut e: Vec<(usize, usize, u32)> = self
                .edges()
                .map(|(a, b, m)| {
                    let (x, y) = (perm[a], perm[b]);
                    (x.min(y), x.max(y), m)
                })
                .collect();
            e.sort_unstable();
            e
        };
        let mut best = relabel(&perm);
        // Heap's algorithm over all permutations.
        let mut c = vec![0usize; self.n];
        let mut i = 1;
        while i < self.n {
            if c[i] < i {
                if i % 2 == 0 {
                    perm.swap(0, i);
                } else {
                    perm.swap(c[i], i);
                }
                let cand = relabel(&perm);
                if cand < best {
                    best = cand;
                }
                c[i] += 1;
                i = 1;
            } else {
                c[i] = 0;
                i += 1;
            }
        }
        CanonicalDiagram { n: self.n, edges: best }
    }

    /// Disjoint union, with `other`'s vertices shifted past this diagram's.
    pub fn disjoint_union(&self, other: &CoxeterDiagram) -> CoxeterDiagram {
        let mut edges = self.edges.clone();
        for (a, b, m) in other.edges() {
            edges.insert((a + self.n, b + self.n), m);
        }
        CoxeterDiagram {
            n: self.n + other.n,
            edges,
        }
    }
}

impl FromStr for CoxeterDiagram {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

impl fmt::Display for CoxeterDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut items: Vec<String> = self.edges().map(|(a, b, m)| format!("{a}-{b}:{m}")).collect();
        for v in 0..self.n {
            if self.neighbors(v).is_empty() {
                items.push(v.to_string());
            }
        }
        write!(f, "{}", items.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_diagrams() {
        let a2 = CoxeterDiagram::parse("A2").unwrap();
        assert_eq!(a2.n(), 2);
        assert_eq!(a2.edges().collect::<Vec<_>>(), vec![(0, 1, 3)]);

        let i25 = CoxeterDiagram::parse("I2(5)").unwrap();
        assert_eq!(i25.edges().collect::<Vec<_>>(), vec![(0, 1, 5)]);

        let b3 = CoxeterDiagram::parse("B3").unwrap();
        assert_eq!(b3.edges().collect::<Vec<_>>(), vec![(0, 1, 4), (1, 2, 3)]);
    }

    #[test]
    fn edge_lists() {
        let d = CoxeterDiagram::parse("0-1:3,1-2:4").unwrap();
        assert_eq!(d.n(), 3);
        assert_eq!(d.label(2, 1), 4);
        assert_eq!(d.label(0, 2), 2);
        let with_isolated = CoxeterDiagram::parse("0-1,2").unwrap();
        assert_eq!(with_isolated.n(), 3);
        assert_eq!(with_isolated.components().len(), 2);
    }

    #[test]
    fn bad_edge_lists() {
        for s in ["0-1:2", "0-0:3", "0-1:3,1-0:4", "0-:3", "0-1:x", ",", "Q7"] {
            assert!(CoxeterDiagram::parse(s).is_err(), "{s} should fail");
        }
    }

    #[test]
    fn canonical_form_ignores_labeling() {
        let a = CoxeterDiagram::parse("0-1:4,1-2:3").unwrap();
        let b = CoxeterDiagram::parse("0-2:3,2-1:4").unwrap();
        assert_eq!(a.canonical_form(), b.canonical_form());
        let c = CoxeterDiagram::parse("0-1:3,1-2:4").unwrap();
        assert_eq!(a.canonical_form(), c.canonical_form());
        let d = CoxeterDiagram::parse("0-1:5,1-2:3").unwrap();
        assert_ne!(a.canonical_form(), d.canonical_form());
    }

    #[test]
    fn induced_subdiagram_relabels() {
        let d4 = CoxeterDiagram::parse("D4").unwrap();
        let sub = d4.induced(&[0, 3]);
        assert_eq!(sub.num_edges(), 0);
        assert_eq!(sub.components().len(), 2);
    }
}
