use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::CoxeterDiagram;
use crate::error::{Error, Result};

/// An irreducible finite Coxeter type.
///
/// The dihedral aliases are normalized on construction: `I2(3)` is `A2`,
/// `I2(4)` is `B2` and `I2(6)` is `G2`, so `I2(m)` only carries `m = 5` or
/// `m >= 7`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CoxeterFactor {
    A(u32),
    B(u32),
    D(u32),
    E6,
    E7,
    E8,
    F4,
    G2,
    H3,
    H4,
    I2(u32),
}

impl CoxeterFactor {
    pub fn dihedral(m: u32) -> Result<Self> {
        match m {
            0..=2 => Err(Error::Parse {
                input: format!("I2({m})"),
                reason: "dihedral parameter must be at least 3".into(),
            }),
            3 => Ok(Self::A(2)),
            4 => Ok(Self::B(2)),
            6 => Ok(Self::G2),
            m => Ok(Self::I2(m)),
        }
    }

    pub fn rank(&self) -> usize {
        match *self {
            Self::A(k) | Self::B(k) | Self::D(k) => k as usize,
            Self::E6 => 6,
            Self::E7 => 7,
            Self::E8 => 8,
            Self::F4 | Self::H4 => 4,
            Self::G2 | Self::I2(_) => 2,
            Self::H3 => 3,
        }
    }

    /// Degrees of the basic invariants, ascending.
    pub fn degrees(&self) -> Vec<u32> {
        let mut d = match *self {
            Self::A(k) => (2..=k + 1).collect(),
            Self::B(k) => (1..=k).map(|i| 2 * i).collect(),
            Self::D(k) => {
                let mut v: Vec<u32> = (1..k).map(|i| 2 * i).collect();
                v.push(k);
                v
            }
            Self::E6 => vec![2, 5, 6, 8, 9, 12],
            Self::E7 => vec![2, 6, 8, 10, 12, 14, 18],
            Self::E8 => vec![2, 8, 12, 14, 18, 20, 24, 30],
            Self::F4 => vec![2, 6, 8, 12],
            Self::G2 => vec![2, 6],
            Self::H3 => vec![2, 6, 10],
            Self::H4 => vec![2, 12, 20, 30],
            Self::I2(m) => vec![2, m],
        };
        d.sort_unstable();
        d
    }

    /// Whether the group has a rational (crystallographic) realization.
    pub fn is_crystallographic(&self) -> bool {
        !matches!(self, Self::H3 | Self::H4 | Self::I2(_))
    }

    /// The standard diagram for this type.
    pub fn diagram(&self) -> CoxeterDiagram {
        let path = |labels: &[u32]| {
            CoxeterDiagram::new(labels.len() + 1, labels.iter().enumerate().map(|(i, &m)| (i, i + 1, m)))
                .expect("standard diagram is well formed")
        };
        match *self {
            Self::A(k) => path(&vec![3; k as usize - 1]),
            Self::B(k) => {
                let mut labels = vec![3; k as usize - 1];
                labels[0] = 4;
                path(&labels)
            }
            Self::D(k) => branched(k as usize, k as usize - 3),
            Self::E6 => branched(6, 2),
            Self::E7 => branched(7, 2),
            Self::E8 => branched(8, 2),
            Self::F4 => path(&[3, 4, 3]),
            Self::G2 => path(&[6]),
            Self::H3 => path(&[5, 3]),
            Self::H4 => path(&[5, 3, 3]),
            Self::I2(m) => path(&[m]),
        }
    }

    fn validate(self) -> Result<Self> {
        let ok = match self {
            Self::A(k) => k >= 1,
            Self::B(k) => k >= 2,
            Self::D(k) => k >= 4,
            Self::I2(m) => m == 5 || m >= 7,
            _ => true,
        };
        if ok {
            Ok(self)
        } else {
            Err(Error::Parse {
                input: self.to_string(),
                reason: "parameter outside the classification".into(),
            })
        }
    }
}

/// A path `0..n-1` on `n - 1` vertices with the last vertex attached to
/// `branch`.
fn branched(n: usize, branch: usize) -> CoxeterDiagram {
    let mut edges: Vec<(usize, usize, u32)> = (0..n - 2).map(|i| (i, i + 1, 3)).collect();
    edges.push((branch, n - 1, 3));
    CoxeterDiagram::new(n, edges).expect("standard diagram is well formed")
}

impl fmt::Display for CoxeterFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::A(k) => write!(f, "A{k}"),
            Self::B(k) => write!(f, "B{k}"),
            Self::D(k) => write!(f, "D{k}"),
            Self::E6 => write!(f, "E6"),
            Self::E7 => write!(f, "E7"),
            Self::E8 => write!(f, "E8"),
            Self::F4 => write!(f, "F4"),
            Self::G2 => write!(f, "G2"),
            Self::H3 => write!(f, "H3"),
            Self::H4 => write!(f, "H4"),
            Self::I2(m) => write!(f, "I2({m})"),
        }
    }
}

impl FromStr for CoxeterFactor {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let err = |reason: &str| Error::Parse {
            input: s.to_string(),
            reason: reason.to_string(),
        };
        let upper = s.to_ascii_uppercase();
        if let Some(inner) = upper.strip_prefix("I2(").and_then(|r| r.strip_suffix(')')) {
            let m = inner.parse::<u32>().map_err(|_| err("malformed dihedral parameter"))?;
            return Self::dihedral(m);
        }
        let (family, rest) = upper.split_at(upper.chars().next().map_or(0, char::len_utf8));
        let k = rest.parse::<u32>().map_err(|_| err("unknown type name"))?;
        let factor = match (family, k) {
            ("A", k) => Self::A(k),
            ("B", k) | ("C", k) => Self::B(k),
            ("D", k) => Self::D(k),
            ("E", 6) => Self::E6,
            ("E", 7) => Self::E7,
            ("E", 8) => Self::E8,
            ("F", 4) => Self::F4,
            ("G", 2) => Self::G2,
            ("H", 3) => Self::H3,
            ("H", 4) => Self::H4,
            _ => return Err(err("unknown type name")),
        };
        factor
            .validate()
            .map_err(|_| err("parameter outside the classification"))
    }
}

/// A finite Coxeter group type: irreducible factors in canonical order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GroupType {
    factors: Vec<CoxeterFactor>,
}

impl GroupType {
    pub fn new(mut factors: Vec<CoxeterFactor>) -> Self {
        factors.sort_unstable();
        Self { factors }
    }

    pub fn irreducible(f: CoxeterFactor) -> Self {
        Self { factors: vec![f] }
    }

    pub fn factors(&self) -> &[CoxeterFactor] {
        &self.factors
    }

    pub fn rank(&self) -> usize {
        self.factors.iter().map(CoxeterFactor::rank).sum()
    }

    pub fn degrees(&self) -> Vec<u32> {
        let mut d: Vec<u32> = self.factors.iter().flat_map(|f| f.degrees()).collect();
        d.sort_unstable();
        d
    }

    /// `|G| = prod d_i`.
    pub fn order(&self) -> u128 {
        self.degrees().iter().map(|&d| d as u128).product()
    }

    /// Number of reflections `N = sum (d_i - 1)`.
    pub fn num_reflections(&self) -> usize {
        self.degrees().iter().map(|&d| d as usize - 1).sum()
    }

    pub fn is_irreducible(&self) -> bool {
        self.factors.len() == 1
    }

    pub fn is_crystallographic(&self) -> bool {
        self.factors.iter().all(CoxeterFactor::is_crystallographic)
    }

    /// Disjoint union of the factor diagrams, in factor order.
    pub fn diagram(&self) -> CoxeterDiagram {
        self.factors
            .iter()
            .map(CoxeterFactor::diagram)
            .reduce(|a, b| a.disjoint_union(&b))
            .unwrap_or_else(|| CoxeterDiagram::new(0, []).expect("empty diagram"))
    }
}

impl fmt::Display for GroupType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = self.factors.iter().map(|x| x.to_string()).collect();
        write!(f, "{}", names.join("x"))
    }
}

impl FromStr for GroupType {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::Parse {
                input: s.into(),
                reason: "empty type name".into(),
            });
        }
        let factors = s
            .split(['x', 'X', '*'])
            .map(str::parse)
            .collect::<Result<Vec<CoxeterFactor>>>()?;
        Ok(Self::new(factors))
    }
}

/// Identifies each connected component of `d` as a finite type.
pub fn classify(d: &CoxeterDiagram) -> Result<GroupType> {
    let factors = d
        .components()
        .iter()
        .map(|comp| classify_connected(&d.induced(comp)))
        .collect::<Result<Vec<_>>>()?;
    Ok(GroupType::new(factors))
}

fn classify_connected(d: &CoxeterDiagram) -> Result<CoxeterFactor> {
    let n = d.n();
    let reject = |why: &str| Err(Error::NotFiniteType(format!("{d}: {why}")));
    match n {
        1 => return Ok(CoxeterFactor::A(1)),
        2 => return CoxeterFactor::dihedral(d.label(0, 1)),
        _ => {}
    }
    if d.num_edges() != n - 1 {
        return reject("diagram contains a cycle");
    }
    let heavy: Vec<(usize, usize, u32)> = d.edges().filter(|&(_, _, m)| m > 3).collect();
    if heavy.iter().any(|&(_, _, m)| m > 5) {
        return reject("label above 5 in rank at least 3");
    }
    if heavy.len() > 1 {
        return reject("more than one label above 3");
    }
    let degree = |v: usize| d.neighbors(v).len();
    let branch: Vec<usize> = (0..n).filter(|&v| degree(v) >= 3).collect();
    if !branch.is_empty() {
        if branch.len() > 1 || degree(branch[0]) > 3 || !heavy.is_empty() {
            return reject("branching outside D/E shapes");
        }
        let b = branch[0];
        let mut arms: Vec<usize> = d
            .neighbors(b)
            .into_iter()
            .map(|start| {
                let (mut prev, mut cur, mut len) = (b, start, 1);
                loop {
                    let next: Vec<usize> = d.neighbors(cur).into_iter().filter(|&w| w != prev).collect();
                    match next.as_slice() {
                        [w] => {
                            prev = cur;
                            cur = *w;
                            len += 1;
                        }
                        _ => break len,
                    }
                }
            })
            .collect();
        arms.sort_unstable();
        return match arms.as_slice() {
            [1, 1, k] => Ok(CoxeterFactor::D(*k as u32 + 3)),
            [1, 2, 2] => Ok(CoxeterFactor::E6),
            [1, 2, 3] => Ok(CoxeterFactor::E7),
            [1, 2, 4] => Ok(CoxeterFactor::E8),
            _ => reject("branch arms outside D/E shapes"),
        };
    }
    // A path: read labels from one end.
    let end = (0..n).find(|&v| degree(v) == 1).expect("a tree has leaves");
    let mut labels = Vec::with_capacity(n - 1);
    let (mut prev, mut cur) = (usize::MAX, end);
    loop {
        let next = d.neighbors(cur).into_iter().find(|&w| w != prev);
        match next {
            Some(w) => {
                labels.push(d.label(cur, w));
                prev = cur;
                cur = w;
            }
            None => break,
        }
    }
    let Some(&(_, _, m)) = heavy.first() else {
        return Ok(CoxeterFactor::A(n as u32));
    };
    let pos = labels.iter().position(|&l| l == m).expect("heavy label on path");
    let at_end = pos == 0 || pos == labels.len() - 1;
    match (m, n, at_end) {
        (4, _, true) => Ok(CoxeterFactor::B(n as u32)),
        (4, 4, false) => Ok(CoxeterFactor::F4),
        (5, 3, true) => Ok(CoxeterFactor::H3),
        (5, 4, true) => Ok(CoxeterFactor::H4),
        _ => reject("label placement outside the classification"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ty(s: &str) -> GroupType {
        s.parse().unwrap()
    }

    #[test]
    fn classification_examples() {
        let a4 = CoxeterDiagram::parse("0-1,1-2,2-3").unwrap();
        assert_eq!(classify(&a4).unwrap(), ty("A4"));
        let b2 = CoxeterDiagram::parse("0-1:4").unwrap();
        assert_eq!(classify(&b2).unwrap(), ty("B2"));
        let triangle = CoxeterDiagram::parse("0-1,1-2,0-2").unwrap();
        assert!(matches!(classify(&triangle), Err(Error::NotFiniteType(_))));
    }

    #[test]
    fn rejects_affine_and_hyperbolic() {
        for s in [
            "0-1:4,1-2:4",                     // affine C2
            "0-1:4,1-2,2-3:4",                 // affine C3
            "0-1,1-2,1-3,1-4",                 // affine D4
            "0-1:6,1-2",                       // affine G2
            "0-1:5,1-2:5",                     // hyperbolic
            "0-1:5,1-2,2-3,3-4",               // H5 is not finite
            "0-1,1-2:4,2-3,3-4",               // F5 shape
            "0-1,1-2,2-3,3-4,4-5,5-6,6-7,2-8", // E9
        ] {
            let d = CoxeterDiagram::parse(s).unwrap();
            assert!(classify(&d).is_err(), "{s} should be rejected");
        }
    }

    #[test]
    fn named_types_round_trip_through_diagrams() {
        let names = [
            "A1", "A2", "A3", "A7", "B2", "B3", "B5", "D4", "D5", "D7", "E6", "E7", "E8", "F4", "G2", "H3", "H4",
            "I2(5)", "I2(8)", "A1xA1", "A2xB3xH3", "I2(3)", "I2(4)", "I2(6)",
        ];
        for name in names {
            let t = ty(name);
            let d = CoxeterDiagram::parse(name).unwrap();
            assert_eq!(classify(&d).unwrap(), t, "{name}");
        }
        assert_eq!(ty("I2(6)"), ty("G2"));
        assert_eq!(ty("B2xA1").to_string(), "A1xB2");
    }

    #[test]
    fn rejects_unknown_names() {
        for s in ["A0", "B1", "D3", "E9", "F5", "H2", "I2(2)", "Z3", "", "I2(x)"] {
            assert!(s.parse::<GroupType>().is_err(), "{s} should fail");
        }
    }

    #[test]
    fn degree_table() {
        assert_eq!(ty("A1").degrees(), vec![2]);
        assert_eq!(ty("B3").degrees(), vec![2, 4, 6]);
        assert_eq!(ty("I2(6)").degrees(), vec![2, 6]);
        assert_eq!(ty("D4").degrees(), vec![2, 4, 4, 6]);
        assert_eq!(ty("E8").order(), 696_729_600);
        assert_eq!(ty("H4").order(), 14_400);
        assert_eq!(ty("E6").num_reflections(), 36);
        assert_eq!(ty("H3").num_reflections(), 15);
    }
}
