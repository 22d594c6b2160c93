//! Local monodromy of the discriminant by recursion over connected
//! subdiagrams, and the global classes derived from it.

use std::collections::HashMap;
use std::sync::Mutex;

use serde::Serialize;

use crate::coxeter::{classify, CanonicalDiagram, CoxeterDiagram, GroupType};
use crate::error::{Error, Result};
use crate::monodromy::{MonodromyClass, RotationNumber};

/// Largest rank the recursion accepts; covers `E8`.
pub const MAX_RANK: usize = 8;

/// A connected induced subdiagram.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Subgraph {
    pub vertices: Vec<usize>,
    pub group_type: GroupType,
}

/// Every nonempty vertex set inducing a connected subdiagram, ordered by
/// size and then lexicographically.
pub fn connected_subgraphs(d: &CoxeterDiagram) -> Result<Vec<Subgraph>> {
    check_rank(d)?;
    let n = d.n();
    let mut out = Vec::new();
    for mask in 1u32..(1 << n) {
        let vertices: Vec<usize> = (0..n).filter(|&i| mask & (1 << i) != 0).collect();
        let sub = d.induced(&vertices);
        if sub.is_connected() {
            out.push(Subgraph {
                group_type: classify(&sub)?,
                vertices,
            });
        }
    }
    out.sort_by(|a, b| {
        a.vertices
            .len()
            .cmp(&b.vertices.len())
            .then(a.vertices.cmp(&b.vertices))
    });
    Ok(out)
}

fn check_rank(d: &CoxeterDiagram) -> Result<()> {
    if d.n() == 0 {
        return Err(Error::Unsupported("empty diagram".into()));
    }
    if d.n() > MAX_RANK {
        return Err(Error::Unsupported(format!(
            "rank {} exceeds the recursion limit {MAX_RANK}",
            d.n()
        )));
    }
    Ok(())
}

fn require_connected(d: &CoxeterDiagram) -> Result<()> {
    if d.is_connected() {
        Ok(())
    } else {
        Err(Error::Unsupported(format!("diagram {d} is not connected")))
    }
}

fn sign(k: usize) -> i64 {
    if k % 2 == 0 {
        1
    } else {
        -1
    }
}

/// `n V_1 - sum_i V_{d_i}`.
fn degree_side(t: &GroupType) -> MonodromyClass {
    let n = t.rank() as i64;
    t.degrees().iter().fold(MonodromyClass::v(1).scale(n), |acc, &d| {
        acc - MonodromyClass::v(d as u64)
    })
}

/// Memoized local classes `M_G`, keyed by canonical diagram.
#[derive(Debug, Default)]
pub struct DiagramClassCache {
    map: Mutex<HashMap<CanonicalDiagram, MonodromyClass>>,
}

impl DiagramClassCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.map.lock().expect("cache lock poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `M_G`, solved from
    /// `sum_E (-1)^|E| phi(M_{G(E)}) = n V_1 - sum_i V_{d_i}`
    /// over connected subdiagrams `E`; zero for disconnected diagrams.
    pub fn local_class(&self, d: &CoxeterDiagram) -> Result<MonodromyClass> {
        check_rank(d)?;
        let key = d.canonical_form();
        if let Some(c) = self.map.lock().expect("cache lock poisoned").get(&key) {
            return Ok(c.clone());
        }
        let t = classify(d)?;
        let value = if !d.is_connected() {
            MonodromyClass::zero()
        } else {
            let n = d.n();
            let mut rest = degree_side(&t);
            for sub in connected_subgraphs(d)? {
                if sub.vertices.len() == n {
                    continue;
                }
                let m = self.local_class(&d.induced(&sub.vertices))?;
                rest = rest - m.phi_twist().scale(sign(sub.vertices.len()));
            }
            rest.scale(sign(n)).phi_twist()
        };
        let mut map = self.map.lock().expect("cache lock poisoned");
        Ok(map.entry(key).or_insert(value).clone())
    }

    /// Both sides of the degree identity, re-summed over all connected
    /// subdiagrams including the whole diagram.
    pub fn degree_identity(&self, d: &CoxeterDiagram) -> Result<IdentityCheck> {
        let t = classify(d)?;
        let mut lhs = MonodromyClass::zero();
        for sub in connected_subgraphs(d)? {
            let m = self.local_class(&d.induced(&sub.vertices))?;
            lhs = lhs + m.phi_twist().scale(sign(sub.vertices.len()));
        }
        Ok(IdentityCheck::new("deg", lhs, degree_side(&t)))
    }

    /// `(-1)^n sum over proper connected E of Mbar_{G(E)}` with
    /// `Mbar = (-1)^(|E|-1) M`.
    pub fn global_class_at_0(&self, d: &CoxeterDiagram) -> Result<MonodromyClass> {
        require_connected(d)?;
        let n = d.n();
        let mut acc = MonodromyClass::zero();
        for sub in connected_subgraphs(d)? {
            let k = sub.vertices.len();
            if k == n {
                continue;
            }
            let m = self.local_class(&d.induced(&sub.vertices))?;
            acc = acc + m.scale(sign(k - 1));
        }
        Ok(acc.scale(sign(n)))
    }

    /// `M_G - [q^N class]`.
    pub fn global_class_at_inf(&self, d: &CoxeterDiagram) -> Result<MonodromyClass> {
        require_connected(d)?;
        Ok(self.local_class(d)? - qn_class(d)?)
    }

    /// The subgraph formula for the class at 0 against the closed form
    /// `M_G + (-1)^(n-1) (n V_phi - sum_i phi(V_{d_i}))` that the degree
    /// identity predicts.
    pub fn check_conn(&self, d: &CoxeterDiagram) -> Result<IdentityCheck> {
        let t = classify(d)?;
        let lhs = self.global_class_at_0(d)?;
        let rhs = self.local_class(d)? + degree_side(&t).phi_twist().scale(sign(d.n() - 1));
        Ok(IdentityCheck::new("conn", lhs, rhs))
    }

    /// `[at infinity] + [q^N] = M_G`, with the class at infinity obtained
    /// from the class at 0 and the right-hand side of the `otherform`
    /// identity rather than from `M_G`.
    pub fn check_compl(&self, d: &CoxeterDiagram) -> Result<IdentityCheck> {
        let qn = qn_class(d)?;
        let at_inf = self.global_class_at_0(d)? - qn.clone() - otherform_rhs(&classify(d)?);
        Ok(IdentityCheck::new("compl", at_inf + qn, self.local_class(d)?))
    }

    /// `[at 0] - [at infinity] - [q^N] = (-1)^n sum_i (V_{phi^d_i} ⊗ V_{d_i} - V_phi)`.
    pub fn check_otherform(&self, d: &CoxeterDiagram) -> Result<IdentityCheck> {
        let t = classify(d)?;
        let lhs = self.global_class_at_0(d)? - self.global_class_at_inf(d)? - qn_class(d)?;
        Ok(IdentityCheck::new("otherform", lhs, otherform_rhs(&t)))
    }
}

fn otherform_rhs(t: &GroupType) -> MonodromyClass {
    let n = t.rank();
    let sum: MonodromyClass = t
        .degrees()
        .iter()
        .map(|&d| {
            let vd = MonodromyClass::v(d as u64);
            let twisted = if d % 2 == 0 { vd } else { vd.phi_twist() };
            twisted - MonodromyClass::v_phi()
        })
        .sum();
    sum.scale(sign(n))
}

/// `M_G` with a throwaway cache.
pub fn local_class_m(d: &CoxeterDiagram) -> Result<MonodromyClass> {
    DiagramClassCache::new().local_class(d)
}

pub fn global_class_at_0(d: &CoxeterDiagram) -> Result<MonodromyClass> {
    DiagramClassCache::new().global_class_at_0(d)
}

pub fn global_class_at_inf(d: &CoxeterDiagram) -> Result<MonodromyClass> {
    DiagramClassCache::new().global_class_at_inf(d)
}

/// Monodromy class of `x^a + y^b` at the origin:
/// `V_1 - sum_{0<i<a, 0<j<b} [i/a + j/b]`.
pub fn brieskorn_oracle(a: u64, b: u64) -> MonodromyClass {
    assert!(a >= 2 && b >= 2, "Brieskorn exponents must be at least 2");
    let mut c = MonodromyClass::v(1);
    for i in 1..a {
        for j in 1..b {
            let r = RotationNumber::new(i as i64, a).plus(&RotationNumber::new(j as i64, b));
            c = c - MonodromyClass::character(r);
        }
    }
    c
}

/// `(n, N)` for the group of `d`.
fn rank_and_reflections(d: &CoxeterDiagram) -> Result<(usize, usize)> {
    let t = classify(d)?;
    Ok((t.rank(), t.num_reflections()))
}

/// `(-1)^(n-1) V_{phi^(n+N) chi^N}`.
pub fn exactbar_class(d: &CoxeterDiagram, chi: RotationNumber) -> Result<MonodromyClass> {
    let (n, big_n) = rank_and_reflections(d)?;
    let mut r = chi.times(big_n as i64);
    if (n + big_n) % 2 == 1 {
        r = r.plus(&RotationNumber::half());
    }
    Ok(MonodromyClass::character(r).scale(sign(n - 1)))
}

/// Coefficients of `[q class] = a V_1 + b V_phi`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct AbCoefficients {
    pub a_bar: i64,
    pub b_bar: i64,
}

pub fn ab_coefficients(d: &CoxeterDiagram) -> Result<AbCoefficients> {
    let (n, big_n) = rank_and_reflections(d)?;
    let s = sign(n - 1);
    Ok(if (n + big_n) % 2 == 0 {
        AbCoefficients { a_bar: s, b_bar: 0 }
    } else {
        AbCoefficients { a_bar: 0, b_bar: s }
    })
}

/// `(a - b) V_N + b V_{2N}`.
pub fn qn_class(d: &CoxeterDiagram) -> Result<MonodromyClass> {
    let (_, big_n) = rank_and_reflections(d)?;
    let ab = ab_coefficients(d)?;
    let big_n = big_n as u64;
    Ok(MonodromyClass::v(big_n).scale(ab.a_bar - ab.b_bar) + MonodromyClass::v(2 * big_n).scale(ab.b_bar))
}

/// `a V_{chi^N} + b V_{phi chi^N}` against the exact class.
pub fn check_ab2(d: &CoxeterDiagram, chi: RotationNumber) -> Result<IdentityCheck> {
    let (_, big_n) = rank_and_reflections(d)?;
    let ab = ab_coefficients(d)?;
    let base = chi.times(big_n as i64);
    let lhs = MonodromyClass::character(base).scale(ab.a_bar)
        + MonodromyClass::character(base.plus(&RotationNumber::half())).scale(ab.b_bar);
    Ok(IdentityCheck::new("ab2", lhs, exactbar_class(d, chi)?))
}

/// Both sides of an identity in the Grothendieck group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityCheck {
    pub identity: &'static str,
    pub lhs: MonodromyClass,
    pub rhs: MonodromyClass,
}

impl IdentityCheck {
    fn new(identity: &'static str, lhs: MonodromyClass, rhs: MonodromyClass) -> Self {
        Self { identity, lhs, rhs }
    }

    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }

    /// `lhs - rhs`; zero exactly when the identity holds.
    pub fn difference(&self) -> MonodromyClass {
        &self.lhs - &self.rhs
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(s: &str) -> CoxeterDiagram {
        CoxeterDiagram::parse(s).unwrap()
    }

    fn v(k: u64) -> MonodromyClass {
        MonodromyClass::v(k)
    }

    fn r(a: i64, k: u64) -> RotationNumber {
        RotationNumber::new(a, k)
    }

    #[test]
    fn subgraph_enumeration() {
        assert_eq!(connected_subgraphs(&d("A2")).unwrap().len(), 3);
        assert_eq!(connected_subgraphs(&d("A3")).unwrap().len(), 6);
        let mut types: Vec<String> = connected_subgraphs(&d("B3"))
            .unwrap()
            .into_iter()
            .map(|s| s.group_type.to_string())
            .collect();
        types.sort();
        assert_eq!(types, ["A1", "A1", "A1", "A2", "B2", "B3"]);
    }

    #[test]
    fn local_classes() {
        assert_eq!(local_class_m(&d("A1")).unwrap(), v(1));
        assert_eq!(local_class_m(&d("A2")).unwrap(), v(2) + v(3) - v(6));
        assert_eq!(local_class_m(&d("B2")).unwrap(), v(2) - v(4));
        assert!(local_class_m(&d("A1xA1")).unwrap().is_zero());
        assert!(local_class_m(&d("A2xB2")).unwrap().is_zero());
    }

    #[test]
    fn brieskorn_examples() {
        let c = brieskorn_oracle(3, 2);
        assert_eq!(
            c,
            v(1) - MonodromyClass::character(r(1, 6)) - MonodromyClass::character(r(5, 6))
        );
        assert_eq!(brieskorn_oracle(4, 2), v(2) - v(4));
        assert!(brieskorn_oracle(2, 2).is_zero());
    }

    #[test]
    fn rank_two_matches_brieskorn() {
        for m in 3..=12u64 {
            let local = local_class_m(&d(&format!("I2({m})"))).unwrap();
            assert_eq!(local.zeta().unwrap(), brieskorn_oracle(m, 2).zeta().unwrap(), "I2({m})");
        }
    }

    #[test]
    fn global_classes() {
        assert!(global_class_at_0(&d("A1")).unwrap().is_zero());
        for m in [3, 4, 5, 7, 12] {
            assert_eq!(global_class_at_0(&d(&format!("I2({m})"))).unwrap(), v(1).scale(2));
        }
        assert_eq!(global_class_at_inf(&d("B2")).unwrap(), v(2));
        assert!(global_class_at_inf(&d("A1")).unwrap().is_zero());
        assert_eq!(global_class_at_inf(&d("A2")).unwrap(), v(2));
        assert!(global_class_at_0(&d("A1xA1")).is_err());
    }

    #[test]
    fn exactbar_and_ab() {
        assert_eq!(exactbar_class(&d("A1"), RotationNumber::zero()).unwrap(), v(1));
        assert_eq!(exactbar_class(&d("B2"), RotationNumber::zero()).unwrap(), -v(1));
        assert_eq!(
            exactbar_class(&d("B2"), r(1, 3)).unwrap(),
            -MonodromyClass::character(r(1, 3))
        );
        let ab = |s| ab_coefficients(&d(s)).unwrap();
        assert_eq!(ab("A1"), AbCoefficients { a_bar: 1, b_bar: 0 });
        assert_eq!(ab("A2"), AbCoefficients { a_bar: 0, b_bar: -1 });
        assert_eq!(ab("B2"), AbCoefficients { a_bar: -1, b_bar: 0 });
        assert_eq!(qn_class(&d("A1")).unwrap(), v(1));
        assert_eq!(qn_class(&d("B2")).unwrap(), -v(4));
        assert_eq!(qn_class(&d("A2")).unwrap(), v(3) - v(6));
    }

    #[test]
    fn identities_hold() {
        let cache = DiagramClassCache::new();
        for s in ["A1", "A2", "A3", "B2", "B3", "D4", "F4", "H3", "H4", "I2(5)", "E6"] {
            let g = d(s);
            assert!(cache.degree_identity(&g).unwrap().holds(), "deg {s}");
            assert!(cache.check_conn(&g).unwrap().holds(), "conn {s}");
            assert!(cache.check_compl(&g).unwrap().holds(), "compl {s}");
            assert!(cache.check_otherform(&g).unwrap().holds(), "otherform {s}");
            for k in 1..=6 {
                for a in 0..k {
                    assert!(check_ab2(&g, r(a as i64, k)).unwrap().holds(), "ab2 {s} {a}/{k}");
                }
            }
        }
    }

    #[test]
    fn otherform_examples() {
        let cache = DiagramClassCache::new();
        let b2 = cache.check_otherform(&d("B2")).unwrap();
        assert_eq!(b2.lhs, v(1) - MonodromyClass::v_phi() + v(4));
        let a1 = cache.check_otherform(&d("A1")).unwrap();
        assert_eq!(a1.rhs, -v(1));
    }

    #[test]
    fn cache_is_keyed_by_isomorphism_class() {
        let cache = DiagramClassCache::new();
        let a = cache.local_class(&d("0-1:4,1-2")).unwrap();
        let before = cache.len();
        let b = cache.local_class(&d("0-1,1-2:4")).unwrap();
        assert_eq!(a, b);
        assert_eq!(cache.len(), before);
        assert_eq!(a, local_class_m(&d("B3")).unwrap());
    }

    #[test]
    fn rejects_infinite_types() {
        assert!(local_class_m(&d("0-1,1-2,0-2")).is_err());
    }
}
