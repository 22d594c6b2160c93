//! Central hyperplane arrangements over the rationals: intersection posets,
//! chamber counts and Euler characteristics of quadric complements.

use std::collections::{BTreeMap, HashMap};

use num_traits::{ToPrimitive, Zero};
use rand::Rng;
use serde::Serialize;

use crate::algebra::{kernel_basis, primitive_rational, rat, Rational, RationalMatrix};
use crate::coxeter::{GroupType, RootSystemData};
use crate::error::{Error, Result};

/// A central arrangement: linear forms on `Q^dim`, pairwise
/// non-proportional, each stored as a primitive integer vector.
#[derive(Clone, Debug, PartialEq)]
pub struct Arrangement {
    dim: usize,
    forms: Vec<Vec<Rational>>,
}

impl Arrangement {
    /// Builds an arrangement, dropping forms proportional to earlier ones.
    pub fn new(dim: usize, forms: Vec<Vec<Rational>>) -> Result<Self> {
        let mut out: Vec<Vec<Rational>> = Vec::new();
        for f in forms {
            if f.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: f.len(),
                });
            }
            let p = primitive_rational(&f).ok_or(Error::ZeroForm)?;
            if !out.contains(&p) {
                out.push(p);
            }
        }
        Ok(Self { dim, forms: out })
    }

    /// The reflection arrangement of a crystallographic group.
    pub fn coxeter(r: &RootSystemData) -> Result<Self> {
        let ex = r.require_exact()?;
        Self::new(r.rank(), ex.forms.clone())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn forms(&self) -> &[Vec<Rational>] {
        &self.forms
    }

    pub fn len(&self) -> usize {
        self.forms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forms.is_empty()
    }

    fn top(&self) -> Subspace {
        let basis = (0..self.dim)
            .map(|i| {
                let mut v = vec![Rational::zero(); self.dim];
                v[i] = rat(1);
                v
            })
            .collect();
        self.subspace(basis)
    }

    /// Wraps a basis together with the set of forms vanishing on it.
    fn subspace(&self, basis: Vec<Vec<Rational>>) -> Subspace {
        let contains = self
            .forms
            .iter()
            .map(|f| basis.iter().all(|b| dot(f, b).is_zero()))
            .collect();
        Subspace { basis, contains }
    }

    /// `X ∩ H_i`.
    fn meet(&self, x: &Subspace, i: usize) -> Subspace {
        let f = &self.forms[i];
        let restricted: Vec<Rational> = x.basis.iter().map(|b| dot(f, b)).collect();
        let coeffs = kernel_basis(&[restricted], x.basis.len());
        let basis = coeffs
            .iter()
            .map(|c| {
                let mut v = vec![Rational::zero(); self.dim];
                for (cj, b) in c.iter().zip(&x.basis) {
                    if !cj.is_zero() {
                        for (vk, bk) in v.iter_mut().zip(b) {
                            *vk += cj * bk;
                        }
                    }
                }
                v
            })
            .collect();
        self.subspace(basis)
    }
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).fold(Rational::zero(), |s, (x, y)| s + x * y)
}

/// An intersection space, keyed by the hyperplanes containing it.
#[derive(Clone, Debug)]
struct Subspace {
    basis: Vec<Vec<Rational>>,
    contains: Vec<bool>,
}

impl Subspace {
    fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// One element of the intersection poset.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Flat {
    pub dim: usize,
    /// Indices of the hyperplanes containing the flat, ascending.
    pub hyperplanes: Vec<usize>,
    pub mobius: i64,
}

/// The intersection poset ordered by reverse inclusion, with the whole
/// space first and flats sorted by decreasing dimension.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntersectionPoset {
    pub flats: Vec<Flat>,
}

impl IntersectionPoset {
    /// Zaslavsky: the number of chambers is `sum |mu(X)|`.
    pub fn chamber_count(&self) -> u64 {
        self.flats.iter().map(|f| f.mobius.unsigned_abs()).sum()
    }

    /// Coefficients of the characteristic polynomial `sum mu(X) t^dim X`,
    /// indexed by dimension.
    pub fn characteristic_polynomial(&self) -> Vec<i64> {
        let top = self.flats.first().map_or(0, |f| f.dim);
        let mut c = vec![0; top + 1];
        for f in &self.flats {
            c[f.dim] += f.mobius;
        }
        c
    }
}

pub fn intersection_poset(a: &Arrangement) -> IntersectionPoset {
    let top = a.top();
    let mut found: BTreeMap<Vec<bool>, Subspace> = BTreeMap::new();
    found.insert(top.contains.clone(), top.clone());
    let mut layer = vec![top];
    while !layer.is_empty() {
        let mut next = Vec::new();
        for x in &layer {
            for i in 0..a.len() {
                if x.contains[i] {
                    continue;
                }
                let y = a.meet(x, i);
                if !found.contains_key(&y.contains) {
                    found.insert(y.contains.clone(), y.clone());
                    next.push(y);
                }
            }
        }
        layer = next;
    }
    let mut spaces: Vec<Subspace> = found.into_values().collect();
    spaces.sort_by(|x, y| {
        y.dim()
            .cmp(&x.dim())
            .then_with(|| index_set(&x.contains).cmp(&index_set(&y.contains)))
    });
    let mut flats: Vec<Flat> = Vec::with_capacity(spaces.len());
    for (k, x) in spaces.iter().enumerate() {
        let mobius = if k == 0 {
            1
        } else {
            // Every flat strictly above X has strictly larger dimension, so it
            // was already handled.
            -spaces[..k]
                .iter()
                .zip(&flats)
                .filter(|(y, _)| is_strict_subset(&y.contains, &x.contains))
                .map(|(_, f)| f.mobius)
                .sum::<i64>()
        };
        flats.push(Flat {
            dim: x.dim(),
            hyperplanes: index_set(&x.contains),
            mobius,
        });
    }
    IntersectionPoset { flats }
}

fn index_set(mask: &[bool]) -> Vec<usize> {
    mask.iter().enumerate().filter_map(|(i, &b)| b.then_some(i)).collect()
}

fn is_strict_subset(a: &[bool], b: &[bool]) -> bool {
    a != b && a.iter().zip(b).all(|(&x, &y)| !x || y)
}

/// Shared driver for deletion-restriction recursions.
///
/// The state `(X, t)` stands for the arrangement induced on the flat `X` by
/// the first `t` hyperplanes. Deleting hyperplane `t - 1` either leaves the
/// induced arrangement unchanged (the hyperplane contains `X`, or meets `X`
/// in a flat an earlier hyperplane already cuts out) or splits off the
/// restriction to `X ∩ H_{t-1}`.
struct DeletionRestriction<'a, F> {
    arr: &'a Arrangement,
    memo: HashMap<(Vec<bool>, usize), i64>,
    base: F,
    sign: i64,
}

impl<F: FnMut(&Subspace) -> Result<i64>> DeletionRestriction<'_, F> {
    fn eval(&mut self, x: &Subspace, t: usize) -> Result<i64> {
        if let Some(&v) = self.memo.get(&(x.contains.clone(), t)) {
            return Ok(v);
        }
        let v = if t == 0 {
            (self.base)(x)?
        } else {
            let i = t - 1;
            let deleted = self.eval(x, t - 1)?;
            if x.contains[i] {
                deleted
            } else {
                let y = self.arr.meet(x, i);
                let duplicate = (0..i).any(|j| !x.contains[j] && y.contains[j]);
                if duplicate {
                    deleted
                } else {
                    deleted + self.sign * self.eval(&y, t - 1)?
                }
            }
        };
        self.memo.insert((x.contains.clone(), t), v);
        Ok(v)
    }
}

/// Chambers by `ch(A) = ch(A') + ch(A'')`.
pub fn chamber_count_deletion_restriction(a: &Arrangement) -> u64 {
    let mut dr = DeletionRestriction {
        arr: a,
        memo: HashMap::new(),
        base: |_: &Subspace| Ok::<i64, Error>(1),
        sign: 1,
    };
    dr.eval(&a.top(), a.len()).expect("chamber base case is infallible") as u64
}

/// Number of chambers of the real complement, computed by deletion-restriction
/// and cross-checked against Zaslavsky's formula.
pub fn chamber_count(a: &Arrangement) -> Result<u64> {
    let deletion_restriction = chamber_count_deletion_restriction(a);
    let zaslavsky = intersection_poset(a).chamber_count();
    if deletion_restriction != zaslavsky {
        return Err(Error::ChamberMismatch {
            deletion_restriction,
            zaslavsky,
        });
    }
    Ok(zaslavsky)
}

/// Euler characteristic of `{q = 1} \ A` in `C^n`, with `q(x) = x^T gram x`.
///
/// Uses `chi(Q \ A) = chi(Q \ A') - chi((Q ∩ H) \ A'')`, ending at the smooth
/// affine quadric of dimension `d - 1` in a `d`-dimensional flat, whose Euler
/// characteristic is `1 + (-1)^(d-1)`. Fails if `q` degenerates on a flat
/// the recursion visits.
pub fn quadric_complement_euler(a: &Arrangement, gram: &RationalMatrix) -> Result<i64> {
    if a.is_empty() {
        return Err(Error::EmptyArrangement);
    }
    if gram.rows() != a.dim() || !gram.is_square() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            got: gram.rows(),
        });
    }
    let base = |x: &Subspace| {
        let d = x.dim();
        if d > 0 {
            let b = RationalMatrix::from_rows(x.basis.clone())?;
            let restricted = &(&b * gram) * &b.transpose();
            if restricted.det()?.is_zero() {
                return Err(Error::DegenerateRestriction { dim: d });
            }
        }
        Ok(if d == 0 {
            0
        } else if d % 2 == 1 {
            2
        } else {
            0
        })
    };
    let mut dr = DeletionRestriction {
        arr: a,
        memo: HashMap::new(),
        base,
        sign: -1,
    };
    dr.eval(&a.top(), a.len())
}

/// Outcome of the Euler characteristic checks for a reflection arrangement.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EulerReport {
    pub group: String,
    pub rank: usize,
    pub order: u64,
    pub chambers: u64,
    /// `chi(B)` for `B` the complement of the arrangement in `{q = 1}`.
    pub chi_b: i64,
    /// `(-1)^(n-1) |G|`.
    pub expected_chi_b: i64,
    /// `chi(B) / |G|` as a reduced fraction; it should be `(-1)^(n-1)`.
    pub chi_quotient: String,
    pub pass: bool,
}

pub fn coxeter_euler_checks(t: &GroupType) -> Result<EulerReport> {
    let r = RootSystemData::new(t);
    let a = Arrangement::coxeter(&r)?;
    let gram = &r.require_exact()?.gram;
    let n = t.rank();
    let order = t.order() as u64;
    let chambers = chamber_count(&a)?;
    let chi_b = quadric_complement_euler(&a, gram)?;
    let sign = if n % 2 == 1 { 1 } else { -1 };
    let expected_chi_b = sign * order as i64;
    let chi_quotient = Rational::new(chi_b.into(), (order as i64).into()).to_string();
    let pass = chi_b == expected_chi_b && chambers == order;
    Ok(EulerReport {
        group: t.to_string(),
        rank: n,
        order,
        chambers,
        chi_b,
        expected_chi_b,
        chi_quotient,
        pass,
    })
}

/// A random central arrangement with small integer coefficients, at most
/// `max_planes` hyperplanes in dimension `1..=max_dim`. Zero and repeated
/// forms are dropped, so the result may have fewer hyperplanes.
pub fn random_arrangement<R: Rng>(rng: &mut R, max_dim: usize, max_planes: usize) -> Arrangement {
    loop {
        let dim = rng.gen_range(1..=max_dim);
        let k = rng.gen_range(1..=max_planes);
        let forms: Vec<Vec<Rational>> = (0..k)
            .map(|_| (0..dim).map(|_| rat(rng.gen_range(-2..=2))).collect())
            .filter(|f: &Vec<Rational>| f.iter().any(|x| !x.is_zero()))
            .collect();
        if let Ok(a) = Arrangement::new(dim, forms) {
            if !a.is_empty() {
                return a;
            }
        }
    }
}

/// A random symmetric integer matrix with nonzero determinant.
pub fn random_nondegenerate_form<R: Rng>(rng: &mut R, dim: usize) -> RationalMatrix {
    loop {
        let mut m = RationalMatrix::zeros(dim, dim);
        for i in 0..dim {
            for j in i..dim {
                let v = rat(rng.gen_range(-3..=3));
                m.set(i, j, v.clone());
                m.set(j, i, v);
            }
        }
        if m.det().map(|d| !d.is_zero()).unwrap_or(false) {
            return m;
        }
    }
}

/// `(-1)^(n-1) * ch`, the value the quadric complement should take.
pub fn expected_quadric_euler(a: &Arrangement, chambers: u64) -> i64 {
    let sign = if a.dim() % 2 == 1 { 1 } else { -1 };
    sign * chambers.to_i64().expect("chamber count fits in i64")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn arr(dim: usize, forms: &[&[i64]]) -> Arrangement {
        Arrangement::new(dim, forms.iter().map(|f| f.iter().map(|&x| rat(x)).collect()).collect()).unwrap()
    }

    fn coxeter(name: &str) -> Arrangement {
        Arrangement::coxeter(&RootSystemData::new(&name.parse().unwrap())).unwrap()
    }

    #[test]
    fn single_hyperplane() {
        let a = arr(2, &[&[1, 0]]);
        let p = intersection_poset(&a);
        assert_eq!(p.flats.len(), 2);
        assert_eq!(p.flats[1].mobius, -1);
        assert_eq!(chamber_count(&a).unwrap(), 2);
    }

    #[test]
    fn concurrent_lines() {
        let a = arr(2, &[&[1, 0], &[0, 1], &[1, 1]]);
        let p = intersection_poset(&a);
        assert_eq!(p.flats.len(), 5);
        assert_eq!(p.flats.last().unwrap().mobius, 2);
        assert_eq!(chamber_count(&a).unwrap(), 6);
        assert_eq!(p.characteristic_polynomial(), vec![2, -3, 1]);
    }

    #[test]
    fn b2_poset() {
        let p = intersection_poset(&coxeter("B2"));
        assert_eq!(p.flats.last().unwrap().mobius, 3);
        assert_eq!(p.chamber_count(), 8);
    }

    #[test]
    fn proportional_forms_are_merged() {
        let a = arr(2, &[&[1, 2], &[-2, -4], &[3, 0]]);
        assert_eq!(a.len(), 2);
        assert_eq!(Arrangement::new(2, vec![vec![rat(0), rat(0)]]), Err(Error::ZeroForm));
    }

    #[test]
    fn quadric_examples() {
        let one = RationalMatrix::identity(1);
        assert_eq!(quadric_complement_euler(&arr(1, &[&[1]]), &one).unwrap(), 2);
        let id2 = RationalMatrix::identity(2);
        assert_eq!(quadric_complement_euler(&arr(2, &[&[1, 0]]), &id2).unwrap(), -2);
        let r = RootSystemData::new(&"A2".parse().unwrap());
        let a2 = Arrangement::coxeter(&r).unwrap();
        assert_eq!(quadric_complement_euler(&a2, &r.exact().unwrap().gram).unwrap(), -6);
    }

    #[test]
    fn degenerate_restriction_is_reported() {
        // q = xy vanishes identically on the line y = 0.
        let q = RationalMatrix::from_i64(&[&[0, 1], &[1, 0]]);
        let a = arr(2, &[&[0, 1]]);
        assert_eq!(
            quadric_complement_euler(&a, &q),
            Err(Error::DegenerateRestriction { dim: 1 })
        );
    }

    #[test]
    fn coxeter_reports() {
        for (name, chi) in [("A1", 2), ("B2", -8), ("A2", -6), ("B3", 48), ("A3", 24)] {
            let rep = coxeter_euler_checks(&name.parse().unwrap()).unwrap();
            assert!(rep.pass, "{name}: {rep:?}");
            assert_eq!(rep.chi_b, chi, "{name}");
        }
    }

    #[test]
    fn random_arrangements_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..40 {
            let a = random_arrangement(&mut rng, 3, 6);
            let ch = chamber_count(&a).unwrap();
            let q = random_nondegenerate_form(&mut rng, a.dim());
            match quadric_complement_euler(&a, &q) {
                Ok(chi) => assert_eq!(chi, expected_quadric_euler(&a, ch)),
                Err(Error::DegenerateRestriction { .. }) => {}
                Err(e) => panic!("{e}"),
            }
        }
    }
}
