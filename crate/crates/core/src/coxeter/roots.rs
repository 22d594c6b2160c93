use std::collections::BTreeSet;

use nalgebra::DMatrix;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{CoxeterFactor, GroupType};
use crate::algebra::{primitive_rational, rat, ratio, Rational, RationalMatrix};
use crate::error::{Error, Result};

/// Exact rational realization of a crystallographic group.
///
/// Vectors are written in the realization's own coordinates; `q(x) =
/// x^T gram x`. Each linear form is stored by its coefficient vector, so
/// `l(x) = sum_j l_j x_j`.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactRoots {
    pub gram: RationalMatrix,
    pub simple_roots: Vec<Vec<Rational>>,
    pub positive_roots: Vec<Vec<Rational>>,
    /// One form per reflection hyperplane: `gram * alpha` scaled to a
    /// primitive integer vector with positive leading entry.
    pub forms: Vec<Vec<Rational>>,
}

/// A concrete reflection representation of a finite Coxeter group.
///
/// Crystallographic types carry exact data; every type carries a floating
/// copy for the numeric code.
#[derive(Clone, Debug)]
pub struct RootSystemData {
    group_type: GroupType,
    exact: Option<ExactRoots>,
    gram: DMatrix<f64>,
    simple_roots: Vec<Vec<f64>>,
    forms: Vec<Vec<f64>>,
}

impl RootSystemData {
    pub fn new(t: &GroupType) -> Self {
        if t.is_crystallographic() {
            let parts: Vec<ExactRoots> = t.factors().iter().map(exact_factor).collect();
            let exact = direct_sum(&parts);
            let to_f = |v: &Vec<Rational>| v.iter().map(|x| x.to_f64().unwrap()).collect();
            return Self {
                group_type: t.clone(),
                gram: exact.gram.to_f64(),
                simple_roots: exact.simple_roots.iter().map(to_f).collect(),
                forms: exact.forms.iter().map(to_f).collect(),
                exact: Some(exact),
            };
        }
        let parts: Vec<FloatRoots> = t.factors().iter().map(float_factor).collect();
        let n: usize = parts.iter().map(|p| p.simple_roots.len()).sum();
        let mut gram = DMatrix::zeros(n, n);
        let (mut simple_roots, mut forms) = (Vec::new(), Vec::new());
        let mut off = 0;
        for p in &parts {
            let k = p.simple_roots.len();
            gram.view_mut((off, off), (k, k)).copy_from(&p.gram);
            let pad = |v: &Vec<f64>| {
                let mut w = vec![0.0; n];
                w[off..off + k].copy_from_slice(v);
                w
            };
            simple_roots.extend(p.simple_roots.iter().map(pad));
            forms.extend(p.forms.iter().map(pad));
            off += k;
        }
        Self {
            group_type: t.clone(),
            exact: None,
            gram,
            simple_roots,
            forms,
        }
    }

    pub fn group_type(&self) -> &GroupType {
        &self.group_type
    }

    pub fn rank(&self) -> usize {
        self.gram.nrows()
    }

    pub fn num_reflections(&self) -> usize {
        self.forms.len()
    }

    pub fn exact(&self) -> Option<&ExactRoots> {
        self.exact.as_ref()
    }

    pub fn require_exact(&self) -> Result<&ExactRoots> {
        self.exact
            .as_ref()
            .ok_or_else(|| Error::NotExact(self.group_type.to_string()))
    }

    pub fn gram_f64(&self) -> &DMatrix<f64> {
        &self.gram
    }

    pub fn simple_roots_f64(&self) -> &[Vec<f64>] {
        &self.simple_roots
    }

    pub fn forms_f64(&self) -> &[Vec<f64>] {
        &self.forms
    }

    /// `kappa = prod_i q(l_i) / 4`, with `q` on forms given by the inverse
    /// Gram matrix.
    pub fn kappa(&self) -> Option<Rational> {
        let ex = self.exact.as_ref()?;
        let inv = ex.gram.inverse()?;
        let four = rat(4);
        Some(ex.forms.iter().fold(Rational::one(), |acc, l| {
            acc * inv.bilinear(l, l).expect("form length matches rank") / &four
        }))
    }

    pub fn kappa_f64(&self) -> f64 {
        if let Some(k) = self.kappa() {
            return k.to_f64().unwrap();
        }
        let inv = self
            .gram
            .clone()
            .try_inverse()
            .expect("Gram matrix is positive definite");
        self.forms
            .iter()
            .map(|l| {
                let v = nalgebra::DVector::from_column_slice(l);
                v.dot(&(&inv * &v)) / 4.0
            })
            .product()
    }

    /// `det(gram)`; its class modulo squares is the discriminant of `q`.
    pub fn discr(&self) -> Option<Rational> {
        self.exact.as_ref().map(|ex| ex.gram.det().expect("gram is square"))
    }

    pub fn discr_f64(&self) -> f64 {
        match self.discr() {
            Some(d) => d.to_f64().unwrap(),
            None => self.gram.determinant(),
        }
    }

    /// A copy with the `i`-th linear form multiplied by `lambda`.
    pub fn with_scaled_form(&self, i: usize, lambda: &Rational) -> Result<Self> {
        if lambda.is_zero() {
            return Err(Error::ZeroForm);
        }
        let mut out = self.clone();
        let ex = out
            .exact
            .as_mut()
            .ok_or_else(|| Error::NotExact(self.group_type.to_string()))?;
        let n = ex.forms.len();
        let form = ex
            .forms
            .get_mut(i)
            .ok_or(Error::DimensionMismatch { expected: n, got: i })?;
        for x in form.iter_mut() {
            *x *= lambda;
        }
        let scaled: Vec<f64> = form.iter().map(|x| x.to_f64().unwrap()).collect();
        out.forms[i] = scaled;
        Ok(out)
    }

    /// The simple reflections `s(x) = x - 2 (a, x) / (a, a) a` as matrices.
    pub fn simple_reflections(&self) -> Result<Vec<RationalMatrix>> {
        let ex = self.require_exact()?;
        Ok(ex.simple_roots.iter().map(|a| reflection_matrix(&ex.gram, a)).collect())
    }
}

fn reflection_matrix(gram: &RationalMatrix, a: &[Rational]) -> RationalMatrix {
    let n = a.len();
    let ba = gram.mul_vec(a).expect("root length matches rank");
    let aa: Rational = a.iter().zip(&ba).fold(Rational::zero(), |s, (x, y)| s + x * y);
    let c = rat(2) / aa;
    let mut m = RationalMatrix::identity(n);
    for i in 0..n {
        for j in 0..n {
            let v = m.get(i, j) - &c * &a[i] * &ba[j];
            m.set(i, j, v);
        }
    }
    m
}

fn reflect(gram: &RationalMatrix, a: &[Rational], x: &[Rational]) -> Vec<Rational> {
    let ba = gram.mul_vec(a).expect("root length matches rank");
    let ax: Rational = x.iter().zip(&ba).fold(Rational::zero(), |s, (u, v)| s + u * v);
    let aa: Rational = a.iter().zip(&ba).fold(Rational::zero(), |s, (u, v)| s + u * v);
    let c = rat(2) * ax / aa;
    x.iter().zip(a).map(|(u, v)| u - &c * v).collect()
}

/// Closes the simple roots under the simple reflections and keeps the
/// positive half, ordered by height and then lexicographically.
fn exact_from_simple(gram: RationalMatrix, simple_roots: Vec<Vec<Rational>>) -> ExactRoots {
    let mut roots: BTreeSet<Vec<Rational>> = simple_roots.iter().cloned().collect();
    let mut frontier: Vec<Vec<Rational>> = roots.iter().cloned().collect();
    while let Some(r) = frontier.pop() {
        for a in &simple_roots {
            let s = reflect(&gram, a, &r);
            if roots.insert(s.clone()) {
                frontier.push(s);
            }
        }
    }
    let basis = RationalMatrix::from_rows(simple_roots.clone())
        .expect("simple roots share a length")
        .transpose();
    let mut positive: Vec<(Rational, Vec<Rational>)> = roots
        .into_iter()
        .filter_map(|r| {
            let coeffs = crate::algebra::solve_linear(&basis, &r).expect("simple roots form a basis");
            let height = coeffs.iter().fold(Rational::zero(), |s, c| s + c);
            height.is_positive().then_some((height, r))
        })
        .collect();
    positive.sort();
    let positive_roots: Vec<Vec<Rational>> = positive.into_iter().map(|(_, r)| r).collect();
    let forms = positive_roots
        .iter()
        .map(|a| {
            let ba = gram.mul_vec(a).expect("root length matches rank");
            primitive_rational(&ba).expect("roots are nonzero")
        })
        .collect();
    ExactRoots {
        gram,
        simple_roots,
        positive_roots,
        forms,
    }
}

fn unit(n: usize, i: usize) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); n];
    v[i] = Rational::one();
    v
}

fn exact_factor(f: &CoxeterFactor) -> ExactRoots {
    let n = f.rank();
    match *f {
        CoxeterFactor::A(1) => exact_from_simple(RationalMatrix::identity(1), vec![unit(1, 0)]),
        CoxeterFactor::B(_) => {
            let mut simple = vec![unit(n, 0)];
            for i in 1..n {
                let mut v = unit(n, i);
                v[i - 1] = rat(-1);
                simple.push(v);
            }
            exact_from_simple(RationalMatrix::identity(n), simple)
        }
        CoxeterFactor::D(_) => {
            let mut simple: Vec<Vec<Rational>> = (0..n - 1)
                .map(|i| {
                    let mut v = unit(n, i);
                    v[i + 1] = rat(-1);
                    v
                })
                .collect();
            let mut last = unit(n, n - 2);
            last[n - 1] = rat(1);
            simple.push(last);
            exact_from_simple(RationalMatrix::identity(n), simple)
        }
        CoxeterFactor::F4 => {
            let h = ratio(1, 2);
            let simple = vec![
                vec![rat(0), rat(1), rat(-1), rat(0)],
                vec![rat(0), rat(0), rat(1), rat(-1)],
                vec![rat(0), rat(0), rat(0), rat(1)],
                vec![h.clone(), -h.clone(), -h.clone(), -h],
            ];
            exact_from_simple(RationalMatrix::identity(4), simple)
        }
        CoxeterFactor::G2 => {
            let gram = RationalMatrix::from_i64(&[&[2, -3], &[-3, 6]]);
            exact_from_simple(gram, vec![unit(2, 0), unit(2, 1)])
        }
        // A and E: simple-root coordinates with the Cartan matrix as Gram.
        _ => {
            let d = f.diagram();
            let mut gram = RationalMatrix::identity(n);
            for i in 0..n {
                gram.set(i, i, rat(2));
            }
            for (a, b, _) in d.edges() {
                gram.set(a, b, rat(-1));
                gram.set(b, a, rat(-1));
            }
            exact_from_simple(gram, (0..n).map(|i| unit(n, i)).collect())
        }
    }
}

fn direct_sum(parts: &[ExactRoots]) -> ExactRoots {
    let n: usize = parts.iter().map(|p| p.gram.rows()).sum();
    let gram = RationalMatrix::block_diag(&parts.iter().map(|p| p.gram.clone()).collect::<Vec<_>>());
    let (mut simple_roots, mut positive_roots, mut forms) = (Vec::new(), Vec::new(), Vec::new());
    let mut off = 0;
    for p in parts {
        let k = p.gram.rows();
        let pad = |v: &Vec<Rational>| {
            let mut w = vec![Rational::zero(); n];
            w[off..off + k].clone_from_slice(v);
            w
        };
        simple_roots.extend(p.simple_roots.iter().map(pad));
        positive_roots.extend(p.positive_roots.iter().map(pad));
        forms.extend(p.forms.iter().map(pad));
        off += k;
    }
    ExactRoots {
        gram,
        simple_roots,
        positive_roots,
        forms,
    }
}

struct FloatRoots {
    gram: DMatrix<f64>,
    simple_roots: Vec<Vec<f64>>,
    forms: Vec<Vec<f64>>,
}

/// Simple-root coordinates with `gram_ij = -2 cos(pi / m_ij)`, so every root
/// has `q(alpha) = 2`; the form attached to `alpha` is `gram * alpha`.
fn float_factor(f: &CoxeterFactor) -> FloatRoots {
    let d = f.diagram();
    let n = d.n();
    let gram = DMatrix::from_fn(n, n, |i, j| -2.0 * (std::f64::consts::PI / d.label(i, j) as f64).cos());
    let simple: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    let reflect = |a: &[f64], x: &[f64]| -> Vec<f64> {
        let ga = &gram * nalgebra::DVector::from_column_slice(a);
        let ax: f64 = x.iter().zip(ga.iter()).map(|(u, v)| u * v).sum();
        x.iter().zip(a).map(|(u, v)| u - ax * v).collect()
    };
    let same = |a: &[f64], b: &[f64]| a.iter().zip(b).all(|(x, y)| (x - y).abs() < 1e-9);
    let mut roots: Vec<Vec<f64>> = simple.clone();
    let mut i = 0;
    while i < roots.len() {
        for a in &simple {
            let s = reflect(a, &roots[i]);
            if !roots.iter().any(|r| same(r, &s)) {
                roots.push(s);
            }
        }
        i += 1;
        assert!(roots.len() <= 240, "root closure of {f} did not terminate");
    }
    let forms = roots
        .iter()
        .filter(|r| r.iter().sum::<f64>() > 0.0)
        .map(|a| {
            (&gram * nalgebra::DVector::from_column_slice(a))
                .iter()
                .copied()
                .collect()
        })
        .collect();
    FloatRoots {
        gram,
        simple_roots: simple,
        forms,
    }
}
