//! Basic invariants of crystallographic reflection groups and the
//! discriminant written in invariant coordinates.

use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{
    monomials_of_degree, rank, rat, solve_linear, weighted_exponents, Exponents, MultiPoly, Rational, RationalMatrix,
};
use crate::coxeter::{generate_group, GroupType, RootSystemData};
use crate::error::{Error, Result};

/// `(1/|G|) sum_g p(g x)`.
pub fn reynolds(p: &MultiPoly, group: &[RationalMatrix]) -> Result<MultiPoly> {
    let n = p.nvars();
    let mut acc = MultiPoly::zero(n);
    for g in group {
        if g.rows() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: g.rows(),
            });
        }
        let subs: Vec<MultiPoly> = (0..n).map(|i| MultiPoly::linear_form(g.row(i))).collect();
        acc = acc.try_add(&p.compose(&subs)?)?;
    }
    Ok(acc.scale(&Rational::new(1.into(), (group.len() as i64).into())))
}

/// `p(g x) = p(x)` for every `g` in `gens`.
pub fn is_invariant(p: &MultiPoly, gens: &[RationalMatrix]) -> Result<bool> {
    let n = p.nvars();
    for g in gens {
        let subs: Vec<MultiPoly> = (0..n).map(|i| MultiPoly::linear_form(g.row(i))).collect();
        if p.compose(&subs)? != *p {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `Delta = (prod_i l_i)^2` for the exact forms of `r`.
pub fn discriminant_poly(r: &RootSystemData) -> Result<MultiPoly> {
    let ex = r.require_exact()?;
    let n = r.rank();
    let prod = ex
        .forms
        .iter()
        .fold(MultiPoly::one(n), |acc, l| &acc * &MultiPoly::linear_form(l));
    Ok(&prod * &prod)
}

/// Basic invariants `f_1 = q, f_2, ..., f_n` and, once computed, the
/// discriminant `Delta~` as a polynomial in `y_1..y_n` with
/// `Delta~(f_1(x), ..., f_n(x)) = Delta(x)`.
#[derive(Clone, Debug)]
pub struct InvariantPresentation {
    group_type: GroupType,
    degrees: Vec<u32>,
    invariants: Vec<MultiPoly>,
    /// The monomial each invariant was averaged from; `None` for `q`.
    seeds: Vec<Option<Exponents>>,
    discriminant: Option<MultiPoly>,
}

impl InvariantPresentation {
    pub fn group_type(&self) -> &GroupType {
        &self.group_type
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn invariants(&self) -> &[MultiPoly] {
        &self.invariants
    }

    pub fn seeds(&self) -> &[Option<Exponents>] {
        &self.seeds
    }

    pub fn rank(&self) -> usize {
        self.degrees.len()
    }

    pub fn discriminant(&self) -> Option<&MultiPoly> {
        self.discriminant.as_ref()
    }

    /// Replaces `f_i` by `f_i + extra(f_1, ..., f_n)`, where `extra` only
    /// involves invariants of lower degree, and recomputes `Delta~` if it was
    /// present.
    pub fn with_triangular_change(&self, i: usize, extra: &MultiPoly) -> Result<Self> {
        let n = self.rank();
        if i == 0 || i >= n {
            return Err(Error::Unsupported("only f_2..f_n may be changed".into()));
        }
        if (!extra.is_zero() && extra.weighted_degree(&self.degrees) != Some(self.degrees[i]))
            || extra.terms().any(|(e, _)| e[i..].iter().any(|&k| k > 0))
        {
            return Err(Error::Unsupported(
                "change must be homogeneous of the same degree in lower invariants".into(),
            ));
        }
        let mut out = self.clone();
        out.invariants[i] = self.invariants[i].try_add(&extra.compose(&self.invariants)?)?;
        out.seeds[i] = None;
        if let Some(tilde) = &self.discriminant {
            let delta = tilde.compose(&self.invariants)?;
            out.discriminant = Some(invariantize(&delta, &out)?);
        }
        Ok(out)
    }
}

/// Gradients of `polys` at `point` as rows.
fn gradient_rows(polys: &[MultiPoly], point: &[Rational]) -> Result<Vec<Vec<Rational>>> {
    polys
        .iter()
        .map(|f| (0..f.nvars()).map(|j| f.derivative(j).eval(point)).collect())
        .collect()
}

fn poly_det(m: &[Vec<MultiPoly>], nvars: usize) -> MultiPoly {
    match m.len() {
        0 => MultiPoly::one(nvars),
        1 => m[0][0].clone(),
        k => {
            let mut acc = MultiPoly::zero(nvars);
            for j in 0..k {
                if m[0][j].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<MultiPoly>> = m[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|&(c, _)| c != j)
                            .map(|(_, p)| p.clone())
                            .collect()
                    })
                    .collect();
                let term = &m[0][j] * &poly_det(&minor, nvars);
                acc = if j % 2 == 0 { &acc + &term } else { &acc - &term };
            }
            acc
        }
    }
}

fn column_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0u32..1 << n)
        .filter(|m| m.count_ones() as usize == k)
        .map(|m| (0..n).filter(|&i| m & (1 << i) != 0).collect())
        .collect()
}

/// Whether the gradients of `polys` are linearly independent over the
/// function field: first at random rational points, then symbolically.
fn jacobian_has_full_rank(polys: &[MultiPoly], rng: &mut ChaCha8Rng) -> Result<bool> {
    let n = polys[0].nvars();
    let k = polys.len();
    for _ in 0..11 {
        let point: Vec<Rational> = (0..n).map(|_| rat(rng.gen_range(-50..=50))).collect();
        if rank(&gradient_rows(polys, &point)?) == k {
            return Ok(true);
        }
    }
    let jac: Vec<Vec<MultiPoly>> = polys
        .iter()
        .map(|f| (0..n).map(|j| f.derivative(j)).collect())
        .collect();
    Ok(column_subsets(n, k).into_iter().any(|cols| {
        let sub: Vec<Vec<MultiPoly>> = jac
            .iter()
            .map(|row| cols.iter().map(|&c| row[c].clone()).collect())
            .collect();
        !poly_det(&sub, n).is_zero()
    }))
}

/// `f_1 = q`, then for each further degree the first Reynolds-averaged
/// monomial (graded lex order) that keeps the Jacobian of full rank.
pub fn basic_invariants(t: &GroupType) -> Result<InvariantPresentation> {
    let r = RootSystemData::new(t);
    let ex = r.require_exact()?;
    let group = generate_group(&r)?;
    let degrees = t.degrees();
    let mut rng = ChaCha8Rng::seed_from_u64(0x1ee7);
    let mut invariants = vec![ex.gram.quadratic_form()];
    let mut seeds = vec![None];
    for &d in &degrees[1..] {
        let mut chosen = None;
        for m in monomials_of_degree(r.rank(), d) {
            let f = reynolds(&MultiPoly::monomial(m.clone(), Rational::one()), &group)?;
            if f.is_zero() {
                continue;
            }
            let mut trial = invariants.clone();
            trial.push(f.clone());
            if jacobian_has_full_rank(&trial, &mut rng)? {
                chosen = Some((m, f));
                break;
            }
        }
        let (m, f) = chosen.ok_or(Error::InvariantSearchExhausted(d))?;
        invariants.push(f);
        seeds.push(Some(m));
    }
    Ok(InvariantPresentation {
        group_type: t.clone(),
        degrees,
        invariants,
        seeds,
        discriminant: None,
    })
}

/// The unique `P` with `P(f_1, ..., f_n) = p`, found by matching coefficients
/// over all weighted monomials of the right degree.
pub fn invariantize(p: &MultiPoly, pres: &InvariantPresentation) -> Result<MultiPoly> {
    let n = pres.rank();
    if p.is_zero() {
        return Ok(MultiPoly::zero(n));
    }
    let deg = p.homogeneous_degree().ok_or(Error::NotHomogeneous)?;
    let candidates = weighted_exponents(&pres.degrees, deg);
    if candidates.is_empty() {
        return Err(Error::NotInSubalgebra);
    }
    let images: Vec<MultiPoly> = candidates
        .iter()
        .map(|a| {
            a.iter()
                .zip(&pres.invariants)
                .fold(MultiPoly::one(p.nvars()), |acc, (&k, f)| &acc * &f.pow(k))
        })
        .collect();
    let mut rows: Vec<Exponents> = images
        .iter()
        .flat_map(|f| f.terms().map(|(e, _)| e.clone()))
        .chain(p.terms().map(|(e, _)| e.clone()))
        .collect();
    rows.sort();
    rows.dedup();
    let a = RationalMatrix::from_rows(
        rows.iter()
            .map(|e| images.iter().map(|f| f.coeff(e)).collect())
            .collect(),
    )?;
    let b: Vec<Rational> = rows.iter().map(|e| p.coeff(e)).collect();
    let coeffs = solve_linear(&a, &b).map_err(|e| match e {
        Error::Inconsistent => Error::NotInSubalgebra,
        other => other,
    })?;
    MultiPoly::from_terms(n, candidates.into_iter().zip(coeffs))
}

/// Basic invariants together with `Delta~`.
pub fn discriminant_in_invariants(t: &GroupType) -> Result<InvariantPresentation> {
    let mut pres = basic_invariants(t)?;
    let delta = discriminant_poly(&RootSystemData::new(t))?;
    pres.discriminant = Some(invariantize(&delta, &pres)?);
    Ok(pres)
}
