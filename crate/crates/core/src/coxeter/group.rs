use std::collections::{HashMap, HashSet};

use num_traits::{One, Zero};

use super::RootSystemData;
use crate::algebra::{rat, Rational, RationalMatrix};
use crate::error::{Error, Result};

/// Closure bound used by [`generate_group`]; comfortably above `|E6|`.
pub const DEFAULT_GROUP_LIMIT: usize = 60_000;

/// All elements of the reflection group, by closure of the simple
/// reflections under multiplication. The identity comes first.
pub fn generate_group(r: &RootSystemData) -> Result<Vec<RationalMatrix>> {
    generate_group_bounded(r, DEFAULT_GROUP_LIMIT)
}

pub fn generate_group_bounded(r: &RootSystemData, limit: usize) -> Result<Vec<RationalMatrix>> {
    let gens = r.simple_reflections()?;
    let id = RationalMatrix::identity(r.rank());
    let mut seen: HashSet<RationalMatrix> = HashSet::from([id.clone()]);
    let mut elements = vec![id];
    let mut i = 0;
    while i < elements.len() {
        for s in &gens {
            let g = &elements[i] * s;
            if !seen.contains(&g) {
                if elements.len() == limit {
                    return Err(Error::GroupTooLarge(limit));
                }
                seen.insert(g.clone());
                elements.push(g);
            }
        }
        i += 1;
    }
    Ok(elements)
}

/// Coefficients of `det(1 - t g)` in ascending powers of `t`, by
/// Faddeev-LeVerrier.
fn det_one_minus_tg(g: &RationalMatrix) -> Vec<Rational> {
    let n = g.rows();
    // c[k] is the coefficient of lambda^k in det(lambda - g).
    let mut c = vec![Rational::zero(); n + 1];
    c[n] = Rational::one();
    let mut m = RationalMatrix::zeros(n, n);
    for k in 1..=n {
        let mut next = g * &m;
        for i in 0..n {
            let v = next.get(i, i) + &c[n - k + 1];
            next.set(i, i, v);
        }
        m = next;
        let am = g * &m;
        let tr = (0..n).fold(Rational::zero(), |s, i| s + am.get(i, i));
        c[n - k] = -tr / rat(k as i64);
    }
    // det(1 - t g) = t^n det(1/t - g).
    (0..=n).map(|j| c[n - j].clone()).collect()
}

/// Power series inverse of `p` (with `p[0] != 0`) up to `t^max_degree`.
fn series_inverse(p: &[Rational], max_degree: usize) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); max_degree + 1];
    let inv0 = p[0].recip();
    for k in 0..=max_degree {
        let mut acc = if k == 0 { Rational::one() } else { Rational::zero() };
        for j in 1..=k.min(p.len() - 1) {
            acc -= &p[j] * &out[k - j];
        }
        out[k] = acc * &inv0;
    }
    out
}

/// Molien series `(1/|G|) sum_g 1/det(1 - t g)` up to `t^max_degree`.
pub fn molien_series(group: &[RationalMatrix], max_degree: usize) -> Vec<Rational> {
    let mut classes: HashMap<Vec<Rational>, usize> = HashMap::new();
    for g in group {
        *classes.entry(det_one_minus_tg(g)).or_default() += 1;
    }
    let mut total = vec![Rational::zero(); max_degree + 1];
    for (poly, count) in classes {
        let c = rat(count as i64);
        for (acc, x) in total.iter_mut().zip(series_inverse(&poly, max_degree)) {
            *acc += x * &c;
        }
    }
    let order = rat(group.len() as i64);
    total.into_iter().map(|x| x / &order).collect()
}

/// Reads the degrees off the Molien series by peeling factors
/// `1/(1 - t^k)` from the bottom up.
pub fn molien_degrees(group: &[RationalMatrix]) -> Result<Vec<u32>> {
    let n = group.first().map_or(0, RationalMatrix::rows);
    // A reflection group of order |G| has sum(d_i) <= |G| + n - 1; for the
    // groups we handle the bound below is far from tight.
    let max_degree = group.len().min(64) + n;
    let series = molien_series(group, max_degree);
    let mismatch = |why: String| Err(Error::MolienMismatch(why));
    if !series[0].is_one() {
        return mismatch(format!("constant term {}", series[0]));
    }
    let mut product = vec![Rational::zero(); max_degree + 1];
    product[0] = Rational::one();
    let mut degrees = Vec::new();
    for k in 1..=max_degree {
        let excess = &series[k] - &product[k];
        if !excess.is_integer() || excess < Rational::zero() {
            return mismatch(format!("coefficient of t^{k} is {}", series[k]));
        }
        let reps = excess.to_integer();
        let mut r = num_bigint::BigInt::zero();
        while r < reps {
            degrees.push(k as u32);
            for j in k..=max_degree {
                let v = &product[j] + &product[j - k];
                product[j] = v;
            }
            r += 1;
        }
        if degrees.len() > n {
            return mismatch(format!("more than {n} factors"));
        }
    }
    if degrees.len() != n {
        return mismatch(format!("found {} factors for rank {n}", degrees.len()));
    }
    let order: u128 = degrees.iter().map(|&d| d as u128).product();
    if order != group.len() as u128 {
        return mismatch(format!("degree product {order} != group order {}", group.len()));
    }
    Ok(degrees)
}
