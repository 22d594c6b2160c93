//! Character sums over prime fields attached to the discriminant, and the
//! Gauss-sum product they are compared with.

use std::collections::{HashMap, HashSet};
use std::f64::consts::TAU;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::algebra::{rat, MultiPoly, Rational};
use crate::coxeter::{generate_group, GroupType, RootSystemData};
use crate::error::{Error, Result};
use crate::invariants::{basic_invariants, discriminant_poly, invariantize, InvariantPresentation};

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

/// `F_p` for an odd prime `p`, with its smallest primitive root and a
/// discrete logarithm table.
#[derive(Clone, Debug)]
pub struct PrimeField {
    p: u64,
    generator: u64,
    log: Vec<u64>,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if p == 2 || !is_prime(p) || p > 1 << 20 {
            return Err(Error::InvalidPrime(p));
        }
        let order = p - 1;
        let prime_factors: Vec<u64> = (2..=order).filter(|&q| order % q == 0 && is_prime(q)).collect();
        let generator = (2..p)
            .find(|&g| prime_factors.iter().all(|&q| pow_mod(g, order / q, p) != 1))
            .unwrap_or(1);
        let mut log = vec![0; p as usize];
        let mut x = 1;
        for k in 0..order {
            log[x as usize] = k;
            x = x * generator % p;
        }
        Ok(Self { p, generator, log })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn generator(&self) -> u64 {
        self.generator
    }

    /// Discrete logarithm to the base of the generator; `x` must be nonzero.
    pub fn log(&self, x: u64) -> u64 {
        debug_assert!(x % self.p != 0);
        self.log[(x % self.p) as usize]
    }

    /// Reduces a rational whose denominator is prime to `p`.
    pub fn reduce(&self, r: &Rational) -> Result<u64> {
        let p = BigInt::from(self.p);
        let den = r.denom().mod_floor(&p);
        if den.is_zero() {
            return Err(Error::BadPrime {
                p: self.p,
                reason: format!("{p} divides the denominator of {r}"),
            });
        }
        let num = r.numer().mod_floor(&p).to_u64().unwrap();
        let den = den.to_u64().unwrap();
        Ok(num * pow_mod(den, self.p - 2, self.p) % self.p)
    }

    /// `psi(x) = exp(2 pi i x / p)`.
    pub fn psi(&self, x: u64) -> Complex64 {
        Complex64::from_polar(1.0, TAU * (x % self.p) as f64 / self.p as f64)
    }

    /// Index of the quadratic character.
    pub fn phi(&self) -> MultChar {
        MultChar {
            index: (self.p - 1) / 2,
        }
    }

    pub fn characters(&self) -> impl Iterator<Item = MultChar> {
        (0..self.p - 1).map(|index| MultChar { index })
    }

    pub fn char(&self, index: u64) -> MultChar {
        MultChar {
            index: index % (self.p - 1),
        }
    }

    /// `chi(x)` for nonzero `x`.
    pub fn chi(&self, chi: MultChar, x: u64) -> Complex64 {
        let k = (chi.index * self.log(x)) % (self.p - 1);
        Complex64::from_polar(1.0, TAU * k as f64 / (self.p - 1) as f64)
    }

    /// `phi(x)` as `+1` or `-1` for nonzero `x`.
    pub fn legendre(&self, x: u64) -> i64 {
        if self.log(x) % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// `g(chi) = -sum_{x != 0} chi(x) psi(x)`.
    pub fn gauss_sum(&self, chi: MultChar) -> Complex64 {
        -(1..self.p).map(|x| self.chi(chi, x) * self.psi(x)).sum::<Complex64>()
    }
}

/// A multiplicative character `chi(g^k) = exp(2 pi i index k / (p - 1))`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct MultChar {
    pub index: u64,
}

impl MultChar {
    pub fn is_trivial(&self) -> bool {
        self.index == 0
    }
}

/// Everything needed to evaluate both sides for one group and one prime.
#[derive(Clone, Debug)]
pub struct CharSumSetup {
    group: GroupType,
    field: PrimeField,
    n: usize,
    degrees: Vec<u32>,
    kappa: u64,
    discr: u64,
    /// `counts[(log Delta~(y), y_1)]` over `y` with `Delta~(y) != 0`.
    counts: HashMap<(u64, u64), u64>,
}

fn check_prime_for(t: &GroupType, field: &PrimeField) -> Result<()> {
    let p = field.p();
    if t.order() % p as u128 == 0 {
        return Err(Error::BadPrime {
            p,
            reason: format!("{p} divides |{t}| = {}", t.order()),
        });
    }
    Ok(())
}

/// Reduces all coefficients of `f`.
fn reduce_poly(f: &MultiPoly, field: &PrimeField) -> Result<Vec<(Vec<u32>, u64)>> {
    f.terms().map(|(e, c)| Ok((e.clone(), field.reduce(c)?))).collect()
}

fn eval_mod(terms: &[(Vec<u32>, u64)], point: &[u64], p: u64) -> u64 {
    terms.iter().fold(0, |acc, (e, c)| {
        let v = e
            .iter()
            .zip(point)
            .fold(*c, |t, (&k, &x)| t * pow_mod(x, k as u64, p) % p);
        (acc + v) % p
    })
}

/// The constant `c` with `det(d f_i / d x_j) = c prod_i l_i`.
fn jacobian_constant(r: &RootSystemData, pres: &InvariantPresentation) -> Result<Rational> {
    let ex = r.require_exact()?;
    let n = r.rank();
    let point: Vec<Rational> = (0..n).map(|i| rat(3 + 7 * i as i64 + (i * i) as i64)).collect();
    let prod = ex.forms.iter().fold(rat(1), |acc, l| {
        acc * l.iter().zip(&point).fold(rat(0), |s, (a, b)| s + a * b)
    });
    if prod.is_zero() {
        return Err(Error::Unsupported("evaluation point lies on a mirror".into()));
    }
    let mut m: Vec<Vec<Rational>> = Vec::with_capacity(n);
    for f in pres.invariants() {
        m.push((0..n).map(|j| f.derivative(j).eval(&point)).collect::<Result<_>>()?);
    }
    let det = crate::algebra::RationalMatrix::from_rows(m)?.det()?;
    Ok(det / prod)
}

impl CharSumSetup {
    /// Sets up the computation with the default invariant presentation.
    pub fn new(t: &GroupType, p: u64) -> Result<Self> {
        let field = PrimeField::new(p)?;
        check_prime_for(t, &field)?;
        let r = RootSystemData::new(t);
        let pres = basic_invariants(t)?;
        Self::from_parts(&r, &pres, field)
    }

    /// Uses the given root data (possibly with rescaled forms) and basic
    /// invariants; `Delta~` is recomputed from the forms of `r`.
    pub fn from_parts(r: &RootSystemData, pres: &InvariantPresentation, field: PrimeField) -> Result<Self> {
        let t = r.group_type().clone();
        check_prime_for(&t, &field)?;
        let p = field.p();
        let bad = |reason: String| Error::BadPrime { p, reason };
        let kappa = field.reduce(&r.kappa().ok_or_else(|| Error::NotExact(t.to_string()))?)?;
        if kappa == 0 {
            return Err(bad("kappa vanishes mod p".into()));
        }
        let discr = field.reduce(&r.discr().expect("exact data has a Gram matrix"))?;
        if discr == 0 {
            return Err(bad("p divides discr q".into()));
        }
        if field.reduce(&jacobian_constant(r, pres)?)? == 0 {
            return Err(bad("the Jacobian of the basic invariants vanishes mod p".into()));
        }
        for f in pres.invariants() {
            reduce_poly(f, &field)?;
        }
        let delta = invariantize(&discriminant_poly(r)?, pres)?;
        let delta_mod = reduce_poly(&delta, &field)?;
        let n = r.rank();
        let mut counts: HashMap<(u64, u64), u64> = HashMap::new();
        let total = (p as usize).pow(n as u32);
        let mut y = vec![0u64; n];
        for idx in 0..total {
            let mut k = idx;
            for yi in y.iter_mut() {
                *yi = (k % p as usize) as u64;
                k /= p as usize;
            }
            let v = eval_mod(&delta_mod, &y, p);
            if v != 0 {
                *counts.entry((field.log(v), y[0])).or_insert(0) += 1;
            }
        }
        Ok(Self {
            group: t.clone(),
            degrees: t.degrees(),
            n,
            field,
            kappa,
            discr,
            counts,
        })
    }

    pub fn field(&self) -> &PrimeField {
        &self.field
    }

    pub fn kappa_mod_p(&self) -> u64 {
        self.kappa
    }

    pub fn discr_mod_p(&self) -> u64 {
        self.discr
    }

    /// `S(chi) = sum over y with Delta~(y) != 0 of chi(Delta~(y)) psi(y_1)`.
    pub fn char_sum(&self, chi: MultChar) -> Complex64 {
        let q = (self.field.p() - 1) as f64;
        self.counts
            .iter()
            .map(|(&(log, y1), &c)| {
                let k = (chi.index * log) % (self.field.p() - 1);
                Complex64::from_polar(c as f64, TAU * k as f64 / q) * self.field.psi(y1)
            })
            .sum()
    }

    /// `(-1)^n phi(discr) g(phi)^n phi(kappa) chi(kappa) prod_i g((phi chi)^d_i) / g(phi chi)`.
    pub fn rhs(&self, chi: MultChar) -> Complex64 {
        let f = &self.field;
        let phi = f.phi();
        let phichi = f.char(chi.index + phi.index);
        let sign = if self.n % 2 == 0 { 1.0 } else { -1.0 };
        let legendre = (f.legendre(self.discr) * f.legendre(self.kappa)) as f64;
        let g_phi = f.gauss_sum(phi);
        let g_phichi = f.gauss_sum(phichi);
        let mut value = Complex64::new(sign * legendre, 0.0) * g_phi.powu(self.n as u32) * f.chi(chi, self.kappa);
        for &d in &self.degrees {
            value *= f.gauss_sum(f.char(d as u64 * phichi.index)) / g_phichi;
        }
        value
    }

    pub fn verify(&self) -> CharSumReport {
        self.verify_chars(self.field.characters())
    }

    pub fn verify_chars<I: IntoIterator<Item = MultChar>>(&self, chars: I) -> CharSumReport {
        let rows: Vec<CharSumRow> = chars
            .into_iter()
            .map(|chi| {
                let s = self.char_sum(chi);
                let rhs = self.rhs(chi);
                let abs_diff = (s - rhs).norm();
                CharSumRow {
                    chi_index: chi.index,
                    s_re: s.re,
                    s_im: s.im,
                    rhs_re: rhs.re,
                    rhs_im: rhs.im,
                    abs_diff,
                    pass: abs_diff < CHAR_SUM_TOLERANCE * (1.0 + rhs.norm()),
                }
            })
            .collect();
        CharSumReport {
            group: self.group.to_string(),
            p: self.field.p(),
            pass: rows.iter().all(|r| r.pass),
            rows,
        }
    }
}

/// Relative tolerance for `|S - RHS| < tol (1 + |RHS|)`.
pub const CHAR_SUM_TOLERANCE: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CharSumRow {
    pub chi_index: u64,
    #[serde(rename = "S_re")]
    pub s_re: f64,
    #[serde(rename = "S_im")]
    pub s_im: f64,
    #[serde(rename = "RHS_re")]
    pub rhs_re: f64,
    #[serde(rename = "RHS_im")]
    pub rhs_im: f64,
    pub abs_diff: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CharSumReport {
    #[serde(rename = "type")]
    pub group: String,
    pub p: u64,
    pub rows: Vec<CharSumRow>,
    pub pass: bool,
}

impl CharSumReport {
    pub fn passed(&self) -> usize {
        self.rows.iter().filter(|r| r.pass).count()
    }

    pub fn max_abs_diff(&self) -> f64 {
        self.rows.iter().map(|r| r.abs_diff).fold(0.0, f64::max)
    }
}

/// Runs every character for `(t, p)`.
pub fn verify_finite(t: &GroupType, p: u64) -> Result<CharSumReport> {
    Ok(CharSumSetup::new(t, p)?.verify())
}

/// For every `y` with `Delta~(y) != 0` that is hit by `x -> (f_i(x))`, checks
/// that the fibre is one free orbit of the group reduced mod `p`.
pub fn orbit_sanity(t: &GroupType, p: u64) -> Result<bool> {
    let field = PrimeField::new(p)?;
    check_prime_for(t, &field)?;
    let r = RootSystemData::new(t);
    let pres = basic_invariants(t)?;
    let delta = reduce_poly(&invariantize(&discriminant_poly(&r)?, &pres)?, &field)?;
    let fs: Vec<Vec<(Vec<u32>, u64)>> = pres
        .invariants()
        .iter()
        .map(|f| reduce_poly(f, &field))
        .collect::<Result<_>>()?;
    let group: Vec<Vec<Vec<u64>>> = generate_group(&r)?
        .iter()
        .map(|g| {
            (0..g.rows())
                .map(|i| g.row(i).iter().map(|c| field.reduce(c)).collect::<Result<Vec<u64>>>())
                .collect::<Result<Vec<Vec<u64>>>>()
        })
        .collect::<Result<_>>()?;
    let n = r.rank();
    let mut fibres: HashMap<Vec<u64>, Vec<Vec<u64>>> = HashMap::new();
    for idx in 0..(p as usize).pow(n as u32) {
        let x: Vec<u64> = (0..n)
            .map(|i| ((idx / (p as usize).pow(i as u32)) % p as usize) as u64)
            .collect();
        let y: Vec<u64> = fs.iter().map(|f| eval_mod(f, &x, p)).collect();
        if eval_mod(&delta, &y, p) != 0 {
            fibres.entry(y).or_default().push(x);
        }
    }
    for xs in fibres.values() {
        if xs.len() != group.len() {
            return Ok(false);
        }
        let orbit: HashSet<Vec<u64>> = group
            .iter()
            .map(|g| {
                g.iter()
                    .map(|row| row.iter().zip(&xs[0]).fold(0, |s, (a, b)| (s + a * b) % p))
                    .collect()
            })
            .collect();
        if orbit.len() != group.len() || !xs.iter().all(|x| orbit.contains(x)) {
            return Ok(false);
        }
    }
    Ok(true)
}
