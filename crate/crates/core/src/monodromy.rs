//! Virtual representations of the local inertia group, stored as integer
//! multisets of rotation numbers in `Q/Z`, and their zeta functions.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The character sending the generator to `exp(2 pi i num/den)`; always
/// reduced with `0 <= num < den`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RotationNumber {
    num: u64,
    den: u64,
}

impl RotationNumber {
    pub fn new(a: i64, k: u64) -> Self {
        assert!(k > 0, "rotation number with zero denominator");
        let a = a.rem_euclid(k as i64) as u64;
        let g = a.gcd(&k);
        Self { num: a / g, den: k / g }
    }

    pub fn zero() -> Self {
        Self { num: 0, den: 1 }
    }

    /// The order-two character.
    pub fn half() -> Self {
        Self { num: 1, den: 2 }
    }

    pub fn num(&self) -> u64 {
        self.num
    }

    /// The order of the character.
    pub fn den(&self) -> u64 {
        self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    pub fn plus(&self, other: &Self) -> Self {
        let k = self.den.lcm(&other.den);
        let a = self.num * (k / self.den) + other.num * (k / other.den);
        Self::new(a as i64, k)
    }

    pub fn times(&self, m: i64) -> Self {
        let a = (self.num as i128 * m as i128).rem_euclid(self.den as i128);
        Self::new(a as i64, self.den)
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl Ord for RotationNumber {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.num as u128 * other.den as u128)
            .cmp(&(other.num as u128 * self.den as u128))
            .then(self.den.cmp(&other.den))
    }
}

impl PartialOrd for RotationNumber {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for RotationNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.num == 0 {
            write!(f, "0")
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl FromStr for RotationNumber {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse {
            input: s.to_string(),
            reason: "expected a rotation number a/k with k > 0".into(),
        };
        let s = s.trim();
        let (a, k) = match s.split_once('/') {
            Some((a, k)) => (a.trim(), k.trim()),
            None => (s, "1"),
        };
        let a: i64 = a.parse().map_err(|_| bad())?;
        let k: u64 = k.parse().map_err(|_| bad())?;
        if k == 0 {
            return Err(bad());
        }
        Ok(Self::new(a, k))
    }
}

/// An element of the Grothendieck group: finitely many rotation numbers with
/// nonzero integer multiplicities.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct MonodromyClass {
    mult: BTreeMap<RotationNumber, i64>,
}

impl MonodromyClass {
    pub fn zero() -> Self {
        Self::default()
    }

    /// The rank-one class of a single character.
    pub fn character(r: RotationNumber) -> Self {
        Self::from_terms([(r, 1)])
    }

    /// `V_m`: every `m`-th root of unity once.
    pub fn v(m: u64) -> Self {
        assert!(m >= 1, "V_m needs m >= 1");
        Self::from_terms((0..m).map(|a| (RotationNumber::new(a as i64, m), 1)))
    }

    /// `V_phi`, the order-two character.
    pub fn v_phi() -> Self {
        Self::character(RotationNumber::half())
    }

    pub fn from_terms<I: IntoIterator<Item = (RotationNumber, i64)>>(terms: I) -> Self {
        let mut c = Self::zero();
        for (r, m) in terms {
            c.add_term(r, m);
        }
        c
    }

    fn add_term(&mut self, r: RotationNumber, m: i64) {
        if m == 0 {
            return;
        }
        let e = self.mult.entry(r).or_insert(0);
        *e += m;
        if *e == 0 {
            self.mult.remove(&r);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.mult.is_empty()
    }

    pub fn multiplicity(&self, r: &RotationNumber) -> i64 {
        self.mult.get(r).copied().unwrap_or(0)
    }

    /// Rotation numbers with their multiplicities, in increasing order.
    pub fn terms(&self) -> impl Iterator<Item = (RotationNumber, i64)> + '_ {
        self.mult.iter().map(|(&r, &m)| (r, m))
    }

    pub fn scale(&self, k: i64) -> Self {
        if k == 0 {
            return Self::zero();
        }
        Self {
            mult: self.mult.iter().map(|(&r, &m)| (r, m * k)).collect(),
        }
    }

    /// Bilinear extension of `V_a ⊗ V_b = V_{a+b}`.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (r1, m1) in self.terms() {
            for (r2, m2) in other.terms() {
                out.add_term(r1.plus(&r2), m1 * m2);
            }
        }
        out
    }

    /// Tensor with `V_phi`: every rotation number moves by `1/2`.
    pub fn phi_twist(&self) -> Self {
        Self::from_terms(self.terms().map(|(r, m)| (r.plus(&RotationNumber::half()), m)))
    }

    pub fn virtual_rank(&self) -> i64 {
        self.mult.values().sum()
    }

    /// Galois stability: for each order `k`, all primitive `k`-th roots carry
    /// the same multiplicity. Returns the offending order otherwise.
    fn primitive_multiplicities(&self) -> Result<BTreeMap<u64, i64>> {
        let mut out: BTreeMap<u64, i64> = BTreeMap::new();
        let dens: std::collections::BTreeSet<u64> = self.mult.keys().map(|r| r.den).collect();
        for k in dens {
            let mut value = None;
            for a in 0..k {
                if a.gcd(&k) != 1 {
                    continue;
                }
                let m = self.multiplicity(&RotationNumber::new(a as i64, k));
                match value {
                    None => value = Some(m),
                    Some(v) if v != m => return Err(Error::NotGaloisStable(k)),
                    _ => {}
                }
            }
            if let Some(v) = value.filter(|&v| v != 0) {
                out.insert(k, v);
            }
        }
        Ok(out)
    }

    pub fn is_galois_stable(&self) -> bool {
        self.primitive_multiplicities().is_ok()
    }

    /// Coefficients `c_k` with `self = sum_k c_k V_k`; defined exactly for
    /// Galois-stable classes.
    pub fn v_coefficients(&self) -> Result<BTreeMap<u64, i64>> {
        let prim = self.primitive_multiplicities()?;
        let mut out: BTreeMap<u64, i64> = BTreeMap::new();
        // The primitive part P_k of V_k is sum_{d | k} mu(k/d) V_d.
        for (&k, &m) in &prim {
            for d in divisors(k) {
                let mu = mobius(k / d);
                if mu != 0 {
                    *out.entry(d).or_insert(0) += mu * m;
                }
            }
        }
        out.retain(|_, c| *c != 0);
        Ok(out)
    }

    /// `sum_k c_k V_k`.
    pub fn from_v_coefficients<I: IntoIterator<Item = (u64, i64)>>(coeffs: I) -> Self {
        let mut out = Self::zero();
        for (k, c) in coeffs {
            for (r, m) in Self::v(k).terms() {
                out.add_term(r, m * c);
            }
        }
        out
    }

    /// The zeta function, with `Z(V_chi) = (1 - chi T)^(-1)`.
    pub fn zeta(&self) -> Result<FactoredZeta> {
        Ok(FactoredZeta::from_exponents(
            self.v_coefficients()?.into_iter().map(|(k, c)| (k, -c)),
        ))
    }

    /// Inverse of [`MonodromyClass::zeta`].
    pub fn from_zeta(z: &FactoredZeta) -> Self {
        Self::from_v_coefficients(z.factors().map(|(k, e)| (k, -e)))
    }
}

fn divisors(k: u64) -> Vec<u64> {
    (1..=k).filter(|d| k % d == 0).collect()
}

fn mobius(mut n: u64) -> i64 {
    let mut mu = 1;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            mu = -mu;
        }
        p += 1;
    }
    if n > 1 {
        mu = -mu;
    }
    mu
}

impl Add for &MonodromyClass {
    type Output = MonodromyClass;
    fn add(self, rhs: &MonodromyClass) -> MonodromyClass {
        let mut out = self.clone();
        for (r, m) in rhs.terms() {
            out.add_term(r, m);
        }
        out
    }
}

impl Sub for &MonodromyClass {
    type Output = MonodromyClass;
    fn sub(self, rhs: &MonodromyClass) -> MonodromyClass {
        self + &(-rhs)
    }
}

impl Neg for &MonodromyClass {
    type Output = MonodromyClass;
    fn neg(self) -> MonodromyClass {
        self.scale(-1)
    }
}

impl Add for MonodromyClass {
    type Output = MonodromyClass;
    fn add(self, rhs: MonodromyClass) -> MonodromyClass {
        &self + &rhs
    }
}

impl Sub for MonodromyClass {
    type Output = MonodromyClass;
    fn sub(self, rhs: MonodromyClass) -> MonodromyClass {
        &self - &rhs
    }
}

impl Neg for MonodromyClass {
    type Output = MonodromyClass;
    fn neg(self) -> MonodromyClass {
        self.scale(-1)
    }
}

impl std::iter::Sum for MonodromyClass {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::zero(), |a, b| a + b)
    }
}

fn write_signed_terms<T: fmt::Display>(
    f: &mut fmt::Formatter<'_>,
    terms: impl Iterator<Item = (T, i64)>,
) -> fmt::Result {
    let mut first = true;
    for (label, c) in terms {
        let sign = if c < 0 { "-" } else { "+" };
        match (first, c < 0) {
            (true, true) => write!(f, "-")?,
            (true, false) => {}
            (false, _) => write!(f, " {sign} ")?,
        }
        if c.abs() != 1 {
            write!(f, "{}", c.abs())?;
        }
        write!(f, "{label}")?;
        first = false;
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

/// Galois-stable classes print in the `V_k` basis (`V_2 + V_3 - V_6`);
/// others print as a sum of single characters (`[1/3] - 2[1/2]`).
impl fmt::Display for MonodromyClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.v_coefficients() {
            Ok(c) => write_signed_terms(f, c.into_iter().map(|(k, c)| (format!("V_{k}"), c))),
            Err(_) => write_signed_terms(f, self.terms().map(|(r, m)| (format!("[{r}]"), m))),
        }
    }
}

/// `prod_k (1 - T^k)^(e_k)` with distinct `k` and nonzero `e_k`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FactoredZeta {
    factors: BTreeMap<u64, i64>,
}

impl FactoredZeta {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn from_exponents<I: IntoIterator<Item = (u64, i64)>>(exps: I) -> Self {
        let mut factors = BTreeMap::new();
        for (k, e) in exps {
            assert!(k >= 1, "factor 1 - T^0 is zero");
            *factors.entry(k).or_insert(0) += e;
        }
        factors.retain(|_, e: &mut i64| *e != 0);
        Self { factors }
    }

    /// `(k, e)` pairs with `k` ascending.
    pub fn factors(&self) -> impl Iterator<Item = (u64, i64)> + '_ {
        self.factors.iter().map(|(&k, &e)| (k, e))
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::from_exponents(self.factors().chain(other.factors()))
    }

    /// Exponents `m_k` with the function equal to `prod_k Phi_k(T)^(m_k)`.
    pub fn cyclotomic_exponents(&self) -> BTreeMap<u64, i64> {
        let mut out: BTreeMap<u64, i64> = BTreeMap::new();
        for (k, e) in self.factors() {
            for d in divisors(k) {
                *out.entry(d).or_insert(0) += e;
            }
        }
        out.retain(|_, m| *m != 0);
        out
    }

    /// Numerator and denominator as integer coefficient vectors in
    /// ascending powers of `T`.
    pub fn expand(&self) -> (Vec<BigInt>, Vec<BigInt>) {
        let mut num = vec![BigInt::one()];
        let mut den = vec![BigInt::one()];
        for (k, e) in self.factors() {
            let target = if e > 0 { &mut num } else { &mut den };
            for _ in 0..e.unsigned_abs() {
                let mut next = vec![BigInt::zero(); target.len() + k as usize];
                for (i, c) in target.iter().enumerate() {
                    next[i] += c;
                    next[i + k as usize] -= c;
                }
                *target = next;
            }
        }
        (num, den)
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.factors()
            .map(|(k, e)| (1.0 - t.powi(k as i32)).powi(e as i32))
            .product()
    }

    /// The same function as a product of cyclotomic polynomials, e.g.
    /// `Phi_4` for `1 + T^2`.
    pub fn cyclotomic_string(&self) -> String {
        let parts: Vec<String> = self
            .cyclotomic_exponents()
            .into_iter()
            .map(|(k, m)| {
                if m == 1 {
                    format!("Phi_{k}")
                } else {
                    format!("Phi_{k}^{m}")
                }
            })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }
}

fn factor_string(k: u64, e: u64) -> String {
    let base = if k == 1 {
        "(1-T)".to_string()
    } else {
        format!("(1-T^{k})")
    };
    if e == 1 {
        base
    } else {
        format!("{base}^{e}")
    }
}

/// Canonical text form, numerator first and `k` ascending:
/// `(1-T^6)/((1-T^2)(1-T^3))`.
impl fmt::Display for FactoredZeta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let num: Vec<String> = self
            .factors()
            .filter(|&(_, e)| e > 0)
            .map(|(k, e)| factor_string(k, e as u64))
            .collect();
        let den: Vec<String> = self
            .factors()
            .filter(|&(_, e)| e < 0)
            .map(|(k, e)| factor_string(k, e.unsigned_abs()))
            .collect();
        let num_s = if num.is_empty() { "1".to_string() } else { num.concat() };
        match den.len() {
            0 => write!(f, "{num_s}"),
            1 => write!(f, "{num_s}/{}", den[0]),
            _ => write!(f, "{num_s}/({})", den.concat()),
        }
    }
}
