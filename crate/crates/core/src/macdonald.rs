//! Numerical checks of the Gaussian integral of `Delta^s` and of the maximum
//! of `Delta` on the unit sphere of `q`.

use std::f64::consts::PI;

use gauss_quad::GaussHermite;
use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;
use statrs::function::gamma::ln_gamma;

use crate::algebra::{rat, Rational};
use crate::coxeter::{GroupType, RootSystemData};
use crate::error::{Error, Result};

/// Largest rank for which the tensor quadrature is run.
pub const MAX_QUADRATURE_RANK: usize = 2;
pub const DEFAULT_SEED: u64 = 0x5eed;

#[derive(Clone, Debug)]
pub struct MacdonaldConstants {
    pub kappa: Option<Rational>,
    pub kappa_f64: f64,
    pub discr: Option<Rational>,
    pub discr_f64: f64,
    pub degrees: Vec<u32>,
    pub num_reflections: usize,
    pub rank: usize,
}

impl MacdonaldConstants {
    pub fn new(r: &RootSystemData) -> Self {
        Self {
            kappa: r.kappa(),
            kappa_f64: r.kappa_f64(),
            discr: r.discr(),
            discr_f64: r.discr_f64(),
            degrees: r.group_type().degrees(),
            num_reflections: r.num_reflections(),
            rank: r.rank(),
        }
    }

    /// `log` of `pi^{n/2} kappa^s prod Gamma(d_i s + 1) / Gamma(s + 1) discr^{-1/2}`.
    pub fn ln_rhs(&self, s: f64) -> Result<f64> {
        let dmax = self.degrees.iter().copied().max().unwrap_or(1) as f64;
        if s.is_nan() || s <= -1.0 / dmax {
            return Err(Error::GammaPole(s));
        }
        let gammas: f64 = self
            .degrees
            .iter()
            .map(|&d| ln_gamma(d as f64 * s + 1.0) - ln_gamma(s + 1.0))
            .sum();
        Ok(0.5 * self.rank as f64 * PI.ln() + s * self.kappa_f64.ln() + gammas - 0.5 * self.discr_f64.ln())
    }

    pub fn rhs(&self, s: f64) -> Result<f64> {
        Ok(self.ln_rhs(s)?.exp())
    }

    /// `kappa prod d_i^{d_i} / N^N`, exact when `kappa` is.
    pub fn max_delta_exact(&self) -> Option<Rational> {
        let mut v = self.kappa.clone()?;
        for &d in &self.degrees {
            v *= rat(d as i64).pow(d as i32);
        }
        let n = self.num_reflections as i64;
        Some(v / rat(n).pow(n as i32))
    }

    pub fn max_delta(&self) -> f64 {
        let logs: f64 = self.degrees.iter().map(|&d| d as f64 * (d as f64).ln()).sum();
        let n = self.num_reflections as f64;
        (self.kappa_f64.ln() + logs - n * n.ln()).exp()
    }

    /// Power mean `(avg_S Delta^s)^{1/s}` over the sphere `q = 1`, obtained
    /// from the integral by splitting off the radial Gamma factor.
    pub fn sphere_power_mean(&self, s: f64) -> Result<f64> {
        let half_n = 0.5 * self.rank as f64;
        let ln_avg =
            self.ln_rhs(s)? - self.ln_rhs(0.0)? + ln_gamma(half_n) - ln_gamma(self.num_reflections as f64 * s + half_n);
        Ok((ln_avg / s).exp())
    }
}

pub fn macdonald_rhs(t: &GroupType, s: f64) -> Result<f64> {
    MacdonaldConstants::new(&RootSystemData::new(t)).rhs(s)
}

pub fn max_delta_closed_form(t: &GroupType) -> f64 {
    MacdonaldConstants::new(&RootSystemData::new(t)).max_delta()
}

/// Forms rewritten in coordinates `u` with `q = |u|^2`.
fn whitened_forms(r: &RootSystemData) -> Result<Vec<DVector<f64>>> {
    let chol = r
        .gram_f64()
        .clone()
        .cholesky()
        .ok_or_else(|| Error::Unsupported("q is not positive definite".into()))?;
    let l: DMatrix<f64> = chol.l();
    r.forms_f64()
        .iter()
        .map(|f| {
            l.solve_lower_triangular(&DVector::from_column_slice(f))
                .ok_or_else(|| Error::Unsupported("singular Cholesky factor".into()))
        })
        .collect()
}

/// `int Delta(x)^s exp(-q(x)) dx` by tensor Gauss-Hermite quadrature.
pub fn macdonald_lhs_quadrature(t: &GroupType, s: u32) -> Result<f64> {
    let r = RootSystemData::new(t);
    let n = r.rank();
    if n > MAX_QUADRATURE_RANK {
        return Err(Error::Unsupported(format!(
            "quadrature needs rank <= {MAX_QUADRATURE_RANK}, got {n}"
        )));
    }
    let forms = whitened_forms(&r)?;
    let nodes = (r.num_reflections() * s as usize + 4).max(2);
    let rule = GaussHermite::new(nodes).map_err(|e| Error::Unsupported(e.to_string()))?;
    let pairs: Vec<(f64, f64)> = rule.nodes().copied().zip(rule.weights().copied()).collect();
    let delta = |u: &[f64]| -> f64 {
        forms
            .iter()
            .map(|l| {
                let v: f64 = l.iter().zip(u).map(|(a, b)| a * b).sum();
                v * v
            })
            .product::<f64>()
            .powi(s as i32)
    };
    let mut total = 0.0;
    let mut idx = vec![0usize; n];
    'outer: loop {
        let u: Vec<f64> = idx.iter().map(|&i| pairs[i].0).collect();
        let w: f64 = idx.iter().map(|&i| pairs[i].1).product();
        total += w * delta(&u);
        for k in 0..n {
            idx[k] += 1;
            if idx[k] < pairs.len() {
                continue 'outer;
            }
            idx[k] = 0;
        }
        break;
    }
    Ok(total / r.discr_f64().sqrt())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IntegralReport {
    #[serde(rename = "type")]
    pub group: String,
    pub s: u32,
    pub lhs: f64,
    pub rhs: f64,
    pub rel_err: f64,
    pub pass: bool,
}

pub const INTEGRAL_TOLERANCE: f64 = 1e-8;

pub fn integral_report(t: &GroupType, s: u32) -> Result<IntegralReport> {
    let lhs = macdonald_lhs_quadrature(t, s)?;
    let rhs = macdonald_rhs(t, s as f64)?;
    let rel_err = ((lhs - rhs) / rhs).abs();
    Ok(IntegralReport {
        group: t.to_string(),
        s,
        lhs,
        rhs,
        rel_err,
        pass: rel_err < INTEGRAL_TOLERANCE,
    })
}

fn log_delta(forms: &[DVector<f64>], u: &DVector<f64>) -> f64 {
    forms.iter().map(|l| 2.0 * l.dot(u).abs().ln()).sum()
}

/// Projected gradient ascent of `log Delta` on the unit sphere from `u`.
fn ascend(forms: &[DVector<f64>], mut u: DVector<f64>) -> f64 {
    let mut f = log_delta(forms, &u);
    let mut step = 0.1;
    for _ in 0..20_000 {
        if !f.is_finite() {
            return f;
        }
        let grad: DVector<f64> = forms
            .iter()
            .fold(DVector::zeros(u.len()), |acc, l| acc + l * (2.0 / l.dot(&u)));
        let tangent = &grad - &u * grad.dot(&u);
        let slope = tangent.norm_squared();
        if slope == 0.0 {
            break;
        }
        step *= 2.0;
        let (next, fnext) = loop {
            let cand = (&u + &tangent * step).normalize();
            let fc = log_delta(forms, &cand);
            if fc >= f + 1e-4 * step * slope || step < 1e-18 {
                break (cand, fc);
            }
            step *= 0.5;
        };
        if fnext < f {
            break;
        }
        let moved = (&next - &u).norm();
        u = next;
        f = fnext;
        if moved < 1e-12 {
            break;
        }
    }
    f
}

/// Best value of `Delta` on `q = 1` over `restarts` seeded random starts.
pub fn max_delta_optimize(t: &GroupType, restarts: usize, seed: u64) -> Result<f64> {
    let r = RootSystemData::new(t);
    let forms = whitened_forms(&r)?;
    let n = r.rank();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = f64::NEG_INFINITY;
    for _ in 0..restarts.max(1) {
        let v: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
        let u = DVector::from_vec(v).normalize();
        best = best.max(ascend(&forms, u));
    }
    Ok(best.exp())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MaxReport {
    #[serde(rename = "type")]
    pub group: String,
    pub restarts: usize,
    pub seed: u64,
    pub optimized: f64,
    pub closed_form: f64,
    pub closed_form_exact: Option<String>,
    pub rel_err: f64,
    pub pass: bool,
}

pub const MAX_TOLERANCE: f64 = 1e-6;

pub fn max_report(t: &GroupType, restarts: usize, seed: u64) -> Result<MaxReport> {
    let consts = MacdonaldConstants::new(&RootSystemData::new(t));
    let optimized = max_delta_optimize(t, restarts, seed)?;
    let closed_form = consts.max_delta();
    let rel_err = ((optimized - closed_form) / closed_form).abs();
    Ok(MaxReport {
        group: t.to_string(),
        restarts,
        seed,
        optimized,
        closed_form,
        closed_form_exact: consts.max_delta_exact().map(|v| v.to_string()),
        rel_err,
        pass: rel_err < MAX_TOLERANCE && optimized <= closed_form * (1.0 + 1e-9),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::ratio;

    fn ty(s: &str) -> GroupType {
        s.parse().unwrap()
    }

    #[test]
    fn rhs_values() {
        let sp = PI.sqrt();
        assert!((macdonald_rhs(&ty("A1"), 1.0).unwrap() - sp / 2.0).abs() < 1e-13);
        assert!((macdonald_rhs(&ty("A1"), 0.0).unwrap() - sp).abs() < 1e-13);
        let r = RootSystemData::new(&ty("G2"));
        let expect = PI / r.discr_f64().sqrt();
        assert!((macdonald_rhs(&ty("G2"), 0.0).unwrap() - expect).abs() < 1e-12);
        assert!(matches!(macdonald_rhs(&ty("B2"), -0.3), Err(Error::GammaPole(_))));
    }

    #[test]
    fn quadrature_a1() {
        let sp = PI.sqrt();
        assert!((macdonald_lhs_quadrature(&ty("A1"), 1).unwrap() - sp / 2.0).abs() < 1e-10);
        assert!((macdonald_lhs_quadrature(&ty("A1"), 2).unwrap() - 3.0 * sp / 4.0).abs() < 1e-10);
        assert!(macdonald_lhs_quadrature(&ty("A3"), 1).is_err());
    }

    #[test]
    fn quadrature_matches_rhs() {
        for (t, s) in [("B2", 1), ("A2", 2), ("G2", 1), ("A1xA1", 2), ("I2(5)", 1)] {
            let rep = integral_report(&ty(t), s).unwrap();
            assert!(rep.pass, "{rep:?}");
        }
    }

    #[test]
    fn closed_form_maxima() {
        let a1 = MacdonaldConstants::new(&RootSystemData::new(&ty("A1")));
        assert_eq!(a1.max_delta_exact(), Some(rat(1)));
        let b2 = MacdonaldConstants::new(&RootSystemData::new(&ty("B2")));
        assert_eq!(b2.max_delta_exact(), Some(ratio(1, 16)));
        assert!((b2.max_delta() - 0.0625).abs() < 1e-15);
    }

    #[test]
    fn optimizer_reaches_maximum() {
        assert!((max_delta_optimize(&ty("A1"), 3, 1).unwrap() - 1.0).abs() < 1e-12);
        assert!((max_delta_optimize(&ty("B2"), 20, 1).unwrap() - 0.0625).abs() < 1e-8);
        let rep = max_report(&ty("A2"), 20, DEFAULT_SEED).unwrap();
        assert!(rep.pass, "{rep:?}");
    }

    #[test]
    fn power_means_increase_towards_maximum() {
        let c = MacdonaldConstants::new(&RootSystemData::new(&ty("B2")));
        let mut prev = 0.0;
        for s in [1.0, 4.0, 16.0, 64.0, 256.0, 4096.0] {
            let m = c.sphere_power_mean(s).unwrap();
            assert!(m > prev && m <= c.max_delta() * (1.0 + 1e-12));
            prev = m;
        }
        assert!(prev / c.max_delta() > 0.99);
    }
}
