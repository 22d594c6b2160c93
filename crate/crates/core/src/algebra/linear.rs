//! Exact linear algebra over the rationals.
//!
//! Systems are cleared of denominators row by row and reduced with
//! Bareiss-style fraction-free elimination, so intermediate entries stay
//! integral and every division is exact.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{Rational, RationalMatrix};
use crate::error::{Error, Result};

/// Scales a rational row by the lcm of its denominators.
fn integral_row(row: &[Rational]) -> Vec<BigInt> {
    let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    row.iter().map(|x| x.numer() * (&l / x.denom())).collect()
}

/// Fraction-free row echelon form. Pivots are chosen as the first nonzero
/// entry in each column. Returns the pivot columns in order; `m` is reduced
/// in place and the sign of the row permutation is returned alongside.
fn echelon(m: &mut [Vec<BigInt>]) -> (Vec<usize>, bool) {
    let nrows = m.len();
    let ncols = m.first().map_or(0, Vec::len);
    let mut prev = BigInt::one();
    let mut pivots = Vec::new();
    let mut odd_swaps = false;
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        if p != r {
            m.swap(p, r);
            odd_swaps = !odd_swaps;
        }
        let (top, rest) = m.split_at_mut(r + 1);
        let pivot_row = &top[r];
        for row in rest.iter_mut() {
            for j in c + 1..ncols {
                let num = &pivot_row[c] * &row[j] - &row[c] * &pivot_row[j];
                debug_assert!((&num % &prev).is_zero(), "Bareiss division must be exact");
                row[j] = num / &prev;
            }
            row[c] = BigInt::zero();
        }
        prev = pivot_row[c].clone();
        pivots.push(c);
        r += 1;
    }
    (pivots, odd_swaps)
}

pub(crate) fn determinant(rows: &[Vec<Rational>]) -> Rational {
    let n = rows.len();
    if n == 0 {
        return Rational::one();
    }
    let mut scale = BigInt::one();
    let mut m: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|row| {
            let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            scale *= &l;
            row.iter().map(|x| x.numer() * (&l / x.denom())).collect()
        })
        .collect();
    let (pivots, odd) = echelon(&mut m);
    if pivots.len() < n {
        return Rational::zero();
    }
    // After full Bareiss elimination the last pivot is the determinant.
    let mut d = m[n - 1][n - 1].clone();
    if odd {
        d = -d;
    }
    Rational::new(d, scale)
}

/// Solves `A v = b` exactly.
///
/// Returns [`Error::Inconsistent`] when no solution exists and
/// [`Error::Underdetermined`] when the solution is not unique. `A` may be
/// rectangular.
pub fn solve_linear(a: &RationalMatrix, b: &[Rational]) -> Result<Vec<Rational>> {
    if b.len() != a.rows() {
        return Err(Error::DimensionMismatch {
            expected: a.rows(),
            got: b.len(),
        });
    }
    let n = a.cols();
    let mut m: Vec<Vec<BigInt>> = (0..a.rows())
        .map(|i| {
            let mut row = a.row(i).to_vec();
            row.push(b[i].clone());
            integral_row(&row)
        })
        .collect();
    let (pivots, _) = echelon(&mut m);
    if pivots.last() == Some(&n) {
        return Err(Error::Inconsistent);
    }
    if pivots.len() < n {
        return Err(Error::Underdetermined {
            rank: pivots.len(),
            unknowns: n,
        });
    }
    // Square upper-triangular system in the first n echelon rows.
    let mut x = vec![Rational::zero(); n];
    for r in (0..n).rev() {
        let row = &m[r];
        let mut acc = Rational::from_integer(row[n].clone());
        for j in r + 1..n {
            acc -= Rational::from_integer(row[j].clone()) * &x[j];
        }
        x[r] = acc / Rational::from_integer(row[r].clone());
    }
    Ok(x)
}

/// Rank of the span of the given vectors.
pub fn rank(vectors: &[Vec<Rational>]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    let mut m: Vec<Vec<BigInt>> = vectors.iter().map(|v| integral_row(v)).collect();
    echelon(&mut m).0.len()
}

/// Reduced row echelon form over the rationals; returns pivot columns.
fn rref(m: &mut [Vec<Rational>]) -> Vec<usize> {
    let nrows = m.len();
    let ncols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(p, r);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..nrows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..ncols {
                    let t = &f * &m[r][j];
                    m[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Basis of `{x : <f, x> = 0 for every f in forms}` in `dim` coordinates.
pub fn kernel_basis(forms: &[Vec<Rational>], dim: usize) -> Vec<Vec<Rational>> {
    let mut m: Vec<Vec<Rational>> = forms.to_vec();
    let pivots = rref(&mut m);
    let free: Vec<usize> = (0..dim).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); dim];
            v[f] = Rational::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -m[r][f].clone();
            }
            v
        })
        .collect()
}

/// Scales a nonzero rational vector to a primitive integer vector whose
/// first nonzero entry is positive. Returns `None` for the zero vector.
pub fn primitive_integer(v: &[Rational]) -> Option<Vec<BigInt>> {
    let first = v.iter().find(|x| !x.is_zero())?;
    let ints = integral_row(v);
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    let sign = if first.is_negative() {
        -BigInt::one()
    } else {
        BigInt::one()
    };
    Some(ints.into_iter().map(|x| x / &g * &sign).collect())
}

/// [`primitive_integer`] with the result lifted back to rationals.
pub fn primitive_rational(v: &[Rational]) -> Option<Vec<Rational>> {
    primitive_integer(v).map(|w| w.into_iter().map(Rational::from_integer).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{rat, ratio};
    use proptest::prelude::*;

    #[test]
    fn identity_solve() {
        let b = vec![rat(3), ratio(-1, 2), rat(7)];
        assert_eq!(solve_linear(&RationalMatrix::identity(3), &b).unwrap(), b);
    }

    #[test]
    fn symmetric_solve() {
        let a = RationalMatrix::from_i64(&[&[2, -1], &[-1, 2]]);
        assert_eq!(solve_linear(&a, &[rat(1), rat(1)]).unwrap(), vec![rat(1), rat(1)]);
    }

    #[test]
    fn degenerate_systems_are_distinguished() {
        let a = RationalMatrix::from_i64(&[&[1, 1], &[2, 2]]);
        assert_eq!(solve_linear(&a, &[rat(1), rat(3)]), Err(Error::Inconsistent));
        assert_eq!(
            solve_linear(&a, &[rat(1), rat(2)]),
            Err(Error::Underdetermined { rank: 1, unknowns: 2 })
        );
    }

    #[test]
    fn overdetermined_consistent() {
        let a = RationalMatrix::from_i64(&[&[1, 0], &[0, 1], &[1, 1]]);
        assert_eq!(
            solve_linear(&a, &[rat(2), rat(3), rat(5)]).unwrap(),
            vec![rat(2), rat(3)]
        );
        assert_eq!(solve_linear(&a, &[rat(2), rat(3), rat(6)]), Err(Error::Inconsistent));
    }

    #[test]
    fn kernel_and_rank() {
        let forms = vec![vec![rat(1), rat(-1), rat(0)]];
        let k = kernel_basis(&forms, 3);
        assert_eq!(k.len(), 2);
        for v in &k {
            let dot: Rational = forms[0].iter().zip(v).map(|(a, b)| a * b).sum();
            assert!(dot.is_zero());
        }
        assert_eq!(rank(&k), 2);
        assert_eq!(rank(&[vec![rat(1), rat(2)], vec![rat(2), rat(4)]]), 1);
    }

    #[test]
    fn primitive_normalization() {
        let v = vec![ratio(-1, 2), ratio(3, 4), rat(0)];
        assert_eq!(
            primitive_integer(&v).unwrap(),
            vec![BigInt::from(2), BigInt::from(-3), BigInt::from(0)]
        );
        assert!(primitive_integer(&[rat(0), rat(0)]).is_none());
    }

    #[test]
    fn determinant_with_row_swap() {
        let a = RationalMatrix::from_i64(&[&[0, 1, 2], &[1, 0, 3], &[4, -3, 8]]);
        assert_eq!(a.det().unwrap(), rat(-2));
    }

    proptest! {
        #[test]
        fn unique_solutions_satisfy_system(
            entries in prop::collection::vec(-5i64..6, 9),
            rhs in prop::collection::vec(-5i64..6, 3),
        ) {
            let rows: Vec<Vec<Rational>> = entries.chunks(3).map(|c| c.iter().map(|&x| rat(x)).collect()).collect();
            let a = RationalMatrix::from_rows(rows).unwrap();
            let b: Vec<Rational> = rhs.iter().map(|&x| rat(x)).collect();
            match solve_linear(&a, &b) {
                Ok(v) => prop_assert_eq!(a.mul_vec(&v).unwrap(), b),
                Err(Error::Inconsistent) | Err(Error::Underdetermined { .. }) => {
                    prop_assert!(a.det().unwrap().is_zero());
                }
                Err(e) => prop_assert!(false, "unexpected error {e}"),
            }
        }
    }
}
