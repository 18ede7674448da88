//! Exact linear algebra over `Q` and `Z` for the small quotient systems.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

/// Solves `m·x = b` by Gaussian elimination; `None` if `m` is singular.
pub(crate) fn solve_rational(mut m: Vec<Vec<BigRational>>, mut b: Vec<BigRational>) -> Option<Vec<BigRational>> {
    let n = m.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, pivot);
        b.swap(col, pivot);
        let inv = m[col][col].recip();
        for r in 0..n {
            if r == col || m[r][col].is_zero() {
                continue;
            }
            let factor = &m[r][col] * &inv;
            for c in col..n {
                let delta = &factor * &m[col][c];
                m[r][c] -= delta;
            }
            let delta = &factor * &b[col];
            b[r] -= delta;
        }
    }
    Some((0..n).map(|i| &b[i] / &m[i][i]).collect())
}

/// Invariant factors `d_1 | d_2 | …` of an integer matrix, as nonnegative
/// integers; zeros mark the rank deficiency.
///
/// Each round moves the smallest nonzero entry of the remaining block to the
/// pivot and reduces its row and column; any nonzero remainder is strictly
/// smaller than the pivot, so the rounds terminate.
pub(crate) fn smith_diagonal(mut m: Vec<Vec<BigInt>>) -> Vec<BigInt> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut diag = Vec::new();
    for k in 0..rows.min(cols) {
        loop {
            let Some((pr, pc)) = (k..rows)
                .flat_map(|r| (k..cols).map(move |c| (r, c)))
                .filter(|&(r, c)| !m[r][c].is_zero())
                .min_by(|&(r1, c1), &(r2, c2)| m[r1][c1].abs().cmp(&m[r2][c2].abs()))
            else {
                diag.extend((k..rows.min(cols)).map(|_| BigInt::zero()));
                return diag;
            };
            m.swap(k, pr);
            for row in m.iter_mut() {
                row.swap(k, pc);
            }
            let mut clean = true;
            for r in k + 1..rows {
                if m[r][k].is_zero() {
                    continue;
                }
                let q = m[r][k].div_floor(&m[k][k]);
                for c in k..cols {
                    let delta = &q * &m[k][c];
                    m[r][c] -= delta;
                }
                clean &= m[r][k].is_zero();
            }
            for c in k + 1..cols {
                if m[k][c].is_zero() {
                    continue;
                }
                let q = m[k][c].div_floor(&m[k][k]);
                for row in m.iter_mut().skip(k) {
                    let delta = &q * &row[k];
                    row[c] -= delta;
                }
                clean &= m[k][c].is_zero();
            }
            if !clean {
                continue;
            }
            // Enforce divisibility into the rest of the block.
            let bad = (k + 1..rows)
                .flat_map(|r| (k + 1..cols).map(move |c| (r, c)))
                .find(|&(r, c)| !(&m[r][c] % &m[k][k]).is_zero());
            match bad {
                Some((r, _)) => {
                    for c in k..cols {
                        let v = m[r][c].clone();
                        m[k][c] += v;
                    }
                }
                None => break,
            }
        }
        diag.push(m[k][k].abs());
    }
    diag
}

/// `|det m|` as the product of the invariant factors.
#[cfg(test)]
fn abs_det(m: Vec<Vec<BigInt>>) -> BigInt {
    smith_diagonal(m).into_iter().fold(BigInt::from(1), |a, d| a * d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn int(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect()
    }

    #[test]
    fn smith_examples() {
        assert_eq!(smith_diagonal(int(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]])), [2, 6, 12].map(BigInt::from));
        assert_eq!(smith_diagonal(int(&[&[3, -2], &[-2, 3]])), [1, 5].map(BigInt::from));
        assert_eq!(smith_diagonal(int(&[&[1, 2], &[2, 4]])), [1, 0].map(BigInt::from));
        assert_eq!(smith_diagonal(int(&[&[2, 0], &[0, 3]])), [1, 6].map(BigInt::from));
        assert_eq!(abs_det(int(&[&[3, -1, -1], &[-1, 3, -1], &[-1, -1, 3]])), BigInt::from(16));
    }

    #[test]
    fn rational_solve() {
        let q = |a: i64| BigRational::from_integer(BigInt::from(a));
        let m = vec![vec![q(3), q(-2)], vec![q(-2), q(3)]];
        let x = solve_rational(m, vec![q(1), q(0)]).unwrap();
        assert_eq!(x, vec![BigRational::new(3.into(), 5.into()), BigRational::new(2.into(), 5.into())]);
        assert!(solve_rational(vec![vec![q(1), q(2)], vec![q(2), q(4)]], vec![q(1), q(1)]).is_none());
    }
}
