//! Exact linear solving over rationals.

use core_model::Rational;

/// Solves `a · x = b` by Gaussian elimination with exact arithmetic.
/// Returns `None` when the matrix is singular.  Pivots take the first row
/// with a nonzero entry, so the elimination is deterministic; over an exact
/// field any nonzero pivot is as good as another.
pub fn solve(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = b.len();
    debug_assert!(a.len() == n && a.iter().all(|row| row.len() == n));
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        let inv = a[col][col].recip();
        for x in a[col].iter_mut() {
            *x = &*x * &inv;
        }
        b[col] = &b[col] * &inv;
        for row in 0..n {
            if row == col || a[row][col].is_zero() {
                continue;
            }
            let f = a[row][col].clone();
            for c in col..n {
                a[row][c] = &a[row][c] - &(&f * &a[col][c]);
            }
            b[row] = &b[row] - &(&f * &b[col]);
        }
    }
    Some(b)
}
