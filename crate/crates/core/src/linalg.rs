//! Exact linear algebra over the rationals, used by the verification suites
//! (kernel rank checks and expressing classes in a given span).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

/// Rank of a matrix given as rows, by fraction-free-enough Gaussian
/// elimination over exact rationals.
pub fn rank(rows: &[Vec<BigRational>]) -> usize {
    let mut mat: Vec<Vec<BigRational>> = rows.to_vec();
    let nrows = mat.len();
    if nrows == 0 {
        return 0;
    }
    let ncols = mat[0].len();
    let mut r = 0;
    for col in 0..ncols {
        let Some(pivot) = (r..nrows).find(|&i| !mat[i][col].is_zero()) else {
            continue;
        };
        mat.swap(r, pivot);
        let inv = mat[r][col].recip();
        let pivot_row = mat[r].clone();
        for row in mat.iter_mut().skip(r + 1) {
            if row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone() * inv.clone();
            for (dst, src) in row.iter_mut().zip(&pivot_row).skip(col) {
                *dst = dst.clone() - factor.clone() * src.clone();
            }
        }
        r += 1;
        if r == nrows {
            break;
        }
    }
    r
}

pub fn rank_of_integer_rows(rows: &[Vec<BigInt>]) -> usize {
    let rational: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|row| row.iter().cloned().map(BigRational::from_integer).collect())
        .collect();
    rank(&rational)
}

/// Solves `A x = b` exactly for a system with full column rank. Returns
/// `None` if the system is inconsistent or the solution is not unique.
pub fn solve(a: &[Vec<BigRational>], b: &[BigRational]) -> Option<Vec<BigRational>> {
    let nrows = a.len();
    assert_eq!(nrows, b.len(), "row count mismatch");
    if nrows == 0 {
        return Some(Vec::new());
    }
    let ncols = a[0].len();
    let mut mat: Vec<Vec<BigRational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();

    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        let Some(pivot) = (r..nrows).find(|&i| !mat[i][col].is_zero()) else {
            continue;
        };
        mat.swap(r, pivot);
        let inv = mat[r][col].recip();
        for value in mat[r].iter_mut().skip(col) {
            *value = value.clone() * inv.clone();
        }
        let pivot_row = mat[r].clone();
        for (i, row) in mat.iter_mut().enumerate() {
            if i != r && !row[col].is_zero() {
                let factor = row[col].clone();
                for (dst, src) in row.iter_mut().zip(&pivot_row).skip(col) {
                    *dst = dst.clone() - factor.clone() * src.clone();
                }
            }
        }
        pivot_cols.push(col);
        r += 1;
        if r == nrows {
            break;
        }
    }
    // inconsistent row: 0 = nonzero
    for row in mat.iter().skip(r) {
        if !row[ncols].is_zero() {
            return None;
        }
    }
    if pivot_cols.len() != ncols {
        return None; // free columns: not a unique solution
    }
    let mut x = vec![BigRational::zero(); ncols];
    for (row_idx, &col) in pivot_cols.iter().enumerate() {
        x[col] = mat[row_idx][ncols].clone();
    }
    Some(x)
}
