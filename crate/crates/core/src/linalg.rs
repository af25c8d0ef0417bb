//! Dense exact linear algebra over a prime field: rank, determinant,
//! inversion, and multiplication by Gaussian elimination.  Everything is
//! small and exact; no pivot-size heuristics are needed.

use crate::ff::PrimeField;

/// Row rank of a (not necessarily square) matrix given as rows.
pub(crate) fn rank(field: PrimeField, rows: &[Vec<u64>]) -> usize {
    let mut m: Vec<Vec<u64>> = rows.to_vec();
    let nrows = m.len();
    let ncols = m.first().map_or(0, |r| r.len());
    debug_assert!(m.iter().all(|r| r.len() == ncols));
    let mut rank = 0;
    for col in 0..ncols {
        if rank == nrows {
            break;
        }
        let Some(pivot_row) = (rank..nrows).find(|&i| m[i][col] != 0) else {
            continue;
        };
        m.swap(rank, pivot_row);
        let inv = field.inv(m[rank][col]).expect("pivot is nonzero");
        for c in col..ncols {
            m[rank][c] = field.mul(m[rank][c], inv);
        }
        for i in 0..nrows {
            if i != rank && m[i][col] != 0 {
                let factor = m[i][col];
                for c in col..ncols {
                    let delta = field.mul(factor, m[rank][c]);
                    m[i][c] = field.sub(m[i][c], delta);
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Determinant of a square matrix.
pub(crate) fn det(field: PrimeField, matrix: &[Vec<u64>]) -> u64 {
    let n = matrix.len();
    let mut m = matrix.to_vec();
    debug_assert!(m.iter().all(|r| r.len() == n));
    let mut result: u64 = 1;
    let mut negate = false;
    for col in 0..n {
        let Some(pivot_row) = (col..n).find(|&i| m[i][col] != 0) else {
            return 0;
        };
        if pivot_row != col {
            m.swap(col, pivot_row);
            negate = !negate;
        }
        let pivot = m[col][col];
        result = field.mul(result, pivot);
        let inv = field.inv(pivot).expect("pivot is nonzero");
        for i in col + 1..n {
            if m[i][col] != 0 {
                let factor = field.mul(m[i][col], inv);
                for c in col..n {
                    let delta = field.mul(factor, m[col][c]);
                    m[i][c] = field.sub(m[i][c], delta);
                }
            }
        }
    }
    if negate {
        field.neg(result)
    } else {
        result
    }
}

/// Inverse of a square matrix, or None if it is singular.
pub(crate) fn invert(field: PrimeField, matrix: &[Vec<u64>]) -> Option<Vec<Vec<u64>>> {
    let n = matrix.len();
    let mut m: Vec<Vec<u64>> = matrix
        .iter()
        .enumerate()
        .map(|(i, row)| {
            debug_assert_eq!(row.len(), n);
            let mut r = row.clone();
            r.extend((0..n).map(|j| u64::from(i == j)));
            r
        })
        .collect();
    for col in 0..n {
        let pivot_row = (col..n).find(|&i| m[i][col] != 0)?;
        m.swap(col, pivot_row);
        let inv = field.inv(m[col][col]).expect("pivot is nonzero");
        for c in 0..2 * n {
            m[col][c] = field.mul(m[col][c], inv);
        }
        for i in 0..n {
            if i != col && m[i][col] != 0 {
                let factor = m[i][col];
                for c in 0..2 * n {
                    let delta = field.mul(factor, m[col][c]);
                    m[i][c] = field.sub(m[i][c], delta);
                }
            }
        }
    }
    Some(m.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Matrix product a * b (a is applied second when the columns are images
/// of basis vectors).
pub(crate) fn mat_mul(field: PrimeField, a: &[Vec<u64>], b: &[Vec<u64>]) -> Vec<Vec<u64>> {
    let n = a.len();
    let inner = b.len();
    let ncols = b.first().map_or(0, |r| r.len());
    debug_assert!(a.iter().all(|r| r.len() == inner));
    let mut out = vec![vec![0u64; ncols]; n];
    for i in 0..n {
        for k in 0..inner {
            if a[i][k] == 0 {
                continue;
            }
            for j in 0..ncols {
                let delta = field.mul(a[i][k], b[k][j]);
                out[i][j] = field.add(out[i][j], delta);
            }
        }
    }
    out
}
