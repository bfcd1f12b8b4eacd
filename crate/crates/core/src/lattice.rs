//! Small exact integer matrix helpers (row-major `Vec<Vec<i64>>`).

use num_rational::Ratio;
use num_traits::{One, Zero};

pub type IntMatrix = Vec<Vec<i64>>;

pub fn identity(n: usize) -> IntMatrix {
    (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect()
}

pub fn transpose(a: &IntMatrix) -> IntMatrix {
    if a.is_empty() {
        return Vec::new();
    }
    (0..a[0].len()).map(|j| a.iter().map(|row| row[j]).collect()).collect()
}

pub fn mul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let inner = b.len();
    let cols = if inner == 0 { 0 } else { b[0].len() };
    a.iter()
        .map(|row| (0..cols).map(|j| (0..inner).map(|k| row[k] * b[k][j]).sum()).collect())
        .collect()
}

pub fn mul_vec(a: &IntMatrix, v: &[i64]) -> Vec<i64> {
    a.iter().map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum()).collect()
}

/// Bareiss fraction-free determinant.
pub fn det(a: &IntMatrix) -> i64 {
    let n = a.len();
    if n == 0 {
        return 1;
    }
    if a.iter().any(|r| r.len() != n) {
        return 0;
    }
    let mut m: Vec<Vec<i128>> = a.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if m[k][k] == 0 {
            match (k + 1..n).find(|&i| m[i][k] != 0) {
                Some(i) => {
                    m.swap(i, k);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
        }
        prev = m[k][k];
    }
    (sign * m[n - 1][n - 1]) as i64
}

/// Inverse of a unimodular matrix, `None` if singular or not unimodular.
pub fn inverse_unimodular(a: &IntMatrix) -> Option<IntMatrix> {
    let n = a.len();
    let mut m: Vec<Vec<Ratio<i128>>> = a
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row: Vec<Ratio<i128>> = r.iter().map(|&x| Ratio::from_integer(x as i128)).collect();
            row.extend((0..n).map(|j| if i == j { Ratio::one() } else { Ratio::zero() }));
            row
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&i| !m[i][c].is_zero())?;
        m.swap(p, c);
        let pivot = m[c][c];
        for x in m[c].iter_mut() {
            *x /= pivot;
        }
        for i in 0..n {
            if i != c && !m[i][c].is_zero() {
                let f = m[i][c];
                for j in 0..2 * n {
                    let v = m[c][j] * f;
                    m[i][j] -= v;
                }
            }
        }
    }
    let mut out = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in 0..n {
            let x = m[i][n + j];
            if !x.is_integer() {
                return None;
            }
            out[i][j] = x.to_integer() as i64;
        }
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn determinants() {
        assert_eq!(det(&vec![vec![2, 1], vec![1, 1]]), 1);
        assert_eq!(det(&vec![vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, 1]]), -1);
        assert_eq!(det(&vec![vec![1, 2], vec![2, 4]]), 0);
        assert_eq!(det(&vec![vec![2, 0, 0], vec![0, 3, 0], vec![1, 1, 1]]), 6);
    }

    #[test]
    fn unimodular_inverse() {
        let a = vec![vec![-1, 0, 1], vec![0, -1, 1], vec![0, 0, 1]];
        let inv = inverse_unimodular(&a).unwrap();
        assert_eq!(mul(&a, &inv), identity(3));
        assert!(inverse_unimodular(&vec![vec![2, 0], vec![0, 1]]).is_none());
    }
}
