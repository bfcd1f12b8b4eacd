//! Smith normal form over Z with transform tracking: A = U·D·V.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

pub type BigMatrix = Vec<Vec<BigInt>>;

#[derive(Clone, Debug)]
pub struct Snf {
    /// Diagonal of D (length min(m, n)), non-negative, each dividing the next.
    pub diag: Vec<BigInt>,
    pub rank: usize,
    pub u: BigMatrix,
    pub u_inv: BigMatrix,
    pub v: BigMatrix,
    pub v_inv: BigMatrix,
}

fn ident(n: usize) -> BigMatrix {
    (0..n).map(|i| (0..n).map(|j| BigInt::from(i64::from(i == j))).collect()).collect()
}

struct Calc {
    d: BigMatrix,
    p: BigMatrix,
    p_inv: BigMatrix,
    q: BigMatrix,
    q_inv: BigMatrix,
    m: usize,
    n: usize,
}

impl Calc {
    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        self.d.swap(i, j);
        self.p.swap(i, j);
        for row in self.p_inv.iter_mut() {
            row.swap(i, j);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for row in self.d.iter_mut() {
            row.swap(i, j);
        }
        for row in self.q.iter_mut() {
            row.swap(i, j);
        }
        self.q_inv.swap(i, j);
    }

    fn negate_row(&mut self, i: usize) {
        for x in self.d[i].iter_mut().chain(self.p[i].iter_mut()) {
            *x = -&*x;
        }
        for row in self.p_inv.iter_mut() {
            row[i] = -&row[i];
        }
    }

    /// row_i += c·row_j
    fn add_row(&mut self, i: usize, j: usize, c: &BigInt) {
        for k in 0..self.n {
            let v = &self.d[j][k] * c;
            self.d[i][k] += v;
        }
        for k in 0..self.m {
            let v = &self.p[j][k] * c;
            self.p[i][k] += v;
            let w = &self.p_inv[k][i] * c;
            self.p_inv[k][j] -= w;
        }
    }

    /// col_i += c·col_j
    fn add_col(&mut self, i: usize, j: usize, c: &BigInt) {
        for k in 0..self.m {
            let v = &self.d[k][j] * c;
            self.d[k][i] += v;
        }
        for k in 0..self.n {
            let v = &self.q[k][j] * c;
            self.q[k][i] += v;
            let w = &self.q_inv[i][k] * c;
            self.q_inv[j][k] -= w;
        }
    }

    fn min_in(&self, t: usize, rows: impl Iterator<Item = (usize, usize)>) -> Option<(usize, usize)> {
        let _ = t;
        rows.filter(|&(i, j)| !self.d[i][j].is_zero()).min_by(|&(a, b), &(c, e)| self.d[a][b].abs().cmp(&self.d[c][e].abs()))
    }

    fn run(&mut self) -> usize {
        let (m, n) = (self.m, self.n);
        let mut t = 0;
        while t < m.min(n) {
            let all = (t..m).flat_map(|i| (t..n).map(move |j| (i, j)));
            let Some((pi, pj)) = self.min_in(t, all) else { break };
            self.swap_rows(t, pi);
            self.swap_cols(t, pj);
            loop {
                let piv = self.d[t][t].clone();
                for i in t + 1..m {
                    if !self.d[i][t].is_zero() {
                        let q = -(self.d[i][t].div_floor(&piv));
                        self.add_row(i, t, &q);
                    }
                }
                for j in t + 1..n {
                    if !self.d[t][j].is_zero() {
                        let q = -(self.d[t][j].div_floor(&piv));
                        self.add_col(j, t, &q);
                    }
                }
                let cross = (t + 1..m).map(|i| (i, t)).chain((t + 1..n).map(|j| (t, j)));
                if let Some((i, j)) = self.min_in(t, cross) {
                    if i != t {
                        self.swap_rows(t, i);
                    } else {
                        self.swap_cols(t, j);
                    }
                    continue;
                }
                let piv = self.d[t][t].clone();
                let bad = (t + 1..m).flat_map(|i| (t + 1..n).map(move |j| (i, j))).find(|&(i, j)| !self.d[i][j].is_multiple_of(&piv));
                match bad {
                    Some((i, _)) => {
                        let one = BigInt::from(1);
                        self.add_row(t, i, &one);
                    }
                    None => break,
                }
            }
            if self.d[t][t].is_negative() {
                self.negate_row(t);
            }
            t += 1;
        }
        t
    }
}

pub fn smith_normal_form(a: &[Vec<BigInt>]) -> Snf {
    let m = a.len();
    let n = a.first().map_or(0, |r| r.len());
    let mut c = Calc { d: a.to_vec(), p: ident(m), p_inv: ident(m), q: ident(n), q_inv: ident(n), m, n };
    let rank = c.run();
    let diag = (0..m.min(n)).map(|i| c.d[i][i].clone()).collect();
    Snf { diag, rank, u: c.p_inv, u_inv: c.p, v: c.q_inv, v_inv: c.q }
}

pub fn to_big(a: &[Vec<i64>]) -> BigMatrix {
    a.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mul(a: &BigMatrix, b: &BigMatrix) -> BigMatrix {
        a.iter()
            .map(|r| (0..b[0].len()).map(|j| r.iter().zip(b).map(|(x, row)| x * &row[j]).sum()).collect())
            .collect()
    }

    fn check(a: Vec<Vec<i64>>) -> Snf {
        let big = to_big(&a);
        let s = smith_normal_form(&big);
        let (m, n) = (a.len(), a[0].len());
        let mut d = vec![vec![BigInt::zero(); n]; m];
        for (i, x) in s.diag.iter().enumerate() {
            d[i][i] = x.clone();
        }
        assert_eq!(mul(&mul(&s.u, &d), &s.v), big);
        assert_eq!(mul(&s.u, &s.u_inv), ident(m));
        assert_eq!(mul(&s.v, &s.v_inv), ident(n));
        for w in s.diag[..s.rank].windows(2) {
            assert!(w[1].is_multiple_of(&w[0]));
        }
        s
    }

    #[test]
    fn classic_examples() {
        let s = check(vec![vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
        assert_eq!(s.diag, vec![BigInt::from(2), BigInt::from(6), BigInt::from(12)]);
        let s = check(vec![vec![-2, 1, 0], vec![1, -2, 1], vec![0, 1, -2]]);
        assert_eq!(s.diag, vec![BigInt::from(1), BigInt::from(1), BigInt::from(4)]);
    }

    #[test]
    fn rectangular_and_singular() {
        let s = check(vec![vec![0, 0], vec![0, 0], vec![0, 0]]);
        assert_eq!(s.rank, 0);
        let s = check(vec![vec![-1, 1, 0], vec![0, -1, 1], vec![1, 0, -1], vec![2, -2, 0]]);
        assert_eq!(s.rank, 2);
        check(vec![vec![3, 5, 7, 11]]);
    }
}
