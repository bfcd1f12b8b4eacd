use num_complex::Complex64;
use num_integer::Integer;

use super::phase::Phase;

/// Exact element Σ c_k ζ_N^k of the cyclotomic integers Z[ζ_N].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootSum {
    n: u64,
    coeffs: Vec<i64>,
}

fn cyclotomic_poly(n: u64) -> Vec<i64> {
    // x^n - 1 divided by Φ_d for every proper divisor d.
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in 1..n {
        if n % d == 0 {
            num = exact_div(&num, &cyclotomic_poly(d));
        }
    }
    num
}

fn exact_div(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let lead = den[dd];
    let mut q = vec![0i64; rem.len().saturating_sub(dd)];
    for i in (0..q.len()).rev() {
        let c = rem[i + dd] / lead;
        q[i] = c;
        for (j, &dj) in den.iter().enumerate() {
            rem[i + j] -= c * dj;
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    q
}

impl RootSum {
    pub fn from_terms<I: IntoIterator<Item = (i64, Phase)>>(terms: I) -> Self {
        let terms: Vec<(i64, Phase)> = terms.into_iter().collect();
        let n = terms.iter().fold(1u64, |acc, (_, p)| acc.lcm(&p.order()));
        let mut coeffs = vec![0i64; n as usize];
        for (c, p) in terms {
            let t = p.turns();
            let k = *t.numer() * (n as i64 / *t.denom());
            coeffs[k as usize] += c;
        }
        RootSum { n, coeffs }
    }

    pub fn modulus(&self) -> u64 {
        self.n
    }

    pub fn to_complex(&self) -> Complex64 {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(k, &c)| Phase::from_ratio(k as i64, self.n as i64).to_complex() * c as f64)
            .sum()
    }

    pub fn is_zero(&self) -> bool {
        if self.coeffs.iter().all(|&c| c == 0) {
            return true;
        }
        let phi = cyclotomic_poly(self.n);
        let mut rem = self.coeffs.clone();
        let dd = phi.len() - 1;
        for i in (dd..rem.len()).rev() {
            let c = rem[i];
            if c != 0 {
                for (j, &pj) in phi.iter().enumerate() {
                    rem[i - dd + j] -= c * pj;
                }
            }
        }
        rem.iter().all(|&c| c == 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(cyclotomic_poly(1), vec![-1, 1]);
        assert_eq!(cyclotomic_poly(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_poly(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_poly(12), vec![1, 0, -1, 0, 1]);
    }

    #[test]
    fn cube_roots_sum_to_zero() {
        let s = RootSum::from_terms([(1, Phase::zero()), (1, Phase::from_ratio(1, 3)), (1, Phase::from_ratio(2, 3))]);
        assert!(s.is_zero());
        let s = RootSum::from_terms([(1, Phase::zero()), (1, Phase::from_ratio(1, 3))]);
        assert!(!s.is_zero());
    }

    #[test]
    fn mixed_orders() {
        // 1 + i + (-1) + (-i) with a sixth-root pair that cancels
        let s = RootSum::from_terms([
            (1, Phase::zero()),
            (1, Phase::from_ratio(1, 4)),
            (1, Phase::from_ratio(1, 2)),
            (1, Phase::from_ratio(3, 4)),
            (2, Phase::from_ratio(1, 6)),
            (2, Phase::from_ratio(2, 3)),
        ]);
        assert!(s.is_zero());
        assert!(s.to_complex().norm() < 1e-14);
    }

    #[test]
    fn agrees_with_float_value() {
        let s = RootSum::from_terms([(3, Phase::from_ratio(1, 5)), (-1, Phase::from_ratio(3, 10))]);
        assert!(!s.is_zero());
        assert!(s.to_complex().norm() > 0.1);
    }
}
