// SPDX-License-Identifier: Apache-2.0

//! Binomial tail probabilities, accurate far into the tails (well below
//! `1e-25`). Small `n` is summed directly with exact coefficients; larger `n`
//! starts from the log-space pmf at the cut and sums outward.

use std::f64::consts::PI;
use std::sync::OnceLock;

const TABLE_LEN: usize = 1024;

fn ln_factorial_table() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = Vec::with_capacity(TABLE_LEN);
        let mut acc = 0.0;
        t.push(0.0);
        for i in 1..TABLE_LEN {
            acc += (i as f64).ln();
            t.push(acc);
        }
        t
    })
}

/// `ln(n!)`: exact summation below 1024, Stirling series above.
pub fn ln_factorial(n: u64) -> f64 {
    if (n as usize) < TABLE_LEN {
        return ln_factorial_table()[n as usize];
    }
    let x = n as f64;
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    x * x.ln() - x + 0.5 * (2.0 * PI * x).ln() + inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 / 1260.0))
}

pub fn ln_choose(n: u64, k: u64) -> f64 {
    debug_assert!(k <= n);
    ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)
}

fn ln_pmf(n: u64, p: f64, k: u64) -> f64 {
    ln_choose(n, k) + k as f64 * p.ln() + (n - k) as f64 * (-p).ln_1p()
}

fn mode(n: u64, p: f64) -> u64 {
    (((n + 1) as f64 * p).floor() as u64).min(n)
}

/// Sum pmf terms from `k` outward (up or down) until they stop mattering,
/// scaled relative to the first term.
fn tail_sum(n: u64, p: f64, k: u64, upward: bool) -> f64 {
    let odds = p / (1.0 - p);
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut j = k;
    loop {
        if upward {
            if j == n {
                break;
            }
            term *= (n - j) as f64 / (j + 1) as f64 * odds;
            j += 1;
        } else {
            if j == 0 {
                break;
            }
            term *= j as f64 / (n - j + 1) as f64 / odds;
            j -= 1;
        }
        sum += term;
        if term < sum * 1e-18 {
            break;
        }
    }
    (ln_pmf(n, p, k) + sum.ln()).exp()
}

/// Largest `n` handled by direct summation with exact `u128` coefficients.
const DIRECT_MAX_N: u64 = 120;

/// `sum_{j in range} C(n, j) p^j (1-p)^(n-j)`, coefficients exact. For a fair
/// coin the coefficient sum is exact and scaled by `2^-n` once, so the result
/// is correctly rounded.
fn direct_sum(n: u64, p: f64, range: std::ops::RangeInclusive<u64>) -> f64 {
    let mut coeffs = Vec::with_capacity(n as usize + 1);
    let mut c: u128 = 1;
    for j in 0..=n {
        if j > 0 {
            c = c * (n - j + 1) as u128 / j as u128;
        }
        coeffs.push(c);
    }
    if p == 0.5 {
        let total: u128 = range.map(|j| coeffs[j as usize]).sum();
        return total as f64 * 0.5f64.powi(n as i32);
    }
    let mut terms: Vec<f64> = range
        .map(|j| coeffs[j as usize] as f64 * p.powi(j as i32) * (1.0 - p).powi((n - j) as i32))
        .collect();
    terms.sort_by(f64::total_cmp);
    terms.iter().sum()
}

/// `P(Bin(n, p) >= k)`.
pub fn upper_tail(n: u64, p: f64, k: u64) -> f64 {
    assert!((0.0..=1.0).contains(&p), "probability {p} outside [0, 1]");
    if k == 0 {
        return 1.0;
    }
    if k > n || p == 0.0 {
        return 0.0;
    }
    if p == 1.0 {
        return 1.0;
    }
    if n <= DIRECT_MAX_N {
        return direct_sum(n, p, k..=n).min(1.0);
    }
    if k > mode(n, p) {
        tail_sum(n, p, k, true).min(1.0)
    } else {
        (1.0 - lower_tail(n, p, k - 1)).max(0.0)
    }
}

/// `P(Bin(n, p) <= k)`.
pub fn lower_tail(n: u64, p: f64, k: u64) -> f64 {
    assert!((0.0..=1.0).contains(&p), "probability {p} outside [0, 1]");
    if k >= n || p == 0.0 {
        return 1.0;
    }
    if p == 1.0 {
        return 0.0;
    }
    if n <= DIRECT_MAX_N {
        return direct_sum(n, p, 0..=k).min(1.0);
    }
    if k < mode(n, p) {
        tail_sum(n, p, k, false).min(1.0)
    } else {
        (1.0 - upper_tail(n, p, k + 1)).max(0.0)
    }
}
