//! Exact binomial coefficients with overflow detection.

use crate::error::{Error, Result};
use std::sync::OnceLock;

/// Exact `a choose b`, or [`Error::Overflow`] when the value does not fit in a `u64`.
///
/// Returns 0 when `b > a`.
pub fn binom(a: u64, b: u64) -> Result<u64> {
    if b > a {
        return Ok(0);
    }
    let b = b.min(a - b);
    let mut acc: u128 = 1;
    for i in 0..b {
        // acc holds binom(a, i); the sequence is increasing up to b <= a/2,
        // so an intermediate that leaves u64 means the result does too.
        acc = acc * u128::from(a - i) / u128::from(i + 1);
        if acc > u128::from(u64::MAX) {
            return Err(Error::Overflow(format!("binom({a}, {b})")));
        }
    }
    Ok(acc as u64)
}

/// `binom` for call sites whose arguments are bounded by the supported scale
/// (n <= 64), where overflow is impossible.
pub(crate) fn small_binom(a: usize, b: usize) -> u64 {
    if b > a {
        return 0;
    }
    if a <= 64 {
        return pascal()[a][b];
    }
    binom(a as u64, b as u64).expect("binomial within supported scale")
}

fn pascal() -> &'static [[u64; 65]; 65] {
    static TABLE: OnceLock<Box<[[u64; 65]; 65]>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = Box::new([[0u64; 65]; 65]);
        for a in 0..=64 {
            t[a][0] = 1;
            for b in 1..=a {
                t[a][b] = t[a - 1][b - 1] + if b < a { t[a - 1][b] } else { 0 };
            }
        }
        t
    })
}

/// Generalized binomial `x choose j` for real `x` via the falling factorial
/// `x (x-1) ... (x-j+1) / j!`.
pub fn binom_real(x: f64, j: u32) -> f64 {
    let mut acc = 1.0;
    for i in 0..j {
        acc *= (x - f64::from(i)) / f64::from(i + 1);
    }
    acc
}
