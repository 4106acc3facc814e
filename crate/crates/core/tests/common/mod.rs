//! Brute-force oracles on plain `i64` coefficient vectors, independent of the
//! series engine.

#![allow(dead_code)]

use num_bigint::BigInt;
use qsverify::qseries::QSeries;

/// Number of partitions of `0..=n` into parts accepted by `allowed`.
pub fn partitions(n: usize, allowed: impl Fn(usize) -> bool) -> Vec<i64> {
    let mut p = vec![0i64; n + 1];
    p[0] = 1;
    for part in (1..=n).filter(|&k| allowed(k)) {
        for t in part..=n {
            p[t] += p[t - part];
        }
    }
    p
}

/// `a * b` through `q^n`.
pub fn mul(a: &[i64], b: &[i64], n: usize) -> Vec<i64> {
    let mut out = vec![0i64; n + 1];
    for (i, &x) in a.iter().enumerate().take(n + 1) {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate().take(n + 1 - i) {
            out[i + j] += x * y;
        }
    }
    out
}

/// Multiplies by `1 - q^k` in place.
pub fn times_one_minus(a: &mut [i64], k: usize) {
    for t in (k..a.len()).rev() {
        a[t] -= a[t - k];
    }
}

/// Divides by `1 - q^k` in place.
pub fn over_one_minus(a: &mut [i64], k: usize) {
    for t in k..a.len() {
        a[t] += a[t - k];
    }
}

/// `(q^s; q^s)_inf` through `q^n`, multiplied out factor by factor.
pub fn euler_product(s: usize, n: usize) -> Vec<i64> {
    let mut a = vec![0i64; n + 1];
    a[0] = 1;
    let mut k = s;
    while k <= n {
        times_one_minus(&mut a, k);
        k += s;
    }
    a
}

/// `1/(q^s; q^s)_inf` through `q^n`.
pub fn inverse_euler_product(s: usize, n: usize) -> Vec<i64> {
    partitions(n, |k| k % s == 0)
}

/// `sum q^{j^2+2jk+2k^2} / ((q;q)_j (q^2;q^2)_k)` through `q^n`, summed
/// term by term over every `(j, k)` whose leading power is in range.
pub fn uz1_double_sum(n: usize) -> Vec<i64> {
    let mut out = vec![0i64; n + 1];
    for j in 0..=n {
        for k in 0..=n {
            let e = j * j + 2 * j * k + 2 * k * k;
            if e > n {
                continue;
            }
            let mut t = vec![0i64; n + 1];
            t[e] = 1;
            for i in 1..=j {
                over_one_minus(&mut t, i);
            }
            for i in 1..=k {
                over_one_minus(&mut t, 2 * i);
            }
            for (o, v) in out.iter_mut().zip(t) {
                *o += v;
            }
        }
    }
    out
}

/// Integer coefficients of a parameter-free series at `q^0 ..= q^upto`.
pub fn ints(s: &QSeries, upto: i64) -> Vec<i64> {
    s.int_coeffs(upto)
        .expect("parameter-free series with whole powers")
        .iter()
        .map(|c| i64::try_from(c.clone()).expect("fits in i64"))
        .collect()
}

pub fn big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&c| BigInt::from(c)).collect()
}
