//! Truncated power series helpers shared by the moment transforms.
//!
//! Series are dense coefficient vectors `a[0..=n]` in one formal variable.
//! The exp/log pair below implements the Newton recurrences
//!   n·b_n = Σ_{k=1}^{n} k·a_k·b_{n-k}      (b = exp a, a_0 = 0)
//!   n·a_n = n·b_n - Σ_{k=1}^{n-1} k·a_k·b_{n-k}   (a = log b, b_0 = 1)
//! which are exact over any of our scalar domains.

use crate::scalar::Scalar;

/// exp of a series with zero constant term, to the same truncation order.
pub fn series_exp<T: Scalar>(a: &[T]) -> Vec<T> {
    assert!(a.is_empty() || a[0].is_zero(), "series_exp needs a[0] = 0");
    let n = a.len();
    let mut b = vec![T::zero(); n];
    if n == 0 {
        return b;
    }
    b[0] = T::one();
    for i in 1..n {
        let mut acc = T::zero();
        for k in 1..=i {
            if a[k].is_zero() || b[i - k].is_zero() {
                continue;
            }
            acc = acc.add_ref(&a[k].scale_int(k as i64).mul_ref(&b[i - k]));
        }
        b[i] = acc.div_ref(&T::from_int(i as i64));
    }
    b
}

/// log of a series with unit constant term, to the same truncation order.
pub fn series_log<T: Scalar>(b: &[T]) -> Vec<T> {
    assert!(
        !b.is_empty() && b[0] == T::one(),
        "series_log needs b[0] = 1"
    );
    let n = b.len();
    let mut a = vec![T::zero(); n];
    for i in 1..n {
        let mut acc = b[i].scale_int(i as i64);
        for k in 1..i {
            if a[k].is_zero() || b[i - k].is_zero() {
                continue;
            }
            acc = acc.sub_ref(&a[k].scale_int(k as i64).mul_ref(&b[i - k]));
        }
        a[i] = acc.div_ref(&T::from_int(i as i64));
    }
    a
}

/// Product of two truncated series, truncated to `order + 1` coefficients.
pub fn series_mul<T: Scalar>(a: &[T], b: &[T], order: usize) -> Vec<T> {
    let mut out = vec![T::zero(); order + 1];
    for (i, ai) in a.iter().enumerate().take(order + 1) {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate().take(order + 1 - i) {
            if bj.is_zero() {
                continue;
            }
            out[i + j] = out[i + j].add_ref(&ai.mul_ref(bj));
        }
    }
    out
}
