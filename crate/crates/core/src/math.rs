//! Small numerical helpers: phase factors and a radix-2 FFT.

#[allow(unused_imports)]
use num_traits::Float;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

/// `e^{2πi·turns}` with the argument reduced to `[0, 1)` first so that
/// integer parts contribute no rounding.
#[inline]
pub(crate) fn cis_turns(turns: f64) -> Complex64 {
    let frac = turns - turns.floor();
    let (s, c) = libm::sincos(2.0 * PI * frac);
    Complex64::new(c, s)
}

#[inline]
pub(crate) fn sinc(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        let px = PI * x;
        px.sin() / px
    }
}

pub(crate) fn is_pow2(n: usize) -> bool {
    n != 0 && n & (n - 1) == 0
}

pub(crate) fn next_pow2(n: usize) -> usize {
    n.max(1).next_power_of_two()
}

/// Table of `e^{2πi·sign·r/n}` for `r = 0..n`.
pub(crate) fn roots(n: usize, sign: f64) -> Vec<Complex64> {
    (0..n).map(|r| cis_turns(sign * r as f64 / n as f64)).collect()
}

/// In-place unnormalized DFT `X_s = Σ_r x_r e^{2πi·sign·rs/n}`.
///
/// Radix-2 when `n` is a power of two, direct summation otherwise.
pub(crate) fn dft_in_place(buf: &mut [Complex64], sign: f64) {
    let n = buf.len();
    if n <= 1 {
        return;
    }
    if !is_pow2(n) {
        let w = roots(n, sign);
        let out: Vec<Complex64> = (0..n)
            .map(|s| {
                buf.iter()
                    .enumerate()
                    .map(|(r, &x)| x * w[(r * s) % n])
                    .sum()
            })
            .collect();
        buf.copy_from_slice(&out);
        return;
    }

    let bits = n.trailing_zeros();
    for i in 0..n {
        let j = i.reverse_bits() >> (usize::BITS - bits);
        if j > i {
            buf.swap(i, j);
        }
    }
    let w = roots(n, sign);
    let mut len = 2;
    while len <= n {
        let stride = n / len;
        let half = len / 2;
        for start in (0..n).step_by(len) {
            for k in 0..half {
                let a = buf[start + k];
                let b = buf[start + k + half] * w[k * stride];
                buf[start + k] = a + b;
                buf[start + k + half] = a - b;
            }
        }
        len <<= 1;
    }
}

/// Evaluates `Σ_k a_k e^{2πi(offset+k)s/n}` for `s = 0..n`, where `a` is
/// indexed from `k = 0`.
///
/// With `use_fft` the coefficients are folded modulo `n` and transformed;
/// otherwise each output is summed directly from a root-of-unity table.
pub(crate) fn trig_sweep(a: &[Complex64], offset: i64, n: usize, use_fft: bool) -> Vec<Complex64> {
    let modn = |k: i64| k.rem_euclid(n as i64) as usize;
    if use_fft {
        let mut buf = vec![Complex64::new(0.0, 0.0); n];
        for (k, &v) in a.iter().enumerate() {
            buf[modn(offset + k as i64)] += v;
        }
        dft_in_place(&mut buf, 1.0);
        buf
    } else {
        let w = roots(n, 1.0);
        let exps: Vec<usize> = (0..a.len()).map(|k| modn(offset + k as i64)).collect();
        (0..n)
            .map(|s| {
                a.iter()
                    .zip(&exps)
                    .filter(|(v, _)| v.re != 0.0 || v.im != 0.0)
                    .map(|(&v, &e)| v * w[(e * s) % n])
                    .sum()
            })
            .collect()
    }
}

/// Row-major 2-D unnormalized DFT with the same sign along both axes.
pub(crate) fn dft2_in_place(buf: &mut [Complex64], rows: usize, cols: usize, sign: f64) {
    for r in 0..rows {
        dft_in_place(&mut buf[r * cols..(r + 1) * cols], sign);
    }
    let mut col = vec![Complex64::new(0.0, 0.0); rows];
    for c in 0..cols {
        for r in 0..rows {
            col[r] = buf[r * cols + c];
        }
        dft_in_place(&mut col, sign);
        for r in 0..rows {
            buf[r * cols + c] = col[r];
        }
    }
}
