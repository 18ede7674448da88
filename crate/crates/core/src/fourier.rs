//! Torus sampling and radix-2 transforms on `[0, n)^d` grids.
//!
//! The symbol of `f` is `f̂(θ) = Σ_s f_s e^{2πi s·θ}`, so convolution
//! becomes pointwise multiplication and `g_n = ∫ ĝ(θ) e^{-2πi n·θ} dθ`.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::groups::ZdElem;

/// In-place radix-2 FFT with kernel `e^{-2πi jk/n}` (or `e^{+…}` when
/// `inverse`), unnormalised. `buf.len()` must be a power of two.
pub(crate) fn fft(buf: &mut [Complex64], inverse: bool) {
    let n = buf.len();
    debug_assert!(n.is_power_of_two());
    if n <= 1 {
        return;
    }
    let bits = n.trailing_zeros();
    for i in 0..n {
        let j = i.reverse_bits() >> (usize::BITS - bits);
        if j > i {
            buf.swap(i, j);
        }
    }
    let sign = if inverse { 1.0 } else { -1.0 };
    let mut len = 2;
    while len <= n {
        let step = sign * 2.0 * PI / len as f64;
        for start in (0..n).step_by(len) {
            for k in 0..len / 2 {
                let w = Complex64::from_polar(1.0, step * k as f64);
                let a = buf[start + k];
                let b = buf[start + k + len / 2] * w;
                buf[start + k] = a + b;
                buf[start + k + len / 2] = a - b;
            }
        }
        len <<= 1;
    }
}

/// Separable transform of a row-major `[0, n)^dim` array.
pub(crate) fn fft_nd(data: &mut [Complex64], dim: usize, n: usize, inverse: bool) {
    let mut line = vec![Complex64::new(0.0, 0.0); n];
    for axis in 0..dim {
        let stride = n.pow((dim - 1 - axis) as u32);
        let outer = data.len() / (n * stride);
        for o in 0..outer {
            for inner in 0..stride {
                let base = o * n * stride + inner;
                for (k, slot) in line.iter_mut().enumerate() {
                    *slot = data[base + k * stride];
                }
                fft(&mut line, inverse);
                for (k, v) in line.iter().enumerate() {
                    data[base + k * stride] = *v;
                }
            }
        }
    }
}

/// `f̂(k/n)` for every `k ∈ [0, n)^dim`, row-major.
pub(crate) fn symbol_on_grid(terms: &[(ZdElem, f64)], dim: usize, n: usize) -> Vec<Complex64> {
    let twiddle: Vec<Complex64> = (0..n)
        .map(|j| Complex64::from_polar(1.0, 2.0 * PI * j as f64 / n as f64))
        .collect();
    let total = n.pow(dim as u32);
    let mut out = vec![Complex64::new(0.0, 0.0); total];
    let mut k = vec![0usize; dim];
    for slot in out.iter_mut() {
        let mut acc = Complex64::new(0.0, 0.0);
        for (s, c) in terms {
            let mut phase = 0i128;
            for i in 0..dim {
                phase += s.coords()[i] as i128 * k[i] as i128;
            }
            acc += twiddle[phase.rem_euclid(n as i128) as usize] * *c;
        }
        *slot = acc;
        for i in (0..dim).rev() {
            k[i] += 1;
            if k[i] < n {
                break;
            }
            k[i] = 0;
        }
    }
    out
}

/// `f̂(θ)` at one point.
pub(crate) fn symbol_at(terms: &[(ZdElem, f64)], theta: &[f64]) -> Complex64 {
    terms.iter().fold(Complex64::new(0.0, 0.0), |acc, (s, c)| {
        let phase: f64 = s.coords().iter().zip(theta).map(|(a, t)| *a as f64 * t).sum();
        acc + Complex64::from_polar(*c, 2.0 * PI * phase)
    })
}
