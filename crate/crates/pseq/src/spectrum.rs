//! Floating-point correlation spectra.
//!
//! These paths never decide anything; they exist for speed on long
//! sequences and are always compared against the exact values from
//! `pseq_core::analysis`.

use std::f64::consts::PI;

use pseq_core::analysis::correlation_spectrum_exact;
use pseq_core::{CyclotomicInt, Sequence};
use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;

/// Absolute tolerance for float-vs-exact agreement, sized for double
/// precision error growth at N up to 1e5.
pub const FFT_TOLERANCE: f64 = 1e-6;

fn roots_of_unity(p: u32) -> Vec<Complex64> {
    (0..p)
        .map(|k| Complex64::from_polar(1.0, 2.0 * PI * k as f64 / p as f64))
        .collect()
}

/// Numerical value of an exact cyclotomic integer at ω = e^(2πi/p).
pub fn evaluate(value: &CyclotomicInt) -> Complex64 {
    roots_of_unity(value.p())
        .iter()
        .zip(value.coeffs())
        .map(|(w, &c)| w * c as f64)
        .sum()
}

/// `R(k)` for all `k` via forward transform, squared magnitude, inverse
/// transform. O(N log N) for every N, including primes.
pub fn correlation_spectrum_fft(a: &Sequence) -> Vec<Complex64> {
    let n = a.period();
    let roots = roots_of_unity(a.p());
    let mut buf: Vec<Complex64> = a.data().iter().map(|&v| roots[v as usize]).collect();
    let mut planner = FftPlanner::<f64>::new();
    planner.plan_fft_forward(n).process(&mut buf);
    for x in buf.iter_mut() {
        *x = Complex64::new(x.norm_sqr(), 0.0);
    }
    planner.plan_fft_inverse(n).process(&mut buf);
    // the unnormalized inverse yields N * ∑ s(n) s*(n - k) at index k
    let scale = 1.0 / n as f64;
    (0..n).map(|k| buf[(n - k) % n] * scale).collect()
}

/// Direct O(N^2) complex summation.
pub fn correlation_spectrum_naive(a: &Sequence) -> Vec<Complex64> {
    let n = a.period();
    let roots = roots_of_unity(a.p());
    let s: Vec<Complex64> = a.data().iter().map(|&v| roots[v as usize]).collect();
    (0..n)
        .map(|k| (0..n).map(|i| s[i] * s[(i + k) % n].conj()).sum())
        .collect()
}

/// Largest `|float(k) - exact(k)|` over all shifts.
pub fn max_deviation(float: &[Complex64], exact: &[CyclotomicInt]) -> f64 {
    assert_eq!(float.len(), exact.len(), "spectra of different length");
    float
        .iter()
        .zip(exact)
        .map(|(f, e)| (f - evaluate(e)).norm())
        .fold(0.0, f64::max)
}

/// FFT spectrum together with its deviation from the exact spectrum.
pub fn fft_cross_check(a: &Sequence) -> (Vec<Complex64>, f64) {
    let fft = correlation_spectrum_fft(a);
    let deviation = max_deviation(&fft, &correlation_spectrum_exact(a));
    (fft, deviation)
}
