//! Small numeric kernels shared by the distribution and bound code.

/// Neumaier-compensated sum.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut sum = 0.0_f64;
    let mut comp = 0.0_f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// Harmonic number `H_n = 1 + 1/2 + ... + 1/n`, summed smallest-first with compensation.
pub fn harmonic(n: u64) -> f64 {
    compensated_sum((1..=n).rev().map(|i| 1.0 / i as f64))
}

/// PMF of `Bin(n, p)` as a dense vector over `0..=n`.
pub fn binomial_pmf(n: usize, p: f64) -> Vec<f64> {
    if p <= 0.0 {
        let mut v = vec![0.0; n + 1];
        v[0] = 1.0;
        return v;
    }
    if p >= 1.0 {
        let mut v = vec![0.0; n + 1];
        v[n] = 1.0;
        return v;
    }
    // Work in log space to stay accurate for moderately large n.
    let lp = p.ln();
    let lq = (-p).ln_1p();
    let mut log_choose = 0.0_f64;
    let mut out = Vec::with_capacity(n + 1);
    for i in 0..=n {
        if i > 0 {
            log_choose += ((n - i + 1) as f64).ln() - (i as f64).ln();
        }
        out.push((log_choose + i as f64 * lp + (n - i) as f64 * lq).exp());
    }
    out
}

/// Full linear convolution of two dense PMFs starting at index 0.
pub fn convolve(a: &[f64], b: &[f64]) -> Vec<f64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0.0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// `(1 - p)^k` evaluated through `ln_1p` so that tiny `p` keeps its precision.
pub fn pow_one_minus(p: f64, k: f64) -> f64 {
    if p >= 1.0 {
        return if k == 0.0 { 1.0 } else { 0.0 };
    }
    if p >= 1e-4 && k <= i32::MAX as f64 && k.fract() == 0.0 {
        return (1.0 - p).powi(k as i32);
    }
    (k * (-p).ln_1p()).exp()
}
