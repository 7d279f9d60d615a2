//! Limiting objects from truncated spectral data and path-sum limits.
//!
//! The ε̄ → 0 limit shape is the push-forward of the uniform circle measure
//! along the symbol v(x); the fixed-ε̄ < 0 limit shape is piecewise linear
//! with extrema read off the spectral measure of a truncated Lax matrix.
//! Fluctuation covariances come by three routes that must agree: connected
//! 2-decorated path sums, the welding operator applied to limit-shape moments
//! (finite-difference Wirtinger derivatives), and a Fourier-quadrature
//! formula valid at ε̄ = 0. Mean shifts are ε̄-derivatives of the limit
//! moments or their closed form.

use crate::params::AnisotropyParams;
use crate::profile::InterlacingProfile;
use crate::ribbon;
use crate::scalar::Scalar;
use crate::specialization::Specialization;
use nalgebra::DMatrix;
use num_complex::Complex64;

#[derive(Debug, Clone, PartialEq)]
pub enum AsymptoticsError {
    /// Resolvent evaluated within 1e-8 of an eigenvalue.
    PoleProximity { distance: f64 },
    /// Extrema failed to interlace; the truncation is too small.
    TruncationTooSmall,
    /// Operation requires ε̄ < 0 (dispersive) or ε̄ = 0 (circle formulas).
    WrongRegime(&'static str),
}

impl std::fmt::Display for AsymptoticsError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            AsymptoticsError::PoleProximity { distance } => {
                write!(f, "resolvent argument within {distance:e} of the spectrum")
            }
            AsymptoticsError::TruncationTooSmall => {
                write!(f, "interlacing failed; increase the truncation size")
            }
            AsymptoticsError::WrongRegime(msg) => write!(f, "{msg}"),
        }
    }
}

impl std::error::Error for AsymptoticsError {}

/// v(x) = Σ_k (V_k e^{-ikx} + conj(V_k) e^{ikx}); real for any specialization.
pub fn symbol_eval(v: &Specialization<Complex64>, x: f64) -> f64 {
    let mut acc = 0.0;
    for (k, vk) in v.iter() {
        let phase = Complex64::new(0.0, -(f64::from(k)) * x).exp();
        acc += 2.0 * (vk * phase).re;
    }
    acc
}

/// Convex limit shape pointwise: f(c) = ∫ |c - v(x)| dx/2π, the moment
/// identity applied to the test function |c - s|.
pub fn convex_profile_value(v: &Specialization<Complex64>, c: f64) -> f64 {
    const NODES: usize = 200_000;
    let mut acc = 0.0;
    for i in 0..NODES {
        let x = 2.0 * std::f64::consts::PI * (i as f64 + 0.5) / (NODES as f64);
        acc += (c - symbol_eval(v, x)).abs();
    }
    acc / NODES as f64
}

/// The Plancherel convex shape (2/π)(c·arcsin(c/2) + √(4-c²)) on |c| ≤ 2.
pub fn plancherel_limit_shape(c: f64) -> f64 {
    if c.abs() >= 2.0 {
        c.abs()
    } else {
        (2.0 / std::f64::consts::PI) * (c * (0.5 * c).asin() + (4.0 - c * c).sqrt())
    }
}

/// Moments O_p = ∫ v(x)^p dx/2π for p = 0..=p_max, by exact trigonometric
/// monomial integration (convolution of Fourier coefficient vectors).
pub fn convex_profile_moments(v: &Specialization<Complex64>, p_max: u32) -> Vec<f64> {
    let kmax = v.max_index() as usize;
    let width = kmax * p_max as usize + 1;
    // coefficient vector of v over modes -width..width
    let mut base = vec![Complex64::new(0.0, 0.0); 2 * width + 1];
    for (k, vk) in v.iter() {
        base[width - k as usize] = *vk; // e^{-ikx} mode
        base[width + k as usize] = vk.conj();
    }
    let mut out = vec![1.0];
    let mut power = vec![Complex64::new(0.0, 0.0); 2 * width + 1];
    power[width] = Complex64::new(1.0, 0.0);
    for _ in 1..=p_max {
        let mut next = vec![Complex64::new(0.0, 0.0); 2 * width + 1];
        for (i, a) in power.iter().enumerate() {
            if a.norm_sqr() == 0.0 {
                continue;
            }
            for (k, vk) in v.iter() {
                let k = k as usize;
                if i >= k {
                    next[i - k] += a * vk;
                }
                if i + k < 2 * width + 1 {
                    next[i + k] += a * vk.conj();
                }
            }
        }
        let _ = &base;
        power = next;
        out.push(power[width].re);
    }
    out
}

/// Spectral data of the M×M truncation of the Lax operator: diagonal ε̄j,
/// upper triangle conj(V_{j'-j}), lower triangle V_{j-j'}. Complex symbols
/// are handled through the real-symmetric doubling [[S, -K], [K, S]], whose
/// spectral measure at the first basis vector coincides with the original.
#[derive(Clone, Debug)]
pub struct TruncatedLax {
    pub dim: usize,
    pub ebar: f64,
    eigenvalues: Vec<f64>,
    /// Spectral weights |⟨w_k, ψ₀⟩|², summing to 1.
    weights: Vec<f64>,
}

impl TruncatedLax {
    pub fn new(v: &Specialization<Complex64>, ebar: f64, m: usize) -> Self {
        assert!(m >= 1);
        let is_real = v.iter().all(|(_, vk)| vk.im == 0.0);
        let (eigenvalues, weights) = if is_real {
            let mut a = DMatrix::<f64>::zeros(m, m);
            for i in 0..m {
                a[(i, i)] = ebar * i as f64;
                for j in (i + 1)..m {
                    let vk = v.value_or_zero((j - i) as u32).re;
                    a[(i, j)] = vk;
                    a[(j, i)] = vk;
                }
            }
            let eig = a.symmetric_eigen();
            let vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
            let w: Vec<f64> = (0..m).map(|k| eig.eigenvectors[(0, k)].powi(2)).collect();
            (vals, w)
        } else {
            // real-symmetric doubling of the Hermitian truncation
            let n = 2 * m;
            let mut b = DMatrix::<f64>::zeros(n, n);
            for i in 0..m {
                b[(i, i)] = ebar * i as f64;
                b[(m + i, m + i)] = ebar * i as f64;
                for j in (i + 1)..m {
                    let vk = v.value_or_zero((j - i) as u32);
                    // upper entry conj(vk) = s - i·k with s = vk.re, k̃ = vk.im
                    b[(i, j)] = vk.re;
                    b[(j, i)] = vk.re;
                    b[(m + i, m + j)] = vk.re;
                    b[(m + j, m + i)] = vk.re;
                    // antisymmetric part: A[i][j] = -vk.im (upper), +vk.im (lower)
                    b[(i, m + j)] = vk.im;
                    b[(m + j, i)] = vk.im;
                    b[(j, m + i)] = -vk.im;
                    b[(m + i, j)] = -vk.im;
                }
            }
            let eig = b.symmetric_eigen();
            let vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
            let w: Vec<f64> = (0..n).map(|k| eig.eigenvectors[(0, k)].powi(2)).collect();
            (vals, w)
        };
        let mut pairs: Vec<(f64, f64)> = eigenvalues.into_iter().zip(weights).collect();
        pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        TruncatedLax {
            dim: m,
            ebar,
            eigenvalues: pairs.iter().map(|p| p.0).collect(),
            weights: pairs.iter().map(|p| p.1).collect(),
        }
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// ⟨ψ₀, L^ℓ ψ₀⟩ = Σ_k w_k θ_k^ℓ.
    pub fn moment(&self, ell: u32) -> f64 {
        self.eigenvalues
            .iter()
            .zip(&self.weights)
            .map(|(&t, &w)| w * t.powi(ell as i32))
            .sum()
    }

    /// Top-left resolvent entry Σ_k w_k/(u - θ_k).
    pub fn resolvent_00(&self, u: Complex64) -> Result<Complex64, AsymptoticsError> {
        let dist = self
            .eigenvalues
            .iter()
            .map(|&t| (u - Complex64::new(t, 0.0)).norm())
            .fold(f64::INFINITY, f64::min);
        if dist < 1e-8 {
            return Err(AsymptoticsError::PoleProximity { distance: dist });
        }
        Ok(self
            .eigenvalues
            .iter()
            .zip(&self.weights)
            .map(|(&t, &w)| Complex64::new(w, 0.0) / (u - Complex64::new(t, 0.0)))
            .sum())
    }
}

/// Interlacing extrema of the dispersive limit shape read from a truncation.
#[derive(Clone, Debug)]
pub struct DispersiveProfileData {
    /// Local minima S_i↑ (resolvent poles), descending.
    pub poles: Vec<f64>,
    /// Local maxima S_i↓ (resolvent zeros), descending.
    pub zeros: Vec<f64>,
    pub truncation: usize,
    pub ebar: f64,
}

impl DispersiveProfileData {
    /// Gap diagnostics (S_{i-1}↑ - S_i↓)/|ε̄|, expected near positive integers.
    pub fn gap_ratios(&self) -> Vec<f64> {
        self.poles
            .iter()
            .zip(&self.zeros)
            .map(|(&up, &down)| (up - down) / self.ebar.abs())
            .collect()
    }

    /// Slope ±1 profile through the extrema, for grid emission.
    pub fn profile(&self) -> InterlacingProfile<Complex64> {
        let minima: Vec<Complex64> = self.poles.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        let maxima: Vec<Complex64> = self.zeros.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        InterlacingProfile::new(minima, maxima).expect("interlacing checked at construction")
    }
}

/// Dispersive profile extrema for ε̄ < 0: poles are eigenvalues carrying
/// spectral weight above the floor, zeros are the roots of the weighted
/// resolvent bracketed between consecutive kept poles.
pub fn dispersive_profile(
    v: &Specialization<Complex64>,
    ebar: f64,
    m: usize,
) -> Result<DispersiveProfileData, AsymptoticsError> {
    if ebar >= 0.0 {
        return Err(AsymptoticsError::WrongRegime(
            "dispersive profile needs ebar < 0",
        ));
    }
    let lax = TruncatedLax::new(v, ebar, m);
    const WEIGHT_FLOOR: f64 = 1e-10;
    let kept: Vec<(f64, f64)> = lax
        .eigenvalues
        .iter()
        .zip(&lax.weights)
        .filter(|(_, &w)| w > WEIGHT_FLOOR)
        .map(|(&t, &w)| (t, w))
        .collect();
    if kept.is_empty() {
        return Err(AsymptoticsError::TruncationTooSmall);
    }
    // merge eigenvalues closer than the bracketing resolution
    let mut merged: Vec<(f64, f64)> = Vec::new();
    for (t, w) in kept {
        match merged.last_mut() {
            Some((t0, w0)) if (t - *t0).abs() < 1e-11 => *w0 += w,
            _ => merged.push((t, w)),
        }
    }
    let resolvent = |u: f64| -> f64 { merged.iter().map(|&(t, w)| w / (u - t)).sum() };
    let mut zeros = Vec::new();
    for pair in merged.windows(2) {
        let (lo, hi) = (pair[0].0, pair[1].0);
        // R decreases from +inf to -inf on (lo, hi): bisect the sign change
        let mut a = lo + 1e-13 * (1.0 + lo.abs());
        let mut b = hi - 1e-13 * (1.0 + hi.abs());
        if !(resolvent(a) > 0.0 && resolvent(b) < 0.0) {
            return Err(AsymptoticsError::TruncationTooSmall);
        }
        for _ in 0..200 {
            let mid = 0.5 * (a + b);
            if resolvent(mid) > 0.0 {
                a = mid;
            } else {
                b = mid;
            }
        }
        zeros.push(0.5 * (a + b));
    }
    let poles: Vec<f64> = merged.iter().map(|p| p.0).rev().collect();
    let zeros: Vec<f64> = zeros.into_iter().rev().collect();
    for i in 0..zeros.len() {
        if !(zeros[i] < poles[i] && (i + 1 >= poles.len() || poles[i + 1] < zeros[i])) {
            return Err(AsymptoticsError::TruncationTooSmall);
        }
    }
    Ok(DispersiveProfileData {
        poles,
        zeros,
        truncation: m,
        ebar,
    })
}

/// Limit moments 𝐓_ℓ(v; ε̄) = Σ_m W_{1,0,m}(ℓ|v,v) ε̄^m for ℓ = 0..=l_max:
/// single-site no-pairing path sums evaluated at ε̄.
pub fn limit_moments_paths(v: &Specialization<Complex64>, ebar: f64, l_max: u32) -> Vec<f64> {
    let mut out = vec![1.0];
    for ell in 1..=l_max {
        let w = ribbon::cumulants_poly(&[ell], v, v).expect("nonempty lengths");
        let mut acc = 0.0;
        for (m, coeff) in w.hbar_slice(0) {
            acc += coeff.re * ebar.powi(m as i32);
        }
        out.push(acc);
    }
    out
}

/// Limit linear statistics 𝐎_p(v; ε̄) for p = 0..=p_max through the
/// moment-level Markov-Krein transform of the limit moments.
pub fn limit_linear_statistics(v: &Specialization<Complex64>, ebar: f64, p_max: u32) -> Vec<f64> {
    let t = limit_moments_paths(v, ebar, p_max);
    let t_c: Vec<Complex64> = t.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    let o = crate::profile::kmk_o_from_t(&t_c).expect("T_0 = 1");
    o.iter().map(|z| z.re).collect()
}

/// Covariance by the welding operator: Σ_k k ∂²/∂conj(V_k)⁽¹⁾∂V_k⁽²⁾ of
/// 𝐎_{p₁}(v⁽¹⁾)𝐎_{p₂}(v⁽²⁾) at v⁽¹⁾ = v⁽²⁾ = v, via central Wirtinger
/// finite differences of step `delta`.
pub fn covariance_welding(
    v: &Specialization<Complex64>,
    ebar: f64,
    p1: u32,
    p2: u32,
    delta: f64,
) -> f64 {
    assert!(delta > 0.0);
    let kmax = v.max_index() + p1.max(p2);
    let o_of = |spec: &Specialization<Complex64>, p: u32| -> f64 {
        limit_linear_statistics(spec, ebar, p)[p as usize]
    };
    // Wirtinger gradient of O_p at v: dO/dV_k = (d/da - i d/db)/2
    let gradient = |p: u32| -> Vec<Complex64> {
        (1..=kmax)
            .map(|k| {
                let base = v.value_or_zero(k);
                let da = {
                    let plus = v.with_value(k, base + Complex64::new(delta, 0.0));
                    let minus = v.with_value(k, base - Complex64::new(delta, 0.0));
                    (o_of(&plus, p) - o_of(&minus, p)) / (2.0 * delta)
                };
                let db = {
                    let plus = v.with_value(k, base + Complex64::new(0.0, delta));
                    let minus = v.with_value(k, base - Complex64::new(0.0, delta));
                    (o_of(&plus, p) - o_of(&minus, p)) / (2.0 * delta)
                };
                Complex64::new(da, -db) * 0.5
            })
            .collect()
    };
    let g1 = gradient(p1);
    let g2 = gradient(p2);
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 1..=kmax {
        // dO/dconj(V_k) = conj(dO/dV_k) for the real-valued O
        acc +=
            Complex64::new(f64::from(k), 0.0) * g1[(k - 1) as usize].conj() * g2[(k - 1) as usize];
    }
    acc.re
}

/// Covariance from connected 2-decorated path sums: the ℏ¹ slice of
/// κ₂(O_{p₁}, O_{p₂}) evaluated at ε̄.
pub fn covariance_paths(v: &Specialization<Complex64>, ebar: f64, p1: u32, p2: u32) -> f64 {
    let kappa = ribbon::decorated_cumulants_poly(&[p1, p2], v, v).expect("nonempty");
    let mut acc = 0.0;
    for (m, coeff) in kappa.hbar_slice(1) {
        acc += coeff.re * ebar.powi(m as i32);
    }
    acc
}

/// Fourier-quadrature covariance (ε̄ = 0 regime), the oracle for the other
/// two routes: Σ_k k (∫p₁v^{p₁-1}e^{ikx}dx/2π)(∫p₂v^{p₂-1}e^{-ikx}dx/2π).
pub fn covariance_bd(v: &Specialization<Complex64>, p1: u32, p2: u32) -> f64 {
    let dq1 = move |c: f64| f64::from(p1) * c.powi(p1 as i32 - 1);
    let dq2 = move |c: f64| f64::from(p2) * c.powi(p2 as i32 - 1);
    let kmax = v.max_index() * p1.max(p2).max(1);
    covariance_bd_general(v, &dq1, &dq2, kmax)
}

/// Quadrature covariance for general test functions given by the derivatives
/// Q₁', Q₂' of the test polynomials.
pub fn covariance_bd_general(
    v: &Specialization<Complex64>,
    dq1: &dyn Fn(f64) -> f64,
    dq2: &dyn Fn(f64) -> f64,
    kmax: u32,
) -> f64 {
    const NODES: usize = 8192;
    let mut acc = 0.0;
    for k in 1..=kmax {
        let mut f1 = Complex64::new(0.0, 0.0);
        let mut f2 = Complex64::new(0.0, 0.0);
        for i in 0..NODES {
            let x = 2.0 * std::f64::consts::PI * (i as f64) / (NODES as f64);
            let vx = symbol_eval(v, x);
            let phase = Complex64::new(0.0, f64::from(k) * x).exp();
            f1 += Complex64::new(dq1(vx), 0.0) * phase;
            f2 += Complex64::new(dq2(vx), 0.0) * phase.conj();
        }
        f1 /= NODES as f64;
        f2 /= NODES as f64;
        acc += f64::from(k) * (f1 * f2).re;
    }
    acc
}

/// Chebyshev second-kind polynomial U_k(y) by recurrence.
pub fn chebyshev_u(k: u32, y: f64) -> f64 {
    let (mut a, mut b) = (1.0, 2.0 * y);
    match k {
        0 => a,
        1 => b,
        _ => {
            for _ in 2..=k {
                let c = 2.0 * y * b - a;
                a = b;
                b = c;
            }
            b
        }
    }
}

/// Chebyshev first-kind polynomial T_k(y) by recurrence.
pub fn chebyshev_t(k: u32, y: f64) -> f64 {
    let (mut a, mut b) = (1.0, y);
    match k {
        0 => a,
        1 => b,
        _ => {
            for _ in 2..=k {
                let c = 2.0 * y * b - a;
                a = b;
                b = c;
            }
            b
        }
    }
}

/// Covariance of the Chebyshev-paired fluctuations ∫U_{k-1}(c/2)·½𝐆 dc in
/// the Plancherel regime: the test derivative is Q'(c) = (2/k)T_k(c/2) by
/// 2(d/dc)T_k(c/2) = k U_{k-1}(c/2). Diagonal 1/k, off-diagonal 0.
pub fn chebyshev_covariance(v: &Specialization<Complex64>, k1: u32, k2: u32) -> f64 {
    assert!(k1 >= 1 && k2 >= 1);
    let dq1 = move |c: f64| (2.0 / f64::from(k1)) * chebyshev_t(k1, 0.5 * c);
    let dq2 = move |c: f64| (2.0 / f64::from(k2)) * chebyshev_t(k2, 0.5 * c);
    let kmax = v.max_index() * k1.max(k2) + 2;
    covariance_bd_general(v, &dq1, &dq2, kmax)
}

/// Diagonal Chebyshev variance; 1/k for the Plancherel symbol.
pub fn chebyshev_variance(k: u32) -> f64 {
    chebyshev_covariance(&Specialization::plancherel(), k, k)
}

/// Mean-shift moments 𝐗_p = d𝐎_p/dε̄ at ε̄ = 0 by central differences.
pub fn mean_shift_moments(v: &Specialization<Complex64>, p_max: u32, delta: f64) -> Vec<f64> {
    assert!(delta > 0.0);
    let plus = limit_linear_statistics(v, delta, p_max);
    let minus = limit_linear_statistics(v, -delta, p_max);
    plus.iter()
        .zip(&minus)
        .map(|(a, b)| (a - b) / (2.0 * delta))
        .collect()
}

/// The closed-form Plancherel mean shift -(1/2π) arcsin(c/2) on |c| ≤ 2.
pub fn plancherel_mean_shift(c: f64) -> f64 {
    if c.abs() > 2.0 {
        0.0
    } else {
        -(0.5 / std::f64::consts::PI) * (0.5 * c).asin()
    }
}

/// Regime-III data from Regime I: 𝐓_ℓ(v; ε̄>0) = (-1)^ℓ 𝐓_ℓ(-v; -ε̄) and
/// 𝚺(v; ε̄>0) = (-1)^{p₁+p₂} 𝚺(-v; -ε̄).
pub fn regime3_moments(
    v: &Specialization<Complex64>,
    ebar: f64,
    l_max: u32,
) -> Result<Vec<f64>, AsymptoticsError> {
    if ebar <= 0.0 {
        return Err(AsymptoticsError::WrongRegime("regime III needs ebar > 0"));
    }
    let reflected = limit_moments_paths(&v.negate(), -ebar, l_max);
    Ok(reflected
        .iter()
        .enumerate()
        .map(|(ell, &t)| if ell % 2 == 0 { t } else { -t })
        .collect())
}

pub fn regime3_covariance(
    v: &Specialization<Complex64>,
    ebar: f64,
    p1: u32,
    p2: u32,
) -> Result<f64, AsymptoticsError> {
    if ebar <= 0.0 {
        return Err(AsymptoticsError::WrongRegime("regime III needs ebar > 0"));
    }
    let sigma = covariance_paths(&v.negate(), -ebar, p1, p2);
    Ok(if (p1 + p2).is_multiple_of(2) {
        sigma
    } else {
        -sigma
    })
}

/// Π_a Π_c (u_a - c)(u_a - c - ε̄) / ((u_a - c - ε₂)(u_a - c - ε₁)) over the
/// given contents; over a partition's boxes this equals Π_a u_a·T↑(u_a).
pub fn g_up_weight<T: Scalar>(
    contents: &[T],
    us: &[Complex64],
    params: &AnisotropyParams<T>,
) -> Complex64 {
    let ebar = params.ebar().to_complex();
    let eps1 = params.eps1().to_complex();
    let eps2 = params.eps2().to_complex();
    let mut acc = Complex64::new(1.0, 0.0);
    for &u in us {
        for c in contents {
            let base = u - c.to_complex();
            acc *= base * (base - ebar) / ((base - eps2) * (base - eps1));
        }
    }
    acc
}

#[cfg(test)]
#[allow(clippy::needless_range_loop)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn v_pl() -> Specialization<Complex64> {
        Specialization::plancherel()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn symbol_examples() {
        let v = v_pl();
        for &x in &[0.0, 0.3, 1.7, 4.0] {
            assert!((symbol_eval(&v, x) - 2.0 * x.cos()).abs() < 1e-14);
        }
        assert_eq!(symbol_eval(&Specialization::empty(), 1.0), 0.0);
        // V_2 = i gives 2 sin 2x
        let v = Specialization::new(vec![(2, c(0.0, 1.0))], None);
        for &x in &[0.2, 1.1, 2.9] {
            assert!((symbol_eval(&v, x) - 2.0 * (2.0 * x).sin()).abs() < 1e-13);
        }
    }

    #[test]
    fn convex_profile_matches_arcsine_closed_form() {
        for i in 0..11 {
            let cval = -2.5 + 5.0 * (i as f64) / 10.0;
            let got = convex_profile_value(&v_pl(), cval);
            let expected = plancherel_limit_shape(cval);
            assert!(
                (got - expected).abs() < 1e-6,
                "c={cval}: {got} vs {expected}"
            );
        }
        // empty symbol degenerates to |c|
        assert!((convex_profile_value(&Specialization::empty(), 1.3) - 1.3).abs() < 1e-9);
    }

    #[test]
    fn convex_moments_wallis_and_scaling() {
        let m = convex_profile_moments(&v_pl(), 8);
        // odd moments vanish; even are central binomials
        for p in [1usize, 3, 5, 7] {
            assert!(m[p].abs() < 1e-12);
        }
        assert!((m[2] - 2.0).abs() < 1e-12);
        assert!((m[4] - 6.0).abs() < 1e-12);
        assert!((m[6] - 20.0).abs() < 1e-12);
        assert!((m[8] - 70.0).abs() < 1e-12);
        assert!(convex_profile_moments(&Specialization::empty(), 5)[1..]
            .iter()
            .all(|x| x.abs() < 1e-15));
        // V_1 = 2: O_2 = 8
        let v = Specialization::new(vec![(1, c(2.0, 0.0))], None);
        assert!((convex_profile_moments(&v, 2)[2] - 8.0).abs() < 1e-12);
    }

    #[test]
    fn convex_moments_match_quadrature() {
        let v = Specialization::new(vec![(1, c(1.0, 0.0)), (2, c(0.5, 0.25))], None);
        let exact = convex_profile_moments(&v, 6);
        const NODES: usize = 20000;
        for p in 1..=6usize {
            let mut q = 0.0;
            for i in 0..NODES {
                let x = 2.0 * std::f64::consts::PI * i as f64 / NODES as f64;
                q += symbol_eval(&v, x).powi(p as i32);
            }
            q /= NODES as f64;
            assert!((q - exact[p]).abs() < 1e-9, "p={p}: {q} vs {}", exact[p]);
        }
    }

    #[test]
    fn resolvent_of_empty_symbol() {
        let lax = TruncatedLax::new(&Specialization::empty(), 0.0, 5);
        let u = c(0.0, 2.0);
        let r = lax.resolvent_00(u).unwrap();
        assert!((r - 1.0 / u).norm() < 1e-14);
    }

    #[test]
    fn resolvent_solves_catalan_equation() {
        // T(u) + 1/T(u) = u at u = 3i for the Plancherel symbol, ε̄ = 0
        let lax = TruncatedLax::new(&v_pl(), 0.0, 400);
        let u = c(0.0, 3.0);
        let t = lax.resolvent_00(u).unwrap();
        let residual = (t + 1.0 / t - u).norm();
        assert!(residual < 1e-6, "residual {residual:e}");
        // and matches the principal branch of (u - sqrt(u² - 4))/2
        let s_minus = (u - (u * u - c(4.0, 0.0)).sqrt()) / 2.0;
        assert!((t - s_minus).norm() < 1e-6);
    }

    #[test]
    fn resolvent_solves_motzkin_difference_equation() {
        // With the diagonal convention jε̄ of the truncation (the one that
        // reproduces the slide weights, checked against path sums above), the
        // difference equation reads T(u - ε̄) + 1/T(u) = u. Verified on the
        // series: T = 1/u + 1/u³ + ε̄/u⁴ + (2+ε̄²)/u⁵ + …, where the shifted
        // argument must cancel the ε̄/u² cross terms.
        let ebar = -1.0;
        let lax = TruncatedLax::new(&v_pl(), ebar, 400);
        let u = c(0.0, 3.0);
        let t_shift = lax.resolvent_00(u - c(ebar, 0.0)).unwrap();
        let t = lax.resolvent_00(u).unwrap();
        let residual = (t_shift + 1.0 / t - u).norm();
        assert!(residual < 1e-4, "residual {residual:e}");
    }

    #[test]
    fn pole_proximity_detected() {
        let lax = TruncatedLax::new(&v_pl(), 0.0, 40);
        let theta = lax.eigenvalues()[0];
        let err = lax.resolvent_00(c(theta + 1e-12, 0.0)).unwrap_err();
        assert!(matches!(err, AsymptoticsError::PoleProximity { .. }));
    }

    #[test]
    fn truncation_moments_equal_path_sums() {
        // ⟨ψ₀, L^ℓ ψ₀⟩ = limit moments, exactly once M clears the reach bound
        let v = Specialization::new(vec![(1, c(1.0, 0.0)), (2, c(0.5, 0.0))], None);
        for &ebar in &[0.0, -0.8] {
            let lax = TruncatedLax::new(&v, ebar, 60);
            let expected = limit_moments_paths(&v, ebar, 8);
            for ell in 0..=8u32 {
                let got = lax.moment(ell);
                assert!(
                    (got - expected[ell as usize]).abs()
                        <= 1e-9 * expected[ell as usize].abs().max(1.0),
                    "ebar={ebar} ell={ell}: {got} vs {}",
                    expected[ell as usize]
                );
            }
        }
    }

    #[test]
    fn complex_symbol_doubling_agrees_with_paths() {
        let v = Specialization::new(vec![(1, c(0.6, 0.3)), (2, c(-0.2, 0.45))], None);
        let lax = TruncatedLax::new(&v, -0.5, 60);
        let expected = limit_moments_paths(&v, -0.5, 6);
        for ell in 0..=6u32 {
            let got = lax.moment(ell);
            assert!(
                (got - expected[ell as usize]).abs()
                    <= 1e-9 * expected[ell as usize].abs().max(1.0),
                "ell={ell}"
            );
        }
    }

    #[test]
    fn dispersive_profile_plancherel() {
        let data = dispersive_profile(&v_pl(), -1.0, 400).unwrap();
        // top pole below the sup-norm of the symbol
        assert!(data.poles[0] <= 2.0 + 1e-6);
        // strict interlacing, descending
        for i in 0..data.zeros.len() {
            assert!(data.zeros[i] < data.poles[i]);
            if i + 1 < data.poles.len() {
                assert!(data.poles[i + 1] < data.zeros[i]);
            }
        }
        // gap quantization: top gaps near positive integers
        for (i, g) in data.gap_ratios().iter().take(5).enumerate() {
            let nearest = g.round();
            assert!(nearest >= 1.0, "gap {i} ratio {g}");
            assert!((g - nearest).abs() < 0.05, "gap {i} ratio {g}");
        }
        // profile evaluates like |c| far out
        let prof = data.profile();
        assert!((prof.eval(5.0) - 5.0).abs() < 1e-9);
    }

    #[test]
    fn dispersive_profile_of_empty_symbol() {
        let data = dispersive_profile(&Specialization::empty(), -1.0, 30).unwrap();
        assert_eq!(data.poles, vec![0.0]);
        assert!(data.zeros.is_empty());
        let prof = data.profile();
        assert!((prof.eval(-1.5) - 1.5).abs() < 1e-12);
    }

    #[test]
    fn welding_of_empty_symbol_vanishes() {
        let zero = covariance_welding(&Specialization::empty(), 0.0, 2, 2, 1e-4);
        assert!(zero.abs() < 1e-8, "{zero}");
    }

    #[test]
    fn dispersive_profile_small_perturbation() {
        // V_1 = t small: top pole close to the top eigenvalue of [[0, t], [t, -1]]
        let t = 0.05;
        let v = Specialization::new(vec![(1, c(t, 0.0))], None);
        let data = dispersive_profile(&v, -1.0, 80).unwrap();
        let top_2x2 = 0.5 * (-1.0 + (1.0 + 4.0 * t * t).sqrt());
        assert!(
            (data.poles[0] - top_2x2).abs() < 1e-3,
            "{} vs {top_2x2}",
            data.poles[0]
        );
        assert!(dispersive_profile(&v, 0.5, 40).is_err());
    }

    #[test]
    fn limit_moments_examples() {
        // Catalan at ε̄ = 0, ℓ = 4; the single slide path at ℓ = 3; T_1 = 0
        let t = limit_moments_paths(&v_pl(), 0.0, 4);
        assert!((t[4] - 2.0).abs() < 1e-13);
        for ebar in [0.3, -0.7] {
            let t = limit_moments_paths(&v_pl(), ebar, 3);
            assert!((t[3] - ebar).abs() < 1e-13);
            assert!(t[1].abs() < 1e-15);
        }
    }

    #[test]
    fn covariance_three_routes_agree_on_plancherel() {
        let v = v_pl();
        // Σ_{2,2} = 4 by all three routes
        let bd = covariance_bd(&v, 2, 2);
        assert!((bd - 4.0).abs() < 1e-8, "bd {bd}");
        let paths = covariance_paths(&v, 0.0, 2, 2);
        assert!((paths - 4.0).abs() < 1e-12, "paths {paths}");
        let weld = covariance_welding(&v, 0.0, 2, 2, 1e-4);
        assert!((weld - 4.0).abs() < 1e-5, "weld {weld}");
        // odd total degree vanishes
        assert!(covariance_bd(&v, 2, 3).abs() < 1e-10);
        assert!(covariance_paths(&v, 0.0, 2, 3).abs() < 1e-12);
        // O_1 ≡ 0 pairs to zero with anything
        for p in 1..=4 {
            assert!(covariance_paths(&v, 0.0, 1, p).abs() < 1e-12);
            assert!(covariance_welding(&v, 0.0, 1, p, 1e-4).abs() < 1e-6);
        }
        // empty symbol: all zero
        assert_eq!(covariance_bd(&Specialization::empty(), 2, 2), 0.0);
    }

    #[test]
    fn covariance_routes_agree_on_two_mode_symbol() {
        let v = Specialization::new(vec![(1, c(1.0, 0.0)), (2, c(0.5, 0.0))], None);
        for (p1, p2) in [(2u32, 2u32), (2, 3), (3, 3), (2, 4)] {
            let bd = covariance_bd(&v, p1, p2);
            let paths = covariance_paths(&v, 0.0, p1, p2);
            let weld = covariance_welding(&v, 0.0, p1, p2, 1e-4);
            assert!(
                (bd - paths).abs() < 1e-7 * bd.abs().max(1.0),
                "({p1},{p2}): bd {bd} paths {paths}"
            );
            assert!(
                (bd - weld).abs() < 1e-5 * bd.abs().max(1.0),
                "({p1},{p2}): bd {bd} weld {weld}"
            );
        }
    }

    #[test]
    fn chebyshev_diagonalization() {
        for k in 1..=5u32 {
            let var = chebyshev_variance(k);
            assert!((var - 1.0 / f64::from(k)).abs() < 1e-6, "k={k}: var {var}");
        }
        for (k1, k2) in [(1u32, 2u32), (2, 3), (3, 5), (1, 4)] {
            let cov = chebyshev_covariance(&v_pl(), k1, k2);
            assert!(cov.abs() < 1e-6, "({k1},{k2}): {cov}");
        }
    }

    #[test]
    fn chebyshev_derivative_relation() {
        // 2 d/dc T_k(c/2) = k U_{k-1}(c/2), sampled over the support
        for k in 1..=6u32 {
            for i in 0..40 {
                let cval = -1.99 + 3.98 * (i as f64) / 39.0;
                let h = 1e-6;
                let d = (chebyshev_t(k, 0.5 * (cval + h)) - chebyshev_t(k, 0.5 * (cval - h)))
                    / (2.0 * h);
                let rhs = 0.5 * f64::from(k) * chebyshev_u(k - 1, 0.5 * cval);
                assert!((2.0 * d - rhs * 2.0).abs() < 1e-5, "k={k} c={cval}");
            }
        }
    }

    #[test]
    fn mean_shift_moments_match_series_oracle() {
        // dT_ℓ/dε̄ at 0 sums sliding paths with one slide; through the
        // Markov-Krein transform the mean-shift moments satisfy
        // Σ_p X_p u^{-p}/p = S₋(u)/(u² - 4). Frozen from that series:
        // X_1 = 0, X_2 = 0, X_3 = 3, X_4 = 0, X_5 = 25, X_6 = 0.
        let x = mean_shift_moments(&v_pl(), 6, 1e-4);
        let expected = [0.0, 0.0, 0.0, 3.0, 0.0, 25.0, 0.0];
        for p in 1..=6usize {
            assert!(
                (x[p] - expected[p]).abs() < 1e-5 * expected[p].abs().max(1.0),
                "p={p}: {} vs {}",
                x[p],
                expected[p]
            );
        }
    }

    #[test]
    fn plancherel_mean_shift_closed_form() {
        assert_eq!(plancherel_mean_shift(0.0), 0.0);
        assert!((plancherel_mean_shift(2.0) + 0.25).abs() < 1e-15);
        assert_eq!(plancherel_mean_shift(2.5), 0.0);
        assert!((plancherel_mean_shift(-2.0) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn regime3_reflection_matches_direct_path_sums() {
        let v = Specialization::new(vec![(1, c(1.0, 0.0)), (2, c(0.5, 0.0))], None);
        let ebar = 1.0;
        let via_reflection = regime3_moments(&v, ebar, 6).unwrap();
        // direct evaluation of the same path sums at positive ε̄
        let direct = limit_moments_paths(&v, ebar, 6);
        for ell in 0..=6usize {
            assert!(
                (via_reflection[ell] - direct[ell]).abs() <= 1e-10 * direct[ell].abs().max(1.0),
                "ell={ell}: {} vs {}",
                via_reflection[ell],
                direct[ell]
            );
        }
        let sig_pos = regime3_covariance(&v, 1.0, 2, 2).unwrap();
        let sig_direct = covariance_paths(&v, 1.0, 2, 2);
        assert!((sig_pos - sig_direct).abs() < 1e-10 * sig_direct.abs().max(1.0));
        assert!(regime3_moments(&v, -1.0, 3).is_err());
    }

    #[test]
    fn g_up_weight_examples() {
        let params = AnisotropyParams::<Complex64>::from_ebar_hbar(0.4, 0.9).unwrap();
        // empty content list gives 1
        let one = g_up_weight::<Complex64>(&[], &[c(0.0, 2.0)], &params);
        assert!((one - c(1.0, 0.0)).norm() < 1e-15);
        // single box at content 0, one u: u(u-ε̄)/((u-ε₂)(u-ε₁))
        let u = c(0.0, 2.0);
        let got = g_up_weight::<Complex64>(&[c(0.0, 0.0)], &[u], &params);
        let ebar = params.ebar();
        let expected = u * (u - ebar) / ((u - params.eps2()) * (u - params.eps1()));
        assert!((got - expected).norm() < 1e-14);
    }

    #[test]
    fn g_up_weight_is_product_of_transition_transforms() {
        use crate::partition::{content, Partition};
        use crate::profile::profile_of;
        let params = AnisotropyParams::<Complex64>::from_ebar_hbar(0.7, 1.1).unwrap();
        let lam = Partition::new(vec![2, 1]);
        let contents: Vec<Complex64> = lam.boxes().map(|(i, j)| content(i, j, &params)).collect();
        let us = [c(0.0, 2.0), c(0.0, 3.0)];
        let got = g_up_weight::<Complex64>(&contents, &us, &params);
        // Π u_a T↑(u_a) with T↑(u) = Π_j (u - max_j) / Π_i (u - min_i) from
        // the profile extrema, exact at any u off the real axis
        let prof = profile_of(&lam, &params);
        let mut expected = c(1.0, 0.0);
        for &u in &us {
            let mut t = c(1.0, 0.0);
            for b in prof.maxima() {
                t *= u - b;
            }
            for a in prof.minima() {
                t /= u - a;
            }
            expected *= u * t;
        }
        assert!(
            (got - expected).norm() < 1e-12 * expected.norm(),
            "{got} vs {expected}"
        );
    }
}
