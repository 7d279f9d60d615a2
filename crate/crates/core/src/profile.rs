//! Anisotropic partition profiles and their transition-measure transforms.
//!
//! A profile is stored by its interlacing local extrema: the minima are the
//! scaled contents of the addable cells, the maxima are the contents of the
//! removable cells shifted by ε̄. The transition measure moments T_ℓ↑, the
//! linear statistics O_p, and the moment-level Markov-Krein transforms between
//! them are all series manipulations on these extrema.

use crate::params::AnisotropyParams;
use crate::partition::{content, Partition};
use crate::scalar::Scalar;
use crate::series::{series_exp, series_log};
use std::cmp::Ordering;

/// Local extrema of a slope ±1 piecewise-linear profile, ascending, with
/// strict interlacing min₀ < max₀ < min₁ < … < min_last.
#[derive(Clone, Debug, PartialEq)]
pub struct InterlacingProfile<T: Scalar> {
    minima: Vec<T>,
    maxima: Vec<T>,
}

/// Moments of a probability measure, indexed 0..=L with values[0] = 1.
pub type MomentSequence<T> = Vec<T>;

#[derive(Debug, Clone, PartialEq)]
pub enum ProfileError {
    /// Extrema were not real or failed strict interlacing.
    Interlacing,
    /// Area recomputed from extrema disagreed with 2ℏ|λ|.
    AreaMismatch { expected: f64, got: f64 },
    /// Moment transforms need values[0] = 1.
    NotNormalized,
}

impl std::fmt::Display for ProfileError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ProfileError::Interlacing => write!(f, "extrema must be real and strictly interlacing"),
            ProfileError::AreaMismatch { expected, got } => {
                write!(
                    f,
                    "area consistency failed: 2h|lambda| = {expected}, extrema give {got}"
                )
            }
            ProfileError::NotNormalized => write!(f, "moment sequence must start with 1"),
        }
    }
}

impl std::error::Error for ProfileError {}

impl<T: Scalar> InterlacingProfile<T> {
    /// Validates counts (|minima| = |maxima| + 1) and strict interlacing.
    pub fn new(mut minima: Vec<T>, mut maxima: Vec<T>) -> Result<Self, ProfileError> {
        if minima.len() != maxima.len() + 1 {
            return Err(ProfileError::Interlacing);
        }
        let sort_real = |v: &mut Vec<T>| -> Result<(), ProfileError> {
            if v.iter().any(|x| !x.is_real()) {
                return Err(ProfileError::Interlacing);
            }
            v.sort_by(|a, b| a.real_cmp(b).unwrap_or(Ordering::Equal));
            Ok(())
        };
        sort_real(&mut minima)?;
        sort_real(&mut maxima)?;
        for i in 0..maxima.len() {
            let lo = minima[i].real_cmp(&maxima[i]) == Some(Ordering::Less);
            let hi = maxima[i].real_cmp(&minima[i + 1]) == Some(Ordering::Less);
            if !lo || !hi {
                return Err(ProfileError::Interlacing);
            }
        }
        Ok(InterlacingProfile { minima, maxima })
    }

    pub fn minima(&self) -> &[T] {
        &self.minima
    }

    pub fn maxima(&self) -> &[T] {
        &self.maxima
    }

    /// O_p = Σ minᵖ - Σ maxᵖ for p = 1..=order, with O_0 slot unused (zero).
    /// These are the power sums driving every series transform below.
    pub fn power_sums(&self, order: usize) -> Vec<T> {
        let mut sums = vec![T::zero(); order + 1];
        let mut pow_min: Vec<T> = self.minima.iter().map(|_| T::one()).collect();
        let mut pow_max: Vec<T> = self.maxima.iter().map(|_| T::one()).collect();
        for entry in sums.iter_mut().skip(1) {
            let mut acc = T::zero();
            for (p, x) in pow_min.iter_mut().zip(&self.minima) {
                *p = p.mul_ref(x);
                acc = acc.add_ref(p);
            }
            for (p, x) in pow_max.iter_mut().zip(&self.maxima) {
                *p = p.mul_ref(x);
                acc = acc.sub_ref(p);
            }
            *entry = acc;
        }
        sums
    }

    /// Reconstructs f(c) from the extrema by the slope ±1 rule.
    pub fn eval(&self, c: f64) -> f64 {
        // Right of the last minimum the profile is f(c) = c - s with
        // s = sum(min) - sum(max); walking left flips the slope at each
        // extremum in descending order.
        let mut xs: Vec<(f64, i8)> = self
            .minima
            .iter()
            .map(|x| (x.to_complex().re, 1i8))
            .chain(self.maxima.iter().map(|x| (x.to_complex().re, -1i8)))
            .collect();
        xs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        let s: f64 = xs.iter().map(|&(x, sign)| f64::from(sign) * x).sum();
        let mut value = {
            let anchor = xs.last().map(|&(x, _)| x).unwrap_or(0.0);
            anchor - s
        };
        let mut slope = 1.0;
        let mut at = xs.last().map(|&(x, _)| x).unwrap_or(0.0);
        if c >= at {
            return value + (c - at);
        }
        for &(x, _) in xs.iter().rev() {
            if c >= x {
                return value - slope * (at - c);
            }
            value -= slope * (at - x);
            at = x;
            slope = -slope;
        }
        value - slope * (at - c)
    }
}

/// Profile of λ: minima at addable-cell contents, maxima at removable-cell
/// contents shifted by ε̄ = ε₁ + ε₂.
pub fn profile_of<T: Scalar>(
    lambda: &Partition,
    params: &AnisotropyParams<T>,
) -> InterlacingProfile<T> {
    let ebar = params.ebar();
    let minima = lambda
        .addable_cells()
        .into_iter()
        .map(|(i, j)| content(i, j, params))
        .collect();
    let maxima = lambda
        .removable_cells()
        .into_iter()
        .map(|(i, j)| content(i, j, params).add_ref(&ebar))
        .collect();
    InterlacingProfile::new(minima, maxima).expect("partition profile always interlaces")
}

/// Area enclosed above |c|, which must equal both 2ℏ|λ| and the second power
/// sum of the extrema.
pub fn profile_area<T: Scalar>(
    lambda: &Partition,
    params: &AnisotropyParams<T>,
) -> Result<T, ProfileError> {
    let expected = params.hbar().scale_int(2 * i64::from(lambda.size()));
    let from_extrema = profile_of(lambda, params).power_sums(2)[2].clone();
    let lhs = expected.to_complex();
    let rhs = from_extrema.to_complex();
    if (lhs - rhs).norm() > 1e-9 * 1f64.max(lhs.norm()) {
        return Err(ProfileError::AreaMismatch {
            expected: lhs.re,
            got: rhs.re,
        });
    }
    Ok(expected)
}

/// Moments T_ℓ↑ for ℓ = 0..=order of the transition measure of a profile:
/// the u^{-ℓ-1} expansion of Π(u - max) / Π(u - min).
pub fn transition_moments<T: Scalar>(
    profile: &InterlacingProfile<T>,
    order: usize,
) -> MomentSequence<T> {
    let sums = profile.power_sums(order);
    moments_from_power_sums(&sums)
}

/// Linear statistics O_p = Σ minᵖ - Σ maxᵖ for p = 1..=order (index 0 unused).
pub fn linear_statistics<T: Scalar>(profile: &InterlacingProfile<T>, order: usize) -> Vec<T> {
    profile.power_sums(order)
}

/// u·T↑(u) = exp( Σ_p O_p u^{-p} / p ): exponentiate the power-sum series.
fn moments_from_power_sums<T: Scalar>(sums: &[T]) -> MomentSequence<T> {
    let log_series: Vec<T> = sums
        .iter()
        .enumerate()
        .map(|(p, s)| {
            if p == 0 {
                T::zero()
            } else {
                s.div_ref(&T::from_int(p as i64))
            }
        })
        .collect();
    series_exp(&log_series)
}

/// Same moments from the content product over the boxes of λ:
/// u·T↑(u) = Π_{box} (u-c)(u-c-ε̄) / ((u-c-ε₂)(u-c-ε₁)).
pub fn transition_moments_content_product<T: Scalar>(
    lambda: &Partition,
    params: &AnisotropyParams<T>,
    order: usize,
) -> MomentSequence<T> {
    // log(u T) = -Σ_p u^{-p}/p Σ_box [ c^p + (c+ε̄)^p - (c+ε₂)^p - (c+ε₁)^p ]
    let ebar = params.ebar();
    let mut sums = vec![T::zero(); order + 1];
    for (i, j) in lambda.boxes() {
        let c = content(i, j, params);
        let shifts = [
            c.clone(),
            c.add_ref(&ebar),
            c.add_ref(params.eps2()),
            c.add_ref(params.eps1()),
        ];
        let mut pows = [T::one(), T::one(), T::one(), T::one()];
        for entry in sums.iter_mut().skip(1) {
            for (pow, shift) in pows.iter_mut().zip(&shifts) {
                *pow = pow.mul_ref(shift);
            }
            // (c+ε₂)^p + (c+ε₁)^p - c^p - (c+ε̄)^p
            let delta = pows[2]
                .add_ref(&pows[3])
                .sub_ref(&pows[0])
                .sub_ref(&pows[1]);
            *entry = entry.add_ref(&delta);
        }
    }
    moments_from_power_sums(&sums)
}

/// O_p from T_ℓ: O_n = n·T_n - Σ_{k=1}^{n-1} O_k T_{n-k}. Output index 0 is
/// zero; requires t[0] = 1.
pub fn kmk_o_from_t<T: Scalar>(t: &[T]) -> Result<Vec<T>, ProfileError> {
    if t.is_empty() || t[0] != T::one() {
        return Err(ProfileError::NotNormalized);
    }
    let log_series = series_log(t);
    Ok(log_series
        .iter()
        .enumerate()
        .map(|(p, a)| a.scale_int(p as i64))
        .collect())
}

/// T_ℓ from O_p (inverse of [`kmk_o_from_t`] to the common truncation order).
pub fn kmk_t_from_o<T: Scalar>(o: &[T]) -> Vec<T> {
    let log_series: Vec<T> = o
        .iter()
        .enumerate()
        .map(|(p, s)| {
            if p == 0 {
                T::zero()
            } else {
                s.div_ref(&T::from_int(p as i64))
            }
        })
        .collect();
    series_exp(&log_series)
}

/// (c, f(c)) rows for a caller grid, reconstructed by the slope ±1 rule.
pub fn profile_grid<T: Scalar>(profile: &InterlacingProfile<T>, grid: &[f64]) -> Vec<(f64, f64)> {
    grid.iter().map(|&c| (c, profile.eval(c))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{approx_eq_rel, Rat};
    use num_complex::Complex64;

    fn num_params(ebar: f64, hbar: f64) -> AnisotropyParams<Complex64> {
        AnisotropyParams::from_ebar_hbar(ebar, hbar).unwrap()
    }

    #[test]
    fn empty_profile_is_absolute_value() {
        let p = num_params(0.0, 1.0);
        let prof = profile_of(&Partition::empty(), &p);
        assert_eq!(prof.minima().len(), 1);
        assert!(prof.minima()[0].is_zero());
        assert!(prof.maxima().is_empty());
        assert_eq!(prof.eval(3.0), 3.0);
        assert_eq!(prof.eval(-2.5), 2.5);
    }

    #[test]
    fn single_box_extrema() {
        let p = num_params(0.0, 1.0);
        let prof = profile_of(&Partition::new(vec![1]), &p);
        let mins: Vec<f64> = prof.minima().iter().map(|x| x.re).collect();
        let maxs: Vec<f64> = prof.maxima().iter().map(|x| x.re).collect();
        assert_eq!(mins, vec![-1.0, 1.0]);
        assert_eq!(maxs, vec![0.0]);
        assert_eq!(prof.eval(0.0), 2.0);
    }

    #[test]
    fn two_one_extrema_generic() {
        let p = AnisotropyParams::<Rat>::from_eps_ints(2, 1, -1, 1);
        let prof = profile_of(&Partition::new(vec![2, 1]), &p);
        let mins: Vec<Rat> = prof.minima().to_vec();
        // {2ε₁, ε₁+ε₂, 2ε₂} = {4, 1, -2}
        assert_eq!(
            mins,
            vec![Rat::from_int(-2), Rat::from_int(1), Rat::from_int(4)]
        );
        // {2ε₁+ε₂, ε₁+2ε₂} = {3, 0}
        assert_eq!(
            prof.maxima().to_vec(),
            vec![Rat::from_int(0), Rat::from_int(3)]
        );
    }

    #[test]
    fn area_identity() {
        assert!(profile_area(&Partition::empty(), &num_params(0.3, 0.9))
            .unwrap()
            .is_zero());
        let a = profile_area(&Partition::new(vec![1]), &num_params(0.0, 1.0)).unwrap();
        assert_eq!(a.re, 2.0);
        let a = profile_area(&Partition::new(vec![3, 2]), &num_params(-0.4, 0.5)).unwrap();
        assert!((a.re - 5.0).abs() < 1e-12);
    }

    #[test]
    fn transition_moments_single_box() {
        // (u-ε̄)/((u-ε₁)(u-ε₂)): T₀=1, T₁=0, T₂=ℏ, T₃=ℏε̄
        let p = AnisotropyParams::<Rat>::from_eps_ints(2, 1, -1, 1);
        let prof = profile_of(&Partition::new(vec![1]), &p);
        let t = transition_moments(&prof, 3);
        assert_eq!(t[0], Rat::one());
        assert_eq!(t[1], Rat::zero());
        assert_eq!(t[2], p.hbar());
        assert_eq!(t[3], p.hbar().mul_ref(&p.ebar()));
    }

    #[test]
    fn empty_partition_moments_are_delta() {
        let p = num_params(0.4, 1.2);
        let t = transition_moments(&profile_of(&Partition::empty(), &p), 6);
        assert_eq!(t[0].re, 1.0);
        for tl in t.iter().skip(1) {
            assert!(tl.is_zero());
        }
    }

    #[test]
    fn t2_is_hbar_times_size() {
        for d in 0..=6 {
            for lam in crate::partition::partitions_of_size(d) {
                let p = num_params(0.3, 0.7);
                let t = transition_moments(&profile_of(&lam, &p), 2);
                assert!(approx_eq_rel(
                    t[2],
                    Complex64::new(0.7 * f64::from(d), 0.0),
                    1e-12
                ));
            }
        }
    }

    #[test]
    fn content_product_matches_profile_route_exactly() {
        // generic rational parameter points
        let param_list = [
            AnisotropyParams::<Rat>::from_eps_ints(2, 1, -1, 1),
            AnisotropyParams::<Rat>::from_eps_ints(1, 3, -5, 2),
            AnisotropyParams::<Rat>::from_eps_ints(7, 4, -2, 3),
        ];
        for d in 0..=6 {
            for lam in crate::partition::partitions_of_size(d) {
                for p in &param_list {
                    let a = transition_moments(&profile_of(&lam, p), 8);
                    let b = transition_moments_content_product(&lam, p, 8);
                    assert_eq!(
                        a,
                        b,
                        "mismatch for {lam} at eps=({}, {})",
                        p.eps1(),
                        p.eps2()
                    );
                }
            }
        }
    }

    #[test]
    fn content_product_matches_profile_route_numeric_sweep() {
        // ten pseudo-random parameter points from the fixed counter stream
        let mut mix = |i: u64| {
            let z = crate::sampler::splitmix64(2718, i);
            (z >> 11) as f64 / (1u64 << 53) as f64
        };
        for trial in 0..10u64 {
            let ebar = 2.0 * mix(2 * trial) - 1.0;
            let hbar = 0.3 + 1.7 * mix(2 * trial + 1);
            let p = AnisotropyParams::<Complex64>::from_ebar_hbar(ebar, hbar).unwrap();
            for d in 0..=8u32 {
                for lam in crate::partition::partitions_of_size(d) {
                    let a = transition_moments(&profile_of(&lam, &p), 10);
                    let b = transition_moments_content_product(&lam, &p, 10);
                    for (x, y) in a.iter().zip(&b) {
                        assert!(
                            (x - y).norm() <= 1e-10 * y.norm().max(1.0),
                            "{lam} at ({ebar:.4},{hbar:.4})"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn linear_statistics_basics() {
        let p = num_params(0.0, 1.0);
        let prof = profile_of(&Partition::new(vec![1]), &p);
        let o = linear_statistics(&prof, 2);
        assert!(o[1].is_zero());
        assert_eq!(o[2].re, 2.0); // 2ℏ

        let prof = profile_of(&Partition::new(vec![2, 1]), &p);
        let o = linear_statistics(&prof, 2);
        assert!(o[1].norm() < 1e-12);
        assert!((o[2].re - 6.0).abs() < 1e-12); // 2ℏ|λ| = 6
    }

    #[test]
    fn kmk_known_polynomials() {
        // T = (1, t1, t2, t3, t4) symbolic check at rational sample values
        let t = vec![
            Rat::one(),
            Rat::from_ratio(1, 3),
            Rat::from_ratio(-2, 5),
            Rat::from_int(2),
            Rat::from_ratio(7, 2),
        ];
        let o = kmk_o_from_t(&t).unwrap();
        let (t1, t2, t3, t4) = (&t[1], &t[2], &t[3], &t[4]);
        assert_eq!(o[1], t1.clone());
        assert_eq!(o[2], t2.scale_int(2).sub_ref(&t1.mul_ref(t1)));
        let t1sq = t1.mul_ref(t1);
        assert_eq!(
            o[3],
            t3.scale_int(3)
                .sub_ref(&t1.mul_ref(t2).scale_int(3))
                .add_ref(&t1sq.mul_ref(t1))
        );
        let expected4 = t4
            .scale_int(4)
            .sub_ref(&t1.mul_ref(t3).scale_int(4))
            .sub_ref(&t2.mul_ref(t2).scale_int(2))
            .add_ref(&t1sq.mul_ref(t2).scale_int(4))
            .sub_ref(&t1sq.mul_ref(&t1sq));
        assert_eq!(o[4], expected4);
    }

    #[test]
    fn kmk_round_trip() {
        let t = vec![
            Rat::one(),
            Rat::from_ratio(2, 7),
            Rat::from_int(1),
            Rat::from_ratio(-3, 4),
            Rat::from_int(5),
            Rat::from_ratio(1, 9),
            Rat::from_int(-2),
        ];
        let o = kmk_o_from_t(&t).unwrap();
        assert_eq!(kmk_t_from_o(&o), t);

        // O ≡ 0 gives the delta moments
        let o = vec![Rat::zero(); 6];
        let t = kmk_t_from_o(&o);
        assert_eq!(t[0], Rat::one());
        assert!(t[1..].iter().all(|x| x.is_zero()));
    }

    #[test]
    fn kmk_rejects_unnormalized() {
        let t = vec![Rat::from_int(2), Rat::zero()];
        assert!(kmk_o_from_t(&t).is_err());
    }

    #[test]
    fn grid_reconstruction_hits_extrema() {
        let p = num_params(0.0, 1.0);
        let prof = profile_of(&Partition::new(vec![2, 1]), &p);
        // minima at -2, 0, 2; maxima at ±1; enclosed area 2ℏ|λ| = 6
        assert!((prof.eval(-2.0) - 2.0).abs() < 1e-12);
        assert!((prof.eval(0.0) - 2.0).abs() < 1e-12);
        assert!((prof.eval(2.0) - 2.0).abs() < 1e-12);
        assert!((prof.eval(1.0) - 3.0).abs() < 1e-12);
        assert!((prof.eval(-1.0) - 3.0).abs() < 1e-12);
        assert!((prof.eval(3.5) - 3.5).abs() < 1e-12);
        // trapezoid area of f - |c| over a fine grid reproduces 2ℏ|λ|
        let n = 4000;
        let (a, b) = (-3.0, 3.0);
        let h = (b - a) / n as f64;
        let mut area = 0.0;
        for i in 0..=n {
            let c = a + i as f64 * h;
            let w = if i == 0 || i == n { 0.5 } else { 1.0 };
            area += w * (prof.eval(c) - c.abs()) * h;
        }
        assert!((area - 6.0).abs() < 1e-6, "area {area}");
    }
}
