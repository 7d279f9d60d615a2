//! Deformation parameters (ε̄, ℏ) and the derived pair ε₂ < 0 < ε₁.
//!
//! The conversions are ε̄ = ε₁ + ε₂, ℏ = -ε₁ε₂, α = ε₁/(-ε₂). Numeric mode
//! solves the quadratic; exact mode either takes (ε₁, ε₂) directly or succeeds
//! only when ε̄² + 4ℏ is a perfect rational square.

use crate::scalar::{Rat, Scalar};
use num_complex::Complex64;
use std::cmp::Ordering;
use std::fmt;

/// Error for invalid parameter values.
#[derive(Debug, Clone, PartialEq)]
pub enum ParamsError {
    NonPositiveHbar,
    /// (ε₁, ε₂) must satisfy ε₂ < 0 < ε₁.
    SignPattern,
    /// ε̄² + 4ℏ is not a perfect square in the exact domain.
    NoExactRoot,
    /// Extrema or parameter values were not real.
    NotReal,
}

impl fmt::Display for ParamsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamsError::NonPositiveHbar => write!(f, "hbar must be strictly positive"),
            ParamsError::SignPattern => write!(f, "need eps2 < 0 < eps1"),
            ParamsError::NoExactRoot => {
                write!(f, "ebar^2 + 4*hbar has no square root in the exact domain")
            }
            ParamsError::NotReal => write!(f, "parameter values must be real"),
        }
    }
}

impl std::error::Error for ParamsError {}

/// The pair (ε₁, ε₂) with ε₂ < 0 < ε₁; everything else is derived.
#[derive(Clone, Debug, PartialEq)]
pub struct AnisotropyParams<T: Scalar> {
    eps1: T,
    eps2: T,
}

impl<T: Scalar> AnisotropyParams<T> {
    /// Builds from the deformed pair directly, checking the sign pattern.
    pub fn from_eps(eps1: T, eps2: T) -> Result<Self, ParamsError> {
        if !eps1.is_real() || !eps2.is_real() {
            return Err(ParamsError::NotReal);
        }
        let zero = T::zero();
        let pos = eps1.real_cmp(&zero) == Some(Ordering::Greater);
        let neg = eps2.real_cmp(&zero) == Some(Ordering::Less);
        if !pos || !neg {
            return Err(ParamsError::SignPattern);
        }
        Ok(AnisotropyParams { eps1, eps2 })
    }

    /// Solves ε₁ = (ε̄ + √(ε̄²+4ℏ))/2, ε₂ = ε̄ - ε₁. Requires ℏ > 0 and, in
    /// the exact domain, a representable square root.
    pub fn from_ebar_hbar_in(ebar: T, hbar: T) -> Result<Self, ParamsError> {
        if hbar.real_cmp(&T::zero()) != Some(Ordering::Greater) {
            return Err(ParamsError::NonPositiveHbar);
        }
        let disc = ebar.mul_ref(&ebar).add_ref(&hbar.scale_int(4));
        let root = disc.real_sqrt().ok_or(ParamsError::NoExactRoot)?;
        let eps1 = ebar.add_ref(&root).div_ref(&T::from_int(2));
        let eps2 = ebar.sub_ref(&eps1);
        AnisotropyParams::from_eps(eps1, eps2)
    }

    pub fn eps1(&self) -> &T {
        &self.eps1
    }

    pub fn eps2(&self) -> &T {
        &self.eps2
    }

    /// ε̄ = ε₁ + ε₂.
    pub fn ebar(&self) -> T {
        self.eps1.add_ref(&self.eps2)
    }

    /// ℏ = -ε₁ε₂.
    pub fn hbar(&self) -> T {
        self.eps1.mul_ref(&self.eps2).neg_ref()
    }

    /// α = ε₁/(-ε₂), the classical Jack parameter.
    pub fn alpha(&self) -> T {
        self.eps1.div_ref(&self.eps2.neg_ref())
    }

    pub fn to_numeric(&self) -> AnisotropyParams<Complex64> {
        AnisotropyParams {
            eps1: self.eps1.to_complex(),
            eps2: self.eps2.to_complex(),
        }
    }
}

impl AnisotropyParams<Complex64> {
    /// Numeric-mode constructor from real (ε̄, ℏ).
    pub fn from_ebar_hbar(ebar: f64, hbar: f64) -> Result<Self, ParamsError> {
        Self::from_ebar_hbar_in(Complex64::new(ebar, 0.0), Complex64::new(hbar, 0.0))
    }

    /// From (α, ℏ): ε₁ = √(αℏ), ε₂ = -√(ℏ/α).
    pub fn from_alpha_hbar(alpha: f64, hbar: f64) -> Result<Self, ParamsError> {
        if alpha <= 0.0 {
            return Err(ParamsError::SignPattern);
        }
        if hbar <= 0.0 {
            return Err(ParamsError::NonPositiveHbar);
        }
        Self::from_eps(
            Complex64::new((alpha * hbar).sqrt(), 0.0),
            Complex64::new(-(hbar / alpha).sqrt(), 0.0),
        )
    }

    pub fn ebar_f64(&self) -> f64 {
        self.ebar().re
    }

    pub fn hbar_f64(&self) -> f64 {
        self.hbar().re
    }
}

impl AnisotropyParams<Rat> {
    /// Exact constructor from machine-integer ratios for (ε₁, ε₂).
    pub fn from_eps_ints(e1_num: i64, e1_den: i64, e2_num: i64, e2_den: i64) -> Self {
        AnisotropyParams::from_eps(
            Rat::from_ints(e1_num, e1_den),
            Rat::from_ints(e2_num, e2_den),
        )
        .expect("invalid exact parameters")
    }
}
