//! Scalar arithmetic in two modes: exact Gaussian rationals and complex doubles.
//!
//! A whole computation runs in one mode, selected by instantiating the generic
//! engines with either [`Rat`] or [`num_complex::Complex64`]. Exact mode is
//! closed under `+`, `-`, `*`, `/` (nonzero divisor); numeric mode carries no
//! exactness claim.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Common interface of the two coefficient domains.
///
/// Methods take references so that big-rational implementations avoid clones
/// in the hot enumeration loops.
pub trait Scalar: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_int(n: i64) -> Self;
    /// Exact ratio where representable; `num/den` in doubles otherwise.
    fn from_ratio(num: i64, den: i64) -> Self;

    fn is_zero(&self) -> bool;
    fn add_ref(&self, rhs: &Self) -> Self;
    fn sub_ref(&self, rhs: &Self) -> Self;
    fn mul_ref(&self, rhs: &Self) -> Self;
    /// Division. Panics on an exact zero divisor in rational mode.
    fn div_ref(&self, rhs: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    fn conj(&self) -> Self;

    /// Lossy view used for reporting and cross-mode comparisons.
    fn to_complex(&self) -> Complex64;

    /// Order by real part; `None` if either operand has a nonzero imaginary
    /// part (profile extrema must be real).
    fn real_cmp(&self, rhs: &Self) -> Option<Ordering>;

    fn is_real(&self) -> bool;

    /// Exact square root of a nonnegative real scalar when one exists in the
    /// domain; `None` if the domain cannot represent it.
    fn real_sqrt(&self) -> Option<Self>;

    fn scale_int(&self, n: i64) -> Self {
        self.mul_ref(&Self::from_int(n))
    }
}

impl Scalar for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn from_int(n: i64) -> Self {
        Complex64::new(n as f64, 0.0)
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        Complex64::new(num as f64 / den as f64, 0.0)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn add_ref(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub_ref(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn div_ref(&self, rhs: &Self) -> Self {
        self / rhs
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn conj(&self) -> Self {
        Complex64::new(self.re, -self.im)
    }
    fn to_complex(&self) -> Complex64 {
        *self
    }
    fn real_cmp(&self, rhs: &Self) -> Option<Ordering> {
        self.re.partial_cmp(&rhs.re)
    }
    fn is_real(&self) -> bool {
        self.im == 0.0
    }
    fn real_sqrt(&self) -> Option<Self> {
        if self.im == 0.0 && self.re >= 0.0 {
            Some(Complex64::new(self.re.sqrt(), 0.0))
        } else {
            None
        }
    }
}

/// Gaussian rational `re + im*i` with big-rational components.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Rat {
    pub re: BigRational,
    pub im: BigRational,
}

impl Rat {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Rat { re, im }
    }

    pub fn real(re: BigRational) -> Self {
        Rat {
            re,
            im: BigRational::zero(),
        }
    }

    pub fn from_ints(num: i64, den: i64) -> Self {
        Rat::real(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    /// Exact binary rational of an f64 pair (every finite double is rational).
    pub fn from_f64_pair(re: f64, im: f64) -> Option<Self> {
        Some(Rat {
            re: BigRational::from_float(re)?,
            im: BigRational::from_float(im)?,
        })
    }

    /// `a/b + (c/d)i` from machine integers.
    pub fn gauss(re_num: i64, re_den: i64, im_num: i64, im_den: i64) -> Self {
        Rat {
            re: BigRational::new(BigInt::from(re_num), BigInt::from(re_den)),
            im: BigRational::new(BigInt::from(im_num), BigInt::from(im_den)),
        }
    }

    fn norm_sq_rat(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else if self.re.is_zero() {
            write!(f, "{}i", self.im)
        } else {
            write!(
                f,
                "{}{}{}i",
                self.re,
                if self.im.is_negative() { "" } else { "+" },
                self.im
            )
        }
    }
}

/// Integer square root; `None` if `n` is not a perfect square.
fn bigint_sqrt_exact(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    if &r * &r == *n {
        Some(r)
    } else {
        None
    }
}

impl Scalar for Rat {
    fn zero() -> Self {
        Rat::real(BigRational::zero())
    }
    fn one() -> Self {
        Rat::real(BigRational::one())
    }
    fn from_int(n: i64) -> Self {
        Rat::real(BigRational::from(BigInt::from(n)))
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        Rat::from_ints(num, den)
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    fn add_ref(&self, rhs: &Self) -> Self {
        Rat {
            re: &self.re + &rhs.re,
            im: &self.im + &rhs.im,
        }
    }
    fn sub_ref(&self, rhs: &Self) -> Self {
        Rat {
            re: &self.re - &rhs.re,
            im: &self.im - &rhs.im,
        }
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        Rat {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
    fn div_ref(&self, rhs: &Self) -> Self {
        let d = rhs.norm_sq_rat();
        assert!(!d.is_zero(), "exact division by zero");
        Rat {
            re: (&self.re * &rhs.re + &self.im * &rhs.im) / &d,
            im: (&self.im * &rhs.re - &self.re * &rhs.im) / &d,
        }
    }
    fn neg_ref(&self) -> Self {
        Rat {
            re: -self.re.clone(),
            im: -self.im.clone(),
        }
    }
    fn conj(&self) -> Self {
        Rat {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }
    fn to_complex(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }
    fn real_cmp(&self, rhs: &Self) -> Option<Ordering> {
        if self.im.is_zero() && rhs.im.is_zero() {
            Some(self.re.cmp(&rhs.re))
        } else {
            None
        }
    }
    fn is_real(&self) -> bool {
        self.im.is_zero()
    }
    fn real_sqrt(&self) -> Option<Self> {
        if !self.im.is_zero() || self.re.is_negative() {
            return None;
        }
        let num = bigint_sqrt_exact(self.re.numer())?;
        let den = bigint_sqrt_exact(self.re.denom())?;
        Some(Rat::real(BigRational::new(num, den)))
    }
}

macro_rules! rat_binop {
    ($trait:ident, $method:ident, $scalar_method:ident) => {
        impl $trait for Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                self.$scalar_method(&rhs)
            }
        }
        impl<'a> $trait<&'a Rat> for &'a Rat {
            type Output = Rat;
            fn $method(self, rhs: &'a Rat) -> Rat {
                self.$scalar_method(rhs)
            }
        }
    };
}

rat_binop!(Add, add, add_ref);
rat_binop!(Sub, sub, sub_ref);
rat_binop!(Mul, mul, mul_ref);
rat_binop!(Div, div, div_ref);

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        self.neg_ref()
    }
}

/// `|a - b| <= tol * max(1, |a|, |b|)` on the complex views.
pub fn approx_eq_rel(a: Complex64, b: Complex64, tol: f64) -> bool {
    let scale = 1f64.max(a.norm()).max(b.norm());
    (a - b).norm() <= tol * scale
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_field_ops() {
        let a = Rat::gauss(1, 2, -3, 4);
        let b = Rat::gauss(2, 3, 5, 7);
        let prod = a.mul_ref(&b);
        let back = prod.div_ref(&b);
        assert_eq!(back, a);
        assert_eq!(a.add_ref(&a.neg_ref()), Rat::zero());
    }

    #[test]
    fn conjugation_is_involutive() {
        let a = Rat::gauss(5, 3, 2, 9);
        assert_eq!(a.conj().conj(), a);
        let z = Complex64::new(1.5, -2.5);
        assert_eq!(z.conj().conj(), z);
    }

    #[test]
    fn exact_sqrt_of_perfect_square() {
        let nine = Rat::from_ints(9, 4);
        assert_eq!(nine.real_sqrt(), Some(Rat::from_ints(3, 2)));
        assert_eq!(Rat::from_ints(2, 1).real_sqrt(), None);
    }
}
