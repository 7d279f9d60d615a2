//! Sparse bivariate polynomials in the deformation parameters (ℏ, ε̄).
//!
//! Exponent pairs (q, m) index ℏ^q ε̄^m. No zero coefficients are stored, so
//! equality of maps is equality of polynomials.

use crate::scalar::Scalar;
use num_complex::Complex64;
use std::collections::BTreeMap;

#[derive(Clone, Debug, PartialEq)]
pub struct BiPolynomial<T: Scalar> {
    terms: BTreeMap<(u32, u32), T>,
}

impl<T: Scalar> Default for BiPolynomial<T> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<T: Scalar> BiPolynomial<T> {
    pub fn zero() -> Self {
        BiPolynomial {
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: T) -> Self {
        let mut p = Self::zero();
        p.add_term(0, 0, c);
        p
    }

    /// Adds `c · ℏ^q ε̄^m`, dropping the entry if the sum cancels.
    pub fn add_term(&mut self, q: u32, m: u32, c: T) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry((q, m));
        match entry {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().add_ref(&c);
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn coeff(&self, q: u32, m: u32) -> T {
        self.terms.get(&(q, m)).cloned().unwrap_or_else(T::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = ((u32, u32), &T)> {
        self.terms.iter().map(|(&k, v)| (k, v))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (&(q, m), c) in &rhs.terms {
            out.add_term(q, m, c.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (&(q, m), c) in &rhs.terms {
            out.add_term(q, m, c.neg_ref());
        }
        out
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let mut out = Self::zero();
        for (&(q1, m1), c1) in &self.terms {
            for (&(q2, m2), c2) in &rhs.terms {
                out.add_term(q1 + q2, m1 + m2, c1.mul_ref(c2));
            }
        }
        out
    }

    pub fn scale(&self, c: &T) -> Self {
        let mut out = Self::zero();
        for (&(q, m), v) in &self.terms {
            out.add_term(q, m, v.mul_ref(c));
        }
        out
    }

    /// Coefficientwise evaluation at numeric (ℏ, ε̄).
    pub fn eval(&self, hbar: Complex64, ebar: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (&(q, m), c) in &self.terms {
            acc += c.to_complex() * hbar.powu(q) * ebar.powu(m);
        }
        acc
    }

    /// Restriction to one ℏ-exponent, as a polynomial in ε̄ alone
    /// (coefficients indexed by m).
    pub fn hbar_slice(&self, q: u32) -> Vec<(u32, T)> {
        self.terms
            .iter()
            .filter(|((tq, _), _)| *tq == q)
            .map(|(&(_, m), c)| (m, c.clone()))
            .collect()
    }

    /// Smallest ℏ-exponent with a nonzero coefficient.
    pub fn min_hbar_power(&self) -> Option<u32> {
        self.terms.keys().map(|&(q, _)| q).min()
    }

    pub fn max_hbar_power(&self) -> Option<u32> {
        self.terms.keys().map(|&(q, _)| q).max()
    }

    pub fn max_ebar_power(&self) -> Option<u32> {
        self.terms.keys().map(|&(_, m)| m).max()
    }

    /// CLI-facing JSON: list of {"q", "m", "re", "im"} in key order; exact
    /// coefficients additionally carry their rational string form.
    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<serde_json::Value> = self
            .terms
            .iter()
            .map(|(&(q, m), c)| {
                let z = c.to_complex();
                serde_json::json!({
                    "q": q,
                    "m": m,
                    "re": z.re,
                    "im": z.im,
                    "value": c.to_string(),
                })
            })
            .collect();
        serde_json::Value::Array(rows)
    }
}
