//! Specializations: finitely supported assignments k ↦ V_k ∈ ℂ.
//!
//! A specialization evaluates the generators ρ_k and doubles as the jump
//! alphabet of the weighted path enumeration. The JSON file format is
//! `{"coeffs": {"1": [re, im], ...}, "decay": {"A": a, "r": r} | null}`.

use crate::scalar::Scalar;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Optional decay certificate |V_k| <= A r^k.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayBound {
    pub a: f64,
    pub r: f64,
}

/// Finitely supported map k ↦ V_k with all stored values nonzero.
#[derive(Clone, Debug, PartialEq)]
pub struct Specialization<T: Scalar> {
    coeffs: BTreeMap<u32, T>,
    decay: Option<DecayBound>,
}

impl<T: Scalar> Specialization<T> {
    pub fn empty() -> Self {
        Specialization {
            coeffs: BTreeMap::new(),
            decay: None,
        }
    }

    /// Drops zero values; panics on k = 0 or a violated decay bound.
    pub fn new(entries: Vec<(u32, T)>, decay: Option<DecayBound>) -> Self {
        let mut coeffs = BTreeMap::new();
        for (k, v) in entries {
            assert!(k >= 1, "specialization indices start at 1");
            if !v.is_zero() {
                coeffs.insert(k, v);
            }
        }
        if let Some(d) = decay {
            assert!(d.a > 0.0 && d.r > 0.0 && d.r < 1.0, "need A > 0, 0 < r < 1");
            for (&k, v) in &coeffs {
                assert!(
                    v.to_complex().norm() <= d.a * d.r.powi(k as i32) + 1e-12,
                    "|V_{k}| violates declared decay bound"
                );
            }
        }
        Specialization { coeffs, decay }
    }

    /// Plancherel specialization: V_1 = 1, all others zero.
    pub fn plancherel() -> Self {
        Specialization::new(vec![(1, T::one())], None)
    }

    pub fn get(&self, k: u32) -> Option<&T> {
        self.coeffs.get(&k)
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, &T)> {
        self.coeffs.iter().map(|(&k, v)| (k, v))
    }

    pub fn support(&self) -> Vec<u32> {
        self.coeffs.keys().copied().collect()
    }

    /// Largest index in the support; 0 for the empty specialization.
    pub fn max_index(&self) -> u32 {
        self.coeffs.keys().next_back().copied().unwrap_or(0)
    }

    pub fn decay(&self) -> Option<DecayBound> {
        self.decay
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// V_μ = Π_k V_k^{N'_k[μ]}; zero if some part is outside the support.
    pub fn eval_monomial(&self, mu: &crate::partition::Partition) -> T {
        let mut acc = T::one();
        for &p in mu.parts() {
            match self.coeffs.get(&p) {
                Some(v) => acc = acc.mul_ref(v),
                None => return T::zero(),
            }
        }
        acc
    }

    /// k ↦ -V_k.
    pub fn negate(&self) -> Self {
        Specialization {
            coeffs: self.coeffs.iter().map(|(&k, v)| (k, v.neg_ref())).collect(),
            decay: self.decay,
        }
    }

    pub fn to_numeric(&self) -> Specialization<Complex64> {
        Specialization {
            coeffs: self
                .coeffs
                .iter()
                .map(|(&k, v)| (k, v.to_complex()))
                .collect(),
            decay: self.decay,
        }
    }
}

impl Specialization<Complex64> {
    /// Replaces V_k (inserting or removing as needed); used by the
    /// finite-difference welding derivatives.
    pub fn with_value(&self, k: u32, v: Complex64) -> Self {
        let mut coeffs = self.coeffs.clone();
        if v.is_zero() {
            coeffs.remove(&k);
        } else {
            coeffs.insert(k, v);
        }
        Specialization {
            coeffs,
            decay: None,
        }
    }

    pub fn value_or_zero(&self, k: u32) -> Complex64 {
        self.coeffs
            .get(&k)
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }
}

#[derive(Serialize, Deserialize)]
struct SpecializationFile {
    coeffs: BTreeMap<String, [f64; 2]>,
    #[serde(default)]
    decay: Option<DecayFile>,
}

#[derive(Serialize, Deserialize)]
struct DecayFile {
    #[serde(alias = "A")]
    a: f64,
    r: f64,
}

impl Specialization<Complex64> {
    pub fn from_json(text: &str) -> Result<Self, String> {
        let file: SpecializationFile =
            serde_json::from_str(text).map_err(|e| format!("bad specialization JSON: {e}"))?;
        let mut entries = Vec::new();
        for (k, [re, im]) in file.coeffs {
            let k: u32 = k
                .parse()
                .map_err(|_| format!("bad coefficient index {k:?}"))?;
            if k == 0 {
                return Err("coefficient indices start at 1".into());
            }
            entries.push((k, Complex64::new(re, im)));
        }
        let decay = file.decay.map(|d| DecayBound { a: d.a, r: d.r });
        if let Some(d) = decay {
            if !(d.a > 0.0 && d.r > 0.0 && d.r < 1.0) {
                return Err("decay bound needs A > 0 and 0 < r < 1".into());
            }
            for &(k, v) in &entries {
                if v.norm() > d.a * d.r.powi(k as i32) + 1e-12 {
                    return Err(format!("|V_{k}| violates the declared decay bound"));
                }
            }
        }
        Ok(Specialization::new(entries, decay))
    }

    pub fn to_json(&self) -> String {
        let file = SpecializationFile {
            coeffs: self
                .coeffs
                .iter()
                .map(|(k, v)| (k.to_string(), [v.re, v.im]))
                .collect(),
            decay: self.decay.map(|d| DecayFile { a: d.a, r: d.r }),
        };
        serde_json::to_string_pretty(&file).expect("serialization cannot fail")
    }
}
