//! Exact small-scale sampling from Jack measures and k-statistics.
//!
//! Tables hold probabilities for every partition up to a size cutoff plus the
//! remaining tail mass; draws are inverse-CDF over the canonical order with a
//! counter-based SplitMix64 stream, so runs are bit-reproducible across
//! platforms. Tail hits are resampled and logged; the induced bias is bounded
//! by the tail mass.

use crate::fock::{jack_basis, jack_measure_prob_with_basis, FockError};
use crate::params::AnisotropyParams;
use crate::partition::{partitions_of_size, Partition};
use crate::profile::{linear_statistics, profile_of, transition_moments};
use crate::specialization::Specialization;
use num_complex::Complex64;

#[derive(Debug, Clone, PartialEq)]
pub enum SamplerError {
    /// A probability fell below -1e-12.
    NegativeProbability {
        lambda: String,
        value: f64,
    },
    /// The tail mass exceeds the caller's sampling threshold.
    TailTooHeavy {
        tail: f64,
        threshold: f64,
    },
    Fock(String),
}

impl std::fmt::Display for SamplerError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SamplerError::NegativeProbability { lambda, value } => {
                write!(f, "negative probability {value:e} for {lambda}")
            }
            SamplerError::TailTooHeavy { tail, threshold } => {
                write!(
                    f,
                    "tail mass {tail:e} above sampling threshold {threshold:e}"
                )
            }
            SamplerError::Fock(msg) => write!(f, "{msg}"),
        }
    }
}

impl std::error::Error for SamplerError {}

impl From<FockError> for SamplerError {
    fn from(e: FockError) -> Self {
        SamplerError::Fock(e.to_string())
    }
}

/// Probabilities for all |λ| ≤ cutoff in canonical order plus the tail mass.
#[derive(Clone, Debug)]
pub struct MeasureTable {
    rows: Vec<(Partition, f64)>,
    pub tail_mass: f64,
    pub cutoff: u32,
}

impl MeasureTable {
    pub fn rows(&self) -> &[(Partition, f64)] {
        &self.rows
    }

    pub fn prob(&self, lambda: &Partition) -> Option<f64> {
        self.rows.iter().find(|(l, _)| l == lambda).map(|(_, p)| *p)
    }

    /// Table mass by partition size, for Poissonization checks.
    pub fn mass_by_size(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.cutoff as usize + 1];
        for (lam, p) in &self.rows {
            out[lam.size() as usize] += p;
        }
        out
    }
}

/// Tabulates the diagonal Jack measure for all |λ| ≤ cutoff from the Fock
/// eigenvector route.
pub fn build_table(
    v: &Specialization<Complex64>,
    params: &AnisotropyParams<Complex64>,
    cutoff: u32,
) -> Result<MeasureTable, SamplerError> {
    let mut rows = Vec::new();
    let mut total = 0.0;
    for d in 0..=cutoff {
        let basis = jack_basis(d, params, 0)?;
        for lam in partitions_of_size(d) {
            let p = jack_measure_prob_with_basis(&basis, &lam, v, v, params);
            if p.re < -1e-12 {
                return Err(SamplerError::NegativeProbability {
                    lambda: lam.to_string(),
                    value: p.re,
                });
            }
            let p = p.re.max(0.0);
            total += p;
            rows.push((lam, p));
        }
    }
    Ok(MeasureTable {
        rows,
        tail_mass: (1.0 - total).max(0.0),
        cutoff,
    })
}

/// Counter-based SplitMix64: draw i is a pure function of (seed, i).
pub fn splitmix64(seed: u64, counter: u64) -> u64 {
    let mut z = seed.wrapping_add(counter.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Uniform f64 in [0, 1) from the counter stream.
fn uniform(seed: u64, counter: u64) -> f64 {
    (splitmix64(seed, counter) >> 11) as f64 / (1u64 << 53) as f64
}

/// A sampling run: drawn row indices plus the tail-hit log.
#[derive(Clone, Debug)]
pub struct SampleRun {
    pub draws: Vec<usize>,
    pub tail_hits: u64,
}

impl SampleRun {
    pub fn partitions<'a>(
        &'a self,
        table: &'a MeasureTable,
    ) -> impl Iterator<Item = &'a Partition> {
        self.draws.iter().map(|&i| &table.rows[i].0)
    }
}

/// i.i.d. draws by inverse CDF over the canonical order. Uniforms that land
/// in the tail are logged and redrawn with the next counter value.
pub fn sample(
    table: &MeasureTable,
    seed: u64,
    count: usize,
    tail_threshold: f64,
) -> Result<SampleRun, SamplerError> {
    if table.tail_mass >= tail_threshold {
        return Err(SamplerError::TailTooHeavy {
            tail: table.tail_mass,
            threshold: tail_threshold,
        });
    }
    let mut cdf = Vec::with_capacity(table.rows.len());
    let mut acc = 0.0;
    for (_, p) in &table.rows {
        acc += p;
        cdf.push(acc);
    }
    let mut draws = Vec::with_capacity(count);
    let mut tail_hits = 0u64;
    let mut counter = 0u64;
    while draws.len() < count {
        let u = uniform(seed, counter);
        counter += 1;
        match cdf.partition_point(|&c| c <= u) {
            i if i < cdf.len() => draws.push(i),
            _ => tail_hits += 1,
        }
    }
    Ok(SampleRun { draws, tail_hits })
}

/// Observables whose empirical cumulants the trend checks track.
#[derive(Clone, Copy, Debug)]
pub enum Statistic {
    /// Transition-measure moment T_ℓ.
    T(u32),
    /// Profile linear statistic O_p.
    O(u32),
}

/// Evaluates the statistic on one partition through its profile.
pub fn statistic_value(
    lambda: &Partition,
    params: &AnisotropyParams<Complex64>,
    stat: Statistic,
) -> f64 {
    let prof = profile_of(lambda, params);
    match stat {
        Statistic::T(ell) => transition_moments(&prof, ell as usize)[ell as usize].re,
        Statistic::O(p) => linear_statistics(&prof, p as usize)[p as usize].re,
    }
}

/// k-statistics (unbiased cumulant estimators) of orders 1..=4.
pub fn empirical_cumulant(samples: &[f64], order: u32) -> f64 {
    let n = samples.len() as f64;
    assert!((1..=4).contains(&order), "orders 1..=4 supported");
    assert!(samples.len() > order as usize, "sample too small");
    let mean = samples.iter().sum::<f64>() / n;
    let central = |p: i32| -> f64 { samples.iter().map(|&x| (x - mean).powi(p)).sum::<f64>() / n };
    match order {
        1 => mean,
        2 => {
            let m2 = central(2);
            n / (n - 1.0) * m2
        }
        3 => {
            let m3 = central(3);
            n * n / ((n - 1.0) * (n - 2.0)) * m3
        }
        _ => {
            let m2 = central(2);
            let m4 = central(4);
            n * n * ((n + 1.0) * m4 - 3.0 * (n - 1.0) * m2 * m2)
                / ((n - 1.0) * (n - 2.0) * (n - 3.0))
        }
    }
}
