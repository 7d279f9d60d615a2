//! Sparse operator algebra on the polynomial Fock space.
//!
//! Vectors are finite combinations of the monomials ρ_μ indexed by
//! partitions, with squared norms ‖ρ_μ‖² = Π_k (ℏk)^{d_k} d_k!. Creation
//! multiplies by ρ_k; annihilation is ℏk ∂/∂ρ_k; the hierarchy operators
//! T̂_ℓ are the top-left entries of powers of the semi-infinite Lax matrix
//! with entries ρ̂_{j'-j} + ε̄jδ(j-j'). Because every Lax step conserves
//! degree + layer, the T̂_ℓ preserve degree and act exactly on truncations.
//!
//! Jack polynomials are recovered numerically as joint eigenvectors of the
//! hierarchy restricted to a degree block, which yields Jack measure
//! probabilities, the hook-product law at fixed size, and dePoissonized
//! (fixed-size) expectations.

use crate::params::AnisotropyParams;
use crate::partition::{partitions_of_size, Partition};
use crate::profile::{profile_of, transition_moments};
use crate::scalar::Scalar;
use crate::specialization::Specialization;
use nalgebra::DMatrix;
use num_complex::Complex64;
use std::collections::BTreeMap;

/// Sparse vector in the monomial basis ρ_μ.
#[derive(Clone, Debug, PartialEq)]
pub struct FockVector<T: Scalar> {
    entries: BTreeMap<Partition, T>,
}

impl<T: Scalar> Default for FockVector<T> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<T: Scalar> FockVector<T> {
    pub fn zero() -> Self {
        FockVector {
            entries: BTreeMap::new(),
        }
    }

    /// The vacuum monomial ρ_∅ = 1.
    pub fn vacuum() -> Self {
        Self::monomial(Partition::empty(), T::one())
    }

    pub fn monomial(mu: Partition, coeff: T) -> Self {
        let mut v = Self::zero();
        v.add_entry(mu, coeff);
        v
    }

    pub fn add_entry(&mut self, mu: Partition, coeff: T) {
        if coeff.is_zero() {
            return;
        }
        match self.entries.entry(mu) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().add_ref(&coeff);
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn coeff(&self, mu: &Partition) -> T {
        self.entries.get(mu).cloned().unwrap_or_else(T::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Partition, &T)> {
        self.entries.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn num_entries(&self) -> usize {
        self.entries.len()
    }

    pub fn add_scaled(&mut self, other: &Self, factor: &T) {
        if factor.is_zero() {
            return;
        }
        for (mu, c) in &other.entries {
            self.add_entry(mu.clone(), c.mul_ref(factor));
        }
    }

    pub fn scale(&self, factor: &T) -> Self {
        let mut out = Self::zero();
        out.add_scaled(self, factor);
        out
    }

    /// Restriction to the monomials of degree `d`.
    pub fn degree_slice(&self, d: u32) -> Self {
        FockVector {
            entries: self
                .entries
                .iter()
                .filter(|(mu, _)| mu.size() == d)
                .map(|(mu, c)| (mu.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn max_degree(&self) -> u32 {
        self.entries.keys().map(|mu| mu.size()).max().unwrap_or(0)
    }
}

/// ‖ρ_μ‖² = Π_k (ℏk)^{d_k} d_k!.
pub fn monomial_norm_sq<T: Scalar>(mu: &Partition, hbar: &T) -> T {
    let mut acc = T::one();
    for (k, d_k) in mu.multiplicities() {
        let hk = hbar.scale_int(i64::from(k));
        for i in 1..=d_k {
            acc = acc.mul_ref(&hk).scale_int(i64::from(i));
        }
    }
    acc
}

/// ⟨a, b⟩_ℏ = Σ_μ conj(a_μ) b_μ ‖ρ_μ‖², conjugating the left entry.
pub fn inner_product<T: Scalar>(a: &FockVector<T>, b: &FockVector<T>, hbar: &T) -> T {
    let mut acc = T::zero();
    for (mu, ca) in a.iter() {
        let cb = b.coeff(mu);
        if cb.is_zero() {
            continue;
        }
        acc = acc.add_ref(&ca.conj().mul_ref(&cb).mul_ref(&monomial_norm_sq(mu, hbar)));
    }
    acc
}

/// ρ̂_k x: adds one part of size k to each monomial.
pub fn apply_create<T: Scalar>(k: u32, x: &FockVector<T>) -> FockVector<T> {
    assert!(k >= 1);
    let mut out = FockVector::zero();
    for (mu, c) in x.iter() {
        out.add_entry(mu.push_part(k), c.clone());
    }
    out
}

/// ρ̂_{-k} x = ℏk ∂x/∂ρ_k: maps ρ_μ to ℏ·k·N'_k[μ]·ρ_{μ∖k}.
pub fn apply_annihilate<T: Scalar>(k: u32, x: &FockVector<T>, hbar: &T) -> FockVector<T> {
    assert!(k >= 1);
    let mut out = FockVector::zero();
    for (mu, c) in x.iter() {
        let mult = mu.multiplicity(k);
        if mult == 0 {
            continue;
        }
        let reduced = mu.remove_part(k).expect("part exists");
        let factor = hbar.scale_int(i64::from(k) * i64::from(mult));
        out.add_entry(reduced, c.mul_ref(&factor));
    }
    out
}

/// Truncated coherent state: all monomials of degree ≤ `cutoff` of
/// exp((1/ℏ) Σ conj(V_k) ρ_k / k); the coefficient of ρ_μ is
/// Π_k (conj(V_k)/(ℏk))^{d_k} / d_k!.
pub fn coherent_state<T: Scalar>(v: &Specialization<T>, hbar: &T, cutoff: u32) -> FockVector<T> {
    let mut out = FockVector::zero();
    let support = v.support();
    let mut stack: Vec<(usize, Partition, T)> = vec![(0, Partition::empty(), T::one())];
    while let Some((idx, mu, coeff)) = stack.pop() {
        if idx == support.len() {
            out.add_entry(mu, coeff);
            continue;
        }
        let k = support[idx];
        let base = v
            .get(k)
            .expect("support")
            .conj()
            .div_ref(&hbar.scale_int(i64::from(k)));
        let mut acc = coeff.clone();
        let mut shape = mu.clone();
        stack.push((idx + 1, mu, coeff));
        let mut count: i64 = 1;
        while shape.size() + k <= cutoff {
            shape = shape.push_part(k);
            acc = acc.mul_ref(&base).div_ref(&T::from_int(count));
            stack.push((idx + 1, shape.clone(), acc.clone()));
            count += 1;
        }
    }
    out
}

/// Σ_k conj(V^out_k) V^in_k / k, the exponent of the normalization constant.
pub fn pairing_exponent<T: Scalar>(v_out: &Specialization<T>, v_in: &Specialization<T>) -> T {
    let mut acc = T::zero();
    for (k, vo) in v_out.iter() {
        if let Some(vi) = v_in.get(k) {
            acc = acc.add_ref(&vo.conj().mul_ref(vi).div_ref(&T::from_int(i64::from(k))));
        }
    }
    acc
}

#[derive(Debug, Clone, PartialEq)]
pub enum FockError {
    /// The auxiliary truncation was too small for an exact application.
    Truncation { needed: u32, given: u32 },
    /// Eigenvalue clusters could not be split into labeled eigenvectors.
    LabeledDegeneracy(String),
}

impl std::fmt::Display for FockError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FockError::Truncation { needed, given } => {
                write!(f, "auxiliary truncation {given} below required {needed}")
            }
            FockError::LabeledDegeneracy(msg) => write!(f, "labeled degeneracy: {msg}"),
        }
    }
}

impl std::error::Error for FockError {}

/// T̂_ℓ x: the top-left entry of the ℓth Lax power applied to x. Exact for
/// `jmax >= max degree of x` (layer j always holds degree shifted down by j,
/// so no content ever escapes the window); smaller `jmax` is flagged.
pub fn apply_t<T: Scalar>(
    ell: u32,
    x: &FockVector<T>,
    params: &AnisotropyParams<T>,
    jmax: Option<u32>,
) -> Result<FockVector<T>, FockError> {
    let needed = x.max_degree();
    let jmax = jmax.unwrap_or(needed);
    if jmax < needed {
        return Err(FockError::Truncation {
            needed,
            given: jmax,
        });
    }
    let hbar = params.hbar();
    let ebar = params.ebar();
    let mut layers: Vec<FockVector<T>> = vec![FockVector::zero(); jmax as usize + 1];
    layers[0] = x.clone();
    for _ in 0..ell {
        let mut next: Vec<FockVector<T>> = vec![FockVector::zero(); jmax as usize + 1];
        for (j, layer) in layers.iter().enumerate() {
            if layer.is_zero() {
                continue;
            }
            // diagonal ε̄ j
            if j > 0 && !ebar.is_zero() {
                next[j].add_scaled(layer, &ebar.scale_int(j as i64));
            }
            // annihilation ρ̂_{-k} carries layer j to layer j + k
            for k in 1..=(jmax as usize - j) {
                let moved = apply_annihilate(k as u32, layer, &hbar);
                if !moved.is_zero() {
                    next[j + k].add_scaled(&moved, &T::one());
                }
            }
            // creation ρ̂_{+k} carries layer j to layer j - k
            for k in 1..=j {
                let moved = apply_create(k as u32, layer);
                next[j - k].add_scaled(&moved, &T::one());
            }
        }
        layers = next;
    }
    Ok(layers.swap_remove(0))
}

/// Jack basis data for one degree block.
#[derive(Clone, Debug)]
pub struct JackEntry {
    pub lambda: Partition,
    /// P^norm_λ in the monomial basis, unit norm, phase fixed so the leading
    /// coefficient is real positive.
    pub coeffs: FockVector<Complex64>,
    /// ‖P_λ‖ for the normalization in which the leading coefficient is 1.
    pub norm: f64,
    /// Rayleigh values ⟨w, T̂_ℓ w⟩ for ℓ = 0..=L.
    pub eigenvalues: Vec<f64>,
}

#[derive(Clone, Debug)]
pub struct JackBasis {
    pub degree: u32,
    pub entries: Vec<JackEntry>,
}

impl JackBasis {
    pub fn entry(&self, lambda: &Partition) -> Option<&JackEntry> {
        self.entries.iter().find(|e| &e.lambda == lambda)
    }

    /// JSON export for golden-file regression: partition, norm, eigenvalue
    /// table, and monomial coefficients keyed by comma-separated parts.
    pub fn to_json(&self) -> serde_json::Value {
        let entries: Vec<serde_json::Value> = self
            .entries
            .iter()
            .map(|e| {
                let coeffs: BTreeMap<String, [f64; 2]> = e
                    .coeffs
                    .iter()
                    .map(|(mu, c)| {
                        let key = mu
                            .parts()
                            .iter()
                            .map(|p| p.to_string())
                            .collect::<Vec<_>>()
                            .join(",");
                        (key, [c.re, c.im])
                    })
                    .collect();
                serde_json::json!({
                    "lambda": e.lambda.parts(),
                    "norm": e.norm,
                    "eigenvalues": e.eigenvalues,
                    "coefficients": coeffs,
                })
            })
            .collect();
        serde_json::json!({ "degree": self.degree, "entries": entries })
    }
}

fn rayleigh(w: &FockVector<Complex64>, ell: u32, params: &AnisotropyParams<Complex64>) -> f64 {
    let hbar = params.hbar();
    let tw = apply_t(ell, w, params, None).expect("jmax auto");
    inner_product(w, &tw, &hbar).re
}

/// Joint eigenvectors of the hierarchy on the degree-d block, labeled by
/// partition via their transition-moment signatures. Numeric mode only;
/// eigenvalue clusters are split with T̂₄ and then T̂₅ before giving up.
pub fn jack_basis(
    d: u32,
    params: &AnisotropyParams<Complex64>,
    l_max: u32,
) -> Result<JackBasis, FockError> {
    let lambdas = partitions_of_size(d);
    let dim = lambdas.len();
    let hbar = params.hbar();
    if d == 0 {
        let mut eigenvalues = vec![0.0; l_max as usize + 1];
        eigenvalues[0] = 1.0;
        return Ok(JackBasis {
            degree: 0,
            entries: vec![JackEntry {
                lambda: Partition::empty(),
                coeffs: FockVector::vacuum(),
                norm: 1.0,
                eigenvalues,
            }],
        });
    }

    // orthonormal basis ê_μ = ρ_μ / ‖ρ_μ‖
    let norms: Vec<f64> = lambdas
        .iter()
        .map(|mu| monomial_norm_sq(mu, &hbar).re.sqrt())
        .collect();
    let index: BTreeMap<Partition, usize> = lambdas
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, mu)| (mu, i))
        .collect();

    let op_matrix = |ell: u32| -> DMatrix<f64> {
        let mut m = DMatrix::<f64>::zeros(dim, dim);
        for (j, mu) in lambdas.iter().enumerate() {
            let e_mu = FockVector::monomial(mu.clone(), Complex64::new(1.0 / norms[j], 0.0));
            let t = apply_t(ell, &e_mu, params, None).expect("jmax auto");
            for (nu, c) in t.iter() {
                let i = index[nu];
                m[(i, j)] = (c * norms[i]).re;
            }
        }
        // self-adjoint up to rounding
        for i in 0..dim {
            for j in 0..i {
                let avg = 0.5 * (m[(i, j)] + m[(j, i)]);
                m[(i, j)] = avg;
                m[(j, i)] = avg;
            }
        }
        m
    };

    let m3 = op_matrix(3);
    let eig = m3.symmetric_eigen();
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].partial_cmp(&eig.eigenvalues[b]).unwrap());
    let mut vectors: Vec<nalgebra::DVector<f64>> = order
        .iter()
        .map(|&i| eig.eigenvectors.column(i).into())
        .collect();
    let values3: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let scale3 = values3.iter().fold(1.0f64, |a, &b| a.max(b.abs()));

    let cluster_tol = 1e-8 * scale3.max(1.0);
    let mut clusters: Vec<(usize, usize)> = Vec::new();
    let mut start = 0;
    for i in 1..=dim {
        if i == dim || (values3[i] - values3[i - 1]).abs() > cluster_tol {
            clusters.push((start, i));
            start = i;
        }
    }

    // Profile-route targets sorted the same way: the spectrum of T-hat-3 on
    // the block is exactly the multiset of profile third moments, so after
    // sorting both sides the clusters line up and most labels follow from
    // position alone.
    let mut targets: Vec<(Partition, Vec<f64>)> = lambdas
        .iter()
        .map(|lam| {
            let t = transition_moments(&profile_of(lam, params), 8);
            (lam.clone(), t.iter().map(|x| x.re).collect())
        })
        .collect();
    targets.sort_by(|a, b| a.1[3].partial_cmp(&b.1[3]).unwrap());
    for i in 0..dim {
        let dev = (values3[i] - targets[i].1[3]).abs();
        if dev > 1e-6 * scale3.max(1.0) {
            return Err(FockError::LabeledDegeneracy(format!(
                "degree {d}: sorted spectra disagree at slot {i}: {} vs {}",
                values3[i], targets[i].1[3]
            )));
        }
    }

    // Split residual clusters by joint diagonalization with higher
    // operators on the cluster spans. Even orders go first: at ebar = 0 the
    // transpose symmetry kills all odd moments on self-conjugate clusters,
    // so only even moments can separate those.
    let mut worklist: Vec<(usize, usize)> = clusters
        .iter()
        .copied()
        .filter(|&(a, b)| b - a > 1)
        .collect();
    for ell in [4u32, 6, 5, 7, 8] {
        if worklist.is_empty() {
            break;
        }
        let m_ell = op_matrix(ell);
        let mut next_worklist = Vec::new();
        for &(a, b) in &worklist {
            let k = b - a;
            let mut small = DMatrix::<f64>::zeros(k, k);
            for r in 0..k {
                let m_vr = &m_ell * &vectors[a + r];
                for s in 0..k {
                    small[(s, r)] = vectors[a + s].dot(&m_vr);
                }
            }
            for i in 0..k {
                for j in 0..i {
                    let avg = 0.5 * (small[(i, j)] + small[(j, i)]);
                    small[(i, j)] = avg;
                    small[(j, i)] = avg;
                }
            }
            let sub = small.symmetric_eigen();
            let mut sub_order: Vec<usize> = (0..k).collect();
            sub_order
                .sort_by(|&x, &y| sub.eigenvalues[x].partial_cmp(&sub.eigenvalues[y]).unwrap());
            let rotated: Vec<nalgebra::DVector<f64>> = sub_order
                .iter()
                .map(|&col| {
                    let mut v = nalgebra::DVector::<f64>::zeros(dim);
                    for r in 0..k {
                        v += &vectors[a + r] * sub.eigenvectors[(r, col)];
                    }
                    v
                })
                .collect();
            for (offset, v) in rotated.into_iter().enumerate() {
                vectors[a + offset] = v;
            }
            let sub_values: Vec<f64> = sub_order.iter().map(|&c| sub.eigenvalues[c]).collect();
            // order the matching targets by the same moment and verify
            targets[a..b]
                .sort_by(|x, y| x.1[ell as usize].partial_cmp(&y.1[ell as usize]).unwrap());
            let sub_scale = sub_values.iter().fold(1.0f64, |x, &y| x.max(y.abs()));
            for i in 0..k {
                let t_val = targets[a + i].1[ell as usize];
                if (sub_values[i] - t_val).abs() > 1e-6 * t_val.abs().max(sub_scale).max(1.0) {
                    return Err(FockError::LabeledDegeneracy(format!(
                        "degree {d}: cluster moment {ell} mismatch: {} vs {t_val}",
                        sub_values[i]
                    )));
                }
            }
            // re-split into still-degenerate runs
            let sub_tol = 1e-8 * sub_scale.max(1.0);
            let mut s0 = 0usize;
            for i in 1..=k {
                if i == k || (sub_values[i] - sub_values[i - 1]).abs() > sub_tol {
                    if i - s0 > 1 {
                        next_worklist.push((a + s0, a + i));
                    }
                    s0 = i;
                }
            }
        }
        worklist = next_worklist;
    }
    if let Some(&(a, b)) = worklist.first() {
        return Err(FockError::LabeledDegeneracy(format!(
            "degree {d}: {} eigenvectors share all moments through order 8 near T3 = {:.6}",
            b - a,
            values3[a]
        )));
    }

    let as_fock = |v: &nalgebra::DVector<f64>| -> FockVector<Complex64> {
        let mut f = FockVector::zero();
        for (i, mu) in lambdas.iter().enumerate() {
            f.add_entry(mu.clone(), Complex64::new(v[i] / norms[i], 0.0));
        }
        f
    };

    let mut entries: Vec<JackEntry> = Vec::with_capacity(dim);
    for (v, (lambda, _)) in vectors.iter().zip(targets) {
        let w = as_fock(v);

        // phase and scale from the dominance-maximal monomial
        let lead = Partition::new(vec![d]);
        let mut lead_coeff = w.coeff(&lead);
        if lead_coeff.norm() < 1e-10 {
            lead_coeff = w
                .iter()
                .map(|(_, c)| *c)
                .max_by(|a, b| a.norm().partial_cmp(&b.norm()).unwrap())
                .expect("nonzero vector");
        }
        let phase = lead_coeff / lead_coeff.norm();
        let w = w.scale(&phase.conj());
        let norm = 1.0 / lead_coeff.norm();

        let eigenvalues: Vec<f64> = (0..=l_max).map(|ell| rayleigh(&w, ell, params)).collect();
        entries.push(JackEntry {
            lambda,
            coeffs: w,
            norm,
            eigenvalues,
        });
    }

    // canonical (reverse lexicographic) order
    let canonical = partitions_of_size(d);
    entries.sort_by_key(|e| canonical.iter().position(|l| l == &e.lambda).unwrap());
    Ok(JackBasis { degree: d, entries })
}

/// Evaluation P^norm_λ(V₁, V₂, …) from the basis coefficients.
pub fn evaluate_normalized_jack(entry: &JackEntry, v: &Specialization<Complex64>) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for (mu, c) in entry.coeffs.iter() {
        acc += c * v.eval_monomial(mu);
    }
    acc
}

/// Jack measure probability of λ for the pair (v_out, v_in):
/// conj(P^norm_λ(V^out)) P^norm_λ(V^in) e^{-(1/ℏ)Σ conj(V^out)V^in/k}.
pub fn jack_measure_prob(
    lambda: &Partition,
    v_out: &Specialization<Complex64>,
    v_in: &Specialization<Complex64>,
    params: &AnisotropyParams<Complex64>,
) -> Result<Complex64, FockError> {
    let basis = jack_basis(lambda.size(), params, 2)?;
    Ok(jack_measure_prob_with_basis(
        &basis, lambda, v_out, v_in, params,
    ))
}

/// Same with a prebuilt degree block (bulk tabulation).
pub fn jack_measure_prob_with_basis(
    basis: &JackBasis,
    lambda: &Partition,
    v_out: &Specialization<Complex64>,
    v_in: &Specialization<Complex64>,
    params: &AnisotropyParams<Complex64>,
) -> Complex64 {
    let entry = basis.entry(lambda).expect("partition in its degree block");
    let hbar = params.hbar();
    let exponent = pairing_exponent(v_out, v_in).div_ref(&hbar);
    let p_out = evaluate_normalized_jack(entry, v_out);
    let p_in = evaluate_normalized_jack(entry, v_in);
    p_out.conj() * p_in * (-exponent).exp()
}

/// Fixed-size hook-product law: ℏ^d d! Π 1/((-ε₂l + ε₁a + ε₁)(-ε₂l + ε₁a - ε₂))
/// with arm a = λ_i - j and leg l = λ'_j - i of each box.
pub fn jack_plancherel_prob<T: Scalar>(lambda: &Partition, params: &AnisotropyParams<T>) -> T {
    let d = lambda.size();
    let transpose = lambda.transpose();
    let mut acc = T::one();
    let hbar = params.hbar();
    for i in 1..=d {
        acc = acc.mul_ref(&hbar).scale_int(i64::from(i));
    }
    for (i, j) in lambda.boxes() {
        let arm = i64::from(lambda.parts()[i as usize - 1]) - i64::from(j);
        let leg = i64::from(transpose.parts()[j as usize - 1]) - i64::from(i);
        let base = params
            .eps2()
            .scale_int(-leg)
            .add_ref(&params.eps1().scale_int(arm));
        let up = base.add_ref(params.eps1());
        let down = base.sub_ref(params.eps2());
        acc = acc.div_ref(&up.mul_ref(&down));
    }
    acc
}

/// Result of a coherent-state matrix element with truncation metadata.
#[derive(Clone, Debug)]
pub struct OperatorMoment {
    pub value: Complex64,
    /// Degree cutoff applied to both kernels.
    pub degree_cutoff: u32,
    /// Auxiliary truncation used by the Lax applications.
    pub jmax: u32,
    /// Relative gap between the truncated and closed-form normalizations, a
    /// proxy for the neglected tail mass.
    pub tail_estimate: f64,
}

/// ⟨Υ_in, T̂_{ℓ₁}⋯T̂_{ℓ_n} Υ_out⟩ / ⟨Υ_in, Υ_out⟩ on degree-truncated kernels.
pub fn joint_moments_operator(
    lengths: &[u32],
    v_out: &Specialization<Complex64>,
    v_in: &Specialization<Complex64>,
    params: &AnisotropyParams<Complex64>,
    cutoff: u32,
) -> OperatorMoment {
    let hbar = params.hbar();
    let out_state = coherent_state(v_out, &hbar, cutoff);
    let in_state = coherent_state(v_in, &hbar, cutoff);
    let denominator = inner_product(&in_state, &out_state, &hbar);
    let mut state = out_state;
    for &ell in lengths.iter().rev() {
        state = apply_t(ell, &state, params, None).expect("jmax auto");
    }
    let numerator = inner_product(&in_state, &state, &hbar);
    let exact_norm = pairing_exponent(v_out, v_in).div_ref(&hbar).exp();
    let tail_estimate =
        (denominator - exact_norm).norm() / exact_norm.norm().max(f64::MIN_POSITIVE);
    OperatorMoment {
        value: numerator / denominator,
        degree_cutoff: cutoff,
        jmax: cutoff,
        tail_estimate,
    }
}

/// Fixed-size conditioned joint moments via the degree-d kernel slices:
/// ⟨Υ^(d)_in, T̂⋯ Υ^(d)_out⟩ / ⟨Υ^(d)_in, Υ^(d)_out⟩, exact on the block.
pub fn conditioned_moments(
    lengths: &[u32],
    v_out: &Specialization<Complex64>,
    v_in: &Specialization<Complex64>,
    params: &AnisotropyParams<Complex64>,
    d: u32,
) -> Complex64 {
    let hbar = params.hbar();
    let out_state = coherent_state(v_out, &hbar, d).degree_slice(d);
    let in_state = coherent_state(v_in, &hbar, d).degree_slice(d);
    let mut state = out_state.clone();
    for &ell in lengths.iter().rev() {
        state = apply_t(ell, &state, params, None).expect("jmax auto");
    }
    let numerator = inner_product(&in_state, &state, &hbar);
    let denominator = inner_product(&in_state, &out_state, &hbar);
    numerator / denominator
}

/// dePoissonization factor 𝒞_d(η; ℏ) = d(d-1)⋯(d-η+1) · ℏ^η.
pub fn depoissonization_factor(eta: u32, d: u32, hbar: f64) -> f64 {
    let mut acc = 1.0;
    for i in 0..eta {
        acc *= f64::from(d) - f64::from(i);
    }
    acc * hbar.powi(eta as i32)
}
