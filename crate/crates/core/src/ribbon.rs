//! Weighted enumeration of Szegő, sliding, ribbon, and decorated ribbon paths.
//!
//! A sliding path of length ℓ is a height sequence j₀ = 0, …, j_ℓ = 0 with
//! integer steps; zero steps are slides (weighted by their height), nonzero
//! steps are jumps. A ribbon path puts n sliding paths side by side and pairs
//! some down-jumps with later up-jumps of the same size; each pairing is
//! weighted by its size, unpaired jumps are weighted by specialization
//! coefficients (conjugated on the way down). The graded sums over these
//! objects are the joint moments (all paths) and joint cumulants (connected
//! paths) of the transition-measure observables, as bivariate polynomials in
//! (ℏ, ε̄) keyed by (#pairings, #slides).
//!
//! Finiteness: the quantity height + Σ(open down sizes) changes only at
//! unpaired up-jumps, by at most K = max support index each, and the balanced
//! unpaired jump profiles keep their total mass at or below K·⌈Σℓ/2⌉. Every
//! contributing path therefore stays below that height cap.

use crate::bipoly::BiPolynomial;
use crate::scalar::Scalar;
use crate::specialization::Specialization;
use std::collections::{BTreeMap, HashMap};

/// Height sequence j₀ … j_ℓ with j₀ = j_ℓ = 0 and all heights ≥ 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlidingPath {
    heights: Vec<u32>,
}

impl SlidingPath {
    pub fn new(heights: Vec<u32>) -> Self {
        assert!(heights.len() >= 2, "need at least one step");
        assert_eq!(*heights.first().unwrap(), 0, "paths start at height 0");
        assert_eq!(*heights.last().unwrap(), 0, "paths end at height 0");
        SlidingPath { heights }
    }

    pub fn heights(&self) -> &[u32] {
        &self.heights
    }

    /// Number of steps.
    pub fn len(&self) -> usize {
        self.heights.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Step degrees j_{t+1} - j_t; zero entries are slides.
    pub fn steps(&self) -> Vec<i64> {
        self.heights
            .windows(2)
            .map(|w| i64::from(w[1]) - i64::from(w[0]))
            .collect()
    }

    /// Height at which step `t` (0-based) departs.
    pub fn height_before(&self, t: usize) -> u32 {
        self.heights[t]
    }

    pub fn slide_count(&self) -> u32 {
        self.steps().iter().filter(|&&e| e == 0).count() as u32
    }
}

/// One step of one site: `(site, step)` with 0-based indices.
pub type StepRef = (usize, usize);

/// A matched (-k, +k) jump pair; the down step precedes the up step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pairing {
    pub down: StepRef,
    pub up: StepRef,
    pub size: u32,
}

/// n sliding paths plus a pairing list.
#[derive(Clone, Debug, PartialEq)]
pub struct RibbonPath {
    pub sites: Vec<SlidingPath>,
    pub pairings: Vec<Pairing>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum RibbonError {
    EmptyLengths,
    BadPairing(String),
    SizeMismatch,
}

impl std::fmt::Display for RibbonError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RibbonError::EmptyLengths => write!(f, "need at least one site length"),
            RibbonError::BadPairing(msg) => write!(f, "invalid pairing: {msg}"),
            RibbonError::SizeMismatch => write!(f, "jump profiles must have equal size"),
        }
    }
}

impl std::error::Error for RibbonError {}

impl RibbonPath {
    /// Validates the degree, ordering, and disjointness conditions.
    pub fn new(sites: Vec<SlidingPath>, pairings: Vec<Pairing>) -> Result<Self, RibbonError> {
        let mut used: Vec<StepRef> = Vec::new();
        for p in &pairings {
            let down_deg = step_degree(&sites, p.down)
                .ok_or_else(|| RibbonError::BadPairing("step out of range".into()))?;
            let up_deg = step_degree(&sites, p.up)
                .ok_or_else(|| RibbonError::BadPairing("step out of range".into()))?;
            if p.size == 0 || down_deg != -i64::from(p.size) || up_deg != i64::from(p.size) {
                return Err(RibbonError::BadPairing(format!(
                    "degrees ({down_deg}, {up_deg}) do not form a (-k, +k) pair of size {}",
                    p.size
                )));
            }
            if p.down >= p.up {
                return Err(RibbonError::BadPairing(
                    "down step must precede the up step".into(),
                ));
            }
            for s in [p.down, p.up] {
                if used.contains(&s) {
                    return Err(RibbonError::BadPairing(
                        "a step participates in two pairings".into(),
                    ));
                }
                used.push(s);
            }
        }
        Ok(RibbonPath { sites, pairings })
    }

    fn paired_steps(&self) -> Vec<StepRef> {
        self.pairings.iter().flat_map(|p| [p.down, p.up]).collect()
    }

    pub fn slide_count(&self) -> u32 {
        self.sites.iter().map(|s| s.slide_count()).sum()
    }
}

fn step_degree(sites: &[SlidingPath], (a, t): StepRef) -> Option<i64> {
    sites.get(a).and_then(|s| s.steps().get(t).copied())
}

/// All sliding paths of length `len` with jump degrees in [-max_jump, max_jump],
/// ascending lexicographic on height sequences.
pub fn enumerate_sliding_paths(len: u32, max_jump: u32) -> Vec<SlidingPath> {
    assert!(len >= 1, "length must be positive");
    let mut out = Vec::new();
    let mut heights = vec![0u32];
    extend_paths(&mut heights, len as usize, max_jump, &mut out);
    out
}

fn extend_paths(heights: &mut Vec<u32>, len: usize, max_jump: u32, out: &mut Vec<SlidingPath>) {
    let t = heights.len() - 1;
    let h = *heights.last().unwrap();
    if t == len {
        if h == 0 {
            out.push(SlidingPath {
                heights: heights.clone(),
            });
        }
        return;
    }
    let remaining = (len - t - 1) as u32;
    let lo = h.saturating_sub(max_jump);
    let hi = h + max_jump;
    for next in lo..=hi {
        // must still be able to return to 0
        if next > max_jump.saturating_mul(remaining) {
            continue;
        }
        heights.push(next);
        extend_paths(heights, len, max_jump, out);
        heights.pop();
    }
}

/// Weight of a ribbon path together with its gradings.
#[derive(Clone, Debug, PartialEq)]
pub struct PathWeight<T: Scalar> {
    /// Π size(p) · Π height(slide) · Π conj(V^out) · Π V^in.
    pub value: T,
    /// q, the number of pairings (grades ℏ^q).
    pub pairings: u32,
    /// m, the number of slides (grades ε̄^m).
    pub slides: u32,
}

/// (v_out, v_in)-weight of a ribbon path. Unpaired jump degrees outside the
/// supports give weight zero, not an error.
pub fn path_weight<T: Scalar>(
    path: &RibbonPath,
    v_out: &Specialization<T>,
    v_in: &Specialization<T>,
) -> PathWeight<T> {
    let paired = path.paired_steps();
    let mut value = T::one();
    for p in &path.pairings {
        value = value.scale_int(i64::from(p.size));
    }
    let mut slides = 0u32;
    for (a, site) in path.sites.iter().enumerate() {
        for (t, deg) in site.steps().into_iter().enumerate() {
            if deg == 0 {
                slides += 1;
                value = value.scale_int(i64::from(site.height_before(t)));
            } else if !paired.contains(&(a, t)) {
                let k = deg.unsigned_abs() as u32;
                let factor = if deg > 0 {
                    v_in.get(k).cloned()
                } else {
                    v_out.get(k).map(|v| v.conj())
                };
                match factor {
                    Some(f) => value = value.mul_ref(&f),
                    None => {
                        return PathWeight {
                            value: T::zero(),
                            pairings: path.pairings.len() as u32,
                            slides: path.slide_count(),
                        }
                    }
                }
            }
        }
    }
    PathWeight {
        value,
        pairings: path.pairings.len() as u32,
        slides,
    }
}

/// Unpaired jump profiles (μ⁻, μ⁺): degree multisets of the unpaired down and
/// up jumps, each sorted decreasing. Their sizes always agree.
pub fn unpaired_jump_profiles(path: &RibbonPath) -> (crate::Partition, crate::Partition) {
    let paired = path.paired_steps();
    let mut downs = Vec::new();
    let mut ups = Vec::new();
    for (a, site) in path.sites.iter().enumerate() {
        for (t, deg) in site.steps().into_iter().enumerate() {
            if deg != 0 && !paired.contains(&(a, t)) {
                if deg > 0 {
                    ups.push(deg as u32);
                } else {
                    downs.push((-deg) as u32);
                }
            }
        }
    }
    (
        crate::Partition::from_unsorted(downs),
        crate::Partition::from_unsorted(ups),
    )
}

/// Connectivity of the reduced graph on sites; single-site paths are always
/// connected.
pub fn is_connected(path: &RibbonPath) -> bool {
    let edges: Vec<(usize, usize)> = path.pairings.iter().map(|p| (p.down.0, p.up.0)).collect();
    components_connected(path.sites.len(), &edges)
}

/// Connectivity of the reduced graph along an N-decoration ν (site counts per
/// group, summing to the number of sites).
pub fn is_connected_decorated(path: &RibbonPath, nu: &[usize]) -> bool {
    let n: usize = nu.iter().sum();
    assert_eq!(n, path.sites.len(), "decoration must cover all sites");
    let mut group_of = Vec::with_capacity(n);
    for (g, &cnt) in nu.iter().enumerate() {
        group_of.extend(std::iter::repeat_n(g, cnt));
    }
    let edges: Vec<(usize, usize)> = path
        .pairings
        .iter()
        .map(|p| (group_of[p.down.0], group_of[p.up.0]))
        .collect();
    components_connected(nu.len(), &edges)
}

fn components_connected(n: usize, edges: &[(usize, usize)]) -> bool {
    if n <= 1 {
        return true;
    }
    let mut dsu = Dsu::new(n);
    for &(a, b) in edges {
        dsu.union(a, b);
    }
    dsu.component_count() == 1
}

struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu {
            parent: (0..n).collect(),
        }
    }
    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra] = rb;
        }
    }
    fn component_count(&mut self) -> usize {
        let n = self.parent.len();
        (0..n).filter(|&i| self.find(i) == i).count()
    }
}

/// Both graded path sums in one sweep: `all` collects every ribbon path
/// (joint moments), `connected` only those with connected reduced graph
/// (joint cumulants). Keys are (q, m) = (#pairings, #slides).
pub struct GradedSums<T: Scalar> {
    pub all: BiPolynomial<T>,
    pub connected: BiPolynomial<T>,
}

/// Options for the sum enumerator.
#[derive(Clone, Copy, Debug)]
pub struct SumOptions {
    /// Skip branches of weight zero (slides at height 0 in particular); the
    /// sums are unchanged because those paths contribute nothing.
    pub prune_zero_slides: bool,
    /// Worker threads; partial sums are merged in canonical branch order.
    pub threads: usize,
}

impl Default for SumOptions {
    fn default() -> Self {
        SumOptions {
            prune_zero_slides: true,
            threads: 1,
        }
    }
}

struct Enumerator<'a, T: Scalar> {
    lengths: &'a [u32],
    hcap: u32,
    /// Unpaired up-jump choices (degree, factor).
    ups: Vec<(u32, T)>,
    /// Unpaired down-jump choices (degree, conjugated factor).
    downs: Vec<(u32, T)>,
    /// Degree-indexed multiplicity budgets for unpaired jumps (profile mode).
    budget_in: Option<Vec<u32>>,
    budget_out: Option<Vec<u32>>,
    prune_zero: bool,
    /// Restrict the first step of site 0 to these target heights.
    first_height_filter: Option<&'a [u32]>,
    all: BiPolynomial<T>,
    connected: BiPolynomial<T>,
    open: Vec<(usize, u32)>,
    edges: Vec<(usize, usize)>,
    remaining_after: u32,
}

impl<'a, T: Scalar> Enumerator<'a, T> {
    fn new_spec(
        lengths: &'a [u32],
        v_out: &Specialization<T>,
        v_in: &Specialization<T>,
        hcap: u32,
        prune_zero: bool,
    ) -> Self {
        Enumerator {
            lengths,
            hcap,
            ups: v_in.iter().map(|(k, v)| (k, v.clone())).collect(),
            downs: v_out.iter().map(|(k, v)| (k, v.conj())).collect(),
            budget_in: None,
            budget_out: None,
            prune_zero,
            first_height_filter: None,
            all: BiPolynomial::zero(),
            connected: BiPolynomial::zero(),
            open: Vec::new(),
            edges: Vec::new(),
            remaining_after: 0,
        }
    }

    fn run(&mut self) {
        self.remaining_after = self.lengths.iter().sum();
        self.step(0, 0, 0, T::one(), 0, 0);
    }

    fn leaf(&mut self, weight: T, q: u32, m: u32) {
        if let Some(b) = &self.budget_in {
            if b.iter().any(|&x| x > 0) {
                return;
            }
        }
        if let Some(b) = &self.budget_out {
            if b.iter().any(|&x| x > 0) {
                return;
            }
        }
        self.all.add_term(q, m, weight.clone());
        if components_connected(self.lengths.len(), &self.edges) {
            self.connected.add_term(q, m, weight);
        }
    }

    /// Try to move to height `nh` with the current step; recurses if the step
    /// fits (site must end at height 0) and the weight can still contribute.
    #[allow(clippy::too_many_arguments)]
    fn advance(&mut self, site: usize, t: u32, nh: u32, weight: T, q: u32, m: u32) {
        if weight.is_zero() && self.prune_zero {
            return;
        }
        if site == 0 && t == 0 {
            if let Some(filter) = self.first_height_filter {
                if !filter.contains(&nh) {
                    return;
                }
            }
        }
        let last_of_site = t + 1 == self.lengths[site];
        if last_of_site && nh != 0 {
            return;
        }
        if last_of_site {
            if site + 1 == self.lengths.len() {
                if self.open.is_empty() {
                    self.leaf(weight, q, m);
                }
            } else {
                self.step(site + 1, 0, 0, weight, q, m);
            }
        } else {
            self.step(site, t + 1, nh, weight, q, m);
        }
    }

    fn step(&mut self, site: usize, t: u32, h: u32, weight: T, q: u32, m: u32) {
        self.remaining_after -= 1;

        // slide at the current height
        if h > 0 {
            self.advance(site, t, h, weight.scale_int(i64::from(h)), q, m + 1);
        } else if !self.prune_zero {
            self.advance(site, t, h, T::zero(), q, m + 1);
        }

        // unpaired up-jump
        for i in 0..self.ups.len() {
            let (k, fac) = self.ups[i].clone();
            let nh = h + k;
            if nh > self.hcap {
                continue;
            }
            if let Some(b) = &mut self.budget_in {
                if b[k as usize] == 0 {
                    continue;
                }
                b[k as usize] -= 1;
            }
            self.advance(site, t, nh, weight.mul_ref(&fac), q, m);
            if let Some(b) = &mut self.budget_in {
                b[k as usize] += 1;
            }
        }

        // up-jump paired with an earlier open down-jump
        for idx in 0..self.open.len() {
            let (from_site, k) = self.open[idx];
            let nh = h + k;
            if nh > self.hcap {
                continue;
            }
            self.open.remove(idx);
            self.edges.push((from_site, site));
            self.advance(site, t, nh, weight.scale_int(i64::from(k)), q + 1, m);
            self.edges.pop();
            self.open.insert(idx, (from_site, k));
        }

        // unpaired down-jump
        for i in 0..self.downs.len() {
            let (k, fac) = self.downs[i].clone();
            if k > h {
                continue;
            }
            if let Some(b) = &mut self.budget_out {
                if b[k as usize] == 0 {
                    continue;
                }
                b[k as usize] -= 1;
            }
            self.advance(site, t, h - k, weight.mul_ref(&fac), q, m);
            if let Some(b) = &mut self.budget_out {
                b[k as usize] += 1;
            }
        }

        // down-jump left open for a later pairing; each open claims one
        // future step, so opens can never outnumber the steps left
        if (self.open.len() as u32) < self.remaining_after {
            for k in 1..=h {
                self.open.push((site, k));
                self.advance(site, t, h - k, weight.clone(), q, m);
                self.open.pop();
            }
        }

        self.remaining_after += 1;
    }
}

/// Height cap for supports bounded by `max_support`.
fn height_cap(lengths: &[u32], max_support: u32) -> u32 {
    let total: u32 = lengths.iter().sum();
    max_support * total.div_ceil(2)
}

/// Joint moment and cumulant path sums for sites of the given lengths.
pub fn graded_sums<T: Scalar>(
    lengths: &[u32],
    v_out: &Specialization<T>,
    v_in: &Specialization<T>,
    options: SumOptions,
) -> Result<GradedSums<T>, RibbonError> {
    if lengths.is_empty() || lengths.contains(&0) {
        return Err(RibbonError::EmptyLengths);
    }
    let max_support = v_out.max_index().max(v_in.max_index());
    let hcap = height_cap(lengths, max_support);
    if options.threads > 1 {
        return Ok(graded_sums_parallel(lengths, v_out, v_in, hcap, options));
    }
    let mut e = Enumerator::new_spec(lengths, v_out, v_in, hcap, options.prune_zero_slides);
    e.run();
    Ok(GradedSums {
        all: e.all,
        connected: e.connected,
    })
}

/// Splits work across threads by the first-step target height of site 0;
/// partial polynomials are merged in canonical branch order, so exact results
/// are identical to the single-threaded run and numeric ones agree to
/// rounding.
fn graded_sums_parallel<T: Scalar>(
    lengths: &[u32],
    v_out: &Specialization<T>,
    v_in: &Specialization<T>,
    hcap: u32,
    options: SumOptions,
) -> GradedSums<T> {
    // From height 0 the first step is a slide (height 0, weight 0) or an
    // unpaired up-jump; the reachable first heights are 0 and the in-support.
    let mut first_heights: Vec<u32> = vec![0];
    first_heights.extend(v_in.support().into_iter().filter(|&k| k <= hcap));
    let threads = options.threads.min(first_heights.len()).max(1);
    let chunks: Vec<Vec<u32>> = first_heights
        .chunks(first_heights.len().div_ceil(threads))
        .map(|c| c.to_vec())
        .collect();
    let partials: Vec<GradedSums<T>> = std::thread::scope(|scope| {
        let handles: Vec<_> = chunks
            .iter()
            .map(|chunk| {
                scope.spawn(move || {
                    let mut e =
                        Enumerator::new_spec(lengths, v_out, v_in, hcap, options.prune_zero_slides);
                    e.first_height_filter = Some(chunk);
                    e.run();
                    GradedSums {
                        all: e.all,
                        connected: e.connected,
                    }
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });
    let mut out = GradedSums {
        all: BiPolynomial::zero(),
        connected: BiPolynomial::zero(),
    };
    for p in partials {
        out.all = out.all.add(&p.all);
        out.connected = out.connected.add(&p.connected);
    }
    out
}

/// Joint moments E[T_{ℓ₁}…T_{ℓ_n}] as a polynomial in (ℏ, ε̄): every ribbon
/// path counts.
pub fn moments_poly<T: Scalar>(
    lengths: &[u32],
    v_out: &Specialization<T>,
    v_in: &Specialization<T>,
) -> Result<BiPolynomial<T>, RibbonError> {
    Ok(graded_sums(lengths, v_out, v_in, SumOptions::default())?.all)
}

/// Joint cumulants κ(T_{ℓ₁},…,T_{ℓ_n}): connected ribbon paths only. The
/// ℏ-exponent of every term is at least n-1.
pub fn cumulants_poly<T: Scalar>(
    lengths: &[u32],
    v_out: &Specialization<T>,
    v_in: &Specialization<T>,
) -> Result<BiPolynomial<T>, RibbonError> {
    Ok(graded_sums(lengths, v_out, v_in, SumOptions::default())?.connected)
}

/// Connected counts C(ℓ⃗ | μ_out, μ_in): nonnegative-integer coefficients at
/// (q, m) for connected paths whose unpaired jump profiles are exactly
/// (μ_out, μ_in). The weight of each path is Π size(p) · Π height(slide).
pub fn c_count(
    lengths: &[u32],
    mu_out: &crate::Partition,
    mu_in: &crate::Partition,
) -> Result<BTreeMap<(u32, u32), u64>, RibbonError> {
    if lengths.is_empty() || lengths.contains(&0) {
        return Err(RibbonError::EmptyLengths);
    }
    if mu_out.size() != mu_in.size() {
        return Err(RibbonError::SizeMismatch);
    }
    let kmax = mu_out
        .parts()
        .first()
        .copied()
        .unwrap_or(0)
        .max(mu_in.parts().first().copied().unwrap_or(0)) as usize;
    let mut budget_out = vec![0u32; kmax + 1];
    for &p in mu_out.parts() {
        budget_out[p as usize] += 1;
    }
    let mut budget_in = vec![0u32; kmax + 1];
    for &p in mu_in.parts() {
        budget_in[p as usize] += 1;
    }
    // unpaired up mass is exactly |μ⁺|, so that is the height cap
    let hcap = mu_in.size().max(1);
    let ones: Vec<(u32, crate::scalar::Rat)> = (1..=kmax as u32)
        .map(|k| (k, crate::scalar::Rat::from_int(1)))
        .collect();
    let mut e = Enumerator::<crate::scalar::Rat> {
        lengths,
        hcap,
        ups: ones.clone(),
        downs: ones,
        budget_in: Some(budget_in),
        budget_out: Some(budget_out),
        prune_zero: true,
        first_height_filter: None,
        all: BiPolynomial::zero(),
        connected: BiPolynomial::zero(),
        open: Vec::new(),
        edges: Vec::new(),
        remaining_after: 0,
    };
    e.run();
    let mut out = BTreeMap::new();
    for ((q, m), c) in e.connected.terms() {
        let z = c.to_complex();
        assert!(z.im == 0.0 && z.re >= 0.0 && z.re.fract() == 0.0);
        out.insert((q, m), z.re as u64);
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Markov-Krein expansion of linear statistics into T-monomials, and joint
// cumulants of linear statistics via decorated connectivity.
// ---------------------------------------------------------------------------

/// A product T_{ℓ₁}···T_{ℓ_k} as a sorted index multiset.
pub type TMonomial = Vec<u32>;

/// O_p as an integer combination of T-monomials, from the series recurrence
/// O_n = n·T_n - Σ_{k<n} O_k T_{n-k}.
pub fn kmk_monomials(p: u32) -> Vec<(TMonomial, i64)> {
    let mut per_order: Vec<BTreeMap<TMonomial, i64>> = vec![BTreeMap::new()];
    for n in 1..=p {
        let mut poly: BTreeMap<TMonomial, i64> = BTreeMap::new();
        poly.insert(vec![n], i64::from(n));
        for k in 1..n {
            for (mono, &coeff) in &per_order[k as usize] {
                let mut m = mono.clone();
                m.push(n - k);
                m.sort_unstable();
                *poly.entry(m).or_insert(0) -= coeff;
            }
        }
        poly.retain(|_, c| *c != 0);
        per_order.push(poly);
    }
    per_order[p as usize]
        .iter()
        .map(|(m, &c)| (m.clone(), c))
        .collect()
}

/// Set partitions of {0,…,n-1} as block-index vectors (restricted growth
/// strings); element 0 is always in block 0.
pub fn set_partitions(n: usize) -> Vec<Vec<usize>> {
    fn rec(rgs: &mut Vec<usize>, i: usize, max_used: usize, out: &mut Vec<Vec<usize>>) {
        if i == rgs.len() {
            out.push(rgs.clone());
            return;
        }
        for b in 0..=max_used + 1 {
            rgs[i] = b;
            rec(rgs, i + 1, max_used.max(b), out);
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        out.push(Vec::new());
        return out;
    }
    let mut rgs = vec![0usize; n];
    rec(&mut rgs, 1, 0, &mut out);
    out
}

/// Joint cumulants κ_N(O_{p₁},…,O_{p_N}) of the linear statistics as a
/// (ℏ, ε̄)-polynomial: expand each O_p into T-monomials, then sum over set
/// partitions of all T-factors whose join with the grouping is connected,
/// taking connected ribbon-path sums on the blocks. T₁ ≡ 0 identically (the
/// hierarchy's first operator vanishes), so monomials containing T₁ drop out.
pub fn decorated_cumulants_poly<T: Scalar>(
    ps: &[u32],
    v_out: &Specialization<T>,
    v_in: &Specialization<T>,
) -> Result<BiPolynomial<T>, RibbonError> {
    if ps.is_empty() {
        return Err(RibbonError::EmptyLengths);
    }
    let expansions: Vec<Vec<(TMonomial, i64)>> = ps
        .iter()
        .map(|&p| {
            kmk_monomials(p)
                .into_iter()
                .filter(|(m, _)| m.iter().all(|&l| l >= 2))
                .collect()
        })
        .collect();
    if expansions.iter().any(|e| e.is_empty()) {
        // some O_p is identically zero (p = 1)
        return Ok(BiPolynomial::zero());
    }
    let mut cache: HashMap<Vec<u32>, BiPolynomial<T>> = HashMap::new();
    let mut total = BiPolynomial::zero();
    let mut choice = vec![0usize; ps.len()];
    'outer: loop {
        let mut factors: Vec<u32> = Vec::new();
        let mut group_of: Vec<usize> = Vec::new();
        let mut coeff: i64 = 1;
        for (j, exp) in expansions.iter().enumerate() {
            let (mono, c) = &exp[choice[j]];
            coeff *= c;
            for &l in mono {
                factors.push(l);
                group_of.push(j);
            }
        }
        let contribution =
            connected_cumulant_over_groups(&factors, &group_of, ps.len(), v_out, v_in, &mut cache)?;
        total = total.add(&contribution.scale(&T::from_int(coeff)));

        let mut j = 0;
        loop {
            choice[j] += 1;
            if choice[j] < expansions[j].len() {
                break;
            }
            choice[j] = 0;
            j += 1;
            if j == ps.len() {
                break 'outer;
            }
        }
    }
    Ok(total)
}

/// κ of products via connected set partitions: Σ over partitions σ of the
/// factors with σ ∨ grouping connected, of Π_B κ(T-factors in B).
fn connected_cumulant_over_groups<T: Scalar>(
    factors: &[u32],
    group_of: &[usize],
    n_groups: usize,
    v_out: &Specialization<T>,
    v_in: &Specialization<T>,
    cache: &mut HashMap<Vec<u32>, BiPolynomial<T>>,
) -> Result<BiPolynomial<T>, RibbonError> {
    let n = factors.len();
    let mut total = BiPolynomial::zero();
    for rgs in set_partitions(n) {
        let blocks = 1 + rgs.iter().copied().max().unwrap_or(0);
        let mut dsu = Dsu::new(n_groups + blocks);
        for (i, &b) in rgs.iter().enumerate() {
            dsu.union(group_of[i], n_groups + b);
        }
        if dsu.component_count() != 1 {
            continue;
        }
        let mut term = BiPolynomial::constant(T::one());
        for b in 0..blocks {
            let mut lens: Vec<u32> = (0..n)
                .filter(|&i| rgs[i] == b)
                .map(|i| factors[i])
                .collect();
            lens.sort_unstable();
            let w = cached_cumulant(&lens, v_out, v_in, cache)?;
            term = term.mul(&w);
        }
        total = total.add(&term);
    }
    Ok(total)
}

fn cached_cumulant<T: Scalar>(
    lens: &[u32],
    v_out: &Specialization<T>,
    v_in: &Specialization<T>,
    cache: &mut HashMap<Vec<u32>, BiPolynomial<T>>,
) -> Result<BiPolynomial<T>, RibbonError> {
    if let Some(w) = cache.get(lens) {
        return Ok(w.clone());
    }
    let w = cumulants_poly(lens, v_out, v_in)?;
    cache.insert(lens.to_vec(), w.clone());
    Ok(w)
}

/// Moments reassembled from cumulants over set partitions: E[Π] = Σ_π Π_B κ(B).
/// Independent cross-check of the two graded sums.
pub fn moments_from_cumulants<T: Scalar>(
    lengths: &[u32],
    v_out: &Specialization<T>,
    v_in: &Specialization<T>,
) -> Result<BiPolynomial<T>, RibbonError> {
    let n = lengths.len();
    let mut cache: HashMap<Vec<u32>, BiPolynomial<T>> = HashMap::new();
    let mut total = BiPolynomial::zero();
    for rgs in set_partitions(n) {
        let blocks = 1 + rgs.iter().copied().max().unwrap_or(0);
        let mut term = BiPolynomial::constant(T::one());
        for b in 0..blocks {
            let mut lens: Vec<u32> = (0..n)
                .filter(|&i| rgs[i] == b)
                .map(|i| lengths[i])
                .collect();
            lens.sort_unstable();
            let w = cached_cumulant(&lens, v_out, v_in, &mut cache)?;
            term = term.mul(&w);
        }
        total = total.add(&term);
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rat;
    use num_complex::Complex64;

    fn v_pl() -> Specialization<Rat> {
        Specialization::plancherel()
    }

    fn two_mode() -> Specialization<Rat> {
        Specialization::new(
            vec![(1, Rat::from_int(1)), (2, Rat::from_ratio(1, 2))],
            None,
        )
    }

    #[test]
    fn sliding_path_enumeration_small() {
        assert_eq!(enumerate_sliding_paths(1, 3).len(), 1);
        let two = enumerate_sliding_paths(2, 1);
        assert_eq!(
            two,
            vec![
                SlidingPath::new(vec![0, 0, 0]),
                SlidingPath::new(vec![0, 1, 0])
            ]
        );
        let three = enumerate_sliding_paths(3, 1);
        assert_eq!(three.len(), 4);
        assert_eq!(
            three,
            vec![
                SlidingPath::new(vec![0, 0, 0, 0]),
                SlidingPath::new(vec![0, 0, 1, 0]),
                SlidingPath::new(vec![0, 1, 0, 0]),
                SlidingPath::new(vec![0, 1, 1, 0]),
            ]
        );
    }

    #[test]
    fn motzkin_slide_weight_is_product_of_heights() {
        // length 18, slides at heights 2, 2, 5, 4, all jumps +-1
        let heights = vec![0, 1, 2, 2, 2, 3, 4, 5, 5, 4, 4, 3, 2, 1, 0, 1, 0, 1, 0];
        let path = RibbonPath::new(vec![SlidingPath::new(heights)], vec![]).unwrap();
        let w = path_weight(&path, &v_pl(), &v_pl());
        assert_eq!(w.value, Rat::from_int(80)); // 2*2*5*4
        assert_eq!(w.slides, 4);
        assert_eq!(w.pairings, 0);
    }

    #[test]
    fn catalan_path_weight_is_one() {
        let heights = vec![0, 1, 2, 1, 2, 1, 0];
        let path = RibbonPath::new(vec![SlidingPath::new(heights)], vec![]).unwrap();
        assert_eq!(path_weight(&path, &v_pl(), &v_pl()).value, Rat::one());
        // a jump outside the support kills the weight, not an error
        let heights = vec![0, 2, 0];
        let path = RibbonPath::new(vec![SlidingPath::new(heights)], vec![]).unwrap();
        assert!(path_weight(&path, &v_pl(), &v_pl()).value.is_zero());
    }

    #[test]
    fn three_site_paired_weight() {
        // sites (0,1,2,0), (0,1,0), (0,2,3,4,0); pairings: size 2 joining the
        // -2 on site 0 to the +2 on site 2, size 1 joining the -1 on site 1
        // to the +1 on site 2. Weight 2 * (V1_in)^4 * conj(V4_out).
        let sites = vec![
            SlidingPath::new(vec![0, 1, 2, 0]),
            SlidingPath::new(vec![0, 1, 0]),
            SlidingPath::new(vec![0, 2, 3, 4, 0]),
        ];
        let pairings = vec![
            Pairing {
                down: (0, 2),
                up: (2, 0),
                size: 2,
            },
            Pairing {
                down: (1, 1),
                up: (2, 1),
                size: 1,
            },
        ];
        let path = RibbonPath::new(sites, pairings).unwrap();
        let v4 = Specialization::<Rat>::new(
            vec![(1, Rat::gauss(1, 3, 1, 5)), (4, Rat::gauss(2, 7, -1, 2))],
            None,
        );
        let w = path_weight(&path, &v4, &v4);
        let v1 = v4.get(1).unwrap().clone();
        let v1_4 = v1.mul_ref(&v1).mul_ref(&v1).mul_ref(&v1);
        let expected = v1_4.mul_ref(&v4.get(4).unwrap().conj()).scale_int(2);
        assert_eq!(w.value, expected);
        assert_eq!(w.pairings, 2);
        assert_eq!(w.slides, 0);

        assert!(is_connected(&path));
        assert!(is_connected_decorated(&path, &[2, 1]));
        // no pairings on two sites -> disconnected
        let loose = RibbonPath::new(
            vec![
                SlidingPath::new(vec![0, 1, 0]),
                SlidingPath::new(vec![0, 1, 0]),
            ],
            vec![],
        )
        .unwrap();
        assert!(!is_connected(&loose));
        // one site, no pairings -> connected
        let single = RibbonPath::new(vec![SlidingPath::new(vec![0, 1, 0])], vec![]).unwrap();
        assert!(is_connected(&single));
    }

    #[test]
    fn pairing_validation() {
        // up before down is rejected
        let sites = vec![SlidingPath::new(vec![0, 1, 0])];
        let bad = RibbonPath::new(
            sites.clone(),
            vec![Pairing {
                down: (0, 1),
                up: (0, 0),
                size: 1,
            }],
        );
        assert!(bad.is_err());
        // degree mismatch is rejected
        let sites = vec![SlidingPath::new(vec![0, 2, 1, 0])];
        let bad = RibbonPath::new(
            sites,
            vec![Pairing {
                down: (0, 1),
                up: (0, 0),
                size: 2,
            }],
        );
        assert!(bad.is_err());
    }

    #[test]
    fn unpaired_profiles_single_site_example() {
        // length 18, one slide at height 2, pairings of sizes 3 and 1
        let heights = vec![0, 1, 2, 2, 6, 3, 4, 3, 2, 4, 2, 5, 6, 5, 6, 7, 2, 1, 0];
        let site = SlidingPath::new(heights);
        assert_eq!(site.steps()[2], 0); // the slide
        let pairings = vec![
            Pairing {
                down: (0, 4),
                up: (0, 10),
                size: 3,
            },
            Pairing {
                down: (0, 6),
                up: (0, 11),
                size: 1,
            },
        ];
        let path = RibbonPath::new(vec![site], pairings).unwrap();
        let (mu_out, mu_in) = unpaired_jump_profiles(&path);
        assert_eq!(mu_in, crate::Partition::new(vec![4, 2, 1, 1, 1, 1, 1]));
        assert_eq!(mu_out, crate::Partition::new(vec![5, 2, 1, 1, 1, 1]));
        assert_eq!(mu_in.size(), 11);
        assert_eq!(mu_out.size(), 11);
    }

    #[test]
    fn all_slide_path_has_empty_profiles() {
        // only slides: no jumps at all, so both unpaired profiles are empty
        let path = RibbonPath::new(vec![SlidingPath::new(vec![0, 0, 0, 0])], vec![]).unwrap();
        let (mu_out, mu_in) = unpaired_jump_profiles(&path);
        assert!(mu_out.is_empty());
        assert!(mu_in.is_empty());
    }

    #[test]
    fn szego_path_size_33() {
        let steps: Vec<i64> = vec![5, -5, 4, -4, 7, -5, 1, 3, -2, 1, -4, 4, 1, -6, 5, -4, 2, -3];
        let mut heights = vec![0u32];
        for s in steps {
            let h = i64::from(*heights.last().unwrap()) + s;
            heights.push(u32::try_from(h).expect("nonnegative"));
        }
        let path = RibbonPath::new(vec![SlidingPath::new(heights)], vec![]).unwrap();
        let (mu_out, mu_in) = unpaired_jump_profiles(&path);
        assert_eq!(mu_out.size(), 33);
        assert_eq!(mu_in.size(), 33);
        assert_eq!(path.slide_count(), 0);
    }

    #[test]
    fn single_site_length_two_sum() {
        // W((2)) picks up one Szego path per support element: sum |V_j|^2
        let w = cumulants_poly(&[2], &two_mode(), &two_mode()).unwrap();
        assert_eq!(w.num_terms(), 1);
        assert_eq!(w.coeff(0, 0), Rat::from_ratio(5, 4)); // 1 + 1/4
        let y = moments_poly(&[2], &two_mode(), &two_mode()).unwrap();
        assert_eq!(y, w); // n = 1: kappa_1 = E
    }

    #[test]
    fn catalan_numbers_from_szego_sums() {
        for (m, catalan) in [(1u32, 1i64), (2, 2), (3, 5), (4, 14), (5, 42)] {
            let w = cumulants_poly(&[2 * m], &v_pl(), &v_pl()).unwrap();
            assert_eq!(w.coeff(0, 0), Rat::from_int(catalan), "m = {m}");
        }
    }

    #[test]
    fn moments_length_three_is_ebar() {
        let y = moments_poly(&[3], &v_pl(), &v_pl()).unwrap();
        assert_eq!(y.num_terms(), 1);
        assert_eq!(y.coeff(0, 1), Rat::one());
    }

    #[test]
    fn two_sites_length_two() {
        // connected part: single cross pairing of size 1, coefficient 1 at (1,0)
        let w = cumulants_poly(&[2, 2], &v_pl(), &v_pl()).unwrap();
        assert_eq!(w.num_terms(), 1);
        assert_eq!(w.coeff(1, 0), Rat::one());
        // full moment: disconnected square plus the pairing term
        let y = moments_poly(&[2, 2], &v_pl(), &v_pl()).unwrap();
        assert_eq!(y.coeff(0, 0), Rat::one());
        assert_eq!(y.coeff(1, 0), Rat::one());
        assert_eq!(y.num_terms(), 2);
    }

    #[test]
    fn c_count_examples() {
        let k1 = crate::Partition::new(vec![1]);
        let k3 = crate::Partition::new(vec![3]);
        // one Szego path per k
        let c = c_count(&[2], &k3, &k3).unwrap();
        assert_eq!(c.get(&(0, 0)), Some(&1));
        assert_eq!(c.len(), 1);
        // degree balance impossible
        let c = c_count(
            &[2],
            &crate::Partition::new(vec![1]),
            &crate::Partition::new(vec![2]),
        );
        assert!(c.is_err()); // sizes differ -> error
        let c = c_count(
            &[2],
            &crate::Partition::new(vec![1, 1]),
            &crate::Partition::new(vec![2]),
        )
        .unwrap();
        assert!(c.is_empty());
        // the path (0,1,1,0): one slide at height 1
        let c = c_count(&[3], &k1, &k1).unwrap();
        assert_eq!(c.get(&(0, 1)), Some(&1));
    }

    #[test]
    fn c_count_reconstructs_w_sum() {
        let v = two_mode();
        for lengths in [vec![2u32], vec![3], vec![4], vec![2, 2], vec![3, 2]] {
            let w = cumulants_poly(&lengths, &v, &v).unwrap();
            let total: u32 = lengths.iter().sum();
            let mut rebuilt = BiPolynomial::<Rat>::zero();
            for d in 0..=total {
                for mu_out in crate::partition::partitions_of_size(d) {
                    if mu_out.parts().first().copied().unwrap_or(0) > 2 {
                        continue;
                    }
                    for mu_in in crate::partition::partitions_of_size(d) {
                        if mu_in.parts().first().copied().unwrap_or(0) > 2 {
                            continue;
                        }
                        let c = c_count(&lengths, &mu_out, &mu_in).unwrap();
                        if c.is_empty() {
                            continue;
                        }
                        let factor = v
                            .eval_monomial(&mu_out)
                            .conj()
                            .mul_ref(&v.eval_monomial(&mu_in));
                        for (&(q, m), &count) in &c {
                            rebuilt.add_term(q, m, factor.scale_int(count as i64));
                        }
                    }
                }
            }
            assert_eq!(rebuilt, w, "lengths {lengths:?}");
        }
    }

    /// Brute-force oracle: enumerate site tuples over `enumerate_sliding_paths`
    /// with a generous jump bound, then all pairings by a direct matcher.
    fn brute_sums(
        lengths: &[u32],
        v_out: &Specialization<Rat>,
        v_in: &Specialization<Rat>,
    ) -> GradedSums<Rat> {
        let total: u32 = lengths.iter().sum();
        let kmax = v_out.max_index().max(v_in.max_index());
        let bound = kmax * total; // deliberately looser than the engine's cap
        let mut acc = GradedSums {
            all: BiPolynomial::zero(),
            connected: BiPolynomial::zero(),
        };
        let per_site: Vec<Vec<SlidingPath>> = lengths
            .iter()
            .map(|&l| enumerate_sliding_paths(l, bound))
            .collect();
        let mut choice = vec![0usize; lengths.len()];
        loop {
            let sites: Vec<SlidingPath> = choice
                .iter()
                .enumerate()
                .map(|(a, &i)| per_site[a][i].clone())
                .collect();
            // all steps in global order
            let mut steps: Vec<(StepRef, i64)> = Vec::new();
            for (a, s) in sites.iter().enumerate() {
                for (t, d) in s.steps().into_iter().enumerate() {
                    steps.push(((a, t), d));
                }
            }
            let mut pairings_acc: Vec<Vec<Pairing>> = Vec::new();
            let mut current: Vec<Pairing> = Vec::new();
            fn rec(
                steps: &[(StepRef, i64)],
                i: usize,
                used: &mut Vec<StepRef>,
                current: &mut Vec<Pairing>,
                out: &mut Vec<Vec<Pairing>>,
            ) {
                if i == steps.len() {
                    out.push(current.clone());
                    return;
                }
                // option: leave step i out of any new pairing decision
                rec(steps, i + 1, used, current, out);
                let (down_ref, d) = steps[i];
                if d >= 0 || used.contains(&down_ref) {
                    return;
                }
                for j in i + 1..steps.len() {
                    let (up_ref, u) = steps[j];
                    if u == -d && !used.contains(&up_ref) {
                        used.push(down_ref);
                        used.push(up_ref);
                        current.push(Pairing {
                            down: down_ref,
                            up: up_ref,
                            size: u as u32,
                        });
                        rec(steps, i + 1, used, current, out);
                        current.pop();
                        used.pop();
                        used.pop();
                    }
                }
            }
            rec(&steps, 0, &mut Vec::new(), &mut current, &mut pairings_acc);
            for pairings in pairings_acc {
                let path = RibbonPath::new(sites.clone(), pairings).unwrap();
                let w = path_weight(&path, v_out, v_in);
                if w.value.is_zero() {
                    continue;
                }
                acc.all.add_term(w.pairings, w.slides, w.value.clone());
                if is_connected(&path) {
                    acc.connected.add_term(w.pairings, w.slides, w.value);
                }
            }
            // advance the tuple
            let mut a = 0;
            loop {
                if a == lengths.len() {
                    return acc;
                }
                choice[a] += 1;
                if choice[a] < per_site[a].len() {
                    break;
                }
                choice[a] = 0;
                a += 1;
            }
        }
    }

    #[test]
    fn backtracker_matches_brute_force() {
        let v = two_mode();
        for lengths in [vec![2u32], vec![3], vec![4], vec![2, 2], vec![3, 3]] {
            let fast = graded_sums(&lengths, &v, &v, SumOptions::default()).unwrap();
            let slow = brute_sums(&lengths, &v, &v);
            assert_eq!(fast.all, slow.all, "all, lengths {lengths:?}");
            assert_eq!(fast.connected, slow.connected, "connected, {lengths:?}");
        }
    }

    #[test]
    fn degree_bounds_hold() {
        let v = two_mode();
        for lengths in [vec![4u32], vec![2, 3], vec![2, 2, 2]] {
            let total: u32 = lengths.iter().sum();
            let n = lengths.len() as u32;
            let sums = graded_sums(&lengths, &v, &v, SumOptions::default()).unwrap();
            for ((q, m), _) in sums.all.terms() {
                assert!(q <= total / 2);
                assert!(m <= total);
            }
            if let Some(min_q) = sums.connected.min_hbar_power() {
                assert!(min_q >= n - 1, "cumulant hbar grading");
            }
        }
    }

    #[test]
    fn moment_cumulant_consistency() {
        let v = two_mode();
        for lengths in [vec![2u32, 2], vec![3, 2], vec![2, 2, 2], vec![3, 2, 2]] {
            let direct = moments_poly(&lengths, &v, &v).unwrap();
            let assembled = moments_from_cumulants(&lengths, &v, &v).unwrap();
            assert_eq!(direct, assembled, "lengths {lengths:?}");
        }
    }

    #[test]
    fn symmetry_relation_coefficientwise() {
        // W(l | -v, -v) at (0, m) carries (-1)^(l + m) relative to W(l | v, v)
        let v = two_mode();
        let neg = v.negate();
        for l in 1..=6u32 {
            let w = cumulants_poly(&[l], &v, &v).unwrap();
            let wn = cumulants_poly(&[l], &neg, &neg).unwrap();
            for ((q, m), c) in w.terms() {
                if q != 0 {
                    continue;
                }
                let sign = if (l + m) % 2 == 0 { 1 } else { -1 };
                assert_eq!(wn.coeff(0, m), c.scale_int(sign), "l={l}, m={m}");
            }
        }
    }

    #[test]
    fn kmk_monomial_expansions() {
        // O_2 = 2 T_2 - T_1^2
        let o2 = kmk_monomials(2);
        assert!(o2.contains(&(vec![2], 2)));
        assert!(o2.contains(&(vec![1, 1], -1)));
        assert_eq!(o2.len(), 2);
        // O_4 = 4T_4 - 4T_1T_3 - 2T_2^2 + 4T_1^2 T_2 - T_1^4
        let o4 = kmk_monomials(4);
        assert!(o4.contains(&(vec![4], 4)));
        assert!(o4.contains(&(vec![1, 3], -4)));
        assert!(o4.contains(&(vec![2, 2], -2)));
        assert!(o4.contains(&(vec![1, 1, 2], 4)));
        assert!(o4.contains(&(vec![1, 1, 1, 1], -1)));
    }

    #[test]
    fn decorated_cumulants_basics() {
        let v = two_mode();
        // kappa_1(O_2) = 2 E[T_2] with E[T_2] = sum |V_k|^2 at (0,0)
        let k1 = decorated_cumulants_poly(&[2], &v, &v).unwrap();
        assert_eq!(k1.coeff(0, 0), Rat::from_ratio(5, 2));
        // Plancherel: kappa_2(O_2, O_2) = 4 kappa_2(T_2, T_2) = 4 hbar
        let k2 = decorated_cumulants_poly(&[2, 2], &v_pl(), &v_pl()).unwrap();
        assert_eq!(k2.num_terms(), 1);
        assert_eq!(k2.coeff(1, 0), Rat::from_int(4));
        // O_1 vanishes identically
        let k = decorated_cumulants_poly(&[1, 2], &v_pl(), &v_pl()).unwrap();
        assert!(k.is_zero());
    }

    #[test]
    fn decorated_cumulants_hbar_floor() {
        let v = v_pl();
        for ps in [vec![2u32, 2, 2], vec![3, 2, 2], vec![2, 2, 3]] {
            let k = decorated_cumulants_poly(&ps, &v, &v).unwrap();
            if let Some(q) = k.min_hbar_power() {
                assert!(q >= ps.len() as u32 - 1, "ps {ps:?}");
            }
        }
    }

    #[test]
    fn parallel_matches_single_thread() {
        let v = two_mode().to_numeric();
        let lengths = [4u32, 3];
        let single = graded_sums(&lengths, &v, &v, SumOptions::default()).unwrap();
        let multi = graded_sums(
            &lengths,
            &v,
            &v,
            SumOptions {
                prune_zero_slides: true,
                threads: 3,
            },
        )
        .unwrap();
        for ((q, m), c) in single.all.terms() {
            let d = multi.all.coeff(q, m);
            assert!(
                (c.to_complex() - d.to_complex()).norm() <= 1e-12 * (1.0 + c.to_complex().norm()),
                "({q},{m})"
            );
        }
        assert_eq!(single.all.num_terms(), multi.all.num_terms());
    }

    #[test]
    fn zero_slide_enumeration_flag_changes_nothing() {
        let v = two_mode();
        let default = graded_sums(&[3, 2], &v, &v, SumOptions::default()).unwrap();
        let full = graded_sums(
            &[3, 2],
            &v,
            &v,
            SumOptions {
                prune_zero_slides: false,
                threads: 1,
            },
        )
        .unwrap();
        assert_eq!(default.all, full.all);
        assert_eq!(default.connected, full.connected);
    }

    #[test]
    fn set_partition_counts_are_bell_numbers() {
        for (n, bell) in [(0usize, 1usize), (1, 1), (2, 2), (3, 5), (4, 15), (5, 52)] {
            assert_eq!(set_partitions(n).len(), bell);
        }
    }

    #[test]
    fn numeric_mode_agrees_with_exact() {
        let v = two_mode();
        let vn = v.to_numeric();
        let exact = moments_poly(&[4, 2], &v, &v).unwrap();
        let numeric = moments_poly::<Complex64>(&[4, 2], &vn, &vn).unwrap();
        for ((q, m), c) in exact.terms() {
            let z = numeric.coeff(q, m);
            assert!((z - c.to_complex()).norm() < 1e-12 * (1.0 + c.to_complex().norm()));
        }
    }
}
