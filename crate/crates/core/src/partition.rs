//! Integer partitions: the sample space of all the measures in this crate.
//!
//! Partitions are stored as weakly decreasing positive parts, no trailing
//! zeros; the empty partition is a valid value everywhere. Enumeration of all
//! partitions of a given size is in reverse lexicographic order, so iteration
//! is deterministic and golden tests are stable.

use crate::params::AnisotropyParams;
use crate::scalar::Scalar;
use std::fmt;

/// A weakly decreasing sequence of positive integers.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    parts: Vec<u32>,
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", p)?;
        }
        write!(f, ")")
    }
}

impl Partition {
    /// Empty partition.
    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    /// Panics unless `parts` is weakly decreasing and strictly positive.
    pub fn new(parts: Vec<u32>) -> Self {
        assert!(
            parts.windows(2).all(|w| w[0] >= w[1]),
            "parts must be weakly decreasing"
        );
        assert!(parts.iter().all(|&p| p > 0), "parts must be positive");
        Partition { parts }
    }

    /// Builds from an unsorted list of positive entries, dropping zeros.
    pub fn from_unsorted(mut parts: Vec<u32>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition { parts }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    /// |λ|, the number of boxes.
    pub fn size(&self) -> u32 {
        self.parts.iter().sum()
    }

    /// l(λ), the number of parts.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// N'_k[μ]: the number of parts equal to `k`.
    pub fn multiplicity(&self, k: u32) -> u32 {
        self.parts.iter().filter(|&&p| p == k).count() as u32
    }

    /// Part lengths as (part value, multiplicity) pairs, largest part first.
    pub fn multiplicities(&self) -> Vec<(u32, u32)> {
        let mut out: Vec<(u32, u32)> = Vec::new();
        for &p in &self.parts {
            match out.last_mut() {
                Some((v, c)) if *v == p => *c += 1,
                _ => out.push((p, 1)),
            }
        }
        out
    }

    /// λ' with parts λ'_j = #{i : λ_i >= j}.
    pub fn transpose(&self) -> Partition {
        if self.parts.is_empty() {
            return Partition::empty();
        }
        let cols = self.parts[0] as usize;
        let mut t = Vec::with_capacity(cols);
        for j in 1..=cols as u32 {
            t.push(self.parts.iter().filter(|&&p| p >= j).count() as u32);
        }
        Partition { parts: t }
    }

    /// Row/column coordinates (1-based) of every box.
    pub fn boxes(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.parts
            .iter()
            .enumerate()
            .flat_map(|(i, &p)| (1..=p).map(move |j| (i as u32 + 1, j)))
    }

    /// Positions (1-based row, col) where a box may be added keeping the shape
    /// a partition. Rows with equal lengths contribute a single position.
    pub fn addable_cells(&self) -> Vec<(u32, u32)> {
        let mut out = Vec::new();
        for i in 0..self.parts.len() {
            if i == 0 || self.parts[i] < self.parts[i - 1] {
                out.push((i as u32 + 1, self.parts[i] + 1));
            }
        }
        out.push((self.parts.len() as u32 + 1, 1));
        out
    }

    /// Positions of boxes that may be removed keeping the shape a partition.
    pub fn removable_cells(&self) -> Vec<(u32, u32)> {
        let mut out = Vec::new();
        for i in 0..self.parts.len() {
            if i + 1 == self.parts.len() || self.parts[i] > self.parts[i + 1] {
                out.push((i as u32 + 1, self.parts[i]));
            }
        }
        out
    }

    /// Adds one part of size `k`.
    pub fn push_part(&self, k: u32) -> Partition {
        let mut parts = self.parts.clone();
        let pos = parts.partition_point(|&p| p >= k);
        parts.insert(pos, k);
        Partition { parts }
    }

    /// Removes one part of size `k`; `None` if absent.
    pub fn remove_part(&self, k: u32) -> Option<Partition> {
        let pos = self.parts.iter().position(|&p| p == k)?;
        let mut parts = self.parts.clone();
        parts.remove(pos);
        Some(Partition { parts })
    }
}

/// Scaled content ε₂(i-1) + ε₁(j-1) of the box in row `i`, column `j`.
pub fn content<T: Scalar>(row: u32, col: u32, params: &AnisotropyParams<T>) -> T {
    let a = params.eps2().scale_int(i64::from(row) - 1);
    let b = params.eps1().scale_int(i64::from(col) - 1);
    a.add_ref(&b)
}

/// All partitions of size `d` in reverse lexicographic order:
/// `(d)` first, `(1,…,1)` last.
pub fn partitions_of_size(d: u32) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut current: Vec<u32> = Vec::new();
    descend(d, u32::MAX, &mut current, &mut out);
    out
}

fn descend(remaining: u32, max_part: u32, current: &mut Vec<u32>, out: &mut Vec<Partition>) {
    if remaining == 0 {
        out.push(Partition {
            parts: current.clone(),
        });
        return;
    }
    let hi = remaining.min(max_part);
    for part in (1..=hi).rev() {
        current.push(part);
        descend(remaining - part, part, current, out);
        current.pop();
    }
}

/// p(d) via the pentagonal number recurrence, independent of the enumerator.
pub fn partition_count(d: u32) -> u64 {
    let n = d as usize;
    let mut table = vec![0u64; n + 1];
    table[0] = 1;
    for i in 1..=n {
        let mut sum: i128 = 0;
        let mut k: i64 = 1;
        loop {
            let g1 = (k * (3 * k - 1) / 2) as usize;
            if g1 > i {
                break;
            }
            let sign: i128 = if k % 2 == 1 { 1 } else { -1 };
            sum += sign * table[i - g1] as i128;
            let g2 = (k * (3 * k + 1) / 2) as usize;
            if g2 <= i {
                sum += sign * table[i - g2] as i128;
            }
            k += 1;
        }
        table[i] = u64::try_from(sum).expect("partition count overflow");
    }
    table[n]
}

/// Dominance order test: does `a` dominate `b`? Requires equal sizes.
pub fn dominates(a: &Partition, b: &Partition) -> bool {
    debug_assert_eq!(a.size(), b.size());
    let mut sa = 0u64;
    let mut sb = 0u64;
    let rows = a.len().max(b.len());
    for i in 0..rows {
        sa += u64::from(*a.parts().get(i).unwrap_or(&0));
        sb += u64::from(*b.parts().get(i).unwrap_or(&0));
        if sa < sb {
            return false;
        }
    }
    true
}
