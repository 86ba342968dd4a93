//! Coalitions as bitmasks, payoff tables over them, and the kernel weights
//! used by the weighted least-squares view of Shapley attribution.
//!
//! Feature `j` (0-based) is in a coalition exactly when bit `j` of the mask
//! is set, so the integer value of a mask doubles as its position in a fully
//! enumerated table.

use std::fmt;
use std::ops::Range;
use std::path::Path;

use crate::error::{Result, SisrError};
use crate::rng::SplitMix64;

/// Largest feature count for which full enumeration is allowed.
pub const MAX_ENUMERATION_P: usize = 20;
/// Largest feature count a mask can represent.
pub const MAX_P: usize = 30;

/// A subset of `p` features packed into the low bits of a `u32`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CoalitionMask {
    bits: u32,
    p: u8,
}

impl CoalitionMask {
    pub fn new(bits: u32, p: usize) -> Result<Self> {
        if p == 0 || p > MAX_P {
            return Err(SisrError::Domain(format!(
                "feature count must lie in 1..={MAX_P}, got {p}"
            )));
        }
        if p < 32 && bits >> p != 0 {
            return Err(SisrError::Structural(format!(
                "mask {bits} has bits above feature count {p}"
            )));
        }
        Ok(Self { bits, p: p as u8 })
    }

    pub fn empty(p: usize) -> Result<Self> {
        Self::new(0, p)
    }

    pub fn full(p: usize) -> Result<Self> {
        Self::new(((1u64 << p) - 1) as u32, p)
    }

    pub fn bits(self) -> u32 {
        self.bits
    }

    pub fn p(self) -> usize {
        self.p as usize
    }

    pub fn size(self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn contains(self, feature: usize) -> bool {
        feature < self.p() && self.bits >> feature & 1 == 1
    }

    pub fn is_empty(self) -> bool {
        self.bits == 0
    }

    pub fn is_full(self) -> bool {
        self.size() == self.p()
    }

    /// 0-based indices of the member features, ascending.
    pub fn members(self) -> impl Iterator<Item = usize> {
        let bits = self.bits;
        (0..self.p()).filter(move |j| bits >> j & 1 == 1)
    }

    pub fn with_feature(self, feature: usize) -> Result<Self> {
        if feature >= self.p() {
            return Err(SisrError::Domain(format!(
                "feature {feature} out of range for p = {}",
                self.p()
            )));
        }
        Self::new(self.bits | 1 << feature, self.p())
    }
}

impl fmt::Debug for CoalitionMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CoalitionMask({:0width$b})", self.bits, width = self.p())
    }
}

/// All `2^p` coalition masks in ascending integer order.
pub fn enumerate_masks(p: usize) -> Result<Vec<CoalitionMask>> {
    if p == 0 || p > MAX_ENUMERATION_P {
        return Err(SisrError::Capacity {
            p,
            budget: 1u128 << p.min(127),
            max_p: MAX_ENUMERATION_P,
        });
    }
    (0..1u32 << p).map(|bits| CoalitionMask::new(bits, p)).collect()
}

/// Payoff values keyed by coalition, sorted by mask value. The empty and the
/// grand coalition are always present; a table holding all `2^p` masks is a
/// full enumeration.
#[derive(Debug, Clone)]
pub struct PayoffTable {
    p: usize,
    masks: Vec<CoalitionMask>,
    values: Vec<f64>,
    full_enumeration: bool,
}

impl PayoffTable {
    /// Builds a table from unordered `(mask, value)` pairs over `p` features.
    pub fn from_entries(p: usize, entries: Vec<(CoalitionMask, f64)>) -> Result<Self> {
        if p == 0 || p > MAX_P {
            return Err(SisrError::Domain(format!(
                "feature count must lie in 1..={MAX_P}, got {p}"
            )));
        }
        let mut entries = entries;
        entries.sort_by_key(|(m, _)| m.bits());
        for window in entries.windows(2) {
            if window[0].0.bits() == window[1].0.bits() {
                return Err(SisrError::Structural(format!(
                    "duplicate coalition mask {}",
                    window[0].0.bits()
                )));
            }
        }
        let full_bits = CoalitionMask::full(p)?.bits();
        for (mask, value) in &entries {
            if mask.p() != p {
                return Err(SisrError::Structural(format!(
                    "mask {} was built for p = {}, table has p = {p}",
                    mask.bits(),
                    mask.p()
                )));
            }
            if !value.is_finite() {
                return Err(SisrError::Data(format!(
                    "non-finite payoff {} at mask {}",
                    value,
                    mask.bits()
                )));
            }
        }
        match entries.first() {
            Some((m, _)) if m.bits() == 0 => {}
            _ => {
                return Err(SisrError::Structural(
                    "table is missing the empty coalition (mask 0)".into(),
                ))
            }
        }
        match entries.last() {
            Some((m, _)) if m.bits() == full_bits => {}
            _ => {
                return Err(SisrError::Structural(format!(
                    "table is missing the grand coalition (mask {full_bits})"
                )))
            }
        }
        let full_enumeration = entries.len() as u64 == 1u64 << p;
        let (masks, values) = entries.into_iter().unzip();
        Ok(Self {
            p,
            masks,
            values,
            full_enumeration,
        })
    }

    /// Builds a fully enumerated table; `values[m]` belongs to mask `m`.
    pub fn full(p: usize, values: Vec<f64>) -> Result<Self> {
        let masks = enumerate_masks(p)?;
        if values.len() != masks.len() {
            return Err(SisrError::Structural(format!(
                "expected {} values for p = {p}, got {}",
                masks.len(),
                values.len()
            )));
        }
        Self::from_entries(p, masks.into_iter().zip(values).collect())
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn len(&self) -> usize {
        self.masks.len()
    }

    pub fn is_empty(&self) -> bool {
        false // a valid table always holds at least two entries
    }

    pub fn is_full_enumeration(&self) -> bool {
        self.full_enumeration
    }

    /// True when the baseline has been subtracted off, i.e. the empty
    /// coalition pays exactly zero.
    pub fn is_baseline_adjusted(&self) -> bool {
        self.values[0] == 0.0
    }

    pub fn masks(&self) -> &[CoalitionMask] {
        &self.masks
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn entry(&self, i: usize) -> (CoalitionMask, f64) {
        (self.masks[i], self.values[i])
    }

    /// Value for a mask, by direct index on full tables and by binary search
    /// otherwise.
    pub fn value_of(&self, mask: CoalitionMask) -> Option<f64> {
        if self.full_enumeration {
            return self.values.get(mask.bits() as usize).copied();
        }
        self.masks
            .binary_search_by_key(&mask.bits(), |m| m.bits())
            .ok()
            .map(|i| self.values[i])
    }

    pub fn baseline(&self) -> f64 {
        self.values[0]
    }
}

/// Subtracts the empty coalition's payoff from every entry. Applying it
/// twice changes nothing, because the baseline of an adjusted table is zero.
pub fn baseline_adjust(table: &PayoffTable) -> PayoffTable {
    let base = table.baseline();
    let mut out = table.clone();
    if base != 0.0 {
        for v in &mut out.values {
            *v -= base;
        }
        out.values[0] = 0.0;
    }
    out
}

/// Kernel weight for a coalition of size `k` out of `p` features:
/// `(p - 1) / (C(p, k) * k * (p - k))`. Undefined at the empty and grand
/// coalitions, whose weights diverge.
pub fn shapley_kernel_weight(p: usize, k: usize) -> Result<f64> {
    if p < 2 {
        return Err(SisrError::Domain(format!(
            "kernel weights need at least two features, got p = {p}"
        )));
    }
    if k == 0 || k >= p {
        return Err(SisrError::Domain(format!(
            "kernel weight undefined for coalition size {k} with p = {p}"
        )));
    }
    Ok((p as f64 - 1.0) / (binomial(p, k) * k as f64 * (p - k) as f64))
}

/// `C(n, k)` in floating point, exact for every size this crate enumerates.
pub(crate) fn binomial(n: usize, k: usize) -> f64 {
    let k = k.min(n - k);
    let mut acc = 1.0_f64;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc
}

/// Per-entry regression weights for a payoff table. Proper coalitions carry
/// the kernel weight of their size; the empty and grand coalitions stand in
/// for infinite weight with `multiplier` times the largest finite weight.
#[derive(Debug, Clone)]
pub struct WeightVector {
    weights: Vec<f64>,
    infinite_multiplier: f64,
}

impl WeightVector {
    /// In-crate escape hatch for tests and harnesses needing raw weights.
    #[cfg(test)]
    pub(crate) fn from_raw(weights: Vec<f64>, infinite_multiplier: f64) -> Self {
        Self {
            weights,
            infinite_multiplier,
        }
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn infinite_multiplier(&self) -> f64 {
        self.infinite_multiplier
    }

    /// Number of entries carrying a finite (kernel) weight.
    pub fn finite_count(&self) -> usize {
        self.weights.len() - 2
    }
}

/// Builds the weight vector aligned with `table`'s entries.
pub fn weight_vector(table: &PayoffTable, infinite_multiplier: f64) -> Result<WeightVector> {
    let p = table.p();
    if p < 2 {
        return Err(SisrError::Domain(
            "weight vector needs at least two features".into(),
        ));
    }
    if !(infinite_multiplier.is_finite() && infinite_multiplier > 0.0) {
        return Err(SisrError::Domain(format!(
            "infinite-weight multiplier must be positive and finite, got {infinite_multiplier}"
        )));
    }
    // Largest finite kernel weight sits at sizes 1 and p - 1.
    let cap = infinite_multiplier * shapley_kernel_weight(p, 1)?;
    let weights = table
        .masks()
        .iter()
        .map(|m| {
            if m.is_empty() || m.is_full() {
                Ok(cap)
            } else {
                shapley_kernel_weight(p, m.size())
            }
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(WeightVector {
        weights,
        infinite_multiplier,
    })
}

/// 0/1 membership matrix with one row per coalition and one column per
/// feature, stored as the masks themselves.
#[derive(Debug, Clone)]
pub struct IncidenceMatrix {
    p: usize,
    masks: Vec<CoalitionMask>,
}

impl IncidenceMatrix {
    pub fn n_rows(&self) -> usize {
        self.masks.len()
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn mask(&self, row: usize) -> CoalitionMask {
        self.masks[row]
    }

    pub fn masks(&self) -> &[CoalitionMask] {
        &self.masks
    }

    pub fn entry(&self, row: usize, feature: usize) -> f64 {
        if self.masks[row].contains(feature) {
            1.0
        } else {
            0.0
        }
    }

    /// `Z gamma`, skipping zero coefficients so sparse vectors cost
    /// `O(rows * nnz)`.
    pub fn times(&self, gamma: &[f64]) -> Vec<f64> {
        debug_assert_eq!(gamma.len(), self.p);
        let support: Vec<(usize, f64)> = gamma
            .iter()
            .copied()
            .enumerate()
            .filter(|(_, g)| *g != 0.0)
            .collect();
        self.masks
            .iter()
            .map(|m| {
                let bits = m.bits();
                support
                    .iter()
                    .filter(|(j, _)| bits >> *j & 1 == 1)
                    .map(|(_, g)| g)
                    .sum()
            })
            .collect()
    }

    /// `Z^T d` where `d` is any per-row vector (often `W t`).
    pub fn transpose_times(&self, d: &[f64]) -> Vec<f64> {
        debug_assert_eq!(d.len(), self.masks.len());
        let mut out = vec![0.0; self.p];
        for (mask, value) in self.masks.iter().zip(d) {
            for j in mask.members() {
                out[j] += value;
            }
        }
        out
    }
}

/// Wraps a mask list as an incidence matrix, checking the rows agree on `p`.
pub fn incidence_matrix(masks: &[CoalitionMask]) -> Result<IncidenceMatrix> {
    let p = match masks.first() {
        Some(m) => m.p(),
        None => {
            return Err(SisrError::Structural(
                "incidence matrix needs at least one row".into(),
            ))
        }
    };
    if let Some(bad) = masks.iter().find(|m| m.p() != p) {
        return Err(SisrError::Structural(format!(
            "mask {} was built for p = {}, expected {p}",
            bad.bits(),
            bad.p()
        )));
    }
    Ok(IncidenceMatrix {
        p,
        masks: masks.to_vec(),
    })
}

/// Draws `m` distinct coalitions over `p` features, always including the
/// empty and grand coalitions. Proper coalitions are drawn by first picking
/// a size with probability proportional to `C(p, k)` times its kernel
/// weight, then a uniform coalition of that size, rejecting repeats. Asking
/// for at least `2^p` reduces to full enumeration.
pub fn sample_coalitions(p: usize, m: usize, seed: u64) -> Result<Vec<CoalitionMask>> {
    if p < 2 || p > MAX_P {
        return Err(SisrError::Domain(format!(
            "sampling needs 2 <= p <= {MAX_P}, got {p}"
        )));
    }
    if m < 2 {
        return Err(SisrError::Domain(format!(
            "sampling needs m >= 2 to cover the empty and grand coalitions, got {m}"
        )));
    }
    if p <= MAX_ENUMERATION_P && m as u64 >= 1u64 << p {
        return enumerate_masks(p);
    }
    let mut rng = SplitMix64::new(seed);
    // Size distribution: C(p,k) * w(p,k) is proportional to 1 / (k (p - k)).
    let size_weights: Vec<f64> = (1..p).map(|k| 1.0 / (k as f64 * (p - k) as f64)).collect();
    let total: f64 = size_weights.iter().sum();

    let mut seen = std::collections::HashSet::with_capacity(m);
    let mut picked = Vec::with_capacity(m);
    let empty = CoalitionMask::empty(p)?;
    let full = CoalitionMask::full(p)?;
    picked.push(empty);
    picked.push(full);
    seen.insert(empty.bits());
    seen.insert(full.bits());
    while picked.len() < m {
        let mut u = rng.next_f64() * total;
        let mut k = p - 1;
        for (i, w) in size_weights.iter().enumerate() {
            if u < *w {
                k = i + 1;
                break;
            }
            u -= w;
        }
        let mut bits = 0u32;
        for j in rng.choose_distinct(p, k) {
            bits |= 1 << j;
        }
        if seen.insert(bits) {
            picked.push(CoalitionMask::new(bits, p)?);
        }
    }
    picked.sort_by_key(|m| m.bits());
    Ok(picked)
}

const CSV_HEADER: &str = "mask,value";

/// Parses a payoff table from CSV text with header `mask,value`; masks are
/// decimal bitsets and the feature count is taken from the grand coalition.
pub fn parse_payoff_csv(text: &str) -> Result<PayoffTable> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header.trim() == CSV_HEADER => {}
        Some((_, header)) => {
            return Err(SisrError::Data(format!(
                "line 1: expected header '{CSV_HEADER}', found '{}'",
                header.trim()
            )))
        }
        None => return Err(SisrError::Data("payoff CSV is empty".into())),
    }
    let mut raw: Vec<(u32, f64)> = Vec::new();
    for (idx, line) in lines {
        let line_no = idx + 1;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let (mask_text, value_text) = line.split_once(',').ok_or_else(|| {
            SisrError::Data(format!("line {line_no}: expected 'mask,value', found '{line}'"))
        })?;
        let mask: u32 = mask_text.trim().parse().map_err(|_| {
            SisrError::Data(format!(
                "line {line_no}: mask '{}' is not a non-negative integer",
                mask_text.trim()
            ))
        })?;
        let value: f64 = value_text.trim().parse().map_err(|_| {
            SisrError::Data(format!(
                "line {line_no}: value '{}' is not a number",
                value_text.trim()
            ))
        })?;
        if !value.is_finite() {
            return Err(SisrError::Data(format!(
                "line {line_no}: value must be finite, found {value}"
            )));
        }
        raw.push((mask, value));
    }
    if raw.is_empty() {
        return Err(SisrError::Data("payoff CSV holds no data rows".into()));
    }
    if !raw.iter().any(|(m, _)| *m == 0) {
        return Err(SisrError::Data(
            "payoff CSV is missing the empty coalition (mask 0)".into(),
        ));
    }
    let max_mask = raw.iter().map(|(m, _)| *m).max().unwrap();
    let p = 32 - max_mask.leading_zeros() as usize;
    if p == 0 || p > MAX_P {
        return Err(SisrError::Data(format!(
            "largest mask {max_mask} implies an unsupported feature count"
        )));
    }
    let entries = raw
        .into_iter()
        .map(|(bits, v)| CoalitionMask::new(bits, p).map(|m| (m, v)))
        .collect::<Result<Vec<_>>>()?;
    PayoffTable::from_entries(p, entries).map_err(|e| match e {
        SisrError::Structural(msg) => SisrError::Data(msg),
        other => other,
    })
}

pub fn read_payoff_csv(path: &Path) -> Result<PayoffTable> {
    let text = std::fs::read_to_string(path)?;
    parse_payoff_csv(&text).map_err(|e| match e {
        SisrError::Data(msg) => SisrError::Data(format!("{}: {msg}", path.display())),
        other => other,
    })
}

/// Renders a table in the same CSV dialect `parse_payoff_csv` accepts, with
/// 17 significant digits so parsing back is lossless.
pub fn payoff_csv_string(table: &PayoffTable) -> String {
    let mut out = String::with_capacity(24 * (table.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for (mask, value) in table.masks().iter().zip(table.values()) {
        out.push_str(&format!("{},{:.16e}\n", mask.bits(), value));
    }
    out
}

/// Positions `0..n` grouped into maximal runs of equal table values; used by
/// tests and diagnostics that need tie structure without an order plan.
pub fn tie_ranges(sorted_values: &[f64]) -> Vec<Range<usize>> {
    let mut groups = Vec::new();
    let mut start = 0;
    for i in 1..=sorted_values.len() {
        if i == sorted_values.len() || sorted_values[i] != sorted_values[start] {
            groups.push(start..i);
            start = i;
        }
    }
    groups
}
