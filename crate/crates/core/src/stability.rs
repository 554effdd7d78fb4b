//! Degree tuples and the closed-form numbers attached to them: minimal
//! degree, section-space dimension, stability ranges, bundle ranks and the
//! vanishing regions of the first spectral-sequence page.

use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cox::degree_in_gsigma;
use crate::fan::Fan;
use crate::lattice::integer_kernel_basis;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StabilityError {
    #[error("degree tuple is empty")]
    EmptyTuple,
    #[error("m must be at least 1")]
    InvalidM,
    #[error("minimal degree {0} is below 1")]
    NonPositiveMinDegree(i64),
    #[error("k out of bundle range: k = {k}, need 1 <= k <= {d_min}")]
    KOutOfBundleRange { k: i64, d_min: i64 },
    #[error("k must be at least 1, got {0}")]
    KNotPositive(i64),
    #[error("tuple has length {found}, expected {expected}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("shift not positive")]
    ShiftNotPositive,
    #[error("shift not admissible")]
    ShiftNotAdmissible,
    #[error("A_t empty for t = {0}")]
    EmptyAt(i64),
    #[error("t must be at least 1")]
    TNotPositive,
    #[error("unknown kind {0:?}")]
    UnknownKind(String),
    #[error("arithmetic overflow")]
    Overflow,
}

/// Integer degrees d₁,…,d_r attached to the rays of a fan.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeTuple {
    pub degrees: Vec<i64>,
    /// Whether Σ d_k n_k = 0; `None` when no fan was supplied.
    pub admissible: Option<bool>,
}

impl DegreeTuple {
    pub fn new(degrees: Vec<i64>) -> Self {
        DegreeTuple {
            degrees,
            admissible: None,
        }
    }

    pub fn for_fan(fan: &Fan, degrees: Vec<i64>) -> Result<Self, StabilityError> {
        if degrees.len() != fan.ray_count() {
            return Err(StabilityError::LengthMismatch {
                expected: fan.ray_count(),
                found: degrees.len(),
            });
        }
        let admissible = degree_in_gsigma(fan, &degrees);
        Ok(DegreeTuple {
            degrees,
            admissible: Some(admissible),
        })
    }

    pub fn len(&self) -> usize {
        self.degrees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.degrees.is_empty()
    }

    pub fn d_min(&self) -> Result<i64, StabilityError> {
        self.degrees.iter().copied().min().ok_or(StabilityError::EmptyTuple)
    }
}

impl fmt::Display for DegreeTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.degrees.iter().map(i64::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Basis of all admissible degree tuples (the integer kernel of the ray matrix).
pub fn admissible_degrees(fan: &Fan) -> Vec<Vec<BigInt>> {
    integer_kernel_basis(&fan.ray_matrix())
}

/// 2 ≤ m ≤ 2(r_min − 1).
pub fn m_in_theorem_range(m: i64, r_min: i64) -> bool {
    2 <= m && m <= 2 * (r_min - 1)
}

/// (2·r_min − m − 1)·d_min − 2
pub fn stability_bound(d_min: i64, m: i64, r_min: i64) -> i64 {
    (2 * r_min - m - 1) * d_min - 2
}

/// (2·r_min − m − 1)·(⌊(d_min + 1)/2⌋ + 1) − 1
pub fn star_bound(d_min: i64, m: i64, r_min: i64) -> i64 {
    (2 * r_min - m - 1) * ((d_min + 1).div_euclid(2) + 1) - 1
}

fn positive_d_min(d: &DegreeTuple) -> Result<i64, StabilityError> {
    let d_min = d.d_min()?;
    if d_min < 1 {
        return Err(StabilityError::NonPositiveMinDegree(d_min));
    }
    Ok(d_min)
}

pub fn stability_dimension(d: &DegreeTuple, m: i64, r_min: i64) -> Result<i64, StabilityError> {
    if m < 1 {
        return Err(StabilityError::InvalidM);
    }
    Ok(stability_bound(positive_d_min(d)?, m, r_min))
}

pub fn star_dimension(d: &DegreeTuple, m: i64, r_min: i64) -> Result<i64, StabilityError> {
    if m < 1 {
        return Err(StabilityError::InvalidM);
    }
    Ok(star_bound(positive_d_min(d)?, m, r_min))
}

/// C(n, k) for n ≥ 0, with overflow detection.
fn binomial(n: i64, k: i64) -> Result<i64, StabilityError> {
    if k < 0 || n < 0 || k > n {
        return Ok(0);
    }
    let k = k.min(n - k);
    let mut acc: i128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as i128 / (i + 1) as i128;
        if acc > i64::MAX as i128 {
            return Err(StabilityError::Overflow);
        }
    }
    Ok(acc as i64)
}

/// Σ_k C(m + d_k − 1, m); a negative degree contributes nothing, and so
/// does degree 0 since C(m − 1, m) = 0.
pub fn ambient_dimension(d: &DegreeTuple, m: i64) -> Result<i64, StabilityError> {
    if m < 1 {
        return Err(StabilityError::InvalidM);
    }
    let mut total: i64 = 0;
    for &dk in &d.degrees {
        if dk < 0 {
            continue;
        }
        total = total.checked_add(binomial(m + dk - 1, m)?).ok_or(StabilityError::Overflow)?;
    }
    Ok(total)
}

/// 2·N_D − 2kr + k − 1, for 1 ≤ k ≤ d_min.
pub fn bundle_rank(d: &DegreeTuple, m: i64, r: i64, k: i64) -> Result<i64, StabilityError> {
    let d_min = d.d_min()?;
    if k < 1 || k > d_min {
        return Err(StabilityError::KOutOfBundleRange { k, d_min });
    }
    let n_d = ambient_dimension(d, m)?;
    checked_linear(&[(2, n_d), (-2 * k, r), (1, k), (1, -1)])
}

/// (m + 2r − 2·r_min)·k, for k ≥ 1.
pub fn config_space_dimension(m: i64, r: i64, r_min: i64, k: i64) -> Result<i64, StabilityError> {
    if k < 1 {
        return Err(StabilityError::KNotPositive(k));
    }
    (m + 2 * r - 2 * r_min).checked_mul(k).ok_or(StabilityError::Overflow)
}

fn checked_linear(terms: &[(i64, i64)]) -> Result<i64, StabilityError> {
    terms.iter().try_fold(0i64, |acc, &(a, b)| {
        a.checked_mul(b).and_then(|p| acc.checked_add(p)).ok_or(StabilityError::Overflow)
    })
}

/// D + a, for a positive admissible shift a.
pub fn shift_degree(fan: &Fan, d: &DegreeTuple, a: &[i64]) -> Result<DegreeTuple, StabilityError> {
    if a.len() != d.len() || a.len() != fan.ray_count() {
        return Err(StabilityError::LengthMismatch {
            expected: fan.ray_count(),
            found: a.len(),
        });
    }
    if a.iter().any(|&x| x < 1) {
        return Err(StabilityError::ShiftNotPositive);
    }
    if !degree_in_gsigma(fan, a) {
        return Err(StabilityError::ShiftNotAdmissible);
    }
    let degrees = d
        .degrees
        .iter()
        .zip(a)
        .map(|(x, y)| x.checked_add(*y).ok_or(StabilityError::Overflow))
        .collect::<Result<Vec<_>, _>>()?;
    DegreeTuple::for_fan(fan, degrees)
}

/// Which resolution's first page a support table describes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ResolutionKind {
    /// Truncated after the d_min-th term.
    Truncated,
    /// The same resolution for the shifted tuple D + a; only the k = 0
    /// column sees the shift.
    TruncatedShifted { shift: Vec<i64> },
    Veronese,
    Vassiliev,
}

impl ResolutionKind {
    pub fn parse(name: &str, shift: Option<Vec<i64>>) -> Result<Self, StabilityError> {
        match (name, shift) {
            ("truncated", _) => Ok(ResolutionKind::Truncated),
            ("truncated_shifted", Some(shift)) => Ok(ResolutionKind::TruncatedShifted { shift }),
            ("truncated_shifted", None) => Err(StabilityError::UnknownKind("truncated_shifted without a shift".into())),
            ("veronese", _) => Ok(ResolutionKind::Veronese),
            ("vassiliev", _) => Ok(ResolutionKind::Vassiliev),
            (other, _) => Err(StabilityError::UnknownKind(other.to_string())),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ResolutionKind::Truncated => "truncated",
            ResolutionKind::TruncatedShifted { .. } => "truncated_shifted",
            ResolutionKind::Veronese => "veronese",
            ResolutionKind::Vassiliev => "vassiliev",
        }
    }
}

/// Cells (k, s) of a first page marked zero when a vanishing statement
/// applies; every other cell is unknown, never claimed nonzero.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SupportTable {
    pub kind: ResolutionKind,
    pub d_min: i64,
    pub r_min: i64,
    pub m: i64,
    /// Section-space dimension used in the k = 0 column (of D + a for the
    /// shifted kind).
    pub n_d: i64,
    /// Display box: 0 ≤ k ≤ k_max, 0 ≤ s ≤ s_max.
    pub k_max: i64,
    pub s_max: i64,
}

impl SupportTable {
    fn slope(&self) -> i64 {
        2 * self.r_min - self.m
    }

    pub fn is_zero(&self, k: i64, s: i64) -> bool {
        let slope = self.slope();
        let d = self.d_min;
        match self.kind {
            ResolutionKind::Truncated | ResolutionKind::TruncatedShifted { .. } => {
                if k < 0 || k >= d + 2 {
                    true
                } else if k == 0 {
                    s != 2 * self.n_d - 1
                } else if k <= d {
                    s < slope * k
                } else {
                    // k = d_min + 1, bounded by the dimension of the cone stratum
                    s < slope * d
                }
            }
            ResolutionKind::Veronese | ResolutionKind::Vassiliev => k < 0 || s < 0 || s < slope * k,
        }
    }

    /// One line per k: `0` provably zero, `?` unknown, in increasing s.
    pub fn grid(&self) -> Vec<String> {
        (0..=self.k_max)
            .map(|k| (0..=self.s_max).map(|s| if self.is_zero(k, s) { '0' } else { '?' }).collect())
            .collect()
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "{} (d_min={}, r_min={}, m={}; rows k=0..{}, columns s=0..{})\n",
            self.kind.name(),
            self.d_min,
            self.r_min,
            self.m,
            self.k_max,
            self.s_max
        ));
        for (k, row) in self.grid().iter().enumerate() {
            out.push_str(&format!("k={k:<3} {row}\n"));
        }
        out
    }
}

pub fn e1_support(kind: ResolutionKind, d: &DegreeTuple, m: i64, r_min: i64) -> Result<SupportTable, StabilityError> {
    if m < 1 {
        return Err(StabilityError::InvalidM);
    }
    let d_min = positive_d_min(d)?;
    let n_d = match &kind {
        ResolutionKind::TruncatedShifted { shift } => {
            if shift.len() != d.len() {
                return Err(StabilityError::LengthMismatch {
                    expected: d.len(),
                    found: shift.len(),
                });
            }
            if shift.iter().any(|&a| a < 1) {
                return Err(StabilityError::ShiftNotPositive);
            }
            let shifted: Vec<i64> = d.degrees.iter().zip(shift).map(|(x, y)| x + y).collect();
            ambient_dimension(&DegreeTuple::new(shifted), m)?
        }
        _ => ambient_dimension(d, m)?,
    };
    let slope = 2 * r_min - m;
    Ok(SupportTable {
        kind,
        d_min,
        r_min,
        m,
        n_d,
        k_max: d_min + 2,
        s_max: (slope * (d_min + 1)).max(0) + 1,
    })
}

/// All strictly increasing l₁ < … < l_t with l₁ ≥ 1 and Σ l ≤ budget,
/// reported through their sums.
fn increasing_sequence_sums(t: i64, budget: i64, out: &mut Vec<i64>) {
    fn go(remaining: i64, min_next: i64, budget: i64, sum: i64, out: &mut Vec<i64>) {
        if remaining == 0 {
            out.push(sum);
            return;
        }
        let mut l = min_next;
        // the smallest completion uses l, l+1, …, l+remaining−1
        while sum + remaining * l + remaining * (remaining - 1) / 2 <= budget {
            go(remaining - 1, l + 1, budget, sum + l, out);
            l += 1;
        }
    }
    go(t, 1, budget, 0, out);
}

/// min{s − k} over the set of (k, s) with k = d_min + 1 − Σ l_j ≥ 0 and
/// s + Σ (l_j − 1) ≥ (2·r_min − m)·d_min, l strictly increasing and
/// positive, found by enumerating every admissible l.
pub fn a_t_minimum(d_min: i64, r_min: i64, m: i64, t: i64) -> Result<i64, StabilityError> {
    if t < 1 {
        return Err(StabilityError::TNotPositive);
    }
    let mut sums = Vec::new();
    increasing_sequence_sums(t, d_min + 1, &mut sums);
    sums.into_iter()
        .map(|sum| {
            let k = d_min + 1 - sum;
            let s = (2 * r_min - m) * d_min - (sum - t);
            s - k
        })
        .min()
        .ok_or(StabilityError::EmptyAt(t))
}

/// The same minimum in closed form: D₀ + t + 1 with D₀ = (2·r_min − m − 1)·d_min − 2,
/// whenever 1 + 2 + … + t ≤ d_min + 1.
pub fn a_t_closed_form(d_min: i64, r_min: i64, m: i64, t: i64) -> Result<i64, StabilityError> {
    if t < 1 {
        return Err(StabilityError::TNotPositive);
    }
    if t * (t + 1) / 2 > d_min + 1 {
        return Err(StabilityError::EmptyAt(t));
    }
    Ok(stability_bound(d_min, m, r_min) + t + 1)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BundleRow {
    pub k: i64,
    pub bundle_rank: i64,
    pub config_space_dim: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilityReport {
    pub degrees: DegreeTuple,
    pub d_min: i64,
    pub m: i64,
    pub r: i64,
    pub r_min: i64,
    pub valid_m_range: bool,
    pub n_d: i64,
    /// Absent when d_min < 1.
    pub stability_dim: Option<i64>,
    pub star_dim: Option<i64>,
    /// Rows for k = 1..min(d_min, BUNDLE_ROWS).
    pub bundles: Vec<BundleRow>,
    pub warnings: Vec<String>,
}

/// Row cap for the bundle table in reports.
pub const BUNDLE_ROWS: i64 = 32;

pub fn stability_report(d: &DegreeTuple, m: i64, r_min: i64) -> Result<StabilityReport, StabilityError> {
    if m < 1 {
        return Err(StabilityError::InvalidM);
    }
    let d_min = d.d_min()?;
    let r = d.len() as i64;
    let n_d = ambient_dimension(d, m)?;
    let valid_m_range = m_in_theorem_range(m, r_min);
    let mut warnings = Vec::new();
    if !valid_m_range {
        warnings.push(format!("m outside theorem range: need 2 <= m <= 2(r_min-1) = {}", 2 * (r_min - 1)));
    }
    if m == 1 {
        warnings.push("the stability statement is known to fail for m = 1".to_string());
    }
    if d.admissible == Some(false) {
        warnings.push("degree tuple is not admissible: sum of d_k n_k is nonzero".to_string());
    }
    let (stability_dim, star_dim, bundles) = if d_min >= 1 {
        let mut rows = Vec::new();
        for k in 1..=d_min.min(BUNDLE_ROWS) {
            rows.push(BundleRow {
                k,
                bundle_rank: bundle_rank(d, m, r, k)?,
                config_space_dim: config_space_dimension(m, r, r_min, k)?,
            });
        }
        (Some(stability_bound(d_min, m, r_min)), Some(star_bound(d_min, m, r_min)), rows)
    } else {
        warnings.push(format!("d_min = {d_min} < 1: stability dimensions are undefined"));
        (None, None, Vec::new())
    };
    Ok(StabilityReport {
        degrees: d.clone(),
        d_min,
        m,
        r,
        r_min,
        valid_m_range,
        n_d,
        stability_dim,
        star_dim,
        bundles,
        warnings,
    })
}
