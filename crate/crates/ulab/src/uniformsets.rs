//! Set families built from the prime-factor counting functions: residue
//! classes of omega / big-omega, level sets of `omega(n) * alpha` under the
//! nearest-integer distance or the fractional part, their uniformity-norm
//! profiles, and the along-S versus full-average comparison.

use crate::arith::PrimeTable;
use crate::averages::{multiple_average, AverageMode, AverageSpec, AverageValue, IndexFamily, l2_norm};
use crate::constants::Irrational;
use crate::error::{invalid, Result};
use crate::gowers::{u_norm, SequenceWindow};
use crate::polyseq::{dist_to_int, IterateMode, RealPolynomial, Rounding};
use crate::systems::FiniteSystem;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OmegaVariant {
    /// omega: distinct prime factors.
    Distinct,
    /// big-omega: prime factors with multiplicity.
    WithMultiplicity,
}

/// Finite unions of rational-endpoint intervals keep membership decidable.
pub type Intervals = Vec<(f64, f64)>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum SetKind {
    /// `{n : count(n) = a (mod b) for some a in A}`.
    Mod {
        variant: OmegaVariant,
        b: u64,
        residues: Vec<u64>,
    },
    /// `{n : dist_to_int(count(n) * alpha) in A}` with `A` inside `[0, 1/2]`.
    AlphaDist {
        variant: OmegaVariant,
        alpha: Irrational,
        intervals: Intervals,
    },
    /// `{n : frac(count(n) * alpha) in A}` with `A` inside `[0, 1)`.
    AlphaFrac {
        variant: OmegaVariant,
        alpha: Irrational,
        intervals: Intervals,
    },
}

impl SetKind {
    fn validate(&self) -> Result<()> {
        match self {
            SetKind::Mod { b, residues, .. } => {
                if *b == 0 {
                    invalid!("modulus b must be >= 1");
                }
                if residues.is_empty() {
                    invalid!("residue set A must be nonempty");
                }
                if residues.iter().any(|&a| a >= *b) {
                    invalid!("residues must lie in 0..b");
                }
            }
            SetKind::AlphaDist { intervals, .. } => {
                validate_intervals(intervals, 0.5)?;
            }
            SetKind::AlphaFrac { intervals, .. } => {
                validate_intervals(intervals, 1.0)?;
            }
        }
        Ok(())
    }

    fn variant(&self) -> OmegaVariant {
        match self {
            SetKind::Mod { variant, .. }
            | SetKind::AlphaDist { variant, .. }
            | SetKind::AlphaFrac { variant, .. } => *variant,
        }
    }

    fn accepts(&self, count: u64) -> bool {
        match self {
            SetKind::Mod { b, residues, .. } => residues.contains(&(count % b)),
            SetKind::AlphaDist { alpha, intervals, .. } => {
                let v = dist_to_int(count as f64 * alpha.value());
                intervals.iter().any(|&(lo, hi)| v >= lo && v <= hi)
            }
            SetKind::AlphaFrac { alpha, intervals, .. } => {
                let x = count as f64 * alpha.value();
                let v = x - x.floor();
                intervals.iter().any(|&(lo, hi)| v >= lo && v <= hi)
            }
        }
    }
}

fn validate_intervals(intervals: &Intervals, upper: f64) -> Result<()> {
    if intervals.is_empty() {
        invalid!("interval union A must be nonempty");
    }
    for &(lo, hi) in intervals {
        if !(0.0..=upper).contains(&lo) || !(0.0..=upper).contains(&hi) || lo > hi {
            invalid!("interval [{lo}, {hi}] not within [0, {upper}]");
        }
    }
    Ok(())
}

/// Membership window of a set family on `[1, N]` (after shifting by `t`).
#[derive(Debug, Clone)]
pub struct SetSample {
    pub kind: SetKind,
    pub shift: u64,
    pub n_max: u64,
    /// `membership[n - 1]` is membership of `n`.
    pub membership: Vec<bool>,
    pub density_estimate: f64,
}

/// Builds the membership window: `n` belongs iff the shifted point `n + t`
/// satisfies the family predicate.
pub fn build_uniform_set(
    kind: &SetKind,
    shift: u64,
    n_max: u64,
    table: &PrimeTable,
) -> Result<SetSample> {
    kind.validate()?;
    if n_max == 0 {
        invalid!("window length must be positive");
    }
    let count_fn = |n: u64| -> Result<u64> {
        let (omega, big) = table.omega_counts(n)?;
        Ok(match kind.variant() {
            OmegaVariant::Distinct => omega as u64,
            OmegaVariant::WithMultiplicity => big as u64,
        })
    };
    let mut membership = Vec::with_capacity(n_max as usize);
    let mut count = 0u64;
    for n in 1..=n_max {
        let is_in = kind.accepts(count_fn(n + shift)?);
        membership.push(is_in);
        count += is_in as u64;
    }
    Ok(SetSample {
        kind: kind.clone(),
        shift,
        n_max,
        membership,
        density_estimate: count as f64 / n_max as f64,
    })
}

/// `U_r(Z_N)` norms of `1_S - c` per schedule entry, the definition taken on
/// the full window (no truncation embedding). When `c` is not supplied it is
/// estimated as the density at the largest schedule entry.
pub fn uniformity_profile(
    kind: &SetKind,
    shift: u64,
    r: usize,
    schedule: &[u64],
    c: Option<f64>,
    table: &PrimeTable,
) -> Result<Vec<f64>> {
    if schedule.is_empty() {
        invalid!("schedule must be nonempty");
    }
    let c = match c {
        Some(c) => c,
        None => {
            let largest = *schedule.iter().max().unwrap();
            build_uniform_set(kind, shift, largest, table)?.density_estimate
        }
    };
    let mut out = Vec::with_capacity(schedule.len());
    for &n in schedule {
        let sample = build_uniform_set(kind, shift, n, table)?;
        let seq = SequenceWindow::from_fn(n as usize, |i| {
            Complex64::new(if sample.membership[i] { 1.0 - c } else { -c }, 0.0)
        })?;
        out.push(u_norm(&seq, r)?);
    }
    Ok(out)
}

/// Profile of a periodic negative control (the even integers): a periodic
/// set is not uniform, so its profile stays bounded away from zero.
pub fn periodic_control_profile(r: usize, schedule: &[u64]) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(schedule.len());
    for &n in schedule {
        let seq = SequenceWindow::from_fn(n as usize, |i| {
            // i is internal index of n = i + 1; even n gives +1/2.
            Complex64::new(if i % 2 == 1 { 0.5 } else { -0.5 }, 0.0)
        })?;
        out.push(u_norm(&seq, r)?);
    }
    Ok(out)
}

/// Output of [`set_average_vs_full`].
#[derive(Debug, Clone)]
pub struct SetAverageComparison {
    pub along_set: Vec<f64>,
    pub full: Vec<f64>,
    pub l2_gap: f64,
}

/// Compares `(1/|S inter [1,N]|) sum_{n in S} b(n)` with `(1/N) sum b(n)`
/// in L2, for the product function `b` driven by the polynomial matrix.
pub fn set_average_vs_full(
    system: &FiniteSystem,
    sample: &SetSample,
    polys: Vec<Vec<RealPolynomial>>,
    iterate_mode: IterateMode,
    functions: Vec<Vec<f64>>,
    n_max: u64,
    table: &PrimeTable,
) -> Result<SetAverageComparison> {
    if n_max > sample.n_max {
        invalid!("window {n_max} exceeds the sampled membership length {}", sample.n_max);
    }
    let along_spec = AverageSpec {
        system,
        polys: polys.clone(),
        iterate_mode,
        weight: crate::arith::WeightSpec::Unit,
        family: IndexFamily::Subset(sample.membership.clone()),
        mode: AverageMode::Mean { functions: functions.clone() },
        rounding: Rounding::default(),
    };
    let full_spec = AverageSpec {
        system,
        polys,
        iterate_mode,
        weight: crate::arith::WeightSpec::Unit,
        family: IndexFamily::All,
        mode: AverageMode::Mean { functions },
        rounding: Rounding::default(),
    };
    let along = match multiple_average(&along_spec, n_max, table)? {
        AverageValue::Function { values, .. } => values,
        _ => unreachable!(),
    };
    let full = match multiple_average(&full_spec, n_max, table)? {
        AverageValue::Function { values, .. } => values,
        _ => unreachable!(),
    };
    let diff: Vec<f64> = along.iter().zip(&full).map(|(a, b)| a - b).collect();
    let l2_gap = l2_norm(system, &diff);
    Ok(SetAverageComparison {
        along_set: along,
        full,
        l2_gap,
    })
}
