//! Multiple ergodic averages on finite systems: unweighted, prime-indexed,
//! weighted and W-tricked variants, recurrence searches along shifted
//! primes, Cauchy convergence diagnostics, and uniformity-bound probes that
//! chart an L2 average against the `U_d` norm of its weight.

use crate::arith::{PrimeTable, WeightSpec};
use crate::error::{invalid, Error, Result};
use crate::gowers::{embed_truncated, u_norm};
use crate::polyseq::{integer_iterate, IterateMode, RealPolynomial, Rounding};
use crate::reduce::pairwise_sum;
use crate::systems::{intersection_measure, FiniteSystem, MeasurableSet};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Which `n` are averaged over and how the average is normalized.
#[derive(Debug, Clone, PartialEq)]
pub enum IndexFamily {
    /// `n = 1..N`, normalized by `N`.
    All,
    /// `n` ranging over primes `<= N`, normalized by `pi(N)`.
    Primes,
    /// The polynomial argument is `step * n + offset` with `n = 1..N`,
    /// normalized by `N`.
    Progression { step: u64, offset: u64 },
    /// `n` in the subset (membership over `[1, bound]`, entry `n - 1`),
    /// normalized by the subset count.
    Subset(Vec<bool>),
}

impl IndexFamily {
    /// `(weight index, polynomial argument)` pairs for the window `[1, N]`.
    fn indices(&self, n_max: u64) -> Result<Vec<(u64, u64)>> {
        Ok(match self {
            IndexFamily::All => (1..=n_max).map(|n| (n, n)).collect(),
            IndexFamily::Primes => {
                invalid!("prime family needs a prime table; use indices_with_table")
            }
            IndexFamily::Progression { step, offset } => (1..=n_max)
                .map(|n| {
                    step.checked_mul(n)
                        .and_then(|x| x.checked_add(*offset))
                        .map(|arg| (n, arg))
                        .ok_or_else(|| Error::Overflow("progression index overflow".into()))
                })
                .collect::<Result<_>>()?,
            IndexFamily::Subset(members) => {
                let bound = (members.len() as u64).min(n_max);
                let out: Vec<(u64, u64)> = (1..=bound)
                    .filter(|&n| members[(n - 1) as usize])
                    .map(|n| (n, n))
                    .collect();
                if out.is_empty() {
                    invalid!("subset family is empty on [1, {n_max}]");
                }
                out
            }
        })
    }

    fn indices_with_table(&self, n_max: u64, table: &PrimeTable) -> Result<Vec<(u64, u64)>> {
        match self {
            IndexFamily::Primes => {
                if n_max > table.limit() {
                    return Err(Error::ResourceLimit(format!(
                        "prime family up to {n_max} needs a sieve of at least that limit"
                    )));
                }
                Ok(table.primes_up_to(n_max).iter().map(|&p| (p, p)).collect())
            }
            other => other.indices(n_max),
        }
    }
}

/// Recurrence mode averages set-intersection measures; mean mode averages
/// products of composed functions and reports in L2.
#[derive(Debug, Clone)]
pub enum AverageMode {
    Recurrence { set: MeasurableSet },
    Mean { functions: Vec<Vec<f64>> },
}

/// Full description of one multiple ergodic average.
pub struct AverageSpec<'a> {
    pub system: &'a FiniteSystem,
    /// `ell x m` polynomial matrix; row `i` drives transform `i`.
    pub polys: Vec<Vec<RealPolynomial>>,
    pub iterate_mode: IterateMode,
    pub weight: WeightSpec,
    pub family: IndexFamily,
    pub mode: AverageMode,
    pub rounding: Rounding,
}

impl<'a> AverageSpec<'a> {
    pub fn validate(&self) -> Result<()> {
        let ell = self.system.num_transforms();
        if self.polys.len() != ell {
            invalid!("polynomial matrix has {} rows, system has {ell} transforms", self.polys.len());
        }
        let m = self.polys[0].len();
        if m == 0 || self.polys.iter().any(|row| row.len() != m) {
            invalid!("polynomial matrix must be rectangular and nonempty");
        }
        match &self.mode {
            AverageMode::Recurrence { .. } => {
                for row in &self.polys {
                    for p in row {
                        if p.constant_term() != 0.0 {
                            invalid!("recurrence mode requires zero constant terms");
                        }
                    }
                }
            }
            AverageMode::Mean { functions } => {
                if functions.len() != m {
                    invalid!("mean mode needs {m} functions, got {}", functions.len());
                }
                for f in functions {
                    if f.len() != self.system.size() {
                        invalid!("function length does not match system size");
                    }
                    if f.iter().any(|&v| v.abs() > 1.0 + 1e-12) {
                        invalid!("mean-mode functions must be bounded by 1");
                    }
                }
            }
        }
        Ok(())
    }

    fn num_columns(&self) -> usize {
        self.polys[0].len()
    }

    /// `[[q_{i,j}(arg)]]` (or floor) for every matrix entry.
    fn exponents(&self, arg: u64) -> Result<Vec<Vec<i64>>> {
        self.polys
            .iter()
            .map(|row| {
                row.iter()
                    .map(|p| integer_iterate(p, arg as i64, self.iterate_mode, self.rounding))
                    .collect()
            })
            .collect()
    }

    /// The product function `b(arg)(x) = prod_j f_j((prod_i T_i^{e_{i,j}}) x)`.
    fn product_function(&self, arg: u64) -> Result<Vec<f64>> {
        let AverageMode::Mean { functions } = &self.mode else {
            invalid!("product_function requires mean mode");
        };
        let exps = self.exponents(arg)?;
        let ell = self.system.num_transforms();
        let m = self.num_columns();
        let cols: Vec<Vec<i64>> = (0..m)
            .map(|j| (0..ell).map(|i| exps[i][j]).collect())
            .collect();
        let mut out = Vec::with_capacity(self.system.size());
        for x in 0..self.system.size() {
            let mut v = 1.0;
            for (j, col) in cols.iter().enumerate() {
                v *= functions[j][self.system.apply_word(col, x)];
            }
            out.push(v);
        }
        Ok(out)
    }

    fn recurrence_value(&self, arg: u64) -> Result<f64> {
        let AverageMode::Recurrence { set } = &self.mode else {
            invalid!("recurrence_value requires recurrence mode");
        };
        intersection_measure(self.system, set, &self.exponents(arg)?)
    }
}

/// Result of one average: a scalar in recurrence mode, a point function with
/// its L2 norm in mean mode.
#[derive(Debug, Clone)]
pub enum AverageValue {
    Scalar(f64),
    Function { values: Vec<f64>, l2_norm: f64 },
}

impl AverageValue {
    pub fn scalar(&self) -> f64 {
        match self {
            AverageValue::Scalar(v) => *v,
            AverageValue::Function { l2_norm, .. } => *l2_norm,
        }
    }
}

pub fn l2_norm(sys: &FiniteSystem, values: &[f64]) -> f64 {
    let terms: Vec<f64> = values
        .iter()
        .enumerate()
        .map(|(x, &v)| sys.point_weight(x) * v * v)
        .collect();
    pairwise_sum(&terms).max(0.0).sqrt()
}

/// The multiple ergodic average at window `N` over the spec's index family,
/// with the spec's weight multiplying each term.
pub fn multiple_average(spec: &AverageSpec, n_max: u64, table: &PrimeTable) -> Result<AverageValue> {
    spec.validate()?;
    let indices = spec.family.indices_with_table(n_max, table)?;
    let norm = indices.len() as f64;
    let wf = spec.weight.bind(table)?;
    match &spec.mode {
        AverageMode::Recurrence { .. } => {
            let mut terms = Vec::with_capacity(indices.len());
            for &(wn, arg) in &indices {
                terms.push(wf.eval(wn)? * spec.recurrence_value(arg)?);
            }
            Ok(AverageValue::Scalar(pairwise_sum(&terms) / norm))
        }
        AverageMode::Mean { .. } => {
            let size = spec.system.size();
            let mut per_point: Vec<Vec<f64>> = vec![Vec::with_capacity(indices.len()); size];
            for &(wn, arg) in &indices {
                let w = wf.eval(wn)?;
                let b = spec.product_function(arg)?;
                for (x, &v) in b.iter().enumerate() {
                    per_point[x].push(w * v);
                }
            }
            let values: Vec<f64> = per_point.iter().map(|col| pairwise_sum(col) / norm).collect();
            let l2 = l2_norm(spec.system, &values);
            Ok(AverageValue::Function { values, l2_norm: l2 })
        }
    }
}

/// `|1/pi(N) sum_{p<=N} a(p) - (1/N) sum_{n<=N} restricted(n) a(n)|` for a
/// bounded complex sequence `a`.
pub fn prime_vs_weighted_gap(
    a: impl Fn(u64) -> Complex64 + Sync,
    n_max: u64,
    table: &PrimeTable,
) -> Result<f64> {
    if n_max > table.limit() {
        return Err(Error::ResourceLimit(format!(
            "gap at N = {n_max} beyond sieve limit {}",
            table.limit()
        )));
    }
    let primes = table.primes_up_to(n_max);
    let prime_terms: Vec<Complex64> = primes.iter().map(|&p| a(p)).collect();
    let prime_avg = pairwise_sum(&prime_terms) / primes.len() as f64;
    let weighted_terms: Vec<Complex64> = (1..=n_max)
        .map(|n| {
            if table.is_prime(n) {
                a(n) * (n as f64).ln()
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
        .collect();
    let weighted_avg = pairwise_sum(&weighted_terms) / n_max as f64;
    Ok((prime_avg - weighted_avg).norm())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchFilter {
    /// `n` with `n + 1` prime (`n` in `P - 1`).
    ShiftedPrimesMinus,
    /// `n` with `n - 1` prime (`n` in `P + 1`).
    ShiftedPrimesPlus,
    All,
}

/// All `n <= bound` passing the filter whose intersection measure is
/// positive, with the measure. An empty result is a valid negative outcome.
pub fn recurrence_search(
    spec: &AverageSpec,
    filter: SearchFilter,
    bound: u64,
    table: &PrimeTable,
) -> Result<Vec<(u64, f64)>> {
    spec.validate()?;
    if !matches!(spec.mode, AverageMode::Recurrence { .. }) {
        invalid!("recurrence_search requires a recurrence-mode spec");
    }
    let mut hits = Vec::new();
    for n in 1..=bound {
        let pass = match filter {
            SearchFilter::ShiftedPrimesMinus => {
                n + 1 <= table.limit() && table.is_prime(n + 1)
            }
            SearchFilter::ShiftedPrimesPlus => n >= 3 && table.is_prime(n - 1),
            SearchFilter::All => true,
        };
        if !pass {
            continue;
        }
        let mu = spec.recurrence_value(n)?;
        if mu > 0.0 {
            hits.push((n, mu));
        }
    }
    Ok(hits)
}

/// Values of an average along an `N`-schedule with Cauchy-gap diagnostics.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AverageSeries {
    pub schedule: Vec<u64>,
    /// Entry 0 is 0 by convention; entry `k > 0` is the L2 gap between the
    /// running averages at schedule entries `k - 1` and `k`.
    pub values: Vec<f64>,
}

/// L2 gaps of consecutive running averages over the schedule (mean mode).
pub fn cauchy_gap_profile(
    spec: &AverageSpec,
    schedule: &[u64],
    table: &PrimeTable,
) -> Result<AverageSeries> {
    if schedule.len() < 2 {
        invalid!("schedule needs at least two entries");
    }
    if schedule.windows(2).any(|w| w[1] < w[0]) {
        invalid!("schedule must be nondecreasing");
    }
    if !matches!(spec.mode, AverageMode::Mean { .. }) {
        invalid!("cauchy_gap_profile requires a mean-mode spec");
    }
    let mut averages = Vec::with_capacity(schedule.len());
    for &n in schedule {
        match multiple_average(spec, n, table)? {
            AverageValue::Function { values, .. } => averages.push(values),
            AverageValue::Scalar(_) => unreachable!(),
        }
    }
    let mut gaps = vec![0.0];
    for pair in averages.windows(2) {
        let diff: Vec<f64> = pair[0].iter().zip(&pair[1]).map(|(a, b)| a - b).collect();
        gaps.push(l2_norm(spec.system, &diff));
    }
    Ok(AverageSeries {
        schedule: schedule.to_vec(),
        values: gaps,
    })
}

/// Output of [`uniformity_bound_probe`].
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct UniformityProbe {
    /// L2 norm of `(1/N) sum (weight(n) - 1) b(n)`.
    pub lhs: f64,
    /// `U_d(Z_{dN})` norm of `(weight - 1) * 1_{[1,N]}`.
    pub gowers: f64,
    /// `lhs / max(gowers, 1e-15)`; recorded for trend analysis only, the
    /// bounding constants are existential.
    pub ratio: f64,
}

const RATIO_FLOOR: f64 = 1e-15;

/// Charts the weighted-average L2 norm against the uniformity norm of the
/// centered weight `a(n) = weight(n) - 1`.
pub fn uniformity_bound_probe(
    spec: &AverageSpec,
    n_max: u64,
    d: usize,
    table: &PrimeTable,
) -> Result<UniformityProbe> {
    spec.validate()?;
    if !matches!(spec.mode, AverageMode::Mean { .. }) {
        invalid!("uniformity_bound_probe requires a mean-mode spec");
    }
    if !matches!(spec.family, IndexFamily::All) {
        invalid!("uniformity_bound_probe averages over all n");
    }
    let wf = spec.weight.bind(table)?;
    let mut centered = Vec::with_capacity(n_max as usize);
    for n in 1..=n_max {
        centered.push(wf.eval(n)? - 1.0);
    }

    let size = spec.system.size();
    let mut per_point: Vec<Vec<f64>> = vec![Vec::with_capacity(n_max as usize); size];
    for (i, &a) in centered.iter().enumerate() {
        let b = spec.product_function((i + 1) as u64)?;
        for (x, &v) in b.iter().enumerate() {
            per_point[x].push(a * v);
        }
    }
    let avg: Vec<f64> = per_point.iter().map(|col| pairwise_sum(col) / n_max as f64).collect();
    let lhs = l2_norm(spec.system, &avg);

    let raw: Vec<Complex64> = centered.iter().map(|&a| Complex64::new(a, 0.0)).collect();
    let embedded = embed_truncated(&raw, d)?;
    let gowers = u_norm(&embedded, d)?;

    Ok(UniformityProbe {
        lhs,
        gowers,
        ratio: lhs / gowers.max(RATIO_FLOOR),
    })
}

/// `U_d(Z_{dN})` norm of the centered W-tricked weight on `[1, N]`,
/// maximized over admissible residues `r`.
pub fn max_residue_uniformity(
    table: &PrimeTable,
    w: u64,
    n_max: u64,
    d: usize,
) -> Result<f64> {
    let big_w = crate::arith::primorial_below(table, w)?;
    let mut best: f64 = 0.0;
    for r in crate::arith::admissible_residues(big_w) {
        let wf = WeightSpec::Modified { w, r }.bind(table)?;
        let mut raw = Vec::with_capacity(n_max as usize);
        for n in 1..=n_max {
            raw.push(Complex64::new(wf.eval(n)? - 1.0, 0.0));
        }
        let norm = u_norm(&embed_truncated(&raw, d)?, d)?;
        best = best.max(norm);
    }
    Ok(best)
}

/// "Weakly decreasing with at most one inversion of relative size <= 10%":
/// the pre-registered acceptance rule for desk-scale double-limit trends.
pub fn trend_weakly_decreasing(values: &[f64]) -> bool {
    let mut inversions = 0;
    for w in values.windows(2) {
        if w[1] > w[0] {
            inversions += 1;
            if inversions > 1 || (w[1] - w[0]) / w[0].max(RATIO_FLOOR) > 0.10 {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::systems::make_product_cyclic_system;

    fn z5_recurrence_spec(sys: &FiniteSystem) -> AverageSpec<'_> {
        let set = MeasurableSet::from_indices(sys, &[0]).unwrap();
        AverageSpec {
            system: sys,
            polys: vec![vec![RealPolynomial::monomial(1.0, 1)]],
            iterate_mode: IterateMode::Closest,
            weight: WeightSpec::Unit,
            family: IndexFamily::All,
            mode: AverageMode::Recurrence { set },
            rounding: Rounding::default(),
        }
    }

    #[test]
    fn z5_linear_average() {
        let table = PrimeTable::sieve(1000).unwrap();
        let sys = make_product_cyclic_system(&[5], &[vec![1]]).unwrap();
        let spec = z5_recurrence_spec(&sys);
        let v = multiple_average(&spec, 100, &table).unwrap().scalar();
        // 20 multiples of 5 among 1..=100, each contributing mu(A) = 1/5.
        assert!((v - 0.04).abs() < 1e-12, "v = {v}");
    }

    #[test]
    fn zero_polynomials_give_set_measure() {
        let table = PrimeTable::sieve(100).unwrap();
        let sys = make_product_cyclic_system(&[5], &[vec![1]]).unwrap();
        let set = MeasurableSet::from_indices(&sys, &[0, 2]).unwrap();
        let spec = AverageSpec {
            system: &sys,
            polys: vec![vec![RealPolynomial::zero()]],
            iterate_mode: IterateMode::Closest,
            weight: WeightSpec::Unit,
            family: IndexFamily::All,
            mode: AverageMode::Recurrence { set },
            rounding: Rounding::default(),
        };
        let v = multiple_average(&spec, 50, &table).unwrap().scalar();
        assert!((v - 0.4).abs() < 1e-12);
    }

    #[test]
    fn w_tricked_family_z5() {
        let table = PrimeTable::sieve(1000).unwrap();
        let sys = make_product_cyclic_system(&[5], &[vec![1]]).unwrap();
        let mut spec = z5_recurrence_spec(&sys);
        spec.family = IndexFamily::Progression { step: 6, offset: 0 };
        let v = multiple_average(&spec, 100, &table).unwrap().scalar();
        // 5 | 6n iff 5 | n: same density as the untricked family.
        assert!((v - 0.04).abs() < 1e-12, "v = {v}");
    }

    #[test]
    fn average_matches_naive_loop() {
        let table = PrimeTable::sieve(2000).unwrap();
        let sys = make_product_cyclic_system(&[4, 3], &[vec![1, 0], vec![0, 1]]).unwrap();
        let set = MeasurableSet::from_indices(&sys, &[0, 1, 5]).unwrap();
        let polys = vec![
            vec![RealPolynomial::monomial(0.5, 1), RealPolynomial::monomial(1.0, 2)],
            vec![RealPolynomial::monomial(1.0, 1), RealPolynomial::zero()],
        ];
        let spec = AverageSpec {
            system: &sys,
            polys: polys.clone(),
            iterate_mode: IterateMode::Closest,
            weight: WeightSpec::Unit,
            family: IndexFamily::All,
            mode: AverageMode::Recurrence { set: set.clone() },
            rounding: Rounding::default(),
        };
        let fast = multiple_average(&spec, 500, &table).unwrap().scalar();
        let r = Rounding::default();
        let mut naive = 0.0;
        for n in 1..=500i64 {
            let exps: Vec<Vec<i64>> = polys
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|p| integer_iterate(p, n, IterateMode::Closest, r).unwrap())
                        .collect()
                })
                .collect();
            naive += intersection_measure(&sys, &set, &exps).unwrap();
        }
        naive /= 500.0;
        assert!((fast - naive).abs() < 1e-12);
        assert!(fast >= 0.0 && fast <= set.measure() + 1e-12);
    }

    #[test]
    fn recurrence_mode_rejects_constant_term() {
        let table = PrimeTable::sieve(100).unwrap();
        let sys = make_product_cyclic_system(&[5], &[vec![1]]).unwrap();
        let set = MeasurableSet::from_indices(&sys, &[0]).unwrap();
        let spec = AverageSpec {
            system: &sys,
            polys: vec![vec![RealPolynomial::new(vec![0.25, 1.0]).unwrap()]],
            iterate_mode: IterateMode::Closest,
            weight: WeightSpec::Unit,
            family: IndexFamily::All,
            mode: AverageMode::Recurrence { set },
            rounding: Rounding::default(),
        };
        assert!(multiple_average(&spec, 10, &table).is_err());
    }

    #[test]
    fn prime_gap_constant_sequence() {
        let table = PrimeTable::sieve(100_000).unwrap();
        let gap =
            prime_vs_weighted_gap(|_| Complex64::new(1.0, 0.0), 100_000, &table).unwrap();
        assert!(gap <= 0.05, "gap = {gap}");
        let zero = prime_vs_weighted_gap(|_| Complex64::new(0.0, 0.0), 1000, &table).unwrap();
        assert_eq!(zero, 0.0);
    }

    #[test]
    fn recurrence_search_z5_shifted_primes() {
        let table = PrimeTable::sieve(1000).unwrap();
        let sys = make_product_cyclic_system(&[5], &[vec![1]]).unwrap();
        let spec = z5_recurrence_spec(&sys);
        let hits = recurrence_search(&spec, SearchFilter::ShiftedPrimesMinus, 100, &table).unwrap();
        assert_eq!(hits.first(), Some(&(10, 0.2)));
    }

    #[test]
    fn recurrence_search_z4_half_step() {
        let table = PrimeTable::sieve(1000).unwrap();
        let sys = make_product_cyclic_system(&[4], &[vec![1]]).unwrap();
        let set = MeasurableSet::from_indices(&sys, &[0]).unwrap();
        let spec = AverageSpec {
            system: &sys,
            polys: vec![vec![RealPolynomial::monomial(0.5, 1)]],
            iterate_mode: IterateMode::Closest,
            weight: WeightSpec::Unit,
            family: IndexFamily::All,
            mode: AverageMode::Recurrence { set },
            rounding: Rounding::default(),
        };
        let hits = recurrence_search(&spec, SearchFilter::ShiftedPrimesMinus, 100, &table).unwrap();
        assert_eq!(hits.first().map(|h| h.0), Some(16));
    }

    #[test]
    fn recurrence_search_zero_polynomial_hits_everywhere() {
        let table = PrimeTable::sieve(100).unwrap();
        let sys = make_product_cyclic_system(&[5], &[vec![1]]).unwrap();
        let set = MeasurableSet::from_indices(&sys, &[0]).unwrap();
        let spec = AverageSpec {
            system: &sys,
            polys: vec![vec![RealPolynomial::zero()]],
            iterate_mode: IterateMode::Closest,
            weight: WeightSpec::Unit,
            family: IndexFamily::All,
            mode: AverageMode::Recurrence { set },
            rounding: Rounding::default(),
        };
        let hits = recurrence_search(&spec, SearchFilter::All, 20, &table).unwrap();
        assert_eq!(hits.len(), 20);
        assert!(hits.iter().all(|&(_, mu)| (mu - 0.2).abs() < 1e-15));
    }

    #[test]
    fn cauchy_gaps_constant_function_vanish() {
        let table = PrimeTable::sieve(1000).unwrap();
        let sys = make_product_cyclic_system(&[7], &[vec![1]]).unwrap();
        let spec = AverageSpec {
            system: &sys,
            polys: vec![vec![RealPolynomial::monomial(1.0, 1)]],
            iterate_mode: IterateMode::Floor,
            weight: WeightSpec::Unit,
            family: IndexFamily::All,
            mode: AverageMode::Mean { functions: vec![vec![1.0; 7]] },
            rounding: Rounding::default(),
        };
        let series = cauchy_gap_profile(&spec, &[100, 200, 400], &table).unwrap();
        assert!(series.values.iter().all(|&g| g < 1e-12));
    }

    #[test]
    fn cauchy_gap_repeated_entry_is_zero() {
        let table = PrimeTable::sieve(1000).unwrap();
        let sys = make_product_cyclic_system(&[7], &[vec![1]]).unwrap();
        let mut f = vec![-1.0 / 7.0; 7];
        f[0] += 1.0;
        let spec = AverageSpec {
            system: &sys,
            polys: vec![vec![RealPolynomial::monomial(1.0, 1)]],
            iterate_mode: IterateMode::Floor,
            weight: WeightSpec::Unit,
            family: IndexFamily::Primes,
            mode: AverageMode::Mean { functions: vec![f] },
            rounding: Rounding::default(),
        };
        let series = cauchy_gap_profile(&spec, &[100, 100], &table).unwrap();
        assert_eq!(series.values, vec![0.0, 0.0]);
    }

    #[test]
    fn probe_unit_weight_is_zero() {
        let table = PrimeTable::sieve(1000).unwrap();
        let sys = make_product_cyclic_system(&[7], &[vec![1]]).unwrap();
        let mut f = vec![-1.0 / 7.0; 7];
        f[0] += 1.0;
        let spec = AverageSpec {
            system: &sys,
            polys: vec![vec![RealPolynomial::monomial(1.0, 2)]],
            iterate_mode: IterateMode::Floor,
            weight: WeightSpec::Unit,
            family: IndexFamily::All,
            mode: AverageMode::Mean { functions: vec![f] },
            rounding: Rounding::default(),
        };
        let probe = uniformity_bound_probe(&spec, 200, 2, &table).unwrap();
        assert_eq!(probe.lhs, 0.0);
        assert_eq!(probe.gowers, 0.0);
    }

    #[test]
    fn trend_rule() {
        assert!(trend_weakly_decreasing(&[3.0, 2.0, 1.0]));
        assert!(trend_weakly_decreasing(&[3.0, 2.0, 2.1, 1.0]));
        assert!(!trend_weakly_decreasing(&[3.0, 2.0, 2.5, 1.0]));
        assert!(!trend_weakly_decreasing(&[1.0, 1.05, 0.9, 0.95]));
    }

    #[test]
    fn negative_remark_floor_iterates_never_recur() {
        // On Z_2 with T = +1, A = {0}: [a n] - [-a n] = 2 [a n] + 1 is odd
        // for irrational a, so the two floor translates of A never meet.
        let table = PrimeTable::sieve(100).unwrap();
        let sys = make_product_cyclic_system(&[2], &[vec![1]]).unwrap();
        let set = MeasurableSet::from_indices(&sys, &[0]).unwrap();
        let alpha = std::f64::consts::SQRT_2;
        let spec = AverageSpec {
            system: &sys,
            polys: vec![vec![
                RealPolynomial::monomial(alpha, 1),
                RealPolynomial::monomial(-alpha, 1),
            ]],
            iterate_mode: IterateMode::Floor,
            weight: WeightSpec::Unit,
            family: IndexFamily::All,
            mode: AverageMode::Recurrence { set },
            rounding: Rounding::exact(),
        };
        let hits = recurrence_search(&spec, SearchFilter::All, 1000, &table).unwrap();
        assert!(hits.is_empty());
    }
}
