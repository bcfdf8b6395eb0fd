//! Real polynomial orbits under integer-part and closest-integer rounding,
//! fractional-part densities, Weyl exponential sums, and the
//! small-denominator sets behind the closest-integer decomposition identity
//! `[[q(mn)]] = sum_i [[a_i m^i]] n^i`.

use crate::arith::WeightFn;
use crate::error::{invalid, Error, Result};
use crate::reduce::par_sum;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

/// Real polynomial, coefficients ascending in degree. Trailing zero
/// coefficients are preserved as supplied: the decomposition identity counts
/// padded zero terms in the degree it works with.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RealPolynomial {
    coeffs: Vec<f64>,
}

impl RealPolynomial {
    pub fn new(coeffs: Vec<f64>) -> Result<RealPolynomial> {
        if coeffs.is_empty() {
            invalid!("polynomial needs at least one coefficient");
        }
        Ok(RealPolynomial { coeffs })
    }

    /// Monomial `c * t^k`.
    pub fn monomial(c: f64, k: usize) -> RealPolynomial {
        let mut coeffs = vec![0.0; k + 1];
        coeffs[k] = c;
        RealPolynomial { coeffs }
    }

    pub fn zero() -> RealPolynomial {
        RealPolynomial { coeffs: vec![0.0] }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Index of the last nonzero coefficient (0 for the zero polynomial).
    pub fn degree(&self) -> usize {
        self.coeffs.iter().rposition(|&c| c != 0.0).unwrap_or(0)
    }

    /// Degree as declared by the coefficient list, padding included.
    pub fn padded_degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn constant_term(&self) -> f64 {
        self.coeffs[0]
    }

    /// Horner evaluation at an integer argument.
    pub fn eval(&self, n: i64) -> f64 {
        let x = n as f64;
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }
}

/// Rounding policy: values within `snap_eps` of an integer are snapped to it
/// before taking integer or fractional parts, guarding decimal-supplied
/// coefficients against representation error. Disable with [`Rounding::exact`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rounding {
    pub snap_eps: f64,
}

impl Default for Rounding {
    fn default() -> Self {
        Rounding { snap_eps: 1e-9 }
    }
}

impl Rounding {
    pub fn exact() -> Rounding {
        Rounding { snap_eps: 0.0 }
    }

    fn snap(self, x: f64) -> f64 {
        let r = x.round();
        if (x - r).abs() <= self.snap_eps {
            r
        } else {
            x
        }
    }

    /// Integer part `[x]` (greatest integer `<= x`).
    pub fn floor(self, x: f64) -> f64 {
        self.snap(x).floor()
    }

    /// Fractional part `{x}` in `[0, 1)`.
    pub fn frac(self, x: f64) -> f64 {
        let s = self.snap(x);
        s - s.floor()
    }

    /// Closest integer `[[x]] = [x + 1/2]`; exact halves round up.
    pub fn closest(self, x: f64) -> f64 {
        self.floor(x + 0.5)
    }
}

/// Distance to the nearest integer.
pub fn dist_to_int(x: f64) -> f64 {
    let f = x - x.floor();
    f.min(1.0 - f)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IterateMode {
    Floor,
    Closest,
}

const INT_GUARD: f64 = 9_007_199_254_740_992.0; // 2^53

/// `[q(n)]` or `[[q(n)]]` as an exact integer.
pub fn integer_iterate(
    p: &RealPolynomial,
    n: i64,
    mode: IterateMode,
    rounding: Rounding,
) -> Result<i64> {
    let v = p.eval(n);
    if v.abs() >= INT_GUARD {
        return Err(Error::Overflow(format!(
            "polynomial value {v} at n = {n} outside exact-integer range"
        )));
    }
    let r = match mode {
        IterateMode::Floor => rounding.floor(v),
        IterateMode::Closest => rounding.closest(v),
    };
    Ok(r as i64)
}

/// Density of `{1 <= n <= N : frac(q(n)) in [1 - delta, 1)}`.
pub fn fractional_density(
    p: &RealPolynomial,
    delta: f64,
    n_max: u64,
    rounding: Rounding,
) -> Result<f64> {
    if !(0.0..1.0).contains(&delta) || delta <= 0.0 {
        invalid!("fractional_density: delta must lie in (0, 1), got {delta}");
    }
    let count = par_sum(n_max as usize, |i| {
        let f = rounding.frac(p.eval((i + 1) as i64));
        if f >= 1.0 - delta {
            1.0
        } else {
            0.0
        }
    });
    Ok(count / n_max as f64)
}

/// `(1/N) * sum_{n<=N} weight(n) * e(k * q(n))`; unit weight when `weight`
/// is `None`. `k = 0` is degenerate (the average is identically the weight
/// mean) and rejected.
pub fn weyl_exponential_average(
    p: &RealPolynomial,
    k: i64,
    n_max: u64,
    weight: Option<&WeightFn>,
) -> Result<Complex64> {
    if k == 0 {
        invalid!("weyl_exponential_average: k must be nonzero");
    }
    if n_max == 0 {
        invalid!("weyl_exponential_average: N must be positive");
    }
    let weights: Option<Vec<f64>> = match weight {
        Some(wf) => {
            let mut v = Vec::with_capacity(n_max as usize);
            for n in 1..=n_max {
                v.push(wf.eval(n)?);
            }
            Some(v)
        }
        None => None,
    };
    let sum: Complex64 = par_sum(n_max as usize, |i| {
        let n = (i + 1) as i64;
        let phase = TAU * k as f64 * p.eval(n).fract();
        let w = weights.as_ref().map_or(1.0, |v| v[i]);
        Complex64::from_polar(w, phase)
    });
    Ok(sum / n_max as f64)
}

/// All `n <= N` with `dist_to_int(a[i][j] * n^(i+1)) < delta` for every
/// matrix entry; row `i` of `coeffs` carries the coefficients of degree
/// `i + 1`. Returns the members and their density.
pub fn small_denominator_set(
    coeffs: &[Vec<f64>],
    delta: f64,
    n_max: u64,
) -> Result<(Vec<u64>, f64)> {
    if delta <= 0.0 {
        invalid!("small_denominator_set: delta must be positive");
    }
    if coeffs.is_empty() || coeffs.iter().any(|row| row.is_empty()) {
        invalid!("small_denominator_set: empty coefficient matrix");
    }
    let mut members = Vec::new();
    for n in 1..=n_max {
        let x = n as f64;
        let mut ok = true;
        let mut pow = 1.0;
        'rows: for row in coeffs {
            pow *= x;
            for &a in row {
                if dist_to_int(a * pow) >= delta {
                    ok = false;
                    break 'rows;
                }
            }
        }
        if ok {
            members.push(n);
        }
    }
    let density = members.len() as f64 / n_max as f64;
    Ok((members, density))
}

/// Membership of `m` in the small-denominator set `S_r` for `q` (padded
/// degree `k`): `dist_to_int(a_i m^i) < 1 / (2 k r^k)` for `1 <= i <= k`.
pub fn in_small_denominator_set(p: &RealPolynomial, m: u64, r: u64) -> Result<bool> {
    let k = p.padded_degree();
    if k == 0 {
        invalid!("decomposition requires degree >= 1");
    }
    if p.constant_term() != 0.0 {
        invalid!("decomposition requires a zero constant term");
    }
    let threshold = 1.0 / (2.0 * k as f64 * (r as f64).powi(k as i32));
    let x = m as f64;
    let mut pow = 1.0;
    for &a in &p.coeffs()[1..] {
        pow *= x;
        if dist_to_int(a * pow) >= threshold {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Checks `[[q(mn)]] = sum_i [[a_i m^i]] n^i` for every `1 <= n <= r`, both
/// sides computed independently. `m` must lie in `S_r`; a membership failure
/// is a precondition error, not a `false` verdict.
pub fn closest_decomposition_check(
    p: &RealPolynomial,
    m: u64,
    r: u64,
    rounding: Rounding,
) -> Result<bool> {
    if !in_small_denominator_set(p, m, r)? {
        return Err(Error::Precondition(format!(
            "m = {m} is not in the small-denominator set S_{r}"
        )));
    }
    let k = p.padded_degree();
    // [[a_i m^i]] for i = 1..k.
    let mut rounded = Vec::with_capacity(k);
    let mut pow = 1.0f64;
    for &a in &p.coeffs()[1..] {
        pow *= m as f64;
        rounded.push(rounding.closest(a * pow) as i64);
    }
    for n in 1..=r {
        let lhs = integer_iterate(p, (m * n) as i64, IterateMode::Closest, rounding)?;
        let mut rhs = 0i64;
        let mut npow = 1i64;
        for &c in &rounded {
            npow = npow
                .checked_mul(n as i64)
                .ok_or_else(|| Error::Overflow("n^i overflow".into()))?;
            rhs = rhs
                .checked_add(
                    c.checked_mul(npow)
                        .ok_or_else(|| Error::Overflow("decomposition term overflow".into()))?,
                )
                .ok_or_else(|| Error::Overflow("decomposition sum overflow".into()))?;
        }
        if lhs != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::Irrational;
    use crate::seeded_rng;
    use rand::Rng;

    const SQRT2: f64 = std::f64::consts::SQRT_2;

    #[test]
    fn eval_examples() {
        let p = RealPolynomial::new(vec![0.0, 0.5]).unwrap();
        assert_eq!(p.eval(8), 4.0);
        let q = RealPolynomial::monomial(SQRT2, 2);
        assert!((q.eval(5) - 25.0 * SQRT2).abs() < 1e-12);
        assert_eq!(RealPolynomial::new(vec![0.0, 1.0]).unwrap().eval(0), 0.0);
    }

    #[test]
    fn degree_ignores_padding_but_padded_degree_keeps_it() {
        let p = RealPolynomial::new(vec![0.0, 1.0, 0.0]).unwrap();
        assert_eq!(p.degree(), 1);
        assert_eq!(p.padded_degree(), 2);
    }

    #[test]
    fn integer_iterate_examples() {
        let r = Rounding::default();
        let p = RealPolynomial::new(vec![0.0, 0.5]).unwrap();
        assert_eq!(integer_iterate(&p, 5, IterateMode::Closest, r).unwrap(), 3);
        assert_eq!(integer_iterate(&p, -5, IterateMode::Closest, r).unwrap(), -2);
        let q = RealPolynomial::new(vec![0.0, -2.3]).unwrap();
        let v = integer_iterate(&q, 1, IterateMode::Floor, r).unwrap();
        assert_eq!(v, -3);
        // [-x] = -[x] - 1 for x not an integer.
        assert_eq!(v, -(2.3f64.floor() as i64) - 1);
    }

    #[test]
    fn closest_equals_floor_of_shifted() {
        let r = Rounding::default();
        let mut rng = seeded_rng(0, "polyseq-closest-floor");
        for _ in 0..200 {
            let a: f64 = rng.gen_range(-3.0..3.0);
            let b: f64 = rng.gen_range(-3.0..3.0);
            let p = RealPolynomial::new(vec![b, a]).unwrap();
            let shifted = RealPolynomial::new(vec![b + 0.5, a]).unwrap();
            let n = rng.gen_range(-50..50);
            assert_eq!(
                integer_iterate(&p, n, IterateMode::Closest, r).unwrap(),
                integer_iterate(&shifted, n, IterateMode::Floor, r).unwrap()
            );
        }
    }

    #[test]
    fn exact_halves_round_up() {
        let r = Rounding::default();
        assert_eq!(r.closest(2.5), 3.0);
        assert_eq!(r.closest(-2.5), -2.0);
        assert_eq!(r.closest(0.5), 1.0);
    }

    #[test]
    fn integer_iterate_overflow_guard() {
        let p = RealPolynomial::monomial(1e300, 1);
        assert!(matches!(
            integer_iterate(&p, 2, IterateMode::Floor, Rounding::default()),
            Err(Error::Overflow(_))
        ));
    }

    #[test]
    fn fractional_density_integer_polynomial_is_zero() {
        let p = RealPolynomial::new(vec![0.0, 1.0]).unwrap();
        assert_eq!(
            fractional_density(&p, 0.3, 1000, Rounding::default()).unwrap(),
            0.0
        );
    }

    #[test]
    fn fractional_density_half_step_alternates() {
        let p = RealPolynomial::new(vec![0.0, 0.5]).unwrap();
        assert_eq!(
            fractional_density(&p, 0.25, 10_000, Rounding::default()).unwrap(),
            0.0
        );
    }

    #[test]
    fn fractional_density_equidistributed_case() {
        let p = RealPolynomial::monomial(SQRT2, 1);
        let d = fractional_density(&p, 0.1, 100_000, Rounding::default()).unwrap();
        assert!((d - 0.1).abs() < 0.005, "d = {d}");
    }

    #[test]
    fn fractional_density_monotone_and_vanishing() {
        let p = RealPolynomial::monomial(Irrational::GoldenRatio.value(), 2);
        let r = Rounding::default();
        let mut prev = 0.0;
        for delta in [0.01, 0.05, 0.1, 0.3] {
            let d = fractional_density(&p, delta, 20_000, r).unwrap();
            assert!(d >= prev);
            prev = d;
        }
        assert!(fractional_density(&p, 0.001, 20_000, r).unwrap() < 0.01);
        assert!(fractional_density(&p, 1.5, 100, r).is_err());
    }

    #[test]
    fn weyl_average_integer_coefficients_is_one() {
        let p = RealPolynomial::new(vec![2.0, 3.0, 1.0]).unwrap();
        let v = weyl_exponential_average(&p, 5, 500, None).unwrap();
        assert!((v - Complex64::new(1.0, 0.0)).norm() < 1e-9);
        // p = 0.5 t with k = 2: e(2 * 0.5 n) = 1.
        let q = RealPolynomial::new(vec![0.0, 0.5]).unwrap();
        let v = weyl_exponential_average(&q, 2, 500, None).unwrap();
        assert!((v - Complex64::new(1.0, 0.0)).norm() < 1e-9);
        assert!(weyl_exponential_average(&p, 0, 100, None).is_err());
    }

    #[test]
    fn weyl_average_quadratic_decay() {
        let p = RealPolynomial::monomial(SQRT2, 2);
        let v = weyl_exponential_average(&p, 1, 100_000, None).unwrap();
        assert!(v.norm() <= 0.02, "modulus = {}", v.norm());
    }

    #[test]
    fn weyl_average_bounded_by_one() {
        let mut rng = seeded_rng(0, "polyseq-weyl-bound");
        for _ in 0..20 {
            let p = RealPolynomial::new(vec![rng.gen(), rng.gen(), rng.gen()]).unwrap();
            let v = weyl_exponential_average(&p, 3, 200, None).unwrap();
            assert!(v.norm() <= 1.0 + 1e-12);
        }
    }

    #[test]
    fn small_denominator_examples() {
        // Integer coefficients: everything qualifies.
        let (members, density) =
            small_denominator_set(&[vec![2.0, 3.0]], 0.1, 20).unwrap();
        assert_eq!(members.len(), 20);
        assert_eq!(density, 1.0);

        let (members, _) = small_denominator_set(&[vec![SQRT2]], 1.0 / 6.0, 20).unwrap();
        assert!(members.contains(&5), "members = {members:?}");
        assert!(!members.contains(&1));

        // a = 1/3, delta = 0.4: every n qualifies since dist is 0 or 1/3.
        let (members, density) = small_denominator_set(&[vec![1.0 / 3.0]], 0.4, 9).unwrap();
        assert_eq!(members, (1..=9).collect::<Vec<_>>());
        assert_eq!(density, 1.0);

        assert!(small_denominator_set(&[vec![1.0]], 0.0, 10).is_err());
    }

    #[test]
    fn small_denominator_negation_invariance() {
        let mut rng = seeded_rng(0, "polyseq-negation");
        for _ in 0..20 {
            let a: f64 = rng.gen_range(-2.0..2.0);
            let b: f64 = rng.gen_range(-2.0..2.0);
            let (_, d1) = small_denominator_set(&[vec![a], vec![b]], 0.2, 200).unwrap();
            let (_, d2) = small_denominator_set(&[vec![-a], vec![-b]], 0.2, 200).unwrap();
            assert_eq!(d1, d2);
        }
    }

    #[test]
    fn decomposition_sqrt2_worked_example() {
        // q = sqrt(2) t, m = 5, r = 3: dist(5 sqrt 2) ~ 0.0711 < 1/6, and
        // [[5 sqrt 2 n]] = 7n for n = 1, 2, 3.
        let p = RealPolynomial::monomial(SQRT2, 1);
        assert!(in_small_denominator_set(&p, 5, 3).unwrap());
        assert!(closest_decomposition_check(&p, 5, 3, Rounding::default()).unwrap());
        let r = Rounding::default();
        for n in 1..=3i64 {
            assert_eq!(
                integer_iterate(&p, 5 * n, IterateMode::Closest, r).unwrap(),
                7 * n
            );
        }
    }

    #[test]
    fn decomposition_integer_coefficients_always_true() {
        let p = RealPolynomial::new(vec![0.0, 3.0, 2.0]).unwrap();
        for m in 1..=5u64 {
            assert!(closest_decomposition_check(&p, m, 4, Rounding::default()).unwrap());
        }
    }

    #[test]
    fn decomposition_rejects_membership_failure() {
        let p = RealPolynomial::monomial(SQRT2, 1);
        // dist(sqrt 2) ~ 0.414 >= 1/6.
        assert!(matches!(
            closest_decomposition_check(&p, 1, 3, Rounding::default()),
            Err(Error::Precondition(_))
        ));
    }
}
