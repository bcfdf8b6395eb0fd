//! Finite stand-ins for a probability space with commuting invertible
//! measure-preserving transformations: permutation systems, measurable sets
//! with cached measure, the multi-fold intersection measure, and the
//! suspension step that extends a system by fractional fiber coordinates.

use crate::error::{invalid, Result};
use crate::reduce::pairwise_sum;
use serde::{Deserialize, Serialize};

/// Permutation of `{0, .., size-1}` with a cycle decomposition, so arbitrary
/// (possibly huge or negative) powers apply in O(1) per point.
#[derive(Debug, Clone)]
pub struct Permutation {
    forward: Vec<u32>,
    cycle_of: Vec<u32>,
    pos_in_cycle: Vec<u32>,
    cycles: Vec<Vec<u32>>,
}

impl Permutation {
    pub fn new(forward: Vec<usize>) -> Result<Permutation> {
        let n = forward.len();
        if n == 0 {
            invalid!("empty permutation");
        }
        let mut seen = vec![false; n];
        for &y in &forward {
            if y >= n || seen[y] {
                invalid!("not a bijection on {{0..{n}}}");
            }
            seen[y] = true;
        }
        let forward: Vec<u32> = forward.into_iter().map(|x| x as u32).collect();
        let mut cycle_of = vec![u32::MAX; n];
        let mut pos_in_cycle = vec![0u32; n];
        let mut cycles = Vec::new();
        for start in 0..n {
            if cycle_of[start] != u32::MAX {
                continue;
            }
            let id = cycles.len() as u32;
            let mut cycle = Vec::new();
            let mut x = start as u32;
            loop {
                cycle_of[x as usize] = id;
                pos_in_cycle[x as usize] = cycle.len() as u32;
                cycle.push(x);
                x = forward[x as usize];
                if x as usize == start {
                    break;
                }
            }
            cycles.push(cycle);
        }
        Ok(Permutation {
            forward,
            cycle_of,
            pos_in_cycle,
            cycles,
        })
    }

    pub fn len(&self) -> usize {
        self.forward.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forward.is_empty()
    }

    pub fn apply(&self, x: usize) -> usize {
        self.forward[x] as usize
    }

    /// `T^e(x)` for any integer exponent.
    pub fn apply_pow(&self, e: i64, x: usize) -> usize {
        let cycle = &self.cycles[self.cycle_of[x] as usize];
        let len = cycle.len() as i64;
        let pos = self.pos_in_cycle[x] as i64;
        let idx = (pos + e).rem_euclid(len);
        cycle[idx as usize] as usize
    }

    pub fn commutes_with(&self, other: &Permutation) -> bool {
        (0..self.len()).all(|x| self.apply(other.apply(x)) == other.apply(self.apply(x)))
    }
}

/// Probability measure on the point set; uniform measures compare exactly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Measure {
    Uniform,
    Weights(Vec<f64>),
}

/// A finite point set with commuting measure-preserving permutations.
#[derive(Debug, Clone)]
pub struct FiniteSystem {
    size: usize,
    transforms: Vec<Permutation>,
    measure: Measure,
}

impl FiniteSystem {
    pub fn new(
        size: usize,
        transforms: Vec<Vec<usize>>,
        measure: Measure,
    ) -> Result<FiniteSystem> {
        if size == 0 {
            invalid!("system needs at least one point");
        }
        if transforms.is_empty() {
            invalid!("system needs at least one transformation");
        }
        let perms: Vec<Permutation> = transforms
            .into_iter()
            .map(|t| {
                if t.len() != size {
                    invalid!("transform length does not match system size");
                }
                Permutation::new(t)
            })
            .collect::<Result<_>>()?;
        for i in 0..perms.len() {
            for j in i + 1..perms.len() {
                if !perms[i].commutes_with(&perms[j]) {
                    invalid!("transforms {i} and {j} do not commute");
                }
            }
        }
        if let Measure::Weights(w) = &measure {
            if w.len() != size {
                invalid!("measure weight count does not match system size");
            }
            if w.iter().any(|&x| x < 0.0) {
                invalid!("negative measure weight");
            }
            let total = pairwise_sum(w);
            if (total - 1.0).abs() > 1e-12 {
                invalid!("measure weights must sum to 1, got {total}");
            }
            for (k, p) in perms.iter().enumerate() {
                for x in 0..size {
                    if (w[p.apply(x)] - w[x]).abs() > 1e-12 {
                        invalid!("transform {k} does not preserve the measure");
                    }
                }
            }
        }
        Ok(FiniteSystem {
            size,
            transforms: perms,
            measure,
        })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Number of commuting transformations.
    pub fn num_transforms(&self) -> usize {
        self.transforms.len()
    }

    pub fn transform(&self, i: usize) -> &Permutation {
        &self.transforms[i]
    }

    pub fn point_weight(&self, x: usize) -> f64 {
        match &self.measure {
            Measure::Uniform => 1.0 / self.size as f64,
            Measure::Weights(w) => w[x],
        }
    }

    /// Image of `x` under `prod_i T_i^{e[i]}`.
    pub fn apply_word(&self, exponents: &[i64], x: usize) -> usize {
        debug_assert_eq!(exponents.len(), self.transforms.len());
        let mut y = x;
        for (t, &e) in self.transforms.iter().zip(exponents) {
            y = t.apply_pow(e, y);
        }
        y
    }
}

/// Indicator of a measurable set with its measure cached.
#[derive(Debug, Clone)]
pub struct MeasurableSet {
    members: Vec<bool>,
    measure: f64,
}

impl MeasurableSet {
    pub fn from_indices(sys: &FiniteSystem, indices: &[usize]) -> Result<MeasurableSet> {
        let mut members = vec![false; sys.size()];
        for &i in indices {
            if i >= sys.size() {
                invalid!("set index {i} out of range for system of size {}", sys.size());
            }
            members[i] = true;
        }
        Ok(MeasurableSet::from_members(sys, members))
    }

    pub fn from_members(sys: &FiniteSystem, members: Vec<bool>) -> MeasurableSet {
        let weights: Vec<f64> = members
            .iter()
            .enumerate()
            .filter(|(_, &m)| m)
            .map(|(x, _)| sys.point_weight(x))
            .collect();
        let measure = pairwise_sum(&weights);
        MeasurableSet { members, measure }
    }

    pub fn contains(&self, x: usize) -> bool {
        self.members[x]
    }

    pub fn measure(&self) -> f64 {
        self.measure
    }

    pub fn indicator(&self) -> Vec<f64> {
        self.members.iter().map(|&m| if m { 1.0 } else { 0.0 }).collect()
    }
}

/// Product of cyclic rotations: `X = Z_{q_1} x .. x Z_{q_s}`, transform `i`
/// translating by row `i` of `generators`.
pub fn make_product_cyclic_system(
    moduli: &[u64],
    generators: &[Vec<i64>],
) -> Result<FiniteSystem> {
    if moduli.is_empty() || moduli.iter().any(|&q| q == 0) {
        invalid!("moduli must be positive");
    }
    if generators.is_empty() {
        invalid!("need at least one generator row");
    }
    let size_u64: u64 = moduli.iter().product();
    if size_u64 > 1 << 24 {
        invalid!("product system too large: {size_u64} points");
    }
    let size = size_u64 as usize;
    let mut transforms = Vec::with_capacity(generators.len());
    for row in generators {
        if row.len() != moduli.len() {
            invalid!("generator row length does not match moduli count");
        }
        let mut map = Vec::with_capacity(size);
        for x in 0..size {
            // mixed-radix decode, first modulus fastest
            let mut rest = x as u64;
            let mut y = 0u64;
            let mut stride = 1u64;
            for (&q, &g) in moduli.iter().zip(row) {
                let digit = rest % q;
                rest /= q;
                let moved = (digit as i64 + g).rem_euclid(q as i64) as u64;
                y += moved * stride;
                stride *= q;
            }
            map.push(y as usize);
        }
        transforms.push(map);
    }
    FiniteSystem::new(size, transforms, Measure::Uniform)
}

/// Measure of `A inter (prod_i T_i^{-e_{i,1}})A inter .. inter
/// (prod_i T_i^{-e_{i,m}})A`; `exponents` has one row per transform and one
/// column per intersection factor.
pub fn intersection_measure(
    sys: &FiniteSystem,
    set: &MeasurableSet,
    exponents: &[Vec<i64>],
) -> Result<f64> {
    let ell = sys.num_transforms();
    if exponents.len() != ell {
        invalid!("exponent matrix has {} rows, system has {ell} transforms", exponents.len());
    }
    let m = exponents[0].len();
    if exponents.iter().any(|row| row.len() != m) {
        invalid!("ragged exponent matrix");
    }
    let cols: Vec<Vec<i64>> = (0..m)
        .map(|j| (0..ell).map(|i| exponents[i][j]).collect())
        .collect();
    let weights: Vec<f64> = (0..sys.size())
        .filter(|&x| {
            set.contains(x) && cols.iter().all(|col| set.contains(sys.apply_word(col, x)))
        })
        .map(|x| sys.point_weight(x))
        .collect();
    Ok(pairwise_sum(&weights))
}

/// One step of the suspension flow on base x fiber: the base point moves by
/// `prod T_i^{[s + a]}` over the fiber coordinates, the fiber takes the
/// fractional parts `{s + a}`. Coordinates are laid out `(i, j)` with `i`
/// (the transform index) fastest.
pub fn suspension_step(
    sys: &FiniteSystem,
    x: usize,
    fractional: &[f64],
    shift: &[f64],
) -> Result<(usize, Vec<f64>)> {
    if x >= sys.size() {
        invalid!("point index out of range");
    }
    if fractional.len() != shift.len() {
        invalid!("fiber and shift dimension mismatch");
    }
    let ell = sys.num_transforms();
    if fractional.is_empty() || fractional.len() % ell != 0 {
        invalid!("fiber dimension must be a positive multiple of the transform count");
    }
    if fractional.iter().any(|&a| !(0.0..1.0).contains(&a)) {
        invalid!("fiber coordinates must lie in [0, 1)");
    }
    let mut y = x;
    let mut new_fiber = Vec::with_capacity(fractional.len());
    for (t, (&a, &s)) in fractional.iter().zip(shift).enumerate() {
        let total = s + a;
        let e = total.floor() as i64;
        y = sys.transform(t % ell).apply_pow(e, y);
        new_fiber.push(total - total.floor());
    }
    Ok((y, new_fiber))
}

/// The cocycle identity `[x + {y}] + [y] = [x + y]`, evaluated exactly on
/// dyadic rationals.
pub fn floor_cocycle_check(x: f64, y: f64) -> bool {
    let fy = y - y.floor();
    (x + fy).floor() + y.floor() == (x + y).floor()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seeded_rng;
    use rand::Rng;

    #[test]
    fn rotation_on_z5() {
        let sys = make_product_cyclic_system(&[5], &[vec![1]]).unwrap();
        assert_eq!(sys.size(), 5);
        assert_eq!(sys.transform(0).apply(4), 0);
        assert_eq!(sys.transform(0).apply_pow(7, 0), 2);
        assert_eq!(sys.transform(0).apply_pow(-1, 0), 4);
    }

    #[test]
    fn product_system_commutes() {
        let sys = make_product_cyclic_system(&[4, 3], &[vec![1, 0], vec![0, 1]]).unwrap();
        assert_eq!(sys.size(), 12);
        assert!(sys.transform(0).commutes_with(sys.transform(1)));
    }

    #[test]
    fn identity_system_allowed() {
        let sys = make_product_cyclic_system(&[2], &[vec![0]]).unwrap();
        assert_eq!(sys.transform(0).apply(1), 1);
    }

    #[test]
    fn zero_modulus_rejected() {
        assert!(make_product_cyclic_system(&[0], &[vec![1]]).is_err());
    }

    #[test]
    fn non_bijection_rejected() {
        assert!(FiniteSystem::new(3, vec![vec![0, 0, 1]], Measure::Uniform).is_err());
    }

    #[test]
    fn non_commuting_rejected() {
        // Transpositions (0 1) and (1 2) on three points do not commute.
        let r = FiniteSystem::new(3, vec![vec![1, 0, 2], vec![0, 2, 1]], Measure::Uniform);
        assert!(r.is_err());
    }

    #[test]
    fn non_preserving_measure_rejected() {
        let r = FiniteSystem::new(
            2,
            vec![vec![1, 0]],
            Measure::Weights(vec![0.75, 0.25]),
        );
        assert!(r.is_err());
        let ok = FiniteSystem::new(2, vec![vec![1, 0]], Measure::Weights(vec![0.5, 0.5]));
        assert!(ok.is_ok());
    }

    #[test]
    fn intersection_measure_examples() {
        let sys = make_product_cyclic_system(&[5], &[vec![1]]).unwrap();
        let a = MeasurableSet::from_indices(&sys, &[0]).unwrap();
        // Zero exponents: measure of A itself.
        assert!((intersection_measure(&sys, &a, &[vec![0]]).unwrap() - 0.2).abs() < 1e-15);
        // T^5 = id on Z_5.
        assert!((intersection_measure(&sys, &a, &[vec![5]]).unwrap() - 0.2).abs() < 1e-15);
        // Disjoint translate.
        assert_eq!(intersection_measure(&sys, &a, &[vec![1]]).unwrap(), 0.0);
        // Dimension mismatch.
        assert!(intersection_measure(&sys, &a, &[vec![1], vec![2]]).is_err());
    }

    #[test]
    fn intersection_measure_full_set() {
        let sys = make_product_cyclic_system(&[6], &[vec![1]]).unwrap();
        let full = MeasurableSet::from_indices(&sys, &(0..6).collect::<Vec<_>>()).unwrap();
        for e in [-7i64, 0, 3, 100] {
            assert!((intersection_measure(&sys, &full, &[vec![e]]).unwrap() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn suspension_step_hand_example() {
        let sys = make_product_cyclic_system(&[5], &[vec![1]]).unwrap();
        let (y, fiber) = suspension_step(&sys, 0, &[0.6], &[2.7]).unwrap();
        // exponent [2.7 + 0.6] = 3, fiber {3.3} = 0.3
        assert_eq!(y, 3);
        assert!((fiber[0] - 0.3).abs() < 1e-12);
    }

    #[test]
    fn suspension_zero_shift_is_identity() {
        let sys = make_product_cyclic_system(&[5], &[vec![1]]).unwrap();
        let (y, fiber) = suspension_step(&sys, 2, &[0.25, 0.5], &[0.0, 0.0]).unwrap();
        assert_eq!(y, 2);
        assert_eq!(fiber, vec![0.25, 0.5]);
    }

    #[test]
    fn suspension_flow_property() {
        // Step by s then by t equals step by s + t, on dyadic inputs where
        // floor arithmetic is exact.
        let sys = make_product_cyclic_system(&[7], &[vec![1]]).unwrap();
        let mut rng = seeded_rng(0, "systems-flow");
        for _ in 0..500 {
            let a = rng.gen_range(0u32..64) as f64 / 64.0;
            let s = rng.gen_range(-256i32..256) as f64 / 64.0;
            let t = rng.gen_range(-256i32..256) as f64 / 64.0;
            let x = rng.gen_range(0..7);
            let (y1, f1) = suspension_step(&sys, x, &[a], &[s]).unwrap();
            let (y2, f2) = suspension_step(&sys, y1, &f1, &[t]).unwrap();
            let (y3, f3) = suspension_step(&sys, x, &[a], &[s + t]).unwrap();
            assert_eq!(y2, y3);
            assert!((f2[0] - f3[0]).abs() < 1e-12);
        }
    }

    #[test]
    fn suspension_rejects_bad_fiber() {
        let sys = make_product_cyclic_system(&[5], &[vec![1]]).unwrap();
        assert!(suspension_step(&sys, 0, &[1.0], &[0.0]).is_err());
        assert!(suspension_step(&sys, 0, &[-0.1], &[0.0]).is_err());
    }

    #[test]
    fn suspension_permutes_rational_grid() {
        // On a fiber grid of resolution 1/G with a grid-aligned shift, the
        // step permutes (point, cell) pairs, so it preserves the product of
        // uniform measures.
        let sys = make_product_cyclic_system(&[3], &[vec![1]]).unwrap();
        let g = 16u32;
        let shift = 5.0 / g as f64 + 1.0; // 1 + 5/16
        let mut seen = std::collections::HashSet::new();
        for x in 0..3usize {
            for cell in 0..g {
                let a = cell as f64 / g as f64;
                let (y, fiber) = suspension_step(&sys, x, &[a], &[shift]).unwrap();
                let new_cell = (fiber[0] * g as f64).round() as u32 % g;
                assert!(seen.insert((y, new_cell)));
            }
        }
        assert_eq!(seen.len(), 3 * g as usize);
    }

    #[test]
    fn floor_cocycle_examples() {
        assert!(floor_cocycle_check(0.7, 2.6));
        assert!(floor_cocycle_check(3.0, -2.0));
        let mut rng = seeded_rng(0, "systems-cocycle");
        for _ in 0..10_000 {
            let x = rng.gen_range(-4096i32..4096) as f64 / 256.0;
            let y = rng.gen_range(-4096i32..4096) as f64 / 256.0;
            assert!(floor_cocycle_check(x, y), "({x}, {y})");
        }
    }
}
