//! A van der Corput style estimate as a checkable inequality on finite
//! families of inner-product-space vectors:
//! `|avg v|^2 <= C * ((1/N^2) sum |v(n)|^2 + (1/N) sum_h |avg_n <v(n+h), v(n)>|)`.
//! The constant is existential; the shipped default `C = 4` is certified
//! empirically over a frozen randomized battery.

use crate::error::{invalid, Result};
use crate::reduce::{pairwise_sum, par_sum};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Empirical constant certified by the randomized battery.
pub const DEFAULT_C: f64 = 4.0;

const NORM_TOL: f64 = 1e-12;

/// `N` vectors of a fixed dimension, each with norm at most 1.
#[derive(Debug, Clone)]
pub struct VectorFamily {
    dim: usize,
    vectors: Vec<Vec<Complex64>>,
}

impl VectorFamily {
    pub fn new(vectors: Vec<Vec<Complex64>>) -> Result<VectorFamily> {
        if vectors.is_empty() {
            invalid!("vector family must be nonempty");
        }
        let dim = vectors[0].len();
        if dim == 0 {
            invalid!("vector dimension must be positive");
        }
        for (i, v) in vectors.iter().enumerate() {
            if v.len() != dim {
                invalid!("vector {i} has dimension {}, expected {dim}", v.len());
            }
            let norm = norm(v);
            if norm > 1.0 + NORM_TOL {
                invalid!("vector {i} has norm {norm} > 1");
            }
        }
        Ok(VectorFamily { dim, vectors })
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
}

fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    let terms: Vec<Complex64> = a.iter().zip(b).map(|(x, y)| x * y.conj()).collect();
    pairwise_sum(&terms)
}

fn norm(v: &[Complex64]) -> f64 {
    inner(v, v).re.max(0.0).sqrt()
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct VdcCheck {
    /// `|(1/N) sum v(n)|^2`.
    pub lhs: f64,
    /// The bracket on the right-hand side, before multiplication by `C`.
    pub rhs: f64,
    /// `lhs / rhs` (0 when both vanish).
    pub ratio: f64,
    pub holds: bool,
}

/// Evaluates both sides of the estimate exactly as displayed, `h` ranging
/// over `1..=N`.
pub fn van_der_corput_check(family: &VectorFamily, c: f64) -> Result<VdcCheck> {
    if c <= 0.0 {
        invalid!("constant C must be positive");
    }
    let n = family.len();
    let dim = family.dim();
    let vectors = &family.vectors;

    let mut avg = vec![Complex64::new(0.0, 0.0); dim];
    for k in 0..dim {
        avg[k] = par_sum(n, |i| vectors[i][k]) / n as f64;
    }
    let lhs = inner(&avg, &avg).re.max(0.0);

    let sq_term = par_sum(n, |i| {
        let nn = norm(&vectors[i]);
        nn * nn
    }) / (n as f64 * n as f64);

    let corr_term = par_sum(n, |h1| {
        let h = h1 + 1;
        if h >= n {
            return 0.0; // inner sum over n = 1..N-h is empty at h = N
        }
        let s = par_sum(n - h, |i| inner(&vectors[i + h], &vectors[i]));
        (s / n as f64).norm()
    }) / n as f64;

    let rhs = sq_term + corr_term;
    let ratio = if rhs == 0.0 { 0.0 } else { lhs / rhs };
    Ok(VdcCheck {
        lhs,
        rhs,
        ratio,
        holds: lhs <= c * rhs + 1e-12,
    })
}
