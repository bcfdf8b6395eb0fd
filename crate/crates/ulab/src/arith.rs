//! Prime sieving and the weight functions built on top of it: the von
//! Mangoldt weight, its restriction to primes, the primorial `W`, Euler's
//! totient, the `W`-tricked weight `(phi(W)/W) * restricted(W*n + r)`, and
//! the prime-factor counting functions omega / big-omega.

use crate::error::{invalid, Error, Result};
use crate::reduce::par_sum;
use serde::{Deserialize, Serialize};
use std::io::{Read, Write};
use std::path::Path;
use std::sync::OnceLock;

/// Above this limit the sieve works in cache-sized segments.
const FLAT_SIEVE_LIMIT: u64 = 10_000_000;
const SEGMENT_BYTES: usize = 1 << 18;

/// Smallest-prime-factor cache never grows beyond this many entries;
/// larger arguments fall back to per-query trial division.
const SPF_CACHE_MAX: u64 = 1 << 22;

/// Immutable prime table: packed primality bits up to `limit`, the ascending
/// prime list, and a lazily built smallest-prime-factor cache.
pub struct PrimeTable {
    limit: u64,
    bits: Vec<u64>,
    primes: Vec<u64>,
    spf: OnceLock<Vec<u32>>,
}

impl PrimeTable {
    /// Sieve of Eratosthenes up to `limit` inclusive; segmented above 10^7.
    pub fn sieve(limit: u64) -> Result<PrimeTable> {
        if limit < 2 {
            invalid!("sieve limit must be at least 2, got {limit}");
        }
        let bits = if limit <= FLAT_SIEVE_LIMIT {
            flat_sieve(limit)
        } else {
            segmented_sieve(limit)
        };
        let mut primes = Vec::new();
        for n in 2..=limit {
            if get_bit(&bits, n) {
                primes.push(n);
            }
        }
        Ok(PrimeTable {
            limit,
            bits,
            primes,
            spf: OnceLock::new(),
        })
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// Primality of `n`; `n` must not exceed the sieve limit.
    pub fn is_prime(&self, n: u64) -> bool {
        assert!(n <= self.limit, "is_prime({n}) beyond sieve limit {}", self.limit);
        n >= 2 && get_bit(&self.bits, n)
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    /// Primes in `[1, n]`, `n <= limit`.
    pub fn primes_up_to(&self, n: u64) -> &[u64] {
        assert!(n <= self.limit);
        let end = self.primes.partition_point(|&p| p <= n);
        &self.primes[..end]
    }

    /// The prime-counting function pi(n).
    pub fn pi(&self, n: u64) -> u64 {
        self.primes_up_to(n).len() as u64
    }

    fn spf_cache(&self) -> &[u32] {
        self.spf.get_or_init(|| {
            let n = (self.limit.min(SPF_CACHE_MAX) + 1) as usize;
            let mut spf = vec![0u32; n];
            for i in 2..n {
                if spf[i] == 0 {
                    let mut j = i;
                    while j < n {
                        if spf[j] == 0 {
                            spf[j] = i as u32;
                        }
                        j += i;
                    }
                }
            }
            spf
        })
    }

    /// `(omega(n), big_omega(n))`: distinct prime factors and prime factors
    /// with multiplicity. Both are 0 at `n = 1`.
    pub fn omega_counts(&self, n: u64) -> Result<(u32, u32)> {
        if n == 0 {
            invalid!("omega_counts(0)");
        }
        let spf = self.spf_cache();
        if (n as usize) < spf.len() {
            let mut m = n as usize;
            let (mut omega, mut big) = (0u32, 0u32);
            while m > 1 {
                let p = spf[m] as usize;
                omega += 1;
                while m % p == 0 {
                    m /= p;
                    big += 1;
                }
            }
            return Ok((omega, big));
        }
        let (factors, _) = trial_factor(n, &self.primes)?;
        let omega = factors.len() as u32;
        let big = factors.iter().map(|&(_, k)| k).sum();
        Ok((omega, big))
    }

    /// The von Mangoldt weight: `log p` when `n = p^k`, otherwise 0.
    pub fn von_mangoldt(&self, n: u64) -> Result<f64> {
        if n == 0 {
            invalid!("von_mangoldt(0)");
        }
        if n == 1 {
            return Ok(0.0);
        }
        let p = self.smallest_prime_factor(n)?;
        let mut m = n;
        while m % p == 0 {
            m /= p;
        }
        Ok(if m == 1 { (p as f64).ln() } else { 0.0 })
    }

    /// The restriction of the von Mangoldt weight to the primes:
    /// `log n` at primes, 0 elsewhere (including proper prime powers).
    pub fn von_mangoldt_restricted(&self, n: u64) -> Result<f64> {
        if n == 0 {
            invalid!("von_mangoldt_restricted(0)");
        }
        if n <= self.limit {
            Ok(if self.is_prime(n) { (n as f64).ln() } else { 0.0 })
        } else {
            Err(Error::ResourceLimit(format!(
                "von_mangoldt_restricted({n}) beyond sieve limit {}",
                self.limit
            )))
        }
    }

    fn smallest_prime_factor(&self, n: u64) -> Result<u64> {
        debug_assert!(n >= 2);
        let spf = self.spf_cache();
        if (n as usize) < spf.len() {
            return Ok(spf[n as usize] as u64);
        }
        for &p in &self.primes {
            if p * p > n {
                break;
            }
            if n % p == 0 {
                return Ok(p);
            }
        }
        // No prime factor up to min(sqrt(n), limit): n is prime iff the
        // prime list actually covers sqrt(n).
        let last = *self.primes.last().unwrap();
        if last.saturating_mul(last) >= n {
            Ok(n)
        } else {
            Err(Error::ResourceLimit(format!(
                "factoring {n} requires primes up to sqrt(n), sieve limit is {}",
                self.limit
            )))
        }
    }
}

/// Product of all primes `<= w - 1`. Overflow is reported, not wrapped.
pub fn primorial_below(table: &PrimeTable, w: u64) -> Result<u64> {
    if w <= 2 {
        invalid!("primorial_below requires w > 2, got {w}");
    }
    let mut acc: u64 = 1;
    for &p in table.primes_up_to((w - 1).min(table.limit())) {
        acc = acc
            .checked_mul(p)
            .ok_or_else(|| Error::Overflow(format!("primorial below {w} exceeds u64")))?;
    }
    Ok(acc)
}

/// Euler's totient by trial division.
pub fn euler_phi(n: u64) -> Result<u64> {
    if n == 0 {
        invalid!("euler_phi(0)");
    }
    let mut m = n;
    let mut phi = n;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            phi -= phi / p;
            while m % p == 0 {
                m /= p;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if m > 1 {
        phi -= phi / m;
    }
    Ok(phi)
}

fn trial_factor(n: u64, primes: &[u64]) -> Result<(Vec<(u64, u32)>, u64)> {
    let mut m = n;
    let mut out = Vec::new();
    for &p in primes {
        if p * p > m {
            break;
        }
        if m % p == 0 {
            let mut k = 0;
            while m % p == 0 {
                m /= p;
                k += 1;
            }
            out.push((p, k));
        }
    }
    if m > 1 {
        let last = primes.last().copied().unwrap_or(0);
        if last.saturating_mul(last) < m {
            return Err(Error::ResourceLimit(format!(
                "factoring {n}: prime list too short"
            )));
        }
        out.push((m, 1));
        m = 1;
    }
    Ok((out, m))
}

/// Which arithmetic weight multiplies each term of an average.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum WeightSpec {
    Unit,
    VonMangoldt,
    VonMangoldtRestricted,
    /// The W-tricked weight with primorial parameter `w` and residue `r`;
    /// requires `gcd(r, W) = 1`.
    Modified { w: u64, r: u64 },
}

impl WeightSpec {
    pub fn validate(&self, table: &PrimeTable) -> Result<()> {
        if let WeightSpec::Modified { w, r } = *self {
            if r == 0 {
                invalid!("modified weight requires r >= 1");
            }
            let big_w = primorial_below(table, w)?;
            if gcd(r, big_w) != 1 {
                invalid!("modified weight requires gcd(r, W) = 1; r={r}, W={big_w}");
            }
        }
        Ok(())
    }

    /// Sieve limit needed to evaluate this weight on `[1, n_max]`.
    pub fn required_limit(&self, table: &PrimeTable, n_max: u64) -> Result<u64> {
        match *self {
            WeightSpec::Unit => Ok(2),
            WeightSpec::VonMangoldt | WeightSpec::VonMangoldtRestricted => Ok(n_max),
            WeightSpec::Modified { w, r } => {
                let big_w = primorial_below(table, w)?;
                big_w
                    .checked_mul(n_max)
                    .and_then(|x| x.checked_add(r))
                    .ok_or_else(|| Error::Overflow(format!("W*{n_max}+{r} exceeds u64")))
            }
        }
    }

    /// Resolves the spec against a table into a cheap per-`n` evaluator.
    pub fn bind<'a>(&self, table: &'a PrimeTable) -> Result<WeightFn<'a>> {
        let (big_w, ratio, r) = match *self {
            WeightSpec::Modified { w, r } => {
                let big_w = primorial_below(table, w)?;
                if r == 0 || gcd(r, big_w) != 1 {
                    invalid!("modified weight requires r >= 1 coprime to W");
                }
                let phi = euler_phi(big_w)?;
                (big_w, phi as f64 / big_w as f64, r)
            }
            _ => (0, 0.0, 0),
        };
        Ok(WeightFn {
            spec: *self,
            table,
            big_w,
            ratio,
            r,
        })
    }
}

/// A [`WeightSpec`] bound to a prime table, with the primorial and the
/// `phi(W)/W` ratio precomputed.
pub struct WeightFn<'a> {
    spec: WeightSpec,
    table: &'a PrimeTable,
    big_w: u64,
    ratio: f64,
    r: u64,
}

impl WeightFn<'_> {
    pub fn eval(&self, n: u64) -> Result<f64> {
        match self.spec {
            WeightSpec::Unit => Ok(1.0),
            WeightSpec::VonMangoldt => self.table.von_mangoldt(n),
            WeightSpec::VonMangoldtRestricted => self.table.von_mangoldt_restricted(n),
            WeightSpec::Modified { .. } => {
                let arg = self
                    .big_w
                    .checked_mul(n)
                    .and_then(|x| x.checked_add(self.r))
                    .ok_or_else(|| Error::Overflow(format!("W*{n}+r exceeds u64")))?;
                Ok(self.ratio * self.table.von_mangoldt_restricted(arg)?)
            }
        }
    }

    pub fn spec(&self) -> WeightSpec {
        self.spec
    }
}

/// `(phi(W)/W) * restricted_von_mangoldt(W*n + r)` as a one-shot call.
pub fn modified_von_mangoldt(table: &PrimeTable, w: u64, r: u64, n: u64) -> Result<f64> {
    WeightSpec::Modified { w, r }.bind(table)?.eval(n)
}

/// `(1/N) * sum_{n<=N} restricted_von_mangoldt(n)`; trends to 1.
pub fn restricted_mangoldt_mean(table: &PrimeTable, n_max: u64) -> Result<f64> {
    if n_max > table.limit() {
        return Err(Error::ResourceLimit(format!(
            "mean up to {n_max} beyond sieve limit {}",
            table.limit()
        )));
    }
    let total = par_sum(n_max as usize, |i| {
        let n = (i + 1) as u64;
        if table.is_prime(n) {
            (n as f64).ln()
        } else {
            0.0
        }
    });
    Ok(total / n_max as f64)
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Residues `1 <= r <= W` with `gcd(r, W) = 1`.
pub fn admissible_residues(big_w: u64) -> Vec<u64> {
    (1..=big_w).filter(|&r| gcd(r, big_w) == 1).collect()
}

fn get_bit(bits: &[u64], n: u64) -> bool {
    (bits[(n / 64) as usize] >> (n % 64)) & 1 == 1
}

fn clear_bit(bits: &mut [u64], n: u64) {
    bits[(n / 64) as usize] &= !(1u64 << (n % 64));
}

fn flat_sieve(limit: u64) -> Vec<u64> {
    let words = (limit / 64 + 1) as usize;
    let mut bits = vec![!0u64; words];
    clear_bit(&mut bits, 0);
    clear_bit(&mut bits, 1);
    let mut p = 2u64;
    while p * p <= limit {
        if get_bit(&bits, p) {
            let mut q = p * p;
            while q <= limit {
                clear_bit(&mut bits, q);
                q += p;
            }
        }
        p += 1;
    }
    // Mask bits above the limit so the packed representation is canonical.
    let extra = 63 - (limit % 64);
    if extra > 0 {
        *bits.last_mut().unwrap() &= !0u64 >> extra;
    }
    bits
}

fn segmented_sieve(limit: u64) -> Vec<u64> {
    let root = (limit as f64).sqrt() as u64 + 1;
    let base_bits = flat_sieve(root);
    let base_primes: Vec<u64> = (2..=root).filter(|&n| get_bit(&base_bits, n)).collect();

    let words = (limit / 64 + 1) as usize;
    let mut bits = vec![0u64; words];
    for n in 0..=root.min(limit) {
        if get_bit(&base_bits, n) {
            bits[(n / 64) as usize] |= 1 << (n % 64);
        }
    }

    let seg_len = (SEGMENT_BYTES * 8) as u64;
    let mut lo = root + 1;
    let mut segment = vec![true; seg_len as usize];
    while lo <= limit {
        let hi = (lo + seg_len - 1).min(limit);
        let len = (hi - lo + 1) as usize;
        segment[..len].fill(true);
        for &p in &base_primes {
            if p * p > hi {
                break;
            }
            let mut start = lo.div_ceil(p) * p;
            if start < p * p {
                start = p * p;
            }
            let mut q = start;
            while q <= hi {
                segment[(q - lo) as usize] = false;
                q += p;
            }
        }
        for (off, &is_p) in segment[..len].iter().enumerate() {
            if is_p {
                let n = lo + off as u64;
                bits[(n / 64) as usize] |= 1 << (n % 64);
            }
        }
        lo = hi + 1;
    }
    bits
}

const SIEVE_MAGIC: &[u8; 8] = b"ULABSV01";

/// Persist the primality bitset: 8-byte magic, little-endian limit, packed
/// bits (bit `n` of the stream is primality of `n`).
pub fn write_sieve(table: &PrimeTable, path: &Path) -> Result<()> {
    let mut f = std::fs::File::create(path)?;
    f.write_all(SIEVE_MAGIC)?;
    f.write_all(&table.limit.to_le_bytes())?;
    for word in &table.bits {
        f.write_all(&word.to_le_bytes())?;
    }
    Ok(())
}

pub fn read_sieve(path: &Path) -> Result<PrimeTable> {
    let mut f = std::fs::File::open(path)?;
    let mut magic = [0u8; 8];
    f.read_exact(&mut magic)?;
    if &magic != SIEVE_MAGIC {
        return Err(Error::Parse(format!("bad sieve magic in {}", path.display())));
    }
    let mut limit_buf = [0u8; 8];
    f.read_exact(&mut limit_buf)?;
    let limit = u64::from_le_bytes(limit_buf);
    let words = (limit / 64 + 1) as usize;
    let mut bits = vec![0u64; words];
    let mut word_buf = [0u8; 8];
    for word in bits.iter_mut() {
        f.read_exact(&mut word_buf)?;
        *word = u64::from_le_bytes(word_buf);
    }
    let primes = (2..=limit).filter(|&n| get_bit(&bits, n)).collect();
    Ok(PrimeTable {
        limit,
        bits,
        primes,
        spf: OnceLock::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn is_prime_trial(n: u64) -> bool {
        if n < 2 {
            return false;
        }
        let mut d = 2;
        while d * d <= n {
            if n % d == 0 {
                return false;
            }
            d += 1;
        }
        true
    }

    #[test]
    fn sieve_matches_trial_division() {
        let table = PrimeTable::sieve(10).unwrap();
        assert_eq!(table.primes(), &[2, 3, 5, 7]);
        let table = PrimeTable::sieve(1000).unwrap();
        for n in 0..=1000 {
            assert_eq!(table.is_prime(n), is_prime_trial(n), "n = {n}");
        }
        assert_eq!(table.pi(100), 25);
    }

    #[test]
    fn sieve_limit_two() {
        let table = PrimeTable::sieve(2).unwrap();
        assert_eq!(table.primes(), &[2]);
    }

    #[test]
    fn sieve_rejects_small_limit() {
        assert!(matches!(PrimeTable::sieve(1), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn segmented_agrees_with_flat() {
        // Exercise the segmented path on a small limit by comparing bitsets.
        let flat = flat_sieve(100_000);
        let seg = segmented_sieve(100_000);
        assert_eq!(flat, seg);
    }

    #[test]
    fn von_mangoldt_values() {
        let t = PrimeTable::sieve(100).unwrap();
        assert_eq!(t.von_mangoldt(8).unwrap(), 2f64.ln());
        assert_eq!(t.von_mangoldt(6).unwrap(), 0.0);
        assert_eq!(t.von_mangoldt(7).unwrap(), 7f64.ln());
        assert_eq!(t.von_mangoldt(1).unwrap(), 0.0);
        assert!(t.von_mangoldt(0).is_err());
    }

    #[test]
    fn restricted_vanishes_at_prime_powers() {
        let t = PrimeTable::sieve(100).unwrap();
        assert_eq!(t.von_mangoldt_restricted(8).unwrap(), 0.0);
        assert_eq!(t.von_mangoldt_restricted(7).unwrap(), 7f64.ln());
        assert_eq!(t.von_mangoldt_restricted(1).unwrap(), 0.0);
        for n in 1..=100u64 {
            assert!(
                t.von_mangoldt_restricted(n).unwrap() <= t.von_mangoldt(n).unwrap() + 1e-15
            );
        }
    }

    #[test]
    fn primorial_values() {
        let t = PrimeTable::sieve(100).unwrap();
        assert_eq!(primorial_below(&t, 5).unwrap(), 6);
        assert_eq!(primorial_below(&t, 3).unwrap(), 2);
        assert_eq!(primorial_below(&t, 8).unwrap(), 210);
        assert!(primorial_below(&t, 2).is_err());
    }

    #[test]
    fn primorial_overflow_detected() {
        let t = PrimeTable::sieve(1000).unwrap();
        assert!(matches!(primorial_below(&t, 1000), Err(Error::Overflow(_))));
    }

    #[test]
    fn euler_phi_values() {
        assert_eq!(euler_phi(6).unwrap(), 2);
        assert_eq!(euler_phi(1).unwrap(), 1);
        assert_eq!(euler_phi(210).unwrap(), 48);
        assert!(euler_phi(0).is_err());
    }

    #[test]
    fn modified_weight_examples() {
        let t = PrimeTable::sieve(100).unwrap();
        let v = modified_von_mangoldt(&t, 5, 1, 1).unwrap();
        assert!((v - 7f64.ln() / 3.0).abs() < 1e-12);
        let v = modified_von_mangoldt(&t, 5, 1, 2).unwrap();
        assert!((v - 13f64.ln() / 3.0).abs() < 1e-12);
        assert_eq!(modified_von_mangoldt(&t, 5, 1, 4).unwrap(), 0.0);
    }

    #[test]
    fn modified_weight_supported_on_prime_fibers() {
        let t = PrimeTable::sieve(1000).unwrap();
        let wf = WeightSpec::Modified { w: 5, r: 1 }.bind(&t).unwrap();
        for n in 1..=100u64 {
            let v = wf.eval(n).unwrap();
            assert_eq!(v > 0.0, t.is_prime(6 * n + 1), "n = {n}");
        }
    }

    #[test]
    fn omega_values() {
        let t = PrimeTable::sieve(1000).unwrap();
        assert_eq!(t.omega_counts(360).unwrap(), (3, 6));
        assert_eq!(t.omega_counts(7).unwrap(), (1, 1));
        assert_eq!(t.omega_counts(1).unwrap(), (0, 0));
        assert!(t.omega_counts(0).is_err());
        for n in 1..=1000u64 {
            let (o, big) = t.omega_counts(n).unwrap();
            assert!(o <= big);
        }
    }

    #[test]
    fn omega_additive_over_coprime_pairs() {
        let t = PrimeTable::sieve(10_000).unwrap();
        for (a, b) in [(35u64, 6u64), (49, 52), (8, 9), (11, 100)] {
            assert_eq!(gcd(a, b), 1);
            let (oa, ba) = t.omega_counts(a).unwrap();
            let (ob, bb) = t.omega_counts(b).unwrap();
            let (oab, bab) = t.omega_counts(a * b).unwrap();
            assert_eq!(oab, oa + ob);
            assert_eq!(bab, ba + bb);
        }
    }

    #[test]
    fn weight_spec_validation() {
        let t = PrimeTable::sieve(100).unwrap();
        assert!(WeightSpec::Modified { w: 5, r: 1 }.validate(&t).is_ok());
        assert!(WeightSpec::Modified { w: 5, r: 2 }.validate(&t).is_err());
        assert!(WeightSpec::Modified { w: 5, r: 0 }.validate(&t).is_err());
    }

    #[test]
    fn restricted_mean_near_one() {
        let t = PrimeTable::sieve(1_000_000).unwrap();
        let mean = restricted_mangoldt_mean(&t, 1_000_000).unwrap();
        assert!((0.9..=1.1).contains(&mean), "mean = {mean}");
    }

    #[test]
    fn sieve_file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("table.bin");
        let table = PrimeTable::sieve(10_000).unwrap();
        write_sieve(&table, &path).unwrap();
        let back = read_sieve(&path).unwrap();
        assert_eq!(back.limit(), 10_000);
        assert_eq!(back.primes(), table.primes());
    }
}
