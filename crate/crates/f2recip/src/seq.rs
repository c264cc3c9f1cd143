//! Generators for the named series and sets, each paired with an
//! independent brute-force oracle where one exists.
//!
//! The generating routes are deliberately different from the oracle
//! routes: the divisor-parity set comes from the square/twice-square
//! characterization while its oracle sieves actual divisor sums; the
//! partition-parity set comes from series inversion while its oracle runs
//! the coin-style dynamic program. Agreement between routes is what the
//! test suite leans on.

use num_bigint::BigUint;

use crate::series::{words_for, BitSeries};

/// The closed set of named sequences this crate generates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SequenceKind {
    /// Positive perfect squares 1, 4, 9, 16, ...
    Squares,
    /// Odd positive squares 1, 9, 25, 49, ...
    OddSquares,
    /// Triangular numbers 0, 1, 3, 6, 10, ...
    Triangular,
    /// Generalized pentagonal numbers k(3k-1)/2 for all integers k.
    GenPentagonal,
    /// Indices with odd divisor sum: 0 and the numbers k^2 and 2k^2.
    SigmaParity,
    /// Reciprocal series of [`SequenceKind::SigmaParity`].
    SigmaBar,
    /// Indices with an odd partition count; reciprocal of the
    /// generalized pentagonal set.
    PartitionParity,
    /// The truncated product of (1 + q^n) over n >= 1.
    DistinctPartsProduct,
}

impl SequenceKind {
    pub const ALL: [SequenceKind; 8] = [
        SequenceKind::Squares,
        SequenceKind::OddSquares,
        SequenceKind::Triangular,
        SequenceKind::GenPentagonal,
        SequenceKind::SigmaParity,
        SequenceKind::SigmaBar,
        SequenceKind::PartitionParity,
        SequenceKind::DistinctPartsProduct,
    ];

    /// The name used on the command line and in reports.
    pub fn cli_name(self) -> &'static str {
        match self {
            SequenceKind::Squares => "squares",
            SequenceKind::OddSquares => "odd-squares",
            SequenceKind::Triangular => "triangular",
            SequenceKind::GenPentagonal => "pentagonal",
            SequenceKind::SigmaParity => "sigma",
            SequenceKind::SigmaBar => "sigma-bar",
            SequenceKind::PartitionParity => "partitions",
            SequenceKind::DistinctPartsProduct => "distinct-product",
        }
    }

    pub fn from_cli_name(name: &str) -> Option<SequenceKind> {
        SequenceKind::ALL
            .into_iter()
            .find(|k| k.cli_name() == name)
    }
}

/// The indicator series of the named set, truncated to `precision`.
pub fn generate(kind: SequenceKind, precision: usize) -> BitSeries {
    let n = precision;
    match kind {
        SequenceKind::Squares => from_terms(n, (1u64..).map(|k| k * k)),
        SequenceKind::OddSquares => from_terms(n, (1u64..).step_by(2).map(|k| k * k)),
        SequenceKind::Triangular => from_terms(n, (0u64..).map(|k| k * (k + 1) / 2)),
        SequenceKind::GenPentagonal => {
            let mut f = BitSeries::zero(n);
            f.set_bit(0);
            for k in 1u64.. {
                let low = k * (3 * k - 1) / 2;
                if low >= n as u64 {
                    break;
                }
                f.set_bit(low as usize);
                let high = k * (3 * k + 1) / 2;
                if high < n as u64 {
                    f.set_bit(high as usize);
                }
            }
            f
        }
        SequenceKind::SigmaParity => {
            let mut f = from_terms(n, (1u64..).map(|k| k * k));
            f.set_bit(0);
            for k in 1u64.. {
                let t = 2 * k * k;
                if t >= n as u64 {
                    break;
                }
                f.set_bit(t as usize);
            }
            f
        }
        SequenceKind::SigmaBar => generate(SequenceKind::SigmaParity, n)
            .inverse()
            .expect("divisor-parity series has constant term 1"),
        SequenceKind::PartitionParity => generate(SequenceKind::GenPentagonal, n)
            .inverse()
            .expect("pentagonal series has constant term 1"),
        SequenceKind::DistinctPartsProduct => {
            let mut f = BitSeries::one(n);
            for m in 1..n {
                f.mul_one_plus_power_inplace(m);
            }
            f
        }
    }
}

/// Collects ascending terms below the precision into an indicator series.
fn from_terms(precision: usize, terms: impl Iterator<Item = u64>) -> BitSeries {
    let mut f = BitSeries::zero(precision);
    for t in terms.take_while(|&t| t < precision as u64) {
        f.set_bit(t as usize);
    }
    f
}

/// Bit `n` = parity of the divisor sum of `n`, by sieving.
///
/// Only odd divisors change the parity, so the sieve flips bit `m` once
/// for every odd `d` dividing `m`; the bit for 0 is set, following the
/// convention that the empty divisor sum of 0 counts as 1.
pub fn sigma_parity_oracle(precision: usize) -> BitSeries {
    let n = precision;
    let mut words = vec![0u64; words_for(n)];
    words[0] = 1;
    let mut d = 1usize;
    while d < n {
        let mut m = d;
        while m < n {
            words[m / 64] ^= 1 << (m % 64);
            m += d;
        }
        d += 2;
    }
    BitSeries::from_words(words, n).expect("precision nonzero")
}

/// Full divisor sums `sigma(m)` for `1 <= m < bound`; index 0 is unused
/// and left at 0 (the series-level convention for 0 lives in
/// [`sigma_parity_oracle`], not here).
pub fn sigma_values(bound: usize) -> Vec<u64> {
    let mut sigma = vec![0u64; bound];
    for d in 1..bound {
        let mut m = d;
        while m < bound {
            sigma[m] += d as u64;
            m += d;
        }
    }
    sigma
}

/// Bit `n` = partition count of `n` mod 2, by the coin-style dynamic
/// program over parts `1..precision`, entirely mod 2.
///
/// Quadratic; intended for precisions up to the tens of thousands.
pub fn partition_parity_oracle(precision: usize) -> BitSeries {
    let n = precision;
    let mut p = vec![false; n];
    p[0] = true;
    for part in 1..n {
        for m in part..n {
            let prev = p[m - part];
            p[m] ^= prev;
        }
    }
    let mut f = BitSeries::zero(n);
    for (m, &odd) in p.iter().enumerate() {
        if odd {
            f.set_bit(m);
        }
    }
    f
}

/// The truncated product of `(1 + q^n)^|k|` over `n >= 1`, inverted when
/// `k` is negative. `k = 0` yields the constant 1.
pub fn product_power(k: i64, precision: usize) -> BitSeries {
    let base = generate(SequenceKind::DistinctPartsProduct, precision);
    let p = base.pow(k.unsigned_abs());
    if k < 0 {
        p.inverse()
            .expect("a product of units has constant term 1")
    } else {
        p
    }
}

/// Outcome of one exact recurrence check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecurrenceCheck {
    pub name: &'static str,
    pub bound: u64,
    pub holds: bool,
    pub first_failure: Option<u64>,
}

impl std::fmt::Display for RecurrenceCheck {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{},{},{}",
            self.name,
            self.bound,
            if self.holds { "PASS" } else { "FAIL" }
        )?;
        if let Some(n) = self.first_failure {
            write!(f, ",{n}")?;
        }
        Ok(())
    }
}

/// Exact big-integer partition counts `p(0), ..., p(bound-1)`.
fn partition_counts(bound: usize) -> Vec<BigUint> {
    let mut p = vec![BigUint::ZERO; bound];
    p[0] = BigUint::from(1u8);
    for part in 1..bound {
        for m in part..bound {
            let prev = p[m - part].clone();
            p[m] += prev;
        }
    }
    p
}

/// Pentagonal offsets `k(3k-1)/2` for `k = 1, -1, 2, -2, ...` up to
/// `limit`, each tagged with the sign `(-1)^(k-1)`, i.e. `+` for odd
/// `|k|` and `-` for even `|k|`.
fn pentagonal_offsets(limit: u64) -> Vec<(u64, bool)> {
    let mut offsets = Vec::new();
    for k in 1u64.. {
        let positive = k % 2 == 1;
        let low = k * (3 * k - 1) / 2;
        if low > limit {
            break;
        }
        offsets.push((low, positive));
        let high = k * (3 * k + 1) / 2;
        if high <= limit {
            offsets.push((high, positive));
        }
    }
    offsets
}

/// Checks, with exact integer arithmetic, the classical alternating
/// recurrences over pentagonal offsets `g`: the partition count satisfies
/// `p(n) = sum of (-1)^(k-1) p(n - g_k)`, and the divisor sum satisfies
/// the same shape with the `sigma(n - g_k)` term replaced by `n` itself
/// when `g_k = n`. Both are verified for all `1 <= n < bound`.
pub fn verify_pentagonal_recurrences(bound: u64) -> Vec<RecurrenceCheck> {
    assert!(bound >= 2, "bound must be at least 2");
    let b = bound as usize;
    let offsets = pentagonal_offsets(bound);

    let p = partition_counts(b);
    let mut p_failure = None;
    for n in 1..b {
        let mut plus = BigUint::ZERO;
        let mut minus = BigUint::ZERO;
        for &(g, positive) in &offsets {
            let g = g as usize;
            if g > n {
                break;
            }
            if positive {
                plus += &p[n - g];
            } else {
                minus += &p[n - g];
            }
        }
        if plus != &p[n] + &minus {
            p_failure = Some(n as u64);
            break;
        }
    }

    let sigma = sigma_values(b);
    let mut sigma_failure = None;
    for n in 1..b {
        let mut acc: i128 = 0;
        for &(g, positive) in &offsets {
            let g = g as usize;
            if g > n {
                break;
            }
            let term = if g == n { n as i128 } else { sigma[n - g] as i128 };
            acc += if positive { term } else { -term };
        }
        if acc != sigma[n] as i128 {
            sigma_failure = Some(n as u64);
            break;
        }
    }

    vec![
        RecurrenceCheck {
            name: "P_RECURRENCE",
            bound,
            holds: p_failure.is_none(),
            first_failure: p_failure,
        },
        RecurrenceCheck {
            name: "SIGMA_RECURRENCE",
            bound,
            holds: sigma_failure.is_none(),
            first_failure: sigma_failure,
        },
    ]
}
