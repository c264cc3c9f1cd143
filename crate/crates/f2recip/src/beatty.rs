//! Exact-integer verification of the Beatty-sequence index identities for
//! the divisor-parity enumeration.
//!
//! Everything here reduces floors of irrational multiples to integer
//! square roots via the two identities (both relying on the irrationality
//! of sqrt(2), so neither argument is ever a perfect square in the
//! boundary-relevant cases):
//!
//! ```text
//! floor(x / sqrt(2)) = isqrt(floor(x^2 / 2))
//! floor(x * sqrt(2)) = isqrt(2 * x^2)
//! ```
//!
//! Floating point is deliberately absent from this module: a one-ulp
//! error flips a floor, and the statements being checked are exact.
//! Intermediates are 128-bit; the supported index range is `k <= 2^60`.

use thiserror::Error;

use crate::seq;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BeattyError {
    /// Beatty sequences here are 1-indexed.
    #[error("Beatty sequence index must be at least 1")]
    ZeroIndex,
    /// The parity source ran out before yielding the requested number of
    /// odd entries.
    #[error("source yielded only {found} odd values of {requested} requested")]
    InsufficientOddValues { requested: usize, found: usize },
}

/// Floor of the square root, by integer-only Newton iteration.
///
/// The seed `2^(floor(log2 n)/2 + 1)` strictly exceeds `sqrt(n)`, the
/// iterate `(x + n/x)/2` never drops below `floor(sqrt(n))`, and it
/// strictly decreases until it reaches it, so the first non-decreasing
/// step exits with the exact answer.
pub fn isqrt_u128(n: u128) -> u128 {
    if n == 0 {
        return 0;
    }
    let mut x = 1u128 << ((127 - n.leading_zeros()) / 2 + 1);
    loop {
        let y = (x + n / x) >> 1;
        if y >= x {
            return x;
        }
        x = y;
    }
}

/// Floor of the square root of a 64-bit integer.
pub fn isqrt(n: u64) -> u64 {
    isqrt_u128(n as u128) as u64
}

/// The enumeration counting function: `isqrt(n) + isqrt(n/2)`, which
/// counts the positive divisor-parity elements up to `n` (the squares up
/// to `n` plus the twice-squares up to `n`).
pub fn c_function(n: u64) -> u64 {
    isqrt(n) + isqrt(n / 2)
}

/// The six Beatty-type index sequences, each an exact integer formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BeattyKind {
    /// `w_k = floor((k - 1/2)(2 + sqrt 2))`: 1, 5, 8, 11, 15, ...
    W,
    /// `alpha_k = floor(k(2 + sqrt 2))`: 3, 6, 10, 13, 17, ...
    Alpha,
    /// `beta_k = floor(k(2 + sqrt 2)/2)`: 1, 3, 5, 6, 8, ...
    Beta,
    /// `gamma_k = floor((k - 1/2)(2 + 2 sqrt 2))`: 2, 7, 12, 16, 21, ...
    Gamma,
    /// `delta_k = floor(k(2 + 2 sqrt 2))`: 4, 9, 14, 19, 24, ...
    DeltaSeq,
    /// `epsilon_k = floor(k(1 + sqrt 2))`: 2, 4, 7, 9, 12, ...
    Epsilon,
}

impl BeattyKind {
    pub const ALL: [BeattyKind; 6] = [
        BeattyKind::W,
        BeattyKind::Alpha,
        BeattyKind::Beta,
        BeattyKind::Gamma,
        BeattyKind::DeltaSeq,
        BeattyKind::Epsilon,
    ];

    pub fn cli_name(self) -> &'static str {
        match self {
            BeattyKind::W => "w",
            BeattyKind::Alpha => "alpha",
            BeattyKind::Beta => "beta",
            BeattyKind::Gamma => "gamma",
            BeattyKind::DeltaSeq => "delta",
            BeattyKind::Epsilon => "epsilon",
        }
    }

    pub fn from_cli_name(name: &str) -> Option<BeattyKind> {
        BeattyKind::ALL.into_iter().find(|k| k.cli_name() == name)
    }

    /// The divisor-parity element each index sequence is expected to land
    /// on: the `kind_k`-th enumeration term.
    fn expected_sigma_value(self, k: u64) -> u64 {
        let x = 2 * k - 1;
        match self {
            BeattyKind::W => x * x,
            BeattyKind::Alpha => 4 * k * k,
            BeattyKind::Beta => k * k,
            BeattyKind::Gamma => 2 * x * x,
            BeattyKind::DeltaSeq => 8 * k * k,
            BeattyKind::Epsilon => 2 * k * k,
        }
    }
}

/// The `k`-th term of the given Beatty-type sequence, exactly.
///
/// Splitting each multiplier into its integer part plus a pure `sqrt(2)`
/// part reduces every case to one of the isqrt identities; with `x`
/// standing for `2k - 1`:
///
/// - `w_k     = x  + isqrt(x^2 / 2)`
/// - `alpha_k = 2k + isqrt(2 k^2)`
/// - `beta_k  = k  + isqrt(k^2 / 2)`
/// - `gamma_k = x  + isqrt(2 x^2)`
/// - `delta_k = 2k + isqrt(8 k^2)`
/// - `epsilon_k = k + isqrt(2 k^2)`
///
/// # Panics
/// Panics if `k > 2^60` (the documented range; intermediates stay well
/// inside 128 bits there).
pub fn beatty_term(kind: BeattyKind, k: u64) -> Result<u64, BeattyError> {
    if k == 0 {
        return Err(BeattyError::ZeroIndex);
    }
    assert!(k <= 1 << 60, "index {k} beyond the supported range 2^60");
    let k128 = k as u128;
    let x = 2 * k128 - 1;
    let v = match kind {
        BeattyKind::W => x + isqrt_u128(x * x / 2),
        BeattyKind::Alpha => 2 * k128 + isqrt_u128(2 * k128 * k128),
        BeattyKind::Beta => k128 + isqrt_u128(k128 * k128 / 2),
        BeattyKind::Gamma => x + isqrt_u128(2 * x * x),
        BeattyKind::DeltaSeq => 2 * k128 + isqrt_u128(8 * k128 * k128),
        BeattyKind::Epsilon => k128 + isqrt_u128(2 * k128 * k128),
    };
    Ok(v as u64)
}

/// Independent second derivation of `w_k`, exposed for consistency
/// checks: `floor(x/sqrt 2) = floor(floor(x sqrt 2) / 2)` because
/// `x sqrt 2` is irrational, so the two roundings cannot straddle an
/// integer. Panics on `k = 0`.
pub fn w_term_alternative(k: u64) -> u64 {
    assert!(k >= 1, "terms are indexed from 1");
    let x = 2 * (k as u128) - 1;
    (x + isqrt_u128(2 * x * x) / 2) as u64
}

/// The monotone enumeration of positive integers with odd divisor sum:
/// the squares and twice-squares, merged.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SigmaEnumeration {
    terms: Vec<u64>,
}

impl SigmaEnumeration {
    /// Terms `1 = terms[0] < terms[1] < ...`, 1-indexed in the math and
    /// 0-indexed in the slice.
    pub fn terms(&self) -> &[u64] {
        &self.terms
    }

    /// The 1-indexed `n`-th term.
    pub fn term(&self, n: u64) -> u64 {
        self.terms[(n - 1) as usize]
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

/// First `count` terms of the enumeration, by merging the two sorted
/// streams `{k^2}` and `{2 j^2}`; the streams never collide because
/// `sqrt(2)` is irrational.
pub fn enumerate_sigma(count: usize) -> SigmaEnumeration {
    assert!(count >= 1, "enumeration needs at least one term");
    let mut terms = Vec::with_capacity(count);
    let (mut i, mut j) = (1u64, 1u64);
    while terms.len() < count {
        let square = i * i;
        let doubled = 2 * j * j;
        if square < doubled {
            terms.push(square);
            i += 1;
        } else {
            terms.push(doubled);
            j += 1;
        }
    }
    SigmaEnumeration { terms }
}

/// Outcome of one index-identity check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexCheck {
    pub kind: BeattyKind,
    pub bound: u64,
    pub holds: bool,
    /// The smallest `k` at which the identity failed, if any.
    pub first_failure: Option<u64>,
}

impl std::fmt::Display for IndexCheck {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "SIGMA_AT_{},{},{}",
            self.kind.cli_name().to_uppercase(),
            self.bound,
            if self.holds { "PASS" } else { "FAIL" }
        )?;
        if let Some(k) = self.first_failure {
            write!(f, ",{k}")?;
        }
        Ok(())
    }
}

/// Checks, for every `k <= bound` and all six kinds, that the
/// `kind_k`-th enumeration term is the predicted square or twice-square:
/// `sigma-enum[w_k] = (2k-1)^2`, `sigma-enum[alpha_k] = 4k^2`,
/// `sigma-enum[beta_k] = k^2`, `sigma-enum[gamma_k] = 2(2k-1)^2`,
/// `sigma-enum[delta_k] = 8k^2`, `sigma-enum[epsilon_k] = 2k^2`.
pub fn verify_beatty_props(bound: u64) -> Vec<IndexCheck> {
    assert!(bound >= 1, "bound must be at least 1");
    let max_index = BeattyKind::ALL
        .into_iter()
        .map(|kind| beatty_term(kind, bound).expect("bound >= 1"))
        .max()
        .expect("six kinds");
    let enumeration = enumerate_sigma(max_index as usize);
    BeattyKind::ALL
        .into_iter()
        .map(|kind| {
            let mut first_failure = None;
            for k in 1..=bound {
                let index = beatty_term(kind, k).expect("k >= 1");
                if enumeration.term(index) != kind.expected_sigma_value(k) {
                    first_failure = Some(k);
                    break;
                }
            }
            IndexCheck {
                kind,
                bound,
                holds: first_failure.is_none(),
                first_failure,
            }
        })
        .collect()
}

/// The index operator: the 1-based positions of the first `count` odd
/// entries of the source.
///
/// Fails with [`BeattyError::InsufficientOddValues`] if the source is
/// exhausted first.
pub fn l_operator(
    parities: impl IntoIterator<Item = bool>,
    count: usize,
) -> Result<Vec<u64>, BeattyError> {
    let mut out = Vec::with_capacity(count);
    if count == 0 {
        return Ok(out);
    }
    for (position, odd) in parities.into_iter().enumerate() {
        if odd {
            out.push(position as u64 + 1);
            if out.len() == count {
                return Ok(out);
            }
        }
    }
    Err(BeattyError::InsufficientOddValues {
        requested: count,
        found: out.len(),
    })
}

/// The recorded outcome of comparing the twice-iterated index operator on
/// the divisor-sum parities against the two closed forms it has been
/// claimed to equal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IteratedIndexFinding {
    pub bound: u64,
    pub matches_w: bool,
    /// `(k, iterated value, w_k)` at the first divergence from `w`.
    pub first_w_mismatch: Option<(u64, u64, u64)>,
    pub matches_c: bool,
    /// `(k, iterated value, c(k))` at the first divergence from `c`.
    pub first_c_mismatch: Option<(u64, u64, u64)>,
}

impl IteratedIndexFinding {
    /// Two report lines in the usual `LABEL,bound,PASS|FAIL[,detail]` shape.
    pub fn report_lines(&self) -> [String; 2] {
        let line = |label: &str, matches: bool, mismatch: &Option<(u64, u64, u64)>| {
            let mut s = format!(
                "{label},{},{}",
                self.bound,
                if matches { "MATCH" } else { "DIVERGES" }
            );
            if let Some((k, got, want)) = mismatch {
                s.push_str(&format!(",k={k}:{got}!={want}"));
            }
            s
        };
        [
            line("LL_SIGMA_VS_W", self.matches_w, &self.first_w_mismatch),
            line("LL_SIGMA_VS_C", self.matches_c, &self.first_c_mismatch),
        ]
    }
}

/// Computes `L(L(sigma-parities))` out to `bound` terms and compares it
/// termwise against both `w_k` and `c(k)`.
///
/// One application of the operator to the divisor-sum parities yields the
/// enumeration itself; the second application picks out the positions of
/// its odd terms. Which closed form that equals is left to the data:
/// both comparisons are recorded rather than asserting either.
pub fn ll_sigma_comparison(bound: u64) -> Result<IteratedIndexFinding, BeattyError> {
    assert!(bound >= 1, "bound must be at least 1");
    // Enough first-level terms that the second level can find `bound` odd
    // entries even if they arrive later than the expected w positions.
    let first_level_count = (beatty_term(BeattyKind::W, bound)? + bound) as usize;
    let sigma_bound = enumerate_sigma(first_level_count)
        .terms()
        .last()
        .copied()
        .expect("count >= 1") as usize
        + 1;
    let parities = seq::sigma_parity_oracle(sigma_bound);
    let first = l_operator(
        (1..sigma_bound).map(|n| parities.bit(n)),
        first_level_count,
    )?;
    let second = l_operator(first.iter().map(|&v| v % 2 == 1), bound as usize)?;

    let mut first_w_mismatch = None;
    let mut first_c_mismatch = None;
    for (i, &value) in second.iter().enumerate() {
        let k = i as u64 + 1;
        if first_w_mismatch.is_none() {
            let w = beatty_term(BeattyKind::W, k)?;
            if value != w {
                first_w_mismatch = Some((k, value, w));
            }
        }
        if first_c_mismatch.is_none() {
            let c = c_function(k);
            if value != c {
                first_c_mismatch = Some((k, value, c));
            }
        }
    }
    Ok(IteratedIndexFinding {
        bound,
        matches_w: first_w_mismatch.is_none(),
        first_w_mismatch,
        matches_c: first_c_mismatch.is_none(),
        first_c_mismatch,
    })
}
