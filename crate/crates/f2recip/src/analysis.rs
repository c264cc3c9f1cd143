//! The identity-verification catalog and the density engine.
//!
//! Every identity relating the divisor-parity series, its reciprocal, the
//! square/odd-square/triangular sets, and the distinct-parts product is
//! enumerated in [`IdentityId`] and checked bit-exactly at a chosen
//! precision by [`verify`]. Infinite sums over powers like `D^(2^n - 1)`
//! are truncated at the first term whose minimal exponent reaches the
//! precision (the minimal exponent of `D^j` is `j`, since `D` starts at
//! `q^1`), which makes every check exact, not approximate.
//!
//! The density side ([`density_report`]) produces exact popcounts and
//! per-residue-class splits at a list of checkpoints, serializable to
//! CSV; [`random_reciprocal_experiment`] measures the density of the
//! reciprocal of seeded random sets.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::seq::{self, SequenceKind};
use crate::series::{BitSeries, SeriesError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AnalysisError {
    /// The even-part product identity only holds for odd powers.
    #[error("identity requires an odd power, got k = {k}")]
    EvenKRequested { k: i64 },
    /// A density checkpoint must lie strictly below the series precision.
    #[error("checkpoint {checkpoint} is not below the series precision {precision}")]
    CheckpointBeyondPrecision { checkpoint: u64, precision: usize },
    /// Density checkpoints must be strictly increasing.
    #[error("checkpoints must be strictly increasing at position {position}")]
    CheckpointsNotIncreasing { position: usize },
}

/// The closed catalog of verifiable identities.
///
/// The tags (see [`IdentityId::tag`]) are the stable public names used on
/// the command line and in reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IdentityId {
    /// `Sigma = 1 + S + S^2`.
    L3SigmaDecomp,
    /// `S = D + D^4 + D^16 + ...` (powers `4^n`).
    L4SFromD,
    /// `Sigma = 1 + D + D^2 + D^4 + ...` (powers `2^n`).
    C1SigmaFromD,
    /// `SigmaBar = 1 + D + D^3 + D^7 + ...` (powers `2^n - 1`).
    L5SigmaBarSeries,
    /// The mod-8 class decomposition of `SigmaBar`: class 0 is `{0}`,
    /// class 1 is `D`, class 3 is `D^3`, class 7 is the tail
    /// `D^7 + D^15 + D^31 + ...`, and the four classes exhaust it.
    L9Subsets,
    /// `SigmaBar + 1 + D + D^3 = D^7 * SigmaBar^8`.
    L10Tail,
    /// `q * Delta^8 = D`.
    L10QDelta8,
    /// `Delta = prod (1 + q^n)^3`.
    T11TripleProduct,
    /// `Sigma * G^k = even_part(G^k)` for odd `k` (negative allowed).
    T12GkEven { k: i64 },
    /// `SigmaBar = Delta / even_part(Delta)`.
    C13DeltaFraction,
    /// `SigmaBar_7 = q^7 * T^16` with `T = Delta^4 / sqrt(even_part(Delta))`.
    T16FinalEquation,
    /// `V = Delta^7 * SigmaBar`, where `V` is read off `SigmaBar_7` by
    /// the shift-7 stride-8 decimation.
    EqkVIdentity,
    /// No exponent of `SigmaBar` is congruent to 15 mod 16.
    T19Mod16Vanishing,
    /// Among integers congruent to 3 mod 8, membership in `SigmaBar`
    /// coincides with having an odd number of representations as
    /// `a^2 + 2b^2` with `a, b >= 1`.
    Sigma3SquarePlusTwiceSquare,
}

impl IdentityId {
    /// The catalog in report order, with the parameterized identity
    /// instantiated at k = 1, 3, 5, and -1.
    pub fn catalog() -> Vec<IdentityId> {
        use IdentityId::*;
        vec![
            L3SigmaDecomp,
            L4SFromD,
            C1SigmaFromD,
            L5SigmaBarSeries,
            L9Subsets,
            L10Tail,
            L10QDelta8,
            T11TripleProduct,
            T12GkEven { k: 1 },
            T12GkEven { k: 3 },
            T12GkEven { k: 5 },
            T12GkEven { k: -1 },
            C13DeltaFraction,
            T16FinalEquation,
            EqkVIdentity,
            T19Mod16Vanishing,
            Sigma3SquarePlusTwiceSquare,
        ]
    }

    /// Parses a public tag. The `k` argument applies only to the
    /// parameterized tag `T12_GK_EVEN` and is ignored elsewhere.
    pub fn from_tag(tag: &str, k: i64) -> Option<IdentityId> {
        use IdentityId::*;
        Some(match tag {
            "L3_SIGMA_DECOMP" => L3SigmaDecomp,
            "L4_S_FROM_D" => L4SFromD,
            "C1_SIGMA_FROM_D" => C1SigmaFromD,
            "L5_SIGMABAR_SERIES" => L5SigmaBarSeries,
            "L9_SUBSETS" => L9Subsets,
            "L10_I_TAIL" => L10Tail,
            "L10_II_QDELTA8" => L10QDelta8,
            "T11_TRIPLE_PRODUCT" => T11TripleProduct,
            "T12_GK_EVEN" => T12GkEven { k },
            "C13_DELTA_FRACTION" => C13DeltaFraction,
            "T16_FINAL_EQUATION" => T16FinalEquation,
            "EQK_V_IDENTITY" => EqkVIdentity,
            "T19_MOD16_VANISHING" => T19Mod16Vanishing,
            "SIGMA3_SQUARE_PLUS_TWICE_SQUARE" => Sigma3SquarePlusTwiceSquare,
            _ => return None,
        })
    }

    /// The fixed public tags, in catalog order, for usage listings.
    pub const TAGS: [&'static str; 14] = [
        "L3_SIGMA_DECOMP",
        "L4_S_FROM_D",
        "C1_SIGMA_FROM_D",
        "L5_SIGMABAR_SERIES",
        "L9_SUBSETS",
        "L10_I_TAIL",
        "L10_II_QDELTA8",
        "T11_TRIPLE_PRODUCT",
        "T12_GK_EVEN",
        "C13_DELTA_FRACTION",
        "T16_FINAL_EQUATION",
        "EQK_V_IDENTITY",
        "T19_MOD16_VANISHING",
        "SIGMA3_SQUARE_PLUS_TWICE_SQUARE",
    ];

    pub fn tag(&self) -> String {
        use IdentityId::*;
        match self {
            L3SigmaDecomp => "L3_SIGMA_DECOMP".into(),
            L4SFromD => "L4_S_FROM_D".into(),
            C1SigmaFromD => "C1_SIGMA_FROM_D".into(),
            L5SigmaBarSeries => "L5_SIGMABAR_SERIES".into(),
            L9Subsets => "L9_SUBSETS".into(),
            L10Tail => "L10_I_TAIL".into(),
            L10QDelta8 => "L10_II_QDELTA8".into(),
            T11TripleProduct => "T11_TRIPLE_PRODUCT".into(),
            T12GkEven { k } => format!("T12_GK_EVEN(k={k})"),
            C13DeltaFraction => "C13_DELTA_FRACTION".into(),
            T16FinalEquation => "T16_FINAL_EQUATION".into(),
            EqkVIdentity => "EQK_V_IDENTITY".into(),
            T19Mod16Vanishing => "T19_MOD16_VANISHING".into(),
            Sigma3SquarePlusTwiceSquare => "SIGMA3_SQUARE_PLUS_TWICE_SQUARE".into(),
        }
    }
}

impl std::fmt::Display for IdentityId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.tag())
    }
}

/// Result of checking one identity at one precision.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationOutcome {
    pub identity: IdentityId,
    pub precision: usize,
    pub holds: bool,
    /// The lowest exponent at which the two sides differ, when they do.
    pub first_mismatch: Option<u64>,
}

impl std::fmt::Display for VerificationOutcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{},{},{}",
            self.identity,
            self.precision,
            if self.holds { "PASS" } else { "FAIL" }
        )?;
        if let Some(e) = self.first_mismatch {
            write!(f, ",{e}")?;
        }
        Ok(())
    }
}

/// Lowest exponent where two series differ, within the shared precision.
fn first_diff(a: &BitSeries, b: &BitSeries) -> Option<u64> {
    a.add(b).iter_ones().next().map(|i| i as u64)
}

/// Sum of `D^(2^m - 1)` over `m >= m0`, truncated to the precision of `d`.
fn odd_square_tower(d: &BitSeries, m0: u32) -> BitSeries {
    let n = d.precision();
    let mut acc = BitSeries::zero(n);
    // Walk the exponents 2^m - 1 from m = 0, squaring-and-multiplying to
    // step; terms whose minimal exponent reaches n contribute nothing.
    let mut term = BitSeries::one(n);
    let mut e = 0usize;
    let mut m = 0u32;
    loop {
        if m >= m0 {
            acc = acc.add(&term);
        }
        let next = 2 * e + 1;
        if next >= n {
            return acc;
        }
        term = term.square().mul(d);
        e = next;
        m += 1;
    }
}

/// Checks one identity bit-exactly at the given precision.
///
/// # Panics
/// Panics if `precision < 16`; below that the finite tails collapse and
/// the checks say nothing.
pub fn verify(identity: IdentityId, precision: usize) -> Result<VerificationOutcome, AnalysisError> {
    assert!(precision >= 16, "identity checks need precision >= 16");
    let n = precision;
    let diff = match identity {
        IdentityId::L3SigmaDecomp => {
            let sigma = seq::generate(SequenceKind::SigmaParity, n);
            let s = seq::generate(SequenceKind::Squares, n);
            let rhs = BitSeries::one(n).add(&s).add(&s.square());
            first_diff(&sigma, &rhs)
        }
        IdentityId::L4SFromD => {
            let s = seq::generate(SequenceKind::Squares, n);
            let d = seq::generate(SequenceKind::OddSquares, n);
            // D^(4^m): quadrupling a power is two squarings.
            let mut acc = BitSeries::zero(n);
            let mut term = d.clone();
            let mut e = 1usize;
            loop {
                acc = acc.add(&term);
                match e.checked_mul(4) {
                    Some(next) if next < n => {
                        term = term.square().square();
                        e = next;
                    }
                    _ => break,
                }
            }
            first_diff(&s, &acc)
        }
        IdentityId::C1SigmaFromD => {
            let sigma = seq::generate(SequenceKind::SigmaParity, n);
            let d = seq::generate(SequenceKind::OddSquares, n);
            let mut acc = BitSeries::one(n);
            let mut term = d.clone();
            let mut e = 1usize;
            loop {
                acc = acc.add(&term);
                match e.checked_mul(2) {
                    Some(next) if next < n => {
                        term = term.square();
                        e = next;
                    }
                    _ => break,
                }
            }
            first_diff(&sigma, &acc)
        }
        IdentityId::L5SigmaBarSeries => {
            let sigma_bar = seq::generate(SequenceKind::SigmaBar, n);
            let d = seq::generate(SequenceKind::OddSquares, n);
            first_diff(&sigma_bar, &odd_square_tower(&d, 0))
        }
        IdentityId::L9Subsets => {
            let sigma_bar = seq::generate(SequenceKind::SigmaBar, n);
            let d = seq::generate(SequenceKind::OddSquares, n);
            let extract = |r| sigma_bar.residue_extract(8, r).expect("residue < 8");
            let classes = [extract(0), extract(1), extract(3), extract(7)];
            let expected = [
                BitSeries::one(n),
                d.clone(),
                d.pow(3),
                odd_square_tower(&d, 3),
            ];
            let union = classes
                .iter()
                .fold(BitSeries::zero(n), |acc, c| acc.add(c));
            classes
                .iter()
                .zip(&expected)
                .filter_map(|(got, want)| first_diff(got, want))
                .chain(first_diff(&sigma_bar, &union))
                .min()
        }
        IdentityId::L10Tail => {
            let sigma_bar = seq::generate(SequenceKind::SigmaBar, n);
            let d = seq::generate(SequenceKind::OddSquares, n);
            let lhs = sigma_bar
                .add(&BitSeries::one(n))
                .add(&d)
                .add(&d.pow(3));
            let rhs = d.pow(7).mul(&sigma_bar.pow(8));
            first_diff(&lhs, &rhs)
        }
        IdentityId::L10QDelta8 => {
            let d = seq::generate(SequenceKind::OddSquares, n);
            let tri = seq::generate(SequenceKind::Triangular, n);
            first_diff(&d, &tri.pow(8).shift_up(1))
        }
        IdentityId::T11TripleProduct => {
            let tri = seq::generate(SequenceKind::Triangular, n);
            first_diff(&tri, &seq::product_power(3, n))
        }
        IdentityId::T12GkEven { k } => {
            if k % 2 == 0 {
                return Err(AnalysisError::EvenKRequested { k });
            }
            let sigma = seq::generate(SequenceKind::SigmaParity, n);
            let gk = seq::product_power(k, n);
            first_diff(&sigma.mul(&gk), &gk.even_part())
        }
        IdentityId::C13DeltaFraction => {
            let sigma_bar = seq::generate(SequenceKind::SigmaBar, n);
            let tri = seq::generate(SequenceKind::Triangular, n);
            let even_inv = tri
                .even_part()
                .inverse()
                .expect("0 is an even triangular number, so the constant term is 1");
            first_diff(&sigma_bar, &tri.mul(&even_inv))
        }
        IdentityId::T16FinalEquation => {
            // sqrt_even halves precision, so build the even part at 2N.
            let tri_wide = seq::generate(SequenceKind::Triangular, 2 * n);
            let root = tri_wide
                .even_part()
                .sqrt_even()
                .expect("an even part has only even exponents");
            debug_assert_eq!(root.precision(), n);
            let t = tri_wide
                .truncate(n)
                .pow(4)
                .mul(&root.inverse().expect("constant term 1"));
            let sigma_bar = seq::generate(SequenceKind::SigmaBar, n);
            let lhs = sigma_bar.residue_extract(8, 7).expect("residue < 8");
            first_diff(&lhs, &t.pow(16).shift_up(7))
        }
        IdentityId::EqkVIdentity => {
            let sigma_bar = seq::generate(SequenceKind::SigmaBar, n);
            let class7 = sigma_bar.residue_extract(8, 7).expect("residue < 8");
            match class7.downshift_decimate(7, 8) {
                Ok(v) => {
                    let tri = seq::generate(SequenceKind::Triangular, n);
                    let rhs = tri
                        .pow(7)
                        .mul(&sigma_bar)
                        .truncate(v.precision());
                    first_diff(&v, &rhs)
                }
                // A bit off the progression disproves the identity at
                // that exponent rather than being a caller error.
                Err(SeriesError::StrideViolation { index, .. }) => Some(index as u64),
                Err(e) => unreachable!("decimation of a class-7 extract: {e}"),
            }
        }
        IdentityId::T19Mod16Vanishing => {
            let sigma_bar = seq::generate(SequenceKind::SigmaBar, n);
            let offenders = sigma_bar.residue_extract(16, 15).expect("residue < 16");
            let first = offenders.iter_ones().next().map(|i| i as u64);
            first
        }
        IdentityId::Sigma3SquarePlusTwiceSquare => {
            let sigma_bar = seq::generate(SequenceKind::SigmaBar, n);
            let lhs = sigma_bar.residue_extract(8, 3).expect("residue < 8");
            let s = seq::generate(SequenceKind::Squares, n);
            // Exponents of S(q) * S(q^2) are the a^2 + 2b^2 with a, b >= 1
            // that occur an odd number of times.
            let representations = s.mul(&s.square());
            let rhs = representations.residue_extract(8, 3).expect("residue < 8");
            first_diff(&lhs, &rhs)
        }
    };
    Ok(VerificationOutcome {
        identity,
        precision,
        holds: diff.is_none(),
        first_mismatch: diff,
    })
}

/// Exact counting of a series' set bits at a list of checkpoints, split
/// by residue class.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityReport {
    pub modulus: usize,
    pub checkpoints: Vec<u64>,
    /// `counts[i]` = number of set bits at exponents `<= checkpoints[i]`.
    pub counts: Vec<u64>,
    /// `counts[i] / (checkpoints[i] + 1)`.
    pub densities: Vec<f64>,
    /// `per_residue[i][r]` = set bits `<= checkpoints[i]` in class `r`.
    pub per_residue: Vec<Vec<u64>>,
}

impl DensityReport {
    /// CSV with header `n,count,density,class0,...,class{m-1}`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,count,density");
        for r in 0..self.modulus {
            out.push_str(&format!(",class{r}"));
        }
        out.push('\n');
        for i in 0..self.checkpoints.len() {
            out.push_str(&format!(
                "{},{},{:.8}",
                self.checkpoints[i], self.counts[i], self.densities[i]
            ));
            for r in 0..self.modulus {
                out.push_str(&format!(",{}", self.per_residue[i][r]));
            }
            out.push('\n');
        }
        out
    }
}

/// The default checkpoint ladder: powers of two below `precision - 1`,
/// then `precision - 1` itself.
pub fn default_checkpoints(precision: usize) -> Vec<u64> {
    let last = (precision - 1) as u64;
    let mut points: Vec<u64> = std::iter::successors(Some(1u64), |&p| p.checked_mul(2))
        .take_while(|&p| p < last)
        .collect();
    points.push(last);
    points
}

/// Counts the set bits of `f` up to each checkpoint, total and per
/// residue class mod `modulus`.
///
/// # Panics
/// Panics if `modulus` is 0 or `checkpoints` is empty.
pub fn density_report(
    f: &BitSeries,
    modulus: usize,
    checkpoints: &[u64],
) -> Result<DensityReport, AnalysisError> {
    assert!(modulus > 0, "modulus must be positive");
    assert!(!checkpoints.is_empty(), "need at least one checkpoint");
    for (i, pair) in checkpoints.windows(2).enumerate() {
        if pair[0] >= pair[1] {
            return Err(AnalysisError::CheckpointsNotIncreasing { position: i + 1 });
        }
    }
    for &c in checkpoints {
        if c >= f.precision() as u64 {
            return Err(AnalysisError::CheckpointBeyondPrecision {
                checkpoint: c,
                precision: f.precision(),
            });
        }
    }

    let mut counts = Vec::with_capacity(checkpoints.len());
    let mut per_residue = Vec::with_capacity(checkpoints.len());
    let mut running_total = 0u64;
    let mut running_classes = vec![0u64; modulus];
    let mut next = 0usize;
    for i in f.iter_ones() {
        while next < checkpoints.len() && checkpoints[next] < i as u64 {
            counts.push(running_total);
            per_residue.push(running_classes.clone());
            next += 1;
        }
        if next == checkpoints.len() {
            break;
        }
        running_total += 1;
        running_classes[i % modulus] += 1;
    }
    while next < checkpoints.len() {
        counts.push(running_total);
        per_residue.push(running_classes.clone());
        next += 1;
    }

    let densities = checkpoints
        .iter()
        .zip(&counts)
        .map(|(&c, &count)| count as f64 / (c + 1) as f64)
        .collect();
    Ok(DensityReport {
        modulus,
        checkpoints: checkpoints.to_vec(),
        counts,
        densities,
        per_residue,
    })
}

/// Outcome of the prime-power characterization scan.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharacterizationOutcome {
    pub bound: usize,
    pub holds: bool,
    /// First integer on which the predicate and the series disagree.
    pub first_mismatch: Option<u64>,
}

impl std::fmt::Display for CharacterizationOutcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "SIGMA3_PRIME_POWER_CHARACTERIZATION,{},{}",
            self.bound,
            if self.holds { "PASS" } else { "FAIL" }
        )?;
        if let Some(n) = self.first_mismatch {
            write!(f, ",{n}")?;
        }
        Ok(())
    }
}

/// Compares the class-3 part of the reciprocal set, element by element
/// below `bound`, against the arithmetic predicate: `n = p^e * k^2` with
/// `p` prime, `p = 3 mod 8`, `e = 1 mod 4`, `k` odd, `p` not dividing
/// `k`. Equivalently: `n` odd with exactly one prime of odd exponent,
/// that exponent 1 mod 4 and that prime 3 mod 8.
///
/// Factorization is by smallest-prime-factor sieve; intended for bounds
/// up to about a million.
pub fn sigma3_characterization_check(bound: usize) -> CharacterizationOutcome {
    assert!((16..=1 << 20).contains(&bound), "bound must be in 16..=2^20");
    let class3 = seq::generate(SequenceKind::SigmaBar, bound)
        .residue_extract(8, 3)
        .expect("residue < 8");

    // Smallest prime factor for every integer below the bound.
    let mut spf: Vec<u32> = (0..bound as u32).collect();
    let mut p = 2usize;
    while p * p < bound {
        if spf[p] == p as u32 {
            let mut m = p * p;
            while m < bound {
                if spf[m] == m as u32 {
                    spf[m] = p as u32;
                }
                m += p;
            }
        }
        p += 1;
    }

    let predicate = |n: usize| -> bool {
        let mut rest = n;
        let mut odd_exponent_prime: Option<(usize, u32)> = None;
        while rest > 1 {
            let q = spf[rest] as usize;
            let mut e = 0u32;
            while rest.is_multiple_of(q) {
                rest /= q;
                e += 1;
            }
            if e % 2 == 1 {
                if odd_exponent_prime.is_some() {
                    return false;
                }
                odd_exponent_prime = Some((q, e));
            }
        }
        matches!(odd_exponent_prime, Some((q, e)) if q % 8 == 3 && e % 4 == 1)
    };

    // Both the predicate set and the extracted class live in 8Z + 3.
    let mut first_mismatch = None;
    let mut n = 3usize;
    while n < bound {
        if class3.bit(n) != predicate(n) {
            first_mismatch = Some(n as u64);
            break;
        }
        n += 8;
    }
    CharacterizationOutcome {
        bound,
        holds: first_mismatch.is_none(),
        first_mismatch,
    }
}

/// For each trial: draw a random set containing 0 (every positive index
/// kept with the given probability), invert it, and record the density
/// of the reciprocal over `[0, precision - 1]`.
///
/// Deterministic for a fixed seed.
///
/// # Panics
/// Panics unless `0 < inclusion_probability < 1` and `trials >= 1`.
pub fn random_reciprocal_experiment(
    trials: usize,
    inclusion_probability: f64,
    precision: usize,
    seed: u64,
) -> Vec<f64> {
    assert!(trials >= 1, "need at least one trial");
    assert!(
        inclusion_probability > 0.0 && inclusion_probability < 1.0,
        "inclusion probability must be strictly between 0 and 1"
    );
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..trials)
        .map(|_| {
            let mut f = BitSeries::one(precision);
            for i in 1..precision {
                if rng.random_bool(inclusion_probability) {
                    f.set_bit(i);
                }
            }
            let reciprocal = f.inverse().expect("constant term set by construction");
            reciprocal.count_ones() as f64 / precision as f64
        })
        .collect()
}
