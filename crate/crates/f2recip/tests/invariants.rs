//! Deterministic structural invariants of the reciprocal set and the
//! Beatty index formulas, checked with exact integer arithmetic.
//!
//! Where an asymptotic statement has no exact finite form, the test pins
//! the direction of the trend at increasing scales instead of asserting
//! a limit.

use f2recip::analysis::{self, default_checkpoints};
use f2recip::beatty::{self, BeattyKind};
use f2recip::seq::{self, SequenceKind};
use f2recip::BitSeries;

/// Set-bit counts per residue class mod 8, cumulative up to `n`.
fn class_counts_mod8(series: &BitSeries, n: usize) -> [u64; 8] {
    let mut counts = [0u64; 8];
    for i in series.iter_ones().take_while(|&i| i <= n) {
        counts[i % 8] += 1;
    }
    counts
}

#[test]
fn reciprocal_exponents_fall_in_four_classes() {
    let n = 1 << 18;
    let sigma_bar = seq::generate(SequenceKind::SigmaBar, n);
    for i in sigma_bar.iter_ones() {
        assert!(
            matches!(i % 8, 0 | 1 | 3 | 7),
            "exponent {i} in residue class {}",
            i % 8
        );
        if i % 8 == 7 {
            assert_eq!(i % 16, 7, "class-7 exponent {i} is 15 mod 16");
        }
    }
}

#[test]
fn sparse_classes_obey_square_root_bound() {
    // Classes 0 and 1 together are {0} plus the odd squares, so their
    // cumulative count can never exceed 1 + sqrt(n).
    let precision = 1 << 20;
    let sigma_bar = seq::generate(SequenceKind::SigmaBar, precision);
    for n in [1 << 14, 1 << 17, precision - 1] {
        let counts = class_counts_mod8(&sigma_bar, n);
        let budget = 1 + beatty::isqrt(n as u64);
        assert!(
            counts[0] + counts[1] <= budget,
            "at n = {n}: {} + {} > 1 + sqrt(n) = {budget}",
            counts[0],
            counts[1]
        );
    }
}

#[test]
fn class7_obeys_exact_sixteenth_bound_at_every_checkpoint() {
    // Membership in class 7 mod 8 forces 7 mod 16, so the cumulative
    // class-7 count through n is at most ceil((n + 9) / 16), giving
    // density(class 7, n) <= 1/16 + 1/(n+1) at every single checkpoint.
    // Checked in integers: 16 * count <= n + 17.
    let precision = 1 << 20;
    let sigma_bar = seq::generate(SequenceKind::SigmaBar, precision);
    let checkpoints = default_checkpoints(precision);
    let report = analysis::density_report(&sigma_bar, 8, &checkpoints).unwrap();
    for (i, &n) in report.checkpoints.iter().enumerate() {
        let class7 = report.per_residue[i][7];
        assert!(
            16 * class7 <= n + 17,
            "at n = {n}: class-7 count {class7} breaks the 1/16 + 1/(n+1) bound"
        );
    }
}

/// Cumulative (total, class3, class7) counts of the reciprocal set at
/// three growing scales, each computed from a fresh inversion at that
/// precision.
fn trend_samples() -> Vec<(u64, u64, u64, u64)> {
    [1usize << 17, 1 << 20, 1 << 22]
        .into_iter()
        .map(|n| {
            let sigma_bar = seq::generate(SequenceKind::SigmaBar, n);
            let counts = class_counts_mod8(&sigma_bar, n - 1);
            let total: u64 = counts.iter().sum();
            (n as u64, total, counts[3], counts[7])
        })
        .collect()
}

#[test]
fn class3_thins_relative_to_class7() {
    // The class-3 members are constrained by a quadratic-form
    // representation condition and their density decays (slowly, like a
    // theta series), while class 7 stays near its ceiling. The exact
    // finite-scale statement is a strictly decreasing ratio; no fixed
    // gap factor is asserted because the decay is logarithmic.
    let samples = trend_samples();
    for pair in samples.windows(2) {
        let (_, _, c3_a, c7_a) = pair[0];
        let (_, _, c3_b, c7_b) = pair[1];
        // ratio_a > ratio_b, compared without division.
        assert!(
            (c3_a as u128) * (c7_b as u128) > (c3_b as u128) * (c7_a as u128),
            "class-3/class-7 ratio failed to decrease: {pair:?}"
        );
    }
    let (_, _, c3, c7) = samples[1];
    assert!(c3 < c7, "at 2^20, class 3 ({c3}) should be below class 7 ({c7})");
}

#[test]
fn density_gap_to_class7_shrinks() {
    // The limiting density of the whole set equals that of class 7; at
    // finite n the gap (total - class7) / (n + 1) must already be
    // shrinking as n grows.
    let samples = trend_samples();
    for pair in samples.windows(2) {
        let (n_a, total_a, _, c7_a) = pair[0];
        let (n_b, total_b, _, c7_b) = pair[1];
        let gap_a = (total_a - c7_a) as u128;
        let gap_b = (total_b - c7_b) as u128;
        assert!(
            gap_a * (n_b as u128 + 1) > gap_b * (n_a as u128 + 1),
            "density gap failed to shrink: {pair:?}"
        );
    }
}

#[test]
fn isqrt_brackets_its_argument() {
    for n in 0..1_000_000u64 {
        let r = beatty::isqrt(n);
        assert!(r * r <= n, "isqrt({n}) = {r} overshoots");
        assert!((r + 1) * (r + 1) > n, "isqrt({n}) = {r} undershoots");
    }
}

#[test]
fn w_derivations_agree_to_one_million() {
    for k in 1..=1_000_000u64 {
        assert_eq!(
            beatty::beatty_term(BeattyKind::W, k).unwrap(),
            beatty::w_term_alternative(k),
            "the two floor derivations of w disagree at k = {k}"
        );
    }
}

#[test]
fn counting_function_inverts_the_enumeration() {
    let count = 100_000;
    let enumeration = beatty::enumerate_sigma(count);
    for (i, &term) in enumeration.terms().iter().enumerate() {
        let n = i as u64 + 1;
        assert_eq!(
            beatty::c_function(term),
            n,
            "c({term}) should recover position {n}"
        );
    }
}

#[test]
fn beatty_index_formulas_hold_to_ten_thousand() {
    for check in beatty::verify_beatty_props(10_000) {
        assert!(check.holds, "{check}");
    }
}

#[test]
fn index_operator_recovers_the_enumeration() {
    let count = 4_000;
    let expected = beatty::enumerate_sigma(count);
    let bound = *expected.terms().last().unwrap() as usize + 1;
    let parities = seq::sigma_parity_oracle(bound);
    let positions =
        beatty::l_operator((1..bound).map(|n| parities.bit(n)), count).unwrap();
    assert_eq!(positions, expected.terms());
}
