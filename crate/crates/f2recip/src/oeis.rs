//! OEIS b-file handling: parse, cache, optionally fetch, and compare
//! generated sequences against reference term lists.
//!
//! Fourteen sequences are bundled as fixtures so the whole check runs
//! offline and deterministically. Each fixture was produced by this
//! crate's own independent reference route (sieve, merge arithmetic,
//! float-free-equivalent floor formulas, dynamic programming, or the
//! quadratic inversion recurrence) — see the provenance header inside
//! each fixture and [`mapping_table`] — while the comparison side
//! regenerates terms through the primary route (characterization,
//! integer-sqrt formulas, Newton inversion), so a fixture match is a
//! genuine two-route agreement, not a file echoing itself.
//!
//! Network fetch shells out to `curl` and is strictly opt-in; a fetched
//! file is stored verbatim in the cache directory as `bNNNNNN.txt`.

use std::fmt;
use std::fs;
use std::io;
use std::path::PathBuf;
use std::process::Command;

use thiserror::Error;

use crate::beatty::{self, BeattyKind};
use crate::seq::{self, SequenceKind};
use crate::series::BitSeries;

#[derive(Debug, Error)]
pub enum OeisError {
    #[error("malformed OEIS identifier {input:?} (expected A followed by 6 or 7 digits)")]
    BadANumber { input: String },
    #[error("no cached or bundled copy of {a_number} and network fetch is {reason}")]
    NetworkUnavailable { a_number: String, reason: String },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: b-file indices must be strictly increasing")]
    IndicesNotIncreasing { line: usize },
    #[error("no overlap between generated terms and reference entries")]
    EmptyOverlap,
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// Where a b-file's bytes came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BFileSource {
    Cache,
    Network,
}

/// A parsed OEIS b-file: ordered `(index, value)` pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BFile {
    pub a_number: String,
    pub entries: Vec<(i64, i128)>,
    pub source: BFileSource,
}

/// Validates `ANNNNNN` and returns the digit portion.
fn digits_of(a_number: &str) -> Result<&str, OeisError> {
    let bad = || OeisError::BadANumber {
        input: a_number.to_string(),
    };
    let digits = a_number.strip_prefix('A').ok_or_else(bad)?;
    if !(6..=7).contains(&digits.len()) || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    Ok(digits)
}

/// Parses b-file text: one `index value` pair per line, `#` comments and
/// blank lines ignored, indices strictly increasing.
pub fn parse_bfile(a_number: &str, text: &str, source: BFileSource) -> Result<BFile, OeisError> {
    digits_of(a_number)?;
    let mut entries: Vec<(i64, i128)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut fields = trimmed.split_whitespace();
        let (index, value) = match (fields.next(), fields.next(), fields.next()) {
            (Some(a), Some(b), None) => (a, b),
            _ => {
                return Err(OeisError::Parse {
                    line,
                    message: format!("expected `index value`, got {trimmed:?}"),
                })
            }
        };
        let index: i64 = index.parse().map_err(|e| OeisError::Parse {
            line,
            message: format!("bad index {index:?}: {e}"),
        })?;
        let value: i128 = value.parse().map_err(|e| OeisError::Parse {
            line,
            message: format!("bad value {value:?}: {e}"),
        })?;
        if entries.last().is_some_and(|&(prev, _)| prev >= index) {
            return Err(OeisError::IndicesNotIncreasing { line });
        }
        entries.push((index, value));
    }
    Ok(BFile {
        a_number: a_number.to_string(),
        entries,
        source,
    })
}

/// The bundled fixture for one of the fourteen known sequences, if this
/// is one of them.
pub fn bundled_fixture(a_number: &str) -> Option<&'static str> {
    Some(match a_number {
        "A000203" => include_str!("../fixtures/b000203.txt"),
        "A001952" => include_str!("../fixtures/b001952.txt"),
        "A001954" => include_str!("../fixtures/b001954.txt"),
        "A003151" => include_str!("../fixtures/b003151.txt"),
        "A003152" => include_str!("../fixtures/b003152.txt"),
        "A028982" => include_str!("../fixtures/b028982.txt"),
        "A052002" => include_str!("../fixtures/b052002.txt"),
        "A192628" => include_str!("../fixtures/b192628.txt"),
        "A192717" => include_str!("../fixtures/b192717.txt"),
        "A192718" => include_str!("../fixtures/b192718.txt"),
        "A197878" => include_str!("../fixtures/b197878.txt"),
        "A210449" => include_str!("../fixtures/b210449.txt"),
        "A210450" => include_str!("../fixtures/b210450.txt"),
        "A215247" => include_str!("../fixtures/b215247.txt"),
        _ => return None,
    })
}

/// Fetch policy and location for b-files.
#[derive(Debug, Clone)]
pub struct OeisClient {
    cache_dir: PathBuf,
    base_url: String,
    allow_network: bool,
}

impl OeisClient {
    /// A client that reads the cache and bundled fixtures only.
    pub fn new(cache_dir: impl Into<PathBuf>) -> Self {
        OeisClient {
            cache_dir: cache_dir.into(),
            base_url: "https://oeis.org".to_string(),
            allow_network: false,
        }
    }

    /// Permits fetching missing files over the network.
    pub fn with_network(mut self, allow: bool) -> Self {
        self.allow_network = allow;
        self
    }

    /// Overrides the fetch endpoint (any scheme curl understands, which
    /// makes `file://` trees usable in tests).
    pub fn with_base_url(mut self, base_url: impl Into<String>) -> Self {
        self.base_url = base_url.into();
        self
    }

    fn cache_path(&self, digits: &str) -> PathBuf {
        self.cache_dir.join(format!("b{digits}.txt"))
    }

    /// Resolves a b-file: cache directory first, then the bundled
    /// fixtures, then (only if enabled) the network, storing the fetched
    /// bytes verbatim in the cache.
    pub fn fetch_bfile(&self, a_number: &str) -> Result<BFile, OeisError> {
        let digits = digits_of(a_number)?;
        let path = self.cache_path(digits);
        if path.exists() {
            let text = fs::read_to_string(&path)?;
            return parse_bfile(a_number, &text, BFileSource::Cache);
        }
        if let Some(text) = bundled_fixture(a_number) {
            return parse_bfile(a_number, text, BFileSource::Cache);
        }
        if !self.allow_network {
            return Err(OeisError::NetworkUnavailable {
                a_number: a_number.to_string(),
                reason: "disabled".to_string(),
            });
        }
        let url = format!("{}/{a_number}/b{digits}.txt", self.base_url);
        let text = curl_text(&url).map_err(|reason| OeisError::NetworkUnavailable {
            a_number: a_number.to_string(),
            reason,
        })?;
        let parsed = parse_bfile(a_number, &text, BFileSource::Network)?;
        fs::create_dir_all(&self.cache_dir)?;
        fs::write(&path, &text)?;
        Ok(parsed)
    }
}

/// Retrieves a URL as text via the system `curl`.
fn curl_text(url: &str) -> Result<String, String> {
    let output = Command::new("curl")
        .args(["-fsS", "--max-time", "60", url])
        .output()
        .map_err(|e| format!("unavailable (could not run curl: {e})"))?;
    if !output.status.success() {
        let stderr = String::from_utf8_lossy(&output.stderr);
        return Err(format!("failing ({})", stderr.trim()));
    }
    String::from_utf8(output.stdout).map_err(|_| "returning non-UTF-8 data".to_string())
}

/// A mismatch between generated data and a reference entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Mismatch {
    pub index: i64,
    pub expected: i128,
    pub actual: i128,
}

/// Result of comparing generated terms against a reference b-file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComparisonResult {
    pub a_number: String,
    pub matched_count: usize,
    pub first_mismatch: Option<Mismatch>,
    pub offset_used: i64,
}

impl ComparisonResult {
    pub fn matches(&self) -> bool {
        self.first_mismatch.is_none()
    }
}

impl fmt::Display for ComparisonResult {
    /// CSV row `a_number,matched,first_mismatch_index` (empty final field
    /// when everything matched).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},", self.a_number, self.matched_count)?;
        if let Some(m) = &self.first_mismatch {
            write!(f, "{}", m.index)?;
        }
        Ok(())
    }
}

/// Compares `generated` (term 1 aligned with reference index `offset`)
/// against the reference entries, over the overlapping index range.
pub fn compare_sequence(
    generated: &[u64],
    reference: &BFile,
    offset: i64,
) -> Result<ComparisonResult, OeisError> {
    let mut matched = 0usize;
    let mut first_mismatch = None;
    let mut any_overlap = false;
    for &(index, expected) in &reference.entries {
        let Some(slot) = index.checked_sub(offset) else {
            continue;
        };
        if slot < 0 || slot as usize >= generated.len() {
            continue;
        }
        any_overlap = true;
        let actual = generated[slot as usize] as i128;
        if actual == expected {
            matched += 1;
        } else if first_mismatch.is_none() {
            first_mismatch = Some(Mismatch {
                index,
                expected,
                actual,
            });
        }
    }
    if !any_overlap {
        return Err(OeisError::EmptyOverlap);
    }
    Ok(ComparisonResult {
        a_number: reference.a_number.clone(),
        matched_count: matched,
        first_mismatch,
        offset_used: offset,
    })
}

/// One row of the identifier-to-construct mapping.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SequenceMapping {
    pub a_number: &'static str,
    /// What this crate generates for the comparison.
    pub construct: &'static str,
    /// Reference index that generated term 1 aligns with.
    pub offset: i64,
    /// How the correspondence was established. The reciprocal-set rows
    /// are recorded hypotheses pending an online diff, not assertions
    /// about upstream content.
    pub provenance: &'static str,
}

/// The fourteen tracked sequences.
pub fn mapping_table() -> &'static [SequenceMapping] {
    const ESTABLISHED: &str =
        "content pinned by the defining formula; fixture generated by the independent \
         reference route and diffed against the primary route before commit";
    const HYPOTHESIS: &str =
        "construct correspondence is a recorded hypothesis (offline build could not \
         reach oeis.org); fixture generated by the independent reference route; \
         re-diff against upstream when network access is available";
    &[
        SequenceMapping {
            a_number: "A000203",
            construct: "divisor sums sigma(1), sigma(2), ... as full integers",
            offset: 1,
            provenance: ESTABLISHED,
        },
        SequenceMapping {
            a_number: "A001952",
            construct: "Beatty terms floor(k(2+sqrt 2))",
            offset: 1,
            provenance: ESTABLISHED,
        },
        SequenceMapping {
            a_number: "A001954",
            construct: "Beatty terms floor((k-1/2)(2+sqrt 2))",
            offset: 1,
            provenance: ESTABLISHED,
        },
        SequenceMapping {
            a_number: "A003151",
            construct: "Beatty terms floor(k(1+sqrt 2))",
            offset: 1,
            provenance: ESTABLISHED,
        },
        SequenceMapping {
            a_number: "A003152",
            construct: "Beatty terms floor(k(2+sqrt 2)/2)",
            offset: 1,
            provenance: ESTABLISHED,
        },
        SequenceMapping {
            a_number: "A028982",
            construct: "squares and twice-squares merged ascending",
            offset: 1,
            provenance: ESTABLISHED,
        },
        SequenceMapping {
            a_number: "A052002",
            construct: "integers with an odd partition count, ascending from 0",
            offset: 1,
            provenance: HYPOTHESIS,
        },
        SequenceMapping {
            a_number: "A192628",
            construct: "exponents of the reciprocal of the divisor-parity series",
            offset: 1,
            provenance: HYPOTHESIS,
        },
        SequenceMapping {
            a_number: "A192717",
            construct: "reciprocal-set members congruent to 3 mod 8",
            offset: 1,
            provenance: HYPOTHESIS,
        },
        SequenceMapping {
            a_number: "A192718",
            construct: "reciprocal-set members congruent to 7 mod 8",
            offset: 1,
            provenance: HYPOTHESIS,
        },
        SequenceMapping {
            a_number: "A197878",
            construct: "Beatty terms floor(k(2+2 sqrt 2))",
            offset: 1,
            provenance: ESTABLISHED,
        },
        SequenceMapping {
            a_number: "A210449",
            construct: "exponents of V, the stride-8 contraction of the class-7 reciprocal part",
            offset: 1,
            provenance: HYPOTHESIS,
        },
        SequenceMapping {
            a_number: "A210450",
            construct: "exponents of T, the even-exponent square root of V",
            offset: 1,
            provenance: HYPOTHESIS,
        },
        SequenceMapping {
            a_number: "A215247",
            construct: "Beatty terms floor((k-1/2)(2+2 sqrt 2))",
            offset: 1,
            provenance: ESTABLISHED,
        },
    ]
}

/// Grows a constructed series until it exposes `count` set bits, then
/// returns the first `count` exponents.
fn indices_with_at_least(count: usize, build: impl Fn(usize) -> BitSeries) -> Vec<u64> {
    let mut n = 1024usize;
    loop {
        let series = build(n);
        let indices = series.to_indices().into_vec();
        if indices.len() >= count {
            return indices[..count].to_vec();
        }
        n = n
            .checked_mul(2)
            .expect("requested more terms than any reasonable precision holds");
        assert!(
            n <= 1 << 26,
            "requested {count} terms, found only {} below 2^25",
            indices.len()
        );
    }
}

/// The series `T = Delta^4 / sqrt(even_part(Delta))` at the given
/// precision, built at doubled working precision so the square root's
/// halving does not starve it.
fn t_series(precision: usize) -> BitSeries {
    let tri = seq::generate(SequenceKind::Triangular, 2 * precision);
    let root = tri
        .even_part()
        .sqrt_even()
        .expect("even part has only even exponents");
    tri.truncate(precision)
        .pow(4)
        .mul(&root.inverse().expect("constant term 1"))
}

/// Generates the first `count` terms of the construct mapped to
/// `a_number`, through the primary (non-fixture) route.
pub fn generated_terms(a_number: &str, count: usize) -> Option<Vec<u64>> {
    let beatty_seq = |kind: BeattyKind| -> Vec<u64> {
        (1..=count as u64)
            .map(|k| beatty::beatty_term(kind, k).expect("k >= 1"))
            .collect()
    };
    let terms = match a_number {
        "A000203" => seq::sigma_values(count + 1)[1..].to_vec(),
        "A001952" => beatty_seq(BeattyKind::Alpha),
        "A001954" => beatty_seq(BeattyKind::W),
        "A003151" => beatty_seq(BeattyKind::Epsilon),
        "A003152" => beatty_seq(BeattyKind::Beta),
        "A197878" => beatty_seq(BeattyKind::DeltaSeq),
        "A215247" => beatty_seq(BeattyKind::Gamma),
        "A028982" => {
            // Sized by the merge, membership decided by the parity
            // characterization.
            let bound = beatty::enumerate_sigma(count)
                .terms()
                .last()
                .copied()
                .expect("count >= 1") as usize
                + 1;
            seq::generate(SequenceKind::SigmaParity, bound)
                .to_indices()
                .into_vec()[1..=count]
                .to_vec()
        }
        "A052002" => indices_with_at_least(count, |n| {
            seq::generate(SequenceKind::PartitionParity, n)
        }),
        "A192628" => indices_with_at_least(count, |n| seq::generate(SequenceKind::SigmaBar, n)),
        "A192717" => indices_with_at_least(count, |n| {
            seq::generate(SequenceKind::SigmaBar, n)
                .residue_extract(8, 3)
                .expect("residue < 8")
        }),
        "A192718" => indices_with_at_least(count, |n| {
            seq::generate(SequenceKind::SigmaBar, n)
                .residue_extract(8, 7)
                .expect("residue < 8")
        }),
        "A210449" => indices_with_at_least(count, |n| {
            seq::generate(SequenceKind::SigmaBar, 8 * n + 7)
                .residue_extract(8, 7)
                .expect("residue < 8")
                .downshift_decimate(7, 8)
                .expect("class-7 exponents lie on the progression")
        }),
        "A210450" => indices_with_at_least(count, t_series),
        _ => return None,
    };
    Some(terms)
}

/// Fetches the reference for `a_number` and compares the mapped construct
/// against it over the full reference range.
pub fn check_sequence(client: &OeisClient, a_number: &str) -> Result<ComparisonResult, OeisError> {
    let mapping = mapping_table()
        .iter()
        .find(|m| m.a_number == a_number)
        .ok_or_else(|| OeisError::BadANumber {
            input: a_number.to_string(),
        })?;
    let reference = client.fetch_bfile(a_number)?;
    let count = reference.entries.len();
    if count == 0 {
        return Err(OeisError::EmptyOverlap);
    }
    let generated =
        generated_terms(a_number, count).expect("mapping table and generator cover the same set");
    compare_sequence(&generated, &reference, mapping.offset)
}

/// Identifiers of every sequence with a bundled fixture, in table order.
pub fn known_a_numbers() -> Vec<&'static str> {
    mapping_table().iter().map(|m| m.a_number).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn a_number_validation() {
        assert!(digits_of("A001954").is_ok());
        assert!(digits_of("A0019541").is_ok());
        for bad in ["001954", "A1954", "A00195x", "B001954", "A"] {
            assert!(
                matches!(digits_of(bad), Err(OeisError::BadANumber { .. })),
                "{bad}"
            );
        }
    }

    #[test]
    fn parse_rejects_malformed_lines() {
        let err = parse_bfile("A000001", "1 1\nabc\n", BFileSource::Cache).unwrap_err();
        assert!(matches!(err, OeisError::Parse { line: 2, .. }), "{err}");
        let err = parse_bfile("A000001", "1 1 1 1\n", BFileSource::Cache).unwrap_err();
        assert!(matches!(err, OeisError::Parse { line: 1, .. }));
        let err = parse_bfile("A000001", "2 4\n1 1\n", BFileSource::Cache).unwrap_err();
        assert!(matches!(err, OeisError::IndicesNotIncreasing { line: 2 }));
    }

    #[test]
    fn parse_accepts_comments_and_negatives() {
        let text = "# heading\n\n-1 -5\n0 0\n3 12\n";
        let b = parse_bfile("A000001", text, BFileSource::Cache).unwrap();
        assert_eq!(b.entries, vec![(-1, -5), (0, 0), (3, 12)]);
    }

    #[test]
    fn comparison_alignment_and_mismatch() {
        let reference = BFile {
            a_number: "A000001".into(),
            entries: vec![(1, 1), (2, 5), (3, 8), (4, 11)],
            source: BFileSource::Cache,
        };
        let ok = compare_sequence(&[1, 5, 8, 11], &reference, 1).unwrap();
        assert!(ok.matches());
        assert_eq!(ok.matched_count, 4);
        assert_eq!(ok.to_string(), "A000001,4,");

        let shifted = compare_sequence(&[5, 8, 11], &reference, 1).unwrap();
        assert_eq!(
            shifted.first_mismatch,
            Some(Mismatch {
                index: 1,
                expected: 1,
                actual: 5
            })
        );
        assert_eq!(shifted.to_string(), "A000001,0,1");

        assert!(matches!(
            compare_sequence(&[1, 2], &reference, 100),
            Err(OeisError::EmptyOverlap)
        ));
    }

    #[test]
    fn mapping_covers_fourteen_sequences() {
        let table = mapping_table();
        assert_eq!(table.len(), 14);
        for m in table {
            assert!(bundled_fixture(m.a_number).is_some(), "{}", m.a_number);
            assert!(generated_terms(m.a_number, 3).is_some(), "{}", m.a_number);
        }
        assert!(bundled_fixture("A999999").is_none());
        assert!(generated_terms("A999999", 3).is_none());
    }

    #[test]
    fn generated_prefixes_match_known_values() {
        assert_eq!(
            generated_terms("A000203", 10).unwrap(),
            vec![1, 3, 4, 7, 6, 12, 8, 15, 13, 18]
        );
        assert_eq!(
            generated_terms("A028982", 8).unwrap(),
            vec![1, 2, 4, 8, 9, 16, 18, 25]
        );
        assert_eq!(generated_terms("A001954", 3).unwrap(), vec![1, 5, 8]);
        assert_eq!(
            generated_terms("A192628", 5).unwrap(),
            vec![0, 1, 3, 7, 9]
        );
        assert_eq!(generated_terms("A052002", 4).unwrap(), vec![0, 1, 3, 4]);
    }

    #[test]
    fn client_prefers_cache_then_fixture() {
        let dir = tempfile::tempdir().unwrap();
        let client = OeisClient::new(dir.path());
        // No cache file: bundled fixture answers.
        let bundled = client.fetch_bfile("A001954").unwrap();
        assert_eq!(bundled.source, BFileSource::Cache);

        // A cache file overrides the bundled copy.
        std::fs::write(dir.path().join("b001954.txt"), "1 999\n").unwrap();
        let cached = client.fetch_bfile("A001954").unwrap();
        assert_eq!(cached.entries, vec![(1, 999)]);

        // Unknown sequence, network disabled.
        assert!(matches!(
            client.fetch_bfile("A000002"),
            Err(OeisError::NetworkUnavailable { .. })
        ));
    }

    #[test]
    fn client_fetches_from_injected_url_and_caches() {
        let remote = tempfile::tempdir().unwrap();
        let seq_dir = remote.path().join("A000002");
        std::fs::create_dir_all(&seq_dir).unwrap();
        std::fs::write(seq_dir.join("b000002.txt"), "1 1\n2 2\n").unwrap();

        let cache = tempfile::tempdir().unwrap();
        let client = OeisClient::new(cache.path())
            .with_network(true)
            .with_base_url(format!("file://{}", remote.path().display()));
        let fetched = client.fetch_bfile("A000002").unwrap();
        assert_eq!(fetched.source, BFileSource::Network);
        assert_eq!(fetched.entries, vec![(1, 1), (2, 2)]);
        assert!(cache.path().join("b000002.txt").exists());

        // Second call is served from the fresh cache.
        let again = client.fetch_bfile("A000002").unwrap();
        assert_eq!(again.source, BFileSource::Cache);
        assert_eq!(again.entries, fetched.entries);
    }
}
