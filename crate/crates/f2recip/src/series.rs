//! Truncated formal power series over GF(2).
//!
//! A [`BitSeries`] stores the first `precision` coefficients of a power
//! series in `q`, one bit per coefficient, packed little-endian into `u64`
//! words (bit `i` of word `j` is the coefficient of `q^(64j + i)`).
//!
//! Two invariants hold for every constructed value and are restored after
//! every operation:
//!
//! - `words.len() == ceil(precision / 64)`, and
//! - all padding bits above `precision - 1` in the last word are zero.
//!
//! Canonical padding means equality is plain word comparison and the word
//! buffers can be handed to the multiply kernels without masking.
//!
//! Multiplication computes the full carryless product and truncates to the
//! smaller operand precision. The word-level kernel uses the `PCLMULQDQ`
//! instruction when the CPU has it (checked once at runtime) and a portable
//! shift-and-xor loop otherwise; operands above
//! [`KARATSUBA_THRESHOLD_WORDS`] words are split recursively, which is
//! particularly cheap in characteristic 2 because the middle product needs
//! no borrows or carries.

use std::borrow::Cow;
use std::fmt;

use thiserror::Error;

/// Word size of the packing, in bits.
const WORD_BITS: usize = 64;

/// Operand length (in words) at or below which multiplication runs the
/// schoolbook word loop directly; longer operands split Karatsuba-style.
pub const KARATSUBA_THRESHOLD_WORDS: usize = 64;

/// Mask of the bits at even positions within a word.
const EVEN_BITS: u64 = 0x5555_5555_5555_5555;
/// Mask of the bits at odd positions within a word.
const ODD_BITS: u64 = 0xAAAA_AAAA_AAAA_AAAA;

/// Errors from series construction and partial operations.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeriesError {
    /// The requested operation would produce a series with no known
    /// coefficients.
    #[error("operation would leave a series of precision 0")]
    ZeroPrecision,
    /// Inversion requires a unit, i.e. constant term 1.
    #[error("series has constant term 0 and is not invertible")]
    ZeroConstantTerm,
    /// An even-exponent square root was requested of a series with a set
    /// bit at an odd exponent.
    #[error("set bit at odd exponent {index} has no even-exponent square root")]
    OddExponentPresent { index: usize },
    /// A decimation found a set bit off the arithmetic progression it
    /// expects every set bit to lie on.
    #[error("set bit at exponent {index} is not of the form {shift} + {stride}*j")]
    StrideViolation {
        index: usize,
        shift: usize,
        stride: usize,
    },
    /// A residue class was requested that the modulus does not contain.
    #[error("residue {residue} is out of range for modulus {modulus}")]
    ResidueOutOfRange { residue: usize, modulus: usize },
    /// An exponent list was not strictly increasing.
    #[error("exponent list is not strictly increasing at position {position}")]
    NotStrictlyIncreasing { position: usize },
}

/// Number of words needed to hold `n` coefficient bits.
#[inline]
pub(crate) fn words_for(n: usize) -> usize {
    n.div_ceil(WORD_BITS)
}

/// Zero every bit at index `n` or above, assuming `words.len() == words_for(n)`.
#[inline]
fn mask_tail(words: &mut [u64], n: usize) {
    let r = n % WORD_BITS;
    if r != 0 {
        if let Some(last) = words.last_mut() {
            *last &= (1u64 << r) - 1;
        }
    }
}

/// A strictly increasing list of exponents, the sparse view of a series.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct IndexSet {
    exponents: Vec<u64>,
}

impl IndexSet {
    /// Validates that `exponents` is strictly increasing and wraps it.
    pub fn new(exponents: Vec<u64>) -> Result<Self, SeriesError> {
        for (i, pair) in exponents.windows(2).enumerate() {
            if pair[0] >= pair[1] {
                return Err(SeriesError::NotStrictlyIncreasing { position: i + 1 });
            }
        }
        Ok(IndexSet { exponents })
    }

    /// Wraps a list already known to be strictly increasing.
    pub(crate) fn from_sorted_unchecked(exponents: Vec<u64>) -> Self {
        debug_assert!(exponents.windows(2).all(|p| p[0] < p[1]));
        IndexSet { exponents }
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.exponents
    }

    pub fn len(&self) -> usize {
        self.exponents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exponents.is_empty()
    }

    pub fn into_vec(self) -> Vec<u64> {
        self.exponents
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.exponents.iter().copied()
    }
}

impl From<IndexSet> for Vec<u64> {
    fn from(s: IndexSet) -> Vec<u64> {
        s.exponents
    }
}

/// A power series over GF(2) truncated to its first `precision` coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct BitSeries {
    precision: usize,
    words: Vec<u64>,
}

impl fmt::Debug for BitSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        const SHOWN: usize = 12;
        let ones: Vec<usize> = self.iter_ones().take(SHOWN + 1).collect();
        write!(f, "BitSeries(N={}; ", self.precision)?;
        if ones.is_empty() {
            write!(f, "0)")
        } else {
            let shown = &ones[..ones.len().min(SHOWN)];
            let tail = if ones.len() > SHOWN { ", ..." } else { "" };
            write!(f, "exponents {shown:?}{tail})")
        }
    }
}

impl BitSeries {
    /// The zero series at the given precision.
    ///
    /// # Panics
    /// Panics if `precision` is 0; a series with no known coefficients is
    /// not a representable value.
    pub fn zero(precision: usize) -> Self {
        assert!(precision > 0, "series precision must be at least 1");
        BitSeries {
            precision,
            words: vec![0; words_for(precision)],
        }
    }

    /// The constant series 1 at the given precision.
    pub fn one(precision: usize) -> Self {
        let mut f = Self::zero(precision);
        f.words[0] = 1;
        f
    }

    /// Builds a series from a strictly increasing exponent list, dropping
    /// exponents at or above `precision`.
    pub fn from_indices(indices: &IndexSet, precision: usize) -> Self {
        let mut f = Self::zero(precision);
        for e in indices.iter() {
            if (e as usize) < precision {
                f.set_bit(e as usize);
            }
        }
        f
    }

    /// The sparse view: exponents of all set bits, strictly increasing.
    pub fn to_indices(&self) -> IndexSet {
        IndexSet::from_sorted_unchecked(self.iter_ones().map(|i| i as u64).collect())
    }

    pub fn precision(&self) -> usize {
        self.precision
    }

    /// Coefficient of `q^i`.
    ///
    /// # Panics
    /// Panics if `i >= precision`; that coefficient is unknown.
    pub fn bit(&self, i: usize) -> bool {
        assert!(i < self.precision, "coefficient {i} is beyond the precision");
        self.words[i / WORD_BITS] >> (i % WORD_BITS) & 1 == 1
    }

    /// Number of set bits among the known coefficients.
    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Iterates the exponents of set bits in increasing order.
    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(j, &w)| {
            std::iter::successors((w != 0).then_some(w), |&r| {
                let r = r & (r - 1);
                (r != 0).then_some(r)
            })
            .map(move |r| j * WORD_BITS + r.trailing_zeros() as usize)
        })
    }

    /// Raw packed words; padding bits are guaranteed zero.
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// Reconstructs a series from raw packed words.
    ///
    /// Fails with [`SeriesError::ZeroPrecision`] if `precision` is 0 and
    /// panics if the word count or padding does not match the canonical
    /// form, since that indicates a corrupted buffer rather than bad data.
    pub fn from_words(words: Vec<u64>, precision: usize) -> Result<Self, SeriesError> {
        if precision == 0 {
            return Err(SeriesError::ZeroPrecision);
        }
        assert_eq!(words.len(), words_for(precision), "word count mismatch");
        let mut f = BitSeries { precision, words };
        let before = f.words.last().copied();
        mask_tail(&mut f.words, precision);
        assert_eq!(before, f.words.last().copied(), "nonzero padding bits");
        Ok(f)
    }

    #[inline]
    pub(crate) fn set_bit(&mut self, i: usize) {
        debug_assert!(i < self.precision);
        self.words[i / WORD_BITS] |= 1 << (i % WORD_BITS);
    }

    /// Forgets coefficients from `n` on. `n` must be in `1..=precision`.
    pub fn truncate(&self, n: usize) -> Self {
        assert!(n >= 1, "truncation target must be at least 1");
        assert!(n <= self.precision, "cannot truncate to a higher precision");
        if n == self.precision {
            return self.clone();
        }
        let mut words = self.words[..words_for(n)].to_vec();
        mask_tail(&mut words, n);
        BitSeries { precision: n, words }
    }

    /// Pads the known coefficients with zeros up to precision `n`.
    ///
    /// Only meaningful when the extended coefficients are genuinely known
    /// to be zero, as with the accumulator of Newton iteration; hence
    /// crate-private.
    pub(crate) fn extend(&self, n: usize) -> Self {
        debug_assert!(n >= self.precision);
        let mut words = self.words.clone();
        words.resize(words_for(n), 0);
        BitSeries { precision: n, words }
    }

    /// First `words_for(n)` words truncated to `n` bits, borrowing when the
    /// series is already at precision `n`.
    fn word_view(&self, n: usize) -> Cow<'_, [u64]> {
        debug_assert!(n <= self.precision);
        if n == self.precision {
            Cow::Borrowed(&self.words)
        } else {
            let mut words = self.words[..words_for(n)].to_vec();
            mask_tail(&mut words, n);
            Cow::Owned(words)
        }
    }

    /// Sum (= XOR) of two series at the smaller of the two precisions.
    pub fn add(&self, other: &Self) -> Self {
        let n = self.precision.min(other.precision);
        let w = words_for(n);
        let mut words: Vec<u64> = self.words[..w]
            .iter()
            .zip(&other.words[..w])
            .map(|(a, b)| a ^ b)
            .collect();
        mask_tail(&mut words, n);
        BitSeries { precision: n, words }
    }

    /// Product of two series at the smaller of the two precisions.
    pub fn mul(&self, other: &Self) -> Self {
        let n = self.precision.min(other.precision);
        let w = words_for(n);
        let a = self.word_view(n);
        let b = other.word_view(n);
        let full = mul_words(&a, &b);
        let mut words = full[..w].to_vec();
        mask_tail(&mut words, n);
        BitSeries { precision: n, words }
    }

    /// The square `f(q)^2 = f(q^2)`, truncated to the input precision.
    ///
    /// Over GF(2) squaring sends bit `i` to bit `2i`, so it is a pure bit
    /// interleave: each 32-bit half of an input word spreads into one
    /// output word.
    pub fn square(&self) -> Self {
        let n = self.precision;
        let mut words = vec![0u64; words_for(n)];
        for (j, &w) in self.words.iter().enumerate() {
            if w == 0 {
                continue;
            }
            if 2 * j < words.len() {
                words[2 * j] = spread_u32(w as u32);
            }
            if 2 * j + 1 < words.len() {
                words[2 * j + 1] = spread_u32((w >> 32) as u32);
            }
        }
        mask_tail(&mut words, n);
        BitSeries { precision: n, words }
    }

    /// The inverse of [`square`](Self::square): halves every exponent.
    ///
    /// Precision of the result is `ceil(precision / 2)`; fails if any set
    /// bit sits at an odd exponent, reporting the lowest offender.
    pub fn sqrt_even(&self) -> Result<Self, SeriesError> {
        for (j, &w) in self.words.iter().enumerate() {
            let odd = w & ODD_BITS;
            if odd != 0 {
                return Err(SeriesError::OddExponentPresent {
                    index: j * WORD_BITS + odd.trailing_zeros() as usize,
                });
            }
        }
        let n = self.precision.div_ceil(2);
        let mut words = vec![0u64; words_for(n)];
        for (j, &w) in self.words.iter().enumerate() {
            if w == 0 {
                continue;
            }
            let half = compress_even(w) as u64;
            words[j / 2] |= half << (32 * (j % 2));
        }
        mask_tail(&mut words, n);
        Ok(BitSeries { precision: n, words })
    }

    /// `f^k` by binary exponentiation; `f^0` is 1 at the same precision.
    pub fn pow(&self, mut k: u64) -> Self {
        let mut result = Self::one(self.precision);
        if k == 0 {
            return result;
        }
        let mut base = self.clone();
        loop {
            if k & 1 == 1 {
                result = result.mul(&base);
            }
            k >>= 1;
            if k == 0 {
                return result;
            }
            base = base.square();
        }
    }

    /// The reciprocal series `g` with `f * g = 1`, by Newton iteration.
    ///
    /// In characteristic 2 the Newton step collapses to `g <- f * g^2`:
    /// if `g` is correct to `p` coefficients then `1 + f*g = q^p * e` for
    /// some series `e`, and `1 + f*(f*g^2) = (1 + f*g)^2 = q^(2p) * e^2`,
    /// so each step doubles the verified precision. Total cost is a
    /// constant factor over one full-precision multiply.
    pub fn inverse(&self) -> Result<Self, SeriesError> {
        if !self.bit(0) {
            return Err(SeriesError::ZeroConstantTerm);
        }
        let n = self.precision;
        let mut g = Self::one(1);
        let mut p = 1usize;
        while p < n {
            p = (2 * p).min(n);
            let g2 = g.extend(p).square();
            g = self.mul(&g2);
            debug_assert_eq!(g.precision, p);
        }
        Ok(g)
    }

    /// The reciprocal by the defining recurrence, coefficient by
    /// coefficient: `g_m = sum over set bits a >= 1 of f of g_(m-a)`.
    ///
    /// Quadratic in the precision; exists as an independent oracle for
    /// [`inverse`](Self::inverse) and stays practical into the hundreds of
    /// thousands of coefficients when `f` is sparse.
    pub fn inverse_oracle(&self) -> Result<Self, SeriesError> {
        if !self.bit(0) {
            return Err(SeriesError::ZeroConstantTerm);
        }
        let n = self.precision;
        let support: Vec<usize> = self.iter_ones().skip(1).collect();
        let mut g = vec![false; n];
        g[0] = true;
        for m in 1..n {
            let mut acc = false;
            for &a in &support {
                if a > m {
                    break;
                }
                acc ^= g[m - a];
            }
            g[m] = acc;
        }
        let mut out = Self::zero(n);
        for (m, &set) in g.iter().enumerate() {
            if set {
                out.set_bit(m);
            }
        }
        Ok(out)
    }

    /// The formal derivative. Over GF(2) only odd-exponent terms survive:
    /// `d/dq q^(2k+1) = q^(2k)`, so the bit pattern shifts the odd-position
    /// mask down by one with no carries across words.
    ///
    /// The result has one fewer known coefficient; fails if that would
    /// leave none.
    pub fn derivative(&self) -> Result<Self, SeriesError> {
        let n = self.precision;
        if n <= 1 {
            return Err(SeriesError::ZeroPrecision);
        }
        let mut words: Vec<u64> = self.words[..words_for(n - 1)]
            .iter()
            .map(|&w| (w & ODD_BITS) >> 1)
            .collect();
        mask_tail(&mut words, n - 1);
        BitSeries {
            precision: n - 1,
            words,
        }
        .pipe_ok()
    }

    /// Keeps only the even-exponent terms, at unchanged precision.
    pub fn even_part(&self) -> Self {
        let mut words: Vec<u64> = self.words.iter().map(|&w| w & EVEN_BITS).collect();
        mask_tail(&mut words, self.precision);
        BitSeries {
            precision: self.precision,
            words,
        }
    }

    /// Keeps only the odd-exponent terms, at unchanged precision.
    pub fn odd_part(&self) -> Self {
        let mut words: Vec<u64> = self.words.iter().map(|&w| w & ODD_BITS).collect();
        mask_tail(&mut words, self.precision);
        BitSeries {
            precision: self.precision,
            words,
        }
    }

    /// Keeps only the terms whose exponent is `residue` mod `modulus`, at
    /// unchanged precision.
    ///
    /// # Panics
    /// Panics if `modulus` is 0.
    pub fn residue_extract(&self, modulus: usize, residue: usize) -> Result<Self, SeriesError> {
        assert!(modulus > 0, "modulus must be positive");
        if residue >= modulus {
            return Err(SeriesError::ResidueOutOfRange { residue, modulus });
        }
        let mut out = Self::zero(self.precision);
        for i in self.iter_ones() {
            if i % modulus == residue {
                out.set_bit(i);
            }
        }
        Ok(out)
    }

    /// Divides by `q^shift` and then substitutes `q^(1/stride)`: bit
    /// `shift + stride*j` maps to bit `j`.
    ///
    /// Every set bit must lie on that progression; a bit off it (including
    /// below `shift`) fails with [`SeriesError::StrideViolation`]. The
    /// result precision is `ceil((precision - shift) / stride)`, the count
    /// of progression members among the known coefficients; fails with
    /// [`SeriesError::ZeroPrecision`] when `shift >= precision`.
    ///
    /// # Panics
    /// Panics if `stride` is 0.
    pub fn downshift_decimate(&self, shift: usize, stride: usize) -> Result<Self, SeriesError> {
        assert!(stride > 0, "stride must be positive");
        let n = self.precision;
        if shift >= n {
            return Err(SeriesError::ZeroPrecision);
        }
        let out_n = (n - shift).div_ceil(stride);
        let mut out = Self::zero(out_n);
        for i in self.iter_ones() {
            if i < shift || !(i - shift).is_multiple_of(stride) {
                return Err(SeriesError::StrideViolation {
                    index: i,
                    shift,
                    stride,
                });
            }
            out.set_bit((i - shift) / stride);
        }
        Ok(out)
    }

    /// Multiplies by `q^shift` at unchanged precision, pushing the top
    /// `shift` coefficients off the end.
    pub fn shift_up(&self, shift: usize) -> Self {
        let n = self.precision;
        if shift >= n {
            return Self::zero(n);
        }
        let ws = shift / WORD_BITS;
        let bs = shift % WORD_BITS;
        let len = self.words.len();
        let mut words = vec![0u64; len];
        if bs == 0 {
            words[ws..].copy_from_slice(&self.words[..len - ws]);
        } else {
            for j in (ws..len).rev() {
                let mut w = self.words[j - ws] << bs;
                if j > ws {
                    w |= self.words[j - ws - 1] >> (WORD_BITS - bs);
                }
                words[j] = w;
            }
        }
        mask_tail(&mut words, n);
        BitSeries { precision: n, words }
    }

    /// Multiplies in place by `1 + q^m`, the workhorse of building
    /// restricted product generating functions one factor at a time.
    ///
    /// Processes words top-down so each source word is read before it is
    /// overwritten, like an overlapping move.
    pub(crate) fn mul_one_plus_power_inplace(&mut self, m: usize) {
        let n = self.precision;
        if m >= n {
            return;
        }
        let ws = m / WORD_BITS;
        let bs = m % WORD_BITS;
        let len = self.words.len();
        if bs == 0 {
            for j in (ws..len).rev() {
                self.words[j] ^= self.words[j - ws];
            }
        } else {
            for j in (ws..len).rev() {
                let mut w = self.words[j - ws] << bs;
                if j > ws {
                    w |= self.words[j - ws - 1] >> (WORD_BITS - bs);
                }
                self.words[j] ^= w;
            }
        }
        mask_tail(&mut self.words, n);
    }

    #[inline]
    fn pipe_ok(self) -> Result<Self, SeriesError> {
        Ok(self)
    }

    /// Test-only invariant check: canonical padding and word count.
    #[cfg(test)]
    fn assert_canonical(&self) {
        assert_eq!(self.words.len(), words_for(self.precision));
        let mut copy = self.words.clone();
        mask_tail(&mut copy, self.precision);
        assert_eq!(copy, self.words, "padding bits must be zero");
    }
}

/// Spreads the 32 bits of `x` to the even positions of a word:
/// bit `i` moves to bit `2i`.
#[inline]
fn spread_u32(x: u32) -> u64 {
    let mut v = x as u64;
    v = (v | (v << 16)) & 0x0000_FFFF_0000_FFFF;
    v = (v | (v << 8)) & 0x00FF_00FF_00FF_00FF;
    v = (v | (v << 4)) & 0x0F0F_0F0F_0F0F_0F0F;
    v = (v | (v << 2)) & 0x3333_3333_3333_3333;
    v = (v | (v << 1)) & EVEN_BITS;
    v
}

/// Inverse of [`spread_u32`]: gathers the even-position bits of `w`
/// (odd-position bits must already be clear) into the low 32 bits.
#[inline]
fn compress_even(w: u64) -> u32 {
    debug_assert_eq!(w & ODD_BITS, 0);
    let mut v = w;
    v = (v | (v >> 1)) & 0x3333_3333_3333_3333;
    v = (v | (v >> 2)) & 0x0F0F_0F0F_0F0F_0F0F;
    v = (v | (v >> 4)) & 0x00FF_00FF_00FF_00FF;
    v = (v | (v >> 8)) & 0x0000_FFFF_0000_FFFF;
    v = (v | (v >> 16)) & 0x0000_0000_FFFF_FFFF;
    v as u32
}

/// Full carryless product of two equal-length word slices.
///
/// Returns `2 * a.len()` words; the caller truncates.
pub(crate) fn mul_words(a: &[u64], b: &[u64]) -> Vec<u64> {
    debug_assert_eq!(a.len(), b.len());
    let n = a.len();
    let mut out = vec![0u64; 2 * n];
    if n <= KARATSUBA_THRESHOLD_WORDS {
        schoolbook_mul(a, b, &mut out);
    } else {
        // Worst-case scratch along one recursion branch is a little under
        // 4n words (each level needs 4*ceil(len/2) and passes the rest down).
        let mut scratch = vec![0u64; 4 * n + 256];
        karatsuba_into(a, b, &mut out, &mut scratch);
    }
    out
}

/// Recursive Karatsuba split over equal-length slices.
///
/// `out` must hold `2n` pre-zeroed (or correctly partial) words: the two
/// end products land in disjoint halves of `out` and the middle
/// correction is XORed over the seam, so in characteristic 2 no borrows
/// propagate. `scratch` is a reusable arena split per level.
fn karatsuba_into(a: &[u64], b: &[u64], out: &mut [u64], scratch: &mut [u64]) {
    let n = a.len();
    if n <= KARATSUBA_THRESHOLD_WORDS {
        schoolbook_mul(a, b, out);
        return;
    }
    let m = n / 2;
    let h = n - m;
    let (a0, a1) = a.split_at(m);
    let (b0, b1) = b.split_at(m);
    let (level, rest) = scratch.split_at_mut(4 * h);
    let (sa, level) = level.split_at_mut(h);
    let (sb, z1) = level.split_at_mut(h);

    sa.copy_from_slice(a1);
    for (d, s) in sa.iter_mut().zip(a0) {
        *d ^= s;
    }
    sb.copy_from_slice(b1);
    for (d, s) in sb.iter_mut().zip(b0) {
        *d ^= s;
    }

    karatsuba_into(a0, b0, &mut out[..2 * m], rest);
    karatsuba_into(a1, b1, &mut out[2 * m..2 * n], rest);
    z1.fill(0);
    karatsuba_into(sa, sb, z1, rest);

    // z1 <- (a0+a1)(b0+b1) + a0*b0 + a1*b1, then fold over the seam.
    for (i, z) in z1.iter_mut().enumerate().take(2 * m) {
        *z ^= out[i];
    }
    for (i, z) in z1.iter_mut().enumerate() {
        *z ^= out[2 * m + i];
    }
    for (i, &z) in z1.iter().enumerate() {
        out[m + i] ^= z;
    }
}

/// Word-by-word product, dispatching to the carryless-multiply
/// instruction when available.
fn schoolbook_mul(a: &[u64], b: &[u64], out: &mut [u64]) {
    #[cfg(target_arch = "x86_64")]
    {
        if pclmul_available() {
            // SAFETY: the required features were just detected.
            unsafe { schoolbook_mul_pclmul(a, b, out) };
            return;
        }
    }
    schoolbook_mul_portable(a, b, out);
}

#[cfg(target_arch = "x86_64")]
fn pclmul_available() -> bool {
    use std::sync::OnceLock;
    static AVAILABLE: OnceLock<bool> = OnceLock::new();
    *AVAILABLE.get_or_init(|| {
        std::arch::is_x86_feature_detected!("pclmulqdq")
            && std::arch::is_x86_feature_detected!("sse2")
            && std::arch::is_x86_feature_detected!("sse4.1")
    })
}

/// # Safety
/// Requires the `pclmulqdq`, `sse2`, and `sse4.1` CPU features.
#[cfg(target_arch = "x86_64")]
#[target_feature(enable = "pclmulqdq", enable = "sse2", enable = "sse4.1")]
unsafe fn schoolbook_mul_pclmul(a: &[u64], b: &[u64], out: &mut [u64]) {
    use std::arch::x86_64::*;
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        let va = _mm_cvtsi64_si128(ai as i64);
        for (j, &bj) in b.iter().enumerate() {
            if bj == 0 {
                continue;
            }
            let vb = _mm_cvtsi64_si128(bj as i64);
            let p = _mm_clmulepi64_si128::<0x00>(va, vb);
            out[i + j] ^= _mm_cvtsi128_si64(p) as u64;
            out[i + j + 1] ^= _mm_extract_epi64::<1>(p) as u64;
        }
    }
}

fn schoolbook_mul_portable(a: &[u64], b: &[u64], out: &mut [u64]) {
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            if bj == 0 {
                continue;
            }
            let (lo, hi) = clmul_u64_portable(ai, bj);
            out[i + j] ^= lo;
            out[i + j + 1] ^= hi;
        }
    }
}

/// 64x64 -> 128 carryless multiply by iterating the set bits of the
/// sparser operand.
fn clmul_u64_portable(a: u64, b: u64) -> (u64, u64) {
    let (s, t) = if a.count_ones() <= b.count_ones() {
        (a, b)
    } else {
        (b, a)
    };
    let mut lo = 0u64;
    let mut hi = 0u64;
    let mut rest = s;
    while rest != 0 {
        let k = rest.trailing_zeros();
        rest &= rest - 1;
        lo ^= t << k;
        if k > 0 {
            hi ^= t >> (64 - k);
        }
    }
    (lo, hi)
}
