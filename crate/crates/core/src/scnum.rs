//! Unipolar stochastic numbers: packed bitstreams, exact probabilities and
//! the B-bit binary operands they are generated from.
//!
//! Positions are 1-based. Position 1 is the trailing end of a stream and is
//! rendered as the rightmost character, position N the leftmost.

use std::cmp::Ordering;
use std::fmt;

use num_integer::Integer;

use crate::error::{Result, ScError};

const WORD_BITS: usize = 64;

/// A fixed-length bit sequence, word-packed with position `p` stored at bit
/// `p - 1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Bitstream {
    words: Vec<u64>,
    len: usize,
}

impl Bitstream {
    pub fn zeros(len: usize) -> Result<Self> {
        if len == 0 {
            return Err(ScError::EmptyStream);
        }
        Ok(Self { words: vec![0; len.div_ceil(WORD_BITS)], len })
    }

    /// Stream whose positions `1..=ones` are set (thermometer layout).
    pub fn trailing_ones(len: usize, ones: usize) -> Result<Self> {
        let mut bs = Self::zeros(len)?;
        let ones = ones.min(len);
        let full = ones / WORD_BITS;
        bs.words[..full].fill(u64::MAX);
        let rem = ones % WORD_BITS;
        if rem != 0 {
            bs.words[full] = (1u64 << rem) - 1;
        }
        Ok(bs)
    }

    /// Builds a stream from a per-position predicate, `f(p)` for `p = 1..=len`.
    pub fn from_fn(len: usize, mut f: impl FnMut(usize) -> bool) -> Result<Self> {
        let mut bs = Self::zeros(len)?;
        for p in 1..=len {
            if f(p) {
                bs.words[(p - 1) / WORD_BITS] |= 1 << ((p - 1) % WORD_BITS);
            }
        }
        Ok(bs)
    }

    /// Builds a stream from bits in position order (position 1 first).
    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Result<Self> {
        let mut words = Vec::new();
        let mut len = 0;
        for bit in bits {
            if len % WORD_BITS == 0 {
                words.push(0);
            }
            if bit {
                words[len / WORD_BITS] |= 1 << (len % WORD_BITS);
            }
            len += 1;
        }
        if len == 0 {
            return Err(ScError::EmptyStream);
        }
        Ok(Self { words, len })
    }

    pub(crate) fn from_words(words: Vec<u64>, len: usize) -> Self {
        debug_assert_eq!(words.len(), len.div_ceil(WORD_BITS));
        let mut bs = Self { words, len };
        bs.mask_tail();
        bs
    }

    /// Sets positions `first..first + count`, clipped to the stream.
    pub(crate) fn set_range(&mut self, first: usize, count: usize) {
        let start = first - 1;
        let end = (start + count).min(self.len);
        let mut i = start;
        while i < end {
            let (w, b) = (i / WORD_BITS, i % WORD_BITS);
            let span = (WORD_BITS - b).min(end - i);
            let mask = if span == WORD_BITS { u64::MAX } else { ((1u64 << span) - 1) << b };
            self.words[w] |= mask;
            i += span;
        }
    }

    fn mask_tail(&mut self) {
        let rem = self.len % WORD_BITS;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    /// Always false; a stream has at least one position.
    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    /// Bit at 1-based position `p`. Panics if `p` is out of range.
    #[inline]
    pub fn get(&self, p: usize) -> bool {
        assert!((1..=self.len).contains(&p), "position {p} outside 1..={}", self.len);
        self.words[(p - 1) / WORD_BITS] >> ((p - 1) % WORD_BITS) & 1 == 1
    }

    pub fn set(&mut self, p: usize, bit: bool) {
        assert!((1..=self.len).contains(&p), "position {p} outside 1..={}", self.len);
        let (w, b) = ((p - 1) / WORD_BITS, (p - 1) % WORD_BITS);
        if bit {
            self.words[w] |= 1 << b;
        } else {
            self.words[w] &= !(1 << b);
        }
    }

    /// N₁, the number of ones.
    pub fn popcount(&self) -> u64 {
        self.words.iter().map(|w| u64::from(w.count_ones())).sum()
    }

    /// Number of ones at positions `1..=prefix`.
    pub fn prefix_ones(&self, prefix: usize) -> u64 {
        let prefix = prefix.min(self.len);
        let full = prefix / WORD_BITS;
        let mut n: u64 = self.words[..full].iter().map(|w| u64::from(w.count_ones())).sum();
        let rem = prefix % WORD_BITS;
        if rem != 0 {
            n += u64::from((self.words[full] & ((1u64 << rem) - 1)).count_ones());
        }
        n
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// Bits in position order, position 1 first.
    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (1..=self.len).map(move |p| self.get(p))
    }

    pub fn value(&self) -> UnipolarValue {
        value_of(self)
    }

    /// Renders with position N leftmost, e.g. `"00001111"`.
    pub fn render(&self) -> String {
        (1..=self.len).rev().map(|p| if self.get(p) { '1' } else { '0' }).collect()
    }

    /// Parses the rendered form; the leftmost character is position N.
    pub fn parse(s: &str, expected_len: usize) -> Result<Self> {
        let n = s.chars().count();
        if n != expected_len {
            return Err(ScError::LengthMismatch { left: n, right: expected_len });
        }
        let mut bs = Self::zeros(n)?;
        for (offset, ch) in s.chars().enumerate() {
            let p = n - offset;
            match ch {
                '0' => {}
                '1' => bs.set(p, true),
                _ => return Err(ScError::BadChar { ch, offset }),
            }
        }
        Ok(bs)
    }
}

impl fmt::Debug for Bitstream {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Bitstream({})", self.render())
    }
}

impl fmt::Display for Bitstream {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// υ = N₁/N.
pub fn value_of(bs: &Bitstream) -> UnipolarValue {
    UnipolarValue::new_unchecked(u128::from(bs.popcount()), bs.len() as u128)
}

/// Position-wise AND of two equal-length streams.
pub fn bitwise_and(a: &Bitstream, b: &Bitstream) -> Result<Bitstream> {
    if a.len != b.len {
        return Err(ScError::LengthMismatch { left: a.len, right: b.len });
    }
    let words = a.words.iter().zip(&b.words).map(|(x, y)| x & y).collect();
    Ok(Bitstream { words, len: a.len })
}

/// An exact probability `num/den` in `[0, 1]`.
///
/// The fraction is kept as constructed (`4/8` stays `4/8`) so reports can
/// echo stream counts; comparisons are by value.
#[derive(Clone, Copy)]
pub struct UnipolarValue {
    num: u128,
    den: u128,
}

impl UnipolarValue {
    pub fn new(num: u128, den: u128) -> Result<Self> {
        if den == 0 || num > den {
            return Err(ScError::NotAProbability { num, den });
        }
        Ok(Self { num, den })
    }

    pub(crate) fn new_unchecked(num: u128, den: u128) -> Self {
        debug_assert!(den > 0 && num <= den);
        Self { num, den }
    }

    pub const ZERO: Self = Self { num: 0, den: 1 };

    pub fn numer(&self) -> u128 {
        self.num
    }

    pub fn denom(&self) -> u128 {
        self.den
    }

    pub fn reduced(&self) -> Self {
        let g = self.num.gcd(&self.den);
        Self { num: self.num / g, den: self.den / g }
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// Fixed-point decimal with `digits` fractional digits, rounded half up
    /// from the exact fraction.
    pub fn to_decimal(&self, digits: u32) -> String {
        Ratio::from(*self).to_decimal(digits)
    }

    /// Decimal truncated (not rounded) to `digits` places.
    pub fn truncated_decimal(&self, digits: u32) -> String {
        Ratio::from(*self).truncated_decimal(digits)
    }
}

impl PartialEq for UnipolarValue {
    fn eq(&self, other: &Self) -> bool {
        self.num * other.den == other.num * self.den
    }
}

impl Eq for UnipolarValue {}

impl PartialOrd for UnipolarValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for UnipolarValue {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.num * other.den).cmp(&(other.num * self.den))
    }
}

impl fmt::Debug for UnipolarValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl fmt::Display for UnipolarValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// |observed − target| over the least common denominator.
pub fn abs_error(observed: UnipolarValue, target: UnipolarValue) -> UnipolarValue {
    let den = observed.den.lcm(&target.den);
    let a = observed.num * (den / observed.den);
    let b = target.num * (den / target.den);
    UnipolarValue::new_unchecked(a.abs_diff(b), den)
}

/// Non-negative exact rational, always in lowest terms. Used for sums and
/// means where the value may exceed 1.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Ratio {
    num: u128,
    den: u128,
}

impl Ratio {
    pub const ZERO: Self = Self { num: 0, den: 1 };

    pub fn new(num: u128, den: u128) -> Self {
        assert!(den != 0, "zero denominator");
        let g = num.gcd(&den);
        Self { num: num / g, den: den / g }
    }

    pub fn numer(&self) -> u128 {
        self.num
    }

    pub fn denom(&self) -> u128 {
        self.den
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    pub fn checked_add(self, other: Self) -> Option<Self> {
        let g = self.den.gcd(&other.den);
        let den = (self.den / g).checked_mul(other.den)?;
        let num = self.num.checked_mul(den / self.den)?.checked_add(other.num.checked_mul(den / other.den)?)?;
        Some(Self::new(num, den))
    }

    pub fn abs_diff(self, other: Self) -> Self {
        let den = self.den.lcm(&other.den);
        Self::new((self.num * (den / self.den)).abs_diff(other.num * (den / other.den)), den)
    }

    pub fn div_int(self, k: u128) -> Self {
        assert!(k != 0, "division by zero");
        let g = self.num.gcd(&k);
        Self::new(self.num / g, self.den * (k / g))
    }

    pub fn to_decimal(&self, digits: u32) -> String {
        let scale = 10u128.pow(digits);
        let scaled = (self.num * scale * 2 + self.den) / (self.den * 2);
        format_fixed(scaled, scale, digits)
    }

    pub fn truncated_decimal(&self, digits: u32) -> String {
        let scale = 10u128.pow(digits);
        format_fixed(self.num * scale / self.den, scale, digits)
    }
}

fn format_fixed(scaled: u128, scale: u128, digits: u32) -> String {
    if digits == 0 {
        return scaled.to_string();
    }
    format!("{}.{:0width$}", scaled / scale, scaled % scale, width = digits as usize)
}

impl From<UnipolarValue> for Ratio {
    fn from(v: UnipolarValue) -> Self {
        Ratio::new(v.num, v.den)
    }
}

impl std::ops::Add for Ratio {
    type Output = Ratio;
    fn add(self, rhs: Ratio) -> Ratio {
        self.checked_add(rhs).expect("rational overflow")
    }
}

impl std::iter::Sum for Ratio {
    fn sum<I: Iterator<Item = Ratio>>(iter: I) -> Ratio {
        iter.fold(Ratio::ZERO, |a, b| a + b)
    }
}

impl PartialOrd for Ratio {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Ratio {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.num * other.den).cmp(&(other.num * self.den))
    }
}

impl fmt::Debug for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

pub const MAX_WIDTH: u32 = 16;

/// A B-bit unsigned operand.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BinaryOperand {
    value: u64,
    width: u32,
}

impl BinaryOperand {
    pub fn new(value: u64, width: u32) -> Result<Self> {
        if !(1..=MAX_WIDTH).contains(&width) {
            return Err(ScError::BadWidth(width));
        }
        if value >= 1 << width {
            return Err(ScError::OutOfRange { value, width });
        }
        Ok(Self { value, width })
    }

    #[inline]
    pub fn value(&self) -> u64 {
        self.value
    }

    #[inline]
    pub fn width(&self) -> u32 {
        self.width
    }

    /// N = 2^B.
    #[inline]
    pub fn stream_len(&self) -> usize {
        1 << self.width
    }

    /// Binary digit at 1-based index `i` (index B is the MSB).
    pub fn bit(&self, i: u32) -> bool {
        assert!((1..=self.width).contains(&i));
        self.value >> (i - 1) & 1 == 1
    }

    pub fn msb(&self) -> bool {
        self.bit(self.width)
    }

    /// Value as a unipolar probability, value/2^B.
    pub fn as_unipolar(&self) -> UnipolarValue {
        UnipolarValue::new_unchecked(u128::from(self.value), 1u128 << self.width)
    }
}

pub(crate) fn check_widths(x: &BinaryOperand, y: &BinaryOperand) -> Result<u32> {
    if x.width != y.width {
        return Err(ScError::WidthMismatch { left: x.width, right: y.width });
    }
    Ok(x.width)
}

/// Target probability (x·y)/2^(2B).
pub fn exact_product(x: &BinaryOperand, y: &BinaryOperand) -> Result<UnipolarValue> {
    let b = check_widths(x, y)?;
    Ok(UnipolarValue::new_unchecked(u128::from(x.value) * u128::from(y.value), 1u128 << (2 * b)))
}

/// Output of one stochastic multiplication.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiplyResult {
    pub output: Bitstream,
    pub observed: UnipolarValue,
    pub target: UnipolarValue,
    pub abs_error: UnipolarValue,
    /// Clock cycles consumed; 1 for a combinational design.
    pub cycles: u64,
}

impl MultiplyResult {
    pub fn from_output(output: Bitstream, target: UnipolarValue, cycles: u64) -> Self {
        let observed = value_of(&output);
        Self { abs_error: abs_error(observed, target), output, observed, target, cycles }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bs(s: &str) -> Bitstream {
        Bitstream::parse(s, s.len()).unwrap()
    }

    fn uv(n: u128, d: u128) -> UnipolarValue {
        UnipolarValue::new(n, d).unwrap()
    }

    #[test]
    fn value_of_table_rows() {
        assert_eq!(format!("{}", value_of(&bs("00001111"))), "4/8");
        assert_eq!(format!("{}", value_of(&bs("00000000"))), "0/8");
        assert_eq!(format!("{}", value_of(&bs("10111110"))), "6/8");
    }

    #[test]
    fn and_examples() {
        assert_eq!(bitwise_and(&bs("00001111"), &bs("10111110")).unwrap().render(), "00001110");
        assert_eq!(bitwise_and(&bs("00011111"), &bs("00101010")).unwrap().render(), "00001010");
        assert_eq!(bitwise_and(&bs("00000000"), &bs("11011011")).unwrap().popcount(), 0);
        assert_eq!(bitwise_and(&bs("0101"), &bs("01")), Err(ScError::LengthMismatch { left: 4, right: 2 }));
    }

    #[test]
    fn exact_product_examples() {
        let op = |v| BinaryOperand::new(v, 3).unwrap();
        assert_eq!(exact_product(&op(4), &op(6)).unwrap(), uv(3, 8));
        assert_eq!(exact_product(&op(0), &op(7)).unwrap(), UnipolarValue::ZERO);
        assert_eq!(exact_product(&op(5), &op(3)).unwrap(), uv(15, 64));
        let wide = BinaryOperand::new(5, 4).unwrap();
        assert!(matches!(exact_product(&op(5), &wide), Err(ScError::WidthMismatch { .. })));
    }

    #[test]
    fn abs_error_examples() {
        assert!(abs_error(uv(3, 8), uv(24, 64)).is_zero());
        let e = abs_error(uv(2, 8), uv(15, 64));
        assert_eq!(e, uv(1, 64));
        assert_eq!(e.to_decimal(6), "0.015625");
        assert_eq!(e.truncated_decimal(2), "0.01");
        let e = abs_error(uv(1, 8), uv(12, 64));
        assert_eq!(e, uv(4, 64));
        assert_eq!(e.to_decimal(6), "0.062500");
        assert_eq!(e.truncated_decimal(2), "0.06");
    }

    #[test]
    fn render_parse() {
        let t = Bitstream::trailing_ones(8, 4).unwrap();
        assert_eq!(t.render(), "00001111");
        assert_eq!(bs("00000000").popcount(), 0);
        assert_eq!(bs("10101010").render(), "10101010");
        assert!(bs("10101010").get(2) && !bs("10101010").get(1));
        assert!(matches!(Bitstream::parse("0102", 4), Err(ScError::BadChar { ch: '2', offset: 3 })));
        assert!(matches!(Bitstream::parse("010", 4), Err(ScError::LengthMismatch { .. })));
        assert_eq!(Bitstream::parse("", 0), Err(ScError::EmptyStream));
    }

    #[test]
    fn multiword_streams() {
        let t = Bitstream::trailing_ones(130, 70).unwrap();
        assert_eq!(t.popcount(), 70);
        assert_eq!(t.prefix_ones(65), 65);
        assert_eq!(t.prefix_ones(130), 70);
        assert!(t.get(70) && !t.get(71));
        let all = Bitstream::trailing_ones(128, 500).unwrap();
        assert_eq!(all.popcount(), 128);
    }

    #[test]
    fn operand_ranges() {
        assert!(BinaryOperand::new(255, 8).is_ok());
        assert_eq!(BinaryOperand::new(256, 8), Err(ScError::OutOfRange { value: 256, width: 8 }));
        assert_eq!(BinaryOperand::new(0, 0), Err(ScError::BadWidth(0)));
        assert_eq!(BinaryOperand::new(0, 17), Err(ScError::BadWidth(17)));
        let y = BinaryOperand::new(6, 3).unwrap();
        assert!(y.msb() && y.bit(2) && !y.bit(1));
        // the largest operand never reaches 1.0
        assert!(BinaryOperand::new(7, 3).unwrap().as_unipolar() < uv(1, 1));
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(Ratio::new(1, 3).to_decimal(6), "0.333333");
        assert_eq!(Ratio::new(2, 3).to_decimal(6), "0.666667");
        assert_eq!(Ratio::new(1, 1).to_decimal(6), "1.000000");
        assert_eq!(Ratio::new(1, 2_000_000).to_decimal(6), "0.000001");
        assert_eq!(Ratio::new(5, 1).to_decimal(0), "5");
    }

    #[test]
    fn ratio_arithmetic() {
        let s: Ratio = [Ratio::new(1, 64), Ratio::new(1, 4), Ratio::new(3, 64)].into_iter().sum();
        assert_eq!(s, Ratio::new(5, 16));
        assert_eq!(s.div_int(5), Ratio::new(1, 16));
        assert_eq!(s.numer(), 5);
        assert_eq!(s.denom(), 16);
    }
}
