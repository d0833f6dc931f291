//! Bitstream generators.
//!
//! * [`tcu_decode`] is the binary-to-thermometer decoder used for the X
//!   operand of the proposed multiplier.
//! * [`correlation_encode`] spreads the ones of the Y operand so that any
//!   trailing prefix holds close to its proportional share.
//! * [`LfsrConfig`] and [`sng_compare`] form the comparator-based
//!   pseudo-random generator of the Gaines baseline.
//! * [`bit_reversal_index`] gives the low-discrepancy ordering used by the
//!   uMUL-style baseline.

use serde::{Deserialize, Serialize};

use crate::error::{Result, ScError};
use crate::scnum::{BinaryOperand, Bitstream, MAX_WIDTH};

/// Thermometer code of `v` over `2^k` positions: position `p` is set iff
/// `p <= v`.
pub fn tcu_decode(v: u64, k: u32) -> Result<Bitstream> {
    if !(1..=MAX_WIDTH).contains(&k) {
        return Err(ScError::BadWidth(k));
    }
    if v >= 1 << k {
        return Err(ScError::OutOfRange { value: v, width: k });
    }
    Bitstream::trailing_ones(1 << k, v as usize)
}

const EVEN_POSITIONS: u64 = 0xAAAA_AAAA_AAAA_AAAA;
const ODD_POSITIONS: u64 = 0x5555_5555_5555_5555;

/// Bit-position correlation encoder for the Y operand.
///
/// With `m` the operand MSB and `t = tcu_decode(y mod 2^(B-1), B-1)`, output
/// position `2i` is `m | t_i` and position `2i-1` is `m & t_(i-1)` with
/// `t_0 = 0`. The popcount of the result equals `y`.
pub fn correlation_encode(y: &BinaryOperand) -> Result<Bitstream> {
    let b = y.width();
    if b < 2 {
        return Err(ScError::EncoderWidth(b));
    }
    let n = y.stream_len();
    let s = (y.value() & ((1 << (b - 1)) - 1)) as usize;
    // m = 0: ones at even positions 2..=2s.
    // m = 1: every even position plus odd positions 3..=2s+1.
    let (base, odd_limit) = if y.msb() { (EVEN_POSITIONS, 2 * s + 1) } else { (0, 0) };
    let even_limit = 2 * s;
    let even = Bitstream::trailing_ones(n, even_limit)?;
    let odd = Bitstream::trailing_ones(n, odd_limit)?;
    let words = even
        .words()
        .iter()
        .zip(odd.words())
        .enumerate()
        .map(|(w, (&e, &o))| {
            // position 1 (bit 0 of word 0) is t_0 AND m, constant zero
            let odd_mask = if w == 0 { ODD_POSITIONS & !1 } else { ODD_POSITIONS };
            base | (e & EVEN_POSITIONS) | (o & odd_mask)
        })
        .collect();
    Ok(Bitstream::from_words(words, n))
}

/// B-bit reversal of `t`.
pub fn bit_reversal_index(t: u64, b: u32) -> Result<u64> {
    if !(1..=MAX_WIDTH).contains(&b) {
        return Err(ScError::BadWidth(b));
    }
    if t >= 1 << b {
        return Err(ScError::OutOfRange { value: t, width: b });
    }
    Ok(t.reverse_bits() >> (64 - b))
}

/// Maximal-length Fibonacci tap sets, indexed by register width.
pub fn maximal_taps(width: u32) -> Option<&'static [u32]> {
    Some(match width {
        2 => &[2, 1],
        3 => &[3, 2],
        4 => &[4, 3],
        5 => &[5, 3],
        6 => &[6, 5],
        7 => &[7, 6],
        8 => &[8, 6, 5, 4],
        9 => &[9, 5],
        10 => &[10, 7],
        11 => &[11, 9],
        12 => &[12, 11, 10, 4],
        13 => &[13, 12, 11, 8],
        14 => &[14, 13, 12, 2],
        15 => &[15, 14],
        16 => &[16, 15, 13, 4],
        _ => return None,
    })
}

pub const DEFAULT_SEED_X: u64 = 0x01;
pub const DEFAULT_SEED_Y: u64 = 0x5A;

/// A Fibonacci LFSR. Tap `t` reads the state bit at shift `width - t`; each
/// step shifts right and inserts the feedback at the MSB.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LfsrConfig {
    pub width: u32,
    pub taps: Vec<u32>,
    #[serde(with = "hex_seed")]
    pub seed: u64,
}

mod hex_seed {
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(seed: &u64, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format!("0x{seed:02X}"))
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Text(String),
        Int(u64),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<u64, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Int(v) => Ok(v),
            Repr::Text(s) => super::parse_seed(&s).map_err(D::Error::custom),
        }
    }
}

/// Parses a seed written as hex (`0x5A`) or decimal.
pub fn parse_seed(s: &str) -> std::result::Result<u64, String> {
    let t = s.trim();
    let parsed = match t.strip_prefix("0x").or_else(|| t.strip_prefix("0X")) {
        Some(h) => u64::from_str_radix(h, 16),
        None => t.parse(),
    };
    parsed.map_err(|e| format!("bad seed {s:?}: {e}"))
}

impl LfsrConfig {
    /// Validated configuration. Taps outside the built-in table are accepted
    /// only if a brute-force walk confirms a full `2^width - 1` period.
    pub fn new(width: u32, mut taps: Vec<u32>, seed: u64) -> Result<Self> {
        if !(2..=MAX_WIDTH).contains(&width) {
            return Err(ScError::BadLfsr(format!("width {width} outside 2..={MAX_WIDTH}")));
        }
        taps.sort_unstable_by(|a, b| b.cmp(a));
        taps.dedup();
        if taps.first() != Some(&width) || taps.contains(&0) {
            return Err(ScError::BadLfsr(format!("taps {taps:?} must lie in 1..={width} and include {width}")));
        }
        if seed == 0 {
            return Err(ScError::ZeroLfsrState);
        }
        if seed >> width != 0 {
            return Err(ScError::BadLfsr(format!("seed {seed:#x} wider than {width} bits")));
        }
        let cfg = Self { width, taps, seed };
        if maximal_taps(width) != Some(cfg.taps.as_slice()) && cfg.period() != (1 << width) - 1 {
            return Err(ScError::BadLfsr(format!("taps {:?} are not maximal-length for width {width}", cfg.taps)));
        }
        Ok(cfg)
    }

    /// Built-in maximal taps for `width` with the seed masked to the width.
    pub fn standard(width: u32, seed: u64) -> Result<Self> {
        let taps =
            maximal_taps(width).ok_or_else(|| ScError::BadLfsr(format!("no built-in taps for width {width}")))?;
        Self::new(width, taps.to_vec(), seed & ((1 << width) - 1))
    }

    /// The default generator pair for B-bit operands (seeds 0x01 and 0x5A).
    pub fn default_pair(width: u32) -> Result<(Self, Self)> {
        Ok((Self::standard(width, DEFAULT_SEED_X)?, Self::standard(width, DEFAULT_SEED_Y)?))
    }

    fn tap_mask(&self) -> u64 {
        self.taps.iter().fold(0, |m, &t| m | 1 << (self.width - t))
    }

    /// `n` consecutive states starting at the seed.
    pub fn states(&self, n: usize) -> Vec<u64> {
        let mask = self.tap_mask();
        let mut s = self.seed;
        (0..n)
            .map(|_| {
                let cur = s;
                s = step_masked(s, mask, self.width);
                cur
            })
            .collect()
    }

    fn period(&self) -> u64 {
        let mask = self.tap_mask();
        let mut s = step_masked(self.seed, mask, self.width);
        let mut n = 1;
        while s != self.seed && n <= 1 << self.width {
            s = step_masked(s, mask, self.width);
            n += 1;
        }
        n
    }
}

#[inline]
fn step_masked(state: u64, tap_mask: u64, width: u32) -> u64 {
    let fb = u64::from((state & tap_mask).count_ones() & 1);
    (state >> 1) | (fb << (width - 1))
}

/// One LFSR shift: the feedback is the XOR of the tapped bits.
pub fn lfsr_step(state: u64, cfg: &LfsrConfig) -> Result<u64> {
    if state == 0 {
        return Err(ScError::ZeroLfsrState);
    }
    Ok(step_masked(state, cfg.tap_mask(), cfg.width))
}

/// Comparator SNG: bit `p` is set iff `states[p-1] < operand`.
pub fn sng_compare(states: &[u64], operand: &BinaryOperand) -> Result<Bitstream> {
    let v = operand.value();
    Bitstream::from_bits(states.iter().map(|&s| s < v))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn op(v: u64, b: u32) -> BinaryOperand {
        BinaryOperand::new(v, b).unwrap()
    }

    /// Gate-level reading of the encoder, one position at a time.
    fn encode_gates(y: &BinaryOperand) -> Bitstream {
        let b = y.width();
        let m = y.msb();
        let t = tcu_decode(y.value() % (1 << (b - 1)), b - 1).unwrap();
        let t_at = |i: usize| i >= 1 && t.get(i);
        Bitstream::from_fn(y.stream_len(), |p| {
            let i = p.div_ceil(2);
            if p % 2 == 0 {
                m || t_at(i)
            } else {
                m && t_at(i - 1)
            }
        })
        .unwrap()
    }

    #[test]
    fn tcu_examples() {
        assert_eq!(tcu_decode(4, 3).unwrap().render(), "00001111");
        assert_eq!(tcu_decode(0, 3).unwrap().render(), "00000000");
        assert_eq!(tcu_decode(5, 3).unwrap().render(), "00011111");
        assert_eq!(tcu_decode(3, 2).unwrap().render(), "0111");
        assert_eq!(tcu_decode(8, 3), Err(ScError::OutOfRange { value: 8, width: 3 }));
        assert_eq!(tcu_decode(0, 0), Err(ScError::BadWidth(0)));
    }

    #[test]
    fn correlation_table_rows() {
        assert_eq!(correlation_encode(&op(6, 3)).unwrap().render(), "10111110");
        assert_eq!(correlation_encode(&op(3, 3)).unwrap().render(), "00101010");
        assert_eq!(correlation_encode(&op(4, 3)).unwrap().render(), "10101010");
        assert_eq!(correlation_encode(&op(0, 3)).unwrap().render(), "00000000");
        assert_eq!(correlation_encode(&op(1, 1)), Err(ScError::EncoderWidth(1)));
    }

    #[test]
    fn word_packed_encoder_matches_gate_level() {
        for b in 2..=10 {
            for v in 0..1u64 << b {
                let y = op(v, b);
                let fast = correlation_encode(&y).unwrap();
                assert_eq!(fast, encode_gates(&y), "y={v} B={b}");
                assert!(!fast.get(1));
            }
        }
    }

    #[test]
    fn lfsr_single_step() {
        // 0x01: tapped bits at shifts 0,2,3,4 -> feedback 1, shifted in at bit 7
        let cfg = LfsrConfig::standard(8, 1).unwrap();
        assert_eq!(lfsr_step(0x01, &cfg).unwrap(), 0x80);
        assert_eq!(lfsr_step(0x80, &cfg).unwrap(), 0x40);
        assert_eq!(lfsr_step(0, &cfg), Err(ScError::ZeroLfsrState));
    }

    #[test]
    fn lfsr_width3_visits_all_states() {
        let cfg = LfsrConfig::new(3, vec![3, 2], 0b001).unwrap();
        let mut seen: Vec<u64> = cfg.states(7);
        seen.sort_unstable();
        assert_eq!(seen, (1..8).collect::<Vec<_>>());
        assert_eq!(cfg.states(8)[7], 0b001);
    }

    #[test]
    fn lfsr_period_255_from_any_seed() {
        for seed in 1..256 {
            let cfg = LfsrConfig::standard(8, seed).unwrap();
            let mut s = seed;
            for _ in 0..255 {
                s = lfsr_step(s, &cfg).unwrap();
            }
            assert_eq!(s, seed);
        }
    }

    #[test]
    fn builtin_taps_are_maximal() {
        for w in 2..=MAX_WIDTH {
            let cfg = LfsrConfig::standard(w, 1).unwrap();
            assert_eq!(cfg.period(), (1 << w) - 1, "width {w}");
        }
    }

    #[test]
    fn lfsr_validation() {
        assert_eq!(LfsrConfig::new(8, vec![8, 6, 5, 4], 0), Err(ScError::ZeroLfsrState));
        assert!(matches!(LfsrConfig::new(8, vec![8, 7], 1), Err(ScError::BadLfsr(_))));
        assert!(matches!(LfsrConfig::new(8, vec![6, 5], 1), Err(ScError::BadLfsr(_))));
        assert!(matches!(LfsrConfig::new(8, vec![8, 6, 5, 4], 0x100), Err(ScError::BadLfsr(_))));
        // a maximal polynomial missing from the table is found by the period walk
        assert!(LfsrConfig::new(8, vec![8, 7, 6, 1], 1).is_ok());
        let sorted = LfsrConfig::new(8, vec![4, 5, 6, 8], 3).unwrap();
        assert_eq!(sorted.taps, vec![8, 6, 5, 4]);
    }

    #[test]
    fn seed_hex_roundtrip() {
        let cfg = LfsrConfig::standard(8, 0x5A).unwrap();
        let json = serde_json::to_string(&cfg).unwrap();
        assert_eq!(json, r#"{"width":8,"taps":[8,6,5,4],"seed":"0x5A"}"#);
        let back: LfsrConfig = serde_json::from_str(&json).unwrap();
        assert_eq!(back, cfg);
        let dec: LfsrConfig = serde_json::from_str(r#"{"width":8,"taps":[8,6,5,4],"seed":90}"#).unwrap();
        assert_eq!(dec.seed, 0x5A);
        assert_eq!(parse_seed("0x01"), Ok(1));
        assert!(parse_seed("zz").is_err());
    }

    #[test]
    fn sng_examples() {
        let cfg = LfsrConfig::standard(8, 1).unwrap();
        let states = cfg.states(256);
        assert_eq!(sng_compare(&states, &op(0, 8)).unwrap().popcount(), 0);
        // one full period covers 1..=255 once, plus the repeated seed (1 < 255)
        let expected = states.iter().filter(|&&s| s < 255).count() as u64;
        assert_eq!(expected, 254 + 1);
        assert_eq!(sng_compare(&states, &op(255, 8)).unwrap().popcount(), expected);
    }

    #[test]
    fn bit_reversal_examples() {
        assert_eq!(bit_reversal_index(1, 3), Ok(4));
        assert_eq!(bit_reversal_index(6, 3), Ok(3));
        assert_eq!(bit_reversal_index(0, 11), Ok(0));
        assert_eq!(bit_reversal_index(8, 3), Err(ScError::OutOfRange { value: 8, width: 3 }));
    }

    #[test]
    fn bit_reversal_involution() {
        for b in 1..=12 {
            for t in 0..1u64 << b {
                let r = bit_reversal_index(t, b).unwrap();
                assert_eq!(bit_reversal_index(r, b).unwrap(), t);
            }
        }
    }
}
