//! The proposed bit-parallel multiplier and three serial baselines.
//!
//! The baselines are reconstructions of the standard designs (LFSR
//! comparators for Gaines, clock division for Jenson, temporal against
//! bit-reversed rate coding for uMUL). They are not cycle-accurate copies of
//! any published netlist.

use std::fmt;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::encoder::{bit_reversal_index, correlation_encode, sng_compare, tcu_decode, LfsrConfig};
use crate::error::{Result, ScError};
use crate::scnum::{bitwise_and, check_widths, exact_product, BinaryOperand, Bitstream, MultiplyResult};

/// Which multiplier to run, with its per-design parameters.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "design", rename_all = "lowercase")]
pub enum MultiplierKind {
    Proposed,
    Gaines { x_gen: LfsrConfig, y_gen: LfsrConfig },
    Jenson { truncate: Option<u64> },
    Umul,
}

impl MultiplierKind {
    /// Gaines with the default generator pair for `width`-bit operands.
    pub fn gaines_default(width: u32) -> Result<Self> {
        let (x_gen, y_gen) = LfsrConfig::default_pair(width)?;
        Ok(Self::Gaines { x_gen, y_gen })
    }

    /// All four designs with default parameters.
    pub fn all_default(width: u32) -> Result<Vec<Self>> {
        Ok(vec![Self::Proposed, Self::gaines_default(width)?, Self::Jenson { truncate: None }, Self::Umul])
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Proposed => "proposed",
            Self::Gaines { .. } => "gaines",
            Self::Jenson { .. } => "jenson",
            Self::Umul => "umul",
        }
    }

    /// Clock cycles (and output length) for `width`-bit operands.
    pub fn cycles(&self, width: u32) -> u64 {
        match self {
            Self::Proposed => 1,
            Self::Gaines { .. } | Self::Umul => 1 << width,
            Self::Jenson { truncate } => truncate.unwrap_or(1 << (2 * width)),
        }
    }

    pub fn is_baseline(&self) -> bool {
        !matches!(self, Self::Proposed)
    }

    /// Canonical JSON of the kind and its parameters.
    pub fn config_json(&self) -> String {
        serde_json::to_string(self).expect("kind serializes")
    }

    /// First 16 hex digits of the SHA-256 of [`Self::config_json`].
    pub fn config_digest(&self) -> String {
        let d = Sha256::digest(self.config_json().as_bytes());
        hex::encode(&d[..8])
    }

    pub fn validate(&self, width: u32) -> Result<()> {
        match self {
            Self::Proposed if width < 2 => Err(ScError::EncoderWidth(width)),
            Self::Gaines { x_gen, y_gen } => {
                for g in [x_gen, y_gen] {
                    if g.width != width {
                        return Err(ScError::BadLfsr(format!(
                            "generator width {} does not match operand width {width}",
                            g.width
                        )));
                    }
                }
                if x_gen == y_gen {
                    return Err(ScError::CorrelatedGenerators);
                }
                Ok(())
            }
            Self::Jenson { truncate: Some(len) } => {
                let max = 1u64 << (2 * width);
                if *len == 0 || *len > max {
                    return Err(ScError::BadTruncation { len: *len, max });
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for MultiplierKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Proposed => f.write_str("proposed"),
            Self::Gaines { x_gen, y_gen } => write!(
                f,
                "gaines (fibonacci LFSR taps={:?} seed_x=0x{:02X} taps_y={:?} seed_y=0x{:02X})",
                x_gen.taps, x_gen.seed, y_gen.taps, y_gen.seed
            ),
            Self::Jenson { truncate: None } => f.write_str("jenson (clock division, untruncated)"),
            Self::Jenson { truncate: Some(l) } => write!(f, "jenson (clock division, truncated to {l})"),
            Self::Umul => f.write_str("umul (temporal x bit-reversal)"),
        }
    }
}

/// Fidelity note attached to baseline reports.
pub fn fidelity_note(kind: &MultiplierKind) -> Option<&'static str> {
    match kind {
        MultiplierKind::Proposed => None,
        MultiplierKind::Gaines { .. } => Some("baseline reconstruction: LFSR comparator SNGs feeding an AND gate"),
        MultiplierKind::Jenson { .. } => Some("baseline reconstruction: deterministic clock-division streams"),
        MultiplierKind::Umul => Some("baseline reconstruction: temporal X against bit-reversed Y, approximate uMUL"),
    }
}

/// A multiplier bound to an operand width, with generator state precomputed.
#[derive(Debug, Clone)]
pub struct Multiplier {
    kind: MultiplierKind,
    width: u32,
    prepared: Prepared,
}

#[derive(Debug, Clone)]
enum Prepared {
    None,
    Gaines { x_states: Vec<u64>, y_states: Vec<u64> },
    Umul { reversed: Vec<u64> },
}

impl Multiplier {
    pub fn new(kind: MultiplierKind, width: u32) -> Result<Self> {
        BinaryOperand::new(0, width)?;
        kind.validate(width)?;
        let n = 1usize << width;
        let prepared = match &kind {
            MultiplierKind::Gaines { x_gen, y_gen } => {
                Prepared::Gaines { x_states: x_gen.states(n), y_states: y_gen.states(n) }
            }
            MultiplierKind::Umul => {
                Prepared::Umul { reversed: (0..n as u64).map(|t| bit_reversal_index(t, width)).collect::<Result<_>>()? }
            }
            _ => Prepared::None,
        };
        Ok(Self { kind, width, prepared })
    }

    pub fn kind(&self) -> &MultiplierKind {
        &self.kind
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    /// The two streams fed to the output AND gate, in cycle/position order.
    pub fn operand_streams(&self, x: &BinaryOperand, y: &BinaryOperand) -> Result<(Bitstream, Bitstream)> {
        let b = check_widths(x, y)?;
        if b != self.width {
            return Err(ScError::WidthMismatch { left: b, right: self.width });
        }
        let n = x.stream_len();
        match (&self.kind, &self.prepared) {
            (MultiplierKind::Proposed, _) => Ok((tcu_decode(x.value(), b)?, correlation_encode(y)?)),
            (MultiplierKind::Gaines { .. }, Prepared::Gaines { x_states, y_states }) => {
                Ok((sng_compare(x_states, x)?, sng_compare(y_states, y)?))
            }
            (MultiplierKind::Jenson { .. }, _) => {
                let len = self.kind.cycles(b) as usize;
                let (xv, yv) = (x.value() as usize, y.value() as usize);
                Ok((Bitstream::from_fn(len, |p| (p - 1) % n < xv)?, Bitstream::from_fn(len, |p| (p - 1) / n < yv)?))
            }
            (MultiplierKind::Umul, Prepared::Umul { reversed }) => Ok((
                Bitstream::trailing_ones(n, x.value() as usize)?,
                Bitstream::from_fn(n, |p| reversed[p - 1] < y.value())?,
            )),
            _ => unreachable!("preparation matches kind"),
        }
    }

    pub fn multiply(&self, x: &BinaryOperand, y: &BinaryOperand) -> Result<MultiplyResult> {
        let b = check_widths(x, y)?;
        if b != self.width {
            return Err(ScError::WidthMismatch { left: b, right: self.width });
        }
        match (&self.kind, &self.prepared) {
            (MultiplierKind::Proposed, _) => multiply_proposed(x, y),
            (MultiplierKind::Gaines { .. }, Prepared::Gaines { x_states, y_states }) => {
                let out = bitwise_and(&sng_compare(x_states, x)?, &sng_compare(y_states, y)?)?;
                Ok(MultiplyResult::from_output(out, exact_product(x, y)?, x_states.len() as u64))
            }
            (MultiplierKind::Jenson { truncate }, _) => multiply_jenson(x, y, *truncate),
            (MultiplierKind::Umul, Prepared::Umul { reversed }) => umul_with(x, y, reversed),
            _ => unreachable!("preparation matches kind"),
        }
    }
}

/// Thermometer-coded X ANDed with the correlation-encoded Y, in one cycle.
pub fn multiply_proposed(x: &BinaryOperand, y: &BinaryOperand) -> Result<MultiplyResult> {
    let b = check_widths(x, y)?;
    let xu = tcu_decode(x.value(), b)?;
    let yu = correlation_encode(y)?;
    let out = bitwise_and(&xu, &yu)?;
    Ok(MultiplyResult::from_output(out, exact_product(x, y)?, 1))
}

/// Gaines-style multiplier: two comparator SNGs over 2^B cycles.
pub fn multiply_gaines(
    x: &BinaryOperand,
    y: &BinaryOperand,
    x_gen: &LfsrConfig,
    y_gen: &LfsrConfig,
) -> Result<MultiplyResult> {
    let b = check_widths(x, y)?;
    Multiplier::new(MultiplierKind::Gaines { x_gen: x_gen.clone(), y_gen: y_gen.clone() }, b)?.multiply(x, y)
}

/// Clock-division multiplier: at cycle t, A = [t mod 2^B < x] and
/// B = [t / 2^B < y]. Untruncated it runs 2^(2B) cycles and is exact.
pub fn multiply_jenson(x: &BinaryOperand, y: &BinaryOperand, truncate: Option<u64>) -> Result<MultiplyResult> {
    let b = check_widths(x, y)?;
    let kind = MultiplierKind::Jenson { truncate };
    kind.validate(b)?;
    let len = kind.cycles(b) as usize;
    let n = x.stream_len();
    let mut out = Bitstream::zeros(len)?;
    let blocks = (y.value() as usize).min(len.div_ceil(n));
    for j in 0..blocks {
        let first = j * n + 1;
        let count = (x.value() as usize).min(len - j * n);
        if count > 0 {
            out.set_range(first, count);
        }
    }
    Ok(MultiplyResult::from_output(out, exact_product(x, y)?, len as u64))
}

/// uMUL-style multiplier over 2^B cycles: A = [t < x], B = [rev(t) < y].
pub fn multiply_umul(x: &BinaryOperand, y: &BinaryOperand) -> Result<MultiplyResult> {
    let b = check_widths(x, y)?;
    Multiplier::new(MultiplierKind::Umul, b)?.multiply(x, y)
}

fn umul_with(x: &BinaryOperand, y: &BinaryOperand, reversed: &[u64]) -> Result<MultiplyResult> {
    let n = reversed.len();
    let xu = Bitstream::trailing_ones(n, x.value() as usize)?;
    let yv = y.value();
    let yu = Bitstream::from_fn(n, |p| reversed[p - 1] < yv)?;
    let out = bitwise_and(&xu, &yu)?;
    Ok(MultiplyResult::from_output(out, exact_product(x, y)?, n as u64))
}
