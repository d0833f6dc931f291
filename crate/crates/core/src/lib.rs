//! Unipolar stochastic-computing multipliers, simulated bit for bit.
//!
//! The central design is a single-cycle multiplier: the X operand is
//! thermometer coded, the Y operand goes through a bit-position correlation
//! encoder, and the two streams are ANDed. Three serial baselines (Gaines,
//! Jenson, uMUL-style) share the same interface so that exhaustive error
//! sweeps and the structural cost model can compare all four.
//!
//! ```
//! use scmul_core::{multiply_proposed, BinaryOperand};
//!
//! let x = BinaryOperand::new(4, 3).unwrap();
//! let y = BinaryOperand::new(6, 3).unwrap();
//! let r = multiply_proposed(&x, &y).unwrap();
//! assert_eq!(r.output.render(), "00001110");
//! assert!(r.abs_error.is_zero());
//! ```

pub mod analysis;
pub mod costmodel;
pub mod encoder;
pub mod error;
pub mod multiplier;
pub mod report;
pub mod scnum;

pub use analysis::{
    diff_dependence, diff_histogram, exhaustive_sweep, exhaustive_sweep_with, mae, sampled_sweep, ErrorStats,
    Histogram, PairRecord, Parallelism,
};
pub use costmodel::{
    comparison_table, cost_of, evaluate_cost, structural_counts, CostReport, GateCounts, GateLibrary, GateType,
};
pub use encoder::{bit_reversal_index, correlation_encode, lfsr_step, sng_compare, tcu_decode, LfsrConfig};
pub use error::{Result, ScError};
pub use multiplier::{multiply_gaines, multiply_jenson, multiply_proposed, multiply_umul, Multiplier, MultiplierKind};
pub use scnum::{
    abs_error, bitwise_and, exact_product, value_of, BinaryOperand, Bitstream, MultiplyResult, Ratio, UnipolarValue,
};
