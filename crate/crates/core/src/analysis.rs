//! Operand-pair sweeps and the error statistics computed over them.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Result, ScError};
use crate::multiplier::{Multiplier, MultiplierKind};
use crate::scnum::{BinaryOperand, Ratio, UnipolarValue};

/// Largest exhaustive sweep allowed by default: every pair at B = 8.
pub const DEFAULT_PAIR_CAP: u64 = 1 << 16;

/// Error record for one ordered operand pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairRecord {
    pub x: u64,
    pub y: u64,
    pub width: u32,
    pub observed: UnipolarValue,
    pub target: UnipolarValue,
    pub abs_error: UnipolarValue,
    /// |x − y| / 2^B.
    pub norm_diff: Ratio,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parallelism {
    Serial,
    Parallel,
}

fn record(m: &Multiplier, x: u64, y: u64) -> Result<PairRecord> {
    let b = m.width();
    let r = m.multiply(&BinaryOperand::new(x, b)?, &BinaryOperand::new(y, b)?)?;
    Ok(PairRecord {
        x,
        y,
        width: b,
        observed: r.observed,
        target: r.target,
        abs_error: r.abs_error,
        norm_diff: Ratio::new(u128::from(x.abs_diff(y)), 1u128 << b),
    })
}

/// Every ordered pair `(x, y)` in `[0, 2^B)²`, ordered by x then y.
pub fn exhaustive_sweep(kind: &MultiplierKind, width: u32) -> Result<Vec<PairRecord>> {
    exhaustive_sweep_with(kind, width, DEFAULT_PAIR_CAP, Parallelism::Parallel)
}

pub fn exhaustive_sweep_with(
    kind: &MultiplierKind,
    width: u32,
    cap: u64,
    parallelism: Parallelism,
) -> Result<Vec<PairRecord>> {
    let pairs = 1u64.checked_shl(2 * width).unwrap_or(u64::MAX);
    if pairs > cap {
        return Err(ScError::SweepTooLarge { width, pairs, cap });
    }
    let m = Multiplier::new(kind.clone(), width)?;
    let n = 1u64 << width;
    let row = |x: u64| (0..n).map(|y| record(&m, x, y)).collect::<Result<Vec<_>>>();
    let rows: Vec<Vec<PairRecord>> = match parallelism {
        Parallelism::Serial => (0..n).map(row).collect::<Result<_>>()?,
        Parallelism::Parallel => (0..n).into_par_iter().map(row).collect::<Result<_>>()?,
    };
    Ok(rows.into_iter().flatten().collect())
}

/// `count` uniformly drawn ordered pairs from a seeded ChaCha8 stream, in
/// draw order. Works for any width up to 16.
pub fn sampled_sweep(
    kind: &MultiplierKind,
    width: u32,
    count: usize,
    seed: u64,
    parallelism: Parallelism,
) -> Result<Vec<PairRecord>> {
    let m = Multiplier::new(kind.clone(), width)?;
    let n = 1u64 << width;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs: Vec<(u64, u64)> = (0..count).map(|_| (rng.gen_range(0..n), rng.gen_range(0..n))).collect();
    match parallelism {
        Parallelism::Serial => pairs.iter().map(|&(x, y)| record(&m, x, y)).collect(),
        Parallelism::Parallel => pairs.par_iter().map(|&(x, y)| record(&m, x, y)).collect(),
    }
}

/// Aggregate error statistics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ErrorStats {
    pub mae: Ratio,
    pub max_error: UnipolarValue,
    pub count: usize,
}

impl ErrorStats {
    pub fn mae_decimal(&self) -> String {
        self.mae.to_decimal(6)
    }
}

/// Exact mean absolute error. The sum is exact, so the result does not
/// depend on record order.
pub fn mae(records: &[PairRecord]) -> Result<ErrorStats> {
    if records.is_empty() {
        return Err(ScError::TooFewRecords("mae", 1));
    }
    let sum: Ratio = records.iter().map(|r| Ratio::from(r.abs_error)).sum();
    let max_error = records.iter().map(|r| r.abs_error).max().expect("non-empty");
    Ok(ErrorStats { mae: sum.div_int(records.len() as u128), max_error, count: records.len() })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bucket {
    pub lo: Ratio,
    pub hi: Ratio,
    pub count: usize,
    /// `None` for an empty bucket.
    pub mean: Option<Ratio>,
    pub max: Option<UnipolarValue>,
    /// Nearest-rank 95th percentile.
    pub p95: Option<UnipolarValue>,
}

/// Error distribution over K equal-width norm_diff buckets on `[0, 1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Histogram {
    pub buckets: Vec<Bucket>,
}

impl Histogram {
    pub fn total(&self) -> usize {
        self.buckets.iter().map(|b| b.count).sum()
    }

    /// Max minus min of the non-empty bucket means.
    pub fn mean_spread(&self) -> Option<Ratio> {
        let means = self.buckets.iter().filter_map(|b| b.mean);
        let (lo, hi) = means.fold(None, |acc: Option<(Ratio, Ratio)>, m| match acc {
            None => Some((m, m)),
            Some((lo, hi)) => Some((lo.min(m), hi.max(m))),
        })?;
        Some(hi.abs_diff(lo))
    }
}

/// Index of the left-closed, right-open bucket holding `norm_diff`.
pub fn bucket_index(norm_diff: Ratio, k: usize) -> usize {
    ((norm_diff.numer() * k as u128) / norm_diff.denom()).min(k as u128 - 1) as usize
}

pub fn diff_histogram(records: &[PairRecord], k: usize) -> Result<Histogram> {
    if k == 0 {
        return Err(ScError::ZeroBuckets);
    }
    let mut groups: Vec<Vec<UnipolarValue>> = vec![Vec::new(); k];
    for r in records {
        groups[bucket_index(r.norm_diff, k)].push(r.abs_error);
    }
    let buckets = groups
        .into_iter()
        .enumerate()
        .map(|(i, mut errs)| {
            errs.sort();
            let count = errs.len();
            let (mean, max, p95) = if count == 0 {
                (None, None, None)
            } else {
                let sum: Ratio = errs.iter().map(|&e| Ratio::from(e)).sum();
                let rank = (95 * count).div_ceil(100);
                (Some(sum.div_int(count as u128)), errs.last().copied(), Some(errs[rank - 1]))
            };
            Bucket {
                lo: Ratio::new(i as u128, k as u128),
                hi: Ratio::new(i as u128 + 1, k as u128),
                count,
                mean,
                max,
                p95,
            }
        })
        .collect();
    Ok(Histogram { buckets })
}

/// Pearson correlation between norm_diff and abs_error. `Ok(None)` when
/// either variable has zero variance.
pub fn diff_dependence(records: &[PairRecord]) -> Result<Option<f64>> {
    if records.len() < 2 {
        return Err(ScError::TooFewRecords("diff_dependence", 2));
    }
    let n = records.len() as f64;
    let xs: Vec<f64> = records.iter().map(|r| r.norm_diff.to_f64()).collect();
    let ys: Vec<f64> = records.iter().map(|r| r.abs_error.to_f64()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(&ys) {
        let (dx, dy) = (x - mx, y - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Ok(None);
    }
    Ok(Some((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0)))
}
