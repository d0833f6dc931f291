//! CSV emitters for sweep, histogram and cost results.
//!
//! Each file starts with `#` comment lines echoing the configuration and its
//! digest, followed by the column header. Decimals carry six fractional
//! digits and never depend on locale.

use std::io::{self, Write};

use crate::analysis::{ErrorStats, Histogram, PairRecord};
use crate::costmodel::{Comparison, GateLibrary};
use crate::multiplier::{fidelity_note, MultiplierKind};
use crate::scnum::Ratio;

pub const PAIRS_HEADER: &str =
    "design,B,x,y,observed_num,observed_den,target_num,target_den,abs_err_num,abs_err_den,norm_diff";
pub const MAE_HEADER: &str = "design,B,mae_decimal,mae_num,mae_den,max_err_decimal,config_digest";
pub const HIST_HEADER: &str = "design,B,bucket_lo,bucket_hi,count,mean_abs_err,max_abs_err,p95_abs_err";
pub const COST_HEADER: &str =
    "design,B,cycles,area_um2,latency_ns,energy_pj,el_pj_s,ael_pj_s_mm2,ael_ratio_vs_proposed,library_digest";

/// `# config ...` lines for one design.
pub fn write_config_comment<W: Write>(w: &mut W, kind: &MultiplierKind, width: u32) -> io::Result<()> {
    writeln!(w, "# config {} B={width} digest={}", kind.config_json(), kind.config_digest())?;
    if let Some(note) = fidelity_note(kind) {
        writeln!(w, "# note {}: {note}", kind.name())?;
    }
    Ok(())
}

pub fn write_pairs_rows<W: Write>(w: &mut W, kind: &MultiplierKind, records: &[PairRecord]) -> io::Result<()> {
    for r in records {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{},{},{}",
            kind.name(),
            r.width,
            r.x,
            r.y,
            r.observed.numer(),
            r.observed.denom(),
            r.target.numer(),
            r.target.denom(),
            r.abs_error.numer(),
            r.abs_error.denom(),
            r.norm_diff.to_decimal(6)
        )?;
    }
    Ok(())
}

pub fn write_mae_row<W: Write>(w: &mut W, kind: &MultiplierKind, width: u32, stats: &ErrorStats) -> io::Result<()> {
    writeln!(
        w,
        "{},{width},{},{},{},{},{}",
        kind.name(),
        stats.mae.to_decimal(6),
        stats.mae.numer(),
        stats.mae.denom(),
        stats.max_error.to_decimal(6),
        kind.config_digest()
    )
}

fn opt_decimal(v: Option<Ratio>) -> String {
    v.map(|r| r.to_decimal(6)).unwrap_or_default()
}

/// One row per bucket; statistics of empty buckets are left blank.
pub fn write_hist_rows<W: Write>(w: &mut W, kind: &MultiplierKind, width: u32, hist: &Histogram) -> io::Result<()> {
    for b in &hist.buckets {
        writeln!(
            w,
            "{},{width},{},{},{},{},{},{}",
            kind.name(),
            b.lo.to_decimal(6),
            b.hi.to_decimal(6),
            b.count,
            opt_decimal(b.mean),
            opt_decimal(b.max.map(Ratio::from)),
            opt_decimal(b.p95.map(Ratio::from)),
        )?;
    }
    Ok(())
}

fn sci(v: f64) -> String {
    format!("{v:.6e}")
}

pub fn write_cost_csv<W: Write>(w: &mut W, cmp: &Comparison, lib: &GateLibrary, naive: bool) -> io::Result<()> {
    writeln!(
        w,
        "# gate_library digest={} clock_period_ns={} activity_factor={} naive_counts={naive}",
        lib.digest(),
        lib.clock_period_ns,
        lib.activity_factor
    )?;
    writeln!(w, "# reference {}", cmp.reference)?;
    writeln!(w, "{COST_HEADER}")?;
    for row in &cmp.rows {
        let r = &row.report;
        writeln!(
            w,
            "{},{},{},{:.6},{:.6},{},{},{},{},{}",
            r.design,
            r.width,
            r.cycles,
            r.area_um2,
            r.latency_ns,
            sci(r.energy_pj()),
            sci(r.el_pj_s),
            sci(r.ael_pj_s_mm2),
            sci(row.ael_ratio),
            r.library_digest
        )?;
    }
    Ok(())
}
