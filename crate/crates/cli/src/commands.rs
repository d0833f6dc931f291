use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{ensure, Context, Result};

use scmul_core::analysis::{exhaustive_sweep_with, DEFAULT_PAIR_CAP};
use scmul_core::costmodel::{Comparison, ComparisonRow};
use scmul_core::multiplier::fidelity_note;
use scmul_core::report::{
    write_config_comment, write_cost_csv, write_hist_rows, write_mae_row, write_pairs_rows, HIST_HEADER, MAE_HEADER,
    PAIRS_HEADER,
};
use scmul_core::scnum::Ratio;
use scmul_core::{
    comparison_table, cost_of, diff_dependence, diff_histogram, mae, sampled_sweep, BinaryOperand, Bitstream,
    Multiplier, MultiplierKind, PairRecord, Parallelism,
};

use crate::config::RunConfig;

const MAX_PRINTED_STREAM: usize = 256;

fn show_stream(bs: &Bitstream) -> String {
    if bs.len() <= MAX_PRINTED_STREAM {
        bs.render()
    } else {
        format!("<{} bits, {} ones>", bs.len(), bs.popcount())
    }
}

pub fn cmd_mul(cfg: &RunConfig, x: u64, y: u64, out: &mut impl Write) -> Result<()> {
    let bx = BinaryOperand::new(x, cfg.width).with_context(|| format!("operand x={x}"))?;
    let by = BinaryOperand::new(y, cfg.width).with_context(|| format!("operand y={y}"))?;
    for kind in cfg.kinds() {
        let m = Multiplier::new(kind.clone(), cfg.width)?;
        let (xs, ys) = m.operand_streams(&bx, &by)?;
        let r = m.multiply(&bx, &by)?;
        ensure!(r.observed == r.output.value(), "observed value disagrees with output stream");
        writeln!(out, "design    {kind}")?;
        if let Some(note) = fidelity_note(&kind) {
            writeln!(out, "note      {note}")?;
        }
        writeln!(out, "B         {}", cfg.width)?;
        writeln!(out, "X_u       {}  ({}/{})", show_stream(&xs), xs.popcount(), xs.len())?;
        writeln!(out, "Y_u       {}  ({}/{})", show_stream(&ys), ys.popcount(), ys.len())?;
        writeln!(out, "O_u       {}", show_stream(&r.output))?;
        writeln!(out, "observed  {} = {}", r.observed, r.observed.to_decimal(6))?;
        writeln!(out, "target    {} = {}", r.target, r.target.to_decimal(6))?;
        writeln!(
            out,
            "abs_error {} = {} (truncated {})",
            r.abs_error,
            r.abs_error.to_decimal(6),
            r.abs_error.truncated_decimal(2)
        )?;
        writeln!(out, "cycles    {}", r.cycles)?;
        writeln!(out)?;
    }
    Ok(())
}

fn sweep(cfg: &RunConfig, kind: &MultiplierKind) -> Result<Vec<PairRecord>> {
    cfg.check_sweep_mode()?;
    let records = match cfg.sample {
        Some(n) => sampled_sweep(kind, cfg.width, n, cfg.seed, Parallelism::Parallel)?,
        None => exhaustive_sweep_with(kind, cfg.width, DEFAULT_PAIR_CAP, Parallelism::Parallel)?,
    };
    for r in &records {
        ensure!(r.abs_error.to_f64() <= 1.0 && r.observed.numer() <= r.observed.denom(), "record out of range");
    }
    Ok(records)
}

fn create(dir: &Path, name: &str) -> Result<(PathBuf, BufWriter<File>)> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let path = dir.join(name);
    let file = File::create(&path).with_context(|| format!("creating {}", path.display()))?;
    Ok((path, BufWriter::new(file)))
}

fn write_comments(w: &mut impl Write, cfg: &RunConfig, kinds: &[MultiplierKind]) -> Result<()> {
    writeln!(w, "{}", cfg.sweep_comment())?;
    for kind in kinds {
        write_config_comment(w, kind, cfg.width)?;
    }
    Ok(())
}

pub fn cmd_sweep(cfg: &RunConfig, out: &mut impl Write) -> Result<()> {
    cfg.check_sweep_mode()?;
    let kinds = cfg.kinds();
    let (pairs_path, mut pairs) = create(&cfg.out, "pairs.csv")?;
    let (mae_path, mut maes) = create(&cfg.out, "mae.csv")?;
    for w in [&mut pairs, &mut maes] {
        write_comments(w, cfg, &kinds)?;
    }
    writeln!(pairs, "{PAIRS_HEADER}")?;
    writeln!(maes, "{MAE_HEADER}")?;

    writeln!(
        out,
        "{:<9} {:>6} {:>10} {:>5} {:>10} {:>8}  mae (exact)",
        "design", "pairs", "mae", "2dp", "max_err", "cycles"
    )?;
    for kind in &kinds {
        let records = sweep(cfg, kind)?;
        let stats = mae(&records)?;
        ensure!(stats.mae <= Ratio::from(stats.max_error), "mae exceeds max error");
        write_pairs_rows(&mut pairs, kind, &records)?;
        write_mae_row(&mut maes, kind, cfg.width, &stats)?;
        writeln!(
            out,
            "{:<9} {:>6} {:>10} {:>5} {:>10} {:>8}  {}",
            kind.name(),
            stats.count,
            stats.mae.to_decimal(6),
            stats.mae.to_decimal(2),
            stats.max_error.to_decimal(6),
            kind.cycles(cfg.width),
            stats.mae
        )?;
    }
    pairs.flush()?;
    maes.flush()?;
    writeln!(out, "wrote {} and {}", pairs_path.display(), mae_path.display())?;
    Ok(())
}

pub fn cmd_hist(cfg: &RunConfig, out: &mut impl Write) -> Result<()> {
    cfg.check_sweep_mode()?;
    let kinds = cfg.kinds();
    let (path, mut hist) = create(&cfg.out, "hist.csv")?;
    write_comments(&mut hist, cfg, &kinds)?;
    writeln!(hist, "# buckets={}", cfg.buckets)?;
    writeln!(hist, "{HIST_HEADER}")?;

    writeln!(out, "{:<9} {:>10} {:>12} {:>12}", "design", "pearson_r", "mean_spread", "mae")?;
    for kind in &kinds {
        let records = sweep(cfg, kind)?;
        let h = diff_histogram(&records, cfg.buckets)?;
        ensure!(h.total() == records.len(), "histogram lost records");
        write_hist_rows(&mut hist, kind, cfg.width, &h)?;
        let r = match diff_dependence(&records)? {
            Some(r) => format!("{r:.6}"),
            None => "undefined".to_string(),
        };
        let spread = h.mean_spread().map(|s| s.to_decimal(6)).unwrap_or_default();
        writeln!(out, "{:<9} {:>10} {:>12} {:>12}", kind.name(), r, spread, mae(&records)?.mae_decimal())?;
    }
    hist.flush()?;
    writeln!(out, "wrote {}", path.display())?;
    Ok(())
}

pub fn cmd_cost(cfg: &RunConfig, naive: bool, out: &mut impl Write) -> Result<()> {
    let mut kinds = cfg.kinds();
    if !kinds.contains(&MultiplierKind::Proposed) {
        kinds.insert(0, MultiplierKind::Proposed);
    }
    let reports =
        kinds.iter().map(|k| cost_of(k, cfg.width, &cfg.gate_lib, naive)).collect::<scmul_core::Result<Vec<_>>>()?;
    let cmp = if reports.len() >= 2 {
        comparison_table(&reports)?
    } else {
        Comparison {
            reference: reports[0].design.clone(),
            rows: vec![ComparisonRow { report: reports[0].clone(), ael_ratio: 1.0, latency_ratio: 1.0 }],
        }
    };
    let (path, mut csv) = create(&cfg.out, "cost.csv")?;
    write_cost_csv(&mut csv, &cmp, &cfg.gate_lib, naive)?;
    csv.flush()?;

    writeln!(
        out,
        "gate library {}  clock {} ns  activity {}",
        cfg.gate_lib.digest(),
        cfg.gate_lib.clock_period_ns,
        cfg.gate_lib.activity_factor
    )?;
    writeln!(
        out,
        "{:<9} {:>8} {:>12} {:>12} {:>12} {:>12} {:>12} {:>12}",
        "design", "cycles", "A (um2)", "L (ns)", "E (pJ)", "ExL (pJ.s)", "AxExL", "AxExL ratio"
    )?;
    for row in &cmp.rows {
        let r = &row.report;
        writeln!(
            out,
            "{:<9} {:>8} {:>12.3} {:>12.3} {:>12.4e} {:>12.4e} {:>12.4e} {:>12.4e}",
            r.design,
            r.cycles,
            r.area_um2,
            r.latency_ns,
            r.energy_pj(),
            r.el_pj_s,
            r.ael_pj_s_mm2,
            row.ael_ratio
        )?;
    }
    writeln!(out, "wrote {}", path.display())?;
    Ok(())
}
