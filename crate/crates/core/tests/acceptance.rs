//! Exit criteria. Each criterion prints one PASS/FAIL line; soft criteria are
//! reported but do not fail the run.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use scmul_core::analysis::{exhaustive_sweep_with, DEFAULT_PAIR_CAP};
use scmul_core::costmodel::GateType;
use scmul_core::scnum::Ratio;
use scmul_core::{
    comparison_table, correlation_encode, cost_of, diff_dependence, diff_histogram, exhaustive_sweep, mae,
    multiply_jenson, multiply_proposed, structural_counts, tcu_decode, BinaryOperand, Bitstream, GateLibrary,
    LfsrConfig, MultiplierKind, Parallelism, UnipolarValue,
};

const MAE_BAND: (f64, f64) = (0.035, 0.045);
const PREFIX_SPREAD_BOUND: f64 = 0.13;
const AEL_MIN_RATIO: f64 = 1e3;
const GAINES_MAE_BAND: (f64, f64) = (0.02, 0.12);
const JENSON_RANDOM_PAIRS: usize = 1000;

type Check = fn() -> (bool, String);

struct Outcome {
    id: u32,
    name: &'static str,
    soft: bool,
    pass: bool,
    detail: String,
}

fn op(v: u64, b: u32) -> BinaryOperand {
    BinaryOperand::new(v, b).unwrap()
}

fn c1_table_rows() -> (bool, String) {
    let rows = [
        (4, 6, "00001111", "10111110", "00001110", (0, 64)),
        (5, 3, "00011111", "00101010", "00001010", (1, 64)),
        (3, 4, "00000111", "10101010", "00000010", (4, 64)),
    ];
    let mut ok = true;
    let mut detail = Vec::new();
    for (x, y, xs, ys, os, (en, ed)) in rows {
        let r = multiply_proposed(&op(x, 3), &op(y, 3)).unwrap();
        let row_ok = tcu_decode(x, 3).unwrap().render() == xs
            && correlation_encode(&op(y, 3)).unwrap().render() == ys
            && r.output.render() == os
            && r.abs_error == UnipolarValue::new(en, ed).unwrap();
        ok &= row_ok;
        detail.push(format!("({x},{y})->{} err {}", r.output, r.abs_error));
    }
    (ok, detail.join("; "))
}

fn c2_proposed_mae() -> (bool, String) {
    let stats = mae(&exhaustive_sweep(&MultiplierKind::Proposed, 8).unwrap()).unwrap();
    let v = stats.mae.to_f64();
    let ok = stats.count == 65_536 && (MAE_BAND.0..=MAE_BAND.1).contains(&v) && stats.mae.to_decimal(2) == "0.04";
    (ok, format!("mae = {} = {} over {} pairs", stats.mae, stats.mae.to_decimal(6), stats.count))
}

fn c3_jenson_exact() -> (bool, String) {
    let mut checked = 0usize;
    let mut ok = true;
    for b in 1..=5 {
        for r in exhaustive_sweep(&MultiplierKind::Jenson { truncate: None }, b).unwrap() {
            ok &= r.abs_error.is_zero();
            checked += 1;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(2016);
    for _ in 0..JENSON_RANDOM_PAIRS {
        let (x, y) = (rng.gen_range(0..256), rng.gen_range(0..256));
        let r = multiply_jenson(&op(x, 8), &op(y, 8), None).unwrap();
        ok &= r.abs_error.is_zero() && r.output.popcount() == x * y && r.cycles == 65_536;
        checked += 1;
    }
    (ok, format!("{checked} pairs, all zero error: {ok}"))
}

fn c4_latency_structure() -> (bool, String) {
    let lib = GateLibrary::calibrated();
    let kinds = MultiplierKind::all_default(8).unwrap();
    let cycles: Vec<u64> = kinds.iter().map(|k| structural_counts(k, 8, false).unwrap().cycles).collect();
    let lat: Vec<f64> = kinds.iter().map(|k| cost_of(k, 8, &lib, false).unwrap().latency_ns).collect();
    let ok = cycles == [1, 256, 65_536, 256]
        && lib.clock_period_ns == 2.5
        && lat[1] == 640.0
        && lat[3] == 640.0
        && lat[2] == 163_840.0;
    (ok, format!("cycles {cycles:?}, latency ns {lat:?}"))
}

fn c5_cost_ordering() -> (bool, String) {
    let lib = GateLibrary::calibrated();
    let reports: Vec<_> =
        MultiplierKind::all_default(8).unwrap().iter().map(|k| cost_of(k, 8, &lib, false).unwrap()).collect();
    let cmp = comparison_table(&reports).unwrap();
    let ratios: Vec<(String, f64)> = cmp
        .rows
        .iter()
        .filter(|r| r.report.design != "proposed")
        .map(|r| (r.report.design.clone(), r.ael_ratio))
        .collect();
    let ok = cmp.reference == "proposed" && ratios.iter().all(|(_, r)| *r >= AEL_MIN_RATIO);
    let text = ratios.iter().map(|(d, r)| format!("{d} {r:.3e}x")).collect::<Vec<_>>().join(", ");
    (ok, format!("AxExL vs proposed: {text}"))
}

fn c6_difference_dependence() -> (bool, String) {
    let summarize = |kind: &MultiplierKind| {
        let recs = exhaustive_sweep(kind, 8).unwrap();
        let r = diff_dependence(&recs).unwrap().unwrap_or(0.0);
        let spread = diff_histogram(&recs, 16).unwrap().mean_spread().unwrap();
        (r, spread)
    };
    let (rp, sp) = summarize(&MultiplierKind::Proposed);
    let (rg, sg) = summarize(&MultiplierKind::gaines_default(8).unwrap());
    let ok = rp.abs() < rg.abs() && sp <= sg;
    (
        ok,
        format!(
            "|r| proposed {:.4} vs gaines {:.4}; bucket-mean spread proposed {} vs gaines {}",
            rp.abs(),
            rg.abs(),
            sp.to_decimal(6),
            sg.to_decimal(6)
        ),
    )
}

fn c7_property_suites() -> (bool, String) {
    let mut failed = Vec::new();

    let conserve = (2..=8).all(|b| (0..1u64 << b).all(|v| correlation_encode(&op(v, b)).unwrap().popcount() == v));
    if !conserve {
        failed.push("encoder popcount");
    }

    let monotone = (1..=8).all(|k| {
        (0..1u64 << k).all(|v| {
            let bits: Vec<bool> = tcu_decode(v, k).unwrap().iter().collect();
            bits.iter().filter(|&&b| b).count() as u64 == v && bits.windows(2).all(|w| w[0] >= w[1])
        })
    });
    if !monotone {
        failed.push("tcu monotone");
    }

    let n = 256u64;
    let mut worst = 0u64;
    for y in 0..n {
        let yu = correlation_encode(&op(y, 8)).unwrap();
        for x in 0..=n {
            worst = worst.max((yu.prefix_ones(x as usize) * n).abs_diff(x * y));
        }
    }
    let spread = Ratio::new(u128::from(worst), u128::from(n * n));
    if spread.to_f64() > PREFIX_SPREAD_BOUND {
        failed.push("prefix spread");
    }

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let roundtrip = (0..500).all(|_| {
        let len = rng.gen_range(1..=512);
        let bs = Bitstream::from_bits((0..len).map(|_| rng.gen_bool(0.5))).unwrap();
        Bitstream::parse(&bs.render(), len).unwrap() == bs
    });
    if !roundtrip {
        failed.push("render/parse");
    }

    let periods = (3..=10).all(|w| {
        let mut s = LfsrConfig::standard(w, 1).unwrap().states(1 << w);
        let wrapped = s[(1 << w) - 1] == s[0];
        s.truncate((1 << w) - 1);
        s.sort_unstable();
        s.dedup();
        wrapped && s.len() == (1 << w) - 1
    });
    if !periods {
        failed.push("lfsr period");
    }

    let deterministic = MultiplierKind::all_default(6).unwrap().iter().all(|k| {
        exhaustive_sweep_with(k, 6, DEFAULT_PAIR_CAP, Parallelism::Serial).unwrap()
            == exhaustive_sweep_with(k, 6, DEFAULT_PAIR_CAP, Parallelism::Parallel).unwrap()
    });
    if !deterministic {
        failed.push("serial/parallel sweep");
    }

    let recs = exhaustive_sweep(&MultiplierKind::Proposed, 8).unwrap();
    let partition = [1, 7, 16, 100].iter().all(|&k| diff_histogram(&recs, k).unwrap().total() == recs.len());
    if !partition {
        failed.push("histogram partition");
    }

    let ok = failed.is_empty();
    let detail = if ok {
        format!("7 suites green; prefix spread worst = {} = {}", spread, spread.to_decimal(6))
    } else {
        format!("failed: {}", failed.join(", "))
    };
    (ok, detail)
}

fn c8_baseline_mae() -> (bool, String) {
    let m = |k: &MultiplierKind| mae(&exhaustive_sweep(k, 8).unwrap()).unwrap().mae.to_f64();
    let p = m(&MultiplierKind::Proposed);
    let g = m(&MultiplierKind::gaines_default(8).unwrap());
    let u = m(&MultiplierKind::Umul);
    let ok = (GAINES_MAE_BAND.0..=GAINES_MAE_BAND.1).contains(&g) && g > p && u > p;
    (ok, format!("mae proposed {p:.6}, gaines {g:.6}, umul {u:.6}"))
}

#[test]
fn acceptance() {
    let runs: [(u32, &str, bool, Check); 8] = [
        (1, "table I bit-exact reproduction", false, c1_table_rows),
        (2, "proposed MAE at B=8 rounds to 0.04", false, c2_proposed_mae),
        (3, "jenson untruncated is exact", false, c3_jenson_exact),
        (4, "latency-cycle structure", false, c4_latency_structure),
        (5, "AxExL advantage >= 1e3 over serial baselines", false, c5_cost_ordering),
        (6, "error less dependent on operand difference than gaines", true, c6_difference_dependence),
        (7, "property suites", false, c7_property_suites),
        (8, "baseline MAE ordering", true, c8_baseline_mae),
    ];
    let outcomes: Vec<Outcome> = runs
        .iter()
        .map(|&(id, name, soft, f)| {
            let (pass, detail) = f();
            Outcome { id, name, soft, pass, detail }
        })
        .collect();

    for o in &outcomes {
        let verdict = match (o.pass, o.soft) {
            (true, _) => "PASS",
            (false, false) => "FAIL",
            (false, true) => "FAIL (soft, reported only)",
        };
        println!("[criterion {}] {verdict}: {} -- {}", o.id, o.name, o.detail);
    }
    let hard_failures: Vec<u32> = outcomes.iter().filter(|o| !o.pass && !o.soft).map(|o| o.id).collect();
    assert!(hard_failures.is_empty(), "hard criteria failed: {hard_failures:?}");
}

#[test]
fn proposed_regression_constants() {
    let stats = mae(&exhaustive_sweep(&MultiplierKind::Proposed, 8).unwrap()).unwrap();
    assert_eq!(stats.mae, Ratio::new(86_564_851, 2_147_483_648));
    assert_eq!(stats.max_error, UnipolarValue::new(1, 8).unwrap());
    assert!(stats.max_error.to_f64() <= 0.13);
    let b3 = mae(&exhaustive_sweep(&MultiplierKind::Proposed, 3).unwrap()).unwrap();
    assert_eq!(b3.mae, Ratio::new(19, 512));
}

#[test]
fn proposed_gate_counts_b8() {
    let c = structural_counts(&MultiplierKind::Proposed, 8, false).unwrap();
    // 508 + 252 decoder gates split evenly, 128 OR + 127 AND encoder, 255 output AND
    assert_eq!(c.count(GateType::Or2), 254 + 126 + 128);
    assert_eq!(c.count(GateType::And2), 254 + 126 + 127 + 255);
    assert_eq!(c.depth, 9);
}
