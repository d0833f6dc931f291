//! Structural gate-count model and area / latency / energy estimates.
//!
//! Gate counts come from the datapath structure of each design, not from
//! synthesis. The shipped [`GateLibrary::calibrated`] values are calibration
//! inputs (roughly a 45 nm standard-cell library with a 19 ps two-input gate
//! delay and a 2.5 ns clock); absolute µm² and pJ numbers are not meant to
//! match any particular synthesis run.
//!
//! Units: area µm², energy fJ, delay ps, clock ns. `E×L` is reported in
//! pJ·s and `A×E×L` in pJ·s·mm².

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Result, ScError};
use crate::multiplier::MultiplierKind;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum GateType {
    #[serde(rename = "AND2")]
    And2,
    #[serde(rename = "OR2")]
    Or2,
    #[serde(rename = "NOT")]
    Not,
    #[serde(rename = "XOR2")]
    Xor2,
    #[serde(rename = "DFF")]
    Dff,
    #[serde(rename = "CMP_BIT")]
    CmpBit,
}

impl GateType {
    pub const ALL: [GateType; 6] = [Self::And2, Self::Or2, Self::Not, Self::Xor2, Self::Dff, Self::CmpBit];

    pub fn name(self) -> &'static str {
        match self {
            Self::And2 => "AND2",
            Self::Or2 => "OR2",
            Self::Not => "NOT",
            Self::Xor2 => "XOR2",
            Self::Dff => "DFF",
            Self::CmpBit => "CMP_BIT",
        }
    }
}

impl fmt::Display for GateType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GateParams {
    pub area_um2: f64,
    pub energy_fj: f64,
    pub delay_ps: f64,
}

/// Per-gate parameters plus clocking assumptions.
///
/// Serialized as a flat JSON object: one key per gate type, then
/// `clock_period_ns` and `activity_factor`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GateLibrary {
    #[serde(flatten)]
    pub gates: BTreeMap<GateType, GateParams>,
    pub clock_period_ns: f64,
    pub activity_factor: f64,
}

pub const DEFAULT_CLOCK_NS: f64 = 2.5;
pub const DEFAULT_ACTIVITY: f64 = 0.5;

impl GateLibrary {
    pub fn calibrated() -> Self {
        let p = |area_um2, energy_fj, delay_ps| GateParams { area_um2, energy_fj, delay_ps };
        let gates = BTreeMap::from([
            (GateType::And2, p(1.064, 0.85, 19.0)),
            (GateType::Or2, p(1.064, 0.90, 19.0)),
            (GateType::Not, p(0.532, 0.40, 10.0)),
            (GateType::Xor2, p(1.596, 1.60, 28.0)),
            (GateType::Dff, p(4.522, 4.20, 60.0)),
            (GateType::CmpBit, p(2.660, 2.10, 35.0)),
        ]);
        Self { gates, clock_period_ns: DEFAULT_CLOCK_NS, activity_factor: DEFAULT_ACTIVITY }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let lib: Self = serde_json::from_str(text).map_err(|e| ScError::BadGateLibrary(e.to_string()))?;
        lib.validate()?;
        Ok(lib)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("library serializes")
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(ScError::BadGateLibrary(msg));
        for (g, p) in &self.gates {
            if !(p.area_um2 > 0.0 && p.energy_fj > 0.0 && p.delay_ps > 0.0) {
                return bad(format!("{g} entries must be strictly positive"));
            }
        }
        if !(self.activity_factor > 0.0 && self.activity_factor <= 1.0) {
            return bad(format!("activity_factor {} outside (0, 1]", self.activity_factor));
        }
        let max_delay_ns = self.gates.values().map(|p| p.delay_ps).fold(0.0, f64::max) / 1e3;
        if self.clock_period_ns.partial_cmp(&max_delay_ns) != Some(std::cmp::Ordering::Greater) {
            return bad(format!(
                "clock_period_ns {} must exceed the slowest gate delay ({max_delay_ns} ns)",
                self.clock_period_ns
            ));
        }
        Ok(())
    }

    pub fn get(&self, g: GateType) -> Result<&GateParams> {
        self.gates.get(&g).ok_or(ScError::MissingGate(g.name()))
    }

    /// Per-level delay on a combinational AND/OR path, in ps.
    pub fn logic_level_delay_ps(&self) -> Result<f64> {
        Ok(self.get(GateType::And2)?.delay_ps.max(self.get(GateType::Or2)?.delay_ps))
    }

    /// First 16 hex digits of the SHA-256 of the compact JSON form.
    pub fn digest(&self) -> String {
        let json = serde_json::to_string(self).expect("library serializes");
        hex::encode(&Sha256::digest(json.as_bytes())[..8])
    }
}

impl Default for GateLibrary {
    fn default() -> Self {
        Self::calibrated()
    }
}

/// Structural gate counts for one design.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GateCounts {
    pub counts: BTreeMap<GateType, u64>,
    /// Gate levels on the critical path.
    pub depth: u32,
    pub cycles: u64,
    /// Sequential designs are clocked; latency is `cycles × clock_period`.
    pub sequential: bool,
}

impl GateCounts {
    fn new(depth: u32, cycles: u64, sequential: bool) -> Self {
        Self { counts: BTreeMap::new(), depth, cycles, sequential }
    }

    fn add(&mut self, g: GateType, n: u64) -> &mut Self {
        if n > 0 {
            *self.counts.entry(g).or_insert(0) += n;
        }
        self
    }

    pub fn count(&self, g: GateType) -> u64 {
        self.counts.get(&g).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }
}

/// Gates in a thermometer decoder for `k` input bits:
/// G(k) = G(k−1) + 2^k, G(1) = 0, i.e. 2^(k+1) − 4 for k ≥ 1.
pub fn tcu_decoder_gates(k: u32) -> u64 {
    if k <= 1 {
        0
    } else {
        (1u64 << (k + 1)) - 4
    }
}

/// Itemized gate counts for the proposed datapath.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProposedBreakdown {
    pub x_decoder: u64,
    pub y_decoder: u64,
    pub encoder_or: u64,
    pub encoder_and: u64,
    pub output_and: u64,
}

impl ProposedBreakdown {
    /// With `naive` set, gates whose output is constant zero (the `t_0` AND
    /// in the encoder, the position-N output AND) are counted too.
    pub fn new(width: u32, naive: bool) -> Self {
        let half = 1u64 << (width - 1);
        let n = 1u64 << width;
        let constant = u64::from(!naive);
        Self {
            x_decoder: tcu_decoder_gates(width),
            y_decoder: tcu_decoder_gates(width - 1),
            encoder_or: half,
            encoder_and: half - constant,
            output_and: n - constant,
        }
    }
}

/// Output counter of `bits` bits: one flop and one XOR per bit plus a
/// ripple-carry AND chain.
fn add_counter(c: &mut GateCounts, bits: u64) {
    c.add(GateType::Dff, bits).add(GateType::Xor2, bits).add(GateType::And2, bits.saturating_sub(1));
}

pub fn structural_counts(kind: &MultiplierKind, width: u32, naive: bool) -> Result<GateCounts> {
    if !(2..=crate::scnum::MAX_WIDTH).contains(&width) {
        return Err(ScError::BadWidth(width));
    }
    let b = u64::from(width);
    let cycles = kind.cycles(width);
    let counts = match kind {
        MultiplierKind::Proposed => {
            let p = ProposedBreakdown::new(width, naive);
            // decoders split evenly between AND and OR gates at every level
            let dec = p.x_decoder + p.y_decoder;
            let mut c = GateCounts::new(width + 1, 1, false);
            c.add(GateType::And2, dec / 2 + p.encoder_and + p.output_and).add(GateType::Or2, dec / 2 + p.encoder_or);
            c
        }
        MultiplierKind::Gaines { x_gen, y_gen } => {
            let mut c = GateCounts::new(width + 1, cycles, true);
            for g in [x_gen, y_gen] {
                c.add(GateType::Dff, u64::from(g.width)).add(GateType::Xor2, g.taps.len() as u64 - 1);
            }
            c.add(GateType::CmpBit, 2 * b).add(GateType::And2, 1);
            add_counter(&mut c, b + 1);
            c
        }
        MultiplierKind::Umul => {
            // one shared time counter; bit reversal is wiring
            let mut c = GateCounts::new(width + 1, cycles, true);
            add_counter(&mut c, b);
            c.add(GateType::CmpBit, 2 * b).add(GateType::And2, 1);
            add_counter(&mut c, b + 1);
            c
        }
        MultiplierKind::Jenson { .. } => {
            // 2B-bit time counter: low half drives A, high half drives B
            let mut c = GateCounts::new(width + 1, cycles, true);
            add_counter(&mut c, 2 * b);
            c.add(GateType::CmpBit, 2 * b).add(GateType::And2, 1);
            add_counter(&mut c, 2 * b + 1);
            c
        }
    };
    Ok(counts)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CostReport {
    pub design: String,
    pub width: u32,
    pub cycles: u64,
    pub area_um2: f64,
    pub latency_ns: f64,
    pub energy_fj: f64,
    /// E×L in pJ·s.
    pub el_pj_s: f64,
    /// A×E×L in pJ·s·mm².
    pub ael_pj_s_mm2: f64,
    pub library_digest: String,
}

impl CostReport {
    pub fn energy_pj(&self) -> f64 {
        self.energy_fj * 1e-3
    }
}

pub fn evaluate_cost(design: &str, width: u32, counts: &GateCounts, lib: &GateLibrary) -> Result<CostReport> {
    let mut area = 0.0;
    let mut energy_per_cycle = 0.0;
    for (&g, &n) in &counts.counts {
        let p = lib.get(g)?;
        area += n as f64 * p.area_um2;
        energy_per_cycle += n as f64 * p.energy_fj;
    }
    let latency_ns = if counts.sequential {
        counts.cycles as f64 * lib.clock_period_ns
    } else {
        f64::from(counts.depth) * lib.logic_level_delay_ps()? / 1e3
    };
    let energy_fj = energy_per_cycle * lib.activity_factor * counts.cycles as f64;
    let el_pj_s = (energy_fj * 1e-3) * (latency_ns * 1e-9);
    let ael_pj_s_mm2 = (area * 1e-6) * el_pj_s;
    Ok(CostReport {
        design: design.to_string(),
        width,
        cycles: counts.cycles,
        area_um2: area,
        latency_ns,
        energy_fj,
        el_pj_s,
        ael_pj_s_mm2,
        library_digest: lib.digest(),
    })
}

/// Counts and evaluates one design.
pub fn cost_of(kind: &MultiplierKind, width: u32, lib: &GateLibrary, naive: bool) -> Result<CostReport> {
    evaluate_cost(kind.name(), width, &structural_counts(kind, width, naive)?, lib)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonRow {
    pub report: CostReport,
    /// This design's A×E×L over the reference design's.
    pub ael_ratio: f64,
    pub latency_ratio: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub reference: String,
    pub rows: Vec<ComparisonRow>,
}

/// Table rows with ratios against the `proposed` report, or the first
/// report when there is none.
pub fn comparison_table(reports: &[CostReport]) -> Result<Comparison> {
    if reports.len() < 2 {
        return Err(ScError::TooFewReports);
    }
    let reference = reports.iter().find(|r| r.design == "proposed").unwrap_or(&reports[0]);
    let rows = reports
        .iter()
        .map(|r| ComparisonRow {
            report: r.clone(),
            ael_ratio: r.ael_pj_s_mm2 / reference.ael_pj_s_mm2,
            latency_ratio: r.latency_ns / reference.latency_ns,
        })
        .collect();
    Ok(Comparison { reference: reference.design.clone(), rows })
}
