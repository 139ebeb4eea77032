//! Tabular and scatter exports: the element matrix, workload and chip
//! tables as CSV, energy-delay and power-throughput scatter sets, and Pareto
//! fronts.

use serde::{Deserialize, Serialize};

use crate::engine::{element_matrix, workload_bench};
use crate::error::{Error, Result};
use crate::interconnect::ElementBench;
use crate::registry::{ChipKind, NetworkKind, Registry};
use crate::topsdown::{run_workload_on_chip, topsdown};

pub const DEFAULT_PRECISION: usize = 6;

/// Formats `v` with `digits` significant digits, without exponent or
/// locale formatting.
pub fn format_sig(v: f64, digits: usize) -> String {
    if !v.is_finite() || v == 0.0 {
        return format!("{v}");
    }
    let rounded: f64 = format!("{:.*e}", digits.max(1) - 1, v)
        .parse()
        .expect("exponent notation reparses");
    format!("{rounded}")
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Text(String),
    Number(f64),
    Empty,
}

/// A header and rows, rendered as CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    fn new(header: &[&str]) -> Self {
        Table { header: header.iter().map(|h| h.to_string()).collect(), rows: Vec::new() }
    }

    pub fn to_csv(&self, precision: usize) -> Result<String> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|c| match c {
                Cell::Text(s) => s.clone(),
                Cell::Number(v) => format_sig(*v, precision),
                Cell::Empty => String::new(),
            }))?;
        }
        let bytes = w
            .into_inner()
            .map_err(|e| Error::Io { path: "csv buffer".into(), source: e.into_error() })?;
        Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
    }
}

/// What a matrix export covers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Scope {
    Elements(Option<NetworkKind>),
    Workload(String),
    Chips,
}

pub const ELEMENT_COLUMNS: [&str; 14] = [
    "technology",
    "network_kind",
    "area_syn_nm2",
    "area_lic_nm2",
    "area_neu_nm2",
    "area_gic_nm2",
    "delay_syn_ps",
    "delay_lic_ps",
    "delay_neu_ps",
    "delay_gic_ps",
    "energy_syn_aj",
    "energy_lic_aj",
    "energy_neu_aj",
    "energy_gic_aj",
];

pub fn element_table(rows: &[ElementBench]) -> Table {
    let mut t = Table::new(&ELEMENT_COLUMNS);
    for r in rows {
        let mut row = vec![
            Cell::Text(r.technology.label.clone()),
            Cell::Text(r.technology.network_kind.name().into()),
        ];
        row.extend(r.columns().into_iter().map(Cell::Number));
        t.rows.push(row);
    }
    t
}

fn workload_table(reg: &Registry, name: &str) -> Result<Table> {
    reg.workload(name)?;
    let mut t = Table::new(&[
        "technology",
        "network_kind",
        "schedule",
        "area_nm2",
        "delay_ps",
        "energy_aj",
        "power_w",
        "inference_throughput_per_nm2_ps",
    ]);
    for tech in reg.technologies(None) {
        let b = workload_bench(reg, name, tech, None)?;
        t.rows.push(vec![
            Cell::Text(tech.label().into()),
            Cell::Text(tech.kind().name().into()),
            Cell::Text(schedule_name(b.schedule).into()),
            Cell::Number(b.area),
            Cell::Number(b.delay),
            Cell::Number(b.energy),
            Cell::Number(b.power_watts()),
            Cell::Number(b.inference_throughput),
        ]);
    }
    Ok(t)
}

fn schedule_name(s: crate::registry::Schedule) -> &'static str {
    match s {
        crate::registry::Schedule::Parallel => "parallel",
        crate::registry::Schedule::TimeMultiplexed => "time_multiplexed",
    }
}

fn chip_table(reg: &Registry) -> Table {
    let mut t = Table::new(&[
        "chip",
        "kind",
        "a_neu_nm2",
        "a_syn_nm2",
        "tau_syn_ps",
        "tau_neu_ps",
        "e_syn_aj",
        "e_neu_aj",
        "activity",
        "note",
    ]);
    for chip in reg.chips() {
        let mut row = vec![Cell::Text(chip.name.clone()), Cell::Text(chip.kind.name().into())];
        match topsdown(reg, chip) {
            Ok(e) => {
                row.extend(
                    [e.a_neu, e.a_syn, e.tau_syn, e.tau_neu, e.e_syn, e.e_neu, e.activity].map(Cell::Number),
                );
                row.push(Cell::Empty);
            }
            Err(err) => {
                row.extend(std::iter::repeat_n(Cell::Empty, 7));
                row.push(Cell::Text(err.to_string()));
            }
        }
        t.rows.push(row);
    }
    t
}

pub fn matrix_table(reg: &Registry, scope: &Scope) -> Result<Table> {
    match scope {
        Scope::Elements(kind) => Ok(element_table(&element_matrix(reg, *kind)?)),
        Scope::Workload(name) => workload_table(reg, name),
        Scope::Chips => Ok(chip_table(reg)),
    }
}

/// The matrix of a scope as CSV.
pub fn emit_matrix(reg: &Registry, scope: &Scope, precision: usize) -> Result<String> {
    matrix_table(reg, scope)?.to_csv(precision)
}

/// One row of an element matrix CSV read back.
#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct MatrixRow {
    pub technology: String,
    pub network_kind: NetworkKind,
    pub area_syn_nm2: f64,
    pub area_lic_nm2: f64,
    pub area_neu_nm2: f64,
    pub area_gic_nm2: f64,
    pub delay_syn_ps: f64,
    pub delay_lic_ps: f64,
    pub delay_neu_ps: f64,
    pub delay_gic_ps: f64,
    pub energy_syn_aj: f64,
    pub energy_lic_aj: f64,
    pub energy_neu_aj: f64,
    pub energy_gic_aj: f64,
}

pub fn parse_matrix(text: &str) -> Result<Vec<MatrixRow>> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    r.deserialize().map(|row| row.map_err(Error::from)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Series {
    #[serde(rename = "ANN")]
    Ann,
    #[serde(rename = "CNN")]
    Cnn,
    #[serde(rename = "SNN")]
    Snn,
    #[serde(rename = "ONN")]
    Onn,
    #[serde(rename = "accelerator")]
    Accelerator,
    #[serde(rename = "neuromorphic")]
    Neuromorphic,
}

impl Series {
    pub fn name(self) -> &'static str {
        match self {
            Series::Ann => "ANN",
            Series::Cnn => "CNN",
            Series::Snn => "SNN",
            Series::Onn => "ONN",
            Series::Accelerator => "accelerator",
            Series::Neuromorphic => "neuromorphic",
        }
    }
}

impl From<NetworkKind> for Series {
    fn from(k: NetworkKind) -> Self {
        match k {
            NetworkKind::Ann => Series::Ann,
            NetworkKind::Cnn => Series::Cnn,
            NetworkKind::Snn => Series::Snn,
            NetworkKind::Onn => Series::Onn,
        }
    }
}

impl From<ChipKind> for Series {
    fn from(k: ChipKind) -> Self {
        match k {
            ChipKind::Accelerator => Series::Accelerator,
            ChipKind::Neuromorphic => Series::Neuromorphic,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScatterPoint {
    pub label: String,
    pub x: f64,
    pub y: f64,
    pub series: Series,
}

/// Which scatter set to build.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ScatterSet {
    /// Synapse energy (aJ) against delay (ps), core wire included.
    Synapse,
    /// Neuron energy against delay, chip wire included.
    Neuron,
    /// Energy per inference against delay for every technology and every
    /// computable chip.
    WorkloadEnergyDelay(String),
    /// Inference throughput per area (1/(nm²·ps)) against power per area
    /// (W/nm²).
    WorkloadPowerThroughput(String),
}

pub fn scatter(reg: &Registry, set: &ScatterSet) -> Result<Vec<ScatterPoint>> {
    let mut out = Vec::new();
    match set {
        ScatterSet::Synapse | ScatterSet::Neuron => {
            for e in element_matrix(reg, None)? {
                let t = if *set == ScatterSet::Synapse { e.synapse_total() } else { e.neuron_total() };
                out.push(ScatterPoint {
                    label: e.technology.label.clone(),
                    x: t.delay,
                    y: t.energy,
                    series: e.technology.network_kind.into(),
                });
            }
        }
        ScatterSet::WorkloadEnergyDelay(name) | ScatterSet::WorkloadPowerThroughput(name) => {
            let spec = reg.workload(name)?;
            let energy_delay = matches!(set, ScatterSet::WorkloadEnergyDelay(_));
            let point = |label: &str, b: &crate::workload::WorkloadBench, series: Series| ScatterPoint {
                label: label.to_string(),
                x: if energy_delay { b.delay } else { b.power_watts() / b.area },
                y: if energy_delay { b.energy } else { b.inference_throughput },
                series,
            };
            for tech in reg.technologies(None) {
                let b = workload_bench(reg, name, tech, None)?;
                out.push(point(tech.label(), &b, tech.kind().into()));
            }
            for chip in reg.chips() {
                // Chips lacking published figures are left out of plots.
                if let Ok(b) = run_workload_on_chip(reg, chip, spec) {
                    out.push(point(&chip.name, &b, chip.kind.into()));
                }
            }
        }
    }
    Ok(out)
}

pub fn scatter_table(points: &[ScatterPoint]) -> Table {
    let mut t = Table::new(&["label", "series", "x", "y"]);
    for p in points {
        t.rows.push(vec![
            Cell::Text(p.label.clone()),
            Cell::Text(p.series.name().into()),
            Cell::Number(p.x),
            Cell::Number(p.y),
        ]);
    }
    t
}

fn dominates(a: &ScatterPoint, b: &ScatterPoint) -> bool {
    a.x <= b.x && a.y <= b.y && (a.x < b.x || a.y < b.y)
}

/// Points no other point dominates when both axes are minimized, sorted by
/// x, then y, then label.
pub fn pareto_front(points: &[ScatterPoint]) -> Vec<ScatterPoint> {
    let mut front: Vec<ScatterPoint> = points
        .iter()
        .filter(|p| !points.iter().any(|q| dominates(q, p)))
        .cloned()
        .collect();
    front.sort_by(|a, b| {
        a.x.total_cmp(&b.x)
            .then(a.y.total_cmp(&b.y))
            .then_with(|| a.label.cmp(&b.label))
            .then(a.series.cmp(&b.series))
    });
    front
}
