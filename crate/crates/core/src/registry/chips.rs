use std::fmt;

use serde::{Deserialize, Serialize};

use super::Scale;
use crate::error::{Error, Result};
use crate::units::{Quantity, UnitHeader};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChipKind {
    Neuromorphic,
    Accelerator,
}

impl ChipKind {
    pub fn name(self) -> &'static str {
        match self {
            ChipKind::Neuromorphic => "neuromorphic",
            ChipKind::Accelerator => "accelerator",
        }
    }
}

/// Published quantities of a chip that may be missing or derived.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChipField {
    Area,
    Power,
    Throughput,
    EnergyPerEvent,
    FireRate,
    Activity,
    Clock,
}

impl ChipField {
    pub fn name(self) -> &'static str {
        match self {
            ChipField::Area => "area",
            ChipField::Power => "power",
            ChipField::Throughput => "throughput",
            ChipField::EnergyPerEvent => "energy_per_event",
            ChipField::FireRate => "fire_rate",
            ChipField::Activity => "activity",
            ChipField::Clock => "clock",
        }
    }
}

impl fmt::Display for ChipField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Specification of a fabricated chip, in canonical units. Unpublished
/// values are `None`; `derived` lists the values the source itself
/// obtained by calculation rather than measurement.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChipRecord {
    pub name: String,
    pub kind: ChipKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub affiliation: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub year: Option<u32>,
    pub cores: u64,
    pub neurons_per_core: u64,
    pub synapses_per_neuron: u64,
    /// nm².
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub area: Option<f64>,
    /// aJ/ps.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub power: Option<f64>,
    /// Synaptic operations per ps.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub throughput: Option<f64>,
    /// aJ.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub energy_per_event: Option<f64>,
    /// 1/ps.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fire_rate: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub activity: Option<f64>,
    /// 1/ps.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub clock: Option<f64>,
    /// Bytes of on-chip memory.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub memory_bytes: Option<f64>,
    /// nm.
    pub process_node: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub voltage: Option<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub derived: Vec<ChipField>,
}

impl ChipRecord {
    pub fn total_synapses(&self) -> f64 {
        self.cores as f64 * self.neurons_per_core as f64 * self.synapses_per_neuron as f64
    }

    pub fn get(&self, field: ChipField) -> Option<f64> {
        match field {
            ChipField::Area => self.area,
            ChipField::Power => self.power,
            ChipField::Throughput => self.throughput,
            ChipField::EnergyPerEvent => self.energy_per_event,
            ChipField::FireRate => self.fire_rate,
            ChipField::Activity => self.activity,
            ChipField::Clock => self.clock,
        }
    }

    pub fn set(&mut self, field: ChipField, value: Option<f64>) {
        let slot = match field {
            ChipField::Area => &mut self.area,
            ChipField::Power => &mut self.power,
            ChipField::Throughput => &mut self.throughput,
            ChipField::EnergyPerEvent => &mut self.energy_per_event,
            ChipField::FireRate => &mut self.fire_rate,
            ChipField::Activity => &mut self.activity,
            ChipField::Clock => &mut self.clock,
        };
        *slot = value;
    }

    pub fn is_derived(&self, field: ChipField) -> bool {
        self.derived.contains(&field)
    }

    pub(crate) fn validate(&self) -> Result<()> {
        let n = &self.name;
        if self.cores == 0 || self.neurons_per_core == 0 || self.synapses_per_neuron == 0 {
            return Err(Error::invalid(n, "cores/neurons_per_core/synapses_per_neuron", "counts must be at least 1"));
        }
        if let Some(r) = self.activity {
            if !(r > 0.0 && r <= 1.0) {
                return Err(Error::invalid(n, "activity", format!("must be in (0, 1], got {r}")));
            }
        }
        let fields = [
            ChipField::Area,
            ChipField::Power,
            ChipField::Throughput,
            ChipField::EnergyPerEvent,
            ChipField::FireRate,
            ChipField::Clock,
        ];
        for f in fields {
            if let Some(v) = self.get(f) {
                if !(v.is_finite() && v > 0.0) {
                    return Err(Error::invalid(
                        n,
                        f.name(),
                        "must be positive; leave unpublished values out instead of zero",
                    ));
                }
            }
        }
        if !(self.process_node > 0.0) {
            return Err(Error::invalid(n, "process_node", "must be positive"));
        }
        for f in &self.derived {
            if self.get(*f).is_none() {
                return Err(Error::invalid(n, f.name(), "marked derived but has no value"));
            }
        }
        Ok(())
    }
}

/// Share of chip area given to neurons and synapses when per-element areas
/// are recovered from a chip total.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AreaSplit {
    /// Fraction of the chip occupied by neurons plus synapses.
    pub element_share: f64,
    /// Fraction of the element area occupied by neurons.
    pub neuron_share: f64,
}

impl AreaSplit {
    fn validate(&self, file: &str) -> Result<()> {
        for (name, v) in [
            ("element_share", self.element_share),
            ("neuron_share", self.neuron_share),
        ] {
            if !(v > 0.0 && v < 1.0 || v == 1.0 && name == "element_share") {
                return Err(Error::invalid(file, format!("area_split.{name}"), "must be in (0, 1)"));
            }
        }
        Ok(())
    }
}

/// A published whole-workload estimate and the corresponding measurement.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub chip: String,
    pub workload: String,
    /// Estimated inferences per ps and aJ per inference.
    pub estimated: RateEnergy,
    pub measured: RateEnergy,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RateEnergy {
    pub rate: f64,
    pub energy: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ComparisonFile {
    chip: String,
    workload: String,
    estimated: RateEnergy,
    measured: RateEnergy,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ComparisonsFile {
    units: Option<UnitHeader>,
    entries: Vec<ComparisonFile>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub(crate) struct ChipsFile {
    units: Option<UnitHeader>,
    kind: ChipKind,
    area_split: AreaSplit,
    chips: Vec<ChipEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    comparisons: Option<ComparisonsFile>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ChipEntry {
    name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    affiliation: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    year: Option<u32>,
    cores: u64,
    neurons_per_core: u64,
    synapses_per_neuron: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    area: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    power: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    throughput: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    energy_per_event: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    fire_rate: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    activity: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    clock: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    memory_bytes: Option<f64>,
    process_node: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    voltage: Option<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    derived: Vec<ChipField>,
}

/// Quantity each chip field is measured in; the clock is a rate.
fn quantity(field: ChipField) -> Option<Quantity> {
    match field {
        ChipField::Area => Some(Quantity::Area),
        ChipField::Power => Some(Quantity::Power),
        ChipField::Throughput => Some(Quantity::Throughput),
        ChipField::EnergyPerEvent => Some(Quantity::Energy),
        ChipField::FireRate => Some(Quantity::Rate),
        ChipField::Clock => Some(Quantity::Rate),
        ChipField::Activity => None,
    }
}

fn convert(e: &ChipEntry, kind: ChipKind, s: &Scale<'_>) -> Result<ChipRecord> {
    let mut r = ChipRecord {
        name: e.name.clone(),
        kind,
        affiliation: e.affiliation.clone(),
        year: e.year,
        cores: e.cores,
        neurons_per_core: e.neurons_per_core,
        synapses_per_neuron: e.synapses_per_neuron,
        area: e.area,
        power: e.power,
        throughput: e.throughput,
        energy_per_event: e.energy_per_event,
        fire_rate: e.fire_rate,
        activity: e.activity,
        clock: e.clock,
        memory_bytes: e.memory_bytes,
        process_node: s.apply(Quantity::Length, e.process_node)?,
        voltage: e.voltage.map(|v| s.apply(Quantity::Voltage, v)).transpose()?,
        derived: e.derived.clone(),
    };
    for f in [
        ChipField::Area,
        ChipField::Power,
        ChipField::Throughput,
        ChipField::EnergyPerEvent,
        ChipField::FireRate,
        ChipField::Clock,
    ] {
        let q = quantity(f).expect("physical field");
        let v = r.get(f).map(|v| s.apply(q, v)).transpose()?;
        r.set(f, v);
    }
    Ok(r)
}

fn to_entry(r: &ChipRecord, s: &Scale<'_>) -> Result<ChipEntry> {
    let conv = |f: ChipField| -> Result<Option<f64>> {
        match quantity(f) {
            Some(q) => r.get(f).map(|v| s.apply(q, v)).transpose(),
            None => Ok(r.get(f)),
        }
    };
    Ok(ChipEntry {
        name: r.name.clone(),
        affiliation: r.affiliation.clone(),
        year: r.year,
        cores: r.cores,
        neurons_per_core: r.neurons_per_core,
        synapses_per_neuron: r.synapses_per_neuron,
        area: conv(ChipField::Area)?,
        power: conv(ChipField::Power)?,
        throughput: conv(ChipField::Throughput)?,
        energy_per_event: conv(ChipField::EnergyPerEvent)?,
        fire_rate: conv(ChipField::FireRate)?,
        activity: r.activity,
        clock: conv(ChipField::Clock)?,
        memory_bytes: r.memory_bytes,
        process_node: s.apply(Quantity::Length, r.process_node)?,
        voltage: r.voltage.map(|v| s.apply(Quantity::Voltage, v)).transpose()?,
        derived: r.derived.clone(),
    })
}

fn scale_rate_energy(s: &Scale<'_>, v: RateEnergy) -> Result<RateEnergy> {
    Ok(RateEnergy {
        rate: s.apply(Quantity::Rate, v.rate)?,
        energy: s.apply(Quantity::Energy, v.energy)?,
    })
}

pub(crate) struct ResolvedChips {
    pub kind: ChipKind,
    pub split: AreaSplit,
    pub chips: Vec<ChipRecord>,
    pub comparisons: Vec<Comparison>,
    pub comparison_units: Option<UnitHeader>,
}

impl ChipsFile {
    pub(crate) fn units(&self) -> Option<&UnitHeader> {
        self.units.as_ref()
    }

    pub(crate) fn resolve(&self, file: &str) -> Result<ResolvedChips> {
        let units = self
            .units
            .as_ref()
            .ok_or_else(|| Error::MissingUnits { file: file.into() })?;
        units.check(file)?;
        self.area_split.validate(file)?;
        let s = Scale::load(units, file);
        let mut chips: Vec<ChipRecord> = Vec::new();
        for e in &self.chips {
            if chips.iter().any(|c| c.name == e.name) {
                return Err(Error::invalid(&e.name, "name", "duplicate chip"));
            }
            let r = convert(e, self.kind, &s)?;
            r.validate()?;
            chips.push(r);
        }
        let mut comparisons = Vec::new();
        let mut comparison_units = None;
        if let Some(c) = &self.comparisons {
            let cu = c.units.as_ref().ok_or_else(|| Error::MissingUnits {
                file: format!("{file} (comparisons)"),
            })?;
            cu.check(file)?;
            let cs = Scale::load(cu, file);
            for e in &c.entries {
                comparisons.push(Comparison {
                    chip: e.chip.clone(),
                    workload: e.workload.clone(),
                    estimated: scale_rate_energy(&cs, e.estimated)?,
                    measured: scale_rate_energy(&cs, e.measured)?,
                });
            }
            comparison_units = Some(cu.clone());
        }
        Ok(ResolvedChips {
            kind: self.kind,
            split: self.area_split,
            chips,
            comparisons,
            comparison_units,
        })
    }

    pub(crate) fn export(
        kind: ChipKind,
        split: AreaSplit,
        chips: &[ChipRecord],
        comparisons: &[Comparison],
        units: &UnitHeader,
        comparison_units: Option<&UnitHeader>,
        file: &str,
    ) -> Result<Self> {
        let s = Scale::export(units, file);
        let comparisons = match comparison_units {
            Some(cu) => {
                let cs = Scale::export(cu, file);
                Some(ComparisonsFile {
                    units: Some(cu.clone()),
                    entries: comparisons
                        .iter()
                        .map(|c| {
                            Ok(ComparisonFile {
                                chip: c.chip.clone(),
                                workload: c.workload.clone(),
                                estimated: scale_rate_energy(&cs, c.estimated)?,
                                measured: scale_rate_energy(&cs, c.measured)?,
                            })
                        })
                        .collect::<Result<_>>()?,
                })
            }
            None => None,
        };
        Ok(ChipsFile {
            units: Some(units.clone()),
            kind,
            area_split: split,
            chips: chips
                .iter()
                .filter(|c| c.kind == kind)
                .map(|c| to_entry(c, &s))
                .collect::<Result<_>>()?,
            comparisons,
        })
    }
}
