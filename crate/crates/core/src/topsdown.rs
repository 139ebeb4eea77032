//! Tops-down benchmarks: per-synapse and per-neuron figures recovered from
//! published chip totals, consistency back-filling of missing values, and
//! workloads run on published chips.

use serde::Serialize;

use crate::ade::AdeTriple;
use crate::error::{Error, Result};
use crate::interconnect::ElementBench;
use crate::registry::{
    AreaSplit, ChipField, ChipKind, ChipRecord, FanIn, NetworkKind, Registry, Schedule, TechnologyId,
    WorkloadSpec,
};
use crate::workload::{run_workload, Execution, WorkloadBench};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TopsDownElement {
    pub chip: String,
    pub kind: ChipKind,
    /// nm².
    pub a_neu: f64,
    /// nm².
    pub a_syn: f64,
    /// ps.
    pub tau_syn: f64,
    /// ps.
    pub tau_neu: f64,
    /// aJ.
    pub e_syn: f64,
    /// aJ.
    pub e_neu: f64,
    pub activity: f64,
}

impl TopsDownElement {
    pub fn synapse(&self) -> AdeTriple {
        AdeTriple::new(self.a_syn, self.tau_syn, self.e_syn)
    }

    pub fn neuron(&self) -> AdeTriple {
        AdeTriple::new(self.a_neu, self.tau_neu, self.e_neu)
    }

    /// The element as a benchmark row; published chips include their wiring
    /// in the element figures, so both interconnects are zero.
    pub fn to_element_bench(&self) -> ElementBench {
        let kind = match self.kind {
            ChipKind::Neuromorphic => NetworkKind::Snn,
            ChipKind::Accelerator => NetworkKind::Ann,
        };
        ElementBench {
            technology: TechnologyId {
                network_kind: kind,
                neuron_device: self.chip.clone(),
                synapse_device: self.chip.clone(),
                label: self.chip.clone(),
            },
            synapse: self.synapse(),
            core_ic: AdeTriple::ZERO,
            neuron: self.neuron(),
            chip_ic: AdeTriple::ZERO,
        }
    }
}

fn need(chip: &ChipRecord, field: ChipField) -> Result<f64> {
    chip.get(field).ok_or_else(|| Error::Incomputable { chip: chip.name.clone(), field: field.name() })
}

/// Per-neuron and per-synapse areas from the chip area, nm².
fn split_area(chip: &ChipRecord, split: AreaSplit) -> Result<(f64, f64)> {
    let a_ch = need(chip, ChipField::Area)?;
    let elements = split.element_share * a_ch;
    let neurons = chip.cores as f64 * chip.neurons_per_core as f64;
    Ok((
        split.neuron_share * elements / neurons,
        (1.0 - split.neuron_share) * elements / chip.total_synapses(),
    ))
}

/// Energy per synaptic event: the published value, else power over
/// throughput.
fn event_energy(chip: &ChipRecord) -> Result<f64> {
    if let Some(e) = chip.energy_per_event {
        return Ok(e);
    }
    match (chip.power, chip.throughput) {
        (Some(p), Some(t)) => Ok(p / t),
        (None, _) => Err(Error::Incomputable { chip: chip.name.clone(), field: ChipField::Power.name() }),
        (_, None) => Err(Error::Incomputable { chip: chip.name.clone(), field: ChipField::Throughput.name() }),
    }
}

pub fn topsdown_neuromorphic(chip: &ChipRecord, split: AreaSplit) -> Result<TopsDownElement> {
    if chip.kind != ChipKind::Neuromorphic {
        return Err(Error::invalid(&chip.name, "kind", "not a neuromorphic chip"));
    }
    let (a_neu, a_syn) = split_area(chip, split)?;
    let r_a = need(chip, ChipField::Activity)?;
    let f_fire = match (chip.fire_rate, chip.throughput) {
        (Some(f), _) => f,
        (None, Some(t)) => t / (r_a * chip.total_synapses()),
        (None, None) => {
            return Err(Error::Incomputable { chip: chip.name.clone(), field: ChipField::FireRate.name() })
        }
    };
    let s_neu = chip.synapses_per_neuron as f64;
    let tau_syn = 1.0 / (r_a * s_neu * f_fire);
    let e_syn = event_energy(chip)?;
    Ok(TopsDownElement {
        chip: chip.name.clone(),
        kind: chip.kind,
        a_neu,
        a_syn,
        tau_syn,
        tau_neu: tau_syn,
        e_syn,
        e_neu: e_syn * r_a * s_neu,
        activity: r_a,
    })
}

/// Accelerators are clocked: one MAC per cycle per synapse unit, and one
/// accumulate-and-activate per cycle per neuron.
pub fn topsdown_accelerator(chip: &ChipRecord, split: AreaSplit) -> Result<TopsDownElement> {
    if chip.kind != ChipKind::Accelerator {
        return Err(Error::invalid(&chip.name, "kind", "not an accelerator"));
    }
    let f_cl = need(chip, ChipField::Clock)?;
    need(chip, ChipField::Power)?;
    let (a_neu, a_syn) = split_area(chip, split)?;
    let e_syn = event_energy(chip)?;
    Ok(TopsDownElement {
        chip: chip.name.clone(),
        kind: chip.kind,
        a_neu,
        a_syn,
        tau_syn: 1.0 / f_cl,
        tau_neu: 1.0 / f_cl,
        e_syn,
        e_neu: e_syn,
        activity: 1.0,
    })
}

pub fn topsdown(reg: &Registry, chip: &ChipRecord) -> Result<TopsDownElement> {
    let split = reg.area_split(chip.kind);
    match chip.kind {
        ChipKind::Neuromorphic => topsdown_neuromorphic(chip, split),
        ChipKind::Accelerator => topsdown_accelerator(chip, split),
    }
}

/// Consistency relations between published chip totals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Identity {
    /// Throughput = fire rate × activity × synapses.
    Throughput,
    /// Power = throughput × energy per event.
    Power,
}

impl Identity {
    fn fields(self) -> [ChipField; 3] {
        match self {
            Identity::Throughput => [ChipField::Throughput, ChipField::FireRate, ChipField::Activity],
            Identity::Power => [ChipField::Power, ChipField::Throughput, ChipField::EnergyPerEvent],
        }
    }

    fn applies(self, kind: ChipKind) -> bool {
        match self {
            Identity::Throughput => kind == ChipKind::Neuromorphic,
            Identity::Power => true,
        }
    }

    /// Left side as a product of the other two factors; `s_ch` folds into the
    /// throughput identity.
    fn solve(self, field: ChipField, chip: &ChipRecord) -> f64 {
        let g = |f| chip.get(f).expect("solver called with one unknown");
        let s_ch = chip.total_synapses();
        match (self, field) {
            (Identity::Throughput, ChipField::Throughput) => {
                g(ChipField::FireRate) * g(ChipField::Activity) * s_ch
            }
            (Identity::Throughput, ChipField::FireRate) => {
                g(ChipField::Throughput) / (g(ChipField::Activity) * s_ch)
            }
            (Identity::Throughput, ChipField::Activity) => {
                g(ChipField::Throughput) / (g(ChipField::FireRate) * s_ch)
            }
            (Identity::Power, ChipField::Power) => g(ChipField::Throughput) * g(ChipField::EnergyPerEvent),
            (Identity::Power, ChipField::Throughput) => g(ChipField::Power) / g(ChipField::EnergyPerEvent),
            (Identity::Power, ChipField::EnergyPerEvent) => g(ChipField::Power) / g(ChipField::Throughput),
            _ => unreachable!("field outside identity"),
        }
    }

    /// Relative mismatch of a fully specified identity.
    fn residual(self, chip: &ChipRecord) -> Option<f64> {
        let [lhs, ..] = self.fields();
        let quoted = chip.get(lhs)?;
        let mut probe = chip.clone();
        probe.set(lhs, None);
        if self.fields().iter().skip(1).any(|f| probe.get(*f).is_none()) {
            return None;
        }
        let implied = self.solve(lhs, &probe);
        Some((implied - quoted) / quoted)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Fill {
    pub field: ChipField,
    pub identity: Identity,
    pub value: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Residual {
    pub identity: Identity,
    /// (implied − quoted) / quoted for the identity's left-hand side.
    pub relative: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Backfill {
    pub record: ChipRecord,
    pub fills: Vec<Fill>,
    pub residuals: Vec<Residual>,
}

/// Fills absent values from the throughput and power identities. Quoted
/// values are never overwritten; every fill is marked derived.
pub fn backfill_derived(chip: &ChipRecord) -> Result<Backfill> {
    let mut rec = chip.clone();
    let mut fills = Vec::new();
    let ids: Vec<Identity> = [Identity::Throughput, Identity::Power]
        .into_iter()
        .filter(|i| i.applies(chip.kind))
        .collect();
    loop {
        let mut progressed = false;
        for &id in &ids {
            let missing: Vec<ChipField> =
                id.fields().into_iter().filter(|f| rec.get(*f).is_none()).collect();
            if let [field] = missing[..] {
                let field: ChipField = field;
                let value = id.solve(field, &rec);
                if !(value.is_finite() && value > 0.0) {
                    return Err(Error::invalid(&rec.name, field.name(), format!("solved to {value}")));
                }
                if field == ChipField::Activity && value > 1.0 {
                    return Err(Error::invalid(
                        &rec.name,
                        field.name(),
                        format!("solved activity {value} exceeds 1; quoted values are inconsistent"),
                    ));
                }
                rec.set(field, Some(value));
                if !rec.derived.contains(&field) {
                    rec.derived.push(field);
                }
                fills.push(Fill { field, identity: id, value });
                progressed = true;
            }
        }
        if !progressed {
            break;
        }
    }
    let mut unknowns: Vec<&'static str> = Vec::new();
    for &id in &ids {
        let missing: Vec<&'static str> =
            id.fields().iter().filter(|f| rec.get(**f).is_none()).map(|f| f.name()).collect();
        if missing.len() >= 2 {
            for m in missing {
                if !unknowns.contains(&m) {
                    unknowns.push(m);
                }
            }
        }
    }
    if !unknowns.is_empty() {
        return Err(Error::UnderDetermined { chip: rec.name.clone(), unknowns });
    }
    let residuals = ids
        .iter()
        .filter_map(|&id| id.residual(&rec).map(|relative| Residual { identity: id, relative }))
        .collect();
    Ok(Backfill { record: rec, fills, residuals })
}

/// Recomputes every value the source marked as derived.
pub fn rederive(chip: &ChipRecord) -> Result<Backfill> {
    let mut rec = chip.clone();
    for f in &chip.derived {
        rec.set(*f, None);
    }
    backfill_derived(&rec)
}

/// How a published chip executes a workload: accelerators run each neuron's
/// synapses one per cycle, time-multiplexed; neuromorphic chips follow
/// spiking semantics.
pub fn chip_execution(reg: &Registry, chip: &ChipRecord) -> Execution {
    match chip.kind {
        ChipKind::Accelerator => Execution {
            fan_in: reg.fan_in_policy().accelerator_sequential,
            spiking: false,
            schedule: Schedule::TimeMultiplexed,
        },
        ChipKind::Neuromorphic => Execution {
            fan_in: FanIn::UNLIMITED,
            spiking: true,
            schedule: reg.default_schedule(NetworkKind::Snn),
        },
    }
}

pub fn run_workload_on_chip(reg: &Registry, chip: &ChipRecord, spec: &WorkloadSpec) -> Result<WorkloadBench> {
    let elem = topsdown(reg, chip)?.to_element_bench();
    run_workload(spec, &elem, &chip_execution(reg, chip), reg.constants())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn reg() -> Registry {
        Registry::builtin().unwrap()
    }

    #[test]
    fn truenorth_elements() {
        let r = reg();
        let tn = r.chip("TrueNorth").unwrap();
        let e = topsdown(&r, tn).unwrap();
        // 0.95 · 430 mm² over 4096·256·256 synapses.
        let expect = 0.95 * 430e12 / (4096.0 * 256.0 * 256.0);
        assert_relative_eq!(e.a_syn, expect, max_relative = 1e-12);
        assert_relative_eq!(e.a_syn, 1.5218e6, max_relative = 1e-4);
        assert_relative_eq!(e.e_neu, 26e6 * 0.5 * 256.0, max_relative = 1e-12);
        assert_relative_eq!(e.e_neu / e.e_syn, e.activity * 256.0);
    }

    #[test]
    fn missing_area_is_incomputable() {
        let r = reg();
        let mut tn = r.chip("TrueNorth").unwrap().clone();
        tn.area = None;
        match topsdown(&r, &tn) {
            Err(Error::Incomputable { field, .. }) => assert_eq!(field, "area"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn accelerator_energy() {
        let r = reg();
        let mut ey = r.chip("Eyeriss").unwrap().clone();
        ey.energy_per_event = None;
        let e = topsdown(&r, &ey).unwrap();
        assert_relative_eq!(e.e_syn, 8.3e6, max_relative = 0.01);
        ey.clock = None;
        assert!(matches!(topsdown(&r, &ey), Err(Error::Incomputable { field: "clock", .. })));
    }

    #[test]
    fn backfill_never_overwrites_and_is_idempotent() {
        let r = reg();
        for chip in r.chips() {
            let Ok(b) = backfill_derived(chip) else { continue };
            for f in [ChipField::Area, ChipField::Power, ChipField::Throughput, ChipField::EnergyPerEvent] {
                if let Some(v) = chip.get(f) {
                    assert_eq!(b.record.get(f), Some(v), "{} {f}", chip.name);
                }
            }
            let again = backfill_derived(&b.record).unwrap();
            assert_eq!(again.record, b.record);
            assert!(again.fills.is_empty());
        }
    }

    #[test]
    fn under_determined() {
        let r = reg();
        let mut tn = r.chip("TrueNorth").unwrap().clone();
        tn.power = None;
        tn.energy_per_event = None;
        assert!(matches!(backfill_derived(&tn), Err(Error::UnderDetermined { .. })));
    }

    #[test]
    fn single_unknown_is_solved() {
        let r = reg();
        let mut tn = r.chip("TrueNorth").unwrap().clone();
        let p = tn.power.unwrap();
        tn.power = None;
        tn.derived.retain(|f| *f != ChipField::Power);
        let b = backfill_derived(&tn).unwrap();
        assert_eq!(b.fills.len(), 1);
        assert_eq!(b.fills[0].field, ChipField::Power);
        assert!(b.record.is_derived(ChipField::Power));
        assert!((b.record.power.unwrap() - p).abs() / p < 0.15);
    }
}
