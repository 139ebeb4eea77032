//! The bottoms-up pipeline over a [`Registry`]: device and circuit data to
//! elements, network transforms, interconnect, chips and workloads.

use serde::Serialize;

use crate::chip::{chip_area_from, chip_bench, ChipBench, ChipConfig};
use crate::elements::raw_element;
use crate::error::Result;
use crate::interconnect::{assemble_row, drive_for, ic_lengths, ElementBench};
use crate::networks::{ann_transform, cnn_transform, onn_transform, snn_transform, Coding, NetworkElementBench};
use crate::registry::{NetworkKind, Registry, Schedule, Technology};
use crate::workload::{run_workload, Execution, WorkloadBench};

/// Network-type element of a technology, before interconnect.
pub fn network_element(reg: &Registry, tech: &Technology) -> Result<NetworkElementBench> {
    let raw = raw_element(reg, tech)?;
    let c = reg.constants_for(tech.primitives.as_deref());
    match tech.kind() {
        NetworkKind::Ann => Ok(ann_transform(&raw)),
        NetworkKind::Cnn => cnn_transform(&raw, &c),
        NetworkKind::Snn => snn_transform(&raw, &c, Coding::Rate),
        NetworkKind::Onn => {
            let class = tech.oscillator.ok_or_else(|| {
                crate::Error::invalid(tech.label(), "oscillator", "oscillator network needs an oscillator class")
            })?;
            let inv4 = match tech.primitives.as_deref() {
                Some(p) => Some(reg.primitives(p)?.inv4.delay),
                None => None,
            };
            let device = reg.device(&tech.id.synapse_device)?.intrinsic();
            onn_transform(&raw, &c, class, inv4, Some(device))
        }
    }
}

/// Full element row of a technology inside the chip `cfg`: the core wire
/// spans one core's synapses, the chip wire spans the chip.
pub fn element_bench_in(reg: &Registry, tech: &Technology, cfg: &ChipConfig) -> Result<ElementBench> {
    let net = network_element(reg, tech)?;
    let c = reg.constants_for(tech.primitives.as_deref());
    let per_core = cfg.neurons_per_core as f64 * cfg.synapses_per_neuron as f64;
    let a_ch = chip_area_from(cfg, net.synapse.area, net.neuron.area, &c);
    let (core_len, chip_len) = ic_lengths(net.synapse.area * per_core, a_ch);
    assemble_row(&net, core_len, chip_len, drive_for(reg, tech, &c)?, &c)
}

/// Element row on the nominal chip.
pub fn element_bench(reg: &Registry, tech: &Technology) -> Result<ElementBench> {
    element_bench_in(reg, tech, &ChipConfig::nominal(reg.constants(), tech.kind()))
}

/// Rows of every technology, optionally of one network kind, in dataset
/// order.
pub fn element_matrix(reg: &Registry, kind: Option<NetworkKind>) -> Result<Vec<ElementBench>> {
    reg.technologies(kind).into_iter().map(|t| element_bench(reg, t)).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChipResult {
    pub config: ChipConfig,
    pub element: ElementBench,
    pub chip: ChipBench,
}

pub fn chip_for(reg: &Registry, tech: &Technology, cfg: &ChipConfig) -> Result<ChipResult> {
    cfg.validate()?;
    let element = element_bench_in(reg, tech, cfg)?;
    let c = reg.constants_for(tech.primitives.as_deref());
    let chip = chip_bench(cfg, &element, &c)?;
    Ok(ChipResult { config: *cfg, element, chip })
}

pub fn nominal_chip(reg: &Registry, tech: &Technology) -> Result<ChipResult> {
    chip_for(reg, tech, &ChipConfig::nominal(reg.constants(), tech.kind()))
}

/// Runs a named workload on a technology's nominal element.
pub fn workload_bench(
    reg: &Registry,
    workload: &str,
    tech: &Technology,
    schedule: Option<Schedule>,
) -> Result<WorkloadBench> {
    let spec = reg.workload(workload)?;
    let elem = element_bench(reg, tech)?;
    let exec = Execution::for_technology(reg, tech, schedule);
    run_workload(spec, &elem, &exec, &reg.constants_for(tech.primitives.as_deref()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_covers_all_technologies() {
        let r = Registry::builtin().unwrap();
        let m = element_matrix(&r, None).unwrap();
        assert_eq!(m.len(), 56);
        for row in &m {
            assert!(row.columns().iter().all(|v| v.is_finite() && *v > 0.0), "{}", row.technology.label);
        }
    }

    #[test]
    fn every_workload_runs() {
        let r = Registry::builtin().unwrap();
        for t in r.technologies(None) {
            for w in r.workloads() {
                let b = workload_bench(&r, &w.name, t, None).unwrap();
                assert!(b.energy > 0.0 && b.delay > 0.0 && b.area > 0.0);
            }
        }
    }
}
