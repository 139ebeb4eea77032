//! Whole-chip aggregation: area with layout overheads, firing rate, time
//! step, throughput and power.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interconnect::ElementBench;
use crate::registry::{GlobalConstants, NetworkKind};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChipConfig {
    pub cores: u64,
    pub neurons_per_core: u64,
    pub synapses_per_neuron: u64,
    /// Share of synapses active per step.
    pub activity: f64,
    pub spiking: bool,
}

impl ChipConfig {
    /// The nominal chip for a network kind, fully active.
    pub fn nominal(c: &GlobalConstants, kind: NetworkKind) -> Self {
        ChipConfig {
            cores: c.nominal.cores,
            neurons_per_core: c.nominal.neurons_per_core,
            synapses_per_neuron: c.nominal.synapses_per_neuron,
            activity: 1.0,
            spiking: kind.is_spiking(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.cores == 0 || self.neurons_per_core == 0 || self.synapses_per_neuron == 0 {
            return Err(Error::domain("chip config", "cores, neurons and synapses must be at least 1"));
        }
        if !(self.activity > 0.0 && self.activity <= 1.0) {
            return Err(Error::domain("chip config", format!("activity {} outside (0, 1]", self.activity)));
        }
        Ok(())
    }

    pub fn total_synapses(&self) -> u64 {
        self.cores * self.neurons_per_core * self.synapses_per_neuron
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChipBench {
    pub total_synapses: u64,
    /// nm².
    pub area: f64,
    /// 1/ps.
    pub firing_rate: f64,
    /// ps.
    pub time_step: f64,
    /// aJ per synaptic event, neuron share included.
    pub energy_per_event: f64,
    /// Synaptic events per ps.
    pub throughput: f64,
    /// aJ/ps.
    pub power: f64,
    /// aJ.
    pub energy_per_step: f64,
}

/// Chip area from synapse and neuron areas, nm².
pub fn chip_area_from(cfg: &ChipConfig, a_syn: f64, a_neu: f64, c: &GlobalConstants) -> f64 {
    let m = c.overhead;
    let core = m.core
        * cfg.neurons_per_core as f64
        * (m.neuron * a_neu + cfg.synapses_per_neuron as f64 * m.synapse * a_syn);
    m.chip * cfg.cores as f64 * core
}

/// Chip area of an element, interconnect excluded, nm².
pub fn chip_area(cfg: &ChipConfig, elem: &ElementBench, c: &GlobalConstants) -> f64 {
    chip_area_from(cfg, elem.synapse.area, elem.neuron.area, c)
}

/// Neuron firing rate, 1/ps.
pub fn firing_rate(cfg: &ChipConfig, synapse_delay: f64) -> Result<f64> {
    if !(synapse_delay > 0.0) {
        return Err(Error::domain("firing rate", "synapse delay must be positive"));
    }
    Ok(if cfg.spiking {
        1.0 / (cfg.activity * cfg.synapses_per_neuron as f64 * synapse_delay)
    } else {
        1.0 / synapse_delay
    })
}

/// Chip figures from the element's synapse and neuron paths, each including
/// its interconnect.
pub fn chip_bench(cfg: &ChipConfig, elem: &ElementBench, c: &GlobalConstants) -> Result<ChipBench> {
    cfg.validate()?;
    let syn = elem.synapse_total();
    let neu = elem.neuron_total();
    let f = firing_rate(cfg, syn.delay)?;
    let active = cfg.activity * cfg.synapses_per_neuron as f64;
    let time_step = 1.0 / f + neu.delay;
    let energy_per_event = syn.energy + neu.energy / active;
    let s_ch = cfg.total_synapses();
    let throughput = f * cfg.activity * s_ch as f64;
    let power = throughput * energy_per_event;
    Ok(ChipBench {
        total_synapses: s_ch,
        area: chip_area(cfg, elem, c),
        firing_rate: f,
        time_step,
        energy_per_event,
        throughput,
        power,
        energy_per_step: power * time_step,
    })
}
