//! Network-type transforms of raw elements: ANN passes through, CeNN adds
//! synapses and settling steps, SNN stretches time into spikes, ONN replaces
//! the synapse by a synchronizing oscillator.

use serde::{Deserialize, Serialize};

use crate::ade::AdeTriple;
use crate::elements::RawElementBench;
use crate::error::{Error, Result};
use crate::registry::{ElementFamily, GlobalConstants, NetworkKind, OscillatorClass, TechnologyId};

/// Spike coding of an SNN neuron.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Coding {
    #[default]
    Rate,
    Temporal,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NetworkElementBench {
    pub synapse: AdeTriple,
    pub neuron: AdeTriple,
    pub network_kind: NetworkKind,
    pub technology: TechnologyId,
    pub family: ElementFamily,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coding: Option<Coding>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oscillator_class: Option<OscillatorClass>,
    /// 1/ps.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub osc_frequency: Option<f64>,
    /// aJ/ps.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub osc_power: Option<f64>,
}

impl NetworkElementBench {
    fn plain(raw: &RawElementBench, kind: NetworkKind, synapse: AdeTriple, neuron: AdeTriple) -> Self {
        NetworkElementBench {
            synapse,
            neuron,
            network_kind: kind,
            technology: raw.technology.clone(),
            family: raw.family,
            coding: None,
            oscillator_class: None,
            osc_frequency: None,
            osc_power: None,
        }
    }
}

pub fn ann_transform(raw: &RawElementBench) -> NetworkElementBench {
    NetworkElementBench::plain(raw, NetworkKind::Ann, raw.synapse, raw.neuron)
}

pub fn cnn_transform(raw: &RawElementBench, c: &GlobalConstants) -> Result<NetworkElementBench> {
    let m_syn = c.cnn.synapse_factor;
    let m_step = c.cnn.settling_factor;
    if !(m_syn > 0.0 && m_step > 0.0) {
        return Err(Error::domain("cnn transform", "synapse and settling factors must be positive"));
    }
    let synapse = AdeTriple::new(
        raw.synapse.area * m_syn,
        raw.synapse.delay * m_step * m_syn,
        raw.synapse.energy * m_step * m_syn,
    );
    let neuron = raw.neuron.scale_delay(m_step).scale_energy(m_step);
    Ok(NetworkElementBench::plain(raw, NetworkKind::Cnn, synapse, neuron))
}

pub fn snn_transform(
    raw: &RawElementBench,
    c: &GlobalConstants,
    coding: Coding,
) -> Result<NetworkElementBench> {
    let s = c.spiking;
    if !(s.duration >= 1.0 && s.spacing >= 1.0 && s.to_fire >= 1.0) {
        return Err(Error::domain("snn transform", "spike factors must be at least 1"));
    }
    let synapse = raw
        .synapse
        .scale_delay(s.duration * s.spacing)
        .scale_energy(s.duration);
    let neuron_energy = match coding {
        Coding::Rate => s.duration * s.to_fire,
        Coding::Temporal => s.duration,
    };
    let neuron = raw
        .neuron
        .scale_delay(s.duration * s.spacing * s.to_fire)
        .scale_energy(neuron_energy);
    let mut out = NetworkElementBench::plain(raw, NetworkKind::Snn, synapse, neuron);
    out.coding = Some(coding);
    Ok(out)
}

/// Frequency (1/ps) and power (aJ/ps) of an oscillator. `inv4_delay` is
/// needed by transistor rings; `device` holds the intrinsic delay and energy
/// of the switching device.
pub fn oscillator(
    class: OscillatorClass,
    inv4_delay: Option<f64>,
    device: Option<AdeTriple>,
) -> Result<(f64, f64)> {
    let dev = |what: &str| -> Result<AdeTriple> {
        device
            .filter(|d| d.delay > 0.0 && d.energy > 0.0)
            .ok_or_else(|| Error::domain("onn transform", format!("{what} oscillator needs device intrinsics")))
    };
    Ok(match class {
        OscillatorClass::TransistorRing => {
            let t = inv4_delay
                .filter(|t| *t > 0.0)
                .ok_or_else(|| Error::domain("onn transform", "transistor ring needs the inv4 delay"))?;
            let d = dev("transistor ring")?;
            (0.1 / t, 3.0 * d.energy / d.delay)
        }
        OscillatorClass::Spintronic => {
            let d = dev("spintronic")?;
            (6.0 / d.delay, 6.0 * d.energy / d.delay)
        }
        OscillatorClass::Piezo => {
            let d = dev("piezo")?;
            (1.0 / d.delay, 3.0 * d.energy / d.delay)
        }
    })
}

pub fn onn_transform(
    raw: &RawElementBench,
    c: &GlobalConstants,
    class: OscillatorClass,
    inv4_delay: Option<f64>,
    device: Option<AdeTriple>,
) -> Result<NetworkElementBench> {
    let (f, p) = oscillator(class, inv4_delay, device)?;
    let delay = c.sync_periods / f;
    let energy = p * delay;
    let synapse = AdeTriple::new(10.0 * raw.synapse.area, delay, energy);
    let neuron = AdeTriple::new(30.0 * raw.neuron.area, delay, energy);
    let mut out = NetworkElementBench::plain(raw, NetworkKind::Onn, synapse, neuron);
    out.oscillator_class = Some(class);
    out.osc_frequency = Some(f);
    out.osc_power = Some(p);
    Ok(out)
}
