//! Raw synapse and neuron costs for each element family, before any
//! network-type transform.

use serde::Serialize;

use crate::ade::AdeTriple;
use crate::circuits::{analog_read, ota_cell, sense_amp, voltage_sense_amp};
use crate::error::{Error, Result};
use crate::registry::{
    CircuitPrimitiveTable, DeviceRecord, ElementFamily, GlobalConstants, Registry, Technology,
    TechnologyId,
};
use crate::units::{joules_to_aj, seconds_to_ps, watts_to_aj_per_ps};

/// Synapse and neuron of one design.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ElementPair {
    pub synapse: AdeTriple,
    pub neuron: AdeTriple,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RawElementBench {
    pub synapse: AdeTriple,
    pub neuron: AdeTriple,
    pub technology: TechnologyId,
    pub family: ElementFamily,
}

/// Whether a resistive synapse stores binary bits read by a voltage sense
/// amplifier, or analog levels read by the analog read circuit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ResistiveMode {
    Digital,
    Analog,
}

/// Register-based digital neuron, without its reading circuit.
fn digital_cmos_neuron(c: &GlobalConstants, p: &CircuitPrimitiveTable) -> AdeTriple {
    let nb = c.n_bits();
    AdeTriple::new(
        nb * (2.0 * p.reg.area + p.inv.area + p.nan.area + p.add1.area + p.se.area),
        2.0 * p.reg.delay + 3.0 * p.se.delay + p.nan.delay + p.inv.delay + nb * p.add1.delay,
        nb * (2.0 * p.reg.energy + 3.0 * p.se.energy + p.nan.energy + p.inv.energy + p.add1.energy),
    )
}

/// Adds a per-bit reading circuit: its area and energy once per bit, its
/// delay once.
fn with_per_bit_reader(neuron: AdeTriple, reader: AdeTriple, n_bits: f64) -> AdeTriple {
    AdeTriple::new(
        neuron.area + n_bits * reader.area,
        neuron.delay + reader.delay,
        neuron.energy + n_bits * reader.energy,
    )
}

pub fn digital_sram_element(c: &GlobalConstants, p: &CircuitPrimitiveTable) -> Result<ElementPair> {
    check_bits(c)?;
    let nb = c.n_bits();
    let synapse = AdeTriple::new(
        nb * p.reg.area,
        3.0 * p.reg.delay + 4.0 * p.se.delay + p.nan.delay + p.inv.delay + nb * p.add1.delay,
        nb * (3.0 * p.reg.energy + 4.0 * p.se.energy + p.nan.energy + p.inv.energy + p.add1.energy),
    );
    let sa = sense_amp(c, p)?;
    Ok(ElementPair {
        synapse,
        neuron: with_per_bit_reader(digital_cmos_neuron(c, p), sa.triple(), nb),
    })
}

pub fn digital_mac_element(c: &GlobalConstants, p: &CircuitPrimitiveTable) -> Result<ElementPair> {
    check_bits(c)?;
    let nb = c.n_bits();
    Ok(ElementPair {
        synapse: AdeTriple::new(
            (nb + 1.0) * p.add.area + p.se.area,
            p.add.delay + p.se.delay,
            (nb + 1.0) * p.add.energy / 2.0 + p.se.energy,
        ),
        neuron: AdeTriple::new(
            p.add.area + 2.0 * p.se.area + nb * p.ram.area,
            p.add.delay + 2.0 * p.se.delay + p.ram.delay,
            p.add.energy + 2.0 * p.se.energy + nb * p.ram.energy,
        ),
    })
}

/// OTA-based analog synapse and opamp neuron.
pub fn analog_transistor_element(
    c: &GlobalConstants,
    p: &CircuitPrimitiveTable,
) -> Result<ElementPair> {
    let ota = ota_cell(c)?;
    let w = c.ota_widths;
    let cells = (w.input + w.pull_up + w.output) / c.digital_width;
    let delay = seconds_to_ps(8.4 * ota.effective_resistance * ota.cell_cap);
    let p_syn = watts_to_aj_per_ps(c.vcc() * ota.ota_current);
    let p_neu = watts_to_aj_per_ps(c.vcc() * (ota.opamp_current + ota.ota_current));
    Ok(ElementPair {
        synapse: AdeTriple::new(2.0 * p.inv4.area * cells, delay, p_syn * delay),
        neuron: AdeTriple::new(3.0 * p.inv4.area * cells, delay, p_neu * delay),
    })
}

/// Synapse and neuron each made of one switching device holding `n_l`
/// levels.
pub fn analog_single_device_element(dev: &DeviceRecord, c: &GlobalConstants) -> Result<ElementPair> {
    let d = dev.intrinsic();
    if !d.is_positive() {
        return Err(Error::invalid(&dev.name, "intrinsic", "device lacks intrinsic values"));
    }
    let nl = c.n_levels();
    Ok(ElementPair {
        synapse: AdeTriple::new(nl * d.area, d.delay, d.energy),
        neuron: AdeTriple::new(nl * d.area, nl * d.delay / 4.0, nl * d.energy),
    })
}

/// Upper bound of a multi-level resistive cell's resistance, Ω.
pub fn effective_resistance(r_on: f64, c: &GlobalConstants) -> f64 {
    r_on * c.n_levels().sqrt()
}

/// Resistive memory synapse only.
pub fn resistive_synapse_cell(dev: &DeviceRecord, c: &GlobalConstants) -> Result<AdeTriple> {
    let (r_on, _) = dev
        .resistances()
        .ok_or_else(|| Error::invalid(&dev.name, "r_on", "resistive synapse needs r_on and r_off"))?;
    let vcc = c.vcc();
    let i_on = vcc / r_on;
    let seconds = 2.3 * effective_resistance(r_on, c) * c.min_ic_capacitance();
    Ok(AdeTriple::new(
        dev.area_int,
        seconds_to_ps(seconds),
        joules_to_aj(i_on * vcc * seconds),
    ))
}

/// Resistive synapse with its CMOS neuron and reading circuit. `s_neu` is
/// the number of cells sharing a bit line.
pub fn resistive_synapse(
    dev: &DeviceRecord,
    c: &GlobalConstants,
    p: &CircuitPrimitiveTable,
    mode: ResistiveMode,
    s_neu: u64,
) -> Result<ElementPair> {
    let synapse = resistive_synapse_cell(dev, c)?;
    let (r_on, r_off) = dev.resistances().expect("checked by resistive_synapse_cell");
    let neuron = match mode {
        ResistiveMode::Digital => {
            check_bits(c)?;
            let vsa = voltage_sense_amp(c, p, r_on, r_off, s_neu)?;
            with_per_bit_reader(digital_cmos_neuron(c, p), vsa.triple(), c.n_bits())
        }
        ResistiveMode::Analog => {
            analog_transistor_element(c, p)?.neuron + analog_read(c, p)?.triple()
        }
    };
    Ok(ElementPair { synapse, neuron })
}

fn check_bits(c: &GlobalConstants) -> Result<()> {
    if c.bits_per_synapse == 0 {
        return Err(Error::domain("digital element", "needs at least one bit per synapse"));
    }
    Ok(())
}

/// Raw element of a technology, dispatched on its family.
pub fn raw_element(reg: &Registry, tech: &Technology) -> Result<RawElementBench> {
    let c = reg.constants_for(tech.primitives.as_deref());
    let prims = || -> Result<&CircuitPrimitiveTable> {
        let name = tech.primitives.as_deref().ok_or_else(|| {
            Error::invalid(tech.label(), "primitives", "missing primitive entry")
        })?;
        reg.primitives(name)
    };
    let s_neu = c.nominal.synapses_per_neuron;
    let pair = match tech.family {
        ElementFamily::DigitalSram => digital_sram_element(&c, prims()?)?,
        ElementFamily::DigitalMac => digital_mac_element(&c, prims()?)?,
        ElementFamily::AnalogTransistor => analog_transistor_element(&c, prims()?)?,
        ElementFamily::AnalogSingleDevice => {
            analog_single_device_element(reg.device(&tech.id.synapse_device)?, &c)?
        }
        ElementFamily::ResistiveDigital => resistive_synapse(
            reg.device(&tech.id.synapse_device)?,
            &c,
            prims()?,
            ResistiveMode::Digital,
            s_neu,
        )?,
        ElementFamily::ResistiveAnalog => resistive_synapse(
            reg.device(&tech.id.synapse_device)?,
            &c,
            prims()?,
            ResistiveMode::Analog,
            s_neu,
        )?,
    };
    Ok(RawElementBench {
        synapse: pair.synapse,
        neuron: pair.neuron,
        technology: tech.id.clone(),
        family: tech.family,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn reg() -> Registry {
        Registry::builtin().unwrap()
    }

    #[test]
    fn sram_synapse_area_matches_calibration() {
        let r = reg();
        let e = digital_sram_element(r.constants(), r.primitives("cmos").unwrap()).unwrap();
        // 8 bits of a 345,600 nm² register.
        assert_relative_eq!(e.synapse.area, 8.0 * 345_600.0);
        assert_relative_eq!(e.synapse.area / 1e6, 2.7648, max_relative = 1e-12);
    }

    #[test]
    fn sram_unit_primitives() {
        let r = reg();
        let mut c = r.constants().clone();
        c.bits_per_synapse = 1;
        let p = CircuitPrimitiveTable::uniform(AdeTriple::new(1.0, 1.0, 1.0));
        let e = digital_sram_element(&c, &p).unwrap();
        assert_eq!(e.synapse.delay, 10.0);
    }

    #[test]
    fn mac_synapse() {
        let r = reg();
        let p = *r.primitives("cmos").unwrap();
        let e = digital_mac_element(r.constants(), &p).unwrap();
        assert_eq!(e.synapse.area, 9.0 * p.add.area + p.se.area);
        assert_relative_eq!(e.synapse.area / 1e6, 336.9, max_relative = 1e-12);
        let mut q = p;
        q.add.energy = 2.0;
        q.se.energy = 1.0;
        assert_eq!(digital_mac_element(r.constants(), &q).unwrap().synapse.energy, 10.0);
    }

    #[test]
    fn analog_transistor_relations() {
        let r = reg();
        let c = r.constants();
        let p = r.primitives("cmos").unwrap();
        let e = analog_transistor_element(c, p).unwrap();
        assert_eq!(e.neuron.delay, e.synapse.delay);
        let ota = ota_cell(c).unwrap();
        let extra = watts_to_aj_per_ps(c.vcc() * ota.opamp_current);
        assert_relative_eq!(
            e.neuron.power() - e.synapse.power(),
            extra,
            max_relative = 1e-9
        );
        assert_relative_eq!(e.synapse.area / 1e6, 0.338, max_relative = 1e-12);
    }

    #[test]
    fn single_device_me() {
        let r = reg();
        let e = analog_single_device_element(r.device("ME").unwrap(), r.constants()).unwrap();
        assert_relative_eq!(e.neuron.delay, 64.0 * 679.91 / 4.0, max_relative = 1e-12);
        assert_relative_eq!(e.neuron.delay, 10_878.56, max_relative = 1e-12);
        let mut c = r.constants().clone();
        c.levels_per_synapse = 4;
        let e4 = analog_single_device_element(r.device("ME").unwrap(), &c).unwrap();
        assert_eq!(e4.neuron.delay, 679.91);
    }

    #[test]
    fn oxide_synapse() {
        let r = reg();
        let c = r.constants();
        let ox = r.device("OxideR").unwrap();
        assert_relative_eq!(effective_resistance(200e3, c), 1.6e6);
        let s = resistive_synapse_cell(ox, c).unwrap();
        assert_relative_eq!(s.delay, 552.0, max_relative = 1e-12);
        assert_eq!(s.area, 3600.0);
        let mut c1 = c.clone();
        c1.levels_per_synapse = 1;
        assert_eq!(effective_resistance(200e3, &c1), 200e3);
    }

    #[test]
    fn every_technology_dispatches() {
        let r = reg();
        for t in r.technologies(None) {
            let e = raw_element(&r, t).unwrap();
            assert!(e.synapse.is_positive() && e.neuron.is_positive(), "{}", t.label());
            assert_eq!(e.family, t.family);
        }
    }

    #[test]
    fn resistive_needs_resistances() {
        let r = reg();
        assert!(resistive_synapse_cell(r.device("ME").unwrap(), r.constants()).is_err());
    }

    proptest! {
        #[test]
        fn digital_linear_in_bits(nb in 1u32..64) {
            let r = reg();
            let p = r.primitives("cmos").unwrap();
            let mut c = r.constants().clone();
            c.bits_per_synapse = nb;
            let a = digital_sram_element(&c, p).unwrap();
            c.bits_per_synapse = 2 * nb;
            let b = digital_sram_element(&c, p).unwrap();
            prop_assert!((b.synapse.area / a.synapse.area - 2.0).abs() < 1e-12);
            prop_assert!((b.synapse.energy / a.synapse.energy - 2.0).abs() < 1e-12);
        }

        #[test]
        fn single_device_linear_in_levels(nl in 1u32..1024) {
            let r = reg();
            let mut c = r.constants().clone();
            c.levels_per_synapse = nl;
            for name in ["STT,pma", "SOT", "DW", "ME", "FEFET"] {
                let d = r.device(name).unwrap();
                let e = analog_single_device_element(d, &c).unwrap();
                prop_assert!((e.synapse.area / d.area_int - f64::from(nl)).abs() < 1e-9);
            }
        }

        #[test]
        fn resistive_delay_scales_with_sqrt_levels(nl in 1u32..4096) {
            let r = reg();
            let d = r.device("PCMR").unwrap();
            let mut c = r.constants().clone();
            c.levels_per_synapse = 1;
            let base = resistive_synapse_cell(d, &c).unwrap().delay;
            c.levels_per_synapse = nl;
            let scaled = resistive_synapse_cell(d, &c).unwrap().delay;
            prop_assert!((scaled / base - f64::from(nl).sqrt()).abs() < 1e-9);
        }
    }
}
