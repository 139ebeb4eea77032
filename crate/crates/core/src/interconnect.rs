//! Core-wide and chip-wide interconnect costs, merged into the full
//! twelve-column element benchmark.

use serde::Serialize;

use crate::ade::AdeTriple;
use crate::error::{Error, Result};
use crate::networks::NetworkElementBench;
use crate::registry::{DeviceClass, ElementFamily, GlobalConstants, Registry, Technology, TechnologyId};
use crate::units::{joules_to_aj, nm_to_m, seconds_to_ps};

/// Full benchmark of one technology: synapse, core interconnect ("lic"),
/// neuron and chip interconnect ("gic").
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ElementBench {
    pub technology: TechnologyId,
    pub synapse: AdeTriple,
    pub core_ic: AdeTriple,
    pub neuron: AdeTriple,
    pub chip_ic: AdeTriple,
}

impl ElementBench {
    /// Synapse path including the core interconnect.
    pub fn synapse_total(&self) -> AdeTriple {
        self.synapse + self.core_ic
    }

    /// Neuron path including the chip interconnect.
    pub fn neuron_total(&self) -> AdeTriple {
        self.neuron + self.chip_ic
    }

    /// The twelve values in column order: areas, then delays, then
    /// energies, each as syn, lic, neu, gic.
    pub fn columns(&self) -> [f64; 12] {
        let t = [self.synapse, self.core_ic, self.neuron, self.chip_ic];
        [
            t[0].area, t[1].area, t[2].area, t[3].area,
            t[0].delay, t[1].delay, t[2].delay, t[3].delay,
            t[0].energy, t[1].energy, t[2].energy, t[3].energy,
        ]
    }
}

/// Electrical context in which a technology drives its wires.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Drive {
    /// V.
    pub voltage: f64,
    /// Ω; zero unless the synapse is a resistive memory cell.
    pub r_eff: f64,
    /// A.
    pub neuron_current: f64,
}

/// Energy to charge a wire of `length` nm at `voltage`, aJ.
pub fn ic_energy(length: f64, voltage: f64, c: &GlobalConstants) -> f64 {
    joules_to_aj(c.ic_cap_per_length * nm_to_m(length) * voltage * voltage)
}

/// Wire lengths spanning a synapse block and a chip, nm.
pub fn ic_lengths(synapse_block_area: f64, chip_area: f64) -> (f64, f64) {
    (synapse_block_area.sqrt(), chip_area.sqrt())
}

/// Footprint of a wire: its length times the wire pitch, nm².
pub fn ic_area(length: f64, c: &GlobalConstants) -> f64 {
    length * c.wire_pitch
}

/// RC delay of a core-wide wire driven through `r_eff`, ps.
pub fn core_ic_delay(length: f64, r_eff: f64, c: &GlobalConstants) -> f64 {
    let c_ic = c.min_ic_capacitance();
    let r_ic = c.min_ic_resistance;
    let segment = 0.38 * r_ic * c_ic + r_eff * c_ic + r_ic * c.load_capacitance;
    seconds_to_ps(segment * length / c.min_ic_length)
}

/// Delay of charging a chip-wide wire with the neuron's drive current, ps.
pub fn chip_ic_delay(length: f64, current: f64, voltage: f64, c: &GlobalConstants) -> Result<f64> {
    if !(current > 0.0) {
        return Err(Error::domain("chip interconnect", "undriven global wire: neuron current must be positive"));
    }
    let joules = c.ic_cap_per_length * nm_to_m(length) * voltage * voltage;
    Ok(seconds_to_ps(joules / (current * voltage)))
}

fn wire(length: f64, delay: f64, voltage: f64, c: &GlobalConstants) -> AdeTriple {
    AdeTriple::new(ic_area(length, c), delay, ic_energy(length, voltage, c))
}

/// Merges a network element with its interconnects. Lengths in nm.
pub fn assemble_row(
    net: &NetworkElementBench,
    core_len: f64,
    chip_len: f64,
    drive: Drive,
    c: &GlobalConstants,
) -> Result<ElementBench> {
    if !(core_len >= 0.0 && chip_len >= 0.0) {
        return Err(Error::domain("interconnect", "wire lengths must be non-negative"));
    }
    let core_delay = core_ic_delay(core_len, drive.r_eff, c);
    let chip_delay = chip_ic_delay(chip_len, drive.neuron_current, drive.voltage, c)?;
    Ok(ElementBench {
        technology: net.technology.clone(),
        synapse: net.synapse,
        core_ic: wire(core_len, core_delay, drive.voltage, c),
        neuron: net.neuron,
        chip_ic: wire(chip_len, chip_delay, drive.voltage, c),
    })
}

/// Wire voltage, effective synapse resistance and neuron drive current of a
/// technology. `c` must already carry the technology's transistor family.
pub fn drive_for(reg: &Registry, tech: &Technology, c: &GlobalConstants) -> Result<Drive> {
    let neuron = reg.device(&tech.id.neuron_device)?;
    let single = tech.family == ElementFamily::AnalogSingleDevice;
    let voltage = if single && neuron.class == DeviceClass::Spintronic {
        c.spintronic_voltage
    } else {
        c.vcc()
    };
    let r_eff = if tech.family.is_resistive() {
        let (r_on, _) = reg.device(&tech.id.synapse_device)?.resistances().ok_or_else(|| {
            Error::invalid(&tech.id.synapse_device, "r_on", "resistive synapse needs r_on and r_off")
        })?;
        crate::elements::effective_resistance(r_on, c)
    } else {
        0.0
    };
    let neuron_current = match tech.neuron_drive_current.or(c.neuron_drive_current) {
        Some(i) => i,
        None if tech.family.is_resistive() => {
            let (r_on, _) = reg.device(&tech.id.synapse_device)?.resistances().expect("checked above");
            c.vcc() / r_on
        }
        None if single => {
            let d = neuron.intrinsic();
            if !(d.delay > 0.0) {
                return Err(Error::invalid(&neuron.name, "delay_int", "device delay must be positive"));
            }
            // Current that delivers the switching energy within the switching time.
            crate::units::aj_per_ps_to_watts(d.energy / d.delay) / voltage
        }
        None => c.transistor.on_current_per_width * nm_to_m(c.digital_width),
    };
    Ok(Drive { voltage, r_eff, neuron_current })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn constants() -> GlobalConstants {
        Registry::builtin().unwrap().constants().clone()
    }

    #[test]
    fn truenorth_spike_energy() {
        // 15 mm at 1 V with 0.5 nF/m.
        let e = ic_energy(15e6, 1.0, &constants());
        assert_relative_eq!(e, 7.5e6, max_relative = 1e-12);
        assert_eq!(ic_energy(0.0, 0.8, &constants()), 0.0);
    }

    #[test]
    fn lengths_are_square_roots() {
        assert_eq!(ic_lengths(1e6, 0.0), (1000.0, 0.0));
    }

    #[test]
    fn single_segment_delay() {
        let c = constants();
        let expect = seconds_to_ps(
            0.38 * c.min_ic_resistance * c.min_ic_capacitance() + c.min_ic_resistance * c.load_capacitance,
        );
        assert_relative_eq!(core_ic_delay(c.min_ic_length, 0.0, &c), expect, max_relative = 1e-12);
        let distributed = seconds_to_ps(0.38 * 667.0 * 0.15e-15);
        assert_relative_eq!(distributed, 0.038, max_relative = 0.01);
    }

    #[test]
    fn undriven_wire_rejected() {
        assert!(chip_ic_delay(10.0, 0.0, 0.8, &constants()).is_err());
        assert_eq!(chip_ic_delay(0.0, 1e-6, 0.8, &constants()).unwrap(), 0.0);
    }

    #[test]
    fn spintronic_wires_run_at_low_voltage() {
        let r = Registry::builtin().unwrap();
        let c = r.constants();
        let me = r.technology("ANNMEME").unwrap();
        let sram = r.technology("ANNDCSRAM").unwrap();
        assert_eq!(drive_for(&r, me, c).unwrap().voltage, c.spintronic_voltage);
        assert_eq!(drive_for(&r, sram, c).unwrap().voltage, c.vcc());
        assert_eq!(drive_for(&r, sram, c).unwrap().r_eff, 0.0);
    }

    proptest! {
        #[test]
        fn energy_linear_in_length(a in 0.0f64..1e8, b in 0.0f64..1e8, v in 0.05f64..2.0) {
            let c = constants();
            let sum = ic_energy(a + b, v, &c);
            let parts = ic_energy(a, v, &c) + ic_energy(b, v, &c);
            prop_assert!((sum - parts).abs() <= 1e-9 * sum.max(1.0));
            let quad = ic_energy(a, 2.0 * v, &c);
            prop_assert!((quad - 4.0 * ic_energy(a, v, &c)).abs() <= 1e-9 * quad.max(1.0));
        }

        #[test]
        fn chip_delay_identity(l in 0.0f64..1e8, i in 1e-9f64..1e-3, v in 0.05f64..2.0) {
            let c = constants();
            let t = chip_ic_delay(l, i, v, &c).unwrap();
            let e = ic_energy(l, v, &c);
            // τ·I·V in aJ equals the charging energy.
            let tiv = t * 1e-12 * i * v * 1e18;
            prop_assert!((tiv - e).abs() <= 1e-9 * e.max(1e-12));
            let half = chip_ic_delay(l, 2.0 * i, v, &c).unwrap();
            prop_assert!((2.0 * half - t).abs() <= 1e-9 * t.max(1e-12));
        }

        #[test]
        fn core_delay_linear(l in 0.0f64..1e7, r in 0.0f64..1e7) {
            let c = constants();
            let one = core_ic_delay(l, r, &c);
            let two = core_ic_delay(2.0 * l, r, &c);
            prop_assert!((two - 2.0 * one).abs() <= 1e-9 * two.max(1e-12));
        }
    }
}
