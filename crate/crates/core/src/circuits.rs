//! Reading and driving sub-circuits attached to neurons, and the OTA cell
//! behind analog transistor synapses.

use serde::Serialize;

use crate::ade::AdeTriple;
use crate::error::{Error, Result};
use crate::registry::{CircuitPrimitiveTable, GlobalConstants};
use crate::units::{joules_to_aj, nm_to_m, seconds_to_ps, watts_to_aj_per_ps};

/// SRAM sense amplifier, per bit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SenseAmpBench {
    pub area: f64,
    /// S.
    pub transconductance: f64,
    /// F.
    pub load_cap: f64,
    pub delay: f64,
    pub energy: f64,
}

impl SenseAmpBench {
    pub fn triple(&self) -> AdeTriple {
        AdeTriple::new(self.area, self.delay, self.energy)
    }
}

pub fn sense_amp(c: &GlobalConstants, p: &CircuitPrimitiveTable) -> Result<SenseAmpBench> {
    let w = c.sense_amp_widths;
    let vcc = c.vcc();
    if c.sense_voltage >= vcc {
        return Err(Error::domain(
            "sense amplifier",
            format!("sense voltage {} V must be below the supply {} V", c.sense_voltage, vcc),
        ));
    }
    let area = p.inv1.area * (w.p + w.n + w.iso + w.en) / c.digital_width;
    let g = c.transistor.linear_transconductance * (w.p + w.n) / c.digital_width;
    if !(g > 0.0) {
        return Err(Error::domain("sense amplifier", "zero transconductance"));
    }
    let load_cap = c.transistor.cap_per_width * nm_to_m(w.p + w.n);
    let delay = seconds_to_ps((vcc / c.sense_voltage).ln() * load_cap / g) + c.n_bits() * p.add1.delay;
    let energy = joules_to_aj(load_cap * vcc * vcc);
    Ok(SenseAmpBench {
        area,
        transconductance: g,
        load_cap,
        delay,
        energy,
    })
}

/// Voltage sense amplifier reading a digital resistive cell, per bit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VoltageSenseAmpBench {
    pub area: f64,
    /// Ω.
    pub precharge_resistance: f64,
    /// F.
    pub sense_cap: f64,
    /// F.
    pub bitline_cap: f64,
    pub delay: f64,
    pub energy: f64,
}

impl VoltageSenseAmpBench {
    pub fn triple(&self) -> AdeTriple {
        AdeTriple::new(self.area, self.delay, self.energy)
    }
}

/// `r_on`, `r_off` in Ω; `s_neu` is the number of cells on the bit line.
/// `r_off` may be infinite.
pub fn voltage_sense_amp(
    c: &GlobalConstants,
    p: &CircuitPrimitiveTable,
    r_on: f64,
    r_off: f64,
    s_neu: u64,
) -> Result<VoltageSenseAmpBench> {
    if !(r_on > 0.0 && r_on.is_finite()) {
        return Err(Error::domain("voltage sense amplifier", format!("r_on must be positive, got {r_on}")));
    }
    if !(r_off > r_on) {
        return Err(Error::domain(
            "voltage sense amplifier",
            format!("r_off ({r_off}) must exceed r_on ({r_on}); no read current difference"),
        ));
    }
    let vcc = c.vcc();
    let r_pch = c.transistor.on_resistance;
    let sense_cap = 2.0 * c.transistor.cap_per_width * nm_to_m(c.digital_width);
    let bitline_cap = s_neu as f64 * c.min_ic_capacitance();
    let drive = c.vsa_read_voltage / r_on - c.vsa_read_voltage / r_off;
    let seconds = 2.3 * r_pch * sense_cap + c.vsa_sense_voltage * (sense_cap + bitline_cap) / drive;
    Ok(VoltageSenseAmpBench {
        area: 6.0 * p.inv1.area,
        precharge_resistance: r_pch,
        sense_cap,
        bitline_cap,
        delay: seconds_to_ps(seconds) + 2.0 * c.n_bits() * p.add1.delay,
        energy: joules_to_aj(sense_cap * vcc * vcc),
    })
}

/// Read circuit for one analog resistive cell.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AnalogReadBench {
    pub area: f64,
    /// V.
    pub column_voltage: f64,
    pub delay: f64,
    /// aJ/ps.
    pub power: f64,
    pub energy: f64,
}

impl AnalogReadBench {
    pub fn triple(&self) -> AdeTriple {
        AdeTriple::new(self.area, self.delay, self.energy)
    }
}

pub fn analog_read(c: &GlobalConstants, p: &CircuitPrimitiveTable) -> Result<AnalogReadBench> {
    let v_col = c.analog_row_voltage - c.vsa_read_voltage;
    if !(v_col > 0.0) {
        return Err(Error::domain(
            "analog read",
            format!(
                "row voltage {} V must exceed the cell read voltage {} V",
                c.analog_row_voltage, c.vsa_read_voltage
            ),
        ));
    }
    let delay = c.analog_read_pulse + 2.0 * c.n_bits() * p.add1.delay;
    let power = watts_to_aj_per_ps(25.0 * v_col * v_col / c.transistor.on_resistance);
    Ok(AnalogReadBench {
        area: 32.0 * p.inv1.area,
        column_voltage: v_col,
        delay,
        power,
        energy: power * delay,
    })
}

/// Electrical operating point of the two-OTA analog cell.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OtaCellBench {
    /// F.
    pub cell_cap: f64,
    /// V per decade.
    pub subthreshold_swing: f64,
    /// A.
    pub bias_current: f64,
    /// S.
    pub ota_transconductance: f64,
    /// S.
    pub output_conductance: f64,
    /// Ω.
    pub effective_resistance: f64,
    /// A.
    pub opamp_current: f64,
    /// A.
    pub ota_current: f64,
}

pub fn ota_cell(c: &GlobalConstants) -> Result<OtaCellBench> {
    let t = &c.transistor;
    if !(t.off_current_per_width > 0.0 && t.on_current_per_width > t.off_current_per_width) {
        return Err(Error::domain(
            "OTA cell",
            format!(
                "on current {} A/m must exceed off current {} A/m",
                t.on_current_per_width, t.off_current_per_width
            ),
        ));
    }
    if !(c.cnn.max_weight > 0.0) {
        return Err(Error::domain("OTA cell", "maximum weight must be positive"));
    }
    let w = c.ota_widths;
    let cell_cap = 4.0 * t.cap_per_width * nm_to_m(w.output);
    let ss = t.saturation_voltage / (t.on_current_per_width / t.off_current_per_width).log10();
    let bias = (t.on_current_per_width * t.off_current_per_width).sqrt() * nm_to_m(w.input);
    let g_ota = bias * std::f64::consts::LN_10 / ss * (w.output / w.pull_up);
    let g_m = 2.0 * g_ota / c.cnn.max_weight;
    let r_f = 4.0 / g_m;
    let ota_current =
        2.0 * bias * (2.0 * c.cnn.weight_sum / c.cnn.max_weight) * (1.0 + w.output / w.pull_up);
    Ok(OtaCellBench {
        cell_cap,
        subthreshold_swing: ss,
        bias_current: bias,
        ota_transconductance: g_ota,
        output_conductance: g_m,
        effective_resistance: r_f,
        opamp_current: c.vcc() / r_f,
        ota_current,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::registry::Registry;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn setup() -> (GlobalConstants, CircuitPrimitiveTable) {
        let r = Registry::builtin().unwrap();
        (r.constants().clone(), *r.primitives("cmos").unwrap())
    }

    #[test]
    fn sense_amp_first_term_is_ln2_rc() {
        let (c, p) = setup();
        let sa = sense_amp(&c, &p).unwrap();
        // Independent evaluation: widths 4F+4F = 120 nm, c_tran = 1 nF/m,
        // g = g_mdt * 120/60.
        let cl = 1e-9 * 120e-9;
        let g = 7.5e-5 * 2.0;
        assert_relative_eq!(sa.load_cap, cl, max_relative = 1e-12);
        assert_relative_eq!(sa.transconductance, g, max_relative = 1e-12);
        let first = sa.delay - 8.0 * p.add1.delay;
        assert_relative_eq!(first, 2f64.ln() * cl / g * 1e12, max_relative = 1e-12);
        assert_relative_eq!(sa.energy, cl * 0.64 * 1e18, max_relative = 1e-12);
        assert!(sa.delay >= c.n_bits() * p.add1.delay);
    }

    #[test]
    fn sense_amp_at_vcc_over_e() {
        let (mut c, p) = setup();
        c.sense_voltage = c.vcc() / std::f64::consts::E;
        let sa = sense_amp(&c, &p).unwrap();
        let first = sa.delay - c.n_bits() * p.add1.delay;
        assert_relative_eq!(first, sa.load_cap / sa.transconductance * 1e12, max_relative = 1e-12);
    }

    #[test]
    fn sense_amp_rejects_bad_inputs() {
        let (mut c, p) = setup();
        c.sense_voltage = c.vcc();
        assert!(sense_amp(&c, &p).is_err());
        let (mut c, p) = setup();
        c.sense_amp_widths.p = 0.0;
        c.sense_amp_widths.n = 0.0;
        assert!(sense_amp(&c, &p).is_err());
    }

    #[test]
    fn vsa_oxide_delay() {
        let (c, p) = setup();
        let v = voltage_sense_amp(&c, &p, 200e3, 1000e3, 256).unwrap();
        let c_si = 2.0 * 1e-9 * 60e-9;
        let c_li = 256.0 * 0.5e-9 * 300e-9;
        let expect = (2.3 * 13333.0 * c_si + 0.1 * (c_si + c_li) / (0.5 / 2e5 - 0.5 / 1e6)) * 1e12
            + 16.0 * p.add1.delay;
        assert_relative_eq!(v.delay, expect, max_relative = 1e-12);
        assert_eq!(v.area, 6.0 * p.inv1.area);
    }

    #[test]
    fn vsa_limits() {
        let (c, p) = setup();
        let inf = voltage_sense_amp(&c, &p, 200e3, f64::INFINITY, 16).unwrap();
        let big = voltage_sense_amp(&c, &p, 200e3, 1e15, 16).unwrap();
        assert_relative_eq!(inf.delay, big.delay, max_relative = 1e-9);
        let empty = voltage_sense_amp(&c, &p, 200e3, 1000e3, 0).unwrap();
        assert_eq!(empty.bitline_cap, 0.0);
        assert!(voltage_sense_amp(&c, &p, 200e3, 200e3, 16).is_err());
    }

    #[test]
    fn analog_read_defaults() {
        let (c, p) = setup();
        let a = analog_read(&c, &p).unwrap();
        assert_relative_eq!(a.column_voltage, 0.15, max_relative = 1e-12);
        assert_eq!(a.area, 32.0 * p.inv1.area);
        assert_eq!(a.delay, c.analog_read_pulse + 2.0 * c.n_bits() * p.add1.delay);
        let mut c0 = c.clone();
        c0.analog_read_pulse = 0.0;
        assert_eq!(analog_read(&c0, &p).unwrap().delay, 16.0 * p.add1.delay);
        let mut bad = c;
        bad.analog_row_voltage = 0.5;
        assert!(analog_read(&bad, &p).is_err());
    }

    #[test]
    fn ota_defaults() {
        let (c, _) = setup();
        let o = ota_cell(&c).unwrap();
        assert_relative_eq!(o.subthreshold_swing, 0.075, max_relative = 1e-12);
        assert_relative_eq!(o.ota_current / o.bias_current, 2.0 * (2.0 * 1.26 / 0.23) * 3.0, max_relative = 1e-12);
        let mut bad = c;
        bad.transistor.off_current_per_width = bad.transistor.on_current_per_width;
        assert!(ota_cell(&bad).is_err());
    }

    proptest! {
        #[test]
        fn ota_identities(ion in 1.0..1e4f64, ratio in 10.0..1e8f64, vsat in 0.05..1.0f64,
                          wmax in 0.01..2.0f64, vcc in 0.1..2.0f64) {
            let (mut c, _) = setup();
            c.transistor.on_current_per_width = ion;
            c.transistor.off_current_per_width = ion / ratio;
            c.transistor.saturation_voltage = vsat;
            c.transistor.supply_voltage = vcc;
            c.cnn.max_weight = wmax;
            let o = ota_cell(&c).unwrap();
            prop_assert!((o.effective_resistance * o.output_conductance - 4.0).abs() < 1e-12);
            prop_assert!((o.opamp_current * o.effective_resistance / vcc - 1.0).abs() < 1e-12);
        }

        #[test]
        fn vsa_delay_falls_with_read_current(r_on in 1e3..1e6f64, k1 in 1.5..100.0f64, k2 in 1.5..100.0f64) {
            let (c, p) = setup();
            let (lo, hi) = if k1 < k2 { (k1, k2) } else { (k2, k1) };
            let a = voltage_sense_amp(&c, &p, r_on, r_on * lo, 64).unwrap();
            let b = voltage_sense_amp(&c, &p, r_on, r_on * hi, 64).unwrap();
            prop_assert!(b.delay <= a.delay);
        }

        #[test]
        fn sense_amp_delay_falls_with_transconductance(g1 in 1e-6..1e-3f64, g2 in 1e-6..1e-3f64) {
            let (mut c, p) = setup();
            let (lo, hi) = if g1 < g2 { (g1, g2) } else { (g2, g1) };
            c.transistor.linear_transconductance = lo;
            let a = sense_amp(&c, &p).unwrap();
            c.transistor.linear_transconductance = hi;
            let b = sense_amp(&c, &p).unwrap();
            prop_assert!(b.delay <= a.delay);
        }
    }
}
