use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::Scale;
use crate::error::{Error, Result};
use crate::units::{Quantity, UnitHeader};

/// Electrical parameters of the transistor technology used by circuits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransistorParams {
    /// Gate capacitance per unit width, F/m.
    pub cap_per_width: f64,
    /// A/m.
    pub on_current_per_width: f64,
    /// A/m.
    pub off_current_per_width: f64,
    /// V.
    pub saturation_voltage: f64,
    /// Linear transconductance of a minimum digital transistor, S.
    pub linear_transconductance: f64,
    /// On-resistance of a minimum digital transistor, Ω.
    pub on_resistance: f64,
    /// V.
    pub supply_voltage: f64,
}

/// Per-family replacement of some transistor parameters (e.g. TFET).
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransistorOverride {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cap_per_width: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub on_current_per_width: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub off_current_per_width: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub saturation_voltage: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub linear_transconductance: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub on_resistance: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub supply_voltage: Option<f64>,
}

impl TransistorParams {
    pub fn with_override(mut self, o: &TransistorOverride) -> Self {
        if let Some(v) = o.cap_per_width {
            self.cap_per_width = v;
        }
        if let Some(v) = o.on_current_per_width {
            self.on_current_per_width = v;
        }
        if let Some(v) = o.off_current_per_width {
            self.off_current_per_width = v;
        }
        if let Some(v) = o.saturation_voltage {
            self.saturation_voltage = v;
        }
        if let Some(v) = o.linear_transconductance {
            self.linear_transconductance = v;
        }
        if let Some(v) = o.on_resistance {
            self.on_resistance = v;
        }
        if let Some(v) = o.supply_voltage {
            self.supply_voltage = v;
        }
        self
    }
}

/// Sense-amplifier transistor widths, nm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SenseAmpWidths {
    pub p: f64,
    pub n: f64,
    pub iso: f64,
    pub en: f64,
}

/// OTA input, pull-up and output transistor widths, nm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OtaWidths {
    pub input: f64,
    pub pull_up: f64,
    pub output: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CnnFactors {
    /// Extra synapses per cell.
    pub synapse_factor: f64,
    /// Extra settling time.
    pub settling_factor: f64,
    pub max_weight: f64,
    pub weight_sum: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpikeFactors {
    pub duration: f64,
    pub spacing: f64,
    pub to_fire: f64,
}

/// Layout overhead multipliers applied to areas.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Overheads {
    pub synapse: f64,
    pub neuron: f64,
    pub core: f64,
    pub chip: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NominalChip {
    pub cores: u64,
    pub neurons_per_core: u64,
    pub synapses_per_neuron: u64,
}

/// Global model constants in canonical units (see [`crate::units`]).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GlobalConstants {
    pub feature_size: f64,
    pub min_ic_length: f64,
    pub bits_per_synapse: u32,
    pub levels_per_synapse: u32,
    pub digital_width: f64,
    pub analog_width: f64,
    pub transistor: TransistorParams,
    pub transistor_overrides: BTreeMap<String, TransistorOverride>,
    pub ic_cap_per_length: f64,
    pub ic_res_per_length: f64,
    pub min_ic_resistance: f64,
    pub load_capacitance: f64,
    pub sense_voltage: f64,
    pub sense_amp_widths: SenseAmpWidths,
    pub vsa_sense_voltage: f64,
    pub vsa_read_voltage: f64,
    pub analog_row_voltage: f64,
    pub analog_read_pulse: f64,
    pub ota_widths: OtaWidths,
    pub neuron_drive_current: Option<f64>,
    pub spintronic_voltage: f64,
    pub cnn: CnnFactors,
    pub spiking: SpikeFactors,
    pub sync_periods: f64,
    pub overhead: Overheads,
    pub nominal: NominalChip,
    pub wire_pitch: f64,
}

impl GlobalConstants {
    pub fn vcc(&self) -> f64 {
        self.transistor.supply_voltage
    }

    pub fn n_bits(&self) -> f64 {
        f64::from(self.bits_per_synapse)
    }

    pub fn n_levels(&self) -> f64 {
        f64::from(self.levels_per_synapse)
    }

    /// Capacitance of a minimum-length interconnect, F.
    pub fn min_ic_capacitance(&self) -> f64 {
        self.ic_cap_per_length * crate::units::nm_to_m(self.min_ic_length)
    }

    /// Constants as seen by a circuit family: the named transistor override,
    /// if any, replaces the default transistor parameters.
    pub fn for_family(&self, family: &str) -> GlobalConstants {
        match self.transistor_overrides.get(family) {
            Some(o) => GlobalConstants {
                transistor: self.transistor.with_override(o),
                ..self.clone()
            },
            None => self.clone(),
        }
    }

    pub(crate) fn validate(&self) -> Result<()> {
        let rec = "constants";
        let positive: [(&str, f64); 30] = [
            ("feature_size", self.feature_size),
            ("min_ic_length", self.min_ic_length),
            ("bits_per_digital_synapse", self.n_bits()),
            ("levels_per_analog_synapse", self.n_levels()),
            ("digital_transistor_width", self.digital_width),
            ("analog_transistor_width", self.analog_width),
            ("transistor.cap_per_width", self.transistor.cap_per_width),
            ("transistor.on_current_per_width", self.transistor.on_current_per_width),
            ("transistor.off_current_per_width", self.transistor.off_current_per_width),
            ("transistor.saturation_voltage", self.transistor.saturation_voltage),
            ("transistor.linear_transconductance", self.transistor.linear_transconductance),
            ("transistor.on_resistance", self.transistor.on_resistance),
            ("transistor.supply_voltage", self.transistor.supply_voltage),
            ("ic_cap_per_length", self.ic_cap_per_length),
            ("ic_res_per_length", self.ic_res_per_length),
            ("min_ic_resistance", self.min_ic_resistance),
            ("load_capacitance", self.load_capacitance),
            ("sense_amp.sense_voltage", self.sense_voltage),
            ("voltage_sense_amp.sense_voltage", self.vsa_sense_voltage),
            ("voltage_sense_amp.read_voltage", self.vsa_read_voltage),
            ("analog_read.row_voltage", self.analog_row_voltage),
            ("analog_read.read_pulse", self.analog_read_pulse),
            ("spintronic_voltage", self.spintronic_voltage),
            ("cnn.synapse_factor", self.cnn.synapse_factor),
            ("cnn.settling_factor", self.cnn.settling_factor),
            ("cnn.max_weight", self.cnn.max_weight),
            ("spiking.duration", self.spiking.duration),
            ("spiking.spacing", self.spiking.spacing),
            ("spiking.to_fire", self.spiking.to_fire),
            ("sync_periods", self.sync_periods),
        ];
        let more: [(&str, f64); 14] = [
            ("sense_amp.widths.p", self.sense_amp_widths.p),
            ("sense_amp.widths.n", self.sense_amp_widths.n),
            ("sense_amp.widths.iso", self.sense_amp_widths.iso),
            ("sense_amp.widths.en", self.sense_amp_widths.en),
            ("ota_widths.input", self.ota_widths.input),
            ("ota_widths.pull_up", self.ota_widths.pull_up),
            ("ota_widths.output", self.ota_widths.output),
            ("overhead.synapse", self.overhead.synapse),
            ("overhead.neuron", self.overhead.neuron),
            ("overhead.core", self.overhead.core),
            ("overhead.chip", self.overhead.chip),
            ("wire_pitch", self.wire_pitch),
            ("cnn.weight_sum", self.cnn.weight_sum),
            ("nominal_chip.cores", self.nominal.cores as f64),
        ];
        for (field, v) in positive.iter().chain(more.iter()) {
            if !(v.is_finite() && *v > 0.0) {
                return Err(Error::invalid(rec, *field, format!("must be positive, got {v}")));
            }
        }
        if self.nominal.neurons_per_core == 0 || self.nominal.synapses_per_neuron == 0 {
            return Err(Error::invalid(rec, "nominal_chip", "counts must be at least 1"));
        }
        if let Some(i) = self.neuron_drive_current {
            if !(i.is_finite() && i > 0.0) {
                return Err(Error::invalid(rec, "neuron_drive_current", "must be positive"));
            }
        }
        for (name, o) in &self.transistor_overrides {
            let t = self.transistor.with_override(o);
            let vals = [
                t.cap_per_width,
                t.on_current_per_width,
                t.off_current_per_width,
                t.saturation_voltage,
                t.linear_transconductance,
                t.on_resistance,
                t.supply_voltage,
            ];
            if vals.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
                return Err(Error::invalid(
                    format!("transistor_overrides.{name}"),
                    "*",
                    "all parameters must be positive",
                ));
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// File format

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TransistorFile {
    cap_per_width: Option<f64>,
    on_current_per_width: Option<f64>,
    off_current_per_width: Option<f64>,
    saturation_voltage: Option<f64>,
    linear_transconductance: Option<f64>,
    on_resistance: Option<f64>,
    supply_voltage: Option<f64>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SenseAmpFile {
    sense_voltage: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    widths: Option<SenseAmpWidths>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct VsaFile {
    sense_voltage: Option<f64>,
    read_voltage: Option<f64>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AnalogReadFile {
    row_voltage: Option<f64>,
    read_pulse: Option<f64>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub(crate) struct ConstantsFile {
    units: Option<UnitHeader>,
    feature_size: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    min_ic_length: Option<f64>,
    bits_per_digital_synapse: Option<u32>,
    levels_per_analog_synapse: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    digital_transistor_width: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    analog_transistor_width: Option<f64>,
    #[serde(default)]
    transistor: TransistorFile,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    transistor_overrides: BTreeMap<String, TransistorOverride>,
    ic_cap_per_length: Option<f64>,
    ic_res_per_length: Option<f64>,
    min_ic_resistance: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    load_capacitance: Option<f64>,
    #[serde(default)]
    sense_amp: SenseAmpFile,
    #[serde(default)]
    voltage_sense_amp: VsaFile,
    #[serde(default)]
    analog_read: AnalogReadFile,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    ota_widths: Option<OtaWidths>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    neuron_drive_current: Option<f64>,
    spintronic_voltage: Option<f64>,
    cnn: Option<CnnFactors>,
    spiking: Option<SpikeFactors>,
    sync_periods: Option<f64>,
    overhead: Option<Overheads>,
    nominal_chip: Option<NominalChip>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    wire_pitch: Option<f64>,
}

fn req<T>(v: Option<T>, name: &'static str) -> Result<T> {
    v.ok_or(Error::MissingConstant(name))
}

impl ConstantsFile {
    pub(crate) fn units(&self) -> Option<&UnitHeader> {
        self.units.as_ref()
    }

    pub(crate) fn resolve(&self, file: &str) -> Result<GlobalConstants> {
        let units = self
            .units
            .as_ref()
            .ok_or_else(|| Error::MissingUnits { file: file.into() })?;
        units.check(file)?;
        let s = Scale::load(units, file);
        let len = |v: f64| s.apply(Quantity::Length, v);
        let volt = |v: f64| s.apply(Quantity::Voltage, v);

        let f = len(req(self.feature_size, "feature_size")?)?;
        let opt_len = |v: Option<f64>, multiple: f64| -> Result<f64> {
            match v {
                Some(v) => len(v),
                None => Ok(multiple * f),
            }
        };

        let t = &self.transistor;
        let transistor = TransistorParams {
            cap_per_width: s.apply(
                Quantity::CapacitancePerLength,
                req(t.cap_per_width, "transistor_cap_per_width")?,
            )?,
            on_current_per_width: s.apply(
                Quantity::CurrentPerLength,
                req(t.on_current_per_width, "on_current_per_width")?,
            )?,
            off_current_per_width: s.apply(
                Quantity::CurrentPerLength,
                req(t.off_current_per_width, "off_current_per_width")?,
            )?,
            saturation_voltage: volt(req(t.saturation_voltage, "saturation_voltage")?)?,
            linear_transconductance: s.apply(
                Quantity::Conductance,
                req(t.linear_transconductance, "linear_transconductance")?,
            )?,
            on_resistance: s.apply(
                Quantity::Resistance,
                req(t.on_resistance, "on_resistance")?,
            )?,
            supply_voltage: volt(req(t.supply_voltage, "supply_voltage")?)?,
        };

        let mut overrides = BTreeMap::new();
        for (name, o) in &self.transistor_overrides {
            overrides.insert(name.clone(), scale_override(o, &s)?);
        }

        let digital_width = opt_len(self.digital_transistor_width, 4.0)?;
        let load_capacitance = match self.load_capacitance {
            Some(c) => s.apply(Quantity::Capacitance, c)?,
            None => transistor.cap_per_width * crate::units::nm_to_m(digital_width),
        };
        let sense_amp_widths = match self.sense_amp.widths {
            Some(w) => SenseAmpWidths {
                p: len(w.p)?,
                n: len(w.n)?,
                iso: len(w.iso)?,
                en: len(w.en)?,
            },
            None => SenseAmpWidths {
                p: 4.0 * f,
                n: 4.0 * f,
                iso: 6.5 * f,
                en: 5.0 * f,
            },
        };
        let ota_widths = match self.ota_widths {
            Some(w) => OtaWidths {
                input: len(w.input)?,
                pull_up: len(w.pull_up)?,
                output: len(w.output)?,
            },
            None => OtaWidths {
                input: 10.0 * f,
                pull_up: 5.0 * f,
                output: 10.0 * f,
            },
        };

        let c = GlobalConstants {
            feature_size: f,
            min_ic_length: opt_len(self.min_ic_length, 20.0)?,
            bits_per_synapse: req(self.bits_per_digital_synapse, "bits_per_digital_synapse")?,
            levels_per_synapse: req(self.levels_per_analog_synapse, "levels_per_analog_synapse")?,
            digital_width,
            analog_width: opt_len(self.analog_transistor_width, 16.0)?,
            transistor,
            transistor_overrides: overrides,
            ic_cap_per_length: s.apply(
                Quantity::CapacitancePerLength,
                req(self.ic_cap_per_length, "ic_cap_per_length")?,
            )?,
            ic_res_per_length: s.apply(
                Quantity::ResistancePerLength,
                req(self.ic_res_per_length, "ic_res_per_length")?,
            )?,
            min_ic_resistance: s.apply(
                Quantity::Resistance,
                req(self.min_ic_resistance, "min_ic_resistance")?,
            )?,
            load_capacitance,
            sense_voltage: volt(req(self.sense_amp.sense_voltage, "sense_voltage")?)?,
            sense_amp_widths,
            vsa_sense_voltage: volt(req(
                self.voltage_sense_amp.sense_voltage,
                "vsa_sense_voltage",
            )?)?,
            vsa_read_voltage: volt(req(self.voltage_sense_amp.read_voltage, "vsa_read_voltage")?)?,
            analog_row_voltage: volt(req(self.analog_read.row_voltage, "analog_row_voltage")?)?,
            analog_read_pulse: s.apply(
                Quantity::Time,
                req(self.analog_read.read_pulse, "analog_read_pulse")?,
            )?,
            ota_widths,
            neuron_drive_current: self
                .neuron_drive_current
                .map(|i| s.apply(Quantity::Current, i))
                .transpose()?,
            spintronic_voltage: volt(req(self.spintronic_voltage, "spintronic_voltage")?)?,
            cnn: req(self.cnn, "cnn")?,
            spiking: req(self.spiking, "spiking")?,
            sync_periods: req(self.sync_periods, "sync_periods")?,
            overhead: req(self.overhead, "overhead")?,
            nominal: req(self.nominal_chip, "nominal_chip")?,
            wire_pitch: opt_len(self.wire_pitch, 8.0)?,
        };
        c.validate()?;
        Ok(c)
    }

    /// Writes `c` back out in the units of `units`, every field explicit.
    pub(crate) fn export(c: &GlobalConstants, units: &UnitHeader, file: &str) -> Result<Self> {
        let s = Scale::export(units, file);
        let len = |v: f64| s.apply(Quantity::Length, v);
        let volt = |v: f64| s.apply(Quantity::Voltage, v);
        let t = &c.transistor;
        let mut overrides = BTreeMap::new();
        for (name, o) in &c.transistor_overrides {
            overrides.insert(name.clone(), scale_override(o, &s)?);
        }
        Ok(ConstantsFile {
            units: Some(units.clone()),
            feature_size: Some(len(c.feature_size)?),
            min_ic_length: Some(len(c.min_ic_length)?),
            bits_per_digital_synapse: Some(c.bits_per_synapse),
            levels_per_analog_synapse: Some(c.levels_per_synapse),
            digital_transistor_width: Some(len(c.digital_width)?),
            analog_transistor_width: Some(len(c.analog_width)?),
            transistor: TransistorFile {
                cap_per_width: Some(s.apply(Quantity::CapacitancePerLength, t.cap_per_width)?),
                on_current_per_width: Some(
                    s.apply(Quantity::CurrentPerLength, t.on_current_per_width)?,
                ),
                off_current_per_width: Some(
                    s.apply(Quantity::CurrentPerLength, t.off_current_per_width)?,
                ),
                saturation_voltage: Some(volt(t.saturation_voltage)?),
                linear_transconductance: Some(
                    s.apply(Quantity::Conductance, t.linear_transconductance)?,
                ),
                on_resistance: Some(s.apply(Quantity::Resistance, t.on_resistance)?),
                supply_voltage: Some(volt(t.supply_voltage)?),
            },
            transistor_overrides: overrides,
            ic_cap_per_length: Some(s.apply(Quantity::CapacitancePerLength, c.ic_cap_per_length)?),
            ic_res_per_length: Some(s.apply(Quantity::ResistancePerLength, c.ic_res_per_length)?),
            min_ic_resistance: Some(s.apply(Quantity::Resistance, c.min_ic_resistance)?),
            load_capacitance: Some(s.apply(Quantity::Capacitance, c.load_capacitance)?),
            sense_amp: SenseAmpFile {
                sense_voltage: Some(volt(c.sense_voltage)?),
                widths: Some(SenseAmpWidths {
                    p: len(c.sense_amp_widths.p)?,
                    n: len(c.sense_amp_widths.n)?,
                    iso: len(c.sense_amp_widths.iso)?,
                    en: len(c.sense_amp_widths.en)?,
                }),
            },
            voltage_sense_amp: VsaFile {
                sense_voltage: Some(volt(c.vsa_sense_voltage)?),
                read_voltage: Some(volt(c.vsa_read_voltage)?),
            },
            analog_read: AnalogReadFile {
                row_voltage: Some(volt(c.analog_row_voltage)?),
                read_pulse: Some(s.apply(Quantity::Time, c.analog_read_pulse)?),
            },
            ota_widths: Some(OtaWidths {
                input: len(c.ota_widths.input)?,
                pull_up: len(c.ota_widths.pull_up)?,
                output: len(c.ota_widths.output)?,
            }),
            neuron_drive_current: c
                .neuron_drive_current
                .map(|i| s.apply(Quantity::Current, i))
                .transpose()?,
            spintronic_voltage: Some(volt(c.spintronic_voltage)?),
            cnn: Some(c.cnn),
            spiking: Some(c.spiking),
            sync_periods: Some(c.sync_periods),
            overhead: Some(c.overhead),
            nominal_chip: Some(c.nominal),
            wire_pitch: Some(len(c.wire_pitch)?),
        })
    }
}

fn scale_override(o: &TransistorOverride, s: &Scale<'_>) -> Result<TransistorOverride> {
    let map = |q: Quantity, v: Option<f64>| v.map(|v| s.apply(q, v)).transpose();
    Ok(TransistorOverride {
        cap_per_width: map(Quantity::CapacitancePerLength, o.cap_per_width)?,
        on_current_per_width: map(Quantity::CurrentPerLength, o.on_current_per_width)?,
        off_current_per_width: map(Quantity::CurrentPerLength, o.off_current_per_width)?,
        saturation_voltage: map(Quantity::Voltage, o.saturation_voltage)?,
        linear_transconductance: map(Quantity::Conductance, o.linear_transconductance)?,
        on_resistance: map(Quantity::Resistance, o.on_resistance)?,
        supply_voltage: map(Quantity::Voltage, o.supply_voltage)?,
    })
}
