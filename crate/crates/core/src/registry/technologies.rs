use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::Scale;
use crate::error::{Error, Result};
use crate::units::{Quantity, UnitHeader};

/// Signal type of a neural network.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum NetworkKind {
    #[serde(rename = "ANN")]
    Ann,
    #[serde(rename = "CNN")]
    Cnn,
    #[serde(rename = "SNN")]
    Snn,
    #[serde(rename = "ONN")]
    Onn,
}

impl NetworkKind {
    pub const ALL: [NetworkKind; 4] = [
        NetworkKind::Ann,
        NetworkKind::Cnn,
        NetworkKind::Snn,
        NetworkKind::Onn,
    ];

    /// Leading letters of a technology label.
    pub fn prefix(self) -> &'static str {
        match self {
            NetworkKind::Ann => "ANN",
            NetworkKind::Cnn => "CNN",
            NetworkKind::Snn => "Spi",
            NetworkKind::Onn => "Osc",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            NetworkKind::Ann => "ANN",
            NetworkKind::Cnn => "CNN",
            NetworkKind::Snn => "SNN",
            NetworkKind::Onn => "ONN",
        }
    }

    pub fn is_spiking(self) -> bool {
        self == NetworkKind::Snn
    }
}

impl fmt::Display for NetworkKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for NetworkKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_uppercase().as_str() {
            "ANN" => Ok(NetworkKind::Ann),
            "CNN" | "CENN" => Ok(NetworkKind::Cnn),
            "SNN" | "SPI" => Ok(NetworkKind::Snn),
            "ONN" | "OSC" => Ok(NetworkKind::Onn),
            _ => Err(format!("unknown network kind `{s}` (expected ANN, CNN, SNN or ONN)")),
        }
    }
}

/// Which set of element equations produces a technology's raw synapse and
/// neuron.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ElementFamily {
    DigitalSram,
    DigitalMac,
    AnalogTransistor,
    AnalogSingleDevice,
    ResistiveDigital,
    ResistiveAnalog,
}

impl ElementFamily {
    pub fn needs_primitives(self) -> bool {
        self != ElementFamily::AnalogSingleDevice
    }

    pub fn is_resistive(self) -> bool {
        matches!(
            self,
            ElementFamily::ResistiveDigital | ElementFamily::ResistiveAnalog
        )
    }

    pub fn name(self) -> &'static str {
        match self {
            ElementFamily::DigitalSram => "digital_sram",
            ElementFamily::DigitalMac => "digital_mac",
            ElementFamily::AnalogTransistor => "analog_transistor",
            ElementFamily::AnalogSingleDevice => "analog_single_device",
            ElementFamily::ResistiveDigital => "resistive_digital",
            ElementFamily::ResistiveAnalog => "resistive_analog",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OscillatorClass {
    TransistorRing,
    Spintronic,
    Piezo,
}

/// Neuron fan-in category; the numeric fan-in comes from [`FanInPolicy`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FanInClass {
    DigitalCmos,
    AnalogCmos,
    Spintronic,
    /// Synaptic operations run one after another (MAC synapses,
    /// accelerators).
    Sequential,
}

/// Fan-in of a neuron: a finite number of parallel inputs, or unlimited.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FanIn {
    Limited(u64),
    Unlimited(Unlimited),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Unlimited {
    Unlimited,
}

impl FanIn {
    pub const UNLIMITED: FanIn = FanIn::Unlimited(Unlimited::Unlimited);

    pub fn is_unlimited(self) -> bool {
        matches!(self, FanIn::Unlimited(_))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FanInPolicy {
    pub digital_cmos: FanIn,
    pub analog_cmos: FanIn,
    pub spintronic: FanIn,
    pub snn: FanIn,
    pub accelerator_sequential: FanIn,
}

impl FanInPolicy {
    /// Fan-in of a technology class inside a network of the given kind;
    /// spiking networks override the device class.
    pub fn fan_in(&self, class: FanInClass, kind: NetworkKind) -> FanIn {
        if kind.is_spiking() && class != FanInClass::Sequential {
            return self.snn;
        }
        match class {
            FanInClass::DigitalCmos => self.digital_cmos,
            FanInClass::AnalogCmos => self.analog_cmos,
            FanInClass::Spintronic => self.spintronic,
            FanInClass::Sequential => self.accelerator_sequential,
        }
    }

    fn validate(&self) -> Result<()> {
        let all = [
            ("digital_cmos", self.digital_cmos),
            ("analog_cmos", self.analog_cmos),
            ("spintronic", self.spintronic),
            ("snn", self.snn),
            ("accelerator_sequential", self.accelerator_sequential),
        ];
        for (name, f) in all {
            if f == FanIn::Limited(0) {
                return Err(Error::invalid("fan_in_policy", name, "fan-in must be at least 1"));
            }
        }
        if self.accelerator_sequential != FanIn::Limited(1) {
            return Err(Error::invalid(
                "fan_in_policy",
                "accelerator_sequential",
                "sequential execution has fan-in 1",
            ));
        }
        Ok(())
    }
}

/// A neuron/synapse combination inside one network type.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TechnologyId {
    pub network_kind: NetworkKind,
    pub neuron_device: String,
    pub synapse_device: String,
    pub label: String,
}

/// Everything the bottoms-up pipeline needs to know about a technology.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Technology {
    pub id: TechnologyId,
    /// Label without the network prefix, shared across network kinds.
    pub code: String,
    pub family: ElementFamily,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub primitives: Option<String>,
    pub fan_in: FanInClass,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oscillator: Option<OscillatorClass>,
    /// A; overrides the class default when present.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub neuron_drive_current: Option<f64>,
}

impl Technology {
    pub fn label(&self) -> &str {
        &self.id.label
    }

    pub fn kind(&self) -> NetworkKind {
        self.id.network_kind
    }
}

// ---------------------------------------------------------------------------
// File format: each design lists the network kinds it exists in; labels are
// the kind prefix followed by the design code.

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DesignFile {
    code: String,
    kinds: Vec<NetworkKind>,
    family: ElementFamily,
    neuron_device: String,
    synapse_device: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    primitives: Option<String>,
    fan_in: FanInClass,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    oscillator: Option<OscillatorClass>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    neuron_drive_current: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub(crate) struct TechnologiesFile {
    units: Option<UnitHeader>,
    fan_in_policy: FanInPolicy,
    designs: Vec<DesignFile>,
}

impl TechnologiesFile {
    pub(crate) fn units(&self) -> Option<&UnitHeader> {
        self.units.as_ref()
    }

    pub(crate) fn resolve(&self, file: &str) -> Result<(Vec<Technology>, FanInPolicy)> {
        let units = self
            .units
            .as_ref()
            .ok_or_else(|| Error::MissingUnits { file: file.into() })?;
        units.check(file)?;
        let s = Scale::load(units, file);
        self.fan_in_policy.validate()?;

        let mut out: Vec<Technology> = Vec::new();
        // Kind-major order: every ANN label, then CNN, SNN, ONN.
        for kind in NetworkKind::ALL {
            for d in self.designs.iter().filter(|d| d.kinds.contains(&kind)) {
                let label = format!("{}{}", kind.prefix(), d.code);
                if out.iter().any(|t| t.id.label == label) {
                    return Err(Error::invalid(&label, "code", "duplicate technology label"));
                }
                if (kind == NetworkKind::Onn) != d.oscillator.is_some() {
                    return Err(Error::invalid(
                        &label,
                        "oscillator",
                        "oscillator class is required for ONN and only for ONN",
                    ));
                }
                if d.family.needs_primitives() && d.primitives.is_none() {
                    return Err(Error::invalid(
                        &label,
                        "primitives",
                        format!("family {} needs a circuit-primitive table", d.family.name()),
                    ));
                }
                let drive = d
                    .neuron_drive_current
                    .map(|i| s.apply(Quantity::Current, i))
                    .transpose()?;
                if let Some(i) = drive {
                    if !(i.is_finite() && i > 0.0) {
                        return Err(Error::invalid(&label, "neuron_drive_current", "must be positive"));
                    }
                }
                out.push(Technology {
                    id: TechnologyId {
                        network_kind: kind,
                        neuron_device: d.neuron_device.clone(),
                        synapse_device: d.synapse_device.clone(),
                        label,
                    },
                    code: d.code.clone(),
                    family: d.family,
                    primitives: d.primitives.clone(),
                    fan_in: d.fan_in,
                    oscillator: d.oscillator,
                    neuron_drive_current: drive,
                });
            }
        }
        Ok((out, self.fan_in_policy))
    }

    pub(crate) fn export(
        techs: &[Technology],
        policy: FanInPolicy,
        units: &UnitHeader,
        file: &str,
    ) -> Result<Self> {
        let s = Scale::export(units, file);
        let mut designs: Vec<DesignFile> = Vec::new();
        // Regroup by (code, oscillator) in first-appearance order.
        for t in techs {
            if let Some(d) = designs
                .iter_mut()
                .find(|d| d.code == t.code && d.oscillator == t.oscillator)
            {
                d.kinds.push(t.kind());
                continue;
            }
            designs.push(DesignFile {
                code: t.code.clone(),
                kinds: vec![t.kind()],
                family: t.family,
                neuron_device: t.id.neuron_device.clone(),
                synapse_device: t.id.synapse_device.clone(),
                primitives: t.primitives.clone(),
                fan_in: t.fan_in,
                oscillator: t.oscillator,
                neuron_drive_current: t
                    .neuron_drive_current
                    .map(|i| s.apply(Quantity::Current, i))
                    .transpose()?,
            });
        }
        Ok(TechnologiesFile {
            units: Some(units.clone()),
            fan_in_policy: policy,
            designs,
        })
    }
}
