//! Parameter datasets: global constants, circuit primitives, devices,
//! technology combinations, chip records and workloads.
//!
//! Every dataset file carries a `units` header. Values are converted to
//! canonical units (see [`crate::units`]) when loaded and converted back by
//! [`Registry::export_dir`].

mod chips;
mod constants;
mod devices;
mod primitives;
mod technologies;
mod workloads;

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::Serialize;

pub use chips::{AreaSplit, ChipField, ChipKind, ChipRecord, Comparison, RateEnergy};
pub use constants::{
    CnnFactors, GlobalConstants, NominalChip, OtaWidths, Overheads, SenseAmpWidths,
    SpikeFactors, TransistorOverride, TransistorParams,
};
pub use devices::{DeviceClass, DeviceRecord};
pub use primitives::CircuitPrimitiveTable;
pub use technologies::{
    ElementFamily, FanIn, FanInClass, FanInPolicy, NetworkKind, OscillatorClass, Technology,
    TechnologyId,
};
pub use workloads::{ConvSpec, LayerSpec, Padding, Schedule, WorkloadSpec};

use crate::error::{Error, Result};
use crate::units::{Quantity, UnitHeader};

/// Converts values between a file's declared units and canonical units.
pub(crate) struct Scale<'a> {
    units: &'a UnitHeader,
    file: &'a str,
    to_file: bool,
}

impl<'a> Scale<'a> {
    pub(crate) fn load(units: &'a UnitHeader, file: &'a str) -> Self {
        Scale {
            units,
            file,
            to_file: false,
        }
    }

    pub(crate) fn export(units: &'a UnitHeader, file: &'a str) -> Self {
        Scale {
            units,
            file,
            to_file: true,
        }
    }

    pub(crate) fn apply(&self, q: Quantity, v: f64) -> Result<f64> {
        let k = self.units.factor(self.file, q)?;
        Ok(if self.to_file { v / k } else { v * k })
    }
}

pub const CONSTANTS_FILE: &str = "constants.json";
pub const PRIMITIVES_FILE: &str = "circuit_primitives.json";
pub const DEVICES_FILE: &str = "devices.json";
pub const TECHNOLOGIES_FILE: &str = "technologies.json";
pub const NEUROMORPHIC_FILE: &str = "chips_neuromorphic.json";
pub const ACCELERATORS_FILE: &str = "chips_accelerators.json";
pub const WORKLOADS_FILE: &str = "workloads.json";

/// Locations of the seven dataset files.
#[derive(Debug, Clone)]
pub struct DatasetPaths {
    pub constants: PathBuf,
    pub primitives: PathBuf,
    pub devices: PathBuf,
    pub technologies: PathBuf,
    pub neuromorphic_chips: PathBuf,
    pub accelerator_chips: PathBuf,
    pub workloads: PathBuf,
}

impl DatasetPaths {
    /// The standard file names inside `dir`.
    pub fn in_dir(dir: impl AsRef<Path>) -> Self {
        let d = dir.as_ref();
        DatasetPaths {
            constants: d.join(CONSTANTS_FILE),
            primitives: d.join(PRIMITIVES_FILE),
            devices: d.join(DEVICES_FILE),
            technologies: d.join(TECHNOLOGIES_FILE),
            neuromorphic_chips: d.join(NEUROMORPHIC_FILE),
            accelerator_chips: d.join(ACCELERATORS_FILE),
            workloads: d.join(WORKLOADS_FILE),
        }
    }
}

/// Raw text of the seven dataset files, keyed by the name used in
/// diagnostics.
#[derive(Debug, Clone)]
pub struct DatasetSources {
    pub constants: (String, String),
    pub primitives: (String, String),
    pub devices: (String, String),
    pub technologies: (String, String),
    pub neuromorphic_chips: (String, String),
    pub accelerator_chips: (String, String),
    pub workloads: (String, String),
}

impl DatasetSources {
    /// The datasets shipped with the crate.
    pub fn builtin() -> Self {
        let f = |name: &str, text: &str| (name.to_string(), text.to_string());
        DatasetSources {
            constants: f(CONSTANTS_FILE, include_str!("../../data/constants.json")),
            primitives: f(PRIMITIVES_FILE, include_str!("../../data/circuit_primitives.json")),
            devices: f(DEVICES_FILE, include_str!("../../data/devices.json")),
            technologies: f(TECHNOLOGIES_FILE, include_str!("../../data/technologies.json")),
            neuromorphic_chips: f(
                NEUROMORPHIC_FILE,
                include_str!("../../data/chips_neuromorphic.json"),
            ),
            accelerator_chips: f(
                ACCELERATORS_FILE,
                include_str!("../../data/chips_accelerators.json"),
            ),
            workloads: f(WORKLOADS_FILE, include_str!("../../data/workloads.json")),
        }
    }

    pub fn read(paths: &DatasetPaths) -> Result<Self> {
        let f = |p: &Path| -> Result<(String, String)> {
            let text = fs::read_to_string(p).map_err(|source| Error::Io {
                path: p.display().to_string(),
                source,
            })?;
            Ok((p.display().to_string(), text))
        };
        Ok(DatasetSources {
            constants: f(&paths.constants)?,
            primitives: f(&paths.primitives)?,
            devices: f(&paths.devices)?,
            technologies: f(&paths.technologies)?,
            neuromorphic_chips: f(&paths.neuromorphic_chips)?,
            accelerator_chips: f(&paths.accelerator_chips)?,
            workloads: f(&paths.workloads)?,
        })
    }
}

/// Units headers of the files a registry was loaded from, reused on export.
#[derive(Debug, Clone, PartialEq, Serialize)]
struct Headers {
    constants: UnitHeader,
    primitives: UnitHeader,
    devices: UnitHeader,
    technologies: UnitHeader,
    neuromorphic: UnitHeader,
    neuromorphic_comparisons: Option<UnitHeader>,
    accelerators: UnitHeader,
    accelerator_comparisons: Option<UnitHeader>,
    workloads: UnitHeader,
}

/// All datasets, validated and in canonical units. Immutable once built.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Registry {
    constants: GlobalConstants,
    primitives: BTreeMap<String, CircuitPrimitiveTable>,
    devices: Vec<DeviceRecord>,
    technologies: Vec<Technology>,
    fan_in: FanInPolicy,
    chips: Vec<ChipRecord>,
    neuromorphic_split: AreaSplit,
    accelerator_split: AreaSplit,
    comparisons: Vec<Comparison>,
    workloads: Vec<WorkloadSpec>,
    default_schedules: BTreeMap<NetworkKind, Schedule>,
    #[serde(skip)]
    headers: Headers,
}

fn parse<T: DeserializeOwned>(src: &(String, String)) -> Result<T> {
    serde_json::from_str(&src.1).map_err(|source| Error::Parse {
        file: src.0.clone(),
        source,
    })
}

fn header(h: Option<&UnitHeader>, file: &str) -> Result<UnitHeader> {
    h.cloned().ok_or_else(|| Error::MissingUnits { file: file.into() })
}

impl Registry {
    /// Registry built from the datasets shipped with the crate.
    pub fn builtin() -> Result<Self> {
        Self::from_sources(&DatasetSources::builtin())
    }

    pub fn load(paths: &DatasetPaths) -> Result<Self> {
        Self::from_sources(&DatasetSources::read(paths)?)
    }

    pub fn load_dir(dir: impl AsRef<Path>) -> Result<Self> {
        Self::load(&DatasetPaths::in_dir(dir))
    }

    pub fn from_sources(src: &DatasetSources) -> Result<Self> {
        let cf: constants::ConstantsFile = parse(&src.constants)?;
        let constants = cf.resolve(&src.constants.0)?;

        let pf: primitives::PrimitivesFile = parse(&src.primitives)?;
        let prims = pf.resolve(&src.primitives.0)?;

        let df: devices::DevicesFile = parse(&src.devices)?;
        let devices = df.resolve(&src.devices.0)?;

        let tf: technologies::TechnologiesFile = parse(&src.technologies)?;
        let (technologies, fan_in) = tf.resolve(&src.technologies.0)?;

        let nf: chips::ChipsFile = parse(&src.neuromorphic_chips)?;
        let neuro = nf.resolve(&src.neuromorphic_chips.0)?;
        let af: chips::ChipsFile = parse(&src.accelerator_chips)?;
        let accel = af.resolve(&src.accelerator_chips.0)?;
        if neuro.kind != ChipKind::Neuromorphic {
            return Err(Error::invalid(&src.neuromorphic_chips.0, "kind", "expected neuromorphic"));
        }
        if accel.kind != ChipKind::Accelerator {
            return Err(Error::invalid(&src.accelerator_chips.0, "kind", "expected accelerator"));
        }

        let wf: workloads::WorkloadsFile = parse(&src.workloads)?;
        let (workloads, default_schedules) = wf.resolve(&src.workloads.0)?;

        let headers = Headers {
            constants: header(cf.units(), &src.constants.0)?,
            primitives: header(pf.units(), &src.primitives.0)?,
            devices: header(df.units(), &src.devices.0)?,
            technologies: header(tf.units(), &src.technologies.0)?,
            neuromorphic: header(nf.units(), &src.neuromorphic_chips.0)?,
            neuromorphic_comparisons: neuro.comparison_units.clone(),
            accelerators: header(af.units(), &src.accelerator_chips.0)?,
            accelerator_comparisons: accel.comparison_units.clone(),
            workloads: header(wf.units(), &src.workloads.0)?,
        };

        let mut chips = neuro.chips;
        for c in accel.chips {
            if chips.iter().any(|o| o.name == c.name) {
                return Err(Error::invalid(&c.name, "name", "duplicate chip"));
            }
            chips.push(c);
        }
        let mut comparisons = neuro.comparisons;
        comparisons.extend(accel.comparisons);

        let reg = Registry {
            constants,
            primitives: prims,
            devices,
            technologies,
            fan_in,
            chips,
            neuromorphic_split: neuro.split,
            accelerator_split: accel.split,
            comparisons,
            workloads,
            default_schedules,
            headers,
        };
        reg.check_references()?;
        Ok(reg)
    }

    fn check_references(&self) -> Result<()> {
        for t in &self.technologies {
            let label = t.label();
            for (field, name) in [
                ("neuron_device", &t.id.neuron_device),
                ("synapse_device", &t.id.synapse_device),
            ] {
                if self.device(name).is_err() {
                    return Err(Error::invalid(label, field, format!("unknown device `{name}`")));
                }
            }
            if let Some(p) = &t.primitives {
                if !self.primitives.contains_key(p) {
                    return Err(Error::invalid(
                        label,
                        "primitives",
                        format!("unknown circuit primitive family `{p}`"),
                    ));
                }
            }
            if t.family.is_resistive() {
                let syn = self.device(&t.id.synapse_device)?;
                if syn.resistances().is_none() {
                    return Err(Error::invalid(
                        label,
                        "synapse_device",
                        format!("resistive family needs a device with r_on/r_off, `{}` has none", syn.name),
                    ));
                }
            }
        }
        for c in &self.comparisons {
            self.chip(&c.chip)
                .map_err(|_| Error::invalid("comparisons", "chip", format!("unknown chip `{}`", c.chip)))?;
            self.workload(&c.workload).map_err(|_| {
                Error::invalid("comparisons", "workload", format!("unknown workload `{}`", c.workload))
            })?;
        }
        Ok(())
    }

    pub fn constants(&self) -> &GlobalConstants {
        &self.constants
    }

    pub fn primitive_families(&self) -> impl Iterator<Item = &str> {
        self.primitives.keys().map(String::as_str)
    }

    pub fn primitives(&self, family: &str) -> Result<&CircuitPrimitiveTable> {
        self.primitives
            .get(family)
            .ok_or_else(|| Error::UnknownPrimitiveFamily(family.to_string()))
    }

    /// Constants with the transistor override for `family` applied.
    pub fn constants_for(&self, family: Option<&str>) -> GlobalConstants {
        match family {
            Some(f) => self.constants.for_family(f),
            None => self.constants.clone(),
        }
    }

    pub fn devices(&self) -> &[DeviceRecord] {
        &self.devices
    }

    pub fn device(&self, name: &str) -> Result<&DeviceRecord> {
        self.devices
            .iter()
            .find(|d| d.name == name)
            .ok_or_else(|| Error::UnknownDevice(name.to_string()))
    }

    /// Technologies of the given kind, or all of them, in canonical order.
    pub fn technologies(&self, kind: Option<NetworkKind>) -> Vec<&Technology> {
        self.technologies
            .iter()
            .filter(|t| kind.is_none_or(|k| t.kind() == k))
            .collect()
    }

    pub fn enumerate_technologies(&self, kind: Option<NetworkKind>) -> Vec<TechnologyId> {
        self.technologies(kind).into_iter().map(|t| t.id.clone()).collect()
    }

    pub fn technology(&self, label: &str) -> Result<&Technology> {
        self.technologies
            .iter()
            .find(|t| t.id.label == label)
            .ok_or_else(|| Error::UnknownTechnology(label.to_string()))
    }

    /// The ANN technology built from the same design as `t`: same code, or
    /// failing that the same family, devices and primitive table.
    pub fn ann_counterpart(&self, t: &Technology) -> Option<&Technology> {
        let anns = || self.technologies.iter().filter(|o| o.kind() == NetworkKind::Ann);
        anns().find(|o| o.code == t.code).or_else(|| {
            anns().find(|o| {
                o.family == t.family
                    && o.id.neuron_device == t.id.neuron_device
                    && o.id.synapse_device == t.id.synapse_device
                    && o.primitives == t.primitives
            })
        })
    }

    pub fn fan_in_policy(&self) -> &FanInPolicy {
        &self.fan_in
    }

    pub fn chips(&self) -> &[ChipRecord] {
        &self.chips
    }

    pub fn chip(&self, name: &str) -> Result<&ChipRecord> {
        self.chips
            .iter()
            .find(|c| c.name == name)
            .ok_or_else(|| Error::UnknownChip(name.to_string()))
    }

    pub fn area_split(&self, kind: ChipKind) -> AreaSplit {
        match kind {
            ChipKind::Neuromorphic => self.neuromorphic_split,
            ChipKind::Accelerator => self.accelerator_split,
        }
    }

    pub fn comparisons(&self) -> &[Comparison] {
        &self.comparisons
    }

    pub fn workloads(&self) -> &[WorkloadSpec] {
        &self.workloads
    }

    pub fn workload(&self, name: &str) -> Result<&WorkloadSpec> {
        self.workloads
            .iter()
            .find(|w| w.name == name)
            .ok_or_else(|| Error::UnknownWorkload(name.to_string()))
    }

    pub fn default_schedule(&self, kind: NetworkKind) -> Schedule {
        self.default_schedules
            .get(&kind)
            .copied()
            .unwrap_or(Schedule::Parallel)
    }

    /// Canonical-unit serialization; identical inputs give identical bytes.
    pub fn to_canonical_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("registry serializes")
    }

    /// Writes the seven dataset files into `dir`, each in the units it was
    /// loaded with.
    pub fn export_dir(&self, dir: impl AsRef<Path>) -> Result<()> {
        let dir = dir.as_ref();
        fs::create_dir_all(dir).map_err(|source| Error::Io {
            path: dir.display().to_string(),
            source,
        })?;
        let h = &self.headers;
        let write = |name: &str, value: &dyn erased::Json| -> Result<()> {
            let path = dir.join(name);
            let mut text = value.to_json();
            text.push('\n');
            fs::write(&path, text).map_err(|source| Error::Io {
                path: path.display().to_string(),
                source,
            })
        };
        write(
            CONSTANTS_FILE,
            &constants::ConstantsFile::export(&self.constants, &h.constants, CONSTANTS_FILE)?,
        )?;
        write(
            PRIMITIVES_FILE,
            &primitives::PrimitivesFile::export(&self.primitives, &h.primitives, PRIMITIVES_FILE)?,
        )?;
        write(
            DEVICES_FILE,
            &devices::DevicesFile::export(&self.devices, &h.devices, DEVICES_FILE)?,
        )?;
        write(
            TECHNOLOGIES_FILE,
            &technologies::TechnologiesFile::export(
                &self.technologies,
                self.fan_in,
                &h.technologies,
                TECHNOLOGIES_FILE,
            )?,
        )?;
        let comps = |kind: ChipKind| -> Vec<Comparison> {
            self.comparisons
                .iter()
                .filter(|c| self.chip(&c.chip).map(|r| r.kind == kind).unwrap_or(false))
                .cloned()
                .collect()
        };
        write(
            NEUROMORPHIC_FILE,
            &chips::ChipsFile::export(
                ChipKind::Neuromorphic,
                self.neuromorphic_split,
                &self.chips,
                &comps(ChipKind::Neuromorphic),
                &h.neuromorphic,
                h.neuromorphic_comparisons.as_ref(),
                NEUROMORPHIC_FILE,
            )?,
        )?;
        write(
            ACCELERATORS_FILE,
            &chips::ChipsFile::export(
                ChipKind::Accelerator,
                self.accelerator_split,
                &self.chips,
                &comps(ChipKind::Accelerator),
                &h.accelerators,
                h.accelerator_comparisons.as_ref(),
                ACCELERATORS_FILE,
            )?,
        )?;
        write(
            WORKLOADS_FILE,
            &workloads::WorkloadsFile::export(
                &self.workloads,
                &self.default_schedules,
                &h.workloads,
            ),
        )?;
        Ok(())
    }
}

mod erased {
    pub(super) trait Json {
        fn to_json(&self) -> String;
    }

    impl<T: serde::Serialize> Json for T {
        fn to_json(&self) -> String {
            serde_json::to_string_pretty(self).expect("dataset serializes")
        }
    }
}

#[cfg(test)]
mod tests;
