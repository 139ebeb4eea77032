use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::technologies::NetworkKind;
use crate::error::{Error, Result};
use crate::units::UnitHeader;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Padding {
    #[default]
    Valid,
    Same,
}

fn one() -> u64 {
    1
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConvSpec {
    pub image_w: u64,
    pub image_h: u64,
    pub kernel: u64,
    #[serde(default = "one")]
    pub in_channels: u64,
    pub feature_maps: u64,
    #[serde(default = "one")]
    pub stride: u64,
    #[serde(default)]
    pub padding: Padding,
}

impl ConvSpec {
    /// Output feature-map width and height.
    pub fn output_dims(&self) -> Result<(u64, u64)> {
        let dim = |n: u64| -> Result<u64> {
            match self.padding {
                Padding::Valid => {
                    if self.kernel > n {
                        return Err(Error::domain(
                            "convolution",
                            format!("kernel {} exceeds image dimension {n} with valid padding", self.kernel),
                        ));
                    }
                    Ok((n - self.kernel) / self.stride + 1)
                }
                Padding::Same => Ok(n.div_ceil(self.stride)),
            }
        };
        Ok((dim(self.image_w)?, dim(self.image_h)?))
    }
}

/// One weight layer of a network.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum LayerSpec {
    FullyConnected { inputs: u64, outputs: u64 },
    Convolution(ConvSpec),
}

impl LayerSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            LayerSpec::FullyConnected { inputs, outputs } => {
                if *inputs == 0 || *outputs == 0 {
                    return Err(Error::domain("layer", "fully connected layer needs inputs and outputs"));
                }
            }
            LayerSpec::Convolution(c) => {
                if [c.image_w, c.image_h, c.kernel, c.in_channels, c.feature_maps, c.stride]
                    .contains(&0)
                {
                    return Err(Error::domain("layer", "convolution dimensions must be positive"));
                }
                c.output_dims()?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WorkloadSpec {
    pub name: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub description: String,
    /// Layer dimensions reconstructed from the network's original
    /// publication rather than stated alongside the workload.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub reconstructed: bool,
    pub layers: Vec<LayerSpec>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Schedule {
    Parallel,
    #[serde(alias = "tmux")]
    TimeMultiplexed,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub(crate) struct WorkloadsFile {
    units: Option<UnitHeader>,
    default_schedules: BTreeMap<NetworkKind, Schedule>,
    workloads: Vec<WorkloadSpec>,
}

impl WorkloadsFile {
    pub(crate) fn units(&self) -> Option<&UnitHeader> {
        self.units.as_ref()
    }

    pub(crate) fn resolve(
        &self,
        file: &str,
    ) -> Result<(Vec<WorkloadSpec>, BTreeMap<NetworkKind, Schedule>)> {
        let units = self
            .units
            .as_ref()
            .ok_or_else(|| Error::MissingUnits { file: file.into() })?;
        units.check(file)?;
        for kind in NetworkKind::ALL {
            if !self.default_schedules.contains_key(&kind) {
                return Err(Error::invalid(file, "default_schedules", format!("no schedule for {kind}")));
            }
        }
        let mut seen: Vec<&str> = Vec::new();
        for w in &self.workloads {
            if seen.contains(&w.name.as_str()) {
                return Err(Error::invalid(&w.name, "name", "duplicate workload"));
            }
            seen.push(&w.name);
            if w.layers.is_empty() {
                return Err(Error::invalid(&w.name, "layers", "workload has no stages"));
            }
            for (i, l) in w.layers.iter().enumerate() {
                l.validate()
                    .map_err(|e| Error::invalid(&w.name, format!("layers[{i}]"), e.to_string()))?;
            }
        }
        Ok((self.workloads.clone(), self.default_schedules.clone()))
    }

    pub(crate) fn export(
        workloads: &[WorkloadSpec],
        schedules: &BTreeMap<NetworkKind, Schedule>,
        units: &UnitHeader,
    ) -> Self {
        WorkloadsFile {
            units: Some(units.clone()),
            default_schedules: schedules.clone(),
            workloads: workloads.to_vec(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conv_output_dims() {
        let c = ConvSpec {
            image_w: 227,
            image_h: 227,
            kernel: 11,
            in_channels: 3,
            feature_maps: 96,
            stride: 4,
            padding: Padding::Valid,
        };
        assert_eq!(c.output_dims().unwrap(), (55, 55));
        let same = ConvSpec {
            image_w: 27,
            image_h: 27,
            kernel: 5,
            stride: 1,
            padding: Padding::Same,
            ..c
        };
        assert_eq!(same.output_dims().unwrap(), (27, 27));
    }

    #[test]
    fn oversized_kernel_rejected() {
        let c = ConvSpec {
            image_w: 4,
            image_h: 4,
            kernel: 5,
            in_channels: 1,
            feature_maps: 1,
            stride: 1,
            padding: Padding::Valid,
        };
        assert!(c.output_dims().is_err());
        assert!(LayerSpec::Convolution(c).validate().is_err());
    }

    #[test]
    fn layer_json_is_tagged() {
        let l: LayerSpec =
            serde_json::from_str(r#"{"kind":"fully_connected","inputs":784,"outputs":256}"#).unwrap();
        assert_eq!(l, LayerSpec::FullyConnected { inputs: 784, outputs: 256 });
    }
}
