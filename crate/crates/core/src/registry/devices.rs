use serde::{Deserialize, Serialize};

use super::Scale;
use crate::ade::AdeTriple;
use crate::error::{Error, Result};
use crate::units::{Quantity, UnitHeader};

/// Physical class of a device; decides the interconnect voltage and the
/// default neuron drive current.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DeviceClass {
    Transistor,
    Ferroelectric,
    Spintronic,
    Resistive,
}

/// One intrinsic device: its own cost plus the cost of driving a minimum
/// interconnect, and the on/off resistances of resistive memory cells.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeviceRecord {
    pub name: String,
    pub class: DeviceClass,
    /// nm².
    pub area_int: f64,
    /// ps.
    pub delay_int: f64,
    pub delay_ic: f64,
    /// aJ.
    pub energy_int: f64,
    pub energy_ic: f64,
    /// Ω.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r_on: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r_off: Option<f64>,
}

impl DeviceRecord {
    pub fn intrinsic(&self) -> AdeTriple {
        AdeTriple::new(self.area_int, self.delay_int, self.energy_int)
    }

    /// `(r_on, r_off)` when the device is a resistive memory cell.
    pub fn resistances(&self) -> Option<(f64, f64)> {
        self.r_on.zip(self.r_off)
    }

    pub(crate) fn validate(&self) -> Result<()> {
        let pos = [
            ("area_int", self.area_int),
            ("delay_int", self.delay_int),
            ("delay_ic", self.delay_ic),
            ("energy_int", self.energy_int),
            ("energy_ic", self.energy_ic),
        ];
        for (field, v) in pos {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::invalid(&self.name, field, format!("must be positive, got {v}")));
            }
        }
        match (self.r_on, self.r_off) {
            (None, None) => Ok(()),
            (Some(_), None) => Err(Error::invalid(&self.name, "r_off", "r_on given without r_off")),
            (None, Some(_)) => Err(Error::invalid(&self.name, "r_on", "r_off given without r_on")),
            (Some(on), Some(off)) => {
                if !(on.is_finite() && on > 0.0) {
                    Err(Error::invalid(&self.name, "r_on", "must be positive"))
                } else if !(off.is_finite() && off >= on) {
                    Err(Error::invalid(
                        &self.name,
                        "r_off",
                        format!("r_off ({off}) must be at least r_on ({on})"),
                    ))
                } else {
                    Ok(())
                }
            }
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub(crate) struct DevicesFile {
    units: Option<UnitHeader>,
    devices: Vec<DeviceRecord>,
}

fn scale(s: &Scale<'_>, d: &DeviceRecord) -> Result<DeviceRecord> {
    let r = |v: Option<f64>| v.map(|v| s.apply(Quantity::Resistance, v)).transpose();
    Ok(DeviceRecord {
        name: d.name.clone(),
        class: d.class,
        area_int: s.apply(Quantity::Area, d.area_int)?,
        delay_int: s.apply(Quantity::Time, d.delay_int)?,
        delay_ic: s.apply(Quantity::Time, d.delay_ic)?,
        energy_int: s.apply(Quantity::Energy, d.energy_int)?,
        energy_ic: s.apply(Quantity::Energy, d.energy_ic)?,
        r_on: r(d.r_on)?,
        r_off: r(d.r_off)?,
    })
}

impl DevicesFile {
    pub(crate) fn units(&self) -> Option<&UnitHeader> {
        self.units.as_ref()
    }

    pub(crate) fn resolve(&self, file: &str) -> Result<Vec<DeviceRecord>> {
        let units = self
            .units
            .as_ref()
            .ok_or_else(|| Error::MissingUnits { file: file.into() })?;
        units.check(file)?;
        let s = Scale::load(units, file);
        let mut out: Vec<DeviceRecord> = Vec::with_capacity(self.devices.len());
        for d in &self.devices {
            if out.iter().any(|o| o.name == d.name) {
                return Err(Error::invalid(&d.name, "name", "duplicate device"));
            }
            let d = scale(&s, d)?;
            d.validate()?;
            out.push(d);
        }
        Ok(out)
    }

    pub(crate) fn export(devices: &[DeviceRecord], units: &UnitHeader, file: &str) -> Result<Self> {
        let s = Scale::export(units, file);
        Ok(DevicesFile {
            units: Some(units.clone()),
            devices: devices.iter().map(|d| scale(&s, d)).collect::<Result<_>>()?,
        })
    }
}
