//! Canonical units and the conversions applied at dataset boundaries.
//!
//! Every value held by the registry and every number produced by the
//! models is in one canonical unit per quantity:
//!
//! | quantity                | canonical |
//! |-------------------------|-----------|
//! | length                  | nm        |
//! | area                    | nm²       |
//! | time                    | ps        |
//! | energy                  | aJ        |
//! | power                   | aJ/ps     |
//! | rate, throughput        | 1/ps      |
//! | voltage                 | V         |
//! | resistance              | Ω         |
//! | capacitance             | F         |
//! | current                 | A         |
//! | conductance             | S         |
//! | per-length quantities   | SI per m  |
//!
//! Dataset files declare their units in a `units` header; the loader
//! multiplies by [`Quantity::factor`] exactly once and the exporter divides
//! by the same factor.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const NM_PER_M: f64 = 1e9;
pub const PS_PER_S: f64 = 1e12;
pub const AJ_PER_J: f64 = 1e18;
/// 1 aJ/ps = 1e-18 J / 1e-12 s.
pub const WATTS_PER_AJ_PER_PS: f64 = 1e-6;

#[inline]
pub fn nm_to_m(nm: f64) -> f64 {
    nm / NM_PER_M
}

#[inline]
pub fn seconds_to_ps(s: f64) -> f64 {
    s * PS_PER_S
}

#[inline]
pub fn joules_to_aj(j: f64) -> f64 {
    j * AJ_PER_J
}

#[inline]
pub fn aj_per_ps_to_watts(p: f64) -> f64 {
    p * WATTS_PER_AJ_PER_PS
}

#[inline]
pub fn watts_to_aj_per_ps(w: f64) -> f64 {
    w / WATTS_PER_AJ_PER_PS
}

#[inline]
pub fn per_ps_to_per_s(r: f64) -> f64 {
    r * PS_PER_S
}

#[inline]
pub fn per_s_to_per_ps(r: f64) -> f64 {
    r / PS_PER_S
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    Length,
    Area,
    Time,
    Energy,
    Power,
    Rate,
    Throughput,
    Voltage,
    Resistance,
    Capacitance,
    Current,
    Conductance,
    CapacitancePerLength,
    ResistancePerLength,
    CurrentPerLength,
}

impl Quantity {
    /// Key used for this quantity in a dataset `units` header.
    pub fn key(self) -> &'static str {
        match self {
            Quantity::Length => "length",
            Quantity::Area => "area",
            Quantity::Time => "time",
            Quantity::Energy => "energy",
            Quantity::Power => "power",
            Quantity::Rate => "rate",
            Quantity::Throughput => "throughput",
            Quantity::Voltage => "voltage",
            Quantity::Resistance => "resistance",
            Quantity::Capacitance => "capacitance",
            Quantity::Current => "current",
            Quantity::Conductance => "conductance",
            Quantity::CapacitancePerLength => "capacitance_per_length",
            Quantity::ResistancePerLength => "resistance_per_length",
            Quantity::CurrentPerLength => "current_per_length",
        }
    }

    pub fn canonical(self) -> &'static str {
        match self {
            Quantity::Length => "nm",
            Quantity::Area => "nm2",
            Quantity::Time => "ps",
            Quantity::Energy => "aJ",
            Quantity::Power => "aJ/ps",
            Quantity::Rate => "1/ps",
            Quantity::Throughput => "1/ps",
            Quantity::Voltage => "V",
            Quantity::Resistance => "ohm",
            Quantity::Capacitance => "F",
            Quantity::Current => "A",
            Quantity::Conductance => "S",
            Quantity::CapacitancePerLength => "F/m",
            Quantity::ResistancePerLength => "ohm/m",
            Quantity::CurrentPerLength => "A/m",
        }
    }

    /// Multiplier taking a value in `unit` to the canonical unit.
    pub fn factor(self, unit: &str) -> Option<f64> {
        let f = match (self, unit) {
            (Quantity::Length, "nm") => 1.0,
            (Quantity::Length, "um") => 1e3,
            (Quantity::Length, "mm") => 1e6,
            (Quantity::Length, "m") => 1e9,

            (Quantity::Area, "nm2") => 1.0,
            (Quantity::Area, "um2") => 1e6,
            (Quantity::Area, "mm2") => 1e12,

            (Quantity::Time, "ps") => 1.0,
            (Quantity::Time, "ns") => 1e3,
            (Quantity::Time, "us") => 1e6,
            (Quantity::Time, "ms") => 1e9,
            (Quantity::Time, "s") => 1e12,

            (Quantity::Energy, "aJ") => 1.0,
            (Quantity::Energy, "fJ") => 1e3,
            (Quantity::Energy, "pJ") => 1e6,
            (Quantity::Energy, "nJ") => 1e9,
            (Quantity::Energy, "uJ") => 1e12,
            (Quantity::Energy, "J") => 1e18,

            (Quantity::Power, "aJ/ps") => 1.0,
            (Quantity::Power, "uW") => 1.0,
            (Quantity::Power, "mW") => 1e3,
            (Quantity::Power, "W") => 1e6,

            (Quantity::Rate, "1/ps") => 1.0,
            (Quantity::Rate, "1/s" | "Hz") => 1e-12,
            (Quantity::Rate, "kHz") => 1e-9,
            (Quantity::Rate, "MHz") => 1e-6,
            (Quantity::Rate, "GHz") => 1e-3,

            (Quantity::Throughput, "1/ps") => 1.0,
            (Quantity::Throughput, "SOPS" | "MAC/s") => 1e-12,
            (Quantity::Throughput, "MSOPS" | "MMAC/s") => 1e-6,
            (Quantity::Throughput, "GSOPS" | "GMAC/s") => 1e-3,

            (Quantity::Voltage, "V") => 1.0,
            (Quantity::Voltage, "mV") => 1e-3,

            (Quantity::Resistance, "ohm") => 1.0,
            (Quantity::Resistance, "kohm") => 1e3,
            (Quantity::Resistance, "Mohm") => 1e6,

            (Quantity::Capacitance, "F") => 1.0,
            (Quantity::Capacitance, "fF") => 1e-15,
            (Quantity::Capacitance, "aF") => 1e-18,

            (Quantity::Current, "A") => 1.0,
            (Quantity::Current, "mA") => 1e-3,
            (Quantity::Current, "uA") => 1e-6,

            (Quantity::Conductance, "S") => 1.0,
            (Quantity::Conductance, "mS") => 1e-3,
            (Quantity::Conductance, "uS") => 1e-6,

            (Quantity::CapacitancePerLength, "F/m") => 1.0,
            (Quantity::CapacitancePerLength, "nF/m") => 1e-9,
            (Quantity::CapacitancePerLength, "fF/um") => 1e-9,

            (Quantity::ResistancePerLength, "ohm/m") => 1.0,
            (Quantity::ResistancePerLength, "Gohm/m") => 1e9,

            (Quantity::CurrentPerLength, "A/m") => 1.0,
            (Quantity::CurrentPerLength, "uA/um") => 1.0,
            (Quantity::CurrentPerLength, "mA/um") => 1e3,

            _ => return None,
        };
        Some(f)
    }
}

/// The `units` header block carried by every dataset file.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct UnitHeader(pub BTreeMap<String, String>);

impl UnitHeader {
    pub fn canonical(quantities: &[Quantity]) -> Self {
        UnitHeader(
            quantities
                .iter()
                .map(|q| (q.key().to_string(), q.canonical().to_string()))
                .collect(),
        )
    }

    /// Conversion factor for `q`; the header must declare it.
    pub fn factor(&self, file: &str, q: Quantity) -> Result<f64> {
        let unit = self.0.get(q.key()).ok_or_else(|| Error::UndeclaredUnit {
            file: file.to_string(),
            quantity: q.key(),
        })?;
        q.factor(unit).ok_or_else(|| Error::UnsupportedUnit {
            file: file.to_string(),
            quantity: q.key(),
            unit: unit.clone(),
        })
    }

    /// Checks every declared unit is known, so typos fail at load time even
    /// for quantities a file happens not to use.
    pub fn check(&self, file: &str) -> Result<()> {
        for (key, unit) in &self.0 {
            let Some(q) = ALL.iter().find(|q| q.key() == key) else {
                // Non-physical annotations (e.g. "count") are allowed.
                continue;
            };
            if q.factor(unit).is_none() {
                return Err(Error::UnsupportedUnit {
                    file: file.to_string(),
                    quantity: q.key(),
                    unit: unit.clone(),
                });
            }
        }
        Ok(())
    }
}

const ALL: [Quantity; 15] = [
    Quantity::Length,
    Quantity::Area,
    Quantity::Time,
    Quantity::Energy,
    Quantity::Power,
    Quantity::Rate,
    Quantity::Throughput,
    Quantity::Voltage,
    Quantity::Resistance,
    Quantity::Capacitance,
    Quantity::Current,
    Quantity::Conductance,
    Quantity::CapacitancePerLength,
    Quantity::ResistancePerLength,
    Quantity::CurrentPerLength,
];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn aj_per_ps_is_a_microwatt() {
        assert_eq!(aj_per_ps_to_watts(1.0), 1e-6);
        assert_eq!(Quantity::Power.factor("uW"), Some(1.0));
        assert_eq!(watts_to_aj_per_ps(1e-6), 1.0);
    }

    #[test]
    fn table_units_convert() {
        assert_eq!(Quantity::Area.factor("mm2"), Some(1e12));
        assert_eq!(Quantity::Energy.factor("pJ"), Some(1e6));
        assert_eq!(Quantity::Throughput.factor("GMAC/s"), Some(1e-3));
        assert_eq!(Quantity::Resistance.factor("kohm"), Some(1e3));
        assert_eq!(Quantity::Area.factor("acres"), None);
    }

    #[test]
    fn header_requires_declared_unit() {
        let h = UnitHeader([("area".to_string(), "um2".to_string())].into());
        assert_eq!(h.factor("x.json", Quantity::Area).unwrap(), 1e6);
        assert!(matches!(
            h.factor("x.json", Quantity::Time),
            Err(Error::UndeclaredUnit { .. })
        ));
        let bad = UnitHeader([("area".to_string(), "furlong2".to_string())].into());
        assert!(bad.check("x.json").is_err());
    }
}
