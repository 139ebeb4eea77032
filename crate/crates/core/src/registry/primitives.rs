use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::Scale;
use crate::ade::AdeTriple;
use crate::error::{Error, Result};
use crate::units::{Quantity, UnitHeader};

/// Area, delay and energy of the standard cells one transistor family
/// builds its digital circuits from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CircuitPrimitiveTable {
    pub inv: AdeTriple,
    /// Minimum inverter cell.
    pub inv1: AdeTriple,
    /// Fan-out-4 inverter.
    pub inv4: AdeTriple,
    pub nan: AdeTriple,
    pub reg: AdeTriple,
    pub se: AdeTriple,
    /// 1-bit full adder.
    pub add1: AdeTriple,
    /// n-bit ripple-carry adder.
    pub add: AdeTriple,
    pub ram: AdeTriple,
}

impl CircuitPrimitiveTable {
    /// Same value in every slot; handy for tests.
    pub fn uniform(t: AdeTriple) -> Self {
        CircuitPrimitiveTable {
            inv: t,
            inv1: t,
            inv4: t,
            nan: t,
            reg: t,
            se: t,
            add1: t,
            add: t,
            ram: t,
        }
    }

    fn entries(&self) -> [(&'static str, AdeTriple); 9] {
        [
            ("inv", self.inv),
            ("inv1", self.inv1),
            ("inv4", self.inv4),
            ("nan", self.nan),
            ("reg", self.reg),
            ("se", self.se),
            ("add1", self.add1),
            ("add", self.add),
            ("ram", self.ram),
        ]
    }

    pub(crate) fn validate(&self, family: &str) -> Result<()> {
        for (name, t) in self.entries() {
            if !t.is_positive() {
                return Err(Error::invalid(
                    format!("primitives.{family}"),
                    name,
                    "area, delay and energy must be positive",
                ));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TableFile {
    inv: Option<AdeTriple>,
    inv1: Option<AdeTriple>,
    inv4: Option<AdeTriple>,
    nan: Option<AdeTriple>,
    reg: Option<AdeTriple>,
    se: Option<AdeTriple>,
    add1: Option<AdeTriple>,
    add: Option<AdeTriple>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    ram: Option<AdeTriple>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub(crate) struct PrimitivesFile {
    units: Option<UnitHeader>,
    families: BTreeMap<String, TableFile>,
}

fn scale_triple(s: &Scale<'_>, t: AdeTriple) -> Result<AdeTriple> {
    Ok(AdeTriple::new(
        s.apply(Quantity::Area, t.area)?,
        s.apply(Quantity::Time, t.delay)?,
        s.apply(Quantity::Energy, t.energy)?,
    ))
}

impl PrimitivesFile {
    pub(crate) fn units(&self) -> Option<&UnitHeader> {
        self.units.as_ref()
    }

    pub(crate) fn resolve(&self, file: &str) -> Result<BTreeMap<String, CircuitPrimitiveTable>> {
        let units = self
            .units
            .as_ref()
            .ok_or_else(|| Error::MissingUnits { file: file.into() })?;
        units.check(file)?;
        let s = Scale::load(units, file);
        let mut out = BTreeMap::new();
        for (family, t) in &self.families {
            let rec = format!("primitives.{family}");
            let get = |v: Option<AdeTriple>, name: &str| -> Result<AdeTriple> {
                let v = v.ok_or_else(|| {
                    Error::invalid(rec.clone(), name, "missing primitive entry")
                })?;
                scale_triple(&s, v)
            };
            let reg = get(t.reg, "reg")?;
            let table = CircuitPrimitiveTable {
                inv: get(t.inv, "inv")?,
                inv1: get(t.inv1, "inv1")?,
                inv4: get(t.inv4, "inv4")?,
                nan: get(t.nan, "nan")?,
                reg,
                se: get(t.se, "se")?,
                add1: get(t.add1, "add1")?,
                add: get(t.add, "add")?,
                ram: match t.ram {
                    Some(r) => scale_triple(&s, r)?,
                    None => reg,
                },
            };
            table.validate(family)?;
            out.insert(family.clone(), table);
        }
        if out.is_empty() {
            return Err(Error::invalid(file, "families", "no primitive families defined"));
        }
        Ok(out)
    }

    pub(crate) fn export(
        tables: &BTreeMap<String, CircuitPrimitiveTable>,
        units: &UnitHeader,
        file: &str,
    ) -> Result<Self> {
        let s = Scale::export(units, file);
        let mut families = BTreeMap::new();
        for (name, t) in tables {
            let g = |v: AdeTriple| scale_triple(&s, v).map(Some);
            families.insert(
                name.clone(),
                TableFile {
                    inv: g(t.inv)?,
                    inv1: g(t.inv1)?,
                    inv4: g(t.inv4)?,
                    nan: g(t.nan)?,
                    reg: g(t.reg)?,
                    se: g(t.se)?,
                    add1: g(t.add1)?,
                    add: g(t.add)?,
                    ram: g(t.ram)?,
                },
            );
        }
        Ok(PrimitivesFile {
            units: Some(units.clone()),
            families,
        })
    }
}
