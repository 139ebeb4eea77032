use super::*;

fn builtin() -> Registry {
    Registry::builtin().expect("shipped datasets load")
}

#[test]
fn builtin_loads() {
    let r = builtin();
    assert_eq!(r.devices().len(), 15);
    assert_eq!(r.workloads().len(), 6);
}

#[test]
fn lookup_device_values() {
    let r = builtin();
    let me = r.device("ME").unwrap();
    assert_eq!(me.delay_int, 679.91);
    assert_eq!(me.energy_int, 1108.90);
    let ox = r.device("OxideR").unwrap();
    assert_eq!(ox.r_on, Some(200e3));
    assert_eq!(ox.r_off, Some(1000e3));
    assert!(matches!(r.device("NOPE"), Err(Error::UnknownDevice(_))));
}

#[test]
fn defaulted_lengths_follow_feature_size() {
    let c = builtin().constants().clone();
    assert_eq!(c.min_ic_length, 20.0 * c.feature_size);
    assert_eq!(c.digital_width, 4.0 * c.feature_size);
    assert_eq!(c.analog_width, 16.0 * c.feature_size);
    assert_eq!(c.wire_pitch, 8.0 * c.feature_size);
    assert_eq!(c.sense_amp_widths.iso, 6.5 * c.feature_size);
    assert_eq!(c.ota_widths.pull_up, 5.0 * c.feature_size);
    // C_load defaults to one minimum digital gate.
    assert_eq!(
        c.load_capacitance,
        c.transistor.cap_per_width * crate::units::nm_to_m(c.digital_width)
    );
    assert_eq!(c.analog_read_pulse, 1000.0);
}

#[test]
fn interconnect_resistance_is_self_consistent() {
    let c = builtin().constants().clone();
    let r = c.ic_res_per_length * crate::units::nm_to_m(c.min_ic_length);
    assert!((r / c.min_ic_resistance - 1.0).abs() < 0.02);
}

#[test]
fn tfet_override_applies_to_family() {
    let r = builtin();
    let t = r.constants_for(Some("tfet"));
    assert_eq!(t.vcc(), 0.4);
    assert_eq!(r.constants_for(Some("cmos")).vcc(), 0.8);
}

#[test]
fn technology_enumeration() {
    let r = builtin();
    let onn = r.enumerate_technologies(Some(NetworkKind::Onn));
    assert_eq!(onn.len(), 7);
    for l in ["OscSTT", "OscME", "OscMOSring"] {
        assert!(onn.iter().any(|t| t.label == l), "{l}");
    }
    let ann = r.enumerate_technologies(Some(NetworkKind::Ann));
    assert_eq!(ann.len(), 17);
    assert_eq!(ann[0].label, "ANNDCSRAM");
    let all = r.enumerate_technologies(None);
    let mut labels: Vec<_> = all.iter().map(|t| t.label.clone()).collect();
    labels.sort();
    labels.dedup();
    assert_eq!(labels.len(), all.len());
    assert_eq!(all.len(), 17 + 17 + 15 + 7);
}

#[test]
fn labels_decompose_into_prefix_and_code() {
    let r = builtin();
    for t in r.technologies(None) {
        assert_eq!(t.label(), format!("{}{}", t.kind().prefix(), t.code));
    }
}

#[test]
fn onn_counterparts() {
    let r = builtin();
    let ring = r.technology("OscMOSring").unwrap();
    assert_eq!(r.ann_counterpart(ring).unwrap().label(), "ANNAnCAnC");
    let me = r.technology("OscME").unwrap();
    assert_eq!(r.ann_counterpart(me).unwrap().label(), "ANNMEME");
}

#[test]
fn chip_records_convert_units() {
    let r = builtin();
    let tn = r.chip("TrueNorth").unwrap();
    assert_eq!(tn.area, Some(430e12));
    assert!((tn.power.unwrap() - 72e3).abs() < 1e-9);
    assert!((tn.throughput.unwrap() - 3e-3).abs() < 1e-15);
    assert_eq!(tn.energy_per_event, Some(26e6));
    let spinn2 = r.chip("SpiNNaker 2").unwrap();
    assert_eq!(spinn2.area, None);
    let eyeriss = r.chip("Eyeriss").unwrap();
    assert_eq!(eyeriss.kind, ChipKind::Accelerator);
    assert!((eyeriss.clock.unwrap() - 2e-4).abs() < 1e-18);
    assert!(eyeriss.is_derived(ChipField::EnergyPerEvent));
}

#[test]
fn loading_is_deterministic() {
    let a = builtin().to_canonical_json();
    let b = builtin().to_canonical_json();
    assert_eq!(a, b);
}

fn sources_with(file: &str, edit: impl Fn(&mut serde_json::Value)) -> DatasetSources {
    let mut s = DatasetSources::builtin();
    let slot = match file {
        CONSTANTS_FILE => &mut s.constants,
        DEVICES_FILE => &mut s.devices,
        TECHNOLOGIES_FILE => &mut s.technologies,
        NEUROMORPHIC_FILE => &mut s.neuromorphic_chips,
        WORKLOADS_FILE => &mut s.workloads,
        PRIMITIVES_FILE => &mut s.primitives,
        _ => unreachable!(),
    };
    let mut v: serde_json::Value = serde_json::from_str(&slot.1).unwrap();
    edit(&mut v);
    slot.1 = v.to_string();
    s
}

#[test]
fn missing_supply_voltage_is_named() {
    let s = sources_with(CONSTANTS_FILE, |v| {
        v["transistor"].as_object_mut().unwrap().remove("supply_voltage");
    });
    let e = Registry::from_sources(&s).unwrap_err();
    assert_eq!(e.to_string(), "missing constant supply_voltage");
}

#[test]
fn r_off_below_r_on_names_device() {
    let s = sources_with(DEVICES_FILE, |v| {
        for d in v["devices"].as_array_mut().unwrap() {
            if d["name"] == "OxideR" {
                d["r_off"] = 100.into();
            }
        }
    });
    let e = Registry::from_sources(&s).unwrap_err();
    match e {
        Error::Validation { record, field, .. } => {
            assert_eq!(record, "OxideR");
            assert_eq!(field, "r_off");
        }
        other => panic!("unexpected {other}"),
    }
}

#[test]
fn files_without_units_are_rejected() {
    for file in [CONSTANTS_FILE, DEVICES_FILE, TECHNOLOGIES_FILE, NEUROMORPHIC_FILE, WORKLOADS_FILE, PRIMITIVES_FILE] {
        let s = sources_with(file, |v| {
            v.as_object_mut().unwrap().remove("units");
        });
        assert!(
            matches!(Registry::from_sources(&s), Err(Error::MissingUnits { .. })),
            "{file}"
        );
    }
}

#[test]
fn unknown_unit_is_rejected() {
    let s = sources_with(DEVICES_FILE, |v| {
        v["units"]["area"] = "acre".into();
    });
    assert!(matches!(
        Registry::from_sources(&s),
        Err(Error::UnsupportedUnit { .. })
    ));
}

#[test]
fn dangling_device_reference_is_rejected() {
    let s = sources_with(TECHNOLOGIES_FILE, |v| {
        v["designs"][0]["synapse_device"] = "Unobtainium".into();
    });
    let e = Registry::from_sources(&s).unwrap_err();
    assert!(e.to_string().contains("Unobtainium"), "{e}");
    assert!(e.to_string().contains("ANNDCSRAM"), "{e}");
}

#[test]
fn zero_filled_chip_field_is_rejected() {
    let s = sources_with(NEUROMORPHIC_FILE, |v| {
        v["chips"][0]["power"] = 0.into();
    });
    assert!(Registry::from_sources(&s).is_err());
}

#[test]
fn export_round_trips() {
    let r = builtin();
    let dir = std::env::temp_dir().join(format!("neurobench-export-{}", std::process::id()));
    r.export_dir(&dir).unwrap();
    let back = Registry::load_dir(&dir).unwrap();
    std::fs::remove_dir_all(&dir).ok();
    assert_eq!(r.technologies(None), back.technologies(None));
    assert_eq!(r.workloads(), back.workloads());
    assert_eq!(r.comparisons().len(), back.comparisons().len());
    let close = |a: f64, b: f64| (a - b).abs() <= 4.0 * f64::EPSILON * a.abs().max(b.abs());
    for (a, b) in r.devices().iter().zip(back.devices()) {
        assert!(close(a.energy_int, b.energy_int) && close(a.area_int, b.area_int));
        assert_eq!(a.r_on.is_some(), b.r_on.is_some());
        if let (Some(x), Some(y)) = (a.r_on, b.r_on) {
            assert!(close(x, y));
        }
    }
    for (a, b) in r.chips().iter().zip(back.chips()) {
        for f in [ChipField::Area, ChipField::Power, ChipField::Throughput, ChipField::Clock] {
            match (a.get(f), b.get(f)) {
                (Some(x), Some(y)) => assert!(close(x, y), "{} {f}", a.name),
                (None, None) => {}
                _ => panic!("{} {f} presence changed", a.name),
            }
        }
    }
    let (ca, cb) = (r.constants(), back.constants());
    assert!(close(ca.ic_res_per_length, cb.ic_res_per_length));
    assert!(close(ca.analog_read_pulse, cb.analog_read_pulse));
    assert!(close(ca.load_capacitance, cb.load_capacitance));
}
