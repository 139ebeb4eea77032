//! Mapping inference workloads onto neural cores: stage extraction, fan-in
//! cascading, core area and aggregation over stages.

use serde::Serialize;

use crate::ade::AdeTriple;
use crate::error::{Error, Result};
use crate::interconnect::ElementBench;
use crate::registry::{
    ElementFamily, FanIn, GlobalConstants, LayerSpec, NetworkKind, Registry, Schedule, Technology,
    WorkloadSpec,
};

/// One weight layer as seen by a core.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StageParams {
    pub n_in: u64,
    pub n_out: u64,
    /// Synapses per output neuron.
    pub s_neu: u64,
    /// Feature maps, i.e. copies of the core.
    pub f_st: u64,
    pub activity: f64,
}

impl StageParams {
    /// Synaptic operations of the stage, all copies included.
    pub fn synaptic_ops(&self) -> u64 {
        self.s_neu * self.n_out * self.f_st
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Topology {
    CrossConnect,
    Convolution,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Cascaded,
    Sequential,
}

/// How a technology or chip executes a workload.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Execution {
    pub fan_in: FanIn,
    /// Spiking activity falls off with stage depth.
    pub spiking: bool,
    pub schedule: Schedule,
}

impl Execution {
    pub fn mode(&self) -> Mode {
        if self.fan_in == FanIn::Limited(1) {
            Mode::Sequential
        } else {
            Mode::Cascaded
        }
    }

    /// Default execution of a technology. Digital multipliers run
    /// sequentially and time-multiplexed; `schedule` overrides the schedule.
    pub fn for_technology(reg: &Registry, tech: &Technology, schedule: Option<Schedule>) -> Self {
        let policy = reg.fan_in_policy();
        let kind = tech.kind();
        let (fan_in, default) = if tech.family == ElementFamily::DigitalMac {
            (policy.accelerator_sequential, Schedule::TimeMultiplexed)
        } else {
            (policy.fan_in(tech.fan_in, kind), reg.default_schedule(kind))
        };
        Execution { fan_in, spiking: kind.is_spiking(), schedule: schedule.unwrap_or(default) }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StageBench {
    pub params: StageParams,
    pub levels: u64,
    pub extra_neurons: u64,
    /// nm².
    pub area: f64,
    /// ps.
    pub delay: f64,
    /// aJ.
    pub energy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WorkloadBench {
    /// nm².
    pub area: f64,
    /// ps.
    pub delay: f64,
    /// aJ.
    pub energy: f64,
    /// aJ/ps.
    pub power: f64,
    /// Inferences per nm² per ps.
    pub inference_throughput: f64,
    pub schedule: Schedule,
    pub stages: Vec<StageBench>,
}

impl WorkloadBench {
    pub fn power_watts(&self) -> f64 {
        crate::units::aj_per_ps_to_watts(self.power)
    }

    /// Inferences per second of the whole circuit.
    pub fn inference_rate(&self) -> f64 {
        crate::units::per_ps_to_per_s(1.0 / self.delay)
    }
}

/// Core-level parameters of the layer at 1-based `stage_index`.
pub fn stage_params(layer: &LayerSpec, stage_index: usize, kind: NetworkKind) -> Result<StageParams> {
    if stage_index == 0 {
        return Err(Error::domain("stage", "stage index starts at 1"));
    }
    layer.validate()?;
    let activity = if kind.is_spiking() { 1.0 / stage_index as f64 } else { 1.0 };
    Ok(match *layer {
        LayerSpec::FullyConnected { inputs, outputs } => StageParams {
            n_in: inputs,
            n_out: outputs,
            s_neu: inputs,
            f_st: 1,
            activity,
        },
        LayerSpec::Convolution(c) => {
            let (w, h) = c.output_dims()?;
            StageParams {
                n_in: c.image_w * c.image_h * c.in_channels,
                n_out: w * h,
                s_neu: c.kernel * c.kernel * c.in_channels,
                f_st: c.feature_maps,
                activity,
            }
        }
    })
}

pub fn topology(layer: &LayerSpec) -> Topology {
    match layer {
        LayerSpec::FullyConnected { .. } => Topology::CrossConnect,
        LayerSpec::Convolution(_) => Topology::Convolution,
    }
}

/// Levels of a fan-in reduction tree and the neurons it adds per output.
pub fn cascade(fan_in: FanIn, s_neu: u64) -> Result<(u64, u64)> {
    if s_neu == 0 {
        return Err(Error::domain("cascade", "a neuron needs at least one synapse"));
    }
    let f = match fan_in {
        FanIn::Unlimited(_) => return Ok((1, 1)),
        FanIn::Limited(f) if f < 2 => {
            return Err(Error::domain("cascade", "fan-in below 2 runs sequentially, not cascaded"));
        }
        FanIn::Limited(f) => f,
    };
    let (mut levels, mut reach, mut nodes, mut width) = (1u64, f, 1u64, 1u64);
    while reach < s_neu {
        width = width.saturating_mul(f);
        nodes = nodes.saturating_add(width);
        reach = reach.saturating_mul(f);
        levels += 1;
    }
    Ok((levels, nodes))
}

fn cascade_for(stage: &StageParams, exec: &Execution) -> Result<(u64, u64)> {
    match exec.mode() {
        Mode::Sequential => Ok((1, 1)),
        Mode::Cascaded => cascade(exec.fan_in, stage.s_neu),
    }
}

/// Area of one core, limited from below by its wiring, nm².
pub fn core_area(
    stage: &StageParams,
    topology: Topology,
    elem: &ElementBench,
    extra_neurons: u64,
    c: &GlobalConstants,
) -> f64 {
    let m = c.overhead;
    let n_cor = (extra_neurons * stage.n_out + stage.n_in) as f64;
    let synapses = match topology {
        Topology::CrossConnect => stage.n_out as f64 * stage.n_in as f64,
        Topology::Convolution => stage.n_out as f64 * stage.s_neu as f64,
    };
    let a_cor = m.core * (m.neuron * elem.neuron.area * n_cor + m.synapse * elem.synapse.area * synapses);
    let a_wire = stage.n_in as f64 * stage.n_out as f64 * c.wire_pitch * c.wire_pitch;
    a_cor.max(a_wire)
}

/// Delay and energy of one stage copy, interconnects included.
pub fn stage_time_energy(stage: &StageParams, elem: &ElementBench, mode: Mode, levels: u64) -> (f64, f64) {
    let syn = elem.synapse_total();
    let neu = elem.neuron_total();
    let steps = match mode {
        Mode::Cascaded => levels,
        Mode::Sequential => stage.s_neu,
    };
    let delay = steps as f64 * syn.delay + neu.delay;
    let n_out = stage.n_out as f64;
    let energy = stage.activity * stage.s_neu as f64 * n_out * syn.energy + n_out * neu.energy;
    (delay, energy)
}

/// Combines per-stage area, delay, energy and copy count.
pub fn aggregate(stages: &[(AdeTriple, u64)], schedule: Schedule) -> Result<(AdeTriple, f64, f64)> {
    if stages.is_empty() {
        return Err(Error::EmptyWorkload);
    }
    let energy: f64 = stages.iter().map(|(t, f)| t.energy * *f as f64).sum();
    let (area, delay) = match schedule {
        Schedule::Parallel => (
            stages.iter().map(|(t, f)| t.area * *f as f64).sum(),
            stages.iter().map(|(t, _)| t.delay).sum(),
        ),
        Schedule::TimeMultiplexed => (
            stages.iter().map(|(t, _)| t.area).fold(0.0, f64::max),
            stages.iter().map(|(t, f)| t.delay * *f as f64).sum(),
        ),
    };
    let total = AdeTriple::new(area, delay, energy);
    Ok((total, energy / delay, 1.0 / (area * delay)))
}

/// Runs a workload on an element.
pub fn run_workload(
    spec: &WorkloadSpec,
    elem: &ElementBench,
    exec: &Execution,
    c: &GlobalConstants,
) -> Result<WorkloadBench> {
    if spec.layers.is_empty() {
        return Err(Error::EmptyWorkload);
    }
    let kind = if exec.spiking { NetworkKind::Snn } else { NetworkKind::Ann };
    let mut stages = Vec::with_capacity(spec.layers.len());
    for (i, layer) in spec.layers.iter().enumerate() {
        let params = stage_params(layer, i + 1, kind)?;
        let (levels, extra) = cascade_for(&params, exec)?;
        let area = core_area(&params, topology(layer), elem, extra, c);
        let (delay, energy) = stage_time_energy(&params, elem, exec.mode(), levels);
        stages.push(StageBench { params, levels, extra_neurons: extra, area, delay, energy });
    }
    let parts: Vec<(AdeTriple, u64)> = stages
        .iter()
        .map(|s| (AdeTriple::new(s.area, s.delay, s.energy), s.params.f_st))
        .collect();
    let (total, power, throughput) = aggregate(&parts, exec.schedule)?;
    Ok(WorkloadBench {
        area: total.area,
        delay: total.delay,
        energy: total.energy,
        power,
        inference_throughput: throughput,
        schedule: exec.schedule,
        stages,
    })
}

/// Names of the shipped workloads.
pub fn builtin_workloads(reg: &Registry) -> Vec<&str> {
    reg.workloads().iter().map(|w| w.name.as_str()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::registry::{ConvSpec, Padding, TechnologyId};
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn elem(syn: AdeTriple, neu: AdeTriple) -> ElementBench {
        ElementBench {
            technology: TechnologyId {
                network_kind: NetworkKind::Ann,
                neuron_device: "x".into(),
                synapse_device: "x".into(),
                label: "x".into(),
            },
            synapse: syn,
            core_ic: AdeTriple::ZERO,
            neuron: neu,
            chip_ic: AdeTriple::ZERO,
        }
    }

    fn constants() -> GlobalConstants {
        Registry::builtin().unwrap().constants().clone()
    }

    fn conv(w: u64, k: u64, ch: u64, maps: u64) -> LayerSpec {
        LayerSpec::Convolution(ConvSpec {
            image_w: w,
            image_h: w,
            kernel: k,
            in_channels: ch,
            feature_maps: maps,
            stride: 1,
            padding: Padding::Valid,
        })
    }

    #[test]
    fn conv35_stage() {
        let s = stage_params(&conv(35, 5, 1, 24), 1, NetworkKind::Ann).unwrap();
        assert_eq!((s.n_in, s.n_out, s.s_neu, s.f_st), (1225, 961, 25, 24));
        let one = stage_params(&conv(8, 1, 3, 2), 1, NetworkKind::Ann).unwrap();
        assert_eq!((one.s_neu, one.n_out), (3, 64));
        let fc = LayerSpec::FullyConnected { inputs: 784, outputs: 256 };
        let s = stage_params(&fc, 1, NetworkKind::Ann).unwrap();
        assert_eq!((s.n_in, s.n_out, s.s_neu, s.f_st), (784, 256, 784, 1));
        assert_eq!(stage_params(&fc, 4, NetworkKind::Snn).unwrap().activity, 0.25);
        assert!(stage_params(&conv(4, 5, 1, 1), 1, NetworkKind::Ann).is_err());
    }

    #[test]
    fn cascade_examples() {
        assert_eq!(cascade(FanIn::Limited(2), 256).unwrap(), (8, 255));
        assert_eq!(cascade(FanIn::Limited(16), 256).unwrap(), (2, 17));
        assert_eq!(cascade(FanIn::Limited(32), 256).unwrap(), (2, 33));
        assert_eq!(cascade(FanIn::Limited(64), 10).unwrap(), (1, 1));
        assert_eq!(cascade(FanIn::UNLIMITED, 1 << 20).unwrap(), (1, 1));
        assert!(cascade(FanIn::Limited(1), 4).is_err());
    }

    #[test]
    fn wire_limit() {
        let c = constants();
        let s = StageParams { n_in: 784, n_out: 256, s_neu: 784, f_st: 1, activity: 1.0 };
        let tiny = elem(AdeTriple::new(1e-6, 1.0, 1.0), AdeTriple::new(1e-6, 1.0, 1.0));
        let a = core_area(&s, Topology::CrossConnect, &tiny, 1, &c);
        assert_relative_eq!(a, 784.0 * 256.0 * c.wire_pitch * c.wire_pitch);
        assert_relative_eq!(784.0 * 256.0 * 120.0 * 120.0, 2.89e9, max_relative = 1e-3);
    }

    #[test]
    fn modes_coincide_for_one_synapse() {
        let s = StageParams { n_in: 3, n_out: 5, s_neu: 1, f_st: 1, activity: 1.0 };
        let e = elem(AdeTriple::new(1.0, 7.0, 2.0), AdeTriple::new(1.0, 3.0, 4.0));
        assert_eq!(
            stage_time_energy(&s, &e, Mode::Sequential, 99),
            stage_time_energy(&s, &e, Mode::Cascaded, 1)
        );
    }

    #[test]
    fn half_activity_halves_synapse_term() {
        let e = elem(AdeTriple::new(1.0, 1.0, 2.0), AdeTriple::new(1.0, 1.0, 4.0));
        let full = StageParams { n_in: 8, n_out: 5, s_neu: 8, f_st: 1, activity: 1.0 };
        let half = StageParams { activity: 0.5, ..full };
        let (_, ef) = stage_time_energy(&full, &e, Mode::Cascaded, 1);
        let (_, eh) = stage_time_energy(&half, &e, Mode::Cascaded, 1);
        assert_eq!(ef - eh, 0.5 * 8.0 * 5.0 * 2.0);
    }

    #[test]
    fn empty_workload() {
        assert!(matches!(aggregate(&[], Schedule::Parallel), Err(Error::EmptyWorkload)));
        let w = WorkloadSpec { name: "none".into(), description: String::new(), reconstructed: false, layers: vec![] };
        let e = elem(AdeTriple::new(1.0, 1.0, 1.0), AdeTriple::new(1.0, 1.0, 1.0));
        let x = Execution { fan_in: FanIn::Limited(2), spiking: false, schedule: Schedule::Parallel };
        assert!(run_workload(&w, &e, &x, &constants()).is_err());
    }

    #[test]
    fn mac_technologies_run_sequentially() {
        let r = Registry::builtin().unwrap();
        let t = r.technology("ANNDCCMAC").unwrap();
        let x = Execution::for_technology(&r, t, None);
        assert_eq!(x.mode(), Mode::Sequential);
        assert_eq!(x.schedule, Schedule::TimeMultiplexed);
        let s = r.technology("SpiDCSRAM").unwrap();
        assert!(Execution::for_technology(&r, s, None).fan_in.is_unlimited());
    }

    proptest! {
        #[test]
        fn single_stage_schedules_agree(a in 1.0f64..1e9, d in 1.0f64..1e6, e in 1.0f64..1e6) {
            let t = [(AdeTriple::new(a, d, e), 1u64)];
            prop_assert_eq!(aggregate(&t, Schedule::Parallel).unwrap(), aggregate(&t, Schedule::TimeMultiplexed).unwrap());
        }

        #[test]
        fn tmux_never_larger(stages in prop::collection::vec((1.0f64..1e9, 1.0f64..1e6, 1.0f64..1e6, 1u64..64), 1..6)) {
            let t: Vec<_> = stages.iter().map(|&(a, d, e, f)| (AdeTriple::new(a, d, e), f)).collect();
            let (p, _, _) = aggregate(&t, Schedule::Parallel).unwrap();
            let (m, _, _) = aggregate(&t, Schedule::TimeMultiplexed).unwrap();
            prop_assert!(m.area <= p.area);
            prop_assert_eq!(m.energy, p.energy);
        }

        #[test]
        fn energy_linear_in_outputs(n in 1u64..4096, s in 1u64..4096) {
            let e = elem(AdeTriple::new(1.0, 1.0, 3.0), AdeTriple::new(1.0, 1.0, 5.0));
            let a = StageParams { n_in: s, n_out: n, s_neu: s, f_st: 1, activity: 1.0 };
            let b = StageParams { n_out: 2 * n, ..a };
            let (_, ea) = stage_time_energy(&a, &e, Mode::Cascaded, 1);
            let (_, eb) = stage_time_energy(&b, &e, Mode::Cascaded, 1);
            prop_assert!((eb - 2.0 * ea).abs() <= 1e-9 * eb);
        }

        #[test]
        fn conv_not_larger_than_cross(n_in in 1u64..2048, n_out in 1u64..2048, s in 1u64..64) {
            let c = constants();
            let s = s.min(n_in);
            let st = StageParams { n_in, n_out, s_neu: s, f_st: 1, activity: 1.0 };
            let e = elem(AdeTriple::new(1e5, 1.0, 1.0), AdeTriple::new(1e5, 1.0, 1.0));
            prop_assert!(core_area(&st, Topology::Convolution, &e, 1, &c) <= core_area(&st, Topology::CrossConnect, &e, 1, &c));
        }
    }
}
