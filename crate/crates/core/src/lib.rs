//! Analytic area, delay and energy benchmarks for neural-inference hardware.
//!
//! Costs are built bottom-up from intrinsic devices and circuit primitives
//! ([`circuits`], [`elements`]), transformed per network type
//! ([`networks`]), completed with interconnect ([`interconnect`]) and
//! aggregated into chips ([`chip`]) and inference workloads ([`workload`]).
//! Published chips are decomposed top-down in [`topsdown`]. [`engine`] wires
//! the stages together over a [`Registry`], and [`report`] emits tables.

pub mod ade;
pub mod chip;
pub mod circuits;
pub mod elements;
pub mod engine;
pub mod error;
pub mod interconnect;
pub mod networks;
pub mod registry;
pub mod report;
pub mod topsdown;
pub mod units;
pub mod workload;

pub use ade::AdeTriple;
pub use chip::{ChipBench, ChipConfig};
pub use elements::RawElementBench;
pub use engine::ChipResult;
pub use error::{Error, Result};
pub use interconnect::ElementBench;
pub use networks::{Coding, NetworkElementBench};
pub use registry::{
    ChipField, ChipKind, ChipRecord, CircuitPrimitiveTable, DeviceRecord, ElementFamily, FanIn,
    FanInPolicy, GlobalConstants, LayerSpec, NetworkKind, OscillatorClass, Registry, Schedule,
    Technology, TechnologyId, WorkloadSpec,
};
pub use report::{ScatterPoint, Series};
pub use topsdown::TopsDownElement;
pub use workload::{StageParams, WorkloadBench};
