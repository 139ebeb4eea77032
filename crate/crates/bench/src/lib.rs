//! Fixtures shared by the criterion benchmarks.

use neurobench_core::{Registry, Technology};

/// The built-in dataset. Panics if the embedded files fail to load, which
/// the core test suite already rules out.
pub fn registry() -> Registry {
    Registry::builtin().expect("built-in dataset loads")
}

/// One technology per network kind, for benchmarks that need a small,
/// representative spread.
pub fn sample_technologies(reg: &Registry) -> Vec<&Technology> {
    ["ANNDCSRAM", "CNNDCSRAM", "SpiDCSRAM", "OscMOSring"]
        .into_iter()
        .filter_map(|l| reg.technology(l).ok())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_sample_per_kind() {
        let reg = registry();
        let kinds: std::collections::BTreeSet<_> = sample_technologies(&reg).iter().map(|t| t.kind()).collect();
        assert_eq!(kinds.len(), 4);
    }
}
