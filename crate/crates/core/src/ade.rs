use std::iter::Sum;
use std::ops::{Add, AddAssign};

use serde::{Deserialize, Serialize};

/// Area (nm²), delay (ps) and energy (aJ) of a circuit element.
///
/// Addition is component-wise. Scaling is always per component; there is
/// deliberately no `Mul<f64>` that would scale all three at once.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct AdeTriple {
    pub area: f64,
    pub delay: f64,
    pub energy: f64,
}

impl AdeTriple {
    pub const ZERO: AdeTriple = AdeTriple {
        area: 0.0,
        delay: 0.0,
        energy: 0.0,
    };

    pub const fn new(area: f64, delay: f64, energy: f64) -> Self {
        AdeTriple {
            area,
            delay,
            energy,
        }
    }

    #[must_use]
    pub fn scale_area(self, k: f64) -> Self {
        AdeTriple {
            area: self.area * k,
            ..self
        }
    }

    #[must_use]
    pub fn scale_delay(self, k: f64) -> Self {
        AdeTriple {
            delay: self.delay * k,
            ..self
        }
    }

    #[must_use]
    pub fn scale_energy(self, k: f64) -> Self {
        AdeTriple {
            energy: self.energy * k,
            ..self
        }
    }

    /// All components finite and non-negative.
    pub fn is_valid(&self) -> bool {
        [self.area, self.delay, self.energy]
            .iter()
            .all(|v| v.is_finite() && *v >= 0.0)
    }

    pub fn is_positive(&self) -> bool {
        [self.area, self.delay, self.energy]
            .iter()
            .all(|v| v.is_finite() && *v > 0.0)
    }

    /// Average power over the delay, in aJ/ps.
    pub fn power(&self) -> f64 {
        self.energy / self.delay
    }
}

impl Add for AdeTriple {
    type Output = AdeTriple;

    fn add(self, rhs: AdeTriple) -> AdeTriple {
        AdeTriple {
            area: self.area + rhs.area,
            delay: self.delay + rhs.delay,
            energy: self.energy + rhs.energy,
        }
    }
}

impl AddAssign for AdeTriple {
    fn add_assign(&mut self, rhs: AdeTriple) {
        *self = *self + rhs;
    }
}

impl Sum for AdeTriple {
    fn sum<I: Iterator<Item = AdeTriple>>(iter: I) -> Self {
        iter.fold(AdeTriple::ZERO, Add::add)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn scaling_touches_one_component() {
        let t = AdeTriple::new(1.0, 2.0, 3.0);
        assert_eq!(t.scale_area(4.0), AdeTriple::new(4.0, 2.0, 3.0));
        assert_eq!(t.scale_delay(4.0), AdeTriple::new(1.0, 8.0, 3.0));
        assert_eq!(t.scale_energy(4.0), AdeTriple::new(1.0, 2.0, 12.0));
    }

    proptest! {
        #[test]
        fn addition_is_componentwise(a in 0.0..1e9f64, b in 0.0..1e9f64, c in 0.0..1e9f64,
                                     d in 0.0..1e9f64, e in 0.0..1e9f64, f in 0.0..1e9f64) {
            let s = AdeTriple::new(a, b, c) + AdeTriple::new(d, e, f);
            prop_assert_eq!(s, AdeTriple::new(a + d, b + e, c + f));
            prop_assert!(s.is_valid());
        }
    }
}
