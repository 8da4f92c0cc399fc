use std::fmt;
use std::ops::{Add, Sub};

/// Simulation clock value, nanoseconds since run start.
///
/// Also used for durations (timer intervals, link delays); the arithmetic is
/// plain integer math so runs are exactly reproducible.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Debug)]
pub struct SimTime(pub u64);

pub const NS_PER_MS: u64 = 1_000_000;
pub const NS_PER_SEC: u64 = 1_000_000_000;

impl SimTime {
    pub const ZERO: SimTime = SimTime(0);

    pub const fn from_millis(ms: u64) -> SimTime {
        SimTime(ms * NS_PER_MS)
    }

    pub const fn from_secs(s: u64) -> SimTime {
        SimTime(s * NS_PER_SEC)
    }

    pub fn from_secs_f64(s: f64) -> SimTime {
        SimTime((s * NS_PER_SEC as f64).round() as u64)
    }

    pub fn as_secs_f64(self) -> f64 {
        self.0 as f64 / NS_PER_SEC as f64
    }

    pub fn as_millis_f64(self) -> f64 {
        self.0 as f64 / NS_PER_MS as f64
    }

    /// 1-second histogram bin this instant falls into.
    pub fn bin_1s(self) -> usize {
        (self.0 / NS_PER_SEC) as usize
    }

    pub fn saturating_sub(self, other: SimTime) -> SimTime {
        SimTime(self.0.saturating_sub(other.0))
    }
}

impl Add for SimTime {
    type Output = SimTime;
    fn add(self, rhs: SimTime) -> SimTime {
        SimTime(self.0 + rhs.0)
    }
}

impl Sub for SimTime {
    type Output = SimTime;
    fn sub(self, rhs: SimTime) -> SimTime {
        SimTime(self.0 - rhs.0)
    }
}

impl fmt::Display for SimTime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conversions() {
        assert_eq!(SimTime::from_millis(10).0, 10_000_000);
        assert_eq!(SimTime::from_secs(2), SimTime::from_millis(2000));
        assert_eq!(SimTime::from_secs_f64(0.05), SimTime::from_millis(50));
        assert_eq!(SimTime::from_secs(8).bin_1s(), 8);
        assert_eq!(SimTime(8_999_999_999).bin_1s(), 8);
    }
}
