//! Integer temperature schedules and refractory-period policies for the
//! spiking annealer.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metropolis::{Rng24, TempHat};

/// Refreshes spent at the floor temperature before the default schedule
/// starts over.
pub const DEFAULT_REHEAT: u64 = 10;

/// Annealing trajectory on the integer temperature `T̂`.
///
/// The temperature is updated once every `refresh` steps. A `t0` of `None`
/// starts from the largest initial flip magnitude `max_i |q_ii + 2 z_i|`.
/// With `reheat` set, a temperature that has sat at `t_min` for that many
/// refreshes jumps back to the starting temperature and the ramp repeats.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Schedule {
    /// `T̂ ← max(t_min, floor(T̂ · num / den))`.
    Geometric {
        #[serde(default)]
        t0: Option<u64>,
        #[serde(default = "default_num")]
        num: u64,
        #[serde(default = "default_den")]
        den: u64,
        #[serde(default = "default_refresh")]
        refresh: u64,
        #[serde(default)]
        t_min: u64,
        #[serde(default = "default_reheat")]
        reheat: Option<u64>,
    },
    /// `T̂ ← max(t_min, T̂ - decrement)`.
    Linear {
        #[serde(default)]
        t0: Option<u64>,
        decrement: u64,
        #[serde(default = "default_refresh")]
        refresh: u64,
        #[serde(default)]
        t_min: u64,
        #[serde(default = "default_reheat")]
        reheat: Option<u64>,
    },
    /// Fixed temperature.
    Constant { t: u64 },
}

fn default_num() -> u64 {
    19
}

fn default_den() -> u64 {
    20
}

fn default_refresh() -> u64 {
    10
}

fn default_reheat() -> Option<u64> {
    Some(DEFAULT_REHEAT)
}

impl Default for Schedule {
    fn default() -> Self {
        Schedule::Geometric { t0: None, num: 19, den: 20, refresh: 10, t_min: 0, reheat: Some(DEFAULT_REHEAT) }
    }
}

impl Schedule {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Schedule::Geometric { num, den, refresh, t_min, t0, .. } => {
                if den == 0 || num > den {
                    return Err(Error::InvalidConfig(format!("geometric ratio {num}/{den} must lie in [0, 1]")));
                }
                check_common(refresh, t_min, t0)
            }
            Schedule::Linear { refresh, t_min, t0, .. } => check_common(refresh, t_min, t0),
            Schedule::Constant { .. } => Ok(()),
        }?;
        if self.reheat() == Some(0) {
            return Err(Error::InvalidConfig("reheat interval must be at least 1".into()));
        }
        Ok(())
    }

    /// Starting temperature given the automatic estimate.
    pub fn initial(&self, auto: u64) -> TempHat {
        match *self {
            Schedule::Geometric { t0, t_min, .. } | Schedule::Linear { t0, t_min, .. } => {
                TempHat(t0.unwrap_or(auto).max(t_min))
            }
            Schedule::Constant { t } => TempHat(t),
        }
    }

    pub fn refresh(&self) -> u64 {
        match *self {
            Schedule::Geometric { refresh, .. } | Schedule::Linear { refresh, .. } => refresh,
            Schedule::Constant { .. } => u64::MAX,
        }
    }

    /// Refreshes at the floor after which the ramp restarts, if ever.
    pub fn reheat(&self) -> Option<u64> {
        match *self {
            Schedule::Geometric { reheat, .. } | Schedule::Linear { reheat, .. } => reheat,
            Schedule::Constant { .. } => None,
        }
    }

    pub fn t_min(&self) -> u64 {
        match *self {
            Schedule::Geometric { t_min, .. } | Schedule::Linear { t_min, .. } => t_min,
            Schedule::Constant { t } => t,
        }
    }

    /// Temperature after one refresh, ignoring reheating.
    pub fn advance(&self, current: TempHat) -> TempHat {
        match *self {
            Schedule::Geometric { num, den, t_min, .. } => {
                let next = (current.0 as u128 * num as u128 / den as u128) as u64;
                TempHat(next.max(t_min))
            }
            Schedule::Linear { decrement, t_min, .. } => TempHat(current.0.saturating_sub(decrement).max(t_min)),
            Schedule::Constant { t } => TempHat(t),
        }
    }
}

fn check_common(refresh: u64, t_min: u64, t0: Option<u64>) -> Result<()> {
    if refresh == 0 {
        return Err(Error::InvalidConfig("schedule refresh interval must be at least 1".into()));
    }
    if let Some(t0) = t0 {
        if t0 < t_min {
            return Err(Error::InvalidConfig(format!("initial temperature {t0} is below the floor {t_min}")));
        }
    }
    Ok(())
}

/// Uniform refractory duration on `[min, max]` steps after a flip.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(default)]
pub struct RefractoryPolicy {
    pub min: u32,
    pub max: u32,
}

impl RefractoryPolicy {
    /// No refractory period: plain parallel Boltzmann dynamics.
    pub const DISABLED: Self = Self { min: 0, max: 0 };

    pub fn new(min: u32, max: u32) -> Result<Self> {
        let p = Self { min, max };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.min > self.max {
            return Err(Error::InvalidRefractory { min: self.min, max: self.max });
        }
        Ok(())
    }
}

impl Default for RefractoryPolicy {
    fn default() -> Self {
        Self { min: 1, max: 8 }
    }
}

/// Draws a refractory duration. A degenerate range consumes no randomness.
pub fn sample_refractory(policy: RefractoryPolicy, rng: &mut Rng24) -> Result<u32> {
    policy.validate()?;
    Ok(sample_unchecked(policy, rng))
}

#[inline]
pub(crate) fn sample_unchecked(policy: RefractoryPolicy, rng: &mut Rng24) -> u32 {
    if policy.min == policy.max {
        return policy.min;
    }
    let span = (policy.max - policy.min) as u64 + 1;
    policy.min + rng.next_below(span) as u32
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degenerate_policies() {
        let mut rng = Rng24::new(5);
        for _ in 0..100 {
            assert_eq!(sample_refractory(RefractoryPolicy::DISABLED, &mut rng).unwrap(), 0);
            assert_eq!(sample_refractory(RefractoryPolicy { min: 3, max: 3 }, &mut rng).unwrap(), 3);
        }
        let untouched = Rng24::new(5);
        let mut probe = Rng24::new(5);
        sample_refractory(RefractoryPolicy { min: 2, max: 2 }, &mut probe).unwrap();
        assert_eq!(probe, untouched);
    }

    #[test]
    fn invalid_policy() {
        let mut rng = Rng24::new(0);
        assert_eq!(
            sample_refractory(RefractoryPolicy { min: 4, max: 2 }, &mut rng),
            Err(Error::InvalidRefractory { min: 4, max: 2 })
        );
        assert!(RefractoryPolicy::new(4, 2).is_err());
    }

    #[test]
    fn uniform_one_to_eight() {
        let mut rng = Rng24::new(2024);
        let draws = 100_000u32;
        let mut counts = [0u32; 9];
        for _ in 0..draws {
            counts[sample_refractory(RefractoryPolicy::default(), &mut rng).unwrap() as usize] += 1;
        }
        assert_eq!(counts[0], 0);
        let p = 1.0 / 8.0;
        let mean = draws as f64 * p;
        let sigma = (draws as f64 * p * (1.0 - p)).sqrt();
        for &c in &counts[1..] {
            assert!((c as f64 - mean).abs() <= 3.0 * sigma, "count {c} outside 3σ of {mean}");
        }
    }

    #[test]
    fn geometric_schedule_integer_steps() {
        let s = Schedule::default();
        assert_eq!(s.advance(TempHat(100)), TempHat(95));
        // below 20 the floor takes off exactly one per refresh
        assert_eq!(s.advance(TempHat(19)), TempHat(18));
        assert_eq!(s.advance(TempHat(1)), TempHat(0));
        assert_eq!(s.advance(TempHat(0)), TempHat(0));
        assert_eq!(s.initial(37), TempHat(37));
    }

    #[test]
    fn linear_and_floor() {
        let s = Schedule::Linear { t0: Some(10), decrement: 3, refresh: 1, t_min: 2, reheat: None };
        assert_eq!(s.initial(99), TempHat(10));
        assert_eq!(s.advance(TempHat(10)), TempHat(7));
        assert_eq!(s.advance(TempHat(4)), TempHat(2));
        assert_eq!(s.advance(TempHat(2)), TempHat(2));
    }

    #[test]
    fn schedule_validation() {
        assert!(Schedule::default().validate().is_ok());
        assert!(Schedule::Geometric { t0: None, num: 3, den: 2, refresh: 1, t_min: 0, reheat: None }
            .validate()
            .is_err());
        assert!(Schedule::Geometric { t0: None, num: 1, den: 2, refresh: 0, t_min: 0, reheat: None }
            .validate()
            .is_err());
        assert!(Schedule::Linear { t0: Some(1), decrement: 1, refresh: 1, t_min: 5, reheat: None }.validate().is_err());
    }
}
