//! Thermal occupation numbers and temperature bookkeeping.

use crate::consts::{HBAR, KB};
use crate::error::{Error, Result};

/// Bose–Einstein occupation number n(ω, T) = 1/(e^{ħω/k_BT} − 1).
///
/// # Arguments
///
/// * `omega` - Angular frequency in rad/s (must be positive).
/// * `temperature` - Absolute temperature in K (must be non-negative).
///
/// # Returns
///
/// The mean photon number of the mode. Returns exactly `0.0` at zero
/// temperature and whenever ħω/k_BT is large enough that the occupation
/// underflows (the guard threshold x > 700 is far beyond the point where
/// e^{-x} is subnormal).
pub fn bose(omega: f64, temperature: f64) -> f64 {
    debug_assert!(omega > 0.0, "bose requires omega > 0");
    debug_assert!(temperature >= 0.0, "bose requires T >= 0");
    if temperature == 0.0 {
        return 0.0;
    }
    let x = HBAR * omega / (KB * temperature);
    if x > 700.0 {
        return 0.0;
    }
    1.0 / x.exp_m1()
}

/// Difference of Bose occupations n(ω, T_i) − n(ω, T_j).
///
/// Returns exactly `0.0` when the two temperatures are equal, so that
/// equal-temperature configurations cancel identically instead of leaving
/// floating-point residue.
pub fn n_diff(omega: f64, t_i: f64, t_j: f64) -> f64 {
    if t_i == t_j {
        return 0.0;
    }
    bose(omega, t_i) - bose(omega, t_j)
}

/// Symmetrized thermal energy per mode, ħω(½ + n(ω, T)).
///
/// This is the spectral weight that enters equilibrium (Matsubara-summed)
/// expressions; at T = 0 it reduces to the zero-point energy ħω/2.
pub fn n_sym(omega: f64, temperature: f64) -> f64 {
    HBAR * omega * (0.5 + bose(omega, temperature))
}

/// The three temperatures of the out-of-equilibrium planar problem.
///
/// `t1` and `t2` are the temperatures of bodies 1 and 2; `t3` is the
/// temperature of the environmental bath that fills the far field on both
/// sides of the cavity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TemperatureTriple {
    /// Temperature of body 1 in K.
    pub t1: f64,
    /// Temperature of body 2 in K.
    pub t2: f64,
    /// Temperature of the environment in K.
    pub t3: f64,
}

impl TemperatureTriple {
    /// Creates a temperature triple, validating that all temperatures are
    /// finite and non-negative.
    pub fn new(t1: f64, t2: f64, t3: f64) -> Result<Self> {
        for (name, t) in [("t1", t1), ("t2", t2), ("t3", t3)] {
            if !t.is_finite() || t < 0.0 {
                return Err(Error::Domain(format!(
                    "temperature {name} = {t} must be finite and >= 0"
                )));
            }
        }
        Ok(Self { t1, t2, t3 })
    }

    /// True when all three temperatures are equal (global equilibrium).
    pub fn is_equilibrium(&self) -> bool {
        self.t1 == self.t2 && self.t2 == self.t3
    }

    /// True when all three temperatures are exactly zero.
    pub fn is_all_zero(&self) -> bool {
        self.t1 == 0.0 && self.t2 == 0.0 && self.t3 == 0.0
    }

    /// The largest of the three temperatures.
    pub fn max(&self) -> f64 {
        self.t1.max(self.t2).max(self.t3)
    }
}
