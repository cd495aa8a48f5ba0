//! Physical constants (SI units, CODATA 2018).

/// Speed of light in vacuum, m/s (exact).
pub const C: f64 = 299_792_458.0;

/// Reduced Planck constant, J·s (exact, from the defined Planck constant).
pub const HBAR: f64 = 1.054_571_817_646_156_4e-34;

/// Boltzmann constant, J/K (exact).
pub const KB: f64 = 1.380_649e-23;

/// Vacuum permittivity, F/m.
pub const EPS0: f64 = 8.854_187_812_8e-12;

/// Stefan–Boltzmann constant, W/(m²·K⁴), derived as π²k_B⁴/(60ħ³c²).
pub const SIGMA_SB: f64 = 5.670_374_419_184_429_5e-8;

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn stefan_boltzmann_consistent_with_fundamental_constants() {
        let derived = std::f64::consts::PI.powi(2) * KB.powi(4)
            / (60.0 * HBAR.powi(3) * C.powi(2));
        assert_relative_eq!(derived, SIGMA_SB, max_relative = 1e-12);
    }

    #[test]
    fn hbar_matches_defined_planck_constant() {
        let h = 6.626_070_15e-34;
        assert_relative_eq!(h / (2.0 * std::f64::consts::PI), HBAR, max_relative = 1e-15);
    }
}
