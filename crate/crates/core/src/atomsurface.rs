//! Forces on a small polarizable particle facing a planar slab.
//!
//! The particle — an atom or a nanosphere in the dipole limit, described by
//! an isotropic polarizability α — sits in vacuum at height `z_a < 0` below
//! the lower face of a slab whose face is the plane z = 0. The particle's
//! dipole fluctuations thermalize at T₁, the slab at T₂, and the environment
//! shining onto the pair from the far field at T₃.
//!
//! The z-force splits into an equilibrium part — the mean of the forces the
//! system would feel at the global temperatures T₁ and T₂, each evaluated as
//! a Matsubara sum over imaginary frequencies — and a non-equilibrium
//! remainder assembled from three real-frequency spectral terms:
//!
//! * a **distance-independent** term ∝ n₂₃ weighing the slab's absorption
//!   deficit |ρ|² + |τ|² − 1 over propagating modes (it vanishes for every
//!   lossless body and for a particle with a real polarizability),
//! * a **propagative** term carrying the interference phases e^{±2ik_z z_A}
//!   of waves bouncing once between the particle and the face,
//! * an **evanescent** term ∝ n₁₂ fed by tunnelling modes and decaying as
//!   e^{−2κ|z_A|}.
//!
//! Here n_ij = n(ω, T_i) − n(ω, T_j) are the Bose occupation differences of
//! the thermal module. Positive force values push the particle toward the
//! slab (the +z direction); the zero-temperature limit of the equilibrium
//! part is the familiar attraction toward a mirror, which is positive in
//! this convention.

use crate::consts::{C, EPS0, HBAR, KB};
use crate::error::{Error, Result};
use crate::modes::{bilinear_dot, polarization_vector, AngularMode, Polarization};
use crate::quadrature::{
    integrate_adaptive_multi, integrate_semiinfinite, matsubara_sum, QuadratureResult,
};
use crate::scattering::{slab_amplitudes, slab_reflection_imag_axis, SlabBody};
use crate::thermal::{n_diff, TemperatureTriple};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Exponent beyond which the evanescent tail e^{−2κ|z_A|} is negligible;
/// the k-integrals stop at κ = ln(10¹⁴)/(2|z_A|), where the tail has
/// decayed to 10⁻¹⁴.
const EW_DECAY_EXPONENT: f64 = 32.236_191_301_916_64;

/// Bose factors are numerically zero beyond ħω = 75·k_B·T_max; frequencies
/// above this cutoff contribute nothing to the non-equilibrium terms.
const THERMAL_CUTOFF_RATIO: f64 = 75.0;

/// Thermal spectra peak near ħω ≈ 2.82·k_B·T; used as the decay scale of
/// the semi-infinite frequency integral.
const THERMAL_PEAK_RATIO: f64 = 2.82;

/// Isotropic polarizability of the particle, in SI units (C·m²/V, so that
/// α/(4πε₀) is a volume).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PolarizabilityModel {
    /// Frequency-independent real polarizability α(ω) = α₀.
    Static {
        /// Static polarizability α₀ ≥ 0.
        alpha0: f64,
    },
    /// Single damped resonance α(ω) = α₀·ω₀²/(ω₀² − ω² − iγω).
    ///
    /// The damping must be strictly positive: an undamped resonance places
    /// a pole on the real frequency axis and the spectral integrals lose
    /// their meaning.
    Lorentz {
        /// Static polarizability α(0) = α₀ ≥ 0.
        alpha0: f64,
        /// Resonance frequency ω₀ > 0 in rad/s.
        omega0: f64,
        /// Damping rate γ > 0 in rad/s.
        gamma: f64,
    },
}

impl PolarizabilityModel {
    /// Checks the model parameters.
    fn validate(&self) -> Result<()> {
        match *self {
            PolarizabilityModel::Static { alpha0 } => {
                if !alpha0.is_finite() || alpha0 < 0.0 {
                    return Err(Error::Domain(format!(
                        "static polarizability must be finite and >= 0, got {alpha0}"
                    )));
                }
            }
            PolarizabilityModel::Lorentz { alpha0, omega0, gamma } => {
                if !alpha0.is_finite() || alpha0 < 0.0 {
                    return Err(Error::Domain(format!(
                        "resonant polarizability must be finite and >= 0, got {alpha0}"
                    )));
                }
                if !(omega0 > 0.0) || !omega0.is_finite() {
                    return Err(Error::Domain(format!(
                        "resonance frequency must be positive and finite, got {omega0}"
                    )));
                }
                if !(gamma > 0.0) || !gamma.is_finite() {
                    return Err(Error::Domain(format!(
                        "resonance damping must be positive and finite, got {gamma}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Polarizability at a real frequency.
    ///
    /// # Arguments
    ///
    /// * `omega` - Angular frequency in rad/s.
    ///
    /// # Returns
    ///
    /// The complex α(ω); its imaginary part is non-negative for ω ≥ 0
    /// (passivity).
    pub fn at_real(&self, omega: f64) -> Complex64 {
        match *self {
            PolarizabilityModel::Static { alpha0 } => Complex64::new(alpha0, 0.0),
            PolarizabilityModel::Lorentz { alpha0, omega0, gamma } => {
                let denom = Complex64::new(omega0 * omega0 - omega * omega, -gamma * omega);
                Complex64::new(alpha0 * omega0 * omega0, 0.0) / denom
            }
        }
    }

    /// Polarizability on the imaginary frequency axis, α(iξ).
    ///
    /// # Arguments
    ///
    /// * `xi` - Imaginary frequency ξ ≥ 0 in rad/s.
    ///
    /// # Returns
    ///
    /// The real, positive, monotonically decreasing value α(iξ).
    pub fn at_imaginary(&self, xi: f64) -> f64 {
        match *self {
            PolarizabilityModel::Static { alpha0 } => alpha0,
            PolarizabilityModel::Lorentz { alpha0, omega0, gamma } => {
                alpha0 * omega0 * omega0 / (omega0 * omega0 + xi * xi + gamma * xi)
            }
        }
    }
}

/// A particle–slab configuration.
#[derive(Debug, Clone)]
pub struct AtomConfig {
    /// Polarizability model of the particle.
    pub alpha: PolarizabilityModel,
    /// Height of the particle in meters; strictly negative, the slab's
    /// lower face being the plane z = 0.
    pub z_a: f64,
    /// The slab body above the particle.
    pub slab: SlabBody,
}

impl AtomConfig {
    /// Creates a configuration, validating the polarizability parameters
    /// and the particle height.
    ///
    /// # Arguments
    ///
    /// * `alpha` - Polarizability model.
    /// * `z_a` - Particle height in meters, must be finite and < 0.
    /// * `slab` - The slab body.
    pub fn new(alpha: PolarizabilityModel, z_a: f64, slab: SlabBody) -> Result<Self> {
        alpha.validate()?;
        if !(z_a < 0.0) || !z_a.is_finite() {
            return Err(Error::Domain(format!(
                "the particle must sit strictly below the slab face, z_a < 0, got {z_a}"
            )));
        }
        Ok(Self { alpha, z_a, slab })
    }

    /// Distance |z_A| between the particle and the slab face.
    pub fn distance(&self) -> f64 {
        -self.z_a
    }
}

/// The z-force on the particle, decomposed into its spectral parts.
///
/// All entries are in newtons; positive values push the particle toward
/// the slab. The parts satisfy
/// `total = eq_part + term_distance_independent + term_propagative +
/// term_evanescent` exactly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AtomForceResult {
    /// Total force.
    pub total: f64,
    /// Distance-independent radiation-pressure term (∝ n₂₃ and the slab's
    /// absorption deficit).
    pub term_distance_independent: f64,
    /// Propagative interference term (phases e^{±2ik_z z_A}).
    pub term_propagative: f64,
    /// Evanescent tunnelling term (∝ n₁₂, decaying as e^{−2κ|z_A|}).
    pub term_evanescent: f64,
    /// Equilibrium contribution ½·[F_eq(T₁) + F_eq(T₂)].
    pub eq_part: f64,
    /// Absolute error estimate accumulated from the quadratures behind
    /// `total`.
    pub quadrature_error: f64,
}

/// Spectral density dF/dω of the non-equilibrium force terms at one
/// frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AtomSpectralDensity {
    /// Density of the distance-independent term, in N·s/rad.
    pub distance_independent: f64,
    /// Density of the propagative term.
    pub propagative: f64,
    /// Density of the evanescent term.
    pub evanescent: f64,
    /// Sum of the absolute densities; the refinement driver and natural
    /// activity scale of the frequency integral.
    pub activity: f64,
}

/// The bilinear product ε̂_p⁺·ε̂_p⁻ of the two polarization vectors of a
/// counter-propagating pair, evaluated through the modes module. It is
/// real in both sectors: 1 for TE and (k² − k_z²)c²/ω² for TM.
fn counter_pol_dot(omega: f64, k: f64, pol: Polarization) -> f64 {
    let up = AngularMode { omega, k: [k, 0.0], pol, phi: 1 };
    let down = AngularMode { omega, k: [k, 0.0], pol, phi: -1 };
    bilinear_dot(&polarization_vector(&up), &polarization_vector(&down)).re
}

/// Spectral density of the three non-equilibrium force terms at one
/// frequency.
///
/// The propagating k-integrals are evaluated in the k_z variable, where
/// the measure k·dk becomes k_z·dk_z, the interference phase e^{2ik_z|z_A|}
/// is a pure Fourier kernel and the slab amplitudes are free of the
/// grazing-incidence square-root singularity. The evanescent integral runs
/// in κ up to the point where e^{−2κ|z_A|} has decayed to 10⁻¹⁴.
///
/// # Arguments
///
/// * `config` - Particle–slab configuration.
/// * `temps` - The temperature triple (T₁ particle, T₂ slab, T₃
///   environment).
/// * `omega` - Angular frequency in rad/s (> 0).
/// * `tol` - Relative tolerance of the k-quadratures.
///
/// # Returns
///
/// The three term densities and their absolute sum.
pub fn atom_delta2_density(
    config: &AtomConfig,
    temps: &TemperatureTriple,
    omega: f64,
    tol: f64,
) -> Result<AtomSpectralDensity> {
    if !(omega > 0.0) || !omega.is_finite() {
        return Err(Error::Domain(format!(
            "density frequency must be positive and finite, got {omega}"
        )));
    }
    let z = config.distance();
    let q = omega / C;
    let n23 = n_diff(omega, temps.t2, temps.t3);
    let n32 = -n23;
    let n13 = n_diff(omega, temps.t1, temps.t3);
    let n12 = n_diff(omega, temps.t1, temps.t2);
    let w2_alpha = config.alpha.at_real(omega) * (omega * omega);

    // Propagating sector, variable k_z ∈ (0, ω/c). Channel 0 drives the
    // refinement with the summed absolute integrands; channels 1..3 carry
    // the absorption-deficit integral and the complex interference
    // integral.
    let pw = integrate_adaptive_multi(
        4,
        |kz_v, out| {
            let k = ((q - kz_v) * (q + kz_v)).max(0.0).sqrt();
            let phase = Complex64::from_polar(1.0, 2.0 * kz_v * z);
            for pol in [Polarization::TE, Polarization::TM] {
                let amps = slab_amplitudes(&config.slab, omega, k, pol)?;
                let deficit =
                    kz_v * (amps.rho_minus.norm_sqr() + amps.tau.norm_sqr() - 1.0);
                let x = amps.rho_minus * phase;
                let interference = (x * n32 + x.conj() * n13)
                    * (kz_v * counter_pol_dot(omega, k, pol));
                out[0] += deficit.abs() + interference.re.abs() + interference.im.abs();
                out[1] += deficit;
                out[2] += interference.re;
                out[3] += interference.im;
            }
            Ok(())
        },
        0.0,
        q,
        tol,
    )?;
    let j1 = pw.values[1];
    let j2 = Complex64::new(pw.values[2], pw.values[3]);

    // Evanescent sector, variable κ with measure κ·dκ. When n₁₂ = 0 the
    // term is exactly zero and the quadrature is skipped.
    let j3 = if n12 == 0.0 {
        Complex64::new(0.0, 0.0)
    } else {
        let kappa_cap = EW_DECAY_EXPONENT / (2.0 * z);
        let ew = integrate_adaptive_multi(
            3,
            |kappa, out| {
                if kappa <= 0.0 {
                    return Ok(());
                }
                let k = q.hypot(kappa);
                let damp = (-2.0 * kappa * z).exp();
                for pol in [Polarization::TE, Polarization::TM] {
                    let amps = slab_amplitudes(&config.slab, omega, k, pol)?;
                    let tail = amps.rho_minus.conj()
                        * (kappa * damp * counter_pol_dot(omega, k, pol));
                    out[0] += tail.re.abs() + tail.im.abs();
                    out[1] += tail.re;
                    out[2] += tail.im;
                }
                Ok(())
            },
            0.0,
            kappa_cap,
            tol,
        )?;
        Complex64::new(ew.values[1], ew.values[2])
    };

    let pref = HBAR / (4.0 * PI * PI * EPS0 * C * C);
    let distance_independent = pref * (w2_alpha * n23 * j1).im;
    let propagative = pref * (w2_alpha * j2).im;
    let evanescent = pref * (w2_alpha * n12 * j3).im;
    Ok(AtomSpectralDensity {
        distance_independent,
        propagative,
        evanescent,
        activity: distance_independent.abs() + propagative.abs() + evanescent.abs(),
    })
}

/// The non-equilibrium part of the force on the particle: the three
/// spectral terms integrated over frequency.
///
/// # Arguments
///
/// * `config` - Particle–slab configuration.
/// * `temps` - The temperature triple.
/// * `tol` - Relative tolerance of the frequency quadrature (the
///   k-quadratures run four times tighter).
///
/// # Returns
///
/// An [`AtomForceResult`] whose `eq_part` is zero: `total` is the sum of
/// the three non-equilibrium terms alone. At global equilibrium every
/// entry is exactly zero.
pub fn atom_delta2(
    config: &AtomConfig,
    temps: &TemperatureTriple,
    tol: f64,
) -> Result<AtomForceResult> {
    if !(tol > 0.0) || !tol.is_finite() {
        return Err(Error::Domain(format!(
            "tolerance must be positive and finite, got {tol}"
        )));
    }
    if temps.is_equilibrium() {
        return Ok(AtomForceResult {
            total: 0.0,
            term_distance_independent: 0.0,
            term_propagative: 0.0,
            term_evanescent: 0.0,
            eq_part: 0.0,
            quadrature_error: 0.0,
        });
    }
    let t_max = temps.max();
    let omega_cut = THERMAL_CUTOFF_RATIO * KB * t_max / HBAR;
    let scale = THERMAL_PEAK_RATIO * KB * t_max / HBAR;
    let tol_k = tol * 0.25;

    let mut integrand = |t: f64, out: &mut [f64]| -> Result<()> {
        let one_minus = 1.0 - t;
        let omega = scale * t / one_minus;
        if !omega.is_finite() || omega <= 0.0 || omega >= omega_cut {
            return Ok(());
        }
        let jac = scale / (one_minus * one_minus);
        let d = atom_delta2_density(config, temps, omega, tol_k)?;
        out[0] = d.activity * jac;
        out[1] = d.distance_independent * jac;
        out[2] = d.propagative * jac;
        out[3] = d.evanescent * jac;
        Ok(())
    };

    // A resonant polarizability can be sharply peaked; splitting the
    // transformed interval at the resonance guarantees the adaptive
    // refinement sees both shoulders.
    let mut cuts = vec![0.0];
    if let PolarizabilityModel::Lorentz { omega0, .. } = config.alpha {
        let t0 = omega0 / (scale + omega0);
        if t0 > 1.0e-12 && t0 < 1.0 - 1.0e-12 {
            cuts.push(t0);
        }
    }
    cuts.push(1.0);

    let mut values = [0.0; 4];
    let mut error = 0.0;
    for pair in cuts.windows(2) {
        let piece = integrate_adaptive_multi(4, &mut integrand, pair[0], pair[1], tol)?;
        for (acc, v) in values.iter_mut().zip(piece.values.iter()) {
            *acc += v;
        }
        error += piece.error_estimate;
    }

    let term_distance_independent = values[1];
    let term_propagative = values[2];
    let term_evanescent = values[3];
    Ok(AtomForceResult {
        total: term_distance_independent + term_propagative + term_evanescent,
        term_distance_independent,
        term_propagative,
        term_evanescent,
        eq_part: 0.0,
        quadrature_error: error,
    })
}

/// Matsubara summand of the equilibrium force: the first order in α of the
/// equilibrium trace formula, continued to the imaginary axis,
///
///   g(ξ) = α(iξ)/(2πε₀c²) · ∫_{ξ/c}^∞ κ dκ e^{−2κ|z_A|}
///            [c²(k² + κ²)·ρ_TM(iξ, k) − ξ²·ρ_TE(iξ, k)],
///
/// with k² = κ² − ξ²/c².
fn eq_summand(config: &AtomConfig, xi: f64, tol: f64) -> Result<f64> {
    let z = config.distance();
    let alpha_i = config.alpha.at_imaginary(xi);
    if alpha_i == 0.0 {
        return Ok(0.0);
    }
    let lo = xi / C;
    let xi2 = xi * xi;
    let integral = integrate_semiinfinite(
        |kappa| {
            if !kappa.is_finite() || kappa <= lo {
                return Ok(0.0);
            }
            let damp = (-2.0 * kappa * z).exp();
            if damp == 0.0 {
                return Ok(0.0);
            }
            let k2 = (kappa - lo) * (kappa + lo);
            let k = k2.sqrt();
            if k == 0.0 && xi == 0.0 {
                return Ok(0.0);
            }
            let rho_tm = slab_reflection_imag_axis(&config.slab, xi, k, Polarization::TM)?;
            let rho_te = slab_reflection_imag_axis(&config.slab, xi, k, Polarization::TE)?;
            let bracket = C * C * (k2 + kappa * kappa) * rho_tm - xi2 * rho_te;
            Ok(kappa * damp * bracket)
        },
        lo,
        1.0 / z,
        tol,
    )?;
    Ok(alpha_i / (2.0 * PI * EPS0 * C * C) * integral.value)
}

/// Equilibrium force on the particle at a single global temperature,
/// evaluated as a Matsubara sum (or, at T = 0, as the corresponding
/// imaginary-frequency integral).
///
/// # Arguments
///
/// * `config` - Particle–slab configuration.
/// * `temperature` - Global temperature in K (≥ 0).
/// * `tol` - Relative tolerance.
///
/// # Returns
///
/// The force in newtons (positive toward the slab; a mirror at T = 0
/// yields the classic attraction 3ħcα/(8π²ε₀|z_A|⁵)) with its error
/// estimate.
pub fn atom_eq_force(
    config: &AtomConfig,
    temperature: f64,
    tol: f64,
) -> Result<QuadratureResult> {
    if !(tol > 0.0) || !tol.is_finite() {
        return Err(Error::Domain(format!(
            "tolerance must be positive and finite, got {tol}"
        )));
    }
    let decay_scale = C / (2.0 * config.distance());
    matsubara_sum(
        |xi| eq_summand(config, xi, tol * 0.25),
        temperature,
        decay_scale,
        tol,
    )
}

/// Total force on the particle out of equilibrium:
/// ½·[F_eq(T₁) + F_eq(T₂)] plus the three non-equilibrium terms.
///
/// # Arguments
///
/// * `config` - Particle–slab configuration.
/// * `temps` - The temperature triple.
/// * `tol` - Relative tolerance passed to all quadratures.
///
/// # Returns
///
/// The decomposed force. `total` equals `eq_part` plus the sum of the
/// three term fields exactly; at global equilibrium it reduces to the
/// equilibrium force at that temperature.
pub fn atom_total_force(
    config: &AtomConfig,
    temps: &TemperatureTriple,
    tol: f64,
) -> Result<AtomForceResult> {
    let delta = atom_delta2(config, temps, tol)?;
    let eq1 = atom_eq_force(config, temps.t1, tol)?;
    let eq2 = if temps.t2 == temps.t1 {
        eq1
    } else {
        atom_eq_force(config, temps.t2, tol)?
    };
    let eq_part = 0.5 * (eq1.value + eq2.value);
    Ok(AtomForceResult {
        total: eq_part + delta.total,
        eq_part,
        quadrature_error: delta.quadrature_error
            + 0.5 * (eq1.error_estimate + eq2.error_estimate),
        ..delta
    })
}
