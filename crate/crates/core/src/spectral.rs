//! Spectral densities and integrated forces/heat flux for the two-slab
//! cavity.
//!
//! Geometry: body 1 fills the region below z = 0 (its cavity-side face at
//! z = 0), body 2 sits with its cavity-side face at z = d > 0; region A is
//! below body 1, region B the vacuum gap, region C above body 2. The
//! environment illuminates the stack from both far sides at temperature T₃,
//! while the bodies are held at T₁ and T₂.
//!
//! Two kinds of quantities are computed:
//!
//! * **Nonequilibrium exchange** Δ_m: the m = 1 moment is the net heat flux
//!   into body 1 (W/m², positive = body 1 gains energy) and the m = 2
//!   moment the radiative momentum transfer (Pa, positive = force toward
//!   +z, i.e. away from body 1's own side). These are reported in the raw
//!   flux-bookkeeping convention.
//! * **Equilibrium pressure** at a single temperature, computed on the
//!   imaginary frequency axis; reported so that **negative = attraction**.
//!
//! [`total_force`] combines both into the full out-of-equilibrium force on
//! body 1 (negative = attraction toward body 2).

use crate::consts::{C, EPS0, HBAR, KB};
use crate::error::{Error, Result};
use crate::modes::{kz, Polarization};
use crate::quadrature::{integrate_adaptive, integrate_adaptive_multi, matsubara_sum};
use crate::scattering::{
    slab_amplitudes, slab_reflection_imag_axis, SlabBody, SpecularAmplitudes,
};
use crate::thermal::{n_diff, n_sym, TemperatureTriple};
use num_complex::Complex64;

/// The two-body cavity configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct CavityConfig {
    /// Body 1 (below the gap; its cavity-side face is the upper one).
    pub body1: SlabBody,
    /// Body 2 (above the gap; its cavity-side face is the lower one).
    pub body2: SlabBody,
    /// Gap width in meters (> 0).
    pub d: f64,
}

impl CavityConfig {
    /// Creates a cavity configuration, validating the gap width.
    pub fn new(body1: SlabBody, body2: SlabBody, d: f64) -> Result<Self> {
        if !(d > 0.0) || !d.is_finite() {
            return Err(Error::Domain(format!(
                "gap width must be positive and finite, got {d}"
            )));
        }
        Ok(Self { body1, body2, d })
    }
}

/// Spectral density of Δ_m at one (ω, k, p) node, decomposed by the
/// occupation difference n_ij = n(T_i) − n(T_j) driving each piece.
///
/// `total` is evaluated in a grouped, numerically stable form that
/// vanishes to the last bit when body 1 is transparent; the six raw
/// channels are the physical decomposition (each proportional to its
/// n_ij, hence exactly antisymmetric under swapping the two temperatures
/// of its label) and satisfy `total = n21 + n13 + n31 + n12 + n23 + n32`
/// up to rounding.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralPoint {
    /// Grouped total spectral density.
    pub total: f64,
    /// Channel driven by n(T₂) − n(T₁).
    pub n21: f64,
    /// Channel driven by n(T₁) − n(T₃).
    pub n13: f64,
    /// Channel driven by n(T₃) − n(T₁).
    pub n31: f64,
    /// Channel driven by n(T₁) − n(T₂).
    pub n12: f64,
    /// Channel driven by n(T₂) − n(T₃).
    pub n23: f64,
    /// Channel driven by n(T₃) − n(T₂).
    pub n32: f64,
}

impl SpectralPoint {
    /// The six raw channels with their conventional names.
    pub fn channels(&self) -> [(&'static str, f64); 6] {
        [
            ("n21", self.n21),
            ("n13", self.n13),
            ("n31", self.n31),
            ("n12", self.n12),
            ("n23", self.n23),
            ("n32", self.n32),
        ]
    }

    /// Sum of the magnitudes of the raw channels (the "activity" scale
    /// against which cancellation in `total` is judged).
    pub fn channel_abs_sum(&self) -> f64 {
        self.n21.abs()
            + self.n13.abs()
            + self.n31.abs()
            + self.n12.abs()
            + self.n23.abs()
            + self.n32.abs()
    }
}

/// Result of an integrated flux/force computation.
///
/// `breakdown` lists named sub-contributions; their interpretation depends
/// on the producing function, but in every case
/// |value| ≤ Σ |breakdown| + quadrature_error.
#[derive(Debug, Clone, PartialEq)]
pub struct FluxResult {
    /// The integrated quantity (units documented on the producing
    /// function).
    pub value: f64,
    /// Absolute estimate of the numerical error in `value`.
    pub quadrature_error: f64,
    /// Named sub-contributions.
    pub breakdown: Vec<(String, f64)>,
}

impl FluxResult {
    /// Looks up a breakdown entry by name.
    pub fn channel(&self, name: &str) -> Option<f64> {
        self.breakdown
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, v)| *v)
    }
}

/// Environment correlator density at one mode: the spectral weight of the
/// thermal field entering the cavity from the far sides.
///
/// Proportional to Re(1/k_z), so it vanishes identically on evanescent
/// modes: the environment only radiates propagating waves.
///
/// # Arguments
///
/// * `omega` - Angular frequency in rad/s (> 0).
/// * `k` - Transverse wavenumber in rad/m.
/// * `t3` - Environment temperature in K.
pub fn env_correlator_density(omega: f64, k: f64, t3: f64) -> Result<f64> {
    let kz_c = kz(omega, k);
    if kz_c == Complex64::new(0.0, 0.0) {
        return Err(Error::SingularMode(
            "correlator density diverges at the light cone edge".into(),
        ));
    }
    let inv_kz_re = (1.0 / kz_c).re;
    Ok(omega / (2.0 * EPS0 * C * C) * n_sym(omega, t3) * inv_kz_re)
}

/// Same-direction correlator density of the field emitted by a body at
/// temperature `t`: the ⟨E E†⟩ weight between identical outgoing
/// directions on one side of the body.
///
/// Propagating modes carry the absorptivity (1 − |ρ|² − |τ|²)/k_z;
/// evanescent modes carry 2·Im(ρ)/κ.
pub fn emitted_correlator_same_dir(
    omega: f64,
    k: f64,
    amps: &SpecularAmplitudes,
    t: f64,
) -> Result<f64> {
    let kz_c = kz(omega, k);
    if kz_c == Complex64::new(0.0, 0.0) {
        return Err(Error::SingularMode(
            "correlator density diverges at the light cone edge".into(),
        ));
    }
    let geometric = if kz_c.im == 0.0 {
        (1.0 - amps.rho_plus.norm_sqr() - amps.tau.norm_sqr()) / kz_c.re
    } else {
        2.0 * amps.rho_plus.im / kz_c.im
    };
    Ok(omega / (2.0 * EPS0 * C * C) * n_sym(omega, t) * geometric)
}

/// Opposite-direction correlator density of the field emitted by a body at
/// temperature `t`: the ⟨E E†⟩ weight between the outgoing waves on the
/// two sides of the body (one moving +z, the other −z).
///
/// Propagating modes carry −2·Re(ρ·τ*)/k_z; evanescent modes carry
/// 2·Im(τ)/κ.
pub fn emitted_correlator_opp_dir(
    omega: f64,
    k: f64,
    amps: &SpecularAmplitudes,
    t: f64,
) -> Result<f64> {
    let kz_c = kz(omega, k);
    if kz_c == Complex64::new(0.0, 0.0) {
        return Err(Error::SingularMode(
            "correlator density diverges at the light cone edge".into(),
        ));
    }
    let geometric = if kz_c.im == 0.0 {
        -2.0 * (amps.rho_plus * amps.tau.conj()).re / kz_c.re
    } else {
        2.0 * amps.tau.im / kz_c.im
    };
    Ok(omega / (2.0 * EPS0 * C * C) * n_sym(omega, t) * geometric)
}

/// Spectral density of Δ_m at a single mode.
///
/// # Arguments
///
/// * `m` - Moment: 1 for heat flux, 2 for momentum flux.
/// * `omega` - Angular frequency in rad/s (> 0).
/// * `k` - Transverse wavenumber in rad/m (≥ 0).
/// * `_pol` - Polarization label of the supplied amplitudes (the formulas
///   are polarization-universal once the amplitudes are fixed; the label
///   is carried for interface clarity).
/// * `amps1` - Amplitudes of body 1 at this mode.
/// * `amps2` - Amplitudes of body 2 at this mode.
/// * `d` - Gap width in meters.
/// * `temps` - The three temperatures.
///
/// # Returns
///
/// The [`SpectralPoint`] normalized so that
/// Δ_m = Σ_p ∫ (dω/2π) ∫ (k dk/2π) · total.
#[allow(clippy::too_many_arguments)]
pub fn delta_m_integrand(
    m: u8,
    omega: f64,
    k: f64,
    _pol: Polarization,
    amps1: &SpecularAmplitudes,
    amps2: &SpecularAmplitudes,
    d: f64,
    temps: &TemperatureTriple,
) -> Result<SpectralPoint> {
    if m != 1 && m != 2 {
        return Err(Error::Domain(format!("moment m must be 1 or 2, got {m}")));
    }
    if !(omega > 0.0) || !(k >= 0.0) || !(d > 0.0) {
        return Err(Error::Domain(format!(
            "delta_m_integrand requires omega > 0, k >= 0, d > 0; \
             got ({omega}, {k}, {d})"
        )));
    }
    let kz_c = kz(omega, k);
    let a = amps1.rho_plus;
    let abar = amps1.rho_minus;
    let t = amps1.tau;
    let ttil = amps1.tau_tilde;
    let s = amps2.tau;
    // Body 2's cavity-side face is its lower one; the round-trip phase
    // through the gap rides on its reflection amplitude.
    let b = amps2.rho_minus * (Complex64::i() * kz_c * (2.0 * d)).exp();
    let denom = Complex64::new(1.0, 0.0) - a * b;
    if denom == Complex64::new(0.0, 0.0) {
        return Err(Error::Resonance(format!(
            "1 - rho1 rho2 e^(2 i k_z d) = 0 at omega = {omega:e}, k = {k:e}"
        )));
    }
    let u = 1.0 / denom;
    let u2 = u.norm_sqr();

    let n21 = n_diff(omega, temps.t2, temps.t1);
    let n13 = n_diff(omega, temps.t1, temps.t3);
    let n31 = -n13;
    let n12 = -n21;
    let n23 = n_diff(omega, temps.t2, temps.t3);
    let n32 = -n23;

    // Overall normalization: Δ_m = Σ_p ∫ dω/2π ∫ k dk/2π · total, with the
    // heat moment weighted by ħω and the momentum moment by ħ.
    let moment_sign = if m == 1 { 1.0 } else { -1.0 };
    let prefactor = moment_sign * HBAR * omega.powi(2 - m as i32);

    if kz_c.im != 0.0 {
        // Evanescent node: only the inter-body channel survives.
        let kappa = kz_c.im;
        let t1_ew = if m == 1 {
            4.0 * u2 * a.im * b.im
        } else {
            2.0 * kappa * u2 * (a * b.conj()).im
        };
        let n21_ch = prefactor * n21 * t1_ew;
        return Ok(SpectralPoint {
            total: n21_ch,
            n21: n21_ch,
            n13: 0.0,
            n31: 0.0,
            n12: 0.0,
            n23: 0.0,
            n32: 0.0,
        });
    }

    // Propagating node.
    let kz_r = kz_c.re;
    let common = prefactor * kz_r.powi(m as i32 - 1);
    let a2 = a.norm_sqr();
    let abar2 = abar.norm_sqr();
    let b2 = b.norm_sqr();
    let s2 = s.norm_sqr();
    // g = |τ₁|² − 1 evaluated through τ̃ so that a transparent body gives
    // exactly zero; h plays the same role for the cavity round trip.
    let g = 2.0 * ttil.re + ttil.norm_sqr();
    let t2_mag = 1.0 + g;
    let w = a * b * u;
    let h = 2.0 * w.re + w.norm_sqr();
    let q_open = 1.0 - b2 - s2;
    let cross = 2.0 * (abar * t.conj() * t.conj() * u.conj() * b.conj()).re;

    let (c13, c23) = if m == 1 {
        let x = 2.0 * g + a2 + h * (t2_mag + g + a2);
        let y = g * (2.0 + g) + h * t2_mag * t2_mag;
        (
            (1.0 - b2) * x + abar2 + b2 * y + cross,
            -(1.0 + h) * (g + a2) * q_open,
        )
    } else {
        (
            (abar2 - a2) - a2 * h + g * g * (1.0 + h) * b2 + cross,
            (1.0 + h) * (a2 * (1.0 - s2) - g * q_open) - h,
        )
    };
    let total = common * (n13 * c13 + n23 * c23);

    let (r21, r13, r31, r12, r23, r32) = if m == 1 {
        (
            u2 * (1.0 - a2) * (1.0 - b2),
            abar2 - 1.0 + u2 * t2_mag * t2_mag * b2,
            -u2 * t2_mag * (1.0 - b2) - cross,
            u2 * t2_mag * (1.0 - b2),
            u2 * t2_mag * s2,
            u2 * s2 * (1.0 - a2),
        )
    } else {
        (
            u2 * (a2 - b2),
            abar2 + u2 * t2_mag * t2_mag * b2,
            u2 * t2_mag * (1.0 + b2) - cross,
            u2 * t2_mag * (1.0 - b2),
            u2 * t2_mag * s2 + 1.0,
            u2 * s2 * (1.0 + a2),
        )
    };

    Ok(SpectralPoint {
        total,
        n21: common * n21 * r21,
        n13: common * n13 * r13,
        n31: common * n31 * r31,
        n12: common * n12 * r12,
        n23: common * n23 * r23,
        n32: common * n32 * r32,
    })
}

/// Names of the six raw channels, in breakdown order.
const CHANNEL_NAMES: [&str; 6] = ["n21", "n13", "n31", "n12", "n23", "n32"];

/// Net nonequilibrium exchange Δ_m between the bodies and fields.
///
/// For m = 1 the result is the net heat flux into body 1 in W/m²
/// (positive = body 1 absorbs more than it emits); for m = 2 the radiative
/// momentum flux in Pa delivered to body 1 (positive = pushed toward +z,
/// i.e. toward body 2). The breakdown lists the six raw n_ij channels.
///
/// # Arguments
///
/// * `m` - Moment: 1 (heat) or 2 (momentum).
/// * `temps` - The three temperatures.
/// * `config` - Cavity geometry and materials.
/// * `tol` - Relative tolerance of the frequency integration.
pub fn noneq_flux(
    m: u8,
    temps: &TemperatureTriple,
    config: &CavityConfig,
    tol: f64,
) -> Result<FluxResult> {
    let body1 = config.body1.clone();
    let body2 = config.body2.clone();
    noneq_flux_with(m, temps, config.d, tol, move |omega, k, pol| {
        Ok((
            slab_amplitudes(&body1, omega, k, pol)?,
            slab_amplitudes(&body2, omega, k, pol)?,
        ))
    })
}

/// [`noneq_flux`] with externally supplied amplitudes.
///
/// The provider returns the amplitudes of body 1 and body 2 at a mode.
/// This admits idealized bodies that no material model reaches exactly
/// (e.g. perfectly black surfaces, ρ = τ = 0).
///
/// # Arguments
///
/// * `m` - Moment: 1 (heat) or 2 (momentum).
/// * `temps` - The three temperatures.
/// * `d` - Gap width in meters (> 0).
/// * `tol` - Relative tolerance of the frequency integration.
/// * `provider` - Maps (ω, k, p) to the amplitude pair.
pub fn noneq_flux_with<F>(
    m: u8,
    temps: &TemperatureTriple,
    d: f64,
    tol: f64,
    provider: F,
) -> Result<FluxResult>
where
    F: Fn(f64, f64, Polarization) -> Result<(SpecularAmplitudes, SpecularAmplitudes)>,
{
    if m != 1 && m != 2 {
        return Err(Error::Domain(format!("moment m must be 1 or 2, got {m}")));
    }
    if !(d > 0.0) || !d.is_finite() {
        return Err(Error::Domain(format!("gap width must be positive, got {d}")));
    }
    if !(tol > 0.0) || !tol.is_finite() {
        return Err(Error::Domain(format!("tolerance must be positive, got {tol}")));
    }
    // All occupation differences vanish identically in global equilibrium:
    // the exchange is exactly zero without evaluating a single amplitude.
    if temps.is_equilibrium() {
        return Ok(FluxResult {
            value: 0.0,
            quadrature_error: 0.0,
            breakdown: CHANNEL_NAMES.iter().map(|n| (n.to_string(), 0.0)).collect(),
        });
    }

    let omega_max = 45.0 * KB * temps.max() / HBAR;
    // e^{−2κd} reaches 10⁻¹⁴ at this κ; beyond it evanescent coupling is
    // negligible at double precision.
    let kappa_max = 1.0e14f64.ln() / (2.0 * d);
    let inner_tol = 0.1 * tol;
    let two_pi = 2.0 * std::f64::consts::PI;

    // Channels: [activity, total, n21, n13, n31, n12, n23, n32].
    let point_channels = |omega: f64, k: f64, measure: f64, out: &mut [f64]| -> Result<()> {
        for pol in [Polarization::TE, Polarization::TM] {
            let (amps1, amps2) = provider(omega, k, pol)?;
            let sp = delta_m_integrand(m, omega, k, pol, &amps1, &amps2, d, temps)?;
            out[0] += measure * sp.channel_abs_sum();
            out[1] += measure * sp.total;
            for (i, (_, v)) in sp.channels().iter().enumerate() {
                out[2 + i] += measure * v;
            }
        }
        Ok(())
    };

    let outer = integrate_adaptive_multi(
        8,
        |omega, out| {
            let q = omega / C;
            // Propagating sector, substituting k_z for k: k dk = k_z dk_z.
            let pw = integrate_adaptive_multi(
                8,
                |kz_var, inner_out| {
                    let kmag = ((q - kz_var) * (q + kz_var)).max(0.0).sqrt();
                    point_channels(omega, kmag, kz_var / two_pi, inner_out)
                },
                0.0,
                q,
                inner_tol,
            )?;
            // Evanescent sector, substituting κ: k dk = κ dκ.
            let ew = integrate_adaptive_multi(
                8,
                |kappa, inner_out| {
                    let kmag = (q * q + kappa * kappa).sqrt();
                    point_channels(omega, kmag, kappa / two_pi, inner_out)
                },
                0.0,
                kappa_max,
                inner_tol,
            )?;
            for i in 0..8 {
                out[i] = pw.values[i] + ew.values[i];
            }
            Ok(())
        },
        0.0,
        omega_max,
        tol,
    )?;

    let scale = 1.0 / two_pi;
    let activity = outer.values[0] * scale;
    Ok(FluxResult {
        value: outer.values[1] * scale,
        quadrature_error: outer.error_estimate * scale + inner_tol * activity.abs(),
        breakdown: CHANNEL_NAMES
            .iter()
            .enumerate()
            .map(|(i, n)| (n.to_string(), outer.values[2 + i] * scale))
            .collect(),
    })
}

/// Equilibrium Casimir pressure between the two bodies at a common
/// temperature, computed as a Matsubara sum over the imaginary frequency
/// axis.
///
/// Reported in Pa with **negative = attraction**. The breakdown carries
/// the TE and TM contributions.
///
/// # Arguments
///
/// * `temperature` - Common temperature in K (≥ 0; 0 selects the
///   zero-point integral).
/// * `config` - Cavity geometry and materials (materials must support the
///   imaginary axis).
/// * `tol` - Relative tolerance.
pub fn eq_pressure(temperature: f64, config: &CavityConfig, tol: f64) -> Result<FluxResult> {
    if !(temperature >= 0.0) || !temperature.is_finite() {
        return Err(Error::Domain(format!(
            "temperature must be finite and >= 0, got {temperature}"
        )));
    }
    if !(tol > 0.0) || !tol.is_finite() {
        return Err(Error::Domain(format!("tolerance must be positive, got {tol}")));
    }
    let d = config.d;
    let k_max = 45.0 / (2.0 * d);
    let xi_scale = C / (2.0 * d);
    let inner_tol = 0.1 * tol;

    let mut pol_values = [0.0; 2];
    let mut pol_errors = [0.0; 2];
    let mut activity = 0.0;
    for (ip, pol) in [Polarization::TE, Polarization::TM].into_iter().enumerate() {
        let summand = |xi: f64| -> Result<f64> {
            let inner = integrate_adaptive(
                |k| {
                    let kappa = (xi * xi / (C * C) + k * k).sqrt();
                    let r1 = slab_reflection_imag_axis(&config.body1, xi, k, pol)?;
                    let r2 = slab_reflection_imag_axis(&config.body2, xi, k, pol)?;
                    let rr = r1 * r2 * (-2.0 * kappa * d).exp();
                    Ok(k * kappa * rr / (1.0 - rr))
                },
                0.0,
                k_max,
                inner_tol,
            )?;
            Ok(inner.value)
        };
        let sum = matsubara_sum(summand, temperature, xi_scale, tol)?;
        pol_values[ip] = -sum.value / std::f64::consts::PI;
        pol_errors[ip] = sum.error_estimate / std::f64::consts::PI;
        activity += pol_values[ip].abs();
    }
    Ok(FluxResult {
        value: pol_values[0] + pol_values[1],
        quadrature_error: pol_errors[0] + pol_errors[1] + inner_tol * activity,
        breakdown: vec![
            ("te".to_string(), pol_values[0]),
            ("tm".to_string(), pol_values[1]),
        ],
    })
}

/// Real-frequency spectral density of the equilibrium force at a common
/// temperature: the fixed-ω integrand whose (contour-rotated) frequency
/// integral gives the equilibrium force.
///
/// Reported in the raw bookkeeping convention (**positive = attraction**),
/// i.e. not sign-flipped like [`eq_pressure`]; this helper exists for
/// cross-validation against mode-space traces at fixed frequency, and its
/// frequency integral does not converge absolutely (the zero-point part
/// must be contour-rotated), so no integrated counterpart is offered.
///
/// # Arguments
///
/// * `omega` - Angular frequency in rad/s (> 0).
/// * `temperature` - Common temperature in K.
/// * `config` - Cavity geometry and materials (real-axis amplitudes).
/// * `tol` - Relative tolerance of the k integration.
pub fn eq_force_density_real(
    omega: f64,
    temperature: f64,
    config: &CavityConfig,
    tol: f64,
) -> Result<f64> {
    if !(omega > 0.0) {
        return Err(Error::Domain(format!("omega must be positive, got {omega}")));
    }
    let d = config.d;
    let q = omega / C;
    let n_weight = n_sym(omega, temperature);
    let kappa_max = 1.0e14f64.ln() / (2.0 * d);
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut value = 0.0;
    for pol in [Polarization::TE, Polarization::TM] {
        let round_trip = |kmag: f64| -> Result<Complex64> {
            let amps1 = slab_amplitudes(&config.body1, omega, kmag, pol)?;
            let amps2 = slab_amplitudes(&config.body2, omega, kmag, pol)?;
            let kz_c = kz(omega, kmag);
            let rr = amps1.rho_plus
                * amps2.rho_minus
                * (Complex64::i() * kz_c * (2.0 * d)).exp();
            let denom = Complex64::new(1.0, 0.0) - rr;
            if denom == Complex64::new(0.0, 0.0) {
                return Err(Error::Resonance(format!(
                    "cavity resonance at omega = {omega:e}, k = {kmag:e}"
                )));
            }
            Ok(rr / denom)
        };
        // Propagating: −2·(k_z N/ω)·2·Re[u r₁ r₂ e^{2 i k_z d}].
        let pw = integrate_adaptive(
            |kz_var| {
                let kmag = ((q - kz_var) * (q + kz_var)).max(0.0).sqrt();
                let urr = round_trip(kmag)?;
                Ok(kz_var / two_pi * (-4.0 * kz_var * n_weight / omega) * urr.re)
            },
            0.0,
            q,
            tol,
        )?;
        // Evanescent: +4·(κ N/ω)·Im[u r₁ r₂ e^{−2κd}].
        let ew = integrate_adaptive(
            |kappa| {
                let kmag = (q * q + kappa * kappa).sqrt();
                let urr = round_trip(kmag)?;
                Ok(kappa / two_pi * (4.0 * kappa * n_weight / omega) * urr.im)
            },
            0.0,
            kappa_max,
            tol,
        )?;
        value += pw.value + ew.value;
    }
    Ok(value)
}

/// Total out-of-equilibrium force per unit area on body 1.
///
/// Combines the half-sum of the equilibrium pressures at T₁ and T₂ with
/// the nonequilibrium momentum exchange Δ₂. Reported in Pa with
/// **negative = attraction toward body 2**. The breakdown lists
/// `eq_t1`, `eq_t2` (each ½·eq_pressure), `delta2` (the reported-sign
/// nonequilibrium part), and the six reported-sign raw channels
/// `delta2_n21` … `delta2_n32` (these six resolve `delta2` and are not
/// additional terms).
///
/// # Arguments
///
/// * `temps` - The three temperatures.
/// * `config` - Cavity geometry and materials (materials must support
///   both the real and the imaginary frequency axis).
/// * `tol` - Relative tolerance.
pub fn total_force(
    temps: &TemperatureTriple,
    config: &CavityConfig,
    tol: f64,
) -> Result<FluxResult> {
    let eq1 = eq_pressure(temps.t1, config, tol)?;
    let eq2 = if temps.t2 == temps.t1 {
        eq1.clone()
    } else {
        eq_pressure(temps.t2, config, tol)?
    };
    let dm = noneq_flux(2, temps, config, tol)?;
    // Δ₂ is the +z momentum delivered to body 1; the reported force uses
    // negative = attraction (toward body 2 above), so the reported
    // nonequilibrium part is −Δ₂.
    let delta2 = -dm.value;
    let mut breakdown = vec![
        ("eq_t1".to_string(), 0.5 * eq1.value),
        ("eq_t2".to_string(), 0.5 * eq2.value),
        ("delta2".to_string(), delta2),
    ];
    for (name, v) in &dm.breakdown {
        breakdown.push((format!("delta2_{name}"), -v));
    }
    Ok(FluxResult {
        value: 0.5 * eq1.value + 0.5 * eq2.value + delta2,
        quadrature_error: 0.5 * eq1.quadrature_error
            + 0.5 * eq2.quadrature_error
            + dm.quadrature_error,
        breakdown,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::consts::SIGMA_SB;
    use crate::materials::DielectricModel;
    use crate::scattering::Thickness;
    use approx::assert_relative_eq;
    use rand::Rng;
    use rand::SeedableRng;

    fn random_amp(rng: &mut impl Rng, max_norm: f64) -> Complex64 {
        let r = rng.gen_range(0.0..max_norm);
        let phase = rng.gen_range(0.0..(2.0 * std::f64::consts::PI));
        Complex64::from_polar(r, phase)
    }

    fn random_amplitudes(rng: &mut impl Rng) -> SpecularAmplitudes {
        // Physically admissible-looking amplitudes: |ρ|² + |τ|² ≤ 1.
        let rho = random_amp(rng, 0.85);
        let tau_cap = (1.0 - rho.norm_sqr()).sqrt();
        let tau = random_amp(rng, tau_cap.min(0.9));
        SpecularAmplitudes {
            rho_plus: rho,
            rho_minus: random_amp(rng, 0.85),
            tau,
            tau_tilde: tau - Complex64::new(1.0, 0.0),
        }
    }

    #[test]
    fn raw_channels_sum_to_grouped_total() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x0def_ace5);
        let temps = TemperatureTriple::new(317.0, 512.0, 144.0).unwrap();
        for m in [1u8, 2] {
            for _ in 0..1000 {
                let omega = 10.0f64.powf(rng.gen_range(13.0..15.0));
                // Propagating node (the grouped form applies there).
                let k = rng.gen_range(0.01..0.99) * omega / C;
                let d = rng.gen_range(0.5e-6..5.0e-6);
                let amps1 = random_amplitudes(&mut rng);
                let amps2 = random_amplitudes(&mut rng);
                let sp = delta_m_integrand(
                    m,
                    omega,
                    k,
                    Polarization::TE,
                    &amps1,
                    &amps2,
                    d,
                    &temps,
                )
                .unwrap();
                let raw_sum = sp.n21 + sp.n13 + sp.n31 + sp.n12 + sp.n23 + sp.n32;
                let scale = sp.channel_abs_sum();
                assert!(
                    (raw_sum - sp.total).abs() <= 1e-12 * scale,
                    "m={m}: raw {raw_sum:e} vs grouped {:e} (scale {scale:e})",
                    sp.total
                );
            }
        }
    }

    #[test]
    fn transparent_body1_total_is_exactly_zero() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x7a05_0001);
        let transparent = SpecularAmplitudes::transparent();
        let temps = TemperatureTriple::new(290.0, 410.0, 77.0).unwrap();
        for m in [1u8, 2] {
            for _ in 0..200 {
                let omega = 10.0f64.powf(rng.gen_range(13.0..15.0));
                let k = rng.gen_range(0.01..0.99) * omega / C;
                let amps2 = random_amplitudes(&mut rng);
                let sp = delta_m_integrand(
                    m,
                    omega,
                    k,
                    Polarization::TM,
                    &transparent,
                    &amps2,
                    2.0e-6,
                    &temps,
                )
                .unwrap();
                assert_eq!(sp.total.abs(), 0.0, "m={m}: transparent body must decouple");
            }
        }
    }

    #[test]
    fn equilibrium_integrand_is_exactly_zero() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0xe9_0001);
        let temps = TemperatureTriple::new(375.0, 375.0, 375.0).unwrap();
        for m in [1u8, 2] {
            let omega = 1.0e14;
            for _ in 0..50 {
                let k = rng.gen_range(0.01..2.0) * omega / C;
                let amps1 = random_amplitudes(&mut rng);
                let amps2 = random_amplitudes(&mut rng);
                let sp = delta_m_integrand(
                    m,
                    omega,
                    k,
                    Polarization::TE,
                    &amps1,
                    &amps2,
                    1.0e-6,
                    &temps,
                )
                .unwrap();
                assert_eq!(sp.total.abs(), 0.0);
                assert_eq!(sp.channel_abs_sum(), 0.0);
            }
        }
    }

    #[test]
    fn channels_are_antisymmetric_in_their_label() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0xa511);
        let omega = 2.0e14;
        let k = 0.4 * omega / C;
        let amps1 = random_amplitudes(&mut rng);
        let amps2 = random_amplitudes(&mut rng);
        let fwd = TemperatureTriple::new(300.0, 450.0, 120.0).unwrap();
        let swapped = TemperatureTriple::new(450.0, 300.0, 120.0).unwrap();
        for m in [1u8, 2] {
            let sp_f = delta_m_integrand(
                m, omega, k, Polarization::TE, &amps1, &amps2, 1.5e-6, &fwd,
            )
            .unwrap();
            let sp_s = delta_m_integrand(
                m, omega, k, Polarization::TE, &amps1, &amps2, 1.5e-6, &swapped,
            )
            .unwrap();
            // Swapping T₁ ↔ T₂ negates n21 and n12 while the amplitude
            // factors are unchanged, so those channels flip exactly.
            assert_eq!(sp_s.n21, -sp_f.n21);
            assert_eq!(sp_s.n12, -sp_f.n12);
        }
    }

    fn black_provider(
    ) -> impl Fn(f64, f64, Polarization) -> Result<(SpecularAmplitudes, SpecularAmplitudes)>
    {
        |_omega, _k, _pol| {
            Ok((SpecularAmplitudes::black(), SpecularAmplitudes::black()))
        }
    }

    #[test]
    fn black_bodies_reproduce_stefan_boltzmann() {
        // Body 1 at 300 K facing a cold black body and cold environment
        // loses σ(T₂⁴ + T₃⁴ − 2T₁⁴) = −2σT₁⁴; the inter-body channel n21
        // and the environment channel n13 each carry −σT₁⁴.
        let temps = TemperatureTriple::new(300.0, 0.0, 0.0).unwrap();
        let flux = noneq_flux_with(1, &temps, 5.0e-6, 1.0e-6, black_provider()).unwrap();
        let sigma_t4 = SIGMA_SB * 300.0f64.powi(4);
        assert_relative_eq!(flux.value, -2.0 * sigma_t4, max_relative = 1e-5);
        assert_relative_eq!(flux.value, -918.6006559, max_relative = 1e-5);
        assert_relative_eq!(
            flux.channel("n21").unwrap(),
            -459.300328,
            max_relative = 1e-5
        );
        assert_relative_eq!(
            flux.channel("n13").unwrap(),
            -459.300328,
            max_relative = 1e-5
        );
        for name in ["n31", "n12", "n23", "n32"] {
            assert_eq!(flux.channel(name).unwrap(), 0.0, "channel {name}");
        }
    }

    #[test]
    fn heat_flux_with_environment_matching_body2() {
        // Black bodies with T₃ = T₂: the net flux into body 1 is
        // −2σ(T₁⁴ − T₂⁴); the inter-body channel alone carries
        // −σ(T₁⁴ − T₂⁴) (the other half flows through the environment).
        let temps = TemperatureTriple::new(300.0, 200.0, 200.0).unwrap();
        let flux = noneq_flux_with(1, &temps, 5.0e-6, 1.0e-6, black_provider()).unwrap();
        let expected = SIGMA_SB * (300.0f64.powi(4) - 200.0f64.powi(4));
        assert_relative_eq!(flux.value, -2.0 * expected, max_relative = 1e-5);
        assert_relative_eq!(
            flux.channel("n21").unwrap(),
            -expected,
            max_relative = 1e-5
        );
    }

    #[test]
    fn radiation_pressure_of_black_body_on_mirror() {
        // A black body 2 at 300 K radiates onto a perfectly reflecting
        // body 1 (cold environment): the momentum delivered to body 1 is
        // −2·(u/6) = −4σT⁴/(3c), i.e. body 1 is pushed away from body 2.
        let mirror = crate::scattering::SlabBody::new(
            Thickness::SemiInfinite,
            DielectricModel::PerfectMirror,
        )
        .unwrap();
        let temps = TemperatureTriple::new(0.0, 300.0, 0.0).unwrap();
        let provider = move |omega: f64, k: f64, pol: Polarization| {
            Ok((
                slab_amplitudes(&mirror, omega, k, pol)?,
                SpecularAmplitudes::black(),
            ))
        };
        let flux = noneq_flux_with(2, &temps, 5.0e-6, 1.0e-6, provider).unwrap();
        let expected = -4.0 * SIGMA_SB * 300.0f64.powi(4) / (3.0 * C);
        assert_relative_eq!(flux.value, expected, max_relative = 1e-5);
        // With T₁ = T₃ the occupation differences n21 and n23 coincide, so
        // the exchange splits evenly between those two channels.
        assert_relative_eq!(
            flux.channel("n23").unwrap(),
            expected / 2.0,
            max_relative = 1e-5
        );
        assert_relative_eq!(
            flux.channel("n21").unwrap(),
            expected / 2.0,
            max_relative = 1e-5
        );
        for name in ["n13", "n31", "n12", "n32"] {
            assert_eq!(flux.channel(name).unwrap(), 0.0, "channel {name}");
        }
    }

    #[test]
    fn equilibrium_shortcut_returns_exact_zeros() {
        let temps = TemperatureTriple::new(600.0, 600.0, 600.0).unwrap();
        // The provider would fail if called: equilibrium must not evaluate it.
        let flux = noneq_flux_with(1, &temps, 1.0e-6, 1.0e-3, |_, _, _| {
            Err(Error::Domain("must not be called".into()))
        })
        .unwrap();
        assert_eq!(flux.value, 0.0);
        assert_eq!(flux.quadrature_error, 0.0);
        assert!(flux.breakdown.iter().all(|(_, v)| *v == 0.0));
    }

    fn mirror_cavity(d: f64) -> CavityConfig {
        let mirror = crate::scattering::SlabBody::new(
            Thickness::SemiInfinite,
            DielectricModel::PerfectMirror,
        )
        .unwrap();
        CavityConfig::new(mirror.clone(), mirror, d).unwrap()
    }

    #[test]
    fn casimir_pressure_between_mirrors_at_zero_temperature() {
        // −π²ħc/(240 d⁴) at d = 1 µm.
        let config = mirror_cavity(1.0e-6);
        let p = eq_pressure(0.0, &config, 1.0e-8).unwrap();
        assert_relative_eq!(p.value, -1.300125773e-3, max_relative = 1e-6);
        // TE and TM contribute equally for ideal mirrors.
        assert_relative_eq!(
            p.channel("te").unwrap(),
            p.channel("tm").unwrap(),
            max_relative = 1e-8
        );
    }

    #[test]
    fn classical_limit_of_mirror_pressure() {
        // At d = 5 µm and T = 3000 K only the n = 0 Matsubara term
        // survives (the n ≥ 1 terms are suppressed by ~e^{−82}):
        // P = −ζ(3) k_B T/(4πd³), half of it in each polarization.
        let d = 5.0e-6;
        let config = mirror_cavity(d);
        let p = eq_pressure(3000.0, &config, 1.0e-8).unwrap();
        let zeta3 = 1.2020569031595943;
        let expected = -zeta3 * KB * 3000.0 / (4.0 * std::f64::consts::PI * d.powi(3));
        assert_relative_eq!(p.value, expected, max_relative = 1e-6);
        assert_relative_eq!(p.channel("tm").unwrap(), expected / 2.0, max_relative = 1e-6);
        assert_relative_eq!(p.value, -3.170e-5, max_relative = 1e-3);
    }

    #[test]
    fn eq_pressure_with_material_bodies_is_attractive_and_weaker() {
        let silica = crate::scattering::SlabBody::new(
            Thickness::SemiInfinite,
            DielectricModel::preset("fused-silica-2osc").unwrap(),
        )
        .unwrap();
        let config = CavityConfig::new(silica.clone(), silica, 1.0e-6).unwrap();
        let p = eq_pressure(300.0, &config, 1.0e-6).unwrap();
        let mirror_p = eq_pressure(300.0, &mirror_cavity(1.0e-6), 1.0e-6).unwrap();
        assert!(p.value < 0.0, "dielectric Casimir pressure must attract");
        assert!(
            p.value.abs() < mirror_p.value.abs(),
            "dielectric attraction must be weaker than ideal mirrors"
        );
    }

    #[test]
    fn eq_force_density_of_mirrors_has_closed_form() {
        // For ideal mirrors r₁r₂ = 1 in both polarizations and
        // Re[e^{ix}/(1−e^{ix})] ≡ −½, so the propagating sector gives
        // density = 2·N_sym·ω²/(3πc³) while the evanescent sector vanishes.
        // Choose ωd/c < π so no cavity resonance sits in the k range.
        let omega = 1.0e14;
        let d = 1.0e-6;
        let config = mirror_cavity(d);
        for t in [0.0, 300.0] {
            let density = eq_force_density_real(omega, t, &config, 1.0e-10).unwrap();
            let expected = 2.0 * n_sym(omega, t) * omega * omega
                / (3.0 * std::f64::consts::PI * C.powi(3));
            assert_relative_eq!(density, expected, max_relative = 1e-9);
        }
    }

    #[test]
    fn total_force_in_equilibrium_reduces_to_eq_pressure() {
        let silica = crate::scattering::SlabBody::new(
            Thickness::Finite(2.0e-6),
            DielectricModel::preset("fused-silica-2osc").unwrap(),
        )
        .unwrap();
        let config = CavityConfig::new(silica.clone(), silica, 3.0e-6).unwrap();
        let temps = TemperatureTriple::new(300.0, 300.0, 300.0).unwrap();
        let total = total_force(&temps, &config, 1.0e-5).unwrap();
        let eq = eq_pressure(300.0, &config, 1.0e-5).unwrap();
        assert_relative_eq!(total.value, eq.value, max_relative = 1e-12);
        assert_eq!(total.channel("delta2").unwrap(), 0.0);
        // Breakdown bound: |value| ≤ Σ|breakdown| + error.
        let bound: f64 = total.breakdown.iter().map(|(_, v)| v.abs()).sum();
        assert!(total.value.abs() <= bound + total.quadrature_error);
    }

    #[test]
    fn breakdown_bound_holds_out_of_equilibrium() {
        let temps = TemperatureTriple::new(300.0, 0.0, 0.0).unwrap();
        let flux = noneq_flux_with(1, &temps, 5.0e-6, 1.0e-5, black_provider()).unwrap();
        let bound: f64 = flux.breakdown.iter().map(|(_, v)| v.abs()).sum();
        assert!(flux.value.abs() <= bound + flux.quadrature_error);
    }

    #[test]
    fn correlator_densities_sector_structure() {
        let omega = 1.0e14;
        let q = omega / C;
        // Environment: propagating only.
        let pw = env_correlator_density(omega, 0.5 * q, 300.0).unwrap();
        assert!(pw > 0.0);
        let ew = env_correlator_density(omega, 2.0 * q, 300.0).unwrap();
        assert_eq!(ew, 0.0);
        // Emitted correlators: an ideal mirror emits nothing.
        let mirror_amps = SpecularAmplitudes {
            rho_plus: Complex64::new(-1.0, 0.0),
            rho_minus: Complex64::new(-1.0, 0.0),
            tau: Complex64::new(0.0, 0.0),
            tau_tilde: Complex64::new(-1.0, 0.0),
        };
        assert_eq!(
            emitted_correlator_same_dir(omega, 0.5 * q, &mirror_amps, 300.0).unwrap(),
            0.0
        );
        // A black body emits the full environment weight on the
        // propagating sector and nothing evanescent.
        let black = SpecularAmplitudes::black();
        assert_relative_eq!(
            emitted_correlator_same_dir(omega, 0.5 * q, &black, 300.0).unwrap(),
            env_correlator_density(omega, 0.5 * q, 300.0).unwrap(),
            max_relative = 1e-14
        );
        assert_eq!(
            emitted_correlator_same_dir(omega, 2.0 * q, &black, 300.0).unwrap(),
            0.0
        );
    }

    #[test]
    fn validation_errors() {
        let temps = TemperatureTriple::new(300.0, 0.0, 0.0).unwrap();
        let amps = SpecularAmplitudes::black();
        assert!(delta_m_integrand(
            3, 1.0e14, 1.0e5, Polarization::TE, &amps, &amps, 1.0e-6, &temps
        )
        .is_err());
        assert!(delta_m_integrand(
            1, -1.0, 1.0e5, Polarization::TE, &amps, &amps, 1.0e-6, &temps
        )
        .is_err());
        assert!(noneq_flux_with(1, &temps, -1.0, 1e-3, black_provider()).is_err());
        assert!(noneq_flux_with(1, &temps, 1e-6, 0.0, black_provider()).is_err());
        let config = mirror_cavity(1.0e-6);
        assert!(eq_pressure(-1.0, &config, 1e-6).is_err());
        assert!(CavityConfig::new(
            config.body1.clone(),
            config.body2.clone(),
            0.0
        )
        .is_err());
    }
}
