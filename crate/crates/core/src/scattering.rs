//! Specular scattering amplitudes of planar bodies and point scatterers.
//!
//! Bodies are laterally infinite slabs (finite thickness or semi-infinite)
//! of homogeneous material in vacuum. Their scattering is diagonal in
//! (ω, **k**, p) and described by reflection and transmission amplitudes
//! referenced to the body's faces, so no thickness-dependent propagation
//! phases appear in the amplitudes themselves.
//!
//! A small polarizable particle scatters non-specularly; its reflection and
//! transmission operators have smooth kernels given by
//! [`atom_reflection_element`] and [`atom_transmission_element`].

use crate::consts::{C, EPS0};
use crate::error::{Error, Result};
use crate::materials::DielectricModel;
use crate::modes::{bilinear_dot, kz, polarization_vector, AngularMode, Polarization};
use num_complex::Complex64;

/// Thickness of a planar body.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Thickness {
    /// Slab of finite thickness in meters (must be positive).
    Finite(f64),
    /// Half-space occupying everything beyond the body's single face.
    SemiInfinite,
}

/// A planar body: a slab of one material with a thickness.
#[derive(Debug, Clone, PartialEq)]
pub struct SlabBody {
    /// Thickness of the slab.
    pub thickness: Thickness,
    /// Dielectric response of the slab material.
    pub material: DielectricModel,
}

impl SlabBody {
    /// Creates a slab body, validating the thickness.
    pub fn new(thickness: Thickness, material: DielectricModel) -> Result<Self> {
        if let Thickness::Finite(t) = thickness {
            if !(t > 0.0) || !t.is_finite() {
                return Err(Error::Domain(format!(
                    "slab thickness must be positive and finite, got {t}"
                )));
            }
        }
        Ok(Self { thickness, material })
    }
}

/// Specular amplitudes of a slab at one (ω, k, p).
///
/// `rho_plus` is the reflection amplitude for waves hitting the upper face,
/// `rho_minus` for the lower face (equal for the homogeneous symmetric
/// slabs modelled here, but kept separate in the interface). `tau` is the
/// transmission amplitude through the body, and `tau_tilde = tau − 1` is
/// the scattered part of transmission (the deviation from free propagation),
/// which is the natural building block of trace formulas.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpecularAmplitudes {
    /// Reflection amplitude at the upper (+z-side) face.
    pub rho_plus: Complex64,
    /// Reflection amplitude at the lower (−z-side) face.
    pub rho_minus: Complex64,
    /// Transmission amplitude through the body.
    pub tau: Complex64,
    /// Scattered part of transmission, τ − 1.
    pub tau_tilde: Complex64,
}

impl SpecularAmplitudes {
    /// Amplitudes of a perfectly transparent body (ρ = 0, τ = 1).
    pub fn transparent() -> Self {
        SpecularAmplitudes {
            rho_plus: Complex64::new(0.0, 0.0),
            rho_minus: Complex64::new(0.0, 0.0),
            tau: Complex64::new(1.0, 0.0),
            tau_tilde: Complex64::new(0.0, 0.0),
        }
    }

    /// Amplitudes of an ideal black body (ρ = τ = 0): every incident wave
    /// is absorbed. No material model produces this exactly; it is the
    /// idealized limit used by benchmark configurations.
    pub fn black() -> Self {
        SpecularAmplitudes {
            rho_plus: Complex64::new(0.0, 0.0),
            rho_minus: Complex64::new(0.0, 0.0),
            tau: Complex64::new(0.0, 0.0),
            tau_tilde: Complex64::new(-1.0, 0.0),
        }
    }
}

/// Longitudinal wavenumber inside a medium of permittivity ε:
/// k_zm = √(ε·ω²/c² − k²), on the branch with Im ≥ 0 (decaying into the
/// medium), and Re ≥ 0 when lossless and propagating.
fn kz_in_medium(omega: f64, k: f64, eps: Complex64) -> Complex64 {
    let q2 = (omega / C) * (omega / C);
    let arg = eps * q2 - k * k;
    if arg.im == 0.0 {
        // Keep the lossless branches exact (no floating-point dust).
        if arg.re >= 0.0 {
            Complex64::new(arg.re.sqrt(), 0.0)
        } else {
            Complex64::new(0.0, (-arg.re).sqrt())
        }
    } else {
        arg.sqrt()
    }
}

/// Fresnel amplitudes of a single vacuum–medium interface.
///
/// # Arguments
///
/// * `omega` - Angular frequency in rad/s.
/// * `k` - Transverse wavenumber in rad/m.
/// * `pol` - Polarization.
/// * `eps` - Relative permittivity of the medium.
///
/// # Returns
///
/// `(r, t)` where r is the reflection amplitude and t = 1 + r the
/// transmission amplitude into the medium (both polarizations share this
/// form in the polarization-vector normalization used here).
pub fn interface_fresnel(
    omega: f64,
    k: f64,
    pol: Polarization,
    eps: Complex64,
) -> Result<(Complex64, Complex64)> {
    if !(omega > 0.0) || k < 0.0 {
        return Err(Error::Domain(format!(
            "interface_fresnel requires omega > 0 and k >= 0, got ({omega}, {k})"
        )));
    }
    let kzv = kz(omega, k);
    let kzm = kz_in_medium(omega, k, eps);
    let r = match pol {
        Polarization::TE => (kzv - kzm) / (kzv + kzm),
        Polarization::TM => (eps * kzv - kzm) / (eps * kzv + kzm),
    };
    Ok((r, Complex64::new(1.0, 0.0) + r))
}

/// Airy summation for a symmetric slab given the single-interface
/// amplitude, the internal wavenumber, and the thickness.
fn airy(r: Complex64, kzm: Complex64, thickness: f64) -> Result<(Complex64, Complex64)> {
    let e1 = (Complex64::i() * kzm * thickness).exp();
    let e2 = e1 * e1;
    let denom = Complex64::new(1.0, 0.0) - r * r * e2;
    if denom.norm() < 1e-14 * (1.0 + (r * r * e2).norm()) {
        return Err(Error::Resonance(format!(
            "slab guided-mode resonance: |1 - r^2 e^{{2 i k_zm t}}| = {:.3e}",
            denom.norm()
        )));
    }
    let rho = r * (Complex64::new(1.0, 0.0) - e2) / denom;
    let tau = (Complex64::new(1.0, 0.0) - r * r) * e1 / denom;
    Ok((rho, tau))
}

/// Specular amplitudes of a slab body at one mode.
///
/// # Arguments
///
/// * `body` - The slab.
/// * `omega` - Angular frequency in rad/s.
/// * `k` - Transverse wavenumber in rad/m.
/// * `pol` - Polarization.
///
/// # Returns
///
/// The face-referenced amplitudes. A semi-infinite body of a lossless
/// medium in which the refracted wave propagates has no limiting
/// amplitude and returns [`Error::IllDefined`]; a semi-infinite absorbing
/// (or internally evanescent) body returns ρ equal to the interface
/// amplitude and τ = 0.
pub fn slab_amplitudes(
    body: &SlabBody,
    omega: f64,
    k: f64,
    pol: Polarization,
) -> Result<SpecularAmplitudes> {
    if let DielectricModel::PerfectMirror = body.material {
        let rho = match pol {
            Polarization::TE => Complex64::new(-1.0, 0.0),
            Polarization::TM => Complex64::new(1.0, 0.0),
        };
        return Ok(SpecularAmplitudes {
            rho_plus: rho,
            rho_minus: rho,
            tau: Complex64::new(0.0, 0.0),
            tau_tilde: Complex64::new(-1.0, 0.0),
        });
    }
    let eps = body.material.permittivity(omega)?;
    let kzm = kz_in_medium(omega, k, eps);
    let (r, _) = interface_fresnel(omega, k, pol, eps)?;
    let (rho, tau) = match body.thickness {
        Thickness::Finite(t) => airy(r, kzm, t)?,
        Thickness::SemiInfinite => {
            if kzm.im == 0.0 && kzm.re > 0.0 {
                return Err(Error::IllDefined(
                    "semi-infinite lossless body with an internally propagating \
                     wave has no limiting reflection amplitude"
                        .into(),
                ));
            }
            (r, Complex64::new(0.0, 0.0))
        }
    };
    Ok(SpecularAmplitudes {
        rho_plus: rho,
        rho_minus: rho,
        tau,
        tau_tilde: tau - Complex64::new(1.0, 0.0),
    })
}

/// Reflection amplitude of a slab body on the imaginary frequency axis.
///
/// On the axis ω = iξ all quantities are real: the vacuum wavenumber is
/// κ = √(ξ²/c² + k²), the medium wavenumber κ_m = √(ε(iξ)ξ²/c² + k²), and
/// the Airy factor becomes e^{−2κ_m t}. The ξ = 0 point is evaluated as
/// the static limit (κ_m → k), where the TE amplitude of any dielectric
/// or conductor vanishes and the TM amplitude becomes
/// (ε(0) − 1)/(ε(0) + 1) (→ 1 for conductors).
///
/// # Arguments
///
/// * `body` - The slab.
/// * `xi` - Imaginary frequency ξ ≥ 0 in rad/s.
/// * `k` - Transverse wavenumber in rad/m (must be positive when ξ = 0).
/// * `pol` - Polarization.
pub fn slab_reflection_imag_axis(
    body: &SlabBody,
    xi: f64,
    k: f64,
    pol: Polarization,
) -> Result<f64> {
    if !(xi >= 0.0) || !(k >= 0.0) {
        return Err(Error::Domain(format!(
            "imaginary-axis amplitudes require xi >= 0 and k >= 0, got ({xi}, {k})"
        )));
    }
    if let DielectricModel::PerfectMirror = body.material {
        return Ok(match pol {
            Polarization::TE => -1.0,
            Polarization::TM => 1.0,
        });
    }
    let (r, kappa_m) = if xi == 0.0 {
        if k == 0.0 {
            return Err(Error::Domain(
                "the (xi, k) = (0, 0) corner has no well-defined amplitude".into(),
            ));
        }
        let eps0 = body.material.static_permittivity()?;
        let r = match pol {
            // κ_m(0) = k for every finite-conductivity medium, so the TE
            // interface contrast vanishes at zero frequency.
            Polarization::TE => 0.0,
            Polarization::TM => {
                if eps0.is_infinite() {
                    1.0
                } else {
                    (eps0 - 1.0) / (eps0 + 1.0)
                }
            }
        };
        (r, k)
    } else {
        let eps = body.material.permittivity_imag_axis(xi)?;
        let kappa = (xi * xi / (C * C) + k * k).sqrt();
        let kappa_m = (eps * xi * xi / (C * C) + k * k).sqrt();
        let r = match pol {
            Polarization::TE => (kappa - kappa_m) / (kappa + kappa_m),
            Polarization::TM => (eps * kappa - kappa_m) / (eps * kappa + kappa_m),
        };
        (r, kappa_m)
    };
    Ok(match body.thickness {
        Thickness::SemiInfinite => r,
        Thickness::Finite(t) => {
            let e2 = (-2.0 * kappa_m * t).exp();
            r * (1.0 - e2) / (1.0 - r * r * e2)
        }
    })
}

/// Matrix element of the reflection operator of a point scatterer.
///
/// The scatterer sits at `r_a` = (x_A, y_A, z_A) and has polarizability α
/// (SI units, C·m²/V). The operator maps an incoming wave travelling in
/// the −φ direction with labels (**k**′, p′) into an outgoing wave in the
/// +φ direction with labels (**k**, p); amplitudes are referenced to the
/// plane z = 0:
///
/// element = (i·ω²·α)/(2ε₀c²·k_z) · ε̂_p^φ(**k**)·ε̂_{p′}^{−φ}(**k**′)
///           · e^{i(**k**′−**k**)·ρ_A} · e^{−iφ(k_z + k_z′)z_A}
///
/// where k_z belongs to the outgoing mode and the polarization product is
/// bilinear.
///
/// # Arguments
///
/// * `omega` - Angular frequency in rad/s.
/// * `alpha` - Polarizability at this frequency.
/// * `k_out`, `pol_out` - Outgoing transverse wavevector and polarization.
/// * `k_in`, `pol_in` - Incoming transverse wavevector and polarization.
/// * `phi` - Direction of the outgoing wave (+1 or −1).
/// * `r_a` - Position of the scatterer in meters.
pub fn atom_reflection_element(
    omega: f64,
    alpha: Complex64,
    k_out: [f64; 2],
    pol_out: Polarization,
    k_in: [f64; 2],
    pol_in: Polarization,
    phi: i8,
    r_a: [f64; 3],
) -> Result<Complex64> {
    atom_element(omega, alpha, k_out, pol_out, k_in, pol_in, phi, r_a, true)
}

/// Matrix element of the transmission-correction operator of a point
/// scatterer (the scattered part only; the identity of free propagation is
/// excluded).
///
/// Same structure as [`atom_reflection_element`], but the incoming wave
/// travels in the **same** direction φ as the outgoing one:
///
/// element = (i·ω²·α)/(2ε₀c²·k_z) · ε̂_p^φ(**k**)·ε̂_{p′}^{φ}(**k**′)
///           · e^{i(**k**′−**k**)·ρ_A} · e^{−iφ(k_z − k_z′)z_A}
pub fn atom_transmission_element(
    omega: f64,
    alpha: Complex64,
    k_out: [f64; 2],
    pol_out: Polarization,
    k_in: [f64; 2],
    pol_in: Polarization,
    phi: i8,
    r_a: [f64; 3],
) -> Result<Complex64> {
    atom_element(omega, alpha, k_out, pol_out, k_in, pol_in, phi, r_a, false)
}

#[allow(clippy::too_many_arguments)]
fn atom_element(
    omega: f64,
    alpha: Complex64,
    k_out: [f64; 2],
    pol_out: Polarization,
    k_in: [f64; 2],
    pol_in: Polarization,
    phi: i8,
    r_a: [f64; 3],
    reflection: bool,
) -> Result<Complex64> {
    if phi != 1 && phi != -1 {
        return Err(Error::Domain(format!("phi must be +1 or -1, got {phi}")));
    }
    let kz_out = kz(omega, k_out[0].hypot(k_out[1]));
    if kz_out == Complex64::new(0.0, 0.0) {
        return Err(Error::SingularMode(format!(
            "outgoing mode at the light cone edge (k = omega/c = {:e})",
            omega / C
        )));
    }
    let kz_in = kz(omega, k_in[0].hypot(k_in[1]));
    let phi_f = phi as f64;
    let eps_out = polarization_vector(&AngularMode {
        omega,
        k: k_out,
        pol: pol_out,
        phi,
    });
    let phi_in: i8 = if reflection { -phi } else { phi };
    let eps_in = polarization_vector(&AngularMode {
        omega,
        k: k_in,
        pol: pol_in,
        phi: phi_in,
    });
    let dot = bilinear_dot(&eps_out, &eps_in);
    let transverse_phase = Complex64::i()
        * ((k_in[0] - k_out[0]) * r_a[0] + (k_in[1] - k_out[1]) * r_a[1]);
    let kz_combo = if reflection { kz_out + kz_in } else { kz_out - kz_in };
    let z_phase = -Complex64::i() * phi_f * kz_combo * r_a[2];
    let prefactor = Complex64::i() * omega * omega * alpha / (2.0 * EPS0 * C * C * kz_out);
    Ok(prefactor * dot * (transverse_phase + z_phase).exp())
}
