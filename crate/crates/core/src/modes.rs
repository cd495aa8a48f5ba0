//! Plane-wave mode labels and polarization vectors.
//!
//! A mode of the planar problem is labelled by the angular frequency ω, the
//! transverse wavevector **k** = (k_x, k_y), the polarization p ∈ {TE, TM},
//! and the propagation direction φ = ±1 along z. The longitudinal
//! wavenumber is k_z = √(ω²/c² − k²), which is positive real for
//! propagating waves and +iκ for evanescent ones.
//!
//! Polarization vectors follow the transverse-electric/transverse-magnetic
//! decomposition with respect to the z axis. All inner products between
//! polarization vectors in this crate are **bilinear** (no complex
//! conjugation); conjugation enters only through explicitly conjugated
//! amplitudes in correlation functions.

use crate::consts::C;
use num_complex::Complex64;

/// Transverse polarization label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Polarization {
    /// Electric field perpendicular to the plane of incidence.
    TE,
    /// Magnetic field perpendicular to the plane of incidence.
    TM,
}

/// A fully labelled plane-wave mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngularMode {
    /// Angular frequency in rad/s.
    pub omega: f64,
    /// Transverse wavevector (k_x, k_y) in rad/m.
    pub k: [f64; 2],
    /// Polarization.
    pub pol: Polarization,
    /// Propagation direction along z: +1 (toward +z) or −1 (toward −z).
    pub phi: i8,
}

impl AngularMode {
    /// Magnitude of the transverse wavevector.
    pub fn k_norm(&self) -> f64 {
        self.k[0].hypot(self.k[1])
    }

    /// Longitudinal wavenumber of this mode.
    pub fn kz(&self) -> Complex64 {
        kz(self.omega, self.k_norm())
    }

    /// The direction φ as a float (+1.0 or −1.0).
    pub fn phi_f64(&self) -> f64 {
        self.phi as f64
    }
}

/// Longitudinal wavenumber k_z = √(ω²/c² − k²).
///
/// # Arguments
///
/// * `omega` - Angular frequency in rad/s.
/// * `k` - Magnitude of the transverse wavevector in rad/m.
///
/// # Returns
///
/// A purely real non-negative value for propagating modes (k ≤ ω/c) and a
/// purely imaginary value +iκ for evanescent modes (k > ω/c). The two
/// branches are exact: no floating-point dust leaks into the other
/// component.
pub fn kz(omega: f64, k: f64) -> Complex64 {
    let q = omega / C;
    let disc = (q - k) * (q + k);
    if disc >= 0.0 {
        Complex64::new(disc.sqrt(), 0.0)
    } else {
        Complex64::new(0.0, (-disc).sqrt())
    }
}

/// Unit vector along the transverse wavevector, with the convention that
/// k = 0 maps to x̂ (the normal-incidence modes need a fixed basis).
fn k_hat(k: [f64; 2]) -> (f64, f64) {
    let norm = k[0].hypot(k[1]);
    if norm == 0.0 {
        (1.0, 0.0)
    } else {
        (k[0] / norm, k[1] / norm)
    }
}

/// Polarization vector ε̂_p^φ(**k**) of a mode.
///
/// TE: ε̂ = ẑ × k̂ = (−sinθ, cosθ, 0), independent of φ.
/// TM: ε̂ = (c/ω)(φ·k_z·cosθ, φ·k_z·sinθ, −k), which satisfies the exact
/// bilinear normalization ε̂·ε̂ = 1 for both propagating and evanescent
/// modes.
///
/// # Arguments
///
/// * `mode` - The mode; its `omega` must be positive.
///
/// # Returns
///
/// The three Cartesian components as complex numbers (TE components are
/// real; TM components are complex for evanescent modes).
pub fn polarization_vector(mode: &AngularMode) -> [Complex64; 3] {
    let (cos_t, sin_t) = k_hat(mode.k);
    match mode.pol {
        Polarization::TE => [
            Complex64::new(-sin_t, 0.0),
            Complex64::new(cos_t, 0.0),
            Complex64::new(0.0, 0.0),
        ],
        Polarization::TM => {
            let kz = mode.kz();
            let phi = mode.phi_f64();
            let scale = C / mode.omega;
            [
                kz * (phi * cos_t * scale),
                kz * (phi * sin_t * scale),
                Complex64::new(-mode.k_norm() * scale, 0.0),
            ]
        }
    }
}

/// Both polarization vectors (TE, TM) of a wavevector/direction pair.
///
/// # Arguments
///
/// * `omega` - Angular frequency in rad/s.
/// * `k` - Transverse wavevector in rad/m.
/// * `phi` - Propagation direction (+1 or −1).
pub fn polarization_vectors(
    omega: f64,
    k: [f64; 2],
    phi: i8,
) -> ([Complex64; 3], [Complex64; 3]) {
    let te = polarization_vector(&AngularMode { omega, k, pol: Polarization::TE, phi });
    let tm = polarization_vector(&AngularMode { omega, k, pol: Polarization::TM, phi });
    (te, tm)
}

/// Bilinear dot product a·b = Σᵢ aᵢbᵢ (no conjugation).
pub fn bilinear_dot(a: &[Complex64; 3], b: &[Complex64; 3]) -> Complex64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}
