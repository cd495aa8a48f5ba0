//! Dielectric response models.
//!
//! All models return the relative permittivity ε(ω) at real frequencies,
//! and — where analytic continuation is well defined — ε(iξ) on the positive
//! imaginary axis, which is what equilibrium (Matsubara) calculations need.

use crate::error::{Error, Result};
use num_complex::Complex64;

/// A single Lorentz oscillator: resonance frequency, plasma-like strength,
/// and damping rate, all in rad/s.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LorentzOscillator {
    /// Resonance frequency ω_j in rad/s.
    pub omega_j: f64,
    /// Oscillator strength expressed as a plasma frequency ω_{p,j} in rad/s.
    pub omega_pj: f64,
    /// Damping rate γ_j in rad/s.
    pub gamma_j: f64,
}

/// Dielectric response model of a homogeneous, isotropic, local medium.
#[derive(Debug, Clone, PartialEq)]
pub enum DielectricModel {
    /// Frequency-independent permittivity.
    Constant(Complex64),
    /// Drude metal: ε(ω) = 1 − ω_p²/(ω² + iγω).
    Drude {
        /// Plasma frequency in rad/s.
        omega_p: f64,
        /// Damping rate in rad/s.
        gamma: f64,
    },
    /// Sum of Lorentz oscillators:
    /// ε(ω) = ε_∞ + Σ_j ω_{p,j}²/(ω_j² − ω² − iγ_jω).
    LorentzOscillators {
        /// High-frequency limit ε_∞.
        eps_inf: f64,
        /// The oscillators.
        oscillators: Vec<LorentzOscillator>,
    },
    /// Tabulated permittivity on an ascending frequency grid (rad/s).
    /// Evaluation interpolates real and imaginary parts separately,
    /// linearly in log ω; queries outside the grid are errors.
    Tabulated {
        /// Ascending angular frequencies in rad/s.
        omegas: Vec<f64>,
        /// Permittivity values at those frequencies.
        values: Vec<Complex64>,
    },
    /// Idealized perfect mirror (no microscopic model; handled specially by
    /// the scattering layer).
    PerfectMirror,
}

impl DielectricModel {
    /// Relative permittivity ε(ω) at a real positive frequency.
    ///
    /// # Arguments
    ///
    /// * `omega` - Angular frequency in rad/s (must be positive).
    ///
    /// # Returns
    ///
    /// The complex relative permittivity, or an error for models that do
    /// not define one ([`DielectricModel::PerfectMirror`]) or for queries
    /// outside a tabulated range.
    pub fn permittivity(&self, omega: f64) -> Result<Complex64> {
        if !(omega > 0.0) || !omega.is_finite() {
            return Err(Error::Domain(format!(
                "permittivity requires finite omega > 0, got {omega}"
            )));
        }
        match self {
            DielectricModel::Constant(eps) => Ok(*eps),
            DielectricModel::Drude { omega_p, gamma } => {
                let denom = Complex64::new(omega * omega, gamma * omega);
                Ok(Complex64::new(1.0, 0.0) - omega_p * omega_p / denom)
            }
            DielectricModel::LorentzOscillators { eps_inf, oscillators } => {
                let mut eps = Complex64::new(*eps_inf, 0.0);
                for osc in oscillators {
                    let denom = Complex64::new(
                        osc.omega_j * osc.omega_j - omega * omega,
                        -osc.gamma_j * omega,
                    );
                    eps += osc.omega_pj * osc.omega_pj / denom;
                }
                Ok(eps)
            }
            DielectricModel::Tabulated { omegas, values } => {
                let (first, last) = match (omegas.first(), omegas.last()) {
                    (Some(f), Some(l)) => (*f, *l),
                    _ => {
                        return Err(Error::UnsupportedModel(
                            "empty tabulated model".into(),
                        ))
                    }
                };
                if omega < first || omega > last {
                    return Err(Error::OutOfRange { omega, min: first, max: last });
                }
                // Index of the last grid point <= omega.
                let idx = match omegas
                    .binary_search_by(|probe| probe.partial_cmp(&omega).unwrap())
                {
                    Ok(i) => return Ok(values[i]),
                    Err(i) => i - 1,
                };
                let (w0, w1) = (omegas[idx], omegas[idx + 1]);
                let s = (omega.ln() - w0.ln()) / (w1.ln() - w0.ln());
                let (v0, v1) = (values[idx], values[idx + 1]);
                Ok(Complex64::new(
                    v0.re + s * (v1.re - v0.re),
                    v0.im + s * (v1.im - v0.im),
                ))
            }
            DielectricModel::PerfectMirror => Err(Error::UnsupportedModel(
                "perfect mirror has no permittivity".into(),
            )),
        }
    }

    /// Permittivity ε(iξ) on the positive imaginary frequency axis.
    ///
    /// For causal passive models this is real and ≥ 1 and decreases
    /// monotonically in ξ. Only models with an analytic form support it:
    /// tabulated data and the perfect mirror return
    /// [`Error::UnsupportedModel`], and a [`DielectricModel::Constant`] is
    /// accepted only if it is real with ε ≥ 1 (a genuinely dispersionless
    /// transparent medium, which is its own continuation).
    ///
    /// # Arguments
    ///
    /// * `xi` - Imaginary frequency ξ in rad/s (must be positive).
    pub fn permittivity_imag_axis(&self, xi: f64) -> Result<f64> {
        if !(xi > 0.0) || !xi.is_finite() {
            return Err(Error::Domain(format!(
                "permittivity_imag_axis requires finite xi > 0, got {xi}"
            )));
        }
        match self {
            DielectricModel::Constant(eps) => {
                if eps.im == 0.0 && eps.re >= 1.0 {
                    Ok(eps.re)
                } else {
                    Err(Error::UnsupportedModel(
                        "constant permittivity must be real with eps >= 1 \
                         for imaginary-axis evaluation"
                            .into(),
                    ))
                }
            }
            DielectricModel::Drude { omega_p, gamma } => {
                Ok(1.0 + omega_p * omega_p / (xi * (xi + gamma)))
            }
            DielectricModel::LorentzOscillators { eps_inf, oscillators } => {
                let mut eps = *eps_inf;
                for osc in oscillators {
                    eps += osc.omega_pj * osc.omega_pj
                        / (osc.omega_j * osc.omega_j + xi * xi + osc.gamma_j * xi);
                }
                Ok(eps)
            }
            DielectricModel::Tabulated { .. } => Err(Error::UnsupportedModel(
                "tabulated model has no imaginary-axis continuation".into(),
            )),
            DielectricModel::PerfectMirror => Err(Error::UnsupportedModel(
                "perfect mirror has no permittivity".into(),
            )),
        }
    }

    /// Static limit ε(iξ → 0⁺) of the imaginary-axis permittivity.
    ///
    /// Conductors (Drude) diverge and return `f64::INFINITY`; models without
    /// an imaginary-axis continuation return an error. This limit fixes the
    /// zero-frequency Matsubara term.
    pub fn static_permittivity(&self) -> Result<f64> {
        match self {
            DielectricModel::Constant(eps) => {
                if eps.im == 0.0 && eps.re >= 1.0 {
                    Ok(eps.re)
                } else {
                    Err(Error::UnsupportedModel(
                        "constant permittivity must be real with eps >= 1 \
                         for imaginary-axis evaluation"
                            .into(),
                    ))
                }
            }
            DielectricModel::Drude { .. } => Ok(f64::INFINITY),
            DielectricModel::LorentzOscillators { eps_inf, oscillators } => {
                let mut eps = *eps_inf;
                for osc in oscillators {
                    eps += (osc.omega_pj / osc.omega_j).powi(2);
                }
                Ok(eps)
            }
            DielectricModel::Tabulated { .. } => Err(Error::UnsupportedModel(
                "tabulated model has no imaginary-axis continuation".into(),
            )),
            DielectricModel::PerfectMirror => Err(Error::UnsupportedModel(
                "perfect mirror has no permittivity".into(),
            )),
        }
    }

    /// Named material presets used throughout the examples and tests.
    ///
    /// * `"fused-silica-2osc"` - two-oscillator model of amorphous SiO₂
    ///   capturing the 8.5 µm and 21 µm phonon–polariton bands.
    /// * `"silicon-drude-lorentz"` - silicon with its UV interband
    ///   oscillator plus a weak low-frequency conductivity tail.
    pub fn preset(name: &str) -> Result<DielectricModel> {
        match name {
            "fused-silica-2osc" => Ok(DielectricModel::LorentzOscillators {
                eps_inf: 2.03,
                oscillators: vec![
                    LorentzOscillator {
                        omega_j: 2.07e14,
                        omega_pj: 1.874e14,
                        gamma_j: 1.1e13,
                    },
                    LorentzOscillator {
                        omega_j: 8.97e13,
                        omega_pj: 8.79e13,
                        gamma_j: 7.0e12,
                    },
                ],
            }),
            "silicon-drude-lorentz" => Ok(DielectricModel::LorentzOscillators {
                eps_inf: 1.0,
                oscillators: vec![
                    LorentzOscillator {
                        omega_j: 6.6e15,
                        omega_pj: 2.159e16,
                        gamma_j: 2.0e14,
                    },
                    LorentzOscillator {
                        omega_j: 1.0e12,
                        omega_pj: 1.5e14,
                        gamma_j: 5.0e13,
                    },
                ],
            }),
            other => Err(Error::InvalidConfig(format!(
                "unknown material preset '{other}'"
            ))),
        }
    }
}
