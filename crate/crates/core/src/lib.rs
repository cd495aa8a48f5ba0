//! Fluctuational electrodynamics for planar geometries.
//!
//! This crate computes Casimir–Lifshitz forces and radiative heat transfer
//! between two parallel planar bodies held at temperatures `T1` and `T2`,
//! immersed in an environmental radiation bath at temperature `T3`, as well
//! as the force on a small polarizable particle facing a planar slab.
//!
//! Two independent computational paths are provided:
//!
//! * **Closed-form spectral path** ([`spectral`], [`atomsurface`]): the
//!   azimuthal and polarization structure of the planar problem is reduced
//!   analytically, leaving one-dimensional integrals over frequency and
//!   transverse wavenumber that are evaluated with adaptive quadrature.
//! * **Discretized mode-space path** ([`modespace`]): plane-wave modes are
//!   sampled on an explicit quadrature grid and all scattering operators
//!   become dense matrices, so every trace formula can be evaluated with
//!   ordinary linear algebra. This path is deliberately redundant — it
//!   exists to validate the closed forms term by term.
//!
//! Sign conventions for reported quantities are documented on the individual
//! functions; in brief, equilibrium and total forces are reported as
//! pressures on body 1 with **negative = attraction toward body 2**, while
//! the nonequilibrium exchange quantities follow the flux bookkeeping
//! (positive heat flux = energy into body 1).

pub mod atomsurface;
pub mod consts;
pub mod error;
pub mod materials;
pub mod modes;
pub mod modespace;
pub mod quadrature;
pub mod scattering;
pub mod spectral;
pub mod thermal;

pub use atomsurface::{
    atom_delta2, atom_delta2_density, atom_eq_force, atom_total_force, AtomConfig,
    AtomForceResult, AtomSpectralDensity, PolarizabilityModel,
};
pub use error::{Error, Result};
pub use materials::DielectricModel;
pub use modes::{AngularMode, Polarization};
pub use modespace::{build_grid, ModeGrid, ModeNode, OperatorMatrix, TraceNorm};
pub use scattering::{SlabBody, SpecularAmplitudes, Thickness};
pub use spectral::{CavityConfig, FluxResult, SpectralPoint};
pub use thermal::TemperatureTriple;
