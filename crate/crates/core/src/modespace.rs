//! Discretized mode-space path: scattering operators as dense matrices.
//!
//! This module samples the transverse-wavevector plane on an explicit
//! quadrature grid at one fixed frequency and represents every scattering
//! operator, field correlator and trace formula of the planar problem with
//! ordinary dense linear algebra. Nothing here is reduced analytically: the
//! cavity is solved by matrix inversion, fluxes are quadratic forms in the
//! correlator blocks, and the exchange traces evaluate the operator
//! expressions term by term. The module exists to validate the closed-form
//! spectral path ([`crate::spectral`], [`crate::atomsurface`]) — and to
//! handle the point-scatterer operators, which are not diagonal in the
//! mode basis.
//!
//! # Conventions
//!
//! * **Grid weights** are plain d²k quadrature weights (rad²/m² per node);
//!   summing the weights of one polarization over the propagating panel
//!   recovers the area π(ω/c)² of the propagating disc.
//! * **Operator entries** are the raw kernels ⟨p k|S|p′ k′⟩ of the
//!   continuum operators. A Dirac δ²(k − k′)δ_pp′ discretizes to 1/wᵢ on
//!   the diagonal, so the identity operator is diag(1/wᵢ) and an operator
//!   that multiplies each mode by sᵢ is diag(sᵢ/wᵢ). Point-scatterer
//!   entries are the smooth element formula evaluated at the node pair,
//!   with no weight factors. Operators compose as A·diag(w)·B.
//! * **Traces** come in two normalizations ([`TraceNorm`]): `PerArea`
//!   accumulates Σᵢ wᵢ² Mᵢᵢ and corresponds to a trace per unit surface
//!   area times (2π)², matching Σᵢ wᵢ · (spectral density at node i);
//!   `Absolute` accumulates Σᵢ wᵢ Mᵢᵢ and is (2π)² times the absolute
//!   operator trace, the form needed for a localized scatterer.
//! * Internally all heavy algebra runs in the similarity-scaled
//!   representation Ŝ = W^{1/2} S W^{1/2} (W = diag(wᵢ)), in which
//!   diagonal operators carry their plain mode values, products are plain
//!   matrix products, and both trace normalizations become weighted
//!   diagonal sums. Public matrices are always in the raw convention.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::consts::{C, EPS0, HBAR};
use crate::error::{Error, Result};
use crate::modes::{kz, polarization_vector, AngularMode, Polarization};
use crate::scattering::{
    atom_reflection_element, atom_transmission_element, slab_amplitudes, SlabBody,
    SpecularAmplitudes,
};
use crate::thermal::{n_diff, n_sym, TemperatureTriple};

/// Dense complex operator storage.
pub type CMat = DMatrix<Complex64>;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

// --------------------------------------------------------------------------
// Quadrature grid
// --------------------------------------------------------------------------

/// Gauss–Legendre nodes and weights on [−1, 1].
///
/// Newton iteration on the Legendre recurrence; standard and exact to
/// rounding for the modest orders used here.
fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Asymptotic initial guess for the i-th root of P_n.
        let mut t = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // Evaluate P_n(t) and P_n'(t) by upward recurrence.
            let mut p0 = 1.0;
            let mut p1 = t;
            for j in 2..=n {
                let p2 = ((2 * j - 1) as f64 * t * p1 - (j - 1) as f64 * p0) / j as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (t * p1 - p0) / (t * t - 1.0);
            let dt = p1 / dp;
            t -= dt;
            if dt.abs() < 1e-15 {
                break;
            }
        }
        x[i] = -t;
        x[n - 1 - i] = t;
        let wi = 2.0 / ((1.0 - t * t) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

/// One node of a [`ModeGrid`]: a transverse wavevector, a polarization and
/// a plain d²k quadrature weight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeNode {
    /// Transverse wavevector (k_x, k_y) in rad/m.
    pub k: [f64; 2],
    /// Magnitude of the transverse wavevector.
    pub k_norm: f64,
    /// Polarization label.
    pub pol: Polarization,
    /// Longitudinal wavenumber at the grid frequency (real or +iκ).
    pub kz: Complex64,
    /// Plain d²k quadrature weight in rad²/m².
    pub weight: f64,
    /// Whether the node lies inside the light cone (k < ω/c).
    pub propagating: bool,
}

/// A fixed-frequency quadrature grid over the transverse-wavevector plane.
///
/// Nodes are ordered wavevector-major with the polarization innermost:
/// node `2j` is the TE member and node `2j + 1` the TM member of the same
/// wavevector sample, sharing the weight and the sector. Propagating
/// samples precede evanescent ones.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeGrid {
    /// Angular frequency in rad/s.
    pub omega: f64,
    /// Outer radius of the sampled disc in rad/m.
    pub k_max: f64,
    /// The nodes, both polarizations and both sectors.
    pub nodes: Vec<ModeNode>,
}

impl ModeGrid {
    /// Number of nodes (matrix dimension of the operators).
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    /// Whether the grid has no nodes.
    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// The fully labelled mode of node `i` travelling in direction `phi`.
    pub fn angular_mode(&self, i: usize, phi: i8) -> AngularMode {
        AngularMode {
            omega: self.omega,
            k: self.nodes[i].k,
            pol: self.nodes[i].pol,
            phi,
        }
    }
}

/// Builds a quadrature grid for one frequency.
///
/// The radial direction is split evenly between the two sectors: the
/// propagating half samples k_z ∈ (0, ω/c) and the evanescent half samples
/// κ ∈ (0, √(k_max² − ω²/c²)), each with Gauss–Legendre nodes and the
/// exact Jacobian of the k dk measure (k dk = k_z dk_z = κ dκ). The
/// angular direction is a midpoint rule, exact for the azimuthally
/// symmetric planar problem. Each wavevector sample carries both
/// polarizations with the same weight.
///
/// # Arguments
///
/// * `omega` - Angular frequency in rad/s (> 0).
/// * `k_max` - Outer radius of the sampled disc (> ω/c).
/// * `n_radial` - Total radial samples; even and ≥ 2 (half per sector).
/// * `n_angular` - Angular samples (≥ 1).
///
/// # Returns
///
/// A grid with `n_radial · n_angular · 2` nodes.
pub fn build_grid(omega: f64, k_max: f64, n_radial: usize, n_angular: usize) -> Result<ModeGrid> {
    if !(omega > 0.0) || !omega.is_finite() {
        return Err(Error::Domain(format!(
            "grid frequency must be positive and finite, got {omega}"
        )));
    }
    let q = omega / C;
    if !(k_max > q) || !k_max.is_finite() {
        return Err(Error::Domain(format!(
            "k_max must exceed the light-cone radius omega/c = {q:e}, got {k_max:e}"
        )));
    }
    if n_radial < 2 || n_radial % 2 != 0 {
        return Err(Error::Domain(format!(
            "n_radial must be even and at least 2, got {n_radial}"
        )));
    }
    if n_angular == 0 {
        return Err(Error::Domain("n_angular must be at least 1".into()));
    }

    let half = n_radial / 2;
    let (t, wgl) = gauss_legendre(half);
    let kappa_cap = ((k_max - q) * (k_max + q)).sqrt();

    // (k_norm, radial weight, propagating) per radial sample.
    let mut radial = Vec::with_capacity(n_radial);
    for j in 0..half {
        // Propagating sector, parametrized by k_z: k dk = k_z dk_z.
        let kzv = 0.5 * q * (1.0 + t[j]);
        let k = ((q - kzv) * (q + kzv)).sqrt();
        radial.push((k, 0.5 * q * wgl[j] * kzv, true));
    }
    for j in 0..half {
        // Evanescent sector, parametrized by κ: k dk = κ dκ.
        let kv = 0.5 * kappa_cap * (1.0 + t[j]);
        let k = q.hypot(kv);
        radial.push((k, 0.5 * kappa_cap * wgl[j] * kv, false));
    }

    let d_theta = 2.0 * std::f64::consts::PI / n_angular as f64;
    let mut nodes = Vec::with_capacity(n_radial * n_angular * 2);
    for &(k, w_rad, propagating) in &radial {
        for a in 0..n_angular {
            let theta = (a as f64 + 0.5) * d_theta;
            let kvec = [k * theta.cos(), k * theta.sin()];
            let kz_c = kz(omega, k);
            for pol in [Polarization::TE, Polarization::TM] {
                nodes.push(ModeNode {
                    k: kvec,
                    k_norm: k,
                    pol,
                    kz: kz_c,
                    weight: w_rad * d_theta,
                    propagating,
                });
            }
        }
    }
    Ok(ModeGrid { omega, k_max, nodes })
}

// --------------------------------------------------------------------------
// Operators in the raw kernel convention
// --------------------------------------------------------------------------

/// A dense operator on a [`ModeGrid`], stored as raw kernels
/// ⟨pᵢ kᵢ|S|pⱼ kⱼ⟩ (see the module docs for the δ-normalization).
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    /// The kernel values; row = outgoing node, column = incoming node.
    pub matrix: CMat,
}

impl OperatorMatrix {
    /// The adjoint operator (conjugate transpose of the kernel).
    pub fn adjoint(&self) -> Self {
        Self { matrix: self.matrix.adjoint() }
    }
}

/// The identity operator: diag(1/wᵢ) in the raw convention.
pub fn identity_operator(grid: &ModeGrid) -> OperatorMatrix {
    diagonal_operator(grid, |_| ONE)
}

/// An operator that is diagonal in the mode basis, multiplying mode `i`
/// by `values(node_i)`. Its raw kernel is diag(sᵢ/wᵢ).
///
/// # Arguments
///
/// * `grid` - The mode grid.
/// * `values` - The per-mode multiplier sᵢ.
pub fn diagonal_operator(grid: &ModeGrid, values: impl Fn(&ModeNode) -> Complex64) -> OperatorMatrix {
    let n = grid.len();
    let mut m = CMat::zeros(n, n);
    for (i, node) in grid.nodes.iter().enumerate() {
        m[(i, i)] = values(node) / node.weight;
    }
    OperatorMatrix { matrix: m }
}

/// Composition A∘B of two operators in the raw convention: A·diag(w)·B.
pub fn compose(grid: &ModeGrid, a: &OperatorMatrix, b: &OperatorMatrix) -> OperatorMatrix {
    let w: Vec<Complex64> = grid.nodes.iter().map(|n| Complex64::new(n.weight, 0.0)).collect();
    OperatorMatrix { matrix: scale_cols(&a.matrix, &w) * &b.matrix }
}

/// Which point-scatterer operator to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AtomOperatorKind {
    /// The reflection operator (incoming direction −φ, outgoing φ).
    Reflection,
    /// The transmission correction (incoming and outgoing direction φ;
    /// the free-propagation identity is **not** included).
    ModifiedTransmission,
}

/// The dense operator of a point scatterer of polarizability `alpha` at
/// position `r_a`, for outgoing direction `phi`.
///
/// Entries are the smooth element formula evaluated at each node pair —
/// raw kernels with no weight factors, exactly as the δ-normalization of
/// the module prescribes. A vanishing polarizability yields the zero
/// operator.
///
/// # Arguments
///
/// * `grid` - The mode grid.
/// * `alpha` - Polarizability (SI units, C·m²/V) at the grid frequency.
/// * `r_a` - Scatterer position in meters.
/// * `phi` - Outgoing direction, +1 or −1.
/// * `kind` - Reflection or transmission-correction operator.
pub fn atom_operator(
    grid: &ModeGrid,
    alpha: Complex64,
    r_a: [f64; 3],
    phi: i8,
    kind: AtomOperatorKind,
) -> Result<OperatorMatrix> {
    if phi != 1 && phi != -1 {
        return Err(Error::Domain(format!("phi must be +1 or -1, got {phi}")));
    }
    let n = grid.len();
    let mut m = CMat::zeros(n, n);
    for j in 0..n {
        let nj = &grid.nodes[j];
        for i in 0..n {
            let ni = &grid.nodes[i];
            let element = match kind {
                AtomOperatorKind::Reflection => atom_reflection_element(
                    grid.omega, alpha, ni.k, ni.pol, nj.k, nj.pol, phi, r_a,
                )?,
                AtomOperatorKind::ModifiedTransmission => atom_transmission_element(
                    grid.omega, alpha, ni.k, ni.pol, nj.k, nj.pol, phi, r_a,
                )?,
            };
            m[(i, j)] = element;
        }
    }
    Ok(OperatorMatrix { matrix: m })
}

// --------------------------------------------------------------------------
// Bodies
// --------------------------------------------------------------------------

/// The four scattering operators of one body, referenced to the z = 0
/// plane of the global frame.
#[derive(Debug, Clone, PartialEq)]
pub struct BodyOperators {
    /// Reflection into +z (illumination from above… from below): R^+.
    pub r_plus: OperatorMatrix,
    /// Reflection into −z: R^−.
    pub r_minus: OperatorMatrix,
    /// Transmission upward: T^+.
    pub t_plus: OperatorMatrix,
    /// Transmission downward: T^−.
    pub t_minus: OperatorMatrix,
}

/// Body operators of a specular (in-plane translation invariant) body
/// whose amplitudes are supplied per mode, displaced to height `z0`.
///
/// Displacement multiplies the reflection kernels by e^{−2iφ k_z z0} and
/// leaves transmission unchanged.
///
/// # Arguments
///
/// * `grid` - The mode grid.
/// * `z0` - Height of the body's reference face in meters.
/// * `amps` - Face-referenced amplitudes per node.
pub fn specular_body_operators(
    grid: &ModeGrid,
    z0: f64,
    amps: impl Fn(&ModeNode) -> Result<SpecularAmplitudes>,
) -> Result<BodyOperators> {
    let n = grid.len();
    let mut rp = CMat::zeros(n, n);
    let mut rm = CMat::zeros(n, n);
    let mut tp = CMat::zeros(n, n);
    let mut tm = CMat::zeros(n, n);
    for (i, node) in grid.nodes.iter().enumerate() {
        let a = amps(node)?;
        let inv_w = 1.0 / node.weight;
        let phase_up = (Complex64::i() * node.kz * (-2.0 * z0)).exp();
        let phase_down = (Complex64::i() * node.kz * (2.0 * z0)).exp();
        rp[(i, i)] = a.rho_plus * phase_up * inv_w;
        rm[(i, i)] = a.rho_minus * phase_down * inv_w;
        tp[(i, i)] = a.tau * inv_w;
        tm[(i, i)] = a.tau * inv_w;
    }
    Ok(BodyOperators {
        r_plus: OperatorMatrix { matrix: rp },
        r_minus: OperatorMatrix { matrix: rm },
        t_plus: OperatorMatrix { matrix: tp },
        t_minus: OperatorMatrix { matrix: tm },
    })
}

/// Body operators of a layered slab at height `z0`.
///
/// # Arguments
///
/// * `grid` - The mode grid.
/// * `body` - The slab (thickness and material).
/// * `z0` - Height of the slab's lower face in meters.
pub fn slab_body_operators(grid: &ModeGrid, body: &SlabBody, z0: f64) -> Result<BodyOperators> {
    specular_body_operators(grid, z0, |node| {
        slab_amplitudes(body, grid.omega, node.k_norm, node.pol)
    })
}

/// Body operators of a fully transparent body (R = 0, T = identity).
pub fn transparent_body_operators(grid: &ModeGrid) -> BodyOperators {
    let zero = OperatorMatrix { matrix: CMat::zeros(grid.len(), grid.len()) };
    let id = identity_operator(grid);
    BodyOperators {
        r_plus: zero.clone(),
        r_minus: zero,
        t_plus: id.clone(),
        t_minus: id,
    }
}

/// Body operators of a point scatterer at `r_a`: reflection operators for
/// both directions and transmission = identity + correction.
///
/// # Arguments
///
/// * `grid` - The mode grid.
/// * `alpha` - Polarizability (SI) at the grid frequency.
/// * `r_a` - Scatterer position in meters.
pub fn atom_body_operators(
    grid: &ModeGrid,
    alpha: Complex64,
    r_a: [f64; 3],
) -> Result<BodyOperators> {
    let id = identity_operator(grid);
    let r_plus = atom_operator(grid, alpha, r_a, 1, AtomOperatorKind::Reflection)?;
    let r_minus = atom_operator(grid, alpha, r_a, -1, AtomOperatorKind::Reflection)?;
    let t_plus = OperatorMatrix {
        matrix: &id.matrix
            + atom_operator(grid, alpha, r_a, 1, AtomOperatorKind::ModifiedTransmission)?.matrix,
    };
    let t_minus = OperatorMatrix {
        matrix: &id.matrix
            + atom_operator(grid, alpha, r_a, -1, AtomOperatorKind::ModifiedTransmission)?.matrix,
    };
    Ok(BodyOperators { r_plus, r_minus, t_plus, t_minus })
}

// --------------------------------------------------------------------------
// Scaled-representation helpers (internal)
// --------------------------------------------------------------------------

fn sqrt_weights(grid: &ModeGrid) -> Vec<f64> {
    grid.nodes.iter().map(|n| n.weight.sqrt()).collect()
}

/// Raw kernel matrix → scaled representation W^{1/2} M W^{1/2}.
fn to_scaled(grid: &ModeGrid, op: &OperatorMatrix) -> CMat {
    let s = sqrt_weights(grid);
    let n = grid.len();
    CMat::from_fn(n, n, |i, j| op.matrix[(i, j)] * (s[i] * s[j]))
}

/// Scaled representation → raw kernel matrix.
fn from_scaled(grid: &ModeGrid, m: &CMat) -> CMat {
    let s = sqrt_weights(grid);
    let n = grid.len();
    CMat::from_fn(n, n, |i, j| m[(i, j)] / (s[i] * s[j]))
}

/// diag(d) · M (rows scaled).
fn scale_rows(d: &[Complex64], m: &CMat) -> CMat {
    let mut out = m.clone();
    for j in 0..out.ncols() {
        for i in 0..out.nrows() {
            out[(i, j)] *= d[i];
        }
    }
    out
}

/// M · diag(d) (columns scaled).
fn scale_cols(m: &CMat, d: &[Complex64]) -> CMat {
    let mut out = m.clone();
    for j in 0..out.ncols() {
        let dj = d[j];
        for i in 0..out.nrows() {
            out[(i, j)] *= dj;
        }
    }
    out
}

fn diag_mat(d: &[Complex64]) -> CMat {
    let n = d.len();
    let mut m = CMat::zeros(n, n);
    for i in 0..n {
        m[(i, i)] = d[i];
    }
    m
}

fn inverse_or_resonance(m: CMat, label: &str) -> Result<CMat> {
    m.try_inverse()
        .ok_or_else(|| Error::Resonance(format!("{label} is not invertible on this grid")))
}

/// Trace weights μᵢ for a normalization, applied to scaled-representation
/// diagonals.
fn trace_weights(grid: &ModeGrid, norm: TraceNorm) -> Vec<f64> {
    match norm {
        TraceNorm::PerArea => grid.nodes.iter().map(|n| n.weight).collect(),
        TraceNorm::Absolute => vec![1.0; grid.len()],
    }
}

/// Σᵢⱼ μᵢ · Aᵢⱼ · Bⱼᵢ — the μ-weighted trace of A·B without forming the
/// product.
fn trace_pair(mu: &[f64], a: &CMat, b: &CMat) -> Complex64 {
    let n = mu.len();
    let mut acc = ZERO;
    for i in 0..n {
        let mut s = ZERO;
        for j in 0..n {
            s += a[(i, j)] * b[(j, i)];
        }
        acc += s * mu[i];
    }
    acc
}

fn check_dim(grid: &ModeGrid, m: &CMat, what: &str) -> Result<()> {
    if m.nrows() != grid.len() || m.ncols() != grid.len() {
        return Err(Error::Domain(format!(
            "{what} is {}x{} but the grid has {} nodes",
            m.nrows(),
            m.ncols(),
            grid.len()
        )));
    }
    Ok(())
}

/// The per-direction mode-density diagonals, in the scaled representation:
/// P_m^pw carries k_z^m on propagating nodes, P_m^ew carries (iκ)^m on
/// evanescent ones (each zero on the other sector).
fn sector_powers(grid: &ModeGrid, m: i32) -> (Vec<Complex64>, Vec<Complex64>) {
    let pw = grid
        .nodes
        .iter()
        .map(|n| if n.propagating { n.kz.powi(m) } else { ZERO })
        .collect();
    let ew = grid
        .nodes
        .iter()
        .map(|n| if n.propagating { ZERO } else { n.kz.powi(m) })
        .collect();
    (pw, ew)
}

// --------------------------------------------------------------------------
// Correlators
// --------------------------------------------------------------------------

/// The three correlator blocks of one region or one source:
/// C^{++}, C^{−−} and C^{+−} (the (−,+) block is the adjoint of C^{+−}).
/// Matrices are in the raw kernel convention.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelatorBlocks {
    /// ⟨E⁺ E⁺†⟩ block.
    pub pp: CMat,
    /// ⟨E⁻ E⁻†⟩ block.
    pub mm: CMat,
    /// ⟨E⁺ E⁻†⟩ block.
    pub pm: CMat,
}

/// The solved field correlators of the three regions of the two-body
/// stack: A (below body 1), B (the gap) and C (above body 2).
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelatorSet {
    /// Gap width (body 2's reference height) in meters.
    pub d: f64,
    /// Region A, z ≤ 0.
    pub region_a: CorrelatorBlocks,
    /// Region B, 0 ≤ z ≤ d.
    pub region_b: CorrelatorBlocks,
    /// Region C, z ≥ d.
    pub region_c: CorrelatorBlocks,
}

/// The environmental radiation correlator at temperature `t3`: an
/// operator diagonal carrying (ω/2ε₀c²)·N(ω,T₃)·Re(1/k_z) — nonzero on
/// propagating nodes only, and identical for both directions φ.
///
/// # Arguments
///
/// * `grid` - The mode grid.
/// * `t3` - Environment temperature in K (≥ 0).
pub fn env_correlator(grid: &ModeGrid, t3: f64) -> Result<OperatorMatrix> {
    if !(t3 >= 0.0) || !t3.is_finite() {
        return Err(Error::Domain(format!("temperature must be ≥ 0, got {t3}")));
    }
    let pref = grid.omega / (2.0 * EPS0 * C * C) * n_sym(grid.omega, t3);
    Ok(diagonal_operator(grid, |node| {
        if node.propagating {
            Complex64::new(pref / node.kz.re, 0.0)
        } else {
            ZERO
        }
    }))
}

/// Scaled-representation environment diagonal (the per-mode density).
fn env_diag_scaled(grid: &ModeGrid, t3: f64) -> Vec<Complex64> {
    let pref = grid.omega / (2.0 * EPS0 * C * C) * n_sym(grid.omega, t3);
    grid.nodes
        .iter()
        .map(|n| {
            if n.propagating {
                Complex64::new(pref / n.kz.re, 0.0)
            } else {
                ZERO
            }
        })
        .collect()
}

struct ScaledBody {
    rp: CMat,
    rm: CMat,
    tp: CMat,
    tm: CMat,
}

fn scaled_body(grid: &ModeGrid, ops: &BodyOperators) -> Result<ScaledBody> {
    check_dim(grid, &ops.r_plus.matrix, "R+")?;
    check_dim(grid, &ops.r_minus.matrix, "R-")?;
    check_dim(grid, &ops.t_plus.matrix, "T+")?;
    check_dim(grid, &ops.t_minus.matrix, "T-")?;
    Ok(ScaledBody {
        rp: to_scaled(grid, &ops.r_plus),
        rm: to_scaled(grid, &ops.r_minus),
        tp: to_scaled(grid, &ops.t_plus),
        tm: to_scaled(grid, &ops.t_minus),
    })
}

/// Emission correlator blocks of one body at temperature `t`, in the
/// scaled representation.
fn emission_blocks_scaled(grid: &ModeGrid, b: &ScaledBody, t: f64) -> CorrelatorBlocks {
    let pref = Complex64::new(grid.omega / (2.0 * EPS0 * C * C) * n_sym(grid.omega, t), 0.0);
    let (p_pw, p_ew) = sector_powers(grid, -1);

    let rph = b.rp.adjoint();
    let rmh = b.rm.adjoint();
    let tph = b.tp.adjoint();
    let tmh = b.tm.adjoint();

    // Same-direction blocks: P − R P R† − T P T† + R P^ew − P^ew R†.
    let mut pp = diag_mat(&p_pw);
    pp -= scale_cols(&b.rp, &p_pw) * &rph;
    pp -= scale_cols(&b.tp, &p_pw) * &tph;
    pp += scale_cols(&b.rp, &p_ew);
    pp -= scale_rows(&p_ew, &rph);

    let mut mm = diag_mat(&p_pw);
    mm -= scale_cols(&b.rm, &p_pw) * &rmh;
    mm -= scale_cols(&b.tm, &p_pw) * &tmh;
    mm += scale_cols(&b.rm, &p_ew);
    mm -= scale_rows(&p_ew, &rmh);

    // Opposite-direction block: −R⁺ P T⁻† − T⁺ P R⁻† + T⁺ P^ew − P^ew T⁻†.
    let mut pm = CMat::zeros(grid.len(), grid.len());
    pm -= scale_cols(&b.rp, &p_pw) * &tmh;
    pm -= scale_cols(&b.tp, &p_pw) * &rmh;
    pm += scale_cols(&b.tp, &p_ew);
    pm -= scale_rows(&p_ew, &tmh);

    CorrelatorBlocks { pp: pp * pref, mm: mm * pref, pm: pm * pref }
}

/// Emission correlator blocks of one body at temperature `t`, in the raw
/// kernel convention.
///
/// The same-direction blocks carry the absorptivity structure
/// P₋₁ − R P₋₁ R† − T P₋₁ T† (+ evanescent terms); the opposite-direction
/// block pairs the two outgoing sides of the body.
///
/// # Arguments
///
/// * `grid` - The mode grid.
/// * `ops` - The body's scattering operators.
/// * `t` - Body temperature in K (≥ 0).
pub fn emission_correlators(
    grid: &ModeGrid,
    ops: &BodyOperators,
    t: f64,
) -> Result<CorrelatorBlocks> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::Domain(format!("temperature must be ≥ 0, got {t}")));
    }
    let b = scaled_body(grid, ops)?;
    let blocks = emission_blocks_scaled(grid, &b, t);
    Ok(CorrelatorBlocks {
        pp: from_scaled(grid, &blocks.pp),
        mm: from_scaled(grid, &blocks.mm),
        pm: from_scaled(grid, &blocks.pm),
    })
}

/// Solves the field correlators of all three regions of the two-body
/// stack.
///
/// Body 1 sits at z ≈ 0 and body 2 at z ≈ d (its operators must already
/// carry the displacement phases, e.g. via [`slab_body_operators`] with
/// `z0 = d`). The gap field is the multiple-scattering dressing of the two
/// bodies' emission plus the environment transmitted into the gap; the
/// outer regions combine direct emission, transmitted gap field and the
/// reflected environment. A singular cavity round trip reports
/// [`Error::Resonance`].
///
/// # Arguments
///
/// * `grid` - The mode grid.
/// * `ops1` - Body 1 operators (referenced to z = 0).
/// * `ops2` - Body 2 operators (displaced to z = d).
/// * `temps` - Temperatures (T1, T2, T3).
/// * `d` - Gap width in meters (> 0).
pub fn solve_region_fields(
    grid: &ModeGrid,
    ops1: &BodyOperators,
    ops2: &BodyOperators,
    temps: &TemperatureTriple,
    d: f64,
) -> Result<CorrelatorSet> {
    if !(d > 0.0) || !d.is_finite() {
        return Err(Error::Domain(format!("gap width must be positive, got {d}")));
    }
    let b1 = scaled_body(grid, ops1)?;
    let b2 = scaled_body(grid, ops2)?;
    let n = grid.len();

    let c1 = emission_blocks_scaled(grid, &b1, temps.t1);
    let c2 = emission_blocks_scaled(grid, &b2, temps.t2);
    let c3 = env_diag_scaled(grid, temps.t3);

    // Upward and downward source correlators feeding the gap.
    let sig1 = &c1.pp + scale_cols(&b1.tp, &c3) * b1.tp.adjoint();
    let sig2 = &c2.mm + scale_cols(&b2.tm, &c3) * b2.tm.adjoint();

    let id = CMat::identity(n, n);
    let u12 = inverse_or_resonance(&id - &b1.rp * &b2.rm, "1 - R1+ R2-")?;
    let u21 = inverse_or_resonance(&id - &b2.rm * &b1.rp, "1 - R2- R1+")?;
    let u12h = u12.adjoint();
    let u21h = u21.adjoint();

    // Region B (the gap).
    let r1_sig2 = &b1.rp * &sig2;
    let core_pp = &sig1 + &r1_sig2 * b1.rp.adjoint();
    let b_pp = &u12 * &core_pp * &u12h;
    let core_mm = &sig2 + &b2.rm * &sig1 * b2.rm.adjoint();
    let b_mm = &u21 * &core_mm * &u21h;
    let core_pm = &sig1 * b2.rm.adjoint() + &r1_sig2;
    let b_pm = &u12 * &core_pm * &u21h;

    // Region A (below body 1): E⁻ = E1⁻ + M1 E1⁺ + Z Σ2-fields + G E3⁺,
    // with M1 = T1⁻ U21 R2⁻, Z = T1⁻ U21, G = R1⁻ + M1 T1⁺.
    let z_op = &b1.tm * &u21;
    let m1 = &z_op * &b2.rm;
    let g = &b1.rm + &m1 * &b1.tp;
    let c1mp = c1.pm.adjoint();
    let mut a_mm = &c1.mm + &c1mp * m1.adjoint();
    a_mm += &m1 * &c1.pm;
    a_mm += &m1 * &c1.pp * m1.adjoint();
    a_mm += scale_cols(&g, &c3) * g.adjoint();
    a_mm += &z_op * &sig2 * z_op.adjoint();
    let a_pp = diag_mat(&c3);
    let a_pm = scale_rows(&c3, &g.adjoint());

    // Region C (above body 2), mirrored: E⁺ = E2⁺ + M2 E2⁻ + Y Σ1-fields
    // + G2 E3⁻, with M2 = T2⁺ U12 R1⁺, Y = T2⁺ U12, G2 = R2⁺ + M2 T2⁻.
    let y_op = &b2.tp * &u12;
    let m2 = &y_op * &b1.rp;
    let g2 = &b2.rp + &m2 * &b2.tm;
    let c2mp = c2.pm.adjoint();
    let mut c_pp = &c2.pp + &c2.pm * m2.adjoint();
    c_pp += &m2 * &c2mp;
    c_pp += &m2 * &c2.mm * m2.adjoint();
    c_pp += scale_cols(&g2, &c3) * g2.adjoint();
    c_pp += &y_op * &sig1 * y_op.adjoint();
    let c_mm = diag_mat(&c3);
    let c_pm = scale_cols(&g2, &c3);

    Ok(CorrelatorSet {
        d,
        region_a: CorrelatorBlocks {
            pp: from_scaled(grid, &a_pp),
            mm: from_scaled(grid, &a_mm),
            pm: from_scaled(grid, &a_pm),
        },
        region_b: CorrelatorBlocks {
            pp: from_scaled(grid, &b_pp),
            mm: from_scaled(grid, &b_mm),
            pm: from_scaled(grid, &b_pm),
        },
        region_c: CorrelatorBlocks {
            pp: from_scaled(grid, &c_pp),
            mm: from_scaled(grid, &c_mm),
            pm: from_scaled(grid, &c_pm),
        },
    })
}

// --------------------------------------------------------------------------
// Fluxes
// --------------------------------------------------------------------------

/// The three regions of the planar stack.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    /// Below body 1 (z ≤ 0).
    A,
    /// The gap (0 ≤ z ≤ d).
    B,
    /// Above body 2 (z ≥ d).
    C,
}

/// Which flux density to evaluate at a plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FluxComponent {
    /// Momentum flux T_xz (shear) in Pa.
    X,
    /// Momentum flux T_yz (shear) in Pa.
    Y,
    /// Momentum flux T_zz (normal) in Pa; negative for free radiation.
    Z,
    /// Energy flux ⟨S_z⟩ in W/m².
    Heat,
}

/// Kernel of one (p, φ) × (p′, φ′) pairing in the flux quadratic form.
///
/// Computed directly from the polarization and wave vectors: the electric
/// part uses ε̂, the magnetic part the vector K × ε̂ (K = (k, φk_z)), and
/// the primed factors are conjugated.
fn pairing_kernel(
    component: FluxComponent,
    omega: f64,
    kvec: [f64; 2],
    kz_c: Complex64,
    pol_a: Polarization,
    phi_a: i8,
    pol_b: Polarization,
    phi_b: i8,
) -> Complex64 {
    let e_a = polarization_vector(&AngularMode { omega, k: kvec, pol: pol_a, phi: phi_a });
    let e_b = polarization_vector(&AngularMode { omega, k: kvec, pol: pol_b, phi: phi_b });
    let kv_a = [
        Complex64::new(kvec[0], 0.0),
        Complex64::new(kvec[1], 0.0),
        kz_c * phi_a as f64,
    ];
    let kv_b = [
        Complex64::new(kvec[0], 0.0),
        Complex64::new(kvec[1], 0.0),
        kz_c * phi_b as f64,
    ];
    let cross = |u: &[Complex64; 3], v: &[Complex64; 3]| -> [Complex64; 3] {
        [
            u[1] * v[2] - u[2] * v[1],
            u[2] * v[0] - u[0] * v[2],
            u[0] * v[1] - u[1] * v[0],
        ]
    };
    let b_a = cross(&kv_a, &e_a);
    let b_b = cross(&kv_b, &e_b);
    let eb = [e_b[0].conj(), e_b[1].conj(), e_b[2].conj()];
    let bb = [b_b[0].conj(), b_b[1].conj(), b_b[2].conj()];
    let dot = |u: &[Complex64; 3], v: &[Complex64; 3]| u[0] * v[0] + u[1] * v[1] + u[2] * v[2];
    let c2_w2 = C * C / (omega * omega);
    match component {
        FluxComponent::Heat => {
            // 2ε₀c²/ω · [ε̂ × (K′ × ε̂′)*]_z
            (e_a[0] * bb[1] - e_a[1] * bb[0]) * (2.0 * EPS0 * C * C / omega)
        }
        FluxComponent::Z => {
            (e_a[2] * eb[2] - 0.5 * dot(&e_a, &eb)
                + (b_a[2] * bb[2] - 0.5 * dot(&b_a, &bb)) * c2_w2)
                * (2.0 * EPS0)
        }
        FluxComponent::X => (e_a[0] * eb[2] + b_a[0] * bb[2] * c2_w2) * (2.0 * EPS0),
        FluxComponent::Y => (e_a[1] * eb[2] + b_a[1] * bb[2] * c2_w2) * (2.0 * EPS0),
    }
}

/// Evaluates a flux density on a constant-z plane inside a region.
///
/// The flux is a quadratic form in the region's correlator blocks. For
/// propagating wavevectors only equal-direction pairings (φ, φ)
/// contribute; for evanescent ones only the cross pairings (+, −) and
/// (−, +) do — the complementary pairings average to zero over the plane
/// or carry no real flux. In the surviving pairings the z̄-dependent
/// phases cancel identically, so the result is independent of where in
/// the region the plane is placed; `z_bar` is validated against the
/// region's range and otherwise only documents intent.
///
/// # Arguments
///
/// * `grid` - The mode grid.
/// * `set` - Solved region correlators.
/// * `region` - Which region the plane lies in.
/// * `component` - Which flux density to evaluate.
/// * `z_bar` - Plane height in meters (must lie inside the region).
///
/// # Returns
///
/// The flux density: W/m² for [`FluxComponent::Heat`], Pa otherwise,
/// per unit frequency interval dω/2π.
pub fn flux_at_plane(
    grid: &ModeGrid,
    set: &CorrelatorSet,
    region: Region,
    component: FluxComponent,
    z_bar: f64,
) -> Result<f64> {
    if !z_bar.is_finite() {
        return Err(Error::Domain(format!("plane height must be finite, got {z_bar}")));
    }
    let in_range = match region {
        Region::A => z_bar <= 0.0,
        Region::B => (0.0..=set.d).contains(&z_bar),
        Region::C => z_bar >= set.d,
    };
    if !in_range {
        return Err(Error::Domain(format!(
            "plane z = {z_bar:e} lies outside region {region:?} (gap width {:e})",
            set.d
        )));
    }
    let blocks = match region {
        Region::A => &set.region_a,
        Region::B => &set.region_b,
        Region::C => &set.region_c,
    };
    check_dim(grid, &blocks.pp, "correlator block")?;

    let n = grid.len();
    let four_pi2 = 4.0 * std::f64::consts::PI * std::f64::consts::PI;
    let mut total = 0.0;
    let mut j = 0;
    while j < n {
        // Both polarizations of one wavevector sample.
        let node = &grid.nodes[j];
        let w2 = node.weight * node.weight;
        let pols = [(j, Polarization::TE), (j + 1, Polarization::TM)];
        let mut acc = ZERO;
        for &(ia, pa) in &pols {
            for &(ib, pb) in &pols {
                if node.propagating {
                    // Equal-direction pairings.
                    for phi in [1i8, -1i8] {
                        let kern = pairing_kernel(
                            component, grid.omega, node.k, node.kz, pa, phi, pb, phi,
                        );
                        let c = if phi == 1 {
                            blocks.pp[(ia, ib)]
                        } else {
                            blocks.mm[(ia, ib)]
                        };
                        acc += kern * c;
                    }
                } else {
                    // Cross pairings; C^{−+} is the adjoint block of C^{+−}.
                    let kern_pm = pairing_kernel(
                        component, grid.omega, node.k, node.kz, pa, 1, pb, -1,
                    );
                    acc += kern_pm * blocks.pm[(ia, ib)];
                    let kern_mp = pairing_kernel(
                        component, grid.omega, node.k, node.kz, pa, -1, pb, 1,
                    );
                    acc += kern_mp * blocks.pm[(ib, ia)].conj();
                }
            }
        }
        total += w2 * acc.re;
        j += 2;
    }
    Ok(total / four_pi2)
}

// --------------------------------------------------------------------------
// Traces
// --------------------------------------------------------------------------

/// Normalization of an operator trace (see the module docs).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceNorm {
    /// Σᵢ wᵢ² Mᵢᵢ: trace per unit area × (2π)². Matches
    /// Σᵢ wᵢ · (closed-form spectral density at node i) for translation
    /// invariant bodies.
    PerArea,
    /// Σᵢ wᵢ Mᵢᵢ: absolute trace × (2π)². The form needed when one body
    /// is a localized scatterer.
    Absolute,
}

/// Equilibrium force trace at one frequency:
/// −2 Re Tr{ (k_z N(ω,T)/ω) · [U¹² R⁽¹⁾⁺ R⁽²⁾⁻ + U²¹ R⁽²⁾⁻ R⁽¹⁾⁺] },
/// evaluated over both sectors with the exact complex k_z.
///
/// The expression is symmetric under interchanging the two reflection
/// operators, reflecting that equal and opposite forces act on the two
/// bodies at equilibrium.
///
/// # Arguments
///
/// * `grid` - The mode grid.
/// * `r1_plus` - Body 1's upward reflection operator.
/// * `r2_minus` - Body 2's downward reflection operator (displaced).
/// * `temperature` - The common temperature in K (≥ 0).
/// * `norm` - Trace normalization.
///
/// # Returns
///
/// The traced density; with [`TraceNorm::PerArea`] it equals (2π)² times
/// the per-area force spectral density (positive = attraction).
pub fn trace_eq_force(
    grid: &ModeGrid,
    r1_plus: &OperatorMatrix,
    r2_minus: &OperatorMatrix,
    temperature: f64,
    norm: TraceNorm,
) -> Result<f64> {
    if !(temperature >= 0.0) || !temperature.is_finite() {
        return Err(Error::Domain(format!(
            "temperature must be ≥ 0, got {temperature}"
        )));
    }
    check_dim(grid, &r1_plus.matrix, "R1+")?;
    check_dim(grid, &r2_minus.matrix, "R2-")?;
    let r1 = to_scaled(grid, r1_plus);
    let r2 = to_scaled(grid, r2_minus);
    let n = grid.len();
    let id = CMat::identity(n, n);
    let a12 = &r1 * &r2;
    let a21 = &r2 * &r1;
    let u12 = inverse_or_resonance(&id - &a12, "1 - R1+ R2-")?;
    let u21 = inverse_or_resonance(&id - &a21, "1 - R2- R1+")?;
    let m = &u12 * &a12 + &u21 * &a21;
    let mu = trace_weights(grid, norm);
    let nsym = n_sym(grid.omega, temperature);
    let mut acc = 0.0;
    for i in 0..n {
        let weight = grid.nodes[i].kz * (nsym / grid.omega);
        acc += mu[i] * (weight * m[(i, i)]).re;
    }
    Ok(-2.0 * acc)
}

/// Result of an exchange trace: the total and the six per-channel terms,
/// each labelled by the occupation difference n_ij that drives it.
#[derive(Debug, Clone, PartialEq)]
pub struct DeltaTraceResult {
    /// The traced exchange density (sum of the terms).
    pub value: f64,
    /// Named channel contributions, in fixed order
    /// n21, n13, n31, n12, n23, n32.
    pub terms: Vec<(String, f64)>,
}

impl DeltaTraceResult {
    /// Sum of the magnitudes of the channel terms — the activity scale
    /// against which cancellation in `value` is judged.
    pub fn terms_abs_sum(&self) -> f64 {
        self.terms.iter().map(|(_, v)| v.abs()).sum()
    }
}

/// Evaluates the full nonequilibrium exchange trace Δ_m at the grid
/// frequency by dense operator algebra: every term of the operator-form
/// expression, including the formally divergent specular self-terms
/// (whose δ²(0) factors the raw convention renders as 1/wᵢ).
///
/// * m = 1: the traced heat exchange density (positive = energy into
///   body 1).
/// * m = 2: the traced momentum exchange density (positive = body 1
///   pushed toward +z).
///
/// With [`TraceNorm::PerArea`] the result equals
/// Σᵢ wᵢ · (closed-form spectral density at node i) when both bodies are
/// specular; dividing by (2π)² gives the physical per-area density per
/// dω/2π. With [`TraceNorm::Absolute`] the result is (2π)² times the
/// absolute trace, the normalization under which a localized scatterer
/// has a finite exchange.
///
/// # Arguments
///
/// * `m` - Moment: 1 (heat) or 2 (momentum).
/// * `grid` - The mode grid.
/// * `ops1` - Body 1 operators (all four are used).
/// * `ops2` - Body 2 operators (R⁻ and T⁻ are used; displaced to z = d).
/// * `temps` - The three temperatures.
/// * `norm` - Trace normalization.
pub fn trace_delta_m(
    m: u8,
    grid: &ModeGrid,
    ops1: &BodyOperators,
    ops2: &BodyOperators,
    temps: &TemperatureTriple,
    norm: TraceNorm,
) -> Result<DeltaTraceResult> {
    if m != 1 && m != 2 {
        return Err(Error::Domain(format!("moment m must be 1 or 2, got {m}")));
    }
    let b1 = scaled_body(grid, ops1)?;
    let b2 = scaled_body(grid, ops2)?;
    let n = grid.len();
    let omega = grid.omega;
    let mu = trace_weights(grid, norm);

    let n21 = n_diff(omega, temps.t2, temps.t1);
    let n13 = n_diff(omega, temps.t1, temps.t3);
    let n31 = -n13;
    let n12 = -n21;
    let n23 = n_diff(omega, temps.t2, temps.t3);
    let n32 = -n23;
    let msign = if m == 1 { -1.0 } else { 1.0 }; // (−1)^m
    let moment_sign = if m == 1 { 1.0 } else { -1.0 }; // (−1)^{m+1}
    let prefactor = moment_sign * HBAR * omega.powi(2 - i32::from(m));

    let (p_pw_n1, p_ew_n1) = sector_powers(grid, -1);
    let (p_pw_m, p_ew_m) = sector_powers(grid, i32::from(m));
    let (p_pw_mm1, _) = sector_powers(grid, i32::from(m) - 1);

    // Cavity dressings.
    let id = CMat::identity(n, n);
    let u12 = inverse_or_resonance(&id - &b1.rp * &b2.rm, "1 - R1+ R2-")?;
    let u21 = inverse_or_resonance(&id - &b2.rm * &b1.rp, "1 - R2- R1+")?;

    // Emission-type inner brackets: P₋₁ − X P₋₁ X† + X P₋₁^ew − P₋₁^ew X†.
    let inner_bracket = |x: &CMat| -> CMat {
        let xh = x.adjoint();
        let mut out = diag_mat(&p_pw_n1);
        out -= scale_cols(x, &p_pw_n1) * &xh;
        out += scale_cols(x, &p_ew_n1);
        out -= scale_rows(&p_ew_n1, &xh);
        out
    };
    // Absorption-type outer brackets:
    // P_m + (−1)^m Y† P_m Y + Y† P_m^ew + (−1)^m P_m^ew Y.
    let outer_bracket = |y: &CMat| -> CMat {
        let yh = y.adjoint();
        let csign = Complex64::new(msign, 0.0);
        let mut out = diag_mat(&p_pw_m);
        out += (scale_cols(&yh, &p_pw_m) * y) * csign;
        out += scale_cols(&yh, &p_ew_m);
        out += scale_rows(&p_ew_m, y) * csign;
        out
    };

    let inn_r2 = inner_bracket(&b2.rm);
    let inn_r1 = inner_bracket(&b1.rp);
    let fac_r1 = outer_bracket(&b1.rp);
    let fac_r2 = outer_bracket(&b2.rm);

    // Channel n21: the two-sided cavity exchange.
    let ma21 = &u21 * &inn_r2 * u21.adjoint();
    let ma12 = &u12 * &inn_r1 * u12.adjoint();
    let g_n21 = 0.5
        * n21
        * (trace_pair(&mu, &ma21, &fac_r1).re - msign * trace_pair(&mu, &ma12, &fac_r2).re);

    // Back-face self-term of body 1: Tr[P_m R1⁻ P₋₁ R1⁻†].
    let mut back_face = 0.0;
    for i in 0..n {
        let pi = (p_pw_m[i] * mu[i]).re;
        if pi == 0.0 {
            continue;
        }
        let mut s = 0.0;
        for j in 0..n {
            let pj = p_pw_n1[j].re;
            if pj != 0.0 {
                s += pj * b1.rm[(i, j)].norm_sqr();
            }
        }
        back_face += pi * s;
    }

    // Divergent specular self-term: (−1)^m n_{m3} Tr[P_{m−1}] with
    // δ²(0) → 1/wᵢ (i.e. the plain diagonal sum in the scaled picture).
    let n_m3 = if m == 1 { n13 } else { n23 };
    let g_div: f64 = msign * n_m3 * {
        let mut s = 0.0;
        for i in 0..n {
            s += mu[i] * p_pw_mm1[i].re;
        }
        s
    };

    // Environment entering through body 1 and dressed by the cavity.
    let w1 = &u12 * &b1.tp;
    let mb1 = scale_cols(&w1, &p_pw_n1) * w1.adjoint();
    let rw1 = &b2.rm * &w1;
    let v = &b1.tm * &rw1;
    // Interference of the back-face reflection with the cavity return:
    // 2 Re Tr[P_m R1⁻ P₋₁ V†], V = T1⁻ R2⁻ U12 T1⁺.
    let mut env_cross = ZERO;
    for i in 0..n {
        let pi = p_pw_m[i] * mu[i];
        if pi == ZERO {
            continue;
        }
        let mut s = ZERO;
        for j in 0..n {
            let pj = p_pw_n1[j];
            if pj != ZERO {
                s += b1.rm[(i, j)] * pj * v[(i, j)].conj();
            }
        }
        env_cross += pi * s;
    }
    let g_n31 = n31 * (msign * trace_pair(&mu, &mb1, &fac_r2).re - 2.0 * env_cross.re);

    // Gap field escaping downward through body 1: the absorption sandwich
    // K = (T1⁻ U21)† P_m (T1⁻ U21) against the three gap source brackets.
    let z_op = &b1.tm * &u21;
    let zh = z_op.adjoint();
    let kmat = scale_cols(&zh, &p_pw_m) * &z_op;
    let b23 = scale_cols(&b2.tm, &p_pw_n1) * b2.tm.adjoint();
    let rt = &b2.rm * &b1.tp;
    let b13 = scale_cols(&rt, &p_pw_n1) * rt.adjoint();
    let g_n12 = n12 * trace_pair(&mu, &inn_r2, &kmat).re;
    let g_n23 = n23 * trace_pair(&mu, &b23, &kmat).re;
    let g_n13_gap = n13 * trace_pair(&mu, &b13, &kmat).re;

    // Body 2's transmitted emission absorbed by body 1.
    let s2 = &u21 * &b2.tm;
    let mb2 = scale_cols(&s2, &p_pw_n1) * s2.adjoint();
    let g_n32 = n32 * trace_pair(&mu, &mb2, &fac_r1).re;

    let ch_n21 = prefactor * g_n21;
    let ch_n13 =
        prefactor * (n13 * back_face + g_n13_gap + if m == 1 { g_div } else { 0.0 });
    let ch_n31 = prefactor * g_n31;
    let ch_n12 = prefactor * g_n12;
    let ch_n23 = prefactor * (g_n23 + if m == 2 { g_div } else { 0.0 });
    let ch_n32 = prefactor * g_n32;

    let terms = vec![
        ("n21".to_string(), ch_n21),
        ("n13".to_string(), ch_n13),
        ("n31".to_string(), ch_n31),
        ("n12".to_string(), ch_n12),
        ("n23".to_string(), ch_n23),
        ("n32".to_string(), ch_n32),
    ];
    let value = terms.iter().map(|(_, v)| v).sum();
    Ok(DeltaTraceResult { value, terms })
}
