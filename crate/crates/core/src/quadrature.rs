//! Adaptive quadrature and Matsubara summation.
//!
//! The integration kernel is a 15-point Gauss–Kronrod rule (7-point Gauss
//! core). Adaptive refinement bisects the subinterval with the largest
//! error estimate first; the final value is assembled with compensated
//! (Neumaier) summation in position order so results are deterministic and
//! insensitive to the refinement history.
//!
//! All nodes of the rule are interior, so integrable endpoint singularities
//! and branch points located exactly at a panel edge are never evaluated.

use crate::consts::{HBAR, KB};
use crate::error::{Error, Result};
use std::collections::BinaryHeap;

/// Nodes of the 15-point Kronrod rule on [-1, 1], outermost first; the
/// final entry is the center. Entries at odd indices (plus the center) are
/// the embedded 7-point Gauss nodes.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639,
    0.949_107_912_342_758_525,
    0.864_864_423_359_769_073,
    0.741_531_185_599_394_44,
    0.586_087_235_467_691_13,
    0.405_845_151_377_397_167,
    0.207_784_955_007_898_468,
    0.0,
];

/// Kronrod weights matching [`XGK`].
const WGK: [f64; 8] = [
    0.022_935_322_010_529_225,
    0.063_092_092_629_978_553_3,
    0.104_790_010_322_250_184,
    0.140_653_259_715_525_919,
    0.169_004_726_639_267_903,
    0.190_350_578_064_785_41,
    0.204_432_940_075_298_892,
    0.209_482_141_084_727_828,
];

/// Gauss weights for the nodes at `XGK[1]`, `XGK[3]`, `XGK[5]`, and the
/// center.
const WG: [f64; 4] = [
    0.129_484_966_168_869_693,
    0.279_705_391_489_276_668,
    0.381_830_050_505_118_945,
    0.417_959_183_673_469_388,
];

/// Hard cap on the number of subintervals the adaptive scheme may create.
const MAX_PANELS: usize = 4096;

/// Result of a quadrature or series evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    /// The computed integral or sum.
    pub value: f64,
    /// Estimated absolute error of `value`.
    pub error_estimate: f64,
    /// Number of integrand (or summand) evaluations performed.
    pub evaluations: usize,
}

/// Result of a multi-channel quadrature: several integrands sharing the
/// same evaluation nodes, with refinement driven by channel 0.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiQuadratureResult {
    /// The computed integrals, one per channel.
    pub values: Vec<f64>,
    /// Estimated absolute error of channel 0.
    pub error_estimate: f64,
    /// Number of evaluation points (each point evaluates all channels).
    pub evaluations: usize,
}

/// One adaptive subinterval with its Kronrod values and error estimate.
struct Panel {
    lo: f64,
    hi: f64,
    values: Vec<f64>,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error && self.lo == other.lo
    }
}
impl Eq for Panel {}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        // Max-heap on error; ties broken toward the leftmost interval so the
        // refinement order (and hence the evaluation count) is deterministic.
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.lo.total_cmp(&self.lo))
    }
}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Compensated (Neumaier) sum of a sequence.
fn neumaier_sum(xs: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for x in xs {
        let t = sum + x;
        if sum.abs() >= x.abs() {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// Applies the 15-point Gauss–Kronrod rule to all channels on `[lo, hi]`.
///
/// Returns the panel (with channel values and an error estimate taken from
/// channel 0) and the number of evaluation points used (always 15).
fn gk15_panel<F>(f: &mut F, n_channels: usize, lo: f64, hi: f64) -> Result<(Panel, usize)>
where
    F: FnMut(f64, &mut [f64]) -> Result<()>,
{
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let mut buf = vec![0.0; n_channels];
    let mut kronrod = vec![0.0; n_channels];
    let mut gauss = vec![0.0; n_channels];

    f(center, &mut buf)?;
    for ch in 0..n_channels {
        kronrod[ch] += WGK[7] * buf[ch];
        gauss[ch] += WG[3] * buf[ch];
    }
    for (i, &node) in XGK.iter().enumerate().take(7) {
        let dx = half * node;
        let mut pair = vec![0.0; n_channels];
        buf.fill(0.0);
        f(center - dx, &mut buf)?;
        for ch in 0..n_channels {
            pair[ch] += buf[ch];
        }
        buf.fill(0.0);
        f(center + dx, &mut buf)?;
        for ch in 0..n_channels {
            pair[ch] += buf[ch];
        }
        for ch in 0..n_channels {
            kronrod[ch] += WGK[i] * pair[ch];
            if i % 2 == 1 {
                gauss[ch] += WG[i / 2] * pair[ch];
            }
        }
    }
    let values: Vec<f64> = kronrod.iter().map(|v| v * half).collect();
    let error = (values[0] - gauss[0] * half).abs();
    for v in &values {
        if !v.is_finite() {
            return Err(Error::NumericalDomain(format!(
                "non-finite integrand on [{lo:e}, {hi:e}]"
            )));
        }
    }
    Ok((Panel { lo, hi, values, error }, 15))
}

/// Adaptive Gauss–Kronrod integration of several channels sharing nodes.
///
/// # Arguments
///
/// * `n_channels` - Number of simultaneous integrands; must be ≥ 1.
/// * `f` - Integrand filling `out[0..n_channels]` at a point. The buffer
///   is zeroed before every call, so integrands may accumulate with `+=`.
///   Refinement is driven by channel 0 only; the remaining channels ride
///   along on the same nodes.
/// * `lo`, `hi` - Integration limits (finite, `lo <= hi`).
/// * `tol` - Relative tolerance on channel 0.
///
/// # Returns
///
/// All channel values, or [`Error::NonConvergence`] naming the worst
/// subinterval if the panel budget is exhausted first.
pub fn integrate_adaptive_multi<F>(
    n_channels: usize,
    mut f: F,
    lo: f64,
    hi: f64,
    tol: f64,
) -> Result<MultiQuadratureResult>
where
    F: FnMut(f64, &mut [f64]) -> Result<()>,
{
    if n_channels == 0 {
        return Err(Error::Domain("n_channels must be >= 1".into()));
    }
    if !(tol > 0.0) || !tol.is_finite() {
        return Err(Error::Domain(format!("tolerance must be positive, got {tol}")));
    }
    if !lo.is_finite() || !hi.is_finite() || lo > hi {
        return Err(Error::Domain(format!("bad integration limits [{lo}, {hi}]")));
    }
    if lo == hi {
        return Ok(MultiQuadratureResult {
            values: vec![0.0; n_channels],
            error_estimate: 0.0,
            evaluations: 0,
        });
    }

    let mut evaluations = 0;
    let (first, n) = gk15_panel(&mut f, n_channels, lo, hi)?;
    evaluations += n;
    let mut total_value = first.values[0];
    let mut total_error = first.error;
    let mut heap = BinaryHeap::new();
    heap.push(first);
    // Panels too narrow to refine further keep contributing their error
    // estimate but are taken out of the refinement queue, so divergent
    // integrands terminate with an honest non-convergence report instead
    // of shrinking panels down to floating-point denormals.
    let width_floor = 1e-14 * (hi - lo);
    let mut retired: Vec<Panel> = Vec::new();

    while total_error > tol * total_value.abs() && !heap.is_empty() {
        if heap.len() + retired.len() >= MAX_PANELS {
            break;
        }
        let worst = heap.pop().expect("heap is non-empty");
        let mid = 0.5 * (worst.lo + worst.hi);
        if worst.hi - worst.lo <= width_floor || mid <= worst.lo || mid >= worst.hi {
            retired.push(worst);
            continue;
        }
        total_value -= worst.values[0];
        total_error -= worst.error;
        let (left, nl) = gk15_panel(&mut f, n_channels, worst.lo, mid)?;
        let (right, nr) = gk15_panel(&mut f, n_channels, mid, worst.hi)?;
        evaluations += nl + nr;
        total_value += left.values[0] + right.values[0];
        total_error += left.error + right.error;
        heap.push(left);
        heap.push(right);
    }

    let mut panels = heap.into_sorted_vec();
    panels.append(&mut retired);
    let mut by_position: Vec<&Panel> = panels.iter().collect();
    by_position.sort_by(|a, b| a.lo.total_cmp(&b.lo));
    let mut values = Vec::with_capacity(n_channels);
    for ch in 0..n_channels {
        values.push(neumaier_sum(by_position.iter().map(|p| p.values[ch])));
    }
    let error_estimate = neumaier_sum(by_position.iter().map(|p| p.error));

    if error_estimate > tol * values[0].abs() {
        let worst = by_position
            .iter()
            .max_by(|a, b| a.error.total_cmp(&b.error))
            .expect("at least one panel");
        return Err(Error::NonConvergence {
            value: values[0],
            error_estimate,
            evaluations,
            worst_lo: worst.lo,
            worst_hi: worst.hi,
        });
    }
    Ok(MultiQuadratureResult { values, error_estimate, evaluations })
}

/// Adaptive Gauss–Kronrod integration of a single integrand.
///
/// # Arguments
///
/// * `f` - Integrand; may fail, and failures abort the integration.
/// * `lo`, `hi` - Finite integration limits.
/// * `tol` - Relative tolerance.
pub fn integrate_adaptive<F>(mut f: F, lo: f64, hi: f64, tol: f64) -> Result<QuadratureResult>
where
    F: FnMut(f64) -> Result<f64>,
{
    let multi = integrate_adaptive_multi(
        1,
        |x, out| {
            out[0] = f(x)?;
            Ok(())
        },
        lo,
        hi,
        tol,
    )?;
    Ok(QuadratureResult {
        value: multi.values[0],
        error_estimate: multi.error_estimate,
        evaluations: multi.evaluations,
    })
}

/// Integrates `f` over the semi-infinite interval `[lo, ∞)`.
///
/// The substitution x = lo + scale·t/(1−t) maps the interval onto t ∈ [0, 1);
/// `scale` should be of the order of the distance over which the integrand
/// decays, so that the transformed integrand is well resolved.
///
/// # Arguments
///
/// * `f` - Integrand on the original variable.
/// * `lo` - Finite lower limit.
/// * `scale` - Positive decay scale of the integrand.
/// * `tol` - Relative tolerance.
pub fn integrate_semiinfinite<F>(
    mut f: F,
    lo: f64,
    scale: f64,
    tol: f64,
) -> Result<QuadratureResult>
where
    F: FnMut(f64) -> Result<f64>,
{
    if !(scale > 0.0) || !scale.is_finite() {
        return Err(Error::Domain(format!("scale must be positive, got {scale}")));
    }
    integrate_adaptive(
        |t| {
            let one_minus = 1.0 - t;
            let x = lo + scale * t / one_minus;
            let jac = scale / (one_minus * one_minus);
            Ok(f(x)? * jac)
        },
        0.0,
        1.0,
        tol,
    )
}

/// Evaluates a Matsubara frequency sum
/// k_BT·[½·g(0) + Σ_{n≥1} g(ξ_n)] with ξ_n = 2πn·k_BT/ħ.
///
/// At `temperature == 0` the sum becomes the integral (ħ/2π)·∫₀^∞ g(ξ) dξ,
/// evaluated with [`integrate_semiinfinite`] using `decay_scale`.
///
/// The sum is truncated once two consecutive terms are each smaller than
/// `tol` times the accumulated magnitude, which is robust for the smooth,
/// monotonically decaying summands produced by imaginary-axis response
/// functions.
///
/// # Arguments
///
/// * `g` - Summand as a function of the imaginary frequency ξ in rad/s.
///   It is called with ξ = 0 exactly, so it must implement its static limit.
/// * `temperature` - Temperature in K (≥ 0).
/// * `decay_scale` - Characteristic ξ decay scale in rad/s (used by the
///   zero-temperature integral).
/// * `tol` - Relative truncation/integration tolerance.
pub fn matsubara_sum<F>(
    mut g: F,
    temperature: f64,
    decay_scale: f64,
    tol: f64,
) -> Result<QuadratureResult>
where
    F: FnMut(f64) -> Result<f64>,
{
    if !(temperature >= 0.0) || !temperature.is_finite() {
        return Err(Error::Domain(format!(
            "temperature must be finite and >= 0, got {temperature}"
        )));
    }
    if temperature == 0.0 {
        let integral = integrate_semiinfinite(&mut g, 0.0, decay_scale, tol)?;
        return Ok(QuadratureResult {
            value: HBAR / (2.0 * std::f64::consts::PI) * integral.value,
            error_estimate: HBAR / (2.0 * std::f64::consts::PI) * integral.error_estimate,
            evaluations: integral.evaluations,
        });
    }

    let kt = KB * temperature;
    let xi_1 = 2.0 * std::f64::consts::PI * kt / HBAR;
    let mut terms = vec![0.5 * g(0.0)?];
    let mut evaluations = 1;
    let mut small_streak = 0;
    const MAX_TERMS: usize = 200_000;
    for n in 1..=MAX_TERMS {
        let term = g(xi_1 * n as f64)?;
        evaluations += 1;
        terms.push(term);
        let magnitude: f64 = terms.iter().map(|t| t.abs()).sum();
        if term.abs() <= tol * magnitude {
            small_streak += 1;
            if small_streak >= 2 {
                let value = kt * neumaier_sum(terms.iter().copied());
                return Ok(QuadratureResult {
                    value,
                    error_estimate: kt * term.abs(),
                    evaluations,
                });
            }
        } else {
            small_streak = 0;
        }
    }
    let value = kt * neumaier_sum(terms.iter().copied());
    Err(Error::NonConvergence {
        value,
        error_estimate: kt * terms.last().map(|t| t.abs()).unwrap_or(0.0),
        evaluations,
        worst_lo: xi_1 * MAX_TERMS as f64,
        worst_hi: f64::INFINITY,
    })
}
