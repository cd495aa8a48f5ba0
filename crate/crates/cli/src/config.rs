//! Run configuration: JSON parsing, validation, and unit normalization.
//!
//! Configurations are written in JSON with lengths in µm and temperatures
//! in K; parsing converts everything to SI. Materials are either preset
//! names or inline model objects with frequencies in rad/s, matching the
//! conventions of the core materials module.

use fluctua_core::consts::EPS0;
use fluctua_core::materials::LorentzOscillator;
use fluctua_core::{
    AtomConfig, CavityConfig, DielectricModel, PolarizabilityModel, SlabBody,
    TemperatureTriple, Thickness,
};
use serde::Deserialize;
use serde_json::Value;
use std::f64::consts::PI;
use std::path::PathBuf;

/// What the run computes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Scenario {
    /// Total pressure on body 1 of a two-slab cavity (equilibrium parts
    /// plus the non-equilibrium correction).
    SlabForce,
    /// Radiative heat absorbed by body 1 of a two-slab cavity.
    SlabHeat,
    /// Force on a small polarizable particle below a slab.
    AtomForce,
    /// Equilibrium Casimir pressure of a two-slab cavity at the
    /// temperature `t1_k`.
    EqForce,
}

impl Scenario {
    /// The scenario name as written in config files.
    pub fn name(self) -> &'static str {
        match self {
            Scenario::SlabForce => "slab-force",
            Scenario::SlabHeat => "slab-heat",
            Scenario::AtomForce => "atom-force",
            Scenario::EqForce => "eq-force",
        }
    }
}

/// Output serialization format.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputFormat {
    /// Comma-separated values with a header row.
    Csv,
    /// Array of objects with identical keys.
    Json,
}

/// The quantity swept over the rows of the output table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepVariable {
    /// Gap width of the cavity.
    D,
    /// Environment temperature.
    T3,
    /// Particle height (negative; below the slab face).
    ZA,
}

impl SweepVariable {
    /// Column header of the swept quantity, with its SI unit.
    pub fn column(self) -> &'static str {
        match self {
            SweepVariable::D => "d_m",
            SweepVariable::T3 => "t3_K",
            SweepVariable::ZA => "z_a_m",
        }
    }
}

/// A resolved sweep: the variable and its values in SI units, in row
/// order.
#[derive(Debug, Clone)]
pub struct Sweep {
    /// The swept quantity.
    pub variable: SweepVariable,
    /// Values in SI units (m or K), one output row each.
    pub values: Vec<f64>,
}

/// A validated run configuration with all quantities in SI units.
#[derive(Debug, Clone)]
pub struct RunConfig {
    /// The computation to perform.
    pub scenario: Scenario,
    /// Lower body of the cavity, or the slab of the atom scenario.
    pub body1: Option<SlabBody>,
    /// Upper body of the cavity (two-slab scenarios only).
    pub body2: Option<SlabBody>,
    /// Polarizability of the particle (atom scenario only).
    pub alpha: Option<PolarizabilityModel>,
    /// Body and environment temperatures.
    pub temps: TemperatureTriple,
    /// Fixed gap width in m, when not swept.
    pub d: Option<f64>,
    /// Fixed particle height in m (negative), when not swept.
    pub z_a: Option<f64>,
    /// The sweep (a single point when the config gives none).
    pub sweep: Sweep,
    /// Relative tolerance handed to all quadratures.
    pub tol: f64,
    /// Output path; standard output when absent.
    pub out_path: Option<PathBuf>,
    /// Output format.
    pub format: OutputFormat,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    scenario: Option<String>,
    body1: Option<RawBody>,
    body2: Option<RawBody>,
    atom: Option<RawAtom>,
    temperatures: RawTemps,
    d_um: Option<f64>,
    z_a_um: Option<f64>,
    sweep: Option<RawSweep>,
    tol: Option<f64>,
    output: Option<RawOutput>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBody {
    material: Value,
    thickness_um: Value,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAtom {
    alpha: Value,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTemps {
    t1_k: f64,
    t2_k: f64,
    t3_k: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSweep {
    variable: String,
    min: f64,
    max: f64,
    points: usize,
    spacing: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOutput {
    path: Option<String>,
    format: Option<String>,
}

/// Parses and validates a JSON run configuration.
///
/// # Arguments
///
/// * `text` - The JSON document.
/// * `scenario` - The scenario from the command line; a `scenario` field
///   in the document, if present, must agree with it.
/// * `tol_flag`, `out_flag`, `format_flag` - Command-line overrides.
///
/// # Returns
///
/// The validated configuration in SI units, or a message naming the
/// offending field.
pub fn parse_config(
    text: &str,
    scenario: Scenario,
    tol_flag: Option<f64>,
    out_flag: Option<PathBuf>,
    format_flag: Option<OutputFormat>,
) -> Result<RunConfig, String> {
    let raw: RawConfig = serde_json::from_str(text).map_err(|e| format!("config: {e}"))?;

    if let Some(named) = &raw.scenario {
        if named != scenario.name() {
            return Err(format!(
                "config names scenario '{named}' but the command asked for '{}'",
                scenario.name()
            ));
        }
    }

    let tol = tol_flag.or(raw.tol).unwrap_or(1.0e-3);
    if !(tol > 0.0) || !(tol <= 0.1) {
        return Err(format!("tol must lie in (0, 0.1], got {tol}"));
    }

    let temps = TemperatureTriple::new(
        raw.temperatures.t1_k,
        raw.temperatures.t2_k,
        raw.temperatures.t3_k,
    )
    .map_err(|e| format!("temperatures: {e}"))?;

    let body1 = raw
        .body1
        .map(|b| parse_body("body1", b))
        .transpose()?;
    let body2 = raw
        .body2
        .map(|b| parse_body("body2", b))
        .transpose()?;
    let alpha = raw
        .atom
        .as_ref()
        .map(|a| parse_alpha(&a.alpha))
        .transpose()?;

    match scenario {
        Scenario::SlabForce | Scenario::SlabHeat | Scenario::EqForce => {
            if body1.is_none() || body2.is_none() {
                return Err(format!(
                    "{} requires both body1 and body2",
                    scenario.name()
                ));
            }
            if raw.atom.is_some() {
                return Err("field `atom` is only used by atom-force".into());
            }
            if raw.z_a_um.is_some() {
                return Err("field `z_a_um` is only used by atom-force".into());
            }
        }
        Scenario::AtomForce => {
            if alpha.is_none() {
                return Err("atom-force requires an `atom` entry".into());
            }
            if body1.is_none() {
                return Err(
                    "atom-force requires the slab above the particle as body1".into()
                );
            }
            if body2.is_some() {
                return Err("atom-force uses a single slab; remove body2".into());
            }
            if raw.d_um.is_some() {
                return Err(
                    "atom-force positions the particle with z_a_um, not d_um".into()
                );
            }
        }
    }

    let d = raw
        .d_um
        .map(|v| {
            if !(v > 0.0) || !v.is_finite() {
                return Err(format!("d_um must be positive, got {v}"));
            }
            Ok(v * 1.0e-6)
        })
        .transpose()?;
    let z_a = raw
        .z_a_um
        .map(|v| {
            if !(v < 0.0) || !v.is_finite() {
                return Err(format!(
                    "z_a_um must be negative (the particle sits below the slab face), got {v}"
                ));
            }
            Ok(v * 1.0e-6)
        })
        .transpose()?;

    let sweep = resolve_sweep(scenario, raw.sweep, d, z_a)?;

    // Eager construction catches polarizability parameter errors at config
    // time instead of per sweep point.
    if let (Some(a), Some(slab)) = (&alpha, &body1) {
        let probe_z = z_a.or_else(|| {
            (sweep.variable == SweepVariable::ZA).then(|| sweep.values[0])
        });
        if let Some(zv) = probe_z {
            AtomConfig::new(*a, zv, slab.clone()).map_err(|e| format!("atom: {e}"))?;
        }
    }

    let out_path = out_flag.or_else(|| {
        raw.output
            .as_ref()
            .and_then(|o| o.path.as_ref())
            .map(PathBuf::from)
    });
    let format = match format_flag {
        Some(f) => f,
        None => match raw.output.as_ref().and_then(|o| o.format.as_deref()) {
            None => OutputFormat::Csv,
            Some("csv") => OutputFormat::Csv,
            Some("json") => OutputFormat::Json,
            Some(other) => {
                return Err(format!(
                    "output.format must be 'csv' or 'json', got '{other}'"
                ))
            }
        },
    };

    Ok(RunConfig {
        scenario,
        body1,
        body2,
        alpha,
        temps,
        d,
        z_a,
        sweep,
        tol,
        out_path,
        format,
    })
}

/// Builds the sweep, or a single-point stand-in from the fixed geometry
/// when the config gives none.
fn resolve_sweep(
    scenario: Scenario,
    raw: Option<RawSweep>,
    d: Option<f64>,
    z_a: Option<f64>,
) -> Result<Sweep, String> {
    let Some(raw) = raw else {
        return match scenario {
            Scenario::SlabForce | Scenario::SlabHeat | Scenario::EqForce => {
                let d = d.ok_or("give either d_um or a sweep over d")?;
                Ok(Sweep { variable: SweepVariable::D, values: vec![d] })
            }
            Scenario::AtomForce => {
                let z = z_a.ok_or("give either z_a_um or a sweep over z_A")?;
                Ok(Sweep { variable: SweepVariable::ZA, values: vec![z] })
            }
        };
    };

    let variable = match raw.variable.as_str() {
        "d" => SweepVariable::D,
        "T3" => SweepVariable::T3,
        "z_A" => SweepVariable::ZA,
        other => {
            return Err(format!(
                "sweep.variable must be one of d, T3, z_A; got '{other}'"
            ))
        }
    };
    let allowed: &[SweepVariable] = match scenario {
        Scenario::SlabForce | Scenario::SlabHeat => {
            &[SweepVariable::D, SweepVariable::T3]
        }
        Scenario::AtomForce => &[SweepVariable::ZA, SweepVariable::T3],
        Scenario::EqForce => &[SweepVariable::D],
    };
    if !allowed.contains(&variable) {
        return Err(format!(
            "sweep.variable '{}' does not apply to {}",
            raw.variable,
            scenario.name()
        ));
    }
    match variable {
        SweepVariable::D => {
            if d.is_some() {
                return Err("remove d_um when sweeping d".into());
            }
        }
        SweepVariable::ZA => {
            if z_a.is_some() {
                return Err("remove z_a_um when sweeping z_A".into());
            }
        }
        SweepVariable::T3 => match scenario {
            Scenario::AtomForce => {
                if z_a.is_none() {
                    return Err("a T3 sweep of atom-force needs a fixed z_a_um".into());
                }
            }
            _ => {
                if d.is_none() {
                    return Err("a T3 sweep needs a fixed d_um".into());
                }
            }
        },
    }

    if raw.points < 1 {
        return Err(format!("sweep.points must be >= 1, got {}", raw.points));
    }
    if !raw.min.is_finite() || !raw.max.is_finite() || !(raw.min < raw.max) {
        return Err(format!(
            "sweep bounds must be finite with min < max, got [{}, {}]",
            raw.min, raw.max
        ));
    }
    let log_spacing = match raw.spacing.as_deref() {
        None | Some("linear") => false,
        Some("log") => true,
        Some(other) => {
            return Err(format!(
                "sweep.spacing must be 'linear' or 'log', got '{other}'"
            ))
        }
    };
    match variable {
        SweepVariable::D => {
            if !(raw.min > 0.0) {
                return Err(format!("a d sweep needs min > 0 µm, got {}", raw.min));
            }
        }
        SweepVariable::T3 => {
            if raw.min < 0.0 || (log_spacing && raw.min == 0.0) {
                return Err(format!(
                    "a T3 sweep needs min >= 0 K (> 0 for log spacing), got {}",
                    raw.min
                ));
            }
        }
        SweepVariable::ZA => {
            if !(raw.max < 0.0) {
                return Err(format!(
                    "a z_A sweep runs below the slab: need max < 0 µm, got {}",
                    raw.max
                ));
            }
        }
    }

    let unit = match variable {
        SweepVariable::D | SweepVariable::ZA => 1.0e-6,
        SweepVariable::T3 => 1.0,
    };
    let n = raw.points;
    let mut values = Vec::with_capacity(n);
    if n == 1 {
        values.push(raw.min * unit);
    } else if log_spacing {
        // Log spacing interpolates the magnitudes, preserving the common
        // sign (a z_A sweep runs over negative heights).
        let sign = raw.min.signum();
        let (a, b) = (raw.min.abs().ln(), raw.max.abs().ln());
        for i in 0..n {
            let t = i as f64 / (n - 1) as f64;
            values.push(sign * (a + (b - a) * t).exp() * unit);
        }
    } else {
        for i in 0..n {
            let t = i as f64 / (n - 1) as f64;
            values.push((raw.min + (raw.max - raw.min) * t) * unit);
        }
    }
    Ok(Sweep { variable, values })
}

/// Converts one body entry (material + thickness) into a [`SlabBody`].
fn parse_body(field: &str, raw: RawBody) -> Result<SlabBody, String> {
    let material = parse_material(field, &raw.material)?;
    let thickness = match &raw.thickness_um {
        Value::Number(n) => {
            let t = n.as_f64().unwrap_or(f64::NAN);
            if !(t > 0.0) || !t.is_finite() {
                return Err(format!("{field}.thickness_um must be positive, got {t}"));
            }
            Thickness::Finite(t * 1.0e-6)
        }
        Value::String(s) if s == "inf" => Thickness::SemiInfinite,
        other => {
            return Err(format!(
                "{field}.thickness_um must be a number in µm or the string \"inf\", got {other}"
            ))
        }
    };
    SlabBody::new(thickness, material).map_err(|e| format!("{field}: {e}"))
}

/// Converts a material entry — a preset name or an inline model object.
fn parse_material(field: &str, value: &Value) -> Result<DielectricModel, String> {
    match value {
        Value::String(name) => match name.as_str() {
            "perfect-mirror" => Ok(DielectricModel::PerfectMirror),
            other => DielectricModel::preset(other).map_err(|_| {
                format!(
                    "{field}: unknown material preset '{other}'; available presets: \
                     fused-silica-2osc, silicon-drude-lorentz, perfect-mirror \
                     (or give an inline model object)"
                )
            }),
        },
        Value::Object(map) => {
            let model = map
                .get("model")
                .and_then(Value::as_str)
                .ok_or_else(|| format!("{field}.material needs a string `model` key"))?;
            match model {
                "constant" => {
                    #[derive(Deserialize)]
                    #[serde(deny_unknown_fields)]
                    struct Spec {
                        model: String,
                        re: f64,
                        #[serde(default)]
                        im: f64,
                    }
                    let s: Spec = from_object(field, value)?;
                    let _ = s.model;
                    Ok(DielectricModel::Constant(num_complex::Complex64::new(
                        s.re, s.im,
                    )))
                }
                "drude" => {
                    #[derive(Deserialize)]
                    #[serde(deny_unknown_fields)]
                    struct Spec {
                        model: String,
                        omega_p: f64,
                        gamma: f64,
                    }
                    let s: Spec = from_object(field, value)?;
                    let _ = s.model;
                    Ok(DielectricModel::Drude { omega_p: s.omega_p, gamma: s.gamma })
                }
                "lorentz" => {
                    #[derive(Deserialize)]
                    #[serde(deny_unknown_fields)]
                    struct Osc {
                        omega0: f64,
                        omega_p: f64,
                        gamma: f64,
                    }
                    #[derive(Deserialize)]
                    #[serde(deny_unknown_fields)]
                    struct Spec {
                        model: String,
                        eps_inf: f64,
                        oscillators: Vec<Osc>,
                    }
                    let s: Spec = from_object(field, value)?;
                    let _ = s.model;
                    Ok(DielectricModel::LorentzOscillators {
                        eps_inf: s.eps_inf,
                        oscillators: s
                            .oscillators
                            .into_iter()
                            .map(|o| LorentzOscillator {
                                omega_j: o.omega0,
                                omega_pj: o.omega_p,
                                gamma_j: o.gamma,
                            })
                            .collect(),
                    })
                }
                "mirror" => Ok(DielectricModel::PerfectMirror),
                other => Err(format!(
                    "{field}.material.model must be one of constant, drude, lorentz, \
                     mirror; got '{other}'"
                )),
            }
        }
        other => Err(format!(
            "{field}.material must be a preset name or a model object, got {other}"
        )),
    }
}

/// Converts a polarizability entry. Volumes are given in m³ (the
/// polarizability volume α/(4πε₀)); frequencies in rad/s.
fn parse_alpha(value: &Value) -> Result<PolarizabilityModel, String> {
    let Value::Object(map) = value else {
        return Err(format!("atom.alpha must be a model object, got {value}"));
    };
    let model = map
        .get("model")
        .and_then(Value::as_str)
        .ok_or_else(|| "atom.alpha needs a string `model` key".to_string())?;
    let si = 4.0 * PI * EPS0;
    match model {
        "static" => {
            #[derive(Deserialize)]
            #[serde(deny_unknown_fields)]
            struct Spec {
                model: String,
                alpha0_volume_m3: f64,
            }
            let s: Spec = from_object("atom.alpha", value)?;
            let _ = s.model;
            Ok(PolarizabilityModel::Static { alpha0: si * s.alpha0_volume_m3 })
        }
        "lorentz" => {
            #[derive(Deserialize)]
            #[serde(deny_unknown_fields)]
            struct Spec {
                model: String,
                alpha0_volume_m3: f64,
                omega0: f64,
                gamma: f64,
            }
            let s: Spec = from_object("atom.alpha", value)?;
            let _ = s.model;
            Ok(PolarizabilityModel::Lorentz {
                alpha0: si * s.alpha0_volume_m3,
                omega0: s.omega0,
                gamma: s.gamma,
            })
        }
        other => Err(format!(
            "atom.alpha.model must be 'static' or 'lorentz', got '{other}'"
        )),
    }
}

/// Deserializes a JSON object into a typed spec with field-naming errors.
fn from_object<T: serde::de::DeserializeOwned>(field: &str, value: &Value) -> Result<T, String> {
    serde_json::from_value(value.clone()).map_err(|e| format!("{field}: {e}"))
}

/// Builds the cavity of a two-slab scenario at one gap width.
pub fn cavity_at(config: &RunConfig, d: f64) -> fluctua_core::Result<CavityConfig> {
    CavityConfig::new(
        config.body1.clone().expect("validated"),
        config.body2.clone().expect("validated"),
        d,
    )
}

/// Builds the particle configuration of the atom scenario at one height.
pub fn atom_at(config: &RunConfig, z_a: f64) -> fluctua_core::Result<AtomConfig> {
    AtomConfig::new(
        config.alpha.expect("validated"),
        z_a,
        config.body1.clone().expect("validated"),
    )
}
