//! Sweep execution: one computed row per sweep value.
//!
//! Points run concurrently on a local thread pool (capped by the
//! `FLUCTUA_THREADS` environment variable) but the output table always
//! lists rows in sweep order, and a failing point records its error
//! message without aborting the rest of the run.

use crate::config::{atom_at, cavity_at, RunConfig, Scenario, SweepVariable};
use fluctua_core::spectral::{eq_pressure, noneq_flux, total_force};
use fluctua_core::{atom_total_force, FluxResult, TemperatureTriple};
use rayon::prelude::*;

/// One output row: the swept value plus either the computed columns or an
/// error message.
#[derive(Debug, Clone)]
pub struct Row {
    /// The swept value (SI units).
    pub var: f64,
    /// Column values in header order, absent when the point failed.
    pub values: Option<Vec<f64>>,
    /// Failure message of this point, if any.
    pub error: Option<String>,
}

/// A completed run: column headers plus rows in sweep order.
#[derive(Debug, Clone)]
pub struct Table {
    /// Header of the swept-variable column (e.g. `d_m`).
    pub var_column: &'static str,
    /// Headers of the value columns, unit-suffixed.
    pub value_columns: &'static [&'static str],
    /// Rows in sweep order.
    pub rows: Vec<Row>,
}

impl Table {
    /// True when every row computed successfully.
    pub fn is_clean(&self) -> bool {
        self.rows.iter().all(|r| r.error.is_none())
    }
}

/// Value columns of the slab-force scenario (Pa; negative = attraction).
pub const SLAB_FORCE_COLUMNS: &[&str] = &[
    "total_Pa",
    "eq_t1_Pa",
    "eq_t2_Pa",
    "delta2_Pa",
    "delta2_n21_Pa",
    "delta2_n13_Pa",
    "delta2_n31_Pa",
    "delta2_n12_Pa",
    "delta2_n23_Pa",
    "delta2_n32_Pa",
    "err_Pa",
];
const SLAB_FORCE_KEYS: &[&str] = &[
    "eq_t1",
    "eq_t2",
    "delta2",
    "delta2_n21",
    "delta2_n13",
    "delta2_n31",
    "delta2_n12",
    "delta2_n23",
    "delta2_n32",
];

/// Value columns of the slab-heat scenario (W/m²; positive = absorbed by
/// body 1).
pub const SLAB_HEAT_COLUMNS: &[&str] = &[
    "total_Wm2",
    "n21_Wm2",
    "n13_Wm2",
    "n31_Wm2",
    "n12_Wm2",
    "n23_Wm2",
    "n32_Wm2",
    "err_Wm2",
];
const SLAB_HEAT_KEYS: &[&str] = &["n21", "n13", "n31", "n12", "n23", "n32"];

/// Value columns of the eq-force scenario (Pa; negative = attraction).
pub const EQ_FORCE_COLUMNS: &[&str] = &["total_Pa", "te_Pa", "tm_Pa", "err_Pa"];
const EQ_FORCE_KEYS: &[&str] = &["te", "tm"];

/// Value columns of the atom-force scenario (N; positive = toward the
/// slab).
pub const ATOM_FORCE_COLUMNS: &[&str] = &[
    "total_N",
    "eq_part_N",
    "term_distance_independent_N",
    "term_propagative_N",
    "term_evanescent_N",
    "err_N",
];

/// The value-column headers of a scenario.
pub fn value_columns(scenario: Scenario) -> &'static [&'static str] {
    match scenario {
        Scenario::SlabForce => SLAB_FORCE_COLUMNS,
        Scenario::SlabHeat => SLAB_HEAT_COLUMNS,
        Scenario::EqForce => EQ_FORCE_COLUMNS,
        Scenario::AtomForce => ATOM_FORCE_COLUMNS,
    }
}

/// Runs every sweep point of a configuration and collects the table.
///
/// # Arguments
///
/// * `config` - A validated run configuration.
///
/// # Returns
///
/// The table with one row per sweep value, in sweep order. Per-point
/// failures land in the row's `error` field; the run itself never fails.
pub fn run_sweep(config: &RunConfig) -> Table {
    let workers = std::env::var("FLUCTUA_THREADS")
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
        .unwrap_or(0);
    let compute = || {
        config
            .sweep
            .values
            .par_iter()
            .map(|&v| compute_point(config, v))
            .collect::<Vec<Row>>()
    };
    let rows = match rayon::ThreadPoolBuilder::new().num_threads(workers).build() {
        Ok(pool) => pool.install(compute),
        // Fall back to the global pool if a local one cannot be spawned.
        Err(_) => compute(),
    };
    Table {
        var_column: config.sweep.variable.column(),
        value_columns: value_columns(config.scenario),
        rows,
    }
}

/// Computes one sweep point, capturing any failure as the row's error.
fn compute_point(config: &RunConfig, var: f64) -> Row {
    match evaluate(config, var) {
        Ok(values) => Row { var, values: Some(values), error: None },
        Err(message) => Row { var, values: None, error: Some(message) },
    }
}

/// Evaluates the scenario at one swept value, in header order.
fn evaluate(config: &RunConfig, var: f64) -> Result<Vec<f64>, String> {
    let temps = match config.sweep.variable {
        SweepVariable::T3 => TemperatureTriple::new(config.temps.t1, config.temps.t2, var)
            .map_err(|e| e.to_string())?,
        _ => config.temps,
    };
    let gap = |fixed: Option<f64>| match config.sweep.variable {
        SweepVariable::T3 => fixed.expect("validated"),
        _ => var,
    };
    match config.scenario {
        Scenario::SlabForce => {
            let cavity = cavity_at(config, gap(config.d)).map_err(|e| e.to_string())?;
            let result = total_force(&temps, &cavity, config.tol).map_err(|e| e.to_string())?;
            collect(&result, SLAB_FORCE_KEYS)
        }
        Scenario::SlabHeat => {
            let cavity = cavity_at(config, gap(config.d)).map_err(|e| e.to_string())?;
            let result = noneq_flux(1, &temps, &cavity, config.tol).map_err(|e| e.to_string())?;
            collect(&result, SLAB_HEAT_KEYS)
        }
        Scenario::EqForce => {
            let cavity = cavity_at(config, gap(config.d)).map_err(|e| e.to_string())?;
            let result =
                eq_pressure(temps.t1, &cavity, config.tol).map_err(|e| e.to_string())?;
            collect(&result, EQ_FORCE_KEYS)
        }
        Scenario::AtomForce => {
            let atom = atom_at(config, gap(config.z_a)).map_err(|e| e.to_string())?;
            let result =
                atom_total_force(&atom, &temps, config.tol).map_err(|e| e.to_string())?;
            Ok(vec![
                result.total,
                result.eq_part,
                result.term_distance_independent,
                result.term_propagative,
                result.term_evanescent,
                result.quadrature_error,
            ])
        }
    }
}

/// Flattens a flux result into `[total, breakdown…, error]` column order.
fn collect(result: &FluxResult, keys: &[&str]) -> Result<Vec<f64>, String> {
    let mut out = Vec::with_capacity(keys.len() + 2);
    out.push(result.value);
    for key in keys {
        out.push(
            result
                .channel(key)
                .ok_or_else(|| format!("missing breakdown entry '{key}'"))?,
        );
    }
    out.push(result.quadrature_error);
    Ok(out)
}
