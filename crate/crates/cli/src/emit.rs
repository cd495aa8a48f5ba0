//! Output serialization: CSV and JSON emission.
//!
//! Floats are printed with 17 significant digits, enough to reproduce the
//! underlying f64 bit for bit, and all output is a pure function of the
//! table so repeated runs emit byte-identical files.

use crate::sweep::Table;
use serde_json::{Map, Number, Value};
use std::path::Path;

/// Renders a table as CSV with a single header row.
///
/// # Arguments
///
/// * `table` - The completed run.
///
/// # Returns
///
/// The CSV document: header row, then one row per sweep point with empty
/// value cells and the message in the final `error` column for failed
/// points. An empty table yields just the header.
pub fn to_csv(table: &Table) -> String {
    let mut out = String::new();
    out.push_str(table.var_column);
    for column in table.value_columns {
        out.push(',');
        out.push_str(column);
    }
    out.push_str(",error\n");
    for row in &table.rows {
        out.push_str(&float_cell(row.var));
        match &row.values {
            Some(values) => {
                for v in values {
                    out.push(',');
                    out.push_str(&float_cell(*v));
                }
            }
            None => {
                for _ in table.value_columns {
                    out.push(',');
                }
            }
        }
        out.push(',');
        if let Some(message) = &row.error {
            out.push_str(&csv_field(message));
        }
        out.push('\n');
    }
    out
}

/// Renders a table as a JSON array of objects with identical keys.
///
/// # Arguments
///
/// * `table` - The completed run.
///
/// # Returns
///
/// A pretty-printed JSON array; every object carries the swept variable,
/// each value column (null for failed points), and an `error` key that is
/// null on success.
pub fn to_json(table: &Table) -> String {
    let rows: Vec<Value> = table
        .rows
        .iter()
        .map(|row| {
            let mut object = Map::new();
            object.insert(table.var_column.to_string(), json_number(row.var));
            for (i, column) in table.value_columns.iter().enumerate() {
                let cell = row
                    .values
                    .as_ref()
                    .map(|values| json_number(values[i]))
                    .unwrap_or(Value::Null);
                object.insert(column.to_string(), cell);
            }
            let error = row
                .error
                .as_ref()
                .map(|m| Value::String(m.clone()))
                .unwrap_or(Value::Null);
            object.insert("error".to_string(), error);
            Value::Object(object)
        })
        .collect();
    let mut text = serde_json::to_string_pretty(&Value::Array(rows))
        .expect("serialization of plain values cannot fail");
    text.push('\n');
    text
}

/// Writes rendered output to a file, or to standard output when no path
/// is given.
pub fn write_output(content: &str, path: Option<&Path>) -> Result<(), String> {
    match path {
        Some(path) => std::fs::write(path, content)
            .map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

/// Formats one float with 17 significant digits (bitwise round-trip safe).
fn float_cell(v: f64) -> String {
    format!("{v:.16e}")
}

/// Quotes a CSV field when it contains a delimiter, quote, or newline.
fn csv_field(text: &str) -> String {
    if text.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", text.replace('"', "\"\""))
    } else {
        text.to_string()
    }
}

/// Converts a float to a JSON number, mapping non-finite values to null.
fn json_number(v: f64) -> Value {
    Number::from_f64(v).map(Value::Number).unwrap_or(Value::Null)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sweep::Row;

    const COLUMNS: &[&str] = &["total_Pa", "err_Pa"];

    fn table(rows: Vec<Row>) -> Table {
        Table { var_column: "d_m", value_columns: COLUMNS, rows }
    }

    #[test]
    fn empty_table_emits_a_header_only_csv() {
        let csv = to_csv(&table(vec![]));
        assert_eq!(csv, "d_m,total_Pa,err_Pa,error\n");
    }

    #[test]
    fn column_count_is_variable_plus_components_plus_error() {
        let t = table(vec![Row {
            var: 1.0e-6,
            values: Some(vec![-2.5, 1.0e-8]),
            error: None,
        }]);
        let csv = to_csv(&t);
        for line in csv.lines() {
            assert_eq!(line.split(',').count(), 1 + COLUMNS.len() + 1, "{line}");
        }
    }

    #[test]
    fn csv_floats_round_trip_bitwise() {
        let awkward = [
            -1.3001257730000001e-3,
            std::f64::consts::PI * 1.0e-21,
            4.9e-324,
            -0.0,
            459.300328,
        ];
        for v in awkward {
            let cell = float_cell(v);
            let back: f64 = cell.parse().unwrap();
            assert_eq!(back.to_bits(), v.to_bits(), "{v} -> {cell} -> {back}");
        }
    }

    #[test]
    fn error_messages_with_commas_are_quoted() {
        let t = table(vec![Row {
            var: 2.0e-6,
            values: None,
            error: Some("bad, very \"bad\"".to_string()),
        }]);
        let csv = to_csv(&t);
        let row = csv.lines().nth(1).unwrap();
        let expected_start = format!("{},,,", float_cell(2.0e-6));
        assert!(row.starts_with(&expected_start), "{row}");
        assert!(row.ends_with("\"bad, very \"\"bad\"\"\""), "{row}");
    }

    #[test]
    fn json_objects_share_keys_and_numbers_round_trip() {
        let t = table(vec![
            Row { var: 1.0e-6, values: Some(vec![-2.5e-3, 3.0e-9]), error: None },
            Row { var: 2.0e-6, values: None, error: Some("boom".to_string()) },
        ]);
        let text = to_json(&t);
        let parsed: Vec<serde_json::Map<String, Value>> =
            serde_json::from_str(&text).unwrap();
        assert_eq!(parsed.len(), 2);
        let keys: Vec<&String> = parsed[0].keys().collect();
        let keys2: Vec<&String> = parsed[1].keys().collect();
        assert_eq!(keys, keys2);
        assert_eq!(parsed[0].len(), 1 + COLUMNS.len() + 1);
        assert_eq!(parsed[0]["total_Pa"].as_f64().unwrap().to_bits(), (-2.5e-3f64).to_bits());
        assert!(parsed[1]["total_Pa"].is_null());
        assert_eq!(parsed[1]["error"].as_str().unwrap(), "boom");
    }
}
