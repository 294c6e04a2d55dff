use std::io::Write;

use super::{SweepError, SweepResult};

pub const PARAMETERS: [&str; 4] = ["eta", "crit_rate", "beta_rate", "omega"];
pub const Z_COLUMNS: [&str; 4] = ["initial_failures", "final_failures", "iterations", "total_value_lost"];

/// `z` over an `x` by `y` grid; `None` marks an error row.
#[derive(Debug, Clone, PartialEq)]
pub struct Heatmap {
    pub x_param: String,
    pub y_param: String,
    pub z_column: String,
    pub x_values: Vec<f64>,
    pub y_values: Vec<f64>,
    /// `cells[row][col]` for `y_values[row]`, `x_values[col]`.
    pub cells: Vec<Vec<Option<f64>>>,
}

impl Heatmap {
    pub fn file_name(&self) -> String {
        format!("heatmap_{}.csv", self.z_column)
    }

    pub fn to_csv(&self) -> String {
        let mut s = format!("{}\\{}", self.y_param, self.x_param);
        for x in &self.x_values {
            s.push_str(&format!(",{x}"));
        }
        s.push('\n');
        for (y, row) in self.y_values.iter().zip(&self.cells) {
            s.push_str(&y.to_string());
            for c in row {
                s.push(',');
                if let Some(v) = c {
                    s.push_str(&v.to_string());
                }
            }
            s.push('\n');
        }
        s
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        out.write_all(self.to_csv().as_bytes())
    }
}

fn axis_values(result: &SweepResult, name: &str) -> Vec<f64> {
    let spec = &result.spec;
    let v = match name {
        "eta" => &spec.eta_values,
        "crit_rate" => &spec.crit_values,
        "beta_rate" => &spec.beta_values,
        _ => &spec.omega_values,
    };
    let mut out: Vec<f64> = Vec::new();
    for &x in v {
        if !out.iter().any(|&y| y.to_bits() == x.to_bits()) {
            out.push(x);
        }
    }
    out
}

/// Rearranges one result column into a matrix; every other parameter must
/// take a single value.
pub fn heatmap_export(result: &SweepResult, x: &str, y: &str, z: &str) -> Result<Heatmap, SweepError> {
    for p in [x, y] {
        if !PARAMETERS.contains(&p) {
            return Err(SweepError::UnknownParameter(p.to_string()));
        }
    }
    if !Z_COLUMNS.contains(&z) {
        return Err(SweepError::UnknownParameter(z.to_string()));
    }
    if x == y {
        return Err(SweepError::DegenerateAxis(x.to_string()));
    }
    let xs = axis_values(result, x);
    let ys = axis_values(result, y);
    for (name, vals) in [(x, &xs), (y, &ys)] {
        if vals.len() < 2 {
            return Err(SweepError::DegenerateAxis(name.to_string()));
        }
    }
    let mut cells = vec![vec![None; xs.len()]; ys.len()];
    let mut counts = vec![vec![0usize; xs.len()]; ys.len()];
    for row in &result.rows {
        let xv = row.parameter(x).unwrap();
        let yv = row.parameter(y).unwrap();
        let (Some(c), Some(r)) = (
            xs.iter().position(|v| v.to_bits() == xv.to_bits()),
            ys.iter().position(|v| v.to_bits() == yv.to_bits()),
        ) else {
            continue;
        };
        counts[r][c] += 1;
        if counts[r][c] > 1 {
            let param = PARAMETERS
                .iter()
                .find(|p| **p != x && **p != y && axis_values(result, p).len() > 1)
                .map_or_else(|| "a grid value".to_string(), |p| p.to_string());
            return Err(SweepError::AmbiguousCell { x: xv, y: yv, count: counts[r][c], param });
        }
        cells[r][c] = row.column(z).unwrap();
    }
    Ok(Heatmap {
        x_param: x.to_string(),
        y_param: y.to_string(),
        z_column: z.to_string(),
        x_values: xs,
        y_values: ys,
        cells,
    })
}
