//! Plot-data emission: turn the pipeline CSVs into per-figure files (points,
//! fit lines, residuals) with a JSON sidecar describing axes and expected
//! slopes.

use super::report::{fmt_float, write_csv, ExperimentReport};
use crate::fit::fit_line;
use crate::Result;
use std::path::{Path, PathBuf};

/// Scan the report's CSVs and emit derived plot files next to them.
/// Returns the list of files written.
pub fn emit_plotdata(rep: &ExperimentReport, out_dir: &Path) -> Result<Vec<PathBuf>> {
    let mut written = Vec::new();
    for (csv, _) in &rep.csv_files {
        let name = csv.file_name().and_then(|s| s.to_str()).unwrap_or("");
        match name {
            "blowup_sweep.csv" => {
                let rows = read_csv(csv)?;
                if rows.is_empty() {
                    continue;
                }
                let xs: Vec<f64> = rows.iter().map(|r| r[1].ln()).collect();
                let ys: Vec<f64> = rows.iter().map(|r| r[2].abs().max(1e-300).ln()).collect();
                let f = fit_line(&xs, &ys);
                let plot: Vec<Vec<f64>> = xs
                    .iter()
                    .zip(&ys)
                    .map(|(&x, &y)| vec![x, y, f.slope * x + f.intercept, y - (f.slope * x + f.intercept)])
                    .collect();
                let path = out_dir.join("blowup_sweep_plot.csv");
                write_csv(&path, &["log_h", "log_abs_u", "fit", "residual"], &plot)?;
                sidecar(
                    &path,
                    "log h",
                    "log |U|",
                    &format!("{{\"fitted_slope\": {}, \"expected_slope\": -2.0}}", fmt_float(f.slope)),
                )?;
                written.push(path);
            }
            "noise_sweep.csv" => {
                let rows = read_csv(csv)?;
                let path = out_dir.join("noise_sweep_plot.csv");
                write_csv(&path, &["eps", "estimated_d_mu", "true_d_mu"], &rows)?;
                sidecar(&path, "noise level", "estimated d_mu", "{\"note\": \"degradation curve, not asserted\"}")?;
                written.push(path);
            }
            "asymptotic_ladder.csv" => {
                let rows = read_csv(csv)?;
                let xs: Vec<f64> = rows.iter().map(|r| r[1].ln()).collect();
                let ys: Vec<f64> = rows.iter().map(|r| r[2].max(1e-300).ln()).collect();
                let f = fit_line(&xs, &ys);
                let plot: Vec<Vec<f64>> = rows
                    .iter()
                    .map(|r| vec![r[1], r[2], (f.slope * r[1].ln() + f.intercept).exp()])
                    .collect();
                let path = out_dir.join("asymptotic_plot.csv");
                write_csv(&path, &["parabolic_distance", "kernel_diff", "fit"], &plot)?;
                sidecar(
                    &path,
                    "parabolic distance",
                    "|Gamma_curved - Gamma_flat|",
                    &format!("{{\"fitted_slope\": {}, \"expected_slope_floor\": 0.8}}", fmt_float(f.slope)),
                )?;
                written.push(path);
            }
            _ => {}
        }
    }
    Ok(written)
}

fn sidecar(plot_csv: &Path, x_axis: &str, y_axis: &str, extra: &str) -> Result<()> {
    let path = plot_csv.with_extension("json");
    let body = format!(
        "{{\n  \"x_axis\": \"{x_axis}\",\n  \"y_axis\": \"{y_axis}\",\n  \"meta\": {extra}\n}}\n"
    );
    std::fs::write(path, body)?;
    Ok(())
}

fn read_csv(path: &Path) -> Result<Vec<Vec<f64>>> {
    let text = std::fs::read_to_string(path)?;
    let mut rows = Vec::new();
    for line in text.lines().skip(1) {
        if line.trim().is_empty() {
            continue;
        }
        let row: Vec<f64> = line
            .split(',')
            .map(|c| c.parse::<f64>().unwrap_or(f64::NAN))
            .collect();
        rows.push(row);
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_plot_emitted_with_sidecar() {
        let dir = std::env::temp_dir().join("parprobe_plot_test");
        std::fs::create_dir_all(&dir).unwrap();
        let csv = dir.join("blowup_sweep.csv");
        let rows: Vec<Vec<f64>> = (1..=5)
            .map(|i| {
                let h = 0.1 / i as f64;
                vec![0.36, h, 3.0 / (h * h), f64::NAN, 0.0, 0.0, 0.0]
            })
            .collect();
        let hash = write_csv(
            &csv,
            &["t_bar", "h", "u_volume", "u_dtn_exterior", "s1", "s2", "u_err"],
            &rows,
        )
        .unwrap();
        let rep = ExperimentReport {
            csv_files: vec![(csv, hash)],
            ..Default::default()
        };
        let written = emit_plotdata(&rep, &dir).unwrap();
        assert_eq!(written.len(), 1);
        let sidecar_text = std::fs::read_to_string(written[0].with_extension("json")).unwrap();
        assert!(sidecar_text.contains("fitted_slope"));
        let plot = std::fs::read_to_string(&written[0]).unwrap();
        assert!(plot.lines().count() > 4);
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
