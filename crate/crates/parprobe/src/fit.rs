//! Least-squares line fits used by the sweep and harness reports.

/// Result of fitting y = slope·x + intercept.
#[derive(Clone, Copy, Debug)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    /// Coefficient of determination R².
    pub r_squared: f64,
    /// Root-mean-square residual.
    pub rms_residual: f64,
}

pub fn fit_line(x: &[f64], y: &[f64]) -> LineFit {
    assert_eq!(x.len(), y.len());
    assert!(x.len() >= 2, "need at least two points for a line fit");
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    let mut syy = 0.0;
    for (&xi, &yi) in x.iter().zip(y) {
        sxx += (xi - mx) * (xi - mx);
        sxy += (xi - mx) * (yi - my);
        syy += (yi - my) * (yi - my);
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let mut ss_res = 0.0;
    for (&xi, &yi) in x.iter().zip(y) {
        let r = yi - (slope * xi + intercept);
        ss_res += r * r;
    }
    let r_squared = if syy > 0.0 { 1.0 - ss_res / syy } else { 1.0 };
    LineFit {
        slope,
        intercept,
        r_squared,
        rms_residual: (ss_res / n).sqrt(),
    }
}

/// Mean and population standard deviation.
pub fn mean_std(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    let var = v.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n;
    (mean, var.sqrt())
}
