//! Small least-squares helpers for exponent and decay fits.

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    /// Root-mean-square residual.
    pub residual: f64,
    pub r_squared: f64,
}

/// Ordinary least squares fit of `y = slope * x + intercept`.
pub fn fit_line(xs: &[f64], ys: &[f64]) -> LineFit {
    assert_eq!(xs.len(), ys.len());
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my) * (y - my)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let intercept = my - slope * mx;
    let ss_res: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| {
            let r = y - (slope * x + intercept);
            r * r
        })
        .sum();
    let r_squared = if syy > 0.0 { 1.0 - ss_res / syy } else { 1.0 };
    LineFit {
        slope,
        intercept,
        residual: (ss_res / n).sqrt(),
        r_squared,
    }
}

/// Fits `log|y| ~ p log t` and returns the exponent fit.
pub fn fit_power_law(ts: &[f64], ys: &[f64]) -> LineFit {
    let lx: Vec<f64> = ts.iter().map(|t| t.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.abs().max(1e-300).ln()).collect();
    fit_line(&lx, &ly)
}

/// Power-law fit of the envelope of an oscillating sequence: samples are grouped
/// into consecutive windows of `window` points, and the maximum of each window
/// is fitted against its abscissa.
pub fn fit_envelope_power_law(ts: &[f64], ys: &[f64], window: usize) -> LineFit {
    let mut ex = Vec::new();
    let mut ey = Vec::new();
    for (tc, yc) in ts.chunks(window).zip(ys.chunks(window)) {
        if tc.len() < window {
            break;
        }
        let (i, y) = yc
            .iter()
            .enumerate()
            .map(|(i, y)| (i, y.abs()))
            .fold((0, f64::MIN), |acc, v| if v.1 > acc.1 { v } else { acc });
        ex.push(tc[i]);
        ey.push(y);
    }
    fit_power_law(&ex, &ey)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_line() {
        let xs = [0.0, 1.0, 2.0, 3.0];
        let ys: Vec<f64> = xs.iter().map(|x| 2.0 * x - 1.0).collect();
        let f = fit_line(&xs, &ys);
        assert!((f.slope - 2.0).abs() < 1e-14);
        assert!((f.intercept + 1.0).abs() < 1e-14);
        assert!(f.residual < 1e-14);
        assert!((f.r_squared - 1.0).abs() < 1e-14);
    }

    #[test]
    fn envelope_of_damped_cosine() {
        let ts: Vec<f64> = (0..4000).map(|i| 50.0 + i as f64 * 0.1).collect();
        let ys: Vec<f64> = ts.iter().map(|t| t.powf(-1.5) * t.cos()).collect();
        let f = fit_envelope_power_law(&ts, &ys, 63);
        assert!((f.slope + 1.5).abs() < 0.02, "{f:?}");
    }
}
