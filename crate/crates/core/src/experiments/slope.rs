use crate::error::{Error, Result};
use crate::stream::TracePoint;

pub const MIN_SLOPE_POINTS: usize = 10;

/// Least-squares slope of `log(metric)` against `log(n)` over the trailing
/// `window_fraction` of the trace. Non-finite rows in the window are skipped.
pub fn fit_loglog_slope(points: &[TracePoint], window_fraction: f64) -> Result<f64> {
    if !(window_fraction > 0.0 && window_fraction < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "window fraction must be in (0, 1), got {window_fraction}"
        )));
    }
    let take = ((points.len() as f64) * window_fraction).ceil() as usize;
    let window = &points[points.len() - take..];
    let finite: Vec<&TracePoint> = window.iter().filter(|p| p.metric.is_finite()).collect();
    if finite.len() < MIN_SLOPE_POINTS {
        return Err(Error::TooFewPoints {
            needed: MIN_SLOPE_POINTS,
            found: finite.len(),
        });
    }
    if let Some(bad) = finite.iter().find(|p| p.metric <= 0.0 || p.n == 0) {
        return Err(Error::InvalidArgument(format!(
            "log-log fit needs positive values; n = {} has metric {}",
            bad.n, bad.metric
        )));
    }
    let xs: Vec<f64> = finite.iter().map(|p| (p.n as f64).ln()).collect();
    let ys: Vec<f64> = finite.iter().map(|p| p.metric.ln()).collect();
    let k = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidArgument("all points share the same n".into()));
    }
    Ok(sxy / sxx)
}
