//! Eta-grid specifications: an explicit comma list (`1,2,5,10`) or a
//! log-spaced family (`logspace(1,100,50)`).

use imbalance_core::landscape::logspace_eta;
use imbalance_core::{Error, Result};

pub fn parse_eta_grid(spec: &str) -> Result<Vec<f64>> {
    let spec = spec.trim();
    if let Some(inner) = spec
        .strip_prefix("logspace(")
        .and_then(|s| s.strip_suffix(')'))
    {
        let parts: Vec<&str> = inner.split(',').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(Error::Input(format!(
                "eta grid: logspace takes (min,max,points), got `{spec}`"
            )));
        }
        let min: f64 = parse_num(parts[0], "eta grid logspace min")?;
        let max: f64 = parse_num(parts[1], "eta grid logspace max")?;
        let points: usize = parts[2].parse().map_err(|_| {
            Error::Input(format!("eta grid: logspace points must be an integer, got `{}`", parts[2]))
        })?;
        return logspace_eta(min, max, points);
    }
    let grid: Vec<f64> = spec
        .split(',')
        .map(|tok| parse_num(tok.trim(), "eta grid entry"))
        .collect::<Result<_>>()?;
    validate_grid(&grid)?;
    Ok(grid)
}

pub fn parse_num(token: &str, what: &str) -> Result<f64> {
    token
        .parse::<f64>()
        .map_err(|_| Error::Input(format!("{what}: `{token}` is not a number")))
}

fn validate_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::input("eta grid is empty"));
    }
    for &eta in grid {
        if !eta.is_finite() || eta < 1.0 {
            return Err(Error::Input(format!("eta grid entries must be >= 1, got {eta}")));
        }
    }
    for w in grid.windows(2) {
        if w[1] <= w[0] {
            return Err(Error::input("eta grid must be strictly ascending"));
        }
    }
    Ok(())
}
