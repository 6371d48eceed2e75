//! Runtime overrides from a `key=value` file pointed to by the
//! `COPOISSON_CONFIG` environment variable.
//!
//! Recognised keys: `quad.tol` (default report tolerance),
//! `series.nmax` (Euler–Maclaurin truncation override for `zeta`),
//! `zero.grid_dt` (zero-scan grid step), `abel.ladder`
//! (comma-separated ε ladder for Abel-regularised transforms).

use std::fs;

#[derive(Debug, Clone)]
pub struct Overrides {
    pub quad_tol: Option<f64>,
    pub series_nmax: Option<usize>,
    pub zero_grid_dt: Option<f64>,
    pub abel_ladder: Option<Vec<f64>>,
}

impl Default for Overrides {
    fn default() -> Self {
        Self {
            quad_tol: None,
            series_nmax: None,
            zero_grid_dt: None,
            abel_ladder: None,
        }
    }
}

impl Overrides {
    pub fn from_env() -> Result<Self, String> {
        match std::env::var("COPOISSON_CONFIG") {
            Ok(path) => Self::from_file(&path),
            Err(_) => Ok(Self::default()),
        }
    }

    pub fn from_file(path: &str) -> Result<Self, String> {
        let text =
            fs::read_to_string(path).map_err(|e| format!("cannot read config {path}: {e}"))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, String> {
        let mut out = Self::default();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| format!("config line {}: expected key=value", lineno + 1))?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "quad.tol" => {
                    let v: f64 = value.parse().map_err(|_| bad(key, value))?;
                    if v <= 0.0 {
                        return Err(format!("quad.tol must be positive, got {v}"));
                    }
                    out.quad_tol = Some(v);
                }
                "series.nmax" => {
                    out.series_nmax = Some(value.parse().map_err(|_| bad(key, value))?);
                }
                "zero.grid_dt" => {
                    let v: f64 = value.parse().map_err(|_| bad(key, value))?;
                    if v <= 0.0 {
                        return Err(format!("zero.grid_dt must be positive, got {v}"));
                    }
                    out.zero_grid_dt = Some(v);
                }
                "abel.ladder" => {
                    let ladder: Result<Vec<f64>, _> =
                        value.split(',').map(|t| t.trim().parse::<f64>()).collect();
                    let ladder = ladder.map_err(|_| bad(key, value))?;
                    if ladder.len() < 3 || ladder.windows(2).any(|w| w[1] >= w[0] || w[1] <= 0.0) {
                        return Err(
                            "abel.ladder must be >= 3 strictly decreasing positive values".into(),
                        );
                    }
                    out.abel_ladder = Some(ladder);
                }
                _ => return Err(format!("unknown config key `{key}`")),
            }
        }
        Ok(out)
    }
}

fn bad(key: &str, value: &str) -> String {
    format!("cannot parse {key}={value}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_all_keys() {
        let o = Overrides::parse(
            "quad.tol=1e-9\nseries.nmax = 500\nzero.grid_dt=0.02\nabel.ladder=0.1,0.05,0.025\n# comment\n",
        )
        .unwrap();
        assert_eq!(o.quad_tol, Some(1e-9));
        assert_eq!(o.series_nmax, Some(500));
        assert_eq!(o.zero_grid_dt, Some(0.02));
        assert_eq!(o.abel_ladder.unwrap().len(), 3);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(Overrides::parse("nope=1").is_err());
        assert!(Overrides::parse("quad.tol=-1").is_err());
        assert!(Overrides::parse("abel.ladder=0.1,0.2,0.3").is_err());
        assert!(Overrides::parse("quad.tol").is_err());
    }
}
