//! Run configuration read by the command-line front end.

use serde::{Deserialize, Serialize};
use std::path::Path;

use crate::error::{Error, Result};
use crate::model::{Potential, PotentialSpec, ProblemConfig, MIN_GRID};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSection {
    pub frozen: Vec<f64>,
    pub alpha: u8,
    pub beta: u8,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Numeric {
    /// Sample grid for Fourier-specified potentials.
    #[serde(rename = "M_grid", default = "defaults::m_grid")]
    pub m_grid: usize,
    #[serde(rename = "K_fourier", default = "defaults::k_fourier")]
    pub k_fourier: usize,
    /// Gauss-Legendre nodes per quadrature panel.
    #[serde(default = "defaults::quad_panels")]
    pub quad_panels: usize,
    #[serde(default = "defaults::scan_step")]
    pub scan_step: f64,
    #[serde(default = "defaults::rk4_step")]
    pub rk4_step: f64,
    #[serde(rename = "T_cutoff", default = "defaults::t_cutoff")]
    pub t_cutoff: f64,
    #[serde(default = "defaults::h_probe")]
    pub h_probe: f64,
}

mod defaults {
    pub fn m_grid() -> usize {
        256
    }
    pub fn k_fourier() -> usize {
        64
    }
    pub fn quad_panels() -> usize {
        crate::quad::DEFAULT_ORDER
    }
    pub fn scan_step() -> f64 {
        0.05
    }
    pub fn rk4_step() -> f64 {
        std::f64::consts::PI / 4096.0
    }
    pub fn t_cutoff() -> f64 {
        crate::instability::DEFAULT_CUTOFF
    }
    pub fn h_probe() -> f64 {
        4.0
    }
}

impl Default for Numeric {
    fn default() -> Self {
        Numeric {
            m_grid: defaults::m_grid(),
            k_fourier: defaults::k_fourier(),
            quad_panels: defaults::quad_panels(),
            scan_step: defaults::scan_step(),
            rk4_step: defaults::rk4_step(),
            t_cutoff: defaults::t_cutoff(),
            h_probe: defaults::h_probe(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Output {
    pub path: String,
    pub format: Format,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub problem: ProblemSection,
    pub potentials: Vec<PotentialSpec>,
    #[serde(default)]
    pub numeric: Numeric,
    #[serde(default)]
    pub output: Option<Output>,
}

impl RunConfig {
    /// Parses and validates; errors carry the dotted path of the bad field.
    pub fn from_json(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let cfg: RunConfig = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            Error::invalid(if path == "." { "<root>".into() } else { path }, e.inner().to_string())
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::invalid("--config", format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<()> {
        let n = &self.numeric;
        if n.m_grid < MIN_GRID {
            return Err(Error::invalid("numeric.M_grid", format!("must be at least {MIN_GRID}")));
        }
        for (name, v) in [("K_fourier", n.k_fourier), ("quad_panels", n.quad_panels)] {
            if v == 0 {
                return Err(Error::invalid(format!("numeric.{name}"), "must be positive"));
            }
        }
        for (name, v) in [
            ("scan_step", n.scan_step),
            ("rk4_step", n.rk4_step),
            ("T_cutoff", n.t_cutoff),
            ("h_probe", n.h_probe),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::invalid(format!("numeric.{name}"), "must be positive and finite"));
            }
        }
        if self.potentials.is_empty() || self.potentials.len() > 2 {
            return Err(Error::invalid("potentials", "expected one or two potential specs"));
        }
        self.problem()?;
        self.build_potentials()?;
        Ok(())
    }

    pub fn problem(&self) -> Result<ProblemConfig<f64>> {
        let p = &self.problem;
        ProblemConfig::new(p.frozen.clone(), p.alpha, p.beta)
    }

    pub fn build_potentials(&self) -> Result<Vec<Potential<f64>>> {
        self.potentials
            .iter()
            .enumerate()
            .map(|(i, spec)| {
                spec.build(self.numeric.m_grid).map_err(|e| match e {
                    Error::Invalid { field, reason } => Error::invalid(format!("potentials[{i}].{field}"), reason),
                    other => other,
                })
            })
            .collect()
    }

    /// Requires exactly `n` potentials.
    pub fn expect_potentials(&self, n: usize) -> Result<Vec<Potential<f64>>> {
        if self.potentials.len() != n {
            return Err(Error::invalid(
                "potentials",
                format!("this subcommand needs exactly {n} potential spec(s), found {}", self.potentials.len()),
            ));
        }
        self.build_potentials()
    }

    /// `key=value` lines recording every numeric setting.
    pub fn header_lines(&self) -> Vec<String> {
        let n = &self.numeric;
        vec![
            format!(
                "problem: frozen={:?} alpha={} beta={}",
                self.problem.frozen, self.problem.alpha, self.problem.beta
            ),
            format!(
                "numeric: M_grid={} K_fourier={} quad_panels={} scan_step={} rk4_step={} T_cutoff={} h_probe={}",
                n.m_grid, n.k_fourier, n.quad_panels, n.scan_step, n.rk4_step, n.t_cutoff, n.h_probe
            ),
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const ZERO: &str = r#"{"problem":{"frozen":[1.0],"alpha":0,"beta":0},
        "potentials":[{"kind":"samples","M":16,"values":[0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0]}]}"#;

    #[test]
    fn defaults_fill_numeric() {
        let cfg = RunConfig::from_json(ZERO).unwrap();
        assert_eq!(cfg.numeric, Numeric::default());
        assert!(cfg.output.is_none());
    }

    #[test]
    fn errors_name_the_field() {
        let bad = ZERO.replace("\"alpha\":0", "\"alpha\":0,\"gamma\":1");
        match RunConfig::from_json(&bad) {
            Err(Error::Invalid { field, .. }) => assert_eq!(field, "problem.gamma"),
            other => panic!("{other:?}"),
        }
        let bad = ZERO.replace("[1.0]", "[4.0]");
        match RunConfig::from_json(&bad) {
            Err(Error::Invalid { field, .. }) => assert_eq!(field, "problem.frozen[0]"),
            other => panic!("{other:?}"),
        }
        let bad = ZERO.replace("}]}", "}], \"numeric\":{\"scan_step\":-1}}");
        match RunConfig::from_json(&bad) {
            Err(Error::Invalid { field, .. }) => assert_eq!(field, "numeric.scan_step"),
            other => panic!("{other:?}"),
        }
        let bad = ZERO.replace("\"M\":16", "\"M\":\"x\"");
        match RunConfig::from_json(&bad) {
            Err(Error::Invalid { field, .. }) => assert!(field.starts_with("potentials[0]"), "{field}"),
            other => panic!("{other:?}"),
        }
    }
}
