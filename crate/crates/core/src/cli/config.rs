//! Optional TOML configuration. Any key may be omitted; a flag given on the
//! command line wins over the file, and the file wins over the default.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub out_dir: Option<PathBuf>,
    pub threads: Option<usize>,
    pub eps: Option<f64>,
    pub alpha: Option<f64>,
    pub count: Option<usize>,
    pub h_over_eps: Option<f64>,
    pub order: Option<String>,
    pub refinements: Option<usize>,
    pub gamma_bc: Option<String>,
    pub truncation_l: Option<f64>,
    pub near_h: Option<f64>,
    pub eig_tol: Option<f64>,
    pub angle_tol: Option<f64>,
    pub samples: Option<usize>,
    pub alpha_star: Option<f64>,
    pub b: Option<f64>,
    pub d: Option<f64>,
    pub eps_list: Option<Vec<f64>>,
    pub tau_list: Option<Vec<f64>>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        toml::from_str(&text)
            .map_err(|e| Error::InvalidArgument(format!("{}: {e}", path.display())))
    }

    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::InvalidArgument(format!("bad config: {e}")))
    }
}

pub fn pick<T>(flag: Option<T>, file: Option<T>, default: T) -> T {
    flag.or(file).unwrap_or(default)
}

/// Like [`pick`] but without a default: a missing value is a usage error.
pub fn require<T>(flag: Option<T>, file: Option<T>, name: &str) -> Result<T> {
    flag.or(file)
        .ok_or_else(|| Error::InvalidArgument(format!("missing required value --{name}")))
}

pub fn positive(name: &str, v: f64) -> Result<f64> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(Error::InvalidArgument(format!(
            "--{name} must be positive, got {v}"
        )))
    }
}

pub fn angle(name: &str, v: f64) -> Result<f64> {
    if v.is_finite() && v.abs() < std::f64::consts::FRAC_PI_2 {
        Ok(v)
    } else {
        Err(Error::InvalidArgument(format!(
            "--{name} = {v} must lie in (-pi/2, pi/2)"
        )))
    }
}
