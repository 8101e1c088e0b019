use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::Result;
use crate::harness::Manifest;

/// Environment variable that overrides the output root.
pub const OUT_DIR_ENV: &str = "STRIP_LAB_OUT";
pub const DEFAULT_OUT_DIR: &str = "strip-lab-out";

/// One subcommand's output directory and the manifest describing it.
pub struct RunDir {
    pub path: PathBuf,
    manifest: Manifest,
}

impl RunDir {
    pub fn create<P: Serialize>(root: &Path, command: &str, params: &P) -> Result<Self> {
        let path = root.join(command);
        fs::create_dir_all(&path)?;
        Ok(Self {
            path,
            manifest: Manifest::new(command, params)?,
        })
    }

    pub fn write(&mut self, name: &str, bytes: &[u8]) -> Result<PathBuf> {
        let p = self.path.join(name);
        fs::write(&p, bytes)?;
        self.manifest.add_output(name, bytes);
        Ok(p)
    }

    pub fn write_json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<PathBuf> {
        let mut text = serde_json::to_string_pretty(value)?;
        text.push('\n');
        self.write(name, text.as_bytes())
    }

    /// Writes `manifest.json` and returns the content hash.
    pub fn finish(self) -> Result<String> {
        let hash = self.manifest.content_hash.clone();
        fs::write(
            self.path.join("manifest.json"),
            self.manifest.to_json() + "\n",
        )?;
        Ok(hash)
    }
}

/// CSV text with a header row; floats in `{:.11e}`.
pub fn write_csv(header: &[&str], rows: &[Vec<Cell>]) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for r in rows {
        let cells: Vec<String> = r.iter().map(Cell::render).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

pub enum Cell {
    F(f64),
    I(usize),
    S(String),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::F(v) => format!("{v:.11e}"),
            Cell::I(v) => v.to_string(),
            Cell::S(v) => v.clone(),
        }
    }
}
