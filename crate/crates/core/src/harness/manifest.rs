//! Run manifests: the parameters of a run and a hash of what it produced.

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Manifest {
    pub command: String,
    pub version: String,
    pub params: serde_json::Value,
    /// Output file names with their SHA-256 digests, in the order written.
    pub outputs: Vec<OutputDigest>,
    /// SHA-256 over the parameters and every output digest.
    pub content_hash: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OutputDigest {
    pub name: String,
    pub sha256: String,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

impl Manifest {
    pub fn new<P: Serialize>(command: &str, params: &P) -> Result<Self> {
        let params = serde_json::to_value(params)
            .map_err(|e| Error::InvalidArgument(format!("unserializable params: {e}")))?;
        let mut m = Self {
            command: command.into(),
            version: env!("CARGO_PKG_VERSION").into(),
            params,
            outputs: Vec::new(),
            content_hash: String::new(),
        };
        m.rehash();
        Ok(m)
    }

    pub fn add_output(&mut self, name: &str, bytes: &[u8]) {
        self.outputs.push(OutputDigest {
            name: name.into(),
            sha256: sha256_hex(bytes),
        });
        self.rehash();
    }

    fn rehash(&mut self) {
        let mut h = Sha256::new();
        h.update(self.command.as_bytes());
        h.update(self.version.as_bytes());
        h.update(self.params.to_string().as_bytes());
        for o in &self.outputs {
            h.update(o.name.as_bytes());
            h.update(o.sha256.as_bytes());
        }
        self.content_hash = hex::encode(h.finalize());
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("manifest serializes")
    }
}
