use std::collections::BTreeMap;
use std::path::Path;
use std::time::Duration;

use serde::Serialize;
use sha2::{Digest, Sha256};

/// Record of one command invocation, printed as a single JSON line.
#[derive(Clone, Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub parameters: serde_json::Value,
    pub inputs: BTreeMap<String, String>,
    pub outputs: BTreeMap<String, String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub solver: Option<String>,
    pub wall_time_ms: u128,
    pub result: serde_json::Value,
}

impl RunManifest {
    pub fn new(command: &str, parameters: serde_json::Value) -> Self {
        RunManifest {
            command: command.to_string(),
            parameters,
            inputs: BTreeMap::new(),
            outputs: BTreeMap::new(),
            solver: None,
            wall_time_ms: 0,
            result: serde_json::Value::Null,
        }
    }

    pub fn input(&mut self, path: &Path) -> std::io::Result<()> {
        self.inputs
            .insert(path.display().to_string(), file_digest(path)?);
        Ok(())
    }

    pub fn output(&mut self, path: &Path) -> std::io::Result<()> {
        self.outputs
            .insert(path.display().to_string(), file_digest(path)?);
        Ok(())
    }

    pub fn finish(&mut self, elapsed: Duration, result: serde_json::Value) {
        self.wall_time_ms = elapsed.as_millis();
        self.result = result;
    }
}

pub fn digest(bytes: &[u8]) -> String {
    format!("sha256:{}", hex::encode(Sha256::digest(bytes)))
}

pub fn file_digest(path: &Path) -> std::io::Result<String> {
    Ok(digest(&std::fs::read(path)?))
}
