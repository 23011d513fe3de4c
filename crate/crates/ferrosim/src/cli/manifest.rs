//! Run manifests: a reproducibility record emitted alongside every run.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

/// Everything needed to reproduce a run bit-identically: the resolved
/// command line, the config files it consumed, and the files it touched.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub subcommand: String,
    pub argv: Vec<String>,
    pub config_files: Vec<String>,
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
}

impl RunManifest {
    pub fn new(subcommand: &str, argv: &[String]) -> Self {
        Self {
            tool: "ferrosim".to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            subcommand: subcommand.to_string(),
            argv: argv.to_vec(),
            config_files: Vec::new(),
            inputs: Vec::new(),
            outputs: Vec::new(),
        }
    }

    /// Manifest location for a run: next to the primary output, or a
    /// fixed name in the working directory for output-less commands.
    pub fn path_for(out: Option<&Path>) -> PathBuf {
        match out {
            Some(out) => {
                let stem = out.file_stem().unwrap_or_default().to_string_lossy();
                out.with_file_name(format!("{stem}.manifest.toml"))
            }
            None => PathBuf::from("ferrosim-run.manifest.toml"),
        }
    }

    pub fn write(&self, path: &Path) -> io::Result<()> {
        let text = toml::to_string_pretty(self)
            .map_err(|e| io::Error::new(io::ErrorKind::InvalidData, e))?;
        fs::write(path, text)
    }

    pub fn read(path: &Path) -> io::Result<Self> {
        let text = fs::read_to_string(path)?;
        toml::from_str(&text).map_err(|e| io::Error::new(io::ErrorKind::InvalidData, e))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn manifest_round_trips() {
        let dir = tempfile::tempdir().unwrap();
        let mut m = RunManifest::new("sweep", &["ferrosim".into(), "sweep".into()]);
        m.outputs.push("iv.csv".into());
        let path = dir.path().join("iv.manifest.toml");
        m.write(&path).unwrap();
        assert_eq!(RunManifest::read(&path).unwrap(), m);
    }

    #[test]
    fn manifest_path_sits_next_to_output() {
        assert_eq!(
            RunManifest::path_for(Some(Path::new("/tmp/iv.csv"))),
            PathBuf::from("/tmp/iv.manifest.toml")
        );
        assert_eq!(
            RunManifest::path_for(None),
            PathBuf::from("ferrosim-run.manifest.toml")
        );
    }
}
