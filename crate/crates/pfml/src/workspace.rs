//! On-disk repositories of a pipeline run.
//!
//! ```text
//! <root>/responses/  response matrices
//!        params/     item parameters and abilities
//!        forms/      assembled test forms
//!        kb/         knowledge bases (FML-XML)
//!        results/    curves and summaries
//!        runs/       one record per command invocation
//! ```
//!
//! Every artifact `x` gets a sidecar `x.meta.json` naming the command that
//! wrote it, the SHA-256 of its effective configuration and the seed.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::config::Config;

pub const DIRS: [&str; 6] = ["responses", "params", "forms", "kb", "results", "runs"];

#[derive(Debug, thiserror::Error)]
pub enum WorkspaceError {
    #[error("missing {path}; run `pfml {producer}` first")]
    Missing { path: String, producer: &'static str },
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{}: {source}", path.display())]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArtifactMeta {
    pub command: String,
    pub config_sha256: String,
    pub seed: u64,
    pub config: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

/// Command, effective configuration and seed of one invocation.
#[derive(Debug, Clone)]
pub struct RunContext {
    pub command: String,
    pub config: Config,
    pub seed: u64,
    pub notes: Vec<String>,
}

impl RunContext {
    pub fn new(command: impl Into<String>, config: Config, seed: u64) -> Self {
        Self {
            command: command.into(),
            config,
            seed,
            notes: Vec::new(),
        }
    }

    pub fn meta(&self) -> ArtifactMeta {
        let config = self.config.canonical();
        ArtifactMeta {
            command: self.command.clone(),
            config_sha256: hex::encode(Sha256::digest(config.as_bytes())),
            seed: self.seed,
            config,
            notes: self.notes.clone(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Workspace {
    root: PathBuf,
}

impl Workspace {
    /// Creates the repository directories if needed.
    pub fn open(root: impl Into<PathBuf>) -> Result<Self, WorkspaceError> {
        let root = root.into();
        for d in DIRS {
            let p = root.join(d);
            fs::create_dir_all(&p).map_err(|source| WorkspaceError::Io { path: p, source })?;
        }
        Ok(Self { root })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn path(&self, rel: &str) -> PathBuf {
        self.root.join(rel)
    }

    /// Path of an upstream artifact, or an error naming its producer.
    pub fn require(&self, rel: &str, producer: &'static str) -> Result<PathBuf, WorkspaceError> {
        let p = self.path(rel);
        if p.is_file() {
            Ok(p)
        } else {
            Err(WorkspaceError::Missing {
                path: p.display().to_string(),
                producer,
            })
        }
    }

    /// Writes the metadata sidecar for an artifact just produced.
    pub fn record(&self, artifact: &Path, ctx: &RunContext) -> Result<(), WorkspaceError> {
        let mut name = artifact.as_os_str().to_owned();
        name.push(".meta.json");
        write_json(Path::new(&name), &ctx.meta())
    }

    /// Appends a run record under `runs/`, numbered after the existing ones.
    pub fn log_run(&self, ctx: &RunContext, outputs: &[PathBuf]) -> Result<PathBuf, WorkspaceError> {
        let dir = self.path("runs");
        let count = fs::read_dir(&dir)
            .map_err(|source| WorkspaceError::Io {
                path: dir.clone(),
                source,
            })?
            .count();
        let path = dir.join(format!("{:04}-{}.json", count + 1, ctx.command));
        let outputs: Vec<String> = outputs
            .iter()
            .map(|p| p.strip_prefix(&self.root).unwrap_or(p).display().to_string())
            .collect();
        let record = serde_json::json!({ "meta": ctx.meta(), "outputs": outputs });
        write_json(&path, &record)?;
        Ok(path)
    }
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), WorkspaceError> {
    let text = serde_json::to_string_pretty(value).map_err(|source| WorkspaceError::Json {
        path: path.to_owned(),
        source,
    })?;
    fs::write(path, text + "\n").map_err(|source| WorkspaceError::Io {
        path: path.to_owned(),
        source,
    })
}

pub fn read_meta(artifact: &Path) -> Result<ArtifactMeta, WorkspaceError> {
    let mut name = artifact.as_os_str().to_owned();
    name.push(".meta.json");
    let path = PathBuf::from(name);
    let text = fs::read_to_string(&path).map_err(|source| WorkspaceError::Io {
        path: path.clone(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| WorkspaceError::Json { path, source })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn creates_layout_and_sidecars() {
        let dir = tempfile::tempdir().unwrap();
        let ws = Workspace::open(dir.path()).unwrap();
        for d in DIRS {
            assert!(dir.path().join(d).is_dir());
        }
        let err = ws.require("params/items.csv", "estimate-gs").unwrap_err().to_string();
        assert!(err.contains("pfml estimate-gs"), "{err}");

        let artifact = ws.path("kb/seed_kb.xml");
        fs::write(&artifact, "x").unwrap();
        let mut config = Config::default();
        config.set("budget", 10);
        let ctx = RunContext::new("build-kb", config, 3);
        ws.record(&artifact, &ctx).unwrap();
        let meta = read_meta(&artifact).unwrap();
        assert_eq!(meta, ctx.meta());
        assert_eq!(meta.config_sha256.len(), 64);
        let first = ws.log_run(&ctx, std::slice::from_ref(&artifact)).unwrap();
        let second = ws.log_run(&ctx, &[artifact]).unwrap();
        assert!(first.ends_with("0001-build-kb.json"));
        assert!(second.ends_with("0002-build-kb.json"));
    }
}
