use std::fmt;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;
use sha2::{Digest, Sha256};

/// Bad flags or flag combinations. Exits with status 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

/// A file that could not be read or written. Exits with status 2.
#[derive(Debug)]
pub struct FileError {
    pub path: PathBuf,
    pub source: io::Error,
    pub reading: bool,
}

impl fmt::Display for FileError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.reading, self.source.kind()) {
            (true, io::ErrorKind::NotFound) => write!(f, "no such input: {}", self.path.display()),
            (true, _) => write!(f, "cannot read {}: {}", self.path.display(), self.source),
            (false, _) => write!(f, "cannot write {}: {}", self.path.display(), self.source),
        }
    }
}

impl std::error::Error for FileError {}

pub fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

#[derive(Debug, Clone, Serialize)]
pub struct InputDigest {
    pub path: PathBuf,
    pub sha256: String,
}

/// Reads input files and remembers their digests for the run manifest.
#[derive(Debug, Default)]
pub struct Inputs {
    digests: Vec<InputDigest>,
}

impl Inputs {
    pub fn read(&mut self, path: &Path) -> Result<String> {
        let bytes = fs::read(path).map_err(|source| FileError {
            path: path.to_path_buf(),
            source,
            reading: true,
        })?;
        self.digests.push(InputDigest {
            path: path.to_path_buf(),
            sha256: hex::encode(Sha256::digest(&bytes)),
        });
        String::from_utf8(bytes).with_context(|| format!("{} is not valid UTF-8", path.display()))
    }

    pub fn read_json<T: serde::de::DeserializeOwned>(&mut self, path: &Path) -> Result<T> {
        let text = self.read(path)?;
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }

    pub fn into_digests(self) -> Vec<InputDigest> {
        self.digests
    }
}

/// Everything needed to reproduce one command's output.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: &'static str,
    pub settings: serde_json::Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub inputs: Vec<InputDigest>,
    pub version: &'static str,
}

impl RunManifest {
    pub fn new(command: &'static str, settings: serde_json::Value, seed: Option<u64>, inputs: Inputs) -> Self {
        RunManifest {
            command,
            settings,
            seed,
            inputs: inputs.into_digests(),
            version: env!("CARGO_PKG_VERSION"),
        }
    }
}

fn write_file(path: &Path, content: &str) -> Result<()> {
    fs::write(path, content).map_err(|source| {
        FileError {
            path: path.to_path_buf(),
            source,
            reading: false,
        }
        .into()
    })
}

/// Writes `content` to `output` (or standard output) and the manifest next
/// to it as `<output>.manifest.json` (or as a `# manifest:` line on stderr).
pub fn emit(output: Option<&Path>, content: &str, manifest: &RunManifest) -> Result<()> {
    match output {
        Some(path) => {
            write_file(path, content)?;
            let mut name = path.as_os_str().to_owned();
            name.push(".manifest.json");
            let mut json = serde_json::to_string_pretty(manifest)?;
            json.push('\n');
            write_file(Path::new(&name), &json)
        }
        None => {
            let mut out = io::stdout().lock();
            out.write_all(content.as_bytes())?;
            out.flush()?;
            eprintln!("# manifest: {}", serde_json::to_string(manifest)?);
            Ok(())
        }
    }
}

pub fn to_json<T: Serialize>(items: &[T]) -> Result<String> {
    let mut s = serde_json::to_string_pretty(items)?;
    s.push('\n');
    Ok(s)
}
