use std::fmt;
use std::io::Write;
use std::path::Path;

use pgtomo::TomoError;
use serde::de::DeserializeOwned;
use serde::Serialize;
use tempfile::NamedTempFile;

#[derive(Debug)]
pub enum CliError {
    /// Malformed or inconsistent input.
    Input(String),
    /// Well-formed input that fails a mathematical precondition.
    Math(String),
    /// A reproduced value outside its tolerance.
    Comparison(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Comparison(_) => 1,
            CliError::Input(_) => 2,
            CliError::Math(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) => write!(f, "input error: {m}"),
            CliError::Math(m) => write!(f, "precondition failure: {m}"),
            CliError::Comparison(m) => write!(f, "comparison failure: {m}"),
        }
    }
}

impl From<TomoError> for CliError {
    fn from(e: TomoError) -> Self {
        if e.is_precondition_failure() {
            CliError::Math(e.to_string())
        } else {
            CliError::Input(e.to_string())
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub fn read_json<T: DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

pub fn to_json<T: Serialize>(value: &T) -> CliResult<Vec<u8>> {
    let mut bytes = serde_json::to_vec_pretty(value)
        .map_err(|e| CliError::Input(format!("serialization: {e}")))?;
    bytes.push(b'\n');
    Ok(bytes)
}

/// Writes the whole file through a temporary in the same directory and a
/// rename, or to stdout without a path.
pub fn write_output(path: Option<&Path>, bytes: &[u8]) -> CliResult<()> {
    let io_err = |e: std::io::Error| CliError::Input(format!("write failed: {e}"));
    let Some(path) = path else {
        let mut out = std::io::stdout().lock();
        return out
            .write_all(bytes)
            .and_then(|_| out.flush())
            .map_err(io_err);
    };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = NamedTempFile::new_in(dir).map_err(io_err)?;
    tmp.write_all(bytes).map_err(io_err)?;
    #[cfg(unix)]
    {
        use std::os::unix::fs::PermissionsExt;
        tmp.as_file()
            .set_permissions(std::fs::Permissions::from_mode(0o644))
            .map_err(io_err)?;
    }
    tmp.as_file().sync_all().map_err(io_err)?;
    tmp.persist(path).map_err(|e| io_err(e.error))?;
    Ok(())
}
