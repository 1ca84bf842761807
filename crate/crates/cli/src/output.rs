use std::fmt;
use std::io::Write;
use std::path::Path;

use serde::Serialize;

pub const EXIT_USAGE: u8 = 1;
pub const EXIT_UNPHYSICAL: u8 = 2;
pub const EXIT_VERIFICATION: u8 = 3;

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    pub fn unphysical(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_UNPHYSICAL,
            message: message.into(),
        }
    }

    pub fn verification(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_VERIFICATION,
            message: message.into(),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

pub type CliResult<T = ()> = Result<T, CliError>;

/// Writes through a temporary file in the target directory and renames it
/// into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> CliResult {
    let fail =
        |e: &dyn fmt::Display| CliError::usage(format!("cannot write {}: {e}", path.display()));
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| fail(&e))?;
    tmp.write_all(bytes).map_err(|e| fail(&e))?;
    tmp.as_file().sync_all().map_err(|e| fail(&e))?;
    tmp.persist(path).map_err(|e| fail(&e.error))?;
    Ok(())
}

/// To `path` when given, otherwise stdout.
pub fn emit(path: Option<&Path>, text: &str) -> CliResult {
    match path {
        Some(p) => write_atomic(p, text.as_bytes()),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| CliError::usage(format!("cannot write to stdout: {e}")))
        }
    }
}

pub fn json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("output serialises");
    s.push('\n');
    s
}

pub fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::usage(format!("cannot read {}: {e}", path.display())))
}
