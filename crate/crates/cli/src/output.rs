//! Atomic output files and up-front path checks.

use std::io::{BufWriter, Write};
use std::path::Path;

use tempfile::NamedTempFile;

use crate::CliError;

fn io_error(path: &Path, err: std::io::Error) -> CliError {
    CliError::Core(leadlag_core::Error::Io {
        path: path.to_path_buf(),
        source: err,
    })
}

/// Fails unless `path` is a readable file.
pub fn check_input(path: &Path, flag: &str) -> Result<(), CliError> {
    std::fs::File::open(path)
        .map(drop)
        .map_err(|e| CliError::Usage(format!("--{flag} {}: {e}", path.display())))
}

/// Fails unless the directory that will hold `path` exists.
pub fn check_output(path: &Path, flag: &str) -> Result<(), CliError> {
    let dir = parent(path);
    if dir.is_dir() {
        Ok(())
    } else {
        Err(CliError::Usage(format!(
            "--{flag} {}: directory {} does not exist",
            path.display(),
            dir.display()
        )))
    }
}

fn parent(path: &Path) -> &Path {
    match path.parent() {
        Some(dir) if !dir.as_os_str().is_empty() => dir,
        _ => Path::new("."),
    }
}

/// Writes through a temporary file in the target directory and renames it into
/// place, so a failed run never leaves a partial file behind.
pub fn write_atomic<F>(path: &Path, write: F) -> Result<(), CliError>
where
    F: FnOnce(&mut dyn Write) -> Result<(), CliError>,
{
    let mut file = NamedTempFile::new_in(parent(path)).map_err(|e| io_error(path, e))?;
    {
        let mut writer = BufWriter::new(file.as_file_mut());
        write(&mut writer)?;
        writer.flush().map_err(|e| io_error(path, e))?;
    }
    file.persist(path).map_err(|e| io_error(path, e.error))?;
    Ok(())
}
