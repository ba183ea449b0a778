use std::io::Write;
use std::path::{Path, PathBuf};

use hyperseed::exactcircle::CertScalar;
use hyperseed::induction::ConstructionState;
use tempfile::NamedTempFile;

use crate::{Failure, EXIT_CORRUPT, EXIT_IO};

/// First line of every CSV export that rounds values to decimals.
pub const LOSSY_NOTE: &str = "# lossy: decimal values rounded to 17 significant digits; the JSON form is exact";

fn parent_of(path: &Path) -> PathBuf {
    match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    }
}

fn io_failure(path: &Path, e: impl std::fmt::Display) -> Failure {
    Failure::new(EXIT_IO, format!("{}: {e}", path.display()))
}

/// Fail early if `path` cannot be written atomically.
pub fn ensure_writable(path: &Path) -> Result<(), Failure> {
    if path.is_dir() {
        return Err(io_failure(path, "is a directory"));
    }
    NamedTempFile::new_in(parent_of(path)).map(drop).map_err(|e| io_failure(path, e))
}

/// Write via a temporary file in the same directory, then rename.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<(), Failure> {
    let mut tmp = NamedTempFile::new_in(parent_of(path)).map_err(|e| io_failure(path, e))?;
    tmp.write_all(contents).map_err(|e| io_failure(path, e))?;
    tmp.as_file().sync_all().map_err(|e| io_failure(path, e))?;
    let file = tmp.persist(path).map_err(|e| io_failure(path, e.error))?;
    #[cfg(unix)]
    {
        use std::os::unix::fs::PermissionsExt;
        file.set_permissions(std::fs::Permissions::from_mode(0o644)).map_err(|e| io_failure(path, e))?;
    }
    drop(file);
    Ok(())
}

/// Write to `out`, or to standard output when absent.
pub fn emit(out: Option<&Path>, contents: &str) -> Result<(), Failure> {
    match out {
        Some(p) => write_atomic(p, contents.as_bytes()),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(contents.as_bytes()).map_err(|e| Failure::new(EXIT_IO, format!("stdout: {e}")))
        }
    }
}

pub fn read_state(path: &Path) -> Result<ConstructionState, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| io_failure(path, e))?;
    ConstructionState::from_json(&text).map_err(|e| Failure::new(EXIT_CORRUPT, format!("{}: {e}", path.display())))
}

/// Midpoint of an enclosure in decimal scientific notation.
pub fn decimal(x: &CertScalar) -> String {
    x.mid().to_string_radix(10, Some(17))
}

/// CSV text with the lossy-export note, a header and LF line endings.
pub fn csv_text(header: &[&str], rows: &[Vec<String>]) -> Result<String, Failure> {
    let fail = |e: csv::Error| Failure::new(EXIT_IO, format!("csv: {e}"));
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    w.write_record(header).map_err(fail)?;
    for r in rows {
        w.write_record(r).map_err(fail)?;
    }
    let body = w.into_inner().map_err(|e| Failure::new(EXIT_IO, format!("csv: {e}")))?;
    Ok(format!("{LOSSY_NOTE}\n{}", String::from_utf8(body).expect("csv output is UTF-8")))
}
