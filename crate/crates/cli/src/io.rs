//! File loading/saving helpers shared by the subcommands.

use std::path::{Path, PathBuf};

use oedecomp::coarse::CoarseGrainingJson;
use oedecomp::linalg::MatrixJson;
use oedecomp::{CMatrix, Density, Graining};

use crate::AppError;

pub fn load_density(path: &Path) -> Result<Density, AppError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| AppError::Failure(format!("{}: {e}", path.display())))?;
    let json: MatrixJson = serde_json::from_str(&text)
        .map_err(|e| AppError::Failure(format!("{}: {e}", path.display())))?;
    let mat: CMatrix = json.to_matrix()?;
    Ok(Density::new(mat)?)
}

pub fn load_graining(path: &Path) -> Result<Graining, AppError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| AppError::Failure(format!("{}: {e}", path.display())))?;
    let json: CoarseGrainingJson = serde_json::from_str(&text)
        .map_err(|e| AppError::Failure(format!("{}: {e}", path.display())))?;
    Ok(json.to_coarse_graining()?)
}

/// Write to the file when a path is given, otherwise to stdout.
pub fn emit(out: &Option<PathBuf>, content: &str) -> Result<(), AppError> {
    match out {
        Some(path) => {
            std::fs::write(path, content)
                .map_err(|e| AppError::Failure(format!("{}: {e}", path.display())))?;
        }
        None => print!("{content}"),
    }
    Ok(())
}

/// Parse an inclusive "a:b" range.
pub fn parse_range(text: &str) -> Result<(usize, usize), AppError> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 2 {
        return Err(AppError::Usage(format!(
            "range must look like a:b, got {text:?}"
        )));
    }
    let a = parts[0]
        .parse::<usize>()
        .map_err(|e| AppError::Usage(format!("bad range start {:?}: {e}", parts[0])))?;
    let b = parts[1]
        .parse::<usize>()
        .map_err(|e| AppError::Usage(format!("bad range end {:?}: {e}", parts[1])))?;
    if a > b {
        return Err(AppError::Usage(format!("empty range {text:?}")));
    }
    Ok((a, b))
}
