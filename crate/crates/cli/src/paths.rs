//! Embedding-file resolution with the `WSDETECT_EMBEDDINGS_PATH` search
//! path (colon-separated directories).

use std::path::{Path, PathBuf};

use anyhow::{bail, Result};

pub const SEARCH_PATH_VAR: &str = "WSDETECT_EMBEDDINGS_PATH";

/// Returns the path as given when it exists; otherwise searches the
/// directories in `WSDETECT_EMBEDDINGS_PATH` for its file name.
pub fn resolve_embedding_path(path: &Path) -> Result<PathBuf> {
    if path.exists() {
        return Ok(path.to_path_buf());
    }
    if let (Some(name), Some(search)) = (path.file_name(), std::env::var_os(SEARCH_PATH_VAR)) {
        for dir in std::env::split_paths(&search) {
            let candidate = dir.join(name);
            if candidate.exists() {
                return Ok(candidate);
            }
        }
    }
    bail!("embedding file not found: {}", path.display());
}
