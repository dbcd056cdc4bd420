use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use hamdist_core::ByteString;

/// Raw bytes of `path`, checked against `sigma` when given.
pub fn read_symbols(path: &Path, sigma: Option<u32>) -> Result<Vec<u8>> {
    let data = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    check_sigma(data, sigma).with_context(|| format!("in {}", path.display()))
}

fn check_sigma(data: Vec<u8>, sigma: Option<u32>) -> Result<Vec<u8>> {
    Ok(match sigma {
        Some(s) => ByteString::new(data, s)?.into_vec(),
        None => data,
    })
}

/// Strictly increasing positions, one per line; blank lines are skipped.
pub fn read_queries(path: &Path) -> Result<Vec<usize>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .enumerate()
        .map(|(n, l)| l.parse().with_context(|| format!("{}: line {}: not a position: {l:?}", path.display(), n + 1)))
        .collect()
}

pub fn write_file(path: &Path, data: &[u8]) -> Result<()> {
    let mut f = fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
    f.write_all(data).with_context(|| format!("writing {}", path.display()))
}
