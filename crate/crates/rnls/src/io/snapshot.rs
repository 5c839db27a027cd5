//! Binary field snapshots.
//!
//! Little-endian layout: magic bytes `RNLS`; u32 version (1); u32 dimension;
//! u32 sample count per axis; f64 half-width per axis; f64 time; then
//! `2 * prod(n)` f64 values, interleaved (re, im), row-major with the last
//! axis fastest. Reading inverts writing bit-exactly.

use std::path::Path;

use num_complex::Complex64;
use thiserror::Error;

use crate::spectral::{ComplexField, Grid, SpectralError};

const MAGIC: &[u8; 4] = b"RNLS";
const VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum SnapshotError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("bad magic bytes (not a field snapshot)")]
    BadMagic,
    #[error("unsupported snapshot version {0}")]
    VersionMismatch(u32),
    #[error("snapshot size mismatch: expected {expected} bytes, got {got}")]
    SizeMismatch { expected: usize, got: usize },
    #[error(transparent)]
    Grid(#[from] SpectralError),
}

/// Serialized byte length of a snapshot for the given grid.
pub fn snapshot_len(grid: &Grid) -> usize {
    4 + 4 + 4 + 4 * grid.dim() + 8 * grid.dim() + 8 + 16 * grid.len()
}

pub fn write_snapshot(path: &Path, field: &ComplexField, t: f64) -> Result<(), SnapshotError> {
    let grid = field.grid();
    let mut bytes = Vec::with_capacity(snapshot_len(grid));
    bytes.extend_from_slice(MAGIC);
    bytes.extend_from_slice(&VERSION.to_le_bytes());
    bytes.extend_from_slice(&(grid.dim() as u32).to_le_bytes());
    for &n in grid.shape() {
        bytes.extend_from_slice(&(n as u32).to_le_bytes());
    }
    for &l in grid.half_widths() {
        bytes.extend_from_slice(&l.to_le_bytes());
    }
    bytes.extend_from_slice(&t.to_le_bytes());
    for v in field.values() {
        bytes.extend_from_slice(&v.re.to_le_bytes());
        bytes.extend_from_slice(&v.im.to_le_bytes());
    }
    std::fs::write(path, bytes)?;
    Ok(())
}

pub fn read_snapshot(path: &Path) -> Result<(ComplexField, f64), SnapshotError> {
    let bytes = std::fs::read(path)?;
    if bytes.len() < 12 {
        return Err(SnapshotError::SizeMismatch {
            expected: 12,
            got: bytes.len(),
        });
    }
    if &bytes[0..4] != MAGIC {
        return Err(SnapshotError::BadMagic);
    }
    let version = u32::from_le_bytes(bytes[4..8].try_into().unwrap());
    if version != VERSION {
        return Err(SnapshotError::VersionMismatch(version));
    }
    let d = u32::from_le_bytes(bytes[8..12].try_into().unwrap()) as usize;
    let header_len = 12 + 4 * d + 8 * d + 8;
    if bytes.len() < header_len {
        return Err(SnapshotError::SizeMismatch {
            expected: header_len,
            got: bytes.len(),
        });
    }
    let mut off = 12;
    let mut n = Vec::with_capacity(d);
    for _ in 0..d {
        n.push(u32::from_le_bytes(bytes[off..off + 4].try_into().unwrap()) as usize);
        off += 4;
    }
    let mut half = Vec::with_capacity(d);
    for _ in 0..d {
        half.push(f64::from_le_bytes(bytes[off..off + 8].try_into().unwrap()));
        off += 8;
    }
    let t = f64::from_le_bytes(bytes[off..off + 8].try_into().unwrap());
    off += 8;

    let grid = Grid::new(&n, &half)?;
    let expected = off + 16 * grid.len();
    if bytes.len() != expected {
        return Err(SnapshotError::SizeMismatch {
            expected,
            got: bytes.len(),
        });
    }
    let mut values = Vec::with_capacity(grid.len());
    for i in 0..grid.len() {
        let p = off + 16 * i;
        let re = f64::from_le_bytes(bytes[p..p + 8].try_into().unwrap());
        let im = f64::from_le_bytes(bytes[p + 8..p + 16].try_into().unwrap());
        values.push(Complex64::new(re, im));
    }
    Ok((ComplexField::from_values(&grid, values), t))
}
