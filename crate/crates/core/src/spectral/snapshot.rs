//! `LCSF` snapshot files.
//!
//! Layout (little endian): magic `b"LCSF"`, `u32` version (= 1), `u32` N,
//! `u32` component count, then for each component `N * N` pairs of `f64`
//! (real, imaginary) in row-major FFT ordering.

use std::fs::File;
use std::io::{BufReader, BufWriter, ErrorKind, Read, Write};
use std::path::Path;

use num_complex::Complex64;

use super::field::SpectralField;
use super::grid::Grid;
use crate::error::{Error, Result};

pub const MAGIC: &[u8; 4] = b"LCSF";
pub const VERSION: u32 = 1;

pub fn write_components<W: Write>(mut w: W, fields: &[&SpectralField]) -> Result<()> {
    let n = fields.first().map_or(0, |f| f.grid().n());
    w.write_all(MAGIC)?;
    w.write_all(&VERSION.to_le_bytes())?;
    w.write_all(&(n as u32).to_le_bytes())?;
    w.write_all(&(fields.len() as u32).to_le_bytes())?;
    for f in fields {
        if f.grid().n() != n {
            return Err(Error::SizeMismatch {
                expected: n,
                found: f.grid().n(),
            });
        }
        for c in f.coeffs() {
            w.write_all(&c.re.to_le_bytes())?;
            w.write_all(&c.im.to_le_bytes())?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Decode every component. `grid.n()` must match the stored size.
pub fn read_components<R: Read>(mut r: R, grid: &Grid) -> Result<Vec<SpectralField>> {
    let mut offset = 0u64;
    let mut magic = [0u8; 4];
    read_exact(&mut r, &mut magic, &mut offset)?;
    if &magic != MAGIC {
        return Err(Error::Format {
            offset: 0,
            reason: format!("bad magic {magic:?}, expected \"LCSF\""),
        });
    }
    let version = read_u32(&mut r, &mut offset)?;
    if version != VERSION {
        return Err(Error::Format {
            offset: 4,
            reason: format!("unsupported version {version}"),
        });
    }
    let n = read_u32(&mut r, &mut offset)? as usize;
    if n != grid.n() {
        return Err(Error::SizeMismatch {
            expected: grid.n(),
            found: n,
        });
    }
    let count = read_u32(&mut r, &mut offset)? as usize;
    let mut out = Vec::with_capacity(count);
    let mut buf = vec![0u8; n * n * 16];
    for _ in 0..count {
        read_exact(&mut r, &mut buf, &mut offset)?;
        let coeffs: Vec<Complex64> = buf
            .chunks_exact(16)
            .map(|b| {
                let re = f64::from_le_bytes(b[..8].try_into().unwrap());
                let im = f64::from_le_bytes(b[8..].try_into().unwrap());
                Complex64::new(re, im)
            })
            .collect();
        let real = is_hermitian(grid, &coeffs);
        out.push(SpectralField::from_parts(grid, coeffs, real));
    }
    Ok(out)
}

fn is_hermitian(grid: &Grid, c: &[Complex64]) -> bool {
    let mirror = grid.mirror();
    c.iter().enumerate().all(|(i, v)| *v == c[mirror[i]].conj())
}

fn read_exact<R: Read>(r: &mut R, buf: &mut [u8], offset: &mut u64) -> Result<()> {
    r.read_exact(buf).map_err(|e| {
        if e.kind() == ErrorKind::UnexpectedEof {
            Error::Io {
                path: None,
                source: std::io::Error::new(
                    ErrorKind::UnexpectedEof,
                    format!("truncated snapshot after byte {offset}"),
                ),
            }
        } else {
            e.into()
        }
    })?;
    *offset += buf.len() as u64;
    Ok(())
}

fn read_u32<R: Read>(r: &mut R, offset: &mut u64) -> Result<u32> {
    let mut b = [0u8; 4];
    read_exact(r, &mut b, offset)?;
    Ok(u32::from_le_bytes(b))
}

pub fn save(path: &Path, fields: &[&SpectralField]) -> Result<()> {
    let file = File::create(path).map_err(|source| Error::Io {
        path: Some(path.to_owned()),
        source,
    })?;
    write_components(BufWriter::new(file), fields)
}

pub fn load(path: &Path, grid: &Grid) -> Result<Vec<SpectralField>> {
    let file = File::open(path).map_err(|source| Error::Io {
        path: Some(path.to_owned()),
        source,
    })?;
    read_components(BufReader::new(file), grid).map_err(|e| match e {
        Error::Io { path: None, source } => Error::Io {
            path: Some(path.to_owned()),
            source,
        },
        other => other,
    })
}
