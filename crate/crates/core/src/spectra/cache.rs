//! Binary eigensystem cache.
//!
//! Layout, all little-endian:
//! `"TW3W"`, format version `u32`, `N u64`, `U f64`, `J f64`, `epsilon f64`,
//! code-version length `u32` and UTF-8 bytes, `D u64`, `D` energies, then the
//! `D x D` eigenvector matrix column by column.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use faer::Mat;
use sha2::{Digest, Sha256};

use super::eigen::EigenSystem;
use super::operator::ModelParams;
use crate::error::{Error, Result};
use crate::fock::dimension;

pub const MAGIC: &[u8; 4] = b"TW3W";
pub const FORMAT_VERSION: u32 = 1;
pub const CODE_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Hex digest identifying `(N, U, J, epsilon, code version)`.
pub fn cache_key(params: &ModelParams) -> String {
    let mut h = Sha256::new();
    h.update(b"tw3w-eigen");
    h.update((params.n as u64).to_le_bytes());
    for x in [params.u, params.j, params.epsilon] {
        h.update(x.to_bits().to_le_bytes());
    }
    h.update(CODE_VERSION.as_bytes());
    h.update(FORMAT_VERSION.to_le_bytes());
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

/// Cache file location for `params` inside `dir`.
pub fn cache_path(dir: &Path, params: &ModelParams) -> PathBuf {
    dir.join(format!("eigen-N{}-{}.tw3w", params.n, &cache_key(params)[..16]))
}

fn cache_err(path: &Path, reason: impl Into<String>) -> Error {
    Error::Cache { path: path.to_path_buf(), reason: reason.into() }
}

fn write_f64s<W: Write>(w: &mut W, xs: &[f64]) -> std::io::Result<()> {
    let mut buf = Vec::with_capacity(8 * xs.len());
    for x in xs {
        buf.extend_from_slice(&x.to_le_bytes());
    }
    w.write_all(&buf)
}

/// Writes `es` to `path` atomically (temporary file, then rename).
pub fn save(es: &EigenSystem, path: &Path) -> Result<()> {
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent)?;
    }
    let tmp = path.with_extension(format!("tmp{}", std::process::id()));
    {
        let mut w = BufWriter::new(File::create(&tmp)?);
        let p = es.params();
        w.write_all(MAGIC)?;
        w.write_all(&FORMAT_VERSION.to_le_bytes())?;
        w.write_all(&(p.n as u64).to_le_bytes())?;
        write_f64s(&mut w, &[p.u, p.j, p.epsilon])?;
        w.write_all(&(CODE_VERSION.len() as u32).to_le_bytes())?;
        w.write_all(CODE_VERSION.as_bytes())?;
        w.write_all(&(es.dim() as u64).to_le_bytes())?;
        write_f64s(&mut w, es.energies())?;
        for k in 0..es.dim() {
            write_f64s(&mut w, es.vector(k))?;
        }
        w.into_inner().map_err(|e| e.into_error())?.sync_all()?;
    }
    std::fs::rename(&tmp, path)?;
    Ok(())
}

struct Reader<R> {
    inner: R,
}

impl<R: Read> Reader<R> {
    fn bytes<const K: usize>(&mut self) -> std::io::Result<[u8; K]> {
        let mut b = [0u8; K];
        self.inner.read_exact(&mut b)?;
        Ok(b)
    }
    fn u32(&mut self) -> std::io::Result<u32> {
        Ok(u32::from_le_bytes(self.bytes()?))
    }
    fn u64(&mut self) -> std::io::Result<u64> {
        Ok(u64::from_le_bytes(self.bytes()?))
    }
    fn f64(&mut self) -> std::io::Result<f64> {
        Ok(f64::from_le_bytes(self.bytes()?))
    }
    fn f64s(&mut self, out: &mut [f64]) -> std::io::Result<()> {
        let mut buf = vec![0u8; 8 * out.len()];
        self.inner.read_exact(&mut buf)?;
        for (x, c) in out.iter_mut().zip(buf.chunks_exact(8)) {
            *x = f64::from_le_bytes(c.try_into().expect("chunk of 8"));
        }
        Ok(())
    }
}

/// Reads a cache file and checks that it was written for `expected`.
pub fn load(path: &Path, expected: &ModelParams) -> Result<EigenSystem> {
    let mut r = Reader { inner: BufReader::new(File::open(path)?) };
    let io = |e: std::io::Error| cache_err(path, format!("truncated or unreadable: {e}"));
    if &r.bytes::<4>().map_err(io)? != MAGIC {
        return Err(cache_err(path, "bad magic bytes"));
    }
    let version = r.u32().map_err(io)?;
    if version != FORMAT_VERSION {
        return Err(cache_err(path, format!("format version {version}, expected {FORMAT_VERSION}")));
    }
    let n = r.u64().map_err(io)? as usize;
    let (u, j, epsilon) = (r.f64().map_err(io)?, r.f64().map_err(io)?, r.f64().map_err(io)?);
    let params = ModelParams { u, j, epsilon, n };
    let same = params.n == expected.n
        && params.u.to_bits() == expected.u.to_bits()
        && params.j.to_bits() == expected.j.to_bits()
        && params.epsilon.to_bits() == expected.epsilon.to_bits();
    if !same {
        return Err(cache_err(path, format!("holds {params:?}, expected {expected:?}")));
    }
    let len = r.u32().map_err(io)? as usize;
    if len > 256 {
        return Err(cache_err(path, "corrupt code-version field"));
    }
    let mut ver = vec![0u8; len];
    r.inner.read_exact(&mut ver).map_err(io)?;
    if ver != CODE_VERSION.as_bytes() {
        return Err(cache_err(path, format!("written by version {}", String::from_utf8_lossy(&ver))));
    }
    let d = r.u64().map_err(io)? as usize;
    if d != dimension(n) {
        return Err(cache_err(path, format!("dimension {d} does not match N = {n}")));
    }
    let mut energies = vec![0.0; d];
    r.f64s(&mut energies).map_err(io)?;
    let mut vectors = Mat::<f64>::zeros(d, d);
    let mut col = vec![0.0; d];
    for k in 0..d {
        r.f64s(&mut col).map_err(io)?;
        vectors.col_as_slice_mut(k).copy_from_slice(&col);
    }
    if r.inner.read(&mut [0u8; 1]).map_err(io)? != 0 {
        return Err(cache_err(path, "trailing bytes"));
    }
    EigenSystem::from_parts(params, energies, vectors).map_err(|e| cache_err(path, e.to_string()))
}

/// Loads the cached eigensystem for `params` from `dir`, or diagonalizes and
/// stores it. The flag is true when the cache was warm. Unreadable or stale
/// files are rebuilt.
pub fn load_or_build(dir: &Path, params: &ModelParams) -> Result<(EigenSystem, bool)> {
    let path = cache_path(dir, params);
    if path.exists() {
        match load(&path, params) {
            Ok(es) => {
                log::info!("warm cache: loaded {} (D = {})", path.display(), es.dim());
                return Ok((es, true));
            }
            Err(e) => log::warn!("ignoring cache file: {e}"),
        }
    }
    let basis = crate::fock::FockBasis::new(params.n)?;
    let h = super::operator::build_hamiltonian(params, &basis)?;
    log::info!("diagonalizing D = {} (N = {}, eps = {})", basis.dim(), params.n, params.epsilon);
    let es = super::eigen::diagonalize(&h, &basis, params)?;
    save(&es, &path)?;
    log::info!("cached eigensystem at {}", path.display());
    Ok((es, false))
}
