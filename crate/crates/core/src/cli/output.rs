use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::Result;

pub const TOOL: &str = "triwell";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Writes output files into one directory, each starting with a provenance
/// record (`#` comment lines for text, a `provenance` key for JSON).
pub struct OutputDir {
    dir: PathBuf,
    config_hash: String,
    written: Vec<PathBuf>,
}

impl OutputDir {
    pub fn create(dir: &Path, config_hash: &str) -> Result<Self> {
        std::fs::create_dir_all(dir)?;
        Ok(OutputDir { dir: dir.to_path_buf(), config_hash: config_hash.to_string(), written: Vec::new() })
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.dir.join(name)
    }

    pub fn written(&self) -> &[PathBuf] {
        &self.written
    }

    fn provenance(&self) -> Value {
        json!({ "tool": TOOL, "version": VERSION, "config_hash": self.config_hash })
    }

    /// Text file with a `# ...` header; `body` writes the rest.
    pub fn text<F>(&mut self, name: &str, body: F) -> Result<PathBuf>
    where
        F: FnOnce(&mut BufWriter<File>) -> std::io::Result<()>,
    {
        let path = self.path(name);
        let mut w = BufWriter::new(File::create(&path)?);
        writeln!(w, "# {TOOL} {VERSION} config-hash {}", self.config_hash)?;
        body(&mut w)?;
        w.flush()?;
        log::info!("wrote {}", path.display());
        self.written.push(path.clone());
        Ok(path)
    }

    /// JSON object with a `provenance` entry added at the top level.
    pub fn json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<PathBuf> {
        let mut v = serde_json::to_value(value).map_err(std::io::Error::other)?;
        let v = match v {
            Value::Object(ref mut map) => {
                map.insert("provenance".into(), self.provenance());
                v
            }
            other => json!({ "provenance": self.provenance(), "data": other }),
        };
        let path = self.path(name);
        let mut w = BufWriter::new(File::create(&path)?);
        serde_json::to_writer_pretty(&mut w, &v).map_err(std::io::Error::other)?;
        writeln!(w)?;
        w.flush()?;
        log::info!("wrote {}", path.display());
        self.written.push(path.clone());
        Ok(path)
    }

    /// Binary greyscale raster (PGM) of a row-major matrix; `nan` entries
    /// are drawn black, the rest scaled to the maximum.
    pub fn raster(&mut self, name: &str, rows: &[Vec<f64>]) -> Result<PathBuf> {
        let height = rows.len();
        let width = rows.first().map_or(0, Vec::len);
        let max = rows.iter().flatten().filter(|v| v.is_finite()).fold(0.0f64, |m, v| m.max(*v));
        let path = self.path(name);
        let mut w = BufWriter::new(File::create(&path)?);
        write!(w, "P5\n# {TOOL} {VERSION} config-hash {}\n{width} {height}\n255\n", self.config_hash)?;
        // first row at the bottom of the image
        for row in rows.iter().rev() {
            let px: Vec<u8> = row
                .iter()
                .map(|v| if v.is_finite() && max > 0.0 { (255.0 * v.max(0.0) / max).round() as u8 } else { 0 })
                .collect();
            w.write_all(&px)?;
        }
        w.flush()?;
        self.written.push(path.clone());
        Ok(path)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn headers_are_written() {
        let dir = tempfile::tempdir().unwrap();
        let mut out = OutputDir::create(dir.path(), "abc").unwrap();
        let p = out.text("a.csv", |w| writeln!(w, "x,y")).unwrap();
        let text = std::fs::read_to_string(p).unwrap();
        assert!(text.starts_with("# triwell "));
        assert!(text.contains("config-hash abc"));
        let p = out.json("a.json", &json!({ "k": 1 })).unwrap();
        let v: Value = serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap();
        assert_eq!(v["provenance"]["config_hash"], "abc");
        assert_eq!(v["k"], 1);
        let p = out.raster("a.pgm", &[vec![0.0, 1.0], vec![f64::NAN, 0.5]]).unwrap();
        let bytes = std::fs::read(p).unwrap();
        assert_eq!(&bytes[bytes.len() - 4..], &[0, 128, 0, 255]);
        assert_eq!(out.written().len(), 3);
    }
}
