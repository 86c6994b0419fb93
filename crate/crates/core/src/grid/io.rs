//! Grid forms on disk: a JSON header next to a flat little-endian `f64` array.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::field::GridRuminForm;
use super::spec::GridSpec;
use crate::error::{Error, Result};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GridHeader {
    pub spec: GridSpec,
    pub degree: usize,
    pub components: usize,
    pub ordering: String,
    pub dtype: String,
    pub data_file: String,
}

fn bin_path(header_path: &Path) -> PathBuf {
    header_path.with_extension("bin")
}

/// Writes `<stem>.json` and `<stem>.bin`.
pub fn write_form(path: &Path, a: &GridRuminForm) -> Result<()> {
    let bin = bin_path(path);
    let header = GridHeader {
        spec: a.spec().clone(),
        degree: a.degree,
        components: a.dim(),
        ordering: "component-major, then row-major x,y,t".into(),
        dtype: "f64-le".into(),
        data_file: bin.file_name().and_then(|s| s.to_str()).unwrap_or_default().to_string(),
    };
    fs::write(path, serde_json::to_string_pretty(&header)?)?;
    let mut f = std::io::BufWriter::new(fs::File::create(&bin)?);
    for c in &a.coeffs {
        for v in &c.data {
            f.write_all(&v.to_le_bytes())?;
        }
    }
    f.flush()?;
    Ok(())
}

pub fn read_form(path: &Path) -> Result<GridRuminForm> {
    let header: GridHeader = serde_json::from_str(&fs::read_to_string(path)?)?;
    header.spec.validate()?;
    let bin = path.parent().unwrap_or(Path::new(".")).join(&header.data_file);
    let bytes = fs::read(bin)?;
    let expected = header.components * header.spec.len() * 8;
    if bytes.len() != expected {
        return Err(Error::InvalidGrid(format!("expected {expected} bytes of samples, found {}", bytes.len())));
    }
    let data: Vec<f64> = bytes.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().expect("8 bytes"))).collect();
    Ok(GridRuminForm::from_flat(&header.spec, header.degree, &data))
}

/// Two-column CSV of named values.
pub fn write_norms_csv(path: &Path, rows: &[(String, f64)]) -> Result<()> {
    let mut s = String::from("name,value\n");
    for (k, v) in rows {
        s.push_str(&format!("{k},{v:e}\n"));
    }
    fs::write(path, s)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridField;

    #[test]
    fn round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let s = GridSpec::cube(1.0, 0.5, 5).unwrap();
        let a = GridRuminForm::new(1, vec![GridField::from_fn(&s, |p| p[0] - 0.25 * p[2]), GridField::from_fn(&s, |p| p[1] * p[1])]).unwrap();
        let path = dir.path().join("a.json");
        write_form(&path, &a).unwrap();
        assert_eq!(read_form(&path).unwrap(), a);
    }
}
