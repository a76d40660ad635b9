//! OBJ and CSV writers. Files are written to a temporary sibling and renamed.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use ruled_imcf::LVec3;

use crate::error::CliError;

pub fn num(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let io = |source| CliError::Io { path: path.to_path_buf(), source };
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d.to_path_buf(),
        _ => PathBuf::from("."),
    };
    std::fs::create_dir_all(&dir).map_err(io)?;
    let mut tmp = tempfile::NamedTempFile::new_in(&dir).map_err(io)?;
    tmp.write_all(contents.as_bytes()).map_err(io)?;
    tmp.as_file().sync_all().map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

/// CSV with a header row; every value in full precision.
pub fn csv(header: &[&str], rows: impl IntoIterator<Item = Vec<f64>>) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        let cells: Vec<String> = row.into_iter().map(num).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

/// Quad mesh over an `ns x nt` grid, vertices row-major in `s`.
pub fn obj(points: &[LVec3], ns: usize, nt: usize) -> String {
    let mut out = String::new();
    for p in points {
        let _ = writeln!(out, "v {} {} {}", num(p.x), num(p.y), num(p.z));
    }
    for i in 0..ns - 1 {
        for j in 0..nt - 1 {
            let v = |i: usize, j: usize| i * nt + j + 1;
            let _ = writeln!(out, "f {} {} {} {}", v(i, j), v(i + 1, j), v(i + 1, j + 1), v(i, j + 1));
        }
    }
    out
}

/// `path` with `suffix` inserted before the extension.
pub fn with_suffix(path: &Path, suffix: &str) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let name = match path.extension() {
        Some(ext) => format!("{stem}{suffix}.{}", ext.to_string_lossy()),
        None => format!("{stem}{suffix}"),
    };
    path.with_file_name(name)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn obj_layout() {
        let pts: Vec<LVec3> = (0..6).map(|k| LVec3::new(k as f64, 0.0, 0.1)).collect();
        let text = obj(&pts, 3, 2);
        let faces: Vec<&str> = text.lines().filter(|l| l.starts_with("f ")).collect();
        assert_eq!(faces, ["f 1 3 4 2", "f 3 5 6 4"]);
        let v: Vec<f64> = text.lines().next().unwrap()[2..].split(' ').map(|x| x.parse().unwrap()).collect();
        assert_eq!(v, [0.0, 0.0, 0.1]);
    }

    #[test]
    fn full_precision_round_trip() {
        for x in [0.1, 1.0 / 3.0, -2.5e-300, std::f64::consts::PI * 1e12] {
            assert_eq!(num(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn suffixes() {
        assert_eq!(with_suffix(Path::new("out/p.csv"), "_t+"), PathBuf::from("out/p_t+.csv"));
        assert_eq!(with_suffix(Path::new("p"), "_x"), PathBuf::from("p_x"));
    }
}
