//! Atomic file output and the CSV schemas read by the plot renderer.

use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use symdom::dynamics::OrbitRecord;
use symdom::horofunction::GridRow;

/// Writes through a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).with_context(|| format!("temporary file in {}", dir.display()))?;
    tmp.write_all(bytes)?;
    tmp.flush()?;
    tmp.persist(path).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

pub fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    write_atomic(path, s.as_bytes())
}

/// Full double precision: 17 significant digits.
pub fn real(x: f64) -> String {
    format!("{x:.16e}")
}

/// `orbit.csv` for a single start, `orbit_<k>.csv` for several.
pub fn indexed_path(path: &Path, k: usize, count: usize) -> PathBuf {
    if count == 1 {
        return path.to_path_buf();
    }
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let name = match path.extension() {
        Some(ext) => format!("{stem}_{k}.{}", ext.to_string_lossy()),
        None => format!("{stem}_{k}"),
    };
    path.with_file_name(name)
}

/// Columns `n, re0, im0, …, norm, kobayashi_step` for `n = 1..=N`.
pub fn orbit_csv(o: &OrbitRecord) -> Result<Vec<u8>> {
    let dim = o.start.factor().dim();
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["n".to_string()];
    for k in 0..dim {
        header.push(format!("re{k}"));
        header.push(format!("im{k}"));
    }
    header.push("norm".into());
    header.push("kobayashi_step".into());
    w.write_record(&header)?;
    for (i, x) in o.points.iter().enumerate() {
        let mut row = vec![(i + 1).to_string()];
        for z in x.coords() {
            row.push(real(z.re));
            row.push(real(z.im));
        }
        row.push(real(o.norms[i]));
        row.push(real(o.steps[i]));
        w.write_record(&row)?;
    }
    Ok(w.into_inner()?)
}

/// Columns `u, v, F, in_s_<s>…, inside_ball`; `F` is empty off the ball.
pub fn grid_csv(rows: &[GridRow], radii: &[f64]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["u".to_string(), "v".into(), "F".into()];
    header.extend(radii.iter().map(|s| format!("in_s_{s}")));
    header.push("inside_ball".into());
    w.write_record(&header)?;
    let flag = |b: bool| if b { "1".to_string() } else { "0".to_string() };
    for r in rows {
        let mut row = vec![real(r.u), real(r.v), r.f.map(real).unwrap_or_default()];
        row.extend(r.members.iter().map(|m| flag(*m)));
        row.push(flag(r.inside_ball));
        w.write_record(&row)?;
    }
    Ok(w.into_inner()?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn indexed_names() {
        let p = Path::new("out/orbit.csv");
        assert_eq!(indexed_path(p, 0, 1), PathBuf::from("out/orbit.csv"));
        assert_eq!(indexed_path(p, 3, 5), PathBuf::from("out/orbit_3.csv"));
        assert_eq!(indexed_path(Path::new("orbit"), 1, 2), PathBuf::from("orbit_1"));
    }

    #[test]
    fn seventeen_digits() {
        let x = 0.1f64 + 0.2;
        assert_eq!(real(x).parse::<f64>().unwrap(), x);
        assert_eq!(real(1.0), "1.0000000000000000e0");
    }

    #[test]
    fn atomic_write_replaces() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("nested/a.txt");
        write_atomic(&p, b"one").unwrap();
        write_atomic(&p, b"two").unwrap();
        assert_eq!(std::fs::read_to_string(&p).unwrap(), "two");
    }
}
