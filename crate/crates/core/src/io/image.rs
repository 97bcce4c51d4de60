use std::fmt::Write as _;
use std::path::Path;

use super::{file_error, IoError, Result};
use crate::wavesim::ScalarField2D;

/// 16-bit binary PGM of `field` with the top image row at `y = 1`.
///
/// `range = (lo, hi)` maps linearly to `0..=65535` with clamping; the
/// default is `(-m, m)` with `m = max |value|`. An all-zero field renders
/// mid-grey.
pub fn pgm_bytes(field: &ScalarField2D, range: Option<(f64, f64)>) -> Result<Vec<u8>> {
    let (lo, hi) = match range {
        Some((lo, hi)) => {
            if !(lo.is_finite() && hi.is_finite() && hi > lo) {
                return Err(IoError::Invalid(format!("bad value range [{lo}, {hi}]")));
            }
            (lo, hi)
        }
        None => {
            let m = field.max_abs();
            if m == 0.0 {
                (-1.0, 1.0)
            } else {
                (-m, m)
            }
        }
    };
    let (nx, ny) = (field.nx(), field.ny());
    let mut out = format!("P5\n{nx} {ny}\n65535\n").into_bytes();
    out.reserve(2 * nx * ny);
    for j in (0..ny).rev() {
        for i in 0..nx {
            let t = ((field.get(i, j) - lo) / (hi - lo)).clamp(0.0, 1.0);
            let level = (t * 65535.0).round() as u16;
            out.extend_from_slice(&level.to_be_bytes());
        }
    }
    Ok(out)
}

pub fn export_image(
    field: &ScalarField2D,
    path: impl AsRef<Path>,
    range: Option<(f64, f64)>,
) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, pgm_bytes(field, range)?).map_err(file_error(path))
}

/// One line per grid row `y_j` (increasing), comma-separated, values in
/// shortest round-trip form.
pub fn export_csv(field: &ScalarField2D, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut text = String::with_capacity(field.values().len() * 20);
    for j in 0..field.ny() {
        for i in 0..field.nx() {
            if i > 0 {
                text.push(',');
            }
            write!(text, "{}", field.get(i, j)).expect("writing to a string");
        }
        text.push('\n');
    }
    std::fs::write(path, text).map_err(file_error(path))
}

pub fn import_csv(path: impl AsRef<Path>) -> Result<ScalarField2D> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(file_error(path))?;
    let mut values = Vec::new();
    let mut rows = 0;
    let mut cols = None;
    for line in text.lines().filter(|l| !l.trim().is_empty()) {
        let row: Vec<f64> = line
            .split(',')
            .map(|v| v.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| IoError::Invalid(format!("row {rows}: {e}")))?;
        if *cols.get_or_insert(row.len()) != row.len() {
            return Err(IoError::Invalid(format!(
                "row {rows} has {} values",
                row.len()
            )));
        }
        values.extend(row);
        rows += 1;
    }
    ScalarField2D::new(cols.unwrap_or(0), rows, values).map_err(|e| IoError::Invalid(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn levels(bytes: &[u8], header_len: usize) -> Vec<u16> {
        bytes[header_len..]
            .chunks_exact(2)
            .map(|c| u16::from_be_bytes([c[0], c[1]]))
            .collect()
    }

    #[test]
    fn constant_field_is_uniform() {
        let f = ScalarField2D::from_fn(4, |_, _| 3.0).unwrap();
        let bytes = pgm_bytes(&f, None).unwrap();
        assert!(bytes.starts_with(b"P5\n4 4\n65535\n"));
        let l = levels(&bytes, 13);
        assert_eq!(l.len(), 16);
        assert!(l.iter().all(|&v| v == l[0]));
        let zero = ScalarField2D::zeros(3, 3).unwrap();
        assert!(levels(&pgm_bytes(&zero, None).unwrap(), 13)
            .iter()
            .all(|&v| v == 32768));
    }

    #[test]
    fn range_endpoints_hit_extremes() {
        let f = ScalarField2D::from_fn(5, |x, y| x + y).unwrap();
        let l = levels(&pgm_bytes(&f, Some((-2.0, 2.0))).unwrap(), 13);
        assert!(l.contains(&0) && l.contains(&65535));
        // top-left pixel is (x, y) = (-1, 1)
        assert_eq!(l[0], 32768);
        assert_eq!(l[20], 0);
        assert!(pgm_bytes(&f, Some((1.0, 1.0))).is_err());
    }

    #[test]
    fn csv_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("f.csv");
        let f = ScalarField2D::from_fn(7, |x, y| (x * 3.1).sin() / (1.3 + y)).unwrap();
        export_csv(&f, &path).unwrap();
        assert_eq!(import_csv(&path).unwrap(), f);
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text.lines().count(), 7);
    }
}
