use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use super::{file_error, IoError, Result};
use crate::specfun::BesselRootTable;
use crate::wavesim::{ScalarField2D, SensorData};

pub const MAGIC: &str = "patseries-container";
pub const FORMAT_MAJOR: u32 = 1;
pub const FORMAT_MINOR: u32 = 0;
const DTYPE: &str = "<f8";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Field,
    Sinogram,
    Roots,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Field => "field",
            Kind::Sinogram => "sinogram",
            Kind::Roots => "roots",
        })
    }
}

/// Parsed second line of a container.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Header {
    pub kind: Kind,
    pub shape: Vec<usize>,
    pub dtype: String,
    #[serde(default)]
    pub meta: Map<String, Value>,
    #[serde(default)]
    pub extra: Map<String, Value>,
}

/// Anything a container can hold.
#[derive(Debug, Clone, PartialEq)]
pub enum Stored {
    Field(ScalarField2D),
    Sinogram(SensorData),
    Roots(BesselRootTable),
}

impl Stored {
    pub fn kind(&self) -> Kind {
        match self {
            Stored::Field(_) => Kind::Field,
            Stored::Sinogram(_) => Kind::Sinogram,
            Stored::Roots(_) => Kind::Roots,
        }
    }
}

impl From<ScalarField2D> for Stored {
    fn from(f: ScalarField2D) -> Self {
        Stored::Field(f)
    }
}

impl From<SensorData> for Stored {
    fn from(g: SensorData) -> Self {
        Stored::Sinogram(g)
    }
}

impl From<BesselRootTable> for Stored {
    fn from(t: BesselRootTable) -> Self {
        Stored::Roots(t)
    }
}

/// Serialises `object` with free-form provenance `extra`.
pub fn encode(object: &Stored, extra: &Map<String, Value>) -> Vec<u8> {
    let mut meta = Map::new();
    let (shape, payload): (Vec<usize>, &[f64]) = match object {
        Stored::Field(f) => (vec![f.ny(), f.nx()], f.values()),
        Stored::Sinogram(g) => {
            let (c1, c2) = g.weights();
            meta.insert("radius".into(), g.radius().into());
            meta.insert("t_final".into(), g.t_final().into());
            meta.insert("c1".into(), c1.into());
            meta.insert("c2".into(), c2.into());
            (vec![g.n_theta(), g.n_t()], g.samples())
        }
        Stored::Roots(t) => (vec![t.max_order() + 1, t.roots_per_order()], t.as_slice()),
    };
    let header = Header {
        kind: object.kind(),
        shape,
        dtype: DTYPE.into(),
        meta,
        extra: extra.clone(),
    };
    let mut out = format!(
        "{MAGIC} {FORMAT_MAJOR}.{FORMAT_MINOR}\n{}\n",
        serde_json::to_string(&header).expect("header serialises")
    )
    .into_bytes();
    out.reserve(payload.len() * 8);
    for v in payload {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out
}

/// Parses a container produced by [`encode`].
pub fn decode(bytes: &[u8]) -> Result<(Stored, Header)> {
    let (first, rest) =
        split_line(bytes).ok_or_else(|| IoError::MalformedHeader("missing magic line".into()))?;
    let first = std::str::from_utf8(first)
        .map_err(|_| IoError::MalformedHeader("magic line is not UTF-8".into()))?;
    let version = first
        .strip_prefix(MAGIC)
        .and_then(|v| v.strip_prefix(' '))
        .ok_or_else(|| IoError::MalformedHeader(format!("bad magic line {first:?}")))?;
    let major = version
        .split_once('.')
        .and_then(|(major, minor)| {
            minor.parse::<u32>().ok()?;
            major.parse::<u32>().ok()
        })
        .ok_or_else(|| IoError::MalformedHeader(format!("bad version {version:?}")))?;
    if major != FORMAT_MAJOR {
        return Err(IoError::VersionMismatch {
            found: version.into(),
        });
    }

    let (line, payload) =
        split_line(rest).ok_or_else(|| IoError::MalformedHeader("missing header line".into()))?;
    let header: Header =
        serde_json::from_slice(line).map_err(|e| IoError::MalformedHeader(e.to_string()))?;
    if header.dtype != DTYPE {
        return Err(IoError::MalformedHeader(format!(
            "unsupported dtype {:?}",
            header.dtype
        )));
    }
    if header.shape.len() != 2 {
        return Err(IoError::MalformedHeader(format!(
            "expected a 2-d shape, got {:?}",
            header.shape
        )));
    }
    let expected = header
        .shape
        .iter()
        .try_fold(1usize, |a, &b| a.checked_mul(b))
        .ok_or_else(|| IoError::MalformedHeader("shape overflows".into()))?;
    if payload.len() % 8 != 0 || payload.len() / 8 != expected {
        return Err(IoError::ShapeMismatch {
            expected,
            found: payload.len() / 8,
        });
    }
    let values: Vec<f64> = payload
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("8-byte chunk")))
        .collect();

    let (rows, cols) = (header.shape[0], header.shape[1]);
    let invalid = |e: &dyn fmt::Display| IoError::Invalid(e.to_string());
    let stored = match header.kind {
        Kind::Field => {
            Stored::Field(ScalarField2D::new(cols, rows, values).map_err(|e| invalid(&e))?)
        }
        Kind::Sinogram => {
            let get =
                |key: &str| {
                    header.meta.get(key).and_then(Value::as_f64).ok_or_else(|| {
                        IoError::MalformedHeader(format!("sinogram meta lacks {key}"))
                    })
                };
            Stored::Sinogram(
                SensorData::new(
                    rows,
                    cols,
                    get("radius")?,
                    get("t_final")?,
                    (get("c1")?, get("c2")?),
                    values,
                )
                .map_err(|e| invalid(&e))?,
            )
        }
        Kind::Roots => {
            if rows == 0 {
                return Err(IoError::MalformedHeader("root table without orders".into()));
            }
            Stored::Roots(
                BesselRootTable::from_raw(rows - 1, cols, values).map_err(|e| invalid(&e))?,
            )
        }
    };
    Ok((stored, header))
}

fn split_line(bytes: &[u8]) -> Option<(&[u8], &[u8])> {
    let at = bytes.iter().position(|&b| b == b'\n')?;
    Some((&bytes[..at], &bytes[at + 1..]))
}

pub fn save(path: impl AsRef<Path>, object: &Stored, extra: &Map<String, Value>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, encode(object, extra)).map_err(file_error(path))
}

pub fn load(path: impl AsRef<Path>) -> Result<(Stored, Header)> {
    let path = path.as_ref();
    decode(&std::fs::read(path).map_err(file_error(path))?)
}

fn mismatch(expected: Kind, found: &Stored) -> IoError {
    IoError::KindMismatch {
        expected,
        found: found.kind(),
    }
}

pub fn load_field(path: impl AsRef<Path>) -> Result<ScalarField2D> {
    match load(path)?.0 {
        Stored::Field(f) => Ok(f),
        other => Err(mismatch(Kind::Field, &other)),
    }
}

pub fn load_sinogram(path: impl AsRef<Path>) -> Result<SensorData> {
    match load(path)?.0 {
        Stored::Sinogram(g) => Ok(g),
        other => Err(mismatch(Kind::Sinogram, &other)),
    }
}

pub fn load_roots(path: impl AsRef<Path>) -> Result<BesselRootTable> {
    match load(path)?.0 {
        Stored::Roots(t) => Ok(t),
        other => Err(mismatch(Kind::Roots, &other)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::bessel_roots;

    fn sinogram() -> SensorData {
        let mut s = 99u64;
        let v = (0..6 * 9)
            .map(|_| {
                s ^= s << 13;
                s ^= s >> 7;
                s ^= s << 17;
                f64::from_bits((s >> 2) | 0x3ff0_0000_0000_0000) - 1.5
            })
            .collect();
        SensorData::new(6, 9, 1.0, 6.0, (0.3, -1.0 / 3.0), v).unwrap()
    }

    #[test]
    fn round_trips_are_bit_exact() {
        let mut extra = Map::new();
        extra.insert("seed".into(), 7.into());
        let objects: Vec<Stored> = vec![
            sinogram().into(),
            ScalarField2D::from_fn(5, |x, y| x.sin() * y.exp())
                .unwrap()
                .into(),
            bessel_roots(3, 4).unwrap().into(),
        ];
        for object in objects {
            let bytes = encode(&object, &extra);
            let (back, header) = decode(&bytes).unwrap();
            assert_eq!(back, object);
            assert_eq!(header.extra["seed"], 7);
            assert_eq!(encode(&back, &extra), bytes);
        }
    }

    #[test]
    fn truncated_payload_is_a_shape_error() {
        let bytes = encode(&sinogram().into(), &Map::new());
        let cut = &bytes[..bytes.len() - 8];
        assert!(matches!(
            decode(cut),
            Err(IoError::ShapeMismatch {
                expected: 54,
                found: 53
            })
        ));
    }

    #[test]
    fn future_major_version_is_rejected() {
        let bytes = encode(&sinogram().into(), &Map::new());
        let text = String::from_utf8_lossy(&bytes[..30]).replace(" 1.0", " 2.0");
        let mut patched = text.into_bytes();
        patched.extend_from_slice(&bytes[30..]);
        assert!(matches!(
            decode(&patched),
            Err(IoError::VersionMismatch { .. })
        ));

        let minor = String::from_utf8_lossy(&bytes[..30]).replace(" 1.0", " 1.7");
        let mut patched = minor.into_bytes();
        patched.extend_from_slice(&bytes[30..]);
        assert!(decode(&patched).is_ok());
    }

    #[test]
    fn malformed_headers() {
        assert!(matches!(
            decode(b"nonsense"),
            Err(IoError::MalformedHeader(_))
        ));
        assert!(matches!(
            decode(b"patseries-container 1.0\n{\"kind\":\"field\"}\n"),
            Err(IoError::MalformedHeader(_))
        ));
        assert!(matches!(
            decode(b"patseries-container 1.0\n{\"kind\":\"field\",\"shape\":[1,1],\"dtype\":\">f4\"}\n\0\0\0\0"),
            Err(IoError::MalformedHeader(_))
        ));
    }

    #[test]
    fn files_and_kind_checks() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("g.pat");
        save(&path, &sinogram().into(), &Map::new()).unwrap();
        assert_eq!(load_sinogram(&path).unwrap(), sinogram());
        assert!(matches!(
            load_field(&path),
            Err(IoError::KindMismatch {
                expected: Kind::Field,
                found: Kind::Sinogram
            })
        ));
        assert!(matches!(
            load(dir.path().join("missing")),
            Err(IoError::File { .. })
        ));
    }
}
