//! CSV and JSON artifacts. Floats are written with nine significant digits
//! in `d.dddddddde±x` form, independent of locale.

use std::io;

use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter};

use crate::error::Result;

/// A named output file held in memory until written.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Artifact {
    pub name: String,
    pub contents: String,
}

/// `{:.8e}`; non-finite values print as `nan`, `inf` or `-inf`.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.8e}")
}

struct SigFormatter(PrettyFormatter<'static>);

impl Formatter for SigFormatter {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        if value.is_finite() {
            write!(w, "{value:.8e}")
        } else {
            w.write_all(b"null")
        }
    }
    fn begin_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }
    fn end_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }
    fn begin_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }
    fn end_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }
    fn begin_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }
    fn end_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }
    fn begin_object_key<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }
    fn begin_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }
    fn end_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

/// Pretty JSON with nine-significant-digit floats and a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SigFormatter(PrettyFormatter::new()));
    value.serialize(&mut ser)?;
    buf.push(b'\n');
    Ok(String::from_utf8(buf).expect("serde_json emits UTF-8"))
}

/// Column-oriented CSV from a header and pre-formatted rows.
pub fn to_csv(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).map_err(csv_err)?;
    for row in rows {
        w.write_record(&row).map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| io::Error::other(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("ASCII rows"))
}

fn csv_err(e: csv::Error) -> io::Error {
    io::Error::other(e.to_string())
}

/// Writes every artifact into `dir`, creating it if needed.
pub fn write_all(dir: &std::path::Path, artifacts: &[Artifact]) -> Result<Vec<std::path::PathBuf>> {
    std::fs::create_dir_all(dir)?;
    artifacts
        .iter()
        .map(|a| {
            let path = dir.join(&a.name);
            std::fs::write(&path, &a.contents)?;
            Ok(path)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nine_significant_digits() {
        assert_eq!(fmt_float(2.0 / std::f64::consts::PI), "6.36619772e-1");
        assert_eq!(fmt_float(1234.5), "1.23450000e3");
        #[derive(Serialize)]
        struct S {
            x: f64,
            y: Vec<f64>,
            n: u64,
            z: f64,
        }
        let s = to_json(&S { x: 0.1, y: vec![1.0, -2.5e-7], n: 3, z: f64::NAN }).unwrap();
        assert!(s.contains("\"x\": 1.00000000e-1"));
        assert!(s.contains("-2.50000000e-7"));
        assert!(s.contains("\"n\": 3"));
        assert!(s.contains("\"z\": null"));
        let v: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(v["y"][0].as_f64(), Some(1.0));
    }

    #[test]
    fn csv_layout() {
        let s = to_csv(&["a", "b"], [vec![fmt_float(1.0), "true".into()]]).unwrap();
        assert_eq!(s, "a,b\n1.00000000e0,true\n");
    }

    proptest::proptest! {
        #[test]
        fn formatted_floats_round_trip(x in proptest::num::f64::NORMAL) {
            let back: f64 = fmt_float(x).parse().unwrap();
            proptest::prop_assert!((back - x).abs() <= 5e-9 * x.abs());
        }
    }
}
