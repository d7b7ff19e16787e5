//! Level files in, reports out.
//!
//! Level files are UTF-8 text with one decimal level per line; blank lines
//! and lines starting with `#` are skipped. Reports are written as a single
//! JSON document or as one CSV file per ratio order. Every floating-point
//! number is written with 17 significant digits.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::{Spectrum, SpectrumKind};
use crate::pipeline::{ExperimentConfig, ExperimentReport, OrderReport};
use crate::ratio::surmise_params;

pub fn parse_level_file(text: &str) -> Result<Spectrum> {
    let mut levels = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let value: f64 = line.parse().map_err(|_| Error::Parse {
            line: i + 1,
            text: line.to_string(),
        })?;
        if !value.is_finite() {
            return Err(Error::Parse {
                line: i + 1,
                text: line.to_string(),
            });
        }
        levels.push(value);
    }
    if levels.is_empty() {
        return Err(Error::TooFewLevels { needed: 1, got: 0 });
    }
    levels.sort_by(f64::total_cmp);
    if let Some(w) = levels.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::DuplicateLevel(w[0]));
    }
    Spectrum::new(levels, SpectrumKind::Line)
}

pub fn read_level_file(path: &Path) -> Result<Spectrum> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_level_file(&text)
}

/// Writes levels in the level-file format.
pub fn format_level_file(levels: &[f64]) -> String {
    let mut out = String::new();
    for v in levels {
        out.push_str(&format_number(*v));
        out.push('\n');
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Csv,
}

impl std::str::FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(ReportFormat::Json),
            "csv" => Ok(ReportFormat::Csv),
            other => Err(Error::InvalidParameter(format!("unknown format {other:?}"))),
        }
    }
}

/// 17 significant digits in scientific notation; non-finite values become `nan`/`inf`.
pub fn format_number(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        v.to_string()
    }
}

/// JSON formatter writing floats with 17 significant digits (`null` for non-finite).
struct SigDigits;

impl serde_json::ser::Formatter for SigDigits {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()> {
        if value.is_finite() {
            write!(writer, "{value:.16e}")
        } else {
            writer.write_all(b"null")
        }
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> std::io::Result<()> {
        self.write_f64(writer, value as f64)
    }
}

pub fn to_json_string<T: Serialize>(value: &T) -> Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SigDigits);
    value.serialize(&mut ser)?;
    buf.push(b'\n');
    Ok(String::from_utf8(buf).expect("serde_json emits UTF-8"))
}

pub fn report_to_json(rep: &ExperimentReport) -> Result<String> {
    to_json_string(rep)
}

pub fn report_from_json(text: &str) -> Result<ExperimentReport> {
    Ok(serde_json::from_str(text)?)
}

pub fn config_from_json(text: &str) -> Result<ExperimentConfig> {
    Ok(serde_json::from_str(text)?)
}

pub const CSV_HEADER: &str =
    "bin_center,empirical_density,surmise_density_at_fit,surmise_density_at_predicted";

/// One row of a per-order CSV file.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CsvRow {
    pub bin_center: f64,
    pub empirical_density: f64,
    pub surmise_density_at_fit: f64,
    pub surmise_density_at_predicted: Option<f64>,
}

pub fn order_to_csv(order: &OrderReport) -> Result<String> {
    let at_fit = surmise_params(order.fit.beta_fit)?;
    let at_predicted = match order.predicted_beta_prime {
        Some(b) => Some(surmise_params(b as f64)?),
        None => None,
    };
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for (center, density) in order.histogram.bins() {
        out.push_str(&format_number(center));
        out.push(',');
        out.push_str(&format_number(density));
        out.push(',');
        out.push_str(&format_number(at_fit.pdf(center)));
        out.push(',');
        if let Some(p) = &at_predicted {
            out.push_str(&format_number(p.pdf(center)));
        }
        out.push('\n');
    }
    Ok(out)
}

pub fn parse_csv(text: &str) -> Result<Vec<CsvRow>> {
    let mut lines = text.lines();
    if lines.next() != Some(CSV_HEADER) {
        return Err(Error::MalformedReport("missing CSV header".into()));
    }
    let field = |s: &str| -> Result<f64> {
        s.parse()
            .map_err(|_| Error::MalformedReport(format!("bad CSV field {s:?}")))
    };
    lines
        .filter(|l| !l.is_empty())
        .map(|line| {
            let cols: Vec<&str> = line.split(',').collect();
            if cols.len() != 4 {
                return Err(Error::MalformedReport(format!("expected 4 columns in {line:?}")));
            }
            Ok(CsvRow {
                bin_center: field(cols[0])?,
                empirical_density: field(cols[1])?,
                surmise_density_at_fit: field(cols[2])?,
                surmise_density_at_predicted: if cols[3].is_empty() {
                    None
                } else {
                    Some(field(cols[3])?)
                },
            })
        })
        .collect()
}

/// `<stem>_k<k>.csv` next to `dest`.
pub fn csv_path(dest: &Path, k: usize) -> PathBuf {
    let stem = dest
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "report".into());
    dest.with_file_name(format!("{stem}_k{k}.csv"))
}

/// Writes `contents` to a sibling temporary file and renames it over `dest`.
pub fn write_atomic(dest: &Path, contents: &str) -> Result<()> {
    let name = dest
        .file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let tmp = dest.with_file_name(format!(".{name}.tmp-{}", std::process::id()));
    fs::write(&tmp, contents).map_err(|e| Error::io(&tmp, e))?;
    fs::rename(&tmp, dest).map_err(|e| {
        let _ = fs::remove_file(&tmp);
        Error::io(dest, e)
    })
}

/// Writes the report and returns the paths written.
pub fn write_report(rep: &ExperimentReport, format: ReportFormat, dest: &Path) -> Result<Vec<PathBuf>> {
    match format {
        ReportFormat::Json => {
            write_atomic(dest, &report_to_json(rep)?)?;
            Ok(vec![dest.to_path_buf()])
        }
        ReportFormat::Csv => rep
            .orders
            .iter()
            .map(|o| {
                let path = csv_path(dest, o.k);
                write_atomic(&path, &order_to_csv(o)?)?;
                Ok(path)
            })
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn comments_and_blank_lines() {
        let s = parse_level_file("1.0\n2.5\n# lab header\n4.0\n").unwrap();
        assert_eq!(s.levels(), &[1.0, 2.5, 4.0]);
        let s = parse_level_file("  \n\t3.5  \n\n# x\n-1e-3\n").unwrap();
        assert_eq!(s.levels(), &[-1e-3, 3.5]);
    }

    #[test]
    fn sorts_input() {
        let s = parse_level_file("3.0\n1.0\n2.0\n").unwrap();
        assert_eq!(s.levels(), &[1.0, 2.0, 3.0]);
    }

    #[test]
    fn parse_error_reports_line() {
        match parse_level_file("1.0\nabc\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_level_file("1.0\ninf\n"), Err(Error::Parse { line: 2, .. })));
    }

    #[test]
    fn duplicates_rejected() {
        assert!(matches!(
            parse_level_file("1.0\n2.0\n1.0\n"),
            Err(Error::DuplicateLevel(v)) if v == 1.0
        ));
    }

    #[test]
    fn empty_file() {
        assert!(matches!(parse_level_file("# nothing\n"), Err(Error::TooFewLevels { .. })));
    }

    #[test]
    fn seventeen_digits() {
        assert_eq!(format_number(0.1), "1.0000000000000001e-1");
        assert_eq!(format_number(1.0), "1.0000000000000000e0");
        let v = std::f64::consts::PI;
        assert_eq!(format_number(v).parse::<f64>().unwrap(), v);
        assert_eq!(to_json_string(&vec![0.1, f64::NAN]).unwrap(), "[1.0000000000000001e-1,null]\n");
    }

    #[test]
    fn csv_paths() {
        assert_eq!(csv_path(Path::new("/tmp/out.csv"), 3), PathBuf::from("/tmp/out_k3.csv"));
        assert_eq!(csv_path(Path::new("run"), 1), PathBuf::from("run_k1.csv"));
    }

    #[test]
    fn csv_parse_rejects_garbage() {
        assert!(parse_csv("a,b\n").is_err());
        assert!(parse_csv(&format!("{CSV_HEADER}\n1,2\n")).is_err());
    }
}
