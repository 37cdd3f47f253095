//! Tables written by the experiment drivers.

use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};

/// Formats like C's `%.12g`.
pub fn format_g(x: f64) -> String {
    format_sig(x, 12)
}

/// `%g` with `sig` significant digits.
pub fn format_sig(x: f64, sig: usize) -> String {
    assert!(sig > 0);
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    // the exponent after rounding to `sig` digits decides the style
    let sci = format!("{:.*e}", sig - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= sig as i32 {
        let m = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (sig as i32 - 1 - exp) as usize;
        trim_zeros(&format!("{:.*}", decimals, x)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, serde::Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

/// A row with a fixed CSV layout.
pub trait Record: Serialize {
    const HEADER: &'static [&'static str];
    fn fields(&self) -> Vec<String>;
}

pub fn write_csv<R: Record, W: Write>(rows: &[R], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(R::HEADER)?;
    for r in rows {
        let f = r.fields();
        debug_assert_eq!(f.len(), R::HEADER.len());
        w.write_record(&f)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_json<R: Record, W: Write>(rows: &[R], mut out: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, rows)?;
    out.write_all(b"\n")?;
    Ok(())
}

/// Writes `<dir>/<stem>.<ext>` and returns the path.
pub fn write_table<R: Record>(rows: &[R], dir: &Path, stem: &str, format: Format) -> Result<std::path::PathBuf> {
    std::fs::create_dir_all(dir)?;
    let path = dir.join(format!("{stem}.{}", format.extension()));
    let file = std::io::BufWriter::new(std::fs::File::create(&path)?);
    match format {
        Format::Csv => write_csv(rows, file)?,
        Format::Json => write_json(rows, file)?,
    }
    Ok(path)
}

pub fn to_csv_string<R: Record>(rows: &[R]) -> Result<String> {
    let mut buf = Vec::new();
    write_csv(rows, &mut buf)?;
    String::from_utf8(buf).map_err(|e| Error::Config(e.to_string()))
}
