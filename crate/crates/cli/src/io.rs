use anyhow::{bail, Context, Result};
use std::path::Path;

/// Reads the first column of a CSV file. A non-numeric first row is taken as a header.
pub fn read_signal_csv(path: &Path) -> Result<Vec<f64>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .with_context(|| format!("opening {}", path.display()))?;
    let mut out = Vec::new();
    for (row, record) in reader.records().enumerate() {
        let record = record.with_context(|| format!("reading {}", path.display()))?;
        let Some(field) = record.get(0).filter(|f| !f.is_empty()) else {
            continue;
        };
        match field.parse::<f64>() {
            Ok(v) if v.is_finite() => out.push(v),
            Ok(v) => bail!(
                "{}: row {} holds non-finite value {v}",
                path.display(),
                row + 1
            ),
            Err(_) if row == 0 => continue,
            Err(_) => bail!(
                "{}: row {} is not a number: '{field}'",
                path.display(),
                row + 1
            ),
        }
    }
    if out.is_empty() {
        bail!("{}: no samples", path.display());
    }
    Ok(out)
}

pub fn write_signal_csv(path: &Path, values: &[f64]) -> Result<()> {
    let mut writer =
        csv::Writer::from_path(path).with_context(|| format!("creating {}", path.display()))?;
    writer.write_record(["value"])?;
    for v in values {
        writer.write_record([v.to_string()])?;
    }
    writer.flush()?;
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FileKind {
    Csv,
    Wav,
}

pub fn file_kind(path: &Path) -> Result<FileKind> {
    match path
        .extension()
        .and_then(|e| e.to_str())
        .map(str::to_ascii_lowercase)
        .as_deref()
    {
        Some("csv") => Ok(FileKind::Csv),
        Some("wav") => Ok(FileKind::Wav),
        _ => bail!("{}: expected a .csv or .wav file", path.display()),
    }
}
