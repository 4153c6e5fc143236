use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use crate::domain::{Dataset, Environment, PathLossSample, Scenario};
use crate::error::{Error, Result};

/// Required columns, in canonical order.
pub const CSV_HEADER: [&str; 6] =
    ["frequency_ghz", "distance_m", "path_loss_db", "scenario", "environment", "campaign"];

pub fn load_csv(path: impl AsRef<Path>) -> Result<Dataset> {
    read_csv(File::open(path)?)
}

/// Parses the measurement CSV schema. Columns may appear in any order;
/// unknown columns are ignored with a warning. Row numbers in errors are
/// 1-based file line numbers.
pub fn read_csv<R: Read>(reader: R) -> Result<Dataset> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_reader(reader);
    let headers = rdr.headers()?.clone();
    if headers.is_empty() || (headers.len() == 1 && headers[0].is_empty()) {
        return Err(Error::Row { row: 1, message: "file is empty (header required)".into() });
    }

    let mut columns = [0usize; 6];
    for (slot, name) in columns.iter_mut().zip(CSV_HEADER) {
        *slot = headers.iter().position(|h| h == name).ok_or(Error::MissingColumn(name))?;
    }
    for extra in headers.iter().filter(|h| !CSV_HEADER.contains(h)) {
        log::warn!("ignoring unknown column `{extra}`");
    }

    let mut samples = Vec::new();
    for record in rdr.records() {
        let record = record?;
        let row = record.position().map_or(samples.len() + 2, |p| p.line() as usize);
        let field = |i: usize| record.get(columns[i]).unwrap_or("");
        let number = |i: usize| -> Result<f64> {
            field(i).parse::<f64>().map_err(|_| Error::Row {
                row,
                message: format!("`{}` is not a number in column {}", field(i), CSV_HEADER[i]),
            })
        };
        let frequency = number(0)?;
        let distance = number(1)?;
        let path_loss = number(2)?;
        if !(frequency > 0.0) {
            return Err(Error::Row { row, message: format!("frequency {frequency} GHz must be > 0") });
        }
        if !(distance >= 1.0) {
            return Err(Error::Row {
                row,
                message: format!("distance {distance} m violates the model domain d ≥ 1 m"),
            });
        }
        let scenario: Scenario = field(3).parse().map_err(|message| Error::Row { row, message })?;
        let environment: Environment = field(4).parse().map_err(|message| Error::Row { row, message })?;
        let sample = PathLossSample::new(frequency, distance, path_loss, scenario, environment, field(5))
            .map_err(|e| Error::Row { row, message: e.to_string() })?;
        samples.push(sample);
    }
    if samples.is_empty() {
        return Err(Error::Row { row: 2, message: "file has a header but no samples".into() });
    }
    Dataset::new(samples)
}

/// Writes the canonical form: fixed column order, shortest round-trip
/// decimal for every number.
pub fn write_csv<W: Write>(ds: &Dataset, writer: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(writer);
    wtr.write_record(CSV_HEADER)?;
    for s in ds.samples() {
        wtr.write_record([
            s.frequency.to_string(),
            s.distance.to_string(),
            s.path_loss.to_string(),
            s.scenario.to_string(),
            s.environment.to_string(),
            s.campaign.clone(),
        ])?;
    }
    wtr.flush()?;
    Ok(())
}
