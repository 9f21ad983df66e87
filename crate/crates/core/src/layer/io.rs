use std::io::{Read, Write};

use ndarray::Array2;

use crate::error::{Error, Result};

/// Reads a headerless CSV of equal-width rows of numbers.
pub fn read_features_csv(reader: impl Read) -> Result<Array2<f64>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut values = Vec::new();
    let mut width = None;
    let mut rows = 0;
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| Error::Parse {
            line: i + 1,
            msg: e.to_string(),
        })?;
        if *width.get_or_insert(rec.len()) != rec.len() {
            return Err(Error::Parse {
                line: i + 1,
                msg: format!("{} columns, expected {}", rec.len(), width.unwrap_or(0)),
            });
        }
        for field in rec.iter() {
            values.push(field.parse::<f64>().map_err(|e| Error::Parse {
                line: i + 1,
                msg: format!("{field:?}: {e}"),
            })?);
        }
        rows += 1;
    }
    Array2::from_shape_vec((rows, width.unwrap_or(0)), values)
        .map_err(|e| Error::ShapeMismatch(e.to_string()))
}

/// Writes one CSV row per matrix row using shortest round-trip formatting.
pub fn write_features_csv(x: &Array2<f64>, writer: impl Write) -> Result<()> {
    let io_err = |e: csv::Error| Error::Parse {
        line: 0,
        msg: e.to_string(),
    };
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(writer);
    for row in x.rows() {
        w.write_record(row.iter().map(|v| v.to_string())).map_err(io_err)?;
    }
    w.flush().map_err(|e| Error::Parse {
        line: 0,
        msg: e.to_string(),
    })
}
