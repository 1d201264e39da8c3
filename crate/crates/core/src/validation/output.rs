use std::io::Write;

use serde::Serialize;

use super::ErrorTable;
use crate::error::Result;

pub const CSV_HEADER: [&str; 8] = [
    "formula", "eps", "stratum", "n_pairs", "sup_err", "mean_err", "argmax_x", "argmax_y",
];

fn digits17(v: f64) -> String {
    format!("{v:.16e}")
}

fn coords(c: &[f64]) -> String {
    c.iter().map(|v| digits17(*v)).collect::<Vec<_>>().join(";")
}

/// Writes the table as CSV with 17 significant digits; point coordinates are
/// `;`-separated.
pub fn write_csv<W: Write>(table: &ErrorTable, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in &table.rows {
        w.write_record([
            table.formula.as_str().to_string(),
            digits17(r.eps),
            r.stratum.as_str().to_string(),
            r.n_pairs.to_string(),
            digits17(r.sup_err),
            digits17(r.mean_err),
            coords(&r.argmax_x),
            coords(&r.argmax_y),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Pretty JSON; doubles are printed in shortest round-trip form.
pub fn write_json<T: Serialize, W: Write>(value: &T, mut out: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, value)?;
    out.write_all(b"\n")?;
    Ok(())
}
