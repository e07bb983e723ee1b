//! Fixed-layout CSV reports. Floats are written with 17 significant digits
//! so identical runs produce identical bytes.

use crate::error::{Error, Result};

use super::ScanReport;

/// Formats a float with 17 significant digits.
pub fn fmt_float(v: f64) -> String {
    format!("{v:.16e}")
}

/// Renders a header and rows with the fixed CSV dialect of every report.
pub fn render(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::parse(format!("csv: {e}"));
    w.write_record(header).map_err(io)?;
    for row in rows {
        w.write_record(&row).map_err(io)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| Error::parse(format!("csv: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// One row per sample: `s_re, s_im, verdict, rho_last, E_n_index, D`.
pub fn scan_csv(report: &ScanReport) -> Result<String> {
    render(
        &["s_re", "s_im", "verdict", "rho_last", "E_n_index", "D"],
        report.rows.iter().map(|r| {
            vec![
                fmt_float(r.probe.s.0),
                fmt_float(r.probe.s.1),
                r.probe.profile.verdict.to_string(),
                fmt_float(r.probe.profile.rho_last()),
                r.probe.e_n_index.to_string(),
                report.degree.to_string(),
            ]
        }),
    )
}

/// One row per sample and degree: `s_re, s_im, m, rho_m, verdict, E_n_index`.
pub fn profile_csv(report: &ScanReport) -> Result<String> {
    render(
        &["s_re", "s_im", "m", "rho_m", "verdict", "E_n_index"],
        report.rows.iter().flat_map(|r| {
            r.probe.profile.rho.iter().map(move |(m, rho)| {
                vec![
                    fmt_float(r.probe.s.0),
                    fmt_float(r.probe.s.1),
                    m.to_string(),
                    fmt_float(*rho),
                    r.probe.profile.verdict.to_string(),
                    r.probe.e_n_index.to_string(),
                ]
            })
        }),
    )
}
