//! Report rendering: JSON lines, CSV, or an aligned text table.

use std::io::{self, Write};

use clap::ValueEnum;
use gauss_moments::verify::table::TableRow;
use gauss_moments::verify::VerificationReport;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
    Csv,
}

fn csv_error(e: csv::Error) -> io::Error {
    io::Error::other(e)
}

pub fn write_reports(out: &mut impl Write, reports: &[VerificationReport], format: Format) -> io::Result<()> {
    match format {
        Format::Json => {
            for r in reports {
                serde_json::to_writer(&mut *out, r)?;
                out.write_all(b"\n")?;
            }
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            let names = reports.first().map(|r| r.params.names()).unwrap_or_default();
            let mut header = vec!["claim"];
            header.extend(&names);
            header.extend(["closed_form", "oracle", "backend", "match", "elapsed_ms"]);
            w.write_record(&header).map_err(csv_error)?;
            for r in reports {
                let mut row = vec![r.claim.to_string()];
                row.extend(names.iter().map(|n| r.params.get(n).map(|v| v.to_string()).unwrap_or_default()));
                row.extend([
                    r.closed_form.clone(),
                    r.oracle.clone(),
                    r.backend.to_string(),
                    r.matched.to_string(),
                    r.elapsed_ms.to_string(),
                ]);
                w.write_record(&row).map_err(csv_error)?;
            }
            w.flush()?;
        }
        Format::Text => {
            let header = ["claim", "params", "closed_form", "oracle", "backend", "match", "tolerance"];
            let rows: Vec<Vec<String>> = reports
                .iter()
                .map(|r| {
                    vec![
                        r.claim.to_string(),
                        r.params.to_string(),
                        r.closed_form.clone(),
                        r.oracle.clone(),
                        r.backend.to_string(),
                        r.matched.to_string(),
                        r.tolerance.clone().unwrap_or_else(|| "-".into()),
                    ]
                })
                .collect();
            write_aligned(out, &header, &rows)?;
            for r in reports {
                if let Some(w) = &r.warning {
                    writeln!(out, "warning: {} {}: {w}", r.claim, r.params)?;
                }
            }
        }
    }
    Ok(())
}

pub fn write_table(out: &mut impl Write, rows: &[TableRow], format: Format) -> io::Result<()> {
    let matched = |r: &TableRow| r.matched.map(|m| m.to_string()).unwrap_or_default();
    match format {
        Format::Json => {
            for r in rows {
                serde_json::to_writer(&mut *out, r)?;
                out.write_all(b"\n")?;
            }
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["q", "m", "n", "closed_form", "oracle", "backend", "match"]).map_err(csv_error)?;
            for r in rows {
                w.write_record([
                    r.q.to_string(),
                    r.m.to_string(),
                    r.n.to_string(),
                    r.closed_form.clone(),
                    r.oracle.clone(),
                    r.backend.clone(),
                    matched(r),
                ])
                .map_err(csv_error)?;
            }
            w.flush()?;
        }
        Format::Text => {
            let header = ["q", "m", "n", "closed_form", "oracle", "backend", "match"];
            let body: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    vec![
                        r.q.to_string(),
                        r.m.to_string(),
                        r.n.to_string(),
                        r.closed_form.clone(),
                        r.oracle.clone(),
                        r.backend.clone(),
                        matched(r),
                    ]
                })
                .collect();
            write_aligned(out, &header, &body)?;
        }
    }
    Ok(())
}

fn write_aligned(out: &mut impl Write, header: &[&str], rows: &[Vec<String>]) -> io::Result<()> {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let line = |cells: Vec<&str>| {
        let padded: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
        padded.join("  ").trim_end().to_string()
    };
    writeln!(out, "{}", line(header.to_vec()))?;
    for row in rows {
        writeln!(out, "{}", line(row.iter().map(String::as_str).collect()))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use gauss_moments::verify::{run_case, Case, Claim, RunOptions};

    fn report() -> VerificationReport {
        run_case(&Case::new(Claim::PowerMean, vec![("q", 9), ("m", 2), ("n", 1)]), &RunOptions::default()).unwrap()
    }

    fn render(format: Format) -> String {
        let mut buf = Vec::new();
        write_reports(&mut buf, &[report()], format).unwrap();
        String::from_utf8(buf).unwrap()
    }

    #[test]
    fn csv_header_lists_params() {
        assert_eq!(
            render(Format::Csv),
            "claim,q,m,n,closed_form,oracle,backend,match,elapsed_ms\ntheorem1,9,2,1,1296,1296,exact,true,0\n"
        );
    }

    #[test]
    fn json_lines() {
        let s = render(Format::Json);
        assert_eq!(s.lines().count(), 1);
        assert!(s.contains(r#""match":true"#));
    }

    #[test]
    fn text_is_aligned() {
        let s = render(Format::Text);
        let lines: Vec<&str> = s.lines().collect();
        assert_eq!(lines[0].find("closed_form"), lines[1].find("1296"));
    }
}
