use std::fmt::Write as _;

use crate::run::RunReport;

const HEADER: [&str; 7] = [
    "experiment",
    "verdict",
    "expected",
    "worst residual",
    "horizon",
    "runtime",
    "anchor",
];

/// Plain-text table with one row per experiment of every report. Rows whose
/// verdict differs from the expectation start with `!`. The runtime column
/// shows the budget and whether it was met, so the text does not depend on
/// the measured time.
pub fn emit_summary(reports: &[RunReport]) -> String {
    let mut rows: Vec<[String; 7]> = Vec::new();
    for report in reports {
        for r in &report.records {
            let runtime = match report.timing(&r.name) {
                Some(t) if t.within_budget => format!("≤ {}s", r.budget_secs),
                Some(_) => format!("> {}s", r.budget_secs),
                None => format!("budget {}s", r.budget_secs),
            };
            let flag = if r.matched { " " } else { "!" };
            rows.push([
                format!("{flag} {}", r.name),
                r.observed.clone(),
                r.expected.clone(),
                format!("[{:.6e}, {:.6e}]", r.residual.lo, r.residual.hi),
                r.horizon.to_string(),
                runtime,
                r.anchor.clone(),
            ]);
        }
    }
    let header = HEADER.map(|h| {
        if h == "experiment" {
            format!("  {h}")
        } else {
            h.to_string()
        }
    });
    let mut widths = header.each_ref().map(|h| h.chars().count());
    for row in &rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let mut out = String::new();
    let line = |out: &mut String, cells: &[String; 7]| {
        let padded: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c}{}", " ".repeat(w - c.chars().count())))
            .collect();
        writeln!(out, "{}", padded.join("  ").trim_end()).unwrap();
    };
    line(&mut out, &header);
    line(&mut out, &widths.map(|w| "-".repeat(w)));
    for row in &rows {
        line(&mut out, row);
    }
    let failed = rows.iter().filter(|r| r[0].starts_with('!')).count();
    writeln!(
        out,
        "\n{} of {} experiments match their expectations",
        rows.len() - failed,
        rows.len()
    )
    .unwrap();
    out
}
