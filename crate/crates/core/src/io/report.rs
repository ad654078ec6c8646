//! CSV reports. Rationals appear twice: a decimal rounded to six places
//! and the exact `p/q` text.

use std::collections::BTreeMap;

use num_traits::Signed;

use crate::bounds::BoundReport;
use crate::graph::{fmt_rational, Rational};
use crate::heuristics::SweepReport;
use crate::metrics::MetricsRow;

#[derive(Clone, Debug, Default)]
pub struct ReportOptions {
    /// Adds a wall-clock column; off by default so output is reproducible.
    pub include_runtime: bool,
    /// Edge lower bound per λ, joined into an `edge_bound` column when set.
    pub edge_bounds: BTreeMap<Rational, usize>,
}

/// Decimal text rounded half away from zero to `places`, trailing zeros
/// dropped.
pub fn fmt_decimal(r: &Rational, places: u32) -> String {
    let scale = 10i128.pow(places);
    let num = i128::from(*r.numer()) * scale;
    let den = i128::from(*r.denom());
    let q = (num.abs() * 2 + den) / (2 * den);
    let neg = r.is_negative() && q != 0;
    let int = q / scale;
    let frac = q % scale;
    let mut out = format!("{}{int}", if neg { "-" } else { "" });
    if frac != 0 {
        let digits = format!("{frac:0width$}", width = places as usize);
        out.push('.');
        out.push_str(digits.trim_end_matches('0'));
    }
    out
}

fn pair(r: Option<&Rational>) -> [String; 2] {
    match r {
        Some(r) => [fmt_decimal(r, 6), fmt_rational(r)],
        None => [String::new(), String::new()],
    }
}

fn finish(w: csv::Writer<Vec<u8>>) -> String {
    let bytes = w.into_inner().expect("writing to memory");
    String::from_utf8(bytes).expect("csv output is utf-8")
}

fn writer() -> csv::Writer<Vec<u8>> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new())
}

/// One line per sweep row; best-over-seeds rows have an empty seed.
pub fn write_sweep_csv(report: &SweepReport, options: &ReportOptions) -> String {
    let mut w = writer();
    let mut header = vec![
        "lambda",
        "lambda_exact",
        "heuristic",
        "seed",
        "total_edges",
        "kept_edges",
        "spared_percent",
        "spared_percent_exact",
        "feasible",
        "stretch",
        "stretch_exact",
        "avg_disjoint_paths",
        "avg_disjoint_paths_exact",
    ];
    let with_bounds = !options.edge_bounds.is_empty();
    if with_bounds {
        header.push("edge_bound");
    }
    if options.include_runtime {
        header.push("runtime_s");
    }
    w.write_record(&header).expect("writing to memory");
    for row in &report.rows {
        let mut rec: Vec<String> = Vec::with_capacity(header.len());
        rec.extend(pair(Some(&row.lambda)));
        rec.push(row.heuristic.to_string());
        rec.push(row.seed.map(|s| s.to_string()).unwrap_or_default());
        rec.push(row.total_edges.to_string());
        rec.push(row.kept_edges.map(|k| k.to_string()).unwrap_or_default());
        rec.extend(pair(row.spared_percent.as_ref()));
        rec.push(row.feasible.to_string());
        rec.extend(pair(row.stretch.as_ref()));
        rec.extend(pair(row.avg_disjoint_paths.as_ref()));
        if with_bounds {
            rec.push(
                options
                    .edge_bounds
                    .get(&row.lambda)
                    .map(|b| b.to_string())
                    .unwrap_or_default(),
            );
        }
        if options.include_runtime {
            rec.push(format!("{:.6}", row.runtime.as_secs_f64()));
        }
        w.write_record(&rec).expect("writing to memory");
    }
    finish(w)
}

/// One line per bound; inapplicable bounds have empty value columns.
pub fn write_bounds_csv(bounds: &[BoundReport]) -> String {
    let mut w = writer();
    w.write_record(["bound", "kind", "value", "value_exact", "params", "note"])
        .expect("writing to memory");
    for b in bounds {
        let [dec, exact] = pair(b.value.as_ref());
        w.write_record([
            b.name.clone(),
            b.kind.as_str().to_string(),
            dec,
            exact,
            b.params_text(),
            b.note.clone(),
        ])
        .expect("writing to memory");
    }
    finish(w)
}

pub fn write_metrics_csv(rows: &[MetricsRow]) -> String {
    let mut w = writer();
    w.write_record([
        "total_edges",
        "kept_edges",
        "avg_route_length",
        "avg_route_length_exact",
        "stretch",
        "stretch_exact",
        "avg_disjoint_paths",
        "avg_disjoint_paths_exact",
        "spared_percent",
        "spared_percent_exact",
        "overprovisioning",
        "overprovisioning_exact",
        "energy_mwh_per_year",
    ])
    .expect("writing to memory");
    for r in rows {
        let mut rec = vec![r.total_edges.to_string(), r.kept_edges.to_string()];
        rec.extend(pair(Some(&r.avg_route_length)));
        rec.extend(pair(r.stretch.as_ref()));
        rec.extend(pair(Some(&r.avg_disjoint_paths)));
        rec.extend(pair(Some(&r.spared_percent)));
        rec.extend(pair(r.overprovisioning.as_ref()));
        rec.push(format!("{:.6}", r.energy_mwh_per_year));
        w.write_record(&rec).expect("writing to memory");
    }
    finish(w)
}
