use std::fmt::Write;
use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use serde_json::{json, Value};
use spancalc_core::action::ActionData;
use spancalc_core::groupoid::{validate_groupoid, GroupoidData};
use spancalc_core::linalg::MatrixJson;
use spancalc_core::rational::to_pq;
use spancalc_core::span::{class_labels, compose_spans, degroupoidify_span, degroupoidify_span_surd, AlphaKind, SpanData};
use spancalc_core::{weak_quotient, Alpha, Error, FiniteGroupoid, SpanOfGroupoids, TableAction};

use crate::{status_line, Report};

enum Input {
    Groupoid(GroupoidData),
    Span(SpanData),
    Action(ActionData),
}

fn read(path: &Path) -> Result<Input> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let value: Value = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    let kind = |e: serde_json::Error| anyhow::Error::new(e).context(format!("in {}", path.display()));
    Ok(if value.get("apex").is_some() {
        Input::Span(serde_json::from_value(value).map_err(kind)?)
    } else if value.get("group").is_some() {
        Input::Action(serde_json::from_value(value).map_err(kind)?)
    } else {
        Input::Groupoid(serde_json::from_value(value).map_err(kind)?)
    })
}

fn read_span(path: &Path) -> Result<SpanOfGroupoids> {
    match read(path)? {
        Input::Span(data) => SpanOfGroupoids::from_data(&data).with_context(|| format!("in {}", path.display())),
        _ => anyhow::bail!("{} is not a span (expected an \"apex\" field)", path.display()),
    }
}

pub fn check(path: &Path) -> Result<Report> {
    let (kind, problems) = match read(path)? {
        Input::Groupoid(data) => {
            let report = validate_groupoid(&data);
            ("groupoid", report.violations.iter().map(|v| format!("{:?}: {}", v.axiom, v.detail)).collect())
        }
        Input::Span(data) => match SpanOfGroupoids::from_data(&data) {
            Ok(span) => ("span", span.validate()),
            Err(Error::InvalidGroupoid(r)) => ("span", r.violations.iter().map(|v| format!("{:?}: {}", v.axiom, v.detail)).collect()),
            Err(e) => ("span", vec![e.to_string()]),
        },
        Input::Action(data) => match TableAction::from_data(&data) {
            Ok(_) => ("action", Vec::new()),
            Err(e) => ("action", vec![e.to_string()]),
        },
    };
    let passed = problems.is_empty();
    let mut text = format!("{kind}: {}\n", if passed { "valid" } else { "invalid" });
    for p in &problems {
        writeln!(text, "  {p}").unwrap();
    }
    Ok(Report { text, json: json!({ "kind": kind, "valid": passed, "violations": problems }), passed })
}

pub fn card(path: &Path) -> Result<Report> {
    let (card, alt) = match read(path)? {
        Input::Groupoid(data) => {
            let g = FiniteGroupoid::from_data(&data)?;
            (g.cardinality(), Some(g.cardinality_alt()))
        }
        Input::Action(data) => (weak_quotient(&TableAction::from_data(&data)?).cardinality(), None),
        Input::Span(data) => (SpanOfGroupoids::from_data(&data)?.apex.cardinality(), None),
    };
    let mut json = json!({ "cardinality": to_pq(&card) });
    if let Some(alt) = alt {
        json["cardinality_alt"] = json!(to_pq(&alt));
    }
    Ok(Report::ok(format!("{}\n", to_pq(&card)), json))
}

pub(crate) fn matrix_report(span: &SpanOfGroupoids, alpha: &Alpha, csv: Option<&Path>) -> Result<(String, Value, Option<spancalc_core::RationalMatrix>)> {
    let rows = class_labels(span.target());
    let cols = class_labels(span.source());
    let (entries, rational) = match alpha.kind()? {
        AlphaKind::Integer(_) => {
            let m = degroupoidify_span(span, alpha)?;
            (m.to_pq_rows(), Some(m))
        }
        AlphaKind::Half(_) => {
            let m = degroupoidify_span_surd(span, alpha)?;
            let rows = (0..m.rows).map(|i| (0..m.cols).map(|j| m.get(i, j).to_string()).collect()).collect();
            (rows, None)
        }
    };
    if let Some(path) = csv {
        let body: String = entries.iter().map(|r| r.join(",") + "\n").collect();
        fs::write(path, body).with_context(|| format!("writing {}", path.display()))?;
    }
    let mut text = String::new();
    for r in &entries {
        writeln!(text, "{}", r.join(" ")).unwrap();
    }
    let json = match &rational {
        Some(m) => serde_json::to_value(MatrixJson::new(m, rows, cols))?,
        None => json!({ "rows": rows, "cols": cols, "entries": entries }),
    };
    Ok((text, json, rational))
}

pub fn degroupoidify(path: &Path, alpha: &str, csv: Option<&Path>) -> Result<Report> {
    let span = read_span(path)?;
    let alpha = Alpha::parse(alpha)?;
    let (text, json, _) = matrix_report(&span, &alpha, csv)?;
    Ok(Report::ok(text, json))
}

pub fn compose(t: &Path, s: &Path, out: Option<&Path>, alpha: &str, check: bool) -> Result<Report> {
    let (t, s) = (read_span(t)?, read_span(s)?);
    let alpha = Alpha::parse(alpha)?;
    let ts = compose_spans(&t, &s)?;
    if let Some(path) = out {
        fs::write(path, ts.to_json()).with_context(|| format!("writing {}", path.display()))?;
    }
    let (mut text, matrix_json, composite) = matrix_report(&ts, &alpha, None)?;
    let mut json = json!({ "matrix": matrix_json, "apex_objects": ts.apex.num_objects() });
    let mut passed = true;
    if check {
        let composite = composite.context("--check needs an integer alpha")?;
        let product = &degroupoidify_span(&t, &alpha)? * &degroupoidify_span(&s, &alpha)?;
        passed = composite == product;
        text.push_str(&status_line(passed, "matrix(T∘S) = matrix(T)·matrix(S)"));
        text.push('\n');
        json["functoriality"] = json!(passed);
    }
    Ok(Report { text, json, passed })
}
