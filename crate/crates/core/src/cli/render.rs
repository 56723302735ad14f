use serde_json::Value;

use super::CliReport;

pub(super) fn table(report: &CliReport) -> String {
    let mut out = format!("stackyrr {} (schema {})\n", report.command, report.schema_version);
    block(&report.result, 0, &mut out);
    if let Some(oracles) = &report.oracles {
        out.push_str("\noracles\n");
        let rows: Vec<[String; 4]> = oracles
            .iter()
            .map(|o| {
                let verdict = if o.agree { "agree" } else { "DISAGREE" };
                [o.check.clone(), o.value.clone(), o.oracle.clone(), verdict.to_string()]
            })
            .collect();
        columns(&["check", "value", "oracle", ""], &rows, 2, &mut out);
    }
    out
}

/// A `["num", "den"]` pair is shown as a fraction.
fn rational(v: &Value) -> Option<String> {
    let a = v.as_array()?;
    if a.len() != 2 {
        return None;
    }
    let n = a[0].as_str()?;
    let d = a[1].as_str()?;
    if n.parse::<i128>().is_err() && n.trim_start_matches('-').chars().any(|c| !c.is_ascii_digit()) {
        return None;
    }
    if d.chars().any(|c| !c.is_ascii_digit()) {
        return None;
    }
    Some(if d == "1" { n.to_string() } else { format!("{n}/{d}") })
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(a) => {
            if let Some(r) = rational(v) {
                return Some(r);
            }
            let parts: Option<Vec<String>> = a
                .iter()
                .map(|x| match x {
                    Value::Array(_) => rational(x),
                    Value::Object(_) => None,
                    _ => scalar(x),
                })
                .collect();
            parts.map(|p| format!("[{}]", p.join(", ")))
        }
        Value::Object(_) => None,
    }
}

fn block(v: &Value, indent: usize, out: &mut String) {
    let pad = " ".repeat(indent);
    match v {
        Value::Object(map) => {
            let width = map.keys().map(|k| k.len()).max().unwrap_or(0);
            for (k, x) in map {
                let grid = if k == "matrix" { matrix(x) } else { None };
                if let Some(rows) = grid {
                    out.push_str(&format!("{pad}{k}\n"));
                    columns(&[], &rows, indent + 2, out);
                } else if let Some(s) = scalar(x) {
                    out.push_str(&format!("{pad}{k:<width$}  {s}\n"));
                } else if let Some((head, rows)) = records(x) {
                    out.push_str(&format!("{pad}{k}\n"));
                    let head: Vec<&str> = head.iter().map(String::as_str).collect();
                    columns(&head, &rows, indent + 2, out);
                } else if let Some(rows) = matrix(x) {
                    out.push_str(&format!("{pad}{k}\n"));
                    columns(&[], &rows, indent + 2, out);
                } else {
                    out.push_str(&format!("{pad}{k}\n"));
                    block(x, indent + 2, out);
                }
            }
        }
        Value::Array(items) => {
            for (i, x) in items.iter().enumerate() {
                match scalar(x) {
                    Some(s) => out.push_str(&format!("{pad}{i}  {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}{i}\n"));
                        block(x, indent + 2, out);
                    }
                }
            }
        }
        _ => out.push_str(&format!("{pad}{}\n", scalar(v).unwrap_or_default())),
    }
}

/// An array of objects with identical scalar fields.
fn records(v: &Value) -> Option<(Vec<String>, Vec<Vec<String>>)> {
    let items = v.as_array()?;
    let first = items.first()?.as_object()?;
    let head: Vec<String> = first.keys().cloned().collect();
    let mut rows = Vec::new();
    for x in items {
        let o = x.as_object()?;
        if o.len() != head.len() {
            return None;
        }
        let row: Option<Vec<String>> = head.iter().map(|k| o.get(k).and_then(scalar)).collect();
        rows.push(row?);
    }
    Some((head, rows))
}

/// An array of arrays of scalars.
fn matrix(v: &Value) -> Option<Vec<Vec<String>>> {
    v.as_array()?
        .iter()
        .map(|row| row.as_array()?.iter().map(|c| if c.is_array() { None } else { scalar(c) }).collect())
        .collect()
}

fn columns<R: AsRef<[String]>>(head: &[&str], rows: &[R], indent: usize, out: &mut String) {
    let n = rows.iter().map(|r| r.as_ref().len()).chain([head.len()]).max().unwrap_or(0);
    let mut widths = vec![0; n];
    for (i, h) in head.iter().enumerate() {
        widths[i] = h.len();
    }
    for r in rows {
        for (i, c) in r.as_ref().iter().enumerate() {
            widths[i] = widths[i].max(c.chars().count());
        }
    }
    let pad = " ".repeat(indent);
    let line = |cells: Vec<&str>, out: &mut String| {
        let body: Vec<String> = cells.iter().enumerate().map(|(i, c)| format!("{c:<w$}", w = widths[i])).collect();
        out.push_str(&format!("{pad}{}\n", body.join("  ").trim_end()));
    };
    if !head.is_empty() {
        line(head.to_vec(), out);
    }
    for r in rows {
        line(r.as_ref().iter().map(String::as_str).collect(), out);
    }
}
