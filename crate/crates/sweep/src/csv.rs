//! CSV serialisation of sweep tables.

use std::io::Write;

use crate::error::{config, Result};
use crate::run::{Model, SweepTable};
use crate::spec::Param;

/// Formats `v` with 12 significant digits, like C's `%.12g`.
pub fn format_sig(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    let sci = format!("{v:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..12).contains(&exp) {
        trim_zeros(&format!("{:.*}", (11 - exp) as usize, v)).into()
    } else {
        format!("{}e{exp}", trim_zeros(mantissa))
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Header names: the six parameters, then each observable column once per
/// model.
pub fn header(table: &SweepTable) -> Vec<String> {
    let mut cols: Vec<String> = Param::ALL.iter().map(|p| p.name().to_string()).collect();
    for stem in table.stems() {
        for m in [Model::Impurity, Model::Reference] {
            cols.push(format!("{stem}_{}", m.suffix()));
        }
    }
    cols
}

/// Writes `table` as comma-separated UTF-8 with LF line endings.
pub fn emit_csv(table: &SweepTable, mut out: impl Write) -> Result<()> {
    if table.records.is_empty() {
        return config("nothing to write: the table has no records");
    }
    let mut buf = header(table).join(",");
    buf.push('\n');
    for r in &table.records {
        let mut fields: Vec<String> = Param::ALL
            .iter()
            .map(|&p| format_sig(r.point.get(p)))
            .collect();
        for (a, b) in r.imp.iter().zip(&r.reference) {
            fields.push(format_sig(*a));
            fields.push(format_sig(*b));
        }
        buf.push_str(&fields.join(","));
        buf.push('\n');
    }
    out.write_all(buf.as_bytes())?;
    out.flush()?;
    Ok(())
}

pub fn to_csv_string(table: &SweepTable) -> Result<String> {
    let mut out = Vec::new();
    emit_csv(table, &mut out)?;
    Ok(String::from_utf8(out).expect("ascii output"))
}

/// Parses CSV produced by [`emit_csv`] into its header and numeric rows.
pub fn parse_csv(text: &str) -> Result<(Vec<String>, Vec<Vec<f64>>)> {
    let mut lines = text.lines();
    let Some(head) = lines.next() else {
        return config("empty CSV");
    };
    let header: Vec<String> = head.split(',').map(String::from).collect();
    let rows = lines
        .map(|line| {
            let row = line
                .split(',')
                .map(|f| {
                    f.parse::<f64>()
                        .or_else(|_| config(format!("bad CSV field `{f}`")))
                })
                .collect::<Result<Vec<f64>>>()?;
            if row.len() != header.len() {
                return config(format!(
                    "row has {} fields, header has {}",
                    row.len(),
                    header.len()
                ));
            }
            Ok(row)
        })
        .collect::<Result<_>>()?;
    Ok((header, rows))
}
