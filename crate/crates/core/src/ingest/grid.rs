//! Weaving-grid files.
//!
//! The first row holds the ionic counts, one column per ion. Every further
//! row holds one unionic term: `n` bits marking the ions of the event followed
//! by its count. Fields are separated by commas or tabs; blank lines and lines
//! starting with `#` are ignored.

use crate::error::{Error, Result};
use crate::model::{canonicalize, default_ion_names, CountModel, Pattern};

fn fields(line: &str) -> Vec<&str> {
    let sep = if line.contains('\t') { '\t' } else { ',' };
    line.split(sep).map(str::trim).collect()
}

fn number(text: &str, line: usize, what: &str) -> Result<f64> {
    match text.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(Error::Format {
            line,
            msg: format!("{what} {text:?} is not a finite number"),
        }),
    }
}

pub fn parse_grid(text: &str) -> Result<CountModel> {
    let mut rows = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (header_line, header) = rows.next().ok_or(Error::EmptyInput)?;
    let a = fields(header)
        .iter()
        .map(|f| number(f, header_line, "ionic count"))
        .collect::<Result<Vec<f64>>>()?;
    let n = a.len();
    if n < 2 {
        return Err(Error::TooFewIons { n });
    }
    let mut terms: Vec<(Pattern, f64)> = (0..n)
        .filter(|&i| a[i] != 0.0)
        .map(|i| (Pattern::unit(n, i), a[i]))
        .collect();
    for (line, row) in rows {
        let f = fields(row);
        if f.len() != n + 1 {
            return Err(Error::Format {
                line,
                msg: format!("expected {} fields, found {}", n + 1, f.len()),
            });
        }
        let mut bits = Vec::with_capacity(n);
        for (i, v) in f[..n].iter().enumerate() {
            bits.push(match *v {
                "0" => false,
                "1" => true,
                other => {
                    return Err(Error::Format {
                        line,
                        msg: format!("pattern entry {} is {other:?}, not a bit", i + 1),
                    })
                }
            });
        }
        let pattern = Pattern::from_bits(&bits);
        if pattern.is_zero() {
            return Err(Error::Format {
                line,
                msg: "the ionic slice row is implicit and must not be listed".into(),
            });
        }
        let b = number(f[n], line, "unionic count")?;
        if b == 0.0 {
            return Err(Error::Format {
                line,
                msg: "zero unionic count".into(),
            });
        }
        terms.push((pattern, b));
    }
    if terms.is_empty() {
        return Err(Error::IonAbsent { ion: 0 });
    }
    let model = canonicalize(&terms)?;
    if model.n() != n {
        return Err(Error::DimensionMismatch("grid width changed".into()));
    }
    model.renamed(default_ion_names(n))
}

/// Inverse of [`parse_grid`] for canonical models, comma separated.
pub fn write_grid(model: &CountModel) -> String {
    let join = |v: Vec<String>| v.join(",");
    let mut out = join(model.ionic_counts().iter().map(|a| a.to_string()).collect());
    out.push('\n');
    for (p, b) in model.patterns().iter().zip(model.unionic_counts()) {
        let mut row: Vec<String> = (0..model.n())
            .map(|i| if p.get(i) { "1" } else { "0" }.to_string())
            .collect();
        row.push(b.to_string());
        out.push_str(&join(row));
        out.push('\n');
    }
    out
}
