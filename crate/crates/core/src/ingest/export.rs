//! Structured model export with a bit-exact round trip.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{CountModel, Pattern};

/// `delta` holds the rows of the `n × q` pattern matrix, one bit string per
/// ion.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelDocument {
    pub n: usize,
    pub ions: Vec<String>,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub delta: Vec<String>,
}

impl From<&CountModel> for ModelDocument {
    fn from(m: &CountModel) -> Self {
        let delta = (0..m.n())
            .map(|i| {
                m.patterns()
                    .iter()
                    .map(|p| if p.get(i) { '1' } else { '0' })
                    .collect()
            })
            .collect();
        ModelDocument {
            n: m.n(),
            ions: m.ions().to_vec(),
            a: m.ionic_counts().to_vec(),
            b: m.unionic_counts().to_vec(),
            delta,
        }
    }
}

impl TryFrom<ModelDocument> for CountModel {
    type Error = Error;

    fn try_from(doc: ModelDocument) -> Result<Self> {
        let q = doc.b.len();
        if doc.a.len() != doc.n || doc.delta.len() != doc.n {
            return Err(Error::DimensionMismatch(format!(
                "n = {} but a has {} entries and delta {} rows",
                doc.n,
                doc.a.len(),
                doc.delta.len()
            )));
        }
        let rows: Vec<Pattern> = doc
            .delta
            .iter()
            .enumerate()
            .map(|(i, r)| match Pattern::parse(r) {
                Some(p) if p.len() == q => Ok(p),
                None if q == 0 && r.is_empty() => Ok(Pattern::zeros(0)),
                _ => Err(Error::Format {
                    line: i + 1,
                    msg: format!("delta row {r:?} is not {q} bits"),
                }),
            })
            .collect::<Result<_>>()?;
        let patterns = (0..q)
            .map(|j| {
                let bits: Vec<bool> = rows.iter().map(|r| r.get(j)).collect();
                Pattern::from_bits(&bits)
            })
            .collect();
        CountModel::with_ions(doc.ions, doc.a, doc.b, patterns)
    }
}

pub fn model_to_json(model: &CountModel) -> String {
    serde_json::to_string_pretty(&ModelDocument::from(model)).expect("plain data serialises")
}

pub fn model_from_json(text: &str) -> Result<CountModel> {
    let doc: ModelDocument = serde_json::from_str(text).map_err(|e| Error::Format {
        line: e.line(),
        msg: e.to_string(),
    })?;
    CountModel::try_from(doc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::parse_expression;

    #[test]
    fn bit_exact_round_trip() {
        for text in [
            "x1^0.1 x2^0.7 (x1+x2)^-0.30000000000000004",
            "a^2 b^3 c^4 d^5 / ((a+b)^4 (c+d)^6)",
            "u^3 v^7",
        ] {
            let m = parse_expression(text).unwrap();
            let json = model_to_json(&m);
            let back = model_from_json(&json).unwrap();
            assert_eq!(back, m);
            for (x, y) in back.unionic_counts().iter().zip(m.unionic_counts()) {
                assert_eq!(x.to_bits(), y.to_bits());
            }
        }
    }

    #[test]
    fn layout() {
        let m = parse_expression("a^2 b^3 c^4 d^5 / ((a+b)^4 (c+d)^6)").unwrap();
        let doc = ModelDocument::from(&m);
        assert_eq!(doc.delta, vec!["10", "10", "01", "01"]);
        assert!(model_from_json("{\"n\": 2}").is_err());
    }
}
