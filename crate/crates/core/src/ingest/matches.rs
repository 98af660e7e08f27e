//! Pairwise match scores under the Bradley-Terry kernel
//! `x_i^{s} x_j^{t} / (x_i + x_j)^{s+t}`.

use log::warn;

use crate::error::{Error, Result};
use crate::model::{canonicalize, CountModel, Pattern};

#[derive(Clone, Debug, PartialEq)]
pub struct MatchRecord {
    pub player_i: String,
    pub player_j: String,
    pub score_i: f64,
    pub score_j: f64,
}

impl MatchRecord {
    pub fn new(
        player_i: impl Into<String>,
        player_j: impl Into<String>,
        score_i: f64,
        score_j: f64,
    ) -> Self {
        MatchRecord {
            player_i: player_i.into(),
            player_j: player_j.into(),
            score_i,
            score_j,
        }
    }

    fn validate(&self, index: usize) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidInput(format!("match {index}: {msg}")));
        if self.player_i == self.player_j {
            return bad(format!("{} plays against itself", self.player_i));
        }
        for s in [self.score_i, self.score_j] {
            if !(s.is_finite() && s >= 0.0) {
                return bad(format!("score {s} is not a non-negative number"));
            }
        }
        if self.score_i == 0.0 && self.score_j == 0.0 {
            return bad("both scores are zero".into());
        }
        Ok(())
    }
}

/// Players in order of first appearance.
pub fn players(records: &[MatchRecord]) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    for r in records {
        for p in [&r.player_i, &r.player_j] {
            if !out.contains(p) {
                out.push(p.clone());
            }
        }
    }
    out
}

/// Whether the comparison graph links every player.
pub fn is_connected(records: &[MatchRecord]) -> bool {
    let names = players(records);
    let idx = |p: &String| names.iter().position(|n| n == p).expect("listed");
    let mut parent: Vec<usize> = (0..names.len()).collect();
    fn root(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for r in records {
        let (a, b) = (
            root(&mut parent, idx(&r.player_i)),
            root(&mut parent, idx(&r.player_j)),
        );
        parent[a] = b;
    }
    let first = root(&mut parent, 0);
    (0..names.len()).all(|i| root(&mut parent, i) == first)
}

/// Each player's ionic count is the sum of their scores; each pairing adds
/// `(x_i + x_j)^{−(s_i + s_j)}`, merged over repeated pairings.
pub fn from_matches(records: &[MatchRecord]) -> Result<CountModel> {
    if records.is_empty() {
        return Err(Error::EmptyInput);
    }
    for (k, r) in records.iter().enumerate() {
        r.validate(k)?;
    }
    if !is_connected(records) {
        warn!("comparison graph is not connected; the estimate is not identified");
    }
    let names = players(records);
    let n = names.len();
    let idx = |p: &String| names.iter().position(|n| n == p).expect("listed");
    let mut terms = Vec::with_capacity(3 * records.len());
    for r in records {
        let (i, j) = (idx(&r.player_i), idx(&r.player_j));
        terms.push((Pattern::unit(n, i), r.score_i));
        terms.push((Pattern::unit(n, j), r.score_j));
    }
    for r in records {
        let (i, j) = (idx(&r.player_i), idx(&r.player_j));
        terms.push((Pattern::from_indices(n, &[i, j]), -(r.score_i + r.score_j)));
    }
    canonicalize(&terms)?.renamed(names)
}

/// One record per line: `player_i,player_j,score_i,score_j`, comma or tab
/// separated. Blank lines and `#` comments are skipped.
pub fn parse_matches(text: &str) -> Result<Vec<MatchRecord>> {
    let mut out = Vec::new();
    for (k, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let sep = if line.contains('\t') { '\t' } else { ',' };
        let f: Vec<&str> = line.split(sep).map(str::trim).collect();
        let err = |msg: String| Error::Format { line: k + 1, msg };
        if f.len() != 4 {
            return Err(err(format!("expected 4 fields, found {}", f.len())));
        }
        if f[0].is_empty() || f[1].is_empty() {
            return Err(err("empty player name".into()));
        }
        let score = |s: &str| {
            s.parse::<f64>()
                .map_err(|_| err(format!("score {s:?} is not a number")))
        };
        out.push(MatchRecord::new(f[0], f[1], score(f[2])?, score(f[3])?));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    const PING_PONG: &str = "A,B,21,16\nC,D,18,21\nA,E,19,21\n\
        B,C,25,27\nD,E,22,20\nA,D,21,18\n";

    #[test]
    fn ping_pong_table() {
        let recs = parse_matches(PING_PONG).unwrap();
        assert!(is_connected(&recs));
        let m = from_matches(&recs).unwrap();
        assert_eq!(m.ions(), &["A", "B", "C", "D", "E"]);
        assert_eq!(m.ionic_counts(), &[61.0, 41.0, 45.0, 61.0, 41.0]);
        assert_eq!(
            m.unionic_counts(),
            &[-37.0, -39.0, -40.0, -52.0, -42.0, -39.0]
        );
        let total: f64 = recs.iter().map(|r| r.score_i + r.score_j).sum();
        let mass: f64 = m.ionic_counts().iter().sum::<f64>()
            + m.unionic_counts().iter().map(|b| b.abs()).sum::<f64>();
        assert_eq!(mass, 2.0 * total);
    }

    #[test]
    fn single_shutout_keeps_zero_ion() {
        let m = from_matches(&[MatchRecord::new("p", "q", 1.0, 0.0)]).unwrap();
        assert_eq!(m.ionic_counts(), &[1.0, 0.0]);
        assert_eq!(m.unionic_counts(), &[-1.0]);
    }

    #[test]
    fn repeated_pairing_merges() {
        let m = from_matches(&[
            MatchRecord::new("A", "B", 21.0, 16.0),
            MatchRecord::new("B", "A", 21.0, 19.0),
        ])
        .unwrap();
        assert_eq!(m.ionic_counts(), &[40.0, 37.0]);
        assert_eq!(m.unionic_counts(), &[-77.0]);
    }

    #[test]
    fn disconnected_and_invalid() {
        let recs = [
            MatchRecord::new("A", "B", 1.0, 2.0),
            MatchRecord::new("C", "D", 3.0, 4.0),
        ];
        assert!(!is_connected(&recs));
        assert!(from_matches(&recs).is_ok());
        assert!(from_matches(&[MatchRecord::new("A", "A", 1.0, 2.0)]).is_err());
        assert!(from_matches(&[MatchRecord::new("A", "B", 0.0, 0.0)]).is_err());
        assert!(from_matches(&[MatchRecord::new("A", "B", -1.0, 2.0)]).is_err());
        assert!(from_matches(&[]).is_err());
        assert!(matches!(
            parse_matches("A,B,1\n"),
            Err(Error::Format { line: 1, .. })
        ));
    }
}
