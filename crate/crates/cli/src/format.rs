//! Text and JSON formats for diagrams flowing in and out of the CLI.
//!
//! The text form is one structure per line: the backbone length, a pipe, and
//! the arcs as `(open,close)` pairs sorted by opening position:
//!
//! ```text
//! 12 | (1,5)(2,8)(4,11)
//! ```
//!
//! A structure with no arcs is just `12 |`. Whitespace between tokens is
//! ignored on input.

use rnagenus::Diagram;
use serde::{Deserialize, Serialize};

/// One sampled structure as a JSON record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleRecord {
    pub length: usize,
    pub arcs: Vec<(usize, usize)>,
    pub genus: usize,
    pub seed: u64,
    pub index: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub energy: Option<f64>,
}

/// One analyzed structure as a JSON record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenusRecord {
    pub length: usize,
    pub arcs: Vec<(usize, usize)>,
    pub genus: usize,
    pub boundary_count: usize,
    pub euler_characteristic: i64,
}

/// Renders a diagram in the one-line text form.
pub fn emit_text(diagram: &Diagram) -> String {
    let mut out = format!("{} |", diagram.length());
    for (at, &(i, j)) in diagram.arcs().iter().enumerate() {
        if at == 0 {
            out.push(' ');
        }
        out.push_str(&format!("({i},{j})"));
    }
    out
}

/// Parses the one-line text form back into a diagram.
pub fn parse_text(line: &str) -> Result<Diagram, String> {
    let (len_part, arcs_part) = line
        .split_once('|')
        .ok_or_else(|| "missing '|' between length and arcs".to_string())?;
    let length: usize = len_part
        .trim()
        .parse()
        .map_err(|_| format!("bad backbone length {:?}", len_part.trim()))?;
    let mut arcs = Vec::new();
    let mut rest = arcs_part.trim();
    while !rest.is_empty() {
        let open = rest
            .strip_prefix('(')
            .ok_or_else(|| format!("expected '(' at {rest:?}"))?;
        let (body, tail) = open
            .split_once(')')
            .ok_or_else(|| format!("unclosed arc near {rest:?}"))?;
        let (a, b) = body
            .split_once(',')
            .ok_or_else(|| format!("arc {body:?} needs two comma-separated positions"))?;
        let i: usize = a
            .trim()
            .parse()
            .map_err(|_| format!("bad position {:?}", a.trim()))?;
        let j: usize = b
            .trim()
            .parse()
            .map_err(|_| format!("bad position {:?}", b.trim()))?;
        arcs.push((i, j));
        rest = tail.trim_start();
    }
    Diagram::new(length, arcs).map_err(|e| e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips_simple_diagrams() {
        for text in ["4 | (1,3)(2,4)", "12 | (1,5)(2,8)(4,11)", "3 |"] {
            let d = parse_text(text).unwrap();
            assert_eq!(emit_text(&d), text);
        }
    }

    #[test]
    fn tolerates_spacing() {
        let d = parse_text("  6|( 1 , 4 ) (2,5)  ").unwrap();
        assert_eq!(emit_text(&d), "6 | (1,4)(2,5)");
    }

    #[test]
    fn reports_errors() {
        assert!(parse_text("no pipe").is_err());
        assert!(parse_text("x | (1,2)").is_err());
        assert!(parse_text("4 | (1,2").is_err());
        assert!(parse_text("4 | (1)").is_err());
        assert!(parse_text("4 | (1,9)").is_err());
        assert!(parse_text("4 | (1,2)(2,3)").is_err());
    }

    proptest::proptest! {
        /// Arbitrary partial pairings survive the printed form unchanged.
        #[test]
        fn random_diagrams_round_trip(seed: u64, length in 0usize..=40) {
            let mut rng = rnagenus::RandomSource::from_seed(seed);
            let mut free: Vec<usize> = (1..=length).collect();
            let mut arcs = Vec::new();
            while free.len() >= 2 && rng.below(3) > 0 {
                let i = free.swap_remove(rng.below_usize(free.len()));
                let j = free.swap_remove(rng.below_usize(free.len()));
                arcs.push((i.min(j), i.max(j)));
            }
            let d = Diagram::new(length, arcs).unwrap();
            let line = emit_text(&d);
            prop_assert_eq!(parse_text(&line).unwrap(), d);
        }
    }

    use proptest::prop_assert_eq;

    #[test]
    fn json_record_serializes_cleanly() {
        let rec = SampleRecord {
            length: 4,
            arcs: vec![(1, 3), (2, 4)],
            genus: 1,
            seed: 7,
            index: 0,
            energy: None,
        };
        let text = serde_json::to_string(&rec).unwrap();
        assert!(!text.contains("energy"));
        let back: SampleRecord = serde_json::from_str(&text).unwrap();
        assert_eq!(back, rec);
    }
}
