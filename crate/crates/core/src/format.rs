//! JSON file formats for digraphs and games.
//!
//! Graph: `{"n": 3, "edges": [[1,2],[2,3],[3,1]]}` with 1-based endpoints.
//!
//! Game, one of
//!
//! ```text
//! {"type":"power","n":3,"k":2}
//! {"type":"symmetric","n":3,"f":[0,1,4,9]}
//! {"type":"explicit","n":2,"values":{"":0,"1":1,"2":2,"1,2":5}}
//! ```
//!
//! Explicit keys are ascending comma-separated player lists. Every nonempty
//! coalition must appear; the empty key may be omitted and defaults to 0.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coalition::{Coalition, PlayerId, MAX_PLAYERS};
use crate::digraph::{Digraph, GraphError};
use crate::game::{CharacteristicFunction, GameError};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Game(#[from] GameError),
    #[error("values[{key:?}]: {reason}")]
    BadKey { key: String, reason: String },
    #[error("values[{key:?}]: the same coalition appears under another key")]
    DuplicateKey { key: String },
    #[error("values: missing key {key:?}")]
    MissingKey { key: String },
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphFile {
    n: usize,
    edges: Vec<[usize; 2]>,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
enum GameFile {
    Power {
        n: usize,
        k: u32,
    },
    Symmetric {
        n: usize,
        f: Vec<f64>,
    },
    Explicit {
        n: usize,
        values: BTreeMap<String, f64>,
    },
}

pub fn parse_graph(json: &str) -> Result<Digraph, FormatError> {
    let file: GraphFile = serde_json::from_str(json)?;
    Ok(Digraph::new(
        file.n,
        file.edges.into_iter().map(|[a, b]| (a, b)),
    )?)
}

pub fn graph_to_json(g: &Digraph) -> String {
    let file = GraphFile {
        n: g.n(),
        edges: g
            .edges()
            .into_iter()
            .map(|(a, b)| [a.index(), b.index()])
            .collect(),
    };
    serde_json::to_string(&file).expect("plain data")
}

pub fn parse_game(json: &str) -> Result<CharacteristicFunction, FormatError> {
    let file: GameFile = serde_json::from_str(json)?;
    Ok(match file {
        GameFile::Power { n, k } => CharacteristicFunction::power(n, k)?,
        GameFile::Symmetric { n, f } => CharacteristicFunction::symmetric(n, f)?,
        GameFile::Explicit { n, values } => {
            if !(1..=MAX_PLAYERS).contains(&n) {
                return Err(GameError::PlayerCount(n).into());
            }
            CharacteristicFunction::explicit(n, explicit_table(n, &values)?)?
        }
    })
}

/// Key used for `s` in explicit game files.
pub fn coalition_key(s: Coalition) -> String {
    s.iter()
        .map(|p| p.index().to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn explicit_table(n: usize, values: &BTreeMap<String, f64>) -> Result<Vec<f64>, FormatError> {
    let mut table: Vec<Option<f64>> = vec![None; 1 << n];
    for (key, &value) in values {
        let s = parse_key(n, key)?;
        let slot = &mut table[s.mask() as usize];
        if slot.is_some() {
            return Err(FormatError::DuplicateKey { key: key.clone() });
        }
        *slot = Some(value);
    }
    table[0].get_or_insert(0.0);
    table
        .into_iter()
        .enumerate()
        .map(|(mask, x)| {
            x.ok_or_else(|| FormatError::MissingKey {
                key: coalition_key(Coalition::from_mask(mask as u32)),
            })
        })
        .collect()
}

fn parse_key(n: usize, key: &str) -> Result<Coalition, FormatError> {
    let bad = |reason: String| FormatError::BadKey {
        key: key.to_owned(),
        reason,
    };
    if key.is_empty() {
        return Ok(Coalition::EMPTY);
    }
    let mut s = Coalition::EMPTY;
    let mut last = 0;
    for part in key.split(',') {
        let index: usize = part
            .trim()
            .parse()
            .map_err(|_| bad(format!("`{part}` is not a player number")))?;
        let p = PlayerId::new(index)
            .filter(|p| p.index() <= n)
            .ok_or_else(|| bad(format!("player {index} is outside 1..={n}")))?;
        if index <= last {
            return Err(bad(
                "players must be listed in strictly ascending order".into()
            ));
        }
        last = index;
        s = s.with(p);
    }
    Ok(s)
}
