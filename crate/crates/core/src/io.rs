//! JSON file formats.
//!
//! A game file holds one or more game documents, each either
//!
//! ```json
//! {"type":"payoff","beta":"9/10","actions":[{"p":4,"p_star":0},{"p":5,"p_star":11}]}
//! {"type":"hazing","delta":6,"actions":[{"h":4,"t":-8},{"h":3,"t":3}]}
//! ```
//!
//! Sequence files are `{"steps":[0,1,0]}`, indexing the alphabet sorted by
//! threshold, or an explicit payoff plan
//! `{"prefix":[{"p":5,"p_star":6}],"cycle":[{"p":8,"p_star":10}]}` whose
//! values may be integers or `"num/den"` strings.

use std::io::{Read, Write};
use std::path::Path;

use num::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{
    parse_rational, ActionPayoff, Discount, HazingAction, HazingInstance, HazingSequence, Payoff, PayoffSequence,
    SymmetricGame,
};

/// Provenance recorded by the generator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenMeta {
    pub rng: String,
    pub seed: u64,
    pub n: usize,
    pub mpd: i64,
    pub index: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
struct PayoffEntry {
    p: i64,
    p_star: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
struct HazingEntry {
    h: i64,
    t: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
enum RawGame {
    Payoff {
        beta: String,
        actions: Vec<PayoffEntry>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        meta: Option<GenMeta>,
    },
    Hazing {
        delta: i64,
        actions: Vec<HazingEntry>,
    },
}

/// One game document.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GameDoc {
    Payoff { game: SymmetricGame, meta: Option<GenMeta> },
    Hazing(HazingInstance),
}

impl GameDoc {
    /// Hazing form with the alphabet sorted by threshold, the indexing used
    /// by sequence files and solver output on the command line.
    pub fn instance(&self) -> HazingInstance {
        match self {
            GameDoc::Payoff { game, .. } => game.to_hazing_instance().threshold_ordered().0,
            GameDoc::Hazing(inst) => inst.threshold_ordered().0,
        }
    }

    pub fn game(&self) -> Option<&SymmetricGame> {
        match self {
            GameDoc::Payoff { game, .. } => Some(game),
            GameDoc::Hazing(_) => None,
        }
    }

    fn from_raw(raw: RawGame) -> Result<Self> {
        match raw {
            RawGame::Payoff { beta, actions, meta } => {
                let actions = actions.iter().map(|a| ActionPayoff::new(a.p, a.p_star)).collect();
                let game = SymmetricGame::new(actions, beta.parse::<Discount>()?)?;
                Ok(GameDoc::Payoff { game, meta })
            }
            RawGame::Hazing { delta, actions } => {
                let alphabet = actions.iter().map(|a| HazingAction::new(a.h, a.t)).collect();
                Ok(GameDoc::Hazing(HazingInstance::new(alphabet, delta)?))
            }
        }
    }

    fn to_raw(&self) -> RawGame {
        match self {
            GameDoc::Payoff { game, meta } => RawGame::Payoff {
                beta: game.beta().to_string(),
                actions: game.actions().iter().map(|a| PayoffEntry { p: a.p, p_star: a.p_star }).collect(),
                meta: meta.clone(),
            },
            GameDoc::Hazing(inst) => RawGame::Hazing {
                delta: inst.delta(),
                actions: inst.alphabet().iter().map(|a| HazingEntry { h: a.h, t: a.t }).collect(),
            },
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_raw()).expect("game documents serialize")
    }
}

/// Reads every game document from a stream of concatenated JSON objects.
pub fn read_games(reader: impl Read) -> Result<Vec<GameDoc>> {
    let mut docs = Vec::new();
    for raw in serde_json::Deserializer::from_reader(reader).into_iter::<RawGame>() {
        docs.push(GameDoc::from_raw(raw?)?);
    }
    if docs.is_empty() {
        return Err(Error::Parse("no game documents found".into()));
    }
    Ok(docs)
}

pub fn read_games_file(path: &Path) -> Result<Vec<GameDoc>> {
    read_games(std::io::BufReader::new(std::fs::File::open(path)?))
}

/// Writes one document per line.
pub fn write_games(mut writer: impl Write, docs: &[GameDoc]) -> Result<()> {
    for doc in docs {
        writeln!(writer, "{}", doc.to_json())?;
    }
    Ok(())
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(untagged)]
enum Number {
    Int(i64),
    Text(String),
}

impl Number {
    fn value(&self) -> Result<BigRational> {
        match self {
            Number::Int(v) => Ok(BigRational::from_integer((*v).into())),
            Number::Text(s) => parse_rational(s),
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
struct RawPayoff {
    p: Number,
    p_star: Number,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSequence {
    steps: Option<Vec<usize>>,
    prefix: Option<Vec<RawPayoff>>,
    cycle: Option<Vec<RawPayoff>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SequenceDoc {
    Steps(HazingSequence),
    Payoffs(PayoffSequence),
}

pub fn read_sequence(reader: impl Read) -> Result<SequenceDoc> {
    let raw: RawSequence = serde_json::from_reader(reader)?;
    match raw {
        RawSequence { steps: Some(steps), prefix: None, cycle: None } => {
            Ok(SequenceDoc::Steps(HazingSequence::new(steps)))
        }
        RawSequence { steps: None, prefix, cycle: Some(cycle) } => {
            let conv = |v: Vec<RawPayoff>| -> Result<Vec<Payoff>> {
                v.into_iter().map(|x| Ok(Payoff::new(x.p.value()?, x.p_star.value()?))).collect()
            };
            let prefix = conv(prefix.unwrap_or_default())?;
            Ok(SequenceDoc::Payoffs(PayoffSequence::new(prefix, conv(cycle)?)?))
        }
        _ => Err(Error::Parse("sequence file needs either \"steps\" or \"prefix\"/\"cycle\"".into())),
    }
}

pub fn read_sequence_file(path: &Path) -> Result<SequenceDoc> {
    read_sequence(std::io::BufReader::new(std::fs::File::open(path)?))
}

pub fn steps_json(seq: &HazingSequence) -> String {
    serde_json::json!({ "steps": seq.steps() }).to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_both_game_kinds() {
        let text = r#"{"type":"payoff","beta":"9/10","actions":[{"p":4,"p_star":0},{"p":5,"p_star":11},{"p":8,"p_star":14}]}
            {"type":"hazing","delta":6,"actions":[{"h":3,"t":3},{"h":4,"t":-8}]}"#;
        let docs = read_games(text.as_bytes()).unwrap();
        assert_eq!(docs.len(), 2);
        let a = docs[0].instance();
        assert_eq!(a.alphabet(), &[HazingAction::new(4, -8), HazingAction::new(3, 3)]);
        assert_eq!(docs[0].game().unwrap().beta(), &Discount::from_ratio(9, 10).unwrap());
        // Hazing documents are re-indexed by threshold.
        assert_eq!(docs[1].instance().alphabet(), a.alphabet());
    }

    #[test]
    fn round_trip_is_exact() {
        let text = r#"{"type":"payoff","beta":"9/10","actions":[{"p":4,"p_star":0},{"p":30,"p_star":77}]}"#;
        let docs = read_games(text.as_bytes()).unwrap();
        assert_eq!(docs[0].to_json(), text);
    }

    #[test]
    fn rejects_malformed_games() {
        for bad in [
            r#"{"type":"payoff","beta":"1","actions":[{"p":1,"p_star":1}]}"#,
            r#"{"type":"payoff","beta":"1/2","actions":[]}"#,
            r#"{"type":"hazing","delta":2,"actions":[{"h":0,"t":-1}]}"#,
            r#"{"type":"hazing","delta":2,"actions":[{"h":1,"t":3}]}"#,
            r#"{"type":"matrix","rows":[]}"#,
            r#"{"type":"hazing","delta":2,"actions":[{"h":1,"t":-1}],"extra":1}"#,
            "",
            "not json",
        ] {
            assert!(read_games(bad.as_bytes()).is_err(), "{bad}");
        }
    }

    #[test]
    fn reads_sequences() {
        let s = read_sequence(r#"{"steps":[0,1,0]}"#.as_bytes()).unwrap();
        assert_eq!(s, SequenceDoc::Steps(HazingSequence::new(vec![0, 1, 0])));

        let s =
            read_sequence(r#"{"prefix":[{"p":"9/2","p_star":6}],"cycle":[{"p":8,"p_star":10}]}"#.as_bytes()).unwrap();
        let SequenceDoc::Payoffs(p) = s else { panic!() };
        assert_eq!(p.prefix()[0].p, BigRational::new(9.into(), 2.into()));

        assert!(read_sequence(r#"{"steps":[0],"cycle":[]}"#.as_bytes()).is_err());
        assert!(read_sequence(r#"{"cycle":[]}"#.as_bytes()).is_err());
        assert!(read_sequence(r#"{}"#.as_bytes()).is_err());
    }
}
