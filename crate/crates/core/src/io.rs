//! JSON documents for automata, queries, probabilistic automata, Chrobak
//! normal forms and finitely-ambiguous weight descriptions.
//!
//! Automaton document:
//! `{"states":[..], "alphabet":[..], "finals":[..],
//!   "transitions":[{"from":..,"symbol":..,"to":..,"weight":"num/den"}, ..]}`
//! with optional `"query": {"s":..,"sPrime":..}`, `"start"` (probabilistic
//! automata) and `"groundTruth"` annotations.

use std::collections::HashSet;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::automaton::{ProbAutomaton, Query, WeightedAutomaton};
use crate::bounded::DeltaTuple;
use crate::error::{Error, Result};
use crate::nfa::{ChrobakCycle, ChrobakNf};
use crate::rational::{format_rational, parse_rational, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransitionDoc {
    pub from: String,
    pub symbol: String,
    pub to: String,
    pub weight: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QueryDoc {
    pub s: String,
    #[serde(rename = "sPrime")]
    pub s_prime: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AutomatonDoc {
    pub states: Vec<String>,
    pub alphabet: Vec<String>,
    #[serde(default)]
    pub finals: Vec<String>,
    #[serde(default)]
    pub transitions: Vec<TransitionDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub query: Option<QueryDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub start: Option<String>,
    #[serde(default, rename = "groundTruth", skip_serializing_if = "Option::is_none")]
    pub ground_truth: Option<String>,
}

/// A parsed value together with non-fatal diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct Parsed<T> {
    pub value: T,
    pub warnings: Vec<String>,
}

fn from_json<'a, T: Deserialize<'a>>(text: &'a str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("malformed JSON: {e}")))
}

pub fn parse_document(text: &str) -> Result<AutomatonDoc> {
    from_json(text)
}

/// Builds the automaton, rejecting negative weights, repeated
/// `(from, symbol, to)` triples and undeclared states or symbols.
/// Non-reduced weights are canonicalized and zero weights dropped, each
/// with a warning.
pub fn automaton_from_doc(doc: &AutomatonDoc) -> Result<Parsed<WeightedAutomaton>> {
    let mut wa = WeightedAutomaton::new(&doc.states, &doc.alphabet)?;
    let mut warnings = Vec::new();
    for f in &doc.finals {
        let q = wa.state(f)?;
        wa.set_final(q, true);
    }
    let mut seen = HashSet::new();
    for (i, t) in doc.transitions.iter().enumerate() {
        let at = format!("transition #{i} ({} --{}--> {})", t.from, t.symbol, t.to);
        let p = wa.state(&t.from)?;
        let a = wa.symbol(&t.symbol)?;
        let q = wa.state(&t.to)?;
        if !seen.insert((p, a, q)) {
            return Err(Error::InvalidInput(format!("{at}: duplicate transition triple")));
        }
        let w = parse_rational(&t.weight).map_err(|e| match e {
            Error::Parse(m) => Error::Parse(format!("{at}: {m}")),
            e => e,
        })?;
        if w.value.is_negative() {
            return Err(Error::InvalidInput(format!("{at}: weight `{}` is negative", t.weight)));
        }
        if w.value.is_zero() {
            warnings.push(format!("{at}: zero weight ignored"));
            continue;
        }
        if w.was_reduced {
            warnings.push(format!("{at}: weight `{}` canonicalized to `{}`", t.weight, format_rational(&w.value)));
        }
        wa.set_weight(p, a, q, w.value)?;
    }
    Ok(Parsed { value: wa, warnings })
}

pub fn parse_automaton(text: &str) -> Result<Parsed<WeightedAutomaton>> {
    automaton_from_doc(&parse_document(text)?)
}

/// Canonical document: declaration order for states, symbols and finals;
/// transitions by (from, symbol, to) index.
pub fn automaton_to_doc(wa: &WeightedAutomaton) -> AutomatonDoc {
    let mut ts: Vec<(usize, usize, usize, Rational)> = wa.transitions().collect();
    ts.sort_by_key(|(p, a, q, _)| (*p, *a, *q));
    AutomatonDoc {
        states: wa.states().to_vec(),
        alphabet: wa.alphabet().to_vec(),
        finals: wa.final_states().map(|q| wa.state_name(q).to_string()).collect(),
        transitions: ts
            .into_iter()
            .map(|(p, a, q, w)| TransitionDoc {
                from: wa.state_name(p).into(),
                symbol: wa.symbol_name(a).into(),
                to: wa.state_name(q).into(),
                weight: format_rational(&w),
            })
            .collect(),
        query: None,
        start: None,
        ground_truth: None,
    }
}

pub fn to_pretty_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("documents serialize")
}

pub fn serialize_automaton(wa: &WeightedAutomaton) -> String {
    to_pretty_json(&automaton_to_doc(wa))
}

/// A query from a document; `s` and `s_prime` override the embedded
/// `"query"` object.
pub fn query_from_doc(doc: &AutomatonDoc, s: Option<&str>, s_prime: Option<&str>) -> Result<Parsed<Query>> {
    let Parsed { value: wa, warnings } = automaton_from_doc(doc)?;
    let s = s.or(doc.query.as_ref().map(|q| q.s.as_str()));
    let sp = s_prime.or(doc.query.as_ref().map(|q| q.s_prime.as_str()));
    let (Some(s), Some(sp)) = (s, sp) else {
        return Err(Error::InvalidInput("no query: give --s and --s-prime or a \"query\" object".into()));
    };
    Ok(Parsed { value: Query::named(wa, s, sp)?, warnings })
}

pub fn parse_query(text: &str, s: Option<&str>, s_prime: Option<&str>) -> Result<Parsed<Query>> {
    query_from_doc(&parse_document(text)?, s, s_prime)
}

pub fn query_to_doc(q: &Query, ground_truth: Option<&str>) -> AutomatonDoc {
    let wa = &q.automaton;
    AutomatonDoc {
        query: Some(QueryDoc { s: wa.state_name(q.s).into(), s_prime: wa.state_name(q.s_prime).into() }),
        ground_truth: ground_truth.map(Into::into),
        ..automaton_to_doc(wa)
    }
}

/// A probabilistic automaton; the start state comes from `"start"`.
pub fn pa_from_doc(doc: &AutomatonDoc) -> Result<Parsed<ProbAutomaton>> {
    let Parsed { value: wa, warnings } = automaton_from_doc(doc)?;
    let start = doc
        .start
        .as_deref()
        .ok_or_else(|| Error::InvalidInput("a probabilistic automaton needs a \"start\" state".into()))?;
    let start = wa.state(start)?;
    Ok(Parsed { value: ProbAutomaton::new(wa, start)?, warnings })
}

pub fn pa_to_doc(pa: &ProbAutomaton) -> AutomatonDoc {
    AutomatonDoc { start: Some(pa.automaton.state_name(pa.start).into()), ..automaton_to_doc(&pa.automaton) }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChrobakCycleDoc {
    pub length: usize,
    pub accepting: Vec<usize>,
}

/// `{"stem":[bool,..], "cycles":[{"length":n,"accepting":[offset,..]},..]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChrobakDoc {
    pub stem: Vec<bool>,
    pub cycles: Vec<ChrobakCycleDoc>,
}

pub fn parse_chrobak(text: &str) -> Result<ChrobakNf> {
    let doc: ChrobakDoc = from_json(text)?;
    let cycles = doc
        .cycles
        .into_iter()
        .map(|c| {
            let mut accepting = c.accepting;
            accepting.sort_unstable();
            accepting.dedup();
            ChrobakCycle { length: c.length, accepting }
        })
        .collect();
    ChrobakNf::new(doc.stem, cycles)
}

pub fn chrobak_to_doc(c: &ChrobakNf) -> ChrobakDoc {
    ChrobakDoc {
        stem: c.stem.clone(),
        cycles: c.cycles.iter().map(|x| ChrobakCycleDoc { length: x.length, accepting: x.accepting.clone() }).collect(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeltaTupleDoc {
    pub p: Vec<String>,
    pub q: Vec<Vec<String>>,
    pub r: Vec<String>,
    pub s: Vec<Vec<String>>,
}

/// `{"delta":[{"p":[..],"q":[[..],..],"r":[..],"s":[[..],..]},..]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeltaDoc {
    pub delta: Vec<DeltaTupleDoc>,
}

pub fn parse_delta(text: &str) -> Result<Vec<DeltaTuple>> {
    let doc: DeltaDoc = from_json(text)?;
    let num = |x: &String| parse_rational(x).map(|p| p.value);
    let vec = |xs: &[String]| xs.iter().map(num).collect::<Result<Vec<_>>>();
    let mat = |xs: &[Vec<String>]| xs.iter().map(|v| vec(v)).collect::<Result<Vec<_>>>();
    let tuples = doc
        .delta
        .iter()
        .map(|d| Ok(DeltaTuple { p: vec(&d.p)?, q: mat(&d.q)?, r: vec(&d.r)?, s: mat(&d.s)? }))
        .collect::<Result<Vec<_>>>()?;
    for t in &tuples {
        t.validate()?;
    }
    Ok(tuples)
}

/// Bounding words separated by `|`, or by `,` when no `|` occurs; each
/// word follows [`WeightedAutomaton::parse_word`].
pub fn parse_words(wa: &WeightedAutomaton, text: &str) -> Result<Vec<Vec<usize>>> {
    let sep = if text.contains('|') { '|' } else { ',' };
    text.split(sep).map(|w| wa.parse_word(w)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const UNBOUNDED: &str = r#"{
        "states": ["s", "s'", "t"], "alphabet": ["a"], "finals": ["t"],
        "transitions": [
            {"from": "s", "symbol": "a", "to": "s", "weight": "3/4"},
            {"from": "s", "symbol": "a", "to": "t", "weight": "1/4"},
            {"from": "s'", "symbol": "a", "to": "s'", "weight": "1/2"},
            {"from": "s'", "symbol": "a", "to": "t", "weight": "2/4"}
        ],
        "query": {"s": "s", "sPrime": "s'"}
    }"#;

    #[test]
    fn round_trip_is_byte_stable() {
        let p = parse_automaton(UNBOUNDED).unwrap();
        assert_eq!(p.warnings.len(), 1);
        assert!(p.warnings[0].contains("`2/4` canonicalized to `1/2`"));
        let text = serialize_automaton(&p.value);
        let again = parse_automaton(&text).unwrap();
        assert!(again.warnings.is_empty());
        assert_eq!(again.value, p.value);
        assert_eq!(serialize_automaton(&again.value), text);
    }

    #[test]
    fn embedded_query_and_override() {
        let q = parse_query(UNBOUNDED, None, None).unwrap().value;
        assert_eq!((q.s, q.s_prime), (0, 1));
        let q = parse_query(UNBOUNDED, Some("s'"), Some("s")).unwrap().value;
        assert_eq!((q.s, q.s_prime), (1, 0));
        assert!(matches!(parse_query(UNBOUNDED, Some("x"), None), Err(Error::UnknownState(_))));
    }

    #[test]
    fn diagnostics_are_distinct() {
        let neg = UNBOUNDED.replace("\"3/4\"", "\"-1/2\"");
        match parse_automaton(&neg) {
            Err(Error::InvalidInput(m)) => assert!(m.contains("#0") && m.contains("negative"), "{m}"),
            r => panic!("unexpected {r:?}"),
        }
        let dup = UNBOUNDED.replace(r#""to": "t", "weight": "1/4""#, r#""to": "s", "weight": "1/4""#);
        assert!(matches!(parse_automaton(&dup), Err(Error::InvalidInput(m)) if m.contains("duplicate")));
        let dangling = UNBOUNDED.replace(r#""to": "t", "weight": "1/4""#, r#""to": "u", "weight": "1/4""#);
        assert_eq!(parse_automaton(&dangling), Err(Error::UnknownState("u".into())));
        let sym = UNBOUNDED.replace(r#""symbol": "a", "to": "t", "weight": "1/4""#, r#""symbol": "b", "to": "t", "weight": "1/4""#);
        assert_eq!(parse_automaton(&sym), Err(Error::UnknownSymbol("b".into())));
        assert!(matches!(parse_automaton("{\"states\": ["), Err(Error::Parse(_))));
        let dec = UNBOUNDED.replace("\"3/4\"", "\"0.75\"");
        assert!(matches!(parse_automaton(&dec), Err(Error::Parse(m)) if m.contains("#0")));
    }

    #[test]
    fn chrobak_and_delta_documents() {
        let c = parse_chrobak(r#"{"stem":[false],"cycles":[{"length":2,"accepting":[1]},{"length":3,"accepting":[0]}]}"#)
            .unwrap();
        assert_eq!(c.size(), 6);
        assert_eq!(chrobak_to_doc(&c).cycles[1].length, 3);
        let d = parse_delta(r#"{"delta":[{"p":["1"],"q":[["2","1/3"]],"r":["1"],"s":[["1","1"]]}]}"#).unwrap();
        assert_eq!(d[0].q[0][1], crate::rational::rat(1, 3));
        assert!(parse_delta(r#"{"delta":[{"p":["1"],"q":[["0"]],"r":["1"],"s":[["1"]]}]}"#).is_err());
    }

    #[test]
    fn word_lists() {
        let wa = WeightedAutomaton::new(&["q"], &["a", "b"]).unwrap();
        assert_eq!(parse_words(&wa, "ab,b").unwrap(), vec![vec![0, 1], vec![1]]);
        let wa = WeightedAutomaton::new(&["q"], &["a", "b", "cc"]).unwrap();
        assert_eq!(parse_words(&wa, "a cc|b").unwrap(), vec![vec![0, 2], vec![1]]);
        assert!(parse_words(&wa, "ax").is_err());
    }
}
