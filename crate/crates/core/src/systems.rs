//! `(T, F_Σ)`-systems and their JSON document format.
//!
//! ```json
//! {
//!   "monad": "powerset" | "subdist" | "lift",
//!   "alphabet": [{"symbol": "a", "arity": 1}, ...],
//!   "states": ["x0", "y", ...],
//!   "init": ...,
//!   "trans": {"x0": ..., ...}
//! }
//! ```
//!
//! Terms are arrays `[symbol, arg0, arg1, ...]`. The monad fixes the shape of
//! `init` and of each transition row:
//!
//! | monad      | init                 | row                                     |
//! |------------|----------------------|-----------------------------------------|
//! | `powerset` | `["x0", ...]`        | `[["a", "z"], ...]`                     |
//! | `subdist`  | `{"x0": "1/2", ...}` | `[{"term": ["a", "z"], "p": "2/3"}, ...]` |
//! | `lift`     | `"x0"` or `null`     | `["a", "z"]` or `null` (abort)          |

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::kleisli::{KleisliArrow, Monad, Rows};
use crate::signature::RankedAlphabet;
use crate::space::Space;
use crate::value::{format_weight, parse_weight, Weight};

/// A finite `(T, F_Σ)`-system `(X, s, c)`.
#[derive(Clone, Debug, PartialEq)]
pub struct System {
    pub monad: Monad,
    pub alphabet: RankedAlphabet,
    pub states: Arc<Space>,
    /// `s : 1 ⇸ X`
    pub init: KleisliArrow,
    /// `c : X ⇸ F_Σ X`
    pub trans: KleisliArrow,
}

/// A violated system invariant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Diagnostic {
    MonadMismatch { arrow: &'static str, found: Monad },
    InitShape,
    TransDomain,
    TransCodomain,
    RowSumExceedsOne { arrow: &'static str, state: String },
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diagnostic::MonadMismatch { arrow, found } => {
                write!(f, "MonadMismatch({arrow}): arrow is tagged {found}")
            }
            Diagnostic::InitShape => write!(f, "InitShape(*): init must be an arrow 1 ⇸ states"),
            Diagnostic::TransDomain => write!(f, "TransDomain: trans must be defined on the states"),
            Diagnostic::TransCodomain => {
                write!(f, "TransCodomain: trans must land in the terms over the states")
            }
            Diagnostic::RowSumExceedsOne { arrow, state } => {
                write!(f, "RowSumExceedsOne({state}): {arrow} row has mass above one")
            }
        }
    }
}

/// Checks every system invariant; an empty list means the system is valid.
pub fn validate_system(sys: &System) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    for (arrow, a) in [("init", &sys.init), ("trans", &sys.trans)] {
        if a.monad() != sys.monad {
            out.push(Diagnostic::MonadMismatch {
                arrow,
                found: a.monad(),
            });
        }
    }
    if sys.init.dom().len() != 1 || sys.init.cod() != &sys.states {
        out.push(Diagnostic::InitShape);
    }
    if sys.trans.dom() != &sys.states {
        out.push(Diagnostic::TransDomain);
    }
    if *sys.trans.cod() != Space::terms(&sys.alphabet, &sys.states) {
        out.push(Diagnostic::TransCodomain);
    }
    for (arrow, a) in [("init", &sys.init), ("trans", &sys.trans)] {
        for x in a.overweight_rows() {
            out.push(Diagnostic::RowSumExceedsOne {
                arrow,
                state: a.dom().label(x).to_string(),
            });
        }
    }
    out
}

impl System {
    /// Assembles and validates a system.
    pub fn new(
        alphabet: RankedAlphabet,
        states: Arc<Space>,
        init: KleisliArrow,
        trans: KleisliArrow,
    ) -> Result<Self> {
        let sys = System {
            monad: trans.monad(),
            alphabet,
            states,
            init,
            trans,
        };
        match validate_system(&sys).into_iter().next() {
            None => Ok(sys),
            Some(Diagnostic::RowSumExceedsOne { state, .. }) => Err(Error::RowSumExceedsOne(state)),
            Some(Diagnostic::MonadMismatch { found, .. }) => Err(Error::MonadMismatch {
                left: sys.monad,
                right: found,
            }),
            Some(d) => Err(Error::DomainMismatch(d.to_string())),
        }
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn state_name(&self, i: usize) -> &str {
        self.states.label(i)
    }

    /// The term space `F_Σ X` the transition lands in.
    pub fn term_space(&self) -> &Arc<Space> {
        self.trans.cod()
    }

    pub fn powerset_trans(&self) -> Option<&[BTreeSet<usize>]> {
        match self.trans.rows() {
            Rows::Powerset(r) => Some(r),
            _ => None,
        }
    }

    pub fn powerset_init(&self) -> Option<&BTreeSet<usize>> {
        match self.init.rows() {
            Rows::Powerset(r) => r.first(),
            _ => None,
        }
    }

    pub fn subdist_trans(&self) -> Option<&[BTreeMap<usize, Weight>]> {
        match self.trans.rows() {
            Rows::SubDist(r) => Some(r),
            _ => None,
        }
    }

    pub fn subdist_init(&self) -> Option<&BTreeMap<usize, Weight>> {
        match self.init.rows() {
            Rows::SubDist(r) => r.first(),
            _ => None,
        }
    }

    pub fn lift_trans(&self) -> Option<&[Option<usize>]> {
        match self.trans.rows() {
            Rows::Lift(r) => Some(r),
            _ => None,
        }
    }

    pub fn lift_init(&self) -> Option<Option<usize>> {
        match self.init.rows() {
            Rows::Lift(r) => r.first().copied(),
            _ => None,
        }
    }

    pub fn to_json(&self) -> Value {
        serialize_system(self)
    }
}

fn syntax(position: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Syntax {
        position: position.into(),
        message: message.into(),
    }
}

/// Parses and validates a system document.
pub fn parse_system(text: &str) -> Result<System> {
    let doc: Value = serde_json::from_str(text).map_err(|e| {
        syntax(format!("line {} column {}", e.line(), e.column()), e.to_string())
    })?;
    system_from_json(&doc)
}

pub fn system_from_json(doc: &Value) -> Result<System> {
    let obj = doc.as_object().ok_or_else(|| syntax("$", "expected an object"))?;
    let field = |k: &str| obj.get(k).ok_or_else(|| syntax("$", format!("missing field `{k}`")));

    let monad_name = field("monad")?
        .as_str()
        .ok_or_else(|| Error::MonadFieldInvalid("`monad` must be a string".into()))?;
    let monad = Monad::from_name(monad_name)
        .ok_or_else(|| Error::MonadFieldInvalid(format!("unknown monad `{monad_name}`")))?;

    let alphabet = parse_alphabet(field("alphabet")?)?;

    let names = field("states")?
        .as_array()
        .ok_or_else(|| syntax("states", "expected an array of names"))?
        .iter()
        .enumerate()
        .map(|(i, v)| {
            v.as_str()
                .map(str::to_string)
                .ok_or_else(|| syntax(format!("states[{i}]"), "expected a string"))
        })
        .collect::<Result<Vec<String>>>()?;
    let states = Space::states(names).ok_or_else(|| syntax("states", "duplicate state name"))?;
    let terms = Space::terms(&alphabet, &states);

    let init = parse_init(monad, field("init")?, &states)?;
    let trans_obj = field("trans")?
        .as_object()
        .ok_or_else(|| syntax("trans", "expected an object keyed by state"))?;
    for key in trans_obj.keys() {
        if states.position(key).is_none() {
            return Err(Error::UnknownState(key.clone()));
        }
    }
    let rows_json: Vec<&Value> = states
        .labels()
        .iter()
        .map(|s| {
            trans_obj
                .get(s)
                .ok_or_else(|| syntax(format!("trans.{s}"), "missing row"))
        })
        .collect::<Result<_>>()?;
    let rows = parse_rows(monad, &rows_json, &states, &alphabet, &terms)?;
    let trans = KleisliArrow::new(Arc::clone(&states), terms, rows)?;
    System::new(alphabet, states, init, trans)
}

fn parse_alphabet(v: &Value) -> Result<RankedAlphabet> {
    let arr = v
        .as_array()
        .ok_or_else(|| syntax("alphabet", "expected an array"))?;
    let mut entries = Vec::new();
    for (i, e) in arr.iter().enumerate() {
        let pos = format!("alphabet[{i}]");
        let sym = e
            .get("symbol")
            .and_then(Value::as_str)
            .ok_or_else(|| syntax(&pos, "missing string `symbol`"))?;
        let arity = e
            .get("arity")
            .and_then(Value::as_u64)
            .ok_or_else(|| syntax(&pos, "missing non-negative `arity`"))?;
        entries.push((sym.to_string(), arity as usize));
    }
    RankedAlphabet::new(entries)
}

fn state_ref(v: &Value, states: &Space, pos: &str) -> Result<usize> {
    let name = v
        .as_str()
        .ok_or_else(|| syntax(pos, "expected a state name"))?;
    states
        .position(name)
        .ok_or_else(|| Error::UnknownState(name.to_string()))
}

fn term_ref(
    v: &Value,
    alphabet: &RankedAlphabet,
    states: &Space,
    terms: &Space,
    pos: &str,
) -> Result<usize> {
    let arr = v
        .as_array()
        .filter(|a| !a.is_empty())
        .ok_or_else(|| Error::MonadFieldInvalid(format!("{pos}: a term is `[symbol, args...]`")))?;
    let name = arr[0]
        .as_str()
        .ok_or_else(|| syntax(pos, "term symbol must be a string"))?;
    let symbol = alphabet
        .lookup(name)
        .ok_or_else(|| Error::UnknownSymbol(name.to_string()))?;
    let expected = alphabet.arity(symbol);
    if arr.len() - 1 != expected {
        return Err(Error::ArityMismatch {
            symbol: name.to_string(),
            expected,
            found: arr.len() - 1,
        });
    }
    let args = arr[1..]
        .iter()
        .map(|a| state_ref(a, states, pos))
        .collect::<Result<Vec<usize>>>()?;
    Ok(terms.term_index(symbol, &args))
}

fn weight_ref(v: &Value, pos: &str) -> Result<Weight> {
    let text = v
        .as_str()
        .ok_or_else(|| Error::MonadFieldInvalid(format!("{pos}: weights are \"p/q\" strings")))?;
    parse_weight(text)
}

fn parse_init(monad: Monad, v: &Value, states: &Arc<Space>) -> Result<KleisliArrow> {
    let rows = match monad {
        Monad::Powerset => {
            let arr = v
                .as_array()
                .ok_or_else(|| Error::MonadFieldInvalid("powerset init is an array of states".into()))?;
            let set = arr
                .iter()
                .map(|s| state_ref(s, states, "init"))
                .collect::<Result<BTreeSet<usize>>>()?;
            Rows::Powerset(vec![set])
        }
        Monad::SubDist => {
            let obj = v.as_object().ok_or_else(|| {
                Error::MonadFieldInvalid("subdist init maps states to \"p/q\" weights".into())
            })?;
            let mut row = BTreeMap::new();
            for (k, w) in obj {
                let x = states
                    .position(k)
                    .ok_or_else(|| Error::UnknownState(k.clone()))?;
                row.insert(x, weight_ref(w, "init")?);
            }
            Rows::SubDist(vec![row])
        }
        Monad::Lift => match v {
            Value::Null => Rows::Lift(vec![None]),
            Value::String(_) => Rows::Lift(vec![Some(state_ref(v, states, "init")?)]),
            _ => {
                return Err(Error::MonadFieldInvalid(
                    "lift init is a single state or null".into(),
                ))
            }
        },
    };
    KleisliArrow::new(Space::unit(), Arc::clone(states), rows)
}

fn parse_rows(
    monad: Monad,
    rows: &[&Value],
    states: &Space,
    alphabet: &RankedAlphabet,
    terms: &Space,
) -> Result<Rows> {
    let names = states.labels();
    Ok(match monad {
        Monad::Powerset => Rows::Powerset(
            rows.iter()
                .zip(names)
                .map(|(v, s)| {
                    let pos = format!("trans.{s}");
                    v.as_array()
                        .ok_or_else(|| {
                            Error::MonadFieldInvalid(format!("{pos}: powerset row is an array of terms"))
                        })?
                        .iter()
                        .map(|t| term_ref(t, alphabet, states, terms, &pos))
                        .collect::<Result<BTreeSet<usize>>>()
                })
                .collect::<Result<_>>()?,
        ),
        Monad::SubDist => Rows::SubDist(
            rows.iter()
                .zip(names)
                .map(|(v, s)| {
                    let pos = format!("trans.{s}");
                    let arr = v.as_array().ok_or_else(|| {
                        Error::MonadFieldInvalid(format!(
                            "{pos}: subdist row is an array of {{\"term\", \"p\"}} entries"
                        ))
                    })?;
                    let mut row = BTreeMap::new();
                    for e in arr {
                        let (Some(t), Some(p)) = (e.get("term"), e.get("p")) else {
                            return Err(Error::MonadFieldInvalid(format!(
                                "{pos}: entries need `term` and `p`"
                            )));
                        };
                        let idx = term_ref(t, alphabet, states, terms, &pos)?;
                        if row.insert(idx, weight_ref(p, &pos)?).is_some() {
                            return Err(Error::MonadFieldInvalid(format!(
                                "{pos}: term listed twice"
                            )));
                        }
                    }
                    let total: Weight = row.values().sum();
                    if total > Weight::from_integer(1.into()) {
                        return Err(Error::RowSumExceedsOne(s.clone()));
                    }
                    Ok(row)
                })
                .collect::<Result<_>>()?,
        ),
        Monad::Lift => Rows::Lift(
            rows.iter()
                .zip(names)
                .map(|(v, s)| {
                    let pos = format!("trans.{s}");
                    if v.is_null() {
                        return Ok(None);
                    }
                    if v.as_array().is_some_and(|a| a.first().is_some_and(Value::is_array)) {
                        return Err(Error::MonadFieldInvalid(format!(
                            "{pos}: a lift row has at most one image"
                        )));
                    }
                    term_ref(v, alphabet, states, terms, &pos).map(Some)
                })
                .collect::<Result<_>>()?,
        ),
    })
}

fn term_json(terms: &Space, states: &Space, alphabet: &RankedAlphabet, i: usize) -> Value {
    let t = terms.term(i);
    let mut arr = vec![Value::String(alphabet.name(t.symbol).to_string())];
    arr.extend(t.args.iter().map(|&a| Value::String(states.label(a).to_string())));
    Value::Array(arr)
}

/// Serializes to the document format; states keep their declaration order.
pub fn serialize_system(sys: &System) -> Value {
    let alphabet: Vec<Value> = sys
        .alphabet
        .entries()
        .map(|(s, a)| json!({"symbol": s, "arity": a}))
        .collect();
    let states = &sys.states;
    let terms = Space::terms(&sys.alphabet, states);
    let init = match sys.init.rows() {
        Rows::Powerset(r) => Value::Array(
            r[0].iter()
                .map(|&x| Value::String(states.label(x).to_string()))
                .collect(),
        ),
        Rows::SubDist(r) => Value::Object(
            r[0].iter()
                .map(|(&x, w)| (states.label(x).to_string(), Value::String(format_weight(w))))
                .collect(),
        ),
        Rows::Lift(r) => r[0].map_or(Value::Null, |x| Value::String(states.label(x).to_string())),
    };
    let mut trans = Map::new();
    for x in 0..states.len() {
        let row = match sys.trans.rows() {
            Rows::Powerset(r) => Value::Array(
                r[x].iter()
                    .map(|&t| term_json(&terms, states, &sys.alphabet, t))
                    .collect(),
            ),
            Rows::SubDist(r) => Value::Array(
                r[x].iter()
                    .map(|(&t, w)| {
                        json!({
                            "term": term_json(&terms, states, &sys.alphabet, t),
                            "p": format_weight(w),
                        })
                    })
                    .collect(),
            ),
            Rows::Lift(r) => r[x].map_or(Value::Null, |t| term_json(&terms, states, &sys.alphabet, t)),
        };
        trans.insert(states.label(x).to_string(), row);
    }
    json!({
        "monad": sys.monad.name(),
        "alphabet": alphabet,
        "states": states.labels(),
        "init": init,
        "trans": trans,
    })
}

/// Pretty-printed document text, newline-terminated.
pub fn system_to_string(sys: &System) -> String {
    let mut s = serde_json::to_string_pretty(&serialize_system(sys)).expect("serializable");
    s.push('\n');
    s
}
