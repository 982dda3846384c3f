//! Forward and backward Kleisli simulations: checking candidate witnesses,
//! their totality restrictions, and searching for witnesses between
//! nondeterministic systems.
//!
//! A forward simulation from `X = (X, s, c)` to `Y = (Y, t, d)` is an arrow
//! `f : Y ⇸ X` with `s ⊑ f ⊙ t` and `c ⊙ f ⊑ F̄f ⊙ d`. A backward simulation
//! is an arrow `b : X ⇸ Y` with `b ⊙ s ⊑ t` and `F̄b ⊙ c ⊑ d ⊙ b`.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use num_traits::One;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::exec::{position_first, Exec};
use crate::kleisli::{compose, lift_f, violations, KleisliArrow, Monad, Rows};
use crate::signature::{product, FTerm};
use crate::space::Space;
use crate::systems::System;
use crate::value::{format_weight, parse_weight, Weight};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Backward,
}

impl Direction {
    pub fn name(self) -> &'static str {
        match self {
            Direction::Forward => "fwd",
            Direction::Backward => "bwd",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "fwd" => Some(Direction::Forward),
            "bwd" => Some(Direction::Backward),
            _ => None,
        }
    }
}

/// Totality and image-finiteness of a backward witness.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RestrictionFlags {
    pub total: bool,
    pub image_finite: bool,
}

impl RestrictionFlags {
    pub const NONE: RestrictionFlags = RestrictionFlags {
        total: false,
        image_finite: false,
    };

    /// Whether `self` meets every restriction demanded by `required`.
    pub fn satisfies(self, required: RestrictionFlags) -> bool {
        (!required.total || self.total) && (!required.image_finite || self.image_finite)
    }
}

/// A candidate simulation together with its computed restriction flags.
#[derive(Clone, Debug, PartialEq)]
pub struct SimWitness {
    pub direction: Direction,
    pub arrow: KleisliArrow,
    pub flags: RestrictionFlags,
}

impl SimWitness {
    pub fn new(direction: Direction, arrow: KleisliArrow) -> Self {
        let flags = check_restrictions(&arrow);
        Self {
            direction,
            arrow,
            flags,
        }
    }
}

/// One failed inequality, localized to a domain element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    /// `"init"` or `"step"`.
    pub condition: &'static str,
    /// The offending state, or `*` for the initial condition.
    pub at: String,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckReport {
    pub verdict: bool,
    pub violations: Vec<Violation>,
}

fn compatible(x: &System, y: &System, arrow: &KleisliArrow) -> Result<()> {
    for m in [y.monad, arrow.monad()] {
        if m != x.monad {
            return Err(Error::MonadMismatch {
                left: x.monad,
                right: m,
            });
        }
    }
    if x.alphabet != y.alphabet {
        return Err(Error::AlphabetMismatch);
    }
    Ok(())
}

fn collect(
    condition: &'static str,
    lhs: &KleisliArrow,
    rhs: &KleisliArrow,
    out: &mut Vec<Violation>,
) -> Result<()> {
    for i in violations(lhs, rhs)? {
        out.push(Violation {
            condition,
            at: lhs.dom().label(i).to_string(),
            lhs: lhs.render_row(i),
            rhs: rhs.render_row(i),
        });
    }
    Ok(())
}

/// Checks `s ⊑ f ⊙ t` and `c ⊙ f ⊑ F̄f ⊙ d` for `f : Y ⇸ X`.
pub fn check_fwd(x: &System, y: &System, f: &KleisliArrow) -> Result<CheckReport> {
    compatible(x, y, f)?;
    if f.dom() != &y.states || f.cod() != &x.states {
        return Err(Error::DomainMismatch("forward witness must be an arrow Y ⇸ X".into()));
    }
    let mut out = Vec::new();
    collect("init", &x.init, &compose(f, &y.init)?, &mut out)?;
    let lhs = compose(&x.trans, f)?;
    let rhs = compose(&lift_f(f, &x.alphabet), &y.trans)?;
    collect("step", &lhs, &rhs, &mut out)?;
    Ok(CheckReport {
        verdict: out.is_empty(),
        violations: out,
    })
}

/// Checks `b ⊙ s ⊑ t` and `F̄b ⊙ c ⊑ d ⊙ b` for `b : X ⇸ Y`.
///
/// The step condition composes `d` after `b`, following the commuting square
/// that defines backward simulations.
pub fn check_bwd(x: &System, y: &System, b: &KleisliArrow) -> Result<CheckReport> {
    compatible(x, y, b)?;
    if b.dom() != &x.states || b.cod() != &y.states {
        return Err(Error::DomainMismatch("backward witness must be an arrow X ⇸ Y".into()));
    }
    let mut out = Vec::new();
    collect("init", &compose(b, &x.init)?, &y.init, &mut out)?;
    let lhs = compose(&lift_f(b, &x.alphabet), &x.trans)?;
    let rhs = compose(&y.trans, b)?;
    collect("step", &lhs, &rhs, &mut out)?;
    Ok(CheckReport {
        verdict: out.is_empty(),
        violations: out,
    })
}

/// Totality per monad: nonempty images, full probability mass, or no `⊥`.
/// Finite representations are always image-finite.
pub fn check_restrictions(b: &KleisliArrow) -> RestrictionFlags {
    let total = match b.rows() {
        Rows::Powerset(r) => r.iter().all(|s| !s.is_empty()),
        Rows::SubDist(r) => r.iter().all(|row| row.values().sum::<Weight>() == Weight::one()),
        Rows::Lift(r) => r.iter().all(Option::is_some),
    };
    RestrictionFlags {
        total,
        image_finite: true,
    }
}

fn decoded_rows(sys: &System) -> Result<Vec<Vec<FTerm>>> {
    let rows = sys.powerset_trans().ok_or(Error::MonadMismatch {
        left: sys.monad,
        right: Monad::Powerset,
    })?;
    let terms = sys.term_space();
    Ok(rows
        .iter()
        .map(|r| r.iter().map(|&t| terms.term(t)).collect())
        .collect())
}

/// The largest step-respecting relation `R ⊆ Y × X`, returned as a forward
/// witness `Y ⇸ X` when it also covers the initial states.
///
/// Step-respecting relations are closed under union, so refining the full
/// relation until stable yields the greatest one; if that fails the initial
/// condition, no forward simulation exists.
pub fn find_fwd_rel(x: &System, y: &System) -> Result<Option<KleisliArrow>> {
    if x.alphabet != y.alphabet {
        return Err(Error::AlphabetMismatch);
    }
    let cx = decoded_rows(x)?;
    let dy = decoded_rows(y)?;
    let (nx, ny) = (x.len(), y.len());
    let mut rel = vec![vec![true; nx]; ny];
    loop {
        let mut changed = false;
        for yi in 0..ny {
            for xi in 0..nx {
                if !rel[yi][xi] {
                    continue;
                }
                let ok = cx[xi].iter().all(|tx| {
                    dy[yi].iter().any(|ty| {
                        tx.symbol == ty.symbol
                            && ty.args.iter().zip(&tx.args).all(|(&a, &b)| rel[a][b])
                    })
                });
                if !ok {
                    rel[yi][xi] = false;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    let s = x.powerset_init().expect("powerset");
    let t = y.powerset_init().ok_or(Error::MonadMismatch {
        left: y.monad,
        right: Monad::Powerset,
    })?;
    if !s.iter().all(|&xi| t.iter().any(|&yi| rel[yi][xi])) {
        return Ok(None);
    }
    let rows = rel
        .iter()
        .map(|r| (0..nx).filter(|&xi| r[xi]).collect())
        .collect();
    Ok(Some(KleisliArrow::new(
        Arc::clone(&y.states),
        Arc::clone(&x.states),
        Rows::Powerset(rows),
    )?))
}

/// Precomputed data for testing relations `X ⇸ Y` as backward simulations.
struct BwdProblem {
    nx: usize,
    ny: usize,
    cx: Vec<Vec<FTerm>>,
    d_bits: Vec<Vec<u64>>,
    s: Vec<usize>,
    t_mask: u64,
    fy: Arc<Space>,
}

impl BwdProblem {
    fn image(&self, mask: u64, xi: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.ny).filter(move |&yi| mask >> (xi * self.ny + yi) & 1 == 1)
    }

    fn row_mask(&self, mask: u64, xi: usize) -> u64 {
        (mask >> (xi * self.ny)) & 1u64.checked_shl(self.ny as u32).map_or(u64::MAX, |m| m - 1)
    }

    fn passes(&self, mask: u64, require: RestrictionFlags) -> bool {
        if require.total && (0..self.nx).any(|xi| self.row_mask(mask, xi) == 0) {
            return false;
        }
        if self.s.iter().any(|&xi| self.row_mask(mask, xi) & !self.t_mask != 0) {
            return false;
        }
        let words = self.fy.len().div_ceil(64).max(1);
        let mut allowed = vec![0u64; words];
        for xi in 0..self.nx {
            allowed.iter_mut().for_each(|w| *w = 0);
            for yi in self.image(mask, xi) {
                for (a, b) in allowed.iter_mut().zip(&self.d_bits[yi]) {
                    *a |= b;
                }
            }
            for term in &self.cx[xi] {
                let choices: Vec<Vec<usize>> =
                    term.args.iter().map(|&a| self.image(mask, a).collect()).collect();
                for ys in product(&choices) {
                    let t = self.fy.term_index(term.symbol, &ys);
                    if allowed[t / 64] >> (t % 64) & 1 == 0 {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn arrow(&self, mask: u64, x: &System, y: &System) -> KleisliArrow {
        let rows = (0..self.nx).map(|xi| self.image(mask, xi).collect()).collect();
        KleisliArrow::new(Arc::clone(&x.states), Arc::clone(&y.states), Rows::Powerset(rows))
            .expect("indices in range")
    }
}

/// All `n`-bit masks with `k` bits set, ordered lexicographically by their
/// sorted set of bit positions.
fn combinations(n: usize, k: usize) -> Vec<u64> {
    let mut out = Vec::new();
    let mut pos: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(pos.iter().fold(0u64, |m, &p| m | 1 << p));
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if pos[i] < n - k + i {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        pos[i] += 1;
        for j in i + 1..k {
            pos[j] = pos[j - 1] + 1;
        }
    }
}

/// Exhaustive search for a backward simulation `X ⇸ Y` meeting `require`.
///
/// Relations are visited by increasing size, then lexicographically over the
/// `(x, y)` grid; the first one passing is returned regardless of `exec`.
pub fn find_bwd_bruteforce(
    x: &System,
    y: &System,
    require: RestrictionFlags,
    budget: u128,
    exec: Exec,
) -> Result<Option<KleisliArrow>> {
    if x.alphabet != y.alphabet {
        return Err(Error::AlphabetMismatch);
    }
    let cx = decoded_rows(x)?;
    let dy_rows = y.powerset_trans().ok_or(Error::MonadMismatch {
        left: y.monad,
        right: Monad::Powerset,
    })?;
    let (nx, ny) = (x.len(), y.len());
    let bits = nx * ny;
    let needed = if bits >= 127 { u128::MAX } else { 1u128 << bits };
    if needed > budget || bits > 63 || ny > 63 {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    let fy = Arc::clone(y.term_space());
    let words = fy.len().div_ceil(64).max(1);
    let d_bits = dy_rows
        .iter()
        .map(|row| {
            let mut v = vec![0u64; words];
            for &t in row {
                v[t / 64] |= 1 << (t % 64);
            }
            v
        })
        .collect();
    let t_mask = y
        .powerset_init()
        .expect("powerset")
        .iter()
        .fold(0u64, |m, &yi| m | 1 << yi);
    let problem = BwdProblem {
        nx,
        ny,
        cx,
        d_bits,
        s: x.powerset_init().expect("powerset").iter().copied().collect(),
        t_mask,
        fy,
    };
    let start = if require.total { nx } else { 0 };
    for k in start..=bits {
        let masks = combinations(bits, k);
        if let Some(i) = position_first(exec, &masks, |&m| problem.passes(m, require)) {
            let arrow = problem.arrow(masks[i], x, y);
            debug_assert!(check_bwd(x, y, &arrow).map(|r| r.verdict).unwrap_or(false));
            return Ok(Some(arrow));
        }
    }
    Ok(None)
}

/// Serializes a witness: `{"dir", "monad", "map": {state: row}}`.
pub fn witness_to_json(direction: Direction, arrow: &KleisliArrow) -> Value {
    let dom = arrow.dom();
    let cod = arrow.cod();
    let mut map = Map::new();
    for i in 0..dom.len() {
        let row = match arrow.rows() {
            Rows::Powerset(r) => json!(r[i].iter().map(|&j| cod.label(j)).collect::<Vec<_>>()),
            Rows::SubDist(r) => Value::Object(
                r[i].iter()
                    .map(|(&j, w)| (cod.label(j).to_string(), Value::String(format_weight(w))))
                    .collect(),
            ),
            Rows::Lift(r) => r[i].map_or(Value::Null, |j| Value::String(cod.label(j).to_string())),
        };
        map.insert(dom.label(i).to_string(), row);
    }
    json!({
        "dir": direction.name(),
        "monad": arrow.monad().name(),
        "map": map,
    })
}

/// Pretty-printed witness document, newline-terminated.
pub fn witness_to_string(direction: Direction, arrow: &KleisliArrow) -> String {
    let mut s = serde_json::to_string_pretty(&witness_to_json(direction, arrow)).expect("serializable");
    s.push('\n');
    s
}

/// Reads a witness document for the systems `x` (simulated) and `y`
/// (simulating). States missing from `map` get the least image.
pub fn parse_witness(text: &str, x: &System, y: &System) -> Result<(Direction, KleisliArrow)> {
    let syntax = |m: &str| Error::Syntax {
        position: "witness".into(),
        message: m.into(),
    };
    let doc: Value = serde_json::from_str(text).map_err(|e| Error::Syntax {
        position: format!("line {} column {}", e.line(), e.column()),
        message: e.to_string(),
    })?;
    let dir = doc
        .get("dir")
        .and_then(Value::as_str)
        .and_then(Direction::from_name)
        .ok_or_else(|| syntax("`dir` must be \"fwd\" or \"bwd\""))?;
    let monad = doc
        .get("monad")
        .and_then(Value::as_str)
        .and_then(Monad::from_name)
        .ok_or_else(|| Error::MonadFieldInvalid("unknown witness monad".into()))?;
    let map = doc
        .get("map")
        .and_then(Value::as_object)
        .ok_or_else(|| syntax("`map` must be an object"))?;
    let (dom, cod) = match dir {
        Direction::Forward => (&y.states, &x.states),
        Direction::Backward => (&x.states, &y.states),
    };
    for k in map.keys() {
        if dom.position(k).is_none() {
            return Err(Error::UnknownState(k.clone()));
        }
    }
    let target = |v: &Value| -> Result<usize> {
        let name = v.as_str().ok_or_else(|| syntax("images are state names"))?;
        cod.position(name)
            .ok_or_else(|| Error::UnknownState(name.to_string()))
    };
    let entry = |i: usize| map.get(dom.label(i));
    let rows = match monad {
        Monad::Powerset => Rows::Powerset(
            (0..dom.len())
                .map(|i| match entry(i) {
                    None => Ok(BTreeSet::new()),
                    Some(v) => v
                        .as_array()
                        .ok_or_else(|| Error::MonadFieldInvalid("powerset rows are arrays".into()))?
                        .iter()
                        .map(target)
                        .collect(),
                })
                .collect::<Result<_>>()?,
        ),
        Monad::SubDist => Rows::SubDist(
            (0..dom.len())
                .map(|i| match entry(i) {
                    None => Ok(BTreeMap::new()),
                    Some(v) => v
                        .as_object()
                        .ok_or_else(|| Error::MonadFieldInvalid("subdist rows are objects".into()))?
                        .iter()
                        .map(|(k, w)| {
                            let j = target(&Value::String(k.clone()))?;
                            let w = w.as_str().ok_or_else(|| {
                                Error::MonadFieldInvalid("weights are \"p/q\" strings".into())
                            })?;
                            Ok((j, parse_weight(w)?))
                        })
                        .collect(),
                })
                .collect::<Result<_>>()?,
        ),
        Monad::Lift => Rows::Lift(
            (0..dom.len())
                .map(|i| match entry(i) {
                    None | Some(Value::Null) => Ok(None),
                    Some(v) => target(v).map(Some),
                })
                .collect::<Result<_>>()?,
        ),
    };
    Ok((dir, KleisliArrow::new(Arc::clone(dom), Arc::clone(cod), rows)?))
}
