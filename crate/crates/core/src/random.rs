//! Seeded random systems and arrows for property tests and benchmarks.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use num_traits::{One, Zero};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::kleisli::{KleisliArrow, Monad, Rows};
use crate::signature::RankedAlphabet;
use crate::space::Space;
use crate::systems::System;
use crate::value::{ratio, Weight};

/// A reproducible generator.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `✓` plus `letters` unary symbols `a`, `b`, ...
pub fn word_alphabet(letters: usize) -> RankedAlphabet {
    let names: Vec<String> = (0..letters).map(|i| ((b'a' + i as u8) as char).to_string()).collect();
    RankedAlphabet::new(
        std::iter::once(("✓".to_string(), 0)).chain(names.into_iter().map(|n| (n, 1))),
    )
    .expect("distinct names")
}

/// `✓`, unary `a` and binary `g`.
pub fn tree_alphabet() -> RankedAlphabet {
    RankedAlphabet::new([("✓", 0), ("a", 1), ("g", 2)]).expect("distinct names")
}

pub fn state_space(prefix: &str, n: usize) -> Arc<Space> {
    Space::states((0..n).map(|i| format!("{prefix}{i}"))).expect("distinct names")
}

fn random_set<R: Rng>(rng: &mut R, n: usize, density: f64) -> BTreeSet<usize> {
    (0..n).filter(|_| rng.random_bool(density)).collect()
}

/// A subdistribution over `0..n` with denominators dividing `den`; the
/// mass is exactly one when `stochastic`, else at most one.
fn random_dist<R: Rng>(rng: &mut R, n: usize, stochastic: bool, den: i64) -> BTreeMap<usize, Weight> {
    let mut out = BTreeMap::new();
    if n == 0 {
        return out;
    }
    let support = rng.random_range(1..=n.min(3));
    let picks = sample(rng, n, support).into_vec();
    let total = if stochastic { den } else { rng.random_range(0..=den) };
    let mut left = total;
    for (i, &t) in picks.iter().enumerate() {
        let share = if i + 1 == picks.len() {
            left
        } else {
            rng.random_range(0..=left)
        };
        left -= share;
        if share > 0 {
            out.insert(t, ratio(share, den));
        }
    }
    out
}

fn random_rows<R: Rng>(rng: &mut R, monad: Monad, n: usize, m: usize, density: f64, stochastic: bool) -> Rows {
    match monad {
        Monad::Powerset => Rows::Powerset((0..n).map(|_| random_set(rng, m, density)).collect()),
        Monad::SubDist => Rows::SubDist((0..n).map(|_| random_dist(rng, m, stochastic, 12)).collect()),
        Monad::Lift => Rows::Lift(
            (0..n)
                .map(|_| (m > 0 && !rng.random_bool(1.0 - density)).then(|| rng.random_range(0..m)))
                .collect(),
        ),
    }
}

/// A random arrow between two spaces. For the lift monad `density` is the
/// chance of a defined image; for subdistributions it is ignored.
pub fn random_arrow<R: Rng>(
    rng: &mut R,
    monad: Monad,
    dom: &Arc<Space>,
    cod: &Arc<Space>,
    density: f64,
) -> KleisliArrow {
    let rows = random_rows(rng, monad, dom.len(), cod.len(), density, false);
    KleisliArrow::new(Arc::clone(dom), Arc::clone(cod), rows).expect("well-formed")
}

/// A random system with `n` states named `{prefix}0..`. Powerset rows pick
/// each term with probability `density`; subdistribution rows are exactly
/// stochastic when `stochastic`; lift rows abort with probability
/// `1 - density`.
pub fn random_system<R: Rng>(
    rng: &mut R,
    monad: Monad,
    alphabet: &RankedAlphabet,
    prefix: &str,
    n: usize,
    density: f64,
    stochastic: bool,
) -> System {
    let states = state_space(prefix, n);
    let terms = Space::terms(alphabet, &states);
    let init_rows = match monad {
        Monad::Powerset => {
            let mut s = random_set(rng, n, 0.5);
            if s.is_empty() && n > 0 {
                s.insert(0);
            }
            Rows::Powerset(vec![s])
        }
        Monad::SubDist => Rows::SubDist(vec![random_dist(rng, n, true, 6)]),
        Monad::Lift => Rows::Lift(vec![(n > 0).then_some(0)]),
    };
    let init = KleisliArrow::new(Space::unit(), Arc::clone(&states), init_rows).expect("well-formed");
    let trans_rows = random_rows(rng, monad, n, terms.len(), density, stochastic);
    let trans = KleisliArrow::new(Arc::clone(&states), terms, trans_rows).expect("well-formed");
    System::new(alphabet.clone(), states, init, trans).expect("valid")
}

/// A probabilistic system over the same states whose every transition
/// row dominates the one of `x`: part of each row's deficiency is moved
/// onto random terms.
pub fn add_mass<R: Rng>(rng: &mut R, x: &System) -> System {
    let rows = x.subdist_trans().expect("probabilistic system");
    let m = x.term_space().len();
    let more = rows
        .iter()
        .map(|row| {
            let mut row = row.clone();
            let deficiency = Weight::one() - row.values().sum::<Weight>();
            if deficiency.is_zero() || m == 0 {
                return row;
            }
            let share = ratio(rng.random_range(0..=4), 4) * deficiency;
            let t = rng.random_range(0..m);
            *row.entry(t).or_insert_with(Weight::zero) += share;
            row.retain(|_, w| !w.is_zero());
            row
        })
        .collect();
    let trans = KleisliArrow::new(
        Arc::clone(&x.states),
        Arc::clone(x.term_space()),
        Rows::SubDist(more),
    )
    .expect("well-formed");
    System::new(x.alphabet.clone(), Arc::clone(&x.states), x.init.clone(), trans).expect("valid")
}

/// An arrow pointwise above `f`: extra images for sets, the deficiency
/// moved onto a random target for subdistributions, and undefined points
/// sent to a random target for partial maps.
pub fn enlarge<R: Rng>(rng: &mut R, f: &KleisliArrow) -> KleisliArrow {
    let (dom, cod) = (f.dom(), f.cod());
    let rows = match f.rows() {
        Rows::Powerset(rows) => Rows::Powerset(
            rows.iter()
                .map(|s| s | &random_set(rng, cod.len(), 0.3))
                .collect(),
        ),
        Rows::SubDist(rows) => Rows::SubDist(
            rows.iter()
                .map(|row| {
                    let mut row = row.clone();
                    let gap = Weight::one() - row.values().sum::<Weight>();
                    if !gap.is_zero() && !cod.is_empty() {
                        let t = rng.random_range(0..cod.len());
                        *row.entry(t).or_insert_with(Weight::zero) += gap;
                    }
                    row
                })
                .collect(),
        ),
        Rows::Lift(rows) => Rows::Lift(
            rows.iter()
                .map(|v| v.or_else(|| (!cod.is_empty()).then(|| rng.random_range(0..cod.len()))))
                .collect(),
        ),
    };
    KleisliArrow::new(Arc::clone(dom), Arc::clone(cod), rows).expect("well-formed")
}

/// A pair of nondeterministic word systems with `1..=max_states` states each
/// over `✓` and `letters` letters. A third of the pairs are unrelated, a
/// third compare a system with a copy carrying extra transitions, and a
/// third compare it with an independently drawn system on the same states.
pub fn word_pair(seed: u64, max_states: usize, letters: usize) -> (System, System) {
    let mut r = rng(seed);
    let alpha = word_alphabet(letters);
    let nx = r.random_range(1..=max_states);
    let dx = r.random_range(0.15..0.6);
    let x = random_system(&mut r, Monad::Powerset, &alpha, "x", nx, dx, false);
    let y = match seed % 3 {
        0 => {
            let ny = r.random_range(1..=max_states);
            let dy = r.random_range(0.15..0.6);
            random_system(&mut r, Monad::Powerset, &alpha, "y", ny, dy, false)
        }
        1 => {
            let states = state_space("y", nx);
            let trans = enlarge(&mut r, &x.trans)
                .relabel(Arc::clone(&states), Space::terms(&alpha, &states))
                .expect("same sizes");
            let init = x.init.relabel(Space::unit(), Arc::clone(&states)).expect("same sizes");
            System::new(alpha, states, init, trans).expect("valid")
        }
        _ => random_system(&mut r, Monad::Powerset, &alpha, "y", nx, dx, false),
    };
    (x, y)
}
