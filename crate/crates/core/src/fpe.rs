//! Forward partial execution: `(X, s, c) ↦ (F̄X, c ⊙ s, F̄c)`.

use std::sync::Arc;

use num_traits::One;

use crate::error::Result;
use crate::kleisli::{compose, lift_f, KleisliArrow, Rows};
use crate::space::Space;
use crate::systems::System;
use crate::value::Weight;

/// Unrolls one transition step. The new states are the terms over the old
/// ones, named by their printed form such as `(a,z)`.
pub fn apply_fpe(x: &System) -> System {
    let states = x.term_space().as_states();
    let init = compose(&x.trans, &x.init)
        .and_then(|a| a.relabel(Space::unit(), Arc::clone(&states)))
        .expect("validated system composes");
    let lifted = lift_f(&x.trans, &x.alphabet);
    let trans = lifted
        .relabel(Arc::clone(&states), Space::terms(&x.alphabet, &states))
        .expect("lifted arrow keeps sizes");
    System::new(x.alphabet.clone(), states, init, trans).expect("unrolling preserves validity")
}

/// Whether every state of `y` has a total transition row: a nonempty image,
/// full probability mass, or no abort. Unrolling the simulated side keeps
/// backward simulations only under this condition.
pub fn bwd_adequacy_preconditions(y: &System) -> bool {
    match y.trans.rows() {
        Rows::Powerset(r) => r.iter().all(|s| !s.is_empty()),
        Rows::SubDist(r) => r.iter().all(|row| row.values().sum::<Weight>() == Weight::one()),
        Rows::Lift(r) => r.iter().all(Option::is_some),
    }
}

/// Transports a forward simulation `f : Y ⇸ X` to `c ⊙ f : Y ⇸ F̄X`, a forward
/// simulation into the unrolled system.
pub fn fwd_adequacy_witness(x: &System, f: &KleisliArrow) -> Result<KleisliArrow> {
    let unrolled = x.term_space().as_states();
    let g = compose(&x.trans, f)?;
    g.relabel(Arc::clone(g.dom()), unrolled)
}
