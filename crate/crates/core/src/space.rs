//! Finite carriers of Kleisli arrows: plain state sets and term sets `F_Σ X`.

use std::collections::HashMap;
use std::sync::Arc;

use crate::signature::{tuples, FTerm, RankedAlphabet, Symbol};

/// Layout of a term space over a base space.
#[derive(Clone, Debug)]
pub struct TermLayout {
    alphabet: RankedAlphabet,
    base: Arc<Space>,
    offsets: Vec<usize>,
}

impl TermLayout {
    pub fn alphabet(&self) -> &RankedAlphabet {
        &self.alphabet
    }

    pub fn base(&self) -> &Arc<Space> {
        &self.base
    }
}

/// An ordered finite set of labelled elements.
///
/// Two spaces are equal when their label sequences agree; a term space and
/// the state space made of its printed terms are therefore interchangeable.
#[derive(Clone, Debug)]
pub struct Space {
    labels: Vec<String>,
    index: HashMap<String, usize>,
    terms: Option<TermLayout>,
}

impl PartialEq for Space {
    fn eq(&self, other: &Self) -> bool {
        self.labels == other.labels
    }
}

impl Eq for Space {}

impl Space {
    /// A plain set of named elements. Returns `None` when a name repeats.
    pub fn states<I, S>(names: I) -> Option<Arc<Space>>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = names.into_iter().map(Into::into).collect();
        let index: HashMap<String, usize> = labels
            .iter()
            .enumerate()
            .map(|(i, l)| (l.clone(), i))
            .collect();
        (index.len() == labels.len()).then(|| {
            Arc::new(Space {
                labels,
                index,
                terms: None,
            })
        })
    }

    /// The one-point space `1 = {*}`.
    pub fn unit() -> Arc<Space> {
        Space::states(["*"]).expect("singleton")
    }

    /// `F_Σ X` with terms ordered by symbol then argument tuple.
    pub fn terms(alphabet: &RankedAlphabet, base: &Arc<Space>) -> Arc<Space> {
        let n = base.len();
        let mut offsets = Vec::with_capacity(alphabet.len());
        let mut labels = Vec::new();
        for sym in alphabet.symbols() {
            offsets.push(labels.len());
            for args in tuples(n, alphabet.arity(sym)) {
                let term = FTerm::new(sym, args);
                labels.push(term.render(alphabet, |i| base.label(i).to_string()));
            }
        }
        let index = labels
            .iter()
            .enumerate()
            .map(|(i, l)| (l.clone(), i))
            .collect();
        Arc::new(Space {
            labels,
            index,
            terms: Some(TermLayout {
                alphabet: alphabet.clone(),
                base: Arc::clone(base),
                offsets,
            }),
        })
    }

    /// Forgets the term structure, keeping the printed labels.
    pub fn as_states(self: &Arc<Self>) -> Arc<Space> {
        if self.terms.is_none() {
            return Arc::clone(self);
        }
        Arc::new(Space {
            labels: self.labels.clone(),
            index: self.index.clone(),
            terms: None,
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn position(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn layout(&self) -> Option<&TermLayout> {
        self.terms.as_ref()
    }

    /// Index of a term in a term space.
    pub fn term_index(&self, symbol: Symbol, args: &[usize]) -> usize {
        let layout = self.terms.as_ref().expect("not a term space");
        let n = layout.base.len();
        let mut idx = 0;
        for &a in args {
            idx = idx * n + a;
        }
        layout.offsets[symbol.index()] + idx
    }

    /// Decodes an element of a term space.
    pub fn term(&self, i: usize) -> FTerm {
        let layout = self.terms.as_ref().expect("not a term space");
        let sym = match layout.offsets.binary_search(&i) {
            Ok(mut s) => {
                // empty blocks share an offset with their successor
                while s + 1 < layout.offsets.len() && layout.offsets[s + 1] == i {
                    s += 1;
                }
                s
            }
            Err(s) => s - 1,
        };
        let symbol = Symbol(sym);
        let arity = layout.alphabet.arity(symbol);
        let n = layout.base.len();
        let mut rest = i - layout.offsets[sym];
        let mut args = vec![0; arity];
        for slot in args.iter_mut().rev() {
            *slot = rest % n;
            rest /= n;
        }
        FTerm::new(symbol, args)
    }
}
