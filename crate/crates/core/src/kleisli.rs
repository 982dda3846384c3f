//! Kleisli arrows for the powerset, subdistribution and lift monads.
//!
//! An arrow `X ⇸ Y` is stored row by row: one entry per element of the
//! domain, shaped by the monad. Subdistribution weights are exact rationals
//! throughout, so the order `⊑` is decided exactly.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::signature::{product, RankedAlphabet};
use crate::space::Space;
use crate::value::{format_weight, Valuation, Weight};

/// Branching type of a system.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Monad {
    Powerset,
    SubDist,
    Lift,
}

impl Monad {
    pub fn name(self) -> &'static str {
        match self {
            Monad::Powerset => "powerset",
            Monad::SubDist => "subdist",
            Monad::Lift => "lift",
        }
    }

    pub fn from_name(name: &str) -> Option<Monad> {
        match name {
            "powerset" => Some(Monad::Powerset),
            "subdist" => Some(Monad::SubDist),
            "lift" => Some(Monad::Lift),
            _ => None,
        }
    }
}

impl fmt::Display for Monad {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Per-element images of an arrow.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Rows {
    Powerset(Vec<BTreeSet<usize>>),
    SubDist(Vec<BTreeMap<usize, Weight>>),
    /// `None` is the exception `⊥`.
    Lift(Vec<Option<usize>>),
}

impl Rows {
    pub fn monad(&self) -> Monad {
        match self {
            Rows::Powerset(_) => Monad::Powerset,
            Rows::SubDist(_) => Monad::SubDist,
            Rows::Lift(_) => Monad::Lift,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            Rows::Powerset(r) => r.len(),
            Rows::SubDist(r) => r.len(),
            Rows::Lift(r) => r.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// A finite Kleisli arrow `dom ⇸ cod`.
#[derive(Clone, Debug, PartialEq)]
pub struct KleisliArrow {
    dom: Arc<Space>,
    cod: Arc<Space>,
    rows: Rows,
}

impl KleisliArrow {
    /// Checks shape, index ranges, and that every subdistribution row has
    /// mass at most one.
    pub fn new(dom: Arc<Space>, cod: Arc<Space>, rows: Rows) -> Result<Self> {
        let arrow = Self::new_unchecked_mass(dom, cod, rows)?;
        if let Some(x) = arrow.overweight_rows().first() {
            return Err(Error::RowSumExceedsOne(arrow.dom.label(*x).to_string()));
        }
        Ok(arrow)
    }

    /// Like [`KleisliArrow::new`] but accepts rows whose mass exceeds one.
    /// Such arrows only exist to be reported by diagnostics.
    pub fn new_unchecked_mass(dom: Arc<Space>, cod: Arc<Space>, rows: Rows) -> Result<Self> {
        if rows.len() != dom.len() {
            return Err(Error::DomainMismatch(format!(
                "{} rows for a domain of {} elements",
                rows.len(),
                dom.len()
            )));
        }
        let m = cod.len();
        let in_range = match &rows {
            Rows::Powerset(r) => r.iter().all(|s| s.iter().all(|&y| y < m)),
            Rows::SubDist(r) => r.iter().all(|s| s.keys().all(|&y| y < m)),
            Rows::Lift(r) => r.iter().all(|s| s.is_none_or(|y| y < m)),
        };
        if !in_range {
            return Err(Error::DomainMismatch("image outside the codomain".into()));
        }
        let mut rows = rows;
        if let Rows::SubDist(r) = &mut rows {
            for row in r.iter_mut() {
                row.retain(|_, w| !w.is_zero());
            }
        }
        Ok(Self { dom, cod, rows })
    }

    /// The least arrow: empty sets, zero subdistributions, or `⊥` everywhere.
    pub fn bottom(dom: Arc<Space>, cod: Arc<Space>, monad: Monad) -> Self {
        let n = dom.len();
        let rows = match monad {
            Monad::Powerset => Rows::Powerset(vec![BTreeSet::new(); n]),
            Monad::SubDist => Rows::SubDist(vec![BTreeMap::new(); n]),
            Monad::Lift => Rows::Lift(vec![None; n]),
        };
        Self { dom, cod, rows }
    }

    /// `J h = η ∘ h` for a total function given by its graph.
    pub fn unit(dom: Arc<Space>, cod: Arc<Space>, graph: &[usize], monad: Monad) -> Result<Self> {
        if graph.len() != dom.len() {
            return Err(Error::DomainMismatch("function is not total".into()));
        }
        let rows = match monad {
            Monad::Powerset => Rows::Powerset(graph.iter().map(|&y| BTreeSet::from([y])).collect()),
            Monad::SubDist => Rows::SubDist(
                graph
                    .iter()
                    .map(|&y| BTreeMap::from([(y, Weight::one())]))
                    .collect(),
            ),
            Monad::Lift => Rows::Lift(graph.iter().map(|&y| Some(y)).collect()),
        };
        Self::new(dom, cod, rows)
    }

    pub fn identity(space: Arc<Space>, monad: Monad) -> Self {
        let graph: Vec<usize> = (0..space.len()).collect();
        Self::unit(Arc::clone(&space), space, &graph, monad).expect("identity is well-formed")
    }

    pub fn monad(&self) -> Monad {
        self.rows.monad()
    }

    pub fn dom(&self) -> &Arc<Space> {
        &self.dom
    }

    pub fn cod(&self) -> &Arc<Space> {
        &self.cod
    }

    pub fn rows(&self) -> &Rows {
        &self.rows
    }

    /// Same rows over spaces of equal size, e.g. a term space seen as states.
    pub fn relabel(&self, dom: Arc<Space>, cod: Arc<Space>) -> Result<Self> {
        if dom.len() != self.dom.len() || cod.len() != self.cod.len() {
            return Err(Error::DomainMismatch("relabelling changes a size".into()));
        }
        Ok(Self {
            dom,
            cod,
            rows: self.rows.clone(),
        })
    }

    /// Domain elements whose subdistribution has mass above one.
    pub fn overweight_rows(&self) -> Vec<usize> {
        match &self.rows {
            Rows::SubDist(r) => r
                .iter()
                .enumerate()
                .filter(|(_, row)| row.values().sum::<Weight>() > Weight::one())
                .map(|(i, _)| i)
                .collect(),
            _ => Vec::new(),
        }
    }

    /// Total outgoing mass of a subdistribution row.
    pub fn mass(&self, x: usize) -> Option<Weight> {
        match &self.rows {
            Rows::SubDist(r) => Some(r[x].values().sum()),
            _ => None,
        }
    }

    /// Human-readable image of one element.
    pub fn render_row(&self, x: usize) -> String {
        let name = |y: usize| self.cod.label(y).to_string();
        match &self.rows {
            Rows::Powerset(r) => {
                let items: Vec<String> = r[x].iter().map(|&y| name(y)).collect();
                format!("{{{}}}", items.join(","))
            }
            Rows::SubDist(r) => {
                let items: Vec<String> = r[x]
                    .iter()
                    .map(|(&y, w)| format!("{}↦{}", name(y), format_weight(w)))
                    .collect();
                format!("[{}]", items.join(","))
            }
            Rows::Lift(r) => r[x].map_or_else(|| "⊥".to_string(), name),
        }
    }
}

fn same_monad(a: &KleisliArrow, b: &KleisliArrow) -> Result<()> {
    if a.monad() != b.monad() {
        return Err(Error::MonadMismatch {
            left: a.monad(),
            right: b.monad(),
        });
    }
    Ok(())
}

/// Kleisli composition `g ⊙ f = μ ∘ Tg ∘ f`.
pub fn compose(g: &KleisliArrow, f: &KleisliArrow) -> Result<KleisliArrow> {
    same_monad(g, f)?;
    if f.cod != g.dom {
        return Err(Error::DomainMismatch(
            "codomain of the first arrow differs from the domain of the second".into(),
        ));
    }
    let rows = match (&f.rows, &g.rows) {
        (Rows::Powerset(fr), Rows::Powerset(gr)) => Rows::Powerset(
            fr.iter()
                .map(|ys| ys.iter().flat_map(|&y| gr[y].iter().copied()).collect())
                .collect(),
        ),
        (Rows::SubDist(fr), Rows::SubDist(gr)) => Rows::SubDist(
            fr.iter()
                .map(|ys| {
                    let mut out: BTreeMap<usize, Weight> = BTreeMap::new();
                    for (&y, p) in ys {
                        for (&z, q) in &gr[y] {
                            *out.entry(z).or_insert_with(Weight::zero) += p * q;
                        }
                    }
                    out.retain(|_, w| !w.is_zero());
                    out
                })
                .collect(),
        ),
        (Rows::Lift(fr), Rows::Lift(gr)) => {
            Rows::Lift(fr.iter().map(|y| y.and_then(|y| gr[y])).collect())
        }
        _ => unreachable!("monads checked above"),
    };
    Ok(KleisliArrow {
        dom: Arc::clone(&f.dom),
        cod: Arc::clone(&g.cod),
        rows,
    })
}

/// Pointwise order. Returns the first domain element where `f ⊑ g` fails,
/// or `None` when it holds.
pub fn leq(f: &KleisliArrow, g: &KleisliArrow) -> Result<Option<usize>> {
    check_types(f, g)?;
    Ok((0..f.dom.len()).find(|&x| !row_leq(f, g, x)))
}

/// Every domain element where `f ⊑ g` fails, in order.
pub fn violations(f: &KleisliArrow, g: &KleisliArrow) -> Result<Vec<usize>> {
    check_types(f, g)?;
    Ok((0..f.dom.len()).filter(|&x| !row_leq(f, g, x)).collect())
}

fn check_types(f: &KleisliArrow, g: &KleisliArrow) -> Result<()> {
    same_monad(f, g)?;
    if f.dom != g.dom || f.cod != g.cod {
        return Err(Error::DomainMismatch("arrows have different types".into()));
    }
    Ok(())
}

fn row_leq(f: &KleisliArrow, g: &KleisliArrow, x: usize) -> bool {
    match (&f.rows, &g.rows) {
        (Rows::Powerset(a), Rows::Powerset(b)) => a[x].is_subset(&b[x]),
        (Rows::SubDist(a), Rows::SubDist(b)) => a[x]
            .iter()
            .all(|(y, p)| b[x].get(y).is_some_and(|q| p <= q)),
        (Rows::Lift(a), Rows::Lift(b)) => a[x].is_none() || a[x] == b[x],
        _ => unreachable!("monads checked above"),
    }
}

/// Applies the lifted functor `F̄` to an arrow `X ⇸ Y`, giving `F_Σ X ⇸ F_Σ Y`
/// through the canonical distributive law.
pub fn lift_f(f: &KleisliArrow, alphabet: &RankedAlphabet) -> KleisliArrow {
    let dom = Space::terms(alphabet, &f.dom);
    let cod = Space::terms(alphabet, &f.cod);
    let n = dom.len();
    let rows = match &f.rows {
        Rows::Powerset(fr) => Rows::Powerset(
            (0..n)
                .map(|i| {
                    let t = dom.term(i);
                    let choices: Vec<Vec<usize>> =
                        t.args.iter().map(|&x| fr[x].iter().copied().collect()).collect();
                    product(&choices)
                        .into_iter()
                        .map(|ys| cod.term_index(t.symbol, &ys))
                        .collect()
                })
                .collect(),
        ),
        Rows::SubDist(fr) => Rows::SubDist(
            (0..n)
                .map(|i| {
                    let t = dom.term(i);
                    let choices: Vec<Vec<(usize, Weight)>> = t
                        .args
                        .iter()
                        .map(|&x| fr[x].iter().map(|(&y, w)| (y, w.clone())).collect())
                        .collect();
                    product(&choices)
                        .into_iter()
                        .map(|picks| {
                            let ys: Vec<usize> = picks.iter().map(|p| p.0).collect();
                            let w = picks.iter().fold(Weight::one(), |acc, p| acc * &p.1);
                            (cod.term_index(t.symbol, &ys), w)
                        })
                        .collect()
                })
                .collect(),
        ),
        Rows::Lift(fr) => Rows::Lift(
            (0..n)
                .map(|i| {
                    let t = dom.term(i);
                    let ys: Option<Vec<usize>> = t.args.iter().map(|&x| fr[x]).collect();
                    ys.map(|ys| cod.term_index(t.symbol, &ys))
                })
                .collect(),
        ),
    };
    KleisliArrow { dom, cod, rows }
}

/// Greatest lower bound of a pointwise decreasing sequence of valuations.
/// For a finite sequence this is its last element; the check guards the
/// decreasing precondition.
pub fn meet_decreasing(seq: &[Valuation]) -> Result<Valuation> {
    let first = seq
        .first()
        .ok_or_else(|| Error::DomainMismatch("empty sequence".into()))?;
    for (index, pair) in seq.windows(2).enumerate() {
        if pair[0].len() != first.len() || pair[1].len() != first.len() {
            return Err(Error::DomainMismatch("valuations of different sizes".into()));
        }
        for element in 0..first.len() {
            let later_above = pair[1]
                .get(element)
                .partial_cmp_approx(pair[0].get(element))
                .is_none_or(|o| o == std::cmp::Ordering::Greater);
            if later_above {
                return Err(Error::NotDecreasing {
                    index: index + 1,
                    element,
                });
            }
        }
    }
    Ok(seq.last().cloned().expect("nonempty"))
}
