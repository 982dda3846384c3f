//! Infinite-trace oracles, computed independently of any simulation:
//! prefix-tree languages and exact word inclusion for nondeterministic
//! systems, cylinder measures through the skeleton branching process for
//! probabilistic ones, output trees for exception-raising ones, and per-tree
//! probabilities for subdistribution systems.

use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};

use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exec::{map_collect, Exec};
use crate::kleisli::Monad;
use crate::signature::{product, FTerm, Node, PrefixTree, RankedAlphabet, Symbol};
use crate::systems::System;
use crate::value::{Prob, Valuation, Weight};

/// Where a trace starts: the initial arrow or a single state.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Start {
    Init,
    State(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Included,
    NotIncluded,
    IncludedUpToDepth(usize),
}

/// A cylinder (or finite prefix) on which inclusion fails.
#[derive(Clone, Debug, PartialEq)]
pub struct InclusionWitness {
    pub tree: PrefixTree,
    pub lhs: Prob,
    pub rhs: Prob,
}

#[derive(Clone, Debug, PartialEq)]
pub struct InclusionReport {
    pub verdict: Verdict,
    pub witness: Option<InclusionWitness>,
    pub depths_checked: usize,
}

impl InclusionReport {
    fn refuted(tree: PrefixTree, lhs: Prob, rhs: Prob, depth: usize) -> Self {
        Self {
            verdict: Verdict::NotIncluded,
            witness: Some(InclusionWitness { tree, lhs, rhs }),
            depths_checked: depth,
        }
    }

    pub fn holds(&self) -> bool {
        self.verdict != Verdict::NotIncluded
    }
}

fn require(sys: &System, monad: Monad) -> Result<()> {
    if sys.monad != monad {
        return Err(Error::MonadMismatch {
            left: monad,
            right: sys.monad,
        });
    }
    Ok(())
}

fn same_alphabet(x: &System, y: &System) -> Result<()> {
    if x.alphabet != y.alphabet {
        return Err(Error::AlphabetMismatch);
    }
    Ok(())
}

fn start_states(sys: &System, start: Start) -> Vec<usize> {
    match start {
        Start::State(x) => vec![x],
        Start::Init => match sys.init.rows() {
            crate::kleisli::Rows::Powerset(r) => r[0].iter().copied().collect(),
            crate::kleisli::Rows::SubDist(r) => r[0].keys().copied().collect(),
            crate::kleisli::Rows::Lift(r) => r[0].into_iter().collect(),
        },
    }
}

fn powerset_terms(sys: &System) -> Result<Vec<Vec<FTerm>>> {
    require(sys, Monad::Powerset)?;
    let terms = sys.term_space();
    Ok(sys
        .powerset_trans()
        .expect("powerset")
        .iter()
        .map(|r| r.iter().map(|&t| terms.term(t)).collect())
        .collect())
}

fn live_from_terms(rows: &[Vec<FTerm>]) -> Vec<bool> {
    let mut live = vec![true; rows.len()];
    loop {
        let mut changed = false;
        for x in 0..rows.len() {
            if live[x] && !rows[x].iter().any(|t| t.args.iter().all(|&a| live[a])) {
                live[x] = false;
                changed = true;
            }
        }
        if !changed {
            return live;
        }
    }
}

/// States with a nonempty infinite-tree language: the greatest set in which
/// every state has a transition whose successors all stay in the set.
pub fn live_states(x: &System) -> Result<BTreeSet<usize>> {
    let live = live_from_terms(&powerset_terms(x)?);
    Ok((0..x.len()).filter(|&i| live[i]).collect())
}

/// Depth-`k` prefixes of the trees generated from `start`.
pub fn prefix_lang(x: &System, start: Start, k: usize) -> Result<BTreeSet<PrefixTree>> {
    let rows = powerset_terms(x)?;
    let live = live_from_terms(&rows);
    let starts: Vec<usize> = start_states(x, start).into_iter().filter(|&s| live[s]).collect();
    if k == 0 {
        return Ok(if starts.is_empty() {
            BTreeSet::new()
        } else {
            BTreeSet::from([PrefixTree::empty()])
        });
    }
    let live_terms: Vec<Vec<&FTerm>> = rows
        .iter()
        .map(|r| r.iter().filter(|t| t.args.iter().all(|&a| live[a])).collect())
        .collect();
    // level[s] = depth-j subtrees from s, for j = 1..=k
    let mut level: Vec<BTreeSet<Node>> = (0..x.len())
        .map(|s| {
            if !live[s] {
                return BTreeSet::new();
            }
            live_terms[s].iter().map(|t| Node::leaf(t.symbol)).collect()
        })
        .collect();
    for _ in 1..k {
        let next = (0..x.len())
            .map(|s| {
                let mut out = BTreeSet::new();
                for t in &live_terms[s] {
                    if t.args.is_empty() {
                        out.insert(Node::leaf(t.symbol));
                        continue;
                    }
                    let options: Vec<Vec<Node>> =
                        t.args.iter().map(|&a| level[a].iter().cloned().collect()).collect();
                    for children in product(&options) {
                        out.insert(Node::new(t.symbol, children));
                    }
                }
                out
            })
            .collect();
        level = next;
    }
    let mut out = BTreeSet::new();
    for s in starts {
        for node in &level[s] {
            out.insert(PrefixTree::new(&x.alphabet, k, Some(node.clone()))?);
        }
    }
    Ok(out)
}

fn indicator(b: bool) -> Prob {
    if b {
        Prob::one()
    } else {
        Prob::zero()
    }
}

/// Compares prefix languages from the initial states at every depth up to
/// `max_depth`, reporting the shallowest, then canonically least, gap.
pub fn tree_inclusion_upto(x: &System, y: &System, max_depth: usize) -> Result<InclusionReport> {
    same_alphabet(x, y)?;
    require(y, Monad::Powerset)?;
    for k in 0..=max_depth {
        let lx = prefix_lang(x, Start::Init, k)?;
        let ly = prefix_lang(y, Start::Init, k)?;
        if let Some(t) = lx.difference(&ly).next() {
            return Ok(InclusionReport::refuted(t.clone(), indicator(true), indicator(false), k));
        }
    }
    Ok(InclusionReport {
        verdict: Verdict::IncludedUpToDepth(max_depth),
        witness: None,
        depths_checked: max_depth,
    })
}

/// Decides inclusion of infinite-word languages from the initial states.
///
/// Explores pairs of a live `X` state and the set of live `Y` states reached
/// on the same prefix. Both systems are finitely branching, so a word all of
/// whose prefixes are matched has an infinite matching run (König), and the
/// pair graph is finite, so the search terminates. Levels are explored in
/// lexicographic order of their prefixes, so the first failure found is the
/// shortest and lexicographically least one.
pub fn word_inclusion_exact(x: &System, y: &System) -> Result<InclusionReport> {
    if !x.alphabet.word_mode() || !y.alphabet.word_mode() {
        return Err(Error::NotWordMode);
    }
    same_alphabet(x, y)?;
    let cx = powerset_terms(x)?;
    let dy = powerset_terms(y)?;
    let live_x = live_from_terms(&cx);
    let live_y = live_from_terms(&dy);
    let alphabet = &x.alphabet;
    let fail = |word: Vec<Symbol>, depth: usize| -> Result<InclusionReport> {
        let tree = PrefixTree::from_word(alphabet, &word)?;
        Ok(InclusionReport::refuted(tree, indicator(true), indicator(false), depth))
    };

    let xs: BTreeSet<usize> = start_states(x, Start::Init).into_iter().filter(|&s| live_x[s]).collect();
    let m0: BTreeSet<usize> = start_states(y, Start::Init).into_iter().filter(|&s| live_y[s]).collect();
    if xs.is_empty() {
        return Ok(InclusionReport {
            verdict: Verdict::Included,
            witness: None,
            depths_checked: 0,
        });
    }
    if m0.is_empty() {
        return fail(Vec::new(), 0);
    }

    let mut seen: HashSet<(usize, BTreeSet<usize>)> = HashSet::new();
    let mut frontier: VecDeque<(usize, BTreeSet<usize>, Vec<Symbol>)> = VecDeque::new();
    for &s in &xs {
        if seen.insert((s, m0.clone())) {
            frontier.push_back((s, m0.clone(), Vec::new()));
        }
    }
    let mut depth = 0;
    while !frontier.is_empty() {
        depth += 1;
        // gather the successors of the whole level, sorted by prefix
        let mut moves: Vec<(Vec<Symbol>, usize, Option<BTreeSet<usize>>)> = Vec::new();
        for (xs, m, word) in frontier.drain(..) {
            for t in &cx[xs] {
                let mut w = word.clone();
                w.push(t.symbol);
                match t.args.first() {
                    None => {
                        let ok = m.iter().any(|&yi| dy[yi].iter().any(|u| u.symbol == t.symbol));
                        moves.push((w, usize::MAX, ok.then(BTreeSet::new)));
                    }
                    Some(&xn) if live_x[xn] => {
                        let next: BTreeSet<usize> = m
                            .iter()
                            .flat_map(|&yi| dy[yi].iter())
                            .filter(|u| u.symbol == t.symbol && live_y[u.args[0]])
                            .map(|u| u.args[0])
                            .collect();
                        let next = (!next.is_empty()).then_some(next);
                        moves.push((w, xn, next));
                    }
                    Some(_) => {}
                }
            }
        }
        moves.sort_by(|a, b| a.0.cmp(&b.0));
        if let Some((w, _, _)) = moves.iter().find(|mv| mv.2.is_none()) {
            return fail(w.clone(), depth);
        }
        for (w, xn, m) in moves {
            if xn == usize::MAX {
                continue;
            }
            let m = m.expect("checked above");
            if seen.insert((xn, m.clone())) {
                frontier.push_back((xn, m, w));
            }
        }
    }
    Ok(InclusionReport {
        verdict: Verdict::Included,
        witness: None,
        depths_checked: depth,
    })
}

/// The label-forgetting skeleton of a probabilistic system. Type `n` (the
/// number of states) is the absorbing `⊥`.
#[derive(Clone, Debug, PartialEq)]
pub struct BranchingProcess {
    n: usize,
    rows: Vec<BTreeMap<Vec<usize>, Weight>>,
}

impl BranchingProcess {
    pub fn bottom(&self) -> usize {
        self.n
    }

    pub fn states(&self) -> usize {
        self.n
    }

    /// Offspring distribution of a type; every row has mass one.
    pub fn row(&self, t: usize) -> &BTreeMap<Vec<usize>, Weight> {
        &self.rows[t]
    }

    /// `τ(t, population)`, zero when absent.
    pub fn weight(&self, t: usize, population: &[usize]) -> Weight {
        self.rows[t].get(population).cloned().unwrap_or_else(Weight::zero)
    }

    /// Builds a process from explicit rows for types `0..n`, padding each
    /// deficiency onto `⟨⊥⟩`.
    pub fn from_rows(rows: Vec<BTreeMap<Vec<usize>, Weight>>) -> Result<Self> {
        let n = rows.len();
        let mut out = Vec::with_capacity(n + 1);
        for (t, mut row) in rows.into_iter().enumerate() {
            row.retain(|_, w| !w.is_zero());
            if row.keys().flatten().any(|&c| c > n) {
                return Err(Error::UnknownState(format!("type {t} has an unknown child")));
            }
            let mass: Weight = row.values().sum();
            if mass > Weight::one() {
                return Err(Error::RowSumExceedsOne(format!("type {t}")));
            }
            let deficiency = Weight::one() - mass;
            if !deficiency.is_zero() {
                *row.entry(vec![n]).or_insert_with(Weight::zero) += deficiency;
            }
            out.push(row);
        }
        out.push(BTreeMap::from([(vec![n], Weight::one())]));
        Ok(Self { n, rows: out })
    }
}

/// Forgets labels: `τ(x, ⟨x₀…⟩)` sums the transitions to terms with those
/// arguments, and any missing mass goes to `⟨⊥⟩`.
pub fn skeleton(x: &System) -> Result<BranchingProcess> {
    require(x, Monad::SubDist)?;
    let terms = x.term_space();
    let rows = x
        .subdist_trans()
        .expect("subdist")
        .iter()
        .map(|row| {
            let mut out: BTreeMap<Vec<usize>, Weight> = BTreeMap::new();
            for (&t, w) in row {
                *out.entry(terms.term(t).args).or_insert_with(Weight::zero) += w;
            }
            out
        })
        .collect();
    BranchingProcess::from_rows(rows)
}

/// Outcome of value iteration for the probability of never producing `⊥`.
#[derive(Clone, Debug, PartialEq)]
pub struct Survival {
    /// One value per state (the `⊥` type always survives with probability 0).
    pub valuation: Valuation,
    pub iterations: usize,
    pub converged: bool,
}

pub const DEFAULT_MAX_ITER: usize = 1_000_000;

/// Greatest fixed point of `P(v)_x = Σ_{α ∌ ⊥} τ(x,α)·∏ v_{αᵢ}`.
///
/// States from which no `⊥` mass is reachable get exactly 1, states that
/// cannot avoid `⊥` forever get exactly 0, and the rest are found by float
/// iteration from 1. Iteration stops once the last change is below `eps`
/// and the geometric tail bound estimated from the last two changes is also
/// below `eps`, or after `max_iter` rounds with `converged` cleared.
pub fn survival(bp: &BranchingProcess, eps: f64, max_iter: usize) -> Survival {
    let n = bp.n;
    let bot = n;
    let positive_rows = |x: usize| bp.rows[x].iter().filter(|(_, w)| !w.is_zero());

    // states that may reach ⊥ mass
    let mut leaky: Vec<bool> = (0..n).map(|x| !bp.weight(x, &[bot]).is_zero()).collect();
    loop {
        let mut changed = false;
        for x in 0..n {
            if !leaky[x] && positive_rows(x).any(|(a, _)| a.iter().any(|&c| c < n && leaky[c])) {
                leaky[x] = true;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    // states with a way to avoid ⊥ forever
    let mut viable = vec![true; n];
    loop {
        let mut changed = false;
        for x in 0..n {
            if viable[x] && !positive_rows(x).any(|(a, _)| a.iter().all(|&c| c < n && viable[c])) {
                viable[x] = false;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }

    let mut values: Vec<Option<Prob>> = (0..n)
        .map(|x| {
            if !leaky[x] {
                Some(Prob::one())
            } else if !viable[x] {
                Some(Prob::zero())
            } else {
                None
            }
        })
        .collect();
    let active: Vec<usize> = (0..n).filter(|&x| values[x].is_none()).collect();
    let mut iterations = 0;
    let mut converged = true;
    if !active.is_empty() {
        let frows: Vec<Vec<(Vec<usize>, f64)>> = (0..n)
            .map(|x| {
                positive_rows(x)
                    .filter(|(a, _)| !a.contains(&bot))
                    .map(|(a, w)| (a.clone(), w.to_f64().unwrap_or(0.0)))
                    .collect()
            })
            .collect();
        let mut v: Vec<f64> = (0..n)
            .map(|x| values[x].as_ref().map_or(1.0, Prob::to_f64))
            .collect();
        let mut prev_delta: Option<f64> = None;
        converged = false;
        while iterations < max_iter {
            iterations += 1;
            let next: Vec<f64> = active
                .iter()
                .map(|&x| {
                    let p: f64 = frows[x]
                        .iter()
                        .map(|(a, w)| w * a.iter().map(|&c| v[c]).product::<f64>())
                        .sum();
                    p.min(v[x])
                })
                .collect();
            let mut delta: f64 = 0.0;
            for (&x, nv) in active.iter().zip(next) {
                delta = delta.max(v[x] - nv);
                v[x] = nv;
            }
            let tail_ok = match prev_delta {
                _ if delta == 0.0 => true,
                Some(pd) if pd > 0.0 => {
                    let r = delta / pd;
                    r < 1.0 && delta * r / (1.0 - r) < eps
                }
                _ => false,
            };
            if delta < eps && tail_ok {
                converged = true;
                break;
            }
            prev_delta = Some(delta);
        }
        for &x in &active {
            values[x] = Some(Prob::Approx(v[x]));
        }
    }
    let values: Vec<Prob> = values.into_iter().map(|v| v.expect("every state set")).collect();
    Survival {
        valuation: Valuation::new(values, eps),
        iterations,
        converged,
    }
}

/// Values `f_s(node)` for every state `s`, where a frontier slot contributes
/// `base[s']` and a node `a(t⃗)` sums `c(s)(a, s⃗)·∏ f_{sᵢ}(tᵢ)`.
fn tree_values(sys: &System, node: &Node, levels: usize, base: &[Prob]) -> Vec<Prob> {
    let terms = sys.term_space();
    let arity = sys.alphabet.arity(node.symbol);
    let children: Vec<Vec<Prob>> = if levels == 1 || arity == 0 {
        vec![base.to_vec(); arity]
    } else {
        node.children
            .iter()
            .map(|c| tree_values(sys, c, levels - 1, base))
            .collect()
    };
    sys.subdist_trans()
        .expect("subdist")
        .iter()
        .map(|row| {
            let mut acc = Prob::zero();
            for (&t, w) in row {
                let term = terms.term(t);
                if term.symbol != node.symbol {
                    continue;
                }
                let mut p = Prob::Exact(w.clone());
                for (i, &a) in term.args.iter().enumerate() {
                    p = p.mul(&children[i][a]);
                }
                acc = acc.add(&p);
            }
            acc
        })
        .collect()
}

fn from_start(sys: &System, start: Start, per_state: &[Prob]) -> Prob {
    match start {
        Start::State(x) => per_state[x].clone(),
        Start::Init => sys.subdist_init().expect("subdist").iter().fold(Prob::zero(), |acc, (&x, w)| {
            acc.add(&per_state[x].scale(w))
        }),
    }
}

fn check_tree(sys: &System, t: &PrefixTree) -> Result<()> {
    PrefixTree::new(&sys.alphabet, t.depth(), t.root().cloned()).map(|_| ())
}

/// Cylinder measures of one probabilistic system, with survival computed once.
#[derive(Clone, Debug)]
pub struct CylinderOracle<'a> {
    sys: &'a System,
    survival: Survival,
}

impl<'a> CylinderOracle<'a> {
    pub fn new(sys: &'a System, eps: f64) -> Result<Self> {
        let survival = survival(&skeleton(sys)?, eps, DEFAULT_MAX_ITER);
        Ok(Self { sys, survival })
    }

    pub fn survival(&self) -> &Survival {
        &self.survival
    }

    /// `ν(t)`: the probability of generating an infinite tree extending `t`.
    pub fn prob(&self, start: Start, t: &PrefixTree) -> Prob {
        let base = &self.survival.valuation.values;
        match t.root() {
            None => from_start(self.sys, start, base),
            Some(node) => from_start(self.sys, start, &tree_values(self.sys, node, t.depth(), base)),
        }
    }
}

/// `ν(t)` from `start`; exact whenever survival resolved exactly.
pub fn cylinder_prob(x: &System, start: Start, t: &PrefixTree, eps: f64) -> Result<Prob> {
    check_tree(x, t)?;
    Ok(CylinderOracle::new(x, eps)?.prob(start, t))
}

/// `ξ(t)`: the probability of producing the finite prefix `t`, with no
/// survival requirement beyond its frontier.
pub fn subdist_tree_prob(x: &System, start: Start, t: &PrefixTree) -> Result<Weight> {
    require(x, Monad::SubDist)?;
    check_tree(x, t)?;
    let base = vec![Prob::one(); x.len()];
    let per_state = match t.root() {
        None => base,
        Some(node) => tree_values(x, node, t.depth(), &base),
    };
    match from_start(x, start, &per_state) {
        Prob::Exact(w) => Ok(w),
        Prob::Approx(_) => unreachable!("only rationals involved"),
    }
}

/// Checks `ν^X(t) ≤ ν^Y(t) + eps` on every cylinder of depth at most
/// `max_depth`. Cylinders of `X`-measure zero hold trivially and are not
/// extended. Each depth is evaluated with `exec`; the reported witness is
/// the canonically least failing cylinder of the shallowest failing depth.
pub fn prob_inclusion_upto(
    x: &System,
    y: &System,
    max_depth: usize,
    eps: f64,
    exec: Exec,
) -> Result<InclusionReport> {
    same_alphabet(x, y)?;
    require(x, Monad::SubDist)?;
    require(y, Monad::SubDist)?;
    let inner = eps / 1024.0;
    let ox = CylinderOracle::new(x, inner)?;
    let oy = CylinderOracle::new(y, inner)?;
    let mut level = vec![PrefixTree::empty()];
    for k in 0..=max_depth {
        if k > 0 {
            let mut next: Vec<PrefixTree> =
                level.iter().flat_map(|t| t.extensions(&x.alphabet)).collect();
            next.sort();
            level = next;
        }
        let evaluated = map_collect(exec, &level, |t| {
            let lhs = ox.prob(Start::Init, t);
            let rhs = oy.prob(Start::Init, t);
            let ok = lhs.le_within(&rhs, eps);
            (lhs, rhs, ok)
        });
        if let Some(i) = evaluated.iter().position(|e| !e.2) {
            let (lhs, rhs, _) = evaluated[i].clone();
            return Ok(InclusionReport::refuted(level[i].clone(), lhs, rhs, k));
        }
        level = level
            .into_iter()
            .zip(evaluated)
            .filter(|(_, (lhs, _, _))| lhs.to_f64() > 0.0)
            .map(|(t, _)| t)
            .collect();
        if level.is_empty() {
            break;
        }
    }
    Ok(InclusionReport {
        verdict: Verdict::IncludedUpToDepth(max_depth),
        witness: None,
        depths_checked: max_depth,
    })
}

/// The output of a deterministic exception-raising system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LiftOutput {
    Abort,
    Tree(PrefixTree),
}

/// Aborts if any state reachable from `from` aborts; otherwise returns the
/// depth-`k` prefix of the unique output tree.
pub fn lift_output(x: &System, from: usize, k: usize) -> Result<LiftOutput> {
    require(x, Monad::Lift)?;
    let rows = x.lift_trans().expect("lift");
    let terms = x.term_space();
    let mut seen = vec![false; x.len()];
    let mut stack = vec![from];
    seen[from] = true;
    while let Some(s) = stack.pop() {
        let Some(t) = rows[s] else {
            return Ok(LiftOutput::Abort);
        };
        for a in terms.term(t).args {
            if !seen[a] {
                seen[a] = true;
                stack.push(a);
            }
        }
    }
    fn build(x: &System, s: usize, levels: usize) -> Node {
        let term = x.term_space().term(x.lift_trans().expect("lift")[s].expect("no abort"));
        if levels == 1 {
            return Node::leaf(term.symbol);
        }
        Node::new(term.symbol, term.args.iter().map(|&a| build(x, a, levels - 1)).collect())
    }
    let root = (k > 0).then(|| build(x, from, k));
    Ok(LiftOutput::Tree(PrefixTree::new(&x.alphabet, k, root)?))
}

fn lift_output_from_init(x: &System, k: usize) -> Result<LiftOutput> {
    match x.lift_init().ok_or(Error::MonadMismatch {
        left: Monad::Lift,
        right: x.monad,
    })? {
        None => Ok(LiftOutput::Abort),
        Some(s) => lift_output(x, s, k),
    }
}

/// Output inclusion for exception-raising systems: an aborting `X` is below
/// everything; otherwise both outputs must agree on every depth up to
/// `max_depth`.
pub fn lift_inclusion_upto(x: &System, y: &System, max_depth: usize) -> Result<InclusionReport> {
    same_alphabet(x, y)?;
    let upto = InclusionReport {
        verdict: Verdict::IncludedUpToDepth(max_depth),
        witness: None,
        depths_checked: max_depth,
    };
    let LiftOutput::Tree(lhs) = lift_output_from_init(x, max_depth)? else {
        return Ok(upto);
    };
    let rhs = lift_output_from_init(y, max_depth)?;
    for k in 0..=max_depth {
        let ok = matches!(&rhs, LiftOutput::Tree(t) if t.truncate(k) == lhs.truncate(k));
        if !ok {
            return Ok(InclusionReport::refuted(lhs.truncate(k), indicator(true), indicator(false), k));
        }
    }
    Ok(upto)
}

/// Word-shaped trees print as their letters, others as terms.
pub fn render_tree(alphabet: &RankedAlphabet, t: &PrefixTree) -> String {
    if alphabet.word_mode() {
        if let Some(w) = t.word_string(alphabet) {
            if !w.is_empty() {
                return w;
            }
        }
    }
    t.display(alphabet).to_string()
}
