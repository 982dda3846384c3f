//! Randomized checks against independent oracles.

use std::sync::Arc;

use num_traits::{One, Zero};
use proptest::prelude::*;

use ktrace::random::{random_arrow, random_system, rng, state_space, tree_alphabet, word_alphabet};
use ktrace::*;

const MONADS: [Monad; 3] = [Monad::Powerset, Monad::SubDist, Monad::Lift];

/// Arrow as a rational matrix; set and partial-function rows become 0/1.
fn dense(f: &KleisliArrow) -> Vec<Vec<Weight>> {
    let (n, m) = (f.dom().len(), f.cod().len());
    let mut out = vec![vec![Weight::zero(); m]; n];
    for (i, row) in out.iter_mut().enumerate() {
        match f.rows() {
            Rows::Powerset(r) => r[i].iter().for_each(|&j| row[j] = Weight::one()),
            Rows::SubDist(r) => r[i].iter().for_each(|(&j, w)| row[j] = w.clone()),
            Rows::Lift(r) => r[i].iter().for_each(|&j| row[j] = Weight::one()),
        }
    }
    out
}

fn indicator(monad: Monad, m: Vec<Vec<Weight>>) -> Vec<Vec<Weight>> {
    if monad != Monad::Powerset {
        return m;
    }
    m.into_iter()
        .map(|r| r.into_iter().map(|w| if w.is_zero() { w } else { Weight::one() }).collect())
        .collect()
}

fn matmul(a: &[Vec<Weight>], b: &[Vec<Weight>], cols: usize) -> Vec<Vec<Weight>> {
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| row.iter().zip(b).map(|(x, brow)| x * &brow[j]).sum())
                .collect()
        })
        .collect()
}

/// Lifting computed entrywise: `(a, x⃗) ↦ (a, y⃗)` weighs `∏ M[xᵢ][yᵢ]`.
fn dense_lift(f: &KleisliArrow, alphabet: &RankedAlphabet) -> Vec<Vec<Weight>> {
    let m = dense(f);
    let dom = Space::terms(alphabet, f.dom());
    let cod = Space::terms(alphabet, f.cod());
    (0..dom.len())
        .map(|i| {
            let s = dom.term(i);
            (0..cod.len())
                .map(|j| {
                    let t = cod.term(j);
                    if s.symbol != t.symbol {
                        return Weight::zero();
                    }
                    s.args.iter().zip(&t.args).map(|(&x, &y)| m[x][y].clone()).product()
                })
                .collect()
        })
        .collect()
}

fn spaces(seed: u64) -> [Arc<Space>; 4] {
    let mut r = rng(seed);
    use rand::Rng;
    [
        state_space("p", r.random_range(1..=3)),
        state_space("q", r.random_range(1..=3)),
        state_space("r", r.random_range(1..=3)),
        state_space("s", r.random_range(0..=2)),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn compose_matches_matrix_product(seed in any::<u64>()) {
        let [a, b, c, _] = spaces(seed);
        let mut r = rng(seed ^ 1);
        for monad in MONADS {
            let f = random_arrow(&mut r, monad, &a, &b, 0.5);
            let g = random_arrow(&mut r, monad, &b, &c, 0.5);
            let expected = indicator(monad, matmul(&dense(&f), &dense(&g), c.len()));
            prop_assert_eq!(dense(&compose(&g, &f).unwrap()), expected);
        }
    }

    #[test]
    fn lift_matches_entrywise_product(seed in any::<u64>()) {
        let [a, b, _, _] = spaces(seed);
        let mut r = rng(seed ^ 2);
        let alpha = tree_alphabet();
        for monad in MONADS {
            let f = random_arrow(&mut r, monad, &a, &b, 0.5);
            let expected = indicator(monad, dense_lift(&f, &alpha));
            prop_assert_eq!(dense(&lift_f(&f, &alpha)), expected);
        }
    }

    #[test]
    fn category_and_functor_laws(seed in any::<u64>()) {
        let [a, b, c, d] = spaces(seed);
        let mut r = rng(seed ^ 3);
        let alpha = tree_alphabet();
        for monad in MONADS {
            let f = random_arrow(&mut r, monad, &a, &b, 0.5);
            let g = random_arrow(&mut r, monad, &b, &c, 0.5);
            let h = random_arrow(&mut r, monad, &c, &d, 0.5);
            let left = compose(&h, &compose(&g, &f).unwrap()).unwrap();
            let right = compose(&compose(&h, &g).unwrap(), &f).unwrap();
            prop_assert_eq!(dense(&left), dense(&right));
            let ia = KleisliArrow::identity(Arc::clone(&a), monad);
            let ib = KleisliArrow::identity(Arc::clone(&b), monad);
            prop_assert_eq!(&compose(&f, &ia).unwrap(), &f);
            prop_assert_eq!(&compose(&ib, &f).unwrap(), &f);
            let lifted = compose(&lift_f(&g, &alpha), &lift_f(&f, &alpha)).unwrap();
            prop_assert_eq!(dense(&lift_f(&compose(&g, &f).unwrap(), &alpha)), dense(&lifted));
            let lid = lift_f(&ia, &alpha);
            prop_assert_eq!(dense(&lid), dense(&KleisliArrow::identity(Arc::clone(lid.dom()), monad)));
        }
    }

    #[test]
    fn composition_and_lifting_are_monotone(seed in any::<u64>()) {
        let [a, b, c, _] = spaces(seed);
        let mut r = rng(seed ^ 4);
        let alpha = tree_alphabet();
        for monad in MONADS {
            let f1 = random_arrow(&mut r, monad, &a, &b, 0.4);
            let g = random_arrow(&mut r, monad, &b, &c, 0.5);
            // enlarge f1 pointwise
            let f2 = match f1.rows() {
                Rows::Powerset(rows) => {
                    let extra = random_arrow(&mut r, monad, &a, &b, 0.4);
                    let Rows::Powerset(more) = extra.rows() else { unreachable!() };
                    let rows = rows.iter().zip(more).map(|(s, t)| s | t).collect();
                    KleisliArrow::new(Arc::clone(&a), Arc::clone(&b), Rows::Powerset(rows)).unwrap()
                }
                Rows::SubDist(rows) => {
                    let rows = rows.iter().map(|row| {
                        let mut row = row.clone();
                        let gap = Weight::one() - row.values().sum::<Weight>();
                        *row.entry(0).or_insert_with(Weight::zero) += gap;
                        row
                    }).collect();
                    KleisliArrow::new(Arc::clone(&a), Arc::clone(&b), Rows::SubDist(rows)).unwrap()
                }
                Rows::Lift(rows) => {
                    let rows = rows.iter().map(|v| v.or(Some(0))).collect();
                    KleisliArrow::new(Arc::clone(&a), Arc::clone(&b), Rows::Lift(rows)).unwrap()
                }
            };
            prop_assert_eq!(leq(&f1, &f2).unwrap(), None);
            prop_assert_eq!(leq(&compose(&g, &f1).unwrap(), &compose(&g, &f2).unwrap()).unwrap(), None);
            let h = random_arrow(&mut r, monad, &c, &a, 0.5);
            prop_assert_eq!(leq(&compose(&f1, &h).unwrap(), &compose(&f2, &h).unwrap()).unwrap(), None);
            prop_assert_eq!(leq(&lift_f(&f1, &alpha), &lift_f(&f2, &alpha)).unwrap(), None);
        }
    }
}

/// Relations `Y ⇸ X` encoded as bitmasks over the `(y, x)` grid.
fn relation(dom: &Arc<Space>, cod: &Arc<Space>, mask: u64) -> KleisliArrow {
    let rows = (0..dom.len())
        .map(|i| (0..cod.len()).filter(|&j| mask >> (i * cod.len() + j) & 1 == 1).collect())
        .collect();
    KleisliArrow::new(Arc::clone(dom), Arc::clone(cod), Rows::Powerset(rows)).unwrap()
}

fn small_pair(seed: u64, max: usize) -> (System, System) {
    use rand::Rng;
    let mut r = rng(seed);
    let alpha = word_alphabet(2);
    let nx = r.random_range(1..=max);
    let ny = r.random_range(1..=max);
    let dx = r.random_range(0.2..0.6);
    let dy = r.random_range(0.2..0.6);
    let x = random_system(&mut r, Monad::Powerset, &alpha, "x", nx, dx, false);
    let y = random_system(&mut r, Monad::Powerset, &alpha, "y", ny, dy, false);
    (x, y)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn forward_search_matches_enumeration(seed in any::<u64>()) {
        let (x, y) = small_pair(seed, 3);
        let bits = x.len() * y.len();
        let mut union = 0u64;
        let mut any_sim = false;
        for mask in 0..(1u64 << bits) {
            let f = relation(&y.states, &x.states, mask);
            let report = check_fwd(&x, &y, &f).unwrap();
            if report.violations.iter().all(|v| v.condition != "step") {
                union |= mask;
                any_sim |= report.verdict;
            }
        }
        match find_fwd_rel(&x, &y).unwrap() {
            Some(f) => {
                prop_assert!(any_sim);
                prop_assert_eq!(f, relation(&y.states, &x.states, union));
            }
            None => prop_assert!(!any_sim),
        }
    }

    #[test]
    fn backward_search_matches_enumeration(seed in any::<u64>(), total in any::<bool>()) {
        let (x, y) = small_pair(seed, 3);
        let bits = x.len() * y.len();
        let mut masks: Vec<u64> = (0..(1u64 << bits)).collect();
        let key = |m: &u64| {
            let ones: Vec<u32> = (0..bits as u32).filter(|&b| m >> b & 1 == 1).collect();
            (m.count_ones(), ones)
        };
        masks.sort_by_key(key);
        let require = RestrictionFlags { total, image_finite: total };
        let expected = masks.into_iter().map(|m| relation(&x.states, &y.states, m)).find(|b| {
            check_bwd(&x, &y, b).unwrap().verdict && check_restrictions(b).satisfies(require)
        });
        for exec in [Exec::Sequential, Exec::Parallel] {
            let found = find_bwd_bruteforce(&x, &y, require, 1 << 20, exec).unwrap();
            prop_assert_eq!(&found, &expected);
        }
    }

    #[test]
    fn simulations_imply_word_inclusion(seed in any::<u64>()) {
        let (x, y) = small_pair(seed, 4);
        let included = word_inclusion_exact(&x, &y).unwrap().verdict == Verdict::Included;
        if find_fwd_rel(&x, &y).unwrap().is_some() {
            prop_assert!(included);
        }
        let tif = RestrictionFlags { total: true, image_finite: true };
        if find_bwd_bruteforce(&x, &y, tif, 1 << 16, Exec::Parallel).unwrap().is_some() {
            prop_assert!(included);
        }
    }

    #[test]
    fn exact_word_inclusion_agrees_with_bounded(seed in any::<u64>()) {
        let (x, y) = small_pair(seed, 2);
        let bound = x.len() * (1 << y.len()) + 1;
        let exact = word_inclusion_exact(&x, &y).unwrap();
        let bounded = tree_inclusion_upto(&x, &y, bound).unwrap();
        prop_assert_eq!(exact.holds(), bounded.holds());
        prop_assert_eq!(
            exact.witness.map(|w| w.tree),
            bounded.witness.map(|w| w.tree)
        );
    }

    #[test]
    fn prefix_languages_truncate(seed in any::<u64>(), k in 0usize..4) {
        use rand::Rng;
        let mut r = rng(seed);
        let n = r.random_range(1..=3);
        let x = random_system(&mut r, Monad::Powerset, &tree_alphabet(), "x", n, 0.15, false);
        let deeper = prefix_lang(&x, Start::Init, k + 1).unwrap();
        let cut: std::collections::BTreeSet<_> = deeper.iter().map(|t| t.truncate(k)).collect();
        prop_assert_eq!(cut, prefix_lang(&x, Start::Init, k).unwrap());
    }

    #[test]
    fn fpe_preserves_and_transports(seed in any::<u64>()) {
        let (x, y) = small_pair(seed, 3);
        let u = apply_fpe(&x);
        for k in 0..=5 {
            prop_assert_eq!(prefix_lang(&x, Start::Init, k).unwrap(), prefix_lang(&u, Start::Init, k).unwrap());
        }
        if find_fwd_rel(&x, &y).unwrap().is_some() {
            prop_assert!(find_fwd_rel(&u, &y).unwrap().is_some());
        }
        if let Some(f) = find_fwd_rel(&y, &x).unwrap() {
            let g = fwd_adequacy_witness(&y, &f).unwrap();
            prop_assert!(check_fwd(&apply_fpe(&y), &x, &g).unwrap().verdict);
        }
    }
}

fn random_prob(seed: u64, stochastic: bool, alpha: &RankedAlphabet) -> System {
    use rand::Rng;
    let mut r = rng(seed);
    let n = r.random_range(1..=3);
    random_system(&mut r, Monad::SubDist, alpha, "x", n, 0.0, stochastic)
}

/// Trees of positive measure up to `depth`, level by level.
fn support(o: &CylinderOracle, alpha: &RankedAlphabet, depth: usize) -> Vec<PrefixTree> {
    let mut level = vec![PrefixTree::empty()];
    let mut out = level.clone();
    for _ in 0..depth {
        level = level
            .iter()
            .flat_map(|t| t.extensions(alpha))
            .filter(|t| o.prob(Start::Init, t).to_f64() > 0.0)
            .collect();
        out.extend(level.iter().cloned());
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn cylinders_are_consistent(seed in any::<u64>(), words in any::<bool>()) {
        let alpha = if words { word_alphabet(2) } else { tree_alphabet() };
        let x = random_prob(seed, true, &alpha);
        let o = CylinderOracle::new(&x, 1e-9).unwrap();
        for t in support(&o, &alpha, 3) {
            let total = t.extensions(&alpha).iter().fold(Prob::zero(), |acc, s| acc.add(&o.prob(Start::Init, s)));
            let own = o.prob(Start::Init, &t);
            prop_assert!(own.is_exact());
            prop_assert_eq!(total, own);
        }
    }

    #[test]
    fn leaky_cylinders_are_consistent_within_tolerance(seed in any::<u64>()) {
        let alpha = word_alphabet(2);
        let x = random_prob(seed, false, &alpha);
        let eps = 1e-9;
        let o = CylinderOracle::new(&x, eps).unwrap();
        for t in support(&o, &alpha, 3) {
            let total: f64 = t.extensions(&alpha).iter().map(|s| o.prob(Start::Init, s).to_f64()).sum();
            prop_assert!((total - o.prob(Start::Init, &t).to_f64()).abs() <= 10.0 * eps);
        }
    }

    #[test]
    fn fpe_preserves_cylinders(seed in any::<u64>(), stochastic in any::<bool>()) {
        let alpha = word_alphabet(2);
        let x = random_prob(seed, stochastic, &alpha);
        let u = apply_fpe(&x);
        let (ox, ou) = (CylinderOracle::new(&x, 1e-12).unwrap(), CylinderOracle::new(&u, 1e-12).unwrap());
        for t in support(&ox, &alpha, 3) {
            let (a, b) = (ox.prob(Start::Init, &t), ou.prob(Start::Init, &t));
            if stochastic {
                prop_assert_eq!(a, b);
            } else {
                prop_assert!((a.to_f64() - b.to_f64()).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn survival_drops_with_more_bottom_mass(seed in any::<u64>()) {
        use rand::Rng;
        let alpha = word_alphabet(2);
        let x = random_prob(seed, false, &alpha);
        let bp = skeleton(&x).unwrap();
        let mut r = rng(seed ^ 9);
        let victim = r.random_range(0..x.len());
        let rows = (0..x.len())
            .map(|s| {
                let mut row = bp.row(s).clone();
                row.remove(&vec![bp.bottom()]);
                if s == victim {
                    row.values_mut().for_each(|w| *w = &*w * ratio(1, 2));
                }
                row
            })
            .collect();
        let leaner = BranchingProcess::from_rows(rows).unwrap();
        let before = survival(&bp, 1e-12, 1_000_000);
        let after = survival(&leaner, 1e-12, 1_000_000);
        for s in 0..x.len() {
            prop_assert!(after.valuation.get(s).le_within(before.valuation.get(s), 1e-9));
        }
    }

    #[test]
    fn xi_decreases_with_depth(seed in any::<u64>()) {
        let alpha = tree_alphabet();
        let x = random_prob(seed, false, &alpha);
        let trees = prefix_trees(&alpha, 3);
        for t in trees.iter().step_by(7) {
            for k in 0..3 {
                let shallow = subdist_tree_prob(&x, Start::Init, &t.truncate(k)).unwrap();
                let deep = subdist_tree_prob(&x, Start::Init, &t.truncate(k + 1)).unwrap();
                prop_assert!(deep <= shallow);
            }
        }
    }

    #[test]
    fn probabilistic_inclusion_is_schedule_independent(seed in any::<u64>()) {
        let alpha = word_alphabet(2);
        let x = random_prob(seed, false, &alpha);
        let y = random_prob(seed ^ 5, false, &alpha);
        let a = prob_inclusion_upto(&x, &y, 3, 1e-9, Exec::Sequential).unwrap();
        let b = prob_inclusion_upto(&x, &y, 3, 1e-9, Exec::Parallel).unwrap();
        prop_assert_eq!(a, b);
    }
}
