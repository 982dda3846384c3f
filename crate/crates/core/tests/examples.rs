use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use ktrace::corpus::system;
use ktrace::*;

fn tree(sys: &System, text: &str) -> PrefixTree {
    parse_tree(&sys.alphabet, text, None).unwrap()
}

fn word(sys: &System, report: &InclusionReport) -> String {
    report.witness.as_ref().unwrap().tree.word_string(&sys.alphabet).unwrap()
}

fn powerset(dom: &Arc<Space>, cod: &Arc<Space>, rows: &[&[&str]]) -> KleisliArrow {
    let rows = rows
        .iter()
        .map(|r| r.iter().map(|n| cod.position(n).unwrap()).collect())
        .collect();
    KleisliArrow::new(Arc::clone(dom), Arc::clone(cod), Rows::Powerset(rows)).unwrap()
}

fn identity(x: &System) -> KleisliArrow {
    KleisliArrow::identity(Arc::clone(&x.states), x.monad)
}

// ---- simulations ----

#[test]
fn identity_simulates_both_ways() {
    for name in ["fig1_X.sys", "fig1_Z.sys", "a22_X.sys", "a23_Y.sys"] {
        let x = system(name).unwrap();
        assert!(check_fwd(&x, &x, &identity(&x)).unwrap().verdict, "{name}");
        assert!(check_bwd(&x, &x, &identity(&x)).unwrap().verdict, "{name}");
        let flags = check_restrictions(&identity(&x));
        assert!(flags.total && flags.image_finite);
    }
}

#[test]
fn fig1_forward_candidate_fails_at_y0() {
    let x = system("fig1_X.sys").unwrap();
    let y = system("fig1_Y.sys").unwrap();
    let f = powerset(&y.states, &x.states, &[&["x0"], &["y"]]);
    let report = check_fwd(&x, &y, &f).unwrap();
    assert!(!report.verdict);
    assert_eq!(report.violations.len(), 1);
    let v = &report.violations[0];
    assert_eq!((v.condition, v.at.as_str()), ("step", "y0"));
    assert_eq!(v.lhs, "{(a,z),(b,y)}");
    assert_eq!(v.rhs, "{(a,x0),(b,y)}");
}

#[test]
fn empty_forward_arrow_fails_init() {
    let x = system("a23_X.sys").unwrap();
    let y = system("a23_Y.sys").unwrap();
    let f = KleisliArrow::bottom(Arc::clone(&y.states), Arc::clone(&x.states), Monad::Powerset);
    let report = check_fwd(&x, &y, &f).unwrap();
    assert!(report.violations.iter().any(|v| v.condition == "init" && v.at == "*"));
}

#[test]
fn a22_witness_is_a_partial_backward_simulation() {
    let x = system("a22_X.sys").unwrap();
    let y = system("a22_Y.sys").unwrap();
    let (dir, b) = parse_witness(corpus::text("a22_b.wit").unwrap(), &x, &y).unwrap();
    assert_eq!(dir, Direction::Backward);
    assert!(check_bwd(&x, &y, &b).unwrap().verdict);
    assert!(!check_restrictions(&b).total);

    let bad = powerset(&x.states, &y.states, &[&["y1"], &["y0"], &["y1"]]);
    let report = check_bwd(&x, &y, &bad).unwrap();
    assert!(!report.verdict);
    assert!(report.violations.iter().any(|v| v.at == "x2" && v.lhs.contains("(a,y1)")));
}

#[test]
fn subdist_half_row_is_not_total() {
    let dom = Space::states(["x"]).unwrap();
    let cod = Space::states(["y"]).unwrap();
    let b = KleisliArrow::new(dom, cod, Rows::SubDist(vec![BTreeMap::from([(0, ratio(1, 2))])])).unwrap();
    assert!(!check_restrictions(&b).total);
}

#[test]
fn forward_search() {
    let x = system("fig1_X.sys").unwrap();
    let r = find_fwd_rel(&x, &x).unwrap().unwrap();
    let Rows::Powerset(rows) = r.rows() else { unreachable!() };
    assert!((0..x.len()).all(|i| rows[i].contains(&i)));
    assert!(check_fwd(&x, &x, &r).unwrap().verdict);

    assert!(find_fwd_rel(&x, &system("fig1_Y.sys").unwrap()).unwrap().is_none());
    let (ax, ay) = (system("a23_X.sys").unwrap(), system("a23_Y.sys").unwrap());
    assert!(find_fwd_rel(&ax, &ay).unwrap().is_none());
    assert!(matches!(
        find_fwd_rel(&system("fig1_Z.sys").unwrap(), &system("fig1_W.sys").unwrap()),
        Err(Error::MonadMismatch { .. })
    ));
}

#[test]
fn backward_search() {
    let tif = RestrictionFlags { total: true, image_finite: true };
    let total = RestrictionFlags { total: true, image_finite: false };
    let (ax, ay) = (system("a23_X.sys").unwrap(), system("a23_Y.sys").unwrap());
    for exec in [Exec::Sequential, Exec::Parallel] {
        let b = find_bwd_bruteforce(&ax, &ay, tif, 1 << 20, exec).unwrap().unwrap();
        assert!(check_bwd(&ax, &ay, &b).unwrap().verdict);
        assert!(check_restrictions(&b).total);
    }
    let (x, y) = (system("a22_X.sys").unwrap(), system("a22_Y.sys").unwrap());
    assert!(find_bwd_bruteforce(&x, &y, total, 1 << 20, Exec::Parallel).unwrap().is_none());
    assert!(find_bwd_bruteforce(&x, &y, RestrictionFlags::NONE, 1 << 20, Exec::Parallel)
        .unwrap()
        .is_some());

    let b = find_bwd_bruteforce(&x, &x, RestrictionFlags::NONE, 1 << 20, Exec::Parallel)
        .unwrap()
        .unwrap();
    assert!(check_bwd(&x, &x, &b).unwrap().verdict);
    let b = find_bwd_bruteforce(&x, &x, tif, 1 << 20, Exec::Parallel).unwrap().unwrap();
    assert_eq!(b, identity(&x));
    assert!(matches!(
        find_bwd_bruteforce(&x, &y, tif, 16, Exec::Parallel),
        Err(Error::BudgetExceeded { needed: 64, budget: 16 })
    ));
}

// ---- forward partial execution ----

#[test]
fn fpe_state_count() {
    for name in ["fig1_X.sys", "fig1_Z.sys", "a23_Y.sys"] {
        let x = system(name).unwrap();
        let expected: usize = x.alphabet.entries().map(|(_, a)| x.len().pow(a as u32)).sum();
        assert_eq!(apply_fpe(&x).len(), expected);
    }
}

#[test]
fn fpe_transports_forward_simulations() {
    let x = system("a23_Y.sys").unwrap();
    let f = find_fwd_rel(&x, &x).unwrap().unwrap();
    let g = fwd_adequacy_witness(&x, &f).unwrap();
    assert!(check_fwd(&apply_fpe(&x), &x, &g).unwrap().verdict);
    for name in ["fig1_W.sys", "fig1_Z.sys", "a22_Y.sys"] {
        assert!(bwd_adequacy_preconditions(&system(name).unwrap()), "{name}");
    }
    let leaky = parse_system(
        r#"{"monad": "subdist", "alphabet": [{"symbol": "a", "arity": 1}],
            "states": ["x"], "init": {"x": "1/1"},
            "trans": {"x": [{"term": ["a", "x"], "p": "1/2"}]}}"#,
    )
    .unwrap();
    assert!(!bwd_adequacy_preconditions(&leaky));
}

// ---- semantics ----

#[test]
fn liveness() {
    let x = system("fig1_X.sys").unwrap();
    assert_eq!(live_states(&x).unwrap(), BTreeSet::from([0, 1, 2]));
    let a22 = system("a22_X.sys").unwrap();
    assert_eq!(live_states(&a22).unwrap().len(), 3);
    let dead = parse_system(
        r#"{"monad": "powerset", "alphabet": [{"symbol": "a", "arity": 1}],
            "states": ["x"], "init": ["x"], "trans": {"x": []}}"#,
    )
    .unwrap();
    assert!(live_states(&dead).unwrap().is_empty());
    assert!(prefix_lang(&dead, Start::Init, 2).unwrap().is_empty());
}

#[test]
fn fig1_prefix_languages() {
    let x = system("fig1_X.sys").unwrap();
    let show = |k| -> Vec<String> {
        prefix_lang(&x, Start::Init, k)
            .unwrap()
            .iter()
            .map(|t| t.display(&x.alphabet).to_string())
            .collect()
    };
    assert_eq!(show(1), ["a", "b"]);
    assert_eq!(show(2), ["a(b)", "b(✓)"]);
}

#[test]
fn fig1_word_inclusion() {
    let x = system("fig1_X.sys").unwrap();
    let y = system("fig1_Y.sys").unwrap();
    let r = word_inclusion_exact(&x, &y).unwrap();
    assert_eq!(r.verdict, Verdict::NotIncluded);
    assert_eq!(word(&x, &r), "abb");
    let r = word_inclusion_exact(&y, &x).unwrap();
    assert_eq!(word(&x, &r), "aa");
    assert_eq!(word_inclusion_exact(&x, &x).unwrap().verdict, Verdict::Included);

    let r = tree_inclusion_upto(&x, &y, 3).unwrap();
    assert_eq!(r.witness.unwrap().tree, tree(&x, "a(b(b))"));
    assert!(tree_inclusion_upto(&x, &y, 1).unwrap().holds());
    assert!(tree_inclusion_upto(&y, &x, 1).unwrap().holds());
}

#[test]
fn a22_and_a23_word_inclusion() {
    let (x, y) = (system("a22_X.sys").unwrap(), system("a22_Y.sys").unwrap());
    let r = word_inclusion_exact(&x, &y).unwrap();
    assert_eq!(word(&x, &r), "aa");
    let (x, y) = (system("a23_X.sys").unwrap(), system("a23_Y.sys").unwrap());
    assert_eq!(word_inclusion_exact(&x, &y).unwrap().verdict, Verdict::Included);
    assert_eq!(word_inclusion_exact(&y, &x).unwrap().verdict, Verdict::Included);
}

#[test]
fn word_inclusion_rejects_trees() {
    let g = parse_system(
        r#"{"monad": "powerset", "alphabet": [{"symbol": "g", "arity": 2}],
            "states": ["x"], "init": ["x"], "trans": {"x": [["g", "x", "x"]]}}"#,
    )
    .unwrap();
    assert!(matches!(word_inclusion_exact(&g, &g), Err(Error::NotWordMode)));
    assert_eq!(tree_inclusion_upto(&g, &g, 4).unwrap().verdict, Verdict::IncludedUpToDepth(4));
    let x = system("fig1_X.sys").unwrap();
    assert!(matches!(word_inclusion_exact(&x, &system("a23_X.sys").unwrap()), Err(Error::AlphabetMismatch)));
}

#[test]
fn extra_transitions_enlarge_tree_languages() {
    let x = parse_system(
        r#"{"monad": "powerset",
            "alphabet": [{"symbol": "✓", "arity": 0}, {"symbol": "g", "arity": 2}],
            "states": ["x", "y"], "init": ["x"],
            "trans": {"x": [["g", "x", "y"]], "y": [["✓"]]}}"#,
    )
    .unwrap();
    let bigger = parse_system(
        r#"{"monad": "powerset",
            "alphabet": [{"symbol": "✓", "arity": 0}, {"symbol": "g", "arity": 2}],
            "states": ["x", "y"], "init": ["x"],
            "trans": {"x": [["g", "x", "y"], ["g", "y", "x"]], "y": [["✓"], ["g", "y", "y"]]}}"#,
    )
    .unwrap();
    assert_eq!(tree_inclusion_upto(&x, &bigger, 3).unwrap().verdict, Verdict::IncludedUpToDepth(3));
    assert!(!tree_inclusion_upto(&bigger, &x, 3).unwrap().holds());
}

#[test]
fn fig1_skeleton() {
    let z = system("fig1_Z.sys").unwrap();
    let bp = skeleton(&z).unwrap();
    let (x, zz, y) = (0, 1, 2);
    assert_eq!(bp.weight(x, &[zz]), ratio(2, 3));
    assert_eq!(bp.weight(x, &[y]), ratio(1, 3));
    assert_eq!(bp.weight(y, &[y]), ratio(1, 2));
    assert_eq!(bp.weight(y, &[]), ratio(1, 2));
    for s in 0..3 {
        assert_eq!(bp.weight(s, &[bp.bottom()]), ratio(0, 1));
    }
    let s = survival(&bp, 1e-9, 100);
    assert!(s.valuation.values.iter().all(|v| *v == Prob::one()));
}

#[test]
fn fig1_cylinders() {
    let z = system("fig1_Z.sys").unwrap();
    let w = system("fig1_W.sys").unwrap();
    let p = |s: &System, t: &str| cylinder_prob(s, Start::Init, &tree(s, t), 1e-9).unwrap();
    let words = ["b(✓)", "b(a(✓))", "b(a(a(✓)))"];
    for (t, (zv, wv)) in words.iter().zip([((1, 6), (1, 2)), ((1, 12), (1, 4)), ((1, 24), (1, 8))]) {
        assert_eq!(p(&z, t), Prob::Exact(ratio(zv.0, zv.1)));
        assert_eq!(p(&w, t), Prob::Exact(ratio(wv.0, wv.1)));
    }
    assert_eq!(p(&z, "a"), Prob::Exact(ratio(2, 3)));
    assert_eq!(p(&w, "a"), Prob::zero());

    let r = prob_inclusion_upto(&z, &w, 1, 1e-9, Exec::Parallel).unwrap();
    let wit = r.witness.unwrap();
    assert_eq!(wit.tree, tree(&z, "a"));
    assert_eq!((wit.lhs, wit.rhs), (Prob::Exact(ratio(2, 3)), Prob::zero()));
    assert_eq!(
        prob_inclusion_upto(&w, &w, 3, 1e-9, Exec::Sequential).unwrap().verdict,
        Verdict::IncludedUpToDepth(3)
    );
}

#[test]
fn xi_basics() {
    let z = system("fig1_Z.sys").unwrap();
    assert_eq!(subdist_tree_prob(&z, Start::Init, &PrefixTree::empty()).unwrap(), ratio(1, 1));
    let w = system("fig1_W.sys").unwrap();
    // x always emits b first
    assert_eq!(subdist_tree_prob(&w, Start::State(0), &tree(&w, "b(a)")).unwrap(), ratio(1, 2));
    assert_eq!(subdist_tree_prob(&w, Start::State(0), &tree(&w, "a")).unwrap(), ratio(0, 1));
}
