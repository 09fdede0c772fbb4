use super::*;
use crate::graph::build_graph;
use crate::sdp::extract_sdps;
use crate::term::Position;

macro_rules! fixture {
    ($name:literal) => {
        include_str!(concat!(
            env!("CARGO_MANIFEST_DIR"),
            "/../../problems/",
            $name
        ))
    };
}

fn setup(text: &str) -> (Hrs, DependencyGraph) {
    let hrs = Hrs::parse(text).unwrap();
    let graph = build_graph(extract_sdps(&hrs));
    (hrs, graph)
}

fn pos(s: &str) -> Position {
    s.parse().unwrap()
}

fn pi(entries: &[(&str, &str)]) -> PiAssignment {
    entries
        .iter()
        .map(|(f, p)| (Name::from(*f), pos(p)))
        .collect()
}

fn members<'a>(graph: &'a DependencyGraph, component: &[usize]) -> Vec<&'a DependencyPair> {
    component.iter().map(|&i| &graph.pairs[i]).collect()
}

fn component_of<'a>(graph: &'a DependencyGraph, head: &str) -> Vec<&'a DependencyPair> {
    let c = graph
        .recursion_components()
        .into_iter()
        .find(|c| graph.pairs[c[0]].lhs_head().as_ref() == head)
        .unwrap();
    members(graph, &c)
}

#[test]
fn sqsum_components_accept_the_reference_projection() {
    let (hrs, graph) = setup(fixture!("sqsum.hrs"));
    let pi = pi(&[("foldl", "3"), ("add", "1"), ("mul", "1")]);
    for c in graph.recursion_components() {
        let pairs = members(&graph, &c);
        let v = check_subterm_criterion(&hrs, &pairs, &pi).unwrap();
        assert_eq!(v.strict, (0..pairs.len()).collect::<Vec<_>>());
        assert!(v.weak.is_empty());
    }
}

#[test]
fn second_argument_of_add_is_only_weak() {
    let (hrs, graph) = setup(fixture!("sqsum.hrs"));
    let pairs = component_of(&graph, "add#");
    let err = check_subterm_criterion(&hrs, &pairs, &pi(&[("add", "2")])).unwrap_err();
    assert_eq!(err, SubtermFailure::NoStrictPair);
}

#[test]
fn search_at_depth_one() {
    let (hrs, graph) = setup(fixture!("sqsum.hrs"));
    for (head, want) in [("foldl#", "3"), ("add#", "1"), ("mul#", "1")] {
        let pairs = component_of(&graph, head);
        let v = search_pi(&hrs, &pairs, 1).unwrap();
        assert_eq!(v.pi.values().next().unwrap(), &pos(want), "{head}");
        assert!(check_subterm_criterion(&hrs, &pairs, &v.pi).is_ok());
    }
}

#[test]
fn identical_projections_are_not_found() {
    let (hrs, graph) = setup(fixture!("swap.hrs"));
    let pairs = members(&graph, &graph.recursion_components()[0]);
    assert_eq!(search_pi(&hrs, &pairs, 3), None);
}

#[test]
fn missing_projection_is_reported() {
    let (hrs, graph) = setup(fixture!("addmul.hrs"));
    let pairs = component_of(&graph, "add#");
    let err = check_subterm_criterion(&hrs, &pairs, &PiAssignment::new()).unwrap_err();
    assert!(matches!(err, SubtermFailure::MissingProjection { .. }));
}

#[test]
fn lhs_path_through_free_variable_is_rejected() {
    // the top of \x y. F(x, y) at position 1 is F, free in the lhs
    let (hrs, graph) = setup(fixture!("foldl.hrs"));
    let pairs = component_of(&graph, "foldl#");
    let err = check_subterm_criterion(&hrs, &pairs, &pi(&[("foldl", "1.1.1.1")])).unwrap_err();
    assert!(
        matches!(&err, SubtermFailure::FreeVariableOnLhsPath { position, .. } if *position == pos("1")),
        "{err}"
    );
}

#[test]
fn path_order_orients_add_step() {
    let hrs = Hrs::parse(fixture!("addmul.hrs")).unwrap();
    let lpo = Lpo::new(vec![Name::from("add"), Name::from("s")]);
    let r = hrs.rule("add_s").unwrap();
    assert!(lpo.gt(r.lhs(), r.rhs()));
    assert_eq!(lpo.compare(r.lhs(), r.rhs()), Orientation::Greater);
    let reversed = Lpo::new(vec![Name::from("s"), Name::from("add")]);
    assert!(!reversed.gt(r.lhs(), r.rhs()));
}

#[test]
fn path_order_subterm_property() {
    let hrs = Hrs::parse(fixture!("addmul.hrs")).unwrap();
    let sx = hrs.parse_term("s(X)").unwrap();
    let x = hrs.parse_term("X").unwrap();
    assert!(Lpo::new(Vec::new()).gt(&sx, &x));
    assert!(!Lpo::new(Vec::new()).gt(&x, &sx));
}

#[test]
fn binders_are_outside_the_fragment() {
    let hrs = Hrs::parse(fixture!("foldl.hrs")).unwrap();
    let r = hrs.rule("foldl_cons").unwrap();
    let lam = r.lhs().body_args().unwrap()[0].clone();
    let lpo = Lpo::new(vec![Name::from("foldl")]);
    assert_eq!(lpo.compare(&lam, r.rhs()), Orientation::Unknown);
    assert_eq!(lpo.compare(r.lhs(), r.rhs()), Orientation::Unknown);
}

#[test]
fn explicit_precedence_orients_addmul() {
    let (hrs, graph) = setup(fixture!("addmul.hrs"));
    let lpo = Lpo::new(
        ["mul", "add", "s", "0"]
            .iter()
            .map(|s| Name::from(*s))
            .collect(),
    );
    for r in hrs.rules() {
        assert_ne!(
            lpo.compare(r.lhs(), r.rhs()),
            Orientation::Unknown,
            "{}",
            r.name()
        );
    }
    for c in graph.recursion_components() {
        let pairs = members(&graph, &c);
        let v = check_reduction_pair(&hrs, &pairs, &lpo).unwrap();
        assert_eq!(v.strict.len(), pairs.len());
    }
}

#[test]
fn unorientable_pair_is_named() {
    let (hrs, graph) = setup(fixture!("swap.hrs"));
    let pairs = members(&graph, &graph.recursion_components()[0]);
    let err = check_reduction_pair(&hrs, &pairs, &Lpo::new(vec![Name::from("f")])).unwrap_err();
    assert!(matches!(err, RedPairFailure::UnorientedRule { .. }));
    assert_eq!(search_precedence(&hrs, &pairs), None);
}

#[test]
fn empty_component_is_rejected() {
    let hrs = Hrs::parse(fixture!("addmul.hrs")).unwrap();
    let lpo = Lpo::new(Vec::new());
    assert_eq!(
        check_reduction_pair(&hrs, &[], &lpo).unwrap_err(),
        RedPairFailure::EmptyComponent
    );
    assert_eq!(
        check_subterm_criterion(&hrs, &[], &PiAssignment::new()).unwrap_err(),
        SubtermFailure::EmptyComponent
    );
}

#[test]
fn precedence_search_proves_ackermann() {
    let (hrs, graph) = setup(fixture!("ack.hrs"));
    let pairs = members(&graph, &graph.recursion_components()[0]);
    let (lpo, v) = search_precedence(&hrs, &pairs).unwrap();
    assert!(!v.strict.is_empty());
    assert_eq!(check_reduction_pair(&hrs, &pairs, &lpo).unwrap(), v);
}

#[test]
fn sqsum_components_need_one_step_each() {
    let (hrs, graph) = setup(fixture!("sqsum.hrs"));
    let config = AnalysisConfig::default();
    for c in graph.recursion_components() {
        let proof = analyze_component(&hrs, &graph, &c, &config).unwrap();
        assert_eq!(proof.steps.len(), 1);
        assert_eq!(proof.steps[0].technique, Technique::Subterm);
        assert_eq!(proof.steps[0].strict, c);
    }
}

#[test]
fn twostep_needs_two_refinements() {
    let (hrs, graph) = setup(fixture!("twostep.hrs"));
    let components = graph.recursion_components();
    assert_eq!(components.len(), 1);
    assert_eq!(components[0].len(), 2);
    let proof =
        analyze_component(&hrs, &graph, &components[0], &AnalysisConfig::default()).unwrap();
    assert_eq!(proof.steps.len(), 2);
    assert_eq!(proof.steps[0].witness, Witness::Subterm(pi(&[("f", "1")])));
    assert_eq!(proof.steps[0].strict.len(), 1);
    assert_eq!(proof.steps[1].witness, Witness::Subterm(pi(&[("f", "2")])));
    assert_eq!(proof.steps[1].component.len(), 1);
}

#[test]
fn swap_leaves_the_whole_component() {
    let (hrs, graph) = setup(fixture!("swap.hrs"));
    let c = graph.recursion_components()[0].clone();
    let failure = analyze_component(&hrs, &graph, &c, &AnalysisConfig::default()).unwrap_err();
    assert_eq!(failure.residual, c);
    assert_eq!(failure.reasons.len(), 2);
}

#[test]
fn redpair_alone_with_explicit_precedence() {
    let (hrs, graph) = setup(fixture!("addmul.hrs"));
    let config = AnalysisConfig {
        techniques: vec![Technique::Redpair],
        precedence: Precedence::Explicit(vec!["mul".into(), "add".into(), "s".into(), "0".into()]),
        ..AnalysisConfig::default()
    };
    for c in graph.recursion_components() {
        let proof = analyze_component(&hrs, &graph, &c, &config).unwrap();
        assert!(matches!(
            proof.steps[0].witness,
            Witness::ReductionPair { .. }
        ));
    }
}

#[test]
fn refinement_shrinks_every_step() {
    let (hrs, graph) = setup(fixture!("ack.hrs"));
    let c = graph.recursion_components()[0].clone();
    let proof = analyze_component(&hrs, &graph, &c, &AnalysisConfig::default()).unwrap();
    for step in &proof.steps {
        assert!(!step.strict.is_empty());
        assert!(step.strict.iter().all(|i| step.component.contains(i)));
    }
}

#[test]
fn technique_names_parse() {
    assert_eq!("subterm".parse::<Technique>().unwrap(), Technique::Subterm);
    assert_eq!(" redpair".parse::<Technique>().unwrap(), Technique::Redpair);
    assert!("rpo".parse::<Technique>().is_err());
}
