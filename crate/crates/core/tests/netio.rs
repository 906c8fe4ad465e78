mod common;

use std::collections::BTreeMap;

use dynnet::graph::ring_lattice;
use dynnet::netio::{
    parse_gml, parse_graphml, read_graphml, to_gml, to_graphml, write_graphml, write_log_csv, DynNetDocument,
    DynOverride, DynSpec, LOG_HEADER,
};
use dynnet::{Edge, Error, SimRng};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};

fn any_float() -> impl Strategy<Value = f64> {
    prop_oneof![
        -10.0..10.0f64,
        any::<f64>().prop_filter("finite", |v| v.is_finite()),
        Just(0.0),
        Just(-0.0),
        Just(1e-300),
    ]
}

fn node_spec() -> impl Strategy<Value = (String, Vec<f64>)> {
    prop_oneof![
        proptest::collection::vec(any_float(), 3).prop_map(|p| ("Rossler3".to_string(), p)),
        proptest::collection::vec(any_float(), 9).prop_map(|p| ("Linear3".to_string(), p)),
        Just(("Null3".to_string(), vec![])),
    ]
}

fn edge_spec() -> impl Strategy<Value = (String, Vec<f64>)> {
    (prop_oneof![Just("Diffuse3"), Just("Diffuse3XZOnly")], any_float())
        .prop_map(|(name, s)| (name.to_string(), vec![s]))
}

fn node_override() -> impl Strategy<Value = DynOverride> {
    prop_oneof![
        node_spec().prop_map(|(n, p)| DynOverride { name: Some(n), params: Some(p) }),
        Just(DynOverride { name: Some("Rossler3".into()), params: None }),
        proptest::collection::vec(any_float(), 3).prop_map(|p| DynOverride { name: None, params: Some(p) }),
    ]
}

fn edge_override() -> impl Strategy<Value = DynOverride> {
    prop_oneof![
        edge_spec().prop_map(|(n, p)| DynOverride { name: Some(n), params: Some(p) }),
        Just(DynOverride { name: Some("Diffuse3".into()), params: None }),
        any_float().prop_map(|s| DynOverride { name: None, params: Some(vec![s]) }),
    ]
}

fn document() -> impl Strategy<Value = DynNetDocument> {
    (
        1usize..25,
        0.0..0.5f64,
        any::<u64>(),
        proptest::collection::vec(any_float(), 3),
        edge_spec(),
        proptest::collection::vec((any::<usize>(), node_override()), 0..6),
        proptest::collection::vec((any::<usize>(), edge_override()), 0..6),
    )
        .prop_map(|(n, p, seed, node_params, (edge_name, edge_params), nodes, edges)| {
            let mut rng = SimRng::seed_from_u64(seed);
            let pairs = common::all_pairs(n);
            let chosen: Vec<_> = pairs.into_iter().filter(|_| rng.random::<f64>() < p).collect();
            let topology = common::topology(n, &chosen);
            let mut doc = DynNetDocument::new(
                topology,
                DynSpec::new("Rossler3", node_params),
                DynSpec::new(edge_name, edge_params),
            );
            doc.node_overrides = nodes.into_iter().map(|(i, o)| (i % n, o)).collect();
            if !chosen.is_empty() {
                doc.edge_overrides = edges
                    .into_iter()
                    .map(|(i, o)| {
                        let (a, b) = chosen[i % chosen.len()];
                        (Edge::new(a, b), o)
                    })
                    .collect::<BTreeMap<_, _>>();
            }
            doc
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn graphml_round_trip(doc in document()) {
        let text = to_graphml(&doc);
        let back = parse_graphml(&text).unwrap();
        prop_assert_eq!(&back, &doc);
        prop_assert_eq!(to_graphml(&back), text);
    }

    #[test]
    fn gml_round_trip(n in 1usize..30, p in 0.0..0.5f64, seed in any::<u64>()) {
        let mut rng = SimRng::seed_from_u64(seed);
        let chosen: Vec<_> = common::all_pairs(n).into_iter().filter(|_| rng.random::<f64>() < p).collect();
        let g = common::topology(n, &chosen);
        prop_assert_eq!(parse_gml(&to_gml(&g)).unwrap(), g);
    }
}

#[test]
fn graphml_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.graphml");
    let doc = DynNetDocument::new(
        ring_lattice(12, 4).unwrap(),
        DynSpec::new("Rossler3", vec![0.2, 0.2, 5.7]),
        DynSpec::new("Diffuse3XZOnly", vec![0.5]),
    );
    write_graphml(&doc, &path).unwrap();
    assert_eq!(read_graphml(&path).unwrap(), doc);
    assert!(matches!(read_graphml(dir.path().join("missing.graphml")), Err(Error::Io { .. })));
}

#[test]
fn directed_duplicates_collapse() {
    let text = r#"
        Creator "test"
        graph [
          directed 1
          node [ id 10 label "a" ]
          node [ id 20 label "b" ]
          node [ id 30 label "c" ]
          edge [ source 10 target 20 ]
          edge [ source 20 target 10 ]
          edge [ source 20 target 30 value 2.5 ]
          edge [ source 20 target 30 ]
        ]
    "#;
    let g = parse_gml(text).unwrap();
    assert_eq!(g.node_count(), 3);
    assert_eq!(g.edge_count(), 2);
    assert!(g.contains(0, 1) && g.contains(1, 2));
}

#[test]
fn gml_errors_carry_context() {
    assert!(matches!(parse_gml("graph [ node [ id 1 ] edge [ source 1 target 9 ] ]"), Err(Error::Format(_))));
    assert!(matches!(parse_gml("graph [ node [ id 1 ] edge [ source 1 target 1 ] ]"), Err(Error::Format(_))));
    match parse_gml("graph [\n node [ id 1 ]\n node [ id") {
        Err(Error::Parse { line, .. }) => assert!(line >= 3),
        other => panic!("{other:?}"),
    }
}

#[test]
fn graphml_rejects_bad_documents() {
    let base = to_graphml(&DynNetDocument::new(
        ring_lattice(5, 2).unwrap(),
        DynSpec::new("Rossler3", vec![0.2, 0.2, 5.7]),
        DynSpec::new("Diffuse3XZOnly", vec![0.5]),
    ));
    let directed = base.replace("edgedefault=\"undirected\"", "edgedefault=\"directed\"");
    assert!(parse_graphml(&directed).is_err());
    let bad_params = base.replace("0.2 0.2 5.7", "0.2 zero 5.7");
    assert!(matches!(parse_graphml(&bad_params), Err(Error::Format(_))));
    let bad_name = base.replace(">Rossler3<", ">Lorenz<");
    assert!(parse_graphml(&bad_name).is_err());
    assert!(parse_graphml("<graphml><graph").is_err());
}

#[test]
fn log_csv_layout() {
    use dynnet::IterationRecord;
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("log.csv");
    let g = ring_lattice(100, 4).unwrap();
    let log = vec![
        IterationRecord {
            iteration: 0,
            temperature: 2.5,
            q_current: 10.0,
            q_best: 10.0,
            accepted: false,
            analysis: Some(dynnet::std_analysis(&g)),
        },
        IterationRecord {
            iteration: 1,
            temperature: 2.5,
            q_current: 9.0,
            q_best: 9.0,
            accepted: true,
            analysis: None,
        },
    ];
    write_log_csv(&log, &path).unwrap();
    let text = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], LOG_HEADER);
    assert_eq!(lines[1], "0,2.5,10,10,0,25,0.5,3");
    assert_eq!(lines[2], "1,2.5,9,9,1,,,");
}
