use std::collections::{BTreeMap, BTreeSet};

use kpmlcs::export::{SINK_ID, SOURCE_ID, VIRTUAL_CHAR};
use kpmlcs::oracle::{random_suite, VerifyConfig};
use kpmlcs::{export_graph_json, export_graphml, export_text, mine, MineParams, ProblemInstance, PruneMode};

#[derive(Debug, PartialEq, Eq)]
struct ParsedNode {
    level: u32,
    ch: String,
    coords: String,
}

fn parse_graphml(xml: &str) -> (BTreeMap<i64, ParsedNode>, BTreeSet<(i64, i64)>) {
    let doc = roxmltree::Document::parse(xml).expect("well-formed XML");
    let mut nodes = BTreeMap::new();
    let mut edges = BTreeSet::new();
    for n in doc.descendants() {
        match n.tag_name().name() {
            "node" => {
                let id: i64 = n.attribute("id").unwrap().parse().unwrap();
                let data = |key: &str| {
                    n.children()
                        .find(|c| c.attribute("key") == Some(key))
                        .and_then(|c| c.text())
                        .unwrap_or_default()
                        .to_string()
                };
                let node = ParsedNode {
                    level: data("level").parse().unwrap(),
                    ch: data("char"),
                    coords: data("coords"),
                };
                assert!(nodes.insert(id, node).is_none(), "duplicate id {id}");
            }
            "edge" => {
                let s = n.attribute("source").unwrap().parse().unwrap();
                let t = n.attribute("target").unwrap().parse().unwrap();
                edges.insert((s, t));
            }
            _ => {}
        }
    }
    (nodes, edges)
}

fn mine_exact(inst: &ProblemInstance) -> kpmlcs::MiningOutcome {
    let mut p = MineParams::exact();
    p.prune = PruneMode::Off;
    mine(inst, &p).unwrap()
}

#[test]
fn graphml_parse_back_matches_dag() {
    for inst in random_suite(&VerifyConfig::default()) {
        let out = mine_exact(&inst);
        let dag = &out.dag;
        let xml = export_graphml(dag);
        assert_eq!(xml, export_graphml(dag), "re-export must be byte-identical");
        let (nodes, edges) = parse_graphml(&xml);

        let mut want_nodes = BTreeMap::new();
        let mut want_edges = BTreeSet::new();
        let d = dag.d();
        want_nodes.insert(
            SOURCE_ID,
            ParsedNode {
                level: 0,
                ch: VIRTUAL_CHAR.into(),
                coords: vec!["0"; d].join(","),
            },
        );
        want_nodes.insert(
            SINK_ID,
            ParsedNode {
                level: dag.mlcs_len() + 1,
                ch: VIRTUAL_CHAR.into(),
                coords: vec!["inf"; d].join(","),
            },
        );
        let mut next_id = 0i64;
        let mut level_ids: Vec<Vec<i64>> = Vec::new();
        for (li, level) in dag.levels().iter().enumerate() {
            let mut ids = Vec::new();
            for n in &level.nodes {
                let coords: Vec<String> = n.coords.iter().map(u32::to_string).collect();
                want_nodes.insert(
                    next_id,
                    ParsedNode {
                        level: li as u32 + 1,
                        ch: dag.alphabet().symbol(n.code).to_string(),
                        coords: coords.join(","),
                    },
                );
                ids.push(next_id);
                next_id += 1;
            }
            level_ids.push(ids);
        }
        if dag.mlcs_len() == 0 {
            want_edges.insert((SOURCE_ID, SINK_ID));
        } else {
            for &id in &level_ids[0] {
                want_edges.insert((SOURCE_ID, id));
            }
            for &id in level_ids.last().unwrap() {
                want_edges.insert((id, SINK_ID));
            }
            for (li, level) in dag.levels().iter().enumerate() {
                for (i, succ) in level.succ.iter().enumerate() {
                    for &j in succ {
                        want_edges.insert((level_ids[li][i], level_ids[li + 1][j as usize]));
                    }
                }
            }
        }
        assert_eq!(nodes, want_nodes);
        assert_eq!(edges, want_edges);
    }
}

#[test]
fn chain_of_four_has_six_nodes_and_five_edges() {
    let inst = ProblemInstance::from_strs(&["ACGT", "ACGT", "ACGT"]).unwrap();
    let out = mine_exact(&inst);
    let (nodes, edges) = parse_graphml(&export_graphml(&out.dag));
    assert_eq!(nodes.len(), 6);
    assert_eq!(edges.len(), 5);
}

#[test]
fn text_line_count_and_graph_json_schema() {
    let required = ["L", "levels", "edges", "patterns", "stats", "topk"];
    for inst in random_suite(&VerifyConfig::default()).iter().take(80) {
        let out = mine_exact(inst);
        let text = export_text(&out.result, &out.stats, inst.d());
        let degenerate = usize::from(out.dag.mlcs_len() == 0);
        assert_eq!(text.lines().count(), 4 + out.result.paths.len() + degenerate);

        let doc = export_graph_json(&out.dag, &out.result, &out.patterns, &out.stats, None).unwrap();
        doc.check_consistency().unwrap();
        let widths: Vec<usize> = doc.levels.iter().map(|l| l.nodes.len()).collect();
        assert_eq!(widths, doc.stats.level_widths);
        let value: serde_json::Value = serde_json::from_str(&doc.to_json()).unwrap();
        let obj = value.as_object().unwrap();
        let keys: BTreeSet<&str> = obj.keys().map(String::as_str).collect();
        assert_eq!(keys, required.into_iter().collect());
        for s in ["N", "E", "key_points", "L", "level_widths", "path_count"] {
            assert!(obj["stats"].get(s).is_some(), "stats.{s}");
        }
        for l in obj["levels"].as_array().unwrap() {
            for n in l["nodes"].as_array().unwrap() {
                for f in ["id", "char", "coords", "fd", "bd"] {
                    assert!(n.get(f).is_some());
                }
            }
        }
        let parsed: kpmlcs::GraphDocument = serde_json::from_value(value).unwrap();
        assert_eq!(parsed, doc);
    }
}

#[test]
fn graph_json_level_range_matches_subgraph() {
    let inst = ProblemInstance::from_strs(&["GATTACAGATTACA", "TAGACCATTGACA", "ATTAGCAGTTACA"]).unwrap();
    let out = mine_exact(&inst);
    let l = out.dag.mlcs_len();
    assert!(l >= 4);
    let full = export_graph_json(&out.dag, &out.result, &out.patterns, &out.stats, None).unwrap();
    let part = export_graph_json(&out.dag, &out.result, &out.patterns, &out.stats, Some((2, 3))).unwrap();
    assert_eq!(part.levels, full.levels[1..3].to_vec());
    let ids: BTreeSet<i64> = part.levels.iter().flat_map(|l| l.nodes.iter().map(|n| n.id)).collect();
    let expected: Vec<_> = full
        .edges
        .iter()
        .filter(|e| ids.contains(&e.from) && ids.contains(&e.to))
        .copied()
        .collect();
    assert_eq!(part.edges, expected);
    assert!(export_graph_json(&out.dag, &out.result, &out.patterns, &out.stats, Some((0, 2))).is_err());
    assert!(export_graph_json(&out.dag, &out.result, &out.patterns, &out.stats, Some((2, l + 1))).is_err());
}
