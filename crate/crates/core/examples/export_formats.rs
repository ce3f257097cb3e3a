// Text, GraphML and graph-JSON renderings of one result.
//
// ```bash
// cargo run -p kpmlcs --example export_formats
// ```

use kpmlcs::{export_graph_json, export_graphml, export_text, mine, MineParams, ProblemInstance};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let inst = ProblemInstance::from_strs(&["ABC", "ACB", "ABC"])?;
    let out = mine(&inst, &MineParams::topk(2))?;

    let text = export_text(&out.result, &out.stats, inst.d());
    print!("{text}");
    assert!(text.ends_with("AB\t1\nAC\t2\n"));

    let xml = export_graphml(&out.dag);
    println!("graphml: {} bytes, {} nodes", xml.len(), xml.matches("<node ").count());

    let doc = export_graph_json(&out.dag, &out.result, &out.patterns, &out.stats, Some((2, 2)))?;
    println!("level 2 view: {} nodes, {} edges", doc.levels[0].nodes.len(), doc.edges.len());
    println!("{}", serde_json::to_string(&doc.stats)?);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
