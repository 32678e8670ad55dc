//! Ingest externally produced judgments from a line-delimited file.
//!
//! Real evaluators (human annotators, LLM judges) live outside this crate;
//! their verdicts arrive as one JSON record per line. This example writes
//! such a file, reads it back, groups records by evaluator, and builds one
//! preference graph per evaluator — the entry point for the ensemble
//! pipeline when judgments are collected offline.
//!
//! Run with: cargo run --example judgment_files

use prefgraph::{
    build_preference_graph, ensemble, group_by_evaluator, ingest_judgments, parse_items,
    GraphSet, Result,
};

fn main() -> Result<()> {
    let dir = std::env::temp_dir().join("prefgraph-judgment-files");
    std::fs::create_dir_all(&dir)?;

    let items_path = dir.join("items.json");
    std::fs::write(
        &items_path,
        r#"[
  { "id": "r0", "content": "first draft" },
  { "id": "r1", "content": "second draft" },
  { "id": "r2", "content": "third draft" }
]"#,
    )?;

    let judgments_path = dir.join("judgments.jsonl");
    std::fs::write(
        &judgments_path,
        concat!(
            r#"{"evaluator_id":"alice","question_id":"q0","item_a":"r0","item_b":"r1","winner":"r0","presentation_order":"ab"}"#, "\n",
            r#"{"evaluator_id":"alice","question_id":"q0","item_a":"r0","item_b":"r1","winner":"r0","presentation_order":"ba"}"#, "\n",
            r#"{"evaluator_id":"alice","question_id":"q0","item_a":"r1","item_b":"r2","winner":"r1","presentation_order":"ab"}"#, "\n",
            r#"{"evaluator_id":"bob","question_id":"q0","item_a":"r0","item_b":"r2","winner":"r2","presentation_order":"ab"}"#, "\n",
            r#"{"evaluator_id":"bob","question_id":"q0","item_a":"r1","item_b":"r2","winner":"r1","presentation_order":"ba"}"#, "\n",
        ),
    )?;

    let items = parse_items(&std::fs::read_to_string(&items_path)?)?;
    let records = ingest_judgments(&judgments_path)?;
    println!("read {} records for {} items", records.len(), items.len());

    let groups = group_by_evaluator(&records);
    let mut graphs = Vec::new();
    let mut labels = Vec::new();
    for (evaluator, group) in &groups {
        let g = build_preference_graph(&items, group)?;
        println!("{evaluator}: {} verdicts -> {} arcs", group.len(), g.arc_count());
        graphs.push(g);
        labels.push(evaluator.clone());
    }

    let merged = ensemble(&GraphSet::new(graphs, labels)?, None)?;
    println!("\nmerged graph:");
    for (u, v, w) in merged.arcs() {
        println!("  {u} -> {v}  weight {w:.1}");
    }
    Ok(())
}
