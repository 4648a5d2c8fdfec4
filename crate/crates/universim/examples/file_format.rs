//! The instance-file format round trip: build a document in code,
//! serialize it, parse it back, and confirm nothing changed. Run with
//! --dump to print the compact source text for the corpus document.

use universim::error::Result;
use universim::format::Document;
use universim::instances::turing::{corpus, RunBudget};

/// Source text for the corpus instance: a budget section, one section per
/// machine, and a generator that assembles the instance from them.
fn corpus_text() -> Result<String> {
    let mut text = String::new();
    text.push_str("budget standard\n  max-steps = 256\n  max-input = 4\n  max-output = 5\nend\n");
    let mut doc = Document::parse(&text)?;
    for (name, machine) in corpus() {
        doc.machines.insert(name, machine);
    }
    // machine sections serialize as written, so the document writes the
    // bulk of its own source
    text = doc.to_text();
    text.push_str("\ntm-instance tm\n  machines =");
    for (name, _) in corpus() {
        text.push(' ');
        text.push_str(&name);
    }
    text.push_str("\n  budget = standard\nend\n");
    Ok(text)
}

fn main() -> Result<()> {
    let text = corpus_text()?;
    if std::env::args().any(|a| a == "--dump") {
        print!("{text}");
        return Ok(());
    }

    let doc = Document::parse(&text)?;
    println!(
        "document: {} sets, {} morphisms, {} instances, {} simulators, {} machines",
        doc.sets.len(),
        doc.morphisms.len(),
        doc.instances.len(),
        doc.simulators.len(),
        doc.machines.len()
    );
    let (name, entry) = doc.unique_instance()?;
    println!(
        "instance {name}: {} targets, {} contexts, {} behaviors",
        entry.instance.targets.len(),
        entry.instance.contexts.len(),
        entry.instance.behaviors.len()
    );
    println!("every instance carries a free simulator: {name}.trivial");

    // round trip: serialize the parsed document (generators come back
    // expanded), reparse, compare structurally
    let serialized = doc.to_text();
    let again = Document::parse(&serialized)?;
    println!("serialized to {} lines", serialized.lines().count());
    println!("round trip preserves the document: {}", doc.same(&again));

    let budget = RunBudget { max_steps: 256, max_input_len: 4, max_output_len: 5 };
    println!("budget section matches the library default: {}", budget == RunBudget::corpus_default());
    Ok(())
}
