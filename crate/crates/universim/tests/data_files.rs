//! The bundled instance files must stay in lockstep with the library
//! builders: each file parses, and the objects it defines are extensionally
//! equal to the programmatic ones.

use universim::format::Document;
use universim::instances::finfun::{finfun_instance, singleton_simulator};
use universim::instances::interpreter::tm_universal_instance;
use universim::instances::spin::bundled_nogo;
use universim::instances::turing::{corpus, tm_instance, EncodingBounds, RunBudget};
use universim::nogo::{check_nogo, spectrum_witness};
use universim::universality::{check_universality, Mode};

fn bundled(name: &str) -> Document {
    let path = format!("{}/data/{name}", env!("CARGO_MANIFEST_DIR"));
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"));
    Document::parse(&text).unwrap_or_else(|e| panic!("{path}: {e}"))
}

#[test]
fn and_eval_document_is_selfconsistent() {
    let doc = bundled("and_eval.univ");
    let inst = &doc.instance("and").unwrap().instance;
    assert_eq!(inst.targets.len(), 2);
    assert!(inst.eval_is_total());
    // the one hi sits at (t1, c1)
    assert_eq!(
        inst.eval.apply_fn(&[1, 1]).unwrap(),
        vec![inst.behaviors.index_of("hi").unwrap()]
    );

    // narrow covers t0 only
    let narrow = &doc.simulator("narrow").unwrap().simulator;
    let report = check_universality(inst, narrow, Mode::Lax);
    assert!(!report.universal);
    assert_eq!(report.counterexample, inst.targets.index_of("t1"));

    // the free simulator is there without being written down
    let trivial = &doc.simulator("and.trivial").unwrap().simulator;
    assert!(check_universality(inst, trivial, Mode::Strict).universal);

    // swap moves both behaviors, stay moves none
    let swap = &doc.morphism("swap").unwrap().rel;
    let stay = &doc.morphism("stay").unwrap().rel;
    for b in 0..2u16 {
        assert_ne!(swap.apply_fn(&[b]).unwrap(), vec![b]);
        assert_eq!(stay.apply_fn(&[b]).unwrap(), vec![b]);
    }
    assert_eq!(doc.iso("j").unwrap().iso.apply(0), 0);
}

#[test]
fn finfun_document_matches_the_builder() {
    let doc = bundled("finfun22.univ");
    let built = finfun_instance(2, 2).unwrap();
    let entry = &doc.instance("f").unwrap().instance;
    assert_eq!(entry.eval, built.eval);

    let singleton = &doc.simulator("f.singleton").unwrap().simulator;
    assert_eq!(singleton.s(), &singleton_simulator(&built).unwrap().s().clone());

    // the padded twins stay universal: every eval row is realized twice
    for name in ["doubled", "doubled-b"] {
        let sim = &doc.simulator(name).unwrap().simulator;
        assert!(check_universality(entry, sim, Mode::Strict).universal, "{name}");
        assert_eq!(sim.reachable_behaviors().len(), 4, "{name}");
    }
}

#[test]
fn spin_document_matches_the_bundled_obstruction() {
    let doc = bundled("spin_nogo.univ");
    let (built_inst, built_sim, built_witness) = bundled_nogo().unwrap();
    let inst = &doc.instance("spin").unwrap().instance;
    assert_eq!(inst.eval, built_inst.eval);

    let sim = &doc.simulator("ising-only").unwrap().simulator;
    assert_eq!(sim.s(), built_sim.s());

    let witness = &doc.witness("spectrum").unwrap().witness;
    assert_eq!(witness.values, built_witness.values);
    assert_eq!(witness.values, spectrum_witness(inst).values);

    let report = check_nogo(inst, sim, witness).unwrap();
    assert!(report.obstructed());
}

#[test]
fn corpus_document_matches_the_builder() {
    let doc = bundled("tm_corpus.univ");
    let built = tm_instance(&corpus(), &RunBudget::corpus_default()).unwrap();
    let inst = &doc.instance("tm").unwrap().instance;
    assert_eq!(inst.eval, built.eval);
    assert_eq!(doc.machines.len(), 13);
    for (name, machine) in corpus() {
        assert_eq!(doc.machines[&name], machine, "{name} drifted");
    }
}

#[test]
fn universal_document_matches_the_builder() {
    let doc = bundled("tm_universal.univ");
    let built = tm_universal_instance(
        &corpus(),
        &RunBudget::corpus_default(),
        &EncodingBounds::corpus_default(),
    )
    .unwrap();
    let inst = &doc.instance("tm").unwrap().instance;
    assert_eq!(inst.eval, built.instance.eval);

    let interp = &doc.simulator("tm.interp").unwrap().simulator;
    assert_eq!(interp.s(), built.simulator.s());
    assert!(check_universality(inst, interp, Mode::Strict).universal);
}
