//! Two universal simulators over the same instance need not be
//! equivalent: morphisms run one way but provably not the other, and the
//! non-existence side comes with full enumeration statistics.

use universim::error::Result;
use universim::instances::finfun::{finfun_instance, singleton_simulator};
use universim::parsimony::{compare_parsimony, find_morphism, MorphismSearch, SearchOutcome};
use universim::simulator::Simulator;
use universim::universality::{check_universality, Mode};

fn main() -> Result<()> {
    // targets are all four functions from two contexts to two behaviors
    let instance = finfun_instance(2, 2)?;
    let trivial = Simulator::trivial(&instance);
    let singleton = singleton_simulator(&instance)?;
    for sim in [&trivial, &singleton] {
        let report = check_universality(&instance, sim, Mode::Strict);
        println!(
            "{} ({} programs): strictly universal = {}",
            sim.name,
            sim.programs.len(),
            report.universal
        );
    }

    // one direction has a morphism
    match find_morphism(&instance, &trivial, &singleton, Mode::Strict)? {
        MorphismSearch::Found(m) => {
            println!("morphism {} -> {}: found", trivial.name, singleton.name);
            println!("  program translation has {} pairs", m.program_pre.pairs().len());
        }
        MorphismSearch::RuledOut(_) => println!("unexpectedly ruled out"),
    }

    // the other direction is exhausted pair by pair
    match find_morphism(&instance, &singleton, &trivial, Mode::Strict)? {
        MorphismSearch::Found(_) => println!("unexpectedly found"),
        MorphismSearch::RuledOut(proof) => {
            println!(
                "morphism {} -> {}: ruled out after {} of {} assignments",
                singleton.name, trivial.name, proof.assignments_checked, proof.maps_total
            );
            println!("  candidate programs per slot: {:?}", proof.candidate_counts);
        }
    }

    // the packaged comparison reaches the same verdict
    let report = compare_parsimony(&instance, &trivial, &singleton)?;
    println!("relation: {} ({} mode)", report.relation, report.mode);
    if let SearchOutcome::RuledOut(p) = &report.second_to_first {
        println!("checked {} candidate maps for the missing direction", p.maps_total);
    }
    Ok(())
}
