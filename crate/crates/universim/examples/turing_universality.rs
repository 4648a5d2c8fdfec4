//! A single interpreter machine simulates a whole corpus of small Turing
//! machines, with a measured linear step overhead. The corpus plus the
//! interpreter form an instance on which the interpreter's simulator is
//! strictly universal.

use universim::error::Result;
use universim::instances::interpreter::{equivalence_sweep, tm_universal_instance};
use universim::instances::turing::{
    corpus, encode, pair, tm_run, EncodingBounds, RunBudget,
};
use universim::universality::{check_universality, Mode};

fn main() -> Result<()> {
    let machines = corpus();
    let budget = RunBudget::corpus_default();
    let bounds = EncodingBounds::corpus_default();
    println!("{} machines, binary inputs up to {} bits", machines.len(), budget.max_input_len);

    // one concrete run, direct and interpreted
    let (name, flip) = &machines[1];
    let program = encode(flip, &bounds)?;
    let direct = tm_run(flip, "10", &budget)?;
    println!("{name} on 10 halts with output after {} steps", direct.steps());
    println!("its encoding is {} bits: {program}", program.len());
    println!("paired with the input: {}", pair(&program, "10"));

    // the sweep replays every (machine, input) cell through the
    // interpreter and checks outputs and the fitted step bound
    let sweep = equivalence_sweep(&machines, &budget, &bounds)?;
    println!(
        "sweep: {} runs, {} halting, {} mismatches, {} bound violations",
        sweep.runs,
        sweep.halting_runs,
        sweep.mismatches.len(),
        sweep.bound_violations.len()
    );
    println!(
        "interpreter steps <= {}*program_bits*direct_steps + {}",
        sweep.profile.a, sweep.profile.b
    );

    // the same data as a simulator: programs are encodings plus one tag
    // for the interpreter itself
    let bundle = tm_universal_instance(&machines, &budget, &bounds)?;
    println!(
        "instance: {} targets, {} contexts, {} behaviors, {} programs",
        bundle.instance.targets.len(),
        bundle.instance.contexts.len(),
        bundle.instance.behaviors.len(),
        bundle.simulator.programs.len()
    );
    let report = check_universality(&bundle.instance, &bundle.simulator, Mode::Strict);
    println!("strict universality: {}", report.universal);
    if let Some(witness) = &report.witness {
        let u = bundle.instance.targets.index_of("u").unwrap();
        println!(
            "the interpreter simulates itself through program {:?}",
            bundle.simulator.programs.label(witness[&u])
        );
    }
    Ok(())
}
