//! When targets exhaust all functions from contexts to behaviors, no
//! simulator whose programs are the contexts themselves can be universal:
//! the counting argument, checked by brute force.

use universim::error::Result;
use universim::instances::finfun::finfun_instance;
use universim::unreachability::cantor_nogo;

fn main() -> Result<()> {
    let instance = finfun_instance(2, 2)?;
    println!(
        "{} targets = {} behaviors ^ {} contexts",
        instance.targets.len(),
        instance.behaviors.len(),
        instance.contexts.len()
    );
    println!("targets: {}", instance.targets.labels().collect::<Vec<_>>().join(", "));

    // every deterministic simulator with programs = contexts is one
    // reduction table; enumerate them all
    let report = cantor_nogo(&instance)?;
    println!(
        "{} simulators enumerated ({} programs each)",
        report.simulators_checked, report.program_bound
    );
    match &report.universal_found {
        Some(name) => println!("unexpectedly universal: {name}"),
        None => {
            println!("none universal; how often each target is the missing one:");
            for (t, n) in &report.counterexample_counts {
                println!("  {}: {n}", instance.targets.label(*t));
            }
        }
    }

    // the obstruction needs the full function space; the count alone
    // shows why programs cannot keep up with targets
    let programs = report.program_bound as u32;
    let targets = report.target_count as u32;
    println!("{programs} programs can name at most {programs} of {targets} rows");
    Ok(())
}
