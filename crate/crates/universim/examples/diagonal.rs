//! Diagonalization in the small: identify targets with contexts, twist
//! the behaviors, and read off a behavior no target realizes. The same
//! construction then runs through a universal simulator's programs.

use std::sync::Arc;

use universim::error::{Error, Result};
use universim::finrel::{FiniteSet, Product, Rel};
use universim::simulator::{EvalInstance, Simulator};
use universim::unreachability::{
    diagonal_direct, diagonal_via_universal, find_fixed_point_free, Iso,
};

fn main() -> Result<()> {
    // two targets, two contexts, two behaviors: eval is logical AND
    let t = FiniteSet::new("T", vec!["t0".into(), "t1".into()])?;
    let c = FiniteSet::new("C", vec!["c0".into(), "c1".into()])?;
    let b = FiniteSet::new("B", vec!["hi".into(), "lo".into()])?;
    let dom = Product::of(&t).tensor(&Product::of(&c));
    let eval = Rel::from_fn(dom, Product::of(&b), |x| {
        Some(vec![u16::from(!(x[0] == 1 && x[1] == 1))])
    })?;
    let instance = EvalInstance::new(
        Arc::clone(&t),
        Arc::clone(&c),
        Arc::clone(&b),
        eval,
    )?;

    // the twist must move every behavior; swapping hi and lo does
    let twist = find_fixed_point_free(&instance.behaviors)
        .ok_or_else(|| Error::Internal("two behaviors always admit a swap".into()))?;
    let iso = Iso::by_index(&instance.targets, &instance.contexts)?;
    let report = diagonal_direct(&instance, &iso, &twist)?;
    println!("h built by twisting the diagonal:");
    for (x, y) in report.h.pairs() {
        println!("  h({}) = {}", instance.contexts.label(x[0]), instance.behaviors.label(y[0]));
    }
    for step in &report.trace {
        println!(
            "  at {} the diagonal gives {}, h demands {}",
            instance.contexts.label(step.context),
            instance.behaviors.label(step.evaluated),
            instance.behaviors.label(step.constructed)
        );
    }

    // identity twists are rejected: they cannot separate h from the
    // diagonal itself
    let id = Rel::identity(&Product::of(&instance.behaviors));
    match diagonal_direct(&instance, &iso, &id) {
        Err(Error::FixedPointPresent(at)) => println!("identity twist rejected at {at}"),
        other => println!("unexpected: {other:?}"),
    }

    // the same argument through a universal simulator: programs stand in
    // for targets, so the iso runs contexts -> programs
    let sim = Simulator::trivial(&instance);
    let prog_iso = Iso::by_index(&instance.contexts, &sim.programs)?;
    let through = diagonal_via_universal(&instance, &sim, &prog_iso, &twist)?;
    println!("through {}: h has {} entries, separated at {} points",
        sim.name,
        through.h.pairs().len(),
        through.trace.len()
    );
    Ok(())
}
