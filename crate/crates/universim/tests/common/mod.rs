//! Shared helpers for the integration suites: seeded generators for random
//! sets, relations, instances and simulators, plus independent oracles that
//! re-derive claims without going through the code paths under test.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use universim::finrel::{FiniteSet, Product, Rel, Tup};
use universim::simulator::{EvalInstance, Simulator};
use universim::universality::Mode;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_set(rng: &mut ChaCha8Rng, name: &str, max_size: usize) -> Arc<FiniteSet> {
    let size = rng.gen_range(1..=max_size);
    let labels = (0..size).map(|i| format!("{name}{i}")).collect();
    FiniteSet::new(name, labels).expect("generated labels are valid")
}

/// Every tuple of a product, in canonical order.
pub fn tuples(obj: &Product) -> Vec<Tup> {
    let sizes: Vec<u16> = obj.factors().iter().map(|f| f.len() as u16).collect();
    let mut out = vec![vec![]];
    for &n in &sizes {
        out = out
            .into_iter()
            .flat_map(|t: Tup| {
                (0..n).map(move |v| {
                    let mut t2 = t.clone();
                    t2.push(v);
                    t2
                })
            })
            .collect();
    }
    out
}

/// A relation that includes each pair independently with the given density.
pub fn random_rel(rng: &mut ChaCha8Rng, dom: &Product, cod: &Product, density: f64) -> Rel {
    let mut pairs = BTreeSet::new();
    for x in tuples(dom) {
        for y in tuples(cod) {
            if rng.gen_bool(density) {
                pairs.insert((x.clone(), y));
            }
        }
    }
    Rel::from_pairs(dom.clone(), cod.clone(), pairs).expect("pairs come from the domains")
}

pub fn random_total_fn(rng: &mut ChaCha8Rng, dom: &Product, cod: &Product) -> Rel {
    let targets = tuples(cod);
    let pairs = tuples(dom)
        .into_iter()
        .map(|x| (x, targets.choose(rng).expect("nonempty cod").clone()))
        .collect();
    Rel::from_pairs(dom.clone(), cod.clone(), pairs).expect("pairs come from the domains")
}

/// A random instance; eval is a total function when `functional`, otherwise
/// a relation dense enough to stay interesting.
pub fn random_instance(rng: &mut ChaCha8Rng, max_size: usize, functional: bool) -> EvalInstance {
    let t = random_set(rng, "t", max_size);
    let c = random_set(rng, "c", max_size);
    let b = random_set(rng, "b", max_size);
    let dom = Product::of(&t).tensor(&Product::of(&c));
    let cod = Product::of(&b);
    let eval = if functional {
        random_total_fn(rng, &dom, &cod)
    } else {
        random_rel(rng, &dom, &cod, 0.5)
    };
    EvalInstance::new(t, c, b, eval).expect("objects line up by construction")
}

/// A random deterministic simulator over the instance: total compiler,
/// total functional reduction.
pub fn random_simulator(
    rng: &mut ChaCha8Rng,
    instance: &EvalInstance,
    max_programs: usize,
) -> Simulator {
    let p = random_set(rng, "p", max_programs);
    let pp = Product::of(&p);
    let t = Product::of(&instance.targets);
    let c = Product::of(&instance.contexts);
    let compiler = random_total_fn(rng, &pp, &t);
    let reduction = random_total_fn(rng, &pp.tensor(&c), &c);
    Simulator::new("random", instance, p, compiler, reduction)
        .expect("generated parts have the right objects")
}

/// Row of eval at a target, as a context -> behaviors table built straight
/// from the pair set.
pub fn eval_table(instance: &EvalInstance) -> BTreeMap<u16, BTreeMap<u16, BTreeSet<u16>>> {
    let mut table: BTreeMap<u16, BTreeMap<u16, BTreeSet<u16>>> = BTreeMap::new();
    for t in 0..instance.targets.len() as u16 {
        table.insert(t, BTreeMap::new());
    }
    for (x, y) in instance.eval.pairs() {
        table.get_mut(&x[0]).expect("target in range").entry(x[1]).or_default().insert(y[0]);
    }
    table
}

/// behavior(sim, p) recomputed from the assembled morphism's raw pairs:
/// context -> behaviors reached through s then eval.
pub fn behavior_table(
    instance: &EvalInstance,
    sim: &Simulator,
    program: u16,
) -> BTreeMap<u16, BTreeSet<u16>> {
    let eval = eval_table(instance);
    let mut out: BTreeMap<u16, BTreeSet<u16>> = BTreeMap::new();
    for (x, y) in sim.s().pairs() {
        if x[0] != program {
            continue;
        }
        let (t, c2) = (y[0], y[1]);
        if let Some(bs) = eval[&t].get(&c2) {
            out.entry(x[1]).or_default().extend(bs.iter().copied());
        }
    }
    out
}

/// Does the claimed witness make the simulator universal, judged without
/// the universality module: per target, compare the simulated behavior
/// table against the target's own row.
pub fn witness_holds(
    instance: &EvalInstance,
    sim: &Simulator,
    witness: &BTreeMap<u16, u16>,
    mode: Mode,
) -> bool {
    let eval = eval_table(instance);
    for t in 0..instance.targets.len() as u16 {
        let Some(&p) = witness.get(&t) else { return false };
        let simulated = behavior_table(instance, sim, p);
        let want = &eval[&t];
        let ok = match mode {
            Mode::Strict => {
                let at = |c: u16| want.get(&c).cloned().unwrap_or_default();
                (0..instance.contexts.len() as u16)
                    .all(|c| simulated.get(&c).cloned().unwrap_or_default() == at(c))
            }
            Mode::Lax => (0..instance.contexts.len() as u16).all(|c| {
                let got = simulated.get(&c).cloned().unwrap_or_default();
                want.get(&c).cloned().unwrap_or_default().is_subset(&got)
            }),
        };
        if !ok {
            return false;
        }
    }
    true
}

/// Naive morphism finder for deterministic simulators: enumerate every
/// program translation, derive the post-processor pointwise from the
/// factorization equation, and check the behavior condition directly.
/// Counts candidates exactly like a textbook double loop would.
pub struct NaiveSearch {
    pub found: bool,
    pub maps_checked: u128,
}

pub fn naive_morphism_search(
    instance: &EvalInstance,
    from: &Simulator,
    to: &Simulator,
    mode: Mode,
) -> NaiveSearch {
    assert!(from.s().is_total_function() && to.s().is_total_function());
    let n_from = from.programs.len() as u16;
    let n_to = to.programs.len() as usize;
    let n_c = instance.contexts.len() as u16;

    let s_at = |sim: &Simulator, p: u16, c: u16| -> Tup {
        sim.s().apply_fn(&[p, c]).expect("total function")
    };

    let mut maps_checked: u128 = 0;
    // odometer over all maps to.programs -> from.programs
    let mut assignment = vec![0u16; n_to];
    loop {
        maps_checked += 1;
        // factorization: a single-valued post-processor must exist on the
        // image of s_from composed with the translation
        let mut post: BTreeMap<Tup, Tup> = BTreeMap::new();
        let mut consistent = true;
        'outer: for p2 in 0..n_to as u16 {
            for c in 0..n_c {
                let through = s_at(from, assignment[p2 as usize], c);
                let want = s_at(to, p2, c);
                match post.get(&through) {
                    Some(existing) if existing != &want => {
                        consistent = false;
                        break 'outer;
                    }
                    _ => {
                        post.insert(through, want);
                    }
                }
            }
        }
        if consistent {
            // behavior condition, from raw tables
            let behaviors_ok = (0..n_to as u16).all(|p2| {
                let got = behavior_table(instance, to, p2);
                let want = behavior_table(instance, from, assignment[p2 as usize]);
                match mode {
                    Mode::Strict => got == want,
                    Mode::Lax => (0..n_c).all(|c| {
                        want.get(&c)
                            .cloned()
                            .unwrap_or_default()
                            .is_subset(&got.get(&c).cloned().unwrap_or_default())
                    }),
                }
            });
            if behaviors_ok {
                return NaiveSearch { found: true, maps_checked };
            }
        }
        // next assignment
        let mut i = 0;
        loop {
            if i == n_to {
                return NaiveSearch { found: false, maps_checked };
            }
            assignment[i] += 1;
            if assignment[i] < n_from {
                break;
            }
            assignment[i] = 0;
            i += 1;
        }
    }
}
