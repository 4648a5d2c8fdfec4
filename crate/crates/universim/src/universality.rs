//! Universality of a simulator over an instance.
//!
//! A simulator is universal when every target's evaluation row is realized
//! by some program's behavior: exactly (strict mode) or as a subset of the
//! program's behavior (lax mode). The checker is exhaustive and returns
//! either a witness table (least admissible program per target) or the
//! first target with no admissible program.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::finrel::{Product, Rel};
use crate::simulator::{EvalInstance, Simulator};

/// Strict: behavior(p) equals the target row. Lax: behavior(p) contains it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Strict,
    Lax,
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Mode::Strict => write!(f, "strict"),
            Mode::Lax => write!(f, "lax"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct UniversalityReport {
    pub simulator: String,
    pub mode: Mode,
    pub universal: bool,
    /// target index -> least admissible program index, total iff universal.
    pub witness: Option<BTreeMap<u16, u16>>,
    /// First target (canonical order) with no admissible program.
    pub counterexample: Option<u16>,
    /// All admissible programs per target, in target index order.
    pub admissible: Vec<Vec<u16>>,
}

/// Programs whose behavior realizes the target's row under `mode`, in
/// ascending program order.
pub fn admissible_programs(
    instance: &EvalInstance,
    sim: &Simulator,
    target: u16,
    mode: Mode,
) -> Vec<u16> {
    let row = instance.eval_row(target);
    (0..sim.programs.len() as u16)
        .filter(|&p| {
            let b = sim.behavior(p);
            match mode {
                Mode::Strict => b.same(&row),
                Mode::Lax => b.subsumes(&row).expect("behavior and row share C -> B"),
            }
        })
        .collect()
}

pub fn check_universality(
    instance: &EvalInstance,
    sim: &Simulator,
    mode: Mode,
) -> UniversalityReport {
    let n = instance.targets.len() as u16;
    let mut admissible = Vec::with_capacity(n as usize);
    let mut witness = BTreeMap::new();
    let mut counterexample = None;
    for t in 0..n {
        let adm = admissible_programs(instance, sim, t, mode);
        if let Some(&p) = adm.first() {
            witness.insert(t, p);
        } else if counterexample.is_none() {
            counterexample = Some(t);
        }
        admissible.push(adm);
    }
    let universal = counterexample.is_none();
    UniversalityReport {
        simulator: sim.name.clone(),
        mode,
        universal,
        witness: if universal { Some(witness) } else { None },
        counterexample,
        admissible,
    }
}

/// Turns a witness table into the reduction morphism T -> P it denotes.
pub fn witness_reduction(
    instance: &EvalInstance,
    sim: &Simulator,
    witness: &BTreeMap<u16, u16>,
) -> Result<Rel> {
    let t = Product::of(&instance.targets);
    let p = Product::of(&sim.programs);
    let mut pairs = std::collections::BTreeSet::new();
    for (&tgt, &prog) in witness {
        if tgt as usize >= instance.targets.len() {
            return Err(Error::UnknownName(format!("target index {tgt} out of range")));
        }
        if prog as usize >= sim.programs.len() {
            return Err(Error::UnknownProgram(format!("program index {prog} out of range")));
        }
        pairs.insert((vec![tgt], vec![prog]));
    }
    Rel::from_pairs(t, p, pairs)
}

/// Checks that a reduction r: T -> P makes the simulator reproduce eval:
/// running the simulator on (r(t), c) yields exactly (strict) or at least
/// (lax) the behaviors eval assigns to (t, c).
pub fn verify_reduction(
    instance: &EvalInstance,
    sim: &Simulator,
    reduction: &Rel,
    mode: Mode,
) -> Result<bool> {
    let t = Product::of(&instance.targets);
    let p = Product::of(&sim.programs);
    if reduction.dom() != &t || reduction.cod() != &p {
        return Err(Error::TypeMismatch(format!(
            "reduction must have shape {} -> {}, got {} -> {}",
            t.describe(),
            p.describe(),
            reduction.dom().describe(),
            reduction.cod().describe()
        )));
    }
    let c = Product::of(&instance.contexts);
    let id_c = Rel::identity(&c);
    let replayed = reduction
        .tensor(&id_c)
        .compose(sim.s())?
        .compose(&instance.eval)?;
    Ok(match mode {
        Mode::Strict => replayed.same(&instance.eval),
        Mode::Lax => replayed.subsumes(&instance.eval)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finrel::FiniteSet;
    use crate::instances::finfun::{finfun_instance, singleton_simulator, truncated_singleton};
    use std::collections::BTreeSet;
    use std::sync::Arc;

    fn set(name: &str, elems: &[&str]) -> Arc<FiniteSet> {
        FiniteSet::new(name, elems.iter().map(|s| s.to_string()).collect()).unwrap()
    }

    /// Frozen: the four-program single-target simulator over the (2,2)
    /// function space is strictly universal, and each target has exactly
    /// one admissible program: f00->p0, f01->p1, f10->p2, f11->p3.
    #[test]
    fn finfun22_singleton_is_strictly_universal() {
        let inst = finfun_instance(2, 2).unwrap();
        let sim = singleton_simulator(&inst).unwrap();
        let report = check_universality(&inst, &sim, Mode::Strict);
        assert!(report.universal);
        let witness = report.witness.as_ref().unwrap();
        let expect: BTreeMap<u16, u16> = [(0, 0), (1, 1), (2, 2), (3, 3)].into();
        assert_eq!(witness, &expect);
        for adm in &report.admissible {
            assert_eq!(adm.len(), 1);
        }
        // and the witness really replays eval
        let r = witness_reduction(&inst, &sim, witness).unwrap();
        assert!(verify_reduction(&inst, &sim, &r, Mode::Strict).unwrap());
    }

    /// Frozen: dropping p3 loses exactly the constant-b1 target, which is
    /// the first (and only) counterexample in canonical order.
    #[test]
    fn finfun22_truncation_loses_universality() {
        let inst = finfun_instance(2, 2).unwrap();
        let sim = truncated_singleton(&inst, 3).unwrap();
        let report = check_universality(&inst, &sim, Mode::Strict);
        assert!(!report.universal);
        assert_eq!(report.counterexample, Some(3));
        assert_eq!(inst.targets.label(3), "f11");
        assert!(report.witness.is_none());
        // lax does not rescue it: no behavior contains the missing row
        let lax = check_universality(&inst, &sim, Mode::Lax);
        assert!(!lax.universal);
        assert_eq!(lax.counterexample, Some(3));
    }

    #[test]
    fn trivial_simulator_is_strictly_universal() {
        for (nc, nb) in [(2, 2), (2, 3), (3, 2)] {
            let inst = finfun_instance(nc, nb).unwrap();
            let sim = Simulator::trivial(&inst);
            let report = check_universality(&inst, &sim, Mode::Strict);
            assert!(report.universal, "trivial not universal on ({nc},{nb})");
            // trivial witness is the identity table
            let witness = report.witness.unwrap();
            for (t, p) in &witness {
                assert_eq!(t, p);
            }
        }
    }

    #[test]
    fn strict_universality_implies_lax() {
        let inst = finfun_instance(2, 2).unwrap();
        for sim in [Simulator::trivial(&inst), singleton_simulator(&inst).unwrap()] {
            let strict = check_universality(&inst, &sim, Mode::Strict);
            let lax = check_universality(&inst, &sim, Mode::Lax);
            assert!(strict.universal);
            assert!(lax.universal);
            // every strictly admissible program is laxly admissible
            for (s_adm, l_adm) in strict.admissible.iter().zip(&lax.admissible) {
                let l: BTreeSet<_> = l_adm.iter().collect();
                assert!(s_adm.iter().all(|p| l.contains(p)));
            }
        }
    }

    /// A relational compiler whose single program covers both eval rows at
    /// once: laxly universal, strictly not.
    #[test]
    fn lax_without_strict() {
        let t = set("T", &["t0", "t1"]);
        let c = set("C", &["c0"]);
        let b = set("B", &["b0", "b1"]);
        let dom = Product::of(&t).tensor(&Product::of(&c));
        let eval = Rel::from_fn(dom, Product::of(&b), |x| Some(vec![x[0]])).unwrap();
        let inst = EvalInstance::new(t, c, b, eval).unwrap();

        let p = set("P", &["p"]);
        let pp = Product::of(&p);
        let cc = Product::of(&inst.contexts);
        let compiler = Rel::from_pairs(
            pp.clone(),
            Product::of(&inst.targets),
            BTreeSet::from([(vec![0], vec![0]), (vec![0], vec![1])]),
        )
        .unwrap();
        let reduction = Rel::from_fn(pp.tensor(&cc), cc.clone(), |x| Some(vec![x[1]])).unwrap();
        let sim = Simulator::new("blur", &inst, Arc::clone(&p), compiler, reduction).unwrap();

        let strict = check_universality(&inst, &sim, Mode::Strict);
        assert!(!strict.universal);
        assert_eq!(strict.counterexample, Some(0));
        let lax = check_universality(&inst, &sim, Mode::Lax);
        assert!(lax.universal);
        assert_eq!(lax.witness.unwrap(), BTreeMap::from([(0, 0), (1, 0)]));
        // the lax witness replays eval laxly but not strictly
        let r = witness_reduction(&inst, &sim, &BTreeMap::from([(0, 0), (1, 0)])).unwrap();
        assert!(verify_reduction(&inst, &sim, &r, Mode::Lax).unwrap());
        assert!(!verify_reduction(&inst, &sim, &r, Mode::Strict).unwrap());
    }

    /// Renaming every label leaves verdicts and index-level witnesses
    /// untouched, because canonical order is preserved by prefixing.
    #[test]
    fn relabeling_invariance() {
        let inst = finfun_instance(2, 2).unwrap();
        let sim = singleton_simulator(&inst).unwrap();
        let base = check_universality(&inst, &sim, Mode::Strict);

        let rename = |s: &Arc<FiniteSet>, prefix: &str| {
            FiniteSet::new(
                format!("{prefix}{}", s.name()),
                s.labels().map(|l| format!("{prefix}{l}")).collect(),
            )
            .unwrap()
        };
        let t2 = rename(&inst.targets, "x");
        let c2 = rename(&inst.contexts, "y");
        let b2 = rename(&inst.behaviors, "z");
        let dom2 = Product::of(&t2).tensor(&Product::of(&c2));
        let eval2 = Rel::from_pairs(
            dom2,
            Product::of(&b2),
            inst.eval.pairs().clone(),
        )
        .unwrap();
        let inst2 = EvalInstance::new(t2, c2, b2, eval2).unwrap();
        let p2 = rename(&sim.programs, "w");
        let compiler2 = Rel::from_pairs(
            Product::of(&p2),
            Product::of(&inst2.targets),
            sim.compiler.pairs().clone(),
        )
        .unwrap();
        let reduction2 = Rel::from_pairs(
            Product::of(&p2).tensor(&Product::of(&inst2.contexts)),
            Product::of(&inst2.contexts),
            sim.context_reduction.pairs().clone(),
        )
        .unwrap();
        let sim2 = Simulator::new("renamed", &inst2, p2, compiler2, reduction2).unwrap();
        let renamed = check_universality(&inst2, &sim2, Mode::Strict);
        assert_eq!(base.universal, renamed.universal);
        assert_eq!(base.witness, renamed.witness);
    }

    #[test]
    fn verify_reduction_rejects_wrong_shape_and_wrong_map() {
        let inst = finfun_instance(2, 2).unwrap();
        let sim = singleton_simulator(&inst).unwrap();
        // wrong shape: T -> T instead of T -> P
        let bad = Rel::identity(&Product::of(&inst.targets));
        assert!(verify_reduction(&inst, &sim, &bad, Mode::Strict).is_err());
        // wrong map: send everything to p0
        let all_p0: BTreeMap<u16, u16> = (0..4).map(|t| (t, 0)).collect();
        let r = witness_reduction(&inst, &sim, &all_p0).unwrap();
        assert!(!verify_reduction(&inst, &sim, &r, Mode::Strict).unwrap());
        assert!(!verify_reduction(&inst, &sim, &r, Mode::Lax).unwrap());
    }
}
