//! Spectral obstructions to universality.
//!
//! Order targets by replayability: t' sits above t when a context
//! transformation makes t' reproduce t's evaluations. Any valuation that is
//! monotone for that order caps what a simulator with a functional compiler
//! can reach: every program's behavior replays some compiled target, so no
//! target whose valuation exceeds the compiler image's maximum can be
//! simulated. Finding such a target is a certificate of non-universality
//! that never runs the universality checker.
//!
//! The certificate is sound only under two preconditions checked here: the
//! compiler must not be relational (a program compiling to several targets
//! pools their ranges and breaks the cap), and the compiler image must be
//! nonempty (an empty image caps nothing).

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::finrel::Tup;
use crate::simulator::{EvalInstance, Simulator};

/// Behaviors attained by a target across all contexts.
pub fn behavior_range(instance: &EvalInstance, target: u16) -> BTreeSet<Tup> {
    instance
        .eval
        .pairs()
        .iter()
        .filter(|(x, _)| x[0] == target)
        .map(|(_, y)| y.clone())
        .collect()
}

/// Number of distinct behaviors a target attains. Monotone for both
/// preorders by construction: replaying rows can only shrink the attained
/// set.
pub fn spectrum_size(instance: &EvalInstance, target: u16) -> usize {
    behavior_range(instance, target).len()
}

/// Pairs (above, below): the above target replays the below target's rows
/// through some relational context transformation. Equivalent to range
/// containment, since the full relation is the best possible transformation.
pub fn lax_preorder(instance: &EvalInstance) -> BTreeSet<(u16, u16)> {
    let n = instance.targets.len() as u16;
    let ranges: Vec<BTreeSet<Tup>> = (0..n).map(|t| behavior_range(instance, t)).collect();
    let mut order = BTreeSet::new();
    for above in 0..n {
        for below in 0..n {
            if ranges[below as usize].is_subset(&ranges[above as usize]) {
                order.insert((above, below));
            }
        }
    }
    order
}

/// Pairs (above, below): some total context map phi satisfies
/// eval(below, c) = eval(above, phi(c)) for every context. The choice of
/// phi(c) is independent per context, so the pair is in the order exactly
/// when every context of the below target has an exact match among the
/// above target's contexts.
pub fn strict_preorder(instance: &EvalInstance) -> BTreeSet<(u16, u16)> {
    let n = instance.targets.len() as u16;
    let nc = instance.contexts.len() as u16;
    let col = |t: u16, c: u16| instance.eval.apply(&[t, c]);
    let mut order = BTreeSet::new();
    for above in 0..n {
        let above_cols: Vec<BTreeSet<Tup>> = (0..nc).map(|c| col(above, c)).collect();
        for below in 0..n {
            let fits = (0..nc).all(|c| {
                let want = col(below, c);
                above_cols.iter().any(|have| have == &want)
            });
            if fits {
                order.insert((above, below));
            }
        }
    }
    order
}

/// A valuation on targets, claimed monotone for the replayability order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonotoneWitness {
    pub name: String,
    /// One value per target, in target index order.
    pub values: Vec<u64>,
}

impl MonotoneWitness {
    /// Checks monotonicity against the lax preorder, which is the one the
    /// certificate's soundness argument uses. A violation names the pair.
    pub fn validate(&self, instance: &EvalInstance) -> Result<()> {
        if self.values.len() != instance.targets.len() {
            return Err(Error::TypeMismatch(format!(
                "witness {} has {} values for {} targets",
                self.name,
                self.values.len(),
                instance.targets.len()
            )));
        }
        for (above, below) in lax_preorder(instance) {
            if self.values[above as usize] < self.values[below as usize] {
                return Err(Error::WitnessNotMonotone {
                    witness: self.name.clone(),
                    above: instance.targets.label(above).to_string(),
                    below: instance.targets.label(below).to_string(),
                    above_value: self.values[above as usize],
                    below_value: self.values[below as usize],
                });
            }
        }
        Ok(())
    }
}

/// The spectrum-size valuation, always monotone.
pub fn spectrum_witness(instance: &EvalInstance) -> MonotoneWitness {
    MonotoneWitness {
        name: "spectrum-size".to_string(),
        values: (0..instance.targets.len() as u16)
            .map(|t| spectrum_size(instance, t) as u64)
            .collect(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NogoVerdict {
    /// The named target's valuation exceeds everything the compiler can
    /// reach: the simulator is not universal, in either mode.
    Obstructed { target: u16, value: u64, ceiling: u64 },
    /// No target beats the ceiling; the test says nothing either way.
    Inconclusive { reason: String },
}

#[derive(Debug, Clone)]
pub struct NogoReport {
    pub simulator: String,
    pub witness: String,
    /// Compiler image, target indices ascending.
    pub image: Vec<u16>,
    /// Max valuation over the image and where it is attained, when the
    /// image is nonempty.
    pub ceiling: Option<(u64, u16)>,
    pub verdict: NogoVerdict,
}

impl NogoReport {
    pub fn obstructed(&self) -> bool {
        matches!(self.verdict, NogoVerdict::Obstructed { .. })
    }
}

/// Runs the spectral test. Errors on a non-monotone witness or a
/// relational compiler; returns Inconclusive on an empty compiler image.
pub fn check_nogo(
    instance: &EvalInstance,
    sim: &Simulator,
    witness: &MonotoneWitness,
) -> Result<NogoReport> {
    witness.validate(instance)?;
    for p in 0..sim.programs.len() as u16 {
        if sim.compiler.apply(&[p]).len() > 1 {
            return Err(Error::RelationalCompiler(p as usize));
        }
    }
    let image = sim.compiler_image();
    if image.is_empty() {
        return Ok(NogoReport {
            simulator: sim.name.clone(),
            witness: witness.name.clone(),
            image,
            ceiling: None,
            verdict: NogoVerdict::Inconclusive {
                reason: "compiler image is empty, nothing is capped".to_string(),
            },
        });
    }
    // first target attaining the maximum, in canonical order
    let (ceiling, at) = image
        .iter()
        .map(|&t| (witness.values[t as usize], t))
        .reduce(|best, cur| if cur.0 > best.0 { cur } else { best })
        .expect("image is nonempty");
    let beating = (0..instance.targets.len() as u16)
        .find(|&t| witness.values[t as usize] > ceiling);
    let verdict = match beating {
        Some(t) => NogoVerdict::Obstructed {
            target: t,
            value: witness.values[t as usize],
            ceiling,
        },
        None => NogoVerdict::Inconclusive {
            reason: format!(
                "ceiling {ceiling} at {} is not exceeded by any target",
                instance.targets.label(at)
            ),
        },
    };
    Ok(NogoReport {
        simulator: sim.name.clone(),
        witness: witness.name.clone(),
        image,
        ceiling: Some((ceiling, at)),
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finrel::{FiniteSet, Product, Rel};
    use crate::instances::finfun::finfun_instance;
    use crate::simulator::Simulator;
    use crate::universality::{check_universality, Mode};
    use std::sync::Arc;

    /// Oracle for the strict preorder: enumerate every total map phi and
    /// test the replay equation directly.
    fn strict_preorder_by_enumeration(instance: &EvalInstance) -> BTreeSet<(u16, u16)> {
        let n = instance.targets.len() as u16;
        let nc = instance.contexts.len();
        let maps: Vec<Vec<u16>> = {
            let total = nc.pow(nc as u32);
            (0..total)
                .map(|k| {
                    (0..nc)
                        .map(|i| ((k / nc.pow((nc - 1 - i) as u32)) % nc) as u16)
                        .collect()
                })
                .collect()
        };
        let mut order = BTreeSet::new();
        for above in 0..n {
            for below in 0..n {
                let ok = maps.iter().any(|phi| {
                    (0..nc as u16).all(|c| {
                        instance.eval.apply(&[below, c])
                            == instance.eval.apply(&[above, phi[c as usize]])
                    })
                });
                if ok {
                    order.insert((above, below));
                }
            }
        }
        order
    }

    #[test]
    fn strict_preorder_matches_enumeration_oracle() {
        for (nc, nb) in [(2, 2), (2, 3), (3, 2)] {
            let inst = finfun_instance(nc, nb).unwrap();
            assert_eq!(
                strict_preorder(&inst),
                strict_preorder_by_enumeration(&inst),
                "({nc},{nb})"
            );
        }
    }

    /// Frozen on the (2,2) function space: constants attain one value, the
    /// others two; the lax order puts the two-value targets above
    /// everything and each constant only above itself.
    #[test]
    fn finfun22_spectra_and_orders() {
        let inst = finfun_instance(2, 2).unwrap();
        let sizes: Vec<usize> =
            (0..4).map(|t| spectrum_size(&inst, t)).collect();
        assert_eq!(sizes, vec![1, 2, 2, 1]);
        let lax = lax_preorder(&inst);
        // f01 and f10 attain everything, so they are above all four targets
        for below in 0..4 {
            assert!(lax.contains(&(1, below)));
            assert!(lax.contains(&(2, below)));
        }
        // constants are above themselves only
        assert!(lax.contains(&(0, 0)));
        assert!(!lax.contains(&(0, 3)));
        assert!(!lax.contains(&(3, 0)));
        // strict is contained in lax
        let strict = strict_preorder(&inst);
        assert!(strict.iter().all(|p| lax.contains(p)));
        // and the spectrum witness validates
        spectrum_witness(&inst).validate(&inst).unwrap();
    }

    #[test]
    fn non_monotone_witness_is_rejected_with_the_pair() {
        let inst = finfun_instance(2, 2).unwrap();
        // f01 is above f00 in the lax order, so valuing f00 higher breaks
        let bad = MonotoneWitness { name: "bad".into(), values: vec![5, 1, 2, 0] };
        let err = bad.validate(&inst).unwrap_err();
        match err {
            Error::WitnessNotMonotone { above, below, above_value, below_value, .. } => {
                assert_eq!((above.as_str(), below.as_str()), ("f01", "f00"));
                assert_eq!((above_value, below_value), (1, 5));
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    /// A compiler stuck on constant targets is obstructed by any
    /// two-valued target, and the universality checker agrees.
    #[test]
    fn constant_compiler_is_obstructed() {
        let inst = finfun_instance(2, 2).unwrap();
        let p = FiniteSet::new("P", vec!["p0".into(), "p1".into()]).unwrap();
        let pp = Product::of(&p);
        let t = Product::of(&inst.targets);
        let c = Product::of(&inst.contexts);
        // compile to the two constant targets f00 and f11
        let compiler =
            Rel::from_fn(pp.clone(), t, |x| Some(vec![if x[0] == 0 { 0 } else { 3 }])).unwrap();
        let reduction = Rel::from_fn(pp.tensor(&c), c.clone(), |x| Some(vec![x[1]])).unwrap();
        let sim = Simulator::new("consts", &inst, Arc::clone(&p), compiler, reduction).unwrap();
        let report = check_nogo(&inst, &sim, &spectrum_witness(&inst)).unwrap();
        assert_eq!(report.image, vec![0, 3]);
        assert_eq!(report.ceiling, Some((1, 0)));
        match report.verdict {
            NogoVerdict::Obstructed { target, value, ceiling } => {
                assert_eq!(target, 1); // f01 is the first two-valued target
                assert_eq!((value, ceiling), (2, 1));
            }
            ref other => panic!("expected obstruction, got {other:?}"),
        }
        assert!(!check_universality(&inst, &sim, Mode::Lax).universal);
        assert!(!check_universality(&inst, &sim, Mode::Strict).universal);
    }

    #[test]
    fn rich_compiler_is_inconclusive() {
        let inst = finfun_instance(2, 2).unwrap();
        let sim = Simulator::trivial(&inst);
        let report = check_nogo(&inst, &sim, &spectrum_witness(&inst)).unwrap();
        assert!(!report.obstructed());
        assert_eq!(report.ceiling, Some((2, 1)));
    }

    /// A relational compiler pools ranges and must be refused: compiling
    /// one program to both constants covers a two-valued row laxly even
    /// though every compiled target has spectrum one, which would fake an
    /// obstruction.
    #[test]
    fn relational_compiler_is_refused() {
        let inst = finfun_instance(2, 2).unwrap();
        let p = FiniteSet::new("P", vec!["p".into()]).unwrap();
        let pp = Product::of(&p);
        let t = Product::of(&inst.targets);
        let c = Product::of(&inst.contexts);
        let compiler = Rel::from_pairs(
            pp.clone(),
            t,
            [(vec![0u16], vec![0u16]), (vec![0], vec![3])].into(),
        )
        .unwrap();
        // reduction relates every context to every context
        let mut red_pairs = std::collections::BTreeSet::new();
        for ci in 0..2u16 {
            for co in 0..2u16 {
                red_pairs.insert((vec![0, ci], vec![co]));
            }
        }
        let reduction = Rel::from_pairs(pp.tensor(&c), c.clone(), red_pairs).unwrap();
        let sim = Simulator::new("pooled", &inst, Arc::clone(&p), compiler, reduction).unwrap();
        // the pooled program laxly covers the two-valued rows that the
        // per-target ceiling says are unreachable
        let row = inst.eval_row(1);
        assert!(sim.behavior(0).subsumes(&row).unwrap());
        let err = check_nogo(&inst, &sim, &spectrum_witness(&inst)).unwrap_err();
        assert_eq!(err, Error::RelationalCompiler(0));
    }

    #[test]
    fn empty_image_is_inconclusive() {
        let inst = finfun_instance(2, 2).unwrap();
        let p = FiniteSet::new("P", vec!["p".into()]).unwrap();
        let pp = Product::of(&p);
        let t = Product::of(&inst.targets);
        let c = Product::of(&inst.contexts);
        let compiler = Rel::empty(pp.clone(), t);
        let reduction = Rel::from_fn(pp.tensor(&c), c.clone(), |x| Some(vec![x[1]])).unwrap();
        let sim = Simulator::new("mute", &inst, Arc::clone(&p), compiler, reduction).unwrap();
        let report = check_nogo(&inst, &sim, &spectrum_witness(&inst)).unwrap();
        assert!(!report.obstructed());
        assert_eq!(report.ceiling, None);
    }
}
