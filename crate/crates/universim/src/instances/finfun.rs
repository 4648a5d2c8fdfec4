//! The function-space instance: targets are all total functions from a
//! small context set to a small behavior set, and evaluation is
//! application. The companion single-target simulator compiles every
//! program to one fixed target and does all its work in the context
//! reduction, which makes it the minimal interesting example of
//! universality without a rich target set.


use crate::error::{Error, Result};
use crate::finrel::{FiniteSet, Product, Rel};
use crate::simulator::{EvalInstance, Simulator};

/// Digit i of `k` written base `radix` with `width` digits, most
/// significant first.
fn digit(k: usize, i: usize, radix: usize, width: usize) -> usize {
    (k / radix.pow((width - 1 - i) as u32)) % radix
}

/// Builds the instance whose targets are all functions from
/// {c0..c(n-1)} to {b0..b(m-1)}. Target f<d0..d(n-1)> sends ci to b<di>,
/// so label order, index order and enumeration order all agree.
/// Kept to single-digit alphabets so that agreement is by construction.
pub fn finfun_instance(n_contexts: usize, n_behaviors: usize) -> Result<EvalInstance> {
    if !(1..=9).contains(&n_contexts) || !(1..=9).contains(&n_behaviors) {
        return Err(Error::BoundsExceeded(format!(
            "function-space instance needs 1..=9 contexts and behaviors, got ({n_contexts},{n_behaviors})"
        )));
    }
    let n_targets = n_behaviors.checked_pow(n_contexts as u32).ok_or_else(|| {
        Error::BoundsExceeded("function space overflows".to_string())
    })?;
    if n_targets > u16::MAX as usize {
        return Err(Error::BoundsExceeded(format!(
            "function space has {n_targets} targets, too many"
        )));
    }
    let targets = FiniteSet::new(
        "T",
        (0..n_targets)
            .map(|k| {
                let digits: String = (0..n_contexts)
                    .map(|i| char::from_digit(digit(k, i, n_behaviors, n_contexts) as u32, 10).unwrap())
                    .collect();
                format!("f{digits}")
            })
            .collect(),
    )?;
    let contexts = FiniteSet::new("C", (0..n_contexts).map(|i| format!("c{i}")).collect())?;
    let behaviors = FiniteSet::new("B", (0..n_behaviors).map(|i| format!("b{i}")).collect())?;
    let dom = Product::of(&targets).tensor(&Product::of(&contexts));
    let eval = Rel::from_fn(dom, Product::of(&behaviors), |x| {
        Some(vec![digit(x[0] as usize, x[1] as usize, n_behaviors, n_contexts) as u16])
    })?;
    EvalInstance::new(targets, contexts, behaviors, eval)
}

/// Index of the diagonal target ci -> bi; only exists when the instance
/// has as many behaviors as contexts.
fn diagonal_target(n: usize) -> usize {
    (0..n).fold(0, |acc, i| acc * n + i)
}

/// The single-target simulator over a square function-space instance:
/// one program per endomap of C, every program compiles to the diagonal
/// target, and the reduction applies the program's endomap to the context.
pub fn singleton_simulator(instance: &EvalInstance) -> Result<Simulator> {
    truncated_singleton(instance, instance.contexts.len().pow(instance.contexts.len() as u32))
}

/// Same as the single-target simulator but keeping only the first `keep`
/// endomap programs (in enumeration order). Used to break universality on
/// purpose.
pub fn truncated_singleton(instance: &EvalInstance, keep: usize) -> Result<Simulator> {
    let nc = instance.contexts.len();
    if instance.behaviors.len() != nc {
        return Err(Error::TypeMismatch(format!(
            "single-target simulator needs |C| = |B|, got {} and {}",
            nc,
            instance.behaviors.len()
        )));
    }
    let total = nc.pow(nc as u32);
    if keep == 0 || keep > total {
        return Err(Error::BoundsExceeded(format!(
            "keep must be in 1..={total}, got {keep}"
        )));
    }
    let width = (total - 1).to_string().len();
    let programs = FiniteSet::new(
        "P",
        (0..keep).map(|k| format!("p{k:0width$}")).collect(),
    )?;
    let p = Product::of(&programs);
    let t = Product::of(&instance.targets);
    let c = Product::of(&instance.contexts);
    let diag = diagonal_target(nc) as u16;
    let compiler = Rel::from_fn(p.clone(), t, |_| Some(vec![diag]))?;
    let reduction = Rel::from_fn(p.tensor(&c), c.clone(), |x| {
        Some(vec![digit(x[0] as usize, x[1] as usize, nc, nc) as u16])
    })?;
    Simulator::new("singleton", instance, programs, compiler, reduction)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Frozen shape and table for the (2,2) space.
    #[test]
    fn finfun22_is_the_expected_table() {
        let inst = finfun_instance(2, 2).unwrap();
        let t: Vec<&str> = inst.targets.labels().collect();
        assert_eq!(t, vec!["f00", "f01", "f10", "f11"]);
        let c: Vec<&str> = inst.contexts.labels().collect();
        assert_eq!(c, vec!["c0", "c1"]);
        let b: Vec<&str> = inst.behaviors.labels().collect();
        assert_eq!(b, vec!["b0", "b1"]);
        assert!(inst.eval_is_total());
        // eval(f<d0d1>, ci) = b<di>
        let expect = [
            ((0, 0), 0), ((0, 1), 0), // f00
            ((1, 0), 0), ((1, 1), 1), // f01
            ((2, 0), 1), ((2, 1), 0), // f10
            ((3, 0), 1), ((3, 1), 1), // f11
        ];
        for ((t, c), b) in expect {
            assert_eq!(inst.eval.apply_fn(&[t, c]).unwrap(), vec![b], "eval({t},{c})");
        }
    }

    #[test]
    fn finfun32_rows() {
        let inst = finfun_instance(3, 2).unwrap();
        assert_eq!(inst.targets.len(), 8);
        assert_eq!(inst.targets.label(5), "f101");
        // f101: c0 -> b1, c1 -> b0, c2 -> b1
        assert_eq!(inst.eval.apply_fn(&[5, 0]).unwrap(), vec![1]);
        assert_eq!(inst.eval.apply_fn(&[5, 1]).unwrap(), vec![0]);
        assert_eq!(inst.eval.apply_fn(&[5, 2]).unwrap(), vec![1]);
    }

    #[test]
    fn bounds_are_enforced() {
        assert!(finfun_instance(0, 2).is_err());
        assert!(finfun_instance(2, 10).is_err());
        assert!(finfun_instance(9, 9).is_err()); // 9^9 > u16::MAX
    }

    /// Frozen behavior table of the four endomap programs: p0 plays the
    /// constant-b0 target, p1 the diagonal, p2 the transposition, p3 the
    /// constant-b1 target.
    #[test]
    fn singleton_behaviors_enumerate_endomaps() {
        let inst = finfun_instance(2, 2).unwrap();
        let sim = singleton_simulator(&inst).unwrap();
        assert_eq!(sim.programs.len(), 4);
        let labels: Vec<&str> = sim.programs.labels().collect();
        assert_eq!(labels, vec!["p0", "p1", "p2", "p3"]);
        // compiler is constant at the diagonal target f01
        assert_eq!(sim.compiler_image(), vec![1]);
        let expect_rows: [[u16; 2]; 4] = [
            [0, 0], // p0: const c0, behavior const b0
            [0, 1], // p1: identity endomap
            [1, 0], // p2: swap
            [1, 1], // p3: const c1
        ];
        for (k, row) in expect_rows.iter().enumerate() {
            let beh = sim.behavior(k as u16);
            for (ci, &bi) in row.iter().enumerate() {
                assert_eq!(
                    beh.apply_fn(&[ci as u16]).unwrap(),
                    vec![bi],
                    "behavior(p{k}) at c{ci}"
                );
            }
        }
        assert_eq!(sim.reachable_behaviors().len(), 4);
    }

    #[test]
    fn singleton_needs_square_space() {
        let inst = finfun_instance(2, 3).unwrap();
        assert!(singleton_simulator(&inst).is_err());
    }

    #[test]
    fn truncation_keeps_prefix() {
        let inst = finfun_instance(2, 2).unwrap();
        let sim = truncated_singleton(&inst, 3).unwrap();
        assert_eq!(sim.programs.len(), 3);
        assert_eq!(sim.reachable_behaviors().len(), 3);
        assert!(truncated_singleton(&inst, 0).is_err());
        assert!(truncated_singleton(&inst, 5).is_err());
    }
}
