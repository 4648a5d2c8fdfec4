//! Diagonal constructions: behavior rows no target or program realizes.
//!
//! Given a fixed-point-free twist g on behaviors and an identification of
//! contexts with targets (or with programs of a universal simulator), the
//! twisted diagonal h(c) = g(eval(...)) disagrees with every row at its own
//! diagonal context. The result is a concrete unreachable behavior, with a
//! per-row trace showing exactly where each candidate realizer fails. The
//! same machinery scales up to the counting form: over an instance whose
//! targets encode all behavior rows, every simulator with as few programs
//! as contexts is checked exhaustively and none can be universal.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::finrel::{FiniteSet, Product, Rel};
use crate::search;
use crate::simulator::{EvalInstance, Simulator};
use crate::universality::{check_universality, verify_reduction, witness_reduction, Mode};

/// A bijection between two single-factor objects, kept with its inverse.
#[derive(Debug, Clone)]
pub struct Iso {
    forward: Rel,
    backward: Rel,
}

impl Iso {
    /// Validates that `forward` is a total bijective function and builds
    /// the inverse.
    pub fn new(forward: Rel) -> Result<Iso> {
        if !forward.is_total_function() {
            return Err(Error::TypeMismatch(
                "an isomorphism must be a total function".to_string(),
            ));
        }
        if forward.dom().card() != forward.cod().card()
            || forward.image().len() != forward.cod().card()
        {
            return Err(Error::TypeMismatch(format!(
                "{} -> {} is not a bijection",
                forward.dom().describe(),
                forward.cod().describe()
            )));
        }
        let backward = forward.transpose();
        Ok(Iso { forward, backward })
    }

    /// The identity iso on a set.
    pub fn identity(set: &Arc<FiniteSet>) -> Iso {
        let obj = Product::of(set);
        Iso { forward: Rel::identity(&obj), backward: Rel::identity(&obj) }
    }

    /// Pairs index i of the domain with index i of the codomain; the sets
    /// must have equal size.
    pub fn by_index(dom: &Arc<FiniteSet>, cod: &Arc<FiniteSet>) -> Result<Iso> {
        if dom.len() != cod.len() {
            return Err(Error::TypeMismatch(format!(
                "sets {} and {} differ in size",
                dom.name(),
                cod.name()
            )));
        }
        let forward = Rel::from_fn(
            Product::of(dom),
            Product::of(cod),
            |x| Some(vec![x[0]]),
        )?;
        Iso::new(forward)
    }

    pub fn forward(&self) -> &Rel {
        &self.forward
    }

    pub fn backward(&self) -> &Rel {
        &self.backward
    }

    pub fn apply(&self, i: u16) -> u16 {
        self.forward.apply_fn(&[i]).expect("validated total function")[0]
    }

    pub fn unapply(&self, i: u16) -> u16 {
        self.backward.apply_fn(&[i]).expect("validated bijection")[0]
    }
}

/// The lexicographically least fixed-point-free endomap on a set: element 0
/// goes to element 1, everything else goes to element 0. None when the set
/// is a singleton, which has no fixed-point-free map.
pub fn find_fixed_point_free(set: &Arc<FiniteSet>) -> Option<Rel> {
    if set.len() < 2 {
        return None;
    }
    let obj = Product::of(set);
    Some(
        Rel::from_fn(obj.clone(), obj, |x| Some(vec![if x[0] == 0 { 1 } else { 0 }]))
            .expect("indices are in range"),
    )
}

/// Confirms that g is a total endomap on B with no fixed point.
fn validate_twist(instance: &EvalInstance, g: &Rel) -> Result<()> {
    let b = Product::of(&instance.behaviors);
    if g.dom() != &b || g.cod() != &b {
        return Err(Error::TypeMismatch(format!(
            "twist must be an endomap on {}",
            b.describe()
        )));
    }
    if !g.is_total_function() {
        return Err(Error::TypeMismatch("twist must be a total function".to_string()));
    }
    for (x, y) in g.pairs() {
        if x == y {
            return Err(Error::FixedPointPresent(instance.behaviors.label(x[0]).to_string()));
        }
    }
    Ok(())
}

/// One row of a diagonal trace: where the candidate realizer disagrees
/// with the constructed behavior.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagonalStep {
    /// Candidate realizer: a target (direct form) or a program (simulator
    /// form).
    pub candidate: u16,
    /// The diagonal context assigned to the candidate.
    pub context: u16,
    /// What the candidate evaluates to there.
    pub evaluated: u16,
    /// What the constructed behavior demands there.
    pub constructed: u16,
}

#[derive(Debug, Clone)]
pub struct DiagonalReport {
    /// The unreachable behavior row, C -> B.
    pub h: Rel,
    pub trace: Vec<DiagonalStep>,
}

/// Builds the twisted diagonal directly against the targets. Requires a
/// total deterministic eval, an identification of targets with contexts,
/// and a fixed-point-free twist on behaviors. The resulting row differs
/// from every target's row; if it did not, the preconditions were broken
/// and the offending target is reported as an error.
pub fn diagonal_direct(instance: &EvalInstance, iso: &Iso, g: &Rel) -> Result<DiagonalReport> {
    if !instance.eval.is_total_function() {
        return Err(Error::TypeMismatch(
            "diagonal construction needs a total deterministic eval".to_string(),
        ));
    }
    let t = Product::of(&instance.targets);
    let c = Product::of(&instance.contexts);
    if iso.forward().dom() != &t || iso.forward().cod() != &c {
        return Err(Error::TypeMismatch(format!(
            "iso must identify {} with {}",
            t.describe(),
            c.describe()
        )));
    }
    validate_twist(instance, g)?;

    // h(c) = g(eval(iso^-1(c), c))
    let b = Product::of(&instance.behaviors);
    let h = Rel::from_fn(c.clone(), b, |x| {
        let target = iso.unapply(x[0]);
        let e = instance.eval.apply_fn(&[target, x[0]]).expect("eval is total");
        let twisted = g.apply_fn(&e).expect("twist is total");
        Some(twisted)
    })?;

    let mut trace = Vec::with_capacity(instance.targets.len());
    for target in 0..instance.targets.len() as u16 {
        let context = iso.apply(target);
        let evaluated = instance.eval.apply_fn(&[target, context])?[0];
        let constructed = h.apply_fn(&[context])?[0];
        if evaluated == constructed {
            return Err(Error::Internal(format!(
                "twist fixed the diagonal at target {}",
                instance.targets.label(target)
            )));
        }
        trace.push(DiagonalStep { candidate: target, context, evaluated, constructed });
    }
    // the trace already separates h from every row; double-check wholesale
    for target in 0..instance.targets.len() as u16 {
        if instance.eval_row(target).same(&h) {
            return Err(Error::RealizerFound {
                target: instance.targets.label(target).to_string(),
            });
        }
    }
    Ok(DiagonalReport { h, trace })
}

/// Builds the twisted diagonal through a strictly universal simulator,
/// identifying contexts with programs. The simulator's reduction witness
/// is re-verified first; the resulting row differs from every program's
/// behavior, hence (by universality) from every target's row.
pub fn diagonal_via_universal(
    instance: &EvalInstance,
    sim: &Simulator,
    iso: &Iso,
    g: &Rel,
) -> Result<DiagonalReport> {
    if !instance.eval.is_total_function() {
        return Err(Error::TypeMismatch(
            "diagonal construction needs a total deterministic eval".to_string(),
        ));
    }
    if !sim.s().is_total_function() {
        return Err(Error::TypeMismatch(
            "diagonal construction needs a deterministic simulator".to_string(),
        ));
    }
    let c = Product::of(&instance.contexts);
    let p = Product::of(&sim.programs);
    if iso.forward().dom() != &c || iso.forward().cod() != &p {
        return Err(Error::TypeMismatch(format!(
            "iso must identify {} with {}",
            c.describe(),
            p.describe()
        )));
    }
    validate_twist(instance, g)?;
    let report = check_universality(instance, sim, Mode::Strict);
    let witness = report.witness.as_ref().ok_or_else(|| {
        Error::NotUniversal(format!(
            "simulator {} is not strictly universal, the diagonal needs one",
            sim.name
        ))
    })?;
    let r = witness_reduction(instance, sim, witness)?;
    if !verify_reduction(instance, sim, &r, Mode::Strict)? {
        return Err(Error::Internal("universality witness failed re-verification".to_string()));
    }

    // h(c) = g(eval(s(iso(c), c)))
    let b = Product::of(&instance.behaviors);
    let h = Rel::from_fn(c.clone(), b, |x| {
        let program = iso.apply(x[0]);
        let tc = sim.s().apply_fn(&[program, x[0]]).expect("s is total");
        let e = instance.eval.apply_fn(&tc).expect("eval is total");
        Some(g.apply_fn(&e).expect("twist is total"))
    })?;

    let mut trace = Vec::with_capacity(sim.programs.len());
    for program in 0..sim.programs.len() as u16 {
        let context = iso.unapply(program);
        let tc = sim.s().apply_fn(&[program, context])?;
        let evaluated = instance.eval.apply_fn(&tc)?[0];
        let constructed = h.apply_fn(&[context])?[0];
        if evaluated == constructed {
            return Err(Error::Internal(format!(
                "twist fixed the diagonal at program {}",
                sim.programs.label(program)
            )));
        }
        trace.push(DiagonalStep { candidate: program, context, evaluated, constructed });
    }
    for program in 0..sim.programs.len() as u16 {
        if sim.behavior(program).same(&h) {
            return Err(Error::RealizerFound {
                target: sim.programs.label(program).to_string(),
            });
        }
    }
    for target in 0..instance.targets.len() as u16 {
        if instance.eval_row(target).same(&h) {
            return Err(Error::RealizerFound {
                target: instance.targets.label(target).to_string(),
            });
        }
    }
    Ok(DiagonalReport { h, trace })
}

#[derive(Debug, Clone)]
pub struct CantorReport {
    /// Simulators enumerated: every total compiler C -> T crossed with
    /// every total reduction C x C -> C.
    pub simulators_checked: u128,
    /// Name of a universal simulator if one was found (none can exist).
    pub universal_found: Option<String>,
    /// First-failing target -> how many simulators fail there first.
    pub counterexample_counts: BTreeMap<u16, u128>,
    /// Programs available to each simulator (= context count).
    pub program_bound: usize,
    pub target_count: usize,
}

/// Exhaustive counting form of the diagonal argument over an instance
/// whose targets encode all behavior rows: every simulator whose program
/// set is the context set fails strict universality, because its at most
/// |C| reachable behaviors cannot cover |B|^|C| distinct rows. All such
/// simulators with total-function compilers and reductions are enumerated
/// and checked.
pub fn cantor_nogo(instance: &EvalInstance) -> Result<CantorReport> {
    let nt = instance.targets.len();
    let nc = instance.contexts.len();
    let nb = instance.behaviors.len();
    if nb < 2 {
        return Err(Error::BoundsExceeded(
            "counting argument needs at least two behaviors".to_string(),
        ));
    }
    if !instance.eval.is_total_function() {
        return Err(Error::TypeMismatch(
            "counting argument needs a total deterministic eval".to_string(),
        ));
    }
    let expected = (nb as u128).checked_pow(nc as u32).ok_or_else(|| {
        Error::BoundsExceeded("behavior row space overflows".to_string())
    })?;
    if nt as u128 != expected {
        return Err(Error::TypeMismatch(format!(
            "targets must encode all {expected} behavior rows, got {nt}"
        )));
    }
    // rows must be pairwise distinct for the encoding to be faithful
    for a in 0..nt as u16 {
        for b in (a + 1)..nt as u16 {
            if instance.eval_row(a).same(&instance.eval_row(b)) {
                return Err(Error::TypeMismatch(format!(
                    "targets {} and {} have identical rows, the encoding is not faithful",
                    instance.targets.label(a),
                    instance.targets.label(b)
                )));
            }
        }
    }

    let compilers = (nt as u128).saturating_pow(nc as u32);
    let reductions = (nc as u128).saturating_pow((nc * nc) as u32);
    let total = compilers.saturating_mul(reductions);
    let limit = search::limit();
    if total > limit {
        return Err(Error::SearchSpaceTooLarge { estimate: total, limit });
    }

    let programs = Arc::clone(&instance.contexts);
    let p = Product::of(&programs);
    let t = Product::of(&instance.targets);
    let c = Product::of(&instance.contexts);
    let pc = p.tensor(&c);

    let mut counts: BTreeMap<u16, u128> = BTreeMap::new();
    let mut checked: u128 = 0;
    for comp_code in 0..compilers {
        let compiler = Rel::from_fn(p.clone(), t.clone(), |x| {
            let digit = (comp_code / (nt as u128).pow((nc - 1 - x[0] as usize) as u32))
                % nt as u128;
            Some(vec![digit as u16])
        })?;
        for red_code in 0..reductions {
            let reduction = Rel::from_fn(pc.clone(), c.clone(), |x| {
                let cell = (x[0] as usize) * nc + x[1] as usize;
                let digit = (red_code / (nc as u128).pow((nc * nc - 1 - cell) as u32))
                    % nc as u128;
                Some(vec![digit as u16])
            })?;
            let sim = Simulator::new(
                format!("enumerated-{comp_code}-{red_code}"),
                instance,
                Arc::clone(&programs),
                compiler.clone(),
                reduction,
            )?;
            checked += 1;
            let report = check_universality(instance, &sim, Mode::Strict);
            match report.counterexample {
                Some(t) => *counts.entry(t).or_insert(0) += 1,
                None => {
                    return Ok(CantorReport {
                        simulators_checked: checked,
                        universal_found: Some(sim.name),
                        counterexample_counts: counts,
                        program_bound: nc,
                        target_count: nt,
                    });
                }
            }
        }
    }
    Ok(CantorReport {
        simulators_checked: checked,
        universal_found: None,
        counterexample_counts: counts,
        program_bound: nc,
        target_count: nt,
    })
}
