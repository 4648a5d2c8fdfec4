//! Parsimony comparison between two simulators over one instance.
//!
//! A morphism from simulator A to simulator B is a pair (programPre,
//! postProc) with programPre a total function from B's programs to A's and
//! postProc a relation on T ⊗ C, such that
//!
//!   (i)  s_B = postProc ∘ s_A ∘ (programPre ⊗ id_C), and
//!   (ii) every B-program's behavior matches the behavior of its
//!        programPre image (equality in strict mode, containment of the
//!        image's behavior in lax mode).
//!
//! Existence of a morphism A -> B certifies that B does everything with
//! wrappers around A's machinery, placing B at or above A in the parsimony
//! preorder. The search is exhaustive over behavior-compatible programPre
//! maps; for each map the canonical maximal postProc (the residual) decides
//! existence, so a completed search that finds nothing is a proof of
//! nonexistence.

use std::fmt;

use crate::error::{Error, Result};
use crate::finrel::{Product, Rel, Tup};
use crate::search;
use crate::simulator::{EvalInstance, Simulator};
use crate::universality::{check_universality, Mode};

/// A witnessed morphism between simulators over the same instance.
#[derive(Debug, Clone)]
pub struct SimMorphism {
    pub from: String,
    pub to: String,
    /// Total function P_to -> P_from (next to the simulator it feeds).
    pub program_pre: Rel,
    /// Relation on T ⊗ C applied after running `from`.
    pub post_proc: Rel,
}

/// Record of a completed exhaustive search that found no morphism.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExhaustionProof {
    /// Behavior-compatible candidate count per program of `to`.
    pub candidate_counts: Vec<usize>,
    /// All total maps P_to -> P_from, before behavior filtering.
    pub maps_total: u128,
    /// Assignments that survived the behavior filter and were checked.
    pub assignments_checked: u128,
    /// First `to`-program with no behavior-compatible candidate, if any.
    pub empty_candidates_at: Option<u16>,
}

#[derive(Debug, Clone)]
pub enum MorphismSearch {
    Found(SimMorphism),
    RuledOut(ExhaustionProof),
}

/// How two simulators sit relative to each other in the parsimony
/// preorder. "Above" means the higher one is reachable from the lower by a
/// morphism, i.e. it achieves the same evaluations with wrappers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParsimonyRelation {
    Equivalent,
    FirstStrictlyAbove,
    SecondStrictlyAbove,
    /// Morphism second -> first found; the reverse search hit the limit.
    FirstAtLeast,
    /// Morphism first -> second found; the reverse search hit the limit.
    SecondAtLeast,
    Incomparable,
}

impl fmt::Display for ParsimonyRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ParsimonyRelation::Equivalent => "equivalent",
            ParsimonyRelation::FirstStrictlyAbove => "first-strictly-above",
            ParsimonyRelation::SecondStrictlyAbove => "second-strictly-above",
            ParsimonyRelation::FirstAtLeast => "first-at-least",
            ParsimonyRelation::SecondAtLeast => "second-at-least",
            ParsimonyRelation::Incomparable => "incomparable",
        };
        write!(f, "{s}")
    }
}

#[derive(Debug, Clone)]
pub enum SearchOutcome {
    Found(SimMorphism),
    RuledOut(ExhaustionProof),
    /// Search space exceeded the limit; nothing is known.
    Unknown { estimate: u128, limit: u128 },
}

#[derive(Debug, Clone)]
pub struct ParsimonyReport {
    pub first: String,
    pub second: String,
    pub mode: Mode,
    pub relation: ParsimonyRelation,
    pub first_to_second: SearchOutcome,
    pub second_to_first: SearchOutcome,
}

/// Result of re-checking a claimed morphism.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MorphismCheck {
    /// Condition (i): the factorization through `from` reproduces s_to.
    pub factorization_ok: bool,
    /// Condition (ii): per-program behaviors line up under the mode.
    pub behaviors_ok: bool,
    /// First `to`-program violating (ii), if any.
    pub failing_program: Option<u16>,
}

impl MorphismCheck {
    pub fn ok(&self) -> bool {
        self.factorization_ok && self.behaviors_ok
    }
}

/// Re-checks both morphism conditions from scratch.
pub fn verify_morphism(
    instance: &EvalInstance,
    from: &Simulator,
    to: &Simulator,
    m: &SimMorphism,
    mode: Mode,
) -> Result<MorphismCheck> {
    let p_to = Product::of(&to.programs);
    let p_from = Product::of(&from.programs);
    if m.program_pre.dom() != &p_to || m.program_pre.cod() != &p_from {
        return Err(Error::TypeMismatch(format!(
            "programPre must have shape {} -> {}",
            p_to.describe(),
            p_from.describe()
        )));
    }
    if !m.program_pre.is_total_function() {
        return Err(Error::TypeMismatch(
            "programPre must be a total function on programs".to_string(),
        ));
    }
    let tc = instance.target_context();
    if m.post_proc.dom() != &tc || m.post_proc.cod() != &tc {
        return Err(Error::TypeMismatch(format!(
            "postProc must be an endorelation on {}",
            tc.describe()
        )));
    }

    let c = Product::of(&instance.contexts);
    let id_c = Rel::identity(&c);
    let rebuilt = m
        .program_pre
        .tensor(&id_c)
        .compose(from.s())?
        .compose(&m.post_proc)?;
    let factorization_ok = rebuilt.same(to.s());

    let mut behaviors_ok = true;
    let mut failing_program = None;
    for q in 0..to.programs.len() as u16 {
        let p = m.program_pre.apply_fn(&[q])?[0];
        let b_to = to.behavior(q);
        let b_from = from.behavior(p);
        let ok = match mode {
            Mode::Strict => b_to.same(b_from),
            Mode::Lax => b_to.subsumes(b_from)?,
        };
        if !ok {
            behaviors_ok = false;
            failing_program = Some(q);
            break;
        }
    }
    Ok(MorphismCheck { factorization_ok, behaviors_ok, failing_program })
}

/// The canonical maximal postProc for a fixed programPre: each point in the
/// image of `m` goes to the intersection of s_to over everything mapping
/// there, extended by the identity off the image. If any postProc works,
/// this one does, so a failed check rules the programPre out.
fn residual_post(tc: &Product, m: &Rel, s_to: &Rel) -> Option<Rel> {
    use std::collections::{BTreeMap, BTreeSet};
    let mut meet: BTreeMap<Tup, BTreeSet<Tup>> = BTreeMap::new();
    for (pc, x) in m.pairs() {
        let allowed = s_to.apply(pc);
        meet.entry(x.clone())
            .and_modify(|cur| {
                cur.retain(|y| allowed.contains(y));
            })
            .or_insert(allowed);
    }
    let mut pairs = BTreeSet::new();
    for (x, ys) in &meet {
        if ys.is_empty() {
            return None;
        }
        for y in ys {
            pairs.insert((x.clone(), y.clone()));
        }
    }
    for x in tc.elements() {
        if !meet.contains_key(&x) {
            pairs.insert((x.clone(), x));
        }
    }
    let q = Rel::from_pairs(tc.clone(), tc.clone(), pairs).expect("residual tuples are in range");
    let composite = m.compose(&q).expect("shapes match by construction");
    if composite.same(s_to) {
        Some(q)
    } else {
        None
    }
}

/// Exhaustive morphism search from `from` to `to` under `mode`, bounded by
/// the global search limit.
pub fn find_morphism(
    instance: &EvalInstance,
    from: &Simulator,
    to: &Simulator,
    mode: Mode,
) -> Result<MorphismSearch> {
    find_morphism_with_limit(instance, from, to, mode, search::limit())
}

pub fn find_morphism_with_limit(
    instance: &EvalInstance,
    from: &Simulator,
    to: &Simulator,
    mode: Mode,
    limit: u128,
) -> Result<MorphismSearch> {
    let n_to = to.programs.len();
    let n_from = from.programs.len();
    let maps_total = (n_from as u128).saturating_pow(n_to as u32);

    // Condition (ii) pins each to-program to behavior-compatible
    // candidates; any morphism must pick programPre inside these sets, so
    // exhausting their product covers all of maps_total.
    let mut candidates: Vec<Vec<u16>> = Vec::with_capacity(n_to);
    let mut empty_at = None;
    for q in 0..n_to as u16 {
        let b_to = to.behavior(q);
        let cands: Vec<u16> = (0..n_from as u16)
            .filter(|&p| {
                let b_from = from.behavior(p);
                match mode {
                    Mode::Strict => b_to.same(b_from),
                    Mode::Lax => b_to.subsumes(b_from).expect("behaviors share C -> B"),
                }
            })
            .collect();
        if cands.is_empty() && empty_at.is_none() {
            empty_at = Some(q);
        }
        candidates.push(cands);
    }
    let counts: Vec<usize> = candidates.iter().map(|c| c.len()).collect();
    if let Some(q) = empty_at {
        return Ok(MorphismSearch::RuledOut(ExhaustionProof {
            candidate_counts: counts,
            maps_total,
            assignments_checked: 0,
            empty_candidates_at: Some(q),
        }));
    }
    let product: u128 = counts.iter().fold(1u128, |acc, &c| acc.saturating_mul(c as u128));
    if product > limit {
        return Err(Error::SearchSpaceTooLarge { estimate: product, limit });
    }

    let p_to = Product::of(&to.programs);
    let p_from = Product::of(&from.programs);
    let c = Product::of(&instance.contexts);
    let id_c = Rel::identity(&c);
    let tc = instance.target_context();

    let mut idx = vec![0usize; n_to];
    let mut checked: u128 = 0;
    loop {
        checked += 1;
        let pre = Rel::from_fn(p_to.clone(), p_from.clone(), |x| {
            Some(vec![candidates[x[0] as usize][idx[x[0] as usize]]])
        })?;
        let m = pre.tensor(&id_c).compose(from.s())?;
        if let Some(post) = residual_post(&tc, &m, to.s()) {
            let morphism = SimMorphism {
                from: from.name.clone(),
                to: to.name.clone(),
                program_pre: pre,
                post_proc: post,
            };
            debug_assert!(verify_morphism(instance, from, to, &morphism, mode)?.ok());
            return Ok(MorphismSearch::Found(morphism));
        }
        // odometer over candidate indices
        let mut k = n_to;
        loop {
            if k == 0 {
                return Ok(MorphismSearch::RuledOut(ExhaustionProof {
                    candidate_counts: counts,
                    maps_total,
                    assignments_checked: checked,
                    empty_candidates_at: None,
                }));
            }
            k -= 1;
            if idx[k] + 1 < candidates[k].len() {
                idx[k] += 1;
                for i in idx.iter_mut().skip(k + 1) {
                    *i = 0;
                }
                break;
            }
        }
    }
}

/// Picks the comparison mode both simulators support: strict if both are
/// strictly universal, else lax if both are laxly universal, else an error
/// naming the simulator that fails.
pub fn comparison_mode(
    instance: &EvalInstance,
    first: &Simulator,
    second: &Simulator,
) -> Result<Mode> {
    let strict = |s: &Simulator| check_universality(instance, s, Mode::Strict).universal;
    if strict(first) && strict(second) {
        return Ok(Mode::Strict);
    }
    for (sim, mode) in [(first, Mode::Lax), (second, Mode::Lax)] {
        if !check_universality(instance, sim, mode).universal {
            return Err(Error::NotUniversal(format!(
                "simulator {} is not universal over the instance, parsimony comparison is undefined",
                sim.name
            )));
        }
    }
    Ok(Mode::Lax)
}

pub fn compare_parsimony(
    instance: &EvalInstance,
    first: &Simulator,
    second: &Simulator,
) -> Result<ParsimonyReport> {
    compare_parsimony_with_limit(instance, first, second, search::limit())
}

pub fn compare_parsimony_with_limit(
    instance: &EvalInstance,
    first: &Simulator,
    second: &Simulator,
    limit: u128,
) -> Result<ParsimonyReport> {
    let mode = comparison_mode(instance, first, second)?;
    let run = |from: &Simulator, to: &Simulator| -> Result<SearchOutcome> {
        match find_morphism_with_limit(instance, from, to, mode, limit) {
            Ok(MorphismSearch::Found(m)) => Ok(SearchOutcome::Found(m)),
            Ok(MorphismSearch::RuledOut(p)) => Ok(SearchOutcome::RuledOut(p)),
            Err(Error::SearchSpaceTooLarge { estimate, limit }) => {
                Ok(SearchOutcome::Unknown { estimate, limit })
            }
            Err(e) => Err(e),
        }
    };
    let first_to_second = run(first, second)?;
    let second_to_first = run(second, first)?;
    use SearchOutcome::*;
    let relation = match (&first_to_second, &second_to_first) {
        (Found(_), Found(_)) => ParsimonyRelation::Equivalent,
        (Found(_), RuledOut(_)) => ParsimonyRelation::SecondStrictlyAbove,
        (RuledOut(_), Found(_)) => ParsimonyRelation::FirstStrictlyAbove,
        (RuledOut(_), RuledOut(_)) => ParsimonyRelation::Incomparable,
        (Found(_), Unknown { .. }) => ParsimonyRelation::SecondAtLeast,
        (Unknown { .. }, Found(_)) => ParsimonyRelation::FirstAtLeast,
        (Unknown { estimate, limit }, _) | (_, Unknown { estimate, limit }) => {
            return Err(Error::SearchSpaceTooLarge { estimate: *estimate, limit: *limit });
        }
    };
    Ok(ParsimonyReport {
        first: first.name.clone(),
        second: second.name.clone(),
        mode,
        relation,
        first_to_second,
        second_to_first,
    })
}
