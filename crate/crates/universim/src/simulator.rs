//! Evaluation instances and simulators.
//!
//! An instance fixes three finite sets (targets, contexts, behaviors) and an
//! evaluation relation T ⊗ C -> B. A simulator over an instance adds a
//! program set with a compiler P -> T and a context reduction P ⊗ C -> C,
//! assembled into a single morphism s: P ⊗ C -> T ⊗ C that runs the compiler
//! and the reduction side by side on a shared program copy.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::finrel::{FiniteSet, Product, Rel, Tup};

/// A fixed evaluation scenario: which targets exist, which contexts they can
/// be run in, and what behavior each run produces.
#[derive(Debug, Clone)]
pub struct EvalInstance {
    pub targets: Arc<FiniteSet>,
    pub contexts: Arc<FiniteSet>,
    pub behaviors: Arc<FiniteSet>,
    /// T ⊗ C -> B.
    pub eval: Rel,
}

impl EvalInstance {
    pub fn new(
        targets: Arc<FiniteSet>,
        contexts: Arc<FiniteSet>,
        behaviors: Arc<FiniteSet>,
        eval: Rel,
    ) -> Result<EvalInstance> {
        let dom = Product::of(&targets).tensor(&Product::of(&contexts));
        let cod = Product::of(&behaviors);
        if eval.dom() != &dom || eval.cod() != &cod {
            return Err(Error::TypeMismatch(format!(
                "eval must have shape {} -> {}, got {} -> {}",
                dom.describe(),
                cod.describe(),
                eval.dom().describe(),
                eval.cod().describe()
            )));
        }
        Ok(EvalInstance { targets, contexts, behaviors, eval })
    }

    pub fn target_context(&self) -> Product {
        Product::of(&self.targets).tensor(&Product::of(&self.contexts))
    }

    /// Row of the eval table for one target: C -> B as a pair list in
    /// context order. Present pairs only; a partial eval leaves gaps.
    pub fn eval_row(&self, target: u16) -> Rel {
        let c = Product::of(&self.contexts);
        let b = Product::of(&self.behaviors);
        let mut pairs = std::collections::BTreeSet::new();
        for ((tc, beh), _) in self.eval.pairs().iter().map(|p| (p, ())) {
            if tc[0] == target {
                pairs.insert((vec![tc[1]], beh.clone()));
            }
        }
        Rel::from_pairs(c, b, pairs).expect("row tuples come from a checked eval")
    }

    pub fn eval_is_total(&self) -> bool {
        self.eval.is_total_function()
    }
}

/// A simulator over an instance. The assembled morphism is eager: all
/// downstream checks read `s` and the per-program behavior cache.
#[derive(Debug, Clone)]
pub struct Simulator {
    pub name: String,
    pub programs: Arc<FiniteSet>,
    /// P -> T.
    pub compiler: Rel,
    /// P ⊗ C -> C.
    pub context_reduction: Rel,
    /// P ⊗ C -> T ⊗ C, assembled from compiler and reduction.
    s: Rel,
    /// behavior(s, p): C -> B for each program, in program index order.
    behaviors: Vec<Rel>,
}

impl Simulator {
    pub fn new(
        name: impl Into<String>,
        instance: &EvalInstance,
        programs: Arc<FiniteSet>,
        compiler: Rel,
        context_reduction: Rel,
    ) -> Result<Simulator> {
        let p = Product::of(&programs);
        let c = Product::of(&instance.contexts);
        let t = Product::of(&instance.targets);
        let pc = p.tensor(&c);
        if compiler.dom() != &p || compiler.cod() != &t {
            return Err(Error::TypeMismatch(format!(
                "compiler must have shape {} -> {}, got {} -> {}",
                p.describe(),
                t.describe(),
                compiler.dom().describe(),
                compiler.cod().describe()
            )));
        }
        if context_reduction.dom() != &pc || context_reduction.cod() != &c {
            return Err(Error::TypeMismatch(format!(
                "context reduction must have shape {} -> {}, got {} -> {}",
                pc.describe(),
                c.describe(),
                context_reduction.dom().describe(),
                context_reduction.cod().describe()
            )));
        }

        // s(p,c) ∋ (t,c') iff compiler(p) ∋ t and reduction(p,c) ∋ c'.
        let tc = t.tensor(&c);
        let mut by_prog: BTreeMap<u16, Vec<&Tup>> = BTreeMap::new();
        for (x, y) in compiler.pairs() {
            by_prog.entry(x[0]).or_default().push(y);
        }
        let mut pairs = std::collections::BTreeSet::new();
        for (x, cred) in context_reduction.pairs() {
            if let Some(ts) = by_prog.get(&x[0]) {
                for tgt in ts {
                    let mut y = (*tgt).clone();
                    y.extend_from_slice(cred);
                    pairs.insert((x.clone(), y));
                }
            }
        }
        let s = Rel::from_pairs(pc.clone(), tc, pairs)?;

        let mut behaviors = Vec::with_capacity(programs.len());
        for pi in 0..programs.len() as u16 {
            let mut row = std::collections::BTreeSet::new();
            for (x, y) in s.pairs() {
                if x[0] == pi {
                    // behavior = eval after s, restricted to this program
                    for (txc, beh) in instance.eval.pairs() {
                        if txc == y {
                            row.insert((vec![x[1]], beh.clone()));
                        }
                    }
                }
            }
            behaviors.push(Rel::from_pairs(
                c.clone(),
                Product::of(&instance.behaviors),
                row,
            )?);
        }

        Ok(Simulator {
            name: name.into(),
            programs,
            compiler,
            context_reduction,
            s,
            behaviors,
        })
    }

    /// The assembled morphism P ⊗ C -> T ⊗ C.
    pub fn s(&self) -> &Rel {
        &self.s
    }

    /// behavior(self, p) = eval ∘ s ∘ (p ⊗ id): C -> B.
    pub fn behavior(&self, program: u16) -> &Rel {
        &self.behaviors[program as usize]
    }

    /// Distinct targets the compiler can produce, in index order.
    pub fn compiler_image(&self) -> Vec<u16> {
        let mut seen = std::collections::BTreeSet::new();
        for (_, y) in self.compiler.pairs() {
            seen.insert(y[0]);
        }
        seen.into_iter().collect()
    }

    /// Distinct behavior rows in first-occurrence (program index) order.
    pub fn reachable_behaviors(&self) -> Vec<&Rel> {
        let mut seen: Vec<&Rel> = Vec::new();
        for row in &self.behaviors {
            if !seen.iter().any(|r| r.same(row)) {
                seen.push(row);
            }
        }
        seen
    }

    /// The trivial simulator: P = T, compiler = id, reduction = projection
    /// onto the context. Its assembled morphism is the identity on T ⊗ C.
    pub fn trivial(instance: &EvalInstance) -> Simulator {
        let t = Product::of(&instance.targets);
        let c = Product::of(&instance.contexts);
        let tc = t.tensor(&c);
        let compiler = Rel::identity(&t);
        let reduction = Rel::projection(&tc, &[1]).expect("index 1 exists in T*C");
        Simulator::new("trivial", instance, Arc::clone(&instance.targets), compiler, reduction)
            .expect("trivial simulator is always well-shaped")
    }
}
