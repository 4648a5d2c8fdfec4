//! A single machine that runs every encodable machine: it reads a paired
//! program/context input, lays the tape out as
//!
//!   ^ [doubled program] $ $ [simulated tape]
//!
//! and then repeats fetch/execute rounds against the program table. The
//! program region keeps the doubled pairing form, so every logical bit sits
//! in the second cell of a two-cell chunk; the simulated tape holds bits,
//! explicit blanks `b`, and exactly one marked cell `0^`/`1^`/`b^` for the
//! simulated head. The finite control carries the simulated state (one of
//! 2^S values for S-bit encodings) plus the symbol under the simulated
//! head, which is what makes a fixed-width encoding necessary: the
//! interpreter is built for the bounds, not for any one machine.
//!
//! Malformed inputs either get stuck or enter a spin state; both read as
//! the bottom behavior under a budget, matching how a garbage program
//! "runs" in the direct semantics.

use crate::error::{Error, Result};
use crate::finrel::{FiniteSet, Product, Rel};
use crate::instances::turing::{
    behavior_label, bitstrings, encode, pair, string_label, tm_run, EncodingBounds,
    MachineBuilder, Move, Outcome, RunBudget, TuringMachine,
};
use crate::simulator::{EvalInstance, Simulator};

const UNMARKED: [&str; 3] = ["0", "1", "b"];
const MARKED: [&str; 3] = ["0^", "1^", "b^"];

fn bit_name(b: u32) -> &'static str {
    if b == 1 {
        "1"
    } else {
        "0"
    }
}

/// Key bits of a record for simulated state `q` and symbol value `y`:
/// the state field, then the two-bit symbol code.
fn key_bits(q: u32, y: u32, s_bits: usize) -> Vec<u32> {
    let mut bits: Vec<u32> = (0..s_bits).rev().map(|i| q >> i & 1).collect();
    bits.push(y >> 1 & 1);
    bits.push(y & 1);
    bits
}

/// Builds the interpreter for a set of encoding bounds.
pub fn universal_machine(bounds: &EncodingBounds) -> TuringMachine {
    let s_bits = bounds.state_bits();
    let nq: u32 = 1 << s_bits;
    let key_len = s_bits + 2;
    let rc = 2 * (2 * s_bits + 6); // cells per record

    let mut b = MachineBuilder::new(&["_", "0", "1", "b", "0^", "1^", "b^", "^", "$"]);
    b.start("init");
    b.halt("done");

    // Layout: step left, plant the boundary, then walk the chunks. A
    // program chunk starts with 0; the 11 separator becomes $ $; the first
    // context cell (or the blank after the separator) gets the head mark.
    for x in ["0", "1", "_"] {
        b.rule("init", x, "lmark", x, Move::L);
    }
    b.rule("lmark", "_", "pairs", "^", Move::R);
    b.rule("pairs", "0", "pairs2", "0", Move::R);
    b.rule("pairs", "1", "sep2", "$", Move::R);
    b.rule("pairs", "_", "spin", "_", Move::S);
    b.rule("pairs2", "0", "pairs", "0", Move::R);
    b.rule("pairs2", "1", "pairs", "1", Move::R);
    b.rule("pairs2", "_", "spin", "_", Move::S);
    b.rule("sep2", "1", "markhead", "$", Move::R);
    b.rule("sep2", "0", "spin", "0", Move::S);
    b.rule("sep2", "_", "spin", "_", Move::S);
    b.rule("markhead", "0", "rwi_0", "0^", Move::L);
    b.rule("markhead", "1", "rwi_1", "1^", Move::L);
    b.rule("markhead", "_", "rwi_2", "b^", Move::L);

    // First rewind: only the head symbol is known; the start state still
    // has to be read out of the header.
    for y in 0..3u32 {
        let rwi = format!("rwi_{y}");
        for pass in ["0", "1", "b", "$"] {
            b.rule(&rwi, pass, &rwi, pass, Move::L);
        }
        b.rule(&rwi, "^", &format!("his_{y}_0"), "^", Move::R);
        for i in 0..2 * s_bits {
            let cur = format!("his_{y}_{i}");
            let next = if i + 1 == 2 * s_bits {
                format!("hrs_f_{y}_0_0")
            } else {
                format!("his_{y}_{}", i + 1)
            };
            for s in ["0", "1"] {
                b.rule(&cur, s, &next, s, Move::R);
            }
        }
        for j in 0..s_bits {
            for v in 0..(1u32 << j) {
                let f = format!("hrs_f_{y}_{j}_{v}");
                let vv = format!("hrs_v_{y}_{j}_{v}");
                b.rule(&f, "0", &vv, "0", Move::R);
                for bit in 0..2u32 {
                    let v2 = 2 * v + bit;
                    let next = if j + 1 == s_bits {
                        format!("scan_f_{v2}_{y}_0")
                    } else {
                        format!("hrs_f_{y}_{}_{v2}", j + 1)
                    };
                    b.rule(&vv, bit_name(bit), &next, bit_name(bit), Move::R);
                }
            }
        }
    }

    // Fetch: compare the record key against (q, y) bit by bit; a mismatch
    // skips the rest of the fixed-width record, exhausting the table means
    // the simulated machine is stuck.
    for q in 0..nq {
        for y in 0..3u32 {
            let key = key_bits(q, y, s_bits);
            for (j, &expected) in key.iter().enumerate() {
                let f = format!("scan_f_{q}_{y}_{j}");
                let vv = format!("scan_v_{q}_{y}_{j}");
                b.rule(&f, "0", &vv, "0", Move::R);
                if j == 0 {
                    b.rule(&f, "$", "spin", "$", Move::S);
                }
                for bit in 0..2u32 {
                    let sym = bit_name(bit);
                    if bit == expected {
                        let next = if j + 1 == key_len {
                            "pay_ns_f_0_0".to_string()
                        } else {
                            format!("scan_f_{q}_{y}_{}", j + 1)
                        };
                        b.rule(&vv, sym, &next, sym, Move::R);
                    } else {
                        let k = rc - 2 * j - 2;
                        b.rule(&vv, sym, &format!("skip_{q}_{y}_{k}"), sym, Move::R);
                    }
                }
            }
            for k in 1..=(rc - 2) {
                let cur = format!("skip_{q}_{y}_{k}");
                let next = if k == 1 {
                    format!("scan_f_{q}_{y}_0")
                } else {
                    format!("skip_{q}_{y}_{}", k - 1)
                };
                for s in ["0", "1"] {
                    b.rule(&cur, s, &next, s, Move::R);
                }
            }
        }
    }

    // Payload: new state, new symbol, move. Old state and symbol are dead
    // once the key matched, so these families are shared across keys. A
    // symbol code of 3 has no rule and sticks, 3 as a move means halt.
    for j in 0..s_bits {
        for v in 0..(1u32 << j) {
            let f = format!("pay_ns_f_{j}_{v}");
            let vv = format!("pay_ns_v_{j}_{v}");
            b.rule(&f, "0", &vv, "0", Move::R);
            for bit in 0..2u32 {
                let v2 = 2 * v + bit;
                let next = if j + 1 == s_bits {
                    format!("pay_sy_f_{v2}_0_0")
                } else {
                    format!("pay_ns_f_{}_{v2}", j + 1)
                };
                b.rule(&vv, bit_name(bit), &next, bit_name(bit), Move::R);
            }
        }
    }
    for q2 in 0..nq {
        for j in 0..2usize {
            for v in 0..(1u32 << j) {
                let f = format!("pay_sy_f_{q2}_{j}_{v}");
                let vv = format!("pay_sy_v_{q2}_{j}_{v}");
                b.rule(&f, "0", &vv, "0", Move::R);
                for bit in 0..2u32 {
                    let v2 = 2 * v + bit;
                    if j == 1 {
                        if v2 <= 2 {
                            b.rule(
                                &vv,
                                bit_name(bit),
                                &format!("pay_mv_f_{q2}_{v2}_0_0"),
                                bit_name(bit),
                                Move::R,
                            );
                        }
                    } else {
                        b.rule(
                            &vv,
                            bit_name(bit),
                            &format!("pay_sy_f_{q2}_{}_{v2}", j + 1),
                            bit_name(bit),
                            Move::R,
                        );
                    }
                }
            }
        }
        for y2 in 0..3u32 {
            for j in 0..2usize {
                for v in 0..(1u32 << j) {
                    let f = format!("pay_mv_f_{q2}_{y2}_{j}_{v}");
                    let vv = format!("pay_mv_v_{q2}_{y2}_{j}_{v}");
                    b.rule(&f, "0", &vv, "0", Move::R);
                    for bit in 0..2u32 {
                        let v2 = 2 * v + bit;
                        if j == 0 {
                            b.rule(
                                &vv,
                                bit_name(bit),
                                &format!("pay_mv_f_{q2}_{y2}_1_{v2}"),
                                bit_name(bit),
                                Move::R,
                            );
                        } else if v2 == 3 {
                            b.rule(&vv, bit_name(bit), "clrw", bit_name(bit), Move::L);
                        } else {
                            b.rule(
                                &vv,
                                bit_name(bit),
                                &format!("exec_{q2}_{y2}_{v2}"),
                                bit_name(bit),
                                Move::R,
                            );
                        }
                    }
                }
            }
        }
    }

    // Execute: run right to the marked cell, write the new symbol, move
    // the mark. A right move onto fresh tape extends the region with a
    // blank; a left move off the region start shifts the whole region one
    // cell right and puts a marked blank in front.
    for q2 in 0..nq {
        for y2 in 0..3u32 {
            for m in 0..3u32 {
                let ex = format!("exec_{q2}_{y2}_{m}");
                for pass in ["0", "1", "b", "$"] {
                    b.rule(&ex, pass, &ex, pass, Move::R);
                }
                for x in 0..3usize {
                    match m {
                        0 => b.rule(
                            &ex,
                            MARKED[x],
                            &format!("markprev_{q2}"),
                            UNMARKED[y2 as usize],
                            Move::L,
                        ),
                        1 => b.rule(
                            &ex,
                            MARKED[x],
                            &format!("marknext_{q2}"),
                            UNMARKED[y2 as usize],
                            Move::R,
                        ),
                        _ => b.rule(
                            &ex,
                            MARKED[x],
                            &format!("rw_{q2}_{y2}"),
                            MARKED[y2 as usize],
                            Move::L,
                        ),
                    };
                }
            }
        }
        let mn = format!("marknext_{q2}");
        for x in 0..3usize {
            b.rule(&mn, UNMARKED[x], &format!("rw_{q2}_{x}"), MARKED[x], Move::L);
        }
        b.rule(&mn, "_", &format!("rw_{q2}_2"), "b^", Move::L);
        let mp = format!("markprev_{q2}");
        for x in 0..3usize {
            b.rule(&mp, UNMARKED[x], &format!("rw_{q2}_{x}"), MARKED[x], Move::L);
        }
        b.rule(&mp, "$", &format!("shenter_{q2}"), "$", Move::R);
        let sh_in = format!("shenter_{q2}");
        for x in 0..3usize {
            b.rule(&sh_in, UNMARKED[x], &format!("sh_{q2}_{x}"), "b^", Move::R);
        }
        for x in 0..3usize {
            let shx = format!("sh_{q2}_{x}");
            for y in 0..3usize {
                b.rule(&shx, UNMARKED[y], &format!("sh_{q2}_{y}"), UNMARKED[x], Move::R);
            }
            b.rule(&shx, "_", &format!("rw_{q2}_2"), UNMARKED[x], Move::L);
        }
        // Rewind with the next fetch already loaded; the mark may lie to
        // the right of where rewinding starts after a region shift.
        for y in 0..3u32 {
            let rw = format!("rw_{q2}_{y}");
            for pass in ["0", "1", "b", "$", "0^", "1^", "b^"] {
                b.rule(&rw, pass, &rw, pass, Move::L);
            }
            b.rule(&rw, "^", &format!("hs_{q2}_{y}_0"), "^", Move::R);
            for i in 0..4 * s_bits {
                let cur = format!("hs_{q2}_{y}_{i}");
                let next = if i + 1 == 4 * s_bits {
                    format!("scan_f_{q2}_{y}_0")
                } else {
                    format!("hs_{q2}_{y}_{}", i + 1)
                };
                for s in ["0", "1"] {
                    b.rule(&cur, s, &next, s, Move::R);
                }
            }
        }
    }

    // Halt cleanup: erase boundary, program and separators, turn region
    // blanks into real blanks, then come back and unmark the head cell.
    for s in ["0", "1"] {
        b.rule("clrw", s, "clrw", s, Move::L);
    }
    b.rule("clrw", "^", "cltab", "_", Move::R);
    for s in ["0", "1"] {
        b.rule("cltab", s, "cltab", "_", Move::R);
    }
    b.rule("cltab", "$", "clsep", "_", Move::R);
    b.rule("clsep", "$", "clsim", "_", Move::R);
    b.rule("clsim", "b", "clsim", "_", Move::R);
    for s in ["0", "1", "0^", "1^", "b^"] {
        b.rule("clsim", s, "clsim", s, Move::R);
    }
    b.rule("clsim", "_", "clret", "_", Move::L);
    for s in ["0", "1", "_"] {
        b.rule("clret", s, "clret", s, Move::L);
    }
    b.rule("clret", "0^", "done", "0", Move::S);
    b.rule("clret", "1^", "done", "1", Move::S);
    b.rule("clret", "b^", "done", "_", Move::S);

    for s in ["_", "0", "1", "b", "0^", "1^", "b^", "^", "$"] {
        b.rule("spin", s, "spin", s, Move::S);
    }

    b.build().expect("interpreter construction is deterministic")
}

/// State count of the interpreter as a closed formula in the state-field
/// width; kept next to the builder as an independent check on its loops.
pub fn universal_machine_states(s_bits: usize) -> usize {
    let nq = 1usize << s_bits;
    let key_len = s_bits + 2;
    let rc = 2 * (2 * s_bits + 6);
    13                                // init family, cleanup, spin, done
        + 3                           // rwi
        + 3 * 2 * s_bits              // his
        + 3 * 2 * (nq - 1)            // hrs
        + nq * 3 * 2 * key_len        // scan
        + nq * 3 * (rc - 2)           // skip
        + 2 * (nq - 1)                // pay_ns
        + nq * 6                      // pay_sy
        + nq * 3 * 6                  // pay_mv
        + nq * 9                      // exec
        + nq * 3                      // marknext, markprev, shenter
        + nq * 3                      // sh carries
        + nq * 3                      // rw
        + nq * 3 * 4 * s_bits         // hs
}

/// Measured interpretation overhead: running a program of length n for k
/// direct steps takes at most a*n*k + b interpreter steps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OverheadProfile {
    pub a: u64,
    pub b: u64,
}

impl OverheadProfile {
    pub fn step_bound(&self, program_len: usize, direct_steps: u64) -> u64 {
        self.a * program_len as u64 * direct_steps + self.b
    }
}

/// Hard ceiling on any single measurement run.
pub const MEASURE_CAP: u64 = 50_000_000;

/// Fits the overhead profile over every halting corpus run: b is the worst
/// zero-step interpretation, a the worst per-(program bit * step) excess.
pub fn measure_profile(
    corpus: &[(String, TuringMachine)],
    budget: &RunBudget,
    bounds: &EncodingBounds,
) -> Result<OverheadProfile> {
    let u = universal_machine(bounds);
    let mut b_max: u64 = 0;
    let mut scaled: Vec<(u64, u64)> = Vec::new();
    for (name, m) in corpus {
        let program = encode(m, bounds)?;
        for input in bitstrings(budget.max_input_len) {
            let direct = tm_run(m, &input, budget)?;
            if !direct.halted() {
                continue;
            }
            let paired = pair(&program, &input);
            let meter = RunBudget {
                max_steps: MEASURE_CAP,
                max_input_len: paired.len(),
                max_output_len: budget.max_output_len,
            };
            let Outcome::Halted { steps: y, .. } = tm_run(&u, &paired, &meter)? else {
                return Err(Error::Internal(format!(
                    "interpreter did not halt on {name} with input {input:?} within the measurement cap"
                )));
            };
            if direct.steps() == 0 {
                b_max = b_max.max(y);
            } else {
                scaled.push((program.len() as u64 * direct.steps(), y));
            }
        }
    }
    let mut a_max: u64 = 1;
    for (x, y) in scaled {
        a_max = a_max.max(y.saturating_sub(b_max).div_ceil(x));
    }
    Ok(OverheadProfile { a: a_max, b: b_max })
}

/// Budget the interpreter needs to cover every run a direct budget admits
/// for programs no longer than the longest corpus encoding.
pub fn interpreter_budget(
    profile: &OverheadProfile,
    corpus: &[(String, TuringMachine)],
    budget: &RunBudget,
    bounds: &EncodingBounds,
) -> Result<RunBudget> {
    let mut max_p = 0usize;
    for (_, m) in corpus {
        max_p = max_p.max(encode(m, bounds)?.len());
    }
    Ok(RunBudget {
        max_steps: profile.step_bound(max_p, budget.max_steps),
        max_input_len: 2 * max_p + 2 + budget.max_input_len,
        max_output_len: budget.max_output_len,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepRecord {
    pub machine: String,
    pub input: String,
    pub direct: String,
    pub interpreted: String,
    pub direct_steps: u64,
    pub interpreter_steps: u64,
}

#[derive(Debug, Clone)]
pub struct SweepReport {
    pub profile: OverheadProfile,
    pub interpreter_budget: RunBudget,
    pub runs: usize,
    pub halting_runs: usize,
    pub mismatches: Vec<SweepRecord>,
    pub bound_violations: Vec<SweepRecord>,
}

impl SweepReport {
    pub fn clean(&self) -> bool {
        self.mismatches.is_empty() && self.bound_violations.is_empty()
    }
}

/// Runs every corpus machine against every admissible input both directly
/// and through the interpreter: behavior labels must agree everywhere, and
/// halting runs must respect the fitted linear step bound.
pub fn equivalence_sweep(
    corpus: &[(String, TuringMachine)],
    budget: &RunBudget,
    bounds: &EncodingBounds,
) -> Result<SweepReport> {
    let profile = measure_profile(corpus, budget, bounds)?;
    let ibudget = interpreter_budget(&profile, corpus, budget, bounds)?;
    let u = universal_machine(bounds);
    let mut report = SweepReport {
        profile,
        interpreter_budget: ibudget,
        runs: 0,
        halting_runs: 0,
        mismatches: Vec::new(),
        bound_violations: Vec::new(),
    };
    for (name, m) in corpus {
        let program = encode(m, bounds)?;
        for input in bitstrings(budget.max_input_len) {
            let direct = tm_run(m, &input, budget)?;
            let interp = tm_run(&u, &pair(&program, &input), &ibudget)?;
            report.runs += 1;
            let record = SweepRecord {
                machine: name.clone(),
                input: string_label(&input),
                direct: behavior_label(&direct),
                interpreted: behavior_label(&interp),
                direct_steps: direct.steps(),
                interpreter_steps: interp.steps(),
            };
            if record.direct != record.interpreted {
                report.mismatches.push(record.clone());
            }
            if direct.halted() {
                report.halting_runs += 1;
                if interp.steps() > profile.step_bound(program.len(), direct.steps()) {
                    report.bound_violations.push(record);
                }
            }
        }
    }
    Ok(report)
}

/// A universal-simulator instance over a corpus plus the interpreter
/// itself: contexts are the direct inputs and all paired inputs, programs
/// are the corpus encodings plus a self program for the interpreter
/// target. The interpreter is too large to encode within its own bounds,
/// so its program is the literal tag "id", reduced by passing contexts
/// through unchanged.
pub struct UniversalBundle {
    pub instance: EvalInstance,
    pub simulator: Simulator,
    pub profile: OverheadProfile,
    pub interpreter_budget: RunBudget,
}

pub fn tm_universal_instance(
    corpus: &[(String, TuringMachine)],
    budget: &RunBudget,
    bounds: &EncodingBounds,
) -> Result<UniversalBundle> {
    let profile = measure_profile(corpus, budget, bounds)?;
    build_universal_instance(corpus, budget, bounds, &profile)
}

pub fn build_universal_instance(
    corpus: &[(String, TuringMachine)],
    budget: &RunBudget,
    bounds: &EncodingBounds,
    profile: &OverheadProfile,
) -> Result<UniversalBundle> {
    if corpus.iter().any(|(n, _)| n == "u") {
        return Err(Error::DuplicateName("u".to_string()));
    }
    let ibudget = interpreter_budget(profile, corpus, budget, bounds)?;
    let u = universal_machine(bounds);
    let mut encodings: Vec<(String, &TuringMachine, String)> = Vec::new();
    for (name, m) in corpus {
        encodings.push((name.clone(), m, encode(m, bounds)?));
    }
    let shorts = bitstrings(budget.max_input_len);

    let mut target_labels: Vec<String> = corpus.iter().map(|(n, _)| n.clone()).collect();
    target_labels.push("u".to_string());
    let targets = FiniteSet::new("T", target_labels)?;

    let mut context_labels: Vec<String> = shorts.iter().map(|s| string_label(s)).collect();
    for (_, _, program) in &encodings {
        for c in &shorts {
            context_labels.push(pair(program, c));
        }
    }
    let contexts = FiniteSet::new("C", context_labels)?;

    let mut behavior_labels: Vec<String> =
        bitstrings(budget.max_output_len).iter().map(|s| string_label(s)).collect();
    behavior_labels.push("⊥".to_string());
    let behaviors = FiniteSet::new("B", behavior_labels)?;

    let mut program_labels: Vec<String> =
        encodings.iter().map(|(_, _, p)| p.clone()).collect();
    program_labels.push("id".to_string());
    let programs = FiniteSet::new("P", program_labels)?;

    let lookup = |set: &FiniteSet, label: &str| -> Result<u16> {
        set.index_of(label)
            .ok_or_else(|| Error::Internal(format!("label {label:?} missing from a built set")))
    };

    let u_target = lookup(&targets, "u")?;
    let mut eval_pairs = std::collections::BTreeSet::new();
    for (name, m, program) in &encodings {
        let t = lookup(&targets, name)?;
        for input in &shorts {
            let c = lookup(&contexts, &string_label(input))?;
            let direct = tm_run(m, input, budget)?;
            let b = lookup(&behaviors, &behavior_label(&direct))?;
            eval_pairs.insert((vec![t, c], vec![b]));
            // the interpreter's own row lives on the paired inputs
            let paired = pair(program, input);
            let pc = lookup(&contexts, &paired)?;
            let interp = tm_run(&u, &paired, &ibudget)?;
            let ib = lookup(&behaviors, &behavior_label(&interp))?;
            eval_pairs.insert((vec![u_target, pc], vec![ib]));
        }
    }
    let dom = Product::of(&targets).tensor(&Product::of(&contexts));
    let eval = Rel::from_pairs(dom, Product::of(&behaviors), eval_pairs)?;
    let instance = EvalInstance::new(targets.clone(), contexts.clone(), behaviors, eval)?;

    let p = Product::of(&programs);
    let compiler = Rel::from_fn(p.clone(), Product::of(&targets), |_| Some(vec![u_target]))?;

    let id_program = lookup(&programs, "id")?;
    let mut red_pairs = std::collections::BTreeSet::new();
    for c in 0..contexts.len() as u16 {
        red_pairs.insert((vec![id_program, c], vec![c]));
    }
    for (_, _, program) in &encodings {
        let pi = lookup(&programs, program)?;
        for input in &shorts {
            let c = lookup(&contexts, &string_label(input))?;
            let pc = lookup(&contexts, &pair(program, input))?;
            red_pairs.insert((vec![pi, c], vec![pc]));
        }
    }
    let reduction = Rel::from_pairs(
        p.tensor(&Product::of(&instance.contexts)),
        Product::of(&instance.contexts),
        red_pairs,
    )?;

    let simulator = Simulator::new("interp", &instance, programs, compiler, reduction)?;
    Ok(UniversalBundle { instance, simulator, profile: *profile, interpreter_budget: ibudget })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::turing::corpus;
    use crate::universality::{check_universality, verify_reduction, witness_reduction, Mode};

    fn bounds() -> EncodingBounds {
        EncodingBounds::corpus_default()
    }

    fn budget() -> RunBudget {
        RunBudget::corpus_default()
    }

    /// Three machines keep unit runs fast; the full corpus sweep is an
    /// acceptance concern. The looper stays in to cover budget exhaustion
    /// through the interpreter.
    fn small_corpus() -> Vec<(String, TuringMachine)> {
        corpus()
            .into_iter()
            .filter(|(n, _)| n == "identity" || n == "bit-flip" || n == "loop")
            .collect()
    }

    fn interpret(input: &str, max_steps: u64) -> Outcome {
        let u = universal_machine(&bounds());
        let b = RunBudget { max_steps, max_input_len: input.len(), max_output_len: 5 };
        tm_run(&u, input, &b).unwrap()
    }

    #[test]
    fn state_count_matches_the_closed_formula() {
        let u = universal_machine(&bounds());
        assert_eq!(u.n_states(), universal_machine_states(3));
        assert_eq!(u.n_states(), 1482);
        assert_eq!(u.symbols().len(), 9);
    }

    #[test]
    fn interpreter_reproduces_direct_runs() {
        let machines = corpus();
        let b = bounds();
        for (name, input) in [
            ("identity", ""),
            ("identity", "1011"),
            ("bit-flip", "10"),
            ("always-empty", "11"),
            ("first-bit", "01"),
            ("invert-first", "10"),
            ("append-zero", "1"),
            ("tail", "10"),
            ("zeros-like", "111"),
            ("parity", "1011"),
            ("prepend-one", "00"),
            ("skip-one-right", "1"),
        ] {
            let m = &machines.iter().find(|(n, _)| n == name).unwrap().1;
            let program = encode(m, &b).unwrap();
            let direct = tm_run(m, input, &budget()).unwrap();
            let interp = interpret(&pair(&program, input), 2_000_000);
            assert_eq!(
                behavior_label(&interp),
                behavior_label(&direct),
                "{name} on {input:?}"
            );
        }
    }

    /// prepend-one forces the simulated head off the left end of the
    /// region, exercising the shift; skip-one-right halts on a fresh blank.
    #[test]
    fn edge_extensions_are_faithful() {
        let machines = corpus();
        let b = bounds();
        let m = &machines.iter().find(|(n, _)| n == "prepend-one").unwrap().1;
        let interp = interpret(&pair(&encode(m, &b).unwrap(), "0000"), 2_000_000);
        assert_eq!(behavior_label(&interp), "10000");
        let m = &machines.iter().find(|(n, _)| n == "skip-one-right").unwrap().1;
        let interp = interpret(&pair(&encode(m, &b).unwrap(), ""), 2_000_000);
        assert_eq!(behavior_label(&interp), "ε");
    }

    #[test]
    fn loopers_and_garbage_bottom_out() {
        let machines = corpus();
        let m = &machines.iter().find(|(n, _)| n == "loop").unwrap().1;
        let program = encode(m, &bounds()).unwrap();
        let interp = interpret(&pair(&program, "0"), 300_000);
        assert!(!interp.halted());
        // not a pairing at all: the chunk walk spins
        let interp = interpret("10", 1_000);
        assert!(!interp.halted());
        // empty program: header read gets stuck on the separator
        let interp = interpret("11", 1_000);
        assert!(!interp.halted());
    }

    #[test]
    fn profile_bounds_every_halting_run() {
        let corpus = small_corpus();
        let profile = measure_profile(&corpus, &budget(), &bounds()).unwrap();
        assert!(profile.a >= 1);
        assert!(profile.b > 0);
        let report = equivalence_sweep(&corpus, &budget(), &bounds()).unwrap();
        assert_eq!(report.runs, 3 * 31);
        assert_eq!(report.halting_runs, 2 * 31);
        assert!(report.clean(), "mismatches: {:?}", report.mismatches);
    }

    #[test]
    fn universal_instance_is_strictly_universal() {
        let corpus = small_corpus();
        let bundle = tm_universal_instance(&corpus, &budget(), &bounds()).unwrap();
        let inst = &bundle.instance;
        assert_eq!(inst.targets.len(), 4);
        assert_eq!(inst.contexts.len(), 31 + 3 * 31);
        assert_eq!(inst.behaviors.len(), 64);
        assert!(!inst.eval_is_total());

        let report = check_universality(inst, &bundle.simulator, Mode::Strict);
        assert!(report.universal);
        let witness = report.witness.as_ref().unwrap();
        // the interpreter target is realized by the pass-through program
        let u_t = inst.targets.index_of("u").unwrap();
        let id_p = bundle.simulator.programs.index_of("id").unwrap();
        assert_eq!(witness[&u_t], id_p);
        assert_eq!(report.admissible[u_t as usize], vec![id_p]);
        // every direct target is realized by its own encoding
        let b = bounds();
        for (name, m) in &corpus {
            let t = inst.targets.index_of(name).unwrap();
            let enc = encode(m, &b).unwrap();
            let p = bundle.simulator.programs.index_of(&enc).unwrap();
            assert!(report.admissible[t as usize].contains(&p), "{name}");
        }
        let r = witness_reduction(inst, &bundle.simulator, witness).unwrap();
        assert_eq!(verify_reduction(inst, &bundle.simulator, &r, Mode::Strict), Ok(true));
    }

    #[test]
    fn corpus_names_may_not_collide_with_the_interpreter_target() {
        let mut corpus = small_corpus();
        corpus[0].0 = "u".to_string();
        assert!(matches!(
            tm_universal_instance(&corpus, &budget(), &bounds()),
            Err(Error::DuplicateName(_))
        ));
    }
}
