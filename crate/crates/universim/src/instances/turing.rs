//! Turing machines under a fixed run budget, their bit-level encodings,
//! and the evaluation instance they induce.
//!
//! Conventions, fixed once and used by the runner, the encoder and the
//! interpreter alike: the blank symbol is "_"; inputs are bit strings
//! written left to right with the head on the leftmost input cell (a blank
//! when the input is empty); a run ends in a halting state, by getting
//! stuck (no applicable rule), or by exhausting the step budget. The
//! output of a halted run is the maximal contiguous non-blank word around
//! the head, the empty word when the head rests on a blank. Non-halting
//! outcomes and oversized or non-bit outputs all collapse to the bottom
//! behavior when an instance is built.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::error::{Error, Result};
use crate::finrel::{FiniteSet, Product, Rel};
use crate::simulator::EvalInstance;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Move {
    L,
    R,
    S,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunBudget {
    pub max_steps: u64,
    pub max_input_len: usize,
    pub max_output_len: usize,
}

impl RunBudget {
    /// The budget every packaged machine is exercised under.
    pub fn corpus_default() -> RunBudget {
        RunBudget { max_steps: 256, max_input_len: 4, max_output_len: 5 }
    }
}

/// A machine is anonymous: names live next to machines in a corpus, so
/// that decoding an encoded machine reproduces it exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TuringMachine {
    states: Vec<String>,
    symbols: Vec<String>,
    start: u32,
    halting: BTreeSet<u32>,
    /// (state, symbol) -> (new state, written symbol, move).
    transitions: BTreeMap<(u32, u32), (u32, u32, Move)>,
}

/// Incremental construction by name; states are declared in first-use
/// order, which fixes their indices.
pub struct MachineBuilder {
    states: Vec<String>,
    state_ix: BTreeMap<String, u32>,
    symbols: Vec<String>,
    sym_ix: BTreeMap<String, u32>,
    start: Option<u32>,
    halting: BTreeSet<u32>,
    transitions: BTreeMap<(u32, u32), (u32, u32, Move)>,
    error: Option<Error>,
}

impl MachineBuilder {
    pub fn new(symbols: &[&str]) -> MachineBuilder {
        let mut b = MachineBuilder {
            states: Vec::new(),
            state_ix: BTreeMap::new(),
            symbols: Vec::new(),
            sym_ix: BTreeMap::new(),
            start: None,
            halting: BTreeSet::new(),
            transitions: BTreeMap::new(),
            error: None,
        };
        for s in symbols {
            if b.sym_ix.insert((*s).to_string(), b.symbols.len() as u32).is_some() {
                b.error = Some(Error::DuplicateName(format!("symbol {s}")));
            }
            b.symbols.push((*s).to_string());
        }
        b
    }

    pub fn state(&mut self, name: &str) -> u32 {
        if let Some(&i) = self.state_ix.get(name) {
            return i;
        }
        let i = self.states.len() as u32;
        self.states.push(name.to_string());
        self.state_ix.insert(name.to_string(), i);
        i
    }

    fn sym(&mut self, name: &str) -> u32 {
        match self.sym_ix.get(name) {
            Some(&i) => i,
            None => {
                self.error = Some(Error::UnknownName(format!("symbol {name}")));
                0
            }
        }
    }

    pub fn start(&mut self, name: &str) -> &mut Self {
        let i = self.state(name);
        self.start = Some(i);
        self
    }

    pub fn halt(&mut self, name: &str) -> &mut Self {
        let i = self.state(name);
        self.halting.insert(i);
        self
    }

    pub fn rule(&mut self, q: &str, read: &str, q2: &str, write: &str, mv: Move) -> &mut Self {
        let key = (self.state(q), self.sym(read));
        let val = (self.state(q2), self.sym(write), mv);
        if self.transitions.insert(key, val).is_some() {
            self.error = Some(Error::DuplicateName(format!("rule ({q}, {read})")));
        }
        self
    }

    pub fn build(self) -> Result<TuringMachine> {
        if let Some(e) = self.error {
            return Err(e);
        }
        let start = self
            .start
            .ok_or_else(|| Error::Internal("machine has no start state".to_string()))?;
        let m = TuringMachine {
            states: self.states,
            symbols: self.symbols,
            start,
            halting: self.halting,
            transitions: self.transitions,
        };
        m.validate()?;
        Ok(m)
    }
}

impl TuringMachine {
    fn validate(&self) -> Result<()> {
        if self.states.is_empty() {
            return Err(Error::Internal("machine has no states".to_string()));
        }
        if !self.symbols.iter().any(|s| s == "_") {
            return Err(Error::UnknownName("machines need the blank symbol _".to_string()));
        }
        for (&(q, _), _) in &self.transitions {
            if self.halting.contains(&q) {
                return Err(Error::Internal(format!(
                    "halting state {} has an outgoing rule",
                    self.states[q as usize]
                )));
            }
        }
        Ok(())
    }

    pub fn n_states(&self) -> usize {
        self.states.len()
    }

    pub fn state_name(&self, i: u32) -> &str {
        &self.states[i as usize]
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn start_state(&self) -> u32 {
        self.start
    }

    pub fn halting(&self) -> &BTreeSet<u32> {
        &self.halting
    }

    pub fn transitions(&self) -> &BTreeMap<(u32, u32), (u32, u32, Move)> {
        &self.transitions
    }

    pub fn sym_index(&self, name: &str) -> Option<u32> {
        self.symbols.iter().position(|s| s == name).map(|i| i as u32)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BottomReason {
    /// No rule applies in a non-halting state.
    Stuck,
    /// The step budget ran out.
    OutOfSteps,
    /// The halted output word is longer than the budget allows.
    OutputTooLong,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Halted { output: String, steps: u64 },
    Bottom { reason: BottomReason, steps: u64 },
}

impl Outcome {
    pub fn steps(&self) -> u64 {
        match self {
            Outcome::Halted { steps, .. } | Outcome::Bottom { steps, .. } => *steps,
        }
    }

    pub fn halted(&self) -> bool {
        matches!(self, Outcome::Halted { .. })
    }
}

/// Behavior label of an outcome: the output bit string, "ε" for the empty
/// output, "⊥" for bottom or for outputs that are not bit strings.
pub fn behavior_label(outcome: &Outcome) -> String {
    match outcome {
        Outcome::Halted { output, .. } => {
            if output.is_empty() {
                "ε".to_string()
            } else if output.chars().all(|c| c == '0' || c == '1') {
                output.clone()
            } else {
                "⊥".to_string()
            }
        }
        Outcome::Bottom { .. } => "⊥".to_string(),
    }
}

/// Runs a machine on a bit-string input under a budget.
pub fn tm_run(m: &TuringMachine, input: &str, budget: &RunBudget) -> Result<Outcome> {
    if input.len() > budget.max_input_len {
        return Err(Error::InputTooLong { len: input.len(), max: budget.max_input_len });
    }
    let blank = m.sym_index("_").expect("validated");
    let bit = |c: char| -> Result<u32> {
        m.sym_index(&c.to_string()).ok_or_else(|| {
            Error::UnknownName(format!("machine lacks input symbol {c}"))
        })
    };
    let mut tape: VecDeque<u32> = VecDeque::new();
    for c in input.chars() {
        if c != '0' && c != '1' {
            return Err(Error::Parse {
                line: 0,
                msg: format!("input must be a bit string, found {c:?}"),
            });
        }
        tape.push_back(bit(c)?);
    }
    if tape.is_empty() {
        tape.push_back(blank);
    }
    let mut origin: isize = 0; // tape index of logical position 0
    let mut head: isize = 0;

    let ns = m.symbols.len();
    let mut table: Vec<Option<(u32, u32, Move)>> = vec![None; m.states.len() * ns];
    for (&(q, s), &t) in &m.transitions {
        table[q as usize * ns + s as usize] = Some(t);
    }

    let mut state = m.start;
    let mut steps: u64 = 0;
    loop {
        if m.halting.contains(&state) {
            let at = (origin + head) as usize;
            if tape[at] == blank {
                return Ok(Outcome::Halted { output: String::new(), steps });
            }
            let mut l = at;
            while l > 0 && tape[l - 1] != blank {
                l -= 1;
            }
            let mut r = at;
            while r + 1 < tape.len() && tape[r + 1] != blank {
                r += 1;
            }
            if r - l + 1 > budget.max_output_len {
                return Ok(Outcome::Bottom { reason: BottomReason::OutputTooLong, steps });
            }
            let output: String =
                (l..=r).map(|i| m.symbols[tape[i] as usize].as_str()).collect();
            return Ok(Outcome::Halted { output, steps });
        }
        if steps == budget.max_steps {
            return Ok(Outcome::Bottom { reason: BottomReason::OutOfSteps, steps });
        }
        let at = (origin + head) as usize;
        let sym = tape[at];
        let Some((q2, write, mv)) = table[state as usize * ns + sym as usize] else {
            return Ok(Outcome::Bottom { reason: BottomReason::Stuck, steps });
        };
        tape[at] = write;
        match mv {
            Move::L => head -= 1,
            Move::R => head += 1,
            Move::S => {}
        }
        if origin + head < 0 {
            tape.push_front(blank);
            origin += 1;
        } else if (origin + head) as usize >= tape.len() {
            tape.push_back(blank);
        }
        state = q2;
        steps += 1;
    }
}

/// Fixed-width encoding bounds. All machines sharing bounds produce
/// same-shaped records, which is what lets one interpreter serve them all.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EncodingBounds {
    pub max_states: u32,
}

impl EncodingBounds {
    pub fn corpus_default() -> EncodingBounds {
        EncodingBounds { max_states: 8 }
    }

    /// Bits per state field.
    pub fn state_bits(&self) -> usize {
        assert!(self.max_states >= 2, "bounds must allow at least two states");
        (32 - (self.max_states - 1).leading_zeros()) as usize
    }

    /// Bits per record: state, symbol, new state, new symbol, move.
    pub fn record_bits(&self) -> usize {
        2 * self.state_bits() + 6
    }
}

fn to_bits(value: u32, width: usize) -> String {
    (0..width).rev().map(|i| if value >> i & 1 == 1 { '1' } else { '0' }).collect()
}

fn from_bits(bits: &str) -> u32 {
    bits.chars().fold(0, |acc, c| acc * 2 + (c == '1') as u32)
}

/// Symbol values in the encoding: bit 0, bit 1, blank.
const SYM_NAMES: [&str; 3] = ["0", "1", "_"];

/// Encodes a machine whose symbols are exactly blank, 0, 1 and whose
/// states carry the canonical names q0, q1, ... in index order. The
/// encoding is the header (state count minus one, then the start state)
/// followed by one fixed-width record per rule, sorted by state and symbol
/// value; a halting state contributes one halt-marked record per symbol.
pub fn encode(m: &TuringMachine, bounds: &EncodingBounds) -> Result<String> {
    let mut sorted = m.symbols.clone();
    sorted.sort();
    if sorted != ["0", "1", "_"] {
        return Err(Error::BoundsExceeded(
            "only machines over the blank/0/1 alphabet are encodable".to_string(),
        ));
    }
    for (i, s) in m.states.iter().enumerate() {
        if s != &format!("q{i}") {
            return Err(Error::BoundsExceeded(format!(
                "encodable machines use canonical state names, found {s} at index {i}"
            )));
        }
    }
    let n = m.states.len() as u32;
    if n > bounds.max_states {
        return Err(Error::BoundsExceeded(format!(
            "{n} states exceed the bound of {}",
            bounds.max_states
        )));
    }
    let s_bits = bounds.state_bits();
    let mut out = String::new();
    out.push_str(&to_bits(n - 1, s_bits));
    out.push_str(&to_bits(m.start, s_bits));
    for q in 0..n {
        for (symval, sym_name) in SYM_NAMES.iter().enumerate() {
            if m.halting.contains(&q) {
                out.push_str(&to_bits(q, s_bits));
                out.push_str(&to_bits(symval as u32, 2));
                out.push_str(&to_bits(0, s_bits));
                out.push_str("00");
                out.push_str("11");
            } else {
                let sym_ix = m.sym_index(sym_name).expect("alphabet checked");
                if let Some(&(q2, w, mv)) = m.transitions.get(&(q, sym_ix)) {
                    let wval = SYM_NAMES
                        .iter()
                        .position(|s| m.sym_index(s) == Some(w))
                        .expect("alphabet checked") as u32;
                    let mval = match mv {
                        Move::L => 0,
                        Move::R => 1,
                        Move::S => 2,
                    };
                    out.push_str(&to_bits(q, s_bits));
                    out.push_str(&to_bits(symval as u32, 2));
                    out.push_str(&to_bits(q2, s_bits));
                    out.push_str(&to_bits(wval, 2));
                    out.push_str(&to_bits(mval, 2));
                }
            }
        }
    }
    Ok(out)
}

/// Inverse of `encode` on canonical encodings; rejects anything else.
pub fn decode(bits: &str, bounds: &EncodingBounds) -> Result<TuringMachine> {
    let s_bits = bounds.state_bits();
    let rec = bounds.record_bits();
    let bad = |msg: String| Error::Parse { line: 0, msg };
    if bits.chars().any(|c| c != '0' && c != '1') {
        return Err(bad("encoding must be a bit string".to_string()));
    }
    if bits.len() < 2 * s_bits || (bits.len() - 2 * s_bits) % rec != 0 {
        return Err(bad(format!("encoding length {} does not fit the bounds", bits.len())));
    }
    let n = from_bits(&bits[..s_bits]) + 1;
    let start = from_bits(&bits[s_bits..2 * s_bits]);
    if n > bounds.max_states {
        return Err(bad(format!("{n} states exceed the bound")));
    }
    if start >= n {
        return Err(bad(format!("start state {start} out of range")));
    }
    let mut b = MachineBuilder::new(&["_", "0", "1"]);
    for i in 0..n {
        b.state(&format!("q{i}"));
    }
    b.start(&format!("q{start}"));

    let mut seen: BTreeSet<(u32, u32)> = BTreeSet::new();
    let mut halt_marks: BTreeMap<u32, BTreeSet<u32>> = BTreeMap::new();
    let mut stepped: BTreeSet<u32> = BTreeSet::new();
    let mut body = &bits[2 * s_bits..];
    while !body.is_empty() {
        let r = &body[..rec];
        body = &body[rec..];
        let q = from_bits(&r[..s_bits]);
        let symval = from_bits(&r[s_bits..s_bits + 2]);
        let q2 = from_bits(&r[s_bits + 2..2 * s_bits + 2]);
        let wval = from_bits(&r[2 * s_bits + 2..2 * s_bits + 4]);
        let mval = from_bits(&r[2 * s_bits + 4..]);
        if q >= n || symval > 2 {
            return Err(bad(format!("record key ({q}, {symval}) out of range")));
        }
        if let Some(&last) = seen.iter().next_back() {
            if (q, symval) <= last {
                return Err(bad("records are not in canonical order".to_string()));
            }
        }
        seen.insert((q, symval));
        if mval == 3 {
            if q2 != 0 || wval != 0 {
                return Err(bad("halt record has a nonzero payload".to_string()));
            }
            halt_marks.entry(q).or_default().insert(symval);
        } else {
            if q2 >= n || wval > 2 {
                return Err(bad(format!("record payload for ({q}, {symval}) out of range")));
            }
            let mv = [Move::L, Move::R, Move::S][mval as usize];
            stepped.insert(q);
            b.rule(
                &format!("q{q}"),
                SYM_NAMES[symval as usize],
                &format!("q{q2}"),
                SYM_NAMES[wval as usize],
                mv,
            );
        }
    }
    for (q, marks) in &halt_marks {
        if marks.len() != 3 {
            return Err(bad(format!("halting state q{q} lacks a full set of halt records")));
        }
        if stepped.contains(q) {
            return Err(bad(format!("state q{q} is both halting and stepped")));
        }
        b.halt(&format!("q{q}"));
    }
    b.build()
}

/// Interleaves a program with a context: every program bit is prefixed
/// with 0, the programs ends with 11, the context follows verbatim.
pub fn pair(program: &str, context: &str) -> String {
    let mut out = String::with_capacity(2 * program.len() + 2 + context.len());
    for b in program.chars() {
        out.push('0');
        out.push(b);
    }
    out.push_str("11");
    out.push_str(context);
    out
}

pub fn unpair(s: &str) -> Result<(String, String)> {
    let chars: Vec<char> = s.chars().collect();
    let mut program = String::new();
    let mut i = 0;
    loop {
        if i + 1 >= chars.len() {
            if i + 2 == chars.len() + 1 {
                return Err(Error::Parse { line: 0, msg: "dangling half chunk".to_string() });
            }
            return Err(Error::Parse { line: 0, msg: "missing separator".to_string() });
        }
        match (chars[i], chars[i + 1]) {
            ('0', b @ ('0' | '1')) => program.push(b),
            ('1', '1') => {
                let context: String = chars[i + 2..].iter().collect();
                if context.chars().any(|c| c != '0' && c != '1') {
                    return Err(Error::Parse { line: 0, msg: "context is not a bit string".to_string() });
                }
                return Ok((program, context));
            }
            (a, b) => {
                return Err(Error::Parse { line: 0, msg: format!("bad chunk {a}{b}") });
            }
        }
        i += 2;
    }
}

/// The packaged machine corpus: named, canonical, at most four states
/// each, over the blank/0/1 alphabet. Non-halting members loop forever at
/// every budget, so their bottom outcomes are budget-independent.
pub fn corpus() -> Vec<(String, TuringMachine)> {
    let alphabet: [&str; 3] = ["_", "0", "1"];
    let mut machines: Vec<(String, TuringMachine)> = Vec::new();
    let mut add = |name: &str, f: &dyn Fn(&mut MachineBuilder)| {
        let mut b = MachineBuilder::new(&alphabet);
        f(&mut b);
        machines.push((name.to_string(), b.build().expect("corpus machines are valid")));
    };

    add("identity", &|b| {
        b.state("q0");
        b.start("q0").halt("q0");
    });
    add("bit-flip", &|b| {
        b.state("q0");
        b.state("q1");
        b.start("q0").halt("q1");
        b.rule("q0", "0", "q0", "1", Move::R);
        b.rule("q0", "1", "q0", "0", Move::R);
        b.rule("q0", "_", "q1", "_", Move::L);
    });
    add("always-empty", &|b| {
        b.state("q0");
        b.state("q1");
        b.start("q0").halt("q1");
        b.rule("q0", "0", "q0", "_", Move::R);
        b.rule("q0", "1", "q0", "_", Move::R);
        b.rule("q0", "_", "q1", "_", Move::S);
    });
    add("loop", &|b| {
        b.state("q0");
        b.start("q0");
        b.rule("q0", "0", "q0", "0", Move::S);
        b.rule("q0", "1", "q0", "1", Move::S);
        b.rule("q0", "_", "q0", "_", Move::S);
    });
    add("shuttle", &|b| {
        b.state("q0");
        b.state("q1");
        b.start("q0");
        for s in ["0", "1", "_"] {
            b.rule("q0", s, "q1", s, Move::R);
            b.rule("q1", s, "q0", s, Move::L);
        }
    });
    add("first-bit", &|b| {
        for q in ["q0", "q1", "q2", "q3"] {
            b.state(q);
        }
        b.start("q0").halt("q3");
        b.rule("q0", "0", "q1", "0", Move::R);
        b.rule("q0", "1", "q1", "1", Move::R);
        b.rule("q0", "_", "q3", "_", Move::S);
        b.rule("q1", "0", "q1", "_", Move::R);
        b.rule("q1", "1", "q1", "_", Move::R);
        b.rule("q1", "_", "q2", "_", Move::L);
        b.rule("q2", "_", "q2", "_", Move::L);
        b.rule("q2", "0", "q3", "0", Move::S);
        b.rule("q2", "1", "q3", "1", Move::S);
    });
    add("invert-first", &|b| {
        b.state("q0");
        b.state("q1");
        b.start("q0").halt("q1");
        b.rule("q0", "0", "q1", "1", Move::S);
        b.rule("q0", "1", "q1", "0", Move::S);
        b.rule("q0", "_", "q1", "_", Move::S);
    });
    add("append-zero", &|b| {
        b.state("q0");
        b.state("q1");
        b.start("q0").halt("q1");
        b.rule("q0", "0", "q0", "0", Move::R);
        b.rule("q0", "1", "q0", "1", Move::R);
        b.rule("q0", "_", "q1", "0", Move::S);
    });
    add("tail", &|b| {
        b.state("q0");
        b.state("q1");
        b.state("q2");
        b.start("q0").halt("q2");
        b.rule("q0", "0", "q1", "_", Move::R);
        b.rule("q0", "1", "q1", "_", Move::R);
        b.rule("q0", "_", "q2", "_", Move::S);
        b.rule("q1", "0", "q2", "0", Move::S);
        b.rule("q1", "1", "q2", "1", Move::S);
        b.rule("q1", "_", "q2", "_", Move::S);
    });
    add("zeros-like", &|b| {
        b.state("q0");
        b.state("q1");
        b.state("q2");
        b.start("q0").halt("q2");
        b.rule("q0", "0", "q0", "0", Move::R);
        b.rule("q0", "1", "q0", "0", Move::R);
        b.rule("q0", "_", "q1", "_", Move::L);
        b.rule("q1", "0", "q2", "0", Move::S);
        b.rule("q1", "_", "q2", "_", Move::S);
    });
    add("parity", &|b| {
        b.state("q0");
        b.state("q1");
        b.state("q2");
        b.start("q0").halt("q2");
        b.rule("q0", "0", "q0", "_", Move::R);
        b.rule("q0", "1", "q1", "_", Move::R);
        b.rule("q0", "_", "q2", "0", Move::S);
        b.rule("q1", "0", "q1", "_", Move::R);
        b.rule("q1", "1", "q0", "_", Move::R);
        b.rule("q1", "_", "q2", "1", Move::S);
    });
    add("prepend-one", &|b| {
        b.state("q0");
        b.state("q1");
        b.state("q2");
        b.start("q0").halt("q2");
        b.rule("q0", "0", "q1", "0", Move::L);
        b.rule("q0", "1", "q1", "1", Move::L);
        b.rule("q0", "_", "q2", "1", Move::S);
        b.rule("q1", "_", "q2", "1", Move::S);
    });
    add("skip-one-right", &|b| {
        b.state("q0");
        b.state("q1");
        b.start("q0").halt("q1");
        b.rule("q0", "0", "q1", "0", Move::R);
        b.rule("q0", "1", "q1", "1", Move::R);
        b.rule("q0", "_", "q1", "_", Move::R);
    });
    machines
}

/// All bit strings up to a length, empty string first.
pub fn bitstrings(max_len: usize) -> Vec<String> {
    let mut out = vec![String::new()];
    for len in 1..=max_len {
        for k in 0..(1usize << len) {
            out.push((0..len).rev().map(|i| if k >> i & 1 == 1 { '1' } else { '0' }).collect());
        }
    }
    out
}

/// Context/behavior label of a bit string: "ε" when empty.
pub fn string_label(s: &str) -> String {
    if s.is_empty() {
        "ε".to_string()
    } else {
        s.to_string()
    }
}

/// Bit string named by a label, inverse of `string_label` ("⊥" has none).
pub fn label_string(label: &str) -> Option<String> {
    if label == "ε" {
        Some(String::new())
    } else if !label.is_empty() && label.chars().all(|c| c == '0' || c == '1') {
        Some(label.to_string())
    } else {
        None
    }
}

/// The instance induced by a corpus under a budget: targets are the named
/// machines, contexts are all inputs the budget admits, behaviors are all
/// outputs it admits plus bottom, and eval is a total function.
pub fn tm_instance(
    corpus: &[(String, TuringMachine)],
    budget: &RunBudget,
) -> Result<EvalInstance> {
    let targets = FiniteSet::new("T", corpus.iter().map(|(n, _)| n.clone()).collect())?;
    let contexts = FiniteSet::new(
        "C",
        bitstrings(budget.max_input_len).iter().map(|s| string_label(s)).collect(),
    )?;
    let mut blabels: Vec<String> =
        bitstrings(budget.max_output_len).iter().map(|s| string_label(s)).collect();
    blabels.push("⊥".to_string());
    let behaviors = FiniteSet::new("B", blabels)?;

    let by_name: BTreeMap<&str, &TuringMachine> =
        corpus.iter().map(|(n, m)| (n.as_str(), m)).collect();
    let dom = Product::of(&targets).tensor(&Product::of(&contexts));
    let mut pairs = BTreeSet::new();
    for t in 0..targets.len() as u16 {
        let machine = by_name[targets.label(t)];
        for c in 0..contexts.len() as u16 {
            let input = label_string(contexts.label(c))
                .ok_or_else(|| Error::Internal("context label is not an input".to_string()))?;
            let outcome = tm_run(machine, &input, budget)?;
            let b = behaviors
                .index_of(&behavior_label(&outcome))
                .ok_or_else(|| Error::Internal("outcome label missing from behaviors".to_string()))?;
            pairs.insert((vec![t, c], vec![b]));
        }
    }
    let eval = Rel::from_pairs(dom, Product::of(&behaviors), pairs)?;
    EvalInstance::new(targets, contexts, behaviors, eval)
}
