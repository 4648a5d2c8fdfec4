//! Line-oriented instance files.
//!
//! A file is a sequence of sections. `#` starts a comment, blank lines are
//! ignored, and every name must be defined before it is used. `set` is a
//! single line; every other section closes with `end`:
//!
//!   set T = t0 t1
//!   morphism eval : T * C -> B    # pair lines; a unit side is left empty
//!     t0 c0 -> b0
//!   end
//!   instance X                    # auto-defines simulator X.trivial
//!     targets = T
//!     contexts = C
//!     behaviors = B
//!     eval = eval
//!   end
//!   simulator S over X
//!     programs = P
//!     compiler = comp
//!     reduction = red
//!   end
//!   witness W for X               # one value per target
//!     t0 = 4
//!   end
//!   iso J : T -> C                # forward map, bijectivity checked
//!     t0 -> c0
//!   end
//!   turing-machine M
//!     states = q0 q1
//!     symbols = _ 0 1
//!     start = q0
//!     halting = q1
//!     rule q0 0 -> q0 1 R
//!   end
//!   budget DEFAULT
//!     max-steps = 256
//!     max-input = 4
//!     max-output = 5
//!   end
//!   spin-system A
//!     levels = 2 2
//!     ising 0 1 = 1
//!     field 0 = 1/2
//!   end
//!
//! Generator sections expand at parse time into the explicit sets,
//! morphisms, instances and simulators they denote, under dotted names
//! (X.T, X.C, X.B, X.eval, X.P, X.interp, X.singleton). Serialization
//! always writes the expanded form, so parse(to_text(parse(f))) yields
//! the same document as parse(f).
//!
//!   tm-instance X
//!     machines = ident flip
//!     budget = DEFAULT
//!   end
//!   tm-universal X
//!     machines = ident flip
//!     budget = DEFAULT
//!     max-states = 8
//!   end
//!   spin-instance X
//!     systems = a b
//!     quantization = 2
//!   end
//!   finfun-instance X            # X.singleton appears when the two agree
//!     contexts = 2
//!     behaviors = 2
//!   end

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::ops::Range;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::finrel::{FiniteSet, Product, Rel};
use crate::instances::finfun::{finfun_instance, singleton_simulator};
use crate::instances::interpreter::tm_universal_instance;
use crate::instances::spin::{energy_label, spin_instance, Energy, SpinSystem};
use crate::instances::turing::{
    tm_instance, EncodingBounds, MachineBuilder, Move, RunBudget, TuringMachine,
};
use crate::nogo::MonotoneWitness;
use crate::simulator::{EvalInstance, Simulator};
use crate::unreachability::Iso;

#[derive(Debug, Clone)]
pub struct MorphismEntry {
    pub rel: Rel,
    /// Auto entries (trivial-simulator wiring) are rebuilt on every parse
    /// and never serialized.
    pub auto: bool,
}

#[derive(Debug, Clone)]
pub struct InstanceEntry {
    pub targets: String,
    pub contexts: String,
    pub behaviors: String,
    pub eval: String,
    pub instance: EvalInstance,
}

#[derive(Debug, Clone)]
pub struct SimulatorEntry {
    pub over: String,
    pub programs: String,
    pub compiler: String,
    pub reduction: String,
    pub auto: bool,
    pub simulator: Simulator,
}

#[derive(Debug, Clone)]
pub struct WitnessEntry {
    pub over: String,
    pub witness: MonotoneWitness,
}

#[derive(Debug, Clone)]
pub struct IsoEntry {
    pub dom: String,
    pub cod: String,
    pub iso: Iso,
}

#[derive(Debug, Clone)]
pub struct SpinEntry {
    pub levels: Vec<u8>,
    pub isings: Vec<(usize, usize, Energy)>,
    pub fields: Vec<(usize, Energy)>,
    pub system: SpinSystem,
}

#[derive(Debug, Clone, Default)]
pub struct Document {
    pub sets: BTreeMap<String, Arc<FiniteSet>>,
    pub morphisms: BTreeMap<String, MorphismEntry>,
    pub instances: BTreeMap<String, InstanceEntry>,
    pub simulators: BTreeMap<String, SimulatorEntry>,
    pub witnesses: BTreeMap<String, WitnessEntry>,
    pub isos: BTreeMap<String, IsoEntry>,
    pub machines: BTreeMap<String, TuringMachine>,
    pub budgets: BTreeMap<String, RunBudget>,
    pub spins: BTreeMap<String, SpinEntry>,
}

const RESERVED: [&str; 7] = ["I", "end", "*", "->", "=", ":", "#"];

fn name_ok(token: &str) -> bool {
    !token.is_empty() && !RESERVED.contains(&token)
}

fn err(no: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line: no, msg: msg.into() }
}

impl Document {
    pub fn parse(text: &str) -> Result<Document> {
        let mut p = Parser { lines: tokenize(text), pos: 0, doc: Document::default() };
        while p.pos < p.lines.len() {
            let header_ix = p.pos;
            p.pos += 1;
            let keyword = p.lines[header_ix].tokens[0].clone();
            match keyword.as_str() {
                "set" => p.parse_set(header_ix)?,
                "morphism" => p.parse_morphism(header_ix)?,
                "instance" => p.parse_instance(header_ix)?,
                "simulator" => p.parse_simulator(header_ix)?,
                "witness" => p.parse_witness(header_ix)?,
                "iso" => p.parse_iso(header_ix)?,
                "turing-machine" => p.parse_machine(header_ix)?,
                "budget" => p.parse_budget(header_ix)?,
                "spin-system" => p.parse_spin_system(header_ix)?,
                "tm-instance" => p.parse_tm_instance(header_ix)?,
                "tm-universal" => p.parse_tm_universal(header_ix)?,
                "spin-instance" => p.parse_spin_instance(header_ix)?,
                "finfun-instance" => p.parse_finfun_instance(header_ix)?,
                other => {
                    return Err(err(p.lines[header_ix].no, format!("unknown section {other:?}")))
                }
            }
        }
        Ok(p.doc)
    }

    pub fn instance(&self, name: &str) -> Result<&InstanceEntry> {
        self.instances
            .get(name)
            .ok_or_else(|| Error::UnknownName(format!("instance {name}")))
    }

    pub fn simulator(&self, name: &str) -> Result<&SimulatorEntry> {
        self.simulators
            .get(name)
            .ok_or_else(|| Error::UnknownName(format!("simulator {name}")))
    }

    pub fn witness(&self, name: &str) -> Result<&WitnessEntry> {
        self.witnesses
            .get(name)
            .ok_or_else(|| Error::UnknownName(format!("witness {name}")))
    }

    pub fn iso(&self, name: &str) -> Result<&IsoEntry> {
        self.isos.get(name).ok_or_else(|| Error::UnknownName(format!("iso {name}")))
    }

    pub fn morphism(&self, name: &str) -> Result<&MorphismEntry> {
        self.morphisms
            .get(name)
            .ok_or_else(|| Error::UnknownName(format!("morphism {name}")))
    }

    /// The only instance in the document, for commands that default it.
    pub fn unique_instance(&self) -> Result<(&String, &InstanceEntry)> {
        let mut it = self.instances.iter();
        match (it.next(), it.next()) {
            (Some(found), None) => Ok(found),
            (None, _) => Err(Error::UnknownName("document defines no instance".to_string())),
            _ => Err(Error::UnknownName(
                "document defines several instances, name one explicitly".to_string(),
            )),
        }
    }

    /// Structural equality for the round-trip guarantee. Set names
    /// participate (they are reference targets), relations compare
    /// extensionally together with their object descriptions.
    pub fn same(&self, other: &Document) -> bool {
        fn keys_match<V>(a: &BTreeMap<String, V>, b: &BTreeMap<String, V>) -> bool {
            a.len() == b.len() && a.keys().zip(b.keys()).all(|(x, y)| x == y)
        }
        let rel_same = |a: &Rel, b: &Rel| {
            a == b
                && a.dom().describe() == b.dom().describe()
                && a.cod().describe() == b.cod().describe()
        };
        let sets_ok = keys_match(&self.sets, &other.sets)
            && self
                .sets
                .values()
                .zip(other.sets.values())
                .all(|(a, b)| a.name() == b.name() && a.labels().eq(b.labels()));
        let morphisms_ok = keys_match(&self.morphisms, &other.morphisms)
            && self
                .morphisms
                .values()
                .zip(other.morphisms.values())
                .all(|(a, b)| a.auto == b.auto && rel_same(&a.rel, &b.rel));
        let instances_ok = keys_match(&self.instances, &other.instances)
            && self.instances.values().zip(other.instances.values()).all(|(a, b)| {
                a.targets == b.targets
                    && a.contexts == b.contexts
                    && a.behaviors == b.behaviors
                    && a.eval == b.eval
                    && rel_same(&a.instance.eval, &b.instance.eval)
            });
        let simulators_ok = keys_match(&self.simulators, &other.simulators)
            && self.simulators.values().zip(other.simulators.values()).all(|(a, b)| {
                a.over == b.over
                    && a.programs == b.programs
                    && a.compiler == b.compiler
                    && a.reduction == b.reduction
                    && a.auto == b.auto
                    && rel_same(a.simulator.s(), b.simulator.s())
            });
        let witnesses_ok = keys_match(&self.witnesses, &other.witnesses)
            && self.witnesses.values().zip(other.witnesses.values()).all(|(a, b)| {
                a.over == b.over
                    && a.witness.name == b.witness.name
                    && a.witness.values == b.witness.values
            });
        let isos_ok = keys_match(&self.isos, &other.isos)
            && self.isos.values().zip(other.isos.values()).all(|(a, b)| {
                a.dom == b.dom && a.cod == b.cod && rel_same(a.iso.forward(), b.iso.forward())
            });
        let spins_ok = keys_match(&self.spins, &other.spins)
            && self.spins.values().zip(other.spins.values()).all(|(a, b)| {
                a.levels == b.levels && a.isings == b.isings && a.fields == b.fields
            });
        sets_ok
            && morphisms_ok
            && instances_ok
            && simulators_ok
            && witnesses_ok
            && isos_ok
            && self.machines == other.machines
            && self.budgets == other.budgets
            && spins_ok
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (name, b) in &self.budgets {
            writeln!(out, "budget {name}").unwrap();
            writeln!(out, "  max-steps = {}", b.max_steps).unwrap();
            writeln!(out, "  max-input = {}", b.max_input_len).unwrap();
            writeln!(out, "  max-output = {}", b.max_output_len).unwrap();
            writeln!(out, "end").unwrap();
        }
        for (name, m) in &self.machines {
            writeln!(out, "turing-machine {name}").unwrap();
            let states: Vec<&str> = (0..m.n_states() as u32).map(|i| m.state_name(i)).collect();
            writeln!(out, "  states = {}", states.join(" ")).unwrap();
            writeln!(out, "  symbols = {}", m.symbols().join(" ")).unwrap();
            writeln!(out, "  start = {}", m.state_name(m.start_state())).unwrap();
            if !m.halting().is_empty() {
                let halting: Vec<&str> = m.halting().iter().map(|&i| m.state_name(i)).collect();
                writeln!(out, "  halting = {}", halting.join(" ")).unwrap();
            }
            for (&(q, read), &(q2, write, mv)) in m.transitions() {
                let mv = match mv {
                    Move::L => "L",
                    Move::R => "R",
                    Move::S => "S",
                };
                writeln!(
                    out,
                    "  rule {} {} -> {} {} {mv}",
                    m.state_name(q),
                    &m.symbols()[read as usize],
                    m.state_name(q2),
                    &m.symbols()[write as usize],
                )
                .unwrap();
            }
            writeln!(out, "end").unwrap();
        }
        for (name, s) in &self.spins {
            writeln!(out, "spin-system {name}").unwrap();
            let levels: Vec<String> = s.levels.iter().map(|l| l.to_string()).collect();
            writeln!(out, "  levels = {}", levels.join(" ")).unwrap();
            for (i, j, e) in &s.isings {
                writeln!(out, "  ising {i} {j} = {}", energy_label(*e)).unwrap();
            }
            for (i, h) in &s.fields {
                writeln!(out, "  field {i} = {}", energy_label(*h)).unwrap();
            }
            writeln!(out, "end").unwrap();
        }
        for (name, set) in &self.sets {
            let labels: Vec<&str> = set.labels().collect();
            writeln!(out, "set {name} = {}", labels.join(" ")).unwrap();
        }
        for (name, m) in &self.morphisms {
            if m.auto {
                continue;
            }
            writeln!(
                out,
                "morphism {name} : {} -> {}",
                object_spec(m.rel.dom()),
                object_spec(m.rel.cod())
            )
            .unwrap();
            for (x, y) in m.rel.pairs() {
                writeln!(out, "  {}", pair_spec(&m.rel, x, y)).unwrap();
            }
            writeln!(out, "end").unwrap();
        }
        for (name, i) in &self.instances {
            writeln!(out, "instance {name}").unwrap();
            writeln!(out, "  targets = {}", i.targets).unwrap();
            writeln!(out, "  contexts = {}", i.contexts).unwrap();
            writeln!(out, "  behaviors = {}", i.behaviors).unwrap();
            writeln!(out, "  eval = {}", i.eval).unwrap();
            writeln!(out, "end").unwrap();
        }
        for (name, s) in &self.simulators {
            if s.auto {
                continue;
            }
            writeln!(out, "simulator {name} over {}", s.over).unwrap();
            writeln!(out, "  programs = {}", s.programs).unwrap();
            writeln!(out, "  compiler = {}", s.compiler).unwrap();
            writeln!(out, "  reduction = {}", s.reduction).unwrap();
            writeln!(out, "end").unwrap();
        }
        for (name, w) in &self.witnesses {
            writeln!(out, "witness {name} for {}", w.over).unwrap();
            let targets = &self.instances[&w.over].instance.targets;
            for (i, v) in w.witness.values.iter().enumerate() {
                writeln!(out, "  {} = {v}", targets.label(i as u16)).unwrap();
            }
            writeln!(out, "end").unwrap();
        }
        for (name, e) in &self.isos {
            writeln!(out, "iso {name} : {} -> {}", e.dom, e.cod).unwrap();
            for (x, y) in e.iso.forward().pairs() {
                writeln!(out, "  {}", pair_spec(e.iso.forward(), x, y)).unwrap();
            }
            writeln!(out, "end").unwrap();
        }
        out
    }
}

fn object_spec(p: &Product) -> String {
    if p.arity() == 0 {
        "I".to_string()
    } else {
        p.factors().iter().map(|f| f.name()).collect::<Vec<_>>().join(" * ")
    }
}

fn pair_spec(rel: &Rel, x: &[u16], y: &[u16]) -> String {
    let side = |tup: &[u16], p: &Product| -> String {
        tup.iter()
            .zip(p.factors())
            .map(|(&i, f)| f.label(i))
            .collect::<Vec<_>>()
            .join(" ")
    };
    let lhs = side(x, rel.dom());
    let rhs = side(y, rel.cod());
    if lhs.is_empty() {
        format!("-> {rhs}")
    } else if rhs.is_empty() {
        format!("{lhs} ->")
    } else {
        format!("{lhs} -> {rhs}")
    }
}

struct Line {
    no: usize,
    tokens: Vec<String>,
}

fn tokenize(text: &str) -> Vec<Line> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let body = match raw.find('#') {
            Some(p) => &raw[..p],
            None => raw,
        };
        let tokens: Vec<String> = body.split_whitespace().map(|t| t.to_string()).collect();
        if !tokens.is_empty() {
            out.push(Line { no: i + 1, tokens });
        }
    }
    out
}

struct Parser {
    lines: Vec<Line>,
    pos: usize,
    doc: Document,
}

impl Parser {
    /// Advances past the body of a block section, returning the body's
    /// index range. The terminating `end` is consumed.
    fn block(&mut self, start_no: usize) -> Result<Range<usize>> {
        let start = self.pos;
        loop {
            let Some(line) = self.lines.get(self.pos) else {
                return Err(err(start_no, "section is missing its end line"));
            };
            self.pos += 1;
            if line.tokens.len() == 1 && line.tokens[0] == "end" {
                return Ok(start..self.pos - 1);
            }
        }
    }

    fn fresh_name(&self, kind: &str, name: &str, no: usize) -> Result<String> {
        if !name_ok(name) {
            return Err(err(no, format!("bad {kind} name {name:?}")));
        }
        let taken = match kind {
            "set" => self.doc.sets.contains_key(name),
            "morphism" => self.doc.morphisms.contains_key(name),
            "instance" => self.doc.instances.contains_key(name),
            "simulator" => self.doc.simulators.contains_key(name),
            "witness" => self.doc.witnesses.contains_key(name),
            "iso" => self.doc.isos.contains_key(name),
            "turing-machine" => self.doc.machines.contains_key(name),
            "budget" => self.doc.budgets.contains_key(name),
            "spin-system" => self.doc.spins.contains_key(name),
            _ => unreachable!("unknown kind {kind}"),
        };
        if taken {
            return Err(err(no, format!("duplicate {kind} name {name:?}")));
        }
        Ok(name.to_string())
    }

    fn set_ref(&self, name: &str, no: usize) -> Result<Arc<FiniteSet>> {
        self.doc
            .sets
            .get(name)
            .cloned()
            .ok_or_else(|| err(no, format!("unknown set {name:?}")))
    }

    fn morphism_ref(&self, name: &str, no: usize) -> Result<Rel> {
        self.doc
            .morphisms
            .get(name)
            .map(|m| m.rel.clone())
            .ok_or_else(|| err(no, format!("unknown morphism {name:?}")))
    }

    /// `A * B * C` or `I`, already split into tokens.
    fn product_spec(&self, tokens: &[String], no: usize) -> Result<Product> {
        if tokens.is_empty() {
            return Err(err(no, "empty object spec"));
        }
        if tokens.len() == 1 && tokens[0] == "I" {
            return Ok(Product::unit());
        }
        if tokens.len() % 2 == 0 {
            return Err(err(no, "dangling * in object spec"));
        }
        let mut factors = Vec::new();
        for (i, t) in tokens.iter().enumerate() {
            if i % 2 == 1 {
                if t != "*" {
                    return Err(err(no, format!("expected * between factors, found {t:?}")));
                }
            } else {
                factors.push(self.set_ref(t, no)?);
            }
        }
        Ok(Product::from_factors(factors))
    }

    /// `key = v1 v2 ...` body line; None when the key does not match.
    fn keyed<'l>(line: &'l Line, key: &str) -> Option<&'l [String]> {
        if line.tokens.len() >= 2 && line.tokens[0] == key && line.tokens[1] == "=" {
            Some(&line.tokens[2..])
        } else {
            None
        }
    }

    fn keyed_one<'l>(line: &'l Line, key: &str) -> Result<&'l str> {
        match Self::keyed(line, key) {
            Some([v]) => Ok(v),
            _ => Err(err(line.no, format!("expected `{key} = <one value>`"))),
        }
    }

    fn parse_set(&mut self, header_ix: usize) -> Result<()> {
        let line = &self.lines[header_ix];
        let no = line.no;
        if line.tokens.len() < 4 || line.tokens[2] != "=" {
            return Err(err(no, "expected `set <name> = <elements...>`"));
        }
        let name = self.fresh_name("set", &line.tokens[1], no)?;
        let elements: Vec<String> = line.tokens[3..].to_vec();
        for e in &elements {
            if RESERVED.contains(&e.as_str()) {
                return Err(err(no, format!("reserved token {e:?} cannot be an element")));
            }
        }
        let set = FiniteSet::new(name.clone(), elements).map_err(|e| err(no, e.to_string()))?;
        self.doc.sets.insert(name, set);
        Ok(())
    }

    fn parse_pair_line(line: &Line, dom: &Product, cod: &Product) -> Result<(Vec<u16>, Vec<u16>)> {
        let no = line.no;
        let arrow = line
            .tokens
            .iter()
            .position(|t| t == "->")
            .ok_or_else(|| err(no, "pair line needs ->"))?;
        let lhs = &line.tokens[..arrow];
        let rhs = &line.tokens[arrow + 1..];
        let resolve = |labels: &[String], p: &Product, side: &str| -> Result<Vec<u16>> {
            if labels.len() != p.arity() {
                return Err(err(
                    no,
                    format!("{side} needs {} labels, found {}", p.arity(), labels.len()),
                ));
            }
            labels
                .iter()
                .zip(p.factors())
                .map(|(l, f)| {
                    f.index_of(l)
                        .ok_or_else(|| err(no, format!("label {l:?} is not in set {}", f.name())))
                })
                .collect()
        };
        Ok((resolve(lhs, dom, "left side")?, resolve(rhs, cod, "right side")?))
    }

    fn parse_morphism(&mut self, header_ix: usize) -> Result<()> {
        let (name, dom, cod, no) = {
            let line = &self.lines[header_ix];
            let t = &line.tokens;
            let no = line.no;
            if t.len() < 6 || t[2] != ":" {
                return Err(err(no, "expected `morphism <name> : <dom> -> <cod>`"));
            }
            let arrow = t
                .iter()
                .rposition(|x| x == "->")
                .ok_or_else(|| err(no, "morphism header needs ->"))?;
            if arrow <= 3 {
                return Err(err(no, "morphism header needs a domain spec"));
            }
            let name = self.fresh_name("morphism", &t[1], no)?;
            let dom = self.product_spec(&t[3..arrow], no)?;
            let cod = self.product_spec(&t[arrow + 1..], no)?;
            (name, dom, cod, no)
        };
        let body = self.block(no)?;
        let mut pairs = BTreeSet::new();
        for i in body {
            pairs.insert(Self::parse_pair_line(&self.lines[i], &dom, &cod)?);
        }
        let rel = Rel::from_pairs(dom, cod, pairs).map_err(|e| err(no, e.to_string()))?;
        self.doc.morphisms.insert(name, MorphismEntry { rel, auto: false });
        Ok(())
    }

    /// Registers an instance plus its automatic trivial simulator.
    fn add_instance(
        &mut self,
        name: String,
        targets: String,
        contexts: String,
        behaviors: String,
        eval: String,
        instance: EvalInstance,
        no: usize,
    ) -> Result<()> {
        let trivial_name = format!("{name}.trivial");
        let compiler_name = format!("{trivial_name}.compiler");
        let reduction_name = format!("{trivial_name}.reduction");
        if self.doc.simulators.contains_key(&trivial_name)
            || self.doc.morphisms.contains_key(&compiler_name)
            || self.doc.morphisms.contains_key(&reduction_name)
        {
            return Err(err(no, format!("a name reserved for {trivial_name:?} is taken")));
        }
        let mut trivial = Simulator::trivial(&instance);
        trivial.name = trivial_name.clone();
        self.doc.morphisms.insert(
            compiler_name.clone(),
            MorphismEntry { rel: trivial.compiler.clone(), auto: true },
        );
        self.doc.morphisms.insert(
            reduction_name.clone(),
            MorphismEntry { rel: trivial.context_reduction.clone(), auto: true },
        );
        self.doc.simulators.insert(
            trivial_name,
            SimulatorEntry {
                over: name.clone(),
                programs: targets.clone(),
                compiler: compiler_name,
                reduction: reduction_name,
                auto: true,
                simulator: trivial,
            },
        );
        self.doc
            .instances
            .insert(name, InstanceEntry { targets, contexts, behaviors, eval, instance });
        Ok(())
    }

    fn parse_instance(&mut self, header_ix: usize) -> Result<()> {
        let (name, no) = {
            let line = &self.lines[header_ix];
            if line.tokens.len() != 2 {
                return Err(err(line.no, "expected `instance <name>`"));
            }
            (self.fresh_name("instance", &line.tokens[1], line.no)?, line.no)
        };
        let body = self.block(no)?;
        let mut fields: BTreeMap<String, (String, usize)> = BTreeMap::new();
        for i in body {
            let line = &self.lines[i];
            let key = line.tokens[0].clone();
            if !["targets", "contexts", "behaviors", "eval"].contains(&key.as_str()) {
                return Err(err(line.no, "instance bodies take targets/contexts/behaviors/eval"));
            }
            let v = Self::keyed_one(line, &key)?.to_string();
            if fields.insert(key.clone(), (v, line.no)).is_some() {
                return Err(err(line.no, format!("duplicate {key} line")));
            }
        }
        let get = |key: &str| -> Result<(String, usize)> {
            fields
                .get(key)
                .cloned()
                .ok_or_else(|| err(no, format!("instance is missing {key}")))
        };
        let (t_name, t_no) = get("targets")?;
        let (c_name, c_no) = get("contexts")?;
        let (b_name, b_no) = get("behaviors")?;
        let (e_name, e_no) = get("eval")?;
        let t = self.set_ref(&t_name, t_no)?;
        let c = self.set_ref(&c_name, c_no)?;
        let b = self.set_ref(&b_name, b_no)?;
        let eval = self.morphism_ref(&e_name, e_no)?;
        let instance = EvalInstance::new(t, c, b, eval).map_err(|e| err(no, e.to_string()))?;
        self.add_instance(name, t_name, c_name, b_name, e_name, instance, no)
    }

    fn parse_simulator(&mut self, header_ix: usize) -> Result<()> {
        let (name, over, no) = {
            let line = &self.lines[header_ix];
            let t = &line.tokens;
            if t.len() != 4 || t[2] != "over" {
                return Err(err(line.no, "expected `simulator <name> over <instance>`"));
            }
            (self.fresh_name("simulator", &t[1], line.no)?, t[3].clone(), line.no)
        };
        let instance = self
            .doc
            .instances
            .get(&over)
            .ok_or_else(|| err(no, format!("unknown instance {over:?}")))?
            .instance
            .clone();
        let body = self.block(no)?;
        let mut fields: BTreeMap<String, (String, usize)> = BTreeMap::new();
        for i in body {
            let line = &self.lines[i];
            let key = line.tokens[0].clone();
            if !["programs", "compiler", "reduction"].contains(&key.as_str()) {
                return Err(err(line.no, "simulator bodies take programs/compiler/reduction"));
            }
            let v = Self::keyed_one(line, &key)?.to_string();
            if fields.insert(key.clone(), (v, line.no)).is_some() {
                return Err(err(line.no, format!("duplicate {key} line")));
            }
        }
        let get = |key: &str| -> Result<(String, usize)> {
            fields
                .get(key)
                .cloned()
                .ok_or_else(|| err(no, format!("simulator is missing {key}")))
        };
        let (p_name, p_no) = get("programs")?;
        let (c_name, c_no) = get("compiler")?;
        let (r_name, r_no) = get("reduction")?;
        let p = self.set_ref(&p_name, p_no)?;
        let comp = self.morphism_ref(&c_name, c_no)?;
        let red = self.morphism_ref(&r_name, r_no)?;
        let simulator = Simulator::new(name.clone(), &instance, p, comp, red)
            .map_err(|e| err(no, e.to_string()))?;
        self.doc.simulators.insert(
            name,
            SimulatorEntry {
                over,
                programs: p_name,
                compiler: c_name,
                reduction: r_name,
                auto: false,
                simulator,
            },
        );
        Ok(())
    }

    fn parse_witness(&mut self, header_ix: usize) -> Result<()> {
        let (name, over, no) = {
            let line = &self.lines[header_ix];
            let t = &line.tokens;
            if t.len() != 4 || t[2] != "for" {
                return Err(err(line.no, "expected `witness <name> for <instance>`"));
            }
            (self.fresh_name("witness", &t[1], line.no)?, t[3].clone(), line.no)
        };
        let targets = Arc::clone(
            &self
                .doc
                .instances
                .get(&over)
                .ok_or_else(|| err(no, format!("unknown instance {over:?}")))?
                .instance
                .targets,
        );
        let body = self.block(no)?;
        let mut values: Vec<Option<u64>> = vec![None; targets.len()];
        for i in body {
            let line = &self.lines[i];
            let t = &line.tokens;
            if t.len() != 3 || t[1] != "=" {
                return Err(err(line.no, "expected `<target> = <value>`"));
            }
            let ix = targets
                .index_of(&t[0])
                .ok_or_else(|| err(line.no, format!("label {:?} is not a target", t[0])))?;
            let v: u64 =
                t[2].parse().map_err(|_| err(line.no, format!("bad value {:?}", t[2])))?;
            if values[ix as usize].replace(v).is_some() {
                return Err(err(line.no, format!("duplicate value for {:?}", t[0])));
            }
        }
        let values: Vec<u64> = values
            .into_iter()
            .enumerate()
            .map(|(i, v)| {
                v.ok_or_else(|| {
                    err(no, format!("missing value for target {:?}", targets.label(i as u16)))
                })
            })
            .collect::<Result<_>>()?;
        self.doc
            .witnesses
            .insert(name.clone(), WitnessEntry { over, witness: MonotoneWitness { name, values } });
        Ok(())
    }

    fn parse_iso(&mut self, header_ix: usize) -> Result<()> {
        let (name, dom_name, cod_name, no) = {
            let line = &self.lines[header_ix];
            let t = &line.tokens;
            if t.len() != 6 || t[2] != ":" || t[4] != "->" {
                return Err(err(line.no, "expected `iso <name> : <set> -> <set>`"));
            }
            (self.fresh_name("iso", &t[1], line.no)?, t[3].clone(), t[5].clone(), line.no)
        };
        let dom = self.set_ref(&dom_name, no)?;
        let cod = self.set_ref(&cod_name, no)?;
        let dp = Product::of(&dom);
        let cp = Product::of(&cod);
        let body = self.block(no)?;
        let mut pairs = BTreeSet::new();
        for i in body {
            pairs.insert(Self::parse_pair_line(&self.lines[i], &dp, &cp)?);
        }
        let forward = Rel::from_pairs(dp, cp, pairs).map_err(|e| err(no, e.to_string()))?;
        let iso = Iso::new(forward).map_err(|e| err(no, e.to_string()))?;
        self.doc.isos.insert(name, IsoEntry { dom: dom_name, cod: cod_name, iso });
        Ok(())
    }

    fn parse_machine(&mut self, header_ix: usize) -> Result<()> {
        let (name, no) = {
            let line = &self.lines[header_ix];
            if line.tokens.len() != 2 {
                return Err(err(line.no, "expected `turing-machine <name>`"));
            }
            (self.fresh_name("turing-machine", &line.tokens[1], line.no)?, line.no)
        };
        let body = self.block(no)?;
        let mut states: Option<Vec<String>> = None;
        let mut symbols: Option<Vec<String>> = None;
        let mut start: Option<String> = None;
        let mut halting: Vec<String> = Vec::new();
        let mut rules: Vec<(usize, [String; 5])> = Vec::new();
        for i in body {
            let line = &self.lines[i];
            if let Some(v) = Self::keyed(line, "states") {
                states = Some(v.to_vec());
            } else if let Some(v) = Self::keyed(line, "symbols") {
                symbols = Some(v.to_vec());
            } else if let Some(v) = Self::keyed(line, "start") {
                let [s] = v else { return Err(err(line.no, "start takes one state")) };
                start = Some(s.clone());
            } else if let Some(v) = Self::keyed(line, "halting") {
                halting = v.to_vec();
            } else if line.tokens[0] == "rule" {
                let t = &line.tokens;
                if t.len() != 7 || t[3] != "->" {
                    return Err(err(
                        line.no,
                        "expected `rule <state> <read> -> <state> <write> <L|R|S>`",
                    ));
                }
                rules.push((
                    line.no,
                    [t[1].clone(), t[2].clone(), t[4].clone(), t[5].clone(), t[6].clone()],
                ));
            } else {
                return Err(err(line.no, "machine bodies take states/symbols/start/halting/rule"));
            }
        }
        let states = states.ok_or_else(|| err(no, "machine is missing states"))?;
        let symbols = symbols.ok_or_else(|| err(no, "machine is missing symbols"))?;
        let start = start.ok_or_else(|| err(no, "machine is missing start"))?;
        let sym_refs: Vec<&str> = symbols.iter().map(String::as_str).collect();
        let mut b = MachineBuilder::new(&sym_refs);
        for s in &states {
            b.state(s);
        }
        b.start(&start);
        for h in &halting {
            b.halt(h);
        }
        for (line_no, [q, read, q2, write, mv]) in &rules {
            let mv = match mv.as_str() {
                "L" => Move::L,
                "R" => Move::R,
                "S" => Move::S,
                other => return Err(err(*line_no, format!("bad move {other:?}"))),
            };
            b.rule(q, read, q2, write, mv);
        }
        let machine = b.build().map_err(|e| err(no, e.to_string()))?;
        // every state mentioned by start/halting/rule must be declared
        if machine.n_states() != states.len() {
            return Err(err(no, "a rule or start/halting line names an undeclared state"));
        }
        self.doc.machines.insert(name, machine);
        Ok(())
    }

    fn parse_budget(&mut self, header_ix: usize) -> Result<()> {
        let (name, no) = {
            let line = &self.lines[header_ix];
            if line.tokens.len() != 2 {
                return Err(err(line.no, "expected `budget <name>`"));
            }
            (self.fresh_name("budget", &line.tokens[1], line.no)?, line.no)
        };
        let body = self.block(no)?;
        let mut max_steps = None;
        let mut max_input = None;
        let mut max_output = None;
        for i in body {
            let line = &self.lines[i];
            let key = line.tokens[0].clone();
            if !["max-steps", "max-input", "max-output"].contains(&key.as_str()) {
                return Err(err(line.no, "budget bodies take max-steps/max-input/max-output"));
            }
            let v = Self::keyed_one(line, &key)?;
            let n: u64 = v.parse().map_err(|_| err(line.no, format!("bad number {v:?}")))?;
            match key.as_str() {
                "max-steps" => max_steps = Some(n),
                "max-input" => max_input = Some(n as usize),
                _ => max_output = Some(n as usize),
            }
        }
        let budget = RunBudget {
            max_steps: max_steps.ok_or_else(|| err(no, "budget is missing max-steps"))?,
            max_input_len: max_input.ok_or_else(|| err(no, "budget is missing max-input"))?,
            max_output_len: max_output.ok_or_else(|| err(no, "budget is missing max-output"))?,
        };
        self.doc.budgets.insert(name, budget);
        Ok(())
    }

    fn parse_spin_system(&mut self, header_ix: usize) -> Result<()> {
        let (name, no) = {
            let line = &self.lines[header_ix];
            if line.tokens.len() != 2 {
                return Err(err(line.no, "expected `spin-system <name>`"));
            }
            (self.fresh_name("spin-system", &line.tokens[1], line.no)?, line.no)
        };
        let body = self.block(no)?;
        let mut levels: Option<Vec<u8>> = None;
        let mut isings: Vec<(usize, usize, Energy)> = Vec::new();
        let mut fields: Vec<(usize, Energy)> = Vec::new();
        for i in body {
            let line = &self.lines[i];
            let t = &line.tokens;
            let energy = |v: &str| -> Result<Energy> {
                Energy::from_str(v).map_err(|_| err(line.no, format!("bad energy {v:?}")))
            };
            let site = |v: &str| -> Result<usize> {
                v.parse().map_err(|_| err(line.no, format!("bad site {v:?}")))
            };
            if let Some(v) = Self::keyed(line, "levels") {
                let parsed: Vec<u8> = v
                    .iter()
                    .map(|x| x.parse().map_err(|_| err(line.no, format!("bad level {x:?}"))))
                    .collect::<Result<_>>()?;
                levels = Some(parsed);
            } else if t.len() == 5 && t[0] == "ising" && t[3] == "=" {
                isings.push((site(&t[1])?, site(&t[2])?, energy(&t[4])?));
            } else if t.len() == 4 && t[0] == "field" && t[2] == "=" {
                fields.push((site(&t[1])?, energy(&t[3])?));
            } else {
                return Err(err(line.no, "spin-system bodies take levels/ising/field"));
            }
        }
        let levels = levels.ok_or_else(|| err(no, "spin-system is missing levels"))?;
        let mut system =
            SpinSystem::new(name.clone(), levels.clone()).map_err(|e| err(no, e.to_string()))?;
        for (i, j, e) in &isings {
            system.add_ising(*i, *j, *e).map_err(|e| err(no, e.to_string()))?;
        }
        for (i, h) in &fields {
            system.add_field(*i, *h).map_err(|e| err(no, e.to_string()))?;
        }
        self.doc.spins.insert(name, SpinEntry { levels, isings, fields, system });
        Ok(())
    }

    /// Generator bodies are plain `key = values` maps.
    fn generator_fields(
        &mut self,
        no: usize,
        keys: &[&str],
    ) -> Result<BTreeMap<String, (Vec<String>, usize)>> {
        let body = self.block(no)?;
        let mut fields = BTreeMap::new();
        for i in body {
            let line = &self.lines[i];
            let key = line.tokens[0].clone();
            if !keys.contains(&key.as_str()) {
                return Err(err(line.no, format!("this generator takes {}", keys.join("/"))));
            }
            let Some(v) = Self::keyed(line, &key) else {
                return Err(err(line.no, format!("expected `{key} = <values...>`")));
            };
            if fields.insert(key.clone(), (v.to_vec(), line.no)).is_some() {
                return Err(err(line.no, format!("duplicate {key} line")));
            }
        }
        Ok(fields)
    }

    fn one_field(
        fields: &BTreeMap<String, (Vec<String>, usize)>,
        key: &str,
        no: usize,
    ) -> Result<(String, usize)> {
        match fields.get(key) {
            Some((vs, line_no)) if vs.len() == 1 => Ok((vs[0].clone(), *line_no)),
            Some((_, line_no)) => Err(err(*line_no, format!("{key} takes one value"))),
            None => Err(err(no, format!("generator is missing {key}"))),
        }
    }

    /// Rebuilds an instance under dotted names so generated entries
    /// serialize like hand-written ones.
    fn materialize_instance(
        &mut self,
        name: &str,
        instance: &EvalInstance,
        no: usize,
    ) -> Result<EvalInstance> {
        let rename = |set: &Arc<FiniteSet>, suffix: &str| -> Result<Arc<FiniteSet>> {
            FiniteSet::new(format!("{name}.{suffix}"), set.labels().map(str::to_string).collect())
                .map_err(|e| err(no, e.to_string()))
        };
        let t = rename(&instance.targets, "T")?;
        let c = rename(&instance.contexts, "C")?;
        let b = rename(&instance.behaviors, "B")?;
        let dom = Product::of(&t).tensor(&Product::of(&c));
        let eval = Rel::from_pairs(dom, Product::of(&b), instance.eval.pairs().clone())
            .map_err(|e| err(no, e.to_string()))?;
        let renamed =
            EvalInstance::new(Arc::clone(&t), Arc::clone(&c), Arc::clone(&b), eval.clone())
                .map_err(|e| err(no, e.to_string()))?;
        for set in [&t, &c, &b] {
            let key = self.fresh_name("set", set.name(), no)?;
            self.doc.sets.insert(key, Arc::clone(set));
        }
        let eval_name = self.fresh_name("morphism", &format!("{name}.eval"), no)?;
        self.doc.morphisms.insert(eval_name.clone(), MorphismEntry { rel: eval, auto: false });
        self.add_instance(
            name.to_string(),
            t.name().to_string(),
            c.name().to_string(),
            b.name().to_string(),
            eval_name,
            renamed.clone(),
            no,
        )?;
        Ok(renamed)
    }

    /// Rebuilds a library simulator under `<inst>.<label>` over the
    /// renamed instance.
    fn materialize_simulator(
        &mut self,
        inst_name: &str,
        instance: &EvalInstance,
        label: &str,
        sim: &Simulator,
        no: usize,
    ) -> Result<()> {
        let sim_name = self.fresh_name("simulator", &format!("{inst_name}.{label}"), no)?;
        let p = FiniteSet::new(
            format!("{inst_name}.P"),
            sim.programs.labels().map(str::to_string).collect(),
        )
        .map_err(|e| err(no, e.to_string()))?;
        let p_name = self.fresh_name("set", p.name(), no)?;
        let pp = Product::of(&p);
        let tp = Product::of(&instance.targets);
        let cp = Product::of(&instance.contexts);
        let compiler = Rel::from_pairs(pp.clone(), tp, sim.compiler.pairs().clone())
            .map_err(|e| err(no, e.to_string()))?;
        let reduction =
            Rel::from_pairs(pp.tensor(&cp), cp.clone(), sim.context_reduction.pairs().clone())
                .map_err(|e| err(no, e.to_string()))?;
        let comp_name = self.fresh_name("morphism", &format!("{sim_name}.compiler"), no)?;
        let red_name = self.fresh_name("morphism", &format!("{sim_name}.reduction"), no)?;
        let simulator = Simulator::new(
            sim_name.clone(),
            instance,
            Arc::clone(&p),
            compiler.clone(),
            reduction.clone(),
        )
        .map_err(|e| err(no, e.to_string()))?;
        self.doc.sets.insert(p_name.clone(), p);
        self.doc
            .morphisms
            .insert(comp_name.clone(), MorphismEntry { rel: compiler, auto: false });
        self.doc
            .morphisms
            .insert(red_name.clone(), MorphismEntry { rel: reduction, auto: false });
        self.doc.simulators.insert(
            sim_name,
            SimulatorEntry {
                over: inst_name.to_string(),
                programs: p_name,
                compiler: comp_name,
                reduction: red_name,
                auto: false,
                simulator,
            },
        );
        Ok(())
    }

    fn generator_header(&self, header_ix: usize, kind: &str) -> Result<(String, usize)> {
        let line = &self.lines[header_ix];
        if line.tokens.len() != 2 {
            return Err(err(line.no, format!("expected `{kind} <name>`")));
        }
        Ok((self.fresh_name("instance", &line.tokens[1], line.no)?, line.no))
    }

    fn corpus_from(&self, names: &[String], no: usize) -> Result<Vec<(String, TuringMachine)>> {
        if names.is_empty() {
            return Err(err(no, "machines list is empty"));
        }
        names
            .iter()
            .map(|n| {
                self.doc
                    .machines
                    .get(n)
                    .map(|m| (n.clone(), m.clone()))
                    .ok_or_else(|| err(no, format!("unknown turing-machine {n:?}")))
            })
            .collect()
    }

    fn budget_from(&self, name: &str, no: usize) -> Result<RunBudget> {
        self.doc
            .budgets
            .get(name)
            .copied()
            .ok_or_else(|| err(no, format!("unknown budget {name:?}")))
    }

    fn parse_tm_instance(&mut self, header_ix: usize) -> Result<()> {
        let (name, no) = self.generator_header(header_ix, "tm-instance")?;
        let fields = self.generator_fields(no, &["machines", "budget"])?;
        let (machines, m_no) = fields
            .get("machines")
            .cloned()
            .ok_or_else(|| err(no, "generator is missing machines"))?;
        let (budget_name, b_no) = Self::one_field(&fields, "budget", no)?;
        let corpus = self.corpus_from(&machines, m_no)?;
        let budget = self.budget_from(&budget_name, b_no)?;
        let instance = tm_instance(&corpus, &budget).map_err(|e| err(no, e.to_string()))?;
        self.materialize_instance(&name, &instance, no)?;
        Ok(())
    }

    fn parse_tm_universal(&mut self, header_ix: usize) -> Result<()> {
        let (name, no) = self.generator_header(header_ix, "tm-universal")?;
        let fields = self.generator_fields(no, &["machines", "budget", "max-states"])?;
        let (machines, m_no) = fields
            .get("machines")
            .cloned()
            .ok_or_else(|| err(no, "generator is missing machines"))?;
        let (budget_name, b_no) = Self::one_field(&fields, "budget", no)?;
        let bounds = match fields.get("max-states") {
            None => EncodingBounds::corpus_default(),
            Some(_) => {
                let (v, v_no) = Self::one_field(&fields, "max-states", no)?;
                let max_states: u32 =
                    v.parse().map_err(|_| err(v_no, format!("bad max-states {v:?}")))?;
                EncodingBounds { max_states }
            }
        };
        let corpus = self.corpus_from(&machines, m_no)?;
        let budget = self.budget_from(&budget_name, b_no)?;
        let bundle =
            tm_universal_instance(&corpus, &budget, &bounds).map_err(|e| err(no, e.to_string()))?;
        let renamed = self.materialize_instance(&name, &bundle.instance, no)?;
        self.materialize_simulator(&name, &renamed, "interp", &bundle.simulator, no)
    }

    fn parse_spin_instance(&mut self, header_ix: usize) -> Result<()> {
        let (name, no) = self.generator_header(header_ix, "spin-instance")?;
        let fields = self.generator_fields(no, &["systems", "quantization"])?;
        let (systems, s_no) = fields
            .get("systems")
            .cloned()
            .ok_or_else(|| err(no, "generator is missing systems"))?;
        let (q, q_no) = Self::one_field(&fields, "quantization", no)?;
        let quantization: i64 =
            q.parse().map_err(|_| err(q_no, format!("bad quantization {q:?}")))?;
        let systems: Vec<SpinSystem> = systems
            .iter()
            .map(|n| {
                self.doc
                    .spins
                    .get(n)
                    .map(|e| e.system.clone())
                    .ok_or_else(|| err(s_no, format!("unknown spin-system {n:?}")))
            })
            .collect::<Result<_>>()?;
        let instance = spin_instance(&systems, quantization).map_err(|e| err(no, e.to_string()))?;
        self.materialize_instance(&name, &instance, no)?;
        Ok(())
    }

    fn parse_finfun_instance(&mut self, header_ix: usize) -> Result<()> {
        let (name, no) = self.generator_header(header_ix, "finfun-instance")?;
        let fields = self.generator_fields(no, &["contexts", "behaviors"])?;
        let (c, c_no) = Self::one_field(&fields, "contexts", no)?;
        let (b, b_no) = Self::one_field(&fields, "behaviors", no)?;
        let nc: usize = c.parse().map_err(|_| err(c_no, format!("bad contexts {c:?}")))?;
        let nb: usize = b.parse().map_err(|_| err(b_no, format!("bad behaviors {b:?}")))?;
        let instance = finfun_instance(nc, nb).map_err(|e| err(no, e.to_string()))?;
        let renamed = self.materialize_instance(&name, &instance, no)?;
        if nc == nb {
            let sim = singleton_simulator(&renamed).map_err(|e| err(no, e.to_string()))?;
            self.materialize_simulator(&name, &renamed, "singleton", &sim, no)?;
        }
        Ok(())
    }
}
