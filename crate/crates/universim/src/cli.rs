//! Command-line front end over the report builders.
//!
//! Exit codes follow one convention everywhere: 0 for a proven positive
//! (universal, obstructed, unreachable behavior found, decided comparison),
//! 1 for a proven negative, 2 for errors of any kind, 3 for inconclusive
//! outcomes. Reports go to standard output; errors, hints and timing go to
//! standard error, so report bytes depend only on the inputs.

use std::fs;
use std::sync::Arc;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use crate::error::{Error, Result};
use crate::finrel::Rel;
use crate::format::{Document, InstanceEntry};
use crate::instances::finfun::{finfun_instance, singleton_simulator};
use crate::instances::interpreter::{equivalence_sweep, tm_universal_instance};
use crate::instances::spin::bundled_nogo;
use crate::instances::turing::{corpus, EncodingBounds, RunBudget};
use crate::nogo::{check_nogo, spectrum_witness, MonotoneWitness, NogoVerdict};
use crate::parsimony::{compare_parsimony, ParsimonyRelation, SearchOutcome};
use crate::report::{self, Report};
use crate::search;
use crate::simulator::Simulator;
use crate::universality::{check_universality, Mode};
use crate::unreachability::{
    cantor_nogo, diagonal_direct, diagonal_via_universal, find_fixed_point_free,
};

#[derive(Debug, Parser)]
#[command(
    name = "universim",
    version,
    about = "Universality, parsimony, no-go and unreachability checks for finite simulators"
)]
pub struct Cli {
    #[command(subcommand)]
    pub cmd: Cmd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Strict,
    Lax,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Strict => Mode::Strict,
            ModeArg::Lax => Mode::Lax,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ViaArg {
    Direct,
    Universal,
    Cantor,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DemoArg {
    Turing,
    Spin,
    Cantor,
    Parsimony,
}

#[derive(Debug, Subcommand)]
pub enum Cmd {
    /// Decide whether a simulator is universal over its instance.
    CheckUniversality {
        /// Instance file defining the simulator and its instance.
        file: String,
        /// Simulator name within the file.
        simulator: String,
        #[arg(long, value_enum, default_value = "strict")]
        mode: ModeArg,
        /// Print the machine-readable report instead of the human one.
        #[arg(long)]
        json: bool,
    },
    /// Compare two simulators over the same instance in the parsimony
    /// preorder. Both must be universal; the comparison mode is the
    /// strongest mode they share.
    CompareParsimony {
        file: String,
        first: String,
        second: String,
        /// Cap on enumerated candidate maps per direction.
        #[arg(long)]
        limit: Option<u128>,
        #[arg(long)]
        json: bool,
    },
    /// Look for a monotone-witness obstruction that rules out universality
    /// of a simulator without enumerating reductions.
    CheckNogo {
        file: String,
        simulator: String,
        /// Witness name within the file, or the built-in "spectrum-size".
        #[arg(long, default_value = "spectrum-size")]
        witness: String,
        #[arg(long)]
        json: bool,
    },
    /// Construct a behavior no target realizes, or show none can exist.
    CheckUnreachability {
        file: String,
        /// direct: diagonalize through a targets -> contexts bijection;
        /// universal: diagonalize through a universal simulator;
        /// cantor: enumerate all simulators with programs = contexts.
        #[arg(long, value_enum)]
        via: ViaArg,
        /// Instance name (defaults to the file's only instance).
        #[arg(long)]
        instance: Option<String>,
        /// Universal simulator to diagonalize through (via universal).
        #[arg(long)]
        simulator: Option<String>,
        /// Iso name: targets -> contexts for direct, contexts -> programs
        /// for universal.
        #[arg(long)]
        iso: Option<String>,
        /// Behavior endomorphism used as the twist (defaults to a
        /// fixed-point-free one; rejected if it has a fixed point).
        #[arg(long)]
        twist: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Run a bundled walkthrough end to end.
    Demo {
        #[arg(value_enum)]
        name: DemoArg,
    },
}

/// Remediation hints for errors a caller can act on.
fn hint(e: &Error) -> Option<String> {
    match e {
        Error::FixedPointPresent(_) => Some(
            "pass a fixed-point-free twist (any cyclic shift of the behaviors works), or drop --twist to use the built-in one".to_string(),
        ),
        Error::NotUniversal(_) => Some(
            "run check-universality on each simulator first; parsimony only compares universal simulators".to_string(),
        ),
        Error::SearchSpaceTooLarge { .. } => Some(
            "raise --limit or set UNIVERSIM_SEARCH_LIMIT to enumerate a larger space".to_string(),
        ),
        Error::RelationalCompiler(_) => Some(
            "the witness criterion needs a compiler that assigns exactly one target per program".to_string(),
        ),
        Error::TypeMismatch(msg) if msg.contains("behaviors^contexts") => Some(
            "the counting argument needs targets to exhaust all context-to-behavior functions; use a full function-space instance".to_string(),
        ),
        _ => None,
    }
}

pub fn run(cli: Cli) -> i32 {
    let started = Instant::now();
    let code = match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            if let Some(h) = hint(&e) {
                eprintln!("hint: {h}");
            }
            2
        }
    };
    eprintln!("elapsed: {:.1?}", started.elapsed());
    code
}

fn load(path: &str) -> Result<Document> {
    let text = fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.to_string(),
        msg: e.to_string(),
    })?;
    Document::parse(&text)
}

fn emit(rep: &Report, json: bool) -> i32 {
    if json {
        println!("{}", serde_json::to_string_pretty(&rep.json).expect("reports serialize"));
    } else {
        print!("{}", rep.human);
    }
    rep.exit
}

fn named_instance<'a>(
    doc: &'a Document,
    name: &'a Option<String>,
) -> Result<(&'a str, &'a InstanceEntry)> {
    match name {
        Some(n) => Ok((n.as_str(), doc.instance(n)?)),
        None => {
            let (n, entry) = doc.unique_instance()?;
            Ok((n.as_str(), entry))
        }
    }
}

fn dispatch(cli: Cli) -> Result<i32> {
    match cli.cmd {
        Cmd::CheckUniversality { file, simulator, mode, json } => {
            let doc = load(&file)?;
            let entry = doc.simulator(&simulator)?;
            let inst = doc.instance(&entry.over)?;
            let mode = Mode::from(mode);
            let echo = format!("check-universality {file} {simulator} --mode {mode}");
            let rep =
                report::universality(&echo, &entry.over, &inst.instance, &entry.simulator, mode)?;
            Ok(emit(&rep, json))
        }
        Cmd::CompareParsimony { file, first, second, limit, json } => {
            let doc = load(&file)?;
            let a = doc.simulator(&first)?;
            let b = doc.simulator(&second)?;
            if a.over != b.over {
                return Err(Error::TypeMismatch(format!(
                    "simulators live over different instances: {} vs {}",
                    a.over, b.over
                )));
            }
            let inst = doc.instance(&a.over)?;
            let limit = limit.unwrap_or_else(search::limit);
            let echo = format!("compare-parsimony {file} {first} {second}");
            let rep = report::parsimony(
                &echo,
                &a.over,
                &inst.instance,
                &a.simulator,
                &b.simulator,
                limit,
            )?;
            Ok(emit(&rep, json))
        }
        Cmd::CheckNogo { file, simulator, witness, json } => {
            let doc = load(&file)?;
            let entry = doc.simulator(&simulator)?;
            let inst = doc.instance(&entry.over)?;
            let w: MonotoneWitness = if witness == "spectrum-size" {
                spectrum_witness(&inst.instance)
            } else {
                let we = doc.witness(&witness)?;
                if we.over != entry.over {
                    return Err(Error::TypeMismatch(format!(
                        "witness {witness} is over instance {}, simulator is over {}",
                        we.over, entry.over
                    )));
                }
                we.witness.clone()
            };
            let echo = format!("check-nogo {file} {simulator} --witness {witness}");
            let rep = report::nogo(&echo, &entry.over, &inst.instance, &entry.simulator, &w)?;
            Ok(emit(&rep, json))
        }
        Cmd::CheckUnreachability { file, via, instance, simulator, iso, twist, json } => {
            let doc = load(&file)?;
            match via {
                ViaArg::Direct => {
                    let (inst_name, inst) = named_instance(&doc, &instance)?;
                    let iso_name = iso.ok_or_else(|| {
                        Error::TypeMismatch(
                            "--via direct needs --iso naming a targets -> contexts bijection"
                                .to_string(),
                        )
                    })?;
                    let ie = doc.iso(&iso_name)?;
                    let g = twist_rel(&doc, &twist, &inst.instance.behaviors)?;
                    let d = diagonal_direct(&inst.instance, &ie.iso, &g)?;
                    let targets = Arc::clone(&inst.instance.targets);
                    let echo = format!("check-unreachability {file} --via direct");
                    let rep = report::diagonal(
                        &echo,
                        inst_name,
                        &inst.instance,
                        "direct",
                        move |i| targets.label(i).to_string(),
                        &d,
                    )?;
                    Ok(emit(&rep, json))
                }
                ViaArg::Universal => {
                    let sim_name = simulator.ok_or_else(|| {
                        Error::TypeMismatch(
                            "--via universal needs --simulator naming a universal simulator"
                                .to_string(),
                        )
                    })?;
                    let entry = doc.simulator(&sim_name)?;
                    let inst = doc.instance(&entry.over)?;
                    let iso_name = iso.ok_or_else(|| {
                        Error::TypeMismatch(
                            "--via universal needs --iso naming a contexts -> programs bijection"
                                .to_string(),
                        )
                    })?;
                    let ie = doc.iso(&iso_name)?;
                    let g = twist_rel(&doc, &twist, &inst.instance.behaviors)?;
                    let d = diagonal_via_universal(&inst.instance, &entry.simulator, &ie.iso, &g)?;
                    let programs = Arc::clone(&entry.simulator.programs);
                    let echo = format!("check-unreachability {file} --via universal");
                    let rep = report::diagonal(
                        &echo,
                        &entry.over,
                        &inst.instance,
                        "universal",
                        move |i| programs.label(i).to_string(),
                        &d,
                    )?;
                    Ok(emit(&rep, json))
                }
                ViaArg::Cantor => {
                    let (inst_name, inst) = named_instance(&doc, &instance)?;
                    let echo = format!("check-unreachability {file} --via cantor");
                    let rep = report::cantor(&echo, inst_name, &inst.instance)?;
                    Ok(emit(&rep, json))
                }
            }
        }
        Cmd::Demo { name } => match name {
            DemoArg::Turing => demo_turing(),
            DemoArg::Spin => demo_spin(),
            DemoArg::Cantor => demo_cantor(),
            DemoArg::Parsimony => demo_parsimony(),
        },
    }
}

fn twist_rel(
    doc: &Document,
    twist: &Option<String>,
    behaviors: &Arc<crate::finrel::FiniteSet>,
) -> Result<Rel> {
    match twist {
        Some(name) => Ok(doc.morphism(name)?.rel.clone()),
        None => find_fixed_point_free(behaviors).ok_or_else(|| {
            Error::TypeMismatch(
                "no fixed-point-free twist exists on fewer than two behaviors".to_string(),
            )
        }),
    }
}

fn demo_turing() -> Result<i32> {
    println!("turing demo: one interpreter simulates a corpus of small machines");
    let machines = corpus();
    let budget = RunBudget::corpus_default();
    let bounds = EncodingBounds::corpus_default();
    println!(
        "corpus: {} machines, all binary inputs up to {} bits, {} direct steps allowed",
        machines.len(),
        budget.max_input_len,
        budget.max_steps
    );
    let sweep = equivalence_sweep(&machines, &budget, &bounds)?;
    println!(
        "fitted overhead: interpreter steps <= {}*program_bits*direct_steps + {}",
        sweep.profile.a, sweep.profile.b
    );
    println!(
        "sweep: {} runs, {} halting, {} behavior mismatches, {} bound violations",
        sweep.runs,
        sweep.halting_runs,
        sweep.mismatches.len(),
        sweep.bound_violations.len()
    );
    let bundle = tm_universal_instance(&machines, &budget, &bounds)?;
    println!(
        "instance: {} targets, {} contexts, {} behaviors",
        bundle.instance.targets.len(),
        bundle.instance.contexts.len(),
        bundle.instance.behaviors.len()
    );
    let rep = check_universality(&bundle.instance, &bundle.simulator, Mode::Strict);
    println!(
        "strict universality of {}: {}",
        bundle.simulator.name,
        if rep.universal { "holds" } else { "fails" }
    );
    if let Some(witness) = &rep.witness {
        let programs: Vec<&str> =
            witness.values().map(|&p| bundle.simulator.programs.label(p)).collect();
        println!("witness compiles each machine to its encoding: {} programs", programs.len());
    }
    Ok(if sweep.clean() && rep.universal { 0 } else { 1 })
}

fn demo_spin() -> Result<i32> {
    println!("spin demo: a spectral ceiling rules out a bundled simulator");
    let (inst, sim, witness) = bundled_nogo()?;
    let targets: Vec<&str> = inst.targets.labels().collect();
    println!("targets: {}", targets.join(", "));
    println!(
        "spectrum sizes: {}",
        witness
            .values
            .iter()
            .enumerate()
            .map(|(i, v)| format!("{}={v}", inst.targets.label(i as u16)))
            .collect::<Vec<_>>()
            .join(", ")
    );
    let rep = check_nogo(&inst, &sim, &witness)?;
    match &rep.verdict {
        NogoVerdict::Obstructed { target, value, ceiling } => println!(
            "obstruction: {} has spectrum size {value}, the compiler image tops out at {ceiling}",
            inst.targets.label(*target)
        ),
        NogoVerdict::Inconclusive { reason } => println!("inconclusive: {reason}"),
    }
    let strict = check_universality(&inst, &sim, Mode::Strict);
    let lax = check_universality(&inst, &sim, Mode::Lax);
    println!(
        "direct check agrees: strict universality {}, lax universality {}",
        if strict.universal { "holds" } else { "fails" },
        if lax.universal { "holds" } else { "fails" }
    );
    Ok(if rep.obstructed() && !strict.universal && !lax.universal { 0 } else { 1 })
}

fn demo_cantor() -> Result<i32> {
    println!("cantor demo: no simulator with programs = contexts is universal");
    let inst = finfun_instance(2, 2)?;
    println!(
        "instance: every function from {} contexts to {} behaviors is a target ({} targets)",
        inst.contexts.len(),
        inst.behaviors.len(),
        inst.targets.len()
    );
    let rep = cantor_nogo(&inst)?;
    println!(
        "enumerated {} simulators with {} programs each",
        rep.simulators_checked, rep.program_bound
    );
    match &rep.universal_found {
        Some(name) => println!("unexpectedly universal: {name}"),
        None => {
            println!("none are universal; counterexample targets by frequency:");
            for (t, n) in &rep.counterexample_counts {
                println!("  {} defeats {} simulators", inst.targets.label(*t), n);
            }
        }
    }
    Ok(if rep.universal_found.is_none() { 0 } else { 1 })
}

fn demo_parsimony() -> Result<i32> {
    println!("parsimony demo: two universal simulators, one strictly more parsimonious");
    let inst = finfun_instance(2, 2)?;
    let trivial = Simulator::trivial(&inst);
    let single = singleton_simulator(&inst)?;
    println!(
        "{}: {} programs; {}: {} programs",
        trivial.name,
        trivial.programs.len(),
        single.name,
        single.programs.len()
    );
    let rep = compare_parsimony(&inst, &trivial, &single)?;
    for (from, to, outcome) in [
        (&rep.first, &rep.second, &rep.first_to_second),
        (&rep.second, &rep.first, &rep.second_to_first),
    ] {
        match outcome {
            SearchOutcome::Found(_) => println!("morphism {from} -> {to}: found"),
            SearchOutcome::RuledOut(p) => println!(
                "morphism {from} -> {to}: ruled out ({} candidate maps, {} assignments checked)",
                p.maps_total, p.assignments_checked
            ),
            SearchOutcome::Unknown { estimate, limit } => {
                println!("morphism {from} -> {to}: unknown ({estimate} candidates > limit {limit})")
            }
        }
    }
    println!("relation: {}", rep.relation);
    Ok(if rep.relation == ParsimonyRelation::SecondStrictlyAbove { 0 } else { 1 })
}
