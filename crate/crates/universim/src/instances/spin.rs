//! Classical spin systems as evaluation instances: targets are systems,
//! contexts are configurations, behaviors are exact energies.
//!
//! Energies are rationals throughout; a system is admitted into an
//! instance only if every energy lands on the declared quantization grid
//! (denominators dividing the grid's). Configurations are dot-joined level
//! strings, and a configuration is evaluated under every system whose
//! shape it fits, so instances mixing shapes have partial evaluation by
//! construction.

use std::collections::{BTreeMap, BTreeSet};

use num::rational::Ratio;

use crate::error::{Error, Result};
use crate::finrel::{FiniteSet, Product, Rel};
use crate::nogo::{spectrum_witness, MonotoneWitness};
use crate::simulator::{EvalInstance, Simulator};

pub type Energy = Ratio<i64>;

/// A coupling on a list of distinct sites, with one energy contribution
/// per local configuration. Tables are total over the local space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interaction {
    pub sites: Vec<usize>,
    pub table: BTreeMap<Vec<u8>, Energy>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpinSystem {
    pub name: String,
    /// Levels per site, each at least 2.
    pub levels: Vec<u8>,
    pub interactions: Vec<Interaction>,
}

/// Spin sign of a two-level site: level 0 is up (+1), level 1 is down (-1).
fn sigma(level: u8) -> i64 {
    if level == 0 {
        1
    } else {
        -1
    }
}

impl SpinSystem {
    pub fn new(name: impl Into<String>, levels: Vec<u8>) -> Result<SpinSystem> {
        let name = name.into();
        if levels.is_empty() {
            return Err(Error::ConfigMismatch(format!("system {name:?} has no sites")));
        }
        if levels.iter().any(|&l| l < 2) {
            return Err(Error::ConfigMismatch(format!(
                "system {name:?} has a site with fewer than two levels"
            )));
        }
        Ok(SpinSystem { name, levels, interactions: Vec::new() })
    }

    pub fn add_interaction(&mut self, sites: Vec<usize>, table: BTreeMap<Vec<u8>, Energy>) -> Result<()> {
        let mut seen = BTreeSet::new();
        for &s in &sites {
            if s >= self.levels.len() {
                return Err(Error::ConfigMismatch(format!(
                    "site {s} out of range for system {:?}",
                    self.name
                )));
            }
            if !seen.insert(s) {
                return Err(Error::ConfigMismatch(format!(
                    "site {s} repeated in an interaction of system {:?}",
                    self.name
                )));
            }
        }
        let local: usize = sites.iter().map(|&s| self.levels[s] as usize).product();
        if table.len() != local {
            return Err(Error::ConfigMismatch(format!(
                "interaction table on sites {sites:?} of system {:?} has {} rows, needs {local}",
                self.name,
                table.len()
            )));
        }
        for key in table.keys() {
            if key.len() != sites.len()
                || key.iter().zip(&sites).any(|(&lvl, &s)| lvl >= self.levels[s])
            {
                return Err(Error::ConfigMismatch(format!(
                    "bad local configuration {key:?} for sites {sites:?} of system {:?}",
                    self.name
                )));
            }
        }
        self.interactions.push(Interaction { sites, table });
        Ok(())
    }

    /// Pair coupling J * sigma_i * sigma_j on two-level sites.
    pub fn add_ising(&mut self, i: usize, j: usize, coupling: Energy) -> Result<()> {
        self.check_two_level(i)?;
        self.check_two_level(j)?;
        let mut table = BTreeMap::new();
        for a in 0..2u8 {
            for b in 0..2u8 {
                table.insert(vec![a, b], coupling * Ratio::from_integer(sigma(a) * sigma(b)));
            }
        }
        self.add_interaction(vec![i, j], table)
    }

    /// Local field h * sigma_i on a two-level site.
    pub fn add_field(&mut self, i: usize, h: Energy) -> Result<()> {
        self.check_two_level(i)?;
        let mut table = BTreeMap::new();
        for a in 0..2u8 {
            table.insert(vec![a], h * Ratio::from_integer(sigma(a)));
        }
        self.add_interaction(vec![i], table)
    }

    fn check_two_level(&self, i: usize) -> Result<()> {
        if i >= self.levels.len() {
            return Err(Error::ConfigMismatch(format!(
                "site {i} out of range for system {:?}",
                self.name
            )));
        }
        if self.levels[i] != 2 {
            return Err(Error::ConfigMismatch(format!(
                "site {i} of system {:?} is not two-level",
                self.name
            )));
        }
        Ok(())
    }

    /// All configurations, lexicographic by site.
    pub fn configs(&self) -> Vec<Vec<u8>> {
        let mut out = Vec::new();
        let mut cur = vec![0u8; self.levels.len()];
        loop {
            out.push(cur.clone());
            let mut k = self.levels.len();
            loop {
                if k == 0 {
                    return out;
                }
                k -= 1;
                if cur[k] + 1 < self.levels[k] {
                    cur[k] += 1;
                    for c in cur.iter_mut().skip(k + 1) {
                        *c = 0;
                    }
                    break;
                }
            }
        }
    }

    pub fn energy(&self, config: &[u8]) -> Result<Energy> {
        if !self.fits(config) {
            return Err(Error::ConfigMismatch(format!(
                "configuration {config:?} does not fit system {:?}",
                self.name
            )));
        }
        let mut total = Ratio::from_integer(0);
        for inter in &self.interactions {
            let local: Vec<u8> = inter.sites.iter().map(|&s| config[s]).collect();
            total += inter.table[&local];
        }
        Ok(total)
    }

    /// Whether a configuration has this system's shape.
    pub fn fits(&self, config: &[u8]) -> bool {
        config.len() == self.levels.len()
            && config.iter().zip(&self.levels).all(|(&c, &l)| c < l)
    }

    pub fn spectrum(&self) -> BTreeSet<Energy> {
        self.configs().iter().map(|c| self.energy(c).expect("own configs fit")).collect()
    }
}

pub fn config_label(config: &[u8]) -> String {
    config.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(".")
}

pub fn parse_config(label: &str) -> Option<Vec<u8>> {
    label.split('.').map(|p| p.parse().ok()).collect()
}

/// Canonical energy label: reduced rational, "n" or "n/d".
pub fn energy_label(e: Energy) -> String {
    e.to_string()
}

/// Builds the instance over a family of systems. Every energy must sit on
/// the 1/quantization grid.
pub fn spin_instance(systems: &[SpinSystem], quantization: i64) -> Result<EvalInstance> {
    if quantization < 1 {
        return Err(Error::ConfigMismatch(format!(
            "quantization must be positive, got {quantization}"
        )));
    }
    if systems.is_empty() {
        return Err(Error::ConfigMismatch("no systems given".to_string()));
    }
    let targets = FiniteSet::new("T", systems.iter().map(|s| s.name.clone()).collect())?;
    let mut context_labels = BTreeSet::new();
    let mut behavior_labels = BTreeSet::new();
    for sys in systems {
        for config in sys.configs() {
            context_labels.insert(config_label(&config));
            let e = sys.energy(&config)?;
            if quantization % e.denom() != 0 {
                return Err(Error::QuantizationOverflow {
                    quantization,
                    energy: energy_label(e),
                });
            }
            behavior_labels.insert(energy_label(e));
        }
    }
    let contexts = FiniteSet::new("C", context_labels.into_iter().collect())?;
    let behaviors = FiniteSet::new("B", behavior_labels.into_iter().collect())?;

    let by_name: BTreeMap<&str, &SpinSystem> =
        systems.iter().map(|s| (s.name.as_str(), s)).collect();
    let dom = Product::of(&targets).tensor(&Product::of(&contexts));
    let mut pairs = BTreeSet::new();
    for t in 0..targets.len() as u16 {
        let sys = by_name[targets.label(t)];
        for c in 0..contexts.len() as u16 {
            let config = parse_config(contexts.label(c))
                .ok_or_else(|| Error::Internal("unparseable stored config".to_string()))?;
            if sys.fits(&config) {
                let e = sys.energy(&config)?;
                let b = behaviors
                    .index_of(&energy_label(e))
                    .ok_or_else(|| Error::Internal("energy missing from behaviors".to_string()))?;
                pairs.insert((vec![t, c], vec![b]));
            }
        }
    }
    let eval = Rel::from_pairs(dom, Product::of(&behaviors), pairs)?;
    EvalInstance::new(targets, contexts, behaviors, eval)
}

/// The packaged obstruction demo: two Ising pairs (ferro and antiferro)
/// against a two-site field system whose spectrum is twice as rich. A
/// simulator that only compiles to the Ising systems is capped at spectrum
/// size two, and the field system's four-point spectrum certifies that it
/// cannot be universal.
pub fn bundled_nogo() -> Result<(EvalInstance, Simulator, MonotoneWitness)> {
    let mut ising_a = SpinSystem::new("ising_a", vec![2, 2])?;
    ising_a.add_ising(0, 1, Ratio::from_integer(1))?;
    let mut ising_b = SpinSystem::new("ising_b", vec![2, 2])?;
    ising_b.add_ising(0, 1, Ratio::from_integer(-1))?;
    let mut field = SpinSystem::new("field_12", vec![2, 2])?;
    field.add_field(0, Ratio::from_integer(1))?;
    field.add_field(1, Ratio::from_integer(2))?;

    let instance = spin_instance(&[ising_a, ising_b, field], 1)?;
    let programs = FiniteSet::new("P", vec!["pa".to_string(), "pb".to_string()])?;
    let p = Product::of(&programs);
    let t = Product::of(&instance.targets);
    let c = Product::of(&instance.contexts);
    let ia = instance.targets.index_of("ising_a").expect("present");
    let ib = instance.targets.index_of("ising_b").expect("present");
    let compiler =
        Rel::from_fn(p.clone(), t, |x| Some(vec![if x[0] == 0 { ia } else { ib }]))?;
    let reduction = Rel::from_fn(p.tensor(&c), c.clone(), |x| Some(vec![x[1]]))?;
    let sim = Simulator::new("ising-only", &instance, programs, compiler, reduction)?;
    let witness = spectrum_witness(&instance);
    Ok((instance, sim, witness))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nogo::{check_nogo, NogoVerdict};
    use crate::universality::{check_universality, Mode};

    fn ratio(n: i64, d: i64) -> Energy {
        Ratio::new(n, d)
    }

    /// Frozen: a single Ising pair has the two-point spectrum {-1, 1} for
    /// either coupling sign.
    #[test]
    fn ising_pair_spectrum() {
        for j in [1, -1] {
            let mut sys = SpinSystem::new("s", vec![2, 2]).unwrap();
            sys.add_ising(0, 1, Ratio::from_integer(j)).unwrap();
            let spec: Vec<Energy> = sys.spectrum().into_iter().collect();
            assert_eq!(spec, vec![Ratio::from_integer(-1), Ratio::from_integer(1)]);
            // aligned pair: energy J, anti-aligned: -J
            assert_eq!(sys.energy(&[0, 0]).unwrap(), Ratio::from_integer(j));
            assert_eq!(sys.energy(&[0, 1]).unwrap(), Ratio::from_integer(-j));
        }
    }

    /// Frozen: fields (1, 2) give the four-point spectrum {-3, -1, 1, 3}.
    #[test]
    fn field_pair_spectrum() {
        let mut sys = SpinSystem::new("s", vec![2, 2]).unwrap();
        sys.add_field(0, Ratio::from_integer(1)).unwrap();
        sys.add_field(1, Ratio::from_integer(2)).unwrap();
        let spec: Vec<Energy> = sys.spectrum().into_iter().collect();
        let expect: Vec<Energy> = [-3, -1, 1, 3].map(Ratio::from_integer).into();
        assert_eq!(spec, expect);
        assert_eq!(sys.energy(&[0, 0]).unwrap(), Ratio::from_integer(3));
        assert_eq!(sys.energy(&[1, 0]).unwrap(), Ratio::from_integer(1));
    }

    /// Frozen: three-site chain with couplings 1 and 2, up-down-up.
    #[test]
    fn chain_energy() {
        let mut sys = SpinSystem::new("chain", vec![2, 2, 2]).unwrap();
        sys.add_ising(0, 1, Ratio::from_integer(1)).unwrap();
        sys.add_ising(1, 2, Ratio::from_integer(2)).unwrap();
        assert_eq!(sys.energy(&[0, 1, 0]).unwrap(), Ratio::from_integer(-3));
        assert_eq!(sys.energy(&[0, 0, 0]).unwrap(), Ratio::from_integer(3));
    }

    #[test]
    fn fractional_couplings_respect_the_grid() {
        let mut sys = SpinSystem::new("half", vec![2, 2]).unwrap();
        sys.add_ising(0, 1, ratio(1, 2)).unwrap();
        assert!(spin_instance(&[sys.clone()], 2).is_ok());
        let err = spin_instance(&[sys], 1).unwrap_err();
        match err {
            Error::QuantizationOverflow { quantization, energy } => {
                assert_eq!(quantization, 1);
                assert!(energy == "1/2" || energy == "-1/2");
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn energy_labels_are_reduced() {
        assert_eq!(energy_label(ratio(2, 4)), "1/2");
        assert_eq!(energy_label(ratio(-6, 2)), "-3");
        assert_eq!(energy_label(ratio(0, 5)), "0");
        assert_eq!(parse_config("0.1.3"), Some(vec![0, 1, 3]));
        assert_eq!(parse_config("0,1"), None);
    }

    #[test]
    fn mixed_shapes_give_partial_eval() {
        let mut two = SpinSystem::new("two", vec![2, 2]).unwrap();
        two.add_ising(0, 1, Ratio::from_integer(1)).unwrap();
        let mut three = SpinSystem::new("three", vec![2, 2, 2]).unwrap();
        three.add_ising(0, 1, Ratio::from_integer(1)).unwrap();
        let inst = spin_instance(&[two, three], 1).unwrap();
        assert_eq!(inst.contexts.len(), 4 + 8);
        assert!(!inst.eval_is_total());
        // the two-site system is undefined on three-site configs
        let t2 = inst.targets.index_of("two").unwrap();
        let c3 = inst.contexts.index_of("0.0.0").unwrap();
        assert!(inst.eval.apply(&[t2, c3]).is_empty());
        let c2 = inst.contexts.index_of("0.1").unwrap();
        assert_eq!(inst.eval.apply(&[t2, c2]).len(), 1);
    }

    #[test]
    fn interaction_validation() {
        let mut sys = SpinSystem::new("s", vec![2, 3]).unwrap();
        assert!(sys.add_ising(0, 1, Ratio::from_integer(1)).is_err()); // site 1 not two-level
        assert!(sys.add_field(5, Ratio::from_integer(1)).is_err());
        // incomplete table
        let mut table = BTreeMap::new();
        table.insert(vec![0u8], Ratio::from_integer(1));
        assert!(sys.add_interaction(vec![1], table).is_err());
        assert!(SpinSystem::new("s", vec![1]).is_err());
        assert!(SpinSystem::new("s", vec![]).is_err());
    }

    /// Frozen end-to-end obstruction: the Ising-only simulator is capped
    /// at spectrum size 2, the field system scores 4, and the exhaustive
    /// universality check agrees with the certificate.
    #[test]
    fn bundled_nogo_is_obstructed() {
        let (inst, sim, witness) = bundled_nogo().unwrap();
        let t: Vec<&str> = inst.targets.labels().collect();
        assert_eq!(t, vec!["field_12", "ising_a", "ising_b"]);
        assert_eq!(witness.values, vec![4, 2, 2]);
        let report = check_nogo(&inst, &sim, &witness).unwrap();
        assert_eq!(report.image, vec![1, 2]);
        assert_eq!(report.ceiling, Some((2, 1)));
        assert_eq!(
            report.verdict,
            NogoVerdict::Obstructed { target: 0, value: 4, ceiling: 2 }
        );
        assert!(!check_universality(&inst, &sim, Mode::Lax).universal);
    }
}
