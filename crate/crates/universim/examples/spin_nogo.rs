//! A bundle of two spin systems cannot simulate a richer third one: the
//! energy spectrum size is monotone under simulation, and the bundle's
//! ceiling sits below the target's spectrum.

use universim::error::Result;
use universim::instances::spin::{bundled_nogo, energy_label, Energy, SpinSystem};
use universim::nogo::{check_nogo, spectrum_size, NogoVerdict};
use universim::universality::{check_universality, Mode};

fn main() -> Result<()> {
    // spectra by hand first: a two-site Ising pair with a field on one
    // site has four distinct energies, a bare pair only two
    let mut rich = SpinSystem::new("rich", vec![2, 2])?;
    rich.add_ising(0, 1, Energy::new(1, 1))?;
    rich.add_field(0, Energy::new(1, 2))?;
    let show = |s: &SpinSystem| {
        s.spectrum().into_iter().map(energy_label).collect::<Vec<_>>().join(", ")
    };
    println!("rich spectrum: {}", show(&rich));

    let mut bare = SpinSystem::new("bare", vec![2, 2])?;
    bare.add_ising(0, 1, Energy::new(1, 1))?;
    println!("bare spectrum: {}", show(&bare));

    // the packaged instance bundles two bare-like systems against the
    // rich target
    let (instance, bundle, witness) = bundled_nogo()?;
    println!(
        "targets: {}",
        instance.targets.labels().collect::<Vec<_>>().join(", ")
    );
    for (i, v) in witness.values.iter().enumerate() {
        println!("  spectrum-size({}) = {v}", instance.targets.label(i as u16));
    }
    println!(
        "direct recount of target 0: {}",
        spectrum_size(&instance, 0)
    );

    let report = check_nogo(&instance, &bundle, &witness)?;
    match report.verdict {
        NogoVerdict::Obstructed { target, value, ceiling } => println!(
            "obstructed: {} needs {value} energies, the bundle reaches only {ceiling}",
            instance.targets.label(target)
        ),
        NogoVerdict::Inconclusive { ref reason } => println!("inconclusive: {reason}"),
    }

    // the slow path agrees with the certificate
    let strict = check_universality(&instance, &bundle, Mode::Strict);
    let lax = check_universality(&instance, &bundle, Mode::Lax);
    println!("direct check: strict {}, lax {}", strict.universal, lax.universal);
    Ok(())
}
