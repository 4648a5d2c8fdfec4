//! Finite sets, products and relations: the algebra everything else
//! builds on.

use universim::error::Result;
use universim::finrel::{FiniteSet, Product, Rel};

fn main() -> Result<()> {
    let coin = FiniteSet::new("coin", vec!["heads".into(), "tails".into()])?;
    let die = FiniteSet::new("die", vec!["1".into(), "2".into(), "3".into()])?;

    let c = Product::of(&coin);
    let d = Product::of(&die);
    println!("objects: {} and {}", c.describe(), d.describe());

    // a relation listed pair by pair: heads relates to odd faces, tails
    // to even ones
    let odd_even = Rel::from_pairs(
        c.clone(),
        d.clone(),
        [
            (vec![0], vec![0]),
            (vec![0], vec![2]),
            (vec![1], vec![1]),
        ]
        .into_iter()
        .collect(),
    )?;
    for face in odd_even.apply(&[coin.index_of("heads").unwrap()]) {
        println!("heads -> {}", die.label(face[0]));
    }

    // a function given by a closure: faces map back to the coin by parity
    let parity = Rel::from_fn(d.clone(), c.clone(), |x| Some(vec![x[0] % 2]))?;
    println!("parity is a total function: {}", parity.is_total_function());

    // composition runs left to right; heads -> {1,3} -> {heads}
    let round_trip = odd_even.compose(&parity)?;
    println!("round trip is contained in identity: {}", Rel::identity(&c).subsumes(&round_trip)?);
    println!("round trip equals identity: {}", round_trip.same(&Rel::identity(&c)));

    // tensor pairs relations side by side; projections discard factors
    let both = c.tensor(&d);
    println!("tensor object: {} with {} tuples", both.describe(), 6);
    let keep_coin = Rel::projection(&both, &[0])?;
    let image = keep_coin.image();
    println!("projection image has {} elements", image.len());

    // transposition flips direction; composing with the transpose gives
    // a symmetric relation
    let back = odd_even.transpose();
    let sym = odd_even.compose(&back)?;
    println!("relation composed with its transpose is symmetric: {}", sym.same(&sym.transpose()));
    Ok(())
}
