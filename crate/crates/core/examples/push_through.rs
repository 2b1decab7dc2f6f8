//! Any Kraus realisation of Alice's POVM produces the same assemblage as the
//! POVM itself.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use steercert::quantum::{assemblage_from_instrument, assemblage_from_povms, Instrument};
use steercert::sampling::{random_kraus_decomposition, random_povm, random_shared_state};

fn main() -> steercert::error::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let state = random_shared_state(&mut rng, 2, 2);
        let povm = random_povm(&mut rng, 2, 3);
        let inst = random_kraus_decomposition(&mut rng, &povm, 3)?;
        let a = assemblage_from_povms(&state, std::slice::from_ref(&povm))?;
        let b = assemblage_from_instrument(&state, &[inst])?;
        worst = worst.max(a.max_deviation(&b));
    }
    println!("200 random triples: max deviation {worst:.3e}");

    let state = random_shared_state(&mut rng, 2, 2);
    let povm = random_povm(&mut rng, 2, 2);
    let lueders = assemblage_from_instrument(&state, &[Instrument::lueders(&povm)?])?;
    let direct = assemblage_from_povms(&state, &[povm])?;
    println!("Lueders instrument: deviation {:.3e}", lueders.max_deviation(&direct));
    Ok(())
}
