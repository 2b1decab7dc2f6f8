//! Inner and outer Bloch-ball polytopes for the standard mesh sizes.

use steercert::steering::{MeshPair, STANDARD_MESH_SIZES};

fn main() -> steercert::error::Result<()> {
    println!("{:>6} {:>10} {:>14}", "n", "inflate", "covering (deg)");
    for &n in STANDARD_MESH_SIZES.iter() {
        let info = MeshPair::fibonacci(n)?.info();
        println!("{:>6} {:>10.6} {:>14.3}", info.vertices, info.inflate, info.covering_angle.to_degrees());
    }
    let octa = MeshPair::from_directions(vec![
        [1.0, 0.0, 0.0],
        [-1.0, 0.0, 0.0],
        [0.0, 1.0, 0.0],
        [0.0, -1.0, 0.0],
        [0.0, 0.0, 1.0],
        [0.0, 0.0, -1.0],
    ])?;
    println!("octahedron: inflate {:.6} (sqrt 3 = {:.6})", octa.info().inflate, 3f64.sqrt());
    Ok(())
}
