//! Context-free 0/1 value assignments on measurement effects.

use steercert::quantum::Povm;
use steercert::steering::{check_value_assignment, ValueAssignment};

fn main() -> steercert::error::Result<()> {
    let groups = [Povm::sigma_z(), Povm::sigma_x()];
    for values in [vec![vec![1, 0], vec![0, 1]], vec![vec![1, 1], vec![0, 1]], vec![vec![0, 0], vec![1, 0]]] {
        let ok = check_value_assignment(&groups, &ValueAssignment::new(values.clone()));
        println!("{values:?}: {ok}");
    }

    // Z appearing twice: its +1 projector must get the same value both times.
    let twice = [Povm::sigma_z(), Povm::sigma_z()];
    println!("Z twice, consistent:   {}", check_value_assignment(&twice, &ValueAssignment::new(vec![vec![1, 0], vec![1, 0]])));
    println!("Z twice, inconsistent: {}", check_value_assignment(&twice, &ValueAssignment::new(vec![vec![1, 0], vec![0, 1]])));

    // Coarse-graining both outcomes yields the identity, valued 1.
    let with_identity = ValueAssignment::new(vec![vec![0, 1]]).with_coarse(0, vec![0, 1], 1);
    println!("coarse identity = 1: {}", check_value_assignment(&groups[..1], &with_identity));
    Ok(())
}
