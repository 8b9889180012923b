use std::sync::Arc;

use crate::groupoid::group::FiniteGroup;

const V4: [[usize; 4]; 4] = [[0, 1, 2, 3], [1, 0, 3, 2], [2, 3, 0, 1], [3, 2, 1, 0]];

// Permutations of {0,1,2} composed right to left.
const S3: [[usize; 6]; 6] = [
    [0, 1, 2, 3, 4, 5],
    [1, 0, 4, 5, 2, 3],
    [2, 5, 0, 4, 3, 1],
    [3, 4, 5, 0, 1, 2],
    [4, 3, 1, 2, 5, 0],
    [5, 2, 3, 1, 0, 4],
];

// r^a s^b at index 4b + a.
const D4: [[usize; 8]; 8] = [
    [0, 1, 2, 3, 4, 5, 6, 7],
    [1, 2, 3, 0, 5, 6, 7, 4],
    [2, 3, 0, 1, 6, 7, 4, 5],
    [3, 0, 1, 2, 7, 4, 5, 6],
    [4, 7, 6, 5, 0, 3, 2, 1],
    [5, 4, 7, 6, 1, 0, 3, 2],
    [6, 5, 4, 7, 2, 1, 0, 3],
    [7, 6, 5, 4, 3, 2, 1, 0],
];

const Q8: [[usize; 8]; 8] = [
    [0, 1, 2, 3, 4, 5, 6, 7],
    [1, 0, 3, 2, 5, 4, 7, 6],
    [2, 3, 1, 0, 6, 7, 5, 4],
    [3, 2, 0, 1, 7, 6, 4, 5],
    [4, 5, 7, 6, 1, 0, 2, 3],
    [5, 4, 6, 7, 0, 1, 3, 2],
    [6, 7, 4, 5, 3, 2, 1, 0],
    [7, 6, 5, 4, 2, 3, 0, 1],
];

fn from_table<const N: usize>(ids: [&str; N], table: &[[usize; N]; N]) -> FiniteGroup {
    let mul = table.iter().flatten().copied().collect();
    FiniteGroup::from_indices(ids.iter().map(|s| s.to_string()).collect(), mul, 0).expect("catalog table")
}

/// The Klein four-group with the element names used for the reflections of
/// a square: `(τ,e)` and `(e,τ)` reflect, `(τ,τ)` rotates by half a turn.
pub fn klein_four() -> FiniteGroup {
    from_table(["(e,e)", "(e,τ)", "(τ,e)", "(τ,τ)"], &V4)
}

pub fn symmetric3() -> FiniteGroup {
    from_table(["e", "(01)", "(12)", "(02)", "(012)", "(021)"], &S3)
}

pub fn dihedral4() -> FiniteGroup {
    from_table(["e", "r", "r2", "r3", "s", "rs", "r2s", "r3s"], &D4)
}

pub fn quaternion() -> FiniteGroup {
    from_table(["1", "-1", "i", "-i", "j", "-j", "k", "-k"], &Q8)
}

/// Built-in groups of order at most `max_order`, smallest first: `C1`..`C8`,
/// then `V4`, `S3`, `D4`, `Q8`.
pub fn catalog(max_order: usize) -> Vec<(&'static str, Arc<FiniteGroup>)> {
    const CYCLIC: [&str; 8] = ["C1", "C2", "C3", "C4", "C5", "C6", "C7", "C8"];
    let mut out: Vec<(&'static str, Arc<FiniteGroup>)> =
        (1..=8).map(|n| (CYCLIC[n - 1], Arc::new(FiniteGroup::cyclic(n)))).collect();
    out.push(("V4", Arc::new(klein_four())));
    out.push(("S3", Arc::new(symmetric3())));
    out.push(("D4", Arc::new(dihedral4())));
    out.push(("Q8", Arc::new(quaternion())));
    out.retain(|(_, g)| g.order() <= max_order);
    out.sort_by_key(|(_, g)| g.order());
    out
}
