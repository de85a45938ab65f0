//! Fixtures shared by the benchmarks.

use toda_core::linalg::rat;
use toda_core::{CellPoint, Permutation, ReducedWord, Result};

/// The parametrized `S_6` cell with `p = (2, 3, 5, 7)`.
pub fn s6_example() -> Result<CellPoint> {
    let w = ReducedWord::new(6, vec![2, 3, 1, 4, 5, 3, 2])?;
    let v = Permutation::from_letters(6, &[3, 4, 2])?;
    CellPoint::new(v, w, [2, 3, 5, 7].iter().map(|&x| rat(x, 1)).collect())
}

/// The `sl_4` cell `v = s3`, `w = s2 s3 s2 s1`.
pub fn sl4_example() -> Result<CellPoint> {
    let v = Permutation::from_letters(4, &[3])?;
    let w = ReducedWord::new(4, vec![2, 3, 2, 1])?;
    CellPoint::new(v, w, vec![rat(2, 1), rat(3, 1), rat(1, 2)])
}

/// A cell of the big cell `(e, w0)` in `S_n` with unit parameters.
pub fn big_cell(n: usize) -> Result<CellPoint> {
    CellPoint::unit(Permutation::identity(n), Permutation::longest(n).reduced_word())
}
