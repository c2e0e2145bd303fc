//! The grid criterion for `liminf P_N(α) = 0` when partial quotients
//! exceed 7 infinitely often.

mod bounds;
mod grid;
mod majorant;
mod theorem1;
mod windows;

pub use bounds::{b_fn, e_bound, e_bound_u64, effective_digit_bound, pinner_bound};
pub use grid::{verify_grid, CellStatus, CriterionParams, GridCell, GridChecker, GridSummary};
pub use majorant::{f_exact, f_grid_exact, g_majorant, CellSums, GridF};
pub use theorem1::{
    fallback_threshold, figure1, large_ak_check, seven_threshold, verify_theorem1, Figure1Row, Theorem1Case,
};
pub use windows::{all_windows, excluded_cell_ranges, excluded_windows, Window};
