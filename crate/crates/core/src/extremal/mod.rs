//! Extremality of the regular polygon: simplex optimization, convexity and monotonicity scans.

mod analysis;
mod optimize;

pub use analysis::{
    case_seed, convexity_scan, empirical_extremality, h_analysis, monotonicity_table, open_grid, sig15,
    ExtremalitySample, MonotonicityTable, TableRow,
};
pub use optimize::{
    maximize_area_from, maximize_area_over_simplex, project_capped_simplex, random_start, OptimizationResult,
    OptimizeConfig,
};
