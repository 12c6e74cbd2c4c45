//! Univariate complex analysis on disks: sup norms, zero counting, valency,
//! Bernstein indices, Taylor coefficients.

mod bernstein;
mod holomorphic;
mod sup;
mod taylor;
mod valency;
mod zeros;

pub use bernstein::{bernstein_index, BernsteinIndexReport};
pub use holomorphic::{value_and_derivative, FnHolomorphic, Holomorphic, Shifted};
pub use sup::{disk_sup_log, DiskSupResult, MIN_BOUNDARY_SAMPLES};
pub use taylor::{
    bernstein_class_check, growth_bound_check, taylor_coefficients, BernsteinClassReport,
    GrowthCheck, TaylorSeries,
};
pub(crate) use valency::is_constant;
pub use valency::{
    line_family, valency_at_targets, valency_frame, valency_global, valency_on_disk,
    valency_targets, DiskValency, LineWitness, ValencyConfig, ValencyReport,
};
pub(crate) use zeros::ContourCache;
pub use zeros::{count_zeros, count_zeros_with, ZeroCount, ZeroCountConfig};
