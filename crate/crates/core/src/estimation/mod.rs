//! Sampling estimators and verification of the inequalities on concrete
//! functions: empirical Chebyshev degrees, convex-body checks, distribution
//! and Orlicz-norm estimates, structural and quasipolynomial checks.
//!
//! All randomness flows from a `u64` seed through [`crate::rng::stream`];
//! parallel work is reduced in index order, so results do not depend on the
//! thread count.

mod body;
mod composition;
mod convex;
mod degree;
mod distribution;
mod intervals;
mod quasi;
mod report;
mod structural;
mod suites;
mod sup;

pub use body::{
    select_ray, unit_ball_volume, BodyDescription, ConvexBody, ProductSet, RaySelection, Region,
};
pub use composition::{
    complex_ball_sup, compose_truncation, composition_experiment, CompositionRow, CompositionTable,
};
pub use convex::{
    sup_pair, verify_ball_pair, verify_brudnyi_ganzburg, verify_convex_body, SupPair,
};
pub use degree::{
    empirical_chebyshev_degree, remez_config, remez_term, verify_remez_1d, ConfigWitness,
    DegreeConfig, EmpiricalDegree, RemezConfig, RemezTerm,
};
pub use distribution::{
    bourgain_distribution_scan, bourgain_halfmeasure_check, default_lambda_grid,
    distribution_function, holder_constant_from_tail, log_bmo_integral, orlicz_norm,
    reverse_holder_ratio, BourgainScan, HalfMeasure, HolderRatio, LogBmoEstimate, McSample,
    OrliczFunction, MIN_MC,
};
pub use intervals::IntervalUnion;
pub use quasi::{
    quasipoly_verification, quasipoly_zero_counts, random_quasipolynomial, QuasiZeroStats,
};
pub use report::{format_reports, inputs, OutputFormat, Table, VerificationReport};
pub use structural::{
    calibrate, proposition3_checks, reciprocal_valencies, reference_family, Calibration,
    CalibrationMember, Prop3Input, StructuralSettings,
};
pub use suites::{
    default_composition_inner, default_exponent, default_function, default_quasipolynomial,
    run_suite, standard_bodies, RunConfig, Suite, SuiteOutput,
};
pub use sup::{sup_on_segment, sup_on_subset, MIN_EVAL};
