//! Analytic functions on complex balls and their restrictions to lines.

mod expr;
mod line;
mod poly;
mod quasi;
mod restrict;
mod sampling;
mod spec_file;
mod univariate;
mod vector;

pub use expr::{
    exp_series, AnalyticExpr, Composition, DirectionalDerivative, DEFAULT_SERIES_LENGTH,
};
pub use line::{ComplexLine, ParamMap, RealSegment};
pub use poly::{MultiIndex, MultiPoly};
pub use quasi::{LinearFunctional, QuasiPolynomial, QuasiTerm};
pub use restrict::AffineRestriction;
pub use sampling::{
    sample_complex_line, sample_complex_line_in, sample_real_segment, uniform_in_complex_ball,
    SegmentDomain,
};
pub use spec_file::{parse_function_spec, to_function_spec};
pub use univariate::UniPoly;
pub use vector::ComplexVector;
