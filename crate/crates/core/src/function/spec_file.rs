//! The JSON function-spec format.
//!
//! ```json
//! {"dim": 2, "expr": {"kind": "product",
//!   "left":  {"kind": "poly", "terms": [[[1, 0], [1.0, 0.0]]]},
//!   "right": {"kind": "exp",  "arg": {"kind": "poly", "terms": [[[0, 1], 0.5]]}}}}
//! ```
//!
//! Complex numbers are written `[re, im]` or as a bare real. Unknown fields
//! are rejected.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::expr::{exp_series, AnalyticExpr, DEFAULT_SERIES_LENGTH};
use super::poly::MultiPoly;
use super::quasi::{LinearFunctional, QuasiPolynomial};
use super::vector::ComplexVector;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
enum ComplexRepr {
    Real(f64),
    Pair([f64; 2]),
}

impl From<ComplexRepr> for Complex64 {
    fn from(c: ComplexRepr) -> Self {
        match c {
            ComplexRepr::Real(re) => Complex64::new(re, 0.0),
            ComplexRepr::Pair([re, im]) => Complex64::new(re, im),
        }
    }
}

impl From<Complex64> for ComplexRepr {
    fn from(c: Complex64) -> Self {
        ComplexRepr::Pair([c.re, c.im])
    }
}

type PolyTerms = Vec<(Vec<u32>, ComplexRepr)>;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FunctionSpec {
    dim: usize,
    expr: ExprSpec,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct QuasiTermSpec {
    poly: PolyTerms,
    functional: Vec<ComplexRepr>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum SeriesSpec {
    Coefficients(Vec<ComplexRepr>),
    Named(NamedSeries),
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NamedSeries {
    named: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    length: Option<usize>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum ExprSpec {
    Poly {
        terms: PolyTerms,
    },
    Quasi {
        terms: Vec<QuasiTermSpec>,
    },
    Exp {
        arg: Box<ExprSpec>,
    },
    Product {
        left: Box<ExprSpec>,
        right: Box<ExprSpec>,
    },
    Scale {
        factor: ComplexRepr,
        arg: Box<ExprSpec>,
    },
    Compose {
        series: SeriesSpec,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        radius: Option<f64>,
        arg: Box<ExprSpec>,
    },
    Dderiv {
        direction: Vec<ComplexRepr>,
        order: u32,
        arg: Box<ExprSpec>,
    },
    RecipExp {
        arg: Box<ExprSpec>,
    },
}

fn build_poly(dim: usize, terms: PolyTerms) -> Result<MultiPoly> {
    MultiPoly::new(dim, terms.into_iter().map(|(e, c)| (e, c.into())))
}

fn build_vector(dim: usize, entries: Vec<ComplexRepr>) -> Result<ComplexVector> {
    let v = ComplexVector::new(entries.into_iter().map(Complex64::from).collect())?;
    v.check_dim(dim)?;
    Ok(v)
}

fn build(dim: usize, spec: ExprSpec) -> Result<AnalyticExpr> {
    Ok(match spec {
        ExprSpec::Poly { terms } => AnalyticExpr::Poly(build_poly(dim, terms)?),
        ExprSpec::Quasi { terms } => {
            let terms = terms
                .into_iter()
                .map(|t| {
                    Ok((
                        build_poly(dim, t.poly)?,
                        LinearFunctional::new(build_vector(dim, t.functional)?),
                    ))
                })
                .collect::<Result<Vec<_>>>()?;
            AnalyticExpr::Quasi(QuasiPolynomial::new(terms)?)
        }
        ExprSpec::Exp { arg } => AnalyticExpr::exp(build(dim, *arg)?),
        ExprSpec::Product { left, right } => {
            AnalyticExpr::product(build(dim, *left)?, build(dim, *right)?)?
        }
        ExprSpec::Scale { factor, arg } => AnalyticExpr::scale(factor.into(), build(dim, *arg)?),
        ExprSpec::Compose {
            series,
            radius,
            arg,
        } => {
            let coeffs = match series {
                SeriesSpec::Coefficients(c) => c.into_iter().map(Complex64::from).collect(),
                SeriesSpec::Named(NamedSeries { named, length }) => match named.as_str() {
                    "exp" => exp_series(length.unwrap_or(DEFAULT_SERIES_LENGTH)),
                    other => return Err(Error::Spec(format!("unknown named series {other:?}"))),
                },
            };
            AnalyticExpr::compose_with_radius(coeffs, radius, build(dim, *arg)?)?
        }
        ExprSpec::Dderiv {
            direction,
            order,
            arg,
        } => AnalyticExpr::directional_derivative(
            build_vector(dim, direction)?,
            order,
            build(dim, *arg)?,
        )?,
        ExprSpec::RecipExp { arg } => AnalyticExpr::recip_exp(build(dim, *arg)?),
    })
}

fn poly_terms(p: &MultiPoly) -> PolyTerms {
    p.terms().map(|(e, c)| (e.clone(), (*c).into())).collect()
}

fn unbuild(expr: &AnalyticExpr) -> ExprSpec {
    match expr {
        AnalyticExpr::Poly(p) => ExprSpec::Poly {
            terms: poly_terms(p),
        },
        AnalyticExpr::Quasi(q) => ExprSpec::Quasi {
            terms: q
                .terms()
                .iter()
                .map(|t| QuasiTermSpec {
                    poly: poly_terms(&t.poly),
                    functional: t
                        .exponent
                        .coefficients()
                        .iter()
                        .map(|&c| c.into())
                        .collect(),
                })
                .collect(),
        },
        AnalyticExpr::Exp(e) => ExprSpec::Exp {
            arg: Box::new(unbuild(e)),
        },
        AnalyticExpr::ReciprocalExp(e) => ExprSpec::RecipExp {
            arg: Box::new(unbuild(e)),
        },
        AnalyticExpr::Scale(c, e) => ExprSpec::Scale {
            factor: (*c).into(),
            arg: Box::new(unbuild(e)),
        },
        AnalyticExpr::Product(a, b) => ExprSpec::Product {
            left: Box::new(unbuild(a)),
            right: Box::new(unbuild(b)),
        },
        AnalyticExpr::Compose(c) => ExprSpec::Compose {
            series: SeriesSpec::Coefficients(c.series().iter().map(|&s| s.into()).collect()),
            radius: c.convergence_radius(),
            arg: Box::new(unbuild(c.inner())),
        },
        AnalyticExpr::DirectionalDerivative(d) => ExprSpec::Dderiv {
            direction: d.direction().iter().map(|&c| c.into()).collect(),
            order: d.order(),
            arg: Box::new(unbuild(d.inner())),
        },
    }
}

/// Parse a function-spec document.
pub fn parse_function_spec(text: &str) -> Result<AnalyticExpr> {
    let spec: FunctionSpec = serde_json::from_str(text).map_err(|e| Error::Spec(e.to_string()))?;
    if spec.dim == 0 {
        return Err(Error::Spec("dim must be >= 1".into()));
    }
    let expr = build(spec.dim, spec.expr).map_err(|e| match e {
        Error::Spec(_) => e,
        other => Error::Spec(other.to_string()),
    })?;
    if expr.dim() != spec.dim {
        return Err(Error::Spec(format!(
            "expression dimension {} does not match dim {}",
            expr.dim(),
            spec.dim
        )));
    }
    Ok(expr)
}

/// Serialize an expression to the function-spec format.
pub fn to_function_spec(expr: &AnalyticExpr) -> String {
    let spec = FunctionSpec {
        dim: expr.dim(),
        expr: unbuild(expr),
    };
    serde_json::to_string(&spec).expect("spec serialization cannot fail")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_nested_expression() {
        let text = r#"{"dim": 2, "expr": {"kind": "product",
            "left": {"kind": "poly", "terms": [[[1, 0], [1.0, 0.0]]]},
            "right": {"kind": "exp", "arg": {"kind": "poly", "terms": [[[0, 1], 0.5]]}}}}"#;
        let f = parse_function_spec(text).unwrap();
        let z = ComplexVector::from_real(&[2.0, 2.0]).unwrap();
        let v = f.evaluate(&z).unwrap();
        assert!((v.re - 2.0 * 1f64.exp()).abs() < 1e-14);
    }

    #[test]
    fn parses_quasi_compose_and_dderiv() {
        let text = r#"{"dim": 1, "expr": {"kind": "dderiv", "direction": [1.0], "order": 1,
            "arg": {"kind": "quasi", "terms": [{"poly": [[[1], 1.0]], "functional": [[1.0, 0.0]]}]}}}"#;
        let f = parse_function_spec(text).unwrap();
        // d/dz (z e^z) = (1 + z) e^z
        let z = ComplexVector::from_real(&[0.5]).unwrap();
        assert!((f.evaluate(&z).unwrap().re - 1.5 * 0.5f64.exp()).abs() < 1e-14);

        let text = r#"{"dim": 1, "expr": {"kind": "compose", "series": {"named": "exp", "length": 30},
            "arg": {"kind": "recip_exp", "arg": {"kind": "poly", "terms": [[[1], 1.0]]}}}}"#;
        let f = parse_function_spec(text).unwrap();
        let v = f.evaluate(&z).unwrap().re;
        assert!((v - (-0.5f64).exp().exp()).abs() < 1e-14);
    }

    #[test]
    fn rejects_unknown_fields() {
        let bad_top = r#"{"dim": 1, "extra": 3, "expr": {"kind": "poly", "terms": []}}"#;
        assert!(parse_function_spec(bad_top).is_err());
        let bad_node = r#"{"dim": 1, "expr": {"kind": "poly", "terms": [], "color": "red"}}"#;
        assert!(parse_function_spec(bad_node).is_err());
        let bad_kind = r#"{"dim": 1, "expr": {"kind": "sin", "arg": 1}}"#;
        assert!(parse_function_spec(bad_kind).is_err());
    }

    #[test]
    fn rejects_dimension_errors() {
        let text = r#"{"dim": 2, "expr": {"kind": "poly", "terms": [[[1], 1.0]]}}"#;
        assert!(parse_function_spec(text).is_err());
        let text = r#"{"dim": 2, "expr": {"kind": "dderiv", "direction": [1.0], "order": 1,
            "arg": {"kind": "poly", "terms": [[[1, 0], 1.0]]}}}"#;
        assert!(parse_function_spec(text).is_err());
    }

    #[test]
    fn round_trip() {
        let text = r#"{"dim": 2, "expr": {"kind": "scale", "factor": [0.0, 2.0],
            "arg": {"kind": "compose", "series": [1.0, 1.0, 0.5], "radius": 3.0,
            "arg": {"kind": "poly", "terms": [[[1, 1], [0.5, -0.5]]]}}}}"#;
        let f = parse_function_spec(text).unwrap();
        let g = parse_function_spec(&to_function_spec(&f)).unwrap();
        assert_eq!(f, g);
    }
}
