use num_complex::Complex64;

use crate::function::{AffineRestriction, UniPoly};

/// A univariate function holomorphic on a neighbourhood of some closed disk.
///
/// `value` may return non-finite numbers; callers check.
pub trait Holomorphic: Sync {
    fn value(&self, z: Complex64) -> Complex64;

    /// Exact derivative, if the representation provides one.
    fn exact_derivative(&self, _z: Complex64) -> Option<Complex64> {
        None
    }

    fn jet(&self, z: Complex64) -> (Complex64, Option<Complex64>) {
        (self.value(z), self.exact_derivative(z))
    }
}

impl Holomorphic for AffineRestriction {
    fn value(&self, z: Complex64) -> Complex64 {
        self.value_unchecked(z)
    }

    fn exact_derivative(&self, z: Complex64) -> Option<Complex64> {
        AffineRestriction::exact_derivative(self, z)
    }

    fn jet(&self, z: Complex64) -> (Complex64, Option<Complex64>) {
        AffineRestriction::jet(self, z)
    }
}

impl Holomorphic for UniPoly {
    fn value(&self, z: Complex64) -> Complex64 {
        self.eval(z)
    }

    fn exact_derivative(&self, z: Complex64) -> Option<Complex64> {
        Some(self.eval_with_derivative(z).1)
    }

    fn jet(&self, z: Complex64) -> (Complex64, Option<Complex64>) {
        let (v, d) = self.eval_with_derivative(z);
        (v, Some(d))
    }
}

impl<H: Holomorphic + ?Sized> Holomorphic for &H {
    fn value(&self, z: Complex64) -> Complex64 {
        (**self).value(z)
    }

    fn exact_derivative(&self, z: Complex64) -> Option<Complex64> {
        (**self).exact_derivative(z)
    }

    fn jet(&self, z: Complex64) -> (Complex64, Option<Complex64>) {
        (**self).jet(z)
    }
}

/// A closure, with optional closed-form derivative.
pub struct FnHolomorphic<F, D = fn(Complex64) -> Complex64> {
    f: F,
    df: Option<D>,
}

impl<F> FnHolomorphic<F>
where
    F: Fn(Complex64) -> Complex64 + Sync,
{
    pub fn new(f: F) -> Self {
        Self { f, df: None }
    }
}

impl<F, D> FnHolomorphic<F, D>
where
    F: Fn(Complex64) -> Complex64 + Sync,
    D: Fn(Complex64) -> Complex64 + Sync,
{
    pub fn with_derivative(f: F, df: D) -> Self {
        Self { f, df: Some(df) }
    }
}

impl<F, D> Holomorphic for FnHolomorphic<F, D>
where
    F: Fn(Complex64) -> Complex64 + Sync,
    D: Fn(Complex64) -> Complex64 + Sync,
{
    fn value(&self, z: Complex64) -> Complex64 {
        (self.f)(z)
    }

    fn exact_derivative(&self, z: Complex64) -> Option<Complex64> {
        self.df.as_ref().map(|d| d(z))
    }
}

/// `F - w`.
pub struct Shifted<H> {
    pub inner: H,
    pub shift: Complex64,
}

impl<H: Holomorphic> Holomorphic for Shifted<H> {
    fn value(&self, z: Complex64) -> Complex64 {
        self.inner.value(z) - self.shift
    }

    fn exact_derivative(&self, z: Complex64) -> Option<Complex64> {
        self.inner.exact_derivative(z)
    }

    fn jet(&self, z: Complex64) -> (Complex64, Option<Complex64>) {
        let (v, d) = self.inner.jet(z);
        (v - self.shift, d)
    }
}

/// Value and derivative, the latter from fourth-order central differences
/// with step `h` when no exact derivative is available.
pub fn value_and_derivative<H: Holomorphic + ?Sized>(
    f: &H,
    z: Complex64,
    h: f64,
) -> (Complex64, Complex64) {
    let (v, d) = f.jet(z);
    let d = d.unwrap_or_else(|| {
        let h = Complex64::new(h, 0.0);
        (-f.value(z + 2.0 * h) + 8.0 * f.value(z + h) - 8.0 * f.value(z - h) + f.value(z - 2.0 * h))
            / (12.0 * h)
    });
    (v, d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn central_difference_fallback_is_accurate() {
        let f = FnHolomorphic::new(|z: Complex64| z.exp());
        let z = Complex64::new(0.3, 0.2);
        let (_, d) = value_and_derivative(&f, z, 1e-3);
        assert!((d - z.exp()).norm() < 1e-11);
    }
}
