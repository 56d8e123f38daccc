//! Dawson's integral and the imaginary error function.

use std::f64::consts::{FRAC_2_SQRT_PI, PI};

use num_complex::Complex64;

use crate::{Error, Result};

/// Largest `|x|` for which `erfi(x)` is finite in f64.
pub const ERFI_MAX_ARG: f64 = 26.7;

/// Sampling step of Rybicki's series. The discretization error is of order
/// `exp(-(π / 2h)²)`, far below f64 resolution at `h = 0.2`.
const RYBICKI_STEP: f64 = 0.2;
const RYBICKI_TERMS: usize = 20;
const SMALL_ARG: f64 = 0.2;

/// Dawson's integral `D(x) = exp(-x²) ∫₀ˣ exp(t²) dt`.
pub fn dawson(x: f64) -> f64 {
    let ax = x.abs();
    if ax < SMALL_ARG {
        // D(x) = Σ (-2)^k x^(2k+1) / (2k+1)!!
        let x2 = x * x;
        let mut term = x;
        let mut sum = x;
        for k in 1..20 {
            term *= -2.0 * x2 / (2 * k + 1) as f64;
            sum += term;
            if term.abs() < 1e-17 * sum.abs() {
                break;
            }
        }
        return sum;
    }
    let h = RYBICKI_STEP;
    let n0 = 2.0 * (0.5 * ax / h).round();
    let xp = ax - n0 * h;
    let mut e1 = (2.0 * xp * h).exp();
    let e2 = e1 * e1;
    let mut d1 = n0 + 1.0;
    let mut d2 = d1 - 2.0;
    let mut sum = 0.0;
    for i in 0..RYBICKI_TERMS {
        let c = (-(((2 * i + 1) as f64) * h).powi(2)).exp();
        sum += c * (e1 / d1 + 1.0 / (d2 * e1));
        d1 += 2.0;
        d2 -= 2.0;
        e1 *= e2;
    }
    (1.0 / PI.sqrt()) * x.signum() * (-xp * xp).exp() * sum
}

/// Imaginary error function `erfi(x) = (2/√π) exp(x²) D(x)`.
pub fn erfi(x: f64) -> Result<f64> {
    if x.abs() > ERFI_MAX_ARG || x.is_nan() {
        return Err(Error::ErfiOverflow {
            x,
            limit: ERFI_MAX_ARG,
        });
    }
    let d = dawson(x);
    if d == 0.0 {
        return Ok(0.0);
    }
    // fold the prefactor into the exponent to postpone overflow
    Ok(x.signum() * (x * x + (FRAC_2_SQRT_PI * d.abs()).ln()).exp())
}

/// Radius inside which off-axis complex arguments are summed by power series.
const COMPLEX_SERIES_RADIUS: f64 = 4.0;

/// `erfi` for complex arguments.
///
/// Arguments on the real axis use [`erfi`], arguments on the imaginary axis
/// use `erfi(iy) = i erf(y)`. Off-axis arguments are supported within
/// `|z| <= 4` by the Maclaurin series.
pub fn erfi_complex(z: Complex64) -> Result<Complex64> {
    if z.im == 0.0 {
        return Ok(Complex64::new(erfi(z.re)?, 0.0));
    }
    if z.re == 0.0 {
        return Ok(Complex64::new(0.0, libm::erf(z.im)));
    }
    if z.norm() > COMPLEX_SERIES_RADIUS {
        return Err(Error::UnsupportedArgument { re: z.re, im: z.im });
    }
    let z2 = z * z;
    let mut power = z;
    let mut sum = z;
    for k in 1..200 {
        power = power * z2 / k as f64;
        let term = power / (2 * k + 1) as f64;
        sum += term;
        if k as f64 > z2.norm() && term.norm() < 1e-17 * sum.norm() {
            break;
        }
    }
    Ok(sum * FRAC_2_SQRT_PI)
}

/// `erfi(hi) - erfi(lo)`.
///
/// On the imaginary axis the difference of two error functions close to ±1 is
/// taken through `erfc`, which keeps the tiny remainder accurate when it is
/// later multiplied by a large exponential.
pub fn erfi_difference(hi: Complex64, lo: Complex64) -> Result<Complex64> {
    if hi.re == 0.0 && lo.re == 0.0 && hi.im * lo.im > 0.0 && hi.im.abs().min(lo.im.abs()) > 1.0 {
        let sign = hi.im.signum();
        let diff = libm::erfc(lo.im.abs()) - libm::erfc(hi.im.abs());
        return Ok(Complex64::new(0.0, sign * diff));
    }
    Ok(erfi_complex(hi)? - erfi_complex(lo)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    /// Term-by-term integral of exp(t²); all terms positive for real x.
    fn erfi_series(x: f64) -> f64 {
        let x2 = x * x;
        let mut power = x;
        let mut sum = x;
        let mut k = 0.0;
        loop {
            k += 1.0;
            power *= x2 / k;
            let term = power / (2.0 * k + 1.0);
            sum += term;
            if k > x2 && term.abs() < 1e-18 * sum.abs() {
                break;
            }
        }
        FRAC_2_SQRT_PI * sum
    }

    #[test]
    fn erfi_known_values() {
        assert_eq!(erfi(0.0).unwrap(), 0.0);
        assert_relative_eq!(erfi(1.0).unwrap(), 1.650_425_758_8, max_relative = 1e-10);
        assert_relative_eq!(erfi(1.0).unwrap(), erfi_series(1.0), max_relative = 1e-14);
    }

    #[test]
    fn erfi_matches_series_on_grid() {
        for i in 0..100 {
            let x = -5.0 + 10.0 * i as f64 / 99.0;
            let got = erfi(x).unwrap();
            let want = erfi_series(x);
            assert_relative_eq!(got, want, max_relative = 1e-10);
        }
    }

    #[test]
    fn dawson_reference_values() {
        // maximum of D at x ≈ 0.9241388730, D = 0.5410442246
        assert_relative_eq!(
            dawson(0.924_138_873_0),
            0.541_044_224_6,
            max_relative = 1e-9
        );
        // large-x asymptote 1/(2x) (1 + 1/(2x²) + 3/(4x⁴))
        let x: f64 = 50.0;
        let asym = 1.0 / (2.0 * x) * (1.0 + 1.0 / (2.0 * x * x) + 3.0 / (4.0 * x.powi(4)));
        assert_relative_eq!(dawson(x), asym, max_relative = 1e-9);
        // continuity across the series switch
        assert_relative_eq!(
            dawson(SMALL_ARG * (1.0 - 1e-12)),
            dawson(SMALL_ARG),
            max_relative = 1e-12
        );
    }

    #[test]
    fn erfi_overflow_is_signalled() {
        assert!(erfi(26.6).unwrap().is_finite());
        assert_eq!(
            erfi(30.5),
            Err(Error::ErfiOverflow {
                x: 30.5,
                limit: ERFI_MAX_ARG
            })
        );
        assert!(erfi(-27.0).is_err());
        assert!(erfi(f64::NAN).is_err());
    }

    #[test]
    fn complex_erfi_on_axes() {
        let z = erfi_complex(Complex64::new(0.0, 1.3)).unwrap();
        assert_eq!(z.re, 0.0);
        assert_relative_eq!(z.im, libm::erf(1.3), max_relative = 1e-15);
        let z = erfi_complex(Complex64::new(0.7, 0.0)).unwrap();
        assert_relative_eq!(z.re, erfi_series(0.7), max_relative = 1e-14);
    }

    #[test]
    fn complex_series_agrees_with_axis_values_nearby() {
        let near_imag = erfi_complex(Complex64::new(1e-9, 1.5)).unwrap();
        let on_imag = erfi_complex(Complex64::new(0.0, 1.5)).unwrap();
        assert!((near_imag - on_imag).norm() < 1e-8);
        let near_real = erfi_complex(Complex64::new(2.0, 1e-9)).unwrap();
        let on_real = erfi_complex(Complex64::new(2.0, 0.0)).unwrap();
        assert!((near_real - on_real).norm() < 1e-7 * on_real.norm());
        assert!(erfi_complex(Complex64::new(5.0, 5.0)).is_err());
    }

    #[test]
    fn erfi_difference_keeps_tail() {
        let lo = Complex64::new(0.0, 7.0);
        let hi = Complex64::new(0.0, 8.0);
        let d = erfi_difference(hi, lo).unwrap();
        let want = libm::erfc(7.0) - libm::erfc(8.0);
        assert_relative_eq!(d.im, want, max_relative = 1e-13);
        assert!(d.im > 0.0 && d.im < 1e-22);
        let neg = erfi_difference(-hi, -lo).unwrap();
        assert_eq!(neg.im, -d.im);
    }

    proptest! {
        #[test]
        fn erfi_is_odd(x in -20.0..20.0f64) {
            prop_assert_eq!(erfi(-x).unwrap(), -erfi(x).unwrap());
        }

        #[test]
        fn derivative_matches(x in -4.0..4.0f64) {
            let h = 1e-5;
            let fd = (erfi(x + h).unwrap() - erfi(x - h).unwrap()) / (2.0 * h);
            let exact = FRAC_2_SQRT_PI * (x * x).exp();
            prop_assert!((fd - exact).abs() <= 1e-6 * exact);
        }
    }
}
