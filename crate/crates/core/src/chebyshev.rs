//! Chebyshev polynomials of the first and second kind.
//!
//! The spectral machinery rests on the substitution `E = 2 - 2x`, which
//! turns the walk Hamiltonian's eigenproblem into polynomial root finding
//! in `x`. Everything here is evaluated by the defining three-term
//! recurrences; for `|x| > 1` the closed forms in the variable
//! `z = x - sqrt(x^2 - 1)` are available as well (they are the stable
//! choice deep in the `|x| > 1` region where the polynomials grow like
//! `|z|^n`). The identity suite encodes the product/sum relations the
//! determinant-equation derivation relies on, so that each one can be
//! checked numerically.

use alloc::format;
use alloc::vec::Vec;

#[allow(unused_imports)] // inherent f64 methods cover std builds; no_std needs the trait
use num_traits::Float;

use crate::{Error, Result};

/// Order above which `|x| > 1` evaluations switch to the closed form.
const CLOSED_FORM_ORDER: usize = 60;

/// First-kind polynomial `T_n(x)` by forward recurrence.
pub fn cheb_t(n: usize, x: f64) -> f64 {
    match n {
        0 => 1.0,
        1 => x,
        _ => {
            let mut prev = 1.0;
            let mut cur = x;
            for _ in 2..=n {
                let next = 2.0 * x * cur - prev;
                prev = cur;
                cur = next;
            }
            cur
        }
    }
}

/// Second-kind polynomial `U_n(x)` by forward recurrence.
///
/// Negative orders follow the reflection `U_{-n-1} = -U_{n-1}`, so
/// `U_{-1} = 0`; boundary index juggling in the eigenstate recurrences
/// needs this.
pub fn cheb_u(n: i64, x: f64) -> f64 {
    if n == -1 {
        return 0.0;
    }
    if n < -1 {
        return -cheb_u(-n - 2, x);
    }
    let n = n as usize;
    match n {
        0 => 1.0,
        1 => 2.0 * x,
        _ => {
            let mut prev = 1.0;
            let mut cur = 2.0 * x;
            for _ in 2..=n {
                let next = 2.0 * x * cur - prev;
                prev = cur;
                cur = next;
            }
            cur
        }
    }
}

/// The substitution `z = x - sqrt(x^2 - 1)`, defined for `|x| >= 1`.
///
/// For `x > 1` this lies in `(0, 1]`; for `x < -1` it lies in `(-inf, -1]`.
pub fn z_substitution(x: f64) -> f64 {
    x - (x * x - 1.0).sqrt()
}

/// Conversion `x -> E` of the spectral substitution `E = 2 - 2x`.
pub fn eigenvalue_from_x(x: f64) -> f64 {
    2.0 - 2.0 * x
}

/// Conversion `E -> x` of the spectral substitution, `x = (2 - E) / 2`.
pub fn x_from_eigenvalue(e: f64) -> f64 {
    0.5 * (2.0 - e)
}

/// Closed form `T_n(x) = (z^n + z^{-n}) / 2` for `|x| > 1`.
pub fn cheb_t_closed(n: usize, x: f64) -> f64 {
    let z = z_substitution(x);
    0.5 * (z.powi(n as i32) + z.powi(-(n as i32)))
}

/// Closed form `U_n(x) = (z^{-(n+1)} - z^{n+1}) / (z^{-1} - z)` for
/// `|x| > 1`. The denominator is positive for every real `|x| > 1`, so
/// the signed form agrees with the absolute-value form.
pub fn cheb_u_closed(n: i64, x: f64) -> f64 {
    let z = z_substitution(x);
    let k = (n + 1) as i32;
    (z.powi(-k) - z.powi(k)) / (z.recip() - z)
}

/// Large-order approximation for `x < -1`:
/// `T_n ~ z^n / 2` and `U_n ~ -z^{n+1} / (z^{-1} - z)`.
///
/// Validated against the exact recurrence for orders >= 20.
pub fn cheb_asymptotic(n: usize, x: f64) -> Result<(f64, f64)> {
    if !(x < -1.0) {
        return Err(Error::domain(format!(
            "asymptotic form needs x < -1 strictly, got x = {x}"
        )));
    }
    let z = z_substitution(x);
    let t = 0.5 * z.powi(n as i32);
    let u = -z.powi(n as i32 + 1) / (z.recip() - z);
    Ok((t, u))
}

/// Evaluation context for a fixed argument `x`, carrying the `E = 2 - 2x`
/// substitution and dispatching between recurrence and closed form.
#[derive(Debug, Clone, Copy)]
pub struct ChebValue {
    x: f64,
}

impl ChebValue {
    pub fn new(x: f64) -> Self {
        ChebValue { x }
    }

    pub fn from_eigenvalue(e: f64) -> Self {
        ChebValue { x: x_from_eigenvalue(e) }
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn eigenvalue(&self) -> f64 {
        eigenvalue_from_x(self.x)
    }

    /// `z = x - sqrt(x^2 - 1)` when `|x| >= 1`.
    pub fn z(&self) -> Option<f64> {
        if self.x.abs() >= 1.0 {
            Some(z_substitution(self.x))
        } else {
            None
        }
    }

    pub fn t(&self, n: usize) -> f64 {
        if self.x.abs() > 1.0 && n > CLOSED_FORM_ORDER {
            cheb_t_closed(n, self.x)
        } else {
            cheb_t(n, self.x)
        }
    }

    pub fn u(&self, n: i64) -> f64 {
        if self.x.abs() > 1.0 && n.unsigned_abs() as usize > CLOSED_FORM_ORDER {
            cheb_u_closed(n, self.x)
        } else {
            cheb_u(n, self.x)
        }
    }
}

/// The product/sum identities behind the determinant-equation algebra.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Identity {
    /// `U_{n-1} + U_{-n-1} = 0`
    NegativeOrderReflection,
    /// `2x U_n = U_{n-1} + U_{n+1}`
    ThreeTermRecurrence,
    /// `T_n = U_n - x U_{n-1}` and `T_n = x U_{n-1} - U_{n-2}`
    FirstKindFromSecond,
    /// `U_n U_m - U_{n-1} U_{m-1} = U_{n+m}`
    ProductSum,
    /// `U_n U_m - U_{n+1} U_{m-1} = U_{n-m}`
    ProductDifference,
    /// `U_n T_m + U_{m-1} T_{n+1} = U_{n+m}`
    MixedProductSum,
    /// `U_n T_m - U_{m-1} T_{n+1} = U_{n-m}`
    MixedProductDifference,
    /// `T_n^2 - (x^2 - 1) U_{n-1}^2 = 1`
    Pell,
    /// `T_m U_n = (U_{m+n} + U_{n-m}) / 2` and
    /// `T_m T_n = (T_{m+n} + T_{|m-n|}) / 2`
    Linearization,
}

impl Identity {
    pub const ALL: [Identity; 9] = [
        Identity::NegativeOrderReflection,
        Identity::ThreeTermRecurrence,
        Identity::FirstKindFromSecond,
        Identity::ProductSum,
        Identity::ProductDifference,
        Identity::MixedProductSum,
        Identity::MixedProductDifference,
        Identity::Pell,
        Identity::Linearization,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Identity::NegativeOrderReflection => "negative-order-reflection",
            Identity::ThreeTermRecurrence => "three-term-recurrence",
            Identity::FirstKindFromSecond => "first-kind-from-second",
            Identity::ProductSum => "product-sum",
            Identity::ProductDifference => "product-difference",
            Identity::MixedProductSum => "mixed-product-sum",
            Identity::MixedProductDifference => "mixed-product-difference",
            Identity::Pell => "pell",
            Identity::Linearization => "linearization",
        }
    }

    /// Look an identity up by its [`name`](Identity::name).
    pub fn parse(tag: &str) -> Result<Identity> {
        Identity::ALL
            .iter()
            .copied()
            .find(|id| id.name() == tag)
            .ok_or_else(|| Error::domain(format!("unknown identity tag {tag:?}")))
    }

    /// The (lhs, rhs) pairs making up the identity at the given argument
    /// and orders; most identities are a single equation, two carry a pair.
    fn sides(&self, x: f64, n: i64, m: i64) -> Vec<(f64, f64)> {
        let u = |k: i64| cheb_u(k, x);
        let t = |k: i64| {
            debug_assert!(k >= 0, "first-kind order must be non-negative");
            cheb_t(k as usize, x)
        };
        match self {
            Identity::NegativeOrderReflection => alloc::vec![(u(n - 1) + u(-n - 1), 0.0)],
            Identity::ThreeTermRecurrence => alloc::vec![(2.0 * x * u(n), u(n - 1) + u(n + 1))],
            Identity::FirstKindFromSecond => alloc::vec![
                (t(n), u(n) - x * u(n - 1)),
                (t(n), x * u(n - 1) - u(n - 2)),
            ],
            Identity::ProductSum => alloc::vec![(u(n) * u(m) - u(n - 1) * u(m - 1), u(n + m))],
            Identity::ProductDifference => {
                alloc::vec![(u(n) * u(m) - u(n + 1) * u(m - 1), u(n - m))]
            }
            Identity::MixedProductSum => {
                alloc::vec![(u(n) * t(m) + u(m - 1) * t(n + 1), u(n + m))]
            }
            Identity::MixedProductDifference => {
                alloc::vec![(u(n) * t(m) - u(m - 1) * t(n + 1), u(n - m))]
            }
            Identity::Pell => {
                let un1 = u(n - 1);
                alloc::vec![(t(n) * t(n) - (x * x - 1.0) * un1 * un1, 1.0)]
            }
            Identity::Linearization => alloc::vec![
                (t(m) * u(n), 0.5 * (u(m + n) + u(n - m))),
                (t(m) * t(n), 0.5 * (t(m + n) + t((m - n).abs()))),
            ],
        }
    }
}

/// Absolute residual `|lhs - rhs|` of the named identity (the maximum,
/// for identities made of two equations). Orders must be non-negative.
pub fn verify_identity(id: Identity, x: f64, orders: (i64, i64)) -> Result<f64> {
    let (n, m) = orders;
    if n < 0 || m < 0 {
        return Err(Error::domain("identity orders must be non-negative"));
    }
    Ok(id
        .sides(x, n, m)
        .iter()
        .map(|(l, r)| (l - r).abs())
        .fold(0.0f64, f64::max))
}

/// Residual of the identity scaled by `max(1, |lhs|, |rhs|)`, suitable
/// for comparing across wildly different magnitudes of `|x| > 1`.
pub fn identity_relative_residual(id: Identity, x: f64, orders: (i64, i64)) -> Result<f64> {
    let (n, m) = orders;
    if n < 0 || m < 0 {
        return Err(Error::domain("identity orders must be non-negative"));
    }
    Ok(id
        .sides(x, n, m)
        .iter()
        .map(|(l, r)| (l - r).abs() / l.abs().max(r.abs()).max(1.0))
        .fold(0.0f64, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::{PI, SQRT_2};

    #[test]
    fn first_kind_base_cases() {
        assert_eq!(cheb_t(0, 0.7), 1.0);
        assert_eq!(cheb_t(1, -SQRT_2), -SQRT_2);
    }

    #[test]
    fn first_kind_matches_trigonometric_form() {
        // T_n(cos theta) = cos(n theta)
        let x = 0.3f64;
        let want = (7.0 * x.acos()).cos();
        assert!((cheb_t(7, x) - want).abs() < 1e-12);

        for i in 0..=40 {
            let theta = PI * i as f64 / 40.0;
            for n in [0usize, 1, 2, 5, 13, 40, 99] {
                let got = cheb_t(n, theta.cos());
                let want = (n as f64 * theta).cos();
                assert!((got - want).abs() < 1e-9, "n={n} theta={theta}");
            }
        }
    }

    #[test]
    fn second_kind_base_cases() {
        assert_eq!(cheb_u(1, 2.0), 4.0);
        assert_eq!(cheb_u(-1, 0.37), 0.0);
        let x = 0.9f64;
        let theta = x.acos();
        let want = (6.0 * theta).sin() / theta.sin();
        assert!((cheb_u(5, x) - want).abs() < 1e-12);
    }

    #[test]
    fn second_kind_negative_orders() {
        for n in 1..20i64 {
            for &x in &[-1.7, -0.3, 0.45, 1.2] {
                assert!((cheb_u(n - 1, x) + cheb_u(-n - 1, x)).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn closed_forms_match_recurrence() {
        for &x in &[-2.0, -1.5, -1.01, 1.01, 1.3, 2.0] {
            for n in 0..=60usize {
                let t_rec = cheb_t(n, x);
                let t_closed = cheb_t_closed(n, x);
                assert!(
                    (t_rec - t_closed).abs() <= 1e-8 * t_rec.abs().max(1.0),
                    "T n={n} x={x}: {t_rec} vs {t_closed}"
                );
                let u_rec = cheb_u(n as i64, x);
                let u_closed = cheb_u_closed(n as i64, x);
                assert!(
                    (u_rec - u_closed).abs() <= 1e-8 * u_rec.abs().max(1.0),
                    "U n={n} x={x}: {u_rec} vs {u_closed}"
                );
            }
        }
    }

    #[test]
    fn asymptotic_forms_converge() {
        let (t, u) = cheb_asymptotic(40, -SQRT_2).unwrap();
        let t_exact = cheb_t(40, -SQRT_2);
        let u_exact = cheb_u(40, -SQRT_2);
        assert!((t - t_exact).abs() < 1e-10 * t_exact.abs());
        assert!((u - u_exact).abs() < 1e-10 * u_exact.abs());
    }

    #[test]
    fn asymptotic_rejects_band_arguments() {
        assert!(cheb_asymptotic(10, -1.0).is_err());
        assert!(cheb_asymptotic(10, 0.5).is_err());
        assert!(cheb_asymptotic(10, 1.5).is_err());
    }

    #[test]
    fn pell_identity_example() {
        let r = verify_identity(Identity::Pell, 0.4, (9, 0)).unwrap();
        assert!(r < 1e-10, "residual {r}");
    }

    #[test]
    fn product_sum_example() {
        let r = verify_identity(Identity::ProductSum, -1.2, (8, 5)).unwrap();
        let scale = cheb_u(13, -1.2).abs();
        assert!(r / scale < 1e-8, "residual {r} scale {scale}");
    }

    #[test]
    fn linearization_example() {
        let r = verify_identity(Identity::Linearization, 0.0, (4, 4)).unwrap();
        assert!(r < 1e-12, "residual {r}");
    }

    #[test]
    fn identity_parse_round_trips() {
        for id in Identity::ALL {
            assert_eq!(Identity::parse(id.name()).unwrap(), id);
        }
        assert!(Identity::parse("no-such-identity").is_err());
    }

    #[test]
    fn substitution_round_trip() {
        let v = ChebValue::from_eigenvalue(2.0 + 2.0 * SQRT_2);
        assert!((v.x() + SQRT_2).abs() < 1e-15);
        assert!((v.eigenvalue() - (2.0 + 2.0 * SQRT_2)).abs() < 1e-15);
        assert!((v.z().unwrap() + 1.0 + SQRT_2).abs() < 1e-12);
        assert!(ChebValue::new(0.3).z().is_none());
    }

    #[test]
    fn context_dispatch_consistent_across_order_threshold() {
        let v = ChebValue::new(-1.4);
        // straddle the closed-form switchover
        for n in 55..=65usize {
            let direct = cheb_t(n, -1.4);
            assert!((v.t(n) - direct).abs() < 1e-8 * direct.abs().max(1.0));
            let direct_u = cheb_u(n as i64, -1.4);
            assert!((v.u(n as i64) - direct_u).abs() < 1e-8 * direct_u.abs().max(1.0));
        }
    }
}
