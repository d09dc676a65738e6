//! Closed forms for paths and cycles, special values at `x = -1`, and stars.
//!
//! Path and cycle polynomials both satisfy
//! `D_n = x D_{n-1} + x² D_{n-3} + x² D_{n-4}`, whose characteristic
//! polynomial `λ⁴ - xλ³ - x²λ - x²` has roots `±√(-x)` and
//! `(x ± √(x(x+4)))/2`. The closed forms are evaluated in double-precision
//! complex arithmetic with principal square roots.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::binomial;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Result, TdpError};
use crate::graph::Graph;
use crate::poly::IntPoly;
use crate::reduction::tree_tdp;

/// Relative size of an imaginary residue that is discarded for real inputs.
pub const REAL_TRUNCATION: f64 = 1e-7;
/// Residual tolerance for the characteristic roots.
pub const ROOT_RESIDUAL: f64 = 1e-9;

const SINGULAR_EPS: f64 = 1e-12;

fn check_regular(x: Complex64) -> Result<()> {
    if x.norm() < SINGULAR_EPS || (x + 4.0).norm() < SINGULAR_EPS {
        return Err(TdpError::domain(format!(
            "closed form is singular at x = {x} (x must avoid 0 and -4)"
        )));
    }
    Ok(())
}

/// Characteristic roots at a point together with the weights that express
/// `D_t(P_n)` (or `D_t(C_n)`) as `Σ α_i λ_i^n`.
#[derive(Debug, Clone, Copy)]
pub struct RootQuad {
    pub x: Complex64,
    pub lambdas: [Complex64; 4],
    pub alphas: [Complex64; 4],
}

impl RootQuad {
    fn roots(x: Complex64) -> [Complex64; 4] {
        let r = (-x).sqrt();
        let s = (x * (x + 4.0)).sqrt();
        [r, -r, (x + s) / 2.0, (x - s) / 2.0]
    }

    /// Weights fitted to `P_1..P_4`.
    pub fn path(x: Complex64) -> Result<Self> {
        check_regular(x)?;
        let r = (-x).sqrt();
        let s = (x * (x + 4.0)).sqrt();
        let denom = (x + 4.0) * 2.0;
        let alphas = [
            (2.0 + (x + 3.0) * r) / denom,
            (2.0 - (x + 3.0) * r) / denom,
            (x + 2.0 + s) / denom,
            (x + 2.0 - s) / denom,
        ];
        Ok(RootQuad {
            x,
            lambdas: Self::roots(x),
            alphas,
        })
    }

    /// Unit weights fitted to `C_3..C_6`.
    pub fn cycle(x: Complex64) -> Result<Self> {
        check_regular(x)?;
        Ok(RootQuad {
            x,
            lambdas: Self::roots(x),
            alphas: [Complex64::new(1.0, 0.0); 4],
        })
    }

    pub fn evaluate(&self, n: usize) -> Complex64 {
        self.alphas
            .iter()
            .zip(&self.lambdas)
            .map(|(a, l)| a * l.powu(n as u32))
            .sum()
    }

    /// `|λ⁴ - xλ³ - x²λ - x²|` for each root.
    pub fn residuals(&self) -> [f64; 4] {
        let x = self.x;
        self.lambdas
            .map(|l| (l.powu(4) - x * l.powu(3) - x * x * l - x * x).norm())
    }

    pub fn residuals_ok(&self) -> bool {
        self.residuals()
            .iter()
            .zip(&self.lambdas)
            .all(|(r, l)| *r <= ROOT_RESIDUAL * (1.0 + l.norm().powi(4)))
    }
}

/// Drops a negligible imaginary part when the input point is real.
fn realify(x: Complex64, value: Complex64) -> Result<Complex64> {
    if x.im != 0.0 {
        return Ok(value);
    }
    if value.im.abs() <= REAL_TRUNCATION * value.norm().max(1.0) {
        Ok(Complex64::new(value.re, 0.0))
    } else {
        Err(TdpError::Inconsistency(format!(
            "closed form at real x = {} left imaginary part {}",
            x.re, value.im
        )))
    }
}

/// `D_t(P_n, x)` from the case-by-`n mod 4` closed form.
pub fn path_closed_eval(n: usize, x: Complex64) -> Result<Complex64> {
    if n == 0 {
        return Err(TdpError::domain("path needs n >= 1"));
    }
    check_regular(x)?;
    let s = (x * x + 4.0 * x).sqrt();
    let radical_part = ((x + 2.0 - s) * (x - s).powu(n as u32)
        + (x + 2.0 + s) * (x + s).powu(n as u32))
        / (2f64.powi(n as i32 + 1) * (x + 4.0));
    let half = |k: usize| x.powu(k as u32);
    let even_part = match n % 4 {
        0 => 2.0 * half(n / 2) / (x + 4.0),
        1 => -(x * x + 3.0 * x) * half((n - 1) / 2) / (x + 4.0),
        2 => -2.0 * half(n / 2) / (x + 4.0),
        _ => (x * x + 3.0 * x) * half((n - 1) / 2) / (x + 4.0),
    };
    realify(x, even_part + radical_part)
}

/// `D_t(C_n, x) = q(n) + [n even] 2(-x)^{n/2}` with
/// `q(n) = ((x - √(x²+4x))^n + (x + √(x²+4x))^n) / 2^n`.
pub fn cycle_closed_eval(n: usize, x: Complex64) -> Result<Complex64> {
    if n < 3 {
        return Err(TdpError::domain(format!("cycle needs n >= 3, got {n}")));
    }
    check_regular(x)?;
    let s = (x * x + 4.0 * x).sqrt();
    let q = ((x - s).powu(n as u32) + (x + s).powu(n as u32)) / 2f64.powi(n as i32);
    let value = if n.is_multiple_of(2) {
        q + 2.0 * (-x).powu((n / 2) as u32)
    } else {
        q
    };
    realify(x, value)
}

/// `(2 + cos(2nπ/3) - √3 sin(2nπ/3)) / 3`
pub fn path_at_minus_one_trig(n: usize) -> f64 {
    let t = 2.0 * std::f64::consts::PI * n as f64 / 3.0;
    (2.0 + t.cos() - 3f64.sqrt() * t.sin()) / 3.0
}

/// `D_t(P_n, -1)`: 0 when `n ≡ 1, 4 (mod 6)`, otherwise 1.
pub fn path_at_minus_one(n: usize) -> Result<i64> {
    if n == 0 {
        return Err(TdpError::domain("path needs n >= 1"));
    }
    let value = match n % 6 {
        1 | 4 => 0,
        _ => 1,
    };
    let trig = path_at_minus_one_trig(n);
    if trig.round() as i64 != value || (trig - value as f64).abs() > 1e-6 {
        return Err(TdpError::Inconsistency(format!(
            "residue table gives {value} but trigonometric form gives {trig} at n = {n}"
        )));
    }
    Ok(value)
}

/// `D_t(S_n, x) = Σ_{i=2}^{n} C(n-1, i-1) x^i`.
pub fn star_tdp(n: usize) -> Result<IntPoly> {
    if n < 2 {
        return Err(TdpError::domain(format!("star needs n >= 2, got {n}")));
    }
    let mut coeffs = vec![BigInt::zero(); n + 1];
    for (i, c) in coeffs.iter_mut().enumerate().skip(2) {
        *c = binomial(BigInt::from(n - 1), BigInt::from(i - 1));
    }
    Ok(IntPoly::from_coeffs(coeffs))
}

/// `D_t(S_n, -1)`, which is always 1; the value is recomputed from
/// [`star_tdp`] and a mismatch is reported.
pub fn star_at_minus_one(n: usize) -> Result<i64> {
    let value = star_tdp(n)?.eval_int(&BigInt::from(-1));
    if value != BigInt::from(1) {
        return Err(TdpError::Inconsistency(format!(
            "star S_{n} evaluates to {value} at -1"
        )));
    }
    Ok(1)
}

/// `D_t(F, -1)` for a forest, required to lie in `{0, 1}`.
pub fn forest_at_minus_one(f: &Graph) -> Result<i64> {
    let value = tree_tdp(f)?.eval_int(&BigInt::from(-1));
    match value.to_i64() {
        Some(v @ (0 | 1)) => Ok(v),
        _ => Err(TdpError::TheoremViolation(format!(
            "forest {} has D_t(F, -1) = {value}, outside {{0, 1}}",
            f.summary()
        ))),
    }
}
