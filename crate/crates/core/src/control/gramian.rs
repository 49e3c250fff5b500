//! Finite-horizon controllability Gramian
//! `W(T) = ∫₀ᵀ e^{-Lt} B Bᵀ e^{-Lt} dt`.
//!
//! The integrand is sampled on a uniform grid and combined with composite
//! Simpson weights. Everything is done in fixed point with `bits` fractional
//! bits: `e^{-Lh}` by scaling and squaring of a Taylor series, the samples by
//! repeated multiplication, and the weighted sum of outer products exactly.
//! That sum is positive semidefinite by construction and positive definite
//! exactly when the samples span the state space, so positivity is decided
//! by an exact integer test rather than a floating eigensolver.
//!
//! The pair is reported controllable when the smallest eigenvalue exceeds
//! `2^{-bits/2} · trace(W) / n`. Rounding in the exponential perturbs an
//! uncontrollable Gramian by roughly `2^{-bits}`, while controllable pairs on
//! small graphs sit many orders of magnitude above the cut.

use num_bigint::{BigInt, Sign};
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::matrix::SymMatrix;

use super::exact::is_positive_definite;
use super::{ControlError, ControlMatrix, Method, Verdict};

pub const MIN_STEPS: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GramianOptions {
    pub horizon: f64,
    pub steps: usize,
    /// Fractional bits of the fixed-point arithmetic.
    pub bits: u32,
}

impl Default for GramianOptions {
    fn default() -> Self {
        GramianOptions {
            horizon: 1.0,
            steps: 32,
            bits: 512,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GramianReport {
    /// Lower end of a bracket on the smallest eigenvalue of `W`, 20 bits wide.
    pub min_eigenvalue: f64,
    pub trace: f64,
    pub threshold: f64,
    pub controllable: bool,
    /// Subintervals actually used (at least `n`, rounded up to even).
    pub steps: usize,
}

impl GramianReport {
    pub fn verdict(&self) -> Verdict {
        Verdict::new(self.controllable, Method::Gramian)
    }
}

const GUARD_BITS: u32 = 64;
const MANTISSA_BITS: u64 = 20;

pub fn gramian_check(
    l: &SymMatrix,
    b: &ControlMatrix,
    opts: &GramianOptions,
) -> Result<GramianReport, ControlError> {
    let n = l.order();
    b.check_order(n)?;
    if !(opts.horizon > 0.0 && opts.horizon.is_finite()) {
        return Err(ControlError::InvalidArgument(format!(
            "horizon must be positive, got {}",
            opts.horizon
        )));
    }
    if opts.steps < MIN_STEPS {
        return Err(ControlError::InvalidArgument(format!(
            "need at least {MIN_STEPS} steps, got {}",
            opts.steps
        )));
    }
    if opts.bits < 64 || opts.bits % 2 != 0 {
        return Err(ControlError::InvalidArgument(format!(
            "bits must be even and at least 64, got {}",
            opts.bits
        )));
    }

    let steps = opts.steps.max(n).next_multiple_of(2);
    let p = opts.bits + GUARD_BITS;
    let h = opts.horizon / steps as f64;
    let e = expm_neg(l, h, p);

    // G = Σ c_k x_k x_kᵀ at scale 2^{2p}; W ≈ (h/3) G / 2^{2p}
    let mut g = vec![vec![BigInt::zero(); n]; n];
    for col in b.columns() {
        let mut x: Vec<BigInt> = col.iter().map(|&v| BigInt::from(v) << p).collect();
        for k in 0..=steps {
            let c = if k == 0 || k == steps {
                1
            } else if k % 2 == 1 {
                4
            } else {
                2
            };
            for i in 0..n {
                for j in i..n {
                    let t = &x[i] * &x[j] * c;
                    g[i][j] += t;
                }
            }
            if k < steps {
                x = mat_vec(&e, &x, p);
            }
        }
    }
    for i in 0..n {
        for j in 0..i {
            g[i][j] = g[j][i].clone();
        }
    }

    let trace: BigInt = (0..n).map(|i| &g[i][i]).sum();
    let scale_exp = 2 * i64::from(p);
    let to_w = |x: &BigInt| ldexp_big(x, -scale_exp) * h / 3.0;

    // λ_min(G) > trace / (n 2^{bits/2})  ⟺  n 2^{bits/2} G - trace I ≻ 0
    let controllable = {
        let m = shifted(&g, n as u64, opts.bits / 2, &trace);
        is_positive_definite(m)
    };

    let lower = min_eig_lower(&g);
    let trace_w = to_w(&trace);
    Ok(GramianReport {
        min_eigenvalue: to_w(&lower),
        trace: trace_w,
        threshold: trace_w / n as f64 * 2f64.powi(-(opts.bits as i32) / 2),
        controllable,
        steps,
    })
}

pub fn gramian_verdict(
    l: &SymMatrix,
    b: &ControlMatrix,
    opts: &GramianOptions,
) -> Result<Verdict, ControlError> {
    Ok(gramian_check(l, b, opts)?.verdict())
}

/// `factor · 2^shift · G - t · I`.
fn shifted(g: &[Vec<BigInt>], factor: u64, shift: u32, t: &BigInt) -> Vec<Vec<BigInt>> {
    g.iter()
        .enumerate()
        .map(|(i, row)| {
            row.iter()
                .enumerate()
                .map(|(j, x)| {
                    let y = (x * factor) << shift;
                    if i == j {
                        y - t
                    } else {
                        y
                    }
                })
                .collect()
        })
        .collect()
}

/// Largest `t` found by bisection with `G - t I ≻ 0`; zero if `G` is
/// singular. The smallest eigenvalue lies in `(t, t + t·2^{-20}]`.
fn min_eig_lower(g: &[Vec<BigInt>]) -> BigInt {
    let pd = |t: &BigInt| is_positive_definite(shifted(g, 1, 0, t));
    if !pd(&BigInt::zero()) {
        return BigInt::zero();
    }
    let top = g.iter().enumerate().map(|(i, r)| r[i].bits()).max().unwrap_or(0);
    // largest e with G - 2^e I ≻ 0
    let (mut lo, mut hi) = (0u64, top + 1);
    if !pd(&BigInt::from(1)) {
        return BigInt::zero();
    }
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if pd(&(BigInt::from(1) << mid)) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut t = BigInt::from(1) << lo;
    for bit in (lo.saturating_sub(MANTISSA_BITS)..lo).rev() {
        let cand = &t + (BigInt::from(1) << bit);
        if pd(&cand) {
            t = cand;
        }
    }
    t
}

/// `e^{-Lh}` at scale `2^p`.
fn expm_neg(l: &SymMatrix, h: f64, p: u32) -> Vec<Vec<BigInt>> {
    let n = l.order();
    let lm = l.as_matrix();
    let norm = (0..n)
        .map(|i| lm.row(i).iter().map(|x| x.unsigned_abs()).sum::<u64>())
        .max()
        .unwrap_or(0) as f64
        * h;
    // scale so that ‖Lh‖ / 2^s ≤ 1/2
    let mut s = 0u32;
    while norm / 2f64.powi(s as i32) > 0.5 {
        s += 1;
    }
    let hs = fixed(h, p) >> s;
    let a: Vec<Vec<BigInt>> = (0..n)
        .map(|i| lm.row(i).iter().map(|&x| -(&hs * x)).collect())
        .collect();

    let one = BigInt::from(1) << p;
    let mut sum: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { one.clone() } else { BigInt::zero() })
                .collect()
        })
        .collect();
    let mut term = sum.clone();
    for k in 1u32.. {
        term = mat_mul(&term, &a, p);
        for row in term.iter_mut() {
            for x in row.iter_mut() {
                *x = &*x / k;
            }
        }
        if term.iter().flatten().all(Zero::is_zero) {
            break;
        }
        for (srow, trow) in sum.iter_mut().zip(&term) {
            for (x, y) in srow.iter_mut().zip(trow) {
                *x += y;
            }
        }
    }
    for _ in 0..s {
        sum = mat_mul(&sum, &sum, p);
    }
    sum
}

/// `x · 2^p`, truncated toward zero.
fn fixed(x: f64, p: u32) -> BigInt {
    let bits = x.to_bits();
    let exp = ((bits >> 52) & 0x7ff) as i64;
    let frac = bits & ((1u64 << 52) - 1);
    let (mant, e) = if exp == 0 {
        (frac, -1074)
    } else {
        (frac | (1u64 << 52), exp - 1075)
    };
    let m = BigInt::from(mant);
    let shift = e + i64::from(p);
    let v = if shift >= 0 {
        m << shift as u64
    } else {
        m >> (-shift) as u64
    };
    if x < 0.0 {
        -v
    } else {
        v
    }
}

/// `x · 2^e` as `f64`, for `x` far outside the `f64` range.
fn ldexp_big(x: &BigInt, e: i64) -> f64 {
    let drop = x.bits().saturating_sub(62);
    let mant = (x.abs() >> drop).to_f64().expect("62-bit value fits f64");
    let mant = if x.sign() == Sign::Minus { -mant } else { mant };
    let total = drop as i64 + e;
    // split the exponent so neither factor overflows on its own
    let half = (total / 2) as i32;
    mant * 2f64.powi(half) * 2f64.powi(total as i32 - half)
}

fn mat_mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>], p: u32) -> Vec<Vec<BigInt>> {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).map(|k| &a[i][k] * &b[k][j]).sum::<BigInt>() >> p)
                .collect()
        })
        .collect()
}

fn mat_vec(a: &[Vec<BigInt>], x: &[BigInt], p: u32) -> Vec<BigInt> {
    a.iter()
        .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum::<BigInt>() >> p)
        .collect()
}
