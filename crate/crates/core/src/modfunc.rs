//! High-precision evaluation of the j-invariant and of Ramanujan's t_n.
//!
//! j is computed from the normalized Eisenstein series,
//!   E4 = 1 + 240 Σ σ3(k) q^k,  E6 = 1 - 504 Σ σ5(k) q^k,
//!   j  = 1728 E4³ / (E4³ - E6²),  q = exp(2πiτ),
//! which agrees with the lattice definition after scaling. The divisor-sum
//! series have integer coefficients and converge geometrically.
//!
//! t_n = √3 · q^(1/18) · f(q^(1/3)) f(q³) / f(q)² at q = exp(-π√n), where f
//! is fixed by f(-q) = ∏(1 - q^k), i.e. f(y) = ∏(1 - (-y)^k) for positive y.
//! The t_11 = 1 anchor pins this sign convention; see the regression test.

use std::cmp::Ordering;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::numerics::{const_pi, ApproxComplex, ApproxReal, PrecisionContext, GUARD_BITS};
use crate::quadform::check_supported;

/// Truncation length for a q-series, chosen so the dropped tail stays below
/// the context's error budget.
#[derive(Clone, Copy, Debug)]
pub struct SeriesBudget {
    terms: usize,
    ctx: PrecisionContext,
}

const MAX_SERIES_TERMS: usize = 4_000_000;

impl SeriesBudget {
    /// Budget for a series in powers of a value with modulus `abs_q` < 1:
    /// the smallest N with |q|^N < 2^-(bits + GUARD_BITS + 8).
    pub fn for_modulus(abs_q: &ApproxReal, ctx: PrecisionContext) -> Result<Self> {
        if abs_q.sign() <= 0 {
            return Ok(Self { terms: 1, ctx });
        }
        if abs_q.cmp(&ApproxReal::one(ctx)) != Ordering::Less {
            return Err(Error::Divergent { op: "series budget", reason: "|q| must be below 1" });
        }
        let small = PrecisionContext::new(64)?;
        let neg_ln = abs_q.ln(small)?.neg().to_f64();
        let needed = (ctx.bits() + GUARD_BITS + 8) as f64 * std::f64::consts::LN_2;
        let terms = (needed / neg_ln).ceil() as usize + 1;
        if terms > MAX_SERIES_TERMS {
            return Err(Error::Divergent { op: "series budget", reason: "argument too close to 1" });
        }
        Ok(Self { terms: terms.max(1), ctx })
    }

    pub fn terms(&self) -> usize {
        self.terms
    }

    pub fn ctx(&self) -> PrecisionContext {
        self.ctx
    }
}

/// f(y) = ∏_{k≥1} (1 - (-y)^k) for 0 < y < 1, truncated below the error budget.
pub fn ramanujan_f(y: &ApproxReal, ctx: PrecisionContext) -> Result<ApproxReal> {
    if y.cmp(&ApproxReal::one(ctx)) != Ordering::Less {
        return Err(Error::Divergent { op: "ramanujan_f", reason: "argument must be below 1" });
    }
    if y.sign() <= 0 {
        return Err(Error::Domain { op: "ramanujan_f", reason: "argument must be positive" });
    }
    let budget = SeriesBudget::for_modulus(y, ctx)?;
    let one = ApproxReal::one(ctx);
    let mut product = one.clone();
    let mut ypow = one.clone();
    for k in 1..=budget.terms() {
        ypow = ypow.mul(y, ctx)?;
        // 1 - (-y)^k: plus for odd k, minus for even k.
        let factor = if k % 2 == 1 { one.add(&ypow, ctx)? } else { one.sub(&ypow, ctx)? };
        product = product.mul(&factor, ctx)?;
    }
    Ok(product)
}

/// Ramanujan's class invariant t_n for n ≡ 11 (mod 24).
pub fn t_value(n: i64, ctx: PrecisionContext) -> Result<ApproxReal> {
    check_supported(n)?;
    let x = const_pi(ctx).mul(&ApproxReal::from_i64(n, ctx).sqrt_pos(ctx)?, ctx)?;
    let exp_scaled = |num: i64, den: i64| -> Result<ApproxReal> {
        x.mul(&ApproxReal::from_i64(num, ctx), ctx)?
            .div(&ApproxReal::from_i64(den, ctx), ctx)?
            .neg()
            .exp(ctx)
    };
    let q_118 = exp_scaled(1, 18)?; // q^(1/18)
    let f_cbrt = ramanujan_f(&exp_scaled(1, 3)?, ctx)?; // f(q^(1/3))
    let f_cube = ramanujan_f(&exp_scaled(3, 1)?, ctx)?; // f(q³)
    let f_q = ramanujan_f(&exp_scaled(1, 1)?, ctx)?; // f(q)
    let sqrt3 = ApproxReal::from_i64(3, ctx).sqrt_pos(ctx)?;
    sqrt3
        .mul(&q_118, ctx)?
        .mul(&f_cbrt, ctx)?
        .mul(&f_cube, ctx)?
        .div(&f_q.mul(&f_q, ctx)?, ctx)
}

fn divisor_power_sums(n: usize) -> (Vec<u128>, Vec<u128>) {
    let mut s3 = vec![0u128; n + 1];
    let mut s5 = vec![0u128; n + 1];
    for d in 1..=n as u128 {
        let d3 = d * d * d;
        let d5 = d3 * d * d;
        let mut m = d as usize;
        while m <= n {
            s3[m] += d3;
            s5[m] += d5;
            m += d as usize;
        }
    }
    (s3, s5)
}

/// j(τ) for τ in the upper half-plane.
pub fn j_invariant(tau: &ApproxComplex, ctx: PrecisionContext) -> Result<ApproxComplex> {
    if tau.im().sign() <= 0 {
        return Err(Error::Domain { op: "j_invariant", reason: "im(τ) must be positive" });
    }
    // q = exp(2πiτ) = exp(-2π im) · (cos(2π re) + i sin(2π re)).
    let pi = const_pi(ctx);
    let two_pi = pi.add(&pi, ctx)?;
    let modulus = two_pi.mul(tau.im(), ctx)?.neg().exp(ctx)?;
    let angle = two_pi.mul(tau.re(), ctx)?;
    let q = ApproxComplex::new(angle.cos(ctx)?, angle.sin(ctx)?).mul_real(&modulus, ctx)?;

    let budget = SeriesBudget::for_modulus(&modulus, ctx)?;
    let n = budget.terms();
    let (s3, s5) = divisor_power_sums(n);

    let mut e4_tail = ApproxComplex::zero(ctx);
    let mut e6_tail = ApproxComplex::zero(ctx);
    let mut qpow = ApproxComplex::one(ctx);
    for k in 1..=n {
        qpow = qpow.mul(&q, ctx)?;
        let c3 = ApproxReal::from_bigint(&BigInt::from(s3[k]), ctx);
        let c5 = ApproxReal::from_bigint(&BigInt::from(s5[k]), ctx);
        e4_tail = e4_tail.add(&qpow.mul_real(&c3, ctx)?, ctx)?;
        e6_tail = e6_tail.add(&qpow.mul_real(&c5, ctx)?, ctx)?;
    }
    let one = ApproxComplex::one(ctx);
    let e4 = one.add(&e4_tail.mul_real(&ApproxReal::from_i64(240, ctx), ctx)?, ctx)?;
    let e6 = one.sub(&e6_tail.mul_real(&ApproxReal::from_i64(504, ctx), ctx)?, ctx)?;

    let e4cubed = e4.powi(3, ctx)?;
    let denom = e4cubed.sub(&e6.mul(&e6, ctx)?, ctx)?;
    e4cubed
        .mul_real(&ApproxReal::from_i64(1728, ctx), ctx)?
        .div(&denom, ctx)
}

/// The root map of the class polynomials: t ↦ (t⁶ - 27 t⁻⁶ - 6)³.
///
/// Sends any real root of P_n to a real root of H_n, and in particular t_n
/// to j((-1 + √-n)/2).
pub fn transform_t_to_j(t: &ApproxReal, ctx: PrecisionContext) -> Result<ApproxReal> {
    if t.is_zero() {
        return Err(Error::Domain { op: "transform_t_to_j", reason: "t must be nonzero" });
    }
    let t6 = t.powi(6, ctx)?;
    let inner = t6
        .sub(&ApproxReal::from_i64(27, ctx).div(&t6, ctx)?, ctx)?
        .sub(&ApproxReal::from_i64(6, ctx), ctx)?;
    inner.powi(3, ctx)
}

/// Complex version of the root map, used to check every root of P_n.
pub fn transform_t_to_j_complex(t: &ApproxComplex, ctx: PrecisionContext) -> Result<ApproxComplex> {
    let t6 = t.powi(6, ctx)?;
    let twenty_seven = ApproxComplex::from_real(ApproxReal::from_i64(27, ctx), ctx);
    let six = ApproxComplex::from_real(ApproxReal::from_i64(6, ctx), ctx);
    let inner = t6.sub(&twenty_seven.div(&t6, ctx)?, ctx)?.sub(&six, ctx)?;
    inner.powi(3, ctx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn ctx(bits: usize) -> PrecisionContext {
        PrecisionContext::new(bits).unwrap()
    }

    #[test]
    fn f_near_zero_is_one_plus_y() {
        let c = ctx(256);
        let y = ApproxReal::from_f64(1e-30, c).unwrap();
        let f = ramanujan_f(&y, c).unwrap();
        let expected = ApproxReal::one(c).add(&y, c).unwrap();
        let diff = f.sub(&expected, c).unwrap().abs();
        let bound = ApproxReal::from_f64(1e-59, c).unwrap();
        assert_eq!(diff.cmp(&bound), Ordering::Less);
    }

    #[test]
    fn f_of_q11_cubed_against_double_oracle() {
        let c = ctx(128);
        let q11 = const_pi(c)
            .mul(&ApproxReal::from_i64(11, c).sqrt_pos(c).unwrap(), c)
            .unwrap()
            .neg()
            .exp(c)
            .unwrap();
        let y = q11.powi(3, c).unwrap();
        let f = ramanujan_f(&y, c).unwrap();
        let oracle = 1.0 + (-std::f64::consts::PI * 11f64.sqrt()).exp().powi(3);
        assert!((f.to_f64() - oracle).abs() < 1e-15);
    }

    #[test]
    fn f_rejects_bad_arguments() {
        let c = ctx(64);
        assert!(matches!(
            ramanujan_f(&ApproxReal::one(c), c),
            Err(Error::Divergent { .. })
        ));
        assert!(ramanujan_f(&ApproxReal::from_i64(-1, c), c).is_err());
    }

    #[test]
    fn t11_is_one() {
        // Table anchor: P_11 = z - 1, so t_11 must equal 1. This test pins the
        // sign convention of f.
        let bits = 192;
        let c = ctx(bits);
        let t = t_value(11, c).unwrap();
        let err = t.sub(&ApproxReal::one(c), c).unwrap().abs();
        let digits = (bits as f64 * std::f64::consts::LOG10_2) as i32;
        let bound = ApproxReal::from_f64(10f64.powi(-(digits - 5)), c).unwrap();
        assert_eq!(err.cmp(&bound), Ordering::Less, "t_11 = {}", t);
    }

    #[test]
    fn t35_is_golden_ratio_conjugate() {
        // Positive root of z² + z - 1 by the quadratic formula.
        let c = ctx(192);
        let t = t_value(35, c).unwrap();
        let root = ApproxReal::from_i64(5, c)
            .sqrt_pos(c)
            .unwrap()
            .sub(&ApproxReal::one(c), c)
            .unwrap()
            .div(&ApproxReal::from_i64(2, c), c)
            .unwrap();
        let diff = t.sub(&root, c).unwrap().abs();
        assert_eq!(diff.cmp(&ApproxReal::pow2(-150, c)), Ordering::Less);
    }

    #[test]
    fn t59_is_cubic_root() {
        let c = ctx(192);
        let t = t_value(59, c).unwrap();
        assert!((t.to_f64() - 0.45339765).abs() < 1e-7);
        let p = crate::polyz::IntPolynomial::from_i64_coeffs(&[-1, 2, 0, 1]);
        let residual = p.evaluate_real(&t, c).unwrap().abs();
        assert_eq!(residual.cmp(&ApproxReal::pow2(-150, c)), Ordering::Less);
    }

    #[test]
    fn j_at_special_points() {
        let c = ctx(170); // ≥ 50 digits
        let tol = ApproxReal::from_f64(1e-30, c).unwrap();

        // j(i) = 1728.
        let i_pt = ApproxComplex::new(ApproxReal::zero(c), ApproxReal::one(c));
        let j = j_invariant(&i_pt, c).unwrap();
        assert_eq!(j.re().round_to_integer(&tol).unwrap(), BigInt::from(1728));
        assert_eq!(j.im().round_to_integer(&tol).unwrap(), BigInt::from(0));

        // j((1 + i√3)/2) = 0.
        let half = ApproxReal::one(c).div(&ApproxReal::from_i64(2, c), c).unwrap();
        let rho = ApproxComplex::new(
            half.clone(),
            ApproxReal::from_i64(3, c).sqrt_pos(c).unwrap().div(&ApproxReal::from_i64(2, c), c).unwrap(),
        );
        let j0 = j_invariant(&rho, c).unwrap();
        let bound = ApproxReal::from_f64(1e-40, c).unwrap();
        assert_eq!(j0.abs(c).unwrap().cmp(&bound), Ordering::Less);

        // j((-1 + i√11)/2) = -32768.
        let tau11 = ApproxComplex::new(
            half.neg(),
            ApproxReal::from_i64(11, c).sqrt_pos(c).unwrap().div(&ApproxReal::from_i64(2, c), c).unwrap(),
        );
        let j11 = j_invariant(&tau11, c).unwrap();
        assert_eq!(j11.re().round_to_integer(&tol).unwrap(), BigInt::from(-32768));
    }

    #[test]
    fn j_rejects_lower_half_plane() {
        let c = ctx(64);
        let bad = ApproxComplex::new(ApproxReal::zero(c), ApproxReal::from_i64(-1, c));
        assert!(matches!(j_invariant(&bad, c), Err(Error::Domain { .. })));
    }

    #[test]
    fn transform_at_one() {
        let c = ctx(128);
        let v = transform_t_to_j(&ApproxReal::one(c), c).unwrap();
        // (1 - 27 - 6)³ = -32768 exactly.
        let tol = ApproxReal::pow2(-100, c);
        assert_eq!(v.round_to_integer(&tol).unwrap(), BigInt::from(-32768));
        assert!(transform_t_to_j(&ApproxReal::zero(c), c).is_err());
    }

    #[test]
    fn transform_of_t11_matches_j_at_cm_point() {
        let c = ctx(256);
        let t = t_value(11, c).unwrap();
        let lhs = transform_t_to_j(&t, c).unwrap();
        let tau = crate::quadform::QuadForm::new(1, 1, 3)
            .unwrap()
            .cm_point(c)
            .unwrap();
        let rhs = j_invariant(tau.tau(), c).unwrap();
        let diff = lhs.sub(rhs.re(), c).unwrap().abs();
        assert_eq!(diff.cmp(&ApproxReal::pow2(-180, c)), Ordering::Less);
    }

    #[test]
    fn conjugation_symmetry_at_cm_points() {
        // j(-conj(τ)) = conj(j(τ)) for a non-real example.
        let c = ctx(160);
        let form = crate::quadform::QuadForm::new(3, 1, 19).unwrap(); // disc -227
        let tau = form.cm_point(c).unwrap();
        let j = j_invariant(tau.tau(), c).unwrap();
        let reflected = ApproxComplex::new(tau.tau().re().neg(), tau.tau().im().clone());
        let j_reflected = j_invariant(&reflected, c).unwrap();
        let diff = j_reflected.sub(&j.conj(), c).unwrap().abs(c).unwrap();
        // Residual is relative to |j| ~ e^(π√227/3).
        let scale = j.abs(c).unwrap();
        let rel = diff.div(&scale, c).unwrap();
        assert_eq!(rel.cmp(&ApproxReal::pow2(-120, c)), Ordering::Less);
    }

    #[test]
    fn doubling_precision_agrees() {
        let c = ctx(128);
        let c2 = c.double();
        let t1 = t_value(59, c).unwrap();
        let t2 = t_value(59, c2).unwrap();
        let diff = t1.sub(&t2, c2).unwrap().abs();
        assert_eq!(diff.cmp(&ApproxReal::pow2(-120, c2)), Ordering::Less);
    }
}
