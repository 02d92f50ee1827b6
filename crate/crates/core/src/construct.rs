//! Assembly of H_n from CM-point j-values and recovery of P_n from t_n.
//!
//! H_n is expanded from its roots {j(τ_Q)} over a balanced product tree and
//! rounded coefficient-by-coefficient with a 0.25 tolerance (half of the
//! rounding headroom is kept as an error-detection margin). P_n is recovered
//! numerically by integer-relation detection on t_n and then certified
//! against H_n through the root map t ↦ (t⁶ - 27t⁻⁶ - 6)³; minimality is
//! enforced by demanding degree exactly h_n together with the absence of any
//! relation at degree h_n - 1 that survives a doubled-precision residual
//! check.

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};
use crate::lattice::algdep;
use crate::modfunc::{j_invariant, t_value, transform_t_to_j_complex};
use crate::numerics::{ApproxComplex, ApproxReal, PrecisionContext};
use crate::polyz::{complex_roots, IntPolynomial};
use crate::quadform::enumerate_reduced;

/// Hard ceiling for the precision retry loops.
pub const MAX_BITS: usize = 1 << 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PolyKind {
    Hilbert,
    Ramanujan,
}

/// A constructed class polynomial together with how it was obtained.
#[derive(Clone, Debug)]
pub struct ClassPolynomialResult {
    pub n: i64,
    pub kind: PolyKind,
    pub polynomial: IntPolynomial,
    pub bits_used: usize,
    /// log2 of the worst numerical residual seen while landing on integers
    /// (coefficient rounding for Hilbert, |P(t_n)| at doubled precision for
    /// Ramanujan). NEG_INFINITY when the residual vanished.
    pub residual_log2: f64,
    pub verified: bool,
}

/// Working precision for H_n: ⌈π√n Σ(1/a) / ln 2⌉ + 32 h_n + 128.
///
/// The first term bounds the coefficient sizes (the constant term is about
/// exp(π√n Σ 1/a)); the rest absorbs the cancellation in E4³ - E6² and the
/// product-tree error accumulation.
pub fn estimate_bits_hilbert(n: i64) -> Result<usize> {
    let forms = enumerate_reduced(n)?;
    let sum_inv_a: f64 = forms.iter().map(|f| 1.0 / f.a() as f64).sum();
    let main = (std::f64::consts::PI * (n as f64).sqrt() * sum_inv_a / std::f64::consts::LN_2)
        .ceil() as usize;
    Ok(main + 32 * forms.len() + 128)
}

fn log2_of(x: &ApproxReal) -> f64 {
    match x.exponent() {
        Some(e) => e as f64,
        None => f64::NEG_INFINITY,
    }
}

/// Multiply a list of complex polynomials (ascending coefficients) pairwise
/// until one remains; the balanced tree keeps error growth logarithmic in the
/// number of factors.
fn product_tree(mut level: Vec<Vec<ApproxComplex>>, ctx: PrecisionContext) -> Result<Vec<ApproxComplex>> {
    while level.len() > 1 {
        let mut next = Vec::with_capacity(level.len().div_ceil(2));
        let mut it = level.into_iter();
        while let Some(a) = it.next() {
            match it.next() {
                Some(b) => {
                    let mut prod =
                        vec![ApproxComplex::zero(ctx); a.len() + b.len() - 1];
                    for (i, x) in a.iter().enumerate() {
                        for (j, y) in b.iter().enumerate() {
                            prod[i + j] = prod[i + j].add(&x.mul(y, ctx)?, ctx)?;
                        }
                    }
                    next.push(prod);
                }
                None => next.push(a),
            }
        }
        level = next;
    }
    Ok(level.pop().expect("nonempty product"))
}

fn try_hilbert_at(n: i64, ctx: PrecisionContext) -> Result<(IntPolynomial, f64)> {
    let forms = enumerate_reduced(n)?;
    let mut factors = Vec::with_capacity(forms.len());
    for form in &forms {
        let tau = form.cm_point(ctx)?;
        // Reduced forms keep im(τ) ≥ √3/2, i.e. |q| ≤ exp(-π√3); the series
        // budget depends on it.
        assert!(
            tau.tau().im().to_f64() >= 0.866,
            "CM point below the reduced-form height bound"
        );
        let j = j_invariant(tau.tau(), ctx)?;
        factors.push(vec![j.neg(), ApproxComplex::one(ctx)]); // x - j
    }
    let expanded = product_tree(factors, ctx)?;

    let tol = ApproxReal::from_f64(0.25, ctx)?;
    let mut coeffs = Vec::with_capacity(expanded.len());
    let mut worst = f64::NEG_INFINITY;
    for c in &expanded {
        let rounded = c.re().round_to_integer(&tol)?;
        let re_residual = c.re().sub(&ApproxReal::from_bigint(&rounded, ctx), ctx)?.abs();
        let im_residual = c.im().abs();
        if im_residual.cmp(&tol) != std::cmp::Ordering::Less {
            return Err(Error::Residual {
                residual: format!("2^{:.0}", log2_of(&im_residual)),
                tolerance: "0.25".into(),
            });
        }
        worst = worst.max(log2_of(&re_residual)).max(log2_of(&im_residual));
        coeffs.push(rounded);
    }
    let poly = IntPolynomial::from_coeffs(coeffs);
    if poly.degree() != Some(forms.len()) || !poly.is_monic() {
        return Err(Error::Inconsistency(format!(
            "H_{n} expansion has degree {:?} with leading coefficient {}",
            poly.degree(),
            poly.leading_coefficient()
        )));
    }
    Ok((poly, worst))
}

/// The Hilbert class polynomial H_n: monic of degree h_n with roots j(τ_Q).
///
/// `bits` overrides the automatic precision estimate; in auto mode a rounding
/// failure doubles the precision and retries up to [`MAX_BITS`].
pub fn hilbert_class_poly(n: i64, bits: Option<usize>) -> Result<ClassPolynomialResult> {
    let auto = bits.is_none();
    let mut bits = match bits {
        Some(b) => b.max(64),
        None => estimate_bits_hilbert(n)?,
    };
    loop {
        let ctx = PrecisionContext::new(bits)?;
        match try_hilbert_at(n, ctx) {
            Ok((polynomial, residual_log2)) => {
                return Ok(ClassPolynomialResult {
                    n,
                    kind: PolyKind::Hilbert,
                    polynomial,
                    bits_used: bits,
                    residual_log2,
                    verified: true,
                })
            }
            Err(Error::Residual { .. }) if auto && bits * 2 <= MAX_BITS => bits *= 2,
            Err(Error::Residual { residual, tolerance }) if !auto => {
                return Err(Error::Residual { residual, tolerance })
            }
            Err(Error::Residual { .. }) => return Err(Error::PrecisionExhausted(MAX_BITS)),
            Err(e) => return Err(e),
        }
    }
}

/// Outcome of the Prop-1.2-style certificate for a Ramanujan polynomial
/// candidate. Each clause carries the worst witness value it saw.
#[derive(Clone, Debug)]
pub struct RamanujanChecks {
    pub degree_ok: bool,
    pub constant_ok: bool,
    pub roots_ok: bool,
    pub value_ok: bool,
    pub worst_root_residual_log2: f64,
    pub value_residual_log2: f64,
}

impl RamanujanChecks {
    pub fn all_ok(&self) -> bool {
        self.degree_ok && self.constant_ok && self.roots_ok && self.value_ok
    }

    pub fn failed_clauses(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if !self.degree_ok {
            out.push("degree");
        }
        if !self.constant_ok {
            out.push("constant-term");
        }
        if !self.roots_ok {
            out.push("root-transform");
        }
        if !self.value_ok {
            out.push("value-at-t_n");
        }
        out
    }

    pub fn into_result(self) -> Result<Self> {
        if self.all_ok() {
            Ok(self)
        } else {
            Err(Error::Verification(format!(
                "Ramanujan polynomial checks failed: {}",
                self.failed_clauses().join(", ")
            )))
        }
    }
}

/// Checks a candidate P against H_n:
/// (i) deg P = h_n, (ii) constant term ±1, (iii) every complex root r of P
/// maps under (r⁶ - 27r⁻⁶ - 6)³ to a root of H_n within 10^(-bits/4)
/// relative, (iv) |P(t_n)| < 2^(-bits/2).
pub fn verify_ramanujan_poly(
    p: &IntPolynomial,
    n: i64,
    hilbert: &IntPolynomial,
    ctx: PrecisionContext,
) -> Result<RamanujanChecks> {
    let h_n = enumerate_reduced(n)?.len();
    let bits = ctx.bits();
    let degree_ok = p.degree() == Some(h_n);
    let constant_ok = p.constant_term().magnitude().is_one();

    // Clause (iii): evaluate at doubled precision so the tolerance, which is
    // pinned to the contract context, is met with a wide margin by a true P_n.
    let ctx2 = ctx.double();
    let tol_exp = ((bits as u64 * 8305).div_ceil(10_000)) as i32; // ≥ bits·log2(10)/4
    let root_tol = ApproxReal::pow2(-tol_exp, ctx2);
    let abs_hilbert = IntPolynomial::from_coeffs(
        hilbert.coeffs().iter().map(|c| BigInt::from(c.magnitude().clone())).collect(),
    );
    let mut roots_ok = !p.is_zero() && p.degree().unwrap_or(0) >= 1;
    let mut worst_root = f64::NEG_INFINITY;
    if roots_ok {
        for root in complex_roots(p, ctx2)? {
            if root.abs(ctx2)?.is_zero() {
                roots_ok = false;
                break;
            }
            let w = transform_t_to_j_complex(&root, ctx2)?;
            let value = hilbert.evaluate_approx(&w, ctx2)?.abs(ctx2)?;
            // Relative to the largest term magnitude of H at |w|.
            let scale = abs_hilbert.evaluate_real(&w.abs(ctx2)?, ctx2)?;
            let rel = value.div(&scale, ctx2)?;
            worst_root = worst_root.max(log2_of(&rel));
            if rel.cmp(&root_tol) != std::cmp::Ordering::Less {
                roots_ok = false;
            }
        }
    }

    // Clause (iv): |P(t_n)| below 2^(-bits/2).
    let t = t_value(n, ctx2)?;
    let value = p.evaluate_real(&t, ctx2)?.abs();
    let value_tol = ApproxReal::pow2(-((bits / 2) as i32), ctx2);
    let value_ok = value.cmp(&value_tol) == std::cmp::Ordering::Less;

    Ok(RamanujanChecks {
        degree_ok,
        constant_ok,
        roots_ok,
        value_ok,
        worst_root_residual_log2: worst_root,
        value_residual_log2: log2_of(&value),
    })
}

/// Starting precision for the P_n recovery: max(192 bits, 10 h_n digits).
fn ramanujan_start_bits(h_n: usize) -> usize {
    let digits_bits = (10.0 * h_n as f64 * std::f64::consts::LOG2_10).ceil() as usize;
    digits_bits.max(192)
}

/// The minimal polynomial P_n of t_n, recovered by algdep and certified
/// against the given Hilbert class polynomial.
pub fn ramanujan_poly_with_hilbert(
    n: i64,
    bits: Option<usize>,
    hilbert: &IntPolynomial,
) -> Result<ClassPolynomialResult> {
    let h_n = enumerate_reduced(n)?.len();
    let auto = bits.is_none();
    let mut bits = bits.unwrap_or_else(|| ramanujan_start_bits(h_n));
    loop {
        let ctx = PrecisionContext::new(bits.max(64))?;
        match try_ramanujan_at(n, h_n, hilbert, ctx)? {
            Some(result) => return Ok(result),
            None if auto && bits * 2 <= MAX_BITS => bits *= 2,
            None => {
                return Err(if auto {
                    Error::PrecisionExhausted(MAX_BITS)
                } else {
                    Error::NeedsMorePrecision(format!(
                        "no certified relation for n={n} at {bits} bits"
                    ))
                })
            }
        }
    }
}

/// One attempt at the current precision; Ok(None) means "retry with more bits".
fn try_ramanujan_at(
    n: i64,
    h_n: usize,
    hilbert: &IntPolynomial,
    ctx: PrecisionContext,
) -> Result<Option<ClassPolynomialResult>> {
    let bits = ctx.bits();
    let t = t_value(n, ctx)?;
    let candidate = match algdep(&t, h_n, ctx) {
        Ok(c) => c,
        Err(Error::NeedsMorePrecision(_)) => return Ok(None),
        Err(e) => return Err(e),
    };

    // Residuals recomputed at doubled precision separate true relations
    // (which collapse to the new error floor) from spurious lattice hits
    // (which stay put).
    let ctx2 = ctx.double();
    let t2 = t_value(n, ctx2)?;
    let strict = ApproxReal::pow2(-((bits + bits / 4) as i32), ctx2);
    let residual = candidate.evaluate_real(&t2, ctx2)?.abs();
    if residual.cmp(&strict) != std::cmp::Ordering::Less {
        return Ok(None);
    }
    if candidate.degree() != Some(h_n) {
        return Err(Error::Inconsistency(format!(
            "relation of degree {:?} found where h_n = {h_n}",
            candidate.degree()
        )));
    }
    if !candidate.is_monic() {
        return Err(Error::Inconsistency(format!(
            "candidate for P_{n} is not monic: {candidate}"
        )));
    }

    // Minimality guard: degree h_n - 1 must not admit a true relation.
    if h_n >= 2 {
        if let Ok(lower) = algdep(&t, h_n - 1, ctx) {
            let lower_residual = lower.evaluate_real(&t2, ctx2)?.abs();
            if lower_residual.cmp(&strict) == std::cmp::Ordering::Less {
                return Err(Error::Inconsistency(format!(
                    "relation of degree {} below h_n = {h_n} for n={n}",
                    h_n - 1
                )));
            }
        }
    }

    let checks = verify_ramanujan_poly(&candidate, n, hilbert, ctx)?;
    checks.into_result()?;

    Ok(Some(ClassPolynomialResult {
        n,
        kind: PolyKind::Ramanujan,
        polynomial: candidate,
        bits_used: bits,
        residual_log2: log2_of(&residual),
        verified: true,
    }))
}

/// Convenience entry point that builds H_n itself before certifying P_n.
pub fn ramanujan_poly(n: i64, bits: Option<usize>) -> Result<ClassPolynomialResult> {
    let hilbert = hilbert_class_poly(n, None)?;
    ramanujan_poly_with_hilbert(n, bits, &hilbert.polynomial)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(coeffs: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64_coeffs(coeffs)
    }

    #[test]
    fn estimate_matches_stated_formula() {
        // n = 11: one form with a = 1 → ⌈π√11/ln 2⌉ + 32 + 128 = 176.
        assert_eq!(estimate_bits_hilbert(11).unwrap(), 176);
        assert!(estimate_bits_hilbert(995).unwrap() > estimate_bits_hilbert(11).unwrap());
    }

    #[test]
    fn hilbert_11_is_x_plus_32768() {
        let r = hilbert_class_poly(11, None).unwrap();
        assert_eq!(r.polynomial, poly(&[32768, 1]));
        assert_eq!(r.bits_used, 176);
        assert!(r.residual_log2 < -20.0);
    }

    #[test]
    fn hilbert_35_shape() {
        let r = hilbert_class_poly(35, None).unwrap();
        assert_eq!(r.polynomial.degree(), Some(2));
        assert!(r.polynomial.is_monic());
    }

    #[test]
    fn hilbert_227_matches_worked_example() {
        let r = hilbert_class_poly(227, None).unwrap();
        let expected = IntPolynomial::from_coeffs(vec![
            "5085472193216544027705344000000000000000".parse().unwrap(),
            "-2111118203460821622718464000000000000".parse().unwrap(),
            "18227340807938993794580480000000000".parse().unwrap(),
            "-2562327002832961536000000000".parse().unwrap(),
            "360082897644683264000".parse().unwrap(),
            "1".parse().unwrap(),
        ]);
        assert_eq!(r.polynomial, expected);
    }

    #[test]
    fn hilbert_rerun_at_double_precision_is_identical() {
        let auto = hilbert_class_poly(59, None).unwrap();
        let doubled = hilbert_class_poly(59, Some(auto.bits_used * 2)).unwrap();
        assert_eq!(auto.polynomial, doubled.polynomial);
    }

    #[test]
    fn ramanujan_table_one() {
        let expected: &[(i64, &[i64])] = &[
            (11, &[-1, 1]),
            (35, &[-1, 1, 1]),
            (59, &[-1, 2, 0, 1]),
            (83, &[-1, 2, 2, 1]),
            (107, &[-1, 4, -2, 1]),
        ];
        for &(n, coeffs) in expected {
            let r = ramanujan_poly(n, None).unwrap();
            assert_eq!(r.polynomial, poly(coeffs), "P_{n}");
            assert!(r.verified);
        }
    }

    #[test]
    fn ramanujan_227_matches_worked_example() {
        let r = ramanujan_poly(227, None).unwrap();
        assert_eq!(r.polynomial, poly(&[-1, 9, -9, 9, -5, 1]));
    }

    #[test]
    fn ramanujan_rerun_at_double_precision_is_identical() {
        let first = ramanujan_poly(83, None).unwrap();
        let doubled = ramanujan_poly(83, Some(first.bits_used * 2)).unwrap();
        assert_eq!(first.polynomial, doubled.polynomial);
    }

    #[test]
    fn verify_accepts_true_and_rejects_false() {
        let h35 = hilbert_class_poly(35, None).unwrap();
        let ctx = PrecisionContext::new(192).unwrap();

        let good = verify_ramanujan_poly(&poly(&[-1, 1, 1]), 35, &h35.polynomial, ctx).unwrap();
        assert!(good.all_ok(), "failed: {:?}", good.failed_clauses());

        // z² + z + 1 keeps the unit constant term but fails the root and
        // value clauses.
        let bad = verify_ramanujan_poly(&poly(&[1, 1, 1]), 35, &h35.polynomial, ctx).unwrap();
        assert!(bad.degree_ok);
        assert!(bad.constant_ok);
        assert!(!bad.roots_ok);
        assert!(!bad.value_ok);
        assert_eq!(bad.failed_clauses(), vec!["root-transform", "value-at-t_n"]);
        assert!(bad.into_result().is_err());
    }

    #[test]
    fn verify_11_linear() {
        let h11 = hilbert_class_poly(11, None).unwrap();
        let ctx = PrecisionContext::new(192).unwrap();
        let checks = verify_ramanujan_poly(&poly(&[-1, 1]), 11, &h11.polynomial, ctx).unwrap();
        assert!(checks.all_ok());
    }
}
