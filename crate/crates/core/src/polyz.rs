//! Exact integer-coefficient polynomial algebra.
//!
//! Resultants go through the subresultant polynomial remainder sequence, which
//! keeps intermediate coefficient growth polynomial instead of exponential.
//! Real-root counting is exact via Sturm sequences; complex roots come from a
//! Durand-Kerner iteration over [`ApproxComplex`] values.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::numerics::{ApproxComplex, ApproxReal, PrecisionContext};

/// Univariate polynomial over ℤ, coefficients in ascending order of degree.
///
/// The zero polynomial is the empty coefficient list; otherwise the leading
/// coefficient is nonzero.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn from_coeffs(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_i64_coeffs(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self { coeffs: vec![BigInt::one()] }
    }

    pub fn monomial(c: BigInt, k: usize) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigInt::zero(); k + 1];
        coeffs[k] = c;
        Self { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn leading_coefficient(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn constant_term(&self) -> BigInt {
        self.coeff(0)
    }

    pub fn is_monic(&self) -> bool {
        self.leading_coefficient().is_one()
    }

    pub fn neg(&self) -> Self {
        Self { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            out.push(self.coeff(k) + other.coeff(k));
        }
        Self::from_coeffs(out)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::from_coeffs(out)
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::zero();
        }
        Self::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * BigInt::from(k))
                .collect(),
        )
    }

    pub fn evaluate_exact(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn evaluate_rational(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + BigRational::from_integer(c.clone());
        }
        acc
    }

    pub fn evaluate_approx(&self, z: &ApproxComplex, ctx: PrecisionContext) -> Result<ApproxComplex> {
        let mut acc = ApproxComplex::zero(ctx);
        for c in self.coeffs.iter().rev() {
            let c = ApproxComplex::from_real(ApproxReal::from_bigint(c, ctx), ctx);
            acc = acc.mul(z, ctx)?.add(&c, ctx)?;
        }
        Ok(acc)
    }

    pub fn evaluate_real(&self, x: &ApproxReal, ctx: PrecisionContext) -> Result<ApproxReal> {
        let mut acc = ApproxReal::zero(ctx);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x, ctx)?.add(&ApproxReal::from_bigint(c, ctx), ctx)?;
        }
        Ok(acc)
    }

    /// Positive gcd of the coefficients; 0 for the zero polynomial.
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Divides out the content, preserving the sign of the leading coefficient.
    pub fn primitive_part(&self) -> Self {
        let g = self.content();
        if g.is_zero() || g.is_one() {
            return self.clone();
        }
        Self { coeffs: self.coeffs.iter().map(|c| c / &g).collect() }
    }

    /// Primitive with positive leading coefficient (the normal form algdep emits).
    pub fn normalized(&self) -> Self {
        let p = self.primitive_part();
        if p.leading_coefficient().sign() == Sign::Minus {
            p.neg()
        } else {
            p
        }
    }

    /// Exact quotient self / divisor over ℤ, or None when division leaves a
    /// remainder or a fractional coefficient.
    pub fn exact_div(&self, divisor: &Self) -> Option<Self> {
        if divisor.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        let (dd, dn) = (self.degree()?, divisor.degree()?);
        if dd < dn {
            return None;
        }
        let lc = divisor.leading_coefficient();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigInt::zero(); dd - dn + 1];
        for k in (0..=dd - dn).rev() {
            let top = rem[k + dn].clone();
            if top.is_zero() {
                continue;
            }
            let (q, r) = top.div_rem(&lc);
            if !r.is_zero() {
                return None;
            }
            quot[k] = q.clone();
            for (j, c) in divisor.coeffs.iter().enumerate() {
                rem[k + j] -= &q * c;
            }
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(Self::from_coeffs(quot))
    }

    pub fn divides(&self, other: &Self) -> bool {
        other.exact_div(self).is_some()
    }
}

impl fmt::Debug for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPolynomial({self})")
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.magnitude();
            if first {
                if c.sign() == Sign::Minus {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.sign() == Sign::Minus {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if k == 0 || !mag.is_one() {
                write!(f, "{mag}")?;
            }
            match k {
                0 => {}
                1 => write!(f, "z")?,
                _ => write!(f, "z^{k}")?,
            }
        }
        Ok(())
    }
}

/// Pseudo-remainder: the R with lc(B)^(deg A - deg B + 1) · A = Q·B + R.
fn pseudo_rem(a: &IntPolynomial, b: &IntPolynomial) -> IntPolynomial {
    let da = a.degree().expect("nonzero dividend");
    let db = b.degree().expect("nonzero divisor");
    debug_assert!(da >= db);
    let d = b.leading_coefficient();
    let mut r = a.clone();
    let mut e = (da - db + 1) as i64;
    while let Some(dr) = r.degree() {
        if dr < db {
            break;
        }
        let s = IntPolynomial::monomial(r.leading_coefficient(), dr - db);
        r = r.scale(&d).sub(&s.mul(b));
        e -= 1;
    }
    if e > 0 {
        let mut m = BigInt::one();
        for _ in 0..e {
            m *= &d;
        }
        r = r.scale(&m);
    }
    r
}

/// Res(P, Q) by the subresultant polynomial remainder sequence.
pub fn resultant(p: &IntPolynomial, q: &IntPolynomial) -> Result<BigInt> {
    if p.is_zero() || q.is_zero() {
        return Err(Error::ZeroPolynomial("resultant"));
    }
    let (dp, dq) = (p.degree().unwrap(), q.degree().unwrap());
    if dp == 0 && dq == 0 {
        return Ok(BigInt::one());
    }
    if dq == 0 {
        return Ok(q.leading_coefficient().pow(dp as u32));
    }
    if dp == 0 {
        return Ok(p.leading_coefficient().pow(dq as u32));
    }

    let mut a;
    let mut b;
    let mut s = 1i8;
    if dp < dq {
        a = q.clone();
        b = p.clone();
        if dp % 2 == 1 && dq % 2 == 1 {
            s = -s;
        }
    } else {
        a = p.clone();
        b = q.clone();
    }

    let mut g = BigInt::one();
    let mut h = BigInt::one();
    loop {
        let da = a.degree().unwrap();
        let db = b.degree().unwrap();
        let delta = da - db;
        if da % 2 == 1 && db % 2 == 1 {
            s = -s;
        }
        let r = pseudo_rem(&a, &b);
        a = b;
        let mut div = g.clone();
        for _ in 0..delta {
            div *= &h;
        }
        b = exact_scalar_div(&r, &div);
        g = a.leading_coefficient();
        h = match delta {
            0 => h,
            1 => g.clone(),
            _ => {
                let num = g.pow(delta as u32);
                let den = h.pow((delta - 1) as u32);
                exact_bigint_div(&num, &den)
            }
        };
        if b.is_zero() {
            return Ok(BigInt::zero());
        }
        if b.degree() == Some(0) {
            let da = a.degree().unwrap();
            let num = b.leading_coefficient().pow(da as u32);
            let den = h.pow((da - 1) as u32);
            let res = exact_bigint_div(&num, &den);
            return Ok(if s < 0 { -res } else { res });
        }
    }
}

fn exact_scalar_div(p: &IntPolynomial, d: &BigInt) -> IntPolynomial {
    if p.is_zero() {
        return IntPolynomial::zero();
    }
    IntPolynomial::from_coeffs(p.coeffs().iter().map(|c| exact_bigint_div(c, d)).collect())
}

fn exact_bigint_div(n: &BigInt, d: &BigInt) -> BigInt {
    let (q, r) = n.div_rem(d);
    debug_assert!(r.is_zero(), "inexact division in subresultant chain");
    q
}

/// Discriminant Δ(P) = (-1)^(d(d-1)/2) · Res(P, P') / lc(P).
///
/// For degree ≤ 1 the convention Δ = 1 applies (the root-difference product
/// is empty), which keeps degree-one rows like H_11 and P_11 well defined.
pub fn discriminant(p: &IntPolynomial) -> Result<BigInt> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial("discriminant"));
    }
    let d = p.degree().unwrap();
    if d <= 1 {
        return Ok(BigInt::one());
    }
    let res = resultant(p, &p.derivative())?;
    let signed = if (d * (d - 1) / 2) % 2 == 1 { -res } else { res };
    Ok(exact_bigint_div(&signed, &p.leading_coefficient()))
}

/// Floor of √m together with an exactness flag.
pub fn integer_sqrt(m: &BigInt) -> Result<(BigInt, bool)> {
    if m.is_negative() {
        return Err(Error::Domain { op: "integer_sqrt", reason: "negative argument" });
    }
    let mag: BigUint = m.magnitude().clone();
    let root = mag.sqrt();
    let exact = &root * &root == mag;
    Ok((BigInt::from(root), exact))
}

/// Gcd of two integer polynomials (primitive, positive leading coefficient).
pub fn poly_gcd(p: &IntPolynomial, q: &IntPolynomial) -> IntPolynomial {
    let mut a = p.normalized();
    let mut b = q.normalized();
    if a.is_zero() {
        return b;
    }
    loop {
        if b.is_zero() {
            return a.normalized();
        }
        if b.degree() == Some(0) {
            return IntPolynomial::one();
        }
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
            continue;
        }
        let r = pseudo_rem(&a, &b).primitive_part();
        a = b;
        b = r;
    }
}

/// P with repeated factors stripped: P / gcd(P, P').
pub fn squarefree_part(p: &IntPolynomial) -> IntPolynomial {
    let Some(d) = p.degree() else { return IntPolynomial::zero() };
    if d == 0 {
        return IntPolynomial::one();
    }
    let g = poly_gcd(p, &p.derivative());
    if g.degree() == Some(0) {
        return p.normalized();
    }
    // Division of the primitive part by the primitive gcd is exact.
    p.primitive_part().exact_div(&g).expect("gcd divides").normalized()
}

/// Sturm chain of a squarefree polynomial. Each remainder is scaled by a
/// positive constant only, which leaves sign variations intact.
fn sturm_chain(p: &IntPolynomial) -> Vec<IntPolynomial> {
    let mut chain = vec![p.primitive_part(), p.derivative().primitive_part()];
    loop {
        let last = &chain[chain.len() - 1];
        let prev = &chain[chain.len() - 2];
        if last.is_zero() || last.degree() == Some(0) {
            break;
        }
        let da = prev.degree().unwrap();
        let db = last.degree().unwrap();
        let delta = da - db;
        let r = pseudo_rem(prev, last);
        // True remainder is r / lc(last)^(delta+1); flip so the stored entry is
        // minus the true remainder up to a positive factor.
        let mult_negative =
            last.leading_coefficient().is_negative() && (delta + 1) % 2 == 1;
        let next = if mult_negative { r } else { r.neg() };
        if next.is_zero() {
            break;
        }
        chain.push(next.primitive_part());
    }
    chain
}

fn sign_variations<I: IntoIterator<Item = i8>>(signs: I) -> usize {
    let mut count = 0;
    let mut last: Option<i8> = None;
    for s in signs {
        if s == 0 {
            continue;
        }
        if let Some(prev) = last {
            if prev != s {
                count += 1;
            }
        }
        last = Some(s);
    }
    count
}

fn sign_of(v: &BigInt) -> i8 {
    match v.sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

/// Number of distinct real roots of P, by Sturm's theorem.
pub fn count_real_roots(p: &IntPolynomial) -> Result<usize> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial("count_real_roots"));
    }
    let sf = squarefree_part(p);
    if sf.degree() == Some(0) {
        return Ok(0);
    }
    let chain = sturm_chain(&sf);
    let at_minus_inf = chain.iter().map(|q| {
        let s = sign_of(&q.leading_coefficient());
        if q.degree().unwrap_or(0) % 2 == 1 {
            -s
        } else {
            s
        }
    });
    let at_plus_inf = chain.iter().map(|q| sign_of(&q.leading_coefficient()));
    Ok(sign_variations(at_minus_inf) - sign_variations(at_plus_inf))
}

/// Number of distinct real roots of P in the half-open interval (a, b].
pub fn count_real_roots_in(p: &IntPolynomial, a: &BigRational, b: &BigRational) -> Result<usize> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial("count_real_roots_in"));
    }
    let sf = squarefree_part(p);
    if sf.degree() == Some(0) {
        return Ok(0);
    }
    let chain = sturm_chain(&sf);
    let var = |x: &BigRational| {
        sign_variations(chain.iter().map(|q| {
            let v = q.evaluate_rational(x);
            match v.cmp(&BigRational::zero()) {
                Ordering::Less => -1,
                Ordering::Equal => 0,
                Ordering::Greater => 1,
            }
        }))
    };
    Ok(var(a).saturating_sub(var(b)))
}

/// Isolate and refine one real root of P to within 2^(-bits_target).
///
/// Bisection on Sturm counts; the polynomial need not be monic. Returns the
/// largest real root. Intended as an independent oracle (no Newton, no
/// floating heuristics), so it is deliberately plain.
pub fn largest_real_root(p: &IntPolynomial, ctx: PrecisionContext) -> Result<ApproxReal> {
    let sf = squarefree_part(p);
    let total = count_real_roots(&sf)?;
    if total == 0 {
        return Err(Error::Domain { op: "largest_real_root", reason: "no real roots" });
    }
    // Cauchy bound: all roots lie in |x| <= 1 + max |c_i| / |lc|.
    let lc = sf.leading_coefficient().magnitude().clone();
    let maxc = sf
        .coeffs()
        .iter()
        .map(|c| c.magnitude().clone())
        .max()
        .unwrap();
    let bound = BigRational::from_integer(BigInt::from(maxc / &lc + 2u32));
    let mut lo = -bound.clone();
    let mut hi = bound;
    // First shrink (lo, hi] until exactly the largest root remains.
    while count_real_roots_in(&sf, &lo, &hi)? > 1 {
        let mid = (&lo + &hi) / BigRational::from_integer(BigInt::from(2));
        if count_real_roots_in(&sf, &mid, &hi)? >= 1 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // Then bisect to the requested width.
    let eps = BigRational::new(BigInt::one(), BigInt::one() << (ctx.bits() + 8));
    while &hi - &lo > eps {
        let mid = (&lo + &hi) / BigRational::from_integer(BigInt::from(2));
        if count_real_roots_in(&sf, &mid, &hi)? >= 1 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mid = (&lo + &hi) / BigRational::from_integer(BigInt::from(2));
    let num = ApproxReal::from_bigint(mid.numer(), ctx);
    let den = ApproxReal::from_bigint(mid.denom(), ctx);
    num.div(&den, ctx)
}

/// All complex roots of a squarefree polynomial by Durand-Kerner iteration.
pub fn complex_roots(p: &IntPolynomial, ctx: PrecisionContext) -> Result<Vec<ApproxComplex>> {
    let d = match p.degree() {
        None => return Err(Error::ZeroPolynomial("complex_roots")),
        Some(0) => return Ok(Vec::new()),
        Some(d) => d,
    };
    let lc = ApproxReal::from_bigint(&p.leading_coefficient(), ctx);
    // Monic rescale in the approximate domain.
    let monic: Vec<ApproxReal> = p
        .coeffs()
        .iter()
        .map(|c| ApproxReal::from_bigint(c, ctx).div(&lc, ctx))
        .collect::<Result<_>>()?;

    // Cauchy bound for the initial circle.
    let mut radius = ApproxReal::one(ctx);
    for c in monic.iter().take(d) {
        let a = c.abs().add(&ApproxReal::one(ctx), ctx)?;
        if a.cmp(&radius) == Ordering::Greater {
            radius = a;
        }
    }

    let pi = crate::numerics::const_pi(ctx);
    let offset = ApproxReal::from_f64(0.4, ctx)?;
    let mut roots = Vec::with_capacity(d);
    for k in 0..d {
        let theta = pi
            .mul(&ApproxReal::from_i64(2 * k as i64, ctx), ctx)?
            .div(&ApproxReal::from_i64(d as i64, ctx), ctx)?
            .add(&offset, ctx)?;
        let re = radius.mul(&theta.cos(ctx)?, ctx)?;
        let im = radius.mul(&theta.sin(ctx)?, ctx)?;
        roots.push(ApproxComplex::new(re, im));
    }

    let eval = |z: &ApproxComplex| -> Result<ApproxComplex> {
        let mut acc = ApproxComplex::zero(ctx);
        for c in monic.iter().rev() {
            acc = acc.mul(z, ctx)?.add(&ApproxComplex::from_real(c.clone(), ctx), ctx)?;
        }
        Ok(acc)
    };

    let tol_bits = -(ctx.bits() as i32) + 12;
    let max_iters = 64 + 16 * ctx.bits();
    for _ in 0..max_iters {
        let mut max_step = ApproxReal::zero(ctx);
        for i in 0..d {
            let mut denom = ApproxComplex::one(ctx);
            for j in 0..d {
                if i != j {
                    denom = denom.mul(&roots[i].sub(&roots[j], ctx)?, ctx)?;
                }
            }
            let w = eval(&roots[i])?.div(&denom, ctx)?;
            roots[i] = roots[i].sub(&w, ctx)?;
            let scale = roots[i].abs(ctx)?.add(&ApproxReal::one(ctx), ctx)?;
            let rel = w.abs(ctx)?.div(&scale, ctx)?;
            if rel.cmp(&max_step) == Ordering::Greater {
                max_step = rel;
            }
        }
        if max_step.cmp(&ApproxReal::pow2(tol_bits, ctx)) == Ordering::Less {
            return Ok(roots);
        }
    }
    Err(Error::RootsDiverged(d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ctx(bits: usize) -> PrecisionContext {
        PrecisionContext::new(bits).unwrap()
    }

    fn poly(coeffs: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64_coeffs(coeffs)
    }

    /// Sylvester matrix determinant by fraction-free Bareiss elimination.
    /// Independent oracle for the subresultant implementation.
    fn sylvester_resultant(p: &IntPolynomial, q: &IntPolynomial) -> BigInt {
        let dp = p.degree().unwrap();
        let dq = q.degree().unwrap();
        if dp == 0 && dq == 0 {
            return BigInt::one();
        }
        let n = dp + dq;
        let mut m = vec![vec![BigInt::zero(); n]; n];
        for row in 0..dq {
            for (k, c) in p.coeffs().iter().enumerate() {
                m[row][row + dp - k] = c.clone();
            }
        }
        for row in 0..dp {
            for (k, c) in q.coeffs().iter().enumerate() {
                m[dq + row][row + dq - k] = c.clone();
            }
        }
        // Bareiss: exact integer elimination.
        let mut sign = 1i8;
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m[k][k].is_zero() {
                let Some(swap) = (k + 1..n).find(|&r| !m[r][k].is_zero()) else {
                    return BigInt::zero();
                };
                m.swap(k, swap);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                    m[i][j] = v;
                }
                m[i][k] = BigInt::zero();
            }
            prev = m[k][k].clone();
        }
        let det = m[n - 1][n - 1].clone();
        if sign < 0 {
            -det
        } else {
            det
        }
    }

    #[test]
    fn derivative_and_eval() {
        let p = poly(&[-1, 1, 1]); // z^2 + z - 1
        assert_eq!(p.derivative(), poly(&[1, 2]));
        assert_eq!(poly(&[-1, 2, 0, 1]).evaluate_exact(&BigInt::zero()), BigInt::from(-1));
    }

    #[test]
    fn eval_approx_at_quadratic_root() {
        // Positive root of z^2 + z - 1 via the quadratic formula.
        let c = ctx(64);
        let five = ApproxReal::from_i64(5, c).sqrt_pos(c).unwrap();
        let root = five
            .sub(&ApproxReal::one(c), c)
            .unwrap()
            .div(&ApproxReal::from_i64(2, c), c)
            .unwrap();
        let p = poly(&[-1, 1, 1]);
        let v = p
            .evaluate_approx(&ApproxComplex::from_real(root, c), c)
            .unwrap();
        let bound = ApproxReal::from_f64(1e-9, c).unwrap();
        assert_eq!(v.abs(c).unwrap().cmp(&bound), Ordering::Less);
    }

    #[test]
    fn resultant_linear() {
        // Res(x - 5, x - 2) = 5 - 2 = 3.
        assert_eq!(resultant(&poly(&[-5, 1]), &poly(&[-2, 1])).unwrap(), BigInt::from(3));
    }

    #[test]
    fn resultant_quadratics() {
        assert_eq!(resultant(&poly(&[1, 0, 1]), &poly(&[-1, 0, 1])).unwrap(), BigInt::from(4));
    }

    #[test]
    fn resultant_self_is_zero() {
        let p = poly(&[-1, 2, 0, 1]);
        assert_eq!(resultant(&p, &p).unwrap(), BigInt::zero());
    }

    #[test]
    fn discriminants_of_reference_polynomials() {
        assert_eq!(discriminant(&poly(&[-1, 1])).unwrap(), BigInt::one());
        assert_eq!(discriminant(&poly(&[-1, 1, 1])).unwrap(), BigInt::from(5));
        assert_eq!(discriminant(&poly(&[-1, 2, 0, 1])).unwrap(), BigInt::from(-59));
        assert_eq!(discriminant(&poly(&[-1, 2, 2, 1])).unwrap(), BigInt::from(-83));
        assert_eq!(discriminant(&poly(&[-1, 4, -2, 1])).unwrap(), BigInt::from(-107));
        // Quintic from the n = 227 worked example: 2^4 · 227^2.
        let p227 = poly(&[-1, 9, -9, 9, -5, 1]);
        assert_eq!(discriminant(&p227).unwrap(), BigInt::from(824464));
    }

    #[test]
    fn integer_sqrt_cases() {
        assert_eq!(integer_sqrt(&BigInt::zero()).unwrap(), (BigInt::zero(), true));
        assert_eq!(integer_sqrt(&BigInt::from(824464)).unwrap(), (BigInt::from(908), true));
        assert_eq!(integer_sqrt(&BigInt::from(59)).unwrap(), (BigInt::from(7), false));
        assert!(integer_sqrt(&BigInt::from(-4)).is_err());
    }

    #[test]
    fn sturm_counts() {
        // z^2 + z - 1 has two real roots; z^2 + 1 none; z^3 + 2z - 1 one.
        assert_eq!(count_real_roots(&poly(&[-1, 1, 1])).unwrap(), 2);
        assert_eq!(count_real_roots(&poly(&[1, 0, 1])).unwrap(), 0);
        assert_eq!(count_real_roots(&poly(&[-1, 2, 0, 1])).unwrap(), 1);
        // (z-1)(z-2)(z-3) has three in (0, 3], one in (2, 3].
        let p = poly(&[-6, 11, -6, 1]);
        let r = |a: i64, b: i64| {
            count_real_roots_in(
                &p,
                &BigRational::from_integer(BigInt::from(a)),
                &BigRational::from_integer(BigInt::from(b)),
            )
            .unwrap()
        };
        assert_eq!(r(0, 3), 3);
        assert_eq!(r(2, 3), 1);
        assert_eq!(count_real_roots(&p).unwrap(), 3);
    }

    #[test]
    fn largest_real_root_of_golden_quadratic() {
        let c = ctx(128);
        let root = largest_real_root(&poly(&[-1, 1, 1]), c).unwrap();
        let expected = (5f64.sqrt() - 1.0) / 2.0;
        assert!((root.to_f64() - expected).abs() < 1e-12);
    }

    #[test]
    fn durand_kerner_finds_all_roots() {
        let c = ctx(128);
        // (z-1)(z-2)(z^2+1): roots 1, 2, ±i.
        let p = poly(&[-2, 3, -3, 3, -1]).neg(); // -(...) to exercise non-monic path
        let roots = complex_roots(&p, c).unwrap();
        assert_eq!(roots.len(), 4);
        let tol = ApproxReal::from_f64(1e-30, c).unwrap();
        for r in &roots {
            let v = p.evaluate_approx(r, c).unwrap().abs(c).unwrap();
            assert_eq!(v.cmp(&tol), Ordering::Less, "residual {}", v);
        }
        let real_count = roots
            .iter()
            .filter(|r| r.im().abs().cmp(&ApproxReal::pow2(-60, c)) == Ordering::Less)
            .count();
        assert_eq!(real_count, 2);
    }

    #[test]
    fn exact_division_and_gcd() {
        let a = poly(&[-1, 1]); // z - 1
        let b = poly(&[2, 1]); // z + 2
        let prod = a.mul(&b);
        assert_eq!(prod.exact_div(&a).unwrap(), b);
        assert!(a.divides(&prod));
        assert!(!poly(&[1, 1]).divides(&prod));
        assert_eq!(poly_gcd(&prod, &a.mul(&a)), a);
        assert_eq!(squarefree_part(&a.mul(&a).mul(&b)), a.mul(&b));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn subresultant_matches_sylvester(
            pc in prop::collection::vec(-30i64..30, 2..7),
            qc in prop::collection::vec(-30i64..30, 2..7),
        ) {
            let p = poly(&pc);
            let q = poly(&qc);
            prop_assume!(p.degree().map_or(false, |d| d >= 1));
            prop_assume!(q.degree().map_or(false, |d| d >= 1));
            let sub = resultant(&p, &q).unwrap();
            let syl = sylvester_resultant(&p, &q);
            prop_assert_eq!(sub, syl);
        }

        #[test]
        fn resultant_swap_sign(
            pc in prop::collection::vec(-20i64..20, 2..6),
            qc in prop::collection::vec(-20i64..20, 2..6),
        ) {
            let p = poly(&pc);
            let q = poly(&qc);
            prop_assume!(p.degree().map_or(false, |d| d >= 1));
            prop_assume!(q.degree().map_or(false, |d| d >= 1));
            let dp = p.degree().unwrap();
            let dq = q.degree().unwrap();
            let lhs = resultant(&p, &q).unwrap();
            let mut rhs = resultant(&q, &p).unwrap();
            if (dp * dq) % 2 == 1 {
                rhs = -rhs;
            }
            prop_assert_eq!(lhs, rhs);
        }
    }
}
