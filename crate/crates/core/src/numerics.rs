//! Arbitrary-precision real and complex arithmetic under an explicit precision context.
//!
//! Every operation is evaluated by the `astro-float` backend at the context's
//! working precision of `bits + GUARD_BITS` binary digits and rounded to even.
//! The contract relied on by the rest of the crate: a chain of up to 2^GUARD_BITS
//! primitive operations keeps the relative error of the result below 2^(-bits).
//! Values are plain immutable data and safe to move across threads; transcendental
//! constant caches are thread local.
//!
//! No NaN or infinity escapes an operation: anything non-finite is turned into an
//! error at the point it is produced.

use std::cell::RefCell;
use std::cmp::Ordering;

use astro_float::{BigFloat, Consts, RoundingMode, Sign, WORD_BIT_SIZE};
use num_bigint::{BigInt, BigUint, Sign as IntSign};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Guard bits added on top of the requested precision for every primitive
/// operation chain.
pub const GUARD_BITS: usize = 16;

const RM: RoundingMode = RoundingMode::ToEven;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("constants cache"));
}

/// Working precision in binary digits. Plain data; copying is free.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrecisionContext {
    bits: usize,
}

impl PrecisionContext {
    /// At least 64 bits; anything below is rejected.
    pub fn new(bits: usize) -> Result<Self> {
        if bits < 64 {
            return Err(Error::InvalidPrecision(format!(
                "precision must be at least 64 bits, got {bits}"
            )));
        }
        Ok(Self { bits })
    }

    pub fn bits(&self) -> usize {
        self.bits
    }

    pub fn double(&self) -> Self {
        Self { bits: self.bits * 2 }
    }

    /// Precision actually passed to the backend.
    pub(crate) fn working(&self) -> usize {
        self.bits + GUARD_BITS
    }
}

/// Arbitrary-precision real number produced under some [`PrecisionContext`].
#[derive(Clone, Debug)]
pub struct ApproxReal {
    value: BigFloat,
}

fn finite(value: BigFloat, op: &'static str) -> Result<ApproxReal> {
    if value.is_nan() || value.is_inf() {
        return Err(Error::NonFinite(op));
    }
    Ok(ApproxReal { value })
}

impl ApproxReal {
    pub fn from_i64(v: i64, ctx: PrecisionContext) -> Self {
        ApproxReal { value: BigFloat::from_i64(v, ctx.working()) }
    }

    pub fn from_f64(v: f64, ctx: PrecisionContext) -> Result<Self> {
        finite(BigFloat::from_f64(v, ctx.working()), "from_f64")
    }

    /// Exact embedding of a big integer; never truncates.
    pub fn from_bigint(v: &BigInt, ctx: PrecisionContext) -> Self {
        let (sign, mag) = (v.sign(), v.magnitude());
        if mag.is_zero() {
            return Self::from_i64(0, ctx);
        }
        let bits = mag.bits() as usize;
        let prec = ctx.working().max(bits);
        let words = prec.div_ceil(WORD_BIT_SIZE);
        let shift = words * WORD_BIT_SIZE - bits;
        let shifted: BigUint = mag << shift;
        let mut digits = shifted.to_u64_digits();
        digits.resize(words, 0);
        let s = if sign == IntSign::Minus { Sign::Neg } else { Sign::Pos };
        ApproxReal {
            value: BigFloat::from_raw_parts(&digits, words * WORD_BIT_SIZE, s, bits as i32, false),
        }
    }

    /// 2^k, exact.
    pub fn pow2(k: i32, _ctx: PrecisionContext) -> Self {
        ApproxReal {
            value: BigFloat::from_raw_parts(
                &[1u64 << (WORD_BIT_SIZE - 1)],
                WORD_BIT_SIZE,
                Sign::Pos,
                k + 1,
                false,
            ),
        }
    }

    pub fn zero(ctx: PrecisionContext) -> Self {
        Self::from_i64(0, ctx)
    }

    pub fn one(ctx: PrecisionContext) -> Self {
        Self::from_i64(1, ctx)
    }

    pub fn add(&self, other: &Self, ctx: PrecisionContext) -> Result<Self> {
        finite(self.value.add(&other.value, ctx.working(), RM), "add")
    }

    pub fn sub(&self, other: &Self, ctx: PrecisionContext) -> Result<Self> {
        finite(self.value.sub(&other.value, ctx.working(), RM), "sub")
    }

    pub fn mul(&self, other: &Self, ctx: PrecisionContext) -> Result<Self> {
        finite(self.value.mul(&other.value, ctx.working(), RM), "mul")
    }

    pub fn div(&self, other: &Self, ctx: PrecisionContext) -> Result<Self> {
        if other.is_zero() {
            return Err(Error::Domain { op: "div", reason: "division by zero" });
        }
        finite(self.value.div(&other.value, ctx.working(), RM), "div")
    }

    pub fn neg(&self) -> Self {
        ApproxReal { value: self.value.neg() }
    }

    pub fn abs(&self) -> Self {
        ApproxReal { value: self.value.abs() }
    }

    /// Integer power; `n` may be negative (reciprocal is taken last).
    pub fn powi(&self, n: i64, ctx: PrecisionContext) -> Result<Self> {
        let p = ctx.working();
        let base = self.value.powi(n.unsigned_abs() as usize, p, RM);
        let v = if n < 0 {
            if self.is_zero() {
                return Err(Error::Domain { op: "powi", reason: "zero to a negative power" });
            }
            base.reciprocal(p, RM)
        } else {
            base
        };
        finite(v, "powi")
    }

    pub fn exp(&self, ctx: PrecisionContext) -> Result<Self> {
        CONSTS.with(|cc| finite(self.value.exp(ctx.working(), RM, &mut cc.borrow_mut()), "exp"))
    }

    /// Natural logarithm of a positive value.
    pub fn ln(&self, ctx: PrecisionContext) -> Result<Self> {
        if self.sign() <= 0 {
            return Err(Error::Domain { op: "ln", reason: "argument must be positive" });
        }
        CONSTS.with(|cc| finite(self.value.ln(ctx.working(), RM, &mut cc.borrow_mut()), "ln"))
    }

    /// Square root of a nonnegative value.
    pub fn sqrt_pos(&self, ctx: PrecisionContext) -> Result<Self> {
        if self.sign() < 0 {
            return Err(Error::Domain { op: "sqrt_pos", reason: "argument must be nonnegative" });
        }
        finite(self.value.sqrt(ctx.working(), RM), "sqrt_pos")
    }

    pub fn sin(&self, ctx: PrecisionContext) -> Result<Self> {
        CONSTS.with(|cc| finite(self.value.sin(ctx.working(), RM, &mut cc.borrow_mut()), "sin"))
    }

    pub fn cos(&self, ctx: PrecisionContext) -> Result<Self> {
        CONSTS.with(|cc| finite(self.value.cos(ctx.working(), RM, &mut cc.borrow_mut()), "cos"))
    }

    /// -1, 0 or +1.
    pub fn sign(&self) -> i8 {
        if self.value.is_zero() {
            0
        } else if self.value.is_negative() {
            -1
        } else {
            1
        }
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn cmp(&self, other: &Self) -> Ordering {
        // Finite by construction, so the backend comparison always succeeds.
        match self.value.cmp(&other.value) {
            Some(v) if v < 0 => Ordering::Less,
            Some(v) if v > 0 => Ordering::Greater,
            _ => Ordering::Equal,
        }
    }

    /// Exact value as a rational number (mantissa times a power of two).
    pub fn to_rational(&self) -> BigRational {
        let Some((words, _prec, sign, e, _inexact)) = self.value.as_raw_parts() else {
            return BigRational::zero();
        };
        if words.is_empty() {
            return BigRational::zero();
        }
        let bytes: Vec<u8> = words.iter().flat_map(|w| w.to_le_bytes()).collect();
        let m = BigUint::from_bytes_le(&bytes);
        let bitlen = (words.len() * WORD_BIT_SIZE) as i64;
        let mut num = BigInt::from(m);
        if sign == Sign::Neg {
            num = -num;
        }
        let shift = e as i64 - bitlen;
        if shift >= 0 {
            BigRational::from_integer(num << shift as usize)
        } else {
            BigRational::new(num, BigInt::one() << (-shift) as usize)
        }
    }

    pub fn floor_to_bigint(&self) -> BigInt {
        self.to_rational().floor().to_integer()
    }

    /// Nearest integer to `self` provided the residual stays within `tol`.
    ///
    /// The comparison is exact: both the value and the tolerance are treated
    /// as rationals. A residual above `tol` means the caller does not have
    /// enough precision to land on an integer and must retry with more bits.
    pub fn round_to_integer(&self, tol: &ApproxReal) -> Result<BigInt> {
        if tol.sign() <= 0 {
            return Err(Error::Domain { op: "round_to_integer", reason: "tolerance must be positive" });
        }
        let x = self.to_rational();
        let nearest = (&x + BigRational::new(BigInt::one(), BigInt::from(2))).floor().to_integer();
        let residual = (&x - BigRational::from_integer(nearest.clone())).abs();
        if residual <= tol.to_rational() {
            Ok(nearest)
        } else {
            Err(Error::Residual {
                residual: format!("{:.4e}", rational_to_f64(&residual)),
                tolerance: format!("{:.4e}", rational_to_f64(&tol.to_rational())),
            })
        }
    }

    /// Lossy double-precision view, for diagnostics and truncation estimates.
    pub fn to_f64(&self) -> f64 {
        let Some((words, _prec, sign, e, _)) = self.value.as_raw_parts() else {
            return f64::NAN;
        };
        if words.is_empty() {
            return 0.0;
        }
        let top = words[words.len() - 1] as f64;
        let next = if words.len() > 1 { words[words.len() - 2] as f64 } else { 0.0 };
        let frac = (top + next / 2f64.powi(64)) / 2f64.powi(64);
        let v = frac * 2f64.powi(e);
        if sign == Sign::Neg {
            -v
        } else {
            v
        }
    }

    /// Binary exponent e such that |x| ∈ [2^(e-1), 2^e), or None for zero.
    pub fn exponent(&self) -> Option<i32> {
        if self.is_zero() {
            None
        } else {
            self.value.exponent()
        }
    }
}

impl std::fmt::Display for ApproxReal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.value)
    }
}

fn rational_to_f64(r: &BigRational) -> f64 {
    // Good enough for error messages.
    let num = r.numer();
    let den = r.denom();
    let nb = num.bits() as i64;
    let db = den.bits() as i64;
    let shift = (nb - db - 64).max(0);
    let n128: f64 = (num >> shift as usize).to_string().parse().unwrap_or(f64::NAN);
    let d128: f64 = den.to_string().parse().unwrap_or(f64::NAN);
    n128 / d128 * 2f64.powi(shift as i32)
}

/// π at context precision.
pub fn const_pi(ctx: PrecisionContext) -> ApproxReal {
    CONSTS.with(|cc| ApproxReal { value: cc.borrow_mut().pi(ctx.working(), RM) })
}

/// Complex number with [`ApproxReal`] parts.
#[derive(Clone, Debug)]
pub struct ApproxComplex {
    re: ApproxReal,
    im: ApproxReal,
}

impl ApproxComplex {
    pub fn new(re: ApproxReal, im: ApproxReal) -> Self {
        Self { re, im }
    }

    pub fn from_real(re: ApproxReal, ctx: PrecisionContext) -> Self {
        Self { re, im: ApproxReal::zero(ctx) }
    }

    pub fn zero(ctx: PrecisionContext) -> Self {
        Self { re: ApproxReal::zero(ctx), im: ApproxReal::zero(ctx) }
    }

    pub fn one(ctx: PrecisionContext) -> Self {
        Self { re: ApproxReal::one(ctx), im: ApproxReal::zero(ctx) }
    }

    pub fn re(&self) -> &ApproxReal {
        &self.re
    }

    pub fn im(&self) -> &ApproxReal {
        &self.im
    }

    pub fn conj(&self) -> Self {
        Self { re: self.re.clone(), im: self.im.neg() }
    }

    pub fn neg(&self) -> Self {
        Self { re: self.re.neg(), im: self.im.neg() }
    }

    pub fn add(&self, other: &Self, ctx: PrecisionContext) -> Result<Self> {
        Ok(Self { re: self.re.add(&other.re, ctx)?, im: self.im.add(&other.im, ctx)? })
    }

    pub fn sub(&self, other: &Self, ctx: PrecisionContext) -> Result<Self> {
        Ok(Self { re: self.re.sub(&other.re, ctx)?, im: self.im.sub(&other.im, ctx)? })
    }

    pub fn mul(&self, other: &Self, ctx: PrecisionContext) -> Result<Self> {
        let ac = self.re.mul(&other.re, ctx)?;
        let bd = self.im.mul(&other.im, ctx)?;
        let ad = self.re.mul(&other.im, ctx)?;
        let bc = self.im.mul(&other.re, ctx)?;
        Ok(Self { re: ac.sub(&bd, ctx)?, im: ad.add(&bc, ctx)? })
    }

    pub fn div(&self, other: &Self, ctx: PrecisionContext) -> Result<Self> {
        let d = other.norm_sqr(ctx)?;
        if d.is_zero() {
            return Err(Error::Domain { op: "complex div", reason: "division by zero" });
        }
        let num = self.mul(&other.conj(), ctx)?;
        Ok(Self { re: num.re.div(&d, ctx)?, im: num.im.div(&d, ctx)? })
    }

    pub fn mul_real(&self, r: &ApproxReal, ctx: PrecisionContext) -> Result<Self> {
        Ok(Self { re: self.re.mul(r, ctx)?, im: self.im.mul(r, ctx)? })
    }

    pub fn norm_sqr(&self, ctx: PrecisionContext) -> Result<ApproxReal> {
        let rr = self.re.mul(&self.re, ctx)?;
        let ii = self.im.mul(&self.im, ctx)?;
        rr.add(&ii, ctx)
    }

    /// Modulus |z|.
    pub fn abs(&self, ctx: PrecisionContext) -> Result<ApproxReal> {
        self.norm_sqr(ctx)?.sqrt_pos(ctx)
    }

    pub fn powi(&self, n: u32, ctx: PrecisionContext) -> Result<Self> {
        let mut acc = Self::one(ctx);
        let mut base = self.clone();
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base, ctx)?;
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base, ctx)?;
            }
        }
        Ok(acc)
    }
}

impl std::fmt::Display for ApproxComplex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} + {}i", self.re, self.im)
    }
}
