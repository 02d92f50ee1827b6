//! Exact factorization of discriminants and related integers.
//!
//! Trial division carries almost all of the load here: every prime observed in
//! the discriminant factorizations stays below n, so the default trial bound
//! is n itself. Pollard rho (Brent variant, deterministic seeds) backs up the
//! rare large cofactor; anything it cannot crack is reported as an explicit
//! cofactor rather than silently accepted.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Sign and multiset of prime powers, with an explicit unfactored cofactor
/// (1 when the factorization is complete). Every listed prime has passed
/// [`is_prime`]; reassembling the parts reproduces the input exactly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactoredInteger {
    sign: i8,
    factors: Vec<(BigUint, u32)>,
    cofactor: BigUint,
}

impl FactoredInteger {
    pub fn zero() -> Self {
        Self { sign: 0, factors: Vec::new(), cofactor: BigUint::one() }
    }

    pub fn from_prime_powers(sign: i8, powers: &[(u64, u32)]) -> Self {
        let mut factors: Vec<(BigUint, u32)> =
            powers.iter().map(|&(p, e)| (BigUint::from(p), e)).collect();
        factors.sort();
        Self { sign, factors, cofactor: BigUint::one() }
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn factors(&self) -> &[(BigUint, u32)] {
        &self.factors
    }

    pub fn cofactor(&self) -> &BigUint {
        &self.cofactor
    }

    pub fn is_complete(&self) -> bool {
        self.cofactor.is_one()
    }

    /// sign · ∏ p^e · cofactor.
    pub fn reassemble(&self) -> BigInt {
        if self.sign == 0 {
            return BigInt::zero();
        }
        let mut acc = self.cofactor.clone();
        for (p, e) in &self.factors {
            acc *= p.pow(*e);
        }
        let v = BigInt::from(acc);
        if self.sign < 0 {
            -v
        } else {
            v
        }
    }

    pub fn exponent_of(&self, p: u64) -> u32 {
        let p = BigUint::from(p);
        self.factors.iter().find(|(q, _)| *q == p).map_or(0, |(_, e)| *e)
    }

    /// Product of two factored integers (exponents add, cofactors multiply).
    pub fn mul(&self, other: &Self) -> Self {
        if self.sign == 0 || other.sign == 0 {
            return Self::zero();
        }
        let mut factors = self.factors.clone();
        for (p, e) in &other.factors {
            match factors.iter_mut().find(|(q, _)| q == p) {
                Some((_, exp)) => *exp += e,
                None => factors.push((p.clone(), *e)),
            }
        }
        factors.sort();
        Self {
            sign: self.sign * other.sign,
            factors,
            cofactor: &self.cofactor * &other.cofactor,
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        if k == 0 {
            return Self { sign: 1, factors: Vec::new(), cofactor: BigUint::one() };
        }
        Self {
            sign: if self.sign < 0 && k % 2 == 1 { -1 } else if self.sign == 0 { 0 } else { 1 },
            factors: self.factors.iter().map(|(p, e)| (p.clone(), e * k)).collect(),
            cofactor: self.cofactor.pow(k),
        }
    }

    /// "2^4·227^2"-style rendering of the magnitude; "1" for a unit.
    pub fn magnitude_string(&self, sep: &str) -> String {
        if self.sign == 0 {
            return "0".into();
        }
        let mut parts: Vec<String> = self
            .factors
            .iter()
            .map(|(p, e)| if *e == 1 { p.to_string() } else { format!("{p}^{e}") })
            .collect();
        if !self.cofactor.is_one() {
            parts.push(format!("{}?", self.cofactor));
        }
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join(sep)
        }
    }

    /// Rendering with a leading sign, e.g. "+2^4·227^2".
    pub fn signed_string(&self, sep: &str) -> String {
        let s = match self.sign {
            0 => return "0".into(),
            x if x < 0 => "-",
            _ => "+",
        };
        format!("{s}{}", self.magnitude_string(sep))
    }
}

fn modmul(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn modpow_u64(mut base: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    base %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = modmul(acc, base, m);
        }
        base = modmul(base, base, m);
        e >>= 1;
    }
    acc
}

fn miller_rabin_u64(n: u64, base: u64) -> bool {
    // true = passes (probable prime for this base)
    if base % n == 0 {
        return true;
    }
    let d = n - 1;
    let s = d.trailing_zeros();
    let d = d >> s;
    let mut x = modpow_u64(base, d, n);
    if x == 1 || x == n - 1 {
        return true;
    }
    for _ in 1..s {
        x = modmul(x, x, n);
        if x == n - 1 {
            return true;
        }
    }
    false
}

/// Deterministic base set for 64-bit inputs.
const SMALL_BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    SMALL_BASES.iter().all(|&b| miller_rabin_u64(n, b))
}

fn miller_rabin_big(n: &BigUint, base: &BigUint) -> bool {
    if (base % n).is_zero() {
        return true;
    }
    let one = BigUint::one();
    let nm1 = n - &one;
    let s = nm1.trailing_zeros().unwrap_or(0);
    let d = &nm1 >> s;
    let mut x = base.modpow(&d, n);
    if x == one || x == nm1 {
        return true;
    }
    for _ in 1..s {
        x = (&x * &x) % n;
        if x == nm1 {
            return true;
        }
    }
    false
}

/// Deterministic Miller-Rabin below 2^64; 40 deterministic pseudo-random
/// strong-probable-prime rounds above.
pub fn is_prime(m: &BigUint) -> bool {
    if let Some(n) = m.to_u64() {
        return is_prime_u64(n);
    }
    for &p in &SMALL_BASES {
        if (m % BigUint::from(p)).is_zero() {
            return false;
        }
    }
    // Fixed-seed xorshift keeps runs reproducible.
    let mut state = 0x9E3779B97F4A7C15u64 ^ (m.to_u64_digits()[0] | 1);
    for _ in 0..40 {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        let base = BigUint::from(state % (u64::MAX - 3) + 2);
        if !miller_rabin_big(m, &base) {
            return false;
        }
    }
    true
}

/// Pollard rho with Brent cycle detection; returns a nontrivial factor, or
/// None when the effort budget runs out.
fn pollard_rho_brent(n: &BigUint) -> Option<BigUint> {
    if n.is_even() {
        return Some(BigUint::from(2u32));
    }
    for c in 1u64..=20 {
        let c_big = BigUint::from(c);
        let mut y = BigUint::from(2u32);
        let mut r = 1u64;
        let mut q = BigUint::one();
        let mut g = BigUint::one();
        let mut x = y.clone();
        let mut ys = y.clone();
        let max_rounds = 1u64 << 22;
        let mut rounds = 0u64;
        'outer: while g.is_one() {
            x = y.clone();
            for _ in 0..r {
                y = (&y * &y + &c_big) % n;
            }
            let mut k = 0u64;
            while k < r && g.is_one() {
                ys = y.clone();
                let m = 128.min(r - k);
                for _ in 0..m {
                    y = (&y * &y + &c_big) % n;
                    let diff = if x > y { &x - &y } else { &y - &x };
                    q = (&q * &diff) % n;
                }
                g = q.gcd(n);
                k += m;
                rounds += m;
                if rounds > max_rounds {
                    break 'outer;
                }
            }
            r *= 2;
        }
        if g == *n {
            // Backtrack one step at a time.
            loop {
                ys = (&ys * &ys + &c_big) % n;
                let diff = if x > ys { &x - &ys } else { &ys - &x };
                g = diff.gcd(n);
                if !g.is_one() {
                    break;
                }
            }
        }
        if !g.is_one() && g != *n {
            return Some(g);
        }
    }
    None
}

fn factor_recursive(n: BigUint, out: &mut Vec<BigUint>, cofactor: &mut BigUint) {
    if n.is_one() {
        return;
    }
    if is_prime(&n) {
        out.push(n);
        return;
    }
    match pollard_rho_brent(&n) {
        Some(d) => {
            let q = &n / &d;
            factor_recursive(d, out, cofactor);
            factor_recursive(q, out, cofactor);
        }
        None => *cofactor *= n,
    }
}

/// Factor m completely when possible. Trial division runs over all primes up
/// to `trial_bound` (callers pass n; every prime observed in the tables stays
/// below it), then Pollard rho takes over; whatever survives is reported as a
/// cofactor.
pub fn factorize(m: &BigInt, trial_bound: u64) -> Result<FactoredInteger> {
    if m.is_zero() {
        return Err(Error::FactorZero);
    }
    let sign: i8 = if m.sign() == num_bigint::Sign::Minus { -1 } else { 1 };
    let mut rest: BigUint = m.magnitude().clone();
    let mut factors: Vec<(BigUint, u32)> = Vec::new();
    let bound = trial_bound.max(2);

    let mut push = |p: BigUint, rest: &mut BigUint| {
        let mut e = 0u32;
        while (&*rest % &p).is_zero() {
            *rest /= &p;
            e += 1;
        }
        if e > 0 {
            factors.push((p, e));
        }
    };

    push(BigUint::from(2u32), &mut rest);
    let mut p = 3u64;
    while p <= bound && !rest.is_one() {
        if is_prime_u64(p) {
            push(BigUint::from(p), &mut rest);
        }
        p += 2;
    }

    let mut cofactor = BigUint::one();
    if !rest.is_one() {
        let mut primes = Vec::new();
        factor_recursive(rest, &mut primes, &mut cofactor);
        primes.sort();
        let mut i = 0;
        while i < primes.len() {
            let p = primes[i].clone();
            let e = primes[i..].iter().take_while(|q| **q == p).count() as u32;
            factors.push((p, e));
            i += e as usize;
        }
    }
    factors.sort();
    Ok(FactoredInteger { sign, factors, cofactor })
}

/// Splitting behavior of 3 in ℚ(√-n).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SplitType {
    Split,
    Inert,
    Ramified,
}

/// 3 splits iff -n ≡ 1 (mod 3), ramifies iff 3 | n, and is inert otherwise.
/// For n ≡ 11 (mod 24) this is always `Split`.
pub fn kronecker_minus_n_mod3(n: i64) -> SplitType {
    debug_assert!(n > 0);
    match n.rem_euclid(3) {
        0 => SplitType::Ramified,
        2 => SplitType::Split, // -n ≡ 1 (mod 3)
        _ => SplitType::Inert,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn primality_basics() {
        assert!(is_prime(&BigUint::from(2u32)));
        assert!(is_prime(&BigUint::from(227u32)));
        assert!(!is_prime(&BigUint::from(824464u32)));
        assert!(!is_prime(&BigUint::from(1u32)));
        // 2^89 - 1 is a Mersenne prime (above the u64 range).
        let m89 = (BigUint::one() << 89) - BigUint::one();
        assert!(is_prime(&m89));
        assert!(!is_prime(&(&m89 * BigUint::from(3u32))));
    }

    #[test]
    fn factorize_examples() {
        let f = factorize(&BigInt::from(824464), 227).unwrap();
        assert_eq!(f.sign(), 1);
        assert_eq!(f.factors(), &[(BigUint::from(2u32), 4), (BigUint::from(227u32), 2)]);
        assert!(f.is_complete());
        assert_eq!(f.reassemble(), BigInt::from(824464));

        // Δ(P_299) = -2^14·13^4·23^3·47^2.
        let val: BigInt = -(BigInt::from(2).pow(14)
            * BigInt::from(13).pow(4)
            * BigInt::from(23).pow(3)
            * BigInt::from(47).pow(2));
        let f = factorize(&val, 299).unwrap();
        assert_eq!(f.sign(), -1);
        assert_eq!(
            f.factors(),
            &[
                (BigUint::from(2u32), 14),
                (BigUint::from(13u32), 4),
                (BigUint::from(23u32), 3),
                (BigUint::from(47u32), 2)
            ]
        );

        let unit = factorize(&BigInt::one(), 2).unwrap();
        assert_eq!(unit.sign(), 1);
        assert!(unit.factors().is_empty());
        assert!(unit.is_complete());
        assert_eq!(unit.magnitude_string("·"), "1");

        assert!(matches!(factorize(&BigInt::zero(), 2), Err(Error::FactorZero)));
    }

    #[test]
    fn rho_cracks_a_semiprime_beyond_the_trial_bound() {
        // 1000003 · 1000033, both prime, both far above the trial bound.
        let v = BigInt::from(1000003u64) * BigInt::from(1000033u64);
        let f = factorize(&v, 100).unwrap();
        assert!(f.is_complete());
        assert_eq!(
            f.factors(),
            &[(BigUint::from(1000003u64), 1), (BigUint::from(1000033u64), 1)]
        );
    }

    #[test]
    fn splitting_of_three() {
        assert_eq!(kronecker_minus_n_mod3(11), SplitType::Split);
        assert_eq!(kronecker_minus_n_mod3(995), SplitType::Split);
        assert_eq!(kronecker_minus_n_mod3(21), SplitType::Ramified);
        assert_eq!(kronecker_minus_n_mod3(7), SplitType::Inert);
    }

    #[test]
    fn display_strings() {
        let f = FactoredInteger::from_prime_powers(1, &[(2, 4), (227, 2)]);
        assert_eq!(f.magnitude_string("·"), "2^4·227^2");
        assert_eq!(f.signed_string("·"), "+2^4·227^2");
        let g = FactoredInteger::from_prime_powers(-1, &[(31, 1), (2, 4), (5, 2)]);
        assert_eq!(g.signed_string("×"), "-2^4×5^2×31");
    }

    #[test]
    fn product_and_power() {
        let a = FactoredInteger::from_prime_powers(1, &[(2, 4), (227, 2)]);
        let b = FactoredInteger::from_prime_powers(-1, &[(2, 1), (5, 3)]);
        let ab = a.mul(&b);
        assert_eq!(ab.sign(), -1);
        assert_eq!(ab.exponent_of(2), 5);
        assert_eq!(ab.exponent_of(5), 3);
        assert_eq!(ab.exponent_of(227), 2);
        let sq = b.pow(2);
        assert_eq!(sq.sign(), 1);
        assert_eq!(sq.exponent_of(5), 6);
        assert_eq!(a.pow(0).reassemble(), BigInt::one());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(128))]

        #[test]
        fn reassembly_round_trip(v in -1_000_000_000_000i64..1_000_000_000_000i64) {
            prop_assume!(v != 0);
            let f = factorize(&BigInt::from(v), 1000).unwrap();
            prop_assert_eq!(f.reassemble(), BigInt::from(v));
            for (p, _) in f.factors() {
                prop_assert!(is_prime(p));
            }
        }
    }
}
