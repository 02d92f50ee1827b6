//! Integer lattice reduction and minimal-polynomial recovery.
//!
//! LLL is implemented over exact integers in the classical d_i / λ_{i,j}
//! bookkeeping (the Gram-Schmidt coefficients μ_{i,j} = λ_{i,j} / d_{j+1} are
//! carried as exact fractions with the Gram determinants as denominators), so
//! no floating-point approximation enters the reduction. At the dimensions
//! used here (≤ ~20) this is entirely affordable.
//!
//! `algdep` embeds the powers of a real number into the standard
//! integer-relation lattice and reads the candidate minimal polynomial off the
//! shortest reduced vector.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::numerics::{ApproxReal, PrecisionContext};
use crate::polyz::IntPolynomial;

/// Row-basis integer lattice. Rows must be of equal length and independent
/// (dependence is detected during reduction).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegerLattice {
    rows: Vec<Vec<BigInt>>,
}

impl IntegerLattice {
    pub fn new(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        if rows.is_empty() || rows[0].is_empty() {
            return Err(Error::RankDeficient);
        }
        let width = rows[0].len();
        if rows.iter().any(|r| r.len() != width) || rows.len() > width {
            return Err(Error::RankDeficient);
        }
        Ok(Self { rows })
    }

    pub fn rows(&self) -> &[Vec<BigInt>] {
        &self.rows
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.rows[0].len()
    }
}

/// Result of a reduction: the new basis together with the unimodular
/// transform that witnesses it spans the same lattice (transform · input =
/// reduced).
#[derive(Clone, Debug)]
pub struct ReducedLattice {
    pub basis: IntegerLattice,
    pub transform: Vec<Vec<BigInt>>,
}

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn rounded_div(num: &BigInt, den: &BigInt) -> BigInt {
    // Nearest integer to num/den for den > 0.
    let doubled: BigInt = num * 2 + den;
    Integer::div_floor(&doubled, &(den * 2))
}

/// LLL reduction with Lovász parameter delta = delta_num / delta_den ∈ (1/4, 1).
pub fn lll_reduce(lattice: &IntegerLattice, delta_num: u64, delta_den: u64) -> Result<ReducedLattice> {
    if !(4 * delta_num > delta_den && delta_num < delta_den) {
        return Err(Error::Domain { op: "lll_reduce", reason: "delta must lie in (1/4, 1)" });
    }
    let k = lattice.rank();
    let mut b = lattice.rows.clone();
    let mut u: Vec<Vec<BigInt>> = (0..k)
        .map(|i| (0..k).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();

    // Gram determinants d[0..=k] and scaled GS coefficients lam[i][j] (j < i).
    let mut d: Vec<BigInt> = vec![BigInt::one(); k + 1];
    let mut lam: Vec<Vec<BigInt>> = (0..k).map(|i| vec![BigInt::zero(); i]).collect();
    for i in 0..k {
        for j in 0..=i {
            let mut v = dot(&b[i], &b[j]);
            for l in 0..j {
                v = (&d[l + 1] * &v - &lam[i][l] * &lam[j][l]) / &d[l];
            }
            if j < i {
                lam[i][j] = v;
            } else {
                if v.sign() != num_bigint::Sign::Plus {
                    return Err(Error::RankDeficient);
                }
                d[i + 1] = v;
            }
        }
    }

    let delta_num = BigInt::from(delta_num);
    let delta_den = BigInt::from(delta_den);

    macro_rules! red {
        ($i:expr, $j:expr) => {{
            let (i, j) = ($i, $j);
            if &lam[i][j] * 2 > d[j + 1].clone().abs() || &lam[i][j] * 2 < -d[j + 1].clone().abs() {
                let q = rounded_div(&lam[i][j], &d[j + 1]);
                if !q.is_zero() {
                    for t in 0..b[i].len() {
                        let v = &b[i][t] - &q * &b[j][t];
                        b[i][t] = v;
                    }
                    for t in 0..k {
                        let v = &u[i][t] - &q * &u[j][t];
                        u[i][t] = v;
                    }
                    let v = &lam[i][j] - &q * &d[j + 1];
                    lam[i][j] = v;
                    for l in 0..j {
                        let v = &lam[i][l] - &q * &lam[j][l];
                        lam[i][l] = v;
                    }
                }
            }
        }};
    }

    let mut kk = 1usize;
    while kk < k {
        red!(kk, kk - 1);
        // Swap when the Lovász condition fails:
        // delta_den (d[kk+1] d[kk-1] + λ²) < delta_num d[kk]².
        let lam_kk = lam[kk][kk - 1].clone();
        let lhs = (&d[kk + 1] * &d[kk - 1] + &lam_kk * &lam_kk) * &delta_den;
        let rhs = &delta_num * &d[kk] * &d[kk];
        if lhs < rhs {
            b.swap(kk, kk - 1);
            u.swap(kk, kk - 1);
            for j in 0..kk - 1 {
                let tmp = lam[kk][j].clone();
                lam[kk][j] = lam[kk - 1][j].clone();
                lam[kk - 1][j] = tmp;
            }
            let big_b = (&d[kk - 1] * &d[kk + 1] + &lam_kk * &lam_kk) / &d[kk];
            for i in kk + 1..k {
                let t = lam[i][kk].clone();
                lam[i][kk] = (&d[kk + 1] * &lam[i][kk - 1] - &lam_kk * &t) / &d[kk];
                lam[i][kk - 1] = (&big_b * &t + &lam_kk * &lam[i][kk]) / &d[kk + 1];
            }
            d[kk] = big_b;
            kk = kk.saturating_sub(1).max(1);
        } else {
            for j in (0..kk.saturating_sub(1)).rev() {
                red!(kk, j);
            }
            kk += 1;
        }
    }

    Ok(ReducedLattice { basis: IntegerLattice { rows: b }, transform: u })
}

/// Exact check of the LLL output conditions via rational Gram-Schmidt:
/// size reduction |μ_{i,j}| ≤ 1/2 and the Lovász inequality for every
/// consecutive pair. Independent of the reduction bookkeeping above.
pub fn satisfies_lovasz(lattice: &IntegerLattice, delta_num: u64, delta_den: u64) -> bool {
    let k = lattice.rank();
    let rows: Vec<Vec<BigRational>> = lattice
        .rows
        .iter()
        .map(|r| r.iter().map(|c| BigRational::from_integer(c.clone())).collect())
        .collect();
    let rdot = |a: &[BigRational], b: &[BigRational]| -> BigRational {
        a.iter().zip(b).map(|(x, y)| x * y).sum()
    };
    let mut star: Vec<Vec<BigRational>> = Vec::with_capacity(k);
    let mut mu: Vec<Vec<BigRational>> = vec![vec![BigRational::zero(); k]; k];
    for i in 0..k {
        let mut v = rows[i].clone();
        for j in 0..i {
            let denom = rdot(&star[j], &star[j]);
            if denom.is_zero() {
                return false;
            }
            mu[i][j] = rdot(&rows[i], &star[j]) / denom;
            for t in 0..v.len() {
                let adj = &mu[i][j] * &star[j][t];
                v[t] = &v[t] - &adj;
            }
        }
        star.push(v);
    }
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    for i in 0..k {
        for j in 0..i {
            if mu[i][j].abs() > half {
                return false;
            }
        }
    }
    let delta = BigRational::new(BigInt::from(delta_num), BigInt::from(delta_den));
    for i in 1..k {
        let lhs = rdot(&star[i], &star[i]);
        let mu2 = &mu[i][i - 1] * &mu[i][i - 1];
        let rhs = (&delta - &mu2) * rdot(&star[i - 1], &star[i - 1]);
        if lhs < rhs {
            return false;
        }
    }
    true
}

fn row_norm_sqr(row: &[BigInt]) -> BigInt {
    row.iter().map(|c| c * c).sum()
}

/// Minimal-polynomial candidate for x of degree at most `degree`.
///
/// Builds the lattice with rows (e_i | ⌊C·x^i⌉), C = 2^(bits-16), reduces it,
/// and returns the first (shortest) candidate whose polynomial actually
/// evaluates below 2^(-bits/2) at x, normalized to primitive form with a
/// positive leading coefficient. No sufficiently small relation means the
/// caller has to retry with more precision.
pub fn algdep(x: &ApproxReal, degree: usize, ctx: PrecisionContext) -> Result<IntPolynomial> {
    if degree == 0 {
        return Err(Error::Domain { op: "algdep", reason: "degree must be at least 1" });
    }
    let bits = ctx.bits();
    let scale = ApproxReal::pow2(bits as i32 - 16, ctx);

    let mut rows = Vec::with_capacity(degree + 1);
    let mut xpow = ApproxReal::one(ctx);
    for i in 0..=degree {
        if i > 0 {
            xpow = xpow.mul(x, ctx)?;
        }
        let scaled = xpow.mul(&scale, ctx)?.to_rational().round().to_integer();
        let mut row = vec![BigInt::zero(); degree + 2];
        row[i] = BigInt::one();
        row[degree + 1] = scaled;
        rows.push(row);
    }

    let reduced = lll_reduce(&IntegerLattice::new(rows)?, 99, 100)?;
    let mut candidates: Vec<&Vec<BigInt>> = reduced.basis.rows().iter().collect();
    candidates.sort_by_key(|r| row_norm_sqr(r));

    let threshold = ApproxReal::pow2(-((bits / 2) as i32), ctx);
    for row in candidates {
        let poly = IntPolynomial::from_coeffs(row[..=degree].to_vec()).normalized();
        match poly.degree() {
            None | Some(0) => continue,
            Some(_) => {}
        }
        let residual = poly.evaluate_real(x, ctx)?.abs();
        if residual.cmp(&threshold) == std::cmp::Ordering::Less {
            return Ok(poly);
        }
    }
    Err(Error::NeedsMorePrecision(format!(
        "no integer relation of degree {degree} at {bits} bits"
    )))
}
