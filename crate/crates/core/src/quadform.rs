//! Primitive binary quadratic forms of discriminant -n and their class group.
//!
//! Composition follows the classical Gauss/Dirichlet algorithm (solve the gcd
//! congruences, then reduce); at the class numbers that arise here (h ≤ 20)
//! nothing faster is warranted. Invariant factors are found by brute force:
//! take a maximal-order element, split it off, recurse on the quotient.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::numerics::{ApproxComplex, ApproxReal, PrecisionContext};

/// Primitive positive-definite binary quadratic form (a, b, c), ax² + bxy + cy².
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct QuadForm {
    a: i64,
    b: i64,
    c: i64,
}

fn gcd3(a: i64, b: i64, c: i64) -> i64 {
    fn gcd(mut x: i64, mut y: i64) -> i64 {
        x = x.abs();
        y = y.abs();
        while y != 0 {
            (x, y) = (y, x % y);
        }
        x
    }
    gcd(gcd(a, b), c)
}

/// Extended gcd: returns (g, x, y) with x·a + y·b = g ≥ 0.
fn xgcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut old_r, mut r) = (a, b);
    let (mut old_x, mut x) = (1i128, 0i128);
    let (mut old_y, mut y) = (0i128, 1i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_x, x) = (x, old_x - q * x);
        (old_y, y) = (y, old_y - q * y);
    }
    if old_r < 0 {
        (-old_r, -old_x, -old_y)
    } else {
        (old_r, old_x, old_y)
    }
}

impl QuadForm {
    pub fn new(a: i64, b: i64, c: i64) -> Result<Self> {
        let invalid = |reason| Error::InvalidForm { a, b, c, reason };
        if a <= 0 {
            return Err(invalid("leading coefficient must be positive"));
        }
        let disc = (b as i128) * (b as i128) - 4 * (a as i128) * (c as i128);
        if disc >= 0 {
            return Err(invalid("form is not positive definite"));
        }
        if gcd3(a, b, c) != 1 {
            return Err(invalid("form is not primitive"));
        }
        Ok(Self { a, b, c })
    }

    pub fn a(&self) -> i64 {
        self.a
    }

    pub fn b(&self) -> i64 {
        self.b
    }

    pub fn c(&self) -> i64 {
        self.c
    }

    /// b² - 4ac, always negative.
    pub fn discriminant(&self) -> i64 {
        ((self.b as i128) * (self.b as i128) - 4 * (self.a as i128) * (self.c as i128)) as i64
    }

    /// The principal form (1, 1, (n+1)/4) of discriminant -n, n ≡ 3 (mod 4).
    pub fn principal(n: i64) -> Result<Self> {
        Self::new(1, 1, (n + 1) / 4)
    }

    pub fn is_reduced(&self) -> bool {
        let (a, b, c) = (self.a, self.b, self.c);
        b.abs() <= a && a <= c && (b >= 0 || (b.abs() < a && a < c))
    }

    /// The unique reduced form equivalent to this one.
    pub fn reduce(&self) -> Self {
        let (mut a, mut b, mut c) = (self.a as i128, self.b as i128, self.c as i128);
        loop {
            // Normalize b into (-a, a].
            if b > a || b <= -a {
                let two_a = 2 * a;
                let mut r = b.rem_euclid(two_a);
                if r > a {
                    r -= two_a;
                }
                let t = (r - b) / two_a;
                c = a * t * t + b * t + c;
                b = r;
            }
            if a > c {
                (a, b, c) = (c, -b, a);
            } else {
                break;
            }
        }
        if a == c && b < 0 {
            b = -b;
        }
        Self { a: a as i64, b: b as i64, c: c as i64 }
    }

    /// Class inverse: (a, -b, c), reduced.
    pub fn inverse(&self) -> Self {
        Self { a: self.a, b: -self.b, c: self.c }.reduce()
    }

    /// Gauss composition; returns the reduced representative of the product class.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.discriminant() != other.discriminant() {
            return Err(Error::DiscriminantMismatch(self.discriminant(), other.discriminant()));
        }
        let (f1, f2) = if self.a > other.a { (other, self) } else { (self, other) };
        let (a1, b1, c1) = (f1.a as i128, f1.b as i128, f1.c as i128);
        let (a2, b2, c2) = (f2.a as i128, f2.b as i128, f2.c as i128);
        let _ = c1;
        let s = (b1 + b2) / 2;
        let m = b2 - s; // (b2 - b1) / 2

        let (d, y1) = if a2 % a1 == 0 {
            (a1, 0)
        } else {
            let (d, u, _v) = xgcd(a2, a1);
            (d, u)
        };
        let (d1, x2, y2) = if s % d == 0 {
            (d, 0, -1)
        } else {
            let (d1, u, v) = xgcd(s, d);
            (d1, u, -v)
        };
        let v1 = a1 / d1;
        let v2 = a2 / d1;
        let r = (y1 * y2 * m - x2 * c2).rem_euclid(v1);
        let a3 = v1 * v2;
        let b3 = b2 + 2 * v2 * r;
        let c3_num = c2 * d1 + r * (b2 + v2 * r);
        debug_assert_eq!(c3_num % v1, 0);
        let c3 = c3_num / v1;
        Ok(Self { a: a3 as i64, b: b3 as i64, c: c3 as i64 }.reduce())
    }

    /// CM point τ = (-b + i√n) / (2a) in the upper half-plane.
    pub fn cm_point(&self, ctx: PrecisionContext) -> Result<CMPoint> {
        let n = -self.discriminant();
        let two_a = ApproxReal::from_i64(2 * self.a, ctx);
        let re = ApproxReal::from_i64(-self.b, ctx).div(&two_a, ctx)?;
        let im = ApproxReal::from_i64(n, ctx).sqrt_pos(ctx)?.div(&two_a, ctx)?;
        Ok(CMPoint { tau: ApproxComplex::new(re, im), form: *self })
    }
}

impl std::fmt::Display for QuadForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}

/// τ in the upper half-plane, tagged with the reduced form it came from.
#[derive(Clone, Debug)]
pub struct CMPoint {
    tau: ApproxComplex,
    form: QuadForm,
}

impl CMPoint {
    pub fn tau(&self) -> &ApproxComplex {
        &self.tau
    }

    pub fn form(&self) -> &QuadForm {
        &self.form
    }
}

/// Checks n > 0 and n ≡ 11 (mod 24); everything downstream assumes it.
pub fn check_supported(n: i64) -> Result<()> {
    if n > 0 && n % 24 == 11 {
        Ok(())
    } else {
        Err(Error::UnsupportedDiscriminant(n))
    }
}

/// All primitive reduced forms of discriminant -n, sorted by (a, b).
pub fn enumerate_reduced(n: i64) -> Result<Vec<QuadForm>> {
    check_supported(n)?;
    let mut forms = Vec::new();
    let mut a = 1i64;
    while 3 * a * a <= n {
        for b in (-a + 1)..=a {
            if b.rem_euclid(2) == 0 {
                continue; // b² ≡ -n (mod 4) forces b odd for n ≡ 3 (mod 4)
            }
            let num = (b as i128) * (b as i128) + n as i128;
            let den = 4 * a as i128;
            if num % den != 0 {
                continue;
            }
            let c = (num / den) as i64;
            if c < a {
                continue;
            }
            if b < 0 && (-b == a || a == c) {
                continue; // boundary twin; keep the b ≥ 0 representative
            }
            if gcd3(a, b, c) != 1 {
                continue;
            }
            forms.push(QuadForm { a, b, c });
        }
        a += 1;
    }
    forms.sort();
    Ok(forms)
}

/// 2^(t-1) ambiguous classes predicted by genus theory for squarefree n.
pub fn genus_two_torsion(n: i64) -> Result<i64> {
    check_supported(n)?;
    let mut m = n;
    let mut t = 0;
    let mut p = 2i64;
    while p * p <= m {
        if m % p == 0 {
            t += 1;
            m /= p;
            if m % p == 0 {
                return Err(Error::NotSquarefree(n));
            }
        }
        p += 1;
    }
    if m > 1 {
        t += 1;
    }
    Ok(1 << (t - 1))
}

/// The ideal class group of the order of discriminant -n, with its full
/// composition table and invariant-factor decomposition d_1 | d_2 | ...
#[derive(Clone, Debug)]
pub struct ClassGroup {
    n: i64,
    forms: Vec<QuadForm>,
    identity: usize,
    table: Vec<Vec<usize>>,
    invariant_factors: Vec<u64>,
}

impl ClassGroup {
    pub fn new(n: i64) -> Result<Self> {
        let forms = enumerate_reduced(n)?;
        let index: HashMap<QuadForm, usize> =
            forms.iter().enumerate().map(|(i, f)| (*f, i)).collect();
        let identity_form = QuadForm::principal(n)?;
        let identity = *index
            .get(&identity_form)
            .ok_or_else(|| Error::Inconsistency(format!("principal form missing for n={n}")))?;
        let h = forms.len();
        let mut table = vec![vec![0usize; h]; h];
        for i in 0..h {
            for j in i..h {
                let prod = forms[i].compose(&forms[j])?;
                let k = *index.get(&prod).ok_or_else(|| {
                    Error::Inconsistency(format!("composition left the reduced set for n={n}"))
                })?;
                table[i][j] = k;
                table[j][i] = k;
            }
        }
        let invariant_factors = invariant_factors(&table, identity);
        Ok(Self { n, forms, identity, table, invariant_factors })
    }

    pub fn n(&self) -> i64 {
        self.n
    }

    pub fn order(&self) -> usize {
        self.forms.len()
    }

    pub fn forms(&self) -> &[QuadForm] {
        &self.forms
    }

    pub fn identity(&self) -> &QuadForm {
        &self.forms[self.identity]
    }

    /// d_1 | d_2 | ... with product h_n; [1] for the trivial group.
    pub fn invariant_factors(&self) -> &[u64] {
        &self.invariant_factors
    }

    pub fn is_cyclic(&self) -> bool {
        self.invariant_factors.len() == 1
    }

    pub fn compose_indices(&self, i: usize, j: usize) -> usize {
        self.table[i][j]
    }

    pub fn element_order(&self, i: usize) -> u64 {
        let mut k = i;
        let mut ord = 1u64;
        while k != self.identity {
            k = self.table[k][i];
            ord += 1;
        }
        ord
    }

    /// |Cl(n)[2]|: classes that square to the identity, counted directly.
    pub fn two_torsion_count(&self) -> usize {
        (0..self.forms.len()).filter(|&i| self.table[i][i] == self.identity).count()
    }
}

/// Invariant factors of an abelian group given by its composition table:
/// repeatedly split off a maximal-order cyclic summand.
fn invariant_factors(table: &Vec<Vec<usize>>, identity: usize) -> Vec<u64> {
    let k = table.len();
    if k == 1 {
        return vec![1];
    }
    let order_of = |i: usize| -> u64 {
        let mut x = i;
        let mut ord = 1u64;
        while x != identity {
            x = table[x][i];
            ord += 1;
        }
        ord
    };
    let (gen, max_ord) = (0..k).map(|i| (i, order_of(i))).max_by_key(|&(_, o)| o).unwrap();
    if max_ord as usize == k {
        return vec![max_ord];
    }

    // Subgroup generated by the maximal-order element.
    let mut subgroup = vec![identity];
    let mut x = gen;
    while x != identity {
        subgroup.push(x);
        x = table[x][gen];
    }
    let in_subgroup: Vec<bool> = {
        let mut v = vec![false; k];
        for &s in &subgroup {
            v[s] = true;
        }
        v
    };
    let inverse_of = |i: usize| (0..k).find(|&j| table[i][j] == identity).unwrap();

    // Quotient group on coset representatives.
    let mut coset_of = vec![usize::MAX; k];
    let mut reps = Vec::new();
    for i in 0..k {
        if coset_of[i] != usize::MAX {
            continue;
        }
        let rep_id = reps.len();
        reps.push(i);
        for j in 0..k {
            if in_subgroup[table[j][inverse_of(i)]] {
                coset_of[j] = rep_id;
            }
        }
    }
    let q = reps.len();
    let mut qtable = vec![vec![0usize; q]; q];
    for (i, &ri) in reps.iter().enumerate() {
        for (j, &rj) in reps.iter().enumerate() {
            qtable[i][j] = coset_of[table[ri][rj]];
        }
    }
    let mut factors = invariant_factors(&qtable, coset_of[identity]);
    factors.retain(|&f| f != 1);
    factors.push(max_ord);
    factors
}
