//! Finite fields `F_{p^f}` with a distinguished primitive `n`-th root of
//! unity, and the reduction map `Z[ζ_n] → F_{p^f}` sending `ζ_n` to it.
//!
//! Picking the root `ζ′` is how a prime ideal above `p` is chosen: once `ζ′`
//! is fixed, reduction is evaluation of power-basis representatives at `ζ′`.
//! The construction is deterministic. The modulus is the least monic
//! irreducible polynomial of degree `f` and `ζ′ = g^{(q−1)/n}` for the least
//! generator `g` of the multiplicative group, both under the enumeration
//! order of [`FieldCtx::element_from_index`].

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::cyclotomic::CycInt;
use crate::cycmatrix::CycMatrix;
use crate::error::{Error, Result};
use crate::linalg::FqMatrix;
use crate::numth::{euler_phi, factorize_u64, is_prime_u64, multiplicative_order};

/// A field element, packed as `Σ c_i p^i` over its coordinates in the basis
/// `1, x, …, x^{f−1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Fe(u64);

impl Fe {
    pub const ZERO: Fe = Fe(0);
    pub const ONE: Fe = Fe(1);

    pub fn index(self) -> u64 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// Residue degree, number of primes above `p` and ramification index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplittingData {
    pub f: u64,
    pub g: u64,
    pub e: u64,
}

pub fn splitting_data(p: u64, n: u64) -> Result<SplittingData> {
    if n % p == 0 {
        return Err(Error::Ramified { p, n });
    }
    let f = multiplicative_order(p, n)?;
    Ok(SplittingData {
        f,
        g: euler_phi(n) / f,
        e: 1,
    })
}

/// `F_{p^f}` with `f = ord_n(p)` and a fixed element `ζ′` of order `n`.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldCtx {
    p: u64,
    f: usize,
    q: u64,
    n: u64,
    modulus: Vec<u64>,
    zeta: Fe,
    zeta_powers: Vec<Fe>,
    root_exponent: u64,
}

/// Printable provenance of a [`FieldCtx`]: enough to rebuild the reduction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSummary {
    pub p: u64,
    pub f: u64,
    pub q: u64,
    pub n: u64,
    /// Monic modulus, lowest degree first.
    pub modulus: Vec<u64>,
    /// Coordinates of `ζ′`, lowest degree first.
    pub zeta_prime: Vec<u64>,
    /// `ζ′ = ζ₀^u` for the canonical root `ζ₀`.
    pub root_exponent: u64,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "FieldCtx(F_{}^{}, modulus {:?}, zeta' {:?}, n = {})",
            self.p,
            self.f,
            self.modulus,
            self.coords(self.zeta),
            self.n
        )
    }
}

// ---- polynomials over Z/p, lowest degree first ----

fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn poly_rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    trim(&mut r);
    let dm = m.len() - 1;
    let inv_lead = pow_mod(m[dm], p - 2, p);
    while r.len() > dm {
        let top = r.len() - 1;
        let c = mul_mod(r[top], inv_lead, p);
        for (j, &mj) in m.iter().enumerate() {
            let idx = top - dm + j;
            r[idx] = (r[idx] + p - mul_mod(c, mj, p)) % p;
        }
        trim(&mut r);
    }
    r
}

fn poly_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + mul_mod(x, y, p)) % p;
        }
    }
    trim(&mut out);
    out
}

fn poly_powmod(base: &[u64], mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
    let mut acc = vec![1u64];
    let mut b = poly_rem(base, m, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_rem(&poly_mul(&acc, &b, p), m, p);
        }
        b = poly_rem(&poly_mul(&b, &b, p), m, p);
        e >>= 1;
    }
    acc
}

fn poly_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let (mut a, mut b) = (a.to_vec(), b.to_vec());
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let r = poly_rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

/// Ben-Or test: `m` of degree `d` is irreducible iff
/// `gcd(x^{p^i} − x, m) = 1` for `1 ≤ i ≤ d/2`.
pub fn is_irreducible(m: &[u64], p: u64) -> bool {
    let d = m.len() - 1;
    if d == 0 {
        return false;
    }
    let x = vec![0, 1];
    let mut frob = x.clone();
    for _ in 0..d / 2 {
        frob = poly_powmod(&frob, p, m, p);
        let mut diff = frob.clone();
        diff.resize(diff.len().max(2), 0);
        diff[1] = (diff[1] + p - 1) % p;
        trim(&mut diff);
        if poly_gcd(m, &diff, p).len() != 1 {
            return false;
        }
    }
    true
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(a: u64, e: u64, p: u64) -> u64 {
    crate::numth::pow_mod_u64(a, e, p)
}

impl FieldCtx {
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.f
    }

    pub fn order(&self) -> u64 {
        self.q
    }

    pub fn conductor(&self) -> u64 {
        self.n
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn zeta(&self) -> Fe {
        self.zeta
    }

    pub fn root_exponent(&self) -> u64 {
        self.root_exponent
    }

    /// `ζ′^e` for any integer `e`.
    pub fn zeta_pow(&self, e: i64) -> Fe {
        self.zeta_powers[e.rem_euclid(self.n as i64) as usize]
    }

    pub fn summary(&self) -> FieldSummary {
        FieldSummary {
            p: self.p,
            f: self.f as u64,
            q: self.q,
            n: self.n,
            modulus: self.modulus.clone(),
            zeta_prime: self.coords(self.zeta),
            root_exponent: self.root_exponent,
        }
    }

    /// Element with packed index `t ∈ [0, q)`; also the canonical
    /// enumeration order used by the generator search.
    pub fn element_from_index(&self, t: u64) -> Fe {
        assert!(t < self.q);
        Fe(t)
    }

    pub fn coords(&self, a: Fe) -> Vec<u64> {
        let mut v = a.0;
        (0..self.f)
            .map(|_| {
                let d = v % self.p;
                v /= self.p;
                d
            })
            .collect()
    }

    pub fn from_coords(&self, c: &[u64]) -> Fe {
        assert!(c.len() <= self.f);
        Fe(c.iter().rev().fold(0, |acc, &d| acc * self.p + d % self.p))
    }

    pub fn from_i64(&self, v: i64) -> Fe {
        Fe(v.rem_euclid(self.p as i64) as u64)
    }

    pub fn from_bigint(&self, v: &BigInt) -> Fe {
        let r = v.mod_floor(&BigInt::from(self.p));
        Fe(r.to_u64().unwrap())
    }

    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        if self.f == 1 {
            let s = a.0 + b.0;
            return Fe(if s >= self.p { s - self.p } else { s });
        }
        if self.p == 2 {
            return Fe(a.0 ^ b.0);
        }
        let (mut x, mut y, mut out, mut place) = (a.0, b.0, 0, 1);
        for _ in 0..self.f {
            out += ((x % self.p + y % self.p) % self.p) * place;
            x /= self.p;
            y /= self.p;
            place *= self.p;
        }
        Fe(out)
    }

    pub fn neg(&self, a: Fe) -> Fe {
        if self.p == 2 {
            return a;
        }
        if self.f == 1 {
            return Fe(if a.0 == 0 { 0 } else { self.p - a.0 });
        }
        let (mut x, mut out, mut place) = (a.0, 0, 1);
        for _ in 0..self.f {
            out += ((self.p - x % self.p) % self.p) * place;
            x /= self.p;
            place *= self.p;
        }
        Fe(out)
    }

    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        if a.0 == 0 || b.0 == 0 {
            return Fe::ZERO;
        }
        if self.f == 1 {
            return Fe(mul_mod(a.0, b.0, self.p));
        }
        let prod = poly_mul(&self.coords(a), &self.coords(b), self.p);
        self.from_coords(&poly_rem(&prod, &self.modulus, self.p))
    }

    pub fn pow(&self, a: Fe, mut e: u64) -> Fe {
        let mut acc = Fe::ONE;
        let mut b = a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; panics on zero.
    pub fn inv(&self, a: Fe) -> Fe {
        assert!(!a.is_zero(), "inverse of zero");
        self.pow(a, self.q - 2)
    }

    fn is_generator(&self, g: Fe, prime_divisors: &[u64]) -> bool {
        !g.is_zero()
            && prime_divisors
                .iter()
                .all(|&r| self.pow(g, (self.q - 1) / r) != Fe::ONE)
    }

    /// The same field with `ζ′` replaced by `ζ′^u`, another root of `Φ_n`.
    pub fn with_root_exponent(&self, u: u64) -> Result<FieldCtx> {
        if u.gcd(&self.n) != 1 {
            return Err(Error::NotCoprime {
                value: u,
                modulus: self.n,
            });
        }
        let u = u % self.n;
        let mut ctx = self.clone();
        ctx.zeta = self.zeta_pow(u as i64);
        ctx.zeta_powers = (0..self.n).map(|e| self.zeta_pow((e * u) as i64)).collect();
        ctx.root_exponent = (self.root_exponent * u) % self.n;
        Ok(ctx)
    }

    /// Every root of `Φ_n` in the field, as reduction contexts.
    pub fn conjugate_contexts(&self) -> Vec<FieldCtx> {
        (1..=self.n)
            .filter(|u| u.gcd(&self.n) == 1)
            .map(|u| self.with_root_exponent(u).unwrap())
            .collect()
    }

    /// `ρ(a) = rep(a)(ζ′)`.
    pub fn reduce_element(&self, a: &CycInt) -> Result<Fe> {
        if a.conductor() as u64 != self.n {
            return Err(Error::ConductorMismatch(a.conductor(), self.n as u32));
        }
        Ok(a
            .coords()
            .iter()
            .enumerate()
            .fold(Fe::ZERO, |acc, (e, c)| {
                if c.is_zero() {
                    acc
                } else {
                    self.add(acc, self.mul(self.from_bigint(c), self.zeta_powers[e]))
                }
            }))
    }

    /// Entry-wise reduction. Matrices with known exponents skip the
    /// evaluation.
    pub fn reduce_matrix(&self, m: &CycMatrix) -> Result<FqMatrix> {
        if m.conductor() as u64 != self.n {
            return Err(Error::ConductorMismatch(m.conductor(), self.n as u32));
        }
        let data = match m.exponents() {
            Some(exps) => exps.iter().map(|&e| self.zeta_pow(e as i64)).collect(),
            None => m
                .entries()
                .iter()
                .map(|a| self.reduce_element(a))
                .collect::<Result<Vec<_>>>()?,
        };
        Ok(FqMatrix::new(m.rows(), m.cols(), data))
    }
}

/// Build `F_{p^f}`, `f = ord_n(p)`, with its canonical order-`n` root.
pub fn build_field(p: u64, n: u64) -> Result<FieldCtx> {
    if !is_prime_u64(p) {
        return Err(Error::NotPrime(p));
    }
    if n == 0 {
        return Err(Error::PreconditionViolated("conductor must be positive".into()));
    }
    let split = splitting_data(p, n)?;
    let f = split.f as usize;
    let q = (p as u128).pow(f as u32);
    if q > (1u128 << 62) {
        return Err(Error::BudgetExceeded(format!(
            "field F_{p}^{f} is too large to represent"
        )));
    }
    let q = q as u64;

    // least monic irreducible of degree f: x^f + Σ c_i x^i, ordered by Σ c_i p^i
    let modulus = (0..q)
        .map(|t| {
            let mut m: Vec<u64> = (0..f).map(|i| (t / p.pow(i as u32)) % p).collect();
            m.push(1);
            m
        })
        .find(|m| is_irreducible(m, p))
        .expect("irreducible polynomials of every degree exist");

    let mut ctx = FieldCtx {
        p,
        f,
        q,
        n,
        modulus,
        zeta: Fe::ONE,
        zeta_powers: Vec::new(),
        root_exponent: 1,
    };
    let prime_divisors: Vec<u64> = factorize_u64(q - 1).into_iter().map(|(r, _)| r).collect();
    let generator = (1..q)
        .map(Fe)
        .find(|&g| ctx.is_generator(g, &prime_divisors))
        .expect("the multiplicative group is cyclic");
    ctx.zeta = ctx.pow(generator, (q - 1) / n);
    let mut powers = Vec::with_capacity(n as usize);
    let mut cur = Fe::ONE;
    for _ in 0..n {
        powers.push(cur);
        cur = ctx.mul(cur, ctx.zeta);
    }
    ctx.zeta_powers = powers;
    Ok(ctx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclotomic::cyclotomic_poly;
    use proptest::prelude::*;

    fn element_order(ctx: &FieldCtx, a: Fe) -> u64 {
        let mut cur = a;
        let mut k = 1;
        while cur != Fe::ONE {
            cur = ctx.mul(cur, a);
            k += 1;
        }
        k
    }

    #[test]
    fn field_examples() {
        let f64_ = build_field(2, 9).unwrap();
        assert_eq!((f64_.degree(), f64_.order()), (6, 64));
        assert_eq!(f64_.modulus(), &[1, 1, 0, 0, 0, 0, 1]);

        let f11 = build_field(11, 5).unwrap();
        assert_eq!((f11.degree(), f11.order()), (1, 11));
        assert_eq!(element_order(&f11, f11.zeta()), 5);

        let f29 = build_field(29, 7).unwrap();
        assert_eq!((f29.degree(), f29.order()), (1, 29));

        let f256 = build_field(2, 17).unwrap();
        assert_eq!(f256.modulus(), &[1, 1, 0, 1, 1, 0, 0, 0, 1]);

        assert_eq!(build_field(3, 12), Err(Error::Ramified { p: 3, n: 12 }));
        assert_eq!(build_field(9, 5), Err(Error::NotPrime(9)));
    }

    #[test]
    fn splitting_examples() {
        let s = |p, n| splitting_data(p, n).unwrap();
        assert_eq!(s(11, 5), SplittingData { f: 1, g: 4, e: 1 });
        assert_eq!(s(2, 9), SplittingData { f: 6, g: 1, e: 1 });
        assert_eq!(s(2, 17), SplittingData { f: 8, g: 2, e: 1 });
        assert_eq!(splitting_data(7, 14), Err(Error::Ramified { p: 7, n: 14 }));
    }

    #[test]
    fn irreducibility_by_exhaustion() {
        // compare against "no root and no quadratic factor" for degree ≤ 3
        for p in [2u64, 3, 5] {
            for t in 0..p.pow(3) {
                let m = vec![t % p, (t / p) % p, (t / (p * p)) % p, 1];
                let has_root = (0..p).any(|x| {
                    m.iter()
                        .rev()
                        .fold(0, |acc, &c| (acc * x + c) % p)
                        == 0
                });
                assert_eq!(is_irreducible(&m, p), !has_root, "p={p} m={m:?}");
            }
        }
    }

    fn small_field(p: u64, n: u64) -> bool {
        let f = splitting_data(p, n).unwrap().f;
        (p as f64).powi(f as i32) <= 1e12
    }

    #[test]
    fn zeta_has_exact_order_and_is_root_of_phi() {
        for n in 2u64..=24 {
            for p in [2u64, 3, 5, 7, 11, 13, 29, 31] {
                if n % p == 0 || !small_field(p, n) {
                    continue;
                }
                let ctx = build_field(p, n).unwrap();
                assert_eq!(element_order(&ctx, ctx.zeta()), n, "p={p} n={n}");
                let phi = cyclotomic_poly(n as u32);
                let value = phi.coeffs().iter().rev().fold(Fe::ZERO, |acc, c| {
                    ctx.add(ctx.mul(acc, ctx.zeta()), ctx.from_bigint(c))
                });
                assert!(value.is_zero());
                assert_eq!(
                    ctx.conjugate_contexts().len() as u64,
                    euler_phi(n),
                    "f·g roots"
                );
            }
        }
    }

    #[test]
    fn reduction_examples() {
        let ctx = build_field(29, 7).unwrap();
        assert_eq!(ctx.reduce_element(&CycInt::one(7)).unwrap(), Fe::ONE);
        assert_eq!(ctx.reduce_element(&CycInt::zero(7)).unwrap(), Fe::ZERO);
        for e in -20..20 {
            assert_eq!(
                ctx.reduce_element(&CycInt::from_power(7, e)).unwrap(),
                ctx.pow(ctx.zeta(), e.rem_euclid(7) as u64)
            );
        }
        assert_eq!(
            ctx.reduce_element(&CycInt::one(5)),
            Err(Error::ConductorMismatch(5, 7))
        );
    }

    #[test]
    fn field_axioms_in_extension() {
        let ctx = build_field(3, 13).unwrap(); // F_27
        assert_eq!(ctx.order(), 27);
        for a in 0..27 {
            let a = ctx.element_from_index(a);
            assert_eq!(ctx.add(a, ctx.neg(a)), Fe::ZERO);
            if !a.is_zero() {
                assert_eq!(ctx.mul(a, ctx.inv(a)), Fe::ONE);
            }
            for b in 0..27 {
                let b = ctx.element_from_index(b);
                assert_eq!(ctx.mul(a, b), ctx.mul(b, a));
                assert_eq!(ctx.sub(ctx.add(a, b), b), a);
            }
        }
    }

    proptest! {
        #[test]
        fn reduction_is_a_ring_homomorphism(
            n in prop::sample::select(vec![5u32, 7, 8, 9, 12, 13]),
            p in prop::sample::select(vec![2u64, 3, 11, 29, 31, 41]),
            a in prop::collection::vec(-20i64..20, 12),
            b in prop::collection::vec(-20i64..20, 12),
        ) {
            prop_assume!(n as u64 % p != 0 && small_field(p, n as u64));
            let ctx = build_field(p, n as u64).unwrap();
            let phi = euler_phi(n as u64) as usize;
            let mk = |v: &[i64]| CycInt::from_coords(n, v[..phi].iter().map(|&c| BigInt::from(c)).collect()).unwrap();
            let (x, y) = (mk(&a), mk(&b));
            let rx = ctx.reduce_element(&x).unwrap();
            let ry = ctx.reduce_element(&y).unwrap();
            prop_assert_eq!(ctx.reduce_element(&(&x + &y)).unwrap(), ctx.add(rx, ry));
            prop_assert_eq!(ctx.reduce_element(&(&x * &y)).unwrap(), ctx.mul(rx, ry));
        }
    }
}
