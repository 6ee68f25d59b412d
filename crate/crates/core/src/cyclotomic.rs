//! Exact arithmetic in the ring of integers `Z[ζ_n]` of the `n`-th
//! cyclotomic field.
//!
//! Elements are stored in the power basis `1, ζ, …, ζ^{φ(n)−1}`, i.e. as
//! integer polynomials reduced modulo `Φ_n`. The representation is canonical,
//! so structural equality is ring equality. The norm down to `Q` is the
//! resultant `Res(Φ_n, a)`, computed with a subresultant remainder sequence.

use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numth::{divisors, euler_phi, mobius};

/// Dense integer polynomial, lowest degree first, without trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::from_i64(&[1])
    }

    /// `x^d − 1`
    pub fn x_pow_minus_one(d: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); d + 1];
        coeffs[0] = BigInt::from(-1);
        coeffs[d] += 1;
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigInt> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(|c| c.is_one())
    }

    pub fn content(&self) -> BigInt {
        self.coeffs
            .iter()
            .fold(BigInt::zero(), |acc, c| acc.gcd(c))
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    fn scale(&self, s: &BigInt) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    fn div_exact_scalar(&self, s: &BigInt) -> IntPoly {
        IntPoly::new(
            self.coeffs
                .iter()
                .map(|c| {
                    debug_assert!((c % s).is_zero());
                    c / s
                })
                .collect(),
        )
    }

    /// Quotient and remainder by a monic divisor.
    pub fn div_rem_monic(&self, divisor: &IntPoly) -> (IntPoly, IntPoly) {
        assert!(divisor.is_monic(), "divisor must be monic");
        let dd = divisor.degree().unwrap();
        let Some(sd) = self.degree() else {
            return (IntPoly::zero(), IntPoly::zero());
        };
        if sd < dd {
            return (IntPoly::zero(), self.clone());
        }
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigInt::zero(); sd - dd + 1];
        for i in (dd..=sd).rev() {
            let c = std::mem::take(&mut rem[i]);
            if c.is_zero() {
                continue;
            }
            for (j, d) in divisor.coeffs[..dd].iter().enumerate() {
                rem[i - dd + j] -= &c * d;
            }
            quot[i - dd] = c;
        }
        rem.truncate(dd);
        (IntPoly::new(quot), IntPoly::new(rem))
    }

    /// `lc(d)^{deg self − deg d + 1} · self mod d`
    pub fn pseudo_rem(&self, divisor: &IntPoly) -> IntPoly {
        let dd = divisor.degree().expect("pseudo-division by zero");
        let Some(sd) = self.degree() else {
            return IntPoly::zero();
        };
        if sd < dd {
            return self.clone();
        }
        let lc = divisor.leading().unwrap();
        let mut rem = self.clone();
        let mut steps = sd - dd + 1;
        while let Some(rd) = rem.degree().filter(|&rd| rd >= dd) {
            let top = rem.leading().unwrap().clone();
            let mut next: Vec<BigInt> = rem.coeffs.iter().map(|c| c * lc).collect();
            for (j, d) in divisor.coeffs.iter().enumerate() {
                next[rd - dd + j] -= &top * d;
            }
            rem = IntPoly::new(next);
            steps -= 1;
        }
        if steps > 0 {
            rem.scale(&num_traits::pow(lc.clone(), steps))
        } else {
            rem
        }
    }
}

impl Add for &IntPoly {
    type Output = IntPoly;
    fn add(self, rhs: &IntPoly) -> IntPoly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        let zero = BigInt::zero();
        IntPoly::new(
            (0..len)
                .map(|i| {
                    self.coeffs.get(i).unwrap_or(&zero) + rhs.coeffs.get(i).unwrap_or(&zero)
                })
                .collect(),
        )
    }
}

impl Sub for &IntPoly {
    type Output = IntPoly;
    fn sub(self, rhs: &IntPoly) -> IntPoly {
        self + &(-rhs)
    }
}

impl Neg for &IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        IntPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for &IntPoly {
    type Output = IntPoly;
    fn mul(self, rhs: &IntPoly) -> IntPoly {
        if self.is_zero() || rhs.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_poly(f, &self.coeffs, "x")
    }
}

fn write_poly(f: &mut fmt::Formatter<'_>, coeffs: &[BigInt], var: &str) -> fmt::Result {
    let mut first = true;
    for (i, c) in coeffs.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let mag = c.abs();
        if first {
            if c.is_negative() {
                write!(f, "-")?;
            }
        } else {
            write!(f, " {} ", if c.is_negative() { '-' } else { '+' })?;
        }
        first = false;
        match (i, mag.is_one()) {
            (0, _) => write!(f, "{mag}")?,
            (1, true) => write!(f, "{var}")?,
            (1, false) => write!(f, "{mag}{var}")?,
            (_, true) => write!(f, "{var}^{i}")?,
            (_, false) => write!(f, "{mag}{var}^{i}")?,
        }
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

/// Resultant of two integer polynomials via the subresultant PRS.
///
/// Uses the convention `Res(A, B) = lc(A)^{deg B} ∏_{A(α)=0} B(α)`, so for
/// monic `A` it is the product of `B` over the roots of `A`.
pub fn resultant(a: &IntPoly, b: &IntPoly) -> BigInt {
    if a.is_zero() || b.is_zero() {
        return BigInt::zero();
    }
    let (mut a, mut b) = (a.clone(), b.clone());
    let mut sign = BigInt::one();
    if a.degree() < b.degree() {
        std::mem::swap(&mut a, &mut b);
        if a.degree().unwrap() % 2 == 1 && b.degree().unwrap() % 2 == 1 {
            sign = -sign;
        }
    }
    let ca = a.content();
    let cb = b.content();
    a = a.div_exact_scalar(&ca);
    b = b.div_exact_scalar(&cb);
    let t = num_traits::pow(ca, b.degree().unwrap()) * num_traits::pow(cb, a.degree().unwrap());

    let mut g = BigInt::one();
    let mut h = BigInt::one();
    loop {
        let da = a.degree().unwrap();
        let db = b.degree().unwrap();
        if db == 0 {
            // h ← lc(B)^{deg A} / h^{deg A − 1}
            let lb = b.leading().unwrap().clone();
            let h_final = if da == 0 {
                BigInt::one()
            } else {
                num_traits::pow(lb, da) / num_traits::pow(h, da - 1)
            };
            return sign * t * h_final;
        }
        let delta = da - db;
        if da % 2 == 1 && db % 2 == 1 {
            sign = -sign;
        }
        let r = a.pseudo_rem(&b);
        if r.is_zero() {
            return BigInt::zero();
        }
        a = b;
        let divisor = &g * num_traits::pow(h.clone(), delta);
        b = r.div_exact_scalar(&divisor);
        g = a.leading().unwrap().clone();
        h = match delta {
            0 => h,
            1 => g.clone(),
            _ => num_traits::pow(g.clone(), delta) / num_traits::pow(h, delta - 1),
        };
    }
}

fn poly_cache() -> &'static RwLock<HashMap<u32, Arc<IntPoly>>> {
    static CACHE: OnceLock<RwLock<HashMap<u32, Arc<IntPoly>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

fn compute_cyclotomic(n: u32) -> IntPoly {
    // Φ_n = ∏_{d | n} (x^d − 1)^{μ(n/d)}
    let mut num = IntPoly::one();
    let mut den = IntPoly::one();
    for d in divisors(n as u64) {
        match mobius(n as u64 / d) {
            1 => num = &num * &IntPoly::x_pow_minus_one(d as usize),
            -1 => den = &den * &IntPoly::x_pow_minus_one(d as usize),
            _ => {}
        }
    }
    // den is ±monic: each factor x^d − 1 is monic
    let (q, r) = num.div_rem_monic(&den);
    debug_assert!(r.is_zero());
    q
}

/// The `n`-th cyclotomic polynomial. Results are memoized.
pub fn cyclotomic_poly(n: u32) -> IntPoly {
    (*cyclotomic_poly_shared(n)).clone()
}

fn cyclotomic_poly_shared(n: u32) -> Arc<IntPoly> {
    assert!(n >= 1, "conductor must be positive");
    if let Some(p) = poly_cache().read().unwrap().get(&n) {
        return p.clone();
    }
    let p = Arc::new(compute_cyclotomic(n));
    poly_cache().write().unwrap().entry(n).or_insert(p).clone()
}

/// Shared per-conductor data: `Φ_n` and the reductions of `x^e` modulo it.
#[derive(Debug)]
pub struct CycRing {
    n: u32,
    phi: usize,
    modulus: Arc<IntPoly>,
    // x^e mod Φ_n for 0 ≤ e < n
    powers: Vec<Vec<BigInt>>,
    powers_small: Vec<Vec<i64>>,
}

impl CycRing {
    fn build(n: u32) -> Self {
        let modulus = cyclotomic_poly_shared(n);
        let phi = euler_phi(n as u64) as usize;
        debug_assert_eq!(modulus.degree(), Some(phi));
        let mut powers = Vec::with_capacity(n as usize);
        let mut cur = vec![BigInt::zero(); phi];
        cur[0] = BigInt::one();
        for _ in 0..n {
            powers.push(cur.clone());
            // multiply by x, fold the overflow coefficient using Φ_n
            let top = cur.pop().unwrap();
            cur.insert(0, BigInt::zero());
            if !top.is_zero() {
                for (c, m) in cur.iter_mut().zip(modulus.coeffs()) {
                    *c -= &top * m;
                }
            }
        }
        let powers_small = powers
            .iter()
            .map(|v| v.iter().map(|c| c.to_i64().unwrap()).collect())
            .collect();
        CycRing {
            n,
            phi,
            modulus,
            powers,
            powers_small,
        }
    }

    pub fn conductor(&self) -> u32 {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.phi
    }

    pub fn modulus(&self) -> &IntPoly {
        &self.modulus
    }

    /// Power-basis coordinates of `ζ^e` for `0 ≤ e < n`.
    pub fn power_coords(&self, e: usize) -> &[BigInt] {
        &self.powers[e]
    }

    /// Reduce a vector indexed by exponents modulo `x^n − 1` to the power
    /// basis, in checked machine arithmetic. `None` on overflow.
    pub(crate) fn reduce_cyclic_i64(&self, cyclic: &[i64]) -> Option<Vec<i64>> {
        let mut out = vec![0i64; self.phi];
        for (e, &c) in cyclic.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for (o, &m) in out.iter_mut().zip(&self.powers_small[e % self.n as usize]) {
                *o = o.checked_add(c.checked_mul(m)?)?;
            }
        }
        Some(out)
    }
}

fn ring_cache() -> &'static RwLock<HashMap<u32, Arc<CycRing>>> {
    static CACHE: OnceLock<RwLock<HashMap<u32, Arc<CycRing>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Shared ring data for conductor `n`, built once per process.
pub fn ring(n: u32) -> Arc<CycRing> {
    assert!(n >= 1, "conductor must be positive");
    if let Some(r) = ring_cache().read().unwrap().get(&n) {
        return r.clone();
    }
    let r = Arc::new(CycRing::build(n));
    ring_cache().write().unwrap().entry(n).or_insert(r).clone()
}

/// An element of `Z[ζ_n]` in the power basis modulo `Φ_n`.
#[derive(Clone)]
pub struct CycInt {
    ring: Arc<CycRing>,
    coeffs: Vec<BigInt>,
}

impl CycInt {
    pub fn zero(n: u32) -> Self {
        let ring = ring(n);
        let coeffs = vec![BigInt::zero(); ring.phi];
        CycInt { ring, coeffs }
    }

    pub fn one(n: u32) -> Self {
        Self::from_int(n, BigInt::one())
    }

    pub fn from_int(n: u32, v: BigInt) -> Self {
        let mut z = Self::zero(n);
        z.coeffs[0] = v;
        z
    }

    /// `ζ_n^e`, for any integer exponent.
    pub fn from_power(n: u32, e: i64) -> Self {
        let ring = ring(n);
        let e = e.rem_euclid(n as i64) as usize;
        let coeffs = ring.powers[e].clone();
        CycInt { ring, coeffs }
    }

    /// Reduce an arbitrary integer polynomial in `ζ` to canonical form.
    pub fn from_poly(n: u32, poly: &IntPoly) -> Self {
        Self::reduce_slice(ring(n), poly.coeffs())
    }

    /// Power-basis coordinates; the vector must have length `φ(n)`.
    pub fn from_coords(n: u32, coeffs: Vec<BigInt>) -> Result<Self> {
        let ring = ring(n);
        if coeffs.len() != ring.phi {
            return Err(Error::DimensionMismatch(format!(
                "expected {} coordinates for conductor {n}, got {}",
                ring.phi,
                coeffs.len()
            )));
        }
        Ok(CycInt { ring, coeffs })
    }

    pub(crate) fn from_cyclic_i64(ring: Arc<CycRing>, cyclic: &[i64]) -> Self {
        match ring.reduce_cyclic_i64(cyclic) {
            Some(v) => {
                let coeffs = v.into_iter().map(BigInt::from).collect();
                CycInt { ring, coeffs }
            }
            None => {
                let wide: Vec<BigInt> = cyclic.iter().map(|&c| BigInt::from(c)).collect();
                Self::reduce_slice(ring, &wide)
            }
        }
    }

    fn reduce_slice(ring: Arc<CycRing>, coeffs: &[BigInt]) -> Self {
        let mut out = vec![BigInt::zero(); ring.phi];
        let n = ring.n as usize;
        for (e, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if e < ring.phi {
                out[e] += c;
            } else {
                for (o, m) in out.iter_mut().zip(&ring.powers[e % n]) {
                    if !m.is_zero() {
                        *o += c * m;
                    }
                }
            }
        }
        CycInt { ring, coeffs: out }
    }

    pub fn conductor(&self) -> u32 {
        self.ring.n
    }

    pub fn ring(&self) -> &Arc<CycRing> {
        &self.ring
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn to_poly(&self) -> IntPoly {
        IntPoly::new(self.coeffs.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(|c| c.is_zero())
    }

    fn check_same(&self, other: &CycInt) -> Result<()> {
        if self.ring.n != other.ring.n {
            return Err(Error::ConductorMismatch(self.ring.n, other.ring.n));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &CycInt) -> Result<CycInt> {
        self.check_same(other)?;
        Ok(CycInt {
            ring: self.ring.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn checked_sub(&self, other: &CycInt) -> Result<CycInt> {
        self.check_same(other)?;
        Ok(CycInt {
            ring: self.ring.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    pub fn checked_mul(&self, other: &CycInt) -> Result<CycInt> {
        self.check_same(other)?;
        let phi = self.ring.phi;
        let mut prod = vec![BigInt::zero(); 2 * phi - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        Ok(Self::reduce_slice(self.ring.clone(), &prod))
    }

    /// Multiply by `ζ^e`.
    pub fn mul_power(&self, e: i64) -> CycInt {
        let n = self.ring.n as i64;
        let e = e.rem_euclid(n) as usize;
        let mut shifted = vec![BigInt::zero(); self.ring.phi + e];
        for (i, c) in self.coeffs.iter().enumerate() {
            shifted[i + e] = c.clone();
        }
        Self::reduce_slice(self.ring.clone(), &shifted)
    }

    pub fn scale(&self, s: &BigInt) -> CycInt {
        CycInt {
            ring: self.ring.clone(),
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    /// `N_{K/Q}(self) = Res(Φ_n, rep(self))`, signed.
    pub fn norm(&self) -> BigInt {
        if self.is_zero() {
            return BigInt::zero();
        }
        resultant(&self.ring.modulus, &self.to_poly())
    }
}

#[derive(Serialize, Deserialize)]
struct CycIntRepr {
    n: u32,
    #[serde(with = "crate::serde_dec::vec_bigint")]
    coeffs: Vec<BigInt>,
}

/// Serialized as `{"n": .., "coeffs": ["c_0", "c_1", ..]}` in the power basis.
impl Serialize for CycInt {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CycIntRepr {
            n: self.ring.n,
            coeffs: self.coeffs.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CycInt {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = CycIntRepr::deserialize(d)?;
        if repr.n == 0 {
            return Err(serde::de::Error::custom("conductor must be positive"));
        }
        CycInt::from_coords(repr.n, repr.coeffs).map_err(serde::de::Error::custom)
    }
}

impl PartialEq for CycInt {
    fn eq(&self, other: &Self) -> bool {
        self.ring.n == other.ring.n && self.coeffs == other.coeffs
    }
}

impl Eq for CycInt {}

impl Hash for CycInt {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.ring.n.hash(state);
        self.coeffs.hash(state);
    }
}

impl fmt::Debug for CycInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycInt[n={}]({})", self.ring.n, self)
    }
}

impl fmt::Display for CycInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_poly(f, &self.coeffs, "ζ")
    }
}

// Operators panic on mixed conductors; use the checked_* methods to recover.
impl Add for &CycInt {
    type Output = CycInt;
    fn add(self, rhs: &CycInt) -> CycInt {
        self.checked_add(rhs).unwrap()
    }
}

impl Sub for &CycInt {
    type Output = CycInt;
    fn sub(self, rhs: &CycInt) -> CycInt {
        self.checked_sub(rhs).unwrap()
    }
}

impl Mul for &CycInt {
    type Output = CycInt;
    fn mul(self, rhs: &CycInt) -> CycInt {
        self.checked_mul(rhs).unwrap()
    }
}

impl Neg for &CycInt {
    type Output = CycInt;
    fn neg(self) -> CycInt {
        CycInt {
            ring: self.ring.clone(),
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for CycInt {
    type Output = CycInt;
    fn neg(self) -> CycInt {
        -&self
    }
}
