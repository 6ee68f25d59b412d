//! Integer number theory: primality, factorization, orders and the classical
//! arithmetic functions.
//!
//! Primality is deterministic Miller-Rabin over the first thirteen primes,
//! which is exact for every input below 3 317 044 064 679 887 385 961 981.
//! Larger inputs are refused instead of being accepted probabilistically.
//! Factorization is trial division up to 10^4 followed by Brent's variant of
//! Pollard rho with a fixed sequence of polynomial constants.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::serde_dec;

const MR_BASES: [u64; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];
const TRIAL_DIVISION_LIMIT: u64 = 10_000;

/// Exclusive upper bound below which [`is_prime`] is deterministic.
pub fn miller_rabin_bound() -> &'static BigUint {
    static BOUND: OnceLock<BigUint> = OnceLock::new();
    BOUND.get_or_init(|| "3317044064679887385961981".parse().unwrap())
}

fn small_primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| primes_up_to(TRIAL_DIVISION_LIMIT))
}

/// A non-negative integer together with its complete prime factorization.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactoredInt {
    #[serde(with = "serde_dec::biguint")]
    pub value: BigUint,
    #[serde(with = "serde_dec::factor_list")]
    pub factors: Vec<(BigUint, u32)>,
}

impl FactoredInt {
    pub fn primes(&self) -> impl Iterator<Item = &BigUint> {
        self.factors.iter().map(|(p, _)| p)
    }

    pub fn recompose(&self) -> BigUint {
        self.factors
            .iter()
            .fold(BigUint::one(), |acc, (p, e)| acc * p.pow(*e))
    }
}

/// Iteration budget for Pollard rho. Exhausting it aborts the factorization
/// with [`Error::FactorizationIncomplete`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FactorBudget {
    pub rho_iterations: u64,
}

impl Default for FactorBudget {
    fn default() -> Self {
        FactorBudget {
            rho_iterations: 1 << 24,
        }
    }
}

pub fn mul_mod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod_u64(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod_u64(acc, base, m);
        }
        base = mul_mod_u64(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic primality for machine words.
pub fn is_prime_u64(m: u64) -> bool {
    if m < 2 {
        return false;
    }
    for &p in &MR_BASES {
        if m % p == 0 {
            return m == p;
        }
    }
    let s = (m - 1).trailing_zeros();
    let d = (m - 1) >> s;
    'bases: for &a in &MR_BASES {
        let mut x = pow_mod_u64(a, d, m);
        if x == 1 || x == m - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod_u64(x, x, m);
            if x == m - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// Deterministic primality test. Fails for inputs at or above
/// [`miller_rabin_bound`].
pub fn is_prime(m: &BigUint) -> Result<bool> {
    if let Some(small) = m.to_u64() {
        return Ok(is_prime_u64(small));
    }
    if m >= miller_rabin_bound() {
        return Err(Error::PrimalityBoundExceeded(m.clone()));
    }
    for &p in &MR_BASES {
        if (m % p).is_zero() {
            return Ok(false);
        }
    }
    let one = BigUint::one();
    let m_minus_1 = m - &one;
    let s = m_minus_1.trailing_zeros().unwrap_or(0);
    let d = &m_minus_1 >> s;
    'bases: for &a in &MR_BASES {
        let mut x = BigUint::from(a).modpow(&d, m);
        if x == one || x == m_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % m;
            if x == m_minus_1 {
                continue 'bases;
            }
        }
        return Ok(false);
    }
    Ok(true)
}

// Brent's cycle detection with batched gcds. `budget` counts polynomial
// evaluations and is shared across restarts.
fn brent_rho(n: &BigUint, c: u64, budget: &mut u64) -> Option<BigUint> {
    const BATCH: u64 = 128;
    let c = BigUint::from(c);
    let step = |v: &BigUint| (v * v + &c) % n;
    let abs_diff = |a: &BigUint, b: &BigUint| if a > b { a - b } else { b - a };

    let mut y = BigUint::from(2u32);
    let mut x = y.clone();
    let mut ys = y.clone();
    let mut q = BigUint::one();
    let mut g = BigUint::one();
    let mut r = 1u64;

    while g.is_one() {
        x = y.clone();
        for _ in 0..r {
            y = step(&y);
        }
        let mut k = 0;
        while k < r && g.is_one() {
            ys = y.clone();
            let batch = BATCH.min(r - k);
            if *budget < batch + r {
                return None;
            }
            *budget -= batch + r;
            for _ in 0..batch {
                y = step(&y);
                q = (q * abs_diff(&x, &y)) % n;
            }
            g = q.gcd(n);
            k += BATCH;
        }
        r *= 2;
    }
    if &g == n {
        // the batch overshot; replay one step at a time
        loop {
            ys = step(&ys);
            g = abs_diff(&x, &ys).gcd(n);
            if !g.is_one() {
                break;
            }
        }
    }
    if &g == n {
        None
    } else {
        Some(g)
    }
}

fn split_composite(m: &BigUint, budget: &mut u64) -> Option<BigUint> {
    (1u64..).take(64).find_map(|c| {
        if *budget == 0 {
            return None;
        }
        brent_rho(m, c, budget)
    })
}

/// Complete prime factorization of `m ≥ 1`.
pub fn factorize(m: &BigUint, budget: FactorBudget) -> Result<FactoredInt> {
    assert!(!m.is_zero(), "factorize requires m >= 1");
    let mut counts: BTreeMap<BigUint, u32> = BTreeMap::new();
    let mut rest = m.clone();

    for &p in small_primes() {
        if rest.is_one() {
            break;
        }
        let bp = BigUint::from(p);
        if &bp * &bp > rest {
            break;
        }
        while (&rest % p).is_zero() {
            rest /= p;
            *counts.entry(bp.clone()).or_default() += 1;
        }
    }

    let mut remaining_budget = budget.rho_iterations;
    let mut pending = Vec::new();
    if !rest.is_one() {
        pending.push(rest);
    }
    while let Some(c) = pending.pop() {
        // trial division already removed all factors below the limit
        let limit_sq = BigUint::from(TRIAL_DIVISION_LIMIT * TRIAL_DIVISION_LIMIT);
        let prime = if c < limit_sq {
            true
        } else if &c < miller_rabin_bound() {
            is_prime(&c)?
        } else {
            false
        };
        if prime {
            *counts.entry(c).or_default() += 1;
            continue;
        }
        match split_composite(&c, &mut remaining_budget) {
            Some(d) => {
                let other = &c / &d;
                pending.push(d);
                pending.push(other);
            }
            None => {
                return Err(Error::FactorizationIncomplete {
                    cofactor: c,
                    found: counts.into_keys().collect(),
                })
            }
        }
    }

    Ok(FactoredInt {
        value: m.clone(),
        factors: counts.into_iter().collect(),
    })
}

/// Factorization of a machine word. Never exhausts the default budget.
pub fn factorize_u64(m: u64) -> Vec<(u64, u32)> {
    let f = factorize(&BigUint::from(m), FactorBudget::default())
        .expect("u64 inputs always factor within the default budget");
    f.factors
        .into_iter()
        .map(|(p, e)| (p.to_u64().unwrap(), e))
        .collect()
}

/// Smallest `f ≥ 1` with `p^f ≡ 1 (mod n)`.
pub fn multiplicative_order(p: u64, n: u64) -> Result<u64> {
    assert!(n >= 1);
    if p.gcd(&n) != 1 {
        return Err(Error::NotCoprime {
            value: p,
            modulus: n,
        });
    }
    if n == 1 {
        return Ok(1);
    }
    let mut order = euler_phi(n);
    for (q, _) in factorize_u64(order) {
        while order % q == 0 && pow_mod_u64(p, order / q, n) == 1 {
            order /= q;
        }
    }
    Ok(order)
}

pub fn euler_phi(n: u64) -> u64 {
    assert!(n >= 1);
    factorize_u64(n)
        .into_iter()
        .fold(1, |acc, (p, e)| acc * (p - 1) * p.pow(e - 1))
}

pub fn mobius(n: u64) -> i8 {
    assert!(n >= 1);
    let factors = factorize_u64(n);
    if factors.iter().any(|&(_, e)| e > 1) {
        0
    } else if factors.len() % 2 == 0 {
        1
    } else {
        -1
    }
}

pub fn divisors(n: u64) -> Vec<u64> {
    assert!(n >= 1);
    let mut divs = vec![1u64];
    for (p, e) in factorize_u64(n) {
        let current = divs.clone();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            divs.extend(current.iter().map(|d| d * pk));
        }
    }
    divs.sort_unstable();
    divs
}

/// Sieve of Eratosthenes.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let limit = limit as usize;
    let mut composite = vec![false; limit + 1];
    let mut primes = Vec::new();
    for i in 2..=limit {
        if composite[i] {
            continue;
        }
        primes.push(i as u64);
        let mut j = i * i;
        while j <= limit {
            composite[j] = true;
            j += i;
        }
    }
    primes
}
