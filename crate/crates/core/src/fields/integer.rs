//! Machine-integer number theory: deterministic primality for `u64`,
//! Pollard-rho factorization, and Legendre symbols.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use super::FieldError;

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin, exact for every `u64`.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

// Brent's variant; n must be odd composite.
fn pollard_rho(n: u64) -> u64 {
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut d) = (2u64, 2u64, 1u64);
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = gcd_u64(x.abs_diff(y), n);
        }
        if d != n {
            return d;
        }
        c += 1;
    }
}

/// Prime factorization with multiplicities, primes ascending; empty for 0 and 1.
pub fn factor_u64(n: u64) -> Vec<(u64, u32)> {
    if n == 0 {
        return Vec::new();
    }
    let mut primes = Vec::new();
    let mut n = n;
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47] {
        while n.is_multiple_of(p) {
            primes.push(p);
            n /= p;
        }
    }
    let mut stack = vec![n];
    while let Some(m) = stack.pop() {
        if m == 1 {
            continue;
        }
        if is_prime(m) {
            primes.push(m);
            continue;
        }
        let d = pollard_rho(m);
        stack.push(d);
        stack.push(m / d);
    }
    primes.sort_unstable();
    let mut out: Vec<(u64, u32)> = Vec::new();
    for p in primes {
        match out.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => out.push((p, 1)),
        }
    }
    out
}

/// Trial division bound for integers beyond 64 bits.
const SMALL_PRIME_BOUND: u64 = 1 << 16;

/// Prime divisors of `|n|` (n ≠ 0), ascending.
///
/// Beyond 64 bits, primes below 2^16 are divided out first; the cofactor must
/// then fit in 64 bits or be a perfect square of such a number.
pub fn prime_divisors(n: &BigInt) -> Result<Vec<u64>, FieldError> {
    if n.is_zero() {
        return Err(FieldError::ZeroInput);
    }
    if let Some(m) = n.magnitude().to_u64() {
        return Ok(factor_u64(m).into_iter().map(|(p, _)| p).collect());
    }
    let mut out = Vec::new();
    let mut m = n.magnitude().clone();
    for p in (2..SMALL_PRIME_BOUND).filter(|&p| is_prime(p)) {
        let big = BigUint::from(p);
        if (&m % &big).is_zero() {
            out.push(p);
            while (&m % &big).is_zero() {
                m /= &big;
            }
        }
    }
    let root = m.sqrt();
    let rest = if &root * &root == m { root } else { m };
    let rest = rest.to_u64().ok_or_else(|| FieldError::IntegerTooLarge(n.to_string()))?;
    out.extend(factor_u64(rest).into_iter().map(|(p, _)| p));
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// Exponent of the prime `p` in the nonzero integer `n`, and the cofactor.
pub fn split_prime_power(n: &BigInt, p: u64) -> (i64, BigInt) {
    debug_assert!(!n.is_zero());
    let p = BigInt::from(p);
    let mut e = 0;
    let mut m = n.clone();
    loop {
        let (q, r) = m.div_rem(&p);
        if !r.is_zero() {
            return (e, m);
        }
        m = q;
        e += 1;
    }
}

/// Residue of a `BigInt` in `[0, p)`.
pub fn reduce(n: &BigInt, p: u64) -> u64 {
    n.mod_floor(&BigInt::from(p)).to_u64().expect("residue fits u64")
}

/// Legendre symbol (n | p) for an odd prime p: 0, 1 or -1 (Euler criterion).
pub fn legendre(n: &BigInt, p: u64) -> i8 {
    let r = reduce(n, p);
    if r == 0 {
        return 0;
    }
    if pow_mod(r, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

pub fn inv_mod(a: u64, p: u64) -> u64 {
    let g = BigInt::from(a).extended_gcd(&BigInt::from(p));
    debug_assert_eq!(g.gcd, BigInt::from(1));
    reduce(&g.x, p)
}

pub fn sign_of(n: &BigInt) -> i8 {
    match n.sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}
