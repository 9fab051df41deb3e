use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::integer::{inv_mod, mul_mod};
use super::{Field, Poly};

/// Arbitrary-precision rationals, always in lowest terms with positive denominator.
pub type Rational = BigRational;

/// Shorthand constructor used throughout tests and examples.
pub fn rat(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub(crate) fn exact_isqrt(n: &BigInt) -> Option<BigInt> {
    if n.sign() == Sign::Minus {
        return None;
    }
    let r = n.sqrt();
    if &(&r * &r) == n {
        Some(r)
    } else {
        None
    }
}

impl Field for BigRational {
    type Ctx = ();

    fn ctx(&self) {}

    fn zero(_: &()) -> Self {
        <BigRational as Zero>::zero()
    }

    fn one(_: &()) -> Self {
        <BigRational as One>::one()
    }

    fn from_bigint(_: &(), n: &BigInt) -> Self {
        BigRational::from_integer(n.clone())
    }

    fn characteristic(_: &()) -> u64 {
        0
    }

    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }

    fn add(&self, other: &Self) -> Self {
        self + other
    }

    fn sub(&self, other: &Self) -> Self {
        self - other
    }

    fn mul(&self, other: &Self) -> Self {
        self * other
    }

    fn neg(&self) -> Self {
        -self
    }

    fn inv(&self) -> Self {
        assert!(!Zero::is_zero(self), "inverse of zero");
        self.recip()
    }

    fn sqrt(&self) -> Option<Self> {
        let n = exact_isqrt(self.numer())?;
        let d = exact_isqrt(self.denom())?;
        Some(BigRational::new(n, d))
    }

    fn is_atomic(&self) -> bool {
        true
    }

    fn is_one(&self) -> bool {
        One::is_one(self)
    }

    /// Coprimality modulo a few word-size primes, then a primitive
    /// pseudo-remainder sequence over Z.
    fn poly_gcd(a: &Poly<Self>, b: &Poly<Self>) -> Option<Poly<Self>> {
        let (ia, ib) = (integral(a), integral(b));
        if PRIMES.iter().any(|&p| coprime_mod(&ia, &ib, p)) {
            return Some(Poly::one(a.ctx()));
        }
        let (mut r0, mut r1) = (primitive(ia), primitive(ib));
        if r0.len() < r1.len() {
            std::mem::swap(&mut r0, &mut r1);
        }
        while r1.len() > 1 {
            let r = primitive(pseudo_rem(&r0, &r1));
            r0 = std::mem::replace(&mut r1, r);
            if r1.is_empty() {
                break;
            }
        }
        let g = if r1.is_empty() { r0 } else { vec![BigInt::one()] };
        Some(Poly::new(a.ctx().clone(), g.into_iter().map(BigRational::from_integer).collect()).monic())
    }
}

const PRIMES: [u64; 3] = [1_000_000_007, 998_244_353, 1_000_000_009];

// integer coefficients of a positive rational multiple of p
fn integral(p: &Poly<BigRational>) -> Vec<BigInt> {
    let lcm = p.coeffs().iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
    p.coeffs().iter().map(|c| c.numer() * (&lcm / c.denom())).collect()
}

fn primitive(mut p: Vec<BigInt>) -> Vec<BigInt> {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    let content = p.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
    if content.is_zero() || content.is_one() {
        p
    } else {
        p.iter().map(|c| c / &content).collect()
    }
}

// lc(b)^(deg a − deg b + 1)·a mod b over Z
fn pseudo_rem(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut r = a.to_vec();
    let lb = b.last().unwrap();
    while r.len() >= b.len() {
        let lr = r.pop().unwrap();
        let shift = r.len() + 1 - b.len();
        for c in r.iter_mut() {
            *c *= lb;
        }
        for (j, bj) in b[..b.len() - 1].iter().enumerate() {
            r[shift + j] -= &lr * bj;
        }
        while r.last().is_some_and(Zero::is_zero) {
            r.pop();
        }
    }
    r
}

// a constant gcd modulo p, with both leading coefficients nonzero mod p, proves coprimality over Q
fn coprime_mod(a: &[BigInt], b: &[BigInt], p: u64) -> bool {
    let reduce = |v: &[BigInt]| -> Option<Vec<u64>> {
        let r: Vec<u64> = v.iter().map(|c| c.mod_floor(&BigInt::from(p)).to_u64().unwrap()).collect();
        (*r.last()? != 0).then_some(r)
    };
    let (Some(mut x), Some(mut y)) = (reduce(a), reduce(b)) else { return false };
    let trim = |v: &mut Vec<u64>| {
        while v.last() == Some(&0) {
            v.pop();
        }
    };
    while !y.is_empty() {
        // x mod y
        let inv = inv_mod(*y.last().unwrap(), p);
        while x.len() >= y.len() {
            let f = mul_mod(*x.last().unwrap(), inv, p);
            let shift = x.len() - y.len();
            for (j, &yj) in y.iter().enumerate() {
                x[shift + j] = (x[shift + j] + p - mul_mod(f, yj, p)) % p;
            }
            trim(&mut x);
        }
        std::mem::swap(&mut x, &mut y);
    }
    x.len() == 1
}
