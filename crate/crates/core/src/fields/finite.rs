use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;

use super::factor::is_irreducible;
use super::integer::{inv_mod, is_prime, mul_mod, reduce};
use super::{Field, FieldError, Poly, PolyCtx};

/// Presentation `F_p[u]/(m(u))` of a finite field of odd characteristic.
///
/// The prime field is the degree-one case with `m = u`; its elements are
/// coefficient vectors of length 1.
#[derive(Debug, PartialEq, Eq, Hash)]
pub struct FqCtx {
    p: u64,
    // monic, lowest degree first, length degree + 1
    modulus: Vec<u64>,
    var: String,
    order: u128,
}

impl FqCtx {
    pub fn prime(p: u64) -> Result<Arc<Self>, FieldError> {
        if p == 2 || !is_prime(p) {
            return Err(FieldError::NotOddPrime(p.to_string()));
        }
        Ok(Arc::new(FqCtx { p, modulus: vec![0, 1], var: "u".into(), order: p as u128 }))
    }

    /// `F_p[var]/(modulus)`; the modulus is given lowest degree first and
    /// must be monic and irreducible over `F_p`.
    pub fn extension(p: u64, modulus: Vec<u64>, var: &str) -> Result<Arc<Self>, FieldError> {
        let prime = Self::prime(p)?;
        let modulus: Vec<u64> = modulus.into_iter().map(|c| c % p).collect();
        let d = modulus.len().saturating_sub(1);
        if d == 0 || modulus[d] != 1 {
            return Err(FieldError::ReducibleModulus(p));
        }
        if d == 1 {
            // every degree-one modulus presents the prime field
            return Ok(prime);
        }
        let order = (p as u128)
            .checked_pow(d as u32)
            .filter(|q| q.leading_zeros() >= 2)
            .ok_or_else(|| FieldError::FieldTooLarge(format!("{p}^{d}")))?;
        let m = Poly::new(PolyCtx::new(prime.clone(), var), modulus.iter().map(|&c| Fq::from_u64(&prime, c)).collect());
        if !is_irreducible(&m)? {
            return Err(FieldError::ReducibleModulus(p));
        }
        Ok(Arc::new(FqCtx { p, modulus, var: var.into(), order }))
    }

    /// The extension of degree `d` whose modulus is the first monic
    /// irreducible polynomial in base-`p` counting order of its coefficients.
    pub fn default_extension(p: u64, d: usize, var: &str) -> Result<Arc<Self>, FieldError> {
        let prime = Self::prime(p)?;
        if d <= 1 {
            return Ok(prime);
        }
        let total = (p as u128).checked_pow(d as u32).ok_or_else(|| FieldError::FieldTooLarge(format!("{p}^{d}")))?;
        for idx in 0..total {
            let mut coeffs = digits(idx, p, d);
            coeffs.push(1);
            if coeffs[0] == 0 {
                continue;
            }
            match Self::extension(p, coeffs, var) {
                Ok(ctx) => return Ok(ctx),
                Err(FieldError::ReducibleModulus(_)) => continue,
                Err(e) => return Err(e),
            }
        }
        unreachable!("irreducible polynomials exist in every degree")
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    pub fn order(&self) -> u128 {
        self.order
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn var(&self) -> &str {
        &self.var
    }

    pub fn is_prime_field(&self) -> bool {
        self.degree() == 1
    }
}

fn digits(mut idx: u128, p: u64, d: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(d);
    for _ in 0..d {
        out.push((idx % p as u128) as u64);
        idx /= p as u128;
    }
    out
}

/// Element of a finite field `F_p[u]/(m)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Fq {
    ctx: Arc<FqCtx>,
    c: Vec<u64>,
}

impl Fq {
    pub fn from_u64(ctx: &Arc<FqCtx>, n: u64) -> Self {
        let mut c = vec![0; ctx.degree()];
        c[0] = n % ctx.p;
        Fq { ctx: ctx.clone(), c }
    }

    /// Element from its coefficient vector in the power basis `1, u, u², …`;
    /// longer vectors are reduced modulo `m`.
    pub fn from_coeffs(ctx: &Arc<FqCtx>, coeffs: &[u64]) -> Self {
        let p = ctx.p;
        let mut c: Vec<u64> = coeffs.iter().map(|&x| x % p).collect();
        reduce_mod(&mut c, &ctx.modulus, p);
        c.resize(ctx.degree(), 0);
        Fq { ctx: ctx.clone(), c }
    }

    /// The class of `u`, which generates `F_q` over `F_p`; `None` for a prime field.
    pub fn generator(ctx: &Arc<FqCtx>) -> Option<Self> {
        if ctx.is_prime_field() {
            None
        } else {
            Some(Self::from_coeffs(ctx, &[0, 1]))
        }
    }

    /// Enumeration order: base-`p` digits of `idx` are the coefficients.
    pub fn from_index(ctx: &Arc<FqCtx>, idx: u128) -> Self {
        Fq { ctx: ctx.clone(), c: digits(idx, ctx.p, ctx.degree()) }
    }

    pub fn index(&self) -> u128 {
        self.c.iter().rev().fold(0u128, |acc, &x| acc * self.ctx.p as u128 + x as u128)
    }

    /// All elements in index order. Intended for small fields only.
    pub fn elements(ctx: &Arc<FqCtx>) -> impl Iterator<Item = Fq> + '_ {
        (0..ctx.order).map(move |i| Fq::from_index(ctx, i))
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.c
    }

    pub fn context(&self) -> &Arc<FqCtx> {
        &self.ctx
    }

    pub fn pow_u128(&self, mut e: u128) -> Self {
        let mut acc = Fq::from_u64(&self.ctx, 1);
        let mut sq = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&sq);
            }
            e >>= 1;
            if e > 0 {
                sq = sq.mul(&sq);
            }
        }
        acc
    }

    /// Quadratic character: 1 on nonzero squares, -1 on nonsquares, 0 on zero.
    pub fn quadratic_character(&self) -> i8 {
        if self.is_zero() {
            return 0;
        }
        if self.pow_u128((self.ctx.order - 1) / 2).is_one() {
            1
        } else {
            -1
        }
    }

    /// Inverse of the Frobenius: the unique `y` with `y^p = self`.
    pub fn pth_root(&self) -> Self {
        self.pow_u128(self.ctx.order / self.ctx.p as u128)
    }

    fn first_nonsquare(ctx: &Arc<FqCtx>) -> Fq {
        (2..ctx.order)
            .map(|i| Fq::from_index(ctx, i))
            .find(|z| z.quadratic_character() == -1)
            .expect("odd-order field has a nonsquare")
    }

    // Tonelli-Shanks over F_q.
    fn tonelli_shanks(&self) -> Option<Fq> {
        if self.is_zero() {
            return Some(self.clone());
        }
        if self.quadratic_character() != 1 {
            return None;
        }
        let q1 = self.ctx.order - 1;
        let s = q1.trailing_zeros();
        let t = q1 >> s;
        let z = Self::first_nonsquare(&self.ctx);
        let mut m = s;
        let mut c = z.pow_u128(t);
        let mut tt = self.pow_u128(t);
        let mut r = self.pow_u128(t.div_ceil(2));
        while !tt.is_one() {
            let mut i = 0;
            let mut probe = tt.clone();
            while !probe.is_one() {
                probe = probe.mul(&probe);
                i += 1;
            }
            let mut b = c.clone();
            for _ in 0..(m - i - 1) {
                b = b.mul(&b);
            }
            m = i;
            c = b.mul(&b);
            tt = tt.mul(&c);
            r = r.mul(&b);
        }
        Some(r)
    }
}

// In-place reduction of a coefficient vector modulo the monic `m`.
fn reduce_mod(c: &mut Vec<u64>, m: &[u64], p: u64) {
    let d = m.len() - 1;
    while c.len() > d {
        let top = c.pop().unwrap();
        if top == 0 {
            continue;
        }
        let base = c.len() - d;
        for (j, &mj) in m.iter().take(d).enumerate() {
            let sub = mul_mod(top, mj, p);
            c[base + j] = (c[base + j] + p - sub) % p;
        }
    }
}

impl Field for Fq {
    type Ctx = Arc<FqCtx>;

    fn ctx(&self) -> Arc<FqCtx> {
        self.ctx.clone()
    }

    fn zero(ctx: &Arc<FqCtx>) -> Self {
        Fq { ctx: ctx.clone(), c: vec![0; ctx.degree()] }
    }

    fn one(ctx: &Arc<FqCtx>) -> Self {
        Fq::from_u64(ctx, 1)
    }

    fn from_bigint(ctx: &Arc<FqCtx>, n: &BigInt) -> Self {
        Fq::from_u64(ctx, reduce(n, ctx.p))
    }

    fn characteristic(ctx: &Arc<FqCtx>) -> u64 {
        ctx.p
    }

    fn is_zero(&self) -> bool {
        self.c.iter().all(|&x| x == 0)
    }

    fn is_one(&self) -> bool {
        self.c[0] == 1 && self.c[1..].iter().all(|&x| x == 0)
    }

    fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.ctx, other.ctx);
        let p = self.ctx.p;
        let c = self.c.iter().zip(&other.c).map(|(&a, &b)| (a + b) % p).collect();
        Fq { ctx: self.ctx.clone(), c }
    }

    fn sub(&self, other: &Self) -> Self {
        debug_assert_eq!(self.ctx, other.ctx);
        let p = self.ctx.p;
        let c = self.c.iter().zip(&other.c).map(|(&a, &b)| (a + p - b) % p).collect();
        Fq { ctx: self.ctx.clone(), c }
    }

    fn mul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.ctx, other.ctx);
        let p = self.ctx.p;
        let d = self.ctx.degree();
        if d == 1 {
            return Fq { ctx: self.ctx.clone(), c: vec![mul_mod(self.c[0], other.c[0], p)] };
        }
        let mut prod = vec![0u64; 2 * d - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.c.iter().enumerate() {
                prod[i + j] = (prod[i + j] + mul_mod(a, b, p)) % p;
            }
        }
        reduce_mod(&mut prod, &self.ctx.modulus, p);
        Fq { ctx: self.ctx.clone(), c: prod }
    }

    fn neg(&self) -> Self {
        let p = self.ctx.p;
        Fq { ctx: self.ctx.clone(), c: self.c.iter().map(|&a| (p - a) % p).collect() }
    }

    fn inv(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero");
        if self.ctx.degree() == 1 {
            return Fq { ctx: self.ctx.clone(), c: vec![inv_mod(self.c[0], self.ctx.p)] };
        }
        self.pow_u128(self.ctx.order - 2)
    }

    fn sqrt(&self) -> Option<Self> {
        self.tonelli_shanks()
    }

    fn is_atomic(&self) -> bool {
        self.c.iter().filter(|&&x| x != 0).count() <= 1
    }
}

impl fmt::Display for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ctx.degree() == 1 {
            return write!(f, "{}", self.c[0]);
        }
        let mut first = true;
        for (i, &a) in self.c.iter().enumerate().rev() {
            if a == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let var = &self.ctx.var;
            match (i, a) {
                (0, _) => write!(f, "{a}")?,
                (1, 1) => write!(f, "{var}")?,
                (1, _) => write!(f, "{a}*{var}")?,
                (_, 1) => write!(f, "{var}^{i}")?,
                _ => write!(f, "{a}*{var}^{i}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} in F_{}", self, self.ctx.order)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f9() -> Arc<FqCtx> {
        FqCtx::extension(3, vec![1, 0, 1], "u").unwrap()
    }

    #[test]
    fn prime_field_arithmetic() {
        let f5 = FqCtx::prime(5).unwrap();
        let two = Fq::from_u64(&f5, 2);
        let three = Fq::from_u64(&f5, 3);
        assert_eq!(two.mul(&three), Fq::one(&f5));
        assert_eq!(two.inv(), three);
        assert_eq!(two.sqrt(), None);
        assert_eq!(Fq::from_bigint(&f5, &BigInt::from(-1)), Fq::from_u64(&f5, 4));
    }

    #[test]
    fn extension_reduction() {
        let f25 = FqCtx::extension(5, vec![3, 0, 1], "u").unwrap(); // u² = 2
        let u = Fq::generator(&f25).unwrap();
        assert_eq!(u.mul(&u), Fq::from_u64(&f25, 2));
        assert_eq!(u.to_string(), "u");
        assert_eq!(u.add(&Fq::from_u64(&f25, 3)).to_string(), "u + 3");
    }

    #[test]
    fn rejects_bad_contexts() {
        assert!(FqCtx::prime(2).is_err());
        assert!(FqCtx::prime(9).is_err());
        assert!(FqCtx::extension(5, vec![4, 0, 1], "u").is_err()); // u² - 1
        assert!(FqCtx::extension(5, vec![3, 0, 2], "u").is_err()); // not monic
    }

    #[test]
    fn default_extension_is_irreducible() {
        for (p, d) in [(3, 2), (3, 3), (5, 2), (7, 2), (3, 4)] {
            let ctx = FqCtx::default_extension(p, d, "u").unwrap();
            assert_eq!(ctx.order(), (p as u128).pow(d as u32));
        }
    }

    #[test]
    fn sqrt_matches_exhaustive_squaring_f9() {
        let ctx = f9();
        let squares: Vec<Fq> = Fq::elements(&ctx).map(|x| x.mul(&x)).collect();
        for a in Fq::elements(&ctx) {
            let expect = squares.contains(&a);
            match a.sqrt() {
                Some(r) => {
                    assert!(expect);
                    assert_eq!(r.mul(&r), a);
                }
                None => assert!(!expect),
            }
        }
        // u is a square in F_9 = F_3[u]/(u²+1): (u+1)² = 2u ... so check by brute force
        let u = Fq::generator(&ctx).unwrap();
        assert_eq!(u.sqrt().is_some(), squares.contains(&u));
    }

    #[test]
    fn index_roundtrip_and_pth_root() {
        let ctx = FqCtx::default_extension(3, 3, "u").unwrap();
        for x in Fq::elements(&ctx) {
            assert_eq!(Fq::from_index(&ctx, x.index()), x);
            assert_eq!(x.pth_root().pow(3), x);
        }
    }
}
