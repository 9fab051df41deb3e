//! Polynomial factorization.
//!
//! Over finite fields: squarefree decomposition (with p-th roots), distinct
//! degree splitting and Cantor–Zassenhaus equal-degree splitting with a fixed
//! seed, so results are deterministic. Over Q: content and squarefree
//! decomposition in any degree, and full factorization up to degree
//! [`MAX_RATIONAL_FACTOR_DEGREE`] by Zassenhaus (factor modulo a small prime,
//! Hensel lift, recombine).

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::integer::{factor_u64, is_prime, reduce};
use super::{Field, FieldError, Fq, FqCtx, Poly, PolyCtx, Rational};

pub const MAX_RATIONAL_FACTOR_DEGREE: usize = 8;

/// Monic irreducible factors with multiplicities, plus the leading coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization<K: Field> {
    pub unit: K,
    pub factors: Vec<(Poly<K>, usize)>,
}

impl<K: Field> Factorization<K> {
    pub fn expand(&self, ctx: &PolyCtx<K>) -> Poly<K> {
        self.factors.iter().fold(Poly::constant(ctx, self.unit.clone()), |acc, (f, e)| acc.mul(&f.pow(*e as u32)))
    }
}

fn field_order(ctx: &PolyCtx<Fq>) -> BigUint {
    BigUint::from(ctx.base.order())
}

fn pth_root_poly(f: &Poly<Fq>) -> Poly<Fq> {
    let p = f.ctx().base.p() as usize;
    let coeffs = f.coeffs().iter().step_by(p).map(Fq::pth_root).collect();
    Poly::new(f.ctx().clone(), coeffs)
}

/// Squarefree decomposition of a monic polynomial over a finite field:
/// pairs `(g, m)` with `f = ∏ g^m`, each `g` squarefree and pairwise coprime.
pub fn squarefree_fq(f: &Poly<Fq>) -> Vec<(Poly<Fq>, usize)> {
    let p = f.ctx().base.p() as usize;
    let mut out = Vec::new();
    if f.deg() <= 0 {
        return out;
    }
    let mut c = f.gcd(&f.derivative());
    let mut w = f.exact_div(&c);
    let mut i = 1;
    while !w.is_one() {
        let y = w.gcd(&c);
        let z = w.exact_div(&y);
        if !z.is_one() {
            out.push((z, i));
        }
        i += 1;
        w = y;
        c = c.exact_div(&w);
    }
    if !c.is_one() {
        for (g, m) in squarefree_fq(&pth_root_poly(&c)) {
            out.push((g, m * p));
        }
    }
    out
}

fn x_power_q(f: &Poly<Fq>, h: &Poly<Fq>) -> Poly<Fq> {
    h.powmod(&field_order(f.ctx()), f)
}

/// Rabin's irreducibility test over `F_q`.
pub fn is_irreducible(f: &Poly<Fq>) -> Result<bool, FieldError> {
    let n = f.degree().ok_or(FieldError::ZeroPolynomial)?;
    if n == 0 {
        return Ok(false);
    }
    if n == 1 {
        return Ok(true);
    }
    let f = f.monic();
    let x = Poly::x(f.ctx());
    let mut powers = vec![x.clone()]; // powers[k] = x^(q^k) mod f
    for _ in 0..n {
        let next = x_power_q(&f, powers.last().unwrap());
        powers.push(next);
    }
    if powers[n] != x.rem(&f) {
        return Ok(false);
    }
    for (r, _) in factor_u64(n as u64) {
        let k = n / r as usize;
        if !f.gcd(&powers[k].sub(&x)).is_one() {
            return Ok(false);
        }
    }
    Ok(true)
}

// Distinct-degree factorization of a monic squarefree polynomial.
fn distinct_degree(f: &Poly<Fq>) -> Vec<(Poly<Fq>, usize)> {
    let mut out = Vec::new();
    let mut rest = f.clone();
    let x = Poly::x(f.ctx());
    let mut h = x.clone();
    let mut d = 0;
    while rest.deg() >= 2 * (d as isize + 1) {
        d += 1;
        h = x_power_q(&rest, &h);
        let g = rest.gcd(&h.sub(&x));
        if !g.is_one() {
            rest = rest.exact_div(&g);
            h = h.rem(&rest);
            out.push((g, d));
        }
    }
    if rest.deg() > 0 {
        let d = rest.degree().unwrap();
        out.push((rest, d));
    }
    out
}

fn random_poly(ctx: &PolyCtx<Fq>, deg: usize, rng: &mut ChaCha8Rng) -> Poly<Fq> {
    let fq = &ctx.base;
    let coeffs = (0..=deg)
        .map(|_| {
            let cs: Vec<u64> = (0..fq.degree()).map(|_| rng.gen_range(0..fq.p())).collect();
            Fq::from_coeffs(fq, &cs)
        })
        .collect();
    Poly::new(ctx.clone(), coeffs)
}

// Cantor–Zassenhaus: split a monic squarefree product of degree-d irreducibles.
fn equal_degree(f: &Poly<Fq>, d: usize, rng: &mut ChaCha8Rng, out: &mut Vec<Poly<Fq>>) {
    let n = f.degree().unwrap();
    if n == d {
        out.push(f.clone());
        return;
    }
    let exp = (field_order(f.ctx()).pow(d as u32) - 1u32) / 2u32;
    let one = Poly::one(f.ctx());
    loop {
        let a = random_poly(f.ctx(), n - 1, rng);
        if a.is_constant() {
            continue;
        }
        let g = a.gcd(f);
        let split = if !g.is_one() { g } else { f.gcd(&a.powmod(&exp, f).sub(&one)) };
        if !split.is_one() && split.deg() < f.deg() {
            let other = f.exact_div(&split);
            equal_degree(&split, d, rng, out);
            equal_degree(&other, d, rng, out);
            return;
        }
    }
}

/// Complete factorization over `F_q`, factors sorted by degree then coefficients.
pub fn factor_fq(f: &Poly<Fq>) -> Result<Factorization<Fq>, FieldError> {
    let unit = f.lc().cloned().ok_or(FieldError::ZeroPolynomial)?;
    let monic = f.monic();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut factors = Vec::new();
    for (g, m) in squarefree_fq(&monic) {
        for (h, d) in distinct_degree(&g) {
            let mut parts = Vec::new();
            equal_degree(&h, d, &mut rng, &mut parts);
            factors.extend(parts.into_iter().map(|q| (q, m)));
        }
    }
    sort_factors(&mut factors);
    Ok(Factorization { unit, factors })
}

fn sort_factors(factors: &mut [(Poly<Fq>, usize)]) {
    factors.sort_by_key(|(q, m)| (q.deg(), q.coeffs().iter().rev().map(Fq::index).collect::<Vec<_>>(), *m));
}

/// Roots in `F_q`, ascending by element index.
pub fn roots_fq(f: &Poly<Fq>) -> Result<Vec<Fq>, FieldError> {
    let fac = factor_fq(f)?;
    let mut roots: Vec<Fq> = fac.factors.iter().filter(|(g, _)| g.deg() == 1).map(|(g, _)| g.coeff(0).neg()).collect();
    roots.sort_by_key(Fq::index);
    Ok(roots)
}

// ---------------------------------------------------------------------------
// Over Q
// ---------------------------------------------------------------------------

type IntPoly = Vec<BigInt>;

fn trim(p: &mut IntPoly) {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

/// Content-free integer polynomial proportional to `f`, with positive leading coefficient.
fn primitive_part(f: &Poly<Rational>) -> IntPoly {
    let lcm = f.coeffs().iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let mut ints: IntPoly =
        f.coeffs().iter().map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer()).collect();
    let content = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    let sign = if ints.last().unwrap().is_negative() { -BigInt::one() } else { BigInt::one() };
    for c in ints.iter_mut() {
        *c = &*c / &content * &sign;
    }
    ints
}

fn to_rational_poly(ctx: &PolyCtx<Rational>, p: &[BigInt]) -> Poly<Rational> {
    Poly::new(ctx.clone(), p.iter().map(|c| BigRational::from_integer(c.clone())).collect())
}

/// Squarefree decomposition over Q (Yun), monic parts.
pub fn squarefree_rational(f: &Poly<Rational>) -> Result<Vec<(Poly<Rational>, usize)>, FieldError> {
    if f.is_zero() {
        return Err(FieldError::ZeroPolynomial);
    }
    let f = f.monic();
    let mut out = Vec::new();
    if f.deg() <= 0 {
        return Ok(out);
    }
    let fp = f.derivative();
    let a0 = f.gcd(&fp);
    let mut b = f.exact_div(&a0);
    let mut c = fp.exact_div(&a0);
    let mut d = c.sub(&b.derivative());
    let mut i = 1;
    while !b.is_one() {
        let a = b.gcd(&d);
        if !a.is_one() {
            out.push((a.clone(), i));
        }
        b = b.exact_div(&a);
        c = d.exact_div(&a);
        d = c.sub(&b.derivative());
        i += 1;
    }
    Ok(out)
}

/// Product of the distinct monic irreducible factors of `f` (any degree).
pub fn squarefree_part_rational(f: &Poly<Rational>) -> Result<Poly<Rational>, FieldError> {
    let ctx = f.ctx().clone();
    Ok(squarefree_rational(f)?.into_iter().fold(Poly::one(&ctx), |acc, (g, _)| acc.mul(&g)))
}

fn int_mod_poly(p: &[BigInt], ctx: &PolyCtx<Fq>) -> Poly<Fq> {
    let prime = ctx.base.p();
    Poly::new(ctx.clone(), p.iter().map(|c| Fq::from_u64(&ctx.base, reduce(c, prime))).collect())
}

fn fq_to_int(p: &Poly<Fq>) -> IntPoly {
    p.coeffs().iter().map(|c| BigInt::from(c.coeffs()[0])).collect()
}

fn int_mul(a: &[BigInt], b: &[BigInt]) -> IntPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(&mut out);
    out
}

fn int_mod(a: &[BigInt], m: &BigInt) -> IntPoly {
    let mut out: IntPoly = a.iter().map(|c| c.mod_floor(m)).collect();
    trim(&mut out);
    out
}

fn int_sub(a: &[BigInt], b: &[BigInt]) -> IntPoly {
    let n = a.len().max(b.len());
    let mut out: IntPoly =
        (0..n).map(|i| a.get(i).cloned().unwrap_or_default() - b.get(i).cloned().unwrap_or_default()).collect();
    trim(&mut out);
    out
}

fn symmetric(a: &[BigInt], m: &BigInt) -> IntPoly {
    let half = m / 2;
    let mut out: IntPoly = a
        .iter()
        .map(|c| {
            let r = c.mod_floor(m);
            if r > half {
                r - m
            } else {
                r
            }
        })
        .collect();
    trim(&mut out);
    out
}

// Lift monic g, h with f ≡ g·h (mod p) to modulus p^k; f must be monic modulo p^k.
fn hensel_lift(f: &[BigInt], g: &Poly<Fq>, h: &Poly<Fq>, p: u64, k: u32) -> IntPoly {
    let ctx = g.ctx();
    let (one, _, t) = g.ext_gcd(h);
    debug_assert!(one.is_one());
    let pb = BigInt::from(p);
    let mut gi = fq_to_int(g);
    let mut hi = fq_to_int(h);
    let mut pk = pb.clone();
    for _ in 1..k {
        let e = int_sub(f, &int_mul(&gi, &hi));
        let e_div: IntPoly = e.iter().map(|c| c / &pk).collect();
        let e_bar = int_mod_poly(&e_div, ctx);
        let sigma = e_bar.mul(&t).rem(g);
        let tau = e_bar.sub(&sigma.mul(h)).exact_div(g);
        let sigma_i: IntPoly = fq_to_int(&sigma).iter().map(|c| c * &pk).collect();
        let tau_i: IntPoly = fq_to_int(&tau).iter().map(|c| c * &pk).collect();
        gi = add_int(&gi, &sigma_i);
        hi = add_int(&hi, &tau_i);
        pk *= &pb;
        gi = int_mod(&gi, &pk);
        hi = int_mod(&hi, &pk);
    }
    gi
}

fn add_int(a: &[BigInt], b: &[BigInt]) -> IntPoly {
    let n = a.len().max(b.len());
    let mut out: IntPoly =
        (0..n).map(|i| a.get(i).cloned().unwrap_or_default() + b.get(i).cloned().unwrap_or_default()).collect();
    trim(&mut out);
    out
}

fn int_exact_div(a: &[BigInt], b: &[BigInt]) -> Option<IntPoly> {
    let lc = b.last()?;
    let mut r = a.to_vec();
    if r.len() < b.len() {
        return if r.is_empty() { Some(Vec::new()) } else { None };
    }
    let mut q = vec![BigInt::zero(); r.len() - b.len() + 1];
    for k in (0..q.len()).rev() {
        let (c, rem) = r[k + b.len() - 1].div_rem(lc);
        if !rem.is_zero() {
            return None;
        }
        for (j, bj) in b.iter().enumerate() {
            r[k + j] -= &c * bj;
        }
        q[k] = c;
    }
    if r.iter().all(Zero::is_zero) {
        trim(&mut q);
        Some(q)
    } else {
        None
    }
}

fn int_primitive(mut a: IntPoly) -> IntPoly {
    let content = a.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if a.last().is_some_and(Signed::is_negative) {
        for c in a.iter_mut() {
            *c = -&*c;
        }
    }
    for c in a.iter_mut() {
        *c = &*c / &content;
    }
    a
}

// Zassenhaus on a primitive squarefree integer polynomial of degree ≥ 1.
fn zassenhaus(f: &[BigInt]) -> Vec<IntPoly> {
    let n = f.len() - 1;
    if n == 1 {
        return vec![f.to_vec()];
    }
    let lc = f.last().unwrap().clone();
    // choose a prime keeping the degree and squarefreeness
    let mut p = 3u64;
    let ctx = loop {
        if is_prime(p) && reduce(&lc, p) != 0 {
            let ctx = PolyCtx::new(FqCtx::prime(p).unwrap(), "x");
            let fb = int_mod_poly(f, &ctx);
            if fb.gcd(&fb.derivative()).is_one() {
                break ctx;
            }
        }
        p += 2;
    };
    let fb = int_mod_poly(f, &ctx).monic();
    let modular: Vec<Poly<Fq>> = factor_fq(&fb).expect("nonzero").factors.into_iter().map(|(g, _)| g).collect();
    if modular.len() == 1 {
        return vec![f.to_vec()];
    }
    // Mignotte-style bound on factor coefficients, times lc for the recombination step
    let norm2: BigInt = f.iter().map(|c| c * c).sum();
    let bound = (BigInt::one() << n) * (norm2.sqrt() + 1u32) * lc.abs() * 2u32;
    let mut k = 1u32;
    let mut pk = BigInt::from(p);
    while pk <= bound {
        pk *= p;
        k += 1;
    }
    let lc_inv = lc.modinv(&pk).expect("p does not divide lc");
    let f_monic: IntPoly = int_mod(&f.iter().map(|c| c * &lc_inv).collect::<Vec<_>>(), &pk);
    let lifted: Vec<IntPoly> = modular
        .iter()
        .map(|g| {
            let h = fb.exact_div(g);
            hensel_lift(&f_monic, g, &h, p, k)
        })
        .collect();

    let mut remaining: Vec<usize> = (0..lifted.len()).collect();
    let mut rest = f.to_vec();
    let mut out = Vec::new();
    let mut size = 1;
    while 2 * size <= remaining.len() {
        let mut found = false;
        for subset in subsets(&remaining, size) {
            let lc_rest = rest.last().unwrap().clone();
            let mut cand = vec![lc_rest];
            for &i in &subset {
                cand = int_mod(&int_mul(&cand, &lifted[i]), &pk);
            }
            let cand = int_primitive(symmetric(&cand, &pk));
            if let Some(q) = int_exact_div(&rest, &cand) {
                out.push(cand);
                rest = q;
                remaining.retain(|i| !subset.contains(i));
                found = true;
                break;
            }
        }
        if !found {
            size += 1;
        }
    }
    if rest.len() > 1 {
        out.push(int_primitive(rest));
    }
    out
}

fn subsets(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    fn rec(items: &[usize], k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            cur.push(items[i]);
            rec(items, k, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(items, k, 0, &mut Vec::new(), &mut out);
    out
}

/// Complete factorization over Q into monic irreducibles, degree ≤ 8.
pub fn factor_rational(f: &Poly<Rational>) -> Result<Factorization<Rational>, FieldError> {
    let unit = f.lc().cloned().ok_or(FieldError::ZeroPolynomial)?;
    let degree = f.degree().unwrap();
    if degree > MAX_RATIONAL_FACTOR_DEGREE {
        return Err(FieldError::DegreeTooLarge { degree, max: MAX_RATIONAL_FACTOR_DEGREE });
    }
    let ctx = f.ctx().clone();
    let mut factors = Vec::new();
    for (g, m) in squarefree_rational(f)? {
        for h in zassenhaus(&primitive_part(&g)) {
            factors.push((to_rational_poly(&ctx, &h).monic(), m));
        }
    }
    factors.sort_by_cached_key(|(g, m)| (g.deg(), g.to_string(), *m));
    Ok(Factorization { unit, factors })
}

pub fn is_irreducible_rational(f: &Poly<Rational>) -> Result<bool, FieldError> {
    let fac = factor_rational(f)?;
    Ok(fac.factors.len() == 1 && fac.factors[0].1 == 1)
}
