use std::fmt;

use num_bigint::BigInt;

use super::{Field, Poly, PolyCtx};

/// Rational function `num/den` in canonical form: coprime, `den` monic,
/// zero stored as `0/1`. Two equal functions have identical representations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatFunc<K: Field> {
    num: Poly<K>,
    den: Poly<K>,
}

impl<K: Field> RatFunc<K> {
    /// Canonicalizes `num/den`; panics when `den` is zero.
    pub fn new(num: Poly<K>, den: Poly<K>) -> Self {
        assert!(!den.is_zero(), "rational function with zero denominator");
        if num.is_zero() {
            return Self::from_poly(num);
        }
        let g = num.gcd(&den);
        let (num, den) = if g.is_one() { (num, den) } else { (num.exact_div(&g), den.exact_div(&g)) };
        let lc = den.lc().unwrap().clone();
        if lc.is_one() {
            RatFunc { num, den }
        } else {
            let inv = lc.inv();
            RatFunc { num: num.scale(&inv), den: den.scale(&inv) }
        }
    }

    pub fn from_poly(p: Poly<K>) -> Self {
        let den = Poly::one(p.ctx());
        RatFunc { num: p, den }
    }

    pub fn constant(ctx: &PolyCtx<K>, c: K) -> Self {
        Self::from_poly(Poly::constant(ctx, c))
    }

    /// The variable of the context.
    pub fn var(ctx: &PolyCtx<K>) -> Self {
        Self::from_poly(Poly::x(ctx))
    }

    pub fn num(&self) -> &Poly<K> {
        &self.num
    }

    pub fn den(&self) -> &Poly<K> {
        &self.den
    }

    pub fn poly_ctx(&self) -> &PolyCtx<K> {
        self.num.ctx()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    /// The constant value when the function lies in `K`.
    pub fn as_constant(&self) -> Option<K> {
        if self.den.is_one() && self.num.is_constant() {
            Some(self.num.coeff(0))
        } else {
            None
        }
    }

    /// Value at a point, `None` at a pole.
    pub fn eval(&self, x: &K) -> Option<K> {
        let d = self.den.eval(x);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval(x).div(&d))
        }
    }

    /// Substitute `inner` for the variable; the result lives in `inner`'s context.
    pub fn compose(&self, inner: &Self) -> Self {
        let horner = |p: &Poly<K>| {
            let mut acc = Self::zero(inner.poly_ctx());
            for c in p.coeffs().iter().rev() {
                acc = acc.mul(inner).add(&Self::constant(inner.poly_ctx(), c.clone()));
            }
            acc
        };
        horner(&self.num).div(&horner(&self.den))
    }

    pub fn map<L: Field>(&self, ctx: &PolyCtx<L>, f: impl Fn(&K) -> L) -> RatFunc<L> {
        RatFunc::new(self.num.map(ctx, &f), self.den.map(ctx, &f))
    }

    /// The same function with its variable renamed.
    pub fn renamed(&self, var: &str) -> Self {
        let ctx = self.poly_ctx().renamed(var);
        RatFunc {
            num: Poly::new(ctx.clone(), self.num.coeffs().to_vec()),
            den: Poly::new(ctx, self.den.coeffs().to_vec()),
        }
    }
}

// Where no coefficient has a pole at t = c and both leading coefficients
// survive, specialization can only raise the degree of the gcd, so a constant
// specialized gcd proves coprimality.
fn certainly_coprime<K: Field>(a: &Poly<RatFunc<K>>, b: &Poly<RatFunc<K>>) -> bool {
    let inner = &a.ctx().base;
    let outer = PolyCtx::new(inner.base.clone(), &a.ctx().var);
    let specialize = |p: &Poly<RatFunc<K>>, c: &K| -> Option<Poly<K>> {
        let coeffs = p.coeffs().iter().map(|f| f.eval(c)).collect::<Option<Vec<K>>>()?;
        let q = Poly::new(outer.clone(), coeffs);
        (q.degree() == p.degree()).then_some(q)
    };
    [1, -1, 2, 3, -2].iter().any(|&n| {
        let c = K::from_i64(&inner.base, n);
        match (specialize(a, &c), specialize(b, &c)) {
            (Some(x), Some(y)) => x.gcd(&y).degree() == Some(0),
            _ => false,
        }
    })
}

// coefficients in K[t] of a nonzero multiple of p by an element of K[t]
fn clear_denominators<K: Field>(p: &Poly<RatFunc<K>>) -> Vec<Poly<K>> {
    let lcm = p.coeffs().iter().fold(Poly::one(&p.ctx().base), |l, c| {
        let g = l.gcd(c.den());
        l.mul(&c.den().exact_div(&g))
    });
    p.coeffs().iter().map(|c| c.num().mul(&lcm.exact_div(c.den()))).collect()
}

// divides out the content (gcd of the coefficients); trailing zeros are dropped
fn primitive<K: Field>(mut p: Vec<Poly<K>>) -> Vec<Poly<K>> {
    while p.last().is_some_and(Poly::is_zero) {
        p.pop();
    }
    let Some(first) = p.iter().find(|c| !c.is_zero()) else { return p };
    let mut content = first.monic();
    for c in &p {
        if content.is_one() {
            break;
        }
        content = content.gcd(c);
    }
    if content.is_one() {
        p
    } else {
        p.iter().map(|c| c.exact_div(&content)).collect()
    }
}

// lc(b)^(deg a − deg b + 1)·a mod b, coefficients in K[t]
fn pseudo_rem<K: Field>(a: &[Poly<K>], b: &[Poly<K>]) -> Vec<Poly<K>> {
    let mut r = a.to_vec();
    let lb = b.last().unwrap();
    while r.len() >= b.len() {
        let lr = r.pop().unwrap();
        let shift = r.len() + 1 - b.len();
        for c in r.iter_mut() {
            *c = c.mul(lb);
        }
        for (j, bj) in b[..b.len() - 1].iter().enumerate() {
            r[shift + j] = r[shift + j].sub(&lr.mul(bj));
        }
        while r.last().is_some_and(Poly::is_zero) {
            r.pop();
        }
    }
    r
}

impl<K: Field> Field for RatFunc<K> {
    type Ctx = PolyCtx<K>;

    fn ctx(&self) -> PolyCtx<K> {
        self.num.ctx().clone()
    }

    fn zero(ctx: &PolyCtx<K>) -> Self {
        Self::from_poly(Poly::zero(ctx))
    }

    fn one(ctx: &PolyCtx<K>) -> Self {
        Self::from_poly(Poly::one(ctx))
    }

    fn from_bigint(ctx: &PolyCtx<K>, n: &BigInt) -> Self {
        Self::constant(ctx, K::from_bigint(&ctx.base, n))
    }

    fn characteristic(ctx: &PolyCtx<K>) -> u64 {
        K::characteristic(&ctx.base)
    }

    /// A specialization test for coprimality first, then a primitive
    /// pseudo-remainder sequence over `K[t]`, which avoids the coefficient
    /// growth of Euclid over `K(t)`.
    fn poly_gcd(a: &Poly<Self>, b: &Poly<Self>) -> Option<Poly<Self>> {
        if certainly_coprime(a, b) {
            return Some(Poly::one(a.ctx()));
        }
        let (mut r0, mut r1) = (primitive(clear_denominators(a)), primitive(clear_denominators(b)));
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
        let g = if r1.is_empty() { r0 } else { vec![Poly::one(&a.ctx().base)] };
        let ctx = a.ctx();
        Some(Poly::new(ctx.clone(), g.into_iter().map(RatFunc::from_poly).collect()).monic())
    }

    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    fn add(&self, other: &Self) -> Self {
        if self.den == other.den {
            return Self::new(self.num.add(&other.num), self.den.clone());
        }
        // a/b + c/d = (a·d' + c·b')/(b'·d) with b = g·b', d = g·d'; only g can cancel
        let g = self.den.gcd(&other.den);
        if g.is_one() {
            let num = self.num.mul(&other.den).add(&other.num.mul(&self.den));
            if num.is_zero() {
                return Self::zero(self.poly_ctx());
            }
            return RatFunc { num, den: self.den.mul(&other.den) };
        }
        let (b1, d1) = (self.den.exact_div(&g), other.den.exact_div(&g));
        let num = self.num.mul(&d1).add(&other.num.mul(&b1));
        if num.is_zero() {
            return Self::zero(self.poly_ctx());
        }
        let h = num.gcd(&g);
        let (num, g) = if h.is_one() { (num, g) } else { (num.exact_div(&h), g.exact_div(&h)) };
        RatFunc { num, den: b1.mul(&g).mul(&d1) }
    }

    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.poly_ctx());
        }
        // cross-cancel first to keep the gcd small
        let g1 = self.num.gcd(&other.den);
        let g2 = other.num.gcd(&self.den);
        let n = self.num.exact_div(&g1).mul(&other.num.exact_div(&g2));
        let d = self.den.exact_div(&g2).mul(&other.den.exact_div(&g1));
        let lc = d.lc().unwrap().clone();
        if lc.is_one() {
            RatFunc { num: n, den: d }
        } else {
            let inv = lc.inv();
            RatFunc { num: n.scale(&inv), den: d.scale(&inv) }
        }
    }

    fn neg(&self) -> Self {
        RatFunc { num: self.num.neg(), den: self.den.clone() }
    }

    fn inv(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero");
        let lc = self.num.lc().unwrap().inv();
        RatFunc { num: self.den.scale(&lc), den: self.num.scale(&lc) }
    }

    fn sqrt(&self) -> Option<Self> {
        let n = self.num.sqrt()?;
        let d = self.den.sqrt()?;
        Some(Self::new(n, d))
    }

    fn is_atomic(&self) -> bool {
        if self.den.is_one() {
            self.num.term_count() <= 1 && self.num.coeffs().last().is_none_or(|c| c.is_atomic())
        } else {
            true
        }
    }
}

fn grouped<K: Field>(p: &Poly<K>) -> String {
    if p.term_count() <= 1 && p.lc().is_none_or(|c| c.is_atomic() && !c.to_string().starts_with('-')) {
        p.to_string()
    } else {
        format!("({p})")
    }
}

impl<K: Field> fmt::Display for RatFunc<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", grouped(&self.num), grouped(&self.den))
        }
    }
}
