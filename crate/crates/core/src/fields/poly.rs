use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;

use super::{Field, FieldError};

/// Coefficient field plus the name of the polynomial variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyCtx<K: Field> {
    pub base: K::Ctx,
    pub var: Arc<str>,
}

impl<K: Field> PolyCtx<K> {
    pub fn new(base: K::Ctx, var: &str) -> Self {
        PolyCtx { base, var: Arc::from(var) }
    }

    pub fn renamed(&self, var: &str) -> Self {
        PolyCtx { base: self.base.clone(), var: Arc::from(var) }
    }
}

/// Dense univariate polynomial, lowest degree first, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly<K: Field> {
    ctx: PolyCtx<K>,
    coeffs: Vec<K>,
}

impl<K: Field> Poly<K> {
    pub fn new(ctx: PolyCtx<K>, mut coeffs: Vec<K>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { ctx, coeffs }
    }

    pub fn zero(ctx: &PolyCtx<K>) -> Self {
        Poly { ctx: ctx.clone(), coeffs: Vec::new() }
    }

    pub fn one(ctx: &PolyCtx<K>) -> Self {
        Self::constant(ctx, K::one(&ctx.base))
    }

    pub fn constant(ctx: &PolyCtx<K>, c: K) -> Self {
        Self::new(ctx.clone(), vec![c])
    }

    /// The variable itself.
    pub fn x(ctx: &PolyCtx<K>) -> Self {
        Self::monomial(ctx, K::one(&ctx.base), 1)
    }

    pub fn monomial(ctx: &PolyCtx<K>, c: K, n: usize) -> Self {
        let mut coeffs = vec![K::zero(&ctx.base); n];
        coeffs.push(c);
        Self::new(ctx.clone(), coeffs)
    }

    pub fn from_i64s(ctx: &PolyCtx<K>, cs: &[i64]) -> Self {
        Self::new(ctx.clone(), cs.iter().map(|&c| K::from_i64(&ctx.base, c)).collect())
    }

    pub fn ctx(&self) -> &PolyCtx<K> {
        &self.ctx
    }

    pub fn var(&self) -> &str {
        &self.ctx.var
    }

    pub fn coeffs(&self) -> &[K] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<K> {
        self.coeffs
    }

    pub fn coeff(&self, i: usize) -> K {
        self.coeffs.get(i).cloned().unwrap_or_else(|| K::zero(&self.ctx.base))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the convention `deg 0 = -1`.
    pub fn deg(&self) -> isize {
        self.coeffs.len() as isize - 1
    }

    pub fn lc(&self) -> Option<&K> {
        self.coeffs.last()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn is_monic(&self) -> bool {
        self.lc().is_some_and(|c| c.is_one())
    }

    pub fn term_count(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| match (self.coeffs.get(i), other.coeffs.get(i)) {
                (Some(a), Some(b)) => a.add(b),
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            })
            .collect();
        Self::new(self.ctx.clone(), coeffs)
    }

    pub fn neg(&self) -> Self {
        Poly { ctx: self.ctx.clone(), coeffs: self.coeffs.iter().map(K::neg).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(&self.ctx);
        }
        let zero = K::zero(&self.ctx.base);
        let mut out = vec![zero; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] = out[i + j].add(&a.mul(b));
                }
            }
        }
        Self::new(self.ctx.clone(), out)
    }

    pub fn scale(&self, c: &K) -> Self {
        Self::new(self.ctx.clone(), self.coeffs.iter().map(|a| a.mul(c)).collect())
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut acc = Self::one(&self.ctx);
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

    /// Euclidean division; panics when `d` is zero.
    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        self.try_divrem(d).expect("polynomial division by zero")
    }

    pub fn try_divrem(&self, d: &Self) -> Result<(Self, Self), FieldError> {
        let dd = d.degree().ok_or(FieldError::DivisionByZero)?;
        let inv_lc = d.lc().unwrap().inv();
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return Ok((Self::zero(&self.ctx), self.clone()));
        }
        let mut q = vec![K::zero(&self.ctx.base); r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = r[k + dd].mul(&inv_lc);
            if !c.is_zero() {
                for (j, dj) in d.coeffs.iter().enumerate() {
                    r[k + j] = r[k + j].sub(&c.mul(dj));
                }
            }
            q[k] = c;
        }
        r.truncate(dd);
        Ok((Self::new(self.ctx.clone(), q), Self::new(self.ctx.clone(), r)))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.divrem(d).1
    }

    /// Quotient of an exact division (checked in debug builds).
    pub fn exact_div(&self, d: &Self) -> Self {
        let (q, r) = self.divrem(d);
        debug_assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    pub fn divides(&self, other: &Self) -> bool {
        !self.is_zero() && other.rem(self).is_zero()
    }

    pub fn monic(&self) -> Self {
        match self.lc() {
            None => self.clone(),
            Some(c) if c.is_one() => self.clone(),
            Some(c) => self.scale(&c.inv()),
        }
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.monic(), other.monic());
        if a.degree() == Some(0) || b.degree() == Some(0) {
            return Self::one(&self.ctx);
        }
        // a monic linear factor X − r divides the other side iff r is a root
        for (lin, other) in [(&a, &b), (&b, &a)] {
            if lin.degree() == Some(1) && !other.is_zero() {
                let root = lin.coeffs[0].neg();
                return if other.eval(&root).is_zero() { lin.clone() } else { Self::one(&self.ctx) };
            }
        }
        if !a.is_zero() && !b.is_zero() {
            if let Some(g) = K::poly_gcd(&a, &b) {
                return g;
            }
        }
        while !b.is_zero() {
            if b.degree() == Some(0) {
                return Self::one(&self.ctx);
            }
            // monic remainders keep coefficient growth in check over K(t)
            let r = a.rem(&b).monic();
            a = b;
            b = r;
        }
        a
    }

    /// `(g, s, t)` with `s·self + t·other = g`, `g` the monic gcd.
    pub fn ext_gcd(&self, other: &Self) -> (Self, Self, Self) {
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Self::one(&self.ctx), Self::zero(&self.ctx));
        let (mut t0, mut t1) = (Self::zero(&self.ctx), Self::one(&self.ctx));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1);
            r0 = std::mem::replace(&mut r1, r);
            let s = s0.sub(&q.mul(&s1));
            s0 = std::mem::replace(&mut s1, s);
            let t = t0.sub(&q.mul(&t1));
            t0 = std::mem::replace(&mut t1, t);
        }
        match r0.lc().cloned() {
            None => (r0, s0, t0),
            Some(c) => {
                let ci = c.inv();
                (r0.scale(&ci), s0.scale(&ci), t0.scale(&ci))
            }
        }
    }

    pub fn eval(&self, x: &K) -> K {
        let mut acc = K::zero(&self.ctx.base);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(c);
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c.mul(&K::from_i64(&self.ctx.base, i as i64)))
            .collect();
        Self::new(self.ctx.clone(), coeffs)
    }

    /// `self(inner)`, in the context of `inner`.
    pub fn compose(&self, inner: &Self) -> Self {
        let mut acc = Self::zero(&inner.ctx);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(inner).add(&Self::constant(&inner.ctx, c.clone()));
        }
        acc
    }

    /// `self(-x)`.
    pub fn reflect(&self) -> Self {
        let coeffs =
            self.coeffs.iter().enumerate().map(|(i, c)| if i % 2 == 1 { c.neg() } else { c.clone() }).collect();
        Self::new(self.ctx.clone(), coeffs)
    }

    /// Split `self = even(x²) + x·odd(x²)`, returning `(even, odd)` in `ctx`.
    pub fn even_odd(&self, ctx: &PolyCtx<K>) -> (Self, Self) {
        let even = self.coeffs.iter().step_by(2).cloned().collect();
        let odd = self.coeffs.iter().skip(1).step_by(2).cloned().collect();
        (Self::new(ctx.clone(), even), Self::new(ctx.clone(), odd))
    }

    /// `self(x^k)` in `ctx`.
    pub fn inflate(&self, k: usize, ctx: &PolyCtx<K>) -> Self {
        let zero = K::zero(&ctx.base);
        let mut out = vec![zero; self.coeffs.len().saturating_sub(1) * k + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i * k] = c.clone();
        }
        Self::new(ctx.clone(), out)
    }

    pub fn is_even(&self) -> bool {
        self.coeffs.iter().skip(1).step_by(2).all(K::is_zero)
    }

    pub fn map<L: Field>(&self, ctx: &PolyCtx<L>, f: impl Fn(&K) -> L) -> Poly<L> {
        Poly::new(ctx.clone(), self.coeffs.iter().map(f).collect())
    }

    /// `self^e mod m`.
    pub fn powmod(&self, e: &BigUint, m: &Self) -> Self {
        let mut acc = Self::one(&self.ctx).rem(m);
        let base = self.rem(m);
        for i in (0..e.bits()).rev() {
            acc = acc.mul(&acc).rem(m);
            if e.bit(i) {
                acc = acc.mul(&base).rem(m);
            }
        }
        acc
    }

    /// Square root in characteristic ≠ 2, when `self` is a square.
    pub fn sqrt(&self) -> Option<Self> {
        let Some(n) = self.degree() else {
            return Some(self.clone());
        };
        if n % 2 == 1 {
            return None;
        }
        let m = n / 2;
        let top = self.lc().unwrap().sqrt()?;
        let two_top_inv = top.add(&top).inv();
        let zero = K::zero(&self.ctx.base);
        let mut h = vec![zero; m + 1];
        h[m] = top;
        for k in 1..=m {
            let target = 2 * m - k;
            let mut acc = self.coeff(target);
            for i in (m - k + 1)..=m {
                let j = target - i;
                if j > m - k && j <= m {
                    acc = acc.sub(&h[i].mul(&h[j]));
                }
            }
            h[m - k] = acc.mul(&two_top_inv);
        }
        let root = Self::new(self.ctx.clone(), h);
        if root.mul(&root) == *self {
            Some(root)
        } else {
            None
        }
    }
}

impl<K: Field> fmt::Display for Poly<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let var = &self.ctx.var;
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mut s = c.to_string();
            let negative = c.is_atomic() && s.starts_with('-');
            if negative {
                s.remove(0);
            }
            if first {
                if negative {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if negative { " - " } else { " + " })?;
            }
            first = false;
            if !c.is_atomic() {
                s = format!("({s})");
            }
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            if i == 0 {
                write!(f, "{s}")?;
            } else if s == "1" {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{s}*{mono}")?;
            }
        }
        Ok(())
    }
}
