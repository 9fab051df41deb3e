//! Brute-force verifiers, independent of the code paths they check.
//!
//! Each oracle validates its own output by exact substitution. Random inputs
//! come from [`Sample`] driven by a seeded ChaCha8 generator, so reports are
//! bit-identical across runs.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::conic::{ConicElement, ConicValuation, DistinguishedExtension};
use crate::fields::integer::split_prime_power;
use crate::fields::{Field, Fq, Poly, PolyCtx, RatFunc, Rational};
use crate::gauss::GaussExtension;
use crate::valuation::{DiscreteValuation, Value};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("precision {0} is too low; at least 4 is required")]
    PrecisionTooLow(u32),
    #[error("the Hensel oracle needs an even valuation, got {0}")]
    OddValue(i64),
    #[error("the Hensel oracle needs an odd prime, got {0}")]
    EvenPrime(u64),
    #[error("input must be nonzero")]
    ZeroInput,
    #[error("the degree oracle needs a nonconstant function over a prime field with p <= 13")]
    DegreeOracleInput,
}

/// `(x, y, z) ≠ 0` with `a·x² + b·y² = z²` over a finite field, first in
/// lexicographic order of element indices.
pub fn isotropy_search_finite(a: &Fq, b: &Fq) -> Option<[Fq; 3]> {
    let ctx = a.context();
    let elems: Vec<Fq> = Fq::elements(ctx).collect();
    for x in &elems {
        for y in &elems {
            let lhs = a.mul(&x.square()).add(&b.mul(&y.square()));
            for z in &elems {
                if x.is_zero() && y.is_zero() && z.is_zero() {
                    continue;
                }
                if z.square() == lhs {
                    return Some([x.clone(), y.clone(), z.clone()]);
                }
            }
        }
    }
    None
}

/// `(x, y, z) ≠ 0` with `a·x² + b·y² = z²`, integers `0 ≤ x, y ≤ bound`, visiting
/// `max(x, y) = h` as `(h, 0..=h)` then `(0..h, h)`.
pub fn isotropy_search_rational(a: &Rational, b: &Rational, bound: u64) -> Option<[Rational; 3]> {
    // a·x² + b·y² = N/(ad·bd) with N integral; a rational square iff N·ad·bd is a square
    let (an, ad) = (a.numer(), a.denom());
    let (bn, bd) = (b.numer(), b.denom());
    let scale = ad * bd;
    let check = |x: u64, y: u64| -> Option<[Rational; 3]> {
        let (xb, yb) = (BigInt::from(x), BigInt::from(y));
        let n = an * bd * &xb * &xb + bn * ad * &yb * &yb;
        if n.is_negative() {
            return None;
        }
        let m = &n * &scale;
        let r = m.sqrt();
        if &r * &r != m {
            return None;
        }
        let point = [Rational::from_integer(xb), Rational::from_integer(yb), Rational::new(r, scale.clone())];
        let [px, py, pz] = &point;
        assert_eq!(a * px * px + b * py * py, pz * pz, "isotropy oracle produced an invalid point");
        Some(point)
    };
    (1..=bound).find_map(|h| (0..=h).find_map(|y| check(h, y)).or_else(|| (0..h).find_map(|x| check(x, h))))
}

/// Degree of the minimal polynomial of `X` over `F_p(Y)`, `Y ∈ F_p(X)`.
///
/// Finds the least `n` such that `Σ_{i≤n} c_i(Y)·X^i = 0` has a nonzero solution
/// with `deg c_i ≤ 2`, as a linear system over `F_p` after clearing denominators.
pub fn degree_oracle(y: &RatFunc<Fq>) -> Result<usize, OracleError> {
    let ctx = y.poly_ctx();
    let p = ctx.base.p();
    if !ctx.base.is_prime_field() || p > 13 || y.as_constant().is_some() {
        return Err(OracleError::DegreeOracleInput);
    }
    const D: usize = 2;
    let (f, g) = (y.num(), y.den());
    // f^j g^{D−j}
    let blocks: Vec<Poly<Fq>> = (0..=D).map(|j| f.pow(j as u32).mul(&g.pow((D - j) as u32))).collect();
    for n in 1.. {
        let mut columns: Vec<Poly<Fq>> = Vec::new();
        for i in 0..=n {
            let xi = Poly::monomial(ctx, Fq::one(&ctx.base), i);
            columns.extend(blocks.iter().map(|blk| blk.mul(&xi)));
        }
        let rows = columns.iter().map(|c| c.coeffs().len()).max().unwrap_or(0);
        let matrix: Vec<Vec<u64>> =
            (0..rows).map(|r| columns.iter().map(|c| c.coeff(r).coeffs()[0]).collect()).collect();
        if rank_mod_p(matrix, p) < columns.len() {
            return Ok(n);
        }
    }
    unreachable!()
}

fn rank_mod_p(mut m: Vec<Vec<u64>>, p: u64) -> usize {
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..m.len()).find(|&r| m[r][c] != 0) else { continue };
        m.swap(rank, piv);
        let inv = crate::fields::integer::inv_mod(m[rank][c], p);
        for r in 0..m.len() {
            if r != rank && m[r][c] != 0 {
                let f = m[r][c] * inv % p;
                for k in c..cols {
                    m[r][k] = (m[r][k] + p * p - f * m[rank][k] % p) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Number of roots of `T² = a` in `Z_p` seen modulo `p^k`: roots of the unit
/// part modulo `p` lifted by `k` Newton steps, then verified.
pub fn hensel_count(p: u64, a: &Rational, k: u32) -> Result<usize, OracleError> {
    if k < 4 {
        return Err(OracleError::PrecisionTooLow(k));
    }
    if p.is_multiple_of(2) {
        return Err(OracleError::EvenPrime(p));
    }
    if Field::is_zero(a) {
        return Err(OracleError::ZeroInput);
    }
    let (en, n) = split_prime_power(a.numer(), p);
    let (ed, d) = split_prime_power(a.denom(), p);
    if (en - ed) % 2 != 0 {
        return Err(OracleError::OddValue(en - ed));
    }
    let modulus = BigInt::from(p).pow(k);
    let inv = |x: &BigInt| {
        let e = x.extended_gcd(&modulus);
        e.x.mod_floor(&modulus)
    };
    let u = (n * inv(&d)).mod_floor(&modulus);
    let mut count = 0;
    for r0 in 1..p {
        if (BigInt::from(r0 * r0) - &u).mod_floor(&BigInt::from(p)).is_zero() {
            let mut r = BigInt::from(r0);
            for _ in 0..k {
                let fr = (&r * &r - &u).mod_floor(&modulus);
                r = (&r - fr * inv(&(BigInt::from(2) * &r))).mod_floor(&modulus);
            }
            assert!((&r * &r - &u).mod_floor(&modulus).is_zero(), "Hensel lift failed to converge");
            count += 1;
        }
    }
    Ok(count)
}

/// Random elements with bounded heights and degrees.
pub trait Sample: Field {
    fn sample(ctx: &Self::Ctx, rng: &mut ChaCha8Rng) -> Self;
}

impl Sample for Rational {
    /// `n/d` with `|n| ≤ 9`, `1 ≤ d ≤ 4`.
    fn sample(_: &(), rng: &mut ChaCha8Rng) -> Self {
        Rational::new(rng.gen_range(-9..=9).into(), rng.gen_range(1..=4).into())
    }
}

impl Sample for Fq {
    fn sample(ctx: &std::sync::Arc<crate::fields::FqCtx>, rng: &mut ChaCha8Rng) -> Self {
        Fq::from_index(ctx, rng.gen_range(0..ctx.order()))
    }
}

/// Numerators of degree ≤ 2 over `K::sample` and denominators `1` or `X − c`.
///
/// Small on purpose: gcds over nested rational function fields grow quickly.
impl<K: Sample> Sample for RatFunc<K> {
    fn sample(ctx: &PolyCtx<K>, rng: &mut ChaCha8Rng) -> Self {
        let num = random_poly(ctx, rng, 2, |rng| K::sample(&ctx.base, rng));
        RatFunc::new(num, random_den(ctx, rng))
    }
}

fn random_poly<K: Field>(
    ctx: &PolyCtx<K>,
    rng: &mut ChaCha8Rng,
    max_degree: usize,
    mut coeff: impl FnMut(&mut ChaCha8Rng) -> K,
) -> Poly<K> {
    let deg = rng.gen_range(0..=max_degree);
    Poly::new(ctx.clone(), (0..=deg).map(|_| coeff(rng)).collect())
}

fn random_den<K: Sample>(ctx: &PolyCtx<K>, rng: &mut ChaCha8Rng) -> Poly<K> {
    if rng.gen_bool(0.5) {
        Poly::one(ctx)
    } else {
        Poly::x(ctx).sub(&Poly::constant(ctx, K::sample(&ctx.base, rng)))
    }
}

/// A set with a candidate valuation, for axiom fuzzing.
pub trait ValuedDomain {
    type Elem: Clone;
    fn name(&self) -> String;
    fn sample(&self, rng: &mut ChaCha8Rng) -> Self::Elem;
    fn value(&self, x: &Self::Elem) -> Value;
    fn add(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    fn mul(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    fn show(&self, x: &Self::Elem) -> String;
}

// sample · π^k with k ∈ [−2, 2], so that values spread over several integers
fn spread<B: Field>(x: B, pi: &B, rng: &mut ChaCha8Rng) -> B {
    x.mul(&pi.pow(rng.gen_range(-2..=2)))
}

/// A base valuation on its field.
pub struct BaseDomain<V>(pub V);

impl<V: DiscreteValuation> ValuedDomain for BaseDomain<V>
where
    V::Base: Sample,
{
    type Elem = V::Base;

    fn name(&self) -> String {
        self.0.describe()
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> V::Base {
        spread(V::Base::sample(&self.0.base_ctx(), rng), &self.0.uniformizer(), rng)
    }

    fn value(&self, x: &V::Base) -> Value {
        self.0.value_of(x)
    }

    fn add(&self, x: &V::Base, y: &V::Base) -> V::Base {
        x.add(y)
    }

    fn mul(&self, x: &V::Base, y: &V::Base) -> V::Base {
        x.mul(y)
    }

    fn show(&self, x: &V::Base) -> String {
        x.to_string()
    }
}

/// A Gauss extension on `E(X)`; samples are rational functions with coefficients spread in value.
pub struct GaussDomain<V: DiscreteValuation>(pub GaussExtension<V>);

impl<V: DiscreteValuation> ValuedDomain for GaussDomain<V>
where
    V::Base: Sample,
{
    type Elem = RatFunc<V::Base>;

    fn name(&self) -> String {
        self.0.describe()
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> Self::Elem {
        let v = self.0.base_valuation();
        let ctx = self.0.x_ctx().clone();
        let pi = v.uniformizer();
        let mut coeff = |rng: &mut ChaCha8Rng| spread(V::Base::sample(&v.base_ctx(), rng), &pi, rng);
        let num = random_poly(&ctx, rng, 3, &mut coeff);
        let den = loop {
            let d = random_poly(&ctx, rng, 1, &mut coeff);
            if !d.is_zero() {
                break d;
            }
        };
        RatFunc::new(num, den)
    }

    fn value(&self, x: &Self::Elem) -> Value {
        self.0.value(x).expect("Gauss extension with a generating pivot")
    }

    fn add(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem {
        x.add(y)
    }

    fn mul(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem {
        x.mul(y)
    }

    fn show(&self, x: &Self::Elem) -> String {
        x.to_string()
    }
}

/// `w★` on the conic function field; samples are `f + g·s` with `f, g` random over `E(x)`.
pub struct ConicDomain<V: ConicValuation>(pub DistinguishedExtension<V>);

impl<V: ConicValuation> ConicDomain<V>
where
    V::Base: Sample,
{
    pub fn sample_element(&self, rng: &mut ChaCha8Rng) -> ConicElement<V::Base> {
        let field = self.0.field();
        let v = self.0.valuation();
        let pi = v.uniformizer();
        let ctx = field.x_ctx().clone();
        let part = |rng: &mut ChaCha8Rng| {
            if rng.gen_bool(0.2) {
                return RatFunc::zero(&ctx);
            }
            let num = random_poly(&ctx, rng, 2, |rng| spread(V::Base::sample(&v.base_ctx(), rng), &pi, rng));
            RatFunc::new(num, random_den(&ctx, rng))
        };
        field.element(part(rng), part(rng))
    }
}

impl<V: ConicValuation> ValuedDomain for ConicDomain<V>
where
    V::Base: Sample,
{
    type Elem = ConicElement<V::Base>;

    fn name(&self) -> String {
        let f = self.0.field();
        format!("distinguished extension of the {} to (a, b) = ({}, {})", self.0.valuation().describe(), f.a(), f.b())
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> Self::Elem {
        self.sample_element(rng)
    }

    fn value(&self, x: &Self::Elem) -> Value {
        self.0.value(x)
    }

    fn add(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem {
        self.0.field().add(x, y)
    }

    fn mul(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem {
        self.0.field().mul(x, y)
    }

    fn show(&self, x: &Self::Elem) -> String {
        self.0.field().display(x)
    }
}

/// Harness self-test fixture: the wrapped value shifted by one on nonzero elements.
pub struct Corrupted<D>(pub D);

impl<D: ValuedDomain> ValuedDomain for Corrupted<D> {
    type Elem = D::Elem;

    fn name(&self) -> String {
        format!("corrupted {}", self.0.name())
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> D::Elem {
        self.0.sample(rng)
    }

    fn value(&self, x: &D::Elem) -> Value {
        self.0.value(x) + Value::int(1)
    }

    fn add(&self, x: &D::Elem, y: &D::Elem) -> D::Elem {
        self.0.add(x, y)
    }

    fn mul(&self, x: &D::Elem, y: &D::Elem) -> D::Elem {
        self.0.mul(x, y)
    }

    fn show(&self, x: &D::Elem) -> String {
        self.0.show(x)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleReport {
    pub name: String,
    /// SHA-256 of the oracle name, target, seed and sample count.
    pub digest: String,
    pub samples: usize,
    pub agreement: bool,
    /// Present exactly when `agreement` is false.
    pub counterexample: Option<String>,
}

impl fmt::Display for OracleReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} samples, {}", self.name, self.samples, if self.agreement { "agree" } else { "DISAGREE" })?;
        if let Some(c) = &self.counterexample {
            write!(f, " ({c})")?;
        }
        Ok(())
    }
}

pub fn digest(parts: &[&str]) -> String {
    let mut h = Sha256::new();
    for p in parts {
        h.update(p.as_bytes());
        h.update([0u8]);
    }
    format!("{:x}", h.finalize())
}

/// Checks `w(xy) = w(x) + w(y)` and `w(x+y) ≥ min(w(x), w(y))`, with equality
/// when the values differ, on `n` random pairs.
pub fn valuation_axiom_fuzz<D: ValuedDomain>(domain: &D, n: usize, seed: u64) -> OracleReport {
    let name = domain.name();
    let digest = digest(&["valuation_axiom_fuzz", &name, &seed.to_string(), &n.to_string()]);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counterexample = None;
    for _ in 0..n {
        let (x, y) = (domain.sample(&mut rng), domain.sample(&mut rng));
        let (vx, vy) = (domain.value(&x), domain.value(&y));
        let vm = domain.value(&domain.mul(&x, &y));
        if vm != vx + vy {
            counterexample =
                Some(format!("w(({})*({})) = {vm} but w(x) + w(y) = {}", domain.show(&x), domain.show(&y), vx + vy));
            break;
        }
        let va = domain.value(&domain.add(&x, &y));
        let m = vx.min(vy);
        if va < m || (vx != vy && va != m) {
            counterexample = Some(format!(
                "w({} + {}) = {va} violates the ultrametric law against {vx}, {vy}",
                domain.show(&x),
                domain.show(&y)
            ));
            break;
        }
    }
    OracleReport {
        name: format!("valuation axioms for {name}"),
        digest,
        samples: n,
        agreement: counterexample.is_none(),
        counterexample,
    }
}

/// `min v(a_i)` computed from scratch for a polynomial over Q at a prime `p`,
/// independent of the valuation module.
pub fn direct_padic_poly_value(p: u64, poly: &Poly<Rational>) -> Value {
    poly.coeffs()
        .iter()
        .filter(|c| !Field::is_zero(*c))
        .map(|c| {
            let (en, _) = split_prime_power(c.numer(), p);
            let (ed, _) = split_prime_power(c.denom(), p);
            en - ed
        })
        .min()
        .map_or(Value::Infinity, Value::int)
}

/// `true` when `x` is a square, by exhaustive squaring of the field.
pub fn is_square_exhaustive(x: &Fq) -> bool {
    Fq::elements(x.context()).any(|y| y.square() == *x)
}
