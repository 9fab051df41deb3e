//! Quaternion algebras `(a,b)_E`, their normalization with respect to a
//! valuation, residue algebras, splitting tests and Hilbert symbols.
//!
//! A splitting certificate is a nontrivial point `(x, y, z)` of the conic
//! `a·x² + b·y² = z²`; the algebra is split exactly when such a point exists.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::fields::factor::factor_fq;
use crate::fields::integer::{legendre, prime_divisors, split_prime_power};
use crate::fields::{Field, FieldError, Fq, Poly, RatFunc, Rational};
use crate::valuation::{DiscreteValuation, ValuationError};

/// Default height bound for point searches over Q.
pub const DEFAULT_SEARCH_BOUND: u64 = 200;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuatError {
    #[error("the normalized presentation is not unit-unit; the residue algebra is undefined")]
    NotUnitUnit,
    #[error("unsupported coefficient field: {0}")]
    UnsupportedField(String),
    #[error("no witness found: {0}")]
    WitnessNotFound(String),
    #[error("quaternion entries must be nonzero")]
    ZeroInput,
    #[error(transparent)]
    Valuation(#[from] ValuationError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// The algebra with basis `1, i, j, ij`, `i² = a`, `j² = b`, `ij = −ji`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuaternionAlgebra<K: Field> {
    pub a: K,
    pub b: K,
}

impl<K: Field> QuaternionAlgebra<K> {
    pub fn new(a: K, b: K) -> Result<Self, QuatError> {
        if a.is_zero() || b.is_zero() {
            return Err(QuatError::ZeroInput);
        }
        Ok(QuaternionAlgebra { a, b })
    }

    /// Whether `(x, y, z)` is a nontrivial point of `a·x² + b·y² = z²`.
    pub fn is_point(&self, p: &[K; 3]) -> bool {
        let [x, y, z] = p;
        !(x.is_zero() && y.is_zero() && z.is_zero())
            && self.a.mul(&x.square()).add(&self.b.mul(&y.square())) == z.square()
    }

    pub fn apply(&self, m: &Move<K>) -> Self {
        let (a, b) = (&self.a, &self.b);
        match m {
            Move::ScaleA(c) => QuaternionAlgebra { a: a.mul(&c.square()), b: b.clone() },
            Move::ScaleB(c) => QuaternionAlgebra { a: a.clone(), b: b.mul(&c.square()) },
            Move::Swap => QuaternionAlgebra { a: b.clone(), b: a.clone() },
            Move::ReplaceB => QuaternionAlgebra { a: a.clone(), b: a.mul(b).neg() },
        }
    }

    pub fn replay(&self, transcript: &[Move<K>]) -> Self {
        transcript.iter().fold(self.clone(), |q, m| q.apply(m))
    }
}

impl<K: Field> fmt::Display for QuaternionAlgebra<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.a, self.b)
    }
}

/// A presentation move; each yields an isomorphic algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Move<K: Field> {
    /// `a ↦ a·c²`
    ScaleA(K),
    /// `b ↦ b·c²`
    ScaleB(K),
    /// `(a, b) ↦ (b, a)`
    Swap,
    /// `b ↦ −ab`
    ReplaceB,
}

impl<K: Field> fmt::Display for Move<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Move::ScaleA(c) => write!(f, "scale a by ({c})^2"),
            Move::ScaleB(c) => write!(f, "scale b by ({c})^2"),
            Move::Swap => write!(f, "swap a and b"),
            Move::ReplaceB => write!(f, "replace b by -ab"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Shape {
    /// `v(a) = v(b) = 0`
    UnitUnit,
    /// `v(a) = 1`, `v(b) = 0`
    OddUnit,
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Shape::UnitUnit => "unit_unit",
            Shape::OddUnit => "odd_unit",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalizedPresentation<K: Field> {
    pub algebra: QuaternionAlgebra<K>,
    pub shape: Shape,
    pub transcript: Vec<Move<K>>,
}

/// Brings `(a, b)` to `v(a), v(b) ∈ {(0,0), (1,0)}` by square scalings, a swap,
/// and `b ↦ −ab`. Unit parts that are squares in `E` are scaled to 1.
pub fn normalize<V: DiscreteValuation>(
    q: &QuaternionAlgebra<V::Base>,
    v: &V,
) -> Result<NormalizedPresentation<V::Base>, QuatError> {
    let pi = v.uniformizer();
    let mut cur = q.clone();
    let mut transcript = Vec::new();
    let mut push = |cur: &mut QuaternionAlgebra<V::Base>, m: Move<V::Base>| {
        *cur = cur.apply(&m);
        transcript.push(m);
    };
    let order = |x: &V::Base| v.order(x).ok_or(QuatError::ZeroInput);

    let ma = order(&cur.a)?;
    if ma.div_euclid(2) != 0 {
        push(&mut cur, Move::ScaleA(pi.pow(-ma.div_euclid(2))));
    }
    let mb = order(&cur.b)?;
    if mb.div_euclid(2) != 0 {
        push(&mut cur, Move::ScaleB(pi.pow(-mb.div_euclid(2))));
    }
    match (ma.rem_euclid(2), mb.rem_euclid(2)) {
        (0, 1) => push(&mut cur, Move::Swap),
        (1, 1) => {
            push(&mut cur, Move::ReplaceB);
            push(&mut cur, Move::ScaleB(pi.inv()));
        }
        _ => {}
    }
    for first in [true, false] {
        let x = if first { &cur.a } else { &cur.b };
        let (_, u) = v.unit_part(x)?;
        if !u.is_one() {
            if let Some(w) = u.sqrt() {
                let c = w.inv();
                push(&mut cur, if first { Move::ScaleA(c) } else { Move::ScaleB(c) });
            }
        }
    }
    let shape = if order(&cur.a)? == 0 { Shape::UnitUnit } else { Shape::OddUnit };
    debug_assert_eq!(order(&cur.b)?, 0);
    Ok(NormalizedPresentation { algebra: cur, shape, transcript })
}

/// `(ā', b̄')` over κ for a unit-unit normalization.
pub fn residue_algebra<V: DiscreteValuation>(
    q: &QuaternionAlgebra<V::Base>,
    v: &V,
) -> Result<QuaternionAlgebra<V::Residue>, QuatError> {
    let n = normalize(q, v)?;
    if n.shape != Shape::UnitUnit {
        return Err(QuatError::NotUnitUnit);
    }
    Ok(QuaternionAlgebra { a: v.residue_of(&n.algebra.a)?, b: v.residue_of(&n.algebra.b)? })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitResult<K: Field> {
    pub split: bool,
    /// A verified point of `a·x² + b·y² = z²`, when one was found.
    pub certificate: Option<[K; 3]>,
}

/// Coefficient fields over which splitting of `(a, b)` is decided.
pub trait SplitField: Field {
    /// `search_bound` limits point searches over infinite fields.
    fn split_test(q: &QuaternionAlgebra<Self>, search_bound: u64) -> Result<SplitResult<Self>, QuatError>;

    /// A short name such as `Q`, `F_9` or `F_3(t)`.
    fn field_name(ctx: &Self::Ctx) -> String;

    /// `(x₀, y₀)` with `a·x₀² + b = y₀²` and `y₀ ≠ 0`, preferring `x₀ ≠ 0`.
    fn conic_center(_a: &Self, _b: &Self, _search_bound: u64) -> Option<(Self, Self)> {
        None
    }
}

pub fn is_split<K: SplitField>(q: &QuaternionAlgebra<K>, search_bound: u64) -> Result<SplitResult<K>, QuatError> {
    let r = K::split_test(q, search_bound)?;
    if let Some(p) = &r.certificate {
        assert!(q.is_point(p), "invalid splitting certificate {p:?} for {q}");
    }
    Ok(r)
}

/// The point of `(a, b)` coming from `a`, `b` or `−ab` being a square, if any.
pub fn trivial_certificate<K: Field>(q: &QuaternionAlgebra<K>) -> Option<[K; 3]> {
    let ctx = q.a.ctx();
    let (zero, one) = (K::zero(&ctx), K::one(&ctx));
    if let Some(w) = q.a.sqrt() {
        return Some([one, zero, w]);
    }
    if let Some(w) = q.b.sqrt() {
        return Some([zero, one, w]);
    }
    // a·b² + b·(−ab) = 0
    q.a.mul(&q.b).neg().sqrt().map(|w| [q.b.clone(), w, zero])
}

impl SplitField for Fq {
    /// Always split. Prefers `(x, 1, z)` with `x, z ≠ 0`, then `x = 0`, then any point.
    fn split_test(q: &QuaternionAlgebra<Fq>, _search_bound: u64) -> Result<SplitResult<Fq>, QuatError> {
        let ctx = q.a.context();
        let one = Fq::one(ctx);
        let on_line = |x: &Fq| q.a.mul(&x.square()).add(&q.b).sqrt().map(|z| [x.clone(), one.clone(), z]);
        let point = Fq::elements(ctx)
            .skip(1)
            .filter_map(|x| on_line(&x))
            .find(|p| !p[2].is_zero())
            .or_else(|| on_line(&Fq::zero(ctx)).filter(|p| !p[2].is_zero()))
            .or_else(|| trivial_certificate(q))
            .or_else(|| {
                Fq::elements(ctx).find_map(|x| {
                    Fq::elements(ctx).find_map(|y| {
                        let p = q.a.mul(&x.square()).add(&q.b.mul(&y.square())).sqrt()?;
                        let pt = [x.clone(), y.clone(), p];
                        q.is_point(&pt).then_some(pt)
                    })
                })
            });
        let point = point.ok_or_else(|| QuatError::WitnessNotFound(format!("{q} over F_{}", ctx.order())))?;
        Ok(SplitResult { split: true, certificate: Some(point) })
    }

    fn field_name(ctx: &std::sync::Arc<crate::fields::FqCtx>) -> String {
        format!("F_{}", ctx.order())
    }

    fn conic_center(a: &Fq, b: &Fq, _search_bound: u64) -> Option<(Fq, Fq)> {
        let ctx = a.context();
        let at = |x: Fq| {
            let y = a.mul(&x.square()).add(b).sqrt()?;
            (!y.is_zero()).then_some((x, y))
        };
        Fq::elements(ctx).skip(1).find_map(at).or_else(|| at(Fq::zero(ctx)))
    }
}

/// A place of Q: a prime, or the real place.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum QPlace {
    Prime(u64),
    Infinity,
}

impl fmt::Display for QPlace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QPlace::Prime(p) => write!(f, "{p}"),
            QPlace::Infinity => write!(f, "inf"),
        }
    }
}

fn unit_mod(n: &BigInt, m: u32) -> u32 {
    n.mod_floor(&BigInt::from(m)).to_u32().unwrap()
}

/// The Hilbert symbol `(a, b)_place` over Q for nonzero `a`, `b`.
pub fn hilbert_symbol(a: &Rational, b: &Rational, place: QPlace) -> Result<i8, QuatError> {
    if Field::is_zero(a) || Field::is_zero(b) {
        return Err(QuatError::ZeroInput);
    }
    let p = match place {
        QPlace::Infinity => return Ok(if a.is_negative() && b.is_negative() { -1 } else { 1 }),
        QPlace::Prime(p) => p,
    };
    // x = p^α · n/d with n, d prime to p; returns (α, n·d), a unit with the same square class
    let split = |x: &Rational| {
        let (en, n) = split_prime_power(x.numer(), p);
        let (ed, d) = split_prime_power(x.denom(), p);
        (en - ed, n * d)
    };
    let (alpha, u) = split(a);
    let (beta, v) = split(b);
    if p == 2 {
        let eps = |u: &BigInt| ((unit_mod(u, 8) - 1) / 2) % 2;
        let omega = |u: &BigInt| {
            let r = unit_mod(u, 8);
            ((r * r - 1) / 8) % 2
        };
        let e = eps(&u) * eps(&v) + (alpha.rem_euclid(2) as u32) * omega(&v) + (beta.rem_euclid(2) as u32) * omega(&u);
        return Ok(if e.is_multiple_of(2) { 1 } else { -1 });
    }
    let mut s: i8 = 1;
    if (alpha * beta).rem_euclid(2) == 1 && ((p - 1) / 2) % 2 == 1 {
        s = -s;
    }
    if beta.rem_euclid(2) == 1 {
        s *= legendre(&u, p);
    }
    if alpha.rem_euclid(2) == 1 {
        s *= legendre(&v, p);
    }
    Ok(s)
}

/// `∞`, `2`, and the odd primes dividing a numerator or denominator of the entries.
pub fn relevant_places(entries: &[&Rational]) -> Result<Vec<QPlace>, QuatError> {
    let mut primes = vec![2u64];
    for x in entries {
        for n in [x.numer(), x.denom()] {
            if !n.is_zero() {
                primes.extend(prime_divisors(n)?);
            }
        }
    }
    primes.sort_unstable();
    primes.dedup();
    let mut places: Vec<QPlace> = primes.into_iter().map(QPlace::Prime).collect();
    places.push(QPlace::Infinity);
    Ok(places)
}

/// The places where `(a, b)` over Q ramifies.
pub fn ramification_set(q: &QuaternionAlgebra<Rational>) -> Result<Vec<QPlace>, QuatError> {
    let mut out = Vec::new();
    for place in relevant_places(&[&q.a, &q.b])? {
        if hilbert_symbol(&q.a, &q.b, place)? == -1 {
            out.push(place);
        }
    }
    Ok(out)
}

/// Whether two algebras over Q are isomorphic (equal ramification sets).
pub fn quaternion_isomorphic(
    q1: &QuaternionAlgebra<Rational>,
    q2: &QuaternionAlgebra<Rational>,
) -> Result<bool, QuatError> {
    for place in relevant_places(&[&q1.a, &q1.b, &q2.a, &q2.b])? {
        if hilbert_symbol(&q1.a, &q1.b, place)? != hilbert_symbol(&q2.a, &q2.b, place)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Points of `a·x² + b·y² = z²` with integers `0 ≤ x, y ≤ bound`, by increasing `max(x, y)`.
fn rational_point_search(q: &QuaternionAlgebra<Rational>, bound: u64) -> Option<[Rational; 3]> {
    let check = |x: u64, y: u64| {
        let (x, y) = (Rational::from_integer(x.into()), Rational::from_integer(y.into()));
        let z = q.a.mul(&x.square()).add(&q.b.mul(&y.square())).sqrt()?;
        Some([x, y, z])
    };
    (1..=bound).find_map(|h| (0..=h).find_map(|x| check(x, h)).or_else(|| (0..h).find_map(|y| check(h, y))))
}

impl SplitField for Rational {
    fn split_test(q: &QuaternionAlgebra<Rational>, search_bound: u64) -> Result<SplitResult<Rational>, QuatError> {
        let split = ramification_set(q)?.is_empty();
        let certificate = if split { rational_point_search(q, search_bound) } else { None };
        Ok(SplitResult { split, certificate })
    }

    fn field_name(_: &()) -> String {
        "Q".into()
    }

    /// Searches `x₀ = X/Y` with integers `0 ≤ X, 1 ≤ Y ≤ bound`, then `x₀ = 0`.
    fn conic_center(a: &Rational, b: &Rational, search_bound: u64) -> Option<(Rational, Rational)> {
        let at = |x: u64, y: u64| {
            let x0 = Rational::new(x.into(), y.into());
            let y0 = a.mul(&x0.square()).add(b).sqrt()?;
            (!Field::is_zero(&y0)).then_some((x0, y0))
        };
        (1..=search_bound)
            .find_map(|h| (1..=h).find_map(|x| at(x, h)).or_else(|| (1..h).find_map(|y| at(h, y))))
            .or_else(|| at(0, 1))
    }
}

/// Quadratic character of the residue of a polynomial prime to `pi`.
fn char_mod(f: &Poly<Fq>, pi: &Poly<Fq>) -> i8 {
    let q = f.ctx().base.order();
    let k = pi.degree().unwrap() as u32;
    let e = (BigUint::from(q).pow(k) - BigUint::one()) / BigUint::from(2u32);
    let r = f.powmod(&e, pi);
    if r.is_one() {
        1
    } else {
        debug_assert_eq!(r, Poly::one(f.ctx()).neg());
        -1
    }
}

fn multiplicity(f: &Poly<Fq>, pi: &Poly<Fq>) -> (i64, Poly<Fq>) {
    let mut m = 0;
    let mut g = f.clone();
    loop {
        let (q, r) = g.divrem(pi);
        if !r.is_zero() {
            return (m, g);
        }
        g = q;
        m += 1;
    }
}

/// The local symbol `(a, b)` at the place `pi` of `F_q(t)`; `None` means infinity.
pub fn fq_local_symbol(a: &RatFunc<Fq>, b: &RatFunc<Fq>, pi: Option<&Poly<Fq>>) -> i8 {
    match pi {
        Some(pi) => {
            let split = |x: &RatFunc<Fq>| {
                let (en, n) = multiplicity(x.num(), pi);
                let (ed, d) = multiplicity(x.den(), pi);
                (en - ed, n, d)
            };
            let (alpha, un, ud) = split(a);
            let (beta, vn, vd) = split(b);
            // χ((−1)^{αβ} u^β v^{−α}); χ(d^{-1}) = χ(d)
            let mut s = 1;
            if (alpha * beta).rem_euclid(2) == 1 {
                s *= char_mod(&Poly::one(pi.ctx()).neg(), pi);
            }
            if beta.rem_euclid(2) == 1 {
                s *= char_mod(&un, pi) * char_mod(&ud, pi);
            }
            if alpha.rem_euclid(2) == 1 {
                s *= char_mod(&vn, pi) * char_mod(&vd, pi);
            }
            s
        }
        None => {
            // uniformizer 1/t: x = t^{−m}·u with m = deg den − deg num, ū = ratio of leading coefficients
            let split = |x: &RatFunc<Fq>| (x.den().deg() as i64 - x.num().deg() as i64, x.num().lc().unwrap().clone());
            let (alpha, u) = split(a);
            let (beta, v) = split(b);
            let mut c = Fq::one(u.context());
            if (alpha * beta).rem_euclid(2) == 1 {
                c = c.neg();
            }
            c = c.mul(&u.pow(beta)).mul(&v.pow(-alpha));
            c.quadratic_character()
        }
    }
}

impl SplitField for RatFunc<Fq> {
    /// Split iff every local symbol at the places dividing `a`, `b` and at infinity is `+1`.
    fn split_test(q: &QuaternionAlgebra<Self>, _search_bound: u64) -> Result<SplitResult<Self>, QuatError> {
        let mut places: Vec<Poly<Fq>> = Vec::new();
        for x in [&q.a, &q.b] {
            for p in [x.num(), x.den()] {
                if p.deg() > 0 {
                    places.extend(factor_fq(p)?.factors.into_iter().map(|(f, _)| f));
                }
            }
        }
        places.sort_by_key(|p| (p.deg(), p.coeffs().iter().rev().map(Fq::index).collect::<Vec<_>>()));
        places.dedup();
        let split = places.iter().all(|pi| fq_local_symbol(&q.a, &q.b, Some(pi)) == 1)
            && fq_local_symbol(&q.a, &q.b, None) == 1;
        let certificate = if split { trivial_certificate(q) } else { None };
        Ok(SplitResult { split, certificate })
    }

    fn field_name(ctx: &crate::fields::PolyCtx<Fq>) -> String {
        format!("F_{}({})", ctx.base.order(), ctx.var)
    }
}

impl SplitField for RatFunc<Rational> {
    /// Decides only the case where `a`, `b` or `−ab` is a square.
    fn split_test(q: &QuaternionAlgebra<Self>, _search_bound: u64) -> Result<SplitResult<Self>, QuatError> {
        match trivial_certificate(q) {
            Some(p) => Ok(SplitResult { split: true, certificate: Some(p) }),
            None => Err(QuatError::UnsupportedField(format!(
                "splitting over Q({}) is decided only when a, b or -ab is a square",
                q.a.poly_ctx().var
            ))),
        }
    }

    fn field_name(ctx: &crate::fields::PolyCtx<Rational>) -> String {
        format!("Q({})", ctx.var)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VerdictKind {
    UnramifiedExtension,
    RamifiedOnly,
    NoExtensionSplitResidue,
    NoExtensionAlgebraSplit,
}

impl fmt::Display for VerdictKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            VerdictKind::UnramifiedExtension => "unramified_extension",
            VerdictKind::RamifiedOnly => "ramified_only",
            VerdictKind::NoExtensionSplitResidue => "no_extension_split_residue",
            VerdictKind::NoExtensionAlgebraSplit => "no_extension_algebra_split",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness<B: Field, R: Field> {
    /// The algebra splits over `E`; a point when one is known.
    GlobalSplit { point: Option<[B; 3]> },
    /// Unit-unit with division residue algebra.
    ResidueDivision { residue: QuaternionAlgebra<R> },
    /// Unit-unit with split residue algebra; a point of the residue conic when found.
    ResidueSplit { residue: QuaternionAlgebra<R>, point: Option<[R; 3]> },
    /// Odd-unit with `b̄' = root²`.
    ResidueSquare { b: R, root: R },
    /// Odd-unit with `b̄'` a nonsquare.
    ResidueNonsquare { b: R },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionVerdict<B: Field, R: Field> {
    pub kind: VerdictKind,
    pub witness: Witness<B, R>,
    pub normalized: NormalizedPresentation<B>,
}

/// Decides whether `v` has an unramified extension to `(a, b)_E`.
///
/// When splitting over `E` is not decidable for the field, the global check is
/// skipped and the verdict comes from local data at `v`.
pub fn decide_unramified_extension<V>(
    q: &QuaternionAlgebra<V::Base>,
    v: &V,
    search_bound: u64,
) -> Result<ExtensionVerdict<V::Base, V::Residue>, QuatError>
where
    V: DiscreteValuation,
    V::Base: SplitField,
    V::Residue: SplitField,
{
    let normalized = normalize(q, v)?;
    let verdict = |kind, witness| Ok(ExtensionVerdict { kind, witness, normalized: normalized.clone() });
    match is_split(q, search_bound) {
        Ok(r) if r.split => {
            return verdict(VerdictKind::NoExtensionAlgebraSplit, Witness::GlobalSplit { point: r.certificate })
        }
        Ok(_) | Err(QuatError::UnsupportedField(_)) => {}
        Err(e) => return Err(e),
    }
    let n = &normalized.algebra;
    let b = v.residue_of(&n.b)?;
    match normalized.shape {
        Shape::UnitUnit => {
            let residue = QuaternionAlgebra::new(v.residue_of(&n.a)?, b)?;
            let r = is_split(&residue, search_bound)?;
            if r.split {
                verdict(VerdictKind::NoExtensionSplitResidue, Witness::ResidueSplit { residue, point: r.certificate })
            } else {
                verdict(VerdictKind::UnramifiedExtension, Witness::ResidueDivision { residue })
            }
        }
        Shape::OddUnit => match b.sqrt() {
            Some(root) => verdict(VerdictKind::NoExtensionSplitResidue, Witness::ResidueSquare { b, root }),
            None => verdict(VerdictKind::RamifiedOnly, Witness::ResidueNonsquare { b }),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{rat, FqCtx, PolyCtx};
    use crate::valuation::{FqPlace, PAdic, RationalPlace};

    fn qt() -> PolyCtx<Rational> {
        PolyCtx::new((), "t")
    }

    fn qp(cs: &[i64]) -> RatFunc<Rational> {
        RatFunc::from_poly(Poly::from_i64s(&qt(), cs))
    }

    fn v_t() -> RationalPlace {
        RationalPlace::at(qt(), rat(0, 1))
    }

    #[test]
    fn normalize_examples() {
        let n = normalize(&QuaternionAlgebra::new(qp(&[0, 0, 0, 1]), qp(&[0, 0, 4])).unwrap(), &v_t()).unwrap();
        assert_eq!(n.algebra, QuaternionAlgebra { a: qp(&[0, 1]), b: qp(&[1]) });
        assert_eq!(n.shape, Shape::OddUnit);

        let v5 = PAdic::new(5).unwrap();
        let q = QuaternionAlgebra::new(rat(2, 1), rat(3, 1)).unwrap();
        let n = normalize(&q, &v5).unwrap();
        assert_eq!((n.algebra.clone(), n.shape), (q.clone(), Shape::UnitUnit));
        assert!(n.transcript.is_empty());

        let q = QuaternionAlgebra::new(qp(&[0, 1]), qp(&[0, 3])).unwrap();
        let n = normalize(&q, &v_t()).unwrap();
        assert_eq!(n.algebra, QuaternionAlgebra { a: qp(&[0, 1]), b: qp(&[-3]) });
        assert_eq!(n.shape, Shape::OddUnit);
        assert_eq!(q.replay(&n.transcript), n.algebra);

        let q = QuaternionAlgebra::new(qp(&[0, 0, 5]), qp(&[0, 7])).unwrap();
        let n = normalize(&q, &v_t()).unwrap();
        assert_eq!(n.transcript[n.transcript.len() - 1], Move::Swap);
        assert_eq!(n.algebra, QuaternionAlgebra { a: qp(&[0, 7]), b: qp(&[5]) });
    }

    #[test]
    fn residue_algebras() {
        let q = QuaternionAlgebra::new(qp(&[-1]), qp(&[-1])).unwrap();
        assert_eq!(residue_algebra(&q, &v_t()).unwrap(), QuaternionAlgebra { a: rat(-1, 1), b: rat(-1, 1) });
        let f7 = PolyCtx::new(FqCtx::prime(7).unwrap(), "t");
        let v = FqPlace::finite(f7.clone(), Poly::from_i64s(&f7, &[0, 1])).unwrap();
        let fp = |cs: &[i64]| RatFunc::from_poly(Poly::from_i64s(&f7, cs));
        let r = residue_algebra(&QuaternionAlgebra::new(fp(&[3]), fp(&[1, 1])).unwrap(), &v).unwrap();
        let k = v.residue_ctx();
        assert_eq!(r, QuaternionAlgebra { a: Fq::from_u64(&k, 3), b: Fq::from_u64(&k, 1) });
        let odd = QuaternionAlgebra::new(qp(&[0, 1]), qp(&[3])).unwrap();
        assert_eq!(residue_algebra(&odd, &v_t()), Err(QuatError::NotUnitUnit));
    }

    #[test]
    fn hilbert_examples() {
        let m1 = rat(-1, 1);
        assert_eq!(hilbert_symbol(&m1, &m1, QPlace::Infinity).unwrap(), -1);
        assert_eq!(hilbert_symbol(&m1, &m1, QPlace::Prime(2)).unwrap(), -1);
        assert_eq!(hilbert_symbol(&rat(5, 1), &rat(3, 1), QPlace::Prime(5)).unwrap(), -1);
        assert_eq!(hilbert_symbol(&rat(2, 1), &rat(3, 1), QPlace::Prime(3)).unwrap(), -1);
        assert_eq!(hilbert_symbol(&rat(1, 1), &rat(-7, 3), QPlace::Prime(7)).unwrap(), 1);
        assert_eq!(hilbert_symbol(&rat(0, 1), &m1, QPlace::Infinity), Err(QuatError::ZeroInput));
    }

    #[test]
    fn splitting_over_q() {
        let q = QuaternionAlgebra::new(rat(-1, 1), rat(-1, 1)).unwrap();
        assert!(!is_split(&q, 200).unwrap().split);
        let q = QuaternionAlgebra::new(rat(-1, 1), rat(2, 1)).unwrap();
        let r = is_split(&q, 200).unwrap();
        assert!(r.split);
        assert_eq!(r.certificate, Some([rat(1, 1), rat(1, 1), rat(1, 1)]));
    }

    #[test]
    fn splitting_over_finite_fields() {
        let f5 = FqCtx::prime(5).unwrap();
        let q = QuaternionAlgebra::new(Fq::from_u64(&f5, 2), Fq::from_u64(&f5, 3)).unwrap();
        let r = is_split(&q, 0).unwrap();
        assert!(r.split);
        let [x, y, z] = r.certificate.unwrap();
        assert!(!x.is_zero() && y.is_one() && !z.is_zero());
        // over F_3, 1·x² + 1 is never a nonzero square for x ≠ 0
        let f3 = FqCtx::prime(3).unwrap();
        let q = QuaternionAlgebra::new(Fq::one(&f3), Fq::one(&f3)).unwrap();
        assert!(q.is_point(&is_split(&q, 0).unwrap().certificate.unwrap()));
    }

    #[test]
    fn isomorphism_over_q() {
        let q = |a, b| QuaternionAlgebra::new(rat(a, 1), rat(b, 1)).unwrap();
        assert!(quaternion_isomorphic(&q(-1, -1), &q(-1, -2)).unwrap());
        assert!(!quaternion_isomorphic(&q(-1, -1), &q(-1, 2)).unwrap());
        assert!(quaternion_isomorphic(&q(6, -35), &q(-35, 6)).unwrap());
        assert_eq!(ramification_set(&q(-1, -1)).unwrap(), vec![QPlace::Prime(2), QPlace::Infinity]);
    }

    #[test]
    fn splitting_over_fq_t() {
        let f3 = PolyCtx::new(FqCtx::prime(3).unwrap(), "t");
        let fp = |cs: &[i64]| RatFunc::from_poly(Poly::from_i64s(&f3, cs));
        // (t, −1): −1 is a nonsquare in F_3, ramified at t and at infinity
        assert!(!is_split(&QuaternionAlgebra::new(fp(&[0, 1]), fp(&[-1])).unwrap(), 0).unwrap().split);
        // (t, 1) is split
        assert!(is_split(&QuaternionAlgebra::new(fp(&[0, 1]), fp(&[1])).unwrap(), 0).unwrap().split);
        // the product formula forces an even number of ramified places
        let q = QuaternionAlgebra::new(fp(&[0, 1]), fp(&[1, 1])).unwrap();
        let r = is_split(&q, 0).unwrap();
        let mut bad = 0;
        for pi in [Poly::from_i64s(&f3, &[0, 1]), Poly::from_i64s(&f3, &[1, 1])] {
            if fq_local_symbol(&q.a, &q.b, Some(&pi)) == -1 {
                bad += 1;
            }
        }
        if fq_local_symbol(&q.a, &q.b, None) == -1 {
            bad += 1;
        }
        assert_eq!(bad % 2, 0);
        assert_eq!(r.split, bad == 0);
    }

    #[test]
    fn verdict_examples() {
        let q = QuaternionAlgebra::new(qp(&[-1]), qp(&[-1])).unwrap();
        let d = decide_unramified_extension(&q, &v_t(), 200).unwrap();
        assert_eq!(d.kind, VerdictKind::UnramifiedExtension);
        let v5 = PAdic::new(5).unwrap();
        let d = decide_unramified_extension(&QuaternionAlgebra::new(rat(2, 1), rat(3, 1)).unwrap(), &v5, 200).unwrap();
        assert_eq!(d.kind, VerdictKind::NoExtensionSplitResidue);
        let q = QuaternionAlgebra::new(qp(&[0, 1]), qp(&[3])).unwrap();
        assert_eq!(decide_unramified_extension(&q, &v_t(), 200).unwrap().kind, VerdictKind::RamifiedOnly);
        let q = QuaternionAlgebra::new(qp(&[0, 1]), qp(&[4])).unwrap();
        assert_eq!(decide_unramified_extension(&q, &v_t(), 200).unwrap().kind, VerdictKind::NoExtensionAlgebraSplit);
    }
}
