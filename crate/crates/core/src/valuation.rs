//! Discrete rank-one valuations on the supported base fields.
//!
//! Three kinds are provided, each normalized so that its canonical uniformizer
//! has value 1:
//!
//! | type             | field      | uniformizer | residue field          |
//! |------------------|------------|-------------|------------------------|
//! | [`PAdic`]        | Q          | p           | F_p                    |
//! | [`FqPlace`]      | F_q(t)     | π(t) or 1/t | F_q[t]/(π) or F_q      |
//! | [`RationalPlace`]| Q(t)       | t − c or 1/t| Q                      |
//!
//! All residue fields have odd or zero characteristic: `p = 2` is rejected,
//! so every valuation here satisfies `v(2) = 0`.
//!
//! Values live in `(1/2)Z ∪ {∞}` ([`Value`]) because extensions to the conic
//! function field may have value group `(1/2)Z`.

use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::sync::Arc;

use thiserror::Error;

use crate::fields::factor::{is_irreducible, roots_fq};
use crate::fields::integer::{inv_mod, split_prime_power};
use crate::fields::{Field, FieldError, Fq, FqCtx, Poly, PolyCtx, RatFunc, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ValuationError {
    #[error("element has negative value {0}; its residue is undefined")]
    NegativeValue(i64),
    #[error("input must be nonzero")]
    ZeroInput,
    #[error("dyadic valuation rejected: the residue field must have characteristic different from 2")]
    Dyadic,
    #[error("unsupported place: {0}")]
    UnsupportedPlace(String),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// An element of `(1/2)Z`, stored as twice its value.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct HalfInt(i64);

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt(0);

    pub fn int(n: i64) -> Self {
        HalfInt(2 * n)
    }

    pub fn from_halves(twice: i64) -> Self {
        HalfInt(twice)
    }

    pub fn halves(self) -> i64 {
        self.0
    }

    pub fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }

    pub fn to_int(self) -> Option<i64> {
        self.is_integer().then_some(self.0 / 2)
    }

    /// Half of an integer.
    pub fn half_of(n: i64) -> Self {
        HalfInt(n)
    }

    /// Representative of the class modulo Z, in `{0, 1/2}`.
    pub fn mod_integers(self) -> Self {
        HalfInt(self.0.rem_euclid(2))
    }
}

impl Add for HalfInt {
    type Output = HalfInt;
    fn add(self, o: HalfInt) -> HalfInt {
        HalfInt(self.0 + o.0)
    }
}

impl Sub for HalfInt {
    type Output = HalfInt;
    fn sub(self, o: HalfInt) -> HalfInt {
        HalfInt(self.0 - o.0)
    }
}

impl Neg for HalfInt {
    type Output = HalfInt;
    fn neg(self) -> HalfInt {
        HalfInt(-self.0)
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

/// A valuation value: finite in `(1/2)Z`, or `∞` (the value of zero).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Value {
    Finite(HalfInt),
    Infinity,
}

impl Value {
    pub fn int(n: i64) -> Self {
        Value::Finite(HalfInt::int(n))
    }

    pub fn finite(self) -> Option<HalfInt> {
        match self {
            Value::Finite(h) => Some(h),
            Value::Infinity => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        self == Value::Infinity
    }
}

impl From<Option<i64>> for Value {
    fn from(o: Option<i64>) -> Self {
        o.map_or(Value::Infinity, Value::int)
    }
}

impl Add for Value {
    type Output = Value;
    fn add(self, o: Value) -> Value {
        match (self, o) {
            (Value::Finite(a), Value::Finite(b)) => Value::Finite(a + b),
            _ => Value::Infinity,
        }
    }
}

/// Panics when subtracting `∞`.
impl Sub for Value {
    type Output = Value;
    fn sub(self, o: Value) -> Value {
        match (self, o) {
            (Value::Finite(a), Value::Finite(b)) => Value::Finite(a - b),
            (Value::Infinity, Value::Finite(_)) => Value::Infinity,
            (_, Value::Infinity) => panic!("subtracting an infinite value"),
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Finite(h) => write!(f, "{h}"),
            Value::Infinity => write!(f, "inf"),
        }
    }
}

/// A subgroup `g·Z` of `(1/2)Z` containing `Z`: either `Z` or `(1/2)Z`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct ValueGroup {
    generator: HalfInt,
}

impl ValueGroup {
    pub fn integers() -> Self {
        ValueGroup { generator: HalfInt::int(1) }
    }

    pub fn half_integers() -> Self {
        ValueGroup { generator: HalfInt::from_halves(1) }
    }

    pub fn generator(self) -> HalfInt {
        self.generator
    }

    pub fn is_integers(self) -> bool {
        self.generator == HalfInt::int(1)
    }

    pub fn contains(self, v: Value) -> bool {
        match v {
            Value::Infinity => true,
            Value::Finite(h) => h.halves() % self.generator.halves() == 0,
        }
    }
}

impl fmt::Display for ValueGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integers() {
            write!(f, "Z")
        } else {
            write!(f, "(1/2)Z")
        }
    }
}

/// A discrete valuation with value group Z on `Base`, with residue field `Residue`.
pub trait DiscreteValuation: Clone + fmt::Debug + Send + Sync + 'static {
    type Base: Field;
    type Residue: Field;

    fn base_ctx(&self) -> <Self::Base as Field>::Ctx;
    fn residue_ctx(&self) -> <Self::Residue as Field>::Ctx;

    /// `None` for zero.
    fn order(&self, x: &Self::Base) -> Option<i64>;

    /// The canonical uniformizer (value 1).
    fn uniformizer(&self) -> Self::Base;

    fn residue_of(&self, x: &Self::Base) -> Result<Self::Residue, ValuationError>;

    /// The canonical section `κ → O_v` (integer representatives, constant
    /// polynomials, and so on); `residue_of(lift(r)) = r`.
    fn lift(&self, r: &Self::Residue) -> Self::Base;

    fn describe(&self) -> String;

    fn value_of(&self, x: &Self::Base) -> Value {
        self.order(x).into()
    }

    /// `x = π^m · u` with `v(u) = 0` for the canonical uniformizer π.
    fn unit_part(&self, x: &Self::Base) -> Result<(i64, Self::Base), ValuationError> {
        let m = self.order(x).ok_or(ValuationError::ZeroInput)?;
        Ok((m, x.mul(&self.uniformizer().pow(-m))))
    }
}

fn negative(order: Option<i64>) -> Result<(), ValuationError> {
    match order {
        Some(m) if m < 0 => Err(ValuationError::NegativeValue(m)),
        _ => Ok(()),
    }
}

/// The p-adic valuation on Q for an odd prime p.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PAdic {
    p: u64,
    residue: Arc<FqCtx>,
}

impl PAdic {
    pub fn new(p: u64) -> Result<Self, ValuationError> {
        if p == 2 {
            return Err(ValuationError::Dyadic);
        }
        Ok(PAdic { p, residue: FqCtx::prime(p)? })
    }

    pub fn p(&self) -> u64 {
        self.p
    }
}

impl DiscreteValuation for PAdic {
    type Base = Rational;
    type Residue = Fq;

    fn base_ctx(&self) {}

    fn residue_ctx(&self) -> Arc<FqCtx> {
        self.residue.clone()
    }

    fn order(&self, x: &Rational) -> Option<i64> {
        if Field::is_zero(x) {
            return None;
        }
        Some(split_prime_power(x.numer(), self.p).0 - split_prime_power(x.denom(), self.p).0)
    }

    fn uniformizer(&self) -> Rational {
        Rational::from_integer(self.p.into())
    }

    fn residue_of(&self, x: &Rational) -> Result<Fq, ValuationError> {
        let order = self.order(x);
        negative(order)?;
        if order != Some(0) {
            return Ok(Fq::zero(&self.residue));
        }
        let n = Fq::from_bigint(&self.residue, x.numer());
        let d = crate::fields::integer::reduce(x.denom(), self.p);
        Ok(n.mul(&Fq::from_u64(&self.residue, inv_mod(d, self.p))))
    }

    fn lift(&self, r: &Fq) -> Rational {
        Rational::from_integer(r.coeffs()[0].into())
    }

    fn describe(&self) -> String {
        format!("{}-adic valuation on Q", self.p)
    }
}

/// A place of a rational function field: a monic irreducible π, or infinity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PlaceKind<K: Field> {
    Finite(Poly<K>),
    Infinite,
}

impl<K: Field> fmt::Display for PlaceKind<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PlaceKind::Finite(pi) => write!(f, "{pi}"),
            PlaceKind::Infinite => write!(f, "inf"),
        }
    }
}

fn multiplicity<K: Field>(f: &Poly<K>, pi: &Poly<K>) -> i64 {
    let mut m = 0;
    let mut g = f.clone();
    loop {
        let (q, r) = g.divrem(pi);
        if !r.is_zero() {
            return m;
        }
        g = q;
        m += 1;
    }
}

fn place_order<K: Field>(kind: &PlaceKind<K>, x: &RatFunc<K>) -> Option<i64> {
    if x.is_zero() {
        return None;
    }
    Some(match kind {
        PlaceKind::Finite(pi) => multiplicity(x.num(), pi) - multiplicity(x.den(), pi),
        PlaceKind::Infinite => x.den().deg() as i64 - x.num().deg() as i64,
    })
}

fn place_uniformizer<K: Field>(kind: &PlaceKind<K>, ctx: &PolyCtx<K>) -> RatFunc<K> {
    match kind {
        PlaceKind::Finite(pi) => RatFunc::from_poly(pi.clone()),
        PlaceKind::Infinite => RatFunc::var(ctx).inv(),
    }
}

// residue at infinity of an element of nonnegative value
fn residue_at_infinity<K: Field>(x: &RatFunc<K>) -> K {
    if x.num().deg() == x.den().deg() {
        x.num().lc().unwrap().clone()
    } else {
        K::zero(&x.poly_ctx().base)
    }
}

/// A place of `F_q(t)`: π-adic for a monic irreducible π, or the degree valuation.
///
/// The residue field `F_q[t]/(π)` is presented as a single extension `F_p[w]/(M)`
/// together with the images of the generator of `F_q` and of `t`.
#[derive(Clone, Debug)]
pub struct FqPlace {
    field: PolyCtx<Fq>,
    kind: PlaceKind<Fq>,
    residue: Arc<FqCtx>,
    // image of the generator u of F_q (None when F_q is a prime field)
    alpha: Option<Fq>,
    // image of t for a finite place
    theta: Option<Fq>,
    // inverse of the F_p-linear map F_q[t]_{<deg π} → κ, row-major
    lift_matrix: Vec<Vec<u64>>,
}

impl FqPlace {
    pub fn infinite(field: PolyCtx<Fq>) -> Self {
        let residue = field.base.clone();
        FqPlace { field, kind: PlaceKind::Infinite, residue, alpha: None, theta: None, lift_matrix: Vec::new() }
    }

    /// The π-adic place; `pi` is made monic and must be irreducible over `F_q`.
    pub fn finite(field: PolyCtx<Fq>, pi: Poly<Fq>) -> Result<Self, ValuationError> {
        let pi = pi.monic();
        if pi.deg() < 1 || !is_irreducible(&pi)? {
            return Err(ValuationError::UnsupportedPlace(format!(
                "{pi} is not irreducible over F_{}",
                field.base.order()
            )));
        }
        let constants = field.base.clone();
        let p = constants.p();
        let d = constants.degree();
        let k = pi.degree().unwrap();
        let (residue, alpha, theta) = if k == 1 {
            let alpha = Fq::generator(&constants);
            (constants.clone(), alpha, pi.coeff(0).neg())
        } else if d == 1 {
            let modulus = pi.coeffs().iter().map(|c| c.coeffs()[0]).collect();
            let residue = FqCtx::extension(p, modulus, "u")?;
            let theta = Fq::generator(&residue).unwrap();
            (residue, None, theta)
        } else {
            let residue = FqCtx::default_extension(p, d * k, "w")?;
            let kctx = PolyCtx::<Fq>::new(residue.clone(), "T");
            let m = Poly::new(kctx.clone(), constants.modulus().iter().map(|&c| Fq::from_u64(&residue, c)).collect());
            let alpha = roots_fq(&m)?.into_iter().next().expect("F_q embeds in κ");
            let embedded = pi.map(&kctx, |c| embed(&residue, Some(&alpha), c));
            let theta = roots_fq(&embedded)?.into_iter().next().expect("π has a root in κ");
            (residue, Some(alpha), theta)
        };
        let mut place =
            FqPlace { field, kind: PlaceKind::Finite(pi), residue, alpha, theta: Some(theta), lift_matrix: Vec::new() };
        place.lift_matrix = place.build_lift_matrix();
        Ok(place)
    }

    pub fn kind(&self) -> &PlaceKind<Fq> {
        &self.kind
    }

    pub fn field(&self) -> &PolyCtx<Fq> {
        &self.field
    }

    fn embed_constant(&self, c: &Fq) -> Fq {
        embed(&self.residue, self.alpha.as_ref(), c)
    }

    fn build_lift_matrix(&self) -> Vec<Vec<u64>> {
        let constants = &self.field.base;
        let (p, d) = (constants.p(), constants.degree());
        let k = match &self.kind {
            PlaceKind::Finite(pi) => pi.degree().unwrap(),
            PlaceKind::Infinite => return Vec::new(),
        };
        let theta = self.theta.clone().unwrap();
        // columns: images of u^i t^j, ordered j-major
        let mut cols = Vec::with_capacity(d * k);
        for j in 0..k {
            for i in 0..d {
                let mut e = vec![0u64; d];
                e[i] = 1;
                let c = Fq::from_coeffs(constants, &e);
                cols.push(self.embed_constant(&c).mul(&theta.pow(j as i64)).coeffs().to_vec());
            }
        }
        let n = d * k;
        let mut a: Vec<Vec<u64>> = (0..n).map(|r| (0..n).map(|c| cols[c][r]).collect()).collect();
        invert_mod_p(&mut a, p).expect("residue map is bijective")
    }
}

fn embed(residue: &Arc<FqCtx>, alpha: Option<&Fq>, c: &Fq) -> Fq {
    match alpha {
        None => Fq::from_u64(residue, c.coeffs()[0]),
        Some(a) if a.context() == residue && c.context() == residue => c.clone(),
        Some(a) => {
            let mut acc = Fq::zero(residue);
            let mut pw = Fq::one(residue);
            for &ci in c.coeffs() {
                acc = acc.add(&pw.mul(&Fq::from_u64(residue, ci)));
                pw = pw.mul(a);
            }
            acc
        }
    }
}

fn invert_mod_p(a: &mut [Vec<u64>], p: u64) -> Option<Vec<Vec<u64>>> {
    use crate::fields::integer::mul_mod;
    let n = a.len();
    let mut inv: Vec<Vec<u64>> = (0..n).map(|i| (0..n).map(|j| u64::from(i == j)).collect()).collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| a[r][col] != 0)?;
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let s = inv_mod(a[col][col], p);
        for j in 0..n {
            a[col][j] = mul_mod(a[col][j], s, p);
            inv[col][j] = mul_mod(inv[col][j], s, p);
        }
        for r in 0..n {
            if r != col && a[r][col] != 0 {
                let f = a[r][col];
                for j in 0..n {
                    a[r][j] = (a[r][j] + p - mul_mod(f, a[col][j], p)) % p;
                    inv[r][j] = (inv[r][j] + p - mul_mod(f, inv[col][j], p)) % p;
                }
            }
        }
    }
    Some(inv)
}

impl DiscreteValuation for FqPlace {
    type Base = RatFunc<Fq>;
    type Residue = Fq;

    fn base_ctx(&self) -> PolyCtx<Fq> {
        self.field.clone()
    }

    fn residue_ctx(&self) -> Arc<FqCtx> {
        self.residue.clone()
    }

    fn order(&self, x: &RatFunc<Fq>) -> Option<i64> {
        place_order(&self.kind, x)
    }

    fn uniformizer(&self) -> RatFunc<Fq> {
        place_uniformizer(&self.kind, &self.field)
    }

    fn residue_of(&self, x: &RatFunc<Fq>) -> Result<Fq, ValuationError> {
        negative(self.order(x))?;
        Ok(match &self.kind {
            PlaceKind::Infinite => residue_at_infinity(x),
            PlaceKind::Finite(_) => {
                let theta = self.theta.as_ref().unwrap();
                let at = |p: &Poly<Fq>| {
                    p.coeffs()
                        .iter()
                        .rev()
                        .fold(Fq::zero(&self.residue), |acc, c| acc.mul(theta).add(&self.embed_constant(c)))
                };
                at(x.num()).div(&at(x.den()))
            }
        })
    }

    fn lift(&self, r: &Fq) -> RatFunc<Fq> {
        match &self.kind {
            PlaceKind::Infinite => RatFunc::constant(&self.field, r.clone()),
            PlaceKind::Finite(pi) => {
                use crate::fields::integer::mul_mod;
                let constants = &self.field.base;
                let (p, d) = (constants.p(), constants.degree());
                let k = pi.degree().unwrap();
                let rc = r.coeffs();
                let sol: Vec<u64> = self
                    .lift_matrix
                    .iter()
                    .map(|row| row.iter().zip(rc).fold(0, |acc, (&a, &b)| (acc + mul_mod(a, b, p)) % p))
                    .collect();
                let coeffs = (0..k).map(|j| Fq::from_coeffs(constants, &sol[j * d..(j + 1) * d])).collect();
                RatFunc::from_poly(Poly::new(self.field.clone(), coeffs))
            }
        }
    }

    fn describe(&self) -> String {
        format!("place {} of F_{}({})", self.kind, self.field.base.order(), self.field.var)
    }
}

/// A place of `Q(t)` with residue field Q: `t − c` or infinity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalPlace {
    field: PolyCtx<Rational>,
    kind: PlaceKind<Rational>,
}

impl RationalPlace {
    pub fn infinite(field: PolyCtx<Rational>) -> Self {
        RationalPlace { field, kind: PlaceKind::Infinite }
    }

    /// The place `pi`; only degree-one places are supported (residue field Q).
    pub fn finite(field: PolyCtx<Rational>, pi: Poly<Rational>) -> Result<Self, ValuationError> {
        if pi.deg() != 1 {
            return Err(ValuationError::UnsupportedPlace(format!(
                "{pi}: only places of degree 1 and infinity are supported on Q({})",
                field.var
            )));
        }
        Ok(RationalPlace { field, kind: PlaceKind::Finite(pi.monic()) })
    }

    /// The place `t − c`.
    pub fn at(field: PolyCtx<Rational>, c: Rational) -> Self {
        let pi = Poly::new(field.clone(), vec![c.neg(), Rational::one(&())]);
        RationalPlace { field, kind: PlaceKind::Finite(pi) }
    }

    pub fn kind(&self) -> &PlaceKind<Rational> {
        &self.kind
    }

    pub fn field(&self) -> &PolyCtx<Rational> {
        &self.field
    }
}

impl DiscreteValuation for RationalPlace {
    type Base = RatFunc<Rational>;
    type Residue = Rational;

    fn base_ctx(&self) -> PolyCtx<Rational> {
        self.field.clone()
    }

    fn residue_ctx(&self) {}

    fn order(&self, x: &RatFunc<Rational>) -> Option<i64> {
        place_order(&self.kind, x)
    }

    fn uniformizer(&self) -> RatFunc<Rational> {
        place_uniformizer(&self.kind, &self.field)
    }

    fn residue_of(&self, x: &RatFunc<Rational>) -> Result<Rational, ValuationError> {
        negative(self.order(x))?;
        Ok(match &self.kind {
            PlaceKind::Infinite => residue_at_infinity(x),
            PlaceKind::Finite(pi) => {
                let root = pi.coeff(0).neg();
                x.eval(&root).expect("nonnegative value means no pole")
            }
        })
    }

    fn lift(&self, r: &Rational) -> RatFunc<Rational> {
        RatFunc::constant(&self.field, r.clone())
    }

    fn describe(&self) -> String {
        format!("place {} of Q({})", self.kind, self.field.var)
    }
}
