//! The conic function field `F = E(x)(s)`, `s² = a·x² + b`, and the
//! distinguished extension `w★` of the Gauss extension of `v` on `E(x²)`
//! with respect to `z = a·x²/b`.
//!
//! Elements are written `e₀ + e₁·x + e₂·s + e₃·x·s` with `e_i ∈ E(y)`, `y = x²`.
//! The basis elements have values `0, (v(b)−v(a))/2, v(b)/2, v(b)−v(a)/2`, and
//! the four directions are separated by value coset or residue component, so
//!
//! ```text
//! w★(Σ e_i·β_i) = min_i (w₁(e_i) + w★(β_i))
//! ```
//!
//! exactly, where `w₁` is the Gauss extension on `E(y)`.

use std::fmt;

use thiserror::Error;

use crate::fields::{Field, Poly, PolyCtx, RatFunc};
use crate::gauss::{quadratic_extension_analysis, GaussError, GaussExtension, QuadraticExtension};
use crate::quaternion::{
    decide_unramified_extension, is_split, ExtensionVerdict, Move, QuatError, QuaternionAlgebra, Shape, SplitField,
    VerdictKind,
};
use crate::valuation::{DiscreteValuation, HalfInt, ValuationError, Value, ValueGroup};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConicError {
    #[error("the zero element has no finite value")]
    ZeroElement,
    #[error("element has value {0}, not 0; its residue is undefined")]
    NonzeroValue(Value),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("no witness found: {0}")]
    WitnessNotFound(String),
    #[error(transparent)]
    Gauss(#[from] GaussError),
    #[error(transparent)]
    Quaternion(#[from] QuatError),
    #[error(transparent)]
    Valuation(#[from] ValuationError),
}

/// Valuations whose base and residue fields support splitting tests.
pub trait ConicValuation: DiscreteValuation<Base: SplitField, Residue: SplitField> {}

impl<V> ConicValuation for V where V: DiscreteValuation<Base: SplitField, Residue: SplitField> {}

/// `F = E(x)(s)` with `s² = a·x² + b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConicFunctionField<K: Field> {
    a: K,
    b: K,
    x_ctx: PolyCtx<K>,
    y_ctx: PolyCtx<K>,
}

/// The element `f + g·s` of a conic function field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConicElement<K: Field> {
    pub f: RatFunc<K>,
    pub g: RatFunc<K>,
}

impl<K: Field> ConicFunctionField<K> {
    pub fn new(a: K, b: K, base: K::Ctx, x_var: &str) -> Result<Self, ConicError> {
        if a.is_zero() || b.is_zero() {
            return Err(QuatError::ZeroInput.into());
        }
        Ok(ConicFunctionField { a, b, x_ctx: PolyCtx::new(base.clone(), x_var), y_ctx: PolyCtx::new(base, "y") })
    }

    pub fn a(&self) -> &K {
        &self.a
    }

    pub fn b(&self) -> &K {
        &self.b
    }

    pub fn x_ctx(&self) -> &PolyCtx<K> {
        &self.x_ctx
    }

    pub fn y_ctx(&self) -> &PolyCtx<K> {
        &self.y_ctx
    }

    /// Set when `b` is a square in `E`: then `F` is rational and the algebra split.
    pub fn rational_field_warning(&self) -> bool {
        self.b.is_square()
    }

    pub fn algebra(&self) -> QuaternionAlgebra<K> {
        QuaternionAlgebra { a: self.a.clone(), b: self.b.clone() }
    }

    /// `a·x² + b`.
    pub fn radicand(&self) -> RatFunc<K> {
        RatFunc::from_poly(Poly::new(
            self.x_ctx.clone(),
            vec![self.b.clone(), K::zero(&self.x_ctx.base), self.a.clone()],
        ))
    }

    pub fn element(&self, f: RatFunc<K>, g: RatFunc<K>) -> ConicElement<K> {
        ConicElement { f, g }
    }

    pub fn from_base(&self, c: K) -> ConicElement<K> {
        self.element(RatFunc::constant(&self.x_ctx, c), RatFunc::zero(&self.x_ctx))
    }

    pub fn zero(&self) -> ConicElement<K> {
        self.element(RatFunc::zero(&self.x_ctx), RatFunc::zero(&self.x_ctx))
    }

    pub fn one(&self) -> ConicElement<K> {
        self.element(RatFunc::one(&self.x_ctx), RatFunc::zero(&self.x_ctx))
    }

    pub fn x(&self) -> ConicElement<K> {
        self.element(RatFunc::var(&self.x_ctx), RatFunc::zero(&self.x_ctx))
    }

    pub fn s(&self) -> ConicElement<K> {
        self.element(RatFunc::zero(&self.x_ctx), RatFunc::one(&self.x_ctx))
    }

    pub fn add(&self, p: &ConicElement<K>, q: &ConicElement<K>) -> ConicElement<K> {
        self.element(p.f.add(&q.f), p.g.add(&q.g))
    }

    pub fn sub(&self, p: &ConicElement<K>, q: &ConicElement<K>) -> ConicElement<K> {
        self.element(p.f.sub(&q.f), p.g.sub(&q.g))
    }

    pub fn neg(&self, p: &ConicElement<K>) -> ConicElement<K> {
        self.element(p.f.neg(), p.g.neg())
    }

    pub fn mul(&self, p: &ConicElement<K>, q: &ConicElement<K>) -> ConicElement<K> {
        let f = p.f.mul(&q.f).add(&p.g.mul(&q.g).mul(&self.radicand()));
        let g = p.f.mul(&q.g).add(&p.g.mul(&q.f));
        self.element(f, g)
    }

    pub fn scale(&self, c: &RatFunc<K>, p: &ConicElement<K>) -> ConicElement<K> {
        self.element(c.mul(&p.f), c.mul(&p.g))
    }

    /// `f − g·s`.
    pub fn conjugate(&self, p: &ConicElement<K>) -> ConicElement<K> {
        self.element(p.f.clone(), p.g.neg())
    }

    /// `f² − g²·(a·x² + b) ∈ E(x)`.
    pub fn norm(&self, p: &ConicElement<K>) -> RatFunc<K> {
        p.f.square().sub(&p.g.square().mul(&self.radicand()))
    }

    /// Panics on zero. The norm of a nonzero element is nonzero since `a·x² + b` is not a square.
    pub fn inv(&self, p: &ConicElement<K>) -> ConicElement<K> {
        let n = self.norm(p);
        assert!(!n.is_zero(), "inverse of zero in the conic function field");
        self.scale(&n.inv(), &self.conjugate(p))
    }

    pub fn div(&self, p: &ConicElement<K>, q: &ConicElement<K>) -> ConicElement<K> {
        self.mul(p, &self.inv(q))
    }

    pub fn pow(&self, p: &ConicElement<K>, e: u32) -> ConicElement<K> {
        (0..e).fold(self.one(), |acc, _| self.mul(&acc, p))
    }

    pub fn is_zero(&self, p: &ConicElement<K>) -> bool {
        p.f.is_zero() && p.g.is_zero()
    }

    /// `h(p)` for a rational function `h` over `E`.
    pub fn eval(&self, h: &RatFunc<K>, p: &ConicElement<K>) -> ConicElement<K> {
        let horner = |poly: &Poly<K>| {
            poly.coeffs()
                .iter()
                .rev()
                .fold(self.zero(), |acc, c| self.add(&self.mul(&acc, p), &self.from_base(c.clone())))
        };
        self.div(&horner(h.num()), &horner(h.den()))
    }

    /// `(e₀, e₁, e₂, e₃)` in `E(y)` with `p = e₀ + e₁·x + e₂·s + e₃·x·s`.
    pub fn components(&self, p: &ConicElement<K>) -> [RatFunc<K>; 4] {
        let (e0, e1) = even_odd(&p.f, &self.y_ctx);
        let (e2, e3) = even_odd(&p.g, &self.y_ctx);
        [e0, e1, e2, e3]
    }

    /// Inverse of [`components`](Self::components).
    pub fn from_components(&self, e: &[RatFunc<K>; 4]) -> ConicElement<K> {
        let x = RatFunc::var(&self.x_ctx);
        let y = x.square();
        let up = |h: &RatFunc<K>| h.renamed(&self.x_ctx.var).compose(&y);
        self.element(up(&e[0]).add(&x.mul(&up(&e[1]))), up(&e[2]).add(&x.mul(&up(&e[3]))))
    }

    pub fn display(&self, p: &ConicElement<K>) -> String {
        match (p.f.is_zero(), p.g.is_zero()) {
            (_, true) => p.f.to_string(),
            (true, false) => format!("({})*s", p.g),
            (false, false) => format!("{} + ({})*s", p.f, p.g),
        }
    }
}

// h(x) = even(x²) + x·odd(x²)
fn even_odd<K: Field>(h: &RatFunc<K>, y_ctx: &PolyCtx<K>) -> (RatFunc<K>, RatFunc<K>) {
    let (ne, no, den) = even_odd_raw(h, y_ctx);
    (RatFunc::new(ne, den.clone()), RatFunc::new(no, den))
}

// unreduced numerators and common denominator of the even/odd split
fn even_odd_raw<K: Field>(h: &RatFunc<K>, y_ctx: &PolyCtx<K>) -> (Poly<K>, Poly<K>, Poly<K>) {
    let dr = h.den().reflect();
    let (den, _) = h.den().mul(&dr).even_odd(y_ctx);
    let (ne, no) = h.num().mul(&dr).even_odd(y_ctx);
    (ne, no, den)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CaseTag {
    /// `[Γ_w : Γ] = 4`; impossible for a discrete value group.
    Case1Index4,
    /// Only `v(a)` is even.
    Case2A,
    /// Only `v(b)` is even.
    Case2B,
    /// Only `v(ab)` is even.
    Case2AB,
    /// `v(a)` and `v(b)` are even.
    Case3Units,
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CaseTag::Case1Index4 => "case1_index4",
            CaseTag::Case2A => "case2_a",
            CaseTag::Case2B => "case2_b",
            CaseTag::Case2AB => "case2_ab",
            CaseTag::Case3Units => "case3_units",
        })
    }
}

/// The residue field of `w★`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ResidueFieldDesc<B: Field, R: Field> {
    /// `κ(r)`; `z̄` is the given function of `r`, and the square root generating
    /// `κ_w` over `κ(z̄)` is `root` (an element of `κ(r)`).
    Rational { unit: B, unit_bar: R, z_bar: RatFunc<R>, root: RatFunc<R>, radicand: RatFunc<R> },
    /// `κ(T)(S)` with `S² = ā₀T² + b̄₀`, `a₀ = a·u²`, `b₀ = b·ν²`, `T = res((ν/u)·x)`, `S = res(ν·s)`.
    Conic { a0: B, b0: B, a0_bar: R, b0_bar: R, u: B, nu: B, t_ctx: PolyCtx<R> },
}

impl<B: Field, R: Field> ResidueFieldDesc<B, R> {
    pub fn variant(&self) -> &'static str {
        match self {
            ResidueFieldDesc::Rational { .. } => "rational",
            ResidueFieldDesc::Conic { .. } => "conic",
        }
    }

    /// `ā₀T² + b̄₀` in the conic case.
    pub fn conic_relation(&self) -> Option<RatFunc<R>> {
        match self {
            ResidueFieldDesc::Conic { a0_bar, b0_bar, t_ctx, .. } => Some(RatFunc::from_poly(Poly::new(
                t_ctx.clone(),
                vec![b0_bar.clone(), R::zero(&t_ctx.base), a0_bar.clone()],
            ))),
            ResidueFieldDesc::Rational { .. } => None,
        }
    }

    pub fn mul(&self, p: &ResidueElement<R>, q: &ResidueElement<R>) -> ResidueElement<R> {
        match (p, q) {
            (ResidueElement::Rational(x), ResidueElement::Rational(y)) => ResidueElement::Rational(x.mul(y)),
            (ResidueElement::Conic { p: p1, q: q1 }, ResidueElement::Conic { p: p2, q: q2 }) => {
                let rel = self.conic_relation().expect("conic residue element needs a conic description");
                ResidueElement::Conic { p: p1.mul(p2).add(&q1.mul(q2).mul(&rel)), q: p1.mul(q2).add(&q1.mul(p2)) }
            }
            _ => panic!("residue elements of different shapes"),
        }
    }

    pub fn describe(&self, kappa: &str) -> String {
        match self {
            ResidueFieldDesc::Rational { z_bar, root, radicand, .. } => {
                format!("{kappa}(r) with z = {z_bar}, sqrt({radicand}) = {root}")
            }
            ResidueFieldDesc::Conic { .. } => {
                format!("{kappa}(T)(S), S^2 = {}", self.conic_relation().unwrap())
            }
        }
    }
}

/// An element of `κ_w`: a function of `r`, or `p + q·S` with `p, q ∈ κ(T)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ResidueElement<R: Field> {
    Rational(RatFunc<R>),
    Conic { p: RatFunc<R>, q: RatFunc<R> },
}

impl<R: Field> fmt::Display for ResidueElement<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ResidueElement::Rational(x) => write!(f, "{x}"),
            ResidueElement::Conic { p, q } => match (p.is_zero(), q.is_zero()) {
                (_, true) => write!(f, "{p}"),
                (true, false) if q.is_one() => write!(f, "S"),
                (true, false) => write!(f, "({q})*S"),
                (false, false) if q.is_one() => write!(f, "{p} + S"),
                (false, false) => write!(f, "{p} + ({q})*S"),
            },
        }
    }
}

/// The unique extension `w★` to `F` of the Gauss extension of `v` on `E(x²)` with respect to `a·x²/b`.
#[derive(Clone, Debug)]
pub struct DistinguishedExtension<V: ConicValuation> {
    v: V,
    field: ConicFunctionField<V::Base>,
    va: i64,
    vb: i64,
    case: CaseTag,
    gamma: ValueGroup,
    w1: GaussExtension<V>,
    residue: ResidueFieldDesc<V::Base, V::Residue>,
    // scaling of the components that carry the residue, indexed like the basis
    scalings: [Option<V::Base>; 4],
    // z̄ and the residue of the scaled basis element, as functions of the generator
    z_bar: RatFunc<V::Residue>,
}

impl<V: ConicValuation> DistinguishedExtension<V> {
    pub fn new(v: V, field: ConicFunctionField<V::Base>) -> Result<Self, ConicError> {
        let va = v.order(field.a()).ok_or(ValuationError::ZeroInput)?;
        let vb = v.order(field.b()).ok_or(ValuationError::ZeroInput)?;
        let (ea, eb, eab) = (va % 2 == 0, vb % 2 == 0, (va + vb) % 2 == 0);
        let case = match (ea, eb, eab) {
            (true, true, _) => CaseTag::Case3Units,
            (true, false, false) => CaseTag::Case2A,
            (false, true, false) => CaseTag::Case2B,
            (false, false, true) => CaseTag::Case2AB,
            _ => unreachable!("v(a) + v(b) and v(ab) have the same parity, so some value is even"),
        };
        let gamma = if ea && eb { ValueGroup::integers() } else { ValueGroup::half_integers() };
        let z = RatFunc::from_poly(Poly::monomial(field.y_ctx(), field.a().div(field.b()), 1));
        let w1 = GaussExtension::with_pivot(v.clone(), &z, "z")?;
        let pi = v.uniformizer();
        let kctx = v.residue_ctx();
        let (a, b) = (field.a().clone(), field.b().clone());
        let one = V::Base::one(&v.base_ctx());
        let (residue, scalings, z_bar) = match case {
            CaseTag::Case3Units => {
                let u = pi.pow(-va / 2);
                let nu = pi.pow(-vb / 2);
                let (a0, b0) = (a.mul(&u.square()), b.mul(&nu.square()));
                let (a0_bar, b0_bar) = (v.residue_of(&a0)?, v.residue_of(&b0)?);
                let t_ctx = PolyCtx::new(kctx.clone(), "T");
                // z = a₀X₀²/b₀
                let z_bar = RatFunc::from_poly(Poly::monomial(&t_ctx, a0_bar.div(&b0_bar), 2));
                let ratio = u.div(&nu);
                let scalings = [Some(one), Some(ratio.clone()), Some(nu.inv()), Some(ratio.div(&nu))];
                (ResidueFieldDesc::Conic { a0, b0, a0_bar, b0_bar, u, nu, t_ctx }, scalings, z_bar)
            }
            CaseTag::Case2B => {
                // b = π^{2m}u, R = res(s·π^{−m}), R² = ū(z̄+1)
                let (m, u) = half_unit(&v, &b);
                let ub = v.residue_of(&u)?;
                let r = r_var(&kctx);
                let z_bar = r.square().div(&cst(&kctx, &ub)).sub(&RatFunc::one(&r.ctx()));
                let radicand = cst(&kctx, &ub).mul(&z_bar.add(&RatFunc::one(&r.ctx())));
                let scalings = [Some(one), None, Some(pi.pow(m)), None];
                (rational(u, ub, z_bar.clone(), r, radicand), scalings, z_bar)
            }
            CaseTag::Case2AB => {
                // ab = π^{2m}u, R = res(a·x·π^{−m}), R² = ūz̄
                let (m, u) = half_unit(&v, &a.mul(&b));
                let ub = v.residue_of(&u)?;
                let r = r_var(&kctx);
                let z_bar = r.square().div(&cst(&kctx, &ub));
                let radicand = cst(&kctx, &ub).mul(&z_bar);
                let scalings = [Some(one), Some(pi.pow(m).div(&a)), None, None];
                (rational(u, ub, z_bar.clone(), r, radicand), scalings, z_bar)
            }
            CaseTag::Case2A => {
                // a = π^{2m}u, R = res(π^m·u·x·s/b), R² = ūz̄(z̄+1), R = r·z̄
                let (m, u) = half_unit(&v, &a);
                let ub = v.residue_of(&u)?;
                let r = r_var(&kctx);
                let ubr = cst(&kctx, &ub);
                let z_bar = ubr.div(&r.square().sub(&ubr));
                let radicand = ubr.mul(&z_bar).mul(&z_bar.add(&RatFunc::one(&r.ctx())));
                let root = r.mul(&z_bar);
                let scalings = [Some(one), None, None, Some(b.div(&pi.pow(m).mul(&u)))];
                (rational(u, ub, z_bar.clone(), root, radicand), scalings, z_bar)
            }
            CaseTag::Case1Index4 => unreachable!(),
        };
        if let ResidueFieldDesc::Rational { root, radicand, .. } = &residue {
            assert_eq!(&root.square(), radicand, "rational parametrization of the residue field");
        }
        Ok(DistinguishedExtension { v, field, va, vb, case, gamma, w1, residue, scalings, z_bar })
    }

    pub fn valuation(&self) -> &V {
        &self.v
    }

    pub fn field(&self) -> &ConicFunctionField<V::Base> {
        &self.field
    }

    pub fn case(&self) -> CaseTag {
        self.case
    }

    pub fn value_group(&self) -> ValueGroup {
        self.gamma
    }

    /// `{0, v(a)/2, v(b)/2, v(ab)/2}` modulo Z.
    pub fn coset_representatives(&self) -> [HalfInt; 4] {
        let (va, vb) = (self.va, self.vb);
        [HalfInt::ZERO, HalfInt::half_of(va), HalfInt::half_of(vb), HalfInt::half_of(va + vb)]
            .map(HalfInt::mod_integers)
    }

    /// Elements attaining the coset representatives, in the same order: `1, x·s, s, x`.
    pub fn coset_witnesses(&self) -> [ConicElement<V::Base>; 4] {
        let f = &self.field;
        [f.one(), f.mul(&f.x(), &f.s()), f.s(), f.x()]
    }

    pub fn residue_desc(&self) -> &ResidueFieldDesc<V::Base, V::Residue> {
        &self.residue
    }

    /// The pivot `z = a·y/b` on `E(y)`.
    pub fn pivot(&self) -> RatFunc<V::Base> {
        self.w1.pivot_element()
    }

    /// Values of `1, x, s, x·s`.
    pub fn basis_values(&self) -> [HalfInt; 4] {
        let (va, vb) = (self.va, self.vb);
        [HalfInt::ZERO, HalfInt::half_of(vb - va), HalfInt::half_of(vb), HalfInt::half_of(2 * vb - va)]
    }

    /// `w₁(h)` for `h ∈ E(y)`: `min(v(h_i) + i·(v(b) − v(a)))` on numerator minus denominator.
    pub fn w1_value(&self, h: &RatFunc<V::Base>) -> Value {
        match self.w1_poly_value(h.num()) {
            Value::Infinity => Value::Infinity,
            n => n - self.w1_poly_value(h.den()),
        }
    }

    /// The Gauss extension `w₁` on `E(y)`.
    pub fn w1(&self) -> &GaussExtension<V> {
        &self.w1
    }

    /// `w★(p)`, with `∞` for zero.
    pub fn value(&self, p: &ConicElement<V::Base>) -> Value {
        // w₁ of a quotient needs no reduction, so the components stay unreduced
        let y_ctx = &self.field.y_ctx;
        let (e0, e1, df) = even_odd_raw(&p.f, y_ctx);
        let (e2, e3, dg) = even_odd_raw(&p.g, y_ctx);
        let beta = self.basis_values();
        [(e0, &df), (e1, &df), (e2, &dg), (e3, &dg)]
            .iter()
            .zip(beta)
            .map(|((n, d), b)| self.w1_poly_value(n) - self.w1_poly_value(d) + Value::Finite(b))
            .min()
            .unwrap()
    }

    // w₁ on a polynomial in y, ∞ for zero
    fn w1_poly_value(&self, p: &Poly<V::Base>) -> Value {
        let shift = self.vb - self.va;
        p.coeffs()
            .iter()
            .enumerate()
            .filter_map(|(i, c)| Some(self.v.order(c)? + i as i64 * shift))
            .min()
            .map_or(Value::Infinity, Value::int)
    }

    pub fn eval_w_star(&self, p: &ConicElement<V::Base>) -> Result<Value, ConicError> {
        match self.value(p) {
            Value::Infinity => Err(ConicError::ZeroElement),
            v => Ok(v),
        }
    }

    // residue under w₁ in κ(z̄), zero for positive value
    fn w1_residue(&self, h: &RatFunc<V::Base>) -> Result<RatFunc<V::Residue>, ConicError> {
        let zctx = PolyCtx::new(self.v.residue_ctx(), "z");
        match self.w1_value(h) {
            Value::Infinity => Ok(RatFunc::zero(&zctx)),
            Value::Finite(x) if x > HalfInt::ZERO => Ok(RatFunc::zero(&zctx)),
            _ => Ok(self.w1.residue(h)?),
        }
    }

    pub fn residue_w_star(&self, p: &ConicElement<V::Base>) -> Result<ResidueElement<V::Residue>, ConicError> {
        let value = self.value(p);
        if value != Value::int(0) {
            return Err(ConicError::NonzeroValue(value));
        }
        let comps = self.field.components(p);
        let mut parts = Vec::with_capacity(4);
        for (e, c) in comps.iter().zip(&self.scalings) {
            parts.push(match c {
                Some(c) => self.w1_residue(&e.mul(&RatFunc::constant(e.poly_ctx(), c.clone())))?.compose(&self.z_bar),
                None => RatFunc::zero(&self.z_bar.ctx()),
            });
        }
        Ok(match &self.residue {
            ResidueFieldDesc::Conic { t_ctx, .. } => {
                let t = RatFunc::var(t_ctx);
                ResidueElement::Conic { p: parts[0].add(&parts[1].mul(&t)), q: parts[2].add(&parts[3].mul(&t)) }
            }
            ResidueFieldDesc::Rational { root, .. } => {
                let carrier = parts[1..].iter().fold(RatFunc::zero(&root.ctx()), |acc, x| acc.add(x));
                ResidueElement::Rational(parts[0].add(&carrier.mul(root)))
            }
        })
    }
}

fn half_unit<V: DiscreteValuation>(v: &V, x: &V::Base) -> (i64, V::Base) {
    let (m, _) = v.unit_part(x).expect("nonzero");
    debug_assert_eq!(m % 2, 0);
    (m / 2, x.mul(&v.uniformizer().pow(-m)))
}

fn r_var<R: Field>(k: &R::Ctx) -> RatFunc<R> {
    RatFunc::var(&PolyCtx::new(k.clone(), "r"))
}

fn cst<R: Field>(k: &R::Ctx, c: &R) -> RatFunc<R> {
    RatFunc::constant(&PolyCtx::new(k.clone(), "r"), c.clone())
}

fn rational<B: Field, R: Field>(
    unit: B,
    unit_bar: R,
    z_bar: RatFunc<R>,
    root: RatFunc<R>,
    radicand: RatFunc<R>,
) -> ResidueFieldDesc<B, R> {
    ResidueFieldDesc::Rational { unit, unit_bar, z_bar, root, radicand }
}

/// Which argument of the infinite-family construction produced a member.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FamilyBranch {
    /// Odd `v(a')`: pivot `c·x'` with `2v(c) > v(a') − v(b')`.
    Ramified,
    /// Unit-unit with split residue algebra: pivot `c·(x' − x₀)` with `v(c) < 0`.
    SplitResidue,
}

impl fmt::Display for FamilyBranch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FamilyBranch::Ramified => "ramified",
            FamilyBranch::SplitResidue => "split_residue",
        })
    }
}

/// One Gauss extension of `v` to `E(x')` whose extensions to `F` have rational residue fields.
#[derive(Clone, Debug)]
pub struct FamilyMember<V: ConicValuation> {
    pub branch: FamilyBranch,
    pub c: V::Base,
    pub value_c: i64,
    /// The pivot as a function of the normalized generator `x'`.
    pub pivot: RatFunc<V::Base>,
    /// The pivot as an element of the original field.
    pub pivot_in_f: ConicElement<V::Base>,
    pub extension: GaussExtension<V>,
    /// Analysis of `a'x'² + b'` under the member; ramified or split pair.
    pub quadratic: QuadraticExtension<RatFunc<V::Base>, RatFunc<V::Residue>>,
    /// `(x̄₀, ȳ₀)` with `ā'x̄₀² + b̄' = ȳ₀²` in the split-residue branch.
    pub center: Option<(V::Residue, V::Residue)>,
}

#[derive(Clone, Debug)]
pub struct RationalFamily<V: ConicValuation> {
    /// `(a', b')` with `F ≅ E(x')(s')`, `s'² = a'x'² + b'`.
    pub presentation: QuaternionAlgebra<V::Base>,
    pub transcript: Vec<Move<V::Base>>,
    /// `x'` and `s'` as elements of the original field.
    pub generators: (ConicElement<V::Base>, ConicElement<V::Base>),
    pub members: Vec<FamilyMember<V>>,
}

/// `(x', s')` of the presentation reached by `transcript`, in the generators of `field`.
pub fn transport_generators<K: Field>(
    field: &ConicFunctionField<K>,
    transcript: &[Move<K>],
) -> (ConicElement<K>, ConicElement<K>) {
    let (mut x, mut s) = (field.x(), field.s());
    let mut q = field.algebra();
    for m in transcript {
        match m {
            Move::ScaleA(c) => x = field.scale(&RatFunc::constant(field.x_ctx(), c.inv()), &x),
            Move::ScaleB(c) => {
                let c = RatFunc::constant(field.x_ctx(), c.clone());
                x = field.scale(&c, &x);
                s = field.scale(&c, &s);
            }
            Move::Swap => {
                let xi = field.inv(&x);
                s = field.mul(&s, &xi);
                x = xi;
            }
            Move::ReplaceB => {
                let ax = field.scale(&RatFunc::constant(field.x_ctx(), q.a.clone()), &x);
                x = std::mem::replace(&mut s, ax);
            }
        }
        q = q.apply(m);
    }
    (x, s)
}

/// `n` extensions of `v` to `F` with rational residue fields and pairwise distinct pivots.
pub fn rational_residue_family<V: ConicValuation>(
    v: &V,
    field: &ConicFunctionField<V::Base>,
    n: usize,
    search_bound: u64,
) -> Result<RationalFamily<V>, ConicError> {
    let verdict = decide_unramified_extension(&field.algebra(), v, search_bound)?;
    family_from_verdict(v, field, &verdict, n, search_bound)
}

fn family_from_verdict<V: ConicValuation>(
    v: &V,
    field: &ConicFunctionField<V::Base>,
    verdict: &ExtensionVerdict<V::Base, V::Residue>,
    n: usize,
    search_bound: u64,
) -> Result<RationalFamily<V>, ConicError> {
    if verdict.kind == VerdictKind::UnramifiedExtension {
        return Err(ConicError::PreconditionViolated(
            "v has an unramified extension to the algebra; no rational family is constructed".into(),
        ));
    }
    let mut transcript = verdict.normalized.transcript.clone();
    let mut pres = verdict.normalized.algebra.clone();
    let shape = verdict.normalized.shape;
    let pi = v.uniformizer();
    let base = v.base_ctx();
    let mut center = None;
    if shape == Shape::UnitUnit {
        let (ab, bb) = (v.residue_of(&pres.a)?, v.residue_of(&pres.b)?);
        center = V::Residue::conic_center(&ab, &bb, search_bound);
        if center.is_none() {
            // over F_3 a presentation can have no center with ȳ₀ ≠ 0; the swapped one then has
            center = V::Residue::conic_center(&bb, &ab, search_bound);
            if center.is_some() {
                transcript.push(Move::Swap);
                pres = pres.apply(&Move::Swap);
            }
        }
        if center.is_none() {
            return Err(ConicError::WitnessNotFound(format!(
                "no point of {ab}·x^2 + {bb} = y^2 with y != 0 within the search bound {search_bound}"
            )));
        }
    }
    let generators = transport_generators(field, &transcript);
    let xp_ctx = PolyCtx::new(base.clone(), &format!("{}'", field.x_ctx().var));
    let xp = RatFunc::var(&xp_ctx);
    let radicand =
        RatFunc::from_poly(Poly::new(xp_ctx.clone(), vec![pres.b.clone(), V::Base::zero(&base), pres.a.clone()]));
    let mut members = Vec::with_capacity(n);
    for i in 0..n as i64 {
        let (branch, k, pivot) = match shape {
            Shape::OddUnit => {
                // 2k > v(a') − v(b') = 1
                let k = 1 + i;
                (FamilyBranch::Ramified, k, xp.mul(&RatFunc::constant(&xp_ctx, pi.pow(k))))
            }
            Shape::UnitUnit => {
                let (x0, _) = center.as_ref().unwrap();
                let k = -1 - i;
                let shifted = xp.sub(&RatFunc::constant(&xp_ctx, v.lift(x0)));
                (FamilyBranch::SplitResidue, k, shifted.mul(&RatFunc::constant(&xp_ctx, pi.pow(k))))
            }
        };
        let extension = GaussExtension::with_pivot(v.clone(), &pivot, "Y")?;
        let quadratic = quadratic_extension_analysis(&extension, &radicand)?;
        let expected = match branch {
            FamilyBranch::Ramified => "ramified",
            FamilyBranch::SplitResidue => "split_pair",
        };
        assert_eq!(quadratic.kind(), expected, "quadratic step of the family member with pivot {pivot}");
        let pivot_in_f = field.eval(&pivot.renamed(&field.x_ctx().var), &generators.0);
        members.push(FamilyMember {
            branch,
            c: pi.pow(k),
            value_c: k,
            pivot,
            pivot_in_f,
            extension,
            quadratic,
            center: center.clone(),
        });
    }
    Ok(RationalFamily { presentation: pres, transcript, generators, members })
}

#[derive(Clone, Debug)]
pub struct AnalysisReport<V: ConicValuation> {
    pub verdict: ExtensionVerdict<V::Base, V::Residue>,
    /// Whether `v` extends to `F` with a transcendental, non-ruled residue field.
    pub present: bool,
    pub extension: DistinguishedExtension<V>,
    /// Empty in the present case.
    pub family: Option<RationalFamily<V>>,
}

/// Decides presence of the non-ruled residually transcendental extension and
/// builds `w★`; in the absent case, also `family_size` rational-residue extensions.
pub fn analyze<V: ConicValuation>(
    v: &V,
    field: &ConicFunctionField<V::Base>,
    family_size: usize,
    search_bound: u64,
) -> Result<AnalysisReport<V>, ConicError> {
    let verdict = decide_unramified_extension(&field.algebra(), v, search_bound)?;
    let extension = DistinguishedExtension::new(v.clone(), field.clone())?;
    let present = verdict.kind == VerdictKind::UnramifiedExtension;
    let family = if present {
        assert!(extension.value_group().is_integers(), "present case must have value group Z");
        let ResidueFieldDesc::Conic { a0_bar, b0_bar, .. } = extension.residue_desc() else {
            panic!("present case must have a conic residue field");
        };
        let residue = QuaternionAlgebra::new(a0_bar.clone(), b0_bar.clone())?;
        assert!(!is_split(&residue, search_bound)?.split, "present case must have a division residue algebra");
        None
    } else {
        Some(family_from_verdict(v, field, &verdict, family_size, search_bound)?)
    };
    Ok(AnalysisReport { verdict, present, extension, family })
}
