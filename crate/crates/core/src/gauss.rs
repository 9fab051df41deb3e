//! Gauss extensions of a valuation to a rational function field `E(X)`.
//!
//! The Gauss extension with respect to a generator `Y` of `E(X)` is
//! `w(Σ a_i Y^i) = min v(a_i)`, with residue field `κ(Ȳ)`. Pivots are either
//! Möbius transformations of `X` (which generate `E(X)`) or `c·X²`, whose
//! extension lives on the subfield `E(X²)` and is only evaluated there.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::fields::{Field, Poly, PolyCtx, RatFunc};
use crate::valuation::{DiscreteValuation, ValuationError, Value};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GaussError {
    #[error("element has value {0}, not 0; its residue is undefined")]
    NonzeroValue(Value),
    #[error("invalid pivot: {0}")]
    InvalidPivot(String),
    #[error("element does not lie in the subfield E(X^2) of the pivot")]
    NotInSubfield,
    #[error("input must be a nonconstant rational function")]
    ConstantInput,
    #[error("input is a square in the base field")]
    SquareInput,
    #[error(transparent)]
    Valuation(#[from] ValuationError),
}

/// `min v(a_i)` over the coefficients; `None` for the zero polynomial.
pub fn poly_order<V: DiscreteValuation>(v: &V, p: &Poly<V::Base>) -> Option<i64> {
    p.coeffs().iter().filter_map(|c| v.order(c)).min()
}

/// Value of `h` under the Gauss extension of `v` with respect to the variable of `h`.
pub fn gauss_value<V: DiscreteValuation>(v: &V, h: &RatFunc<V::Base>) -> Value {
    match (poly_order(v, h.num()), poly_order(v, h.den())) {
        (Some(n), Some(d)) => Value::int(n - d),
        _ => Value::Infinity,
    }
}

/// Residue of a value-zero `h` in `κ(X̄)`, with residue variable `var`.
pub fn gauss_residue<V: DiscreteValuation>(
    v: &V,
    h: &RatFunc<V::Base>,
    var: &str,
) -> Result<RatFunc<V::Residue>, GaussError> {
    let value = gauss_value(v, h);
    if value != Value::int(0) {
        return Err(GaussError::NonzeroValue(value));
    }
    let ctx = PolyCtx::new(v.residue_ctx(), var);
    let m = poly_order(v, h.den()).unwrap();
    let scale = v.uniformizer().pow(-m);
    let reduce = |p: &Poly<V::Base>| -> Result<Poly<V::Residue>, ValuationError> {
        let coeffs = p.coeffs().iter().map(|c| v.residue_of(&c.mul(&scale))).collect::<Result<_, _>>()?;
        Ok(Poly::new(ctx.clone(), coeffs))
    };
    Ok(RatFunc::new(reduce(h.num())?, reduce(h.den())?))
}

/// `[E(X):E(Y)]` and whether `X` is integral over `E[Y]`.
pub fn subfield_degree<K: Field>(y: &RatFunc<K>) -> Result<(usize, bool), GaussError> {
    if y.as_constant().is_some() {
        return Err(GaussError::ConstantInput);
    }
    let (n, d) = (y.num().deg(), y.den().deg());
    Ok((n.max(d) as usize, n > d))
}

/// The generator with respect to which a Gauss extension is taken.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Pivot<K: Field> {
    /// `Y = (αX + β)/(γX + δ)` with `αδ − βγ ≠ 0`.
    Mobius { alpha: K, beta: K, gamma: K, delta: K },
    /// `Y = c·X²` on the subfield `E(X²)`.
    Quadratic(K),
}

impl<K: Field> Pivot<K> {
    pub fn identity(ctx: &K::Ctx) -> Self {
        Pivot::Mobius { alpha: K::one(ctx), beta: K::zero(ctx), gamma: K::zero(ctx), delta: K::one(ctx) }
    }

    /// Classifies `y`; errors when it is constant, or neither of degree 1 nor `c·X²`.
    pub fn from_element(y: &RatFunc<K>) -> Result<Self, GaussError> {
        let (degree, _) = subfield_degree(y).map_err(|_| GaussError::InvalidPivot(format!("{y} is constant")))?;
        let (n, d) = (y.num(), y.den());
        match degree {
            1 => Ok(Pivot::Mobius { alpha: n.coeff(1), beta: n.coeff(0), gamma: d.coeff(1), delta: d.coeff(0) }),
            2 if d.is_one() && n.term_count() == 1 => Ok(Pivot::Quadratic(n.coeff(2))),
            _ => Err(GaussError::InvalidPivot(format!(
                "{y} neither generates the field nor has the form c*{}^2",
                y.poly_ctx().var
            ))),
        }
    }

    /// The pivot as an element of `E(X)`.
    pub fn element(&self, ctx: &PolyCtx<K>) -> RatFunc<K> {
        match self {
            Pivot::Mobius { alpha, beta, gamma, delta } => RatFunc::new(
                Poly::new(ctx.clone(), vec![beta.clone(), alpha.clone()]),
                Poly::new(ctx.clone(), vec![delta.clone(), gamma.clone()]),
            ),
            Pivot::Quadratic(c) => RatFunc::from_poly(Poly::monomial(ctx, c.clone(), 2)),
        }
    }
}

/// The Gauss extension of `v` to `E(X)` with respect to a pivot `Y`.
#[derive(Clone, Debug)]
pub struct GaussExtension<V: DiscreteValuation> {
    v: V,
    pivot: Pivot<V::Base>,
    x_ctx: PolyCtx<V::Base>,
    y_ctx: PolyCtx<V::Base>,
}

impl<V: DiscreteValuation> GaussExtension<V> {
    /// The Gauss extension with respect to `X` itself; the residue variable is `residue_var`.
    pub fn new(v: V, x_var: &str, residue_var: &str) -> Self {
        let base = v.base_ctx();
        let pivot = Pivot::identity(&base);
        GaussExtension { x_ctx: PolyCtx::new(base.clone(), x_var), y_ctx: PolyCtx::new(base, residue_var), v, pivot }
    }

    pub fn with_pivot(v: V, y: &RatFunc<V::Base>, residue_var: &str) -> Result<Self, GaussError> {
        let pivot = Pivot::from_element(y)?;
        let base = v.base_ctx();
        Ok(GaussExtension { x_ctx: y.poly_ctx().clone(), y_ctx: PolyCtx::new(base, residue_var), v, pivot })
    }

    pub fn base_valuation(&self) -> &V {
        &self.v
    }

    pub fn pivot(&self) -> &Pivot<V::Base> {
        &self.pivot
    }

    pub fn pivot_element(&self) -> RatFunc<V::Base> {
        self.pivot.element(&self.x_ctx)
    }

    pub fn x_ctx(&self) -> &PolyCtx<V::Base> {
        &self.x_ctx
    }

    pub fn residue_var(&self) -> &Arc<str> {
        &self.y_ctx.var
    }

    /// `h` rewritten as a rational function of the pivot `Y`.
    pub fn in_pivot(&self, h: &RatFunc<V::Base>) -> Result<RatFunc<V::Base>, GaussError> {
        match &self.pivot {
            Pivot::Mobius { alpha, beta, gamma, delta } => {
                // X = (δY − β)/(α − γY)
                let x = RatFunc::new(
                    Poly::new(self.y_ctx.clone(), vec![beta.neg(), delta.clone()]),
                    Poly::new(self.y_ctx.clone(), vec![alpha.clone(), gamma.neg()]),
                );
                Ok(h.compose(&x))
            }
            Pivot::Quadratic(c) => {
                let (num, den) = (h.num(), h.den());
                if !num.is_even() || !den.is_even() {
                    return Err(GaussError::NotInSubfield);
                }
                // X² = Y/c
                let x2 = RatFunc::from_poly(Poly::monomial(&self.y_ctx, c.inv(), 1));
                let deflate = |p: &Poly<V::Base>| RatFunc::from_poly(p.even_odd(&self.y_ctx).0);
                Ok(deflate(num).compose(&x2).div(&deflate(den).compose(&x2)))
            }
        }
    }

    pub fn value(&self, h: &RatFunc<V::Base>) -> Result<Value, GaussError> {
        Ok(gauss_value(&self.v, &self.in_pivot(h)?))
    }

    pub fn residue(&self, h: &RatFunc<V::Base>) -> Result<RatFunc<V::Residue>, GaussError> {
        gauss_residue(&self.v, &self.in_pivot(h)?, &self.y_ctx.var)
    }
}

impl<V: DiscreteValuation> DiscreteValuation for GaussExtension<V> {
    type Base = RatFunc<V::Base>;
    type Residue = RatFunc<V::Residue>;

    fn base_ctx(&self) -> PolyCtx<V::Base> {
        self.x_ctx.clone()
    }

    fn residue_ctx(&self) -> PolyCtx<V::Residue> {
        PolyCtx::new(self.v.residue_ctx(), &self.y_ctx.var)
    }

    /// Panics on elements outside `E(X²)` for a quadratic pivot.
    fn order(&self, x: &Self::Base) -> Option<i64> {
        let h = self.in_pivot(x).expect("element outside the domain of the pivot");
        match (poly_order(&self.v, h.num()), poly_order(&self.v, h.den())) {
            (Some(n), Some(d)) => Some(n - d),
            _ => None,
        }
    }

    fn uniformizer(&self) -> Self::Base {
        RatFunc::constant(&self.x_ctx, self.v.uniformizer())
    }

    fn residue_of(&self, x: &Self::Base) -> Result<Self::Residue, ValuationError> {
        match self.residue(x) {
            Ok(r) => Ok(r),
            Err(GaussError::Valuation(e)) => Err(e),
            Err(GaussError::NonzeroValue(Value::Finite(h))) if h.halves() < 0 => {
                Err(ValuationError::NegativeValue(h.halves() / 2))
            }
            // positive value
            Err(GaussError::NonzeroValue(_)) => Ok(RatFunc::zero(&self.residue_ctx())),
            Err(e) => panic!("{e}"),
        }
    }

    fn lift(&self, r: &Self::Residue) -> Self::Base {
        let lift_poly = |p: &Poly<V::Residue>| {
            let coeffs: Vec<_> = p.coeffs().iter().map(|c| self.v.lift(c)).collect();
            RatFunc::from_poly(Poly::new(self.y_ctx.clone(), coeffs))
        };
        let in_y = lift_poly(r.num()).div(&lift_poly(r.den()));
        in_y.compose(&self.pivot_element())
    }

    fn describe(&self) -> String {
        format!("Gauss extension of the {} with respect to {}", self.v.describe(), self.pivot_element())
    }
}

/// How `v` extends to `E(√a)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QuadraticExtension<B: Field, R: Field> {
    /// `v(a)` odd: a unique extension, value group `(1/2)Z`.
    Ramified { value: i64 },
    /// `ū` a square in κ: two extensions with residue field κ; `root² = ū`.
    SplitPair { unit: B, root: R },
    /// `ū` a nonsquare: a unique extension with residue field `κ(√ū)`.
    Inert { unit: B },
}

impl<B: Field, R: Field> QuadraticExtension<B, R> {
    pub fn kind(&self) -> &'static str {
        match self {
            QuadraticExtension::Ramified { .. } => "ramified",
            QuadraticExtension::SplitPair { .. } => "split_pair",
            QuadraticExtension::Inert { .. } => "inert",
        }
    }
}

impl<B: Field, R: Field> fmt::Display for QuadraticExtension<B, R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QuadraticExtension::Ramified { value } => write!(f, "ramified (value {value} is odd)"),
            QuadraticExtension::SplitPair { unit, root } => {
                write!(f, "split pair (unit {unit}, residue {root}^2)")
            }
            QuadraticExtension::Inert { unit } => write!(f, "inert (residue field adjoins the root of {unit})"),
        }
    }
}

/// Extension behavior of `v` in `E(√a)` for a nonsquare `a`.
pub fn quadratic_extension_analysis<V: DiscreteValuation>(
    v: &V,
    a: &V::Base,
) -> Result<QuadraticExtension<V::Base, V::Residue>, GaussError> {
    if a.is_zero() {
        return Err(ValuationError::ZeroInput.into());
    }
    if a.is_square() {
        return Err(GaussError::SquareInput);
    }
    let (m, u) = v.unit_part(a)?;
    if m % 2 != 0 {
        return Ok(QuadraticExtension::Ramified { value: m });
    }
    let ubar = v.residue_of(&u)?;
    Ok(match ubar.sqrt() {
        Some(root) => QuadraticExtension::SplitPair { unit: u, root },
        None => QuadraticExtension::Inert { unit: u },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{rat, Rational};
    use crate::valuation::{PAdic, RationalPlace};

    fn qx() -> PolyCtx<Rational> {
        PolyCtx::new((), "X")
    }

    fn qt() -> PolyCtx<Rational> {
        PolyCtx::new((), "t")
    }

    fn qpoly(cs: &[i64]) -> RatFunc<Rational> {
        RatFunc::from_poly(Poly::from_i64s(&qx(), cs))
    }

    fn v_t() -> RationalPlace {
        RationalPlace::at(qt(), rat(0, 1))
    }

    // X in Q(t)(X)
    fn qtx() -> PolyCtx<RatFunc<Rational>> {
        PolyCtx::new(qt(), "X")
    }

    fn tpow(k: u32) -> RatFunc<Rational> {
        RatFunc::var(&qt()).pow(k as i64)
    }

    #[test]
    fn gauss_values_padic() {
        let v = PAdic::new(3).unwrap();
        assert_eq!(gauss_value(&v, &qpoly(&[3, 9, 27])), Value::int(1));
        assert_eq!(gauss_value(&v, &qpoly(&[1, 3]).div(&qpoly(&[3, 0, 1]))), Value::int(0));
        assert_eq!(gauss_value(&v, &qpoly(&[])), Value::Infinity);
    }

    #[test]
    fn gauss_value_over_qt() {
        // tX² + t³
        let h = Poly::new(qtx(), vec![tpow(3), RatFunc::zero(&qt()), tpow(1)]);
        assert_eq!(gauss_value(&v_t(), &RatFunc::from_poly(h)), Value::int(1));
    }

    #[test]
    fn gauss_residues() {
        let v = PAdic::new(5).unwrap();
        let f5 = v.residue_ctx();
        let rx = PolyCtx::new(f5.clone(), "X");
        let r = gauss_residue(&v, &qpoly(&[5, 1]).div(&qpoly(&[1, 1])), "X").unwrap();
        assert_eq!(r, RatFunc::new(Poly::from_i64s(&rx, &[0, 1]), Poly::from_i64s(&rx, &[1, 1])));
        let r = gauss_residue(&v, &qpoly(&[1, 5]).div(&qpoly(&[10, 1])), "X").unwrap();
        assert_eq!(r, RatFunc::var(&rx).inv());
        assert!(matches!(gauss_residue(&v, &qpoly(&[5]), "X"), Err(GaussError::NonzeroValue(_))));

        // (X² + t)/(1 + tX) at v_t → X̄²
        let c = |k: u32| tpow(k);
        let one = RatFunc::one(&qt());
        let zero = RatFunc::zero(&qt());
        let h =
            RatFunc::new(Poly::new(qtx(), vec![c(1), zero.clone(), one.clone()]), Poly::new(qtx(), vec![one, c(1)]));
        let r = gauss_residue(&v_t(), &h, "X").unwrap();
        assert_eq!(r, RatFunc::var(&PolyCtx::new((), "X")).pow(2));
    }

    #[test]
    fn pivots() {
        let v = PAdic::new(5).unwrap();
        let w = GaussExtension::with_pivot(v.clone(), &qpoly(&[0, 5]), "Y").unwrap();
        assert_eq!(w.value(&qpoly(&[0, 1])).unwrap(), Value::int(-1));
        let id = GaussExtension::new(v.clone(), "X", "X");
        let h = qpoly(&[3, 10, 25]).div(&qpoly(&[1, 0, 5]));
        assert_eq!(id.value(&h).unwrap(), gauss_value(&v, &h));

        // Y = t(X − 1) over Q(t)
        let y = RatFunc::from_poly(Poly::new(qtx(), vec![tpow(1).neg(), tpow(1)]));
        let w = GaussExtension::with_pivot(v_t(), &y, "Y").unwrap();
        let xm1 = RatFunc::from_poly(Poly::new(qtx(), vec![RatFunc::one(&qt()).neg(), RatFunc::one(&qt())]));
        assert_eq!(w.value(&xm1).unwrap(), Value::int(-1));
        assert_eq!(w.residue(&y).unwrap(), RatFunc::var(&PolyCtx::new((), "Y")));

        assert!(matches!(GaussExtension::with_pivot(v.clone(), &qpoly(&[2]), "Y"), Err(GaussError::InvalidPivot(_))));
        assert!(matches!(
            GaussExtension::with_pivot(v.clone(), &qpoly(&[1, 0, 0, 1]), "Y"),
            Err(GaussError::InvalidPivot(_))
        ));
    }

    #[test]
    fn quadratic_pivot_on_even_subfield() {
        let v = PAdic::new(5).unwrap();
        let w = GaussExtension::with_pivot(v, &qpoly(&[0, 0, 5]), "Z").unwrap();
        // 5X² + 1 = Z + 1 has value 0; X² = Z/5 has value −1
        assert_eq!(w.value(&qpoly(&[1, 0, 5])).unwrap(), Value::int(0));
        assert_eq!(w.value(&qpoly(&[0, 0, 1])).unwrap(), Value::int(-1));
        assert_eq!(w.value(&qpoly(&[0, 1])), Err(GaussError::NotInSubfield));
    }

    #[test]
    fn subfield_degrees() {
        assert_eq!(subfield_degree(&qpoly(&[1, 0, 1]).div(&qpoly(&[0, 1]))).unwrap(), (2, true));
        assert_eq!(subfield_degree(&qpoly(&[0, 1]).inv()).unwrap(), (1, false));
        assert_eq!(subfield_degree(&qpoly(&[0, 1, 0, 1]).div(&qpoly(&[-1, 0, 1]))).unwrap(), (3, true));
        assert_eq!(subfield_degree(&qpoly(&[4])), Err(GaussError::ConstantInput));
    }

    #[test]
    fn quadratic_trichotomy_examples() {
        let v = PAdic::new(5).unwrap();
        assert_eq!(quadratic_extension_analysis(&v, &rat(2, 1)).unwrap().kind(), "inert");
        assert_eq!(quadratic_extension_analysis(&v, &rat(11, 1)).unwrap().kind(), "split_pair");
        assert_eq!(quadratic_extension_analysis(&v, &rat(10, 1)).unwrap().kind(), "ramified");
        assert_eq!(quadratic_extension_analysis(&v, &rat(9, 4)), Err(GaussError::SquareInput));
        // v(a) even but a not a unit: 50 = 5²·2
        assert_eq!(
            quadratic_extension_analysis(&v, &rat(50, 1)).unwrap(),
            QuadraticExtension::Inert { unit: rat(2, 1) }
        );
    }

    #[test]
    fn gauss_extension_is_a_valuation_on_e_of_x() {
        let w = GaussExtension::new(v_t(), "X", "X");
        // quadratic step of a Gauss extension: X² + t has residue X̄², a square
        let h = RatFunc::from_poly(Poly::new(qtx(), vec![tpow(1), RatFunc::zero(&qt()), RatFunc::one(&qt())]));
        assert_eq!(quadratic_extension_analysis(&w, &h).unwrap().kind(), "split_pair");
        let g = RatFunc::from_poly(Poly::new(qtx(), vec![tpow(1), RatFunc::zero(&qt()), tpow(1)]));
        assert_eq!(quadratic_extension_analysis(&w, &g).unwrap().kind(), "ramified");
        let r = RatFunc::var(&PolyCtx::new((), "X")).add(&RatFunc::one(&PolyCtx::new((), "X")));
        assert_eq!(w.residue_of(&w.lift(&r)).unwrap(), r);
    }
}
