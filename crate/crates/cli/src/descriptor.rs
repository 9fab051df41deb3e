//! Field and valuation descriptors.
//!
//! Fields: `Q`, `Q(t)`, `GF(p)`, `GF(p)[u]/(m(u))`, `Fq(t):q=9` with an optional
//! `,modulus=m(u)` (the generator of `F_q` over `F_p` is always called `u`).
//!
//! Valuations: `Q:p=5`, `Q(t):place=t-2`, `Q(t):place=inf`,
//! `Fq(t):q=3,place=t^2+1`, `Fq(t):q=5,place=inf`.

use std::sync::Arc;

use quatval_core::fields::integer::factor_u64;
use quatval_core::fields::{Field, Fq, FqCtx, Poly, PolyCtx, RatFunc, Rational};
use quatval_core::valuation::{FqPlace, PAdic, RationalPlace, ValuationError};

use crate::expr::{parse, Expr};
use crate::CliError;

const GENERATOR: &str = "u";

/// Named variables of a field, each bound to an element.
#[derive(Clone, Debug)]
pub struct Scope<K: Field> {
    pub ctx: K::Ctx,
    pub vars: Vec<(String, K)>,
}

impl<K: Field> Scope<K> {
    fn new(ctx: K::Ctx) -> Self {
        Scope { ctx, vars: Vec::new() }
    }

    pub fn names(&self) -> Vec<&str> {
        self.vars.iter().map(|(n, _)| n.as_str()).collect()
    }

    pub fn parse_expr(&self, text: &str) -> Result<Expr, CliError> {
        Ok(parse(text, &self.names())?)
    }

    pub fn eval(&self, e: &Expr) -> Result<K, CliError> {
        let lookup = |name: &str| self.vars.iter().find(|(n, _)| n == name).expect("declared variable").1.clone();
        e.eval(&self.ctx, &lookup).map_err(|e| CliError::Math(e.to_string()))
    }

    pub fn parse(&self, text: &str) -> Result<K, CliError> {
        self.eval(&self.parse_expr(text)?)
    }

    pub fn parse_nonzero(&self, text: &str, what: &str) -> Result<K, CliError> {
        let x = self.parse(text)?;
        if x.is_zero() {
            return Err(CliError::Math(format!("{what} must be nonzero")));
        }
        Ok(x)
    }

    /// The rational function field `K(var)`, with the variables of `K` as constants.
    pub fn adjoin(&self, var: &str) -> Result<Scope<RatFunc<K>>, CliError> {
        if self.vars.iter().any(|(n, _)| n == var) {
            return Err(CliError::Usage(format!("variable '{var}' is already used by the base field")));
        }
        let ctx = PolyCtx::new(self.ctx.clone(), var);
        let mut vars: Vec<_> = self.vars.iter().map(|(n, k)| (n.clone(), RatFunc::constant(&ctx, k.clone()))).collect();
        vars.push((var.to_string(), RatFunc::var(&ctx)));
        Ok(Scope { ctx, vars })
    }
}

impl Scope<Rational> {
    pub fn rationals() -> Self {
        Scope::new(())
    }
}

impl<K: Field> Scope<RatFunc<K>> {
    /// Parses a polynomial in the field's variable.
    pub fn parse_poly(&self, text: &str) -> Result<Poly<K>, CliError> {
        let h = self.parse(text)?;
        if !h.den().is_one() {
            return Err(CliError::Usage(format!("'{text}' is not a polynomial")));
        }
        Ok(h.num().clone())
    }
}

/// A parsed field descriptor.
#[derive(Clone, Debug)]
pub enum FieldDesc {
    Q(Scope<Rational>),
    Qt(Scope<RatFunc<Rational>>),
    Finite(Scope<Fq>),
    Fqt(Scope<RatFunc<Fq>>),
}

impl FieldDesc {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let text = text.trim();
        let (head, params) = match text.split_once(':') {
            Some((h, p)) => (h.trim(), parse_params(p)?),
            None => (text, Vec::new()),
        };
        if head == "Q" && params.is_empty() {
            return Ok(FieldDesc::Q(Scope::new(())));
        }
        if let Some(var) = function_field_var(head, "Q") {
            no_params(&params, text)?;
            return Ok(FieldDesc::Qt(Scope::<Rational>::new(()).adjoin(var)?));
        }
        if let Some(var) = function_field_var(head, "Fq") {
            let f = finite_field_from_params(&params, &["q", "modulus"], text)?;
            return Ok(FieldDesc::Fqt(f.adjoin(var)?));
        }
        if head.starts_with("GF(") {
            no_params(&params, text)?;
            return Ok(FieldDesc::Finite(parse_gf(head)?));
        }
        Err(CliError::Usage(format!("unknown field '{text}'; expected Q, Q(t), GF(p), GF(p)[u]/(m(u)) or Fq(t):q=<q>")))
    }

    pub fn name(&self) -> String {
        match self {
            FieldDesc::Q(_) => "Q".into(),
            FieldDesc::Qt(s) => format!("Q({})", s.ctx.var),
            FieldDesc::Finite(s) => format!("F_{}", s.ctx.order()),
            FieldDesc::Fqt(s) => format!("F_{}({})", s.ctx.base.order(), s.ctx.var),
        }
    }

    fn same_field(&self, other: &FieldDesc) -> bool {
        match (self, other) {
            (FieldDesc::Q(_), FieldDesc::Q(_)) => true,
            (FieldDesc::Qt(a), FieldDesc::Qt(b)) => a.ctx == b.ctx,
            (FieldDesc::Finite(a), FieldDesc::Finite(b)) => a.ctx == b.ctx,
            (FieldDesc::Fqt(a), FieldDesc::Fqt(b)) => a.ctx == b.ctx,
            _ => false,
        }
    }
}

/// A parsed valuation descriptor, with the scope of its field.
#[derive(Clone, Debug)]
pub enum ValDesc {
    PAdic(PAdic, Scope<Rational>),
    Qt(RationalPlace, Scope<RatFunc<Rational>>),
    Fqt(FqPlace, Scope<RatFunc<Fq>>),
}

impl ValDesc {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let text = text.trim();
        let (head, params) = match text.split_once(':') {
            Some((h, p)) => (h.trim(), parse_params(p)?),
            None => return Err(CliError::Usage(format!("valuation '{text}' lacks parameters, e.g. Q:p=5"))),
        };
        if head == "Q" {
            check_keys(&params, &["p"], text)?;
            let p = param(&params, "p", text)?;
            let p: u64 = p.parse().map_err(|_| CliError::Usage(format!("p = '{p}' is not an integer")))?;
            let v = PAdic::new(p).map_err(|e| match e {
                ValuationError::Dyadic => CliError::Usage(
                    "the 2-adic valuation is not supported: the residue field must have characteristic \
                     different from 2 (standing hypothesis v(2) = 0)"
                        .into(),
                ),
                e => CliError::Usage(e.to_string()),
            })?;
            return Ok(ValDesc::PAdic(v, Scope::new(())));
        }
        if let Some(var) = function_field_var(head, "Q") {
            check_keys(&params, &["place"], text)?;
            let scope = Scope::<Rational>::new(()).adjoin(var)?;
            let place = param(&params, "place", text)?;
            let v = if place == "inf" {
                RationalPlace::infinite(scope.ctx.clone())
            } else {
                RationalPlace::finite(scope.ctx.clone(), scope.parse_poly(place)?)
                    .map_err(|e| CliError::Usage(e.to_string()))?
            };
            return Ok(ValDesc::Qt(v, scope));
        }
        if let Some(var) = function_field_var(head, "Fq") {
            let base = finite_field_from_params(&params, &["q", "modulus", "place"], text)?;
            let scope = base.adjoin(var)?;
            let place = param(&params, "place", text)?;
            let v = if place == "inf" {
                FqPlace::infinite(scope.ctx.clone())
            } else {
                FqPlace::finite(scope.ctx.clone(), scope.parse_poly(place)?)
                    .map_err(|e| CliError::Usage(e.to_string()))?
            };
            return Ok(ValDesc::Fqt(v, scope));
        }
        Err(CliError::Usage(format!(
            "unknown valuation '{text}'; expected Q:p=<p>, Q(t):place=<place> or Fq(t):q=<q>,place=<place>"
        )))
    }

    pub fn field(&self) -> FieldDesc {
        match self {
            ValDesc::PAdic(_, s) => FieldDesc::Q(s.clone()),
            ValDesc::Qt(_, s) => FieldDesc::Qt(s.clone()),
            ValDesc::Fqt(_, s) => FieldDesc::Fqt(s.clone()),
        }
    }

    /// Errors unless the valuation lives on `field`.
    pub fn check_field(&self, field: &FieldDesc) -> Result<(), CliError> {
        let own = self.field();
        if own.same_field(field) {
            Ok(())
        } else {
            Err(CliError::Usage(format!("the valuation is defined on {}, not on {}", own.name(), field.name())))
        }
    }
}

fn function_field_var<'a>(head: &'a str, prefix: &str) -> Option<&'a str> {
    let var = head.strip_prefix(prefix)?.strip_prefix('(')?.strip_suffix(')')?.trim();
    let valid =
        var.chars().next().is_some_and(char::is_alphabetic) && var.chars().all(|c| c.is_alphanumeric() || c == '_');
    valid.then_some(var)
}

fn parse_params(text: &str) -> Result<Vec<(String, String)>, CliError> {
    text.split(',')
        .map(|kv| {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("parameter '{}' is not of the form key=value", kv.trim())))?;
            Ok((k.trim().to_string(), v.trim().to_string()))
        })
        .collect()
}

fn check_keys(params: &[(String, String)], allowed: &[&str], text: &str) -> Result<(), CliError> {
    match params.iter().find(|(k, _)| !allowed.contains(&k.as_str())) {
        Some((k, _)) => Err(CliError::Usage(format!("unknown parameter '{k}' in '{text}'"))),
        None => Ok(()),
    }
}

fn no_params(params: &[(String, String)], text: &str) -> Result<(), CliError> {
    check_keys(params, &[], text)
}

fn param<'a>(params: &'a [(String, String)], key: &str, text: &str) -> Result<&'a str, CliError> {
    params
        .iter()
        .find(|(k, _)| k == key)
        .map(|(_, v)| v.as_str())
        .ok_or_else(|| CliError::Usage(format!("missing parameter '{key}' in '{text}'")))
}

// q = p^d
fn prime_power(q: u64) -> Option<(u64, usize)> {
    match factor_u64(q).as_slice() {
        [(p, d)] => Some((*p, *d as usize)),
        _ => None,
    }
}

fn usage(e: impl ToString) -> CliError {
    CliError::Usage(e.to_string())
}

fn finite_field_from_params(params: &[(String, String)], allowed: &[&str], text: &str) -> Result<Scope<Fq>, CliError> {
    check_keys(params, allowed, text)?;
    let q = param(params, "q", text)?;
    let q: u64 = q.parse().map_err(|_| usage(format!("q = '{q}' is not an integer")))?;
    let (p, d) = prime_power(q).ok_or_else(|| usage(format!("q = {q} is not a prime power")))?;
    if p == 2 {
        return Err(usage("characteristic 2 is not supported (standing hypothesis v(2) = 0)"));
    }
    let ctx = match params.iter().find(|(k, _)| k == "modulus") {
        Some((_, m)) => {
            let ctx = modulus_ctx(p, m, GENERATOR)?;
            if ctx.degree() != d {
                return Err(usage(format!("modulus {m} has degree {}, but q = {p}^{d}", ctx.degree())));
            }
            ctx
        }
        None => FqCtx::default_extension(p, d, GENERATOR).map_err(usage)?,
    };
    Ok(finite_scope(ctx))
}

fn finite_scope(ctx: Arc<FqCtx>) -> Scope<Fq> {
    let mut s = Scope::new(ctx.clone());
    if let Some(g) = Fq::generator(&ctx) {
        s.vars.push((ctx.var().to_string(), g));
    }
    s
}

fn modulus_ctx(p: u64, m: &str, var: &str) -> Result<Arc<FqCtx>, CliError> {
    let prime = FqCtx::prime(p).map_err(usage)?;
    let poly = Scope::<Fq>::new(prime).adjoin(var)?.parse_poly(m)?;
    if !poly.is_monic() {
        return Err(usage(format!("modulus {m} is not monic")));
    }
    let coeffs = poly.coeffs().iter().map(|c| c.index() as u64).collect();
    FqCtx::extension(p, coeffs, var).map_err(usage)
}

// GF(p) or GF(p)[u]/(m(u))
fn parse_gf(head: &str) -> Result<Scope<Fq>, CliError> {
    let bad = || usage(format!("malformed finite field '{head}'; expected GF(p) or GF(p)[u]/(m(u))"));
    let rest = head.strip_prefix("GF(").ok_or_else(bad)?;
    let (p, rest) = rest.split_once(')').ok_or_else(bad)?;
    let p: u64 = p.trim().parse().map_err(|_| bad())?;
    if p == 2 {
        return Err(usage("characteristic 2 is not supported (standing hypothesis v(2) = 0)"));
    }
    let rest = rest.trim();
    if rest.is_empty() {
        return Ok(finite_scope(FqCtx::prime(p).map_err(usage)?));
    }
    let rest = rest.strip_prefix('[').ok_or_else(bad)?;
    let (var, rest) = rest.split_once(']').ok_or_else(bad)?;
    let m = rest.trim().strip_prefix("/(").and_then(|m| m.strip_suffix(')')).ok_or_else(bad)?;
    Ok(finite_scope(modulus_ctx(p, m, var.trim())?))
}
