//! Acceptance criteria 1 to 11, one PASS/FAIL line each.
//!
//! Every expected value comes from an oracle or a direct computation in this
//! file, never from the code path under test. Tolerances are exact equality
//! everywhere; the time limits below are the only thresholds.

use std::collections::BTreeSet;
use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use quatval_core::conic::{
    analyze, ConicElement, ConicFunctionField, DistinguishedExtension, FamilyBranch, ResidueElement, ResidueFieldDesc,
};
use quatval_core::fields::{rat, Field, Fq, FqCtx, Poly, PolyCtx, RatFunc, Rational};
use quatval_core::gauss::{gauss_value, quadratic_extension_analysis, subfield_degree, GaussExtension};
use quatval_core::oracle::{
    degree_oracle, direct_padic_poly_value, hensel_count, isotropy_search_rational, valuation_axiom_fuzz, ConicDomain,
    Sample, ValuedDomain,
};
use quatval_core::quaternion::{
    decide_unramified_extension, hilbert_symbol, is_split, relevant_places, Move, QuaternionAlgebra, VerdictKind,
    DEFAULT_SEARCH_BOUND,
};
use quatval_core::valuation::{DiscreteValuation, FqPlace, PAdic, PlaceKind, RationalPlace, Value};

const SEED: u64 = 20_240_611;
const GAUSS_LIMIT: Duration = Duration::from_secs(10);
const FINITE_SPLIT_LIMIT: Duration = Duration::from_secs(60);
const SWEEP_LIMIT: Duration = Duration::from_secs(120);

type Outcome = Result<String, String>;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    ensure(elapsed < limit, || format!("took {elapsed:.2?}, limit {limit:?}"))
}

fn qt() -> PolyCtx<Rational> {
    PolyCtx::new((), "t")
}

fn qt_const(n: i64) -> RatFunc<Rational> {
    RatFunc::constant(&qt(), rat(n, 1))
}

fn t() -> RatFunc<Rational> {
    RatFunc::var(&qt())
}

fn v_t() -> RationalPlace {
    RationalPlace::at(qt(), rat(0, 1))
}

fn present_fixture() -> DistinguishedExtension<RationalPlace> {
    let field = ConicFunctionField::new(qt_const(-1), qt_const(-1), qt(), "x").unwrap();
    DistinguishedExtension::new(v_t(), field).unwrap()
}

fn ramified_fixture() -> DistinguishedExtension<RationalPlace> {
    let field = ConicFunctionField::new(t(), qt_const(1), qt(), "x").unwrap();
    DistinguishedExtension::new(v_t(), field).unwrap()
}

fn split_fixture() -> DistinguishedExtension<PAdic> {
    let field = ConicFunctionField::new(rat(2, 1), rat(3, 1), (), "x").unwrap();
    DistinguishedExtension::new(PAdic::new(5).unwrap(), field).unwrap()
}

// ---------------------------------------------------------------------------
// 1. Gauss formula

// order of f ∈ K(t) at π by repeated division, or at infinity by degrees
fn direct_order<K: Field>(f: &RatFunc<K>, pi: Option<&Poly<K>>) -> Option<i64> {
    if f.is_zero() {
        return None;
    }
    let Some(pi) = pi else {
        return Some(f.den().deg() as i64 - f.num().deg() as i64);
    };
    let mult = |p: &Poly<K>| {
        let mut p = p.clone();
        let mut m = 0;
        loop {
            let (q, r) = p.divrem(pi);
            if !r.is_zero() {
                return m;
            }
            p = q;
            m += 1;
        }
    };
    Some(mult(f.num()) - mult(f.den()))
}

fn direct_poly_value<K: Field>(h: &Poly<RatFunc<K>>, pi: Option<&Poly<K>>) -> Value {
    h.coeffs().iter().filter_map(|c| direct_order(c, pi)).min().map_or(Value::Infinity, Value::int)
}

fn random_poly<K: Field>(ctx: &PolyCtx<K>, r: &mut ChaCha8Rng, mut coeff: impl FnMut(&mut ChaCha8Rng) -> K) -> Poly<K> {
    let deg = r.gen_range(0..=5);
    Poly::new(ctx.clone(), (0..=deg).map(|_| if r.gen_bool(0.15) { K::zero(&ctx.base) } else { coeff(r) }).collect())
}

// π^k for k = −3..=3
fn powers<K: Field>(pi: &K) -> Vec<K> {
    (-3..=3).map(|k| pi.pow(k)).collect()
}

fn spread<K: Field>(c: K, powers: &[K], r: &mut ChaCha8Rng) -> K {
    c.mul(&powers[r.gen_range(0..powers.len())])
}

fn gauss_check<V>(v: &V, n: usize, seed: u64, direct: impl Fn(&Poly<V::Base>) -> Value) -> Result<(), String>
where
    V: DiscreteValuation,
    V::Base: Sample,
{
    let xctx = PolyCtx::new(v.base_ctx(), "X");
    let pows = powers(&v.uniformizer());
    let mut r = rng(seed);
    for _ in 0..n {
        let h = random_poly(&xctx, &mut r, |r| spread(V::Base::sample(&v.base_ctx(), r), &pows, r));
        let got = gauss_value(v, &RatFunc::from_poly(h.clone()));
        let want = direct(&h);
        ensure(got == want, || format!("{}: gauss_value({h}) = {got}, direct {want}", v.describe()))?;
    }
    Ok(())
}

fn place_pi<K: Field>(kind: &PlaceKind<K>) -> Option<Poly<K>> {
    match kind {
        PlaceKind::Finite(pi) => Some(pi.clone()),
        PlaceKind::Infinite => None,
    }
}

fn criterion_1() -> Outcome {
    const N: usize = 10_000;
    let start = Instant::now();
    let mut fixtures = 0;
    let mut slowest = (Duration::ZERO, String::new());
    let mut track = |name: String, since: Instant| {
        fixtures += 1;
        if since.elapsed() > slowest.0 {
            slowest = (since.elapsed(), name);
        }
    };
    for p in [3, 5, 7] {
        let since = Instant::now();
        gauss_check(&PAdic::new(p).unwrap(), N, SEED + p, |h| direct_padic_poly_value(p, h))?;
        track(format!("v_{p}"), since);
    }
    let f3 = FqCtx::prime(3).unwrap();
    let f9 = FqCtx::default_extension(3, 2, "u").unwrap();
    let f5 = FqCtx::prime(5).unwrap();
    let places = [
        FqPlace::finite(PolyCtx::new(f3.clone(), "t"), Poly::from_i64s(&PolyCtx::new(f3.clone(), "t"), &[0, 1]))
            .unwrap(),
        FqPlace::finite(PolyCtx::new(f3.clone(), "t"), Poly::from_i64s(&PolyCtx::new(f3, "t"), &[1, 0, 1])).unwrap(),
        FqPlace::finite(PolyCtx::new(f9.clone(), "t"), Poly::from_i64s(&PolyCtx::new(f9, "t"), &[1, 1])).unwrap(),
        FqPlace::infinite(PolyCtx::new(f5, "t")),
    ];
    for (i, v) in places.iter().enumerate() {
        let since = Instant::now();
        let pi = place_pi(v.kind());
        gauss_check(v, N, SEED + 10 + i as u64, |h| direct_poly_value(h, pi.as_ref()))?;
        track(v.describe(), since);
    }
    let rplaces = [v_t(), RationalPlace::at(qt(), rat(2, 1)), RationalPlace::infinite(qt())];
    for (i, v) in rplaces.iter().enumerate() {
        let since = Instant::now();
        let pi = place_pi(v.kind());
        gauss_check(v, N, SEED + 20 + i as u64, |h| direct_poly_value(h, pi.as_ref()))?;
        track(v.describe(), since);
    }
    let elapsed = start.elapsed();
    within(elapsed, GAUSS_LIMIT)?;
    let (slow_time, slow_name) = slowest;
    Ok(format!(
        "{N} polynomials on each of {fixtures} valuations, {elapsed:.2?} (slowest {slow_name}, {slow_time:.2?})"
    ))
}

// ---------------------------------------------------------------------------
// 2. Hilbert product formula

fn random_rational(r: &mut ChaCha8Rng) -> Rational {
    loop {
        let q = Rational::new(r.gen_range(-2000..=2000).into(), r.gen_range(1..=300).into());
        if !q.is_zero() {
            return q;
        }
    }
}

fn criterion_2() -> Outcome {
    let mut r = rng(SEED + 2);
    let mut nontrivial = 0;
    for _ in 0..200 {
        let (a, b) = (random_rational(&mut r), random_rational(&mut r));
        let places = relevant_places(&[&a, &b]).map_err(|e| e.to_string())?;
        let mut product = 1i8;
        for &place in &places {
            let s = hilbert_symbol(&a, &b, place).map_err(|e| e.to_string())?;
            if s == -1 {
                nontrivial += 1;
            }
            product *= s;
        }
        ensure(product == 1, || format!("product of symbols for ({a}, {b}) over {places:?} is {product}"))?;
    }
    Ok(format!("200 pairs, {nontrivial} local symbols equal to -1"))
}

// ---------------------------------------------------------------------------
// 3. Finite-field splitting

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let mut pairs = 0;
    for q in [3u64, 5, 7, 9, 11, 13, 25, 27, 49] {
        let (p, d) = match q {
            9 => (3, 2),
            27 => (3, 3),
            25 => (5, 2),
            49 => (7, 2),
            p => (p, 1),
        };
        let ctx = FqCtx::default_extension(p, d, "u").map_err(|e| e.to_string())?;
        let units: Vec<Fq> = Fq::elements(&ctx).filter(|e| !e.is_zero()).collect();
        for a in &units {
            for b in &units {
                let alg = QuaternionAlgebra::new(a.clone(), b.clone()).unwrap();
                let res = is_split(&alg, DEFAULT_SEARCH_BOUND).map_err(|e| e.to_string())?;
                ensure(res.split, || format!("({a}, {b}) over F_{q} reported division"))?;
                let [x, y, z] = res.certificate.ok_or_else(|| format!("({a}, {b}) over F_{q}: no certificate"))?;
                let nontrivial = !(x.is_zero() && y.is_zero() && z.is_zero());
                let holds = a.mul(&x).mul(&x).add(&b.mul(&y).mul(&y)) == z.mul(&z);
                ensure(nontrivial && holds, || format!("({a}, {b}) over F_{q}: bad certificate ({x}, {y}, {z})"))?;
                pairs += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    within(elapsed, FINITE_SPLIT_LIMIT)?;
    Ok(format!("{pairs} pairs over 9 fields, every certificate verified, {elapsed:.2?}"))
}

// ---------------------------------------------------------------------------
// 4. Quadratic trichotomy against Hensel lifting

fn criterion_4() -> Outcome {
    let mut inputs = BTreeSet::new();
    for n in -50i64..=50 {
        for d in 1i64..=50 {
            if n != 0 {
                inputs.insert(rat(n, d));
            }
        }
    }
    let mut counts = [0usize; 2];
    for p in [3u64, 5, 7, 11, 13] {
        let v = PAdic::new(p).unwrap();
        for a in &inputs {
            let m = v.order(a).unwrap();
            if m % 2 != 0 || a.is_square() {
                continue;
            }
            let roots = hensel_count(p, a, 6).map_err(|e| e.to_string())?;
            let kind = quadratic_extension_analysis(&v, a).map_err(|e| e.to_string())?.kind();
            let expected = match roots {
                2 => "split_pair",
                0 => "inert",
                other => return Err(format!("Hensel count {other} for {a} at {p}")),
            };
            ensure(kind == expected, || format!("{a} at p = {p}: analysis {kind}, Hensel {roots} roots"))?;
            counts[roots / 2] += 1;
        }
    }
    Ok(format!("{} inert and {} split_pair cases agree", counts[0], counts[1]))
}

// ---------------------------------------------------------------------------
// 5. Degree formula against linear algebra

fn criterion_5() -> Outcome {
    let f7 = FqCtx::prime(7).unwrap();
    let ctx = PolyCtx::new(f7.clone(), "X");
    let mut r = rng(SEED + 5);
    let mut degrees = [0usize; 6];
    let mut done = 0;
    while done < 200 {
        let poly = |r: &mut ChaCha8Rng| {
            let deg = r.gen_range(0..=5);
            Poly::new(ctx.clone(), (0..=deg).map(|_| Fq::sample(&f7, r)).collect())
        };
        let (f, g) = (poly(&mut r), poly(&mut r));
        if g.is_zero() {
            continue;
        }
        let y = RatFunc::new(f, g);
        if y.as_constant().is_some() {
            continue;
        }
        let (deg, _) = subfield_degree(&y).map_err(|e| e.to_string())?;
        let oracle = degree_oracle(&y).map_err(|e| e.to_string())?;
        ensure(deg == oracle, || format!("Y = {y}: formula {deg}, oracle {oracle}"))?;
        degrees[deg] += 1;
        done += 1;
    }
    Ok(format!("200 functions, degree histogram {:?}", &degrees[1..]))
}

// ---------------------------------------------------------------------------
// 6. w★ is a valuation

fn restriction_check<V>(ext: &DistinguishedExtension<V>, n: usize, seed: u64) -> Result<(), String>
where
    V: quatval_core::conic::ConicValuation,
    V::Base: Sample,
{
    let field = ext.field();
    let gauss = GaussExtension::with_pivot(ext.valuation().clone(), &ext.pivot(), "Z").map_err(|e| e.to_string())?;
    let yctx = ext.pivot().poly_ctx().clone();
    let v = ext.valuation();
    let pows = powers(&v.uniformizer());
    let mut r = rng(seed);
    let x2 = field.mul(&field.x(), &field.x());
    for _ in 0..n {
        let h = RatFunc::new(
            random_poly(&yctx, &mut r, |r| spread(V::Base::sample(&v.base_ctx(), r), &pows, r)),
            Poly::one(&yctx),
        );
        if h.is_zero() {
            continue;
        }
        let elem = field.eval(&h.renamed(&field.x_ctx().var), &x2);
        let got = ext.eval_w_star(&elem).map_err(|e| e.to_string())?;
        let want = gauss.value(&h).map_err(|e| e.to_string())?;
        ensure(got == want, || format!("w★({h} at x^2) = {got}, pivot Gauss value {want}"))?;
    }
    Ok(())
}

fn fuzz<V>(ext: DistinguishedExtension<V>, seed: u64) -> Result<String, String>
where
    V: quatval_core::conic::ConicValuation,
    V::Base: Sample,
{
    restriction_check(&ext, 100, seed)?;
    let domain = ConicDomain(ext);
    let report = valuation_axiom_fuzz(&domain, 500, seed);
    ensure(report.agreement, || report.to_string())?;
    Ok(report.digest[..12].to_string())
}

fn criterion_6() -> Outcome {
    let digests =
        [fuzz(present_fixture(), SEED + 61)?, fuzz(ramified_fixture(), SEED + 62)?, fuzz(split_fixture(), SEED + 63)?];
    Ok(format!("500 pairs and 100 restrictions on 3 fixtures (reports {})", digests.join(", ")))
}

// ---------------------------------------------------------------------------
// 7. Value-group attainment

fn attainment<V>(ext: &DistinguishedExtension<V>, seed: u64) -> Result<(), String>
where
    V: quatval_core::conic::ConicValuation,
    V::Base: Sample,
{
    let reps = ext.coset_representatives();
    for (rep, witness) in reps.iter().zip(ext.coset_witnesses()) {
        let value = ext.eval_w_star(&witness).map_err(|e| e.to_string())?;
        let fin = value.finite().ok_or("infinite witness value")?;
        ensure(fin.mod_integers() == *rep, || format!("witness value {fin} does not represent the coset of {rep}"))?;
    }
    let gamma = ext.value_group();
    let cosets: BTreeSet<_> = reps.iter().map(|h| h.halves()).collect();
    let expected = if cosets.len() == 1 { 1 } else { 2 };
    ensure(gamma.is_integers() == (expected == 1), || format!("value group {gamma} but cosets {cosets:?}"))?;
    let domain = ConicDomain(ext.clone());
    let mut r = rng(seed);
    for _ in 0..500 {
        let e = domain.sample(&mut r);
        let value = domain.value(&e);
        ensure(gamma.contains(value), || format!("w★({}) = {value} outside {gamma}", domain.show(&e)))?;
    }
    Ok(())
}

fn criterion_7() -> Outcome {
    attainment(&present_fixture(), SEED + 71)?;
    attainment(&ramified_fixture(), SEED + 72)?;
    attainment(&split_fixture(), SEED + 73)?;
    let groups = [present_fixture().value_group(), ramified_fixture().value_group(), split_fixture().value_group()];
    Ok(format!("groups {}, {}, {}; all cosets attained, 1500 samples inside", groups[0], groups[1], groups[2]))
}

// ---------------------------------------------------------------------------
// 8. Present fixture

fn criterion_8() -> Outcome {
    let ext = present_fixture();
    let report = analyze(ext.valuation(), ext.field(), 5, DEFAULT_SEARCH_BOUND).map_err(|e| e.to_string())?;
    ensure(report.present, || format!("verdict {}", report.verdict.kind))?;
    ensure(report.verdict.kind == VerdictKind::UnramifiedExtension, || format!("verdict {}", report.verdict.kind))?;
    ensure(report.extension.value_group().is_integers(), || "value group is not Z".into())?;
    let ResidueFieldDesc::Conic { a0_bar, b0_bar, .. } = report.extension.residue_desc() else {
        return Err("residue field is not a conic".into());
    };
    ensure(*a0_bar == rat(-1, 1) && *b0_bar == rat(-1, 1), || format!("residue conic S^2 = {a0_bar}T^2 + {b0_bar}"))?;
    let point = isotropy_search_rational(a0_bar, b0_bar, 200);
    ensure(point.is_none(), || format!("residue algebra splits at {point:?}"))?;
    Ok(format!("PRESENT, value group Z, residue field {}", report.extension.residue_desc().describe("Q")))
}

// ---------------------------------------------------------------------------
// 9. Absent sweep over F_3(t) and F_5(t)

fn sweep(q: u64) -> Result<usize, String> {
    let k = FqCtx::prime(q).unwrap();
    let tctx = PolyCtx::new(k.clone(), "t");
    let v = FqPlace::finite(tctx.clone(), Poly::x(&tctx)).unwrap();
    let mut entries = Vec::new();
    for c in Fq::elements(&k).filter(|c| !c.is_zero()) {
        for e in 0..=2 {
            entries.push(RatFunc::from_poly(Poly::monomial(&tctx, c.clone(), e)));
        }
    }
    let mut cases = 0;
    for a in &entries {
        for b in &entries {
            let field = ConicFunctionField::new(a.clone(), b.clone(), tctx.clone(), "x").map_err(|e| e.to_string())?;
            let report = analyze(&v, &field, 5, DEFAULT_SEARCH_BOUND).map_err(|e| format!("({a}, {b}): {e}"))?;
            ensure(!report.present, || format!("({a}, {b}) over F_{q}(t) reported PRESENT"))?;
            let family = report.family.ok_or_else(|| format!("({a}, {b}): no family"))?;
            ensure(family.members.len() == 5, || format!("({a}, {b}): {} members", family.members.len()))?;
            let values: BTreeSet<i64> = family.members.iter().map(|m| m.value_c).collect();
            ensure(values.len() == 5, || format!("({a}, {b}): pivot values {values:?} not distinct"))?;
            let radicand = RatFunc::from_poly(Poly::new(
                family.members[0].pivot.poly_ctx().clone(),
                vec![family.presentation.b.clone(), RatFunc::zero(&tctx), family.presentation.a.clone()],
            ));
            for m in &family.members {
                let again = quadratic_extension_analysis(&m.extension, &radicand).map_err(|e| e.to_string())?;
                let expected = match m.branch {
                    FamilyBranch::Ramified => "ramified",
                    FamilyBranch::SplitResidue => "split_pair",
                };
                ensure(again.kind() == expected, || {
                    format!("({a}, {b}), pivot {}: quadratic step {} on the {expected} branch", m.pivot, again.kind())
                })?;
                let (x1, s1) = &family.generators;
                let lhs = family.presentation.a.clone();
                let field_rel = {
                    let f = &field;
                    let ax2 = f.scale(&RatFunc::constant(f.x_ctx(), lhs), &f.mul(x1, x1));
                    let rhs = f.add(&ax2, &f.from_base(family.presentation.b.clone()));
                    f.sub(&f.mul(s1, s1), &rhs)
                };
                ensure(field.is_zero(&field_rel), || format!("({a}, {b}): transported generators miss the relation"))?;
            }
            cases += 1;
        }
    }
    Ok(cases)
}

fn criterion_9() -> Outcome {
    let start = Instant::now();
    let cases = sweep(3)? + sweep(5)?;
    let elapsed = start.elapsed();
    within(elapsed, SWEEP_LIMIT)?;
    Ok(format!("{cases} presentations, none PRESENT, 5 rational members each, {elapsed:.2?}"))
}

// ---------------------------------------------------------------------------
// 10. Representation independence over Q(t)

fn random_entry(r: &mut ChaCha8Rng) -> RatFunc<Rational> {
    let c = rat(r.gen_range(1..=7) * if r.gen_bool(0.5) { 1 } else { -1 }, r.gen_range(1..=3));
    let mut f = RatFunc::constant(&qt(), c).mul(&t().pow(r.gen_range(-2..=3)));
    if r.gen_bool(0.4) {
        let shift = RatFunc::from_poly(Poly::from_i64s(&qt(), &[r.gen_range(1..=4), 1]));
        f = f.mul(&shift);
    }
    f
}

fn random_square_factor(r: &mut ChaCha8Rng) -> RatFunc<Rational> {
    let c = qt_const(r.gen_range(1..=5)).mul(&t().pow(r.gen_range(-2..=2)));
    let extra = RatFunc::from_poly(Poly::from_i64s(&qt(), &[r.gen_range(1..=3), r.gen_range(0..=2)]));
    if extra.is_zero() {
        c
    } else {
        c.mul(&extra)
    }
}

fn criterion_10() -> Outcome {
    let v = v_t();
    let mut r = rng(SEED + 10);
    let mut kinds = BTreeSet::new();
    for _ in 0..100 {
        let base = QuaternionAlgebra::new(random_entry(&mut r), random_entry(&mut r)).unwrap();
        let kind = decide_unramified_extension(&base, &v, DEFAULT_SEARCH_BOUND).map_err(|e| e.to_string())?.kind;
        let moves = [
            Move::ScaleA(random_square_factor(&mut r)),
            Move::ScaleB(random_square_factor(&mut r)),
            Move::Swap,
            Move::ReplaceB,
        ];
        let mut orbit = vec![base.clone()];
        for m in &moves {
            orbit.push(base.apply(m));
        }
        orbit.push(base.apply(&Move::ReplaceB).apply(&Move::Swap).apply(&Move::ScaleA(random_square_factor(&mut r))));
        for q in &orbit {
            let other = decide_unramified_extension(q, &v, DEFAULT_SEARCH_BOUND).map_err(|e| e.to_string())?.kind;
            ensure(other == kind, || format!("{base} gives {kind} but the equivalent {q} gives {other}"))?;
        }
        kinds.insert(kind.to_string());
    }
    Ok(format!("100 orbits of 6 presentations; verdicts seen: {}", kinds.into_iter().collect::<Vec<_>>().join(", ")))
}

// ---------------------------------------------------------------------------
// 11. Residue relation in the present case

fn criterion_11() -> Outcome {
    let ext = present_fixture();
    let field = ext.field().clone();
    let desc = ext.residue_desc().clone();
    let ResidueFieldDesc::Conic { t_ctx, .. } = &desc else {
        return Err("residue field is not a conic".into());
    };
    let tt = RatFunc::var(t_ctx);
    let zero = RatFunc::zero(t_ctx);
    let one = RatFunc::one(t_ctx);
    let res = |e: &ConicElement<RatFunc<Rational>>| ext.residue_w_star(e).map_err(|e| e.to_string());
    let (rx, rs) = (res(&field.x())?, res(&field.s())?);
    ensure(rx == ResidueElement::Conic { p: tt.clone(), q: zero.clone() }, || format!("residue of x is {rx}"))?;
    ensure(rs == ResidueElement::Conic { p: zero.clone(), q: one }, || format!("residue of s is {rs}"))?;
    // S² computed from the symbolic relation, compared with −T² − 1 written out by hand
    let s2 = desc.mul(&rs, &rs);
    let minus_t2_minus_1 = tt.mul(&tt).neg().sub(&RatFunc::one(t_ctx));
    ensure(s2 == ResidueElement::Conic { p: minus_t2_minus_1, q: zero }, || format!("S^2 = {s2}"))?;
    ensure(res(&field.mul(&field.s(), &field.s()))? == s2, || "residue of s^2 differs from S^2".into())?;

    let domain = ConicDomain(ext.clone());
    let mut r = rng(SEED + 11);
    let unit = |r: &mut ChaCha8Rng| loop {
        let e = domain.sample(r);
        if let Value::Finite(h) = domain.value(&e) {
            let m = h.to_int().expect("value group Z");
            return field.scale(&RatFunc::constant(field.x_ctx(), t().pow(-m)), &e);
        }
    };
    for _ in 0..200 {
        let (e1, e2) = (unit(&mut r), unit(&mut r));
        let lhs = res(&field.mul(&e1, &e2))?;
        let rhs = desc.mul(&res(&e1)?, &res(&e2)?);
        ensure(lhs == rhs, || format!("residue of a product: {lhs} vs {rhs}"))?;
    }
    Ok("x -> T, s -> S with S^2 = -T^2 - 1; residue map multiplicative on 200 unit pairs".into())
}

// ---------------------------------------------------------------------------

fn run(n: usize, name: &str, f: fn() -> Outcome) -> bool {
    let start = Instant::now();
    let outcome = panic::catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
        let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
        Err(format!("panicked: {}", msg.unwrap_or_default()))
    });
    let elapsed = start.elapsed();
    match outcome {
        Ok(detail) => {
            println!("PASS {n:>2} {name}: {detail} [{elapsed:.2?}]");
            true
        }
        Err(detail) => {
            println!("FAIL {n:>2} {name}: {detail} [{elapsed:.2?}]");
            false
        }
    }
}

fn main() -> ExitCode {
    panic::set_hook(Box::new(|_| {}));
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("gauss formula equivalence", criterion_1),
        ("hilbert product formula", criterion_2),
        ("finite-field splitting", criterion_3),
        ("quadratic trichotomy vs Hensel", criterion_4),
        ("degree formula vs linear algebra", criterion_5),
        ("w* is a valuation", criterion_6),
        ("value-group attainment", criterion_7),
        ("present fixture", criterion_8),
        ("absent sweep over F_3(t), F_5(t)", criterion_9),
        ("representation independence", criterion_10),
        ("residue relation", criterion_11),
    ];
    let passed = criteria.iter().enumerate().filter(|(i, (name, f))| run(i + 1, name, *f)).count();
    println!("{passed}/{} criteria passed", criteria.len());
    if passed == criteria.len() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
