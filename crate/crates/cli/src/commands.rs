//! Command implementations. Each returns a [`Report`] holding both renderings.

use clap::ValueEnum;
use quatval_core::conic::{
    analyze, rational_residue_family, ConicFunctionField, ConicValuation, DistinguishedExtension, FamilyMember,
    RationalFamily, ResidueFieldDesc,
};
use quatval_core::fields::integer::is_prime;
use quatval_core::fields::{rat, Field, Fq, FqCtx, Poly, PolyCtx, RatFunc, Rational};
use quatval_core::gauss::{subfield_degree, GaussExtension};
use quatval_core::oracle::{valuation_axiom_fuzz, BaseDomain, ConicDomain, Corrupted, GaussDomain, OracleReport};
use quatval_core::quaternion::{
    decide_unramified_extension, hilbert_symbol, is_split, ramification_set, ExtensionVerdict, Move,
    NormalizedPresentation, QPlace, QuaternionAlgebra, SplitField, Witness,
};
use quatval_core::valuation::{FqPlace, PAdic, RationalPlace, Value};
use serde_json::{json, Value as Json};

use crate::args::{Cli, Command, ConicArgs, QuatCommand, Suite};
use crate::descriptor::{FieldDesc, Scope, ValDesc};
use crate::CliError;

/// The variable of `E(x)`.
const X: &str = "x";

pub struct Report {
    pub json: Json,
    pub text: String,
    /// False when an oracle disagreed.
    pub agreement: bool,
    /// Reports printed as JSON regardless of `--json`.
    pub json_only: bool,
}

impl Report {
    fn new(json: Json, text: String) -> Self {
        Report { json, text, agreement: true, json_only: false }
    }
}

macro_rules! on_valuation {
    ($val:expr, |$v:ident, $s:ident| $body:expr) => {
        match $val {
            ValDesc::PAdic($v, $s) => $body,
            ValDesc::Qt($v, $s) => $body,
            ValDesc::Fqt($v, $s) => $body,
        }
    };
}

macro_rules! on_field {
    ($field:expr, |$s:ident| $body:expr) => {
        match $field {
            FieldDesc::Q($s) => $body,
            FieldDesc::Qt($s) => $body,
            FieldDesc::Finite($s) => $body,
            FieldDesc::Fqt($s) => $body,
        }
    };
}

pub fn run(cli: &Cli) -> Result<Report, CliError> {
    let bound = cli.search_bound;
    match &cli.command {
        Command::Analyze { conic, count } => {
            on_valuation!(conic_valuation(conic)?, |v, s| analyze_cmd(&v, &s, conic, *count, bound))
        }
        Command::Eval { conic, f, g } => on_valuation!(conic_valuation(conic)?, |v, s| eval_cmd(&v, &s, conic, f, g)),
        Command::Gauss { val, pivot, eval } => {
            on_valuation!(ValDesc::parse(val)?, |v, s| gauss_cmd(&v, &s, val, pivot, eval))
        }
        Command::Hilbert { a, b, place } => hilbert_cmd(a, b, place),
        Command::Quat { command: QuatCommand::Split { field, a, b } } => {
            let desc = FieldDesc::parse(field)?;
            let ramified = match &desc {
                FieldDesc::Q(s) => Some(ramification_set(&QuaternionAlgebra::new(
                    s.parse_nonzero(a, "a")?,
                    s.parse_nonzero(b, "b")?,
                )?)?),
                _ => None,
            };
            let mut report = on_field!(&desc, |s| split_cmd(s, a, b, bound))?;
            if let Some(places) = ramified {
                let names: Vec<String> = places.iter().map(QPlace::to_string).collect();
                report.text +=
                    &format!("ramified at: {}\n", if names.is_empty() { "none".into() } else { names.join(", ") });
                report.json["ramified_places"] = json!(names);
            }
            Ok(report)
        }
        Command::Quat { command: QuatCommand::Decide { conic } } => {
            on_valuation!(conic_valuation(conic)?, |v, s| decide_cmd(&v, &s, conic, bound))
        }
        Command::Family { conic, count } => {
            on_valuation!(conic_valuation(conic)?, |v, s| family_cmd(&v, &s, conic, *count, bound))
        }
        Command::Polyrep { field, y } => on_field!(FieldDesc::parse(field)?, |s| polyrep_cmd(&s, y)),
        Command::Verify { suite, seed, samples } => Ok(verify_cmd(*suite, *seed, *samples)),
    }
}

/// The valuation of `args`, after checking that it lives on the declared field.
fn conic_valuation(args: &ConicArgs) -> Result<ValDesc, CliError> {
    let v = ValDesc::parse(&args.val)?;
    v.check_field(&FieldDesc::parse(&args.field)?)?;
    Ok(v)
}

fn conic_field<K: SplitField>(scope: &Scope<K>, args: &ConicArgs) -> Result<ConicFunctionField<K>, CliError> {
    let (a, b) = (scope.parse_nonzero(&args.a, "a")?, scope.parse_nonzero(&args.b, "b")?);
    if scope.names().contains(&X) {
        return Err(CliError::Usage(format!("the base field may not use the variable name '{X}'")));
    }
    Ok(ConicFunctionField::new(a, b, scope.ctx.clone(), X)?)
}

fn lines(rows: &[(&str, String)]) -> String {
    rows.iter().map(|(k, v)| format!("{k}: {v}\n")).collect()
}

fn point_json<K: Field>(p: &Option<[K; 3]>) -> Json {
    match p {
        Some(p) => json!(p.iter().map(K::to_string).collect::<Vec<_>>()),
        None => Json::Null,
    }
}

fn point_text<K: Field>(p: &Option<[K; 3]>) -> String {
    match p {
        Some([x, y, z]) => format!("({x}, {y}, {z})"),
        None => "none".into(),
    }
}

fn algebra_json<K: Field>(q: &QuaternionAlgebra<K>) -> Json {
    json!({ "a": q.a.to_string(), "b": q.b.to_string() })
}

fn transcript<K: Field>(moves: &[Move<K>]) -> Vec<String> {
    moves.iter().map(Move::to_string).collect()
}

fn normalized_json<K: Field>(n: &NormalizedPresentation<K>) -> Json {
    json!({ "a": n.algebra.a.to_string(), "b": n.algebra.b.to_string(), "shape": n.shape.to_string() })
}

fn witness_json<B: Field, R: Field>(w: &Witness<B, R>) -> Json {
    match w {
        Witness::GlobalSplit { point } => json!({ "type": "global_split", "point": point_json(point) }),
        Witness::ResidueDivision { residue } => json!({ "type": "residue_division", "residue": algebra_json(residue) }),
        Witness::ResidueSplit { residue, point } => {
            json!({ "type": "residue_split", "residue": algebra_json(residue), "point": point_json(point) })
        }
        Witness::ResidueSquare { b, root } => {
            json!({ "type": "residue_square", "b": b.to_string(), "root": root.to_string() })
        }
        Witness::ResidueNonsquare { b } => json!({ "type": "residue_nonsquare", "b": b.to_string() }),
    }
}

fn witness_text<B: Field, R: Field>(w: &Witness<B, R>) -> String {
    match w {
        Witness::GlobalSplit { point } => format!("the algebra splits over E, point {}", point_text(point)),
        Witness::ResidueDivision { residue } => format!("residue algebra {residue} is a division algebra"),
        Witness::ResidueSplit { residue, point } => {
            format!("residue algebra {residue} splits, point {}", point_text(point))
        }
        Witness::ResidueSquare { b, root } => format!("residue of b' is {b} = ({root})^2"),
        Witness::ResidueNonsquare { b } => format!("residue of b' is {b}, a nonsquare"),
    }
}

fn verdict_rows<B: Field, R: Field>(verdict: &ExtensionVerdict<B, R>) -> Vec<(&'static str, String)> {
    let n = &verdict.normalized;
    let moves = transcript(&n.transcript);
    vec![
        ("verdict kind", verdict.kind.to_string()),
        ("witness", witness_text(&verdict.witness)),
        ("normalization", if moves.is_empty() { "none".into() } else { moves.join("; ") }),
        ("normalized", format!("{} ({})", n.algebra, n.shape)),
    ]
}

fn residue_field_json<V: ConicValuation>(ext: &DistinguishedExtension<V>) -> Json {
    let desc = ext.residue_desc();
    let kappa = V::Residue::field_name(&ext.valuation().residue_ctx());
    let (generators, relation) = match desc {
        ResidueFieldDesc::Conic { u, nu, .. } => (
            vec![format!("T = res({})", scaled(&nu.div(u), X)), format!("S = res({})", scaled(nu, "s"))],
            format!("S^2 = {}", desc.conic_relation().expect("conic residue field")),
        ),
        ResidueFieldDesc::Rational { z_bar, .. } => (vec!["r".to_string()], format!("z = {z_bar}")),
    };
    json!({
        "variant": desc.variant(),
        "generators": generators,
        "relation": relation,
        "description": desc.describe(&kappa),
    })
}

fn scaled<K: Field>(c: &K, var: &str) -> String {
    if c.is_one() {
        var.to_string()
    } else {
        format!("({c}) * {var}")
    }
}

fn member_json<V: ConicValuation>(field: &ConicFunctionField<V::Base>, m: &FamilyMember<V>) -> Json {
    json!({
        "branch": m.branch.to_string(),
        "pivot": m.pivot.to_string(),
        "pivot_in_f": field.display(&m.pivot_in_f),
        "c": m.c.to_string(),
        "value_c": m.value_c,
        "quadratic": m.quadratic.kind(),
        "center": m.center.as_ref().map(|(x, y)| json!([x.to_string(), y.to_string()])),
    })
}

fn member_text<V: ConicValuation>(field: &ConicFunctionField<V::Base>, m: &FamilyMember<V>) -> String {
    format!(
        "  [{}] pivot {} = {}, v(c) = {}, {}\n",
        m.branch,
        m.pivot,
        field.display(&m.pivot_in_f),
        m.value_c,
        m.quadratic
    )
}

fn family_json<V: ConicValuation>(field: &ConicFunctionField<V::Base>, fam: &RationalFamily<V>) -> Json {
    json!({
        "presentation": algebra_json(&fam.presentation),
        "transcript": transcript(&fam.transcript),
        "generators": { "x": field.display(&fam.generators.0), "s": field.display(&fam.generators.1) },
        "members": fam.members.iter().map(|m| member_json(field, m)).collect::<Vec<_>>(),
    })
}

fn analyze_cmd<V: ConicValuation>(
    v: &V,
    scope: &Scope<V::Base>,
    args: &ConicArgs,
    count: usize,
    bound: u64,
) -> Result<Report, CliError> {
    let field = conic_field(scope, args)?;
    let r = analyze(v, &field, count, bound)?;
    let ext = &r.extension;
    let reps: Vec<String> = ext.coset_representatives().iter().map(ToString::to_string).collect();
    let residue = residue_field_json(ext);
    let members: Vec<Json> = match &r.family {
        Some(fam) => fam.members.iter().map(|m| member_json(&field, m)).collect(),
        None => Vec::new(),
    };
    let json = json!({
        "command": "analyze",
        "field": V::Base::field_name(&scope.ctx),
        "valuation": v.describe(),
        "a": field.a().to_string(),
        "b": field.b().to_string(),
        "verdict": if r.present { "PRESENT" } else { "ABSENT" },
        "verdict_kind": r.verdict.kind.to_string(),
        "witness": witness_json(&r.verdict.witness),
        "normalization_transcript": transcript(&r.verdict.normalized.transcript),
        "normalized": normalized_json(&r.verdict.normalized),
        "case": ext.case().to_string(),
        "value_group": ext.value_group().to_string(),
        "coset_representatives": reps,
        "residue_field": residue,
        "rational_field": field.rational_field_warning(),
        "family": members,
    });
    let mut rows = vec![
        ("field", format!("{}(x)(s), s^2 = {}", V::Base::field_name(&scope.ctx), field.radicand())),
        ("valuation", v.describe()),
        ("verdict", json["verdict"].as_str().unwrap().to_string()),
    ];
    rows.extend(verdict_rows(&r.verdict));
    rows.extend([
        ("case", ext.case().to_string()),
        ("value group", ext.value_group().to_string()),
        ("coset representatives", reps.join(", ")),
        ("residue field", residue["description"].as_str().unwrap().to_string()),
    ]);
    if let ResidueFieldDesc::Conic { .. } = ext.residue_desc() {
        let gens: Vec<&str> = residue["generators"].as_array().unwrap().iter().filter_map(Json::as_str).collect();
        rows.push(("residue generators", gens.join(", ")));
    }
    let mut text = lines(&rows);
    if field.rational_field_warning() {
        text += "note: b is a square in E, so F is a rational function field\n";
    }
    if let Some(fam) = &r.family {
        text += &format!("rational residue family ({} members):\n", fam.members.len());
        for m in &fam.members {
            text += &member_text(&field, m);
        }
    }
    Ok(Report::new(json, text))
}

fn eval_cmd<V: ConicValuation>(
    v: &V,
    scope: &Scope<V::Base>,
    args: &ConicArgs,
    f: &str,
    g: &str,
) -> Result<Report, CliError> {
    let field = conic_field(scope, args)?;
    let xs = scope.adjoin(X)?;
    let p = field.element(xs.parse(f)?, xs.parse(g)?);
    let ext = DistinguishedExtension::new(v.clone(), field.clone())?;
    let value = ext.eval_w_star(&p)?;
    let residue = if value == Value::int(0) { Some(ext.residue_w_star(&p)?.to_string()) } else { None };
    let mut text = lines(&[("element", field.display(&p)), ("value", value.to_string())]);
    if let Some(r) = &residue {
        text += &lines(&[("residue", r.clone())]);
    }
    Ok(Report::new(json!({ "command": "eval", "value": value.to_string(), "residue": residue }), text))
}

fn gauss_cmd<V: ConicValuation>(
    v: &V,
    scope: &Scope<V::Base>,
    val: &str,
    pivot: &str,
    eval: &str,
) -> Result<Report, CliError> {
    if scope.names().contains(&X) {
        return Err(CliError::Usage(format!("the valuation '{val}' already uses the variable name '{X}'")));
    }
    let xs = scope.adjoin(X)?;
    let y = xs.parse(pivot)?;
    let ext = GaussExtension::with_pivot(v.clone(), &y, "Y")?;
    let h = xs.parse(eval)?;
    let value = ext.value(&h)?;
    let residue = if value == Value::int(0) { Some(ext.residue(&h)?.to_string()) } else { None };
    let mut text = lines(&[("pivot", format!("Y = {y}")), ("value", value.to_string())]);
    if let Some(r) = &residue {
        text += &lines(&[("residue", r.clone())]);
    }
    Ok(Report::new(json!({ "command": "gauss", "value": value.to_string(), "residue": residue }), text))
}

fn hilbert_cmd(a: &str, b: &str, place: &str) -> Result<Report, CliError> {
    let q = Scope::<Rational>::rationals();
    let place = match place.trim() {
        "inf" => QPlace::Infinity,
        p => match p.parse::<u64>() {
            Ok(p) if is_prime(p) => QPlace::Prime(p),
            _ => return Err(CliError::Usage(format!("place '{p}' is neither a prime nor inf"))),
        },
    };
    let symbol = hilbert_symbol(&q.parse_nonzero(a, "a")?, &q.parse_nonzero(b, "b")?, place)?;
    Ok(Report::new(
        json!({ "command": "hilbert", "place": place.to_string(), "symbol": symbol }),
        format!("{symbol}\n"),
    ))
}

fn split_cmd<K: SplitField>(scope: &Scope<K>, a: &str, b: &str, bound: u64) -> Result<Report, CliError> {
    let q = QuaternionAlgebra::new(scope.parse_nonzero(a, "a")?, scope.parse_nonzero(b, "b")?)?;
    let r = is_split(&q, bound)?;
    let json = json!({
        "command": "quat split",
        "algebra": algebra_json(&q),
        "split": r.split,
        "certificate": point_json(&r.certificate),
    });
    let text = lines(&[
        ("algebra", format!("{q} over {}", K::field_name(&scope.ctx))),
        ("split", r.split.to_string()),
        ("certificate", point_text(&r.certificate)),
    ]);
    Ok(Report::new(json, text))
}

fn decide_cmd<V: ConicValuation>(
    v: &V,
    scope: &Scope<V::Base>,
    args: &ConicArgs,
    bound: u64,
) -> Result<Report, CliError> {
    let q = QuaternionAlgebra::new(scope.parse_nonzero(&args.a, "a")?, scope.parse_nonzero(&args.b, "b")?)?;
    let verdict = decide_unramified_extension(&q, v, bound)?;
    let json = json!({
        "command": "quat decide",
        "kind": verdict.kind.to_string(),
        "witness": witness_json(&verdict.witness),
        "transcript": transcript(&verdict.normalized.transcript),
        "normalized": normalized_json(&verdict.normalized),
    });
    Ok(Report::new(json, lines(&verdict_rows(&verdict))))
}

fn family_cmd<V: ConicValuation>(
    v: &V,
    scope: &Scope<V::Base>,
    args: &ConicArgs,
    count: usize,
    bound: u64,
) -> Result<Report, CliError> {
    let field = conic_field(scope, args)?;
    let fam = rational_residue_family(v, &field, count, bound)?;
    let mut json = family_json(&field, &fam);
    json["command"] = json!("family");
    let mut text = lines(&[
        ("presentation", fam.presentation.to_string()),
        ("x'", field.display(&fam.generators.0)),
        ("s'", field.display(&fam.generators.1)),
    ]);
    text += "members:\n";
    for m in &fam.members {
        text += &member_text(&field, m);
    }
    Ok(Report::new(json, text))
}

fn polyrep_cmd<K: Field>(scope: &Scope<K>, y: &str) -> Result<Report, CliError> {
    let xs = scope.adjoin(X)?;
    let y = xs.parse(y)?;
    let (degree, integral) = subfield_degree(&y)?;
    let as_t = |p: &Poly<K>| RatFunc::from_poly(p.clone()).renamed("T").to_string();
    let (num, den) = (as_t(y.num()), as_t(y.den()));
    let minimal = format!("{num} - Y*({den})");
    let json = json!({
        "command": "polyrep",
        "numerator": y.num().to_string(),
        "denominator": y.den().to_string(),
        "degree": degree,
        "integral": integral,
        "minimal_polynomial": minimal,
    });
    let text = lines(&[
        ("y", y.to_string()),
        ("[E(x) : E(y)]", degree.to_string()),
        ("x integral over E[y]", integral.to_string()),
        ("minimal polynomial of x over E(Y)", format!("{minimal} (up to a unit)")),
    ]);
    Ok(Report::new(json, text))
}

fn q_fixture(a: i64, b: i64) -> DistinguishedExtension<PAdic> {
    let field = ConicFunctionField::new(rat(a, 1), rat(b, 1), (), X).expect("nonzero");
    DistinguishedExtension::new(PAdic::new(5).expect("odd prime"), field).expect("valid fixture")
}

fn f3t() -> PolyCtx<Fq> {
    PolyCtx::new(FqCtx::prime(3).expect("prime"), "t")
}

fn verify_cmd(suite: Suite, seed: u64, n: usize) -> Report {
    let p = |p| PAdic::new(p).expect("odd prime");
    let t3 = f3t();
    let t_place = || FqPlace::finite(t3.clone(), Poly::from_i64s(&t3, &[0, 1])).expect("irreducible");
    let qt = PolyCtx::new((), "t");
    let reports: Vec<OracleReport> = match suite {
        Suite::Base => vec![
            valuation_axiom_fuzz(&BaseDomain(p(3)), n, seed),
            valuation_axiom_fuzz(&BaseDomain(p(5)), n, seed),
            valuation_axiom_fuzz(&BaseDomain(RationalPlace::at(qt.clone(), rat(1, 1))), n, seed),
            valuation_axiom_fuzz(&BaseDomain(RationalPlace::infinite(qt.clone())), n, seed),
            valuation_axiom_fuzz(
                &BaseDomain(FqPlace::finite(t3.clone(), Poly::from_i64s(&t3, &[1, 0, 1])).expect("irreducible")),
                n,
                seed,
            ),
            valuation_axiom_fuzz(&BaseDomain(FqPlace::infinite(t3.clone())), n, seed),
        ],
        Suite::Gauss => vec![
            valuation_axiom_fuzz(&GaussDomain(GaussExtension::new(p(5), "X", "X")), n, seed),
            valuation_axiom_fuzz(&GaussDomain(GaussExtension::new(p(3), "X", "X")), n, seed),
            valuation_axiom_fuzz(&GaussDomain(GaussExtension::new(t_place(), "X", "X")), n, seed),
        ],
        Suite::WStar => {
            let qt_fixture = |a: RatFunc<Rational>, b: RatFunc<Rational>| {
                let field = ConicFunctionField::new(a, b, qt.clone(), X).expect("nonzero");
                DistinguishedExtension::new(RationalPlace::at(qt.clone(), rat(0, 1)), field).expect("valid fixture")
            };
            let c = |n: i64| RatFunc::constant(&qt, rat(n, 1));
            vec![
                valuation_axiom_fuzz(&ConicDomain(qt_fixture(c(-1), c(-1))), n, seed),
                valuation_axiom_fuzz(&ConicDomain(qt_fixture(RatFunc::var(&qt), c(1))), n, seed),
                valuation_axiom_fuzz(&ConicDomain(q_fixture(2, 3)), n, seed),
            ]
        }
        Suite::Corrupted => vec![
            valuation_axiom_fuzz(&Corrupted(BaseDomain(p(5))), n, seed),
            valuation_axiom_fuzz(&Corrupted(ConicDomain(q_fixture(2, 3))), n, seed),
        ],
    };
    let agreement = reports.iter().all(|r| r.agreement);
    let json = json!({
        "command": "verify",
        "suite": suite.to_possible_value().expect("listed suite").get_name(),
        "seed": seed,
        "samples": n,
        "reports": reports.iter().map(|r| json!({
            "name": r.name,
            "digest": r.digest,
            "samples": r.samples,
            "agreement": r.agreement,
            "counterexample": r.counterexample,
        })).collect::<Vec<_>>(),
        "agreement": agreement,
    });
    let text = reports.iter().map(|r| format!("{r}\n")).collect();
    Report { json, text, agreement, json_only: true }
}
