//! Verb dispatch and report assembly.

use std::ffi::OsString;
use std::fmt::Display;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use gradval::crossed_products::{
    classify_algebra, compute_theta, cyclic_algebra, dec_witness_search, default_witness_set,
    verify_subfield_claims, AElem, CrossedProduct, CrossedProductData,
};
use gradval::exact_fields::{Fe, Field, FieldHom};
use gradval::graded_core::{
    homog_factor, graded_norm, hilbert90_witness, kummer_recognize, artin_schreier_p, ArtinSchreier,
    ExtensionFlags, GElem, GPoly, GradedExtension, GradedField, MonomialMap,
};
use gradval::hensel_lambda::{
    build_purely_wild, build_root_extension, certify, hensel_factor, hensel_root, is_lambda_polynomial,
    newton_polygon, tame_from_polys, LambdaPolynomial,
};
use gradval::valued_series::{SPoly, SeriesExtension, SeriesField};
use gradval::value_groups::HullVector;

use crate::eval::{
    build_base, build_series_field, eval, hull_string, parse_hull, rat_from_str, AlgebraRing, FieldRing,
    GradedRing, SeriesRing,
};
use crate::parse::{parse_expr, parse_field, parse_input, Expr, ParseError};

pub const DEFAULT_PRECISION: i64 = 24;

#[derive(Debug, Parser)]
#[command(name = "gradval", version, about = "Valued and graded field computations")]
pub struct Cli {
    /// Working precision N: series are cut off at (N, ..., N).
    #[arg(long, global = true, default_value_t = DEFAULT_PRECISION)]
    pub prec: i64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[command(subcommand)]
    pub verb: Verb,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

/// Every INPUT is either an expression or `@path` naming a UTF-8 file.
#[derive(Debug, Subcommand)]
pub enum Verb {
    /// Lower Newton polygon of a polynomial over a series field.
    Newton { input: String },
    /// Decide whether a polynomial is a λ-polynomial.
    LambdaCheck {
        input: String,
        /// Prescribed λ instead of (v(a_0) - v(a_n))/n.
        #[arg(long, allow_hyphen_values = true)]
        lambda: Option<String>,
    },
    /// Graded residue polynomial of a λ-polynomial.
    Residue {
        input: String,
        #[arg(long, allow_hyphen_values = true)]
        lambda: Option<String>,
    },
    /// Lift a coprime factorization of the residue polynomial.
    HenselFactor {
        input: String,
        /// Residue factor to lift (graded polynomial); needs --right.
        #[arg(long, requires = "right", allow_hyphen_values = true)]
        left: Option<String>,
        #[arg(long, requires = "left", allow_hyphen_values = true)]
        right: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        lambda: Option<String>,
    },
    /// Lift simple residue roots to roots.
    HenselRoot {
        input: String,
        /// Residue root to lift (graded element); all simple roots otherwise.
        #[arg(long, allow_hyphen_values = true)]
        root: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        lambda: Option<String>,
    },
    /// Adjoin a root of a polynomial with irreducible residue.
    BuildExt {
        input: String,
        /// Treat INPUT as a series b and adjoin b^(1/p^N).
        #[arg(long, conflicts_with = "tame")]
        purely_wild: Option<u32>,
        /// Treat INPUT as a graded polynomial and build the tame extension
        /// with that graded field.
        #[arg(long)]
        tame: bool,
        /// Further graded polynomials for --tame.
        #[arg(long, requires = "tame", allow_hyphen_values = true)]
        also: Vec<String>,
    },
    /// Factor a homogenizable graded polynomial.
    GradedFactor { input: String },
    /// Graded Hilbert 90 over the cyclic extension defined by INPUT.
    Hilbert90 {
        input: String,
        /// Homogeneous element of norm 1; checks every element of a finite
        /// search space when absent.
        #[arg(long, allow_hyphen_values = true)]
        element: Option<String>,
        /// Name bound to the adjoined root inside --element.
        #[arg(long, default_value = "x")]
        root_name: String,
    },
    /// Recognize F[a^(1/n)] as a cyclic Kummer extension.
    Kummer {
        input: String,
        #[arg(long)]
        n: u64,
    },
    /// Degree-p Artin-Schreier extension for X^p - X - a with a in F0.
    ArtinSchreier { input: String },
    /// Abelian crossed products described by a JSON file.
    Crossed {
        #[command(subcommand)]
        action: CrossedVerb,
    },
}

#[derive(Debug, Subcommand)]
pub enum CrossedVerb {
    /// Check the cocycle conditions and print the presentation
    Build { config: String },
    /// Value group, residue algebra and ramification type
    Classify {
        config: String,
        /// Witness elements of N0 for the totally ramified subfield search.
        #[arg(long = "witness", allow_hyphen_values = true)]
        witnesses: Vec<String>,
    },
    /// The map from Γ_A/Γ_F to Aut(N0) induced by conjugation
    Theta { config: String },
    /// Search a witness set for a rescaling that makes the z_i commute
    DecSearch {
        config: String,
        /// Witness elements of N0; a default set is used when absent.
        #[arg(long = "witness", allow_hyphen_values = true)]
        witnesses: Vec<String>,
    },
    /// Check that given generators span a maximal graded subfield
    VerifySubfield {
        config: String,
        /// Generators of the commutative subalgebra, e.g. "z1^2".
        #[arg(long = "gen", required = true, allow_hyphen_values = true)]
        gens: Vec<String>,
    },
}

impl Verb {
    pub fn name(&self) -> String {
        match self {
            Verb::Newton { .. } => "newton".into(),
            Verb::LambdaCheck { .. } => "lambda-check".into(),
            Verb::Residue { .. } => "residue".into(),
            Verb::HenselFactor { .. } => "hensel-factor".into(),
            Verb::HenselRoot { .. } => "hensel-root".into(),
            Verb::BuildExt { .. } => "build-ext".into(),
            Verb::GradedFactor { .. } => "graded-factor".into(),
            Verb::Hilbert90 { .. } => "hilbert90".into(),
            Verb::Kummer { .. } => "kummer".into(),
            Verb::ArtinSchreier { .. } => "artin-schreier".into(),
            Verb::Crossed { action } => format!(
                "crossed {}",
                match action {
                    CrossedVerb::Build { .. } => "build",
                    CrossedVerb::Classify { .. } => "classify",
                    CrossedVerb::Theta { .. } => "theta",
                    CrossedVerb::DecSearch { .. } => "dec-search",
                    CrossedVerb::VerifySubfield { .. } => "verify-subfield",
                }
            ),
        }
    }
}

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Domain(String),
}

fn usage(e: impl Display) -> Failure {
    Failure::Usage(e.to_string())
}

fn domain(e: impl Display) -> Failure {
    Failure::Domain(e.to_string())
}

fn parse_failure(e: ParseError) -> Failure {
    Failure::Usage(format!("parse error at line {}, column {}: {}", e.line, e.column, e.message))
}

struct Outcome {
    result: Value,
    warnings: Vec<String>,
    exit: i32,
}

impl Outcome {
    fn ok(result: Value) -> Self {
        Outcome { result, warnings: vec![], exit: 0 }
    }

    fn warn(mut self, w: impl Into<String>) -> Self {
        self.warnings.push(w.into());
        self
    }
}

pub struct Report {
    pub verb: String,
    pub body: Value,
    pub exit: i32,
}

impl Report {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.body).expect("serializable");
                s.push('\n');
                s
            }
            Format::Text => {
                let mut out = String::new();
                text_lines(&self.body, "", &mut out);
                out
            }
        }
    }
}

fn text_lines(v: &Value, prefix: &str, out: &mut String) {
    let key = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{}.{}", prefix, k) };
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                text_lines(x, &key(k), out);
            }
        }
        Value::Array(a) if a.iter().any(|x| x.is_object() || x.is_array()) => {
            for (i, x) in a.iter().enumerate() {
                text_lines(x, &key(&i.to_string()), out);
            }
        }
        Value::Array(a) => {
            let items: Vec<String> = a.iter().map(scalar_text).collect();
            out.push_str(&format!("{}: [{}]\n", prefix, items.join(", ")));
        }
        _ => out.push_str(&format!("{}: {}\n", prefix, scalar_text(v))),
    }
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// What the binary writes and the status it exits with.
pub struct Invocation {
    pub stdout: String,
    pub stderr: String,
    pub exit: i32,
}

/// Runs a full command line (including the program name) without touching the process streams.
pub fn execute<I, T>(args: I) -> Invocation
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => {
            let report = run(&cli);
            Invocation { stdout: report.render(cli.format), stderr: String::new(), exit: report.exit }
        }
        Err(e) => {
            let text = e.render().to_string();
            let exit = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            if e.use_stderr() {
                Invocation { stdout: String::new(), stderr: text, exit }
            } else {
                Invocation { stdout: text, stderr: String::new(), exit }
            }
        }
    }
}

pub fn run(cli: &Cli) -> Report {
    let verb = cli.verb.name();
    let outcome = if cli.prec < 1 {
        Err(Failure::Usage("--prec must be positive".into()))
    } else {
        dispatch(cli)
    };
    let mut body = Map::new();
    body.insert("verb".into(), json!(verb));
    let exit = match outcome {
        Ok(o) => {
            body.insert("result".into(), o.result);
            body.insert("warnings".into(), json!(o.warnings));
            o.exit
        }
        Err(f) => {
            let (kind, message, code) = match f {
                Failure::Usage(m) => ("usage", m, 1),
                Failure::Domain(m) => ("domain", m, 2),
            };
            body.insert("error".into(), json!({ "kind": kind, "message": message }));
            body.insert("warnings".into(), json!([]));
            code
        }
    };
    Report { verb, body: Value::Object(body), exit }
}

fn dispatch(cli: &Cli) -> Result<Outcome, Failure> {
    let prec = cli.prec;
    match &cli.verb {
        Verb::Newton { input } => newton(&load(input)?, prec),
        Verb::LambdaCheck { input, lambda } => lambda_check(&load(input)?, lambda.as_deref(), prec),
        Verb::Residue { input, lambda } => residue(&load(input)?, lambda.as_deref(), prec),
        Verb::HenselFactor { input, left, right, lambda } => {
            let split = match (left, right) {
                (Some(l), Some(r)) => Some((load(l)?, load(r)?)),
                _ => None,
            };
            factor_verb(&load(input)?, split, lambda.as_deref(), prec)
        }
        Verb::HenselRoot { input, root, lambda } => {
            let root = root.as_deref().map(load).transpose()?;
            root_verb(&load(input)?, root.as_deref(), lambda.as_deref(), prec)
        }
        Verb::BuildExt { input, purely_wild, tame, also } => {
            let text = load(input)?;
            if let Some(n) = purely_wild {
                purely_wild_verb(&text, *n, prec)
            } else if *tame {
                let also = also.iter().map(|s| load(s)).collect::<Result<Vec<_>, _>>()?;
                tame_verb(&text, &also, prec)
            } else {
                build_ext(&text, prec)
            }
        }
        Verb::GradedFactor { input } => graded_factor(&load(input)?, prec),
        Verb::Hilbert90 { input, element, root_name } => {
            let element = element.as_deref().map(load).transpose()?;
            hilbert90(&load(input)?, element.as_deref(), root_name, prec)
        }
        Verb::Kummer { input, n } => kummer(&load(input)?, *n, prec),
        Verb::ArtinSchreier { input } => artin_schreier(&load(input)?, prec),
        Verb::Crossed { action } => crossed(action),
    }
}

fn load(arg: &str) -> Result<String, Failure> {
    match arg.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path)
            .map(|s| s.trim().to_string())
            .map_err(|e| usage(format!("cannot read {}: {}", path, e))),
        None => Ok(arg.to_string()),
    }
}

// ---- parsing helpers ----

fn with_field(text: &str, prec: i64) -> Result<(Expr, SeriesField), Failure> {
    let input = parse_input(text).map_err(parse_failure)?;
    let spec = input
        .field
        .ok_or_else(|| usage("missing field: write '<expression> over <field>'"))?;
    let e = build_series_field(&spec, prec).map_err(usage)?;
    Ok((input.expr, e))
}

/// Parses a secondary expression; an explicit `over <field>` must agree
/// with the main input.
fn secondary(text: &str, e: &SeriesField) -> Result<Expr, Failure> {
    let input = parse_input(text).map_err(parse_failure)?;
    if let Some(spec) = input.field {
        let other = build_series_field(&spec, e.precision()).map_err(usage)?;
        if other.residue() != e.residue() || other.vars() != e.vars() {
            return Err(usage(format!("'{}' is over a different field", text)));
        }
    }
    Ok(input.expr)
}

fn series_poly(text: &str, prec: i64) -> Result<(SPoly, SeriesField), Failure> {
    let (expr, e) = with_field(text, prec)?;
    let f = eval(&SeriesRing(&e), &expr).map_err(usage)?;
    if f.is_empty() {
        return Err(usage("the polynomial is zero"));
    }
    Ok((f, e))
}

fn graded_poly(expr: &Expr, g: &GradedField, vars: &[String]) -> Result<GPoly, Failure> {
    eval(&GradedRing::new(g, vars), expr).map_err(usage)
}

fn graded_elem(expr: &Expr, ring: &GradedRing) -> Result<GElem, Failure> {
    let p = eval(ring, expr).map_err(usage)?;
    match p.len() {
        0 => Ok(ring.field.zero()),
        1 => Ok(p[0].clone()),
        _ => Err(usage("expected an element, not a polynomial in X")),
    }
}

fn lambda_arg(text: Option<&str>, e: &SeriesField) -> Result<Option<HullVector>, Failure> {
    text.map(|s| parse_hull(s, e.rank()).map_err(usage)).transpose()
}

fn lambda_poly(
    e: &SeriesField,
    f: &SPoly,
    lambda: Option<&HullVector>,
) -> Result<Option<LambdaPolynomial>, Failure> {
    match lambda {
        Some(l) => certify(e, f, l),
        None => is_lambda_polynomial(e, f),
    }
    .map_err(domain)
}

fn certified(e: &SeriesField, f: &SPoly, lambda: Option<&HullVector>) -> Result<LambdaPolynomial, Failure> {
    lambda_poly(e, f, lambda)?.ok_or_else(|| {
        domain(format!("{} is not a λ-polynomial", e.pformat(f)))
    })
}

fn precision_warning(e: &SeriesField) -> String {
    format!("series are computed to precision {}", hull_string(&e.default_cutoff()))
}

fn flags_json(f: &ExtensionFlags) -> Value {
    json!({
        "degree": f.degree,
        "residue_degree": f.residue_degree,
        "ramification_index": f.ramification_index,
        "inertial": f.inertial,
        "totally_ramified": f.totally_ramified,
        "tame": f.tame,
        "purely_wild": f.purely_wild,
    })
}

fn extension_json(ext: &SeriesExtension) -> Value {
    json!({
        "field": ext.top.to_string(),
        "residue_field": ext.top.residue().to_string(),
        "value_group": ext.top.lattice().to_string(),
        "degree": ext.degree,
        "fundamental_equality": ext.fundamental_equality(),
    })
}

// ---- series verbs ----

fn newton(text: &str, prec: i64) -> Result<Outcome, Failure> {
    let (f, e) = series_poly(text, prec)?;
    let nd = newton_polygon(&e, &f).map_err(domain)?;
    Ok(Outcome::ok(json!({
        "polynomial": e.pformat(&f),
        "field": e.to_string(),
        "vertices": nd.vertices.iter().map(|(i, v)| json!({"degree": i, "value": hull_string(v)})).collect::<Vec<_>>(),
        "slopes": nd.slopes.iter().map(|(l, w)| json!({"lambda": hull_string(l), "width": w})).collect::<Vec<_>>(),
        "single_slope": nd.single_slope(),
    })))
}

fn lambda_check(text: &str, lambda: Option<&str>, prec: i64) -> Result<Outcome, Failure> {
    let (f, e) = series_poly(text, prec)?;
    let lambda = match lambda_arg(lambda, &e)? {
        Some(l) => l,
        None => gradval::hensel_lambda::lambda_of(&e, &f).map_err(domain)?,
    };
    let lp = certify(&e, &f, &lambda).map_err(domain)?;
    let ge = e.graded();
    let mut out = Outcome::ok(json!({
        "lambda": hull_string(&lambda),
        "certified": lp.is_some(),
        "residue": lp.as_ref().map(|l| ge.pformat(&l.residue)),
    }));
    if lp.is_none() {
        out.exit = 2;
        out = out.warn("some coefficient lies below the line of slope -λ");
    }
    Ok(out)
}

fn residue(text: &str, lambda: Option<&str>, prec: i64) -> Result<Outcome, Failure> {
    let (f, e) = series_poly(text, prec)?;
    let lambda = lambda_arg(lambda, &e)?;
    let lp = certified(&e, &f, lambda.as_ref())?;
    let ge = e.graded();
    let fac = homog_factor(&ge, &lp.residue).map_err(domain)?;
    Ok(Outcome::ok(json!({
        "lambda": hull_string(&lp.lambda),
        "residue": ge.pformat(&lp.residue),
        "degree": lp.degree(),
        "irreducible": fac.factors.len() == 1 && fac.factors[0].1 == 1,
    })))
}

fn lambda_json(e: &SeriesField, lp: &LambdaPolynomial) -> Value {
    json!({
        "polynomial": e.pformat(&lp.coeffs),
        "residue": e.graded().pformat(&lp.residue),
        "degree": lp.degree(),
    })
}

fn factor_verb(
    text: &str,
    split: Option<(String, String)>,
    lambda: Option<&str>,
    prec: i64,
) -> Result<Outcome, Failure> {
    let (f, e) = series_poly(text, prec)?;
    let lambda = lambda_arg(lambda, &e)?;
    let lp = certified(&e, &f, lambda.as_ref())?;
    let ge = e.graded();
    let groups: Vec<GPoly> = match split {
        Some((l, r)) => vec![
            graded_poly(&secondary(&l, &e)?, &ge, e.vars())?,
            graded_poly(&secondary(&r, &e)?, &ge, e.vars())?,
        ],
        None => {
            let fac = homog_factor(&ge, &lp.residue).map_err(domain)?;
            let mut groups: Vec<GPoly> = fac
                .factors
                .iter()
                .map(|(k, s)| (0..*s).fold(vec![ge.one()], |acc, _| ge.pmul(&acc, k)))
                .collect();
            if groups.len() < 2 {
                return Err(domain(format!(
                    "the residue {} is a power of one irreducible; there is no coprime split",
                    ge.pformat(&lp.residue)
                )));
            }
            groups[0] = ge.pmul(&vec![fac.unit.clone()], &groups[0]);
            groups
        }
    };
    let mut factors = Vec::new();
    let mut current = lp.clone();
    let mut iterations = 0;
    let mut precision: Option<HullVector> = None;
    for i in 0..groups.len() - 1 {
        let rest = groups[i + 1..].iter().fold(vec![ge.one()], |acc, g| ge.pmul(&acc, g));
        let hf = hensel_factor(&current, &groups[i], &rest).map_err(domain)?;
        iterations += hf.iterations;
        if let Some(p) = hf.precision {
            precision = Some(match precision {
                Some(q) if q < p => q,
                _ => p,
            });
        }
        factors.push(lambda_json(&e, &hf.g));
        current = hf.h;
    }
    factors.push(lambda_json(&e, &current));
    let mut out = Outcome::ok(json!({
        "lambda": hull_string(&lp.lambda),
        "residue": ge.pformat(&lp.residue),
        "factors": factors,
        "exact": precision.is_none(),
        "precision": precision.as_ref().map(hull_string),
        "iterations": iterations,
    }));
    if let Some(p) = precision {
        out = out.warn(format!("factors are correct up to precision {}", hull_string(&p)));
    }
    Ok(out)
}

fn root_verb(text: &str, root: Option<&str>, lambda: Option<&str>, prec: i64) -> Result<Outcome, Failure> {
    let (f, e) = series_poly(text, prec)?;
    let lambda = lambda_arg(lambda, &e)?;
    let lp = certified(&e, &f, lambda.as_ref())?;
    let ge = e.graded();
    let residues: Vec<GElem> = match root {
        Some(r) => vec![graded_elem(&secondary(r, &e)?, &GradedRing::new(&ge, e.vars()))?],
        None => {
            let fac = homog_factor(&ge, &lp.residue).map_err(domain)?;
            let mut roots = Vec::new();
            for (k, s) in &fac.factors {
                if k.len() == 2 && *s == 1 {
                    let b = ge.div(&ge.neg(&k[0]), &k[1]).map_err(domain)?;
                    roots.push(b);
                }
            }
            if roots.is_empty() {
                return Err(domain(format!(
                    "the residue {} has no simple root in the graded field",
                    ge.pformat(&lp.residue)
                )));
            }
            roots
        }
    };
    let mut list = Vec::new();
    let mut inexact = false;
    for b in &residues {
        let a = hensel_root(&lp, b).map_err(domain)?;
        inexact |= !a.is_exact();
        list.push(json!({ "residue": ge.format(b), "root": e.format(&a) }));
    }
    let mut out = Outcome::ok(json!({
        "lambda": hull_string(&lp.lambda),
        "residue": ge.pformat(&lp.residue),
        "roots": list,
    }));
    if inexact {
        out = out.warn(precision_warning(&e));
    }
    Ok(out)
}

fn build_ext(text: &str, prec: i64) -> Result<Outcome, Failure> {
    let (f, e) = series_poly(text, prec)?;
    let r = build_root_extension(&e, &f).map_err(domain)?;
    let mut out = Outcome::ok(json!({
        "polynomial": e.pformat(&r.poly),
        "extension": extension_json(&r.ext),
        "flags": flags_json(&r.flags),
        "root": r.ext.top.format(&r.root),
    }));
    if !r.root.is_exact() {
        out = out.warn(precision_warning(&e));
    }
    Ok(out)
}

fn purely_wild_verb(text: &str, n: u32, prec: i64) -> Result<Outcome, Failure> {
    let (b, e) = series_poly(text, prec)?;
    if b.len() != 1 {
        return Err(usage("--purely-wild expects a series, not a polynomial in X"));
    }
    let w = build_purely_wild(&e, &b[0], n).map_err(domain)?;
    let mut out = Outcome::ok(json!({
        "element": e.format(&b[0]),
        "extension": extension_json(&w.ext),
        "flags": flags_json(&w.flags),
        "root": w.ext.top.format(&w.root),
    }));
    if !w.root.is_exact() {
        out = out.warn(precision_warning(&e));
    }
    Ok(out)
}

fn tame_verb(text: &str, also: &[String], prec: i64) -> Result<Outcome, Failure> {
    let (expr, e) = with_field(text, prec)?;
    let ge = e.graded();
    let mut polys = vec![graded_poly(&expr, &ge, e.vars())?];
    for a in also {
        polys.push(graded_poly(&secondary(a, &e)?, &ge, e.vars())?);
    }
    let t = tame_from_polys(&e, &polys).map_err(domain)?;
    Ok(Outcome::ok(json!({
        "polynomials": polys.iter().map(|p| ge.pformat(p)).collect::<Vec<_>>(),
        "extension": extension_json(&t.ext),
        "flags": flags_json(&t.flags),
        "generators": t.generators.iter().map(|x| t.ext.top.format(x)).collect::<Vec<_>>(),
        "automorphisms": t.automorphisms.len(),
        "galois": t.galois,
    })))
}

// ---- graded verbs ----

fn graded_factor(text: &str, prec: i64) -> Result<Outcome, Failure> {
    let (expr, e) = with_field(text, prec)?;
    let ge = e.graded();
    let f = graded_poly(&expr, &ge, e.vars())?;
    let fac = homog_factor(&ge, &f).map_err(domain)?;
    Ok(Outcome::ok(json!({
        "polynomial": ge.pformat(&f),
        "lambda": hull_string(&fac.lambda),
        "unit": ge.format(&fac.unit),
        "factors": fac.factors.iter().map(|(k, s)| json!({
            "factor": ge.pformat(k),
            "degree": k.len() - 1,
            "multiplicity": s,
        })).collect::<Vec<_>>(),
        "irreducible": fac.factors.len() == 1 && fac.factors[0].1 == 1,
    })))
}

fn graded_ext_json(ext: &GradedExtension) -> Value {
    json!({
        "degree": ext.degree(),
        "residue_field": ext.top.f0().to_string(),
        "value_group": ext.top.lattice().to_string(),
        "residue_degree": ext.residue_degree(),
        "ramification_index": ext.ramification_index(),
    })
}

fn cyclic_generator(ext: &GradedExtension) -> Result<MonomialMap, Failure> {
    let n = ext.degree();
    ext.automorphisms()
        .map_err(domain)?
        .into_iter()
        .find(|s| s.order(n) == Some(n))
        .ok_or_else(|| domain("the extension is not cyclic Galois"))
}

fn hilbert90(text: &str, element: Option<&str>, root_name: &str, prec: i64) -> Result<Outcome, Failure> {
    let (expr, e) = with_field(text, prec)?;
    let ge = e.graded();
    let g = graded_poly(&expr, &ge, e.vars())?;
    let ext = GradedExtension::adjoin(&ge, &[g.clone()]).map_err(domain)?;
    let sigma = cyclic_generator(&ext)?;
    let l = &ext.top;
    let x = ext.generator().expect("one step");
    let head = json!({
        "polynomial": ge.pformat(&g),
        "extension": graded_ext_json(&ext),
        "generator": l.format(&x),
        "sigma_of_generator": l.format(&sigma.apply(&x)),
    });
    let mut result = head.as_object().unwrap().clone();
    match element {
        Some(s) => {
            let mut ring = GradedRing::new(l, e.vars());
            ring.bindings.push((root_name.to_string(), x));
            let a = graded_elem(&secondary(s, &e)?, &ring)?;
            let norm = graded_norm(&ext, &sigma, &a).map_err(domain)?;
            if norm != ge.one() {
                return Err(domain(format!("the norm of {} is {}, not 1", l.format(&a), ge.format(&norm))));
            }
            let y = hilbert90_witness(&ext, &sigma, &a).map_err(domain)?;
            result.insert("element".into(), json!(l.format(&a)));
            result.insert("norm".into(), json!(ge.format(&norm)));
            result.insert("witness".into(), json!(l.format(&y)));
            result.insert("verified".into(), json!(l.mul(&a, &sigma.apply(&y)) == y));
            Ok(Outcome::ok(Value::Object(result)))
        }
        None => {
            let l0 = l.f0();
            match l0.cardinality() {
                Some(q) if q <= 4096 => {}
                _ => return Err(usage("--element is required unless the residue field has at most 4096 elements")),
            }
            let elements = l0.elements().map_err(domain)?;
            let (mut checked, mut norm_one, mut verified) = (0usize, 0usize, 0usize);
            for delta in ge.lattice().coset_representatives(l.lattice()) {
                for c in elements.iter().filter(|c| !l0.is_zero(c)) {
                    let a = l.monomial(c.clone(), &delta).map_err(domain)?;
                    checked += 1;
                    if graded_norm(&ext, &sigma, &a).map_err(domain)? != ge.one() {
                        continue;
                    }
                    norm_one += 1;
                    let y = hilbert90_witness(&ext, &sigma, &a).map_err(domain)?;
                    if !y.is_zero() && l.mul(&a, &sigma.apply(&y)) == y {
                        verified += 1;
                    }
                }
            }
            result.insert("checked".into(), json!(checked));
            result.insert("norm_one".into(), json!(norm_one));
            result.insert("verified".into(), json!(verified));
            let mut out = Outcome::ok(Value::Object(result));
            if verified != norm_one {
                out.exit = 2;
                out = out.warn("some norm-one elements have no verified witness");
            }
            Ok(out)
        }
    }
}

fn kummer(text: &str, n: u64, prec: i64) -> Result<Outcome, Failure> {
    let (expr, e) = with_field(text, prec)?;
    let ge = e.graded();
    let a = graded_elem(&expr, &GradedRing::new(&ge, e.vars()))?;
    let k = kummer_recognize(&ge, &a, n).map_err(domain)?;
    let l = &k.ext.top;
    let mut result = json!({
        "element": ge.format(&a),
        "n": n,
        "m": k.m,
        "b": ge.format(&k.b),
        "zeta": ge.f0().format(&k.zeta),
        "extension": graded_ext_json(&k.ext),
        "galois": k.ext.is_galois().map_err(domain)?,
    });
    if let Some(x) = k.ext.generator() {
        result["generator"] = json!(l.format(&x));
        result["sigma_of_generator"] = json!(l.format(&k.sigma.apply(&x)));
    }
    Ok(Outcome::ok(result))
}

fn artin_schreier(text: &str, prec: i64) -> Result<Outcome, Failure> {
    let (expr, e) = with_field(text, prec)?;
    let ge = e.graded();
    let a = eval(&FieldRing(ge.f0()), &expr).map_err(usage)?;
    Ok(Outcome::ok(match artin_schreier_p(&ge, &a).map_err(domain)? {
        ArtinSchreier::Splits(r) => json!({
            "element": ge.f0().format(&a),
            "splits": true,
            "root": ge.f0().format(&r),
        }),
        ArtinSchreier::Cyclic { ext, sigma } => {
            let x = ext.generator().expect("one step");
            json!({
                "element": ge.f0().format(&a),
                "splits": false,
                "extension": graded_ext_json(&ext),
                "generator": ext.top.format(&x),
                "sigma_of_generator": ext.top.format(&sigma.apply(&x)),
                "galois": ext.is_galois().map_err(domain)?,
            })
        }
    }))
}

// ---- crossed products ----

fn json_text(v: &Value, what: &str) -> Result<String, Failure> {
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) => Ok(n.to_string()),
        _ => Err(usage(format!("{} must be a string or a number", what))),
    }
}

fn config_field(cfg: &Value, key: &str) -> Result<Field, Failure> {
    let text = json_text(cfg.get(key).ok_or_else(|| usage(format!("config needs \"{}\"", key)))?, key)?;
    let spec = parse_field(&text).map_err(parse_failure)?;
    if !spec.vars.is_empty() {
        return Err(usage(format!("\"{}\" must be a residue field without series variables", key)));
    }
    build_base(&spec.base).map_err(usage)
}

fn field_elem(f: &Field, text: &str) -> Result<Fe, Failure> {
    let expr = parse_expr(text).map_err(parse_failure)?;
    eval(&FieldRing(f), &expr).map_err(usage)
}

fn elems(f: &Field, v: &Value, what: &str) -> Result<Vec<Fe>, Failure> {
    v.as_array()
        .ok_or_else(|| usage(format!("{} must be an array", what)))?
        .iter()
        .map(|x| field_elem(f, &json_text(x, what)?))
        .collect()
}

fn sigma_from(n0: &Field, v: &Value) -> Result<FieldHom, Failure> {
    if let Some(j) = v.get("frobenius") {
        let j = j.as_u64().ok_or_else(|| usage("\"frobenius\" needs a nonnegative integer"))?;
        return FieldHom::frobenius(n0, j as u32).map_err(domain);
    }
    if let Some(levels) = v.get("sign_flip") {
        let levels = levels.as_array().ok_or_else(|| usage("\"sign_flip\" needs an array of levels"))?;
        let mut mask = 0u32;
        for l in levels {
            match l.as_u64() {
                Some(k) if k >= 1 && k <= 31 => mask |= 1 << (k - 1),
                _ => return Err(usage("sign_flip levels are numbered from 1")),
            }
        }
        return Ok(FieldHom::sign_flip(n0, mask));
    }
    if let Some(images) = v.get("images") {
        let images = elems(n0, images, "images")?;
        if images.len() != n0.level_generators().len() {
            return Err(usage("\"images\" needs one image per generator of N0"));
        }
        return Ok(FieldHom { source: n0.clone(), target: n0.clone(), images });
    }
    Err(usage("each sigma needs \"frobenius\", \"sign_flip\" or \"images\""))
}

/// Reads an algebra from its JSON description; see the README for the
/// schema.
pub fn algebra_from_json(cfg: &Value) -> Result<CrossedProduct, Failure> {
    let e0 = config_field(cfg, "e0")?;
    let n0 = config_field(cfg, "n0")?;
    if cfg.get("cyclic").and_then(Value::as_bool) == Some(true) {
        let b = match cfg.get("b") {
            Some(Value::Array(a)) if a.len() == 1 => json_text(&a[0], "b")?,
            Some(v) => json_text(v, "b")?,
            None => "1".into(),
        };
        return cyclic_algebra(&e0, &n0, field_elem(&n0, &b)?).map_err(domain);
    }
    let get = |k: &str| cfg.get(k).ok_or_else(|| usage(format!("config needs \"{}\"", k)));
    let orders: Vec<u64> = get("orders")?
        .as_array()
        .ok_or_else(|| usage("\"orders\" must be an array"))?
        .iter()
        .map(|x| x.as_u64().filter(|r| *r >= 2).ok_or_else(|| usage("orders must be integers >= 2")))
        .collect::<Result<_, _>>()?;
    let sigmas = get("sigmas")?
        .as_array()
        .ok_or_else(|| usage("\"sigmas\" must be an array"))?
        .iter()
        .map(|s| sigma_from(&n0, s))
        .collect::<Result<Vec<_>, _>>()?;
    let m = orders.len();
    let u = match cfg.get("u") {
        None => (0..m).map(|_| vec![n0.one(); m]).collect(),
        Some(rows) => rows
            .as_array()
            .ok_or_else(|| usage("\"u\" must be an array of rows"))?
            .iter()
            .map(|r| elems(&n0, r, "u"))
            .collect::<Result<Vec<_>, _>>()?,
    };
    let b = match cfg.get("b") {
        None => vec![n0.one(); m],
        Some(v) => elems(&n0, v, "b")?,
    };
    let grades = match cfg.get("grades") {
        None => None,
        Some(rows) => Some(
            rows.as_array()
                .ok_or_else(|| usage("\"grades\" must be an array"))?
                .iter()
                .map(|r| {
                    let coords = r
                        .as_array()
                        .ok_or_else(|| usage("each grade is an array of rationals"))?
                        .iter()
                        .map(|c| {
                            let s = json_text(c, "grade")?;
                            rat_from_str(&s).ok_or_else(|| usage(format!("bad rational '{}'", s)))
                        })
                        .collect::<Result<Vec<_>, _>>()?;
                    Ok(HullVector(coords))
                })
                .collect::<Result<Vec<_>, Failure>>()?,
        ),
    };
    CrossedProduct::build(CrossedProductData { e0, n0, orders, sigmas, u, b, grades }).map_err(domain)
}

fn load_algebra(path: &str) -> Result<CrossedProduct, Failure> {
    let path = path.strip_prefix('@').unwrap_or(path);
    let text = std::fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {}", path, e)))?;
    let cfg: Value = serde_json::from_str(&text)
        .map_err(|e| usage(format!("{}: {}", path, e)))?;
    algebra_from_json(&cfg)
}

fn witness_list(alg: &CrossedProduct, given: &[String]) -> Result<Vec<Fe>, Failure> {
    if given.is_empty() {
        return Ok(default_witness_set(alg));
    }
    given.iter().map(|w| field_elem(alg.n0(), w)).collect()
}

fn fe_list(f: &Field, v: &[Fe]) -> Vec<String> {
    v.iter().map(|x| f.format(x)).collect()
}

fn crossed(action: &CrossedVerb) -> Result<Outcome, Failure> {
    match action {
        CrossedVerb::Build { config } => {
            let alg = load_algebra(config)?;
            let n0 = alg.n0();
            let m = alg.rank();
            let mut relations = Vec::new();
            for i in 0..m {
                let z = alg.z(i);
                let p = alg.pow(&z, alg.data.orders[i]);
                relations.push(format!("z{}^{} = {}", i + 1, alg.data.orders[i], alg.format(&p)));
            }
            for i in 0..m {
                for j in i + 1..m {
                    let lhs = alg.mul(&alg.z(j), &alg.z(i));
                    relations.push(format!("z{}*z{} = {}", j + 1, i + 1, alg.format(&lhs)));
                }
            }
            let size = alg.group().len();
            Ok(Outcome::ok(json!({
                "e0": alg.e0().to_string(),
                "n0": n0.to_string(),
                "orders": alg.data.orders,
                "group_order": size,
                "dimension": size * size,
                "grades": alg.grades().iter().map(hull_string).collect::<Vec<_>>(),
                "sigmas": alg.data.sigmas.iter().map(|s| fe_list(n0, &s.images)).collect::<Vec<_>>(),
                "relations": relations,
            })))
        }
        CrossedVerb::Classify { config, witnesses } => {
            let alg = load_algebra(config)?;
            let w = witness_list(&alg, witnesses)?;
            let c = classify_algebra(&alg, Some(&w)).map_err(domain)?;
            let mut out = Outcome::ok(json!({
                "dimension": c.dimension,
                "a0_degree": c.a0_degree,
                "gamma_index": c.gamma_index,
                "quotient": c.quotient,
                "quotient_cyclic": c.quotient.len() <= 1,
                "fundamental_equality": c.fundamental_equality,
                "semiramified": c.semiramified,
                "inertially_split": c.inertially_split,
                "nicely_semiramified": c.nicely_semiramified,
                "totally_ramified_subfield": c.totally_ramified_subfield.as_ref().map(|g| {
                    g.iter().map(|x| alg.format(x)).collect::<Vec<_>>()
                }),
            }));
            if c.totally_ramified_subfield.is_none() {
                out = out.warn("the totally ramified subfield search only uses monomials with coefficients from the witness set");
            }
            Ok(out)
        }
        CrossedVerb::Theta { config } => {
            let alg = load_algebra(config)?;
            let t = compute_theta(&alg).map_err(domain)?;
            let n0 = alg.n0();
            Ok(Outcome::ok(json!({
                "entries": t.entries.iter().map(|(g, h)| json!({
                    "coset": hull_string(g),
                    "images": fe_list(n0, &h.images),
                })).collect::<Vec<_>>(),
                "matches_sigmas": t.matches_sigmas,
                "homomorphism": t.homomorphism,
                "isomorphism": t.isomorphism,
            })))
        }
        CrossedVerb::DecSearch { config, witnesses } => {
            let alg = load_algebra(config)?;
            let w = witness_list(&alg, witnesses)?;
            let found = dec_witness_search(&alg, &w).map_err(domain)?;
            let n0 = alg.n0();
            Ok(Outcome::ok(json!({
                "witness_set": fe_list(n0, &w),
                "found": found.is_some(),
                "witness": found.as_ref().map(|a| fe_list(n0, a)),
            }))
            .warn("semi-decision: only tuples from the witness set were tried"))
        }
        CrossedVerb::VerifySubfield { config, gens } => {
            let alg = load_algebra(config)?;
            let ring = AlgebraRing(&alg);
            let gens: Vec<AElem> = gens
                .iter()
                .map(|g| eval(&ring, &parse_expr(g).map_err(parse_failure)?).map_err(usage))
                .collect::<Result<_, _>>()?;
            let r = verify_subfield_claims(&alg, &gens).map_err(domain)?;
            Ok(Outcome::ok(json!({
                "generators": gens.iter().map(|x| alg.format(x)).collect::<Vec<_>>(),
                "dimension": r.dimension,
                "dimension_by_rank": r.dimension_by_rank,
                "residue_degree": r.residue_degree,
                "ramification_index": r.ramification_index,
                "quotient": r.quotient,
                "maximal": r.maximal,
                "inertial": r.inertial,
                "totally_ramified": r.totally_ramified,
                "automorphisms": r.automorphisms,
                "galois": r.galois,
                "abelian": r.abelian,
                "cyclic": r.cyclic,
                "elementary_abelian": r.elementary_abelian,
                "exponent": r.exponent,
            })))
        }
    }
}
