use std::time::Instant;

use num_traits::Zero;
use rayon::prelude::*;

use super::model::{Block, BracketConstraint, CodimPSpec, CubicSpec, Expect, Extra, FoliationSpec, IntegralTemplate};
use super::model::{NegativeSpec, ObstructionSpec, SimpleForm};
use super::report::{CheckResult, EntryReport, EntryStatus, InstanceReport, Variant, VerificationReport};
use super::{Catalog, CatalogEntry, CatalogError, EntryKind, Instantiation};
use crate::exterior::{KForm, LinField, VField};
use crate::foliation::{self, LogExpIntegral, TangentMode};
use crate::frontend::{self, Context};
use crate::invariants::annihilator_of_polynomial;
use crate::linlie::{self, Algebra, BracketSolution, LieSpan, Presentation};
use crate::symcore::{Poly, Rat};

type Res<T> = Result<T, CatalogError>;

fn rat_value(e: &CatalogEntry, text: &str, ctx: &Context) -> Res<Rat> {
    frontend::parse_rat(text, ctx).map_err(|err| e.parse_err(format!("'{text}'"), err))
}

fn poly(e: &CatalogEntry, text: &str, ctx: &Context) -> Res<Poly> {
    frontend::parse_poly(text, ctx).map_err(|err| e.parse_err(format!("'{text}'"), err))
}

fn field(e: &CatalogEntry, text: &str, ctx: &Context) -> Res<VField> {
    frontend::parse_field(text, ctx).map_err(|err| e.parse_err(format!("'{text}'"), err))
}

fn linear(e: &CatalogEntry, x: &VField) -> Res<LinField> {
    x.linear_matrix()
        .map(LinField::from_matrix)
        .ok_or_else(|| e.invalid(format!("field {} is not linear", x.render(e.first_var))))
}

fn integral(e: &CatalogEntry, t: &IntegralTemplate, ctx: &Context) -> Res<LogExpIntegral> {
    let logs = t.log.iter().map(|(p, l)| Ok((poly(e, p, ctx)?, rat_value(e, l, ctx)?))).collect::<Res<Vec<_>>>()?;
    let exp = match (&t.exp_num, &t.exp_den) {
        (None, None) => None,
        (Some(h), k) => {
            let k = match k {
                Some(k) => poly(e, k, ctx)?,
                None => Poly::one(ctx.nvars),
            };
            if k.is_zero() {
                return Err(e.invalid("exponential denominator is zero".into()));
            }
            Some((poly(e, h, ctx)?, k)).filter(|(h, _)| !h.is_zero())
        }
        (None, Some(_)) => return Err(e.invalid("exp_den without exp_num".into())),
    };
    LogExpIntegral::new(ctx.nvars, logs, exp).map_err(|err| e.invalid(format!("integral: {err}")))
}

/// Variable index of a name such as `z3`, relative to the entry's first variable.
fn var_index(e: &CatalogEntry, name: &str, ctx: &Context) -> Res<usize> {
    let p = poly(e, name, ctx)?;
    match p.support().as_slice() {
        [i] if p.num_terms() == 1 && p.total_degree() == Some(1) => Ok(*i),
        _ => Err(e.invalid(format!("'{name}' is not a variable"))),
    }
}

/// A foliation block at one instantiation.
struct FolInstance {
    ctx: Context,
    integral: LogExpIntegral,
    gens: Vec<VField>,
    lin: Vec<LinField>,
    presentation: Option<Presentation>,
    observed_alpha: Option<Vec<Rat>>,
}

fn fol_instance(e: &CatalogEntry, b: &Block, inst: &Instantiation) -> Res<FolInstance> {
    let ctx = e.context_for(inst, &b.params)?;
    let integral = integral(e, &b.integral, &ctx)?;
    let texts = b
        .generators
        .as_ref()
        .or(inst.generators.as_ref())
        .ok_or_else(|| e.invalid("no generators in the entry or the instantiation".into()))?;
    let gens = texts.iter().map(|t| field(e, t, &ctx)).collect::<Res<Vec<_>>>()?;
    let lin = gens.iter().map(|g| linear(e, g)).collect::<Res<Vec<_>>>()?;
    let presentation = match &b.presentation {
        None => None,
        Some(p) => {
            let alpha = p.params.get("alpha").map(|a| rat_value(e, a, &ctx)).transpose()?;
            Some(
                Presentation::from_name(&p.name, alpha)
                    .ok_or_else(|| e.invalid(format!("unknown presentation '{}'", p.name)))?,
            )
        }
    };
    let observed_alpha = inst
        .observed_alpha
        .as_ref()
        .map(|v| v.iter().map(|a| rat_value(e, a, &ctx)).collect::<Res<Vec<_>>>())
        .transpose()?;
    Ok(FolInstance { ctx, integral, gens, lin, presentation, observed_alpha })
}

/// Parses every template at every instantiation without running checks.
pub(super) fn instantiate_all(e: &CatalogEntry) -> Res<()> {
    match &e.kind {
        EntryKind::Foliation(f) => {
            for (b, verbatim) in blocks(f) {
                for inst in &b.instantiations {
                    let fi = fol_instance(e, b, inst)?;
                    if verbatim {
                        for x in &f.extra {
                            extra_inputs(e, x, &fi.ctx)?;
                        }
                        if let Some(s) = &f.simple {
                            simple_inputs(e, s, &fi.ctx)?;
                        }
                    }
                }
            }
        }
        EntryKind::Negative(s) => {
            for inst in &s.instantiations {
                bracket_system(e, &s.constraints, &e.context(inst)?)?;
            }
        }
        EntryKind::Cubic(s) => {
            for inst in &s.instantiations {
                let ctx = e.context(inst)?;
                poly(e, &s.poly, &ctx)?;
                for t in s.fields.iter().flatten() {
                    field(e, t, &ctx)?;
                }
            }
        }
        EntryKind::CodimP(s) => {
            for inst in &s.instantiations {
                codim_inputs(e, s, &e.context(inst)?)?;
            }
        }
        EntryKind::Obstruction(s) => {
            for inst in &s.instantiations {
                form(e, &s.form, &e.context(inst)?)?;
            }
        }
    }
    Ok(())
}

fn blocks(f: &FoliationSpec) -> Vec<(&Block, bool)> {
    let mut v = vec![(&f.verbatim, true)];
    if let Some((c, _)) = &f.correction {
        v.push((c, false));
    }
    v
}

fn form(e: &CatalogEntry, text: &str, ctx: &Context) -> Res<KForm> {
    frontend::parse_form(text, ctx).map_err(|err| e.parse_err(format!("'{text}'"), err))
}

enum ExtraInput {
    Factor(Poly),
    Vars(Vec<usize>),
    Leaf(i64),
    Field(VField),
    Drop(Vec<usize>, usize),
    TangentDim(usize),
}

fn extra_inputs(e: &CatalogEntry, x: &Extra, ctx: &Context) -> Res<ExtraInput> {
    Ok(match x {
        Extra::IntegratingFactor { poly: p } => ExtraInput::Factor(poly(e, p, ctx)?),
        Extra::VanishesOn { vars } => ExtraInput::Vars(vars.iter().map(|v| var_index(e, v, ctx)).collect::<Res<_>>()?),
        Extra::LeafDegree { value } => ExtraInput::Leaf(*value),
        Extra::Symmetry { field: f } => ExtraInput::Field(field(e, f, ctx)?),
        Extra::RankDrop { vars, points } => {
            ExtraInput::Drop(vars.iter().map(|v| var_index(e, v, ctx)).collect::<Res<_>>()?, *points)
        }
        Extra::TangentDim { value } => ExtraInput::TangentDim(*value),
    })
}

struct SimpleInputs {
    integral: LogExpIntegral,
    /// Images of the variables under the recorded substitution.
    images: Option<Vec<Poly>>,
}

fn simple_inputs(e: &CatalogEntry, s: &SimpleForm, ctx: &Context) -> Res<SimpleInputs> {
    let integral = integral(e, &s.integral, ctx)?;
    let images = if s.substitution.is_empty() {
        None
    } else {
        let mut im: Vec<Poly> = (0..ctx.nvars).map(|i| Poly::var(ctx.nvars, i)).collect();
        for (k, v) in &s.substitution {
            im[var_index(e, k, ctx)?] = poly(e, v, ctx)?;
        }
        Some(im)
    };
    Ok(SimpleInputs { integral, images })
}

fn bracket_system(e: &CatalogEntry, cons: &[BracketConstraint], ctx: &Context) -> Res<Vec<(LinField, LinField)>> {
    cons.iter()
        .map(|c| Ok((linear(e, &field(e, &c.bracket_with, ctx)?)?, linear(e, &field(e, &c.equals, ctx)?)?)))
        .collect()
}

struct CodimInputs {
    tangent: Vec<VField>,
    symmetries: Vec<VField>,
    integrals: Vec<LogExpIntegral>,
}

fn codim_inputs(e: &CatalogEntry, s: &CodimPSpec, ctx: &Context) -> Res<CodimInputs> {
    Ok(CodimInputs {
        tangent: s.tangent.iter().map(|t| field(e, t, ctx)).collect::<Res<_>>()?,
        symmetries: s.symmetries.iter().map(|t| field(e, t, ctx)).collect::<Res<_>>()?,
        integrals: s.first_integrals.iter().map(|t| integral(e, t, ctx)).collect::<Res<_>>()?,
    })
}

fn with_radial(fields: &[VField], nvars: usize) -> Vec<VField> {
    let mut v = fields.to_vec();
    v.push(VField::radial(nvars));
    v
}

/// Some `a_I b_J - a_J b_I` that does not vanish.
fn proportionality_residual(a: &KForm, b: &KForm) -> Option<Poly> {
    let keys: std::collections::BTreeSet<&Vec<usize>> = a.terms().chain(b.terms()).map(|(k, _)| k).collect();
    let keys: Vec<&Vec<usize>> = keys.into_iter().collect();
    for (x, i) in keys.iter().enumerate() {
        for j in &keys[x + 1..] {
            let r = &(&a.coeff(i) * &b.coeff(j)) - &(&a.coeff(j) * &b.coeff(i));
            if !r.is_zero() {
                return Some(r);
            }
        }
    }
    None
}

fn first_integral_check(name: &str, f: &LogExpIntegral, fields: &[VField], offset: usize) -> CheckResult {
    match f.residuals(fields) {
        Err(err) => CheckResult::fail(name, err.to_string()),
        Ok(res) => match res.iter().position(|r| !r.is_zero()) {
            None => CheckResult::pass(name),
            Some(k) => CheckResult::fail(
                name,
                format!("residual along {}: {}", fields[k].render(offset), res[k].render(offset)),
            ),
        },
    }
}

fn presentation_check(fi: &FolInstance, p: &Presentation) -> CheckResult {
    let name = "presentation";
    let span = match LieSpan::reduce(fi.ctx.nvars, &fi.lin) {
        Ok(s) => s,
        Err(err) => return CheckResult::fail(name, err.to_string()),
    };
    let m = match linlie::matches_presentation(&span, p) {
        Ok(m) => m,
        Err(err) => return CheckResult::fail(name, err.to_string()),
    };
    if !m.matched {
        return CheckResult::fail(name, format!("expected {}, observed {}", p.name(), m.observed));
    }
    if let Some(want) = &fi.observed_alpha {
        let mut want = want.clone();
        want.sort();
        want.dedup();
        if m.observed.alphas().as_ref() != Some(&want) {
            return CheckResult::fail(
                name,
                format!("alpha class differs from the recorded one: observed {}", m.observed),
            );
        }
    }
    CheckResult::pass(name)
}

fn foliation_checks(e: &CatalogEntry, spec: &FoliationSpec, fi: &FolInstance, verbatim: bool) -> Res<Vec<CheckResult>> {
    let n = e.n;
    let nvars = n + 1;
    let off = e.first_var;
    let all = with_radial(&fi.gens, nvars);
    let mut out = vec![first_integral_check("first-integral", &fi.integral, &all, off)];

    let rank = foliation::generic_dimension(&all);
    out.push(CheckResult::from_bool("generic-rank", rank == n, || {
        format!("generators and R have rank {rank}, want {n}")
    }));

    let iform = fi.integral.to_form();
    let sel = foliation::pick_independent(&fi.gens, n - 1);
    let def = if sel.len() == n - 1 {
        foliation::defining_form(&sel).map_err(|err| err.to_string())
    } else {
        Err(format!("only {} generators independent modulo R", sel.len()))
    };
    match &def {
        Ok(_) => out.push(CheckResult::pass("defining-form")),
        Err(msg) => out.push(CheckResult::fail("defining-form", msg.clone())),
    }

    let ideg = iform.as_ref().map_err(|e| e.to_string()).and_then(|w| foliation::degree(w).map_err(|e| e.to_string()));
    let want = spec.degree;
    let deg_ok = matches!(&def, Ok(d) if d.nu == want) && ideg.as_ref().is_ok_and(|&d| d == want);
    out.push(CheckResult::from_bool("degree", deg_ok, || {
        let dd = def.as_ref().map(|d| d.nu.to_string()).unwrap_or_else(|_| "none".into());
        let id = match &ideg {
            Ok(d) => d.to_string(),
            Err(m) => m.clone(),
        };
        format!("claimed {want}, defining form {dd}, integral {id}")
    }));

    match (&def, &iform) {
        (Ok(d), Ok(w)) => {
            let ok = foliation::proportional(&d.omega, w);
            out.push(CheckResult::from_bool("proportional", ok, || match proportionality_residual(&d.omega, w) {
                Some(r) => format!("nonzero cross term {}", r.render(off)),
                None => "forms differ".into(),
            }));
        }
        (_, Err(err)) => out.push(CheckResult::fail("proportional", err.to_string())),
        (Err(_), _) => out.push(CheckResult::fail("proportional", "no defining form")),
    }

    if let Some(p) = &fi.presentation {
        out.push(presentation_check(fi, p));
    }

    if verbatim {
        let w = iform.as_ref().ok();
        for x in &spec.extra {
            out.push(extra_check(e, x, fi, w)?);
        }
        if let Some(s) = &spec.simple {
            out.push(simple_check(e, spec, s, fi)?);
        }
    }
    Ok(out)
}

fn extra_check(e: &CatalogEntry, x: &Extra, fi: &FolInstance, w: Option<&KForm>) -> Res<CheckResult> {
    let off = e.first_var;
    let nvars = fi.ctx.nvars;
    let input = extra_inputs(e, x, &fi.ctx)?;
    let name = |s: &str| format!("extra:{s}");
    let Some(w) = w else {
        return Ok(CheckResult::fail(name("form"), "the integral has no reduced form"));
    };
    Ok(match input {
        ExtraInput::Factor(p) => {
            CheckResult::from_bool(name("integrating-factor"), foliation::integrating_factor_check(w, &p), || {
                format!("{} is not an integrating factor", p.render(off))
            })
        }
        ExtraInput::Vars(vars) => {
            let ok = w.terms().all(|(_, c)| vars.iter().fold(c.clone(), |q, &i| q.set_var(i, &Rat::zero())).is_zero());
            CheckResult::from_bool(name("vanishes-on"), ok, || "a coefficient survives the restriction".into())
        }
        ExtraInput::Leaf(v) => {
            let (pos, neg) = fi.integral.weighted_degrees();
            let want = Rat::from_integer(v.into());
            CheckResult::from_bool(name("leaf-degree"), pos == want && neg == want, || {
                format!("numerator degree {pos}, denominator degree {neg}, want {v}")
            })
        }
        ExtraInput::Field(x) => CheckResult::from_bool(name("symmetry"), foliation::symmetry_check(w, &x), || {
            format!("{} is not a symmetry", x.render(off))
        }),
        ExtraInput::Drop(vars, points) => {
            let all = with_radial(&fi.gens, nvars);
            let full = foliation::generic_dimension(&all);
            let pts: Vec<Vec<Rat>> = foliation::generic_points(nvars)
                .into_iter()
                .take(points)
                .map(|mut p| {
                    for &i in &vars {
                        p[i] = Rat::zero();
                    }
                    p
                })
                .collect();
            let ranks: Vec<usize> = pts.iter().map(|p| foliation::pointwise_dimension(&all, p)).collect();
            let ok = pts.len() == points && ranks.iter().all(|&r| r < full);
            CheckResult::from_bool(name("rank-drop"), ok, || format!("generic rank {full}, restricted ranks {ranks:?}"))
        }
        ExtraInput::TangentDim(v) => match foliation::tangent_linear_algebra(w, TangentMode::AnnihilateOmega) {
            Ok(s) => {
                CheckResult::from_bool(name("tangent-dim"), s.dim() == v, || format!("dimension {}, want {v}", s.dim()))
            }
            Err(err) => CheckResult::fail(name("tangent-dim"), err.to_string()),
        },
    })
}

/// The simplified integral: with a substitution, its pull-back must be a
/// first integral of the generators; without one, its own tangent algebra
/// must have full rank and the claimed presentation.
fn simple_check(e: &CatalogEntry, spec: &FoliationSpec, s: &SimpleForm, fi: &FolInstance) -> Res<CheckResult> {
    let name = "simple";
    let n = e.n;
    let nvars = fi.ctx.nvars;
    let off = e.first_var;
    let si = simple_inputs(e, s, &fi.ctx)?;
    let w = match si.integral.to_form() {
        Ok(w) => w,
        Err(err) => return Ok(CheckResult::fail(name, err.to_string())),
    };
    match foliation::degree(&w) {
        Ok(d) if d == spec.degree => {}
        Ok(d) => return Ok(CheckResult::fail(name, format!("degree {d}, claimed {}", spec.degree))),
        Err(err) => return Ok(CheckResult::fail(name, err.to_string())),
    }
    if let Some(images) = &si.images {
        let pulled = match si.integral.compose(images) {
            Ok(p) => p,
            Err(err) => return Ok(CheckResult::fail(name, err.to_string())),
        };
        let mut c = first_integral_check(name, &pulled, &with_radial(&fi.gens, nvars), off);
        if let Some(d) = c.detail.as_mut() {
            *d = format!("after substitution, {d}");
        }
        return Ok(c);
    }
    let ta = match foliation::tangent_linear_algebra(&w, TangentMode::AnnihilateOmega) {
        Ok(t) => t,
        Err(err) => return Ok(CheckResult::fail(name, err.to_string())),
    };
    let fields: Vec<VField> = ta.basis().iter().map(|f| f.field().clone()).collect();
    let rank = foliation::generic_dimension(&with_radial(&fields, nvars));
    if rank != n {
        return Ok(CheckResult::fail(name, format!("tangent algebra has rank {rank}, want {n}")));
    }
    if let Some(p) = &fi.presentation {
        let alg = match Algebra::modulo_radial(nvars, ta.basis()) {
            Ok(a) => a,
            Err(err) => return Ok(CheckResult::fail(name, err.to_string())),
        };
        if matches!(alg.dim(), 2 | 3) {
            let m = linlie::matches_presentation(&ta, p);
            if !m.as_ref().is_ok_and(|m| m.matched) {
                let obs = m.map(|m| m.observed.to_string()).unwrap_or_else(|e| e.to_string());
                return Ok(CheckResult::fail(name, format!("tangent algebra is {obs}, expected {}", p.name())));
            }
        }
    }
    Ok(CheckResult::pass(name))
}

fn instance_report(variant: Variant, inst: &Instantiation, checks: Vec<CheckResult>) -> InstanceReport {
    InstanceReport { variant, values: inst.values.clone(), checks }
}

fn verify_foliation(e: &CatalogEntry, spec: &FoliationSpec) -> Res<(Vec<InstanceReport>, EntryStatus)> {
    let mut reports = Vec::new();
    let mut ok = [true, true];
    for (b, verbatim) in blocks(spec) {
        let variant = if verbatim { Variant::Verbatim } else { Variant::Correction };
        for inst in &b.instantiations {
            let fi = fol_instance(e, b, inst)?;
            let r = instance_report(variant, inst, foliation_checks(e, spec, &fi, verbatim)?);
            ok[usize::from(!verbatim)] &= r.passed();
            reports.push(r);
        }
    }
    let status = if ok[0] {
        EntryStatus::Pass
    } else if spec.correction.is_some() && ok[1] && spec.known_issue.is_some() {
        EntryStatus::KnownIssue
    } else {
        EntryStatus::Fail
    };
    Ok((reports, status))
}

fn negative_instance(e: &CatalogEntry, s: &NegativeSpec, inst: &Instantiation) -> Res<InstanceReport> {
    let ctx = e.context(inst)?;
    let cons = bracket_system(e, &s.constraints, &ctx)?;
    let sol = linlie::solve_bracket_system(ctx.nvars, &cons, None).map_err(|err| e.invalid(err.to_string()))?;
    let describe = |sol: &BracketSolution| match sol.dimension() {
        None => "infeasible".to_string(),
        Some(d) => format!("feasible, {d}-dimensional solution set"),
    };
    let name = format!("bracket-system[{}]", s.unknown);
    let check = match s.expect {
        Expect::Infeasible => CheckResult::from_bool(name, !sol.is_feasible(), || describe(&sol)),
        Expect::Feasible => {
            let ok = sol.is_feasible() && s.solution_dim.map_or(true, |d| sol.dimension() == Some(d));
            CheckResult::from_bool(name, ok, || match s.solution_dim {
                Some(d) => format!("{}, expected dimension {d}", describe(&sol)),
                None => describe(&sol),
            })
        }
    };
    Ok(instance_report(Variant::Verbatim, inst, vec![check]))
}

fn cubic_instance(e: &CatalogEntry, s: &CubicSpec, inst: &Instantiation) -> Res<InstanceReport> {
    let ctx = e.context(inst)?;
    let off = e.first_var;
    let p = poly(e, &s.poly, &ctx)?;
    let ann = annihilator_of_polynomial(&p);
    let fields: Vec<VField> = ann.basis().iter().map(|f| f.field().clone()).collect();
    let mut checks = Vec::new();
    if let Some(want) = inst.annihilator_dim {
        checks.push(CheckResult::from_bool("annihilator-dim", ann.dim() == want, || {
            format!("dimension {}, want {want}", ann.dim())
        }));
    }
    let rank = foliation::generic_dimension(&fields);
    checks.push(CheckResult::from_bool("generic-rank", rank == s.generic_rank, || {
        format!("rank {rank}, want {}", s.generic_rank)
    }));
    if let Some(ts) = &s.fields {
        let listed = ts.iter().map(|t| field(e, t, &ctx)).collect::<Res<Vec<_>>>()?;
        let bad = listed.iter().find(|x| !x.apply(&p).is_zero());
        checks.push(CheckResult::from_bool("listed-fields", bad.is_none(), || {
            let x = bad.expect("failing field");
            format!("{} maps P to {}", x.render(off), x.apply(&p).render(off))
        }));
        let lr = foliation::generic_dimension(&listed);
        checks.push(CheckResult::from_bool("listed-rank", lr == s.generic_rank, || {
            format!("listed fields have rank {lr}, want {}", s.generic_rank)
        }));
    }
    Ok(instance_report(Variant::Verbatim, inst, checks))
}

fn codim_instance(e: &CatalogEntry, s: &CodimPSpec, inst: &Instantiation) -> Res<InstanceReport> {
    let ctx = e.context(inst)?;
    let off = e.first_var;
    let nvars = ctx.nvars;
    let inputs = codim_inputs(e, s, &ctx)?;
    let omega = foliation::radial_codim_p_form(s.p, e.n).map_err(|err| e.invalid(err.to_string()))?;
    let mut checks = Vec::new();

    let bad = inputs.tangent.iter().find(|x| !omega.interior(x).is_ok_and(|r| r.is_zero()));
    checks.push(CheckResult::from_bool("tangent-fields", bad.is_none(), || {
        format!("{} does not annihilate the form", bad.expect("failing field").render(off))
    }));

    match foliation::tangent_linear_algebra(&omega, TangentMode::AnnihilateOmega) {
        Ok(ta) => {
            let listed: Vec<LinField> = inputs.tangent.iter().map(|x| linear(e, x)).collect::<Res<_>>()?;
            let ls = LieSpan::reduce(nvars, &listed).map_err(|err| e.invalid(err.to_string()))?;
            let ok = ta.dim() == s.tangent_dim && ls.dim() == s.tangent_dim;
            checks.push(CheckResult::from_bool("tangent-dim", ok, || {
                format!("annihilator dimension {}, listed span {}, want {}", ta.dim(), ls.dim(), s.tangent_dim)
            }));
        }
        Err(err) => checks.push(CheckResult::fail("tangent-dim", err.to_string())),
    }

    let rank = foliation::generic_dimension(&inputs.tangent);
    checks.push(CheckResult::from_bool("leaf-rank", rank == s.leaf_rank, || {
        format!("rank {rank}, want {}", s.leaf_rank)
    }));

    let deg = foliation::degree(&omega).map_err(|err| e.invalid(err.to_string()))?;
    checks.push(CheckResult::from_bool("degree", deg == s.degree, || format!("degree {deg}, claimed {}", s.degree)));

    let two = Rat::from_integer(2.into());
    let bad = inputs.symmetries.iter().find(|x| !omega.lie_derivative(x).is_ok_and(|l| l == omega.scale(&two)));
    checks.push(CheckResult::from_bool("symmetries", bad.is_none(), || {
        format!("L_X w != 2 w for X = {}", bad.expect("failing field").render(off))
    }));

    for (k, f) in inputs.integrals.iter().enumerate() {
        checks.push(first_integral_check(&format!("first-integral[{k}]"), f, &inputs.tangent, off));
    }
    Ok(instance_report(Variant::Verbatim, inst, checks))
}

fn obstruction_instance(e: &CatalogEntry, s: &ObstructionSpec, inst: &Instantiation) -> Res<InstanceReport> {
    let ctx = e.context(inst)?;
    let nvars = ctx.nvars;
    let w = form(e, &s.form, &ctx)?;
    let mut checks = vec![
        CheckResult::from_bool("descends", foliation::check_descent(&w), || "i_R w != 0".into()),
        CheckResult::from_bool("integrable", foliation::check_integrable(&w), || "w ^ dw != 0".into()),
    ];
    match foliation::degree(&w) {
        Ok(d) => {
            checks.push(CheckResult::from_bool("degree", d == s.degree, || format!("degree {d}, claimed {}", s.degree)))
        }
        Err(err) => checks.push(CheckResult::fail("degree", err.to_string())),
    }
    match foliation::tangent_linear_algebra(&w, TangentMode::AnnihilateOmega) {
        Ok(ta) => {
            checks.push(CheckResult::from_bool("tangent-dim", ta.dim() == s.tangent_dim, || {
                format!("dimension {}, want {}", ta.dim(), s.tangent_dim)
            }));
            let fields: Vec<VField> = ta.basis().iter().map(|f| f.field().clone()).collect();
            let rank = foliation::generic_dimension(&with_radial(&fields, nvars)) - 1;
            let ok = rank == s.max_rank && rank + 1 < e.n;
            checks.push(CheckResult::from_bool("rank-below-leaf", ok, || {
                format!("rank modulo R is {rank}, recorded {}, leaves need {}", s.max_rank, e.n - 1)
            }));
        }
        Err(err) => checks.push(CheckResult::fail("tangent-dim", err.to_string())),
    }
    Ok(instance_report(Variant::Verbatim, inst, checks))
}

fn verify_kind(e: &CatalogEntry) -> Res<(Vec<InstanceReport>, EntryStatus)> {
    let simple = |reports: Vec<InstanceReport>| {
        let ok = reports.iter().all(InstanceReport::passed);
        (reports, if ok { EntryStatus::Pass } else { EntryStatus::Fail })
    };
    match &e.kind {
        EntryKind::Foliation(f) => verify_foliation(e, f),
        EntryKind::Negative(s) => {
            Ok(simple(s.instantiations.iter().map(|i| negative_instance(e, s, i)).collect::<Res<_>>()?))
        }
        EntryKind::Cubic(s) => {
            Ok(simple(s.instantiations.iter().map(|i| cubic_instance(e, s, i)).collect::<Res<_>>()?))
        }
        EntryKind::CodimP(s) => {
            Ok(simple(s.instantiations.iter().map(|i| codim_instance(e, s, i)).collect::<Res<_>>()?))
        }
        EntryKind::Obstruction(s) => {
            Ok(simple(s.instantiations.iter().map(|i| obstruction_instance(e, s, i)).collect::<Res<_>>()?))
        }
    }
}

/// Runs every check of the entry at every instantiation. Failures are
/// recorded in the report, never returned as errors.
pub fn verify_entry(e: &CatalogEntry) -> EntryReport {
    let start = Instant::now();
    let (instances, status, error) = match verify_kind(e) {
        Ok((i, s)) => (i, s, None),
        Err(err) => (Vec::new(), EntryStatus::Fail, Some(err.to_string())),
    };
    let known_issue = match &e.kind {
        EntryKind::Foliation(f) => f.known_issue.clone(),
        _ => None,
    };
    EntryReport {
        catalog: String::new(),
        id: e.id.clone(),
        kind: e.kind.name().to_string(),
        anchor: e.anchor.clone(),
        confidence: e.confidence,
        status,
        known_issue,
        error,
        instances,
        elapsed: start.elapsed(),
    }
}

/// True iff the bracket system behaves as the entry expects at every
/// instantiation. Non-negative entries are never true.
pub fn verify_negative(e: &CatalogEntry) -> bool {
    matches!(e.kind, EntryKind::Negative(_)) && verify_entry(e).status == EntryStatus::Pass
}

/// Verifies all entries in parallel; the report keeps catalog order.
pub fn run_all(catalogs: &[Catalog]) -> VerificationReport {
    let work: Vec<(&str, &CatalogEntry)> =
        catalogs.iter().flat_map(|c| c.entries.iter().map(move |e| (c.name.as_str(), e))).collect();
    let entries = work.par_iter().map(|(cat, e)| EntryReport { catalog: cat.to_string(), ..verify_entry(e) }).collect();
    VerificationReport { entries }
}
