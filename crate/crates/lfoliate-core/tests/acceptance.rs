//! Acceptance harness: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails. Runs without the libtest harness so the lines always
//! reach the terminal.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use lfoliate_core::catalog::{self, Catalog, CatalogEntry, Confidence, EntryKind, EntryReport, EntryStatus};
use lfoliate_core::exterior::{KForm, VField};
use lfoliate_core::foliation::{self, TangentMode};
use lfoliate_core::frontend;
use lfoliate_core::invariants::{self, MatrixKind};
use lfoliate_core::symcore::{frac, rat, Matrix, Monomial, Poly, Rat};
use proptest::strategy::Strategy;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use common::*;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn load(name: &str) -> Catalog {
    catalog::load_catalog(catalog::bundled_catalog_dir().join(format!("{name}.cat"))).expect("bundled catalog")
}

fn entry<'a>(c: &'a Catalog, id: &str) -> &'a CatalogEntry {
    c.entries.iter().find(|e| e.id == id).unwrap_or_else(|| panic!("no entry {id}"))
}

fn summarize(r: &EntryReport) -> String {
    let mut s = format!("{} {}", r.id, r.status.label());
    if let Some(err) = &r.error {
        s += &format!(" ({err})");
    }
    for (i, c) in r.failed_checks() {
        s += &format!("; {:?} {:?} {}: {}", i.variant, i.values, c.name, c.detail.as_deref().unwrap_or(""));
    }
    s
}

fn has_check(r: &EntryReport, name: &str) -> bool {
    r.instances.iter().all(|i| i.checks.iter().any(|c| c.name == name && c.passed))
}

fn within(start: Instant, limit: Duration) -> Result<Duration, String> {
    let t = start.elapsed();
    if t < limit {
        Ok(t)
    } else {
        Err(format!("took {:.2} s, limit {} s", t.as_secs_f64(), limit.as_secs()))
    }
}

/// Degree-2 foliations of CP(3): every entry passes at two or more
/// instantiations with the core checks present.
fn criterion_1() -> Outcome {
    let start = Instant::now();
    let cat = load("cp3_degree2");
    ensure!(cat.entries.len() == 13, "{} entries, want 13", cat.entries.len());
    for e in &cat.entries {
        let EntryKind::Foliation(f) = &e.kind else {
            return Err(format!("{} is not a foliation entry", e.id));
        };
        ensure!(f.degree == 2, "{}: claimed degree {}", e.id, f.degree);
        let k = f.verbatim.instantiations.len();
        ensure!(k >= 2 || e.params.is_empty(), "{}: only {k} instantiation(s)", e.id);
        let r = catalog::verify_entry(e);
        ensure!(r.status == EntryStatus::Pass, "{}", summarize(&r));
        for name in ["first-integral", "proportional", "degree", "presentation"] {
            ensure!(has_check(&r, name), "{}: check {name} missing", e.id);
        }
    }
    let t = within(start, Duration::from_secs(10))?;
    Ok(format!("13 entries in {:.2} s", t.as_secs_f64()))
}

/// Gordan-Noether cubic on C^5: vanishing Hessian, independent partials,
/// the four fields and their brackets.
fn criterion_2() -> Outcome {
    let start = Instant::now();
    let p = invariants::gordan_noether(5, 1);
    let hess = invariants::det(&invariants::hessian(&p)).map_err(|e| e.to_string())?;
    ensure!(hess.is_zero(), "det Hess = {hess}");
    ensure!(invariants::hesse_test(&p), "hesse_test false");
    ensure!(!invariants::sylvester_test(&p), "sylvester_test true");
    let xs: Vec<VField> = invariants::gordan_noether_fields(5, 1).iter().map(|f| f.field().clone()).collect();
    for (k, x) in xs.iter().enumerate() {
        ensure!(x.apply(&p).is_zero(), "X{} does not annihilate P", k + 1);
    }
    // [X_i, X_j] = c X_k, with c = 0 meaning the bracket vanishes
    let relations = [(1, 2, 0, 1), (1, 3, -2, 1), (1, 4, -1, 1), (2, 3, -1, 2), (2, 4, -2, 2), (3, 4, 0, 1)];
    for (i, j, c, k) in relations {
        let b = xs[i - 1].bracket(&xs[j - 1]).unwrap();
        let want = xs[k - 1].scale(&rat(c));
        ensure!(b == want, "[X{i},X{j}] = {b}");
    }
    let ann = invariants::annihilator_of_polynomial(&p);
    let fields: Vec<VField> = ann.basis().iter().map(|f| f.field().clone()).collect();
    let g = foliation::generic_dimension(&fields);
    ensure!(g == 4, "annihilator has generic dimension {g}");
    let t = within(start, Duration::from_secs(5))?;
    Ok(format!("annihilator dim {}, generic dim 4, {:.2} s", ann.dim(), t.as_secs_f64()))
}

fn random_lambda(rng: &mut StdRng) -> Rat {
    loop {
        let l = frac(rng.gen_range(-50..=50), rng.gen_range(1..=30));
        if l != rat(0) && l != rat(1) {
            return l;
        }
    }
}

/// Invariants of the induced actions, Pfaffians, and the j function.
fn criterion_3() -> Outcome {
    let inv = |r: Result<invariants::InducedAction, invariants::InvError>| r.map_err(|e| e.to_string());
    let c3 = inv(invariants::sl2_on_binary_forms(3))?;
    ensure!(c3.annihilates(&invariants::discriminant_cubic()), "cubic discriminant");
    let q4 = inv(invariants::sl2_on_binary_forms(4))?;
    let (pq, hq, dq) = (invariants::quartic_p(), invariants::quartic_h(), invariants::quartic_discriminant());
    for (name, f) in [("P", &pq), ("H", &hq), ("Delta", &dq)] {
        ensure!(q4.annihilates(f), "quartic {name}");
    }
    let rhs = (&(&pq * &pq) * &pq - (&hq * &hq).scale(&rat(27))).scale(&rat(256));
    ensure!(dq == rhs, "Delta != 2^8 (P^3 - 27 H^2)");
    let sym3 = inv(invariants::sl_on_matrix_space(3, MatrixKind::Symmetric))?;
    let delta = invariants::det(&invariants::generic_matrix(3, MatrixKind::Symmetric)).map_err(|e| e.to_string())?;
    ensure!(sym3.annihilates(&delta), "det on Sym 3");
    let asym4 = inv(invariants::sl_on_matrix_space(4, MatrixKind::Antisymmetric))?;
    let pf4 =
        invariants::pfaffian(&invariants::generic_matrix(4, MatrixKind::Antisymmetric)).map_err(|e| e.to_string())?;
    ensure!(asym4.annihilates(&pf4), "pf on ASym 4");
    for k in [4, 6] {
        let m = invariants::generic_matrix(k, MatrixKind::Antisymmetric);
        let pf = invariants::pfaffian(&m).map_err(|e| e.to_string())?;
        ensure!(&pf * &pf == invariants::det(&m).map_err(|e| e.to_string())?, "pf^2 != det for k = {k}");
    }
    let j = |l: &Rat| invariants::jfun(l).map_err(|e| e.to_string());
    ensure!(j(&rat(2))? == rat(1728), "j(2) = {}", j(&rat(2))?);
    let mut rng = StdRng::seed_from_u64(0x6a_66_75_6e);
    for _ in 0..20 {
        let l = random_lambda(&mut rng);
        let v = j(&l)?;
        ensure!(j(&(rat(1) / &l))? == v && j(&(rat(1) - &l))? == v, "j symmetry fails at {l}");
    }
    Ok("all invariants annihilated, 20 random lambda".into())
}

/// sl2, abelian, L_alpha and aff_split lists in CP(4).
fn criterion_4() -> Outcome {
    let start = Instant::now();
    let expected = [("cp4_sl2", 2), ("cp4_abelian", 8), ("cp4_lalpha", 17), ("cp4_affsplit", 9)];
    let cats: Vec<Catalog> = expected.iter().map(|(n, _)| load(n)).collect();
    for (c, (name, k)) in cats.iter().zip(expected) {
        ensure!(c.entries.len() == k, "{name}: {} entries, want {k}", c.entries.len());
    }
    let report = catalog::run_all(&cats);
    let mut theorem = 0;
    let mut adjudicate = Vec::new();
    for r in &report.entries {
        match r.confidence {
            Confidence::Theorem => {
                theorem += 1;
                ensure!(r.status == EntryStatus::Pass, "theorem entry fails: {}", summarize(r));
            }
            Confidence::PaperMaple => {
                if r.status == EntryStatus::Pass {
                    continue;
                }
                let failed: Vec<_> = r.failed_checks().collect();
                ensure!(
                    !failed.is_empty()
                        && failed.iter().all(|(_, c)| c.detail.as_deref().is_some_and(|d| !d.is_empty())),
                    "{}: failure without residual",
                    r.id
                );
                for (i, c) in failed {
                    adjudicate.push(format!(
                        "    {} [{}] {:?} {:?} {}: {}",
                        r.id,
                        r.status.label(),
                        i.variant,
                        i.values,
                        c.name,
                        c.detail.as_deref().unwrap_or("")
                    ));
                }
            }
        }
    }
    for line in &adjudicate {
        println!("{line}");
    }
    let t = within(start, Duration::from_secs(60))?;
    Ok(format!(
        "{} entries, {theorem} theorem all pass, {} known issues with residuals above, {} failed, {:.2} s",
        report.entries.len(),
        report.count(EntryStatus::KnownIssue),
        report.count(EntryStatus::Fail),
        t.as_secs_f64()
    ))
}

/// Infeasible bracket systems and their feasible controls.
fn criterion_5() -> Outcome {
    let cat = load("cp4_negative");
    let mut seen = 0;
    for id in ["neg-heis", "neg-shear", "control-radial", "control-shear-partial"] {
        let e = entry(&cat, id);
        ensure!(catalog::verify_negative(e), "{}", summarize(&catalog::verify_entry(e)));
        seen += 1;
    }
    Ok(format!("{seen} bracket systems as expected"))
}

fn prop<S: Strategy>(name: &str, strategy: S, test: impl Fn(S::Value) -> Prop) -> Result<(), String> {
    let mut config = Config::with_cases(100);
    config.failure_persistence = None;
    let mut runner = TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha));
    runner.run(&strategy, test).map_err(|e| format!("{name}: {e}"))
}

/// Structural identities on 100 random cases each, and the Euler identity
/// on every catalog form.
fn criterion_6() -> Outcome {
    prop("d^2 = 0", arb_any_kform(4), d_squared)?;
    prop("wedge", (arb_any_kform(4), arb_any_kform(4)), |(a, b)| wedge_anticommutes(a, b))?;
    prop("interior", (arb_field(4), arb_any_kform(4), arb_any_kform(4)), |(x, a, b)| interior_antiderivation(x, a, b))?;
    prop("cartan", (arb_field(4), arb_any_kform(4)), |(x, w)| cartan_naturality(x, w))?;
    prop("jacobi", (arb_field(3), arb_field(3), arb_field(3)), |(x, y, z)| jacobi_fields(x, y, z))?;
    prop("jacobi linear", (arb_linfield(4), arb_linfield(4), arb_linfield(4)), |(x, y, z)| jacobi_linear(x, y, z))?;
    prop("euler random", arb_field_pair(), |(x, y)| random_defining_form(x, y))?;
    prop("gcd", (arb_poly(3, 2, 3), arb_poly(3, 2, 3), arb_nonzero_poly(3, 2, 3)), |(a, b, c)| gcd_roundtrip(a, b, c))?;
    let forms = catalog_forms();
    for (label, f) in &forms {
        euler_identity(f).map_err(|e| format!("euler {label}: {e}"))?;
    }
    Ok(format!("8 suites x 100 cases, Euler identity on {} catalog forms", forms.len()))
}

/// Linear fields X = sum a_ij z_j d/dz_i with i_X (z0 dz1 - z1 dz0) = 0,
/// counted by brute force over the 16 matrix entries.
fn pencil_oracle() -> usize {
    let n = 4;
    let z = |i: usize| Poly::var(n, i);
    let mut mons: Vec<Monomial> = Vec::new();
    let mut cols: Vec<Poly> = Vec::new();
    for i in 0..n {
        for j in 0..n {
            // X = z_j d/dz_i: i_X w = z0 X_1 - z1 X_0
            let c = match i {
                0 => -(&z(1) * &z(j)),
                1 => &z(0) * &z(j),
                _ => Poly::zero(n),
            };
            for (m, _) in c.terms() {
                if !mons.contains(m) {
                    mons.push(m.clone());
                }
            }
            cols.push(c);
        }
    }
    let rows: Vec<Vec<Rat>> = mons.iter().map(|m| cols.iter().map(|c| c.coeff(m)).collect()).collect();
    n * n - Matrix::from_rows(rows).rank()
}

/// Degree 0 and 1 normal forms and the pull-back obstruction.
fn criterion_7() -> Outcome {
    let ctx = frontend::Context::new(4);
    let pencil = frontend::parse_form("z0*dz1 - z1*dz0", &ctx).map_err(|e| e.to_string())?;
    let ta = foliation::tangent_linear_algebra(&pencil, TangentMode::AnnihilateOmega).map_err(|e| e.to_string())?;
    let oracle = pencil_oracle();
    ensure!(ta.dim() == 9 && oracle == 9, "pencil tangent algebra {} (oracle {oracle})", ta.dim());

    let cat = load("cpn_low");
    let mut families = 0;
    for e in &cat.entries {
        if !(e.id.starts_with("QL2") || e.id.starts_with("pullback") || e.id.starts_with("pencil")) {
            continue;
        }
        let r = catalog::verify_entry(e);
        ensure!(r.status == EntryStatus::Pass, "{}", summarize(&r));
        families += 1;
    }
    ensure!(families >= 8, "only {families} normal-form entries");

    let e = entry(&cat, "obstruction-cp3");
    let r = catalog::verify_entry(e);
    ensure!(r.status == EntryStatus::Pass, "{}", summarize(&r));
    let EntryKind::Obstruction(s) = &e.kind else {
        return Err("obstruction-cp3 has the wrong kind".into());
    };
    let w: KForm =
        frontend::parse_form(&s.form, &e.context(&s.instantiations[0]).unwrap()).map_err(|e| e.to_string())?;
    ensure!(foliation::degree(&w).ok() == Some(2), "obstruction form is not of degree 2");
    let t = foliation::tangent_linear_algebra(&w, TangentMode::AnnihilateOmega).map_err(|e| e.to_string())?;
    let fields: Vec<VField> = t.basis().iter().map(|b| b.field().clone()).collect();
    // pointwise rank of the tangent fields modulo R
    let rank = foliation::generic_dimension(&fields) - 1;
    ensure!(rank < e.n - 1, "tangent rank {rank} modulo R is not below {}", e.n - 1);
    Ok(format!("pencil dim 9, {families} normal-form entries, obstruction rank {rank} < {}", e.n - 1))
}

/// Cubic types, the Q1/Q2 degeneration and the codimension-p forms.
fn criterion_8() -> Outcome {
    let cubics = load("cubic_types");
    ensure!(cubics.entries.len() == 6, "{} cubic types", cubics.entries.len());
    for (k, e) in cubics.entries.iter().enumerate() {
        let r = catalog::verify_entry(e);
        ensure!(r.status == EntryStatus::Pass, "{}", summarize(&r));
        ensure!(has_check(&r, "annihilator-dim"), "{}: no annihilator check", e.id);
        if k >= 3 {
            ensure!(has_check(&r, "listed-fields"), "{}: listed fields not checked", e.id);
        }
    }

    let qcat = load("cp4_q1q2");
    let e = entry(&qcat, "Q1/Q2");
    let r = catalog::verify_entry(e);
    ensure!(r.status == EntryStatus::Pass, "{}", summarize(&r));
    ensure!(has_check(&r, "extra:rank-drop"), "Q1/Q2: rank drop not checked");
    let EntryKind::Foliation(f) = &e.kind else {
        return Err("Q1/Q2 has the wrong kind".into());
    };
    let b = &f.verbatim;
    for inst in &b.instantiations {
        let ctx = e.context_for(inst, &b.params).unwrap();
        let q = |k: usize| frontend::parse_poly(&b.integral.log[k].0, &ctx).unwrap();
        let (q1, q2) = (q(0), q(1));
        for g in inst.generators.as_ref().or(b.generators.as_ref()).into_iter().flatten() {
            let x = frontend::parse_field(g, &ctx).unwrap();
            let cross = &(&x.apply(&q1) * &q2) - &(&q1 * &x.apply(&q2));
            ensure!(cross.is_zero(), "X(Q1)Q2 - Q1X(Q2) = {cross} for {g} at {}", inst.describe());
        }
    }

    let codim = load("codim_p");
    let mut pn = Vec::new();
    for e in &codim.entries {
        let EntryKind::CodimP(s) = &e.kind else { continue };
        let r = catalog::verify_entry(e);
        ensure!(r.status == EntryStatus::Pass, "{}", summarize(&r));
        pn.push((s.p, e.n));
    }
    pn.sort();
    ensure!(pn == [(1, 3), (2, 4), (3, 4)], "codimension-p cases {pn:?}");
    Ok("6 cubic types, Q1/Q2, codim (p,n) in {(1,3),(2,4),(3,4)}".into())
}

fn main() {
    let criteria: [(usize, fn() -> Outcome); 8] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
    ];
    let mut failed = 0;
    for (k, f) in criteria {
        let out = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panic: {}", msg.unwrap_or_default()))
        });
        match out {
            Ok(detail) => println!("criterion {k}: PASS  {detail}"),
            Err(why) => {
                failed += 1;
                println!("criterion {k}: FAIL  {why}");
            }
        }
    }
    println!("acceptance: {} of 8 criteria pass", 8 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
