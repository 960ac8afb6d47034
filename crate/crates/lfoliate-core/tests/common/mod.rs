//! Strategies and property bodies shared by the property suite and the
//! acceptance harness.
#![allow(dead_code)]

use lfoliate_core::catalog::{self, Block, CatalogEntry, EntryKind};
use lfoliate_core::exterior::{KForm, LinField, VField};
use lfoliate_core::foliation::{self, FoliationForm, LogExpIntegral};
use lfoliate_core::frontend::{self, Context};
use lfoliate_core::invariants;
use lfoliate_core::symcore::{frac, gcd, rat, Matrix, Monomial, Poly, Rat};
use proptest::prelude::*;
use proptest::sample::subsequence;

pub type Prop = Result<(), TestCaseError>;

pub fn arb_rat() -> impl Strategy<Value = Rat> {
    (-6i64..=6, 1i64..=3).prop_map(|(n, d)| frac(n, d))
}

pub fn arb_poly(nvars: usize, max_exp: u32, max_terms: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec((prop::collection::vec(0..=max_exp, nvars), arb_rat()), 0..=max_terms)
        .prop_map(move |ts| Poly::from_terms(nvars, ts.into_iter().map(|(e, c)| (Monomial::from_exps(e), c))))
}

pub fn arb_nonzero_poly(nvars: usize, max_exp: u32, max_terms: usize) -> impl Strategy<Value = Poly> {
    arb_poly(nvars, max_exp, max_terms).prop_filter("nonzero", |p| !p.is_zero())
}

/// Homogeneous of the given degree.
pub fn arb_form_poly(nvars: usize, deg: u32) -> impl Strategy<Value = Poly> {
    prop::collection::vec((prop::collection::vec(0..=deg, nvars), arb_rat()), 1..=4).prop_map(move |ts| {
        Poly::from_terms(
            nvars,
            ts.into_iter().filter(|(e, _)| e.iter().sum::<u32>() == deg).map(|(e, c)| (Monomial::from_exps(e), c)),
        )
    })
}

pub fn arb_kform(nvars: usize, deg: usize) -> impl Strategy<Value = KForm> {
    let idx: Vec<usize> = (0..nvars).collect();
    prop::collection::vec((subsequence(idx, deg), arb_poly(nvars, 2, 3)), 0..=3)
        .prop_map(move |ts| KForm::from_terms(nvars, deg, ts))
}

pub fn arb_any_kform(nvars: usize) -> impl Strategy<Value = KForm> {
    (0..=nvars).prop_flat_map(move |k| arb_kform(nvars, k))
}

pub fn arb_field(nvars: usize) -> impl Strategy<Value = VField> {
    prop::collection::vec(arb_poly(nvars, 2, 2), nvars).prop_map(|c| VField::new(c).expect("sized"))
}

pub fn arb_matrix(n: usize) -> impl Strategy<Value = Matrix> {
    prop::collection::vec(-3i64..=3, n * n).prop_map(move |v| Matrix::from_flat(n, v.into_iter().map(rat).collect()))
}

pub fn arb_linfield(n: usize) -> impl Strategy<Value = LinField> {
    arb_matrix(n).prop_map(LinField::from_matrix)
}

/// Commuting diagonal pair or an arbitrary pair of linear fields on C^4.
pub fn arb_field_pair() -> impl Strategy<Value = (LinField, LinField)> {
    let diag = (prop::collection::vec(-3i64..=3, 4), prop::collection::vec(-3i64..=3, 4)).prop_map(|(a, b)| {
        let d = |v: Vec<i64>| {
            let mut m = Matrix::zeros(4, 4);
            for (i, x) in v.into_iter().enumerate() {
                m[(i, i)] = rat(x);
            }
            LinField::from_matrix(m)
        };
        (d(a), d(b))
    });
    prop_oneof![diag, (arb_linfield(4), arb_linfield(4))]
}

fn sign(a: usize, b: usize) -> Rat {
    rat(if a * b % 2 == 0 { 1 } else { -1 })
}

fn kadd(a: &KForm, b: &KForm) -> KForm {
    a.try_add(b).expect("same shape")
}

pub fn d_squared(w: KForm) -> Prop {
    prop_assert!(w.ext_d().ext_d().is_zero());
    Ok(())
}

pub fn wedge_anticommutes(a: KForm, b: KForm) -> Prop {
    let ab = a.wedge(&b).unwrap();
    let ba = b.wedge(&a).unwrap().scale(&sign(a.degree(), b.degree()));
    prop_assert_eq!(ab, ba);
    Ok(())
}

/// `i_X (a ^ b) = i_X a ^ b + (-1)^p a ^ i_X b`.
pub fn interior_antiderivation(x: VField, a: KForm, b: KForm) -> Prop {
    prop_assume!(a.degree() > 0 || b.degree() > 0);
    let lhs = a.wedge(&b).unwrap().interior(&x).unwrap();
    let mut rhs = KForm::zero(a.nvars(), (a.degree() + b.degree()).saturating_sub(1));
    if a.degree() > 0 {
        rhs = kadd(&rhs, &a.interior(&x).unwrap().wedge(&b).unwrap());
    }
    if b.degree() > 0 {
        let t = a.wedge(&b.interior(&x).unwrap()).unwrap().scale(&sign(a.degree(), 1));
        rhs = kadd(&rhs, &t);
    }
    prop_assert_eq!(lhs, rhs);
    Ok(())
}

/// `L_X d = d L_X`.
pub fn cartan_naturality(x: VField, w: KForm) -> Prop {
    prop_assume!(w.degree() < w.nvars());
    let lhs = w.ext_d().lie_derivative(&x).unwrap();
    let rhs = w.lie_derivative(&x).unwrap().ext_d();
    prop_assert_eq!(lhs, rhs);
    Ok(())
}

pub fn jacobi_fields(x: VField, y: VField, z: VField) -> Prop {
    let b = |p: &VField, q: &VField| p.bracket(q).unwrap();
    let s = b(&x, &b(&y, &z)).add(&b(&y, &b(&z, &x))).add(&b(&z, &b(&x, &y)));
    prop_assert!(s.is_zero());
    Ok(())
}

/// Jacobi for linear fields, and agreement of the matrix bracket with the
/// bracket of the underlying fields.
pub fn jacobi_linear(x: LinField, y: LinField, z: LinField) -> Prop {
    let s = x.bracket(&y.bracket(&z)).add(&y.bracket(&z.bracket(&x))).add(&z.bracket(&x.bracket(&y)));
    prop_assert!(s.is_zero());
    let m = x.bracket(&y);
    prop_assert_eq!(m.field(), &x.field().bracket(y.field()).unwrap());
    Ok(())
}

/// `i_R dw = (nu + 2) w` for a reduced form that descends.
pub fn euler_identity(f: &FoliationForm) -> Prop {
    let w = &f.omega;
    let r = VField::radial(w.nvars());
    prop_assert!(w.interior(&r).unwrap().is_zero(), "form does not descend");
    let lhs = w.ext_d().interior(&r).unwrap();
    prop_assert_eq!(lhs, w.scale(&rat(f.nu + 2)));
    Ok(())
}

/// Euler identity and `nu <= n - 1` for `i_R i_X i_Y vol` on C^4.
pub fn random_defining_form(x: LinField, y: LinField) -> Prop {
    let raw = foliation::contract_volume(4, &[VField::radial(4), x.field().clone(), y.field().clone()]);
    prop_assume!(raw.is_ok());
    let f = FoliationForm::from_raw(&raw.unwrap()).unwrap();
    prop_assert!(f.nu <= 2, "degree {} above n - 1", f.nu);
    euler_identity(&f)
}

pub fn gcd_roundtrip(a: Poly, b: Poly, c: Poly) -> Prop {
    let ac = &a * &c;
    let bc = &b * &c;
    // gcd(0, 0) = 0 divides nothing
    prop_assume!(!(ac.is_zero() && bc.is_zero()));
    let g = gcd(&ac, &bc);
    prop_assert!(g.exact_div(&c.monic()).is_ok(), "common factor lost: gcd {g}, c {c}");
    prop_assert!(ac.exact_div(&g).is_ok());
    prop_assert!(bc.exact_div(&g).is_ok());
    prop_assert_eq!(ac.exact_div(&c).unwrap(), a.clone());
    prop_assert_eq!(gcd(&a, &b), gcd(&b, &a));
    Ok(())
}

#[allow(clippy::eq_op)]
pub fn ring_axioms(a: Poly, b: Poly, c: Poly) -> Prop {
    prop_assert_eq!(&a + &b, &b + &a);
    prop_assert_eq!(&a * &b, &b * &a);
    prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
    prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
    prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
    prop_assert!((&a - &a).is_zero());
    prop_assert_eq!(&a * &Poly::one(a.nvars()), a.clone());
    Ok(())
}

/// Cubics in two linear forms of three variables have dependent partials,
/// so both criteria must hold; for arbitrary cubics only the implication
/// is checked.
pub fn arb_cubic() -> impl Strategy<Value = Poly> {
    let degenerate = (arb_form_poly(2, 3), arb_form_poly(3, 1), arb_form_poly(3, 1))
        .prop_map(|(p, l1, l2)| p.compose(&[l1, l2]).expect("sized"));
    prop_oneof![degenerate, arb_form_poly(3, 3)]
}

pub fn sylvester_implies_hesse(p: Poly) -> Prop {
    if invariants::sylvester_test(&p) {
        prop_assert!(invariants::hesse_test(&p), "{p}");
    }
    Ok(())
}

pub fn poly_roundtrip(p: Poly) -> Prop {
    let ctx = Context::new(p.nvars());
    prop_assert_eq!(frontend::parse_poly(&p.render(0), &ctx).unwrap(), p.clone());
    prop_assert_eq!(frontend::parse_poly(&p.to_string(), &ctx).unwrap(), p);
    Ok(())
}

pub fn field_roundtrip(x: VField) -> Prop {
    let ctx = Context::new(x.nvars());
    prop_assert_eq!(frontend::parse_field(&x.render(0), &ctx).unwrap(), x);
    Ok(())
}

pub fn form_roundtrip(w: KForm) -> Prop {
    prop_assume!(!w.is_zero());
    let ctx = Context::new(w.nvars());
    prop_assert_eq!(frontend::parse_form(&w.render(0), &ctx).unwrap(), w);
    Ok(())
}

pub fn bundled() -> Vec<catalog::Catalog> {
    catalog::load_dir(catalog::bundled_catalog_dir()).expect("bundled catalogs load")
}

/// Block whose instantiations are expected to satisfy every check.
fn good_block(e: &CatalogEntry) -> Option<&Block> {
    match &e.kind {
        EntryKind::Foliation(f) => Some(f.correction.as_ref().map_or(&f.verbatim, |(b, _)| b)),
        _ => None,
    }
}

pub fn build_integral(block: &Block, ctx: &Context) -> LogExpIntegral {
    let t = &block.integral;
    let logs = t
        .log
        .iter()
        .map(|(p, e)| (frontend::parse_poly(p, ctx).unwrap(), frontend::parse_rat(e, ctx).unwrap()))
        .collect();
    let exp = t.exp_num.as_ref().map(|h| {
        let k = t.exp_den.as_deref().unwrap_or("1");
        (frontend::parse_poly(h, ctx).unwrap(), frontend::parse_poly(k, ctx).unwrap())
    });
    LogExpIntegral::new(ctx.nvars, logs, exp).unwrap()
}

/// Reduced defining forms of every foliation entry at every instantiation
/// of its passing block, plus the obstruction forms.
pub fn catalog_forms() -> Vec<(String, FoliationForm)> {
    let mut out = Vec::new();
    for cat in bundled() {
        for e in &cat.entries {
            if let Some(b) = good_block(e) {
                for inst in &b.instantiations {
                    let ctx = e.context_for(inst, &b.params).unwrap();
                    let w = build_integral(b, &ctx).cleared_form().unwrap();
                    out.push((format!("{} {}", e.id, inst.describe()), FoliationForm::from_raw(&w).unwrap()));
                }
            }
            if let EntryKind::Obstruction(s) = &e.kind {
                for inst in &s.instantiations {
                    let ctx = e.context(inst).unwrap();
                    let w = frontend::parse_form(&s.form, &ctx).unwrap();
                    out.push((e.id.clone(), FoliationForm::from_raw(&w).unwrap()));
                }
            }
        }
    }
    out
}

/// Every generator string in the bundled catalogs with its parsing context.
pub fn catalog_field_texts() -> Vec<(String, Context)> {
    let mut out = Vec::new();
    for cat in bundled() {
        for e in &cat.entries {
            let blocks: Vec<&Block> = match &e.kind {
                EntryKind::Foliation(f) => {
                    std::iter::once(&f.verbatim).chain(f.correction.as_ref().map(|(b, _)| b)).collect()
                }
                _ => Vec::new(),
            };
            for b in blocks {
                for inst in &b.instantiations {
                    let ctx = e.context_for(inst, &b.params).unwrap();
                    let gens = inst.generators.as_ref().or(b.generators.as_ref());
                    for g in gens.into_iter().flatten() {
                        out.push((g.clone(), ctx.clone()));
                    }
                }
            }
            if let EntryKind::Cubic(s) = &e.kind {
                for inst in &s.instantiations {
                    let ctx = e.context(inst).unwrap();
                    for g in s.fields.iter().flatten() {
                        out.push((g.clone(), ctx.clone()));
                    }
                }
            }
        }
    }
    out
}
