use super::*;
use crate::symcore::{frac, rat};

fn ctx(n: usize) -> Context {
    Context::new(n)
}

#[test]
fn polynomials() {
    let gn = parse_poly("z1^2*z3 + z1*z2*z4 + z2^2*z5", &ctx(6)).unwrap();
    assert_eq!(gn.to_string(), "z1^2*z3 + z1*z2*z4 + z2^2*z5");
    let p = parse_poly("3/2*z0 - (z1 + 1)^2", &ctx(2)).unwrap();
    assert_eq!(p.to_string(), "-z1^2 + 3/2*z0 - 2*z1 - 1");
    // juxtaposition and unicode minus
    assert_eq!(parse_poly("2 z0 z1 \u{2212} z1", &ctx(2)).unwrap().to_string(), "2*z0*z1 - z1");
    assert_eq!(parse_poly("z{10}", &ctx(11)).unwrap(), Poly::var(11, 10));
    assert_eq!(parse_poly("z12", &ctx(13)).unwrap(), Poly::var(13, 12));
}

#[test]
fn parameters_and_first_var() {
    let c = ctx(4).with_param("k", frac(3, 7)).with_param("d", rat(2));
    let p = parse_poly("(k - 1)*z0*z3 + d*z1", &c).unwrap();
    assert_eq!(p.coeff(&crate::symcore::Monomial::from_exps(vec![0, 1, 0, 0])), rat(2));
    let shifted = ctx(3).with_first_var(1);
    assert_eq!(parse_poly("z1 + z3", &shifted).unwrap(), &Poly::var(3, 0) + &Poly::var(3, 2));
    assert_eq!(parse_rat("-a-b", &ctx(1).with_param("a", rat(1)).with_param("b", frac(1, 2))).unwrap(), frac(-3, 2));
}

#[test]
fn fields() {
    let x1 = parse_field("z2 d/dz3 - z1 d/dz4", &ctx(6)).unwrap();
    assert_eq!(x1.to_string(), "(z2)*d/dz3 + (-z1)*d/dz4");
    let y = parse_field("d/dz0*(z1) - d/dz1*z1 + (z0+z1)*d/dz1", &ctx(2)).unwrap();
    assert_eq!(y.to_string(), "(z1)*d/dz0 + (z0)*d/dz1");
    // a parameter called d does not clash with d/dz
    let c = ctx(2).with_param("d", rat(5));
    assert_eq!(parse_field("d*z0*d/dz1", &c).unwrap().to_string(), "(5*z0)*d/dz1");
    assert_eq!(parse_field("0", &ctx(2)).unwrap(), VField::zero(2));
}

#[test]
fn forms() {
    let w = parse_form("2*dz0^dz1 + z2*dz1^dz3", &ctx(4)).unwrap();
    assert_eq!(w.to_string(), "(2)*dz0^dz1 + (z2)*dz1^dz3");
    let v = parse_form("(z0 dz1 - z1 dz0)^dz2", &ctx(3)).unwrap();
    assert_eq!(v.degree(), 2);
    assert_eq!(parse_form(&w.to_string(), &ctx(4)).unwrap(), w);
    assert!(parse_form("dz0^dz0", &ctx(2)).unwrap().is_zero());
}

#[test]
fn integrals() {
    let f = parse_integral("(z0/z1)^1 * exp(z2/z1)", &ctx(3)).unwrap();
    assert_eq!(f.logs().len(), 2);
    assert_eq!(f.exp_part().map(|(h, k)| (h.to_string(), k.to_string())), Some(("z2".into(), "z1".into())));
    let g = parse_integral(
        "(z3^2*z4^2 - 4*z2*z4^3 - 4*z3^3*z5 - 27*z2^2*z5^2 + 18*z2*z3*z4*z5)/z1^4",
        &ctx(5).with_first_var(1),
    )
    .unwrap();
    assert_eq!(g.logs()[1].1, rat(-4));
    assert!(g.is_balanced());
    let c = ctx(4).with_param("k", rat(2));
    let h = parse_integral("z1^k z3^(-k) exp(((k-1)*z0*z3 + z1*z2)/(z1*z3))", &c).unwrap();
    assert_eq!(h.logs(), &[(Poly::var(4, 1), rat(2)), (Poly::var(4, 3), rat(-2))]);
    // round trip through the rendering
    assert_eq!(parse_integral(&h.to_string(), &c).unwrap(), h);
}

#[test]
fn errors_carry_positions() {
    let e = parse_poly("z0 +\n  * z1", &ctx(2)).unwrap_err();
    assert_eq!((e.line, e.col), (2, 3));
    let e = parse_poly("z0^-1", &ctx(2)).unwrap_err();
    assert_eq!(e.kind, ParseErrorKind::NegativeExponent);
    let e = parse_poly("z0 + q", &ctx(2)).unwrap_err();
    assert_eq!(e.kind, ParseErrorKind::UnknownIdent("q".into()));
    assert_eq!((e.line, e.col), (1, 6));
    let e = parse_poly("z5", &ctx(2)).unwrap_err();
    assert!(matches!(e.kind, ParseErrorKind::VarOutOfRange { index: 5, .. }));
    assert_eq!(parse_poly("z0/z1", &ctx(2)).unwrap_err().kind, ParseErrorKind::NonConstantDivisor);
    assert_eq!(parse_poly("z0/0", &ctx(2)).unwrap_err().kind, ParseErrorKind::DivisionByZero);
    assert!(parse_poly("(z0", &ctx(2)).is_err());
    assert!(parse_poly("z0 d/dz1", &ctx(2)).is_err());
    assert!(parse_field("dz0 * d/dz1", &ctx(2)).is_err());
    assert!(parse_poly("exp(z0)", &ctx(2)).is_err());
}
