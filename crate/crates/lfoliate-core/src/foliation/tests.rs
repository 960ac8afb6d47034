use super::*;
use crate::symcore::{frac, rat};

fn z(n: usize, i: usize) -> Poly {
    Poly::var(n, i)
}

/// Linear field from `(c, j, i)` triples meaning `c z_j d/dz_i`.
fn lin(n: usize, parts: &[(Rat, usize, usize)]) -> VField {
    let mut m = Matrix::zeros(n, n);
    for (c, j, i) in parts {
        m[(*i, *j)] += c.clone();
    }
    VField::from_matrix(&m)
}

fn pencil(n: usize) -> KForm {
    let mut c = vec![Poly::zero(n); n];
    c[0] = -z(n, 1);
    c[1] = z(n, 0);
    KForm::one_form(c)
}

fn log_int(n: usize, logs: &[(Poly, Rat)], exp: Option<(Poly, Poly)>) -> LogExpIntegral {
    LogExpIntegral::new(n, logs.to_vec(), exp).unwrap()
}

#[test]
fn pencil_basics() {
    let w = pencil(4);
    assert!(check_descent(&w));
    assert!(check_integrable(&w));
    assert_eq!(degree(&w).unwrap(), 0);
    assert!(!check_descent(&KForm::dz(4, 0)));
    assert!(proportional(&w, &w.scale(&rat(5))));
    assert!(!proportional(&KForm::dz(4, 0), &KForm::dz(4, 1)));
    assert!(integrating_factor_check(&w, &z(4, 1).pow(2)));
    assert!(!integrating_factor_check(&w, &z(4, 2)));
}

#[test]
fn tangent_algebra_dimensions() {
    let s = tangent_linear_algebra(&pencil(4), TangentMode::AnnihilateOmega).unwrap();
    assert_eq!(s.dim(), 9);
    assert!(s.contains(&LinField::radial(4)));
    // n = 3: every X with vanishing first component
    let s = tangent_linear_algebra(&KForm::dz(4, 0), TangentMode::AnnihilateOmega).unwrap();
    assert_eq!(s.dim(), 12);
    // d(dz0) = 0 is killed by everything
    let s = tangent_linear_algebra(&KForm::dz(4, 0), TangentMode::AnnihilateDOmega).unwrap();
    assert_eq!(s.dim(), 16);
}

#[test]
fn point_ranks() {
    let n = 4;
    let r = VField::radial(n);
    assert_eq!(pointwise_dimension(std::slice::from_ref(&r), &[rat(1), rat(2), rat(3), rat(5)]), 1);
    assert_eq!(pointwise_dimension(&[r.clone(), lin(n, &[(rat(1), 1, 0)])], &vec![rat(0); 4]), 0);
    let pts = generic_points(5);
    assert_eq!(pts[0], [1, 2, 3, 5, 7].map(rat).to_vec());
    assert_eq!(pts[1], [1, -2, 3, -5, 7].map(rat).to_vec());
    assert_eq!(pts[2], [2, 3, 5, 7, 11].map(rat).to_vec());
}

#[test]
fn gordan_noether_rank_and_tangency() {
    let n = 6;
    let one = rat(1);
    let fs = vec![
        lin(n, &[(one.clone(), 2, 3), (-one.clone(), 1, 4)]),
        lin(n, &[(one.clone(), 2, 4), (-one.clone(), 1, 5)]),
        lin(n, &[(one.clone(), 1, 1), (rat(-2), 3, 3), (rat(-1), 4, 4)]),
        lin(n, &[(one.clone(), 2, 2), (rat(-1), 4, 4), (rat(-2), 5, 5)]),
    ];
    assert_eq!(pointwise_dimension(&fs, &vec![rat(1); 6]), 4);
    assert_eq!(generic_dimension(&fs), 4);
    // the cleared d(P / z0^3) on C^6
    let p = &(&(&z(n, 1).pow(2) * &z(n, 3)) + &(&(&z(n, 1) * &z(n, 2)) * &z(n, 4))) + &(&z(n, 2).pow(2) * &z(n, 5));
    let f = log_int(n, &[(p, rat(1)), (z(n, 0), rat(-3))], None);
    let w = integral_to_form(&f).unwrap();
    assert!(check_descent(&w));
    assert_eq!(degree(&w).unwrap(), 2);
    let s = tangent_linear_algebra(&w, TangentMode::AnnihilateOmega).unwrap();
    for x in &fs {
        assert!(s.contains(&LinField::try_from(x.clone()).unwrap()));
    }
    assert!(verify_first_integral(&f, &fs).unwrap());
}

#[test]
fn ab_ii_closed_form() {
    // fields of the kappa family; expected form quoted coefficientwise
    let n = 4;
    for k in [frac(3, 7), rat(2), rat(-1)] {
        let x = lin(n, &[(rat(1), 1, 0), (rat(1), 2, 2), (rat(1), 3, 2), (rat(1), 3, 3)]);
        let y = lin(n, &[(rat(1), 2, 2), (k.clone(), 3, 2), (rat(1), 3, 3)]);
        let f = defining_form(&[x.clone(), y.clone()]).unwrap();
        let one = Poly::one(n);
        let kc = Poly::constant(n, k.clone());
        let z3sq = z(n, 3).pow(2);
        let z1sq = z(n, 1).pow(2);
        let expect = KForm::one_form(vec![
            &(&(&one - &kc) * &z(n, 1)) * &z3sq,
            &(&(&(&kc - &one) * &z(n, 0)) - &(&kc * &z(n, 1))) * &z3sq,
            -(&z1sq * &z(n, 3)),
            &(&z(n, 2) + &(&kc * &z(n, 3))) * &z1sq,
        ]);
        assert!(proportional(&f.omega, &expect), "{}", f.omega);
        assert_eq!(f.nu, 2);
        let fi = log_int(
            n,
            &[(z(n, 1), k.clone()), (z(n, 3), -k.clone())],
            Some((&(&kc - &one) * &(&z(n, 0) * &z(n, 3)) + &z(n, 1) * &z(n, 2), &z(n, 1) * &z(n, 3))),
        );
        assert!(verify_first_integral(&fi, &[VField::radial(n), x, y]).unwrap());
        assert!(proportional(&integral_to_form(&fi).unwrap(), &f.omega));
    }
}

#[test]
fn ab_v_kappa_zero() {
    let n = 4;
    let x = lin(n, &[(rat(1), 1, 0), (rat(1), 2, 1), (rat(1), 3, 2)]);
    let y = lin(n, &[(rat(1), 2, 0), (rat(1), 3, 1)]);
    let f = defining_form(&[x, y]).unwrap();
    assert_eq!(f.nu, 2);
    assert!(integrating_factor_check(&f.omega, &z(n, 3).pow(4)));
    // every coefficient vanishes on z2 = z3 = 0
    let zero = rat(0);
    for (_, c) in f.omega.terms() {
        assert!(c.set_var(2, &zero).set_var(3, &zero).is_zero());
    }
    assert_eq!(reduce_form(&f.omega).1, Poly::one(n));
    // Euler: i_R dw = (nu + 2) w
    let e = f.omega.ext_d().interior(&VField::radial(n)).unwrap();
    assert_eq!(e, f.omega.scale(&rat(f.nu + 2)));
}

#[test]
fn exceptional_foliation() {
    let n = 4;
    let x = lin(n, &[(rat(3), 0, 0), (rat(2), 1, 1), (rat(1), 2, 2)]);
    let y = lin(n, &[(rat(1), 1, 0), (rat(1), 2, 1), (rat(1), 3, 2)]);
    let f = defining_form(&[x.clone(), y.clone()]).unwrap();
    assert_eq!(f.nu, 2);
    let third = frac(1, 3);
    let half = frac(1, 2);
    let a = &(&(&z(n, 0) * &z(n, 3).pow(2)) - &(&(&z(n, 1) * &z(n, 2)) * &z(n, 3))) + &z(n, 2).pow(3).scale(&third);
    let b = &(&z(n, 1) * &z(n, 3)) - &z(n, 2).pow(2).scale(&half);
    let fi = log_int(n, &[(a, rat(2)), (b, rat(-3))], None);
    assert!(fi.is_balanced());
    assert!(verify_first_integral(&fi, &[VField::radial(n), x, y]).unwrap());
    assert!(proportional(&integral_to_form(&fi).unwrap(), &f.omega));
}

#[test]
fn integrals_to_forms() {
    let n = 3;
    let f = log_int(n, &[(z(n, 0), rat(1)), (z(n, 1), rat(-1))], None);
    assert_eq!(integral_to_form(&f).unwrap(), KForm::one_form(vec![z(n, 1), -z(n, 0), Poly::zero(n)]));
    assert!(verify_first_integral(&f, &[lin(n, &[(rat(1), 0, 0), (rat(1), 1, 1)])]).unwrap());
    assert!(!verify_first_integral(&f, &[lin(n, &[(rat(1), 0, 0)])]).unwrap());
    // (z0/z1) exp(z2/z1): a degree-1 form
    let g = log_int(n, &[(z(n, 0), rat(1)), (z(n, 1), rat(-1))], Some((z(n, 2), z(n, 1))));
    let w = integral_to_form(&g).unwrap();
    assert!(check_descent(&w) && check_integrable(&w));
    assert_eq!(degree(&w).unwrap(), 1);
    // factors sharing z1: (z0 z1) / z1^2 is z0 / z1 again
    let shared = log_int(n, &[(&z(n, 0) * &z(n, 1), rat(1)), (z(n, 1), rat(-2))], None);
    assert!(proportional(&integral_to_form(&shared).unwrap(), &integral_to_form(&f).unwrap()));
    assert!(verify_first_integral(&shared, &[lin(n, &[(rat(1), 0, 0), (rat(1), 1, 1)])]).unwrap());
}

#[test]
fn symmetries() {
    // chart form dC with C = -x0 + x1 x2 - x2^3/3, weights (3, 2, 1)
    let n = 3;
    let c = &(&-z(n, 0) + &(&z(n, 1) * &z(n, 2))) - &z(n, 2).pow(3).scale(&frac(1, 3));
    let dc = KForm::from_poly(c).ext_d();
    let x = lin(n, &[(rat(3), 0, 0), (rat(2), 1, 1), (rat(1), 2, 2)]);
    assert!(symmetry_check(&dc, &x));
    assert!(integrating_factor_check(&dc, &dc.interior(&x).unwrap().as_poly()));
    // tangent fields are not symmetries
    let w = pencil(3);
    assert!(!symmetry_check(&w, &VField::radial(3)));
    // logarithmic form, sum lambda_k mu_k != 0
    let mu = [rat(1), rat(2), rat(-3)];
    let parts: Vec<(KForm, Poly, Rat)> = (0..3).map(|k| (KForm::dz(3, k), z(3, k), mu[k].clone())).collect();
    let comb = assemble_log_combination(&parts).unwrap();
    assert!(comb.descends);
    let lam = lin(3, &[(rat(1), 0, 0), (rat(1), 1, 1), (rat(5), 2, 2)]);
    assert!(symmetry_check(&comb.form, &lam));
    assert!(integrating_factor_check(&comb.form, &comb.form.interior(&lam).unwrap().as_poly()));
}

#[test]
fn log_combinations() {
    // quadratic blocks on {z0, z1} and {z2, z3}
    let n = 4;
    let q1 = &z(n, 0).pow(2) + &z(n, 1).pow(2);
    let q2 = &z(n, 2).pow(2) + &z(n, 3).pow(2);
    let d = |p: &Poly| KForm::from_poly(p.clone()).ext_d();
    let ok = assemble_log_combination(&[(d(&q1), q1.clone(), rat(1)), (d(&q2), q2.clone(), rat(-1))]).unwrap();
    assert!(ok.descends && check_integrable(&ok.form));
    let off = assemble_log_combination(&[(d(&q1), q1.clone(), rat(1)), (d(&q2), q2.clone(), rat(2))]).unwrap();
    assert!(!off.descends);
    let over = assemble_log_combination(&[(d(&q1), q1.clone(), rat(1)), (KForm::dz(n, 1), z(n, 1), rat(-2))]);
    assert_eq!(over, Err(FolError::OverlappingBlocks { first: 0, second: 1 }));
    // mixed: dQ/Q - kappa dz0/z0 with kappa = 2 on z1..z3
    let q = &(&z(n, 1).pow(2) + &z(n, 2).pow(2)) + &z(n, 3).pow(2);
    let mixed = assemble_log_combination(&[(d(&q), q.clone(), rat(1)), (KForm::dz(n, 0), z(n, 0), rat(-2))]).unwrap();
    assert!(mixed.descends);
}

#[test]
fn codim_p_forms() {
    let w = radial_codim_p_form(1, 3).unwrap();
    assert_eq!(w, KForm::one_form(vec![-z(4, 1), z(4, 0), Poly::zero(4), Poly::zero(4)]));
    let w = radial_codim_p_form(2, 4).unwrap();
    assert_eq!(w.degree(), 2);
    for x in codim_p_annihilators(2, 4) {
        assert!(w.interior(&x).unwrap().is_zero(), "{x}");
    }
    for x in codim_p_symmetries(2, 4) {
        assert!(!w.interior(&x).unwrap().is_zero());
        assert_eq!(w.lie_derivative(&x).unwrap(), w.scale(&rat(2)));
    }
    let w1 = radial_codim_p_form(1, 3).unwrap();
    for x in codim_p_symmetries(1, 3) {
        assert!(w1.interior(&x).unwrap().is_zero());
    }
    let s = tangent_linear_algebra(&w, TangentMode::AnnihilateOmega).unwrap();
    assert_eq!(
        s.dim(),
        LieSpan::reduce(
            5,
            &codim_p_annihilators(2, 4).into_iter().map(|x| LinField::try_from(x).unwrap()).collect::<Vec<_>>()
        )
        .unwrap()
        .dim()
    );
    // p = n - 1 is i_{d/dz_n} i_R vol up to sign
    let n = 4;
    let top = radial_codim_p_form(n - 1, n).unwrap();
    let alt = contract_volume(n + 1, &[VField::coordinate(n + 1, n), VField::radial(n + 1)]).unwrap();
    assert!(proportional(&top, &alt));
    assert_eq!(radial_codim_p_form(3, 3), Err(FolError::BadCodimension { p: 3, n: 3 }));
}

#[test]
fn charts_roundtrip() {
    let n = 4;
    let f = defining_form(&[
        lin(n, &[(rat(1), 1, 0), (rat(1), 2, 1), (rat(1), 3, 2)]),
        lin(n, &[(rat(1), 2, 0), (rat(1), 3, 1)]),
    ])
    .unwrap();
    let eta = dehomogenize_form(&f.omega, 3);
    let back = homogenize_one_form(&eta, 3).unwrap();
    assert!(proportional(&back, &f.omega));
    assert_eq!(degree(&back).unwrap(), f.nu);
}

#[test]
fn line_tangencies_match_degree() {
    let n = 4;
    let f = defining_form(&[
        lin(n, &[(rat(3), 0, 0), (rat(2), 1, 1), (rat(1), 2, 2)]),
        lin(n, &[(rat(1), 1, 0), (rat(1), 2, 1), (rat(1), 3, 2)]),
    ])
    .unwrap();
    let a = [1, 2, -3, 5].map(rat);
    let b = [0, 7, 1, -2].map(rat);
    assert_eq!(line_tangency_degree(&f.omega, &a, &b).unwrap(), Some(f.nu as u32));
}

/// Termwise antiderivative in `z_k`.
fn integrate(p: &Poly, k: usize) -> Poly {
    Poly::from_terms(
        p.nvars(),
        p.terms().map(|(m, c)| {
            let mut e = m.exps().to_vec();
            e[k] += 1;
            (Monomial::from_exps(e.clone()), c / rat(e[k] as i64))
        }),
    )
}

#[test]
fn nilpotent_shape() {
    // commuting nilpotents, upper triangular, z3 invariant
    let n = 4;
    let x = lin(n, &[(rat(1), 1, 0), (rat(1), 2, 1), (rat(1), 3, 2)]);
    let y = lin(n, &[(rat(1), 2, 0), (rat(1), 3, 1)]);
    let f = defining_form(&[x.clone(), y.clone()]).unwrap();
    let d = (f.nu + 1) as u32;
    let zn = z(n, n - 1);
    // recover alpha from w_k = -z_n d_k alpha, k < n
    let mut alpha = Poly::zero(n);
    for k in 0..n - 1 {
        let r = &(-f.omega.coeff(&[k])).exact_div(&zn).unwrap() - &alpha.d(k);
        alpha = &alpha + &integrate(&r, k);
    }
    let da = KForm::from_poly(alpha.clone()).ext_d();
    let shape = KForm::dz(n, n - 1).mul_poly(&alpha.scale(&rat(d as i64))).try_sub(&da.mul_poly(&zn)).unwrap();
    assert!(proportional(&shape, &f.omega));
    let fi = log_int(n, &[(alpha, rat(1)), (zn, -rat(d as i64))], None);
    assert!(verify_first_integral(&fi, &[x, y]).unwrap());
}
