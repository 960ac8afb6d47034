//! Multivariate gcd over Q: recursive content / primitive-part reduction to a
//! univariate problem in one variable (coefficients are polynomials in the
//! others), solved with the subresultant PRS.

use num_traits::One;

use super::poly::{Monomial, Poly};

/// Gcd normalized to graded-lex leading coefficient 1. `gcd(p, 0)` is `p`
/// normalized; `gcd(0, 0)` is 0.
pub fn gcd(p: &Poly, q: &Poly) -> Poly {
    assert_eq!(p.nvars(), q.nvars(), "gcd: variable count mismatch");
    gcd_raw(p, q).monic()
}

/// Gcd of a list, smallest operands first, stopping early at 1.
pub fn gcd_many<'a>(ps: impl IntoIterator<Item = &'a Poly>) -> Option<Poly> {
    let mut v: Vec<&Poly> = ps.into_iter().filter(|p| !p.is_zero()).collect();
    let nv = v.first().map(|p| p.nvars())?;
    v.sort_by_key(|p| (p.num_terms(), p.total_degree()));
    let mut g = v[0].clone();
    for p in &v[1..] {
        if g.is_constant() {
            break;
        }
        g = gcd_raw(&g, p);
    }
    if g.is_constant() {
        return Some(Poly::one(nv));
    }
    Some(g.monic())
}

fn gcd_raw(p: &Poly, q: &Poly) -> Poly {
    let nv = p.nvars();
    if p.is_zero() {
        return q.clone();
    }
    if q.is_zero() {
        return p.clone();
    }
    if p.is_constant() || q.is_constant() {
        return Poly::one(nv);
    }
    if p.num_terms() == 1 {
        return monomial_gcd(p, q);
    }
    if q.num_terms() == 1 {
        return monomial_gcd(q, p);
    }
    let (sp, sq) = (p.support(), q.support());
    // A variable missing from one side can only divide the gcd through the
    // content of the other side with respect to it.
    if let Some(&v) = sp.iter().find(|v| !sq.contains(v)) {
        return gcd_raw(&content(p, v), q);
    }
    if let Some(&v) = sq.iter().find(|v| !sp.contains(v)) {
        return gcd_raw(p, &content(q, v));
    }
    let v = sp[0];
    let cp = content(p, v);
    let cq = content(q, v);
    let c = gcd_raw(&cp, &cq);
    let pp = to_uni(&p.exact_div(&cp).expect("content divides"), v);
    let qq = to_uni(&q.exact_div(&cq).expect("content divides"), v);
    let g = subresultant(pp, qq);
    &c * &from_uni(&g, v)
}

/// For a single term `c*x^a`: the monomial `x^b` with `b_i = min(a_i, min exponent of x_i in q)`.
fn monomial_gcd(m: &Poly, q: &Poly) -> Poly {
    let nv = m.nvars();
    let (mono, _) = m.leading().expect("nonzero");
    let mut e: Vec<u32> = mono.exps().to_vec();
    for (t, _) in q.terms() {
        for (a, &b) in e.iter_mut().zip(t.exps()) {
            *a = (*a).min(b);
        }
    }
    Poly::term(nv, Monomial::from_exps(e), num_traits::One::one())
}

/// Gcd of the coefficients of `p` viewed as a polynomial in `z_v`.
fn content(p: &Poly, v: usize) -> Poly {
    let coeffs = to_uni(p, v);
    let mut cs: Vec<&Poly> = coeffs.iter().filter(|c| !c.is_zero()).collect();
    cs.sort_by_key(|c| c.num_terms());
    let mut g = cs[0].clone();
    for c in &cs[1..] {
        if g.is_constant() {
            break;
        }
        g = gcd_raw(&g, c);
    }
    if g.is_constant() {
        Poly::one(p.nvars())
    } else {
        g
    }
}

/// Coefficients of `z_v^k`, index k, each free of `z_v`.
fn to_uni(p: &Poly, v: usize) -> Vec<Poly> {
    let nv = p.nvars();
    let mut out = vec![Poly::zero(nv); p.degree_in(v) as usize + 1];
    let mut buckets: Vec<Vec<(Monomial, num_rational::BigRational)>> = vec![Vec::new(); out.len()];
    for (m, c) in p.terms() {
        let k = m.exps()[v] as usize;
        let mut e = m.exps().to_vec();
        e[v] = 0;
        buckets[k].push((Monomial::from_exps(e), c.clone()));
    }
    for (k, b) in buckets.into_iter().enumerate() {
        out[k] = Poly::from_terms(nv, b);
    }
    out
}

fn from_uni(u: &[Poly], v: usize) -> Poly {
    let nv = u[0].nvars();
    let mut acc = Poly::zero(nv);
    for (k, c) in u.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let mut e = vec![0u32; nv];
        e[v] = k as u32;
        acc = &acc + &c.mul_term(&Monomial::from_exps(e), &One::one());
    }
    acc
}

fn deg(u: &[Poly]) -> Option<usize> {
    u.iter().rposition(|c| !c.is_zero())
}

fn trim(mut u: Vec<Poly>) -> Vec<Poly> {
    let d = deg(&u).map(|d| d + 1).unwrap_or(1);
    u.truncate(d);
    u
}

/// Pseudo-remainder of `a` by `b` (`lc(b)^(deg a - deg b + 1) * a mod b`).
fn prem(a: &[Poly], b: &[Poly]) -> Vec<Poly> {
    let db = deg(b).expect("nonzero divisor");
    let lb = &b[db];
    let mut r = a.to_vec();
    let mut e = deg(a).expect("nonzero") as i64 - db as i64 + 1;
    while let Some(dr) = deg(&r) {
        if dr < db {
            break;
        }
        let lr = r[dr].clone();
        let shift = dr - db;
        for c in r.iter_mut() {
            *c = &*c * lb;
        }
        for (i, bc) in b.iter().enumerate() {
            if !bc.is_zero() {
                r[i + shift] = &r[i + shift] - &(&lr * bc);
            }
        }
        e -= 1;
        r = trim(r);
    }
    if e > 0 {
        let f = lb.pow(e as u32);
        for c in r.iter_mut() {
            *c = &*c * &f;
        }
    }
    trim(r)
}

/// Gcd of two polynomials that are primitive in the main variable.
fn subresultant(a: Vec<Poly>, b: Vec<Poly>) -> Vec<Poly> {
    let nv = a[0].nvars();
    let (mut a, mut b) = if deg(&a) >= deg(&b) { (a, b) } else { (b, a) };
    let mut g = Poly::one(nv);
    let mut h = Poly::one(nv);
    loop {
        let da = deg(&a).expect("nonzero");
        let db = deg(&b).expect("nonzero");
        if db == 0 {
            return vec![Poly::one(nv)];
        }
        let delta = (da - db) as u32;
        let r = prem(&a, &b);
        let Some(dr) = deg(&r) else {
            return primitive(b);
        };
        if dr == 0 {
            return vec![Poly::one(nv)];
        }
        let div = &g * &h.pow(delta);
        a = b;
        b = r.iter().map(|c| c.exact_div(&div).expect("subresultant division")).collect();
        g = a[deg(&a).expect("nonzero")].clone();
        h = match delta {
            0 => h,
            1 => g.clone(),
            _ => g.pow(delta).exact_div(&h.pow(delta - 1)).expect("subresultant h update"),
        };
    }
}

fn primitive(u: Vec<Poly>) -> Vec<Poly> {
    let nz: Vec<&Poly> = u.iter().filter(|c| !c.is_zero()).collect();
    let mut g = nz[0].clone();
    for c in &nz[1..] {
        if g.is_constant() {
            break;
        }
        g = gcd_raw(&g, c);
    }
    if g.is_constant() {
        return u;
    }
    u.iter().map(|c| c.exact_div(&g).expect("content divides")).collect()
}
