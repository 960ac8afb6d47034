//! Exact rational numbers and sparse multivariate polynomials.

mod gcd;
mod matrix;
mod poly;
mod rat;

pub use gcd::{gcd, gcd_many};
pub use matrix::Matrix;
pub(crate) use poly::var_name;
pub use poly::{Monomial, Poly};
pub use rat::{frac, parse_rat, rat, to_i64, Rat};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SymError {
    #[error("variable count mismatch: {left} vs {right}")]
    VarCountMismatch { left: usize, right: usize },
    #[error("variable index {index} out of range for {nvars} variables")]
    IndexOutOfRange { index: usize, nvars: usize },
    #[error("point has {got} coordinates, expected {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("not divisible")]
    NotDivisible,
    #[error("cannot homogenize with z{var} to degree {degree}")]
    NotHomogenizable { var: usize, degree: u32 },
    #[error("malformed rational {0:?}")]
    BadRational(String),
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: usize, i: usize) -> Poly {
        Poly::var(n, i)
    }

    fn gn() -> Poly {
        // z1^2 z3 + z1 z2 z4 + z2^2 z5 in six variables
        let v = |i| z(6, i);
        &(&(&v(1) * &v(1)) * &v(3)) + &(&(&(&v(1) * &v(2)) * &v(4)) + &(&(&v(2) * &v(2)) * &v(5)))
    }

    #[test]
    fn difference_of_squares() {
        let (a, b) = (z(2, 0), z(2, 1));
        let p = &(&a + &b) * &(&a - &b);
        assert_eq!(p.to_string(), "z0^2 - z1^2");
        assert!((&p + &(-&p)).is_zero());
    }

    #[test]
    fn gordan_noether_rendering_and_degree() {
        let p = gn();
        assert_eq!(p.to_string(), "z1^2*z3 + z1*z2*z4 + z2^2*z5");
        assert_eq!(p.is_homogeneous(), Some(3));
        assert_eq!(p.partial(1).unwrap().to_string(), "2*z1*z3 + z2*z4");
        assert!(gn().partial(5).unwrap().partial(5).unwrap().is_zero());
        assert!(p.partial(6).is_err());
    }

    #[test]
    fn partial_simple() {
        let p = z(1, 0).pow(3);
        assert_eq!(p.d(0).to_string(), "3*z0^2");
        let q = &z(6, 1).pow(2) * &z(6, 3);
        assert!(q.d(5).is_zero());
    }

    #[test]
    fn exact_division() {
        let (a, b) = (z(2, 0), z(2, 1));
        let p = &(&a * &a) - &(&b * &b);
        assert_eq!(p.exact_div(&(&a - &b)).unwrap().to_string(), "z0 + z1");
        let num = &(&a * &b) * &(&a - &b);
        let den = &a * &(&a - &b);
        assert_eq!(num.exact_div(&den).unwrap(), b);
        assert_eq!((&a * &a).exact_div(&b), Err(SymError::NotDivisible));
        assert_eq!(a.exact_div(&Poly::zero(2)), Err(SymError::DivisionByZero));
    }

    #[test]
    fn gcd_examples() {
        let (a, b) = (z(2, 0), z(2, 1));
        let p = &(&a * &b) * &(&a - &b);
        let q = &a * &(&a - &b);
        assert_eq!(gcd(&p, &q).to_string(), "z0^2 - z0*z1");
        let p3 = p.scale(&frac(-3, 2));
        assert_eq!(gcd(&p3, &Poly::zero(2)), p.monic());
        let one = Poly::one(1);
        let x = z(1, 0);
        assert_eq!(gcd(&(&x + &one), &(&x - &one)), one);
    }

    #[test]
    fn gcd_multivariate_cofactors() {
        let n = 4;
        let v: Vec<Poly> = (0..n).map(|i| z(n, i)).collect();
        let common = &(&(&v[0] * &v[3]) - &(&v[1] * &v[2])) + &v[2].pow(2);
        let f = &(&v[0] + &v[1].scale(&rat(2))) * &v[3];
        let g = &v[2].pow(2) - &(&v[1] * &v[3]);
        let p = &common * &f;
        let q = &common * &g;
        let d = gcd(&p, &q);
        assert_eq!(d, common.monic());
        let (pf, qf) = (p.exact_div(&d).unwrap(), q.exact_div(&d).unwrap());
        assert!(gcd(&pf, &qf).is_constant());
    }

    #[test]
    fn eval_and_homogeneity() {
        let p = &z(2, 0).pow(2) + &z(2, 1);
        assert_eq!(p.eval(&[rat(2), rat(3)]).unwrap(), rat(7));
        assert_eq!(p.is_homogeneous(), None);
        assert!(p.eval(&[rat(1)]).is_err());
    }

    #[test]
    fn mismatched_counts() {
        assert!(z(2, 0).try_add(&z(3, 0)).is_err());
        assert!(z(2, 0).try_mul(&z(3, 0)).is_err());
    }

    #[test]
    fn compose_and_chart() {
        let n = 3;
        let p = &z(n, 0).pow(2) * &z(n, 2);
        let q = p.compose(&[z(n, 1), z(n, 0), &z(n, 2) + &Poly::one(n)]).unwrap();
        assert_eq!(q.to_string(), "z1^2*z2 + z1^2");
        let c = p.set_var(2, &rat(1));
        assert_eq!(c.to_string(), "z0^2");
        assert_eq!(c.homogenize(2, 3).unwrap(), p);
    }
}
