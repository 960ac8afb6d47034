use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::exterior::{KForm, VField};
use crate::symcore::{gcd, Poly, Rat};

use super::{reduce_form, FolError};

/// First integral `prod P_k^{l_k} * exp(H/K)`, kept as logarithmic-derivative
/// data; it is never exponentiated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogExpIntegral {
    nvars: usize,
    logs: Vec<(Poly, Rat)>,
    exp: Option<(Poly, Poly)>,
}

impl LogExpIntegral {
    /// Drops zero exponents and merges factors that agree up to a constant.
    pub fn new(nvars: usize, logs: Vec<(Poly, Rat)>, exp: Option<(Poly, Poly)>) -> Result<Self, FolError> {
        let mut merged: Vec<(Poly, Rat)> = Vec::new();
        for (p, l) in logs {
            if p.nvars() != nvars {
                return Err(FolError::VarCountMismatch { left: p.nvars(), right: nvars });
            }
            if p.is_zero() {
                return Err(FolError::ZeroFactor);
            }
            // constant factors do not affect the logarithmic derivative
            if l.is_zero() || p.is_constant() {
                continue;
            }
            let m = p.monic();
            match merged.iter_mut().find(|(q, _)| *q == m) {
                Some((_, e)) => *e += l,
                None => merged.push((m, l)),
            }
        }
        merged.retain(|(_, l)| !l.is_zero());
        let exp = match exp {
            Some((h, k)) if !h.is_zero() => {
                if k.is_zero() {
                    return Err(FolError::ZeroFactor);
                }
                if h.nvars() != nvars || k.nvars() != nvars {
                    return Err(FolError::VarCountMismatch { left: h.nvars().max(k.nvars()), right: nvars });
                }
                Some((h, k))
            }
            _ => None,
        };
        Ok(LogExpIntegral { nvars, logs: merged, exp })
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn logs(&self) -> &[(Poly, Rat)] {
        &self.logs
    }

    pub fn exp_part(&self) -> Option<(&Poly, &Poly)> {
        self.exp.as_ref().map(|(h, k)| (h, k))
    }

    /// `sum l_k deg P_k = 0` and `deg H = deg K` (homogeneous pieces).
    pub fn is_balanced(&self) -> bool {
        let mut s = Rat::zero();
        for (p, l) in &self.logs {
            match p.is_homogeneous() {
                Some(d) => s += l * Rat::from_integer(d.into()),
                None => return false,
            }
        }
        let exp_ok = match &self.exp {
            None => true,
            Some((h, k)) => h.is_homogeneous().is_some() && h.is_homogeneous() == k.is_homogeneous(),
        };
        s.is_zero() && exp_ok
    }

    /// `(sum over l_k > 0 of l_k deg P_k, sum over l_k < 0 of -l_k deg P_k)`.
    pub fn weighted_degrees(&self) -> (Rat, Rat) {
        let mut pos = Rat::zero();
        let mut neg = Rat::zero();
        for (p, l) in &self.logs {
            let d = Rat::from_integer(p.total_degree().unwrap_or(0).into());
            if l.is_positive() {
                pos += l * &d;
            } else {
                neg -= l * &d;
            }
        }
        (pos, neg)
    }

    /// Applies the substitution `z := images` to every polynomial.
    pub fn compose(&self, images: &[Poly]) -> Result<LogExpIntegral, FolError> {
        let logs =
            self.logs.iter().map(|(p, l)| Ok((p.compose(images)?, l.clone()))).collect::<Result<Vec<_>, FolError>>()?;
        let exp = match &self.exp {
            Some((h, k)) => Some((h.compose(images)?, k.compose(images)?)),
            None => None,
        };
        LogExpIntegral::new(images[0].nvars(), logs, exp)
    }

    /// `D * dlog F` with `D = K^2 prod (P_k / gcd(P_k, K^2))`, a polynomial
    /// 1-form, not gcd-reduced. Factors need not be coprime; a shared factor
    /// only makes D larger than necessary.
    pub fn cleared_form(&self) -> Result<KForm, FolError> {
        let n = self.nvars;
        let (k2, hk) = match &self.exp {
            Some((h, k)) => (k * k, Some((h, k))),
            None => (Poly::one(n), None),
        };
        // g_k = gcd(P_k, K^2); D = K^2 prod (P_k / g_k)
        let reduced: Vec<(Poly, Poly)> = self
            .logs
            .iter()
            .map(|(p, _)| {
                let g = if k2.is_constant() { Poly::one(n) } else { gcd(p, &k2) };
                let q = p.exact_div(&g).expect("gcd divides");
                (g, q)
            })
            .collect();
        let mut coeffs = vec![Poly::zero(n); n];
        for (k, (p, l)) in self.logs.iter().enumerate() {
            // D / P_k = (K^2 / g_k) prod_{j != k} P_j / g_j
            let mut f = k2.exact_div(&reduced[k].0).expect("g_k divides K^2");
            for (j, (_, q)) in reduced.iter().enumerate() {
                if j != k {
                    f = &f * q;
                }
            }
            let f = f.scale(l);
            for v in p.support() {
                coeffs[v] = &coeffs[v] + &(&f * &p.d(v));
            }
        }
        if let Some((h, kk)) = hk {
            let mut f = Poly::one(n);
            for (_, q) in &reduced {
                f = &f * q;
            }
            for v in 0..n {
                let t = &(kk * &h.d(v)) - &(h * &kk.d(v));
                if !t.is_zero() {
                    coeffs[v] = &coeffs[v] + &(&f * &t);
                }
            }
        }
        Ok(KForm::one_form(coeffs))
    }

    /// The cleared 1-form of `dlog F`, divided by the gcd of its coefficients.
    pub fn to_form(&self) -> Result<KForm, FolError> {
        let w = self.cleared_form()?;
        if w.is_zero() {
            return Err(FolError::ZeroContraction);
        }
        Ok(reduce_form(&w).0)
    }

    /// Per-field residual `i_X` of the cleared form; all zero iff every field
    /// is tangent to the level sets of F.
    pub fn residuals(&self, fields: &[VField]) -> Result<Vec<Poly>, FolError> {
        let w = self.cleared_form()?;
        fields.iter().map(|x| Ok(w.interior(x)?.as_poly())).collect()
    }

    pub fn render(&self, offset: usize) -> String {
        let mut parts: Vec<String> =
            self.logs
                .iter()
                .map(|(p, l)| {
                    if l.is_one() {
                        format!("({})", p.render(offset))
                    } else {
                        format!("({})^({l})", p.render(offset))
                    }
                })
                .collect();
        if let Some((h, k)) = &self.exp {
            parts.push(format!("exp(({})/({}))", h.render(offset), k.render(offset)));
        }
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join(" * ")
        }
    }
}

impl fmt::Display for LogExpIntegral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(0))
    }
}
