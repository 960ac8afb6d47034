use std::collections::BTreeMap;
use std::fmt;

use num_traits::One;

use crate::symcore::{var_name, Poly, Rat};

use super::{ExtError, VField};

/// Exterior k-form with polynomial coefficients, keyed by strictly increasing
/// index tuples. A 0-form has the single key `[]`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct KForm {
    nvars: usize,
    deg: usize,
    coeffs: BTreeMap<Vec<usize>, Poly>,
}

/// Sorts `idx` in place, returning the permutation sign, or `None` on a repeat.
fn sort_sign(idx: &mut [usize]) -> Option<bool> {
    let mut neg = false;
    for i in 1..idx.len() {
        let mut j = i;
        while j > 0 && idx[j - 1] > idx[j] {
            idx.swap(j - 1, j);
            neg = !neg;
            j -= 1;
        }
    }
    idx.windows(2).all(|w| w[0] < w[1]).then_some(neg)
}

impl KForm {
    pub fn zero(nvars: usize, deg: usize) -> Self {
        KForm { nvars, deg, coeffs: BTreeMap::new() }
    }

    pub fn from_poly(p: Poly) -> Self {
        let mut f = KForm::zero(p.nvars(), 0);
        f.add_term(vec![], p);
        f
    }

    pub fn dz(nvars: usize, i: usize) -> Self {
        let mut f = KForm::zero(nvars, 1);
        f.add_term(vec![i], Poly::one(nvars));
        f
    }

    /// `dz_0 ^ ... ^ dz_{nvars-1}`.
    pub fn volume(nvars: usize) -> Self {
        let mut f = KForm::zero(nvars, nvars);
        f.add_term((0..nvars).collect(), Poly::one(nvars));
        f
    }

    /// 1-form `sum c_i dz_i`.
    pub fn one_form(coeffs: Vec<Poly>) -> Self {
        let n = coeffs.len();
        let mut f = KForm::zero(n, 1);
        for (i, c) in coeffs.into_iter().enumerate() {
            assert_eq!(c.nvars(), n, "1-form coefficient variable count");
            f.add_term(vec![i], c);
        }
        f
    }

    /// Builds from `(indices, coefficient)` pairs in any index order; signs
    /// and repeated indices are resolved here.
    pub fn from_terms(nvars: usize, deg: usize, terms: impl IntoIterator<Item = (Vec<usize>, Poly)>) -> Self {
        let mut f = KForm::zero(nvars, deg);
        for (i, c) in terms {
            assert_eq!(i.len(), deg, "index tuple length");
            f.add_term(i, c);
        }
        f
    }

    /// Adds `c dz_idx` with sign bookkeeping.
    pub fn add_term(&mut self, mut idx: Vec<usize>, c: Poly) {
        debug_assert_eq!(idx.len(), self.deg);
        debug_assert!(idx.iter().all(|&i| i < self.nvars));
        if c.is_zero() {
            return;
        }
        let Some(neg) = sort_sign(&mut idx) else {
            return;
        };
        let c = if neg { -c } else { c };
        use std::collections::btree_map::Entry;
        match self.coeffs.entry(idx) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let s = o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> usize {
        self.deg
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, idx: &[usize]) -> Poly {
        self.coeffs.get(idx).cloned().unwrap_or_else(|| Poly::zero(self.nvars))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<usize>, &Poly)> {
        self.coeffs.iter()
    }

    /// Coefficient vector of a 1-form.
    pub fn one_form_coeffs(&self) -> Vec<Poly> {
        assert_eq!(self.deg, 1, "not a 1-form");
        (0..self.nvars).map(|i| self.coeff(&[i])).collect()
    }

    /// Value of a 0-form.
    pub fn as_poly(&self) -> Poly {
        assert_eq!(self.deg, 0, "not a 0-form");
        self.coeff(&[])
    }

    pub fn map_coeffs(&self, mut f: impl FnMut(&Poly) -> Poly) -> KForm {
        let mut out = KForm::zero(self.nvars, self.deg);
        for (i, c) in &self.coeffs {
            out.add_term(i.clone(), f(c));
        }
        out
    }

    pub fn mul_poly(&self, p: &Poly) -> KForm {
        self.map_coeffs(|c| c * p)
    }

    pub fn scale(&self, r: &Rat) -> KForm {
        self.map_coeffs(|c| c.scale(r))
    }

    fn check(&self, other: &KForm) -> Result<(), ExtError> {
        if self.nvars != other.nvars {
            return Err(ExtError::VarCountMismatch { left: self.nvars, right: other.nvars });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &KForm) -> Result<KForm, ExtError> {
        self.check(other)?;
        if self.deg != other.deg {
            return Err(ExtError::DegreeMismatch { left: self.deg, right: other.deg });
        }
        let mut out = self.clone();
        for (i, c) in &other.coeffs {
            out.add_term(i.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &KForm) -> Result<KForm, ExtError> {
        self.try_add(&other.scale(&-Rat::one()))
    }

    /// Exterior product.
    pub fn wedge(&self, other: &KForm) -> Result<KForm, ExtError> {
        self.check(other)?;
        let deg = self.deg + other.deg;
        let mut out = KForm::zero(self.nvars, deg);
        if deg > self.nvars {
            return Ok(out);
        }
        for (i, a) in &self.coeffs {
            for (j, b) in &other.coeffs {
                if i.iter().any(|x| j.contains(x)) {
                    continue;
                }
                let mut idx = i.clone();
                idx.extend_from_slice(j);
                out.add_term(idx, a * b);
            }
        }
        Ok(out)
    }

    /// Exterior derivative.
    pub fn ext_d(&self) -> KForm {
        let mut out = KForm::zero(self.nvars, self.deg + 1);
        if self.deg >= self.nvars {
            return out;
        }
        for (idx, c) in &self.coeffs {
            for v in c.support() {
                if idx.contains(&v) {
                    continue;
                }
                let mut k = Vec::with_capacity(idx.len() + 1);
                k.push(v);
                k.extend_from_slice(idx);
                out.add_term(k, c.d(v));
            }
        }
        out
    }

    /// Contraction with `x` in the first slot.
    pub fn interior(&self, x: &VField) -> Result<KForm, ExtError> {
        if self.deg == 0 {
            return Err(ExtError::ContractZeroForm);
        }
        if x.nvars() != self.nvars {
            return Err(ExtError::VarCountMismatch { left: x.nvars(), right: self.nvars });
        }
        let mut out = KForm::zero(self.nvars, self.deg - 1);
        for (idx, c) in &self.coeffs {
            for (pos, &i) in idx.iter().enumerate() {
                let xi = x.comp(i);
                if xi.is_zero() {
                    continue;
                }
                let mut rest = idx.clone();
                rest.remove(pos);
                let t = xi * c;
                out.add_term(rest, if pos % 2 == 1 { -t } else { t });
            }
        }
        Ok(out)
    }

    /// Lie derivative by the Cartan formula `i_X d a + d i_X a`.
    pub fn lie_derivative(&self, x: &VField) -> Result<KForm, ExtError> {
        let a = self.ext_d().interior(x)?;
        if self.deg == 0 {
            return Ok(a);
        }
        a.try_add(&self.interior(x)?.ext_d())
    }

    /// Renders as `(c)*dz0^dz1 + ...`, variable names shifted by `offset`.
    pub fn render(&self, offset: usize) -> String {
        if self.coeffs.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .map(|(idx, c)| {
                if idx.is_empty() {
                    format!("({})", c.render(offset))
                } else {
                    let d: Vec<String> = idx.iter().map(|&i| format!("d{}", var_name(i + offset))).collect();
                    format!("({})*{}", c.render(offset), d.join("^"))
                }
            })
            .collect();
        parts.join(" + ")
    }

    pub fn all_coeffs(&self, f: impl Fn(&Poly) -> bool) -> bool {
        self.coeffs.values().all(f)
    }
}

impl fmt::Display for KForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(0))
    }
}
