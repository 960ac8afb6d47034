use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::rat::{fmt_abs, Rat};
use super::SymError;

/// Exponent vector ordered graded-lexicographically: total degree first,
/// then lexicographic with `z0` most significant.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn from_exps(exps: Vec<u32>) -> Self {
        Monomial(exps)
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `self / other`, assuming `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse polynomial in `z0..z{nvars-1}` with rational coefficients.
/// Terms are kept in ascending graded-lex order, so the leading term is last.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Monomial, Rat>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rat::one())
    }

    pub fn constant(nvars: usize, c: Rat) -> Self {
        Self::term(nvars, Monomial::one(nvars), c)
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars, "variable z{i} outside z0..z{}", nvars.saturating_sub(1));
        Self::term(nvars, Monomial::var(nvars, i), Rat::one())
    }

    pub fn term(nvars: usize, m: Monomial, c: Rat) -> Self {
        assert_eq!(m.0.len(), nvars, "exponent vector length");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { nvars, terms }
    }

    pub fn from_terms(nvars: usize, it: impl IntoIterator<Item = (Monomial, Rat)>) -> Self {
        let mut p = Poly::zero(nvars);
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rat)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Rat {
        self.terms.get(m).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn constant_value(&self) -> Option<Rat> {
        if self.is_zero() {
            Some(Rat::zero())
        } else if self.is_constant() {
            self.terms.values().next().cloned()
        } else {
            None
        }
    }

    /// Leading term in graded-lex order.
    pub fn leading(&self) -> Option<(&Monomial, &Rat)> {
        self.terms.iter().next_back()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.keys().map(|m| m.0[i]).max().unwrap_or(0)
    }

    /// Common total degree of all terms, or `None` if the degrees differ.
    /// The zero polynomial reports `None`.
    pub fn is_homogeneous(&self) -> Option<u32> {
        let mut degs = self.terms.keys().map(Monomial::degree);
        let d = degs.next()?;
        degs.all(|e| e == d).then_some(d)
    }

    /// Indices of the variables that occur.
    pub fn support(&self) -> Vec<usize> {
        (0..self.nvars).filter(|&i| self.terms.keys().any(|m| m.0[i] > 0)).collect()
    }

    pub fn uses_var(&self, i: usize) -> bool {
        self.terms.keys().any(|m| m.0[i] > 0)
    }

    fn add_term(&mut self, m: Monomial, c: Rat) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_same(&self, other: &Poly) -> Result<(), SymError> {
        if self.nvars == other.nvars {
            Ok(())
        } else {
            Err(SymError::VarCountMismatch { left: self.nvars, right: other.nvars })
        }
    }

    pub fn try_add(&self, other: &Poly) -> Result<Poly, SymError> {
        self.check_same(other)?;
        let (mut big, small) =
            if self.terms.len() >= other.terms.len() { (self.clone(), other) } else { (other.clone(), self) };
        for (m, c) in &small.terms {
            big.add_term(m.clone(), c.clone());
        }
        Ok(big)
    }

    pub fn try_sub(&self, other: &Poly) -> Result<Poly, SymError> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Poly) -> Result<Poly, SymError> {
        self.check_same(other)?;
        let mut out = Poly::zero(self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rat) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly { nvars: self.nvars, terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect() }
    }

    /// Multiplies by the monomial `c * m`.
    pub fn mul_term(&self, m: &Monomial, c: &Rat) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly { nvars: self.nvars, terms: self.terms.iter().map(|(k, v)| (k.mul(m), v * c)).collect() }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one(self.nvars);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn partial(&self, i: usize) -> Result<Poly, SymError> {
        if i >= self.nvars {
            return Err(SymError::IndexOutOfRange { index: i, nvars: self.nvars });
        }
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e > 0 {
                let mut m2 = m.clone();
                m2.0[i] -= 1;
                out.add_term(m2, c * Rat::from_integer(e.into()));
            }
        }
        Ok(out)
    }

    /// Partial derivative; panics on an out-of-range index.
    pub fn d(&self, i: usize) -> Poly {
        self.partial(i).expect("partial derivative index")
    }

    pub fn eval(&self, pt: &[Rat]) -> Result<Rat, SymError> {
        if pt.len() != self.nvars {
            return Err(SymError::LengthMismatch { expected: self.nvars, got: pt.len() });
        }
        let mut acc = Rat::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in pt.iter().zip(&m.0) {
                if e > 0 {
                    t *= num_traits::pow(x.clone(), e as usize);
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Substitutes `z_i := images[i]` simultaneously. All images must share a
    /// variable count, which becomes the variable count of the result.
    pub fn compose(&self, images: &[Poly]) -> Result<Poly, SymError> {
        if images.len() != self.nvars {
            return Err(SymError::LengthMismatch { expected: self.nvars, got: images.len() });
        }
        let target = images.first().map(Poly::nvars).unwrap_or(0);
        let mut cache: Vec<Vec<Poly>> = images.iter().map(|p| vec![Poly::one(p.nvars), p.clone()]).collect();
        let mut out = Poly::zero(target);
        for (m, c) in &self.terms {
            let mut t = Poly::constant(target, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let e = e as usize;
                while cache[i].len() <= e {
                    let next = &cache[i][cache[i].len() - 1] * &images[i];
                    cache[i].push(next);
                }
                t = t.try_mul(&cache[i][e])?;
            }
            out = out.try_add(&t)?;
        }
        Ok(out)
    }

    /// Sets `z_i` to the constant `value`, keeping the variable count.
    pub fn set_var(&self, i: usize, value: &Rat) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[i];
            let mut m2 = m.clone();
            m2.0[i] = 0;
            let f = if e == 0 { c.clone() } else { c * num_traits::pow(value.clone(), e as usize) };
            out.add_term(m2, f);
        }
        out
    }

    /// Homogenizes with `z_i` to total degree `deg` (every term must have
    /// degree at most `deg` and must not already involve `z_i`).
    pub fn homogenize(&self, i: usize, deg: u32) -> Result<Poly, SymError> {
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            let d = m.degree();
            if d > deg || m.0[i] > 0 {
                return Err(SymError::NotHomogenizable { var: i, degree: deg });
            }
            let mut m2 = m.clone();
            m2.0[i] = deg - d;
            out.add_term(m2, c.clone());
        }
        Ok(out)
    }

    /// Re-embeds into `nvars` variables by mapping `z_i` to `z_{map[i]}`.
    pub fn remap(&self, nvars: usize, map: &[usize]) -> Poly {
        let mut out = Poly::zero(nvars);
        for (m, c) in &self.terms {
            let mut e = vec![0; nvars];
            for (i, &k) in m.0.iter().enumerate() {
                e[map[i]] += k;
            }
            out.add_term(Monomial(e), c.clone());
        }
        out
    }

    /// `q` with `self = d * q`, or `NotDivisible`.
    pub fn exact_div(&self, d: &Poly) -> Result<Poly, SymError> {
        self.check_same(d)?;
        let (dm, dc) = match d.leading() {
            Some((m, c)) => (m.clone(), c.clone()),
            None => return Err(SymError::DivisionByZero),
        };
        if d.terms.len() == 1 {
            let mut out = Poly::zero(self.nvars);
            for (m, c) in &self.terms {
                if !dm.divides(m) {
                    return Err(SymError::NotDivisible);
                }
                out.terms.insert(m.div(&dm), c / &dc);
            }
            return Ok(out);
        }
        let mut r = self.clone();
        let mut q = Poly::zero(self.nvars);
        while let Some((m, c)) = r.leading() {
            if !dm.divides(m) {
                return Err(SymError::NotDivisible);
            }
            let tm = m.div(&dm);
            let tc = c / &dc;
            for (k, v) in &d.terms {
                r.add_term(k.mul(&tm), -(v * &tc));
            }
            q.add_term(tm, tc);
        }
        Ok(q)
    }

    /// Scales so that the graded-lex leading coefficient is 1.
    pub fn monic(&self) -> Poly {
        match self.leading() {
            Some((_, c)) if !c.is_one() => self.scale(&c.recip()),
            _ => self.clone(),
        }
    }

    /// Renders with variable names `z{offset + i}`.
    pub fn render(&self, offset: usize) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            if k == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let mono = render_monomial(m, offset);
            if mono.is_empty() {
                s.push_str(&fmt_abs(c));
            } else {
                if !c.abs().is_one() {
                    s.push_str(&fmt_abs(c));
                    s.push('*');
                }
                s.push_str(&mono);
            }
        }
        s
    }
}

pub(crate) fn var_name(i: usize) -> String {
    if i < 10 {
        format!("z{i}")
    } else {
        format!("z{{{i}}}")
    }
}

fn render_monomial(m: &Monomial, offset: usize) -> String {
    let mut parts = Vec::new();
    for (i, &e) in m.0.iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(var_name(i + offset)),
            _ => parts.push(format!("{}^{e}", var_name(i + offset))),
        }
    }
    parts.join("*")
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(0))
    }
}

// Operator sugar. These panic on a variable-count mismatch; the `try_*`
// methods report it instead.
impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self.try_add(rhs).expect("poly add")
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self.try_sub(rhs).expect("poly sub")
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.try_mul(rhs).expect("poly mul")
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly { nvars: self.nvars, terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect() }
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(self, rhs: Poly) -> Poly {
        &self + &rhs
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, rhs: Poly) -> Poly {
        &self - &rhs
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        &self * &rhs
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}
