//! Foliation-defining forms: construction from fields, reduction, descent and
//! integrability, tangent linear algebras, integrating factors, symmetries and
//! first integrals.

mod integral;

pub use integral::LogExpIntegral;

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::exterior::{ExtError, KForm, LinField, VField};
use crate::linlie::{LieError, LieSpan};
use crate::symcore::{gcd_many, rat, Matrix, Monomial, Poly, Rat, SymError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FolError {
    #[error("expected {expected} fields, got {got}")]
    WrongFieldCount { expected: usize, got: usize },
    #[error("contraction vanishes identically")]
    ZeroContraction,
    #[error("coefficients are not homogeneous of a common degree")]
    NotHomogeneous,
    #[error("form does not descend to projective space")]
    NotDescending,
    #[error("form is not integrable")]
    NotIntegrable,
    #[error("zero polynomial in a first integral")]
    ZeroFactor,
    #[error("variable groups of blocks {first} and {second} overlap")]
    OverlappingBlocks { first: usize, second: usize },
    #[error("need 1 <= p < n, got p = {p}, n = {n}")]
    BadCodimension { p: usize, n: usize },
    #[error("variable count mismatch: {left} vs {right}")]
    VarCountMismatch { left: usize, right: usize },
    #[error(transparent)]
    Ext(#[from] ExtError),
    #[error(transparent)]
    Sym(#[from] SymError),
    #[error(transparent)]
    Lie(#[from] LieError),
}

/// A reduced defining form on `C^{n+1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FoliationForm {
    pub omega: KForm,
    /// Monic gcd that was divided out of the raw contraction.
    pub extracted_factor: Poly,
    /// Coefficient degree minus one.
    pub nu: i64,
}

/// Divides a form by the monic gcd of its coefficients.
pub fn reduce_form(w: &KForm) -> (KForm, Poly) {
    let n = w.nvars();
    let g = gcd_many(w.terms().map(|(_, c)| c)).unwrap_or_else(|| Poly::one(n));
    if g.is_constant() {
        return (w.clone(), Poly::one(n));
    }
    (w.map_coeffs(|c| c.exact_div(&g).expect("gcd divides")), g)
}

/// Common total degree of the coefficients.
fn coeff_degree(w: &KForm) -> Result<u32, FolError> {
    let mut deg = None;
    for (_, c) in w.terms() {
        let d = c.is_homogeneous().ok_or(FolError::NotHomogeneous)?;
        if deg.is_some_and(|e| e != d) {
            return Err(FolError::NotHomogeneous);
        }
        deg = Some(d);
    }
    deg.ok_or(FolError::ZeroContraction)
}

/// `i_R i_{X_1} ... i_{X_{n-1}} vol`, reduced. The fields live on
/// `C^{n+1}`, so `nvars - 2` of them are expected.
pub fn defining_form(fields: &[VField]) -> Result<FoliationForm, FolError> {
    let nvars = fields.first().map(VField::nvars).ok_or(FolError::WrongFieldCount { expected: 1, got: 0 })?;
    if nvars < 2 || fields.len() != nvars - 2 {
        return Err(FolError::WrongFieldCount { expected: nvars.saturating_sub(2), got: fields.len() });
    }
    let w = contract_volume(nvars, &[&[VField::radial(nvars)], fields].concat())?;
    let f = FoliationForm::from_raw(&w)?;
    if !check_descent(&f.omega) {
        return Err(FolError::NotDescending);
    }
    if !check_integrable(&f.omega) {
        return Err(FolError::NotIntegrable);
    }
    Ok(f)
}

/// `i_{X_1} i_{X_2} ... i_{X_k} vol`, innermost contraction last in the list.
pub fn contract_volume(nvars: usize, fields: &[VField]) -> Result<KForm, FolError> {
    let mut w = KForm::volume(nvars);
    for x in fields.iter().rev() {
        w = w.interior(x)?;
    }
    if w.is_zero() {
        return Err(FolError::ZeroContraction);
    }
    Ok(w)
}

impl FoliationForm {
    /// Reduces a raw homogeneous form; the degree is that of the reduced
    /// coefficients minus one.
    pub fn from_raw(w: &KForm) -> Result<Self, FolError> {
        if w.is_zero() {
            return Err(FolError::ZeroContraction);
        }
        let (omega, extracted_factor) = reduce_form(w);
        let nu = coeff_degree(&omega)? as i64 - 1;
        Ok(FoliationForm { omega, extracted_factor, nu })
    }
}

/// `i_R w = 0`.
pub fn check_descent(w: &KForm) -> bool {
    w.degree() > 0 && w.interior(&VField::radial(w.nvars())).is_ok_and(|r| r.is_zero())
}

/// `w ^ dw = 0`.
pub fn check_integrable(w: &KForm) -> bool {
    w.wedge(&w.ext_d()).is_ok_and(|r| r.is_zero())
}

/// Foliation degree of a homogeneous form, after dividing out the gcd.
pub fn degree(w: &KForm) -> Result<i64, FolError> {
    Ok(FoliationForm::from_raw(w)?.nu)
}

/// Equal up to a rational-function factor: every `a_I b_J - a_J b_I` vanishes.
pub fn proportional(a: &KForm, b: &KForm) -> bool {
    if a.nvars() != b.nvars() || a.degree() != b.degree() {
        return false;
    }
    match (a.is_zero(), b.is_zero()) {
        (true, true) => return true,
        (true, false) | (false, true) => return false,
        _ => {}
    }
    // a pivot with a_I != 0 suffices: b_J = (b_I / a_I) a_J for all J
    let (pi, pa) = a.terms().next().expect("nonzero");
    let pb = b.coeff(pi);
    let keys: std::collections::BTreeSet<&Vec<usize>> = a.terms().chain(b.terms()).map(|(k, _)| k).collect();
    keys.into_iter().all(|k| pa * &b.coeff(k) == &a.coeff(k) * &pb)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TangentMode {
    /// `i_X w = 0`.
    AnnihilateOmega,
    /// `i_X dw = 0`.
    AnnihilateDOmega,
}

/// All linear fields X with `i_X w = 0` (or `i_X dw = 0`), as a span.
pub fn tangent_linear_algebra(w: &KForm, mode: TangentMode) -> Result<LieSpan, FolError> {
    let target = match mode {
        TangentMode::AnnihilateOmega => w.clone(),
        TangentMode::AnnihilateDOmega => w.ext_d(),
    };
    let n = w.nvars();
    Ok(LieSpan::reduce(n, &annihilating_linear_fields(&target)?)?)
}

/// Basis of linear fields whose contraction with `t` vanishes.
fn annihilating_linear_fields(t: &KForm) -> Result<Vec<LinField>, FolError> {
    let n = t.nvars();
    let unit = |i: usize, j: usize| {
        let mut m = Matrix::zeros(n, n);
        m[(i, j)] = Rat::one();
        m
    };
    if t.is_zero() || t.degree() == 0 {
        // everything annihilates 0; nothing to contract for a function
        return Ok((0..n * n).map(|k| LinField::from_matrix(unit(k / n, k % n))).collect());
    }
    // i_{z_j d/dz_i} t = z_j * i_{d/dz_i} t
    let partials: Vec<KForm> = (0..n).map(|i| t.interior(&VField::coordinate(n, i))).collect::<Result<_, _>>()?;
    let mut rows: BTreeMap<(Vec<usize>, Monomial), usize> = BTreeMap::new();
    let mut entries: Vec<Vec<(usize, Rat)>> = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let zj = Monomial::var(n, j);
            let mut col = Vec::new();
            for (idx, c) in partials[i].terms() {
                for (m, v) in c.terms() {
                    let key = (idx.clone(), m.mul(&zj));
                    let next = rows.len();
                    let r = *rows.entry(key).or_insert(next);
                    col.push((r, v.clone()));
                }
            }
            entries.push(col);
        }
    }
    let mut sys = Matrix::zeros(rows.len().max(1), n * n);
    for (k, col) in entries.iter().enumerate() {
        for (r, v) in col {
            sys[(*r, k)] += v.clone();
        }
    }
    Ok(sys.nullspace().into_iter().map(|v| LinField::from_matrix(Matrix::from_flat(n, v))).collect())
}

/// Rank of the field values at `pt`.
pub fn pointwise_dimension(fields: &[VField], pt: &[Rat]) -> usize {
    if fields.is_empty() {
        return 0;
    }
    Matrix::from_rows(fields.iter().map(|f| f.eval(pt)).collect()).rank()
}

fn primes() -> impl Iterator<Item = i64> {
    (2i64..).filter(|&k| (2..k).take_while(|d| d * d <= k).all(|d| k % d != 0))
}

/// The generic-point schedule: `(1,2,3,5,7,...)`, `(1,-2,3,-5,...)`,
/// `(2,3,5,7,11,...)`, truncated to `nvars` coordinates.
pub fn generic_points(nvars: usize) -> Vec<Vec<Rat>> {
    let first: Vec<i64> = std::iter::once(1).chain(primes()).take(nvars).collect();
    let alt: Vec<i64> = first.iter().enumerate().map(|(k, &v)| if k % 2 == 1 { -v } else { v }).collect();
    let third: Vec<i64> = primes().take(nvars).collect();
    [first, alt, third].into_iter().map(|p| p.into_iter().map(rat).collect()).collect()
}

/// Maximum pointwise dimension over the generic-point schedule.
pub fn generic_dimension(fields: &[VField]) -> usize {
    let Some(f) = fields.first() else { return 0 };
    generic_points(f.nvars()).iter().map(|p| pointwise_dimension(fields, p)).max().unwrap_or(0)
}

/// Greedily picks fields that raise the generic rank of `R` plus the picks,
/// stopping at `want` fields.
pub fn pick_independent(fields: &[VField], want: usize) -> Vec<VField> {
    let Some(f) = fields.first() else { return Vec::new() };
    let mut picked = vec![VField::radial(f.nvars())];
    for x in fields {
        if picked.len() > want {
            break;
        }
        let before = generic_dimension(&picked);
        picked.push(x.clone());
        if generic_dimension(&picked) == before {
            picked.pop();
        }
    }
    picked.remove(0);
    picked
}

/// `P dw - dP ^ w = 0`, i.e. `w / P` is closed.
pub fn integrating_factor_check(w: &KForm, p: &Poly) -> bool {
    if p.is_zero() {
        return false;
    }
    let dp = KForm::from_poly(p.clone()).ext_d();
    match dp.wedge(w) {
        Ok(t) => w.ext_d().mul_poly(p).try_sub(&t).is_ok_and(|r| r.is_zero()),
        Err(_) => false,
    }
}

/// `i_X w != 0` and `(L_X w) ^ w = 0`.
pub fn symmetry_check(w: &KForm, x: &VField) -> bool {
    let Ok(ix) = w.interior(x) else { return false };
    if ix.is_zero() {
        return false;
    }
    w.lie_derivative(x).and_then(|l| l.wedge(w)).is_ok_and(|r| r.is_zero())
}

/// `D dlog F` reduced by its coefficient gcd.
pub fn integral_to_form(f: &LogExpIntegral) -> Result<KForm, FolError> {
    f.to_form()
}

/// Every field kills the cleared logarithmic derivative of F.
pub fn verify_first_integral(f: &LogExpIntegral, fields: &[VField]) -> Result<bool, FolError> {
    Ok(f.residuals(fields)?.iter().all(Poly::is_zero))
}

/// Combined form of `sum mu_k w_k / P_k` with denominators cleared.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogCombination {
    pub form: KForm,
    pub descends: bool,
}

/// Variables a block touches: coefficient support plus differentials.
fn block_vars(w: &KForm, p: &Poly) -> Vec<usize> {
    let mut vs: Vec<usize> = p.support();
    for (idx, c) in w.terms() {
        vs.extend(idx.iter().copied());
        vs.extend(c.support());
    }
    vs.sort_unstable();
    vs.dedup();
    vs
}

/// `Omega = sum_k mu_k w_k prod_{j != k} P_j` over blocks on disjoint
/// variable groups.
pub fn assemble_log_combination(parts: &[(KForm, Poly, Rat)]) -> Result<LogCombination, FolError> {
    let Some((w0, _, _)) = parts.first() else { return Err(FolError::WrongFieldCount { expected: 1, got: 0 }) };
    let n = w0.nvars();
    let groups: Vec<Vec<usize>> = parts.iter().map(|(w, p, _)| block_vars(w, p)).collect();
    for (w, p, _) in parts {
        for m in [w.nvars(), p.nvars()] {
            if m != n {
                return Err(FolError::VarCountMismatch { left: m, right: n });
            }
        }
    }
    for i in 0..groups.len() {
        for j in i + 1..groups.len() {
            if groups[i].iter().any(|v| groups[j].contains(v)) {
                return Err(FolError::OverlappingBlocks { first: i, second: j });
            }
        }
    }
    let mut form = KForm::zero(n, w0.degree());
    for (k, (w, _, mu)) in parts.iter().enumerate() {
        let mut f = Poly::constant(n, mu.clone());
        for (j, (_, p, _)) in parts.iter().enumerate() {
            if j != k {
                f = &f * p;
            }
        }
        form = form.try_add(&w.mul_poly(&f))?;
    }
    let descends = check_descent(&form);
    Ok(LogCombination { form, descends })
}

/// `i_R (dz_0 ^ ... ^ dz_p)` on `C^{n+1}`.
pub fn radial_codim_p_form(p: usize, n: usize) -> Result<KForm, FolError> {
    if p == 0 || p >= n {
        return Err(FolError::BadCodimension { p, n });
    }
    let nvars = n + 1;
    let w = KForm::from_terms(nvars, p + 1, [((0..=p).collect::<Vec<_>>(), Poly::one(nvars))]);
    Ok(w.interior(&VField::radial(nvars))?)
}

/// `z_j d/dz_l` for `l > p`, together with R.
pub fn codim_p_annihilators(p: usize, n: usize) -> Vec<VField> {
    let nvars = n + 1;
    let mut out = vec![VField::radial(nvars)];
    for l in p + 1..nvars {
        for j in 0..nvars {
            let mut c = vec![Poly::zero(nvars); nvars];
            c[l] = Poly::var(nvars, j);
            out.push(VField::new(c).expect("sized"));
        }
    }
    out
}

/// `R_ij = z_i d/dz_i + z_j d/dz_j` for `i < j <= p`. These annihilate the
/// codimension-p form only when `p = 1`; in general `L_{R_ij} w = 2 w`.
pub fn codim_p_symmetries(p: usize, n: usize) -> Vec<VField> {
    let nvars = n + 1;
    let mut out = Vec::new();
    for i in 0..=p {
        for j in i + 1..=p {
            let mut c = vec![Poly::zero(nvars); nvars];
            c[i] = Poly::var(nvars, i);
            c[j] = Poly::var(nvars, j);
            out.push(VField::new(c).expect("sized"));
        }
    }
    out
}

/// Restriction to the chart `z_i = 1`: substitutes and drops `dz_i`.
pub fn dehomogenize_form(w: &KForm, i: usize) -> KForm {
    let one = Rat::one();
    KForm::from_terms(
        w.nvars(),
        w.degree(),
        w.terms().filter(|(idx, _)| !idx.contains(&i)).map(|(idx, c)| (idx.clone(), c.set_var(i, &one))),
    )
}

/// Inverse of [`dehomogenize_form`] for 1-forms: each `dx_k` becomes
/// `z_i dz_k - z_k dz_i` after homogenizing the coefficients, and the
/// result is gcd-reduced.
pub fn homogenize_one_form(eta: &KForm, i: usize) -> Result<KForm, FolError> {
    let n = eta.nvars();
    let m = eta.terms().filter_map(|(_, c)| c.total_degree()).max().ok_or(FolError::ZeroContraction)?;
    let zi = Poly::var(n, i);
    let mut coeffs = vec![Poly::zero(n); n];
    for (idx, c) in eta.terms() {
        let k = idx[0];
        if k == i {
            continue;
        }
        let a = c.homogenize(i, m)?;
        coeffs[k] = &coeffs[k] + &(&a * &zi);
        coeffs[i] = &coeffs[i] - &(&a * &Poly::var(n, k));
    }
    let w = KForm::one_form(coeffs);
    if w.is_zero() {
        return Err(FolError::ZeroContraction);
    }
    Ok(reduce_form(&w).0)
}

/// Degree in `t` of `w(A + tB)(B)`: the number of tangencies between the
/// foliation and the line through A and B, counted at finite `t`.
pub fn line_tangency_degree(w: &KForm, a: &[Rat], b: &[Rat]) -> Result<Option<u32>, FolError> {
    let n = w.nvars();
    let t = Poly::var(1, 0);
    let images: Vec<Poly> = (0..n).map(|k| &Poly::constant(1, a[k].clone()) + &t.scale(&b[k])).collect();
    let mut g = Poly::zero(1);
    for (idx, c) in w.terms() {
        let k = idx[0];
        if b[k].is_zero() {
            continue;
        }
        g = &g + &c.compose(&images)?.scale(&b[k]);
    }
    Ok(g.total_degree())
}

#[cfg(test)]
mod tests;
