//! Classical invariant theory: infinitesimal actions of sl_k on binary forms
//! and matrix spaces, named invariants, and the Hesse/Sylvester battery.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::exterior::LinField;
use crate::linlie::LieSpan;
use crate::symcore::{frac, rat, Matrix, Monomial, Poly, Rat};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum InvError {
    #[error("j has a pole at {0}")]
    Pole(Rat),
    #[error("matrix of size {0} has no pfaffian")]
    OddDimension(usize),
    #[error("matrix is not antisymmetric")]
    NotAntisymmetric,
    #[error("matrix is not square")]
    NotSquare,
    #[error("need {what} >= {min}, got {got}")]
    TooSmall { what: &'static str, min: usize, got: usize },
}

/// A Lie algebra given by matrices, and its image as linear fields on a
/// coefficient space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InducedAction {
    pub source: Vec<Matrix>,
    pub fields: Vec<LinField>,
    pub nvars: usize,
}

impl InducedAction {
    /// `rho([A, B]) = -[rho A, rho B]`: the source uses `AB - BA`, while the
    /// field bracket of linear fields `Az, Bz` is `(BA - AB) z`.
    pub fn is_morphism(&self) -> bool {
        let k = self.source.len();
        (0..k).all(|i| {
            (i + 1..k).all(|j| {
                let (a, b) = (&self.source[i], &self.source[j]);
                let c = &(a * b) - &(b * a);
                let img = self.image(&c);
                self.fields[i].bracket(&self.fields[j]) == img.scale(&-Rat::one())
            })
        })
    }

    /// Image of a combination of source matrices; `c` must lie in their span.
    pub fn image(&self, c: &Matrix) -> LinField {
        let cols: Vec<Vec<Rat>> = self.source.iter().map(|m| m.flat().to_vec()).collect();
        let x = crate::linlie::coords(&cols, c.flat()).expect("source span is closed");
        LinField::combination(self.nvars, &x, &self.fields)
    }

    pub fn span(&self) -> LieSpan {
        LieSpan::reduce(self.nvars, &self.fields).expect("sized")
    }

    /// Every generator kills `p`.
    pub fn annihilates(&self, p: &Poly) -> bool {
        self.fields.iter().all(|f| f.field().apply(p).is_zero())
    }
}

/// `e, f, h` of sl2.
pub fn sl2_basis() -> Vec<Matrix> {
    let m = |v: [i64; 4]| Matrix::from_rows(vec![vec![rat(v[0]), rat(v[1])], vec![rat(v[2]), rat(v[3])]]);
    vec![m([0, 1, 0, 0]), m([0, 0, 1, 0]), m([1, 0, 0, -1])]
}

/// `E_ij` for `i != j`, then `E_ii - E_{i+1,i+1}`.
pub fn sl_basis(k: usize) -> Vec<Matrix> {
    let mut out = Vec::with_capacity(k * k - 1);
    for i in 0..k {
        for j in 0..k {
            if i != j {
                let mut m = Matrix::zeros(k, k);
                m[(i, j)] = Rat::one();
                out.push(m);
            }
        }
    }
    for i in 0..k - 1 {
        let mut m = Matrix::zeros(k, k);
        m[(i, i)] = Rat::one();
        m[(i + 1, i + 1)] = -Rat::one();
        out.push(m);
    }
    out
}

/// Field on the coefficients `c_0..c_d` of `sum c_i x^{d-i} y^i` induced by
/// `P -> P o exp(-tA)`, placed at variables `start..start+d+1`.
fn binary_block(a: &Matrix, d: usize, start: usize, m: &mut Matrix) {
    // -(P_x (A v)_x + P_y (A v)_y), v = (x, y)
    for i in 0..=d {
        // term c_i x^{d-i} y^i
        let (px, py) = ((d - i) as i64, i as i64);
        // P_x * (a00 x + a01 y): x^{d-i-1} y^i * x -> same monomial i, * y -> monomial i+1
        if px > 0 {
            m[(start + i, start + i)] -= rat(px) * &a[(0, 0)];
            m[(start + i + 1, start + i)] -= rat(px) * &a[(0, 1)];
        }
        if py > 0 {
            m[(start + i - 1, start + i)] -= rat(py) * &a[(1, 0)];
            m[(start + i, start + i)] -= rat(py) * &a[(1, 1)];
        }
    }
}

/// sl2 acting on `C^offset` (trivially) plus binary forms of the given degrees.
pub fn sl2_on_direct_sum(offset: usize, degrees: &[usize]) -> InducedAction {
    let nvars = offset + degrees.iter().map(|d| d + 1).sum::<usize>();
    let source = sl2_basis();
    let fields = source
        .iter()
        .map(|a| {
            let mut m = Matrix::zeros(nvars, nvars);
            let mut start = offset;
            for &d in degrees {
                binary_block(a, d, start, &mut m);
                start += d + 1;
            }
            LinField::from_matrix(m)
        })
        .collect();
    InducedAction { source, fields, nvars }
}

/// sl2 on binary forms of degree `d`, coefficients `z_0..z_d`.
pub fn sl2_on_binary_forms(d: usize) -> Result<InducedAction, InvError> {
    if d == 0 {
        return Err(InvError::TooSmall { what: "degree", min: 1, got: 0 });
    }
    Ok(sl2_on_direct_sum(0, &[d]))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MatrixKind {
    Symmetric,
    Antisymmetric,
}

/// Coordinate index pairs `(i, j)` of the matrix space, row-major upper part.
pub fn matrix_coordinates(k: usize, kind: MatrixKind) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 0..k {
        for j in i..k {
            if kind == MatrixKind::Symmetric || i < j {
                out.push((i, j));
            }
        }
    }
    out
}

/// The generic matrix of the space, one variable per coordinate.
pub fn generic_matrix(k: usize, kind: MatrixKind) -> Vec<Vec<Poly>> {
    let coords = matrix_coordinates(k, kind);
    let n = coords.len();
    let mut m = vec![vec![Poly::zero(n); k]; k];
    for (v, &(i, j)) in coords.iter().enumerate() {
        let z = Poly::var(n, v);
        if i != j && kind == MatrixKind::Antisymmetric {
            m[j][i] = -z.clone();
        } else {
            m[j][i] = z.clone();
        }
        m[i][j] = z;
    }
    m
}

/// `M -> -(A^T M + M A)` for `A` in a basis of sl_k.
pub fn sl_on_matrix_space(k: usize, kind: MatrixKind) -> Result<InducedAction, InvError> {
    if k < 2 {
        return Err(InvError::TooSmall { what: "k", min: 2, got: k });
    }
    let coords = matrix_coordinates(k, kind);
    let n = coords.len();
    let index: BTreeMap<(usize, usize), usize> = coords.iter().enumerate().map(|(v, &p)| (p, v)).collect();
    let source = sl_basis(k);
    let fields = source
        .iter()
        .map(|a| {
            // image of the unit matrix for coordinate v, read off on each coordinate
            let mut m = Matrix::zeros(n, n);
            for (v, &(i, j)) in coords.iter().enumerate() {
                let mut unit = Matrix::zeros(k, k);
                unit[(i, j)] = Rat::one();
                if i != j {
                    unit[(j, i)] = if kind == MatrixKind::Symmetric { Rat::one() } else { -Rat::one() };
                }
                let img = -&(&(&a.transpose() * &unit) + &(&unit * a));
                for (&(p, q), &w) in &index {
                    m[(w, v)] = img[(p, q)].clone();
                }
            }
            LinField::from_matrix(m)
        })
        .collect();
    Ok(InducedAction { source, fields, nvars: n })
}

/// Discriminant of `a0 x^3 + a1 x^2 y + a2 x y^2 + a3 y^3` in variables
/// `z_0..z_3`.
pub fn discriminant_cubic() -> Poly {
    poly_from(
        4,
        &[
            (rat(1), [0, 2, 2, 0].to_vec()),
            (rat(-4), [1, 0, 3, 0].to_vec()),
            (rat(-4), [0, 3, 0, 1].to_vec()),
            (rat(-27), [2, 0, 0, 2].to_vec()),
            (rat(18), [1, 1, 1, 1].to_vec()),
        ],
    )
}

/// Degree-2 invariant `a0 a4 - a1 a3 / 4 + a2^2 / 12` of a binary quartic.
pub fn quartic_p() -> Poly {
    poly_from(
        5,
        &[(rat(1), vec![1, 0, 0, 0, 1]), (frac(-1, 4), vec![0, 1, 0, 1, 0]), (frac(1, 12), vec![0, 0, 2, 0, 0])],
    )
}

/// Degree-3 invariant of a binary quartic: the catalecticant determinant.
pub fn quartic_h() -> Poly {
    let a = |i: usize| Poly::var(5, i);
    let m = vec![
        vec![a(0), a(1).scale(&frac(1, 4)), a(2).scale(&frac(1, 6))],
        vec![a(1).scale(&frac(1, 4)), a(2).scale(&frac(1, 6)), a(3).scale(&frac(1, 4))],
        vec![a(2).scale(&frac(1, 6)), a(3).scale(&frac(1, 4)), a(4)],
    ];
    det(&m).expect("square")
}

/// `2^8 (P^3 - 27 H^2)`.
pub fn quartic_discriminant() -> Poly {
    (&quartic_p().pow(3) - &quartic_h().pow(2).scale(&rat(27))).scale(&rat(256))
}

fn poly_from(n: usize, terms: &[(Rat, Vec<u32>)]) -> Poly {
    Poly::from_terms(n, terms.iter().map(|(c, e)| (Monomial::from_exps(e.clone()), c.clone())))
}

/// `256 (l^2 - l + 1)^3 / (l^2 (l - 1)^2)`.
pub fn jfun(l: &Rat) -> Result<Rat, InvError> {
    let one = Rat::one();
    if l.is_zero() || *l == one {
        return Err(InvError::Pole(l.clone()));
    }
    let num = l * l - l + &one;
    let lm = l - &one;
    Ok(rat(256) * &num * &num * &num / (l * l * &lm * &lm))
}

fn check_square(m: &[Vec<Poly>]) -> Result<usize, InvError> {
    let k = m.len();
    if m.iter().any(|r| r.len() != k) {
        return Err(InvError::NotSquare);
    }
    Ok(k)
}

/// Determinant by expansion over column subsets, bottom row first.
pub fn det(m: &[Vec<Poly>]) -> Result<Poly, InvError> {
    let k = check_square(m)?;
    if k == 0 {
        return Err(InvError::NotSquare);
    }
    let nv = m[0][0].nvars();
    // minors of the last rows, keyed by column bitmask
    let mut prev: BTreeMap<u64, Poly> = BTreeMap::from([(0u64, Poly::one(nv))]);
    for r in (0..k).rev() {
        let mut cur: BTreeMap<u64, Poly> = BTreeMap::new();
        for (&mask, minor) in &prev {
            if minor.is_zero() {
                continue;
            }
            for c in 0..k {
                if mask & (1 << c) != 0 || m[r][c].is_zero() {
                    continue;
                }
                // sign: number of columns in the minor left of c
                let before = (mask & ((1u64 << c) - 1)).count_ones();
                let t = &m[r][c] * minor;
                let e = cur.entry(mask | (1 << c)).or_insert_with(|| Poly::zero(nv));
                *e = if before % 2 == 0 { &*e + &t } else { &*e - &t };
            }
        }
        prev = cur;
    }
    Ok(prev.remove(&((1u64 << k) - 1)).unwrap_or_else(|| Poly::zero(nv)))
}

/// Pfaffian by expansion along the first row.
pub fn pfaffian(m: &[Vec<Poly>]) -> Result<Poly, InvError> {
    let k = check_square(m)?;
    if k % 2 == 1 {
        return Err(InvError::OddDimension(k));
    }
    for i in 0..k {
        for j in i..k {
            if m[i][j] != -m[j][i].clone() {
                return Err(InvError::NotAntisymmetric);
            }
        }
    }
    let nv = m.first().map_or(0, |r| r[0].nvars());
    Ok(pf_rec(m, &(0..k).collect::<Vec<_>>(), nv))
}

fn pf_rec(m: &[Vec<Poly>], idx: &[usize], nv: usize) -> Poly {
    if idx.is_empty() {
        return Poly::one(nv);
    }
    let mut out = Poly::zero(nv);
    for (pos, &j) in idx.iter().enumerate().skip(1) {
        let a = &m[idx[0]][j];
        if a.is_zero() {
            continue;
        }
        let rest: Vec<usize> = idx.iter().enumerate().filter(|&(p, _)| p != 0 && p != pos).map(|(_, &v)| v).collect();
        let t = a * &pf_rec(m, &rest, nv);
        out = if pos % 2 == 1 { &out + &t } else { &out - &t };
    }
    out
}

pub fn hessian(p: &Poly) -> Vec<Vec<Poly>> {
    let n = p.nvars();
    let grad: Vec<Poly> = (0..n).map(|i| p.d(i)).collect();
    (0..n).map(|i| (0..n).map(|j| grad[i].d(j)).collect()).collect()
}

/// `det Hess P = 0` identically.
pub fn hesse_test(p: &Poly) -> bool {
    det(&hessian(p)).map_or(true, |d| d.is_zero())
}

/// The partials are linearly dependent over Q.
pub fn sylvester_test(p: &Poly) -> bool {
    let n = p.nvars();
    let grad: Vec<Poly> = (0..n).map(|i| p.d(i)).collect();
    let mons: std::collections::BTreeSet<&Monomial> = grad.iter().flat_map(|g| g.terms().map(|(m, _)| m)).collect();
    let rows: Vec<Vec<Rat>> = grad.iter().map(|g| mons.iter().map(|m| g.coeff(m)).collect()).collect();
    if mons.is_empty() {
        return true;
    }
    Matrix::from_rows(rows).rank() < n
}

/// All linear fields X with `X(P) = 0`.
pub fn annihilator_of_polynomial(p: &Poly) -> LieSpan {
    let n = p.nvars();
    // X = sum A_ij z_j d/dz_i, X(P) = sum A_ij z_j P_i
    let grad: Vec<Poly> = (0..n).map(|i| p.d(i)).collect();
    let mut rows: BTreeMap<Monomial, usize> = BTreeMap::new();
    let mut cols: Vec<Vec<(usize, Rat)>> = Vec::with_capacity(n * n);
    for g in &grad {
        for j in 0..n {
            let zj = Monomial::var(n, j);
            let col = g
                .terms()
                .map(|(m, c)| {
                    let next = rows.len();
                    (*rows.entry(m.mul(&zj)).or_insert(next), c.clone())
                })
                .collect();
            cols.push(col);
        }
    }
    let mut sys = Matrix::zeros(rows.len().max(1), n * n);
    for (k, col) in cols.iter().enumerate() {
        for (r, v) in col {
            sys[(*r, k)] += v.clone();
        }
    }
    let fields: Vec<LinField> =
        sys.nullspace().into_iter().map(|v| LinField::from_matrix(Matrix::from_flat(n, v))).collect();
    LieSpan::reduce(n, &fields).expect("sized")
}

/// The Gordan-Noether cubic `z1^2 z3 + z1 z2 z4 + z2^2 z5` on `nvars`
/// variables, indices shifted down by `shift`.
pub fn gordan_noether(nvars: usize, shift: usize) -> Poly {
    let z = |i: usize| Poly::var(nvars, i - shift);
    &(&(&z(1).pow(2) * &z(3)) + &(&(&z(1) * &z(2)) * &z(4))) + &(&z(2).pow(2) * &z(5))
}

/// The four fields of the Gordan-Noether example, same index convention.
pub fn gordan_noether_fields(nvars: usize, shift: usize) -> Vec<LinField> {
    let lf = |entries: &[(usize, usize, i64)]| {
        let mut m = Matrix::zeros(nvars, nvars);
        for &(i, j, v) in entries {
            m[(i - shift, j - shift)] += rat(v);
        }
        LinField::from_matrix(m)
    };
    vec![
        lf(&[(3, 2, 1), (4, 1, -1)]),
        lf(&[(4, 2, 1), (5, 1, -1)]),
        lf(&[(1, 1, 1), (3, 3, -2), (4, 4, -1)]),
        lf(&[(2, 2, 1), (4, 4, -1), (5, 5, -2)]),
    ]
}
