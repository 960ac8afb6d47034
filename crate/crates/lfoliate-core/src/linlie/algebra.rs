//! Abstract low-dimensional Lie algebras given by structure constants, and
//! their identification with the named presentations.

use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::exterior::LinField;
use crate::symcore::{Matrix, Rat};

use super::span::{coords_in, LieSpan};
use super::LieError;

/// The named presentations used by the classification lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Presentation {
    Abelian,
    /// `[X,Y] = Y`.
    Affine2,
    /// `[X,Y] = Y, [X,Z] = a Z, [Y,Z] = 0`; `None` leaves `a` unconstrained.
    LAlpha(Option<Rat>),
    /// `[Y,Z] = X` with X central.
    Heis,
    /// `[Y,Z] = Y` with X central.
    AffSplit,
    /// `[X,Y] = Y, [X,Z] = Y + Z, [Y,Z] = 0`.
    Shear,
    Sl2,
}

impl Presentation {
    pub fn name(&self) -> &'static str {
        match self {
            Presentation::Abelian => "abelian",
            Presentation::Affine2 => "affine2",
            Presentation::LAlpha(_) => "L_alpha",
            Presentation::Heis => "heis",
            Presentation::AffSplit => "aff_split",
            Presentation::Shear => "shear",
            Presentation::Sl2 => "sl2",
        }
    }

    pub fn from_name(name: &str, alpha: Option<Rat>) -> Option<Self> {
        Some(match name {
            "abelian" => Presentation::Abelian,
            "affine2" => Presentation::Affine2,
            "L_alpha" => Presentation::LAlpha(alpha),
            "heis" => Presentation::Heis,
            "aff_split" => Presentation::AffSplit,
            "shear" => Presentation::Shear,
            "sl2" => Presentation::Sl2,
            _ => return None,
        })
    }

    /// Required dimension, `None` for abelian algebras of any dimension.
    pub fn arity(&self) -> Option<usize> {
        match self {
            Presentation::Abelian => None,
            Presentation::Affine2 => Some(2),
            _ => Some(3),
        }
    }
}

/// What an algebra turned out to be.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Classification {
    Abelian(usize),
    Affine2,
    /// `kappa = t^2/d = (1+a)^2/a` for ad x on the derived algebra; `alphas`
    /// holds `{a, 1/a}` when they are rational.
    LAlpha {
        kappa: Rat,
        alphas: Option<(Rat, Rat)>,
    },
    Heis,
    AffSplit,
    Shear,
    Sl2,
    Other(String),
}

impl Classification {
    pub fn name(&self) -> String {
        match self {
            Classification::Abelian(_) => "abelian".into(),
            Classification::Affine2 => "affine2".into(),
            Classification::LAlpha { .. } => "L_alpha".into(),
            Classification::Heis => "heis".into(),
            Classification::AffSplit => "aff_split".into(),
            Classification::Shear => "shear".into(),
            Classification::Sl2 => "sl2".into(),
            Classification::Other(s) => s.clone(),
        }
    }

    /// Rational representatives of the alpha class, sorted.
    pub fn alphas(&self) -> Option<Vec<Rat>> {
        match self {
            Classification::LAlpha { alphas: Some((a, b)), .. } => {
                let mut v = vec![a.clone(), b.clone()];
                v.sort();
                v.dedup();
                Some(v)
            }
            _ => None,
        }
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Classification::Abelian(d) => write!(f, "abelian (dim {d})"),
            Classification::LAlpha { kappa, alphas: Some((a, b)) } => {
                write!(f, "L_alpha (alpha in {{{a}, {b}}}, kappa {kappa})")
            }
            Classification::LAlpha { kappa, alphas: None } => write!(f, "L_alpha (irrational alpha, kappa {kappa})"),
            other => f.write_str(&other.name()),
        }
    }
}

/// `kappa(a) = (1+a)^2 / a`, the invariant of the class `{a, 1/a}`.
pub fn alpha_kappa(a: &Rat) -> Option<Rat> {
    if a.is_zero() {
        return None;
    }
    let s = Rat::one() + a;
    Some(&s * &s / a)
}

/// Lie algebra of dimension k given by `c[i][j]` = coordinates of `[e_i, e_j]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Algebra {
    c: Vec<Vec<Vec<Rat>>>,
    /// Linear fields realizing the basis (absent for purely abstract input).
    realization: Vec<LinField>,
}

impl Algebra {
    pub fn dim(&self) -> usize {
        self.c.len()
    }

    pub fn structure_constants(&self) -> &[Vec<Vec<Rat>>] {
        &self.c
    }

    pub fn realization(&self) -> &[LinField] {
        &self.realization
    }

    /// Exact algebra of a bracket-closed span.
    pub fn from_span(s: &LieSpan) -> Result<Self, LieError> {
        let c = s.structure_constants().ok_or(LieError::NotClosed)?;
        Ok(Algebra { c, realization: s.basis().to_vec() })
    }

    /// `(span(fields) + C R) / C R`. Brackets of linear fields with R vanish, so
    /// this is a Lie algebra whenever the brackets close modulo R.
    pub fn modulo_radial(nvars: usize, fields: &[LinField]) -> Result<Self, LieError> {
        let r = LinField::radial(nvars);
        let with_r: Vec<LinField> = std::iter::once(r.clone()).chain(fields.iter().cloned()).collect();
        let span = LieSpan::independent(nvars, &with_r)?;
        let basis: Vec<LinField> = span.basis()[1..].to_vec();
        let k = basis.len();
        let cols: Vec<Vec<Rat>> = basis.iter().chain(std::iter::once(&r)).map(|f| f.matrix().flat().to_vec()).collect();
        let mut c = vec![vec![vec![Rat::zero(); k]; k]; k];
        for i in 0..k {
            for j in i + 1..k {
                let br = basis[i].bracket(&basis[j]);
                let mut co = coords_in(&cols, br.matrix().flat()).ok_or(LieError::NotClosed)?;
                co.truncate(k);
                c[j][i] = co.iter().map(|x| -x.clone()).collect();
                c[i][j] = co;
            }
        }
        Ok(Algebra { c, realization: basis })
    }

    fn bracket(&self, u: &[Rat], v: &[Rat]) -> Vec<Rat> {
        let k = self.dim();
        let mut out = vec![Rat::zero(); k];
        for i in 0..k {
            if u[i].is_zero() {
                continue;
            }
            for j in 0..k {
                if i == j || v[j].is_zero() {
                    continue;
                }
                let f = &u[i] * &v[j];
                for (o, x) in out.iter_mut().zip(&self.c[i][j]) {
                    *o += &f * x;
                }
            }
        }
        out
    }

    fn unit(&self, i: usize) -> Vec<Rat> {
        let mut e = vec![Rat::zero(); self.dim()];
        e[i] = Rat::one();
        e
    }

    /// Basis (as coordinate columns) of [g, g].
    fn derived(&self) -> Vec<Vec<Rat>> {
        let k = self.dim();
        let mut brs = Vec::new();
        for i in 0..k {
            for j in i + 1..k {
                brs.push(self.c[i][j].clone());
            }
        }
        if brs.is_empty() {
            return brs;
        }
        let mut m = Matrix::from_rows(brs);
        let r = m.rref().len();
        (0..r).map(|i| m.row(i).to_vec()).collect()
    }

    fn realize(&self, coords: &[Rat]) -> Option<LinField> {
        let n = self.realization.first()?.nvars();
        Some(LinField::combination(n, coords, &self.realization))
    }

    /// Identifies the algebra (dimension at most 3) and, when possible over Q,
    /// returns a basis realizing the named presentation.
    pub fn classify(&self) -> (Classification, Option<Vec<Vec<Rat>>>) {
        let k = self.dim();
        let d = self.derived();
        if d.is_empty() {
            return (Classification::Abelian(k), Some((0..k).map(|i| self.unit(i)).collect()));
        }
        match k {
            2 => {
                // y spans [g,g]; [e_i, y] = c_i y for some i with c_i != 0
                let y = d[0].clone();
                for i in 0..2 {
                    let img = self.bracket(&self.unit(i), &y);
                    if let Some(c) = ratio(&img, &y) {
                        if !c.is_zero() {
                            let x: Vec<Rat> = self.unit(i).iter().map(|v| v / &c).collect();
                            return (Classification::Affine2, Some(vec![x, y]));
                        }
                    }
                }
                (Classification::Other("dim 2, unrecognized".into()), None)
            }
            3 => self.classify3(d),
            _ => (Classification::Other(format!("dim {k}")), None),
        }
    }

    fn classify3(&self, d: Vec<Vec<Rat>>) -> (Classification, Option<Vec<Vec<Rat>>>) {
        let units: Vec<Vec<Rat>> = (0..3).map(|i| self.unit(i)).collect();
        match d.len() {
            3 => (Classification::Sl2, None),
            1 => {
                let dv = d[0].clone();
                let central = units.iter().all(|e| self.bracket(&dv, e).iter().all(Zero::is_zero));
                if central {
                    for i in 0..3 {
                        for j in i + 1..3 {
                            let b = self.bracket(&units[i], &units[j]);
                            if b.iter().any(|x| !x.is_zero()) {
                                return (Classification::Heis, Some(vec![b, units[i].clone(), units[j].clone()]));
                            }
                        }
                    }
                    unreachable!("derived algebra is nonzero")
                }
                // aff_split: center is one-dimensional, [Y, Z] = Y with Y spanning D
                let center = self.center();
                for u in &units {
                    let img = self.bracket(&dv, u);
                    if let Some(c) = ratio(&img, &dv) {
                        if !c.is_zero() {
                            let z: Vec<Rat> = u.iter().map(|v| v / &c).collect();
                            let wit = center.first().map(|x| vec![x.clone(), dv.clone(), z]);
                            return (Classification::AffSplit, wit);
                        }
                    }
                }
                (Classification::Other("dim 3, rank 1, unrecognized".into()), None)
            }
            2 => {
                if self.bracket(&d[0], &d[1]).iter().any(|x| !x.is_zero()) {
                    return (Classification::Other("non-abelian derived algebra".into()), None);
                }
                let x = units
                    .iter()
                    .find(|e| {
                        let m = Matrix::from_rows(vec![d[0].clone(), d[1].clone(), (*e).clone()]);
                        m.rank() == 3
                    })
                    .expect("some unit vector completes a basis")
                    .clone();
                // matrix of ad x on D in the basis d[0], d[1]
                let mut m = Matrix::zeros(2, 2);
                for col in 0..2 {
                    let img = self.bracket(&x, &d[col]);
                    let co = coords_in(&d, &img).expect("ad x preserves the derived algebra");
                    m[(0, col)] = co[0].clone();
                    m[(1, col)] = co[1].clone();
                }
                let t = m.trace();
                let det = m.det();
                if det.is_zero() {
                    return (Classification::Other("degenerate ad action".into()), None);
                }
                let disc = &t * &t - &det * Rat::from_integer(4.into());
                let half = &t / Rat::from_integer(2.into());
                let scalar = m[(0, 1)].is_zero() && m[(1, 0)].is_zero() && m[(0, 0)] == m[(1, 1)];
                if disc.is_zero() && !scalar {
                    // repeated eigenvalue `half`, one Jordan block
                    let xs: Vec<Rat> = x.iter().map(|v| v / &half).collect();
                    let n = &m.scale(&half.recip()) - &Matrix::identity(2);
                    let zc = if n[(0, 0)].is_zero() && n[(1, 0)].is_zero() { 1 } else { 0 };
                    let zcoord = if zc == 0 { vec![Rat::one(), Rat::zero()] } else { vec![Rat::zero(), Rat::one()] };
                    let ycoord = n.mul_vec(&zcoord);
                    let lift =
                        |c: &[Rat]| -> Vec<Rat> { (0..3).map(|i| &c[0] * &d[0][i] + &c[1] * &d[1][i]).collect() };
                    return (Classification::Shear, Some(vec![xs, lift(&ycoord), lift(&zcoord)]));
                }
                let kappa = &t * &t / &det;
                let (alphas, wit) = match rational_eigen(&m) {
                    Some((l1, l2, v1, v2)) => {
                        let lift =
                            |c: &[Rat]| -> Vec<Rat> { (0..3).map(|i| &c[0] * &d[0][i] + &c[1] * &d[1][i]).collect() };
                        let xs: Vec<Rat> = x.iter().map(|v| v / &l1).collect();
                        (Some((&l2 / &l1, &l1 / &l2)), Some(vec![xs, lift(&v1), lift(&v2)]))
                    }
                    None => (None, None),
                };
                (Classification::LAlpha { kappa, alphas }, wit)
            }
            _ => unreachable!(),
        }
    }

    fn center(&self) -> Vec<Vec<Rat>> {
        let k = self.dim();
        // x in center iff sum_i x_i c[i][j] = 0 for all j
        let mut rows = Vec::new();
        for j in 0..k {
            for comp in 0..k {
                rows.push((0..k).map(|i| self.c[i][j][comp].clone()).collect());
            }
        }
        Matrix::from_rows(rows).nullspace()
    }

    /// Realizes witness coordinates as linear fields.
    pub fn witness_fields(&self, wit: &[Vec<Rat>]) -> Option<Vec<LinField>> {
        wit.iter().map(|w| self.realize(w)).collect()
    }
}

/// `c` with `a = c * b`, if `a` is a multiple of the nonzero vector `b`.
fn ratio(a: &[Rat], b: &[Rat]) -> Option<Rat> {
    let i = b.iter().position(|x| !x.is_zero())?;
    let c = &a[i] / &b[i];
    a.iter().zip(b).all(|(x, y)| *x == &c * y).then_some(c)
}

/// Rational eigenvalues and eigenvectors of a diagonalizable 2x2 matrix.
fn rational_eigen(m: &Matrix) -> Option<(Rat, Rat, Vec<Rat>, Vec<Rat>)> {
    let t = m.trace();
    let d = m.det();
    let disc = &t * &t - &d * Rat::from_integer(4.into());
    let s = rat_sqrt(&disc)?;
    let two = Rat::from_integer(2.into());
    let l1 = (&t + &s) / &two;
    let l2 = (&t - &s) / &two;
    let ev = |l: &Rat| -> Vec<Rat> {
        let a = m - &Matrix::identity(2).scale(l);
        let ns = a.nullspace();
        ns.into_iter().next().expect("eigenvalue has an eigenvector")
    };
    if l1 == l2 {
        // scalar matrix
        return Some((l1.clone(), l2, vec![Rat::one(), Rat::zero()], vec![Rat::zero(), Rat::one()]));
    }
    Some((l1.clone(), l2.clone(), ev(&l1), ev(&l2)))
}

/// Exact square root of a non-negative rational square.
pub fn rat_sqrt(r: &Rat) -> Option<Rat> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    (&n * &n == *r.numer() && &d * &d == *r.denom()).then(|| Rat::new(n, d))
}
