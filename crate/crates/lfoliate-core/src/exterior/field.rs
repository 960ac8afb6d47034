use std::fmt;

use num_traits::Zero;

use crate::symcore::{var_name, Matrix, Monomial, Poly, Rat};

use super::ExtError;

/// Polynomial vector field `sum A_i d/dz_i`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct VField {
    comps: Vec<Poly>,
}

impl VField {
    pub fn new(comps: Vec<Poly>) -> Result<Self, ExtError> {
        let n = comps.len();
        if let Some(c) = comps.iter().find(|c| c.nvars() != n) {
            return Err(ExtError::VarCountMismatch { left: c.nvars(), right: n });
        }
        Ok(VField { comps })
    }

    pub fn zero(nvars: usize) -> Self {
        VField { comps: vec![Poly::zero(nvars); nvars] }
    }

    /// `R = sum z_i d/dz_i`.
    pub fn radial(nvars: usize) -> Self {
        VField { comps: (0..nvars).map(|i| Poly::var(nvars, i)).collect() }
    }

    /// Constant field `d/dz_i`.
    pub fn coordinate(nvars: usize, i: usize) -> Self {
        let mut f = Self::zero(nvars);
        f.comps[i] = Poly::one(nvars);
        f
    }

    /// `X = sum_j (A z)_j d/dz_j`.
    pub fn from_matrix(a: &Matrix) -> Self {
        let n = a.rows();
        let comps =
            (0..n).map(|j| Poly::from_terms(n, (0..n).map(|k| (Monomial::var(n, k), a[(j, k)].clone())))).collect();
        VField { comps }
    }

    pub fn nvars(&self) -> usize {
        self.comps.len()
    }

    pub fn comp(&self, i: usize) -> &Poly {
        &self.comps[i]
    }

    pub fn comps(&self) -> &[Poly] {
        &self.comps
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(Poly::is_zero)
    }

    /// Directional derivative `sum A_i dp/dz_i`.
    pub fn apply(&self, p: &Poly) -> Poly {
        let mut acc = Poly::zero(p.nvars());
        for i in p.support() {
            if !self.comps[i].is_zero() {
                acc = &acc + &(&self.comps[i] * &p.d(i));
            }
        }
        acc
    }

    /// `[X, Y]_j = X(B_j) - Y(A_j)`.
    pub fn bracket(&self, other: &VField) -> Result<VField, ExtError> {
        if self.nvars() != other.nvars() {
            return Err(ExtError::VarCountMismatch { left: self.nvars(), right: other.nvars() });
        }
        let comps = self.comps.iter().zip(&other.comps).map(|(a, b)| &self.apply(b) - &other.apply(a)).collect();
        Ok(VField { comps })
    }

    pub fn add(&self, other: &VField) -> VField {
        VField { comps: self.comps.iter().zip(&other.comps).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, other: &VField) -> VField {
        VField { comps: self.comps.iter().zip(&other.comps).map(|(a, b)| a - b).collect() }
    }

    pub fn scale(&self, c: &Rat) -> VField {
        VField { comps: self.comps.iter().map(|a| a.scale(c)).collect() }
    }

    pub fn mul_poly(&self, p: &Poly) -> VField {
        VField { comps: self.comps.iter().map(|a| a * p).collect() }
    }

    pub fn eval(&self, pt: &[Rat]) -> Vec<Rat> {
        self.comps.iter().map(|c| c.eval(pt).expect("point dimension")).collect()
    }

    /// Matrix of a homogeneous linear field.
    pub fn linear_matrix(&self) -> Option<Matrix> {
        let n = self.nvars();
        let mut a = Matrix::zeros(n, n);
        for (j, c) in self.comps.iter().enumerate() {
            for (m, v) in c.terms() {
                if m.degree() != 1 {
                    return None;
                }
                let k = m.exps().iter().position(|&e| e == 1).expect("degree one");
                a[(j, k)] = v.clone();
            }
        }
        Some(a)
    }

    /// Substitutes `z := images` in every component.
    pub fn compose(&self, images: &[Poly]) -> VField {
        VField { comps: self.comps.iter().map(|c| c.compose(images).expect("substitution arity")).collect() }
    }

    /// Renders as `(A_i)*d/dz_i + ...`.
    pub fn render(&self, offset: usize) -> String {
        let parts: Vec<String> = self
            .comps
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| format!("({})*d/d{}", c.render(offset), var_name(i + offset)))
            .collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

impl fmt::Display for VField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(0))
    }
}

/// Homogeneous linear vector field together with its matrix.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct LinField {
    field: VField,
    matrix: Matrix,
}

impl LinField {
    pub fn from_matrix(matrix: Matrix) -> Self {
        assert_eq!(matrix.rows(), matrix.cols(), "linear field needs a square matrix");
        LinField { field: VField::from_matrix(&matrix), matrix }
    }

    pub fn radial(nvars: usize) -> Self {
        Self::from_matrix(Matrix::identity(nvars))
    }

    pub fn field(&self) -> &VField {
        &self.field
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn nvars(&self) -> usize {
        self.matrix.rows()
    }

    /// Bracket through matrices: `[X, Y]` has matrix `BA - AB`.
    pub fn bracket(&self, other: &LinField) -> LinField {
        let (a, b) = (&self.matrix, &other.matrix);
        LinField::from_matrix(&(b * a) - &(a * b))
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }

    pub fn add(&self, other: &LinField) -> LinField {
        LinField::from_matrix(&self.matrix + &other.matrix)
    }

    pub fn scale(&self, c: &Rat) -> LinField {
        LinField::from_matrix(self.matrix.scale(c))
    }

    /// Linear combination `sum c_i f_i` (empty sum needs `nvars`).
    pub fn combination(nvars: usize, coeffs: &[Rat], fields: &[LinField]) -> LinField {
        let mut m = Matrix::zeros(nvars, nvars);
        for (c, f) in coeffs.iter().zip(fields) {
            if !c.is_zero() {
                m = &m + &f.matrix.scale(c);
            }
        }
        LinField::from_matrix(m)
    }
}

impl TryFrom<VField> for LinField {
    type Error = ExtError;
    fn try_from(field: VField) -> Result<Self, ExtError> {
        let matrix = field.linear_matrix().ok_or(ExtError::NotLinear)?;
        Ok(LinField { field, matrix })
    }
}

impl fmt::Display for LinField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.field.fmt(f)
    }
}
