use num_traits::Zero;

use crate::exterior::LinField;
use crate::symcore::{Matrix, Rat};

use super::LieError;

/// Linearly independent linear fields, viewed as vectors in Q^{(n+1)^2}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieSpan {
    nvars: usize,
    basis: Vec<LinField>,
}

fn vectorize(f: &LinField) -> Vec<Rat> {
    f.matrix().flat().to_vec()
}

/// Coordinates of `v` in the columns `cols`, or `None` if outside their span.
pub(crate) fn coords_in(cols: &[Vec<Rat>], v: &[Rat]) -> Option<Vec<Rat>> {
    if cols.is_empty() {
        return v.iter().all(Zero::is_zero).then(Vec::new);
    }
    let m = Matrix::from_rows((0..v.len()).map(|r| cols.iter().map(|c| c[r].clone()).collect()).collect());
    m.solve(v).map(|(x, _)| x)
}

impl LieSpan {
    /// Canonical basis: the nonzero rows of the reduced echelon form.
    pub fn reduce(nvars: usize, fields: &[LinField]) -> Result<Self, LieError> {
        check_nvars(nvars, fields)?;
        if fields.is_empty() {
            return Ok(LieSpan { nvars, basis: Vec::new() });
        }
        let mut m = Matrix::from_rows(fields.iter().map(vectorize).collect());
        let r = m.rref().len();
        let basis = (0..r).map(|i| LinField::from_matrix(Matrix::from_flat(nvars, m.row(i).to_vec()))).collect();
        Ok(LieSpan { nvars, basis })
    }

    /// Keeps the given fields in order, dropping each one that depends on
    /// the previously kept ones.
    pub fn independent(nvars: usize, fields: &[LinField]) -> Result<Self, LieError> {
        check_nvars(nvars, fields)?;
        let mut kept: Vec<LinField> = Vec::new();
        let mut vecs: Vec<Vec<Rat>> = Vec::new();
        for f in fields {
            let v = vectorize(f);
            if coords_in(&vecs, &v).is_none() {
                vecs.push(v);
                kept.push(f.clone());
            }
        }
        Ok(LieSpan { nvars, basis: kept })
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[LinField] {
        &self.basis
    }

    pub fn coords(&self, f: &LinField) -> Option<Vec<Rat>> {
        let cols: Vec<Vec<Rat>> = self.basis.iter().map(vectorize).collect();
        coords_in(&cols, &vectorize(f))
    }

    pub fn contains(&self, f: &LinField) -> bool {
        self.coords(f).is_some()
    }

    /// `table[i][j]` = coordinates of `[b_i, b_j]`, or `None` if some bracket
    /// leaves the span.
    pub fn structure_constants(&self) -> Option<Vec<Vec<Vec<Rat>>>> {
        let k = self.dim();
        let cols: Vec<Vec<Rat>> = self.basis.iter().map(vectorize).collect();
        let mut table = vec![vec![vec![Rat::zero(); k]; k]; k];
        for i in 0..k {
            for j in i + 1..k {
                let c = coords_in(&cols, &vectorize(&self.basis[i].bracket(&self.basis[j])))?;
                table[j][i] = c.iter().map(|x| -x.clone()).collect();
                table[i][j] = c;
            }
        }
        Some(table)
    }

    pub fn is_bracket_closed(&self) -> bool {
        self.structure_constants().is_some()
    }

    /// Dimensions of g, [g,g], [[g,g],[g,g]], ... until the sequence stabilizes.
    pub fn derived_series(&self) -> Result<Vec<usize>, LieError> {
        if !self.is_bracket_closed() {
            return Err(LieError::NotClosed);
        }
        let mut dims = vec![self.dim()];
        let mut cur = self.clone();
        loop {
            let mut brs = Vec::new();
            for i in 0..cur.dim() {
                for j in i + 1..cur.dim() {
                    brs.push(cur.basis[i].bracket(&cur.basis[j]));
                }
            }
            let next = LieSpan::reduce(self.nvars, &brs)?;
            dims.push(next.dim());
            if next.dim() == 0 || next.dim() == cur.dim() {
                return Ok(dims);
            }
            cur = next;
        }
    }

    pub fn is_solvable(&self) -> Result<bool, LieError> {
        Ok(self.derived_series()?.last() == Some(&0))
    }
}

fn check_nvars(nvars: usize, fields: &[LinField]) -> Result<(), LieError> {
    match fields.iter().find(|f| f.nvars() != nvars) {
        Some(f) => Err(LieError::VarCountMismatch { left: f.nvars(), right: nvars }),
        None => Ok(()),
    }
}
