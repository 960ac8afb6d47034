//! Lie algebras of linear vector fields over Q: spans, structure constants,
//! derived series, element tests, bracket equations and presentations.

mod algebra;
mod span;

pub use algebra::{alpha_kappa, rat_sqrt, Algebra, Classification, Presentation};
pub(crate) use span::coords_in as coords;
pub use span::LieSpan;

use num_traits::{One, Zero};

use crate::exterior::LinField;
use crate::symcore::{gcd, Matrix, Monomial, Poly, Rat};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LieError {
    #[error("span is not closed under the bracket")]
    NotClosed,
    #[error("presentation needs dimension {expected}, algebra has {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("variable count mismatch: {left} vs {right}")]
    VarCountMismatch { left: usize, right: usize },
}

/// `A^{n+1} = 0`.
pub fn element_is_nilpotent(x: &LinField) -> bool {
    x.matrix().pow(x.nvars() as u32).is_zero()
}

/// Minimal polynomial of a square matrix, monic, in one variable.
pub fn minimal_polynomial(a: &Matrix) -> Poly {
    let n = a.rows();
    let mut powers: Vec<Vec<Rat>> = vec![Matrix::identity(n).flat().to_vec()];
    let mut cur = Matrix::identity(n);
    loop {
        cur = &cur * a;
        let v = cur.flat().to_vec();
        let cols = powers.clone();
        let m = Matrix::from_rows((0..v.len()).map(|r| cols.iter().map(|c| c[r].clone()).collect()).collect());
        if let Some((x, _)) = m.solve(&v) {
            // A^k = sum x_i A^i
            let k = powers.len() as u32;
            let mut p = Poly::term(1, Monomial::from_exps(vec![k]), Rat::one());
            for (i, c) in x.iter().enumerate() {
                p = &p - &Poly::term(1, Monomial::from_exps(vec![i as u32]), c.clone());
            }
            return p;
        }
        powers.push(v);
    }
}

/// Squarefree minimal polynomial over Q, i.e. diagonalizable over C.
pub fn element_is_semisimple(x: &LinField) -> bool {
    let m = minimal_polynomial(x.matrix());
    gcd(&m, &m.d(0)).is_constant()
}

/// Solution set of a system of bracket equations `[X, B_i] = C_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BracketSolution {
    Infeasible,
    Feasible { particular: LinField, basis: Vec<LinField> },
}

impl BracketSolution {
    pub fn is_feasible(&self) -> bool {
        matches!(self, BracketSolution::Feasible { .. })
    }

    /// Dimension of the solution space (the direction of the affine set).
    pub fn dimension(&self) -> Option<usize> {
        match self {
            BracketSolution::Infeasible => None,
            BracketSolution::Feasible { basis, .. } => Some(basis.len()),
        }
    }
}

/// Solves `[X, B_i] = C_i` for a linear field X, either over all
/// `(n+1) x (n+1)` matrices or inside `ambient`.
pub fn solve_bracket_system(
    nvars: usize,
    constraints: &[(LinField, LinField)],
    ambient: Option<&LieSpan>,
) -> Result<BracketSolution, LieError> {
    for (b, c) in constraints {
        for f in [b, c] {
            if f.nvars() != nvars {
                return Err(LieError::VarCountMismatch { left: f.nvars(), right: nvars });
            }
        }
    }
    let nn = nvars * nvars;
    // Generating fields for the unknown: matrix units or the ambient basis.
    let gens: Vec<LinField> = match ambient {
        Some(s) => s.basis().to_vec(),
        None => (0..nn)
            .map(|k| {
                let mut m = Matrix::zeros(nvars, nvars);
                m[(k / nvars, k % nvars)] = Rat::one();
                LinField::from_matrix(m)
            })
            .collect(),
    };
    let mut rows: Vec<Vec<Rat>> = Vec::new();
    let mut rhs: Vec<Rat> = Vec::new();
    for (b, c) in constraints {
        let images: Vec<Vec<Rat>> = gens.iter().map(|g| g.bracket(b).matrix().flat().to_vec()).collect();
        for e in 0..nn {
            rows.push(images.iter().map(|im| im[e].clone()).collect());
            rhs.push(c.matrix().flat()[e].clone());
        }
    }
    let k = gens.len();
    if rows.is_empty() {
        rows.push(vec![Rat::zero(); k]);
        rhs.push(Rat::zero());
    }
    let sys = Matrix::from_rows(rows);
    Ok(match sys.solve(&rhs) {
        None => BracketSolution::Infeasible,
        Some((x, ns)) => BracketSolution::Feasible {
            particular: LinField::combination(nvars, &x, &gens),
            basis: ns.iter().map(|v| LinField::combination(nvars, v, &gens)).collect(),
        },
    })
}

/// Outcome of matching a span against a presentation, modulo C R.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PresentationMatch {
    pub matched: bool,
    pub observed: Classification,
    /// Fields realizing the presentation's relations modulo R, when a
    /// rational basis change exists.
    pub witness: Option<Vec<LinField>>,
}

/// Identifies `(span + C R) / C R` and compares it with `p`. For `L_alpha`
/// the comparison is on the class `{alpha, 1/alpha}`.
pub fn matches_presentation(s: &LieSpan, p: &Presentation) -> Result<PresentationMatch, LieError> {
    let alg = Algebra::modulo_radial(s.nvars(), s.basis())?;
    if let Some(a) = p.arity() {
        if a != alg.dim() {
            return Err(LieError::DimensionMismatch { expected: a, got: alg.dim() });
        }
    }
    let (observed, wit) = alg.classify();
    let matched = match (p, &observed) {
        (Presentation::Abelian, Classification::Abelian(_)) => true,
        (Presentation::Affine2, Classification::Affine2) => true,
        (Presentation::LAlpha(None), Classification::LAlpha { .. }) => true,
        (Presentation::LAlpha(Some(a)), Classification::LAlpha { kappa, .. }) => alpha_kappa(a).as_ref() == Some(kappa),
        (Presentation::Heis, Classification::Heis) => true,
        (Presentation::AffSplit, Classification::AffSplit) => true,
        (Presentation::Shear, Classification::Shear) => true,
        (Presentation::Sl2, Classification::Sl2) => true,
        _ => false,
    };
    let witness = wit.and_then(|w| alg.witness_fields(&w));
    Ok(PresentationMatch { matched, observed, witness })
}

/// Classification of `span(fields)` modulo C R.
pub fn classify_modulo_radial(nvars: usize, fields: &[LinField]) -> Result<Classification, LieError> {
    Ok(Algebra::modulo_radial(nvars, fields)?.classify().0)
}

/// Renders a structure-constant table, one `[e_i, e_j] = ...` line per pair.
pub fn render_structure_constants(table: &[Vec<Vec<Rat>>]) -> String {
    let k = table.len();
    let mut out = String::new();
    for i in 0..k {
        for j in i + 1..k {
            let terms: Vec<String> = table[i][j]
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(l, c)| if c.is_one() { format!("e{l}") } else { format!("({c})*e{l}") })
                .collect();
            let rhs = if terms.is_empty() { "0".to_string() } else { terms.join(" + ") };
            out.push_str(&format!("[e{i}, e{j}] = {rhs}\n"));
        }
    }
    out
}
