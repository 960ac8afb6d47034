use std::collections::BTreeMap;

use serde::Deserialize;
use serde_json::Value;

use super::CatalogError;
use crate::frontend::{self, Context, ParseError};

/// One loaded catalog file.
#[derive(Clone, Debug)]
pub struct Catalog {
    pub name: String,
    pub entries: Vec<CatalogEntry>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Deserialize, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Confidence {
    Theorem,
    /// The source only backs the entry by a computer-algebra session.
    PaperMaple,
}

impl Confidence {
    pub fn as_str(&self) -> &'static str {
        match self {
            Confidence::Theorem => "theorem",
            Confidence::PaperMaple => "paper-maple",
        }
    }
}

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub id: String,
    /// Projective dimension; the ambient space is `C^{n+1}`.
    pub n: usize,
    pub anchor: String,
    pub confidence: Confidence,
    pub params: Vec<String>,
    /// Name index of the first ambient variable.
    pub first_var: usize,
    pub note: Option<String>,
    pub kind: EntryKind,
}

#[derive(Clone, Debug)]
pub enum EntryKind {
    Foliation(Box<FoliationSpec>),
    Negative(NegativeSpec),
    Cubic(CubicSpec),
    CodimP(CodimPSpec),
    Obstruction(ObstructionSpec),
}

impl EntryKind {
    pub fn name(&self) -> &'static str {
        match self {
            EntryKind::Foliation(_) => "foliation",
            EntryKind::Negative(_) => "negative",
            EntryKind::Cubic(_) => "cubic",
            EntryKind::CodimP(_) => "codim_p",
            EntryKind::Obstruction(_) => "obstruction",
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
pub struct Instantiation {
    pub values: BTreeMap<String, String>,
    /// Generators computed for entries whose template leaves them open.
    #[serde(default)]
    pub generators: Option<Vec<String>>,
    #[serde(default)]
    pub observed_alpha: Option<Vec<String>>,
    #[serde(default)]
    pub annihilator_dim: Option<usize>,
}

impl Instantiation {
    pub fn describe(&self) -> String {
        if self.values.is_empty() {
            return "{}".into();
        }
        let parts: Vec<String> = self.values.iter().map(|(k, v)| format!("{k}={v}")).collect();
        format!("{{{}}}", parts.join(", "))
    }
}

#[derive(Clone, Debug, Deserialize)]
pub struct IntegralTemplate {
    pub log: Vec<(String, String)>,
    #[serde(default)]
    pub exp_num: Option<String>,
    #[serde(default)]
    pub exp_den: Option<String>,
}

#[derive(Clone, Debug, Deserialize)]
pub struct PresentationSpec {
    pub name: String,
    #[serde(default)]
    pub params: BTreeMap<String, String>,
}

/// `lhs == rhs` or `lhs != rhs` over the parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub text: String,
    pub lhs: String,
    pub rhs: String,
    pub equal: bool,
}

impl Constraint {
    pub fn parse(text: &str) -> Option<Self> {
        let (split, equal) = if let Some(k) = text.find("!=") { (k, false) } else { (text.find("==")?, true) };
        Some(Constraint {
            text: text.to_string(),
            lhs: text[..split].trim().to_string(),
            rhs: text[split + 2..].trim().to_string(),
            equal,
        })
    }

    pub fn holds(&self, ctx: &Context) -> Result<bool, ParseError> {
        let l = frontend::parse_rat(&self.lhs, ctx)?;
        let r = frontend::parse_rat(&self.rhs, ctx)?;
        Ok((l == r) == self.equal)
    }
}

/// Integral, generators and presentation as stated, with the instantiations
/// they are checked at.
#[derive(Clone, Debug)]
pub struct Block {
    pub integral: IntegralTemplate,
    /// `None`: generators are stored per instantiation.
    pub generators: Option<Vec<String>>,
    pub presentation: Option<PresentationSpec>,
    pub constraints: Vec<Constraint>,
    /// Parameter names the instantiations assign.
    pub params: Vec<String>,
    pub instantiations: Vec<Instantiation>,
}

/// A simplified variant of the integral, optionally after a substitution of
/// variables.
#[derive(Clone, Debug, Deserialize)]
pub struct SimpleForm {
    pub integral: IntegralTemplate,
    #[serde(default)]
    pub substitution: BTreeMap<String, String>,
    #[serde(default)]
    pub note: Option<String>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Extra {
    /// `w / poly` is closed.
    IntegratingFactor {
        poly: String,
    },
    /// Every coefficient of the form vanishes when the listed variables do.
    VanishesOn {
        vars: Vec<String>,
    },
    /// Weighted degrees of numerator and denominator both equal `value`.
    LeafDegree {
        value: i64,
    },
    Symmetry {
        field: String,
    },
    /// Generic rank drops at the first `points` schedule points with the
    /// listed variables set to zero.
    RankDrop {
        vars: Vec<String>,
        points: usize,
    },
    /// Dimension of the linear fields annihilating the form.
    TangentDim {
        value: usize,
    },
}

#[derive(Clone, Debug)]
pub struct FoliationSpec {
    pub degree: i64,
    pub verbatim: Block,
    /// Corrected block for entries whose printed form fails.
    pub correction: Option<(Block, String)>,
    pub known_issue: Option<String>,
    pub simple: Option<SimpleForm>,
    pub extra: Vec<Extra>,
}

#[derive(Clone, Debug, Deserialize)]
pub struct BracketConstraint {
    pub bracket_with: String,
    pub equals: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Expect {
    Feasible,
    Infeasible,
}

/// A system `[U, B_i] = C_i` for an unknown linear field U.
#[derive(Clone, Debug)]
pub struct NegativeSpec {
    pub unknown: String,
    pub constraints: Vec<BracketConstraint>,
    pub expect: Expect,
    pub solution_dim: Option<usize>,
    pub instantiations: Vec<Instantiation>,
}

#[derive(Clone, Debug)]
pub struct CubicSpec {
    pub poly: String,
    pub generic_rank: usize,
    pub fields: Option<Vec<String>>,
    pub instantiations: Vec<Instantiation>,
}

#[derive(Clone, Debug)]
pub struct CodimPSpec {
    pub p: usize,
    pub degree: i64,
    pub tangent: Vec<String>,
    pub symmetries: Vec<String>,
    pub first_integrals: Vec<IntegralTemplate>,
    pub tangent_dim: usize,
    pub leaf_rank: usize,
    pub instantiations: Vec<Instantiation>,
}

#[derive(Clone, Debug)]
pub struct ObstructionSpec {
    pub degree: i64,
    pub form: String,
    pub tangent_dim: usize,
    pub max_rank: usize,
    pub instantiations: Vec<Instantiation>,
}

impl CatalogEntry {
    /// All instantiations, including those of a correction block.
    pub fn all_instantiations(&self) -> Vec<&Instantiation> {
        match &self.kind {
            EntryKind::Foliation(f) => {
                let mut v: Vec<&Instantiation> = f.verbatim.instantiations.iter().collect();
                if let Some((c, _)) = &f.correction {
                    v.extend(c.instantiations.iter());
                }
                v
            }
            EntryKind::Negative(s) => s.instantiations.iter().collect(),
            EntryKind::Cubic(s) => s.instantiations.iter().collect(),
            EntryKind::CodimP(s) => s.instantiations.iter().collect(),
            EntryKind::Obstruction(s) => s.instantiations.iter().collect(),
        }
    }

    /// Parsing context for an instantiation: `n + 1` variables and the
    /// parameter values.
    pub fn context(&self, inst: &Instantiation) -> Result<Context, CatalogError> {
        self.context_for(inst, &self.params)
    }

    /// As [`Self::context`] with an explicit parameter list, for correction
    /// blocks that introduce parameters of their own.
    pub fn context_for(&self, inst: &Instantiation, params: &[String]) -> Result<Context, CatalogError> {
        let base = Context::new(self.n + 1).with_first_var(self.first_var);
        let mut ctx = base.clone();
        for name in params {
            let Some(text) = inst.values.get(name) else {
                return Err(self.invalid(format!("instantiation {} has no value for '{name}'", inst.describe())));
            };
            let v = frontend::parse_rat(text, &base).map_err(|e| self.parse_err(format!("value of {name}"), e))?;
            ctx = ctx.with_param(name.clone(), v);
        }
        if let Some(k) = inst.values.keys().find(|k| !params.contains(k)) {
            return Err(self.invalid(format!("instantiation sets unknown parameter '{k}'")));
        }
        Ok(ctx)
    }

    pub(crate) fn invalid(&self, msg: String) -> CatalogError {
        CatalogError::Invalid { id: self.id.clone(), msg }
    }

    pub(crate) fn parse_err(&self, what: impl Into<String>, source: ParseError) -> CatalogError {
        CatalogError::Parse { id: self.id.clone(), what: what.into(), source }
    }
}

pub(super) enum LoadError {
    Json(serde_json::Error),
    Catalog(CatalogError),
}

impl From<serde_json::Error> for LoadError {
    fn from(e: serde_json::Error) -> Self {
        LoadError::Json(e)
    }
}

impl From<CatalogError> for LoadError {
    fn from(e: CatalogError) -> Self {
        LoadError::Catalog(e)
    }
}

#[derive(Deserialize)]
struct RawFile {
    #[serde(default)]
    catalog: Option<String>,
    entries: Vec<Value>,
}

#[derive(Deserialize)]
struct RawCommon {
    id: String,
    n: usize,
    #[serde(default)]
    anchor: String,
    confidence: Confidence,
    #[serde(default)]
    params: Vec<String>,
    #[serde(default)]
    first_var: usize,
    #[serde(default)]
    note: Option<String>,
    #[serde(default)]
    kind: Option<String>,
}

#[derive(Deserialize)]
struct RawBlock {
    integral: IntegralTemplate,
    #[serde(default)]
    generators: Option<Vec<String>>,
    #[serde(default)]
    presentation: Option<PresentationSpec>,
    #[serde(default)]
    constraints: Vec<String>,
    #[serde(default)]
    params: Option<Vec<String>>,
    instantiations: Vec<Instantiation>,
    #[serde(default)]
    note: Option<String>,
}

#[derive(Deserialize)]
struct RawFoliation {
    degree: i64,
    #[serde(flatten)]
    block: RawBlock,
    #[serde(default)]
    correction: Option<RawBlock>,
    #[serde(default)]
    known_issue: Option<String>,
    #[serde(default)]
    simple: Option<SimpleForm>,
    #[serde(default)]
    extra: Vec<Extra>,
}

#[derive(Deserialize)]
struct RawNegative {
    unknown: String,
    constraints: Vec<BracketConstraint>,
    expect: Expect,
    #[serde(default)]
    solution_dim: Option<usize>,
    instantiations: Vec<Instantiation>,
}

#[derive(Deserialize)]
struct RawCubic {
    poly: String,
    generic_rank: usize,
    #[serde(default)]
    fields: Option<Vec<String>>,
    instantiations: Vec<Instantiation>,
}

#[derive(Deserialize)]
struct RawCodimP {
    p: usize,
    degree: i64,
    tangent: Vec<String>,
    symmetries: Vec<String>,
    first_integrals: Vec<IntegralTemplate>,
    tangent_dim: usize,
    leaf_rank: usize,
    instantiations: Vec<Instantiation>,
}

#[derive(Deserialize)]
struct RawObstruction {
    degree: i64,
    form: String,
    tangent_dim: usize,
    max_rank: usize,
    instantiations: Vec<Instantiation>,
}

/// A block without its own parameter list uses the entry's parameters plus
/// any its instantiations assign.
fn block(id: &str, entry_params: &[String], raw: RawBlock) -> Result<(Block, Option<String>), CatalogError> {
    let params = raw.params.unwrap_or_else(|| {
        let mut p = entry_params.to_vec();
        for k in raw.instantiations.iter().flat_map(|i| i.values.keys()) {
            if !p.contains(k) {
                p.push(k.clone());
            }
        }
        p
    });
    let constraints = raw
        .constraints
        .iter()
        .map(|c| {
            Constraint::parse(c).ok_or_else(|| CatalogError::Invalid {
                id: id.into(),
                msg: format!("constraint '{c}' has no == or !="),
            })
        })
        .collect::<Result<_, _>>()?;
    let b = Block {
        integral: raw.integral,
        generators: raw.generators,
        presentation: raw.presentation,
        constraints,
        params,
        instantiations: raw.instantiations,
    };
    Ok((b, raw.note))
}

fn entry_from_value(v: Value) -> Result<CatalogEntry, LoadError> {
    let common: RawCommon = serde_json::from_value(v.clone())?;
    let id = common.id.clone();
    let kind = match common.kind.as_deref() {
        None => {
            let raw: RawFoliation = serde_json::from_value(v)?;
            let mut vb = raw.block;
            vb.params = Some(common.params.clone());
            let (verbatim, _) = block(&id, &common.params, vb)?;
            let correction = match raw.correction {
                Some(c) => {
                    let (b, note) = block(&id, &common.params, c)?;
                    Some((b, note.unwrap_or_default()))
                }
                None => None,
            };
            EntryKind::Foliation(Box::new(FoliationSpec {
                degree: raw.degree,
                verbatim,
                correction,
                known_issue: raw.known_issue,
                simple: raw.simple,
                extra: raw.extra,
            }))
        }
        Some("negative") => {
            let r: RawNegative = serde_json::from_value(v)?;
            EntryKind::Negative(NegativeSpec {
                unknown: r.unknown,
                constraints: r.constraints,
                expect: r.expect,
                solution_dim: r.solution_dim,
                instantiations: r.instantiations,
            })
        }
        Some("cubic") => {
            let r: RawCubic = serde_json::from_value(v)?;
            EntryKind::Cubic(CubicSpec {
                poly: r.poly,
                generic_rank: r.generic_rank,
                fields: r.fields,
                instantiations: r.instantiations,
            })
        }
        Some("codim_p") => {
            let r: RawCodimP = serde_json::from_value(v)?;
            EntryKind::CodimP(CodimPSpec {
                p: r.p,
                degree: r.degree,
                tangent: r.tangent,
                symmetries: r.symmetries,
                first_integrals: r.first_integrals,
                tangent_dim: r.tangent_dim,
                leaf_rank: r.leaf_rank,
                instantiations: r.instantiations,
            })
        }
        Some("obstruction") => {
            let r: RawObstruction = serde_json::from_value(v)?;
            EntryKind::Obstruction(ObstructionSpec {
                degree: r.degree,
                form: r.form,
                tangent_dim: r.tangent_dim,
                max_rank: r.max_rank,
                instantiations: r.instantiations,
            })
        }
        Some(other) => return Err(CatalogError::Invalid { id, msg: format!("unknown kind '{other}'") }.into()),
    };
    Ok(CatalogEntry {
        id: common.id,
        n: common.n,
        anchor: common.anchor,
        confidence: common.confidence,
        params: common.params,
        first_var: common.first_var,
        note: common.note,
        kind,
    })
}

/// Instantiations respect the constraints, parametric entries carry at
/// least two of them, and every template parses at every instantiation.
fn validate(e: &CatalogEntry) -> Result<(), CatalogError> {
    let insts = e.all_instantiations();
    if insts.is_empty() {
        return Err(e.invalid("no instantiations".into()));
    }
    if !e.params.is_empty() && insts.len() < 2 {
        return Err(e.invalid("a parametric entry needs at least two instantiations".into()));
    }
    if let EntryKind::Foliation(f) = &e.kind {
        let blocks = std::iter::once(&f.verbatim).chain(f.correction.as_ref().map(|(b, _)| b));
        for b in blocks {
            for inst in &b.instantiations {
                let ctx = e.context_for(inst, &b.params)?;
                for c in &b.constraints {
                    let ok = c.holds(&ctx).map_err(|err| e.parse_err(format!("constraint '{}'", c.text), err))?;
                    if !ok {
                        return Err(CatalogError::Constraint {
                            id: e.id.clone(),
                            constraint: c.text.clone(),
                            values: inst.describe(),
                        });
                    }
                }
            }
        }
    }
    super::verify::instantiate_all(e)
}

pub(super) fn parse_catalog(text: &str, fallback_name: &str) -> Result<Catalog, LoadError> {
    if text.trim().is_empty() {
        return Ok(Catalog { name: fallback_name.to_string(), entries: Vec::new() });
    }
    let raw: RawFile = serde_json::from_str(text)?;
    let mut entries = Vec::with_capacity(raw.entries.len());
    let mut seen = std::collections::BTreeSet::new();
    for (k, v) in raw.entries.into_iter().enumerate() {
        let label = v.get("id").and_then(Value::as_str).map_or_else(|| format!("#{k}"), str::to_string);
        let e = entry_from_value(v).map_err(|err| match err {
            LoadError::Json(j) => LoadError::Catalog(CatalogError::Invalid { id: label, msg: j.to_string() }),
            other => other,
        })?;
        if !seen.insert(e.id.clone()) {
            return Err(CatalogError::DuplicateId(e.id).into());
        }
        validate(&e)?;
        entries.push(e);
    }
    Ok(Catalog { name: raw.catalog.unwrap_or_else(|| fallback_name.to_string()), entries })
}
