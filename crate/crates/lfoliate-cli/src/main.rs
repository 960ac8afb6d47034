//! `lfoliate`: command-line access to the foliation engine.

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context as _, Result};
use clap::{Parser, Subcommand, ValueEnum};

use lfoliate_core::catalog::{self, Catalog};
use lfoliate_core::exterior::{LinField, VField};
use lfoliate_core::foliation::{self, TangentMode};
use lfoliate_core::frontend::{self, Context};
use lfoliate_core::invariants::{self, InducedAction, MatrixKind};
use lfoliate_core::linlie::{self, LieSpan, Presentation};
use lfoliate_core::symcore::Poly;

#[derive(Parser)]
#[command(name = "lfoliate", version, about = "Exact checks for foliations of projective space")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    /// Fields X with i_X w = 0.
    Omega,
    /// Fields X with i_X dw = 0.
    Domega,
}

#[derive(Subcommand)]
enum Cmd {
    /// Checks that every field (and R) kills the logarithmic derivative of an integral.
    CheckIntegral {
        #[arg(long)]
        integral: String,
        #[arg(long, num_args = 1.., required = true)]
        fields: Vec<String>,
        /// Projective dimension; inferred from the variables when omitted.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 0)]
        first_var: usize,
        /// Do not add the radial field.
        #[arg(long)]
        no_radial: bool,
    },
    /// i_R i_X1 ... vol for n-1 fields on C^{n+1}, reduced.
    DefiningForm {
        #[arg(long, num_args = 1.., required = true)]
        fields: Vec<String>,
        #[arg(long, default_value_t = 0)]
        first_var: usize,
    },
    /// Linear fields annihilating a form.
    TangentAlgebra {
        #[arg(long)]
        form: String,
        #[arg(long, value_enum, default_value_t = Mode::Omega)]
        mode: Mode,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 0)]
        first_var: usize,
    },
    /// Structure constants, derived series and presentation of a span of linear fields.
    LieAnalyze {
        #[arg(long, num_args = 1.., required = true)]
        fields: Vec<String>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 0)]
        first_var: usize,
        /// Presentation to match modulo C R: abelian, affine2, L_alpha, heis, aff_split, shear, sl2.
        #[arg(long)]
        presentation: Option<String>,
        #[arg(long, requires = "presentation")]
        alpha: Option<String>,
    },
    /// Induced actions on coefficient spaces and their invariants.
    Invariants {
        /// sl2-binary:<d>, sl:<k>:sym or sl:<k>:asym.
        #[arg(long)]
        action: String,
        /// Only this invariant: disc, P, H, Delta, det, pf.
        #[arg(long)]
        check: Option<String>,
    },
    /// Re-verifies catalog entries.
    Reproduce {
        /// A catalog file or directory; defaults to LFOLIATE_CATALOG_DIR or the bundled catalogs.
        #[arg(long)]
        catalog: Option<PathBuf>,
        #[arg(long)]
        only: Option<String>,
        #[arg(long)]
        json: bool,
        /// Skip the per-entry timings normally written to stderr.
        #[arg(long)]
        no_timings: bool,
    },
}

/// Largest variable index mentioned as `z<k>`, `z{k}`, `dz<k>` or `d/dz<k>`.
fn max_var(texts: &[&str]) -> Option<usize> {
    let mut best = None;
    for t in texts {
        let b = t.as_bytes();
        for (i, &c) in b.iter().enumerate() {
            if c != b'z' || (i > 0 && (b[i - 1].is_ascii_alphanumeric() && b[i - 1] != b'd' || b[i - 1] == b'_')) {
                continue;
            }
            let rest = &t[i + 1..];
            let digits: String = rest.trim_start_matches('{').chars().take_while(char::is_ascii_digit).collect();
            if let Ok(k) = digits.parse::<usize>() {
                best = best.max(Some(k));
            }
        }
    }
    best
}

fn context(texts: &[&str], n: Option<usize>, first_var: usize) -> Result<Context> {
    let nvars = match n {
        Some(n) => n + 1,
        None => {
            let m = max_var(texts).ok_or_else(|| anyhow!("no variables found; pass --n"))?;
            if m < first_var {
                bail!("variables start below --first-var");
            }
            m + 1 - first_var
        }
    };
    Ok(Context::new(nvars).with_first_var(first_var))
}

fn parse_fields(texts: &[String], ctx: &Context) -> Result<Vec<VField>> {
    texts.iter().map(|t| frontend::parse_field(t, ctx).with_context(|| format!("field '{t}'"))).collect()
}

fn linear(fields: &[VField], off: usize) -> Result<Vec<LinField>> {
    fields
        .iter()
        .map(|f| f.linear_matrix().map(LinField::from_matrix).ok_or_else(|| anyhow!("{} is not linear", f.render(off))))
        .collect()
}

fn check_integral(
    integral: &str,
    fields: &[String],
    n: Option<usize>,
    first_var: usize,
    no_radial: bool,
) -> Result<bool> {
    let mut texts: Vec<&str> = fields.iter().map(String::as_str).collect();
    texts.push(integral);
    let ctx = context(&texts, n, first_var)?;
    let f = frontend::parse_integral(integral, &ctx).context("integral")?;
    let mut xs = parse_fields(fields, &ctx)?;
    if !no_radial {
        xs.push(VField::radial(ctx.nvars));
    }
    let res = f.residuals(&xs)?;
    let ok = res.iter().all(Poly::is_zero);
    println!("integral: {}", f.render(first_var));
    for (x, r) in xs.iter().zip(&res) {
        println!("{}: {}", x.render(first_var), if r.is_zero() { "0".to_string() } else { r.render(first_var) });
    }
    println!("{}", if ok { "PASS" } else { "FAIL" });
    Ok(ok)
}

fn defining_form(fields: &[String], first_var: usize) -> Result<bool> {
    let ctx = Context::new(fields.len() + 2).with_first_var(first_var);
    let xs = parse_fields(fields, &ctx)?;
    let raw = foliation::contract_volume(ctx.nvars, &[&[VField::radial(ctx.nvars)], xs.as_slice()].concat())?;
    let f = foliation::FoliationForm::from_raw(&raw)?;
    println!("omega: {}", f.omega.render(first_var));
    println!("degree: {}", f.nu);
    if f.extracted_factor.is_constant() {
        println!("gcd: 1");
    } else {
        println!("gcd: {}", f.extracted_factor.render(first_var));
    }
    let descends = foliation::check_descent(&f.omega);
    let integrable = foliation::check_integrable(&f.omega);
    println!("descends: {descends}");
    println!("integrable: {integrable}");
    Ok(descends && integrable)
}

fn tangent_algebra(form: &str, mode: Mode, n: Option<usize>, first_var: usize) -> Result<bool> {
    let ctx = context(&[form], n, first_var)?;
    let w = frontend::parse_form(form, &ctx).context("form")?;
    let mode = match mode {
        Mode::Omega => TangentMode::AnnihilateOmega,
        Mode::Domega => TangentMode::AnnihilateDOmega,
    };
    let span = foliation::tangent_linear_algebra(&w, mode)?;
    println!("dimension: {}", span.dim());
    for b in span.basis() {
        println!("  {}", b.field().render(first_var));
    }
    let fields: Vec<VField> = span.basis().iter().map(|b| b.field().clone()).collect();
    println!("generic pointwise dimension: {}", foliation::generic_dimension(&fields));
    Ok(true)
}

fn lie_analyze(
    fields: &[String],
    n: Option<usize>,
    first_var: usize,
    presentation: Option<&str>,
    alpha: Option<&str>,
) -> Result<bool> {
    let texts: Vec<&str> = fields.iter().map(String::as_str).collect();
    let ctx = context(&texts, n, first_var)?;
    let xs = parse_fields(fields, &ctx)?;
    let lin = linear(&xs, first_var)?;
    let span = LieSpan::independent(ctx.nvars, &lin)?;
    println!("dimension: {}", span.dim());
    match span.structure_constants() {
        Some(t) => {
            println!("structure constants:");
            print!("{}", linlie::render_structure_constants(&t));
            println!("derived series: {:?}", span.derived_series()?);
            println!("solvable: {}", span.is_solvable()?);
        }
        None => println!("not closed under the bracket"),
    }
    let mut ok = true;
    match linlie::classify_modulo_radial(ctx.nvars, &lin) {
        Ok(c) => println!("modulo R: {c}"),
        Err(e) => println!("modulo R: {e}"),
    }
    if let Some(name) = presentation {
        let a = alpha.map(|a| frontend::parse_rat(a, &ctx)).transpose().context("alpha")?;
        let p = Presentation::from_name(name, a).ok_or_else(|| anyhow!("unknown presentation '{name}'"))?;
        let m = linlie::matches_presentation(&span, &p)?;
        ok = m.matched;
        println!("presentation {}: {}", p.name(), if ok { "MATCH" } else { "NO MATCH" });
        if let Some(w) = m.witness {
            for f in w {
                println!("  {}", f.field().render(first_var));
            }
        }
    }
    Ok(ok)
}

fn invariants_cmd(action: &str, check: Option<&str>) -> Result<bool> {
    let parts: Vec<&str> = action.split(':').collect();
    let num = |s: &str| s.parse::<usize>().with_context(|| format!("'{s}' is not a number"));
    let (act, named): (InducedAction, Vec<(&str, Poly)>) = match parts.as_slice() {
        ["sl2-binary", d] => {
            let d = num(d)?;
            let mut v = Vec::new();
            if d == 3 {
                v.push(("disc", invariants::discriminant_cubic()));
            }
            if d == 4 {
                v.push(("P", invariants::quartic_p()));
                v.push(("H", invariants::quartic_h()));
                v.push(("Delta", invariants::quartic_discriminant()));
            }
            (invariants::sl2_on_binary_forms(d)?, v)
        }
        ["sl", k, kind] => {
            let k = num(k)?;
            let (kind, name) = match *kind {
                "sym" => (MatrixKind::Symmetric, "det"),
                "asym" => (MatrixKind::Antisymmetric, "pf"),
                other => bail!("unknown matrix kind '{other}'"),
            };
            let m = invariants::generic_matrix(k, kind);
            let p = match kind {
                MatrixKind::Symmetric => invariants::det(&m)?,
                MatrixKind::Antisymmetric => invariants::pfaffian(&m)?,
            };
            (invariants::sl_on_matrix_space(k, kind)?, vec![(name, p)])
        }
        _ => bail!("unknown action '{action}'"),
    };
    let named: Vec<(&str, Poly)> = match check {
        Some(c) => {
            let v: Vec<_> = named.into_iter().filter(|(n, _)| *n == c).collect();
            if v.is_empty() {
                bail!("no invariant named '{c}' for this action");
            }
            v
        }
        None => named,
    };
    println!("variables: {}", act.nvars);
    let morphism = act.is_morphism();
    println!("bracket-compatible: {morphism}");
    for f in &act.fields {
        println!("  {}", f.field().render(0));
    }
    let mut ok = morphism;
    for (name, p) in &named {
        let a = act.annihilates(p);
        ok &= a;
        println!("{name} = {}", p.render(0));
        println!("{name}: {}", if a { "annihilated" } else { "NOT annihilated" });
    }
    println!("{}", if ok { "PASS" } else { "FAIL" });
    Ok(ok)
}

fn reproduce(path: Option<PathBuf>, only: Option<&str>, json: bool, timings: bool) -> Result<bool> {
    let path = path.unwrap_or_else(catalog::catalog_dir);
    let mut cats: Vec<Catalog> =
        if path.is_dir() { catalog::load_dir(&path)? } else { vec![catalog::load_catalog(&path)?] };
    if let Some(id) = only {
        for c in &mut cats {
            c.entries.retain(|e| e.id == id);
        }
        cats.retain(|c| !c.entries.is_empty());
        if cats.is_empty() {
            bail!("no entry with id '{id}'");
        }
    }
    let report = catalog::run_all(&cats);
    if json {
        println!("{}", report.to_json());
    } else {
        print!("{}", report.render_text());
    }
    if timings {
        eprint!("{}", report.render_timings());
    }
    Ok(report.passed())
}

fn run(cli: Cli) -> Result<bool> {
    match cli.cmd {
        Cmd::CheckIntegral { integral, fields, n, first_var, no_radial } => {
            check_integral(&integral, &fields, n, first_var, no_radial)
        }
        Cmd::DefiningForm { fields, first_var } => defining_form(&fields, first_var),
        Cmd::TangentAlgebra { form, mode, n, first_var } => tangent_algebra(&form, mode, n, first_var),
        Cmd::LieAnalyze { fields, n, first_var, presentation, alpha } => {
            lie_analyze(&fields, n, first_var, presentation.as_deref(), alpha.as_deref())
        }
        Cmd::Invariants { action, check } => invariants_cmd(&action, check.as_deref()),
        Cmd::Reproduce { catalog, only, json, no_timings } => reproduce(catalog, only.as_deref(), json, !no_timings),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
