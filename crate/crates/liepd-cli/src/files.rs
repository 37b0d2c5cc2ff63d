//! One structured-text format for every object the CLI reads or writes:
//! finite-dimensional representations (`kind = finrep`), merged models
//! (`kind = pdmodel`), and homomorphism specs (`kind = hom`). Lines are
//! `key = value`; `#` starts a comment; omitted structure constants and
//! action matrices are zero. The printers emit files the loaders accept,
//! with entries in a fixed sorted order, so transported objects are
//! reloadable and diffable.

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use liepd_core::projder::FinPdModel;
use liepd_core::representation::{FinRep, FreeRep, RepHom};
use liepd_core::scalars::{Field, Scalar};

use crate::term::{eval_rep, parse_context, parse_term, RepValue};
use crate::{CliError, CliResult};

/// Coefficient fields the CLI can name: the rationals, or a small prime
/// field for finite-model enumeration.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum FieldTag {
    Q,
    F2,
    F3,
    F5,
}

impl FieldTag {
    pub fn parse(s: &str) -> CliResult<Self> {
        match s {
            "Q" => Ok(FieldTag::Q),
            "F2" => Ok(FieldTag::F2),
            "F3" => Ok(FieldTag::F3),
            "F5" => Ok(FieldTag::F5),
            other => Err(CliError::semantic(format!(
                "unsupported field `{other}` (expected Q, F2, F3, or F5)"
            ))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            FieldTag::Q => "Q",
            FieldTag::F2 => "F2",
            FieldTag::F3 => "F3",
            FieldTag::F5 => "F5",
        }
    }
}

/// Runs `$body` with `$F` bound to the concrete field type named by the
/// tag. Every arm must produce the same type.
#[macro_export]
macro_rules! with_field {
    ($tag:expr, $F:ident, $body:expr) => {
        match $tag {
            $crate::files::FieldTag::Q => {
                type $F = liepd_core::scalars::Scalar;
                $body
            }
            $crate::files::FieldTag::F2 => {
                type $F = liepd_core::scalars::FpScalar<2>;
                $body
            }
            $crate::files::FieldTag::F3 => {
                type $F = liepd_core::scalars::FpScalar<3>;
                $body
            }
            $crate::files::FieldTag::F5 => {
                type $F = liepd_core::scalars::FpScalar<5>;
                $body
            }
        }
    };
}

/// Whether a hom file maps into a free context or a finite model.
#[derive(Clone, PartialEq, Debug)]
pub enum TargetSpec {
    Free(FreeRep),
    Fin,
}

/// A parsed object file, prior to field dispatch and validation.
#[derive(Clone, Debug, Default)]
pub struct ObjectFile {
    pub kind: String,
    pub field: Option<FieldTag>,
    pub lie_dim: Option<usize>,
    pub module_dim: Option<usize>,
    pub dim: Option<usize>,
    pub entries: Vec<(usize, usize, usize, Scalar)>,
    pub act: Vec<(usize, Vec<Vec<Scalar>>)>,
    pub p: Option<Vec<Vec<Scalar>>>,
    pub source: Option<FreeRep>,
    pub target: Option<TargetSpec>,
    pub phi: Vec<(u32, String)>,
    pub psi: Vec<(u32, String)>,
}

impl ObjectFile {
    pub fn field(&self) -> FieldTag {
        self.field.unwrap_or(FieldTag::Q)
    }
}

fn parse_rational(s: &str) -> CliResult<Scalar> {
    Scalar::from_str(s.trim()).map_err(|e| CliError::semantic(e.to_string()))
}

fn parse_vector(s: &str) -> CliResult<Vec<Scalar>> {
    s.split_whitespace().map(parse_rational).collect()
}

fn parse_matrix(s: &str) -> CliResult<Vec<Vec<Scalar>>> {
    s.split(';').map(parse_vector).collect()
}

fn parse_index(s: &str, what: &str) -> CliResult<usize> {
    s.parse().map_err(|_| CliError::semantic(format!("malformed {what} index `{s}`")))
}

/// Parses the structured-text format from a string.
pub fn parse_object(src: &str) -> CliResult<ObjectFile> {
    let mut file = ObjectFile::default();
    for (lineno, raw) in src.lines().enumerate() {
        let line = match raw.find('#') {
            Some(i) => &raw[..i],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            CliError::semantic(format!("line {}: expected `key = value`", lineno + 1))
        })?;
        let value = value.trim();
        let key_parts: Vec<&str> = key.split_whitespace().collect();
        match key_parts.as_slice() {
            ["kind"] => file.kind = value.to_string(),
            ["field"] => file.field = Some(FieldTag::parse(value)?),
            ["lie-dim"] => file.lie_dim = Some(parse_index(value, "dimension")?),
            ["module-dim"] => file.module_dim = Some(parse_index(value, "dimension")?),
            ["dim"] => file.dim = Some(parse_index(value, "dimension")?),
            ["c", i, j, k] => file.entries.push((
                parse_index(i, "basis")?,
                parse_index(j, "basis")?,
                parse_index(k, "basis")?,
                parse_rational(value)?,
            )),
            ["act", i] => file.act.push((parse_index(i, "basis")?, parse_matrix(value)?)),
            ["p"] => file.p = Some(parse_matrix(value)?),
            ["source"] => file.source = Some(parse_context(value)?),
            ["target"] => {
                file.target = Some(if value == "finrep" {
                    TargetSpec::Fin
                } else {
                    TargetSpec::Free(parse_context(value)?)
                })
            }
            ["phi", gen] => {
                let idx = gen
                    .strip_prefix('x')
                    .and_then(|d| d.parse().ok())
                    .ok_or_else(|| CliError::semantic(format!("phi keys look like `phi x1`, got `{gen}`")))?;
                file.phi.push((idx, value.to_string()));
            }
            ["psi", gen] => {
                let idx = gen
                    .strip_prefix('y')
                    .and_then(|d| d.parse().ok())
                    .ok_or_else(|| CliError::semantic(format!("psi keys look like `psi y1`, got `{gen}`")))?;
                file.psi.push((idx, value.to_string()));
            }
            other => {
                return Err(CliError::semantic(format!(
                    "line {}: unknown key `{}`",
                    lineno + 1,
                    other.join(" ")
                )))
            }
        }
    }
    if file.kind.is_empty() {
        return Err(CliError::semantic("missing `kind = finrep|pdmodel|hom` line"));
    }
    Ok(file)
}

pub fn load_object(path: &Path) -> CliResult<ObjectFile> {
    let src = std::fs::read_to_string(path)
        .map_err(|e| CliError::semantic(format!("{}: {e}", path.display())))?;
    parse_object(&src)
}

fn convert<F: Field>(c: &Scalar) -> CliResult<F> {
    F::from_rational(c).map_err(CliError::from)
}

impl ObjectFile {
    fn expect_kind(&self, kind: &str) -> CliResult<()> {
        if self.kind != kind {
            return Err(CliError::semantic(format!(
                "expected a `kind = {kind}` file, found `kind = {}`",
                self.kind
            )));
        }
        Ok(())
    }

    /// Builds the finite-dimensional representation the file describes.
    pub fn build_finrep<F: Field>(&self) -> CliResult<FinRep<F>> {
        self.expect_kind("finrep")?;
        let n = self.lie_dim.ok_or_else(|| CliError::semantic("missing `lie-dim`"))?;
        let m = self.module_dim.ok_or_else(|| CliError::semantic("missing `module-dim`"))?;
        let entries: Vec<(usize, usize, usize, F)> = self
            .entries
            .iter()
            .map(|(i, j, k, c)| Ok((*i, *j, *k, convert::<F>(c)?)))
            .collect::<CliResult<_>>()?;
        let mut act = vec![vec![vec![F::zero(); m]; m]; n];
        for (i, mat) in &self.act {
            if *i >= n {
                return Err(CliError::semantic(format!("act index {i} out of range")));
            }
            if mat.len() != m || mat.iter().any(|row| row.len() != m) {
                return Err(CliError::semantic(format!("act {i} is not a {m} x {m} matrix")));
            }
            act[*i] = mat
                .iter()
                .map(|row| row.iter().map(convert::<F>).collect::<CliResult<Vec<F>>>())
                .collect::<CliResult<_>>()?;
        }
        FinRep::new(n, m, &entries, act).map_err(CliError::from)
    }

    /// Builds the merged finite model the file describes.
    pub fn build_pdmodel<F: Field>(&self) -> CliResult<FinPdModel<F>> {
        self.expect_kind("pdmodel")?;
        let dim = self.dim.ok_or_else(|| CliError::semantic("missing `dim`"))?;
        let entries: Vec<(usize, usize, usize, F)> = self
            .entries
            .iter()
            .map(|(i, j, k, c)| Ok((*i, *j, *k, convert::<F>(c)?)))
            .collect::<CliResult<_>>()?;
        let p_rows = self.p.as_ref().ok_or_else(|| CliError::semantic("missing `p` matrix"))?;
        if p_rows.len() != dim || p_rows.iter().any(|row| row.len() != dim) {
            return Err(CliError::semantic(format!("p is not a {dim} x {dim} matrix")));
        }
        let p: Vec<Vec<F>> = p_rows
            .iter()
            .map(|row| row.iter().map(convert::<F>).collect::<CliResult<Vec<F>>>())
            .collect::<CliResult<_>>()?;
        FinPdModel::new(dim, &entries, p).map_err(CliError::from)
    }

    fn source_rep(&self) -> CliResult<&FreeRep> {
        self.source.as_ref().ok_or_else(|| CliError::semantic("missing `source = W(...)`"))
    }

    fn image_string<'a>(&self, lines: &'a [(u32, String)], idx: u32, what: &str) -> CliResult<&'a str> {
        let mut found = None;
        for (i, v) in lines {
            if *i == idx {
                if found.is_some() {
                    return Err(CliError::semantic(format!("duplicate `{what}` line for index {idx}")));
                }
                found = Some(v.as_str());
            }
        }
        found.ok_or_else(|| CliError::semantic(format!("missing `{what}` line for index {idx}")))
    }

    /// Builds a homomorphism into a free target; image terms are
    /// evaluated in the target context and must have the right sort.
    pub fn build_free_hom<F: Field>(&self) -> CliResult<RepHom<F, FreeRep>> {
        self.expect_kind("hom")?;
        let source = self.source_rep()?.clone();
        let target = match &self.target {
            Some(TargetSpec::Free(t)) => t.clone(),
            Some(TargetSpec::Fin) => {
                return Err(CliError::semantic("this hom file maps into a finite model"))
            }
            None => return Err(CliError::semantic("missing `target`")),
        };
        let mut phi = Vec::new();
        for &x in source.xs() {
            let src = self.image_string(&self.phi, x.0, "phi")?;
            let ast = parse_term(src)?;
            match eval_rep(&ast, &target)? {
                RepValue::Zero => phi.push(liepd_core::freelie::LieElement::zero(target.xs().to_vec())),
                RepValue::Lie(l) => phi.push(l),
                RepValue::Module(_) => {
                    return Err(CliError::Sort {
                        subterm: src.to_string(),
                        msg: format!("phi x{} must be Lie-sorted", x.0),
                    })
                }
            }
        }
        let mut psi = Vec::new();
        for &y in source.ys() {
            let src = self.image_string(&self.psi, y.0, "psi")?;
            let ast = parse_term(src)?;
            match eval_rep(&ast, &target)? {
                RepValue::Zero => psi.push(liepd_core::freeassoc::ModuleElement::zero(
                    target.xs().to_vec(),
                    target.ys().to_vec(),
                )),
                RepValue::Module(v) => psi.push(v),
                RepValue::Lie(_) => {
                    return Err(CliError::Sort {
                        subterm: src.to_string(),
                        msg: format!("psi y{} must be module-sorted", y.0),
                    })
                }
            }
        }
        let phi = phi.iter().map(|l| l.into_field::<F>()).collect::<liepd_core::Result<_>>()?;
        let psi = psi.iter().map(|v| v.into_field::<F>()).collect::<liepd_core::Result<_>>()?;
        RepHom::new(source, target, phi, psi).map_err(CliError::from)
    }

    /// Builds a homomorphism into the finite model described inline;
    /// image lines are coordinate vectors.
    pub fn build_fin_hom<F: Field>(&self) -> CliResult<RepHom<F, FinRep<F>>> {
        self.expect_kind("hom")?;
        let source = self.source_rep()?.clone();
        if !matches!(self.target, Some(TargetSpec::Fin)) {
            return Err(CliError::semantic("this hom file maps into a free context"));
        }
        let inline = ObjectFile { kind: "finrep".into(), ..self.clone() };
        let target = inline.build_finrep::<F>()?;
        let mut phi = Vec::new();
        for &x in source.xs() {
            let raw = parse_vector(self.image_string(&self.phi, x.0, "phi")?)?;
            if raw.len() != target.lie_dim() {
                return Err(CliError::semantic(format!(
                    "phi x{} has {} coordinates, expected {}",
                    x.0,
                    raw.len(),
                    target.lie_dim()
                )));
            }
            phi.push(raw.iter().map(convert::<F>).collect::<CliResult<Vec<F>>>()?);
        }
        let mut psi = Vec::new();
        for &y in source.ys() {
            let raw = parse_vector(self.image_string(&self.psi, y.0, "psi")?)?;
            if raw.len() != target.module_dim() {
                return Err(CliError::semantic(format!(
                    "psi y{} has {} coordinates, expected {}",
                    y.0,
                    raw.len(),
                    target.module_dim()
                )));
            }
            psi.push(raw.iter().map(convert::<F>).collect::<CliResult<Vec<F>>>()?);
        }
        RepHom::new(source, target, phi, psi).map_err(CliError::from)
    }
}

fn write_vector<F: Field>(out: &mut String, row: &[F]) {
    let parts: Vec<String> = row.iter().map(|c| c.to_string()).collect();
    out.push_str(&parts.join(" "));
}

fn write_matrix<F: Field>(out: &mut String, rows: &[Vec<F>]) {
    for (i, row) in rows.iter().enumerate() {
        if i > 0 {
            out.push_str("; ");
        }
        write_vector(out, row);
    }
}

/// Prints a finite representation in the loadable format.
pub fn print_finrep<F: Field>(rep: &FinRep<F>, tag: FieldTag) -> String {
    let n = rep.lie_dim();
    let m = rep.module_dim();
    let mut out = String::new();
    writeln!(out, "kind = finrep").unwrap();
    writeln!(out, "field = {}", tag.name()).unwrap();
    writeln!(out, "lie-dim = {n}").unwrap();
    writeln!(out, "module-dim = {m}").unwrap();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let c = rep.structure_constant(i, j, k);
                if !c.is_zero() {
                    writeln!(out, "c {i} {j} {k} = {c}").unwrap();
                }
            }
        }
    }
    for i in 0..n {
        if m == 0 {
            continue;
        }
        let columns: Vec<Vec<F>> = (0..m).map(|c| rep.act_vec(&rep.basis_l(i), &rep.basis_v(c))).collect();
        let rows: Vec<Vec<F>> =
            (0..m).map(|r| (0..m).map(|c| columns[c][r].clone()).collect()).collect();
        write!(out, "act {i} = ").unwrap();
        write_matrix(&mut out, &rows);
        out.push('\n');
    }
    out
}

/// Prints a merged finite model in the loadable format.
pub fn print_pdmodel<F: Field>(model: &FinPdModel<F>, tag: FieldTag) -> String {
    let dim = model.dim();
    let mut out = String::new();
    writeln!(out, "kind = pdmodel").unwrap();
    writeln!(out, "field = {}", tag.name()).unwrap();
    writeln!(out, "dim = {dim}").unwrap();
    for i in 0..dim {
        for j in 0..dim {
            for k in 0..dim {
                let c = model.structure_constant(i, j, k);
                if !c.is_zero() {
                    writeln!(out, "c {i} {j} {k} = {c}").unwrap();
                }
            }
        }
    }
    write!(out, "p = ").unwrap();
    write_matrix(&mut out, model.projection());
    out.push('\n');
    out
}

/// Prints a free-target homomorphism in the loadable format.
pub fn print_free_hom(h: &RepHom<Scalar, FreeRep>, tag: FieldTag) -> String {
    let mut out = String::new();
    writeln!(out, "kind = hom").unwrap();
    writeln!(out, "field = {}", tag.name()).unwrap();
    writeln!(out, "source = {}", h.source()).unwrap();
    writeln!(out, "target = {}", h.target()).unwrap();
    for &x in h.source().xs() {
        writeln!(out, "phi x{} = {}", x.0, h.x_image(x).expect("generator image")).unwrap();
    }
    for &y in h.source().ys() {
        writeln!(out, "psi y{} = {}", y.0, h.y_image(y).expect("generator image")).unwrap();
    }
    out
}

/// Prints a finite-target homomorphism in the loadable format, with the
/// target inlined.
pub fn print_fin_hom<F: Field>(h: &RepHom<F, FinRep<F>>, tag: FieldTag) -> String {
    let target = h.target();
    let mut out = String::new();
    writeln!(out, "kind = hom").unwrap();
    writeln!(out, "field = {}", tag.name()).unwrap();
    writeln!(out, "source = {}", h.source()).unwrap();
    writeln!(out, "target = finrep").unwrap();
    let body = print_finrep(target, tag);
    for line in body.lines().skip(2) {
        writeln!(out, "{line}").unwrap();
    }
    for &x in h.source().xs() {
        write!(out, "phi x{} = ", x.0).unwrap();
        write_vector(&mut out, h.x_image(x).expect("generator image"));
        out.push('\n');
    }
    for &y in h.source().ys() {
        write!(out, "psi y{} = ", y.0).unwrap();
        write_vector(&mut out, h.y_image(y).expect("generator image"));
        out.push('\n');
    }
    out
}
