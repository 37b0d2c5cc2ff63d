//! `liepd` — command-line front end for the symbolic kernel: normal
//! forms, homomorphism checks, functor transport, rank invariants, the
//! word-system classification, finite-model closure reports, and
//! coproducts of free contexts.
//!
//! Exit codes: 0 success, 1 syntax error, 2 sort error, 3 validation,
//! budget, or I/O failure. All output goes to stdout in deterministic
//! order; diagnostics go to stderr.

use std::fmt::Write as _;
use std::io::Read as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use liepd_core::congruence::{
    beta_related, closure_report, CongruencePair, DEFAULT_ENUMERATION_BUDGET,
};
use liepd_core::representation::{coproduct, hom_check, rank_invariants, FreeRep, RepHom};
use liepd_core::scalars::{Field, Scalar};
use liepd_core::words::word_classify;

use liepd_cli::files::{
    load_object, print_finrep, print_fin_hom, print_free_hom, print_pdmodel, FieldTag, TargetSpec,
};
use liepd_cli::term::{self, eval_rep, parse_context, parse_term, Mode, RepValue};
use liepd_cli::{with_field, CliError, CliResult};

#[derive(Parser)]
#[command(
    name = "liepd",
    about = "Exact computations in free 2-sorted representations of Lie algebras \
             and their merged projection-derivation form",
    version
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
enum ModeArg {
    Rep,
    Pd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the canonical normal form of a term.
    Nf {
        /// The term; omit it to read one term per line from stdin.
        term: Option<String>,
        #[arg(long, value_enum, default_value_t = ModeArg::Rep)]
        mode: ModeArg,
        /// Evaluate in this context instead of the inferred one, e.g. "W(x1,x2; y1)".
        #[arg(long)]
        rep: Option<String>,
    },
    /// Verify the homomorphism laws for a hom file on all basis pairs up
    /// to the truncation degree.
    CheckHom {
        #[arg(long)]
        hom: PathBuf,
        #[arg(long)]
        degree: Option<usize>,
    },
    /// Transport an object or hom file through the merge functor.
    FApply {
        #[arg(long)]
        object: Option<PathBuf>,
        #[arg(long)]
        hom: Option<PathBuf>,
    },
    /// Transport an object or hom file through the splitting functor.
    FinvApply {
        #[arg(long)]
        object: Option<PathBuf>,
        #[arg(long)]
        hom: Option<PathBuf>,
    },
    /// Print the rank invariants (|X|, |Y|) of a free context.
    Rank {
        #[arg(long)]
        rep: String,
        #[arg(long)]
        degree: Option<usize>,
    },
    /// Classify the word systems with coefficients in {-range..range}.
    WordClassify {
        #[arg(long, default_value_t = 2)]
        range: i64,
        #[arg(long)]
        degree: Option<usize>,
    },
    /// Closure report for a congruence pair against a finite model:
    /// solution count, double prime, closedness, and optionally whether
    /// two homomorphisms are related modulo the pair.
    Closure {
        /// Finite model file (kind = finrep).
        #[arg(long)]
        finrep: PathBuf,
        /// Cross-check: fail unless the file declares this field.
        #[arg(long)]
        field: Option<String>,
        #[arg(long)]
        degree: Option<usize>,
        /// Free context of the congruence pair, e.g. "W(x1; y1)".
        #[arg(long)]
        context: String,
        /// Lie-sorted generators, ';'-separated terms.
        #[arg(long, default_value = "")]
        lie_gens: String,
        /// Module-sorted generators, ';'-separated terms.
        #[arg(long, default_value = "")]
        module_gens: String,
        /// Enumeration budget (number of generator assignments).
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_BUDGET)]
        budget: u128,
        /// First hom file for a beta-relation query (free target equal
        /// to the closure context).
        #[arg(long)]
        beta1: Option<PathBuf>,
        /// Second hom file for a beta-relation query.
        #[arg(long)]
        beta2: Option<PathBuf>,
    },
    /// Coproduct of two free contexts, with the injection images.
    Coproduct {
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
    },
}

/// Truncation degree: the flag wins, then LIEPD_DEGREE, then 3.
fn resolve_degree(flag: Option<usize>) -> CliResult<usize> {
    if let Some(d) = flag {
        return Ok(d);
    }
    match std::env::var("LIEPD_DEGREE") {
        Ok(s) => s
            .parse()
            .map_err(|_| CliError::semantic(format!("LIEPD_DEGREE is not a degree: `{s}`"))),
        Err(_) => Ok(3),
    }
}

fn run_nf(term: Option<String>, mode: ModeArg, rep: Option<String>) -> CliResult<String> {
    let mode = match mode {
        ModeArg::Rep => Mode::Rep,
        ModeArg::Pd => Mode::Pd,
    };
    let ctx = rep.as_deref().map(parse_context).transpose()?;
    match term {
        Some(src) => term::normal_form(&src, mode, ctx.as_ref()),
        None => {
            let mut input = String::new();
            std::io::stdin().read_to_string(&mut input)?;
            let mut out = String::new();
            for line in input.lines() {
                if line.trim().is_empty() {
                    continue;
                }
                writeln!(out, "{}", term::normal_form(line, mode, ctx.as_ref())?).unwrap();
            }
            Ok(out.trim_end().to_string())
        }
    }
}

fn run_check_hom(path: PathBuf, degree: Option<usize>) -> CliResult<String> {
    let d = resolve_degree(degree)?;
    let file = load_object(&path)?;
    let report = match &file.target {
        Some(TargetSpec::Free(_)) => with_field!(file.field(), F, {
            hom_check(&file.build_free_hom::<F>()?, d)?
        }),
        Some(TargetSpec::Fin) => with_field!(file.field(), F, {
            hom_check(&file.build_fin_hom::<F>()?, d)?
        }),
        None => return Err(CliError::semantic("missing `target`")),
    };
    if report.passed() {
        Ok(report.to_string())
    } else {
        Err(CliError::semantic(report.to_string()))
    }
}

fn split_basis_comment<F: Field>(label: &str, rows: &[Vec<F>]) -> String {
    let mut out = String::new();
    for (i, row) in rows.iter().enumerate() {
        let parts: Vec<String> = row.iter().map(|c| c.to_string()).collect();
        writeln!(out, "# {label} {i} = {}", parts.join(" ")).unwrap();
    }
    out
}

fn run_f_apply(object: Option<PathBuf>, hom: Option<PathBuf>) -> CliResult<String> {
    match (object, hom) {
        (Some(path), None) => {
            let file = load_object(&path)?;
            with_field!(file.field(), F, {
                let rep = file.build_finrep::<F>()?;
                let model = liepd_core::projder::functor_f(&rep)?;
                Ok(print_pdmodel(&model, file.field()).trim_end().to_string())
            })
        }
        (None, Some(path)) => {
            let file = load_object(&path)?;
            match &file.target {
                Some(TargetSpec::Free(_)) => {
                    let h = file.build_free_hom::<Scalar>()?;
                    let merged = liepd_core::projder::functor_f_hom(&h)?;
                    let mut out = String::new();
                    writeln!(out, "merged hom on the free merge of {}", h.source()).unwrap();
                    for (i, image) in merged.generator_images()?.iter().enumerate() {
                        writeln!(out, "m{} = {}", i + 1, image).unwrap();
                    }
                    Ok(out.trim_end().to_string())
                }
                Some(TargetSpec::Fin) => with_field!(file.field(), F, {
                    let h = file.build_fin_hom::<F>()?;
                    let merged = liepd_core::projder::functor_f_hom(&h)?;
                    let mut out = String::new();
                    writeln!(out, "merged hom on the free merge of {}", h.source()).unwrap();
                    for (i, image) in merged.generator_images()?.iter().enumerate() {
                        let l: Vec<String> = image.l_part().iter().map(|c| c.to_string()).collect();
                        let v: Vec<String> = image.v_part().iter().map(|c| c.to_string()).collect();
                        writeln!(out, "m{} = ({} | {})", i + 1, l.join(" "), v.join(" ")).unwrap();
                    }
                    Ok(out.trim_end().to_string())
                }),
                None => Err(CliError::semantic("missing `target`")),
            }
        }
        _ => Err(CliError::semantic("pass exactly one of --object or --hom")),
    }
}

fn run_finv_apply(object: Option<PathBuf>, hom: Option<PathBuf>) -> CliResult<String> {
    match (object, hom) {
        (Some(path), None) => {
            let file = load_object(&path)?;
            with_field!(file.field(), F, {
                let model = file.build_pdmodel::<F>()?;
                let split = liepd_core::projder::functor_finv(&model)?;
                let mut out = print_finrep(&split.rep, file.field());
                out.push_str(&split_basis_comment("kernel", &split.kernel_basis));
                out.push_str(&split_basis_comment("image", &split.image_basis));
                Ok(out.trim_end().to_string())
            })
        }
        (None, Some(path)) => {
            // On homs the splitting functor returns the underlying pair,
            // so the output is the hom file in canonical print order.
            let file = load_object(&path)?;
            match &file.target {
                Some(TargetSpec::Free(_)) => {
                    let h = file.build_free_hom::<Scalar>()?;
                    let pair = liepd_core::projder::functor_finv_hom(
                        &liepd_core::projder::functor_f_hom(&h)?,
                    );
                    Ok(print_free_hom(&pair, file.field()).trim_end().to_string())
                }
                Some(TargetSpec::Fin) => with_field!(file.field(), F, {
                    let h = file.build_fin_hom::<F>()?;
                    let pair = liepd_core::projder::functor_finv_hom(
                        &liepd_core::projder::functor_f_hom(&h)?,
                    );
                    Ok(print_fin_hom(&pair, file.field()).trim_end().to_string())
                }),
                None => Err(CliError::semantic("missing `target`")),
            }
        }
        _ => Err(CliError::semantic("pass exactly one of --object or --hom")),
    }
}

fn parse_gen_list(
    raw: &str,
    ctx: &FreeRep,
) -> CliResult<Vec<RepValue>> {
    let mut out = Vec::new();
    for piece in raw.split(';') {
        let piece = piece.trim();
        if piece.is_empty() {
            continue;
        }
        out.push(eval_rep(&parse_term(piece)?, ctx)?);
    }
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn run_closure(
    finrep: PathBuf,
    field: Option<String>,
    degree: Option<usize>,
    context: String,
    lie_gens: String,
    module_gens: String,
    budget: u128,
    beta1: Option<PathBuf>,
    beta2: Option<PathBuf>,
) -> CliResult<String> {
    let d = resolve_degree(degree)?;
    let file = load_object(&finrep)?;
    if let Some(expected) = field {
        let expected = FieldTag::parse(&expected)?;
        if expected != file.field() {
            return Err(CliError::semantic(format!(
                "--field {} does not match the file's field {}",
                expected.name(),
                file.field().name()
            )));
        }
    }
    let ctx = parse_context(&context)?;
    let lie_values = parse_gen_list(&lie_gens, &ctx)?;
    let module_values = parse_gen_list(&module_gens, &ctx)?;
    let betas = match (beta1, beta2) {
        (Some(a), Some(b)) => Some((load_object(&a)?, load_object(&b)?)),
        (None, None) => None,
        _ => return Err(CliError::semantic("pass both --beta1 and --beta2 or neither")),
    };

    with_field!(file.field(), F, {
        let h = file.build_finrep::<F>()?;
        let mut gens_l = Vec::new();
        for v in &lie_values {
            match v {
                RepValue::Zero => {}
                RepValue::Lie(l) => gens_l.push(l.into_field::<F>()?),
                RepValue::Module(_) => {
                    return Err(CliError::Sort {
                        subterm: "--lie-gens".into(),
                        msg: "every --lie-gens term must be Lie-sorted".into(),
                    })
                }
            }
        }
        let mut gens_v = Vec::new();
        for v in &module_values {
            match v {
                RepValue::Zero => {}
                RepValue::Module(m) => gens_v.push(m.into_field::<F>()?),
                RepValue::Lie(_) => {
                    return Err(CliError::Sort {
                        subterm: "--module-gens".into(),
                        msg: "every --module-gens term must be module-sorted".into(),
                    })
                }
            }
        }
        let t = CongruencePair::generated(ctx.clone(), gens_l, gens_v, d)?;
        let report = closure_report(&t, &h, budget)?;
        let mut out = report.to_string();
        if let Some((f1, f2)) = betas {
            let h1: RepHom<F, FreeRep> = f1.build_free_hom::<F>()?;
            let h2: RepHom<F, FreeRep> = f2.build_free_hom::<F>()?;
            let related = beta_related(&h1, &h2, &t)?;
            write!(out, "\nbeta related: {}", if related { "yes" } else { "no" }).unwrap();
        }
        Ok(out)
    })
}

fn run_coproduct(left: String, right: String) -> CliResult<String> {
    let w1 = parse_context(&left)?;
    let w2 = parse_context(&right)?;
    let cp = coproduct::<Scalar>(&w1, &w2)?;
    let mut out = String::new();
    writeln!(out, "coproduct = {}", cp.rep).unwrap();
    for &x in w1.xs() {
        writeln!(out, "inj1 x{} = {}", x.0, cp.inj1.x_image(x)?).unwrap();
    }
    for &y in w1.ys() {
        writeln!(out, "inj1 y{} = {}", y.0, cp.inj1.y_image(y)?).unwrap();
    }
    for &x in w2.xs() {
        writeln!(out, "inj2 x{} = {}", x.0, cp.inj2.x_image(x)?).unwrap();
    }
    for &y in w2.ys() {
        writeln!(out, "inj2 y{} = {}", y.0, cp.inj2.y_image(y)?).unwrap();
    }
    Ok(out.trim_end().to_string())
}

fn run(cmd: Cmd) -> CliResult<String> {
    match cmd {
        Cmd::Nf { term, mode, rep } => run_nf(term, mode, rep),
        Cmd::CheckHom { hom, degree } => run_check_hom(hom, degree),
        Cmd::FApply { object, hom } => run_f_apply(object, hom),
        Cmd::FinvApply { object, hom } => run_finv_apply(object, hom),
        Cmd::Rank { rep, degree } => {
            let ctx = parse_context(&rep)?;
            let d = resolve_degree(degree)?;
            let (nx, ny) = rank_invariants::<Scalar>(&ctx, d)?;
            Ok(format!("{nx} {ny}"))
        }
        Cmd::WordClassify { range, degree } => {
            if range < 0 {
                return Err(CliError::semantic("--range must be nonnegative"));
            }
            let d = resolve_degree(degree)?;
            let coeffs: Vec<Scalar> = (-range..=range).map(Scalar::from_int).collect();
            let table = word_classify(&coeffs, d)?;
            Ok(table.to_string().trim_end().to_string())
        }
        Cmd::Closure {
            finrep,
            field,
            degree,
            context,
            lie_gens,
            module_gens,
            budget,
            beta1,
            beta2,
        } => run_closure(
            finrep, field, degree, context, lie_gens, module_gens, budget, beta1, beta2,
        ),
        Cmd::Coproduct { left, right } => run_coproduct(left, right),
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version requests are successes; bad usage is a
            // syntax problem, exit 1.
            if e.use_stderr() {
                eprint!("{e}");
                std::process::exit(1);
            }
            print!("{e}");
            std::process::exit(0);
        }
    };
    match run(cli.cmd) {
        Ok(out) => {
            // A closed pipe downstream (`liepd ... | head`) is not an
            // error on our side; anything else on stdout is.
            use std::io::Write;
            if let Err(e) = writeln!(std::io::stdout(), "{out}") {
                if e.kind() == std::io::ErrorKind::BrokenPipe {
                    std::process::exit(0);
                }
                eprintln!("error: {e}");
                std::process::exit(3);
            }
        }
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(e.exit_code());
        }
    }
}
