//! The term grammar shared by every subcommand:
//!
//! ```text
//! expr    := ['-'] term (('+'|'-') term)*
//! term    := product ('.' product)*            left-associative action
//! product := scalar '*' chain | scalar | chain
//! chain   := atom ('*' atom)*                  right-nested action
//! atom    := gen | '[' expr ',' expr ']'
//!          | 'p(' expr ')' | 'r(' expr ')' | '(' expr ')'
//! scalar  := int ['/' int]
//! gen     := ('x'|'y'|'m') digits
//! ```
//!
//! Two modes share the grammar. In representation mode terms denote
//! elements of one sort of a free representation (`x` and `y`
//! generators, brackets, actions). In merged mode they denote elements
//! of a free algebra with projection-derivation (`m` generators —
//! sums `x_i + y_i` internally — plus `p(...)`, `r(...)`, and the
//! merged bracket). The canonical printers of the kernel emit exactly
//! this grammar, so parse ∘ format is the identity.

use liepd_core::freeassoc::{ModuleElement, XGen, YGen};
use liepd_core::freelie::LieElement;
use liepd_core::projder::{FreePd, PdElement};
use liepd_core::representation::{act, FreeRep, RepElement};
use liepd_core::scalars::{Field, Scalar};

use crate::{CliError, CliResult};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Mode {
    Rep,
    Pd,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum GenKind {
    X,
    Y,
    M,
}

#[derive(Clone, PartialEq, Debug)]
pub enum Ast {
    Scalar(Scalar),
    Gen(GenKind, u32),
    Neg(Box<Ast>),
    Scale(Scalar, Box<Ast>),
    Add(Box<Ast>, Box<Ast>),
    Sub(Box<Ast>, Box<Ast>),
    Bracket(Box<Ast>, Box<Ast>),
    Action(Box<Ast>, Box<Ast>),
    Proj(Box<Ast>),
    Retract(Box<Ast>),
}

impl Ast {
    /// Re-renders a subterm for error messages; not the canonical form.
    pub fn render(&self) -> String {
        fn guarded(a: &Ast) -> String {
            match a {
                Ast::Add(..) | Ast::Sub(..) | Ast::Neg(..) | Ast::Action(..) => {
                    format!("({})", a.render())
                }
                _ => a.render(),
            }
        }
        match self {
            Ast::Scalar(c) => c.to_string(),
            Ast::Gen(GenKind::X, i) => format!("x{i}"),
            Ast::Gen(GenKind::Y, i) => format!("y{i}"),
            Ast::Gen(GenKind::M, i) => format!("m{i}"),
            Ast::Neg(a) => format!("-{}", guarded(a)),
            Ast::Scale(c, a) => format!("{c}*{}", guarded(a)),
            Ast::Add(a, b) => format!("{} + {}", a.render(), b.render()),
            Ast::Sub(a, b) => format!("{} - {}", a.render(), guarded(b)),
            Ast::Bracket(a, b) => format!("[{},{}]", a.render(), b.render()),
            Ast::Action(a, b) => format!("{} . {}", guarded(a), guarded(b)),
            Ast::Proj(a) => format!("p({})", a.render()),
            Ast::Retract(a) => format!("r({})", a.render()),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
enum Tok {
    Ident(String),
    Int(u64),
    Plus,
    Minus,
    Star,
    Slash,
    Dot,
    LBrack,
    RBrack,
    LParen,
    RParen,
    Comma,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Int(n) => format!("number `{n}`"),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Slash => "`/`".into(),
            Tok::Dot => "`.`".into(),
            Tok::LBrack => "`[`".into(),
            Tok::RBrack => "`]`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
        }
    }
}

struct Lexer {
    toks: Vec<(Tok, usize, usize)>,
    end: (usize, usize),
}

fn lex(src: &str) -> CliResult<Lexer> {
    let mut toks = Vec::new();
    let mut line = 1;
    let mut col = 1;
    let mut chars = src.chars().peekable();
    while let Some(&ch) = chars.peek() {
        let here = (line, col);
        match ch {
            '\n' => {
                chars.next();
                line += 1;
                col = 1;
                continue;
            }
            c if c.is_whitespace() => {
                chars.next();
                col += 1;
                continue;
            }
            c if c.is_ascii_digit() => {
                let mut n: u64 = 0;
                while let Some(&d) = chars.peek() {
                    if let Some(v) = d.to_digit(10) {
                        n = n
                            .checked_mul(10)
                            .and_then(|n| n.checked_add(v as u64))
                            .ok_or(CliError::Parse {
                                line: here.0,
                                col: here.1,
                                msg: "number literal is too large".into(),
                            })?;
                        chars.next();
                        col += 1;
                    } else {
                        break;
                    }
                }
                toks.push((Tok::Int(n), here.0, here.1));
                continue;
            }
            c if c.is_ascii_alphabetic() => {
                let mut s = String::new();
                while let Some(&a) = chars.peek() {
                    if a.is_ascii_alphanumeric() {
                        s.push(a);
                        chars.next();
                        col += 1;
                    } else {
                        break;
                    }
                }
                toks.push((Tok::Ident(s), here.0, here.1));
                continue;
            }
            _ => {
                let tok = match ch {
                    '+' => Tok::Plus,
                    '-' => Tok::Minus,
                    '*' => Tok::Star,
                    '/' => Tok::Slash,
                    '.' => Tok::Dot,
                    '[' => Tok::LBrack,
                    ']' => Tok::RBrack,
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    ',' => Tok::Comma,
                    other => {
                        return Err(CliError::Parse {
                            line,
                            col,
                            msg: format!("unexpected character `{other}`"),
                        })
                    }
                };
                chars.next();
                col += 1;
                toks.push((tok, here.0, here.1));
            }
        }
    }
    Ok(Lexer { toks, end: (line, col) })
}

struct Parser {
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
    end: (usize, usize),
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _, _)| t)
    }

    fn here(&self) -> (usize, usize) {
        self.toks.get(self.pos).map(|&(_, l, c)| (l, c)).unwrap_or(self.end)
    }

    fn err(&self, msg: impl Into<String>) -> CliError {
        let (line, col) = self.here();
        CliError::Parse { line, col, msg: msg.into() }
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _, _)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok) -> CliResult<()> {
        match self.peek() {
            Some(t) if *t == want => {
                self.pos += 1;
                Ok(())
            }
            Some(t) => Err(self.err(format!("expected {}, found {}", want.describe(), t.describe()))),
            None => Err(self.err(format!("expected {}, found end of input", want.describe()))),
        }
    }

    fn expr(&mut self) -> CliResult<Ast> {
        let mut acc = if matches!(self.peek(), Some(Tok::Minus)) {
            self.pos += 1;
            Ast::Neg(Box::new(self.term()?))
        } else {
            self.term()?
        };
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = Ast::Add(Box::new(acc), Box::new(self.term()?));
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = Ast::Sub(Box::new(acc), Box::new(self.term()?));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> CliResult<Ast> {
        let mut acc = self.product()?;
        while matches!(self.peek(), Some(Tok::Dot)) {
            self.pos += 1;
            acc = Ast::Action(Box::new(acc), Box::new(self.product()?));
        }
        Ok(acc)
    }

    fn product(&mut self) -> CliResult<Ast> {
        if matches!(self.peek(), Some(Tok::Int(_))) {
            let c = self.scalar()?;
            if matches!(self.peek(), Some(Tok::Star)) {
                self.pos += 1;
                return Ok(Ast::Scale(c, Box::new(self.chain()?)));
            }
            return Ok(Ast::Scalar(c));
        }
        self.chain()
    }

    fn scalar(&mut self) -> CliResult<Scalar> {
        let n = match self.bump() {
            Some(Tok::Int(n)) => n,
            _ => return Err(self.err("expected a number")),
        };
        let d = if matches!(self.peek(), Some(Tok::Slash)) {
            self.pos += 1;
            match self.bump() {
                Some(Tok::Int(0)) => return Err(self.err("zero denominator")),
                Some(Tok::Int(d)) => d,
                _ => return Err(self.err("expected a denominator after `/`")),
            }
        } else {
            1
        };
        Scalar::new(n as i64, d as i64).map_err(|e| self.err(e.to_string()))
    }

    fn chain(&mut self) -> CliResult<Ast> {
        let mut parts = vec![self.atom()?];
        while matches!(self.peek(), Some(Tok::Star)) {
            self.pos += 1;
            parts.push(self.atom()?);
        }
        // Right-nested action: `x1*x2*y1` is `x1 . (x2 . y1)`.
        let mut acc = parts.pop().expect("at least one atom");
        while let Some(head) = parts.pop() {
            acc = Ast::Action(Box::new(head), Box::new(acc));
        }
        Ok(acc)
    }

    fn atom(&mut self) -> CliResult<Ast> {
        match self.peek().cloned() {
            Some(Tok::Ident(s)) => {
                self.pos += 1;
                if (s == "p" || s == "r") && matches!(self.peek(), Some(Tok::LParen)) {
                    self.pos += 1;
                    let inner = self.expr()?;
                    self.expect(Tok::RParen)?;
                    return Ok(if s == "p" {
                        Ast::Proj(Box::new(inner))
                    } else {
                        Ast::Retract(Box::new(inner))
                    });
                }
                let kind = match s.chars().next() {
                    Some('x') => GenKind::X,
                    Some('y') => GenKind::Y,
                    Some('m') => GenKind::M,
                    _ => return Err(self.err(format!("unknown identifier `{s}`"))),
                };
                let digits = &s[1..];
                if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
                    return Err(self.err(format!("malformed generator `{s}`")));
                }
                let idx: u32 =
                    digits.parse().map_err(|_| self.err(format!("generator index out of range in `{s}`")))?;
                Ok(Ast::Gen(kind, idx))
            }
            Some(Tok::LBrack) => {
                self.pos += 1;
                let a = self.expr()?;
                self.expect(Tok::Comma)?;
                let b = self.expr()?;
                self.expect(Tok::RBrack)?;
                Ok(Ast::Bracket(Box::new(a), Box::new(b)))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(inner)
            }
            Some(t) => Err(self.err(format!(
                "expected a generator, bracket, or parenthesized term, found {}",
                t.describe()
            ))),
            None => Err(self.err("expected a term, found end of input")),
        }
    }
}

/// Parses a source string into an AST; the mode only gates which
/// generators and operators the evaluator accepts, not the grammar.
pub fn parse_term(src: &str) -> CliResult<Ast> {
    let lexer = lex(src)?;
    let mut p = Parser { toks: lexer.toks, pos: 0, end: lexer.end };
    let ast = p.expr()?;
    if let Some(t) = p.peek() {
        return Err(p.err(format!("trailing input starting at {}", t.describe())));
    }
    Ok(ast)
}

fn collect_indices(ast: &Ast, xs: &mut Vec<u32>, ys: &mut Vec<u32>, ms: &mut Vec<u32>) {
    match ast {
        Ast::Scalar(_) => {}
        Ast::Gen(GenKind::X, i) => xs.push(*i),
        Ast::Gen(GenKind::Y, i) => ys.push(*i),
        Ast::Gen(GenKind::M, i) => ms.push(*i),
        Ast::Neg(a) | Ast::Scale(_, a) | Ast::Proj(a) | Ast::Retract(a) => {
            collect_indices(a, xs, ys, ms)
        }
        Ast::Add(a, b) | Ast::Sub(a, b) | Ast::Bracket(a, b) | Ast::Action(a, b) => {
            collect_indices(a, xs, ys, ms);
            collect_indices(b, xs, ys, ms);
        }
    }
}

/// Smallest representation context containing every generator the term
/// mentions.
pub fn infer_rep_context(ast: &Ast) -> CliResult<FreeRep> {
    let (mut xs, mut ys, mut ms) = (Vec::new(), Vec::new(), Vec::new());
    collect_indices(ast, &mut xs, &mut ys, &mut ms);
    if let Some(i) = ms.first() {
        return Err(CliError::Sort {
            subterm: format!("m{i}"),
            msg: "merged generators need --mode pd".into(),
        });
    }
    xs.sort_unstable();
    xs.dedup();
    ys.sort_unstable();
    ys.dedup();
    Ok(FreeRep::new(xs.into_iter().map(XGen).collect(), ys.into_iter().map(YGen).collect())?)
}

/// Smallest balanced context whose merge contains every generator the
/// term mentions; `m`, `x`, and `y` indices all count.
pub fn infer_pd_context(ast: &Ast) -> CliResult<FreePd> {
    let (mut xs, mut ys, mut ms) = (Vec::new(), Vec::new(), Vec::new());
    collect_indices(ast, &mut xs, &mut ys, &mut ms);
    let mut all: Vec<u32> = xs.into_iter().chain(ys).chain(ms).collect();
    all.sort_unstable();
    all.dedup();
    let rep = FreeRep::new(
        all.iter().copied().map(XGen).collect(),
        all.into_iter().map(YGen).collect(),
    )?;
    Ok(FreePd::new(rep)?)
}

/// An evaluated representation-mode term: one sort or a still-ambiguous
/// zero.
#[derive(Clone, PartialEq, Debug)]
pub enum RepValue {
    Zero,
    Lie(LieElement<Scalar>),
    Module(ModuleElement<Scalar>),
}

impl RepValue {
    pub fn render(&self) -> String {
        match self {
            RepValue::Zero => "0".into(),
            RepValue::Lie(l) => l.to_string(),
            RepValue::Module(v) => v.to_string(),
        }
    }

    pub fn into_element(self, ctx: &FreeRep) -> RepElement<Scalar> {
        match self {
            RepValue::Zero => RepElement::Lie(LieElement::zero(ctx.xs().to_vec())),
            RepValue::Lie(l) => RepElement::Lie(l),
            RepValue::Module(v) => RepElement::Module(v),
        }
    }

    fn as_lie(&self, ctx: &FreeRep, at: &Ast) -> CliResult<LieElement<Scalar>> {
        match self {
            RepValue::Zero => Ok(LieElement::zero(ctx.xs().to_vec())),
            RepValue::Lie(l) => Ok(l.clone()),
            RepValue::Module(_) => Err(CliError::Sort {
                subterm: at.render(),
                msg: "expected a Lie-sorted term, found a module element".into(),
            }),
        }
    }

    fn as_module(&self, ctx: &FreeRep, at: &Ast) -> CliResult<ModuleElement<Scalar>> {
        match self {
            RepValue::Zero => Ok(ModuleElement::zero(ctx.xs().to_vec(), ctx.ys().to_vec())),
            RepValue::Module(v) => Ok(v.clone()),
            RepValue::Lie(_) => Err(CliError::Sort {
                subterm: at.render(),
                msg: "expected a module-sorted term, found a Lie element".into(),
            }),
        }
    }
}

/// Sort-checks and evaluates a representation-mode term.
pub fn eval_rep(ast: &Ast, ctx: &FreeRep) -> CliResult<RepValue> {
    match ast {
        Ast::Scalar(c) => {
            if c.is_zero() {
                Ok(RepValue::Zero)
            } else {
                Err(CliError::Sort {
                    subterm: ast.render(),
                    msg: "a bare nonzero scalar is not an element of either sort".into(),
                })
            }
        }
        Ast::Gen(GenKind::X, i) => Ok(RepValue::Lie(ctx.lie_generator(XGen(*i))?)),
        Ast::Gen(GenKind::Y, j) => Ok(RepValue::Module(ctx.module_generator(YGen(*j))?)),
        Ast::Gen(GenKind::M, i) => Err(CliError::Sort {
            subterm: format!("m{i}"),
            msg: "merged generators need --mode pd".into(),
        }),
        Ast::Proj(_) | Ast::Retract(_) => Err(CliError::Sort {
            subterm: ast.render(),
            msg: "p and r belong to the merged algebra; use --mode pd".into(),
        }),
        Ast::Neg(a) => Ok(match eval_rep(a, ctx)? {
            RepValue::Zero => RepValue::Zero,
            RepValue::Lie(l) => RepValue::Lie(l.neg()),
            RepValue::Module(v) => RepValue::Module(v.neg()),
        }),
        Ast::Scale(c, a) => Ok(match eval_rep(a, ctx)? {
            RepValue::Zero => RepValue::Zero,
            RepValue::Lie(l) => RepValue::Lie(l.scale(c)),
            RepValue::Module(v) => RepValue::Module(v.scale(c)),
        }),
        Ast::Add(a, b) | Ast::Sub(a, b) => {
            let mut vb = eval_rep(b, ctx)?;
            if matches!(ast, Ast::Sub(..)) {
                vb = match vb {
                    RepValue::Zero => RepValue::Zero,
                    RepValue::Lie(l) => RepValue::Lie(l.neg()),
                    RepValue::Module(v) => RepValue::Module(v.neg()),
                };
            }
            match (eval_rep(a, ctx)?, vb) {
                (RepValue::Zero, v) | (v, RepValue::Zero) => Ok(v),
                (RepValue::Lie(x), RepValue::Lie(y)) => Ok(RepValue::Lie(x.add(&y)?)),
                (RepValue::Module(x), RepValue::Module(y)) => Ok(RepValue::Module(x.add(&y)?)),
                _ => Err(CliError::Sort {
                    subterm: ast.render(),
                    msg: "cannot add a Lie element and a module element".into(),
                }),
            }
        }
        Ast::Bracket(a, b) => {
            let la = eval_rep(a, ctx)?.as_lie(ctx, a)?;
            let lb = eval_rep(b, ctx)?.as_lie(ctx, b)?;
            Ok(RepValue::Lie(liepd_core::freelie::lie_bracket(&la, &lb)?))
        }
        Ast::Action(a, b) => {
            let la = eval_rep(a, ctx)?.as_lie(ctx, a)?;
            let vb = eval_rep(b, ctx)?.as_module(ctx, b)?;
            Ok(RepValue::Module(act(&la, &vb)?))
        }
    }
}

/// Sort-checks and evaluates a merged-mode term.
pub fn eval_pd(ast: &Ast, pd: &FreePd) -> CliResult<PdElement<Scalar, FreeRep>> {
    let ctx = pd.rep();
    match ast {
        Ast::Scalar(c) => {
            if c.is_zero() {
                Ok(PdElement::zero(ctx.clone()))
            } else {
                Err(CliError::Sort {
                    subterm: ast.render(),
                    msg: "a bare nonzero scalar is not an element".into(),
                })
            }
        }
        Ast::Gen(GenKind::X, i) => {
            Ok(PdElement::from_lie(ctx.clone(), ctx.lie_generator(XGen(*i))?))
        }
        Ast::Gen(GenKind::Y, j) => {
            Ok(PdElement::from_module(ctx.clone(), ctx.module_generator(YGen(*j))?))
        }
        Ast::Gen(GenKind::M, i) => Ok(PdElement::new(
            ctx.clone(),
            ctx.lie_generator(XGen(*i))?,
            ctx.module_generator(YGen(*i))?,
        )),
        Ast::Proj(a) => Ok(eval_pd(a, pd)?.p()),
        Ast::Retract(a) => Ok(eval_pd(a, pd)?.r()),
        Ast::Neg(a) => Ok(eval_pd(a, pd)?.neg()),
        Ast::Scale(c, a) => Ok(eval_pd(a, pd)?.scale(c)),
        Ast::Add(a, b) => eval_pd(a, pd)?.add(&eval_pd(b, pd)?).map_err(Into::into),
        Ast::Sub(a, b) => eval_pd(a, pd)?.sub(&eval_pd(b, pd)?).map_err(Into::into),
        Ast::Bracket(a, b) => eval_pd(a, pd)?.bracket(&eval_pd(b, pd)?).map_err(Into::into),
        Ast::Action(a, b) => {
            let va = eval_pd(a, pd)?;
            let vb = eval_pd(b, pd)?;
            if !va.v_part().is_zero() {
                return Err(CliError::Sort {
                    subterm: a.render(),
                    msg: "the left side of an action must be Lie-sorted".into(),
                });
            }
            if !vb.l_part().is_zero() {
                return Err(CliError::Sort {
                    subterm: b.render(),
                    msg: "the right side of an action must be module-sorted".into(),
                });
            }
            va.bracket(&vb).map_err(Into::into)
        }
    }
}

/// Parses a context string `W(x1,x2; y1)`; the `W(...)` wrapper is
/// required, either generator list may be empty.
pub fn parse_context(src: &str) -> CliResult<FreeRep> {
    let err = |msg: &str| CliError::Parse { line: 1, col: 1, msg: msg.into() };
    let s = src.trim();
    let inner = s
        .strip_prefix("W(")
        .and_then(|rest| rest.strip_suffix(')'))
        .ok_or_else(|| err("a context looks like `W(x1,x2; y1)`"))?;
    let (xs_part, ys_part) = inner
        .split_once(';')
        .ok_or_else(|| err("a context needs `;` between the x and y generators"))?;
    let parse_list = |part: &str, prefix: char| -> CliResult<Vec<u32>> {
        let mut out = Vec::new();
        for piece in part.split(',') {
            let piece = piece.trim();
            if piece.is_empty() {
                continue;
            }
            let digits = piece
                .strip_prefix(prefix)
                .ok_or_else(|| err(&format!("expected a `{prefix}` generator, found `{piece}`")))?;
            let idx: u32 = digits
                .parse()
                .map_err(|_| err(&format!("malformed generator `{piece}`")))?;
            out.push(idx);
        }
        Ok(out)
    };
    let xs = parse_list(xs_part, 'x')?;
    let ys = parse_list(ys_part, 'y')?;
    Ok(FreeRep::new(xs.into_iter().map(XGen).collect(), ys.into_iter().map(YGen).collect())?)
}

/// Normal form of a term: parse, infer or adopt a context, evaluate,
/// and print canonically.
pub fn normal_form(src: &str, mode: Mode, ctx: Option<&FreeRep>) -> CliResult<String> {
    let ast = parse_term(src)?;
    match mode {
        Mode::Rep => {
            let ctx = match ctx {
                Some(c) => c.clone(),
                None => infer_rep_context(&ast)?,
            };
            Ok(eval_rep(&ast, &ctx)?.render())
        }
        Mode::Pd => {
            let pd = match ctx {
                Some(c) => FreePd::new(c.clone())?,
                None => infer_pd_context(&ast)?,
            };
            Ok(eval_pd(&ast, &pd)?.to_string())
        }
    }
}
