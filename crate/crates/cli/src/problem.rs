//! Problem files.
//!
//! ```text
//! [algebra]
//! vars = a, b, c, a_adj, b_adj, c_adj
//! adjoints = suffix          # or `none`, or pairs `a:a_adj, b:b_adj`
//! order = deglex             # or `y < x < z`, or blocks `y < x << z`
//!
//! [quiver]
//! a : U -> V
//!
//! [options]
//! maxiter = 10
//!
//! [assumptions]
//! @add_adj
//! pinv(a, b, a_adj, b_adj)
//! pinv(a, c, a_adj, c_adj)
//!
//! [claims]
//! b - c
//! ```
//!
//! A `[statement]` section (operator statement syntax) may replace
//! `[claims]`. List items are polynomials or the helpers `pinv(a, b, a*, b*)`,
//! `adj(p)` and `add_adj(items...)`; `@add_adj` closes a whole list under
//! adjoints.

use std::fs;
use std::path::Path;

use opcert_core::logic::parse_statement;
use opcert_core::quiver::Edge;
use opcert_core::{
    add_adj, pinv, AdjointMap, Algebra, MonomialOrder, OperatorStatement, Polynomial, Quiver, Term,
};

use crate::error::{CliError, ProblemError};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Options {
    pub maxiter: Option<usize>,
    pub maxdeg: Option<usize>,
    pub criterion: Option<bool>,
    pub degbound: Option<usize>,
    pub heuristic: Option<String>,
    pub target: Option<Polynomial>,
    pub prefix: Option<Term>,
    pub suffix: Option<Term>,
    pub degree: Option<usize>,
    pub stages: Option<usize>,
}

#[derive(Clone, Debug)]
pub enum Body {
    Claims(Vec<Polynomial>),
    Statement(Box<OperatorStatement>),
    Empty,
}

#[derive(Clone, Debug)]
pub struct Problem {
    pub algebra: Algebra,
    pub adjoints: Option<AdjointMap>,
    pub order: MonomialOrder,
    /// Set when the file names an order instead of relying on `deglex`.
    pub order_explicit: bool,
    pub quiver: Option<Quiver>,
    pub assumptions: Vec<Polynomial>,
    pub body: Body,
    pub options: Options,
}

impl Problem {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let src = fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Problem::parse(&src).map_err(|error| CliError::Problem {
            path: path.to_path_buf(),
            error,
        })
    }

    pub fn claims(&self) -> Option<&[Polynomial]> {
        match &self.body {
            Body::Claims(c) => Some(c),
            _ => None,
        }
    }

    pub fn parse(src: &str) -> Result<Self, ProblemError> {
        let sections = split_sections(src)?;
        let find = |name: &str| sections.iter().find(|s| s.name == name);
        for s in &sections {
            if !KNOWN_SECTIONS.contains(&s.name.as_str()) {
                return Err(ProblemError::new(s.line, format!("unknown section [{}]", s.name)));
            }
            if sections.iter().filter(|t| t.name == s.name).count() > 1 {
                return Err(ProblemError::new(s.line, format!("section [{}] given twice", s.name)));
            }
        }
        let alg_section = find("algebra").ok_or_else(|| ProblemError::new(1, "missing [algebra] section"))?;
        let (algebra, adjoints, order, order_explicit) = parse_algebra(alg_section)?;

        let quiver = find("quiver").map(|s| parse_quiver(s, &algebra)).transpose()?;
        let ctx = ItemContext {
            algebra: &algebra,
            adjoints: adjoints.as_ref(),
        };
        let options = find("options").map(|s| parse_options(s, &ctx)).transpose()?.unwrap_or_default();
        let assumptions = find("assumptions").map(|s| parse_list(s, &ctx)).transpose()?.unwrap_or_default();

        let body = match (find("claims"), find("statement")) {
            (Some(c), Some(s)) => {
                return Err(ProblemError::new(
                    c.line.max(s.line),
                    "[claims] and [statement] are mutually exclusive",
                ))
            }
            (Some(c), None) => Body::Claims(parse_list(c, &ctx)?),
            (None, Some(s)) => {
                let text: String = s.lines.iter().map(|(_, l)| format!("{l}\n")).collect();
                let stmt = parse_statement(&text, &algebra, adjoints.as_ref())
                    .map_err(|e| ProblemError::new(s.line, e.to_string()))?;
                Body::Statement(Box::new(stmt))
            }
            (None, None) => Body::Empty,
        };
        Ok(Problem {
            algebra,
            adjoints,
            order,
            order_explicit,
            quiver,
            assumptions,
            body,
            options,
        })
    }
}

const KNOWN_SECTIONS: [&str; 6] = ["algebra", "quiver", "options", "assumptions", "claims", "statement"];

struct Section {
    name: String,
    line: usize,
    /// Content lines with comments stripped, tagged with their line number.
    lines: Vec<(usize, String)>,
}

fn split_sections(src: &str) -> Result<Vec<Section>, ProblemError> {
    let mut out: Vec<Section> = Vec::new();
    for (i, raw) in src.lines().enumerate() {
        let n = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
            out.push(Section {
                name: name.trim().to_string(),
                line: n,
                lines: Vec::new(),
            });
            continue;
        }
        match out.last_mut() {
            Some(s) => s.lines.push((n, line.to_string())),
            None => return Err(ProblemError::new(n, "content before the first section header")),
        }
    }
    Ok(out)
}

fn key_values(s: &Section) -> Result<Vec<(usize, String, String)>, ProblemError> {
    s.lines
        .iter()
        .map(|(n, l)| {
            let (k, v) = l
                .split_once('=')
                .ok_or_else(|| ProblemError::new(*n, format!("expected `key = value`, found `{l}`")))?;
            Ok((*n, k.trim().to_string(), v.trim().to_string()))
        })
        .collect()
}

fn parse_algebra(s: &Section) -> Result<(Algebra, Option<AdjointMap>, MonomialOrder, bool), ProblemError> {
    let mut vars = None;
    let mut adjoints = None;
    let mut order = None;
    for (n, k, v) in key_values(s)? {
        let slot = match k.as_str() {
            "vars" => &mut vars,
            "adjoints" => &mut adjoints,
            "order" => &mut order,
            _ => return Err(ProblemError::new(n, format!("unknown algebra key `{k}`"))),
        };
        if slot.replace((n, v)).is_some() {
            return Err(ProblemError::new(n, format!("`{k}` given twice")));
        }
    }
    let (vn, vars) = vars.ok_or_else(|| ProblemError::new(s.line, "[algebra] needs `vars`"))?;
    let names: Vec<&str> = vars.split([',', ' ']).map(str::trim).filter(|x| !x.is_empty()).collect();
    let algebra = Algebra::new(names).map_err(|e| ProblemError::new(vn, e.to_string()))?;

    let adjoints = match adjoints {
        None => paired(AdjointMap::by_suffix(&algebra), &algebra),
        Some((_, v)) if v == "suffix" => paired(AdjointMap::by_suffix(&algebra), &algebra),
        Some((_, v)) if v == "none" => None,
        Some((n, v)) => {
            let pairs = v
                .split(',')
                .map(|p| {
                    let (x, y) = p
                        .split_once(':')
                        .ok_or_else(|| ProblemError::new(n, format!("expected `x:x_adj`, found `{}`", p.trim())))?;
                    let var = |name: &str| algebra.var(name.trim()).map_err(|e| ProblemError::new(n, e.to_string()));
                    Ok((var(x)?, var(y)?))
                })
                .collect::<Result<Vec<_>, ProblemError>>()?;
            Some(AdjointMap::from_pairs(&algebra, &pairs).map_err(|e| ProblemError::new(n, e.to_string()))?)
        }
    };

    let (order, explicit) = match order {
        None => (MonomialOrder::for_algebra(&algebra), false),
        Some((_, v)) if v == "deglex" => (MonomialOrder::for_algebra(&algebra), false),
        Some((n, v)) => (parse_order(&v, &algebra).map_err(|m| ProblemError::new(n, m))?, true),
    };
    Ok((algebra, adjoints, order, explicit))
}

/// `None` when no variable has a partner.
fn paired(map: AdjointMap, algebra: &Algebra) -> Option<AdjointMap> {
    algebra.vars().any(|v| map.partner(v).is_some()).then_some(map)
}

/// `x < y` (one block) or `y < x << z` (blocks, later ones dominating).
pub fn parse_order(src: &str, algebra: &Algebra) -> Result<MonomialOrder, String> {
    let blocks = src
        .split("<<")
        .map(|b| {
            b.split('<')
                .map(|v| algebra.var(v.trim()).map_err(|e| e.to_string()))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    MonomialOrder::from_blocks(blocks, algebra.len()).map_err(|e| e.to_string())
}

fn parse_quiver(s: &Section, algebra: &Algebra) -> Result<Quiver, ProblemError> {
    let edges = s
        .lines
        .iter()
        .map(|(n, l)| {
            let bad = || ProblemError::new(*n, format!("expected `label : U -> V`, found `{l}`"));
            let (label, sig) = l.split_once(':').ok_or_else(bad)?;
            let (source, target) = sig.split_once("->").ok_or_else(bad)?;
            let (source, target) = (source.trim(), target.trim());
            if source.is_empty() || target.is_empty() {
                return Err(bad());
            }
            Ok(Edge {
                source: source.to_string(),
                target: target.to_string(),
                label: algebra.var(label.trim()).map_err(|e| ProblemError::new(*n, e.to_string()))?,
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Quiver::new(edges, algebra))
}

fn parse_options(s: &Section, ctx: &ItemContext<'_>) -> Result<Options, ProblemError> {
    let mut o = Options::default();
    for (n, k, v) in key_values(s)? {
        let err = |m: String| ProblemError::new(n, format!("option `{k}`: {m}"));
        let num = || v.parse::<usize>().map_err(|e| err(e.to_string()));
        match k.as_str() {
            "maxiter" => o.maxiter = Some(num()?),
            "maxdeg" => o.maxdeg = Some(num()?),
            "degbound" => o.degbound = Some(num()?),
            "degree" => o.degree = Some(num()?),
            "stages" => o.stages = Some(num()?),
            "criterion" => o.criterion = Some(v.parse::<bool>().map_err(|e| err(e.to_string()))?),
            "heuristic" => o.heuristic = Some(v.clone()),
            "target" => o.target = Some(ctx.poly(&v).map_err(|e| err(e.message))?),
            "prefix" => o.prefix = Some(parse_term(&v, ctx.algebra).map_err(err)?),
            "suffix" => o.suffix = Some(parse_term(&v, ctx.algebra).map_err(err)?),
            _ => return Err(ProblemError::new(n, format!("unknown option `{k}`"))),
        }
    }
    Ok(o)
}

/// A single term such as `a_adj` or `-2*a*b`.
pub fn parse_term(src: &str, algebra: &Algebra) -> Result<Term, String> {
    let p = algebra.parse(src).map_err(|e| e.to_string())?;
    match p.terms() {
        [t] => Ok(t.clone()),
        _ => Err(format!("`{}` is not a single term", src.trim())),
    }
}

struct ItemContext<'a> {
    algebra: &'a Algebra,
    adjoints: Option<&'a AdjointMap>,
}

impl ItemContext<'_> {
    fn poly(&self, src: &str) -> Result<Polynomial, ProblemError> {
        self.algebra.parse(src).map_err(|e| ProblemError::new(0, format!("`{}`: {e}", src.trim())))
    }

    fn adjoints(&self) -> Result<&AdjointMap, ProblemError> {
        self.adjoints
            .ok_or_else(|| ProblemError::new(0, "adjoints are used but no variable has a partner"))
    }

    fn items(&self, src: &str) -> Result<Vec<Polynomial>, ProblemError> {
        let mut out = Vec::new();
        for piece in split_top_level(src) {
            let piece = piece.trim();
            if piece.is_empty() {
                return Err(ProblemError::new(0, "empty list item"));
            }
            match call(piece) {
                Some(("pinv", args)) => {
                    let args = split_top_level(args);
                    if args.len() != 4 {
                        return Err(ProblemError::new(0, format!("pinv takes 4 arguments, got {}", args.len())));
                    }
                    let p = args.iter().map(|a| self.poly(a)).collect::<Result<Vec<_>, _>>()?;
                    out.extend(pinv(&p[0], &p[1], &p[2], &p[3]));
                }
                Some(("adj", args)) => {
                    let p = self.poly(args)?;
                    out.push(self.adjoints()?.adjoint(&p).map_err(|e| ProblemError::new(0, e.to_string()))?);
                }
                Some(("add_adj", args)) => {
                    let inner = self.items(args)?;
                    out.extend(add_adj(&inner, self.adjoints()?).map_err(|e| ProblemError::new(0, e.to_string()))?);
                }
                _ => out.push(self.poly(piece)?),
            }
        }
        Ok(out)
    }
}

/// `name(args)` spanning the whole of `src`, for the list helpers.
fn call(src: &str) -> Option<(&str, &str)> {
    let open = src.find('(')?;
    let name = src[..open].trim();
    if !matches!(name, "pinv" | "adj" | "add_adj") || !src.ends_with(')') {
        return None;
    }
    let inner = &src[open + 1..src.len() - 1];
    let mut depth = 0i32;
    for c in inner.chars() {
        depth += match c {
            '(' => 1,
            ')' => -1,
            _ => 0,
        };
        if depth < 0 {
            return None;
        }
    }
    (depth == 0).then_some((name, inner))
}

/// Splits at commas outside parentheses and brackets.
pub fn split_top_level(src: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in src.char_indices() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            ',' if depth == 0 => {
                out.push(&src[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&src[start..]);
    out
}

/// Joins physical lines into logical items: a line continues while
/// parentheses are open or it ends with an operator or comma.
fn logical_lines(lines: &[(usize, String)]) -> Vec<(usize, String)> {
    let mut out: Vec<(usize, String)> = Vec::new();
    let mut open = false;
    for (n, l) in lines {
        if open {
            let last = out.last_mut().expect("open item");
            last.1.push(' ');
            last.1.push_str(l);
        } else {
            out.push((*n, l.clone()));
        }
        let cur = &out.last().expect("item").1;
        let depth: i32 = cur
            .chars()
            .map(|c| match c {
                '(' => 1,
                ')' => -1,
                _ => 0,
            })
            .sum();
        open = depth > 0 || cur.ends_with(['+', '-', '*', ',']);
    }
    out
}

fn parse_list(s: &Section, ctx: &ItemContext<'_>) -> Result<Vec<Polynomial>, ProblemError> {
    let mut close = None;
    let mut out = Vec::new();
    for (n, l) in logical_lines(&s.lines) {
        if let Some(directive) = l.strip_prefix('@') {
            match directive.trim() {
                "add_adj" => close = Some(n),
                d => return Err(ProblemError::new(n, format!("unknown directive @{d}"))),
            }
            continue;
        }
        out.extend(ctx.items(&l).map_err(|e| e.at(n))?);
    }
    if let Some(n) = close {
        out = add_adj(&out, ctx.adjoints().map_err(|e| e.at(n))?).map_err(|e| ProblemError::new(n, e.to_string()))?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    const UNIQUENESS: &str = "
        [algebra]
        vars = a, b, c, a_adj, b_adj, c_adj

        [assumptions]
        @add_adj
        pinv(a, b, a_adj, b_adj)
        pinv(a, c, a_adj, c_adj)

        [claims]
        b - c
    ";

    #[test]
    fn helpers_expand() {
        let p = Problem::parse(UNIQUENESS).unwrap();
        assert_eq!(p.assumptions.len(), 12);
        assert_eq!(p.claims().unwrap(), &[p.algebra.parse("b - c").unwrap()]);
        assert!(!p.order_explicit);
    }

    #[test]
    fn multi_line_items_and_inline_lists() {
        let src = "[algebra]\nvars = a, b\n[claims]\na*b -\n  b, (a +\n b)*a\n";
        let p = Problem::parse(src).unwrap();
        let alg = &p.algebra;
        assert_eq!(p.claims().unwrap(), &[alg.parse("a*b - b").unwrap(), alg.parse("a^2 + b*a").unwrap()]);
    }

    #[test]
    fn block_orders() {
        let src = "[algebra]\nvars = x, y, z\norder = y < x << z\n";
        let p = Problem::parse(src).unwrap();
        assert_eq!(p.order.describe(&p.algebra), "y < x << z");
        assert!(p.order_explicit);
    }

    #[test]
    fn errors_name_the_line() {
        let src = "[algebra]\nvars = a\n\n[claims]\na + q\n";
        let e = Problem::parse(src).unwrap_err();
        assert_eq!(e.line, 5);
        assert!(e.message.contains('q'), "{}", e.message);
    }

    #[test]
    fn claims_and_statement_are_exclusive() {
        let src = "[algebra]\nvars = x\n[claims]\nx\n[statement]\nforall x: x = x\n";
        assert!(Problem::parse(src).is_err());
    }
}
