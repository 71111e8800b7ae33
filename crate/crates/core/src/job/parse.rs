use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::ToPrimitive;

use super::{Job, TaskKind, TaskOption, TaskSpec};
use crate::error::{Error, Result};
use crate::group::Presentation;
use crate::rep::{AbelianizationMap, SL2Rep};
use crate::ring::expr::{locate, parse_expr_at, parse_matrix_at};
use crate::ring::{cyclotomic_polynomial, FieldScalar, FieldTower, LaurentPoly, Matrix, RatFunc, Rational, TowerNum};
use crate::syntax::{split_statements, Statement};

fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    chars.next().is_some_and(|c| c.is_alphabetic() || c == '_') && chars.all(|c| c.is_alphanumeric() || c == '_')
}

/// Resolves the generators and parameters of `tower` as scalars.
pub(crate) fn scalar_lookup(tower: &Arc<FieldTower>) -> impl Fn(&str) -> Option<FieldScalar> + '_ {
    move |s| {
        if let Some(level) = tower.generator_index(s) {
            Some(FieldScalar::generator(tower, level))
        } else {
            tower.param_index(s).map(|i| FieldScalar::param(tower, i))
        }
    }
}

pub(crate) fn eval_scalar(tower: &Arc<FieldTower>, text: &str, origin: (usize, usize)) -> Result<FieldScalar> {
    let e = parse_expr_at(text, origin)?;
    e.eval(&FieldScalar::zero(tower), &scalar_lookup(tower)).map_err(|err| at(origin, err))
}

pub(crate) fn eval_matrix(tower: &Arc<FieldTower>, text: &str, origin: (usize, usize)) -> Result<Matrix<FieldScalar>> {
    let rows = parse_matrix_at(text, origin)?;
    let zero = FieldScalar::zero(tower);
    let lookup = scalar_lookup(tower);
    let rows = rows
        .iter()
        .map(|r| r.iter().map(|e| e.eval(&zero, &lookup)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()
        .map_err(|err| at(origin, err))?;
    Ok(Matrix::from_rows(rows, &zero))
}

pub(crate) fn parse_int_matrix(text: &str, origin: (usize, usize)) -> Result<Vec<Vec<i64>>> {
    let rows = parse_matrix_at(text, origin)?;
    let q: Rational = num_traits::Zero::zero();
    let none = |_: &str| None;
    rows.iter()
        .map(|r| {
            r.iter()
                .map(|e| {
                    let v = e.eval(&q, &none).map_err(|err| at(origin, err))?;
                    if !v.is_integer() {
                        return Err(Error::parse(origin.0, origin.1, format!("expected an integer, got {v}")));
                    }
                    v.to_integer().to_i64().ok_or_else(|| Error::parse(origin.0, origin.1, "integer out of range"))
                })
                .collect()
        })
        .collect()
}

pub(crate) fn parse_ints(text: &str, origin: (usize, usize)) -> Result<Vec<i64>> {
    text.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|s| !s.is_empty())
        .map(|s| s.parse().map_err(|_| Error::parse(origin.0, origin.1, format!("expected an integer, got `{s}`"))))
        .collect()
}

pub(crate) fn parse_int(text: &str, origin: (usize, usize)) -> Result<i64> {
    match parse_ints(text, origin)?.as_slice() {
        [n] => Ok(*n),
        _ => Err(Error::parse(origin.0, origin.1, format!("expected one integer, got `{}`", text.trim()))),
    }
}

/// Attaches a position to errors that lack one.
fn at(origin: (usize, usize), err: Error) -> Error {
    match err {
        Error::Parse { .. } => err,
        other => Error::parse(origin.0, origin.1, other.to_string()),
    }
}

/// `t1^2 t2^-1`, `t1*t2` or `1`.
fn parse_monomial(vars: &[String], text: &str, origin: (usize, usize)) -> Result<Vec<i32>> {
    let mut exps = vec![0; vars.len()];
    let text = text.trim();
    if text == "1" {
        return Ok(exps);
    }
    for tok in text.split(|c: char| c.is_whitespace() || c == '*').filter(|s| !s.is_empty()) {
        let (name, e) = match tok.split_once('^') {
            Some((n, e)) => {
                let e = e.trim_start_matches('(').trim_end_matches(')');
                let e: i32 =
                    e.parse().map_err(|_| Error::parse(origin.0, origin.1, format!("bad exponent in `{tok}`")))?;
                (n, e)
            }
            None => (tok, 1),
        };
        let i = vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::parse(origin.0, origin.1, format!("`{name}` is not a declared variable")))?;
        exps[i] += e;
    }
    Ok(exps)
}

/// Coefficients (low to high) of a monic polynomial in one free symbol.
fn parse_minpoly(tower: &Arc<FieldTower>, text: &str, origin: (usize, usize)) -> Result<Vec<TowerNum>> {
    let e = parse_expr_at(text, origin)?;
    let mut free: Vec<String> = e.symbols().into_iter().filter(|s| scalar_lookup(tower)(s).is_none()).collect();
    free.sort();
    free.dedup();
    let var = match free.as_slice() {
        [v] => v.clone(),
        [] => return Err(Error::parse(origin.0, origin.1, "polynomial has no variable")),
        _ => {
            return Err(Error::parse(
                origin.0,
                origin.1,
                format!("polynomial has several unknowns: {}", free.join(", ")),
            ))
        }
    };
    let vars = Arc::new(vec![var.clone()]);
    let lookup = |s: &str| {
        if s == var {
            Some(RatFunc::from_poly(LaurentPoly::var(tower, &vars, 0)))
        } else {
            scalar_lookup(tower)(s).map(|c| RatFunc::constant(&vars, c))
        }
    };
    let p = e
        .eval(&RatFunc::zero(tower, &vars), &lookup)
        .map_err(|err| at(origin, err))?
        .as_poly()
        .ok_or_else(|| Error::parse(origin.0, origin.1, "not a polynomial"))?;
    if p.min_exponents().first().is_some_and(|&m| m < 0) {
        return Err(Error::parse(origin.0, origin.1, "negative powers in a minimal polynomial"));
    }
    let deg = p.max_exponents().first().copied().unwrap_or(0);
    (0..=deg)
        .map(|k| {
            let c = p.coeff(&[k]);
            c.as_tower_num()
                .cloned()
                .ok_or_else(|| Error::parse(origin.0, origin.1, format!("coefficient {c} involves parameters")))
        })
        .collect()
}

fn parse_task(st: &Statement, rest: &str, origin: (usize, usize)) -> Result<TaskSpec> {
    let (header, body, body_at) = match rest.find('{') {
        Some(open) => {
            let close = rest
                .rfind('}')
                .filter(|&c| c > open)
                .ok_or_else(|| Error::parse(origin.0, origin.1, "unterminated task block"))?;
            if !rest[close + 1..].trim().is_empty() {
                let (l, c) = locate(rest, close + 1, origin);
                return Err(Error::parse(l, c, "text after task block"));
            }
            (&rest[..open], &rest[open + 1..close], open + 1)
        }
        None => (rest, "", rest.len()),
    };
    let words: Vec<&str> = header.split_whitespace().collect();
    let (kind_name, label) = match words.as_slice() {
        [k] => (*k, None),
        [k, l] => (*k, Some(*l)),
        [] => return Err(Error::parse(st.origin.0, st.origin.1, "task needs a kind")),
        _ => return Err(Error::parse(origin.0, origin.1, "expected `task <kind> [label] { ... }`")),
    };
    let kind = TaskKind::from_name(kind_name)
        .ok_or_else(|| Error::parse(origin.0, origin.1, format!("unknown task `{kind_name}`")))?;
    if let Some(l) = label {
        if !is_ident(l) {
            return Err(Error::parse(origin.0, origin.1, format!("bad task label `{l}`")));
        }
    }
    let body_origin = locate(rest, body_at, origin);
    let mut options = BTreeMap::new();
    for opt in split_statements_at(body, body_origin) {
        let (key, _) = opt
            .text
            .split_once('=')
            .ok_or_else(|| Error::parse(opt.origin.0, opt.origin.1, "expected `key = value`"))?;
        let key = key.trim();
        if !kind.option_keys().contains(&key) {
            return Err(Error::parse(
                opt.origin.0,
                opt.origin.1,
                format!("task `{}` has no option `{key}`", kind.name()),
            ));
        }
        let value_at = opt.text.find('=').unwrap() + 1;
        let lead = opt.text[value_at..].len() - opt.text[value_at..].trim_start().len();
        let value_origin = locate(&opt.text, value_at + lead, opt.origin);
        let prev = options.insert(
            key.to_string(),
            TaskOption { value: opt.text[value_at..].trim().to_string(), origin: value_origin },
        );
        if prev.is_some() {
            return Err(Error::parse(opt.origin.0, opt.origin.1, format!("option `{key}` given twice")));
        }
    }
    Ok(TaskSpec { kind, name: label.unwrap_or(kind.name()).to_string(), options, origin: st.origin })
}

/// Statements of a block body, positioned relative to `origin`.
fn split_statements_at(body: &str, origin: (usize, usize)) -> Vec<Statement> {
    split_statements(body)
        .into_iter()
        .map(|s| {
            let origin = if s.origin.0 == 1 {
                (origin.0, origin.1 + s.origin.1 - 1)
            } else {
                (origin.0 + s.origin.0 - 1, s.origin.1)
            };
            Statement { text: s.text, origin }
        })
        .collect()
}

pub fn parse_job(src: &str) -> Result<Job> {
    let mut tower = Arc::new(FieldTower::rationals());
    let mut vars: Option<Arc<Vec<String>>> = None;
    let mut pres = Presentation::default();
    let mut phi: BTreeMap<usize, Vec<i32>> = BTreeMap::new();
    let mut rho: BTreeMap<usize, Matrix<FieldScalar>> = BTreeMap::new();
    let mut tasks: Vec<TaskSpec> = Vec::new();

    let taken = |tower: &FieldTower, vars: &Option<Arc<Vec<String>>>, name: &str| {
        tower.generator_index(name).is_some()
            || tower.param_index(name).is_some()
            || vars.as_ref().is_some_and(|v| v.iter().any(|x| x == name))
    };

    for st in split_statements(src) {
        let (kw, rest, origin) = st.split_keyword();
        let err = |msg: String| Error::parse(st.origin.0, st.origin.1, msg);
        match kw {
            "vars" => {
                if vars.is_some() {
                    return Err(err("variables declared twice".into()));
                }
                let names: Vec<String> = rest.split_whitespace().map(str::to_string).collect();
                if names.is_empty() {
                    return Err(err("`vars` needs at least one name".into()));
                }
                for (k, n) in names.iter().enumerate() {
                    if !is_ident(n) || taken(&tower, &None, n) || names[..k].contains(n) {
                        return Err(err(format!("bad or repeated variable name `{n}`")));
                    }
                }
                vars = Some(Arc::new(names));
            }
            "extend" => {
                let (name, def) =
                    rest.split_once(':').ok_or_else(|| err("expected `extend <name> : <polynomial>`".into()))?;
                let name = name.trim();
                if !is_ident(name) || taken(&tower, &vars, name) {
                    return Err(err(format!("bad or repeated symbol `{name}`")));
                }
                let def_at = rest.find(':').unwrap() + 1;
                let def_origin = locate(rest, def_at, origin);
                let minpoly = match def.trim().strip_prefix("cyclotomic") {
                    Some(m) if m.starts_with(char::is_whitespace) => {
                        let m = parse_int(m, def_origin)?;
                        let m = u32::try_from(m).map_err(|_| err(format!("bad cyclotomic order {m}")))?;
                        cyclotomic_polynomial(m).map_err(|e| at(def_origin, e))?.to_tower()
                    }
                    _ => parse_minpoly(&tower, def, def_origin)?,
                };
                tower = Arc::new(tower.adjoin_extension(name, &minpoly).map_err(|e| at(st.origin, e))?);
            }
            "params" => {
                let names: Vec<&str> = rest.split_whitespace().collect();
                for n in &names {
                    if !is_ident(n) || taken(&tower, &vars, n) {
                        return Err(err(format!("bad or repeated symbol `{n}`")));
                    }
                }
                tower = Arc::new(tower.with_params(&names).map_err(|e| at(st.origin, e))?);
            }
            "phi" | "rho" => {
                let (gen, value) =
                    rest.split_once('=').ok_or_else(|| err(format!("expected `{kw} <generator> = ...`")))?;
                let gen = gen.trim();
                let g = pres.generator_index(gen).ok_or_else(|| err(format!("undeclared generator `{gen}`")))?;
                let value_at = rest.find('=').unwrap() + 1;
                let value_origin = locate(rest, value_at, origin);
                if kw == "phi" {
                    let v = vars.as_ref().ok_or_else(|| err("declare `vars` before `phi`".into()))?;
                    if phi.insert(g, parse_monomial(v, value, value_origin)?).is_some() {
                        return Err(err(format!("phi({gen}) given twice")));
                    }
                } else {
                    let m = eval_matrix(&tower, value, value_origin)?;
                    if m.rows() != 2 || m.cols() != 2 {
                        return Err(err(format!("rho({gen}) must be a 2x2 matrix")));
                    }
                    if rho.insert(g, m).is_some() {
                        return Err(err(format!("rho({gen}) given twice")));
                    }
                }
            }
            "task" => {
                let spec = parse_task(&st, rest, origin)?;
                if tasks.iter().any(|t| t.name == spec.name) {
                    return Err(err(format!("task name `{}` used twice", spec.name)));
                }
                tasks.push(spec);
            }
            _ => {
                if !pres.apply_statement(&st).map_err(|e| at(st.origin, e))? {
                    return Err(err(format!("unknown statement `{kw}`")));
                }
            }
        }
    }

    let n = pres.num_generators();
    let vars = vars.unwrap_or_else(|| Arc::new(vec!["t".to_string()]));
    let phi = if phi.is_empty() {
        None
    } else {
        if let Some(g) = (0..n).find(|g| !phi.contains_key(g)) {
            return Err(Error::InvalidInput(format!("phi({}) is not given", pres.generators[g])));
        }
        Some(AbelianizationMap::new(phi.into_values().collect(), vars.len())?)
    };
    let rho = if rho.is_empty() {
        None
    } else {
        if let Some(g) = (0..n).find(|g| !rho.contains_key(g)) {
            return Err(Error::InvalidInput(format!("rho({}) is not given", pres.generators[g])));
        }
        let zero = FieldScalar::zero(&tower);
        let ms = rho.into_values().map(|m| m.map(&zero, |x| x.embed(&tower))).collect();
        Some(SL2Rep::new(ms)?)
    };
    Ok(Job { tower, vars, presentation: pres, phi, rho, tasks })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn figure_eight_job() {
        let src = "vars t;\nextend w : x^2 + x + 1;\ngens x y; let W = x^-1 y x y^-1; rel W x W^-1 y^-1;\n\
                   phi x = t; phi y = t;\nrho x = [[1,1],[0,1]]; rho y = [[1,0],[-w,1]];\n\
                   task wada { remove = y ; }\ntask derivative d1 { a_exponents = 1 ; }\n";
        let job = parse_job(src).unwrap();
        assert_eq!(job.tower.dim(), 2);
        assert_eq!(job.presentation.relators[0].len(), 10);
        assert_eq!(job.tasks.len(), 2);
        assert_eq!(job.tasks[1].name, "d1");
        assert_eq!(job.tasks[0].option("remove").unwrap().value, "y");
        assert_eq!(job.tasks[0].option("remove").unwrap().origin, (6, 22));
    }

    #[test]
    fn errors_have_positions() {
        match parse_job("vars t;\ngens a;\nphi a = s;") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        match parse_job("gens a;\ntask nosuch { }") {
            Err(Error::Parse { line, msg, .. }) => {
                assert_eq!(line, 2);
                assert!(msg.contains("unknown task"));
            }
            other => panic!("{other:?}"),
        }
        assert!(parse_job("gens a;\ntask wada { bogus = 1 ; }").is_err());
        assert!(parse_job("gens a;\ntask wada; task wada;").is_err());
        assert!(parse_job("extend i : i^2 + 2 i + 1 + c;").is_err());
    }

    #[test]
    fn cyclotomic_and_params() {
        let job = parse_job("extend z : cyclotomic 8; params a b;").unwrap();
        assert_eq!(job.tower.dim(), 4);
        assert_eq!(job.tower.params(), ["a", "b"]);
        assert!(parse_job("extend z : cyclotomic 2;").is_err());
    }
}
