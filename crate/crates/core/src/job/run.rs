use std::sync::{Arc, OnceLock};

use super::parse::{eval_matrix, eval_scalar, parse_int, parse_int_matrix, parse_ints};
use super::{Job, TaskKind, TaskSpec};
use crate::analysis::{
    covering_formula, derivative_formula, fibered_torsion, reciprocity, CharacterSet, ManifoldClass, SignContext,
};
use crate::error::{Error, Result};
use crate::par::par_map;
use crate::rep::{validate_representation, AbelianizationMap, SL2Rep, TwistedMap};
use crate::ring::{FieldScalar, LaurentPoly, RatFunc, Ring, UnitClass};
use crate::sample::{random_short_exact_sequence, random_sl2, rng, RationalFunctions};
use crate::torsion::{
    abelian_factorization, classical_alexander, complex_torsion, naturality_check, ratfunc_unit, wada_torsion,
    Ambiguity, TorsionResult, WadaOptions,
};

#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    /// Task names or kinds to run instead of the job's task list.
    pub select: Vec<String>,
    pub seed: u64,
    pub check_invariants: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TaskStatus {
    Ok,
    /// The task ran but a checked identity failed.
    Failed,
    Error,
}

impl TaskStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            TaskStatus::Ok => "ok",
            TaskStatus::Failed => "failed",
            TaskStatus::Error => "error",
        }
    }
}

#[derive(Clone, Debug)]
pub enum TaskValue {
    None,
    /// A torsion, labelled `symbol` in reports.
    Function {
        symbol: String,
        value: RatFunc,
    },
    Scalar {
        symbol: String,
        value: FieldScalar,
    },
    Unit {
        symbol: String,
        vars: Arc<Vec<String>>,
        unit: UnitClass,
    },
    Count {
        passed: usize,
        total: usize,
    },
}

#[derive(Clone, Debug)]
pub struct TaskOutcome {
    pub name: String,
    pub kind: TaskKind,
    pub status: TaskStatus,
    pub value: TaskValue,
    pub ambiguity: Option<Ambiguity>,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct InvariantCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug)]
pub struct JobReport {
    pub tasks: Vec<TaskOutcome>,
    pub invariants: Vec<InvariantCheck>,
}

impl JobReport {
    pub fn success(&self) -> bool {
        self.tasks.iter().all(|t| t.status == TaskStatus::Ok) && self.invariants.iter().all(|c| c.passed)
    }
}

/// Shared state of one run: the job and the default Wada torsion, computed
/// at most once.
struct Context<'a> {
    job: &'a Job,
    seed: u64,
    wada: OnceLock<Result<TorsionResult>>,
}

impl<'a> Context<'a> {
    fn phi(&self) -> Result<&'a AbelianizationMap> {
        self.job.phi.as_ref().ok_or_else(|| Error::InvalidInput("the job declares no `phi`".into()))
    }

    fn rho(&self) -> Result<&'a SL2Rep> {
        self.job.rho.as_ref().ok_or_else(|| Error::InvalidInput("the job declares no `rho`".into()))
    }

    fn map(&self) -> Result<TwistedMap> {
        TwistedMap::adjoint(&self.job.presentation, self.rho()?, self.phi()?, &self.job.vars)
    }

    fn wada(&self) -> Result<TorsionResult> {
        self.wada.get_or_init(|| wada_torsion(&self.map()?, &WadaOptions::default())).clone()
    }

    fn wada_poly(&self) -> Result<(LaurentPoly, TorsionResult)> {
        let w = self.wada()?;
        let p = w
            .value
            .as_poly()
            .ok_or_else(|| Error::InvalidInput(format!("the torsion {} is not a Laurent polynomial", w.value)))?;
        Ok((p, w))
    }
}

/// Resolves `--task` names against the job: a task label, or a task kind
/// run with default options.
fn select_tasks(job: &Job, select: &[String]) -> Result<Vec<TaskSpec>> {
    if select.is_empty() {
        return Ok(job.tasks.clone());
    }
    select
        .iter()
        .map(|name| {
            if let Some(t) = job.tasks.iter().find(|t| &t.name == name) {
                Ok(t.clone())
            } else if let Some(kind) = TaskKind::from_name(name) {
                Ok(TaskSpec::new(kind))
            } else {
                Err(Error::InvalidInput(format!("unknown task `{name}`")))
            }
        })
        .collect()
}

pub fn run_job(job: &Job, opts: &RunOptions) -> Result<JobReport> {
    let tasks = select_tasks(job, &opts.select)?;
    let ctx = Context { job, seed: opts.seed, wada: OnceLock::new() };
    let tasks = par_map(tasks, |spec| outcome(&ctx, &spec));
    let invariants = if opts.check_invariants { check_invariants(&ctx) } else { Vec::new() };
    Ok(JobReport { tasks, invariants })
}

/// Runs a single task of `job`.
pub fn run_task(job: &Job, spec: &TaskSpec, seed: u64) -> TaskOutcome {
    let ctx = Context { job, seed, wada: OnceLock::new() };
    outcome(&ctx, spec)
}

fn outcome(ctx: &Context, spec: &TaskSpec) -> TaskOutcome {
    let mut out = TaskOutcome {
        name: spec.name.clone(),
        kind: spec.kind,
        status: TaskStatus::Ok,
        value: TaskValue::None,
        ambiguity: None,
        notes: Vec::new(),
    };
    if let Err(e) = execute(ctx, spec, &mut out) {
        out.status = TaskStatus::Error;
        out.value = TaskValue::None;
        out.ambiguity = None;
        out.notes.push(Error::Task { task: spec.name.clone(), source: Box::new(e) }.to_string());
    }
    out
}

fn delta(value: RatFunc) -> TaskValue {
    TaskValue::Function { symbol: "Δ".into(), value }
}

fn fmt_unit(vars: &[String], u: &UnitClass) -> String {
    let mono = crate::ring::laurent::format_monomial(vars, &u.shift);
    let sign = match u.sign {
        Some(-1) => "-",
        Some(_) => "",
        None => "±",
    };
    match (sign, mono.is_empty()) {
        ("", true) => "1".into(),
        (s, true) => format!("{s}1"),
        (s, false) => format!("{s}{mono}"),
    }
}

fn execute(ctx: &Context, spec: &TaskSpec, out: &mut TaskOutcome) -> Result<()> {
    let job = ctx.job;
    let opt = |k: &str| spec.option(k);
    match spec.kind {
        TaskKind::Wada => {
            let mut wopts = WadaOptions::default();
            if let Some(o) = opt("remove") {
                let g = job.presentation.generator_index(o.value.trim()).ok_or_else(|| {
                    Error::parse(o.origin.0, o.origin.1, format!("undeclared generator `{}`", o.value.trim()))
                })?;
                wopts.remove = Some(g);
            }
            if let Some(o) = opt("tau0") {
                let s = parse_int(&o.value, o.origin)?;
                if s != 1 && s != -1 {
                    return Err(Error::parse(o.origin.0, o.origin.1, "tau0 must be 1 or -1"));
                }
                wopts.tau0 = Some(s as i32);
            }
            let r = wada_torsion(&ctx.map()?, &wopts)?;
            out.value = delta(r.value);
            out.ambiguity = Some(r.ambiguity);
            out.notes = r.notes;
        }
        TaskKind::ComplexTorsion => {
            let r = complex_torsion(&ctx.map()?)?;
            out.notes = r.notes;
            match ctx.wada() {
                Ok(w) => match ratfunc_unit(&r.value, &w.value) {
                    Some(u) => {
                        out.notes.push(format!("agrees with the Wada torsion up to {}", fmt_unit(&job.vars, &u)))
                    }
                    None => {
                        out.status = TaskStatus::Failed;
                        out.notes.push(format!("differs from the Wada torsion {}", w.value));
                    }
                },
                Err(e) => out.notes.push(format!("no Wada torsion to compare with: {e}")),
            }
            out.value = TaskValue::Function { symbol: "tor".into(), value: r.value };
            out.ambiguity = Some(r.ambiguity);
        }
        TaskKind::Reciprocity => {
            let (p, _) = ctx.wada_poly()?;
            let b = match opt("b") {
                Some(o) => usize::try_from(parse_int(&o.value, o.origin)?)
                    .map_err(|_| Error::parse(o.origin.0, o.origin.1, "b must be positive"))?,
                None => job.vars.len(),
            };
            let class = match opt("class").map(|o| (o.value.trim(), o.origin)) {
                None if b == 1 => ManifoldClass::KnotExterior,
                None => ManifoldClass::LinkExterior,
                Some(("knot", _)) => ManifoldClass::KnotExterior,
                Some(("link", _)) => ManifoldClass::LinkExterior,
                Some(("fibered", _)) => ManifoldClass::FiberedKnot,
                Some(("generic", _)) => ManifoldClass::Generic,
                Some((other, o)) => {
                    return Err(Error::parse(
                        o.0,
                        o.1,
                        format!("unknown class `{other}` (knot, link, fibered, generic)"),
                    ))
                }
            };
            let r = reciprocity(&p, &SignContext::new(b, class))?;
            out.notes.push(format!("Δ(t^-1) = {} · Δ(t)", fmt_unit(&job.vars, &r.unit)));
            match r.expected_sign {
                Some(e) if e == r.observed_sign => {
                    out.notes.push(format!("observed sign {} matches (-1)^(b(b+1)/2) = {e}", r.observed_sign))
                }
                Some(e) => out.notes.push(format!(
                    "observed sign {} does not match (-1)^(b(b+1)/2) = {e}; recorded, not asserted",
                    r.observed_sign
                )),
                None => out.notes.push(format!("observed sign {}", r.observed_sign)),
            }
            out.value = TaskValue::Unit { symbol: "Δ(t^-1)/Δ(t)".into(), vars: job.vars.clone(), unit: r.unit };
            out.ambiguity = Some(Ambiguity::Exact);
        }
        TaskKind::Derivative => {
            let (p, w) = ctx.wada_poly()?;
            let n = job.vars.len();
            let ints32 = |key: &str| -> Result<Option<Vec<i32>>> {
                match opt(key) {
                    None => Ok(None),
                    Some(o) => parse_ints(&o.value, o.origin)?
                        .into_iter()
                        .map(|x| {
                            i32::try_from(x).map_err(|_| Error::parse(o.origin.0, o.origin.1, "exponent out of range"))
                        })
                        .collect::<Result<Vec<_>>>()
                        .map(Some),
                }
            };
            let a = ints32("a_exponents")?.unwrap_or_else(|| vec![1; n]);
            let reduce = ints32("reduce")?;
            let d = derivative_formula(&p, &a, reduce.as_deref())?;
            out.notes.push(format!("one-variable reduction {}", d.reduced));
            out.notes.push(format!("quotient {}", d.quotient));
            out.value = TaskValue::Scalar { symbol: "T_lambda".into(), value: d.value };
            out.ambiguity =
                Some(if w.ambiguity == Ambiguity::UpToMonomial { Ambiguity::Exact } else { Ambiguity::UpToSign });
        }
        TaskKind::Covering => {
            let (p, _) = ctx.wada_poly()?;
            let var = opt("var").map(|o| o.value.trim().to_string()).unwrap_or_else(|| "s".into());
            let chars = match opt("m") {
                Some(o) => {
                    if opt("lattice").is_some() || opt("characters").is_some() {
                        return Err(Error::parse(o.origin.0, o.origin.1, "give either `m` or `lattice`/`characters`"));
                    }
                    let m = u32::try_from(parse_int(&o.value, o.origin)?)
                        .ok()
                        .filter(|&m| m > 0)
                        .ok_or_else(|| Error::parse(o.origin.0, o.origin.1, "m must be positive"))?;
                    if job.vars.len() != 1 {
                        return Err(Error::InvalidInput("cyclic covers need one variable; use `lattice`".into()));
                    }
                    CharacterSet::cyclic(m)
                }
                None => {
                    let need =
                        |k: &str| opt(k).ok_or_else(|| Error::InvalidInput(format!("covering needs `m` or `{k}`")));
                    let l = need("lattice")?;
                    let c = need("characters")?;
                    let o = need("order")?;
                    let order = u32::try_from(parse_int(&o.value, o.origin)?)
                        .map_err(|_| Error::parse(o.origin.0, o.origin.1, "order must be positive"))?;
                    CharacterSet {
                        lattice: parse_int_matrix(&l.value, l.origin)?,
                        order,
                        characters: parse_int_matrix(&c.value, c.origin)?,
                    }
                }
            };
            let new_vars = if job.vars.len() == 1 {
                vec![var]
            } else {
                (1..=job.vars.len()).map(|i| format!("{var}{i}")).collect()
            };
            let r = covering_formula(&p, &chars, &Arc::new(new_vars))?;
            out.notes = r.notes;
            out.value = delta(RatFunc::from_poly(r.in_lattice));
            out.ambiguity = Some(r.ambiguity);
        }
        TaskKind::Fibered => {
            let m = opt("matrix").ok_or_else(|| Error::InvalidInput("fibered needs `matrix`".into()))?;
            let a = eval_matrix(&job.tower, &m.value, m.origin)?;
            let p1 = opt("phi1").ok_or_else(|| Error::InvalidInput("fibered needs `phi1`".into()))?;
            let phi1 = parse_int_matrix(&p1.value, p1.origin)?;
            let var = opt("var").map(|o| o.value.trim().to_string()).unwrap_or_else(|| job.vars[0].clone());
            let r = fibered_torsion(&a, &phi1, &var)?;
            out.notes = r.notes;
            if job.rho.is_some() && job.phi.is_some() && job.vars.len() == 1 && job.vars[0] == var {
                match ctx.wada() {
                    Ok(w) => match ratfunc_unit(&r.value, &w.value) {
                        Some(u) => {
                            out.notes.push(format!("agrees with the Wada torsion up to {}", fmt_unit(&job.vars, &u)))
                        }
                        None => {
                            out.status = TaskStatus::Failed;
                            out.notes.push(format!("differs from the Wada torsion {}", w.value));
                        }
                    },
                    Err(e) => out.notes.push(format!("no Wada torsion to compare with: {e}")),
                }
            }
            out.value = delta(r.value);
            out.ambiguity = Some(r.ambiguity);
        }
        TaskKind::Alexander => {
            let p = classical_alexander(&job.presentation, ctx.phi()?, &job.tower, &job.vars)?;
            out.value = delta(RatFunc::from_poly(p));
            out.ambiguity = Some(Ambiguity::UpToSignAndMonomial);
        }
        TaskKind::AbelianCheck => {
            let o = opt("xi").ok_or_else(|| Error::InvalidInput("abelian_check needs `xi`".into()))?;
            let xi = eval_scalar(&job.tower, &o.value, o.origin)?;
            let r = abelian_factorization(&job.presentation, ctx.phi()?, &xi, &job.vars, None)?;
            out.notes.push(format!("Alexander polynomial {}", r.alexander));
            out.notes.push(format!("product of rescaled Alexander polynomials {}", r.product));
            match &r.unit {
                Some(u) => out.notes.push(format!("torsion = {} · product", fmt_unit(&job.vars, u))),
                None => {
                    out.status = TaskStatus::Failed;
                    out.notes.push("torsion and product are not unit-equivalent".into());
                }
            }
            out.value = delta(r.torsion);
            out.ambiguity = Some(Ambiguity::UpToSignAndMonomial);
        }
        TaskKind::Naturality => {
            let o = opt("exponents").ok_or_else(|| Error::InvalidInput("naturality needs `exponents`".into()))?;
            let exps = parse_ints(&o.value, o.origin)?
                .into_iter()
                .map(|x| i32::try_from(x).map_err(|_| Error::parse(o.origin.0, o.origin.1, "exponent out of range")))
                .collect::<Result<Vec<_>>>()?;
            let var = opt("var").map(|o| o.value.trim().to_string()).unwrap_or_else(|| "t".into());
            let r = naturality_check(&ctx.map()?, &exps, &var)?;
            out.notes.push(format!("substituted {}", r.substituted));
            match &r.unit {
                Some(u) => out.notes.push(format!("agrees with the recomputed torsion up to {}", fmt_unit(&[var], u))),
                None => {
                    out.status = TaskStatus::Failed;
                    out.notes.push("substituted and recomputed torsions differ".into());
                }
            }
            out.value = delta(r.recomputed);
            out.ambiguity = Some(Ambiguity::UpToSignAndMonomial);
        }
        TaskKind::Polynomial => {
            let w = ctx.wada()?;
            out.ambiguity = Some(w.ambiguity);
            match w.value.as_poly() {
                Some(p) => {
                    let tower = p.tower().clone();
                    let one = LaurentPoly::one(&tower, &job.vars);
                    let divisor = (0..job.vars.len())
                        .fold(one.clone(), |acc, i| acc.mul(&LaurentPoly::var(&tower, &job.vars, i).sub(&one)));
                    match p.divide_exact(&divisor) {
                        Ok(q) => out.notes.push(format!("divisible by {divisor}; quotient {q}")),
                        Err(_) => {
                            out.status = TaskStatus::Failed;
                            out.notes.push(format!("not divisible by {divisor}"));
                        }
                    }
                    out.value = delta(RatFunc::from_poly(p));
                }
                None => {
                    out.status = TaskStatus::Failed;
                    out.notes.push("the torsion is not a Laurent polynomial".into());
                    out.value = delta(w.value);
                }
            }
        }
        TaskKind::Multiplicativity => {
            let count = match opt("count") {
                Some(o) => parse_int(&o.value, o.origin)?,
                None => 100,
            };
            let max_dim = match opt("max_dim") {
                Some(o) => parse_int(&o.value, o.origin)?,
                None => 4,
            };
            if count < 0 || !(1..=8).contains(&max_dim) {
                return Err(Error::InvalidInput("count must be non-negative and max_dim in 1..=8".into()));
            }
            let q = RationalFunctions::default();
            let mut r = rng(ctx.seed);
            let cases: Vec<_> = (0..count).map(|_| random_short_exact_sequence(&q, &mut r, max_dim as usize)).collect();
            let results = par_map(cases, |s| s.check());
            let mut passed = 0;
            for (k, res) in results.iter().enumerate() {
                match res {
                    Ok(rep) if rep.holds => passed += 1,
                    Ok(rep) => {
                        out.notes.push(format!("case {k}: torsion {} but identity gives {}", rep.torsion, rep.rhs))
                    }
                    Err(e) => out.notes.push(format!("case {k}: {e}")),
                }
            }
            if passed as i64 != count {
                out.status = TaskStatus::Failed;
            }
            out.notes.insert(0, format!("seed {}", ctx.seed));
            out.value = TaskValue::Count { passed, total: count as usize };
        }
        TaskKind::Conjugation => {
            let count = match opt("count") {
                Some(o) => parse_int(&o.value, o.origin)?,
                None => 20,
            };
            let rho = ctx.rho()?;
            let base = ctx.wada()?;
            let mut r = rng(ctx.seed);
            let conjugators: Vec<_> = (0..count.max(0)).map(|_| random_sl2(&job.tower, &mut r)).collect();
            let results = par_map(conjugators, |p| -> Result<bool> {
                let conj = rho.conjugate(&p)?;
                let map = TwistedMap::adjoint(&job.presentation, &conj, ctx.phi()?, &job.vars)?;
                let w = wada_torsion(&map, &WadaOptions::default())?;
                Ok(ratfunc_unit(&w.value, &base.value).is_some())
            });
            let mut passed = 0;
            for (k, res) in results.into_iter().enumerate() {
                match res {
                    Ok(true) => passed += 1,
                    Ok(false) => out.notes.push(format!("conjugator {k}: torsion changed")),
                    Err(e) => out.notes.push(format!("conjugator {k}: {e}")),
                }
            }
            if passed as i64 != count.max(0) {
                out.status = TaskStatus::Failed;
            }
            out.notes.insert(0, format!("seed {}", ctx.seed));
            out.value = TaskValue::Count { passed, total: count.max(0) as usize };
        }
        TaskKind::Validate => {
            let rep = validate_representation(ctx.rho()?, ctx.phi()?, &job.presentation);
            if job.tower.params().is_empty() || rep.is_ok() {
                if !rep.is_ok() {
                    out.status = TaskStatus::Failed;
                }
                out.notes = rep.failures;
            } else {
                out.notes.push("free parameters: relators hold only on the variety".into());
                out.notes.extend(rep.failures.into_iter().map(|f| format!("warning: {f}")));
            }
            if out.notes.is_empty() {
                out.notes.push("rho and phi respect every relator".into());
            }
        }
    }
    Ok(())
}

fn check_invariants(ctx: &Context) -> Vec<InvariantCheck> {
    let job = ctx.job;
    let mut checks = Vec::new();
    let (Some(rho), Some(phi)) = (&job.rho, &job.phi) else {
        checks.push(InvariantCheck {
            name: "inputs".into(),
            passed: true,
            detail: "no representation declared; nothing to check".into(),
        });
        return checks;
    };
    let rep = validate_representation(rho, phi, &job.presentation);
    let free = !job.tower.params().is_empty();
    checks.push(InvariantCheck {
        name: "representation".into(),
        passed: rep.is_ok() || free,
        detail: if rep.is_ok() {
            "rho and phi respect every relator".into()
        } else if free {
            format!("skipped relator identities over free parameters: {}", rep.failures.join("; "))
        } else {
            rep.failures.join("; ")
        },
    });
    if free && !rep.is_ok() {
        for name in ["column_independence", "complex_vs_wada", "reciprocity"] {
            checks.push(InvariantCheck {
                name: name.into(),
                passed: true,
                detail: "skipped: the relators do not hold for generic parameter values".into(),
            });
        }
        return checks;
    }
    let Ok(base) = ctx.wada() else {
        checks.push(InvariantCheck { name: "wada".into(), passed: false, detail: "Wada torsion failed".into() });
        return checks;
    };
    if let Ok(map) = ctx.map() {
        let g = job.presentation.num_generators();
        let others = par_map((0..g).collect(), |k| {
            wada_torsion(&map, &WadaOptions { remove: Some(k), tau0: None }).map(|r| (k, r))
        });
        let mut bad = Vec::new();
        let mut used = 0;
        for r in others.into_iter().flatten() {
            used += 1;
            if ratfunc_unit(&r.1.value, &base.value).is_none() {
                bad.push(job.presentation.generators[r.0].clone());
            }
        }
        checks.push(InvariantCheck {
            name: "column_independence".into(),
            passed: bad.is_empty(),
            detail: if bad.is_empty() {
                format!("{used} choices of removed generator agree up to a unit")
            } else {
                format!("removing {} gives a different torsion", bad.join(", "))
            },
        });
        match complex_torsion(&map) {
            Ok(c) => {
                let ok = ratfunc_unit(&c.value, &base.value).is_some();
                checks.push(InvariantCheck {
                    name: "complex_vs_wada".into(),
                    passed: ok,
                    detail: if ok { "agree up to a unit".into() } else { format!("complex torsion {}", c.value) },
                });
            }
            Err(e) => {
                checks.push(InvariantCheck { name: "complex_vs_wada".into(), passed: false, detail: e.to_string() })
            }
        }
    }
    if let Some(p) = base.value.as_poly() {
        let inv = p.invert_variables();
        let ok = inv.unit_equivalent(&p).is_some();
        checks.push(InvariantCheck {
            name: "reciprocity".into(),
            passed: ok,
            detail: if ok { "Δ(t^-1) is unit-equivalent to Δ(t)".into() } else { format!("Δ(t^-1) = {inv}") },
        });
    }
    checks
}
