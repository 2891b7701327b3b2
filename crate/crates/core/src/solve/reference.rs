//! Readers for QCIR-G14 and QDIMACS text that decide the formula with a
//! fresh BDD manager. They only look at the text, so they check the
//! exporters independently of the in-memory formula.

use std::collections::{BTreeSet, HashMap, HashSet};

use thiserror::Error;

use super::bdd::{Bdd, BddManager, BudgetExceeded};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ReferenceError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("node budget of {0} exhausted")]
    Budget(usize),
}

impl From<BudgetExceeded> for ReferenceError {
    fn from(e: BudgetExceeded) -> Self {
        ReferenceError::Budget(e.limit)
    }
}

fn parse_err(line: usize, message: impl Into<String>) -> ReferenceError {
    ReferenceError::Parse {
        line,
        message: message.into(),
    }
}

enum Gate {
    And(Vec<String>),
    Or(Vec<String>),
    Xor(String, String),
    Ite(String, String, String),
    Quant(bool, Vec<String>, String),
}

struct Qcir {
    prefix: Vec<(bool, Vec<String>)>,
    output: String,
    gates: HashMap<String, Gate>,
}

fn split_args(s: &str) -> Vec<String> {
    s.split(',')
        .map(str::trim)
        .filter(|a| !a.is_empty())
        .map(String::from)
        .collect()
}

fn call(line: usize, text: &str) -> Result<(&str, &str), ReferenceError> {
    let open = text
        .find('(')
        .ok_or_else(|| parse_err(line, "expected `(`"))?;
    let inner = text[open + 1..]
        .strip_suffix(')')
        .ok_or_else(|| parse_err(line, "expected `)` at end of line"))?;
    Ok((text[..open].trim(), inner))
}

fn parse_qcir(text: &str) -> Result<Qcir, ReferenceError> {
    let mut lines = text.lines().enumerate().map(|(k, l)| (k + 1, l.trim()));
    match lines.next() {
        Some((_, first)) if first.starts_with("#QCIR-G14") => {}
        _ => return Err(parse_err(1, "missing #QCIR-G14 header")),
    }
    let mut prefix = Vec::new();
    let mut output = None;
    let mut gates = HashMap::new();
    for (line, l) in lines {
        if l.is_empty() || l.starts_with('#') {
            continue;
        }
        if let Some((name, rhs)) = l.split_once('=') {
            let name = name.trim().to_string();
            let (op, inner) = call(line, rhs.trim())?;
            let gate = match op.to_ascii_lowercase().as_str() {
                "and" => Gate::And(split_args(inner)),
                "or" => Gate::Or(split_args(inner)),
                "xor" => match split_args(inner).as_slice() {
                    [a, b] => Gate::Xor(a.clone(), b.clone()),
                    _ => return Err(parse_err(line, "xor takes two literals")),
                },
                "ite" => match split_args(inner).as_slice() {
                    [a, b, c] => Gate::Ite(a.clone(), b.clone(), c.clone()),
                    _ => return Err(parse_err(line, "ite takes three literals")),
                },
                q @ ("forall" | "exists") => {
                    let (vars, body) = inner
                        .split_once(';')
                        .ok_or_else(|| parse_err(line, "quantifier gate without `;`"))?;
                    Gate::Quant(q == "forall", split_args(vars), body.trim().to_string())
                }
                other => return Err(parse_err(line, format!("unknown gate type `{other}`"))),
            };
            if gates.insert(name.clone(), gate).is_some() {
                return Err(parse_err(line, format!("gate `{name}` defined twice")));
            }
        } else {
            let (op, inner) = call(line, l)?;
            match op.to_ascii_lowercase().as_str() {
                "output" => output = Some(inner.trim().to_string()),
                "forall" => prefix.push((true, split_args(inner))),
                "exists" => prefix.push((false, split_args(inner))),
                "free" => prefix.push((false, split_args(inner))),
                other => return Err(parse_err(line, format!("unexpected statement `{other}`"))),
            }
        }
    }
    let output = output.ok_or_else(|| parse_err(0, "no output statement"))?;
    Ok(Qcir {
        prefix,
        output,
        gates,
    })
}

struct QcirSolver<'a> {
    q: &'a Qcir,
    m: BddManager,
    vars: HashMap<String, u32>,
    memo: HashMap<String, Bdd>,
    /// Variables fixed by top-level unit literals.
    units: HashMap<String, bool>,
}

/// Literals asserted by the chain of `exists` and `and` gates below the
/// output, on variables bound by those `exists` gates. Since QCIR binds
/// each variable at most once, `∃x (x ∧ φ)` may be read as `φ[x := 1]`.
fn top_level_units(q: &Qcir) -> HashMap<String, bool> {
    let mut bound: HashSet<&str> = q
        .prefix
        .iter()
        .take_while(|(universal, _)| !universal)
        .flat_map(|(_, vars)| vars.iter().map(String::as_str))
        .collect();
    let mut literals = Vec::new();
    let mut stack = vec![q.output.as_str()];
    while let Some(name) = stack.pop() {
        match q.gates.get(name) {
            Some(Gate::Quant(false, vars, body)) if !body.starts_with('-') => {
                bound.extend(vars.iter().map(String::as_str));
                stack.push(body);
            }
            Some(Gate::And(xs)) => {
                for x in xs {
                    let (positive, var) = match x.strip_prefix('-') {
                        Some(v) => (false, v),
                        None => (true, x.as_str()),
                    };
                    if q.gates.contains_key(var) {
                        if positive {
                            stack.push(var);
                        }
                    } else {
                        literals.push((var, positive));
                    }
                }
            }
            _ => {}
        }
    }
    let mut units = HashMap::new();
    let mut clashes = HashSet::new();
    for (var, value) in literals {
        if bound.contains(var) && *units.entry(var.to_string()).or_insert(value) != value {
            // contradictory units are left to the diagram
            clashes.insert(var.to_string());
        }
    }
    units.retain(|v, _| !clashes.contains(v));
    units
}

impl QcirSolver<'_> {
    /// Numbers the variables of the prefix, then those of quantifier gates
    /// outermost first, so that inner blocks sit at the bottom of the diagram.
    fn order_variables(&mut self) {
        for (_, vars) in &self.q.prefix {
            for v in vars {
                self.var_index(v);
            }
        }
        let mut seen = HashSet::new();
        let mut stack = vec![self.q.output.trim_start_matches('-').to_string()];
        while let Some(name) = stack.pop() {
            if !seen.insert(name.clone()) {
                continue;
            }
            let args: Vec<&String> = match self.q.gates.get(&name) {
                None => continue,
                Some(Gate::Quant(_, vars, body)) => {
                    for v in vars {
                        self.var_index(v);
                    }
                    vec![body]
                }
                Some(Gate::And(xs) | Gate::Or(xs)) => xs.iter().collect(),
                Some(Gate::Xor(a, b)) => vec![a, b],
                Some(Gate::Ite(c, t, e)) => vec![c, t, e],
            };
            stack.extend(
                args.into_iter()
                    .rev()
                    .map(|a| a.trim_start_matches('-').to_string()),
            );
        }
    }

    fn var_index(&mut self, name: &str) -> u32 {
        let next = self.vars.len() as u32;
        *self.vars.entry(name.to_string()).or_insert(next)
    }

    fn lit(&mut self, lit: &str) -> Result<Bdd, ReferenceError> {
        match lit.strip_prefix('-') {
            Some(pos) => {
                let f = self.lit(pos)?;
                Ok(self.m.not(f)?)
            }
            None => self.node(lit),
        }
    }

    fn node(&mut self, name: &str) -> Result<Bdd, ReferenceError> {
        if let Some(&b) = self.memo.get(name) {
            return Ok(b);
        }
        let Some(gate) = self.q.gates.get(name) else {
            if let Some(&b) = self.units.get(name) {
                return Ok(self.m.constant(b));
            }
            let v = self.var_index(name);
            return Ok(self.m.var(v)?);
        };
        let r = match gate {
            Gate::And(xs) | Gate::Or(xs) => {
                let conj = matches!(gate, Gate::And(_));
                let mut acc = self.m.constant(conj);
                for x in xs {
                    let f = self.lit(x)?;
                    acc = if conj {
                        self.m.and(acc, f)?
                    } else {
                        self.m.or(acc, f)?
                    };
                }
                acc
            }
            Gate::Xor(a, b) => {
                let (a, b) = (self.lit(a)?, self.lit(b)?);
                let same = self.m.iff(a, b)?;
                self.m.not(same)?
            }
            Gate::Ite(c, t, e) => {
                let (c, t, e) = (self.lit(c)?, self.lit(t)?, self.lit(e)?);
                let ct = self.m.and(c, t)?;
                let nc = self.m.not(c)?;
                let ne = self.m.and(nc, e)?;
                self.m.or(ct, ne)?
            }
            Gate::Quant(universal, vars, body) => {
                let f = self.lit(body)?;
                let idx: Vec<u32> = vars.iter().map(|v| self.var_index(v)).collect();
                self.m.quantify_vars(f, &idx, *universal)?
            }
        };
        self.memo.insert(name.to_string(), r);
        Ok(r)
    }
}

/// Decides a QCIR-G14 file. Variables that no quantifier binds are read as
/// existential, as are `free(...)` ones.
pub fn solve_qcir(text: &str, budget: usize) -> Result<bool, ReferenceError> {
    let q = parse_qcir(text)?;
    let mut s = QcirSolver {
        q: &q,
        m: BddManager::new(budget),
        vars: HashMap::new(),
        memo: HashMap::new(),
        units: top_level_units(&q),
    };
    s.order_variables();
    let mut f = s.lit(&q.output)?;
    for (universal, vars) in q.prefix.iter().rev() {
        let idx: Vec<u32> = vars.iter().map(|v| s.var_index(v)).collect();
        f = s.m.quantify_vars(f, &idx, *universal)?;
    }
    let rest: Vec<u32> = s.vars.values().copied().collect();
    f = s.m.quantify_vars(f, &rest, false)?;
    Ok(f == Bdd::TRUE)
}

/// Decides a QDIMACS file by eliminating variables from the innermost block
/// outwards. Variables outside the prefix are existential in an outermost
/// block.
pub fn solve_qdimacs(text: &str, budget: usize) -> Result<bool, ReferenceError> {
    let mut header = None;
    let mut blocks: Vec<(bool, Vec<u32>)> = Vec::new();
    let mut clauses: Vec<Vec<i64>> = Vec::new();
    for (k, l) in text.lines().enumerate() {
        let line = k + 1;
        let l = l.trim();
        if l.is_empty() || l.starts_with('c') {
            continue;
        }
        let mut words = l.split_whitespace();
        let first = words.next().unwrap();
        let number = |w: &str| {
            w.parse::<i64>()
                .map_err(|_| parse_err(line, format!("bad number `{w}`")))
        };
        match first {
            "p" => {
                let rest: Vec<&str> = words.collect();
                match rest.as_slice() {
                    ["cnf", v, c] => header = Some((number(v)?, number(c)?)),
                    _ => return Err(parse_err(line, "malformed problem line")),
                }
            }
            "a" | "e" => {
                let mut vars = Vec::new();
                for w in words {
                    match number(w)? {
                        0 => break,
                        v if v > 0 => vars.push(v as u32),
                        _ => return Err(parse_err(line, "negative variable in prefix")),
                    }
                }
                blocks.push((first == "a", vars));
            }
            _ => {
                let mut clause = Vec::new();
                for w in std::iter::once(first).chain(words) {
                    match number(w)? {
                        0 => break,
                        lit => clause.push(lit),
                    }
                }
                clauses.push(clause);
            }
        }
    }
    let (nvars, nclauses) = header.ok_or_else(|| parse_err(0, "missing problem line"))?;
    if nclauses as usize != clauses.len() {
        return Err(parse_err(
            0,
            format!(
                "header announces {nclauses} clauses, found {}",
                clauses.len()
            ),
        ));
    }
    let nvars = nvars as u32;
    for c in &clauses {
        if let Some(lit) = c.iter().find(|l| l.unsigned_abs() > nvars as u64) {
            return Err(parse_err(
                0,
                format!("literal {lit} above the announced {nvars} variables"),
            ));
        }
    }
    let universal: HashSet<u32> = blocks
        .iter()
        .filter(|(u, _)| *u)
        .flat_map(|(_, vs)| vs.iter().copied())
        .collect();
    let Some(clauses) = propagate_units(clauses, &universal) else {
        return Ok(false);
    };
    let mut m = BddManager::new(budget);
    let mut conjuncts: Vec<(Bdd, BTreeSet<u32>)> = Vec::with_capacity(clauses.len());
    for c in &clauses {
        let mut clause = Bdd::FALSE;
        let mut support = BTreeSet::new();
        for &lit in c {
            let v = lit.unsigned_abs();
            let x = m.var(v as u32)?;
            let l = if lit > 0 { x } else { m.not(x)? };
            clause = m.or(clause, l)?;
            support.insert(v as u32);
        }
        conjuncts.push((clause, support));
    }
    let declared: BTreeSet<u32> = blocks
        .iter()
        .flat_map(|(_, vs)| vs.iter().copied())
        .collect();
    let undeclared: Vec<u32> = (1..=nvars).filter(|v| !declared.contains(v)).collect();
    blocks.insert(0, (false, undeclared));
    // innermost block first; each variable is eliminated from the conjuncts
    // that mention it, the rest being unaffected by its quantifier
    for (universal, vars) in blocks.iter().rev() {
        for &v in vars.iter().rev() {
            if *universal {
                for (f, support) in conjuncts.iter_mut().filter(|(_, s)| s.contains(&v)) {
                    *f = m.quantify_vars(*f, &[v], true)?;
                    support.remove(&v);
                }
                continue;
            }
            let (mut hit, rest): (Vec<_>, Vec<_>) =
                conjuncts.into_iter().partition(|(_, s)| s.contains(&v));
            conjuncts = rest;
            if hit.is_empty() {
                continue;
            }
            let mut f = Bdd::TRUE;
            let mut support = BTreeSet::new();
            for (g, s) in hit.drain(..) {
                f = m.and(f, g)?;
                support.extend(s);
            }
            f = m.quantify_vars(f, &[v], false)?;
            support.remove(&v);
            conjuncts.push((f, support));
        }
    }
    let mut f = Bdd::TRUE;
    for (g, _) in conjuncts {
        f = m.and(f, g)?;
    }
    Ok(f == Bdd::TRUE)
}

/// Assigns existential unit literals until none is left. `None` when a
/// clause becomes empty or a universal literal is forced.
fn propagate_units(mut clauses: Vec<Vec<i64>>, universal: &HashSet<u32>) -> Option<Vec<Vec<i64>>> {
    loop {
        let Some(unit) = clauses
            .iter()
            .find(|c| c.len() <= 1)
            .map(|c| c.first().copied())
        else {
            return Some(clauses);
        };
        let lit = unit?;
        if universal.contains(&(lit.unsigned_abs() as u32)) {
            return None;
        }
        clauses = clauses
            .into_iter()
            .filter(|c| !c.contains(&lit))
            .map(|c| c.into_iter().filter(|l| *l != -lit).collect())
            .collect();
    }
}
