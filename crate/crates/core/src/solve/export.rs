//! QCIR-G14 and QDIMACS writers.
//!
//! Variable `k` of level `L` is named `v{L}_{k}` in QCIR. QCIR gates are
//! numbered `g1, g2, …` in post-order. QDIMACS numbers the variables of each
//! block consecutively in prefix order, then the Tseitin variables.

use std::collections::HashMap;
use std::fmt::Write;

use crate::model::Context;
use crate::qbf::{LevelId, Problem, QVar, Qbf};

/// QCIR-G14 text, keeping the formula's quantifier structure. With a
/// context, a comment block maps each tag index to its state variable.
pub fn export_qcir(p: &Problem, ctx: Option<&Context>) -> String {
    write_qcir(p, ctx, false)
}

/// Prenex QCIR-G14, for solvers that read only a leading quantifier
/// prefix. Blocks are hoisted as in [`export_qdimacs`].
pub fn export_qcir_prenex(p: &Problem, ctx: Option<&Context>) -> String {
    write_qcir(p, ctx, true)
}

fn write_qcir(p: &Problem, ctx: Option<&Context>, prenex: bool) -> String {
    let mut w = QcirWriter {
        width: p.width,
        prenex,
        gates: Vec::new(),
    };
    let root = w.lit(&p.formula);
    let mut out = w.name(root);
    if !out.starts_with('g') {
        // some readers accept only a gate name as the output
        out = w.gate(format!("and({out})"));
    }
    let mut text = String::from("#QCIR-G14\n");
    if let Some(ctx) = ctx {
        for (k, tag) in ctx.tags().iter().enumerate() {
            writeln!(text, "# v*_{k} = {tag}").unwrap();
        }
    }
    if prenex && p.width > 0 {
        let mut prefix = Vec::new();
        collect_prefix(&p.formula, true, &mut prefix);
        let mut blocks: Vec<(bool, Vec<String>)> = Vec::new();
        for (level, universal) in prefix {
            let vars = (0..p.width).map(|k| qcir_var(QVar::new(level, k)));
            match blocks.last_mut() {
                Some((u, vs)) if *u == universal => vs.extend(vars),
                _ => blocks.push((universal, vars.collect())),
            }
        }
        for (universal, vars) in blocks {
            let q = if universal { "forall" } else { "exists" };
            writeln!(text, "{q}({})", vars.join(", ")).unwrap();
        }
    }
    writeln!(text, "output({out})").unwrap();
    for g in w.gates {
        text.push_str(&g);
        text.push('\n');
    }
    text
}

/// In prenex mode the writer also cleanses gates: constants are folded,
/// repeated inputs dropped, and complementary inputs decide the gate.
struct QcirWriter {
    width: usize,
    prenex: bool,
    gates: Vec<String>,
}

enum Out {
    Const(bool),
    Lit(String),
}

impl Out {
    fn negate(self) -> Out {
        match self {
            Out::Const(b) => Out::Const(!b),
            Out::Lit(l) => Out::Lit(negate(l)),
        }
    }
}

fn qcir_var(v: QVar) -> String {
    format!("v{}_{}", v.level.0, v.index)
}

impl QcirWriter {
    fn gate(&mut self, body: String) -> String {
        let name = format!("g{}", self.gates.len() + 1);
        self.gates.push(format!("{name} = {body}"));
        name
    }

    fn name(&mut self, o: Out) -> String {
        match o {
            Out::Const(true) => self.gate("and()".into()),
            Out::Const(false) => self.gate("or()".into()),
            Out::Lit(l) => l,
        }
    }

    fn list(&mut self, conj: bool, inputs: Vec<Out>) -> Out {
        let op = if conj { "and" } else { "or" };
        if !self.prenex {
            let lits: Vec<String> = inputs.into_iter().map(|o| self.name(o)).collect();
            return Out::Lit(self.gate(format!("{op}({})", lits.join(", "))));
        }
        let mut lits: Vec<String> = Vec::new();
        for o in inputs {
            match o {
                Out::Const(b) if b == conj => {}
                Out::Const(_) => return Out::Const(!conj),
                Out::Lit(l) if lits.contains(&negate(l.clone())) => return Out::Const(!conj),
                Out::Lit(l) if !lits.contains(&l) => lits.push(l),
                Out::Lit(_) => {}
            }
        }
        match lits.len() {
            0 => Out::Const(conj),
            1 => Out::Lit(lits.pop().unwrap()),
            _ => Out::Lit(self.gate(format!("{op}({})", lits.join(", ")))),
        }
    }

    fn lit(&mut self, q: &Qbf) -> Out {
        match q {
            Qbf::Const(b) if self.prenex => Out::Const(*b),
            Qbf::Const(b) => Out::Lit(self.name(Out::Const(*b))),
            Qbf::Var(v) => Out::Lit(qcir_var(*v)),
            Qbf::Not(a) => self.lit(a).negate(),
            Qbf::And(xs) | Qbf::Or(xs) => {
                let inputs = xs.iter().map(|x| self.lit(x)).collect();
                self.list(matches!(q, Qbf::And(_)), inputs)
            }
            Qbf::Implies(a, b) => {
                let a = self.lit(a).negate();
                let b = self.lit(b);
                self.list(false, vec![a, b])
            }
            Qbf::Forall(l, body) | Qbf::Exists(l, body) => {
                let body = self.lit(body);
                if self.width == 0 || self.prenex {
                    return body;
                }
                let body = self.name(body);
                let vars: Vec<String> = (0..self.width)
                    .map(|k| qcir_var(QVar::new(*l, k)))
                    .collect();
                let q = if matches!(q, Qbf::Forall(..)) {
                    "forall"
                } else {
                    "exists"
                };
                Out::Lit(self.gate(format!("{q}({}; {body})", vars.join(", "))))
            }
        }
    }
}

fn negate(lit: String) -> String {
    match lit.strip_prefix('-') {
        Some(pos) => pos.to_string(),
        None => format!("-{lit}"),
    }
}

/// The text emitted for a formula that is false without any variable.
pub const QDIMACS_FALSE: &str = "p cnf 1 2\ne 1 0\n1 0\n-1 0\n";
/// The text emitted for a formula that is true without any variable.
pub const QDIMACS_TRUE: &str = "p cnf 0 0\n";

/// Prenex CNF in QDIMACS. Blocks are hoisted in syntactic order, a block
/// under an odd number of negations switching its quantifier.
pub fn export_qdimacs(p: &Problem) -> String {
    let mut prefix = Vec::new();
    collect_prefix(&p.formula, true, &mut prefix);
    let mut numbering: HashMap<QVar, i64> = HashMap::new();
    let mut blocks: Vec<(bool, Vec<i64>)> = Vec::new();
    let mut next = 1i64;
    for (level, universal) in prefix {
        if p.width == 0 {
            continue;
        }
        let vars: Vec<i64> = (0..p.width)
            .map(|k| {
                numbering.insert(QVar::new(level, k), next);
                next += 1;
                next - 1
            })
            .collect();
        match blocks.last_mut() {
            Some((u, vs)) if *u == universal => vs.extend(vars),
            _ => blocks.push((universal, vars)),
        }
    }
    let first_aux = next;
    let mut t = Tseitin {
        numbering,
        next,
        clauses: Vec::new(),
    };
    let root = match t.lit(&p.formula) {
        Lit::Const(false) => return QDIMACS_FALSE.to_string(),
        Lit::Const(true) => return QDIMACS_TRUE.to_string(),
        Lit::Var(v) => v,
    };
    t.clauses.push(vec![root]);
    let aux: Vec<i64> = (first_aux..t.next).collect();
    if !aux.is_empty() {
        match blocks.last_mut() {
            Some((false, vs)) => vs.extend(aux),
            _ => blocks.push((false, aux)),
        }
    }
    let mut text = String::new();
    writeln!(text, "p cnf {} {}", t.next - 1, t.clauses.len()).unwrap();
    for (universal, vars) in blocks {
        let q = if universal { 'a' } else { 'e' };
        let vars: Vec<String> = vars.iter().map(i64::to_string).collect();
        writeln!(text, "{q} {} 0", vars.join(" ")).unwrap();
    }
    for c in t.clauses {
        let lits: Vec<String> = c.iter().map(i64::to_string).collect();
        writeln!(text, "{} 0", lits.join(" ")).unwrap();
    }
    text
}

fn collect_prefix(q: &Qbf, positive: bool, out: &mut Vec<(LevelId, bool)>) {
    match q {
        Qbf::Forall(l, body) => {
            out.push((*l, positive));
            collect_prefix(body, positive, out);
        }
        Qbf::Exists(l, body) => {
            out.push((*l, !positive));
            collect_prefix(body, positive, out);
        }
        Qbf::Not(a) => collect_prefix(a, !positive, out),
        Qbf::Implies(a, b) => {
            collect_prefix(a, !positive, out);
            collect_prefix(b, positive, out);
        }
        Qbf::And(xs) | Qbf::Or(xs) => {
            for x in xs {
                collect_prefix(x, positive, out);
            }
        }
        Qbf::Const(_) | Qbf::Var(_) => {}
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Lit {
    Const(bool),
    Var(i64),
}

impl Lit {
    fn negate(self) -> Lit {
        match self {
            Lit::Const(b) => Lit::Const(!b),
            Lit::Var(v) => Lit::Var(-v),
        }
    }
}

struct Tseitin {
    numbering: HashMap<QVar, i64>,
    next: i64,
    clauses: Vec<Vec<i64>>,
}

impl Tseitin {
    fn fresh(&mut self) -> i64 {
        self.next += 1;
        self.next - 1
    }

    fn lit(&mut self, q: &Qbf) -> Lit {
        match q {
            Qbf::Const(b) => Lit::Const(*b),
            Qbf::Var(v) => {
                // only reachable for open formulas: the variable lands in the
                // innermost existential block with the Tseitin variables
                let n = match self.numbering.get(v) {
                    Some(&n) => n,
                    None => {
                        let n = self.fresh();
                        self.numbering.insert(*v, n);
                        n
                    }
                };
                Lit::Var(n)
            }
            Qbf::Not(a) => self.lit(a).negate(),
            Qbf::And(xs) => {
                let lits: Vec<Lit> = xs.iter().map(|x| self.lit(x)).collect();
                self.gate(true, lits)
            }
            Qbf::Or(xs) => {
                let lits: Vec<Lit> = xs.iter().map(|x| self.lit(x)).collect();
                self.gate(false, lits)
            }
            Qbf::Implies(a, b) => {
                let a = self.lit(a).negate();
                let b = self.lit(b);
                self.gate(false, vec![a, b])
            }
            Qbf::Forall(_, body) | Qbf::Exists(_, body) => self.lit(body),
        }
    }

    /// Conjunction (or disjunction) of `lits` as a new variable.
    fn gate(&mut self, conj: bool, lits: Vec<Lit>) -> Lit {
        let mut vars = Vec::new();
        for l in lits {
            match l {
                Lit::Const(b) if b == conj => {}
                Lit::Const(_) => return Lit::Const(!conj),
                Lit::Var(v) => vars.push(v),
            }
        }
        match vars.len() {
            0 => return Lit::Const(conj),
            1 => return Lit::Var(vars[0]),
            _ => {}
        }
        // an OR gate g is encoded as the AND gate -g over the negated inputs
        let sign = if conj { 1 } else { -1 };
        let g = self.fresh();
        let out = sign * g;
        let mut long = vec![out];
        for &v in &vars {
            let input = sign * v;
            self.clauses.push(vec![-out, input]);
            long.push(-input);
        }
        self.clauses.push(long);
        Lit::Var(g)
    }
}
