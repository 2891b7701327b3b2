//! Quantified Boolean formulas over leveled variables.
//!
//! A level is one copy of the state variables; variable `k` of level `L`
//! stands for the `k`-th context variable of the state that `L` describes.
//! Quantifier blocks bind a whole level at once.

mod eval;

use std::collections::BTreeSet;
use std::fmt;

pub use eval::{eval_naive, substitute, Assignment, EvalError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LevelId(pub u32);

impl fmt::Display for LevelId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "L{}", self.0)
    }
}

/// Issues fresh levels; one counter per translation session.
#[derive(Debug, Default)]
pub struct LevelCounter {
    next: u32,
}

impl LevelCounter {
    pub fn new() -> Self {
        LevelCounter::default()
    }

    pub fn fresh(&mut self) -> LevelId {
        let id = LevelId(self.next);
        self.next += 1;
        id
    }

    /// Number of levels issued so far.
    pub fn issued(&self) -> u32 {
        self.next
    }
}

/// Variable `index` of level `level`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QVar {
    pub level: LevelId,
    pub index: u32,
}

impl QVar {
    pub fn new(level: LevelId, index: usize) -> Self {
        QVar {
            level,
            index: index as u32,
        }
    }
}

impl fmt::Display for QVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}_{}", self.level.0, self.index)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Qbf {
    Const(bool),
    Var(QVar),
    Not(Box<Qbf>),
    And(Vec<Qbf>),
    Or(Vec<Qbf>),
    Implies(Box<Qbf>, Box<Qbf>),
    Forall(LevelId, Box<Qbf>),
    Exists(LevelId, Box<Qbf>),
}

/// A QBF together with the number of variables in every level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Problem {
    pub width: usize,
    pub formula: Qbf,
}

impl Problem {
    pub fn new(width: usize, formula: Qbf) -> Self {
        Problem { width, formula }
    }
}

// Constructors fold constants but never drop quantifier blocks.
impl Qbf {
    pub const TRUE: Qbf = Qbf::Const(true);
    pub const FALSE: Qbf = Qbf::Const(false);

    pub fn var(level: LevelId, index: usize) -> Qbf {
        Qbf::Var(QVar::new(level, index))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(q: Qbf) -> Qbf {
        match q {
            Qbf::Const(b) => Qbf::Const(!b),
            Qbf::Not(inner) => *inner,
            other => Qbf::Not(Box::new(other)),
        }
    }

    pub fn and(items: impl IntoIterator<Item = Qbf>) -> Qbf {
        let mut out = Vec::new();
        for q in items {
            match q {
                Qbf::Const(true) => {}
                Qbf::Const(false) => return Qbf::FALSE,
                Qbf::And(inner) => out.extend(inner),
                other => out.push(other),
            }
        }
        match out.len() {
            0 => Qbf::TRUE,
            1 => out.pop().unwrap(),
            _ => Qbf::And(out),
        }
    }

    pub fn or(items: impl IntoIterator<Item = Qbf>) -> Qbf {
        let mut out = Vec::new();
        for q in items {
            match q {
                Qbf::Const(false) => {}
                Qbf::Const(true) => return Qbf::TRUE,
                Qbf::Or(inner) => out.extend(inner),
                other => out.push(other),
            }
        }
        match out.len() {
            0 => Qbf::FALSE,
            1 => out.pop().unwrap(),
            _ => Qbf::Or(out),
        }
    }

    pub fn implies(a: Qbf, b: Qbf) -> Qbf {
        match (a, b) {
            (Qbf::Const(false), _) | (_, Qbf::Const(true)) => Qbf::TRUE,
            (Qbf::Const(true), b) => b,
            (a, Qbf::Const(false)) => Qbf::not(a),
            (a, b) => Qbf::Implies(Box::new(a), Box::new(b)),
        }
    }

    pub fn iff(a: Qbf, b: Qbf) -> Qbf {
        match (a, b) {
            (Qbf::Const(x), Qbf::Const(y)) => Qbf::Const(x == y),
            (Qbf::Const(true), q) | (q, Qbf::Const(true)) => q,
            (Qbf::Const(false), q) | (q, Qbf::Const(false)) => Qbf::not(q),
            (a, b) => Qbf::and([Qbf::implies(a.clone(), b.clone()), Qbf::implies(b, a)]),
        }
    }

    pub fn forall(level: LevelId, body: Qbf) -> Qbf {
        Qbf::Forall(level, Box::new(body))
    }

    pub fn exists(level: LevelId, body: Qbf) -> Qbf {
        Qbf::Exists(level, Box::new(body))
    }

    pub fn children(&self) -> Vec<&Qbf> {
        match self {
            Qbf::Const(_) | Qbf::Var(_) => vec![],
            Qbf::Not(a) | Qbf::Forall(_, a) | Qbf::Exists(_, a) => vec![a],
            Qbf::And(xs) | Qbf::Or(xs) => xs.iter().collect(),
            Qbf::Implies(a, b) => vec![a, b],
        }
    }

    /// Number of nodes in the tree.
    pub fn size(&self) -> usize {
        1 + self.children().into_iter().map(Qbf::size).sum::<usize>()
    }

    /// Variables not bound by an enclosing block.
    pub fn free_vars(&self) -> BTreeSet<QVar> {
        fn go(q: &Qbf, bound: &mut Vec<LevelId>, out: &mut BTreeSet<QVar>) {
            match q {
                Qbf::Var(v) if !bound.contains(&v.level) => {
                    out.insert(*v);
                }
                Qbf::Forall(l, body) | Qbf::Exists(l, body) => {
                    bound.push(*l);
                    go(body, bound, out);
                    bound.pop();
                }
                other => {
                    for c in other.children() {
                        go(c, bound, out);
                    }
                }
            }
        }
        let mut out = BTreeSet::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// Levels of all quantifier blocks in preorder, with `true` for `∀`.
    pub fn blocks(&self) -> Vec<(LevelId, bool)> {
        fn go(q: &Qbf, out: &mut Vec<(LevelId, bool)>) {
            match q {
                Qbf::Forall(l, _) => out.push((*l, true)),
                Qbf::Exists(l, _) => out.push((*l, false)),
                _ => {}
            }
            for c in q.children() {
                go(c, out);
            }
        }
        let mut out = Vec::new();
        go(self, &mut out);
        out
    }

    /// Every level mentioned by a variable or a block.
    pub fn levels(&self) -> BTreeSet<LevelId> {
        fn go(q: &Qbf, out: &mut BTreeSet<LevelId>) {
            match q {
                Qbf::Var(v) => {
                    out.insert(v.level);
                }
                Qbf::Forall(l, _) | Qbf::Exists(l, _) => {
                    out.insert(*l);
                }
                _ => {}
            }
            for c in q.children() {
                go(c, out);
            }
        }
        let mut out = BTreeSet::new();
        go(self, &mut out);
        out
    }
}

impl fmt::Display for Qbf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |f: &mut fmt::Formatter<'_>, op: &str, xs: &[Qbf]| -> fmt::Result {
            write!(f, "{op}(")?;
            for (k, x) in xs.iter().enumerate() {
                if k > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{x}")?;
            }
            f.write_str(")")
        };
        match self {
            Qbf::Const(b) => write!(f, "{b}"),
            Qbf::Var(v) => write!(f, "{v}"),
            Qbf::Not(a) => write!(f, "-{a}"),
            Qbf::And(xs) => list(f, "and", xs),
            Qbf::Or(xs) => list(f, "or", xs),
            Qbf::Implies(a, b) => write!(f, "({a} => {b})"),
            Qbf::Forall(l, a) => write!(f, "forall {l}. {a}"),
            Qbf::Exists(l, a) => write!(f, "exists {l}. {a}"),
        }
    }
}
