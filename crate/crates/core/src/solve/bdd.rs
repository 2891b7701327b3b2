//! Reduced ordered BDDs with a unique table and memoized operations.

use rustc_hash::FxHashMap;

/// The manager refused to allocate past its node budget.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BudgetExceeded {
    pub limit: usize,
}

/// Handle of a node inside one [`BddManager`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Bdd(u32);

impl Bdd {
    pub const FALSE: Bdd = Bdd(0);
    pub const TRUE: Bdd = Bdd(1);

    pub fn is_const(self) -> bool {
        self.0 < 2
    }

    pub fn as_bool(self) -> Option<bool> {
        match self.0 {
            0 => Some(false),
            1 => Some(true),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
struct Node {
    var: u32,
    low: Bdd,
    high: Bdd,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Op {
    And,
    Or,
}

pub struct BddManager {
    nodes: Vec<Node>,
    unique: FxHashMap<Node, Bdd>,
    apply_cache: FxHashMap<(Op, Bdd, Bdd), Bdd>,
    not_cache: FxHashMap<Bdd, Bdd>,
    budget: usize,
}

const TERMINAL_VAR: u32 = u32::MAX;

impl BddManager {
    pub fn new(budget: usize) -> Self {
        let terminal = |b| Node {
            var: TERMINAL_VAR,
            low: b,
            high: b,
        };
        BddManager {
            nodes: vec![terminal(Bdd::FALSE), terminal(Bdd::TRUE)],
            unique: FxHashMap::default(),
            apply_cache: FxHashMap::default(),
            not_cache: FxHashMap::default(),
            budget,
        }
    }

    /// Nodes allocated so far, terminals included.
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn constant(&self, b: bool) -> Bdd {
        if b {
            Bdd::TRUE
        } else {
            Bdd::FALSE
        }
    }

    /// Decision variable of a non-terminal node.
    pub fn top_var(&self, f: Bdd) -> Option<u32> {
        (!f.is_const()).then(|| self.nodes[f.0 as usize].var)
    }

    pub fn low(&self, f: Bdd) -> Bdd {
        self.nodes[f.0 as usize].low
    }

    pub fn high(&self, f: Bdd) -> Bdd {
        self.nodes[f.0 as usize].high
    }

    fn var_of(&self, f: Bdd) -> u32 {
        self.nodes[f.0 as usize].var
    }

    fn mk(&mut self, var: u32, low: Bdd, high: Bdd) -> Result<Bdd, BudgetExceeded> {
        if low == high {
            return Ok(low);
        }
        let node = Node { var, low, high };
        if let Some(&b) = self.unique.get(&node) {
            return Ok(b);
        }
        if self.nodes.len() >= self.budget {
            return Err(BudgetExceeded { limit: self.budget });
        }
        let b = Bdd(self.nodes.len() as u32);
        self.nodes.push(node);
        self.unique.insert(node, b);
        Ok(b)
    }

    pub fn var(&mut self, var: u32) -> Result<Bdd, BudgetExceeded> {
        self.mk(var, Bdd::FALSE, Bdd::TRUE)
    }

    pub fn not(&mut self, f: Bdd) -> Result<Bdd, BudgetExceeded> {
        if let Some(b) = f.as_bool() {
            return Ok(self.constant(!b));
        }
        if let Some(&r) = self.not_cache.get(&f) {
            return Ok(r);
        }
        let Node { var, low, high } = self.nodes[f.0 as usize];
        let low = self.not(low)?;
        let high = self.not(high)?;
        let r = self.mk(var, low, high)?;
        self.not_cache.insert(f, r);
        Ok(r)
    }

    pub fn and(&mut self, f: Bdd, g: Bdd) -> Result<Bdd, BudgetExceeded> {
        self.apply(Op::And, f, g)
    }

    pub fn or(&mut self, f: Bdd, g: Bdd) -> Result<Bdd, BudgetExceeded> {
        self.apply(Op::Or, f, g)
    }

    pub fn implies(&mut self, f: Bdd, g: Bdd) -> Result<Bdd, BudgetExceeded> {
        let nf = self.not(f)?;
        self.or(nf, g)
    }

    pub fn iff(&mut self, f: Bdd, g: Bdd) -> Result<Bdd, BudgetExceeded> {
        let a = self.implies(f, g)?;
        let b = self.implies(g, f)?;
        self.and(a, b)
    }

    fn apply(&mut self, op: Op, f: Bdd, g: Bdd) -> Result<Bdd, BudgetExceeded> {
        let (absorbing, neutral) = match op {
            Op::And => (Bdd::FALSE, Bdd::TRUE),
            Op::Or => (Bdd::TRUE, Bdd::FALSE),
        };
        if f == absorbing || g == absorbing {
            return Ok(absorbing);
        }
        if f == neutral || f == g {
            return Ok(g);
        }
        if g == neutral {
            return Ok(f);
        }
        let key = if f < g { (op, f, g) } else { (op, g, f) };
        if let Some(&r) = self.apply_cache.get(&key) {
            return Ok(r);
        }
        let (vf, vg) = (self.var_of(f), self.var_of(g));
        let var = vf.min(vg);
        let (f0, f1) = if vf == var {
            (self.low(f), self.high(f))
        } else {
            (f, f)
        };
        let (g0, g1) = if vg == var {
            (self.low(g), self.high(g))
        } else {
            (g, g)
        };
        let low = self.apply(op, f0, g0)?;
        let high = self.apply(op, f1, g1)?;
        let r = self.mk(var, low, high)?;
        self.apply_cache.insert(key, r);
        Ok(r)
    }

    /// `∃` (or `∀` when `universal`) over every variable in `[lo, hi)`.
    pub fn quantify_range(
        &mut self,
        f: Bdd,
        lo: u32,
        hi: u32,
        universal: bool,
    ) -> Result<Bdd, BudgetExceeded> {
        let mut memo = FxHashMap::default();
        self.quantify(f, &|v| v >= lo && v < hi, hi, universal, &mut memo)
    }

    /// `∃` (or `∀`) over an arbitrary set of variables.
    pub fn quantify_vars(
        &mut self,
        f: Bdd,
        vars: &[u32],
        universal: bool,
    ) -> Result<Bdd, BudgetExceeded> {
        let set: rustc_hash::FxHashSet<u32> = vars.iter().copied().collect();
        let last = vars.iter().copied().max().map_or(0, |v| v + 1);
        let mut memo = FxHashMap::default();
        self.quantify(f, &|v| set.contains(&v), last, universal, &mut memo)
    }

    fn quantify(
        &mut self,
        f: Bdd,
        bound: &dyn Fn(u32) -> bool,
        end: u32,
        universal: bool,
        memo: &mut FxHashMap<Bdd, Bdd>,
    ) -> Result<Bdd, BudgetExceeded> {
        if f.is_const() || self.var_of(f) >= end {
            return Ok(f);
        }
        if let Some(&r) = memo.get(&f) {
            return Ok(r);
        }
        let Node { var, low, high } = self.nodes[f.0 as usize];
        let low = self.quantify(low, bound, end, universal, memo)?;
        let high = self.quantify(high, bound, end, universal, memo)?;
        let r = if bound(var) {
            if universal {
                self.and(low, high)?
            } else {
                self.or(low, high)?
            }
        } else {
            self.mk(var, low, high)?
        };
        memo.insert(f, r);
        Ok(r)
    }

    /// A path from `f` to the terminal `target`, as `(var, value)` decisions.
    /// Variables skipped on the path are unconstrained.
    pub fn path_to(&self, f: Bdd, target: bool) -> Option<Vec<(u32, bool)>> {
        let goal = self.constant(target);
        // a non-terminal node denotes a non-constant function, so any child
        // other than the opposite terminal still reaches `goal`
        let other = self.constant(!target);
        if f == other {
            return None;
        }
        let mut path = Vec::new();
        let mut cur = f;
        while cur != goal {
            let Node { var, low, high } = self.nodes[cur.0 as usize];
            if low != other {
                path.push((var, false));
                cur = low;
            } else {
                path.push((var, true));
                cur = high;
            }
        }
        Some(path)
    }

    /// Value of `f` under a total assignment.
    pub fn eval(&self, f: Bdd, value: impl Fn(u32) -> bool) -> bool {
        let mut cur = f;
        while let Some(var) = self.top_var(cur) {
            cur = if value(var) {
                self.high(cur)
            } else {
                self.low(cur)
            };
        }
        cur == Bdd::TRUE
    }
}
