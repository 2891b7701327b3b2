//! Deciding closed QBF with BDDs, and exporting them for external solvers.
//!
//! Variables are ordered level-major: variable `k` of level `L` has index
//! `L * width + k`. Every block's level is issued after all levels free in
//! its body, so quantifying a block only touches the bottom of the diagram.

mod bdd;
mod export;
pub mod reference;

use thiserror::Error;

use crate::qbf::{LevelId, Problem, QVar, Qbf};

pub use bdd::{Bdd, BddManager, BudgetExceeded};
pub use export::{export_qcir, export_qcir_prenex, export_qdimacs};

pub const DEFAULT_NODE_BUDGET: usize = 10_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SolveError {
    /// `position` lists child indices from the root of the formula down to
    /// the subformula whose diagram could not be built.
    #[error("BDD node budget of {limit} exhausted at subformula [{position}]")]
    NodeBudget { limit: usize, position: String },
    #[error("variable {0} is free")]
    Free(QVar),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SolveOptions {
    pub node_budget: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            node_budget: DEFAULT_NODE_BUDGET,
        }
    }
}

/// Builds diagrams for the subformulas of one problem.
pub struct Compiler {
    manager: BddManager,
    width: usize,
}

impl Compiler {
    pub fn new(width: usize, options: &SolveOptions) -> Self {
        Compiler {
            manager: BddManager::new(options.node_budget),
            width,
        }
    }

    pub fn manager(&self) -> &BddManager {
        &self.manager
    }

    pub fn index(&self, v: QVar) -> u32 {
        v.level.0 * self.width as u32 + v.index
    }

    fn level_range(&self, l: LevelId) -> (u32, u32) {
        let lo = l.0 * self.width as u32;
        (lo, lo + self.width as u32)
    }

    pub fn build(&mut self, q: &Qbf) -> Result<Bdd, SolveError> {
        let mut path = Vec::new();
        self.build_at(q, &mut path)
    }

    fn child(&mut self, q: &Qbf, k: usize, path: &mut Vec<usize>) -> Result<Bdd, SolveError> {
        path.push(k);
        let r = self.build_at(q, path);
        path.pop();
        r
    }

    fn build_at(&mut self, q: &Qbf, path: &mut Vec<usize>) -> Result<Bdd, SolveError> {
        Ok(match q {
            Qbf::Const(b) => self.manager.constant(*b),
            Qbf::Var(v) => {
                let idx = self.index(*v);
                self.manager.var(idx).map_err(|e| budget(e, path))?
            }
            Qbf::Not(a) => {
                let a = self.child(a, 0, path)?;
                self.manager.not(a).map_err(|e| budget(e, path))?
            }
            Qbf::And(xs) => {
                let mut acc = Bdd::TRUE;
                for (k, x) in xs.iter().enumerate() {
                    let x = self.child(x, k, path)?;
                    acc = self.manager.and(acc, x).map_err(|e| budget(e, path))?;
                    if acc == Bdd::FALSE {
                        break;
                    }
                }
                acc
            }
            Qbf::Or(xs) => {
                let mut acc = Bdd::FALSE;
                for (k, x) in xs.iter().enumerate() {
                    let x = self.child(x, k, path)?;
                    acc = self.manager.or(acc, x).map_err(|e| budget(e, path))?;
                    if acc == Bdd::TRUE {
                        break;
                    }
                }
                acc
            }
            Qbf::Implies(a, b) => {
                let a = self.child(a, 0, path)?;
                if a == Bdd::FALSE {
                    return Ok(Bdd::TRUE);
                }
                let b = self.child(b, 1, path)?;
                self.manager.implies(a, b).map_err(|e| budget(e, path))?
            }
            Qbf::Forall(l, body) | Qbf::Exists(l, body) => {
                let body = self.child(body, 0, path)?;
                let (lo, hi) = self.level_range(*l);
                let universal = matches!(q, Qbf::Forall(..));
                self.manager
                    .quantify_range(body, lo, hi, universal)
                    .map_err(|e| budget(e, path))?
            }
        })
    }
}

fn budget(e: BudgetExceeded, path: &[usize]) -> SolveError {
    SolveError::NodeBudget {
        limit: e.limit,
        position: path
            .iter()
            .map(|k| k.to_string())
            .collect::<Vec<_>>()
            .join("."),
    }
}

/// Truth value of a closed problem.
pub fn solve_bdd(p: &Problem, options: &SolveOptions) -> Result<bool, SolveError> {
    if let Some(v) = p.formula.free_vars().into_iter().next() {
        return Err(SolveError::Free(v));
    }
    let mut c = Compiler::new(p.width, options);
    let root = c.build(&p.formula)?;
    log::debug!("bdd solve: {} nodes", c.manager().node_count());
    Ok(root == Bdd::TRUE)
}

/// For a matrix whose free variables all lie in level `root`: `None` if it
/// holds under every assignment of `root`, otherwise a falsifying assignment
/// (unconstrained variables set to false).
pub fn falsifying_assignment(
    matrix: &Qbf,
    width: usize,
    root: LevelId,
    options: &SolveOptions,
) -> Result<Option<Vec<bool>>, SolveError> {
    if let Some(v) = matrix.free_vars().into_iter().find(|v| v.level != root) {
        return Err(SolveError::Free(v));
    }
    let mut c = Compiler::new(width, options);
    let f = c.build(matrix)?;
    let Some(path) = c.manager().path_to(f, false) else {
        return Ok(None);
    };
    let mut values = vec![false; width];
    for (var, value) in path {
        let v = QVar::new(root, 0);
        let offset = var - c.index(v);
        values[offset as usize] = value;
    }
    Ok(Some(values))
}
