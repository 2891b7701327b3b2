use std::collections::HashMap;

use thiserror::Error;

use super::{LevelId, QVar, Qbf};

/// A partial assignment of variables.
pub type Assignment = HashMap<QVar, bool>;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("variable {0} is neither bound nor assigned")]
    Unbound(QVar),
}

/// Reference semantics: quantifier blocks are expanded variable by variable
/// (index order) into conjunctions/disjunctions. Exponential in the total
/// number of bound variables.
pub fn eval_naive(q: &Qbf, width: usize, env: &Assignment) -> Result<bool, EvalError> {
    let mut env = env.clone();
    eval(q, width, &mut env)
}

fn eval(q: &Qbf, width: usize, env: &mut Assignment) -> Result<bool, EvalError> {
    Ok(match q {
        Qbf::Const(b) => *b,
        Qbf::Var(v) => *env.get(v).ok_or(EvalError::Unbound(*v))?,
        Qbf::Not(a) => !eval(a, width, env)?,
        Qbf::And(xs) => {
            for x in xs {
                if !eval(x, width, env)? {
                    return Ok(false);
                }
            }
            true
        }
        Qbf::Or(xs) => {
            for x in xs {
                if eval(x, width, env)? {
                    return Ok(true);
                }
            }
            false
        }
        Qbf::Implies(a, b) => !eval(a, width, env)? || eval(b, width, env)?,
        Qbf::Forall(l, body) => quantify(*l, 0, true, body, width, env)?,
        Qbf::Exists(l, body) => quantify(*l, 0, false, body, width, env)?,
    })
}

fn quantify(
    level: LevelId,
    k: usize,
    universal: bool,
    body: &Qbf,
    width: usize,
    env: &mut Assignment,
) -> Result<bool, EvalError> {
    if k == width {
        return eval(body, width, env);
    }
    let var = QVar::new(level, k);
    let saved = env.get(&var).copied();
    let mut result = universal;
    for value in [false, true] {
        env.insert(var, value);
        let r = quantify(level, k + 1, universal, body, width, env);
        let r = match r {
            Ok(r) => r,
            Err(e) => {
                restore(env, var, saved);
                return Err(e);
            }
        };
        if r != universal {
            result = r;
            break;
        }
    }
    restore(env, var, saved);
    Ok(result)
}

fn restore(env: &mut Assignment, var: QVar, saved: Option<bool>) {
    match saved {
        Some(v) => env.insert(var, v),
        None => env.remove(&var),
    };
}

/// Replaces assigned variables by constants and folds. Variables bound by a
/// block inside `q` are left alone. Blocks whose body folds to a constant
/// are dropped.
pub fn substitute(q: &Qbf, env: &Assignment) -> Qbf {
    subst(q, env, &mut Vec::new())
}

fn subst(q: &Qbf, env: &Assignment, bound: &mut Vec<LevelId>) -> Qbf {
    match q {
        Qbf::Const(_) => q.clone(),
        Qbf::Var(v) => match env.get(v) {
            Some(b) if !bound.contains(&v.level) => Qbf::Const(*b),
            _ => q.clone(),
        },
        Qbf::Not(a) => Qbf::not(subst(a, env, bound)),
        Qbf::And(xs) => Qbf::and(xs.iter().map(|x| subst(x, env, bound))),
        Qbf::Or(xs) => Qbf::or(xs.iter().map(|x| subst(x, env, bound))),
        Qbf::Implies(a, b) => Qbf::implies(subst(a, env, bound), subst(b, env, bound)),
        Qbf::Forall(l, body) | Qbf::Exists(l, body) => {
            bound.push(*l);
            let body = subst(body, env, bound);
            bound.pop();
            match body {
                Qbf::Const(b) => Qbf::Const(b),
                body if matches!(q, Qbf::Forall(..)) => Qbf::forall(*l, body),
                body => Qbf::exists(*l, body),
            }
        }
    }
}
