use std::fmt::{self, Write};

use super::ast::{Atom, DerivedOp, Formula, Program};

const IFF: u8 = 1;
const IMPLIES: u8 = 2;
const OR: u8 = 3;
const AND: u8 = 4;
const UNARY: u8 = 5;

const CHOICE: u8 = 1;
const SEQ: u8 = 2;

/// Prints with the minimal parenthesization that re-parses to the same tree.
pub fn print_formula(f: &Formula) -> String {
    let mut out = String::new();
    Printer { full: false }
        .formula(&mut out, f, 0)
        .expect("writing to a String");
    out
}

/// Prints every binary subterm in parentheses.
pub fn print_formula_full(f: &Formula) -> String {
    let mut out = String::new();
    Printer { full: true }
        .formula(&mut out, f, 0)
        .expect("writing to a String");
    out
}

pub fn print_program(p: &Program) -> String {
    let mut out = String::new();
    Printer { full: false }
        .program(&mut out, p, 0)
        .expect("writing to a String");
    out
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Plain(name) => f.write_str(name),
            Atom::Reward(a) => write!(f, "rew({a})"),
            Atom::Punish(a) => write!(f, "pun({a})"),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        Printer { full: false }.formula(f, self, 0)
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        Printer { full: false }.program(f, self, 0)
    }
}

struct Printer {
    full: bool,
}

impl Printer {
    fn binary<W: Write>(
        &self,
        out: &mut W,
        ctx: u8,
        prec: u8,
        right_assoc: bool,
        op: &str,
        a: &Formula,
        b: &Formula,
    ) -> fmt::Result {
        let parens = self.full || ctx > prec;
        if parens {
            out.write_char('(')?;
        }
        let (lp, rp) = if right_assoc {
            (prec + 1, prec)
        } else {
            (prec, prec + 1)
        };
        self.formula(out, a, lp)?;
        write!(out, " {op} ")?;
        self.formula(out, b, rp)?;
        if parens {
            out.write_char(')')?;
        }
        Ok(())
    }

    fn formula<W: Write>(&self, out: &mut W, f: &Formula, ctx: u8) -> fmt::Result {
        match f {
            Formula::Atom(a) => write!(out, "{a}"),
            Formula::Top => out.write_str("true"),
            Formula::Bottom => out.write_str("false"),
            Formula::Not(a) => {
                out.write_char('~')?;
                self.formula(out, a, UNARY)
            }
            Formula::And(a, b) => self.binary(out, ctx, AND, false, "&", a, b),
            Formula::Or(a, b) => self.binary(out, ctx, OR, false, "|", a, b),
            Formula::Implies(a, b) => self.binary(out, ctx, IMPLIES, true, "->", a, b),
            Formula::Iff(a, b) => self.binary(out, ctx, IFF, false, "<->", a, b),
            Formula::Believes(i, a) => {
                write!(out, "B({i}, ")?;
                self.formula(out, a, 0)?;
                out.write_char(')')
            }
            Formula::Modal(m, i, a) => {
                write!(out, "{}({i}, ", m.keyword())?;
                self.formula(out, a, 0)?;
                out.write_char(')')
            }
            Formula::Box(p, a) => {
                out.write_char('[')?;
                self.program(out, p, 0)?;
                out.write_str("] ")?;
                self.formula(out, a, UNARY)
            }
            Formula::Diamond(p, a) => {
                out.write_char('<')?;
                self.program(out, p, 0)?;
                out.write_str("> ")?;
                self.formula(out, a, UNARY)
            }
            Formula::Derived(d) => match &**d {
                DerivedOp::Position {
                    position,
                    realistic,
                    agent,
                    arg,
                } => {
                    write!(out, "{}({agent}, ", position.keyword(*realistic))?;
                    self.formula(out, arg, 0)?;
                    out.write_char(')')
                }
                DerivedOp::Preference {
                    realistic,
                    agent,
                    worse,
                    better,
                } => {
                    let kw = if *realistic { "RPref" } else { "Pref" };
                    write!(out, "{kw}({agent}, ")?;
                    self.formula(out, worse, 0)?;
                    out.write_str(", ")?;
                    self.formula(out, better, 0)?;
                    out.write_char(')')
                }
            },
        }
    }

    fn program<W: Write>(&self, out: &mut W, p: &Program, ctx: u8) -> fmt::Result {
        let change = |out: &mut W, sym: char, i: &_, a: &Formula| -> fmt::Result {
            write!(out, "{sym}({i}, ")?;
            self.formula(out, a, 0)?;
            out.write_char(')')
        };
        match p {
            Program::Expand(i, a) => change(out, '+', i, a),
            Program::Forget(i, a) => change(out, '-', i, a),
            Program::Revise(i, a) => change(out, '*', i, a),
            Program::Test(f) => {
                // the test formula always stops at the next program delimiter
                out.write_char('?')?;
                self.formula(out, f, 0)
            }
            Program::Seq(a, b) => {
                let parens = ctx > SEQ;
                if parens {
                    out.write_char('(')?;
                }
                self.program(out, a, SEQ)?;
                out.write_str(" ; ")?;
                self.program(out, b, SEQ + 1)?;
                if parens {
                    out.write_char(')')?;
                }
                Ok(())
            }
            Program::Choice(a, b) => {
                let parens = ctx > CHOICE;
                if parens {
                    out.write_char('(')?;
                }
                self.program(out, a, CHOICE)?;
                out.write_str(" U ")?;
                self.program(out, b, CHOICE + 1)?;
                if parens {
                    out.write_char(')')?;
                }
                Ok(())
            }
        }
    }
}
