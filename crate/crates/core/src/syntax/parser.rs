//! Recursive-descent parser for formulas and programs.
//!
//! Precedence, tightest first: `~`, `[π]`, `<π>` (prefix); `&`; `|`; `->`
//! (right-associative); `<->`. In programs `;` binds tighter than `U`.

use super::ast::{AgentId, Atom, Formula, Modality, Position, Program};
use super::lexer::{tokenize, Pos, Tok};
use super::ParseError;

/// Identifiers that can never name an atom.
pub const RESERVED: [&str; 3] = ["true", "false", "U"];

pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    let mut p = Parser::new(text)?;
    let f = p.formula()?;
    p.expect_eof()?;
    Ok(f)
}

pub fn parse_program(text: &str) -> Result<Program, ParseError> {
    let mut p = Parser::new(text)?;
    let prog = p.program()?;
    p.expect_eof()?;
    Ok(prog)
}

enum Head {
    Believes,
    Modal(Modality),
    Position(Position, bool),
    Preference(bool),
    Reward,
    Punish,
}

fn head_of(name: &str) -> Option<Head> {
    let h = match name {
        "B" => Head::Believes,
        "K" => Head::Modal(Modality::Knows),
        "Attr" => Head::Modal(Modality::Attract),
        "Rep" => Head::Modal(Modality::Repulse),
        "RAttr" => Head::Modal(Modality::RealAttract),
        "RRep" => Head::Modal(Modality::RealRepulse),
        "Mot" => Head::Position(Position::Motivated, false),
        "Demot" => Head::Position(Position::Demotivated, false),
        "Ind" => Head::Position(Position::Indifferent, false),
        "Amb" => Head::Position(Position::Ambivalent, false),
        "RMot" => Head::Position(Position::Motivated, true),
        "RDemot" => Head::Position(Position::Demotivated, true),
        "RInd" => Head::Position(Position::Indifferent, true),
        "RAmb" => Head::Position(Position::Ambivalent, true),
        "Pref" => Head::Preference(false),
        "RPref" => Head::Preference(true),
        "rew" => Head::Reward,
        "pun" => Head::Punish,
        _ => return None,
    };
    Some(h)
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
}

impl Parser {
    fn new(text: &str) -> Result<Self, ParseError> {
        Ok(Parser {
            toks: tokenize(text)?,
            at: 0,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn peek2(&self) -> &Tok {
        &self.toks[(self.at + 1).min(self.toks.len() - 1)].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn syntax<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        let Pos { line, column } = self.pos();
        Err(ParseError::Syntax {
            line,
            column,
            message: message.into(),
        })
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.syntax(format!(
                "expected {}, found {}",
                tok.describe(),
                self.peek().describe()
            ))
        }
    }

    fn expect_eof(&self) -> Result<(), ParseError> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            self.syntax(format!("unexpected {}", self.peek().describe()))
        }
    }

    fn ident(&mut self, what: &str) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            other => self.syntax(format!("expected {what}, found {}", other.describe())),
        }
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.implication()?;
        while *self.peek() == Tok::DoubleArrow {
            self.bump();
            let rhs = self.implication()?;
            lhs = lhs.iff(rhs);
        }
        Ok(lhs)
    }

    fn implication(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.disjunction()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let rhs = self.implication()?;
            return Ok(lhs.implies(rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.conjunction()?;
        while *self.peek() == Tok::Bar {
            self.bump();
            let rhs = self.conjunction()?;
            lhs = lhs.or(rhs);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::Amp {
            self.bump();
            let rhs = self.unary()?;
            lhs = lhs.and(rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Tok::Tilde => {
                self.bump();
                Ok(self.unary()?.not())
            }
            Tok::LBrack => {
                self.bump();
                let prog = self.program()?;
                self.expect(Tok::RBrack)?;
                Ok(Formula::after(prog, self.unary()?))
            }
            Tok::LAngle => {
                self.bump();
                let prog = self.program()?;
                self.expect(Tok::RAngle)?;
                Ok(Formula::possibly(prog, self.unary()?))
            }
            _ => self.primary(),
        }
    }

    fn primary(&mut self) -> Result<Formula, ParseError> {
        let start = self.pos();
        match self.peek().clone() {
            Tok::LParen => {
                self.bump();
                let f = self.formula()?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            Tok::Ident(name) if *self.peek2() == Tok::LParen => {
                let Some(head) = head_of(&name) else {
                    return self.syntax(format!("unknown operator `{name}`"));
                };
                self.bump();
                self.bump();
                self.application(&name, head, start)
            }
            Tok::Ident(name) => {
                self.bump();
                match name.as_str() {
                    "true" => Ok(Formula::Top),
                    "false" => Ok(Formula::Bottom),
                    "U" => Err(ParseError::Syntax {
                        line: start.line,
                        column: start.column,
                        message: "`U` is reserved for program choice".into(),
                    }),
                    _ => Ok(Formula::atom(name)),
                }
            }
            other => self.syntax(format!("expected a formula, found {}", other.describe())),
        }
    }

    /// Parses the argument list after `name(`; `name(` is already consumed.
    fn application(&mut self, name: &str, head: Head, start: Pos) -> Result<Formula, ParseError> {
        let agent = AgentId::new(self.ident("an agent name")?);
        let mut args = Vec::new();
        loop {
            match self.peek() {
                Tok::Comma => {
                    self.bump();
                    args.push(self.formula()?);
                }
                Tok::RParen => {
                    self.bump();
                    break;
                }
                other => {
                    return self.syntax(format!("expected `,` or `)`, found {}", other.describe()))
                }
            }
        }
        let expected = match head {
            Head::Reward | Head::Punish => 1,
            Head::Preference(_) => 3,
            _ => 2,
        };
        if args.len() + 1 != expected {
            return Err(ParseError::Arity {
                line: start.line,
                column: start.column,
                operator: name.to_string(),
                expected,
                found: args.len() + 1,
            });
        }
        let mut args = args.into_iter();
        let mut next = || args.next().expect("arity checked");
        Ok(match head {
            Head::Reward => Formula::Atom(Atom::Reward(agent)),
            Head::Punish => Formula::Atom(Atom::Punish(agent)),
            Head::Believes => {
                let arg = next();
                if !arg.is_l0() {
                    return Err(ParseError::NotL0 {
                        line: start.line,
                        column: start.column,
                        context: "explicit belief".into(),
                    });
                }
                Formula::believes(agent, arg)
            }
            Head::Modal(m) => Formula::modal(m, agent, next()),
            Head::Position(position, realistic) => {
                Formula::position(position, realistic, agent, next())
            }
            Head::Preference(realistic) => {
                let worse = next();
                let better = next();
                Formula::preference(realistic, agent, worse, better)
            }
        })
    }

    fn program(&mut self) -> Result<Program, ParseError> {
        let mut lhs = self.sequence()?;
        while matches!(self.peek(), Tok::Ident(s) if s == "U") {
            self.bump();
            let rhs = self.sequence()?;
            lhs = lhs.or(rhs);
        }
        Ok(lhs)
    }

    fn sequence(&mut self) -> Result<Program, ParseError> {
        let mut lhs = self.program_atom()?;
        while *self.peek() == Tok::Semi {
            self.bump();
            let rhs = self.program_atom()?;
            lhs = lhs.then(rhs);
        }
        Ok(lhs)
    }

    fn program_atom(&mut self) -> Result<Program, ParseError> {
        let start = self.pos();
        let tok = self.bump();
        let ctor: fn(AgentId, Formula) -> Program = match tok {
            Tok::Question => return Ok(Program::test(self.formula()?)),
            Tok::LParen => {
                let p = self.program()?;
                self.expect(Tok::RParen)?;
                return Ok(p);
            }
            Tok::Plus => Program::Expand,
            Tok::Minus => Program::Forget,
            Tok::Star => Program::Revise,
            other => {
                return Err(ParseError::Syntax {
                    line: start.line,
                    column: start.column,
                    message: format!("expected a program, found {}", other.describe()),
                })
            }
        };
        self.expect(Tok::LParen)?;
        let agent = AgentId::new(self.ident("an agent name")?);
        if *self.peek() == Tok::RParen {
            return Err(ParseError::Arity {
                line: start.line,
                column: start.column,
                operator: "belief change".into(),
                expected: 2,
                found: 1,
            });
        }
        self.expect(Tok::Comma)?;
        let arg = self.formula()?;
        if *self.peek() == Tok::Comma {
            return Err(ParseError::Arity {
                line: start.line,
                column: start.column,
                operator: "belief change".into(),
                expected: 2,
                found: 3,
            });
        }
        self.expect(Tok::RParen)?;
        if !arg.is_l0() {
            return Err(ParseError::NotL0 {
                line: start.line,
                column: start.column,
                context: "program argument".into(),
            });
        }
        Ok(ctor(agent, arg))
    }
}
