//! The tidy-room scenario generalized to `n` children, and a timing harness
//! that checks its headline query for several sizes.

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use crate::model::{check_explicit, Context, State, VocabularyProfile};
use crate::solve::{export_qcir, export_qdimacs, solve_bdd, SolveOptions};
use crate::syntax::{AgentId, Atom, Formula, Program};
use crate::translate::{reduce, TranslateOptions};

/// One instance of the tidy-room family.
#[derive(Clone, Debug)]
pub struct TidyScenario {
    pub n: usize,
    pub agents: Vec<AgentId>,
    /// `Γ_i = B_i` for every child.
    pub profile: VocabularyProfile,
    pub initial: State,
    /// Every child realistically prefers being helped to tidying alone.
    pub query: Formula,
}

/// The single-child speech-act variant: the mother's three speech acts and
/// the two queries about the child's realistic preference.
#[derive(Clone, Debug)]
pub struct SpeechActs {
    /// `Γ` extended with the two expanded speech acts, so that the programs
    /// have successors inside `S_Γ`.
    pub profile: VocabularyProfile,
    /// `+α1`, `+α2`, `-α3` in that order.
    pub acts: [Program; 3],
    /// Union of the six sequences of two different speech acts.
    pub talk: Program,
    /// Prefers not tidying to tidying, at the initial state.
    pub before: Formula,
    /// `[talk]` prefers tidying to not tidying.
    pub after_talk: Formula,
    /// The inner preference of `after_talk`.
    pub reversed: Formula,
}

fn atom(prefix: &str, agent: &AgentId) -> Formula {
    Formula::atom(format!("{prefix}_{agent}"))
}

impl TidyScenario {
    pub fn context(&self) -> Context {
        Context::new(&self.profile)
    }

    /// Tracked atoms, counting the reward/punishment atoms of each child.
    pub fn atom_count(&self) -> usize {
        6 * self.n
    }

    pub fn gamma_size(&self) -> usize {
        self.profile.gamma(&self.agents[0]).len()
    }

    /// Number of state variables: `|Atm| + Σ_i |Γ_i⁺|`.
    pub fn exponent(&self) -> usize {
        self.context().exponent()
    }

    /// Speech acts and preference queries; only defined for one child.
    pub fn speech_acts(&self) -> Option<SpeechActs> {
        if self.n != 1 {
            return None;
        }
        let i = &self.agents[0];
        let (td, ti, cr, tv) = (atom("td", i), atom("ti", i), atom("cr", i), atom("tv", i));
        let alpha1 = td.clone().not().implies(tv.not());
        let alpha2 = td.clone().implies(cr);
        let alpha3 = td.clone().implies(ti);
        let mut gamma = self.profile.gamma(i).to_vec();
        gamma.extend([alpha1.clone(), alpha2.clone()]);
        let profile = VocabularyProfile::new(
            self.profile.agents().to_vec(),
            self.profile.atoms().to_vec(),
            [(i.clone(), gamma)],
        )
        .expect("extended tidy vocabulary is well formed");
        let acts = [
            Program::expand(i.clone(), alpha1),
            Program::expand(i.clone(), alpha2),
            Program::forget(i.clone(), alpha3),
        ];
        let talk = Program::union(acts.iter().enumerate().flat_map(|(x, first)| {
            acts.iter()
                .enumerate()
                .filter(move |(y, _)| *y != x)
                .map(move |(_, second)| first.clone().then(second.clone()))
        }));
        let before = Formula::preference(true, i.clone(), td.clone(), td.clone().not());
        let reversed = Formula::preference(true, i.clone(), td.clone().not(), td);
        Some(SpeechActs {
            profile,
            after_talk: Formula::after(talk.clone(), reversed.clone()),
            acts,
            talk,
            before,
            reversed,
        })
    }
}

/// Children named `c1 … cn`.
pub fn generate_tidy(n: usize) -> TidyScenario {
    assert!(n >= 1, "the scenario needs at least one child");
    let names: Vec<String> = (1..=n).map(|k| format!("c{k}")).collect();
    generate_tidy_named(&names)
}

/// The single-child instance with the child called `bob`.
pub fn example_bob() -> TidyScenario {
    generate_tidy_named(&["bob"])
}

pub fn generate_tidy_named<S: AsRef<str>>(names: &[S]) -> TidyScenario {
    assert!(!names.is_empty(), "the scenario needs at least one child");
    let agents: Vec<AgentId> = names.iter().map(|s| AgentId::new(s.as_ref())).collect();
    let mut atoms = Vec::new();
    for i in &agents {
        for prefix in ["td", "ti", "cr", "tv"] {
            atoms.push(Atom::plain(format!("{prefix}_{i}")));
        }
        atoms.push(Atom::Reward(i.clone()));
        atoms.push(Atom::Punish(i.clone()));
    }
    let alone = |i: &AgentId| {
        Formula::conjunction(
            agents
                .iter()
                .filter(|j| *j != i)
                .map(|j| atom("td", j).not())
                .chain(std::iter::once(atom("td", i))),
        )
    };
    let helped = |i: &AgentId| {
        let others: Vec<Formula> = agents
            .iter()
            .filter(|j| *j != i)
            .map(|j| atom("td", j))
            .collect();
        if others.is_empty() {
            atom("td", i).not()
        } else {
            atom("td", i).implies(Formula::disjunction(others))
        }
    };
    let gammas: Vec<(AgentId, Vec<Formula>)> = agents
        .iter()
        .map(|i| {
            let members = vec![
                alone(i).implies(atom("ti", i)),
                atom("ti", i).implies(Formula::punish(i.clone())),
                atom("cr", i).implies(Formula::reward(i.clone())),
                atom("tv", i).not().implies(Formula::punish(i.clone())),
            ];
            (i.clone(), members)
        })
        .collect();
    let mut initial = State::new();
    for (i, members) in &gammas {
        for m in members {
            initial.believe(i.clone(), m.clone());
        }
    }
    let query = Formula::conjunction(
        agents
            .iter()
            .map(|i| Formula::preference(true, i.clone(), alone(i), helped(i))),
    );
    let profile = VocabularyProfile::new(agents.clone(), atoms, gammas)
        .expect("tidy vocabulary is well formed");
    TidyScenario {
        n: agents.len(),
        agents,
        profile,
        initial,
        query,
    }
}

/// Which engine a benchmark row uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BenchBackend {
    Bdd,
    /// The explicit-state checker, limited to exponents within the
    /// enumeration cap.
    Naive,
    /// Only build and serialize the QCIR and QDIMACS exports.
    ExportOnly,
}

#[derive(Clone, Debug)]
pub struct BenchRow {
    pub n: usize,
    pub atoms: usize,
    pub gamma: usize,
    pub exponent: usize,
    pub seconds: f64,
    /// `None` for export-only rows.
    pub result: Result<Option<bool>, String>,
}

#[derive(Clone, Debug, Default)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
}

/// Checks the tidy query for each `n`, recording wall-clock time. Failures
/// of one row are recorded in the row and do not stop the run.
pub fn run_bench(ns: &[usize], backend: BenchBackend, options: &SolveOptions) -> BenchReport {
    let rows = ns
        .iter()
        .map(|&n| {
            let scenario = generate_tidy(n);
            let ctx = scenario.context();
            let start = Instant::now();
            let result = run_row(&scenario, &ctx, backend, options);
            let seconds = start.elapsed().as_secs_f64();
            log::info!("bench n={n}: {result:?} in {seconds:.3}s");
            BenchRow {
                n,
                atoms: ctx.atoms().len(),
                gamma: scenario.gamma_size(),
                exponent: ctx.exponent(),
                seconds,
                result,
            }
        })
        .collect();
    BenchReport { rows }
}

fn run_row(
    scenario: &TidyScenario,
    ctx: &Context,
    backend: BenchBackend,
    options: &SolveOptions,
) -> Result<Option<bool>, String> {
    match backend {
        BenchBackend::Bdd => {
            let reduction = reduce(
                ctx,
                &scenario.initial,
                &scenario.query,
                &TranslateOptions::default(),
            )
            .map_err(|e| e.to_string())?;
            solve_bdd(&reduction.instantiated(), options)
                .map(Some)
                .map_err(|e| e.to_string())
        }
        BenchBackend::Naive => {
            if ctx.exponent() as u32 > ctx.enum_cap_exponent() {
                return Err(format!(
                    "exponent {} exceeds the enumeration cap 2^{}",
                    ctx.exponent(),
                    ctx.enum_cap_exponent()
                ));
            }
            check_explicit(&scenario.initial, ctx, &scenario.query)
                .map(Some)
                .map_err(|e| e.to_string())
        }
        BenchBackend::ExportOnly => {
            let reduction = reduce(
                ctx,
                &scenario.initial,
                &scenario.query,
                &TranslateOptions::default(),
            )
            .map_err(|e| e.to_string())?;
            let closed = reduction.closed();
            let qcir = export_qcir(&closed, Some(ctx));
            let qdimacs = export_qdimacs(&closed);
            log::debug!("exported {} + {} bytes", qcir.len(), qdimacs.len());
            Ok(None)
        }
    }
}

impl BenchRow {
    fn result_text(&self) -> String {
        match &self.result {
            Ok(Some(true)) => "TRUE".into(),
            Ok(Some(false)) => "FALSE".into(),
            Ok(None) => "exported".into(),
            Err(e) => format!("error: {e}"),
        }
    }
}

impl BenchReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,atoms,gamma,exponent,seconds,result\n");
        for r in &self.rows {
            let result = match &r.result {
                Ok(Some(b)) => b.to_string(),
                Ok(None) => "exported".into(),
                Err(_) => "error".into(),
            };
            writeln!(
                out,
                "{},{},{},{},{:.6},{}",
                r.n, r.atoms, r.gamma, r.exponent, r.seconds, result
            )
            .unwrap();
        }
        out
    }

    pub fn to_table(&self) -> String {
        let mut out = format!(
            "{:>6} {:>6} {:>6} {:>9} {:>12}  {}\n",
            "|Agt|", "|Atm|", "|Γ_i|", "exponent", "seconds", "result"
        );
        for r in &self.rows {
            writeln!(
                out,
                "{:>6} {:>6} {:>6} {:>9} {:>12.4}  {}",
                r.n,
                r.atoms,
                r.gamma,
                format!("2^{}", r.exponent),
                r.seconds,
                r.result_text()
            )
            .unwrap();
        }
        out
    }

    pub fn total_time(&self) -> Duration {
        Duration::from_secs_f64(self.rows.iter().map(|r| r.seconds).sum())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_formula;

    #[test]
    fn one_child_sizes() {
        let s = generate_tidy(1);
        assert_eq!(s.atom_count(), 6);
        assert_eq!(s.gamma_size(), 4);
        assert_eq!(s.exponent(), 18);
        assert_eq!(s.context().atoms().len(), 6);
    }

    #[test]
    fn ten_children_sizes() {
        let s = generate_tidy(10);
        assert_eq!(s.context().atoms().len(), 60);
        assert_eq!(s.exponent(), 180);
    }

    #[test]
    fn two_children_first_member() {
        let s = generate_tidy(2);
        let expected = parse_formula("~td_c2 & td_c1 -> ti_c1").unwrap();
        assert_eq!(s.profile.gamma(&"c1".into())[0], expected);
        let expected = parse_formula("~td_c1 & td_c2 -> ti_c2").unwrap();
        assert_eq!(s.profile.gamma(&"c2".into())[0], expected);
    }

    #[test]
    fn single_child_degenerates() {
        let s = example_bob();
        assert_eq!(
            s.profile.gamma(&"bob".into())[0],
            parse_formula("td_bob -> ti_bob").unwrap()
        );
        assert_eq!(
            s.query,
            parse_formula("RPref(bob, td_bob, ~td_bob)").unwrap()
        );
        let acts = s.speech_acts().unwrap();
        assert_eq!(acts.before, s.query);
        assert_eq!(Context::new(&acts.profile).exponent(), 24);
        assert!(generate_tidy(2).speech_acts().is_none());
    }

    #[test]
    fn talk_is_six_sequences() {
        let acts = example_bob().speech_acts().unwrap();
        let mut count = 0;
        let mut stack = vec![&acts.talk];
        while let Some(p) = stack.pop() {
            match p {
                Program::Choice(a, b) => stack.extend([&**a, &**b]),
                Program::Seq(a, b) => {
                    assert_ne!(a, b);
                    count += 1;
                }
                other => panic!("unexpected {other}"),
            }
        }
        assert_eq!(count, 6);
    }

    #[test]
    fn empty_report() {
        let r = run_bench(&[], BenchBackend::Bdd, &SolveOptions::default());
        assert!(r.rows.is_empty());
        assert_eq!(r.to_csv(), "n,atoms,gamma,exponent,seconds,result\n");
    }
}
