//! Workloads timed by the criterion benches.

use lca_core::bench::{generate_tidy, TidyScenario};
use lca_core::solve::{export_qcir, export_qdimacs, SolveError};
use lca_core::{
    check_explicit, reduce, solve_bdd, Context, Problem, SolveOptions, TranslateOptions,
};

/// A tidy-room scenario with its context, prepared once per benchmark.
pub struct Workload {
    pub scenario: TidyScenario,
    pub ctx: Context,
}

impl Workload {
    pub fn new(n: usize) -> Self {
        let scenario = generate_tidy(n);
        let ctx = scenario.context();
        Workload { scenario, ctx }
    }

    fn closed(&self) -> Problem {
        reduce(
            &self.ctx,
            &self.scenario.initial,
            &self.scenario.query,
            &TranslateOptions::default(),
        )
        .expect("the tidy query translates")
        .closed()
    }

    /// Reduction plus BDD solving, as `lca check` does it.
    pub fn solve_bdd(&self) -> Result<bool, SolveError> {
        let r = reduce(
            &self.ctx,
            &self.scenario.initial,
            &self.scenario.query,
            &TranslateOptions::default(),
        )
        .expect("the tidy query translates");
        solve_bdd(&r.instantiated(), &SolveOptions::default())
    }

    pub fn solve_naive(&self) -> bool {
        check_explicit(&self.scenario.initial, &self.ctx, &self.scenario.query)
            .expect("the explicit checker handles the scenario")
    }

    /// The closed reduction, ready to be serialized.
    pub fn exportable(&self) -> (Problem, &Context) {
        (self.closed(), &self.ctx)
    }
}

pub fn qcir(p: &Problem, ctx: &Context) -> String {
    export_qcir(p, Some(ctx))
}

pub fn qdimacs(p: &Problem) -> String {
    export_qdimacs(p)
}
