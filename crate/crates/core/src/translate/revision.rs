//! Abbreviations for belief revision. All ranges are over `Γ_i⁺` whatever
//! the strictness option.

use crate::qbf::{LevelId, Qbf};
use crate::syntax::Formula;

use super::{TranslateError, TranslationSession};

impl TranslationSession<'_> {
    fn beliefs(&self, i: usize) -> std::ops::Range<usize> {
        self.context().belief_range(i)
    }

    /// `B_i(s) ⊆ B_i(t)`.
    pub fn incl(&self, i: usize, s: LevelId, t: LevelId) -> Qbf {
        Qbf::and(
            self.beliefs(i)
                .map(|v| Qbf::implies(Self::x(s, v), Self::x(t, v))),
        )
    }

    /// `B_i(s) ⊊ B_i(t)`.
    pub fn strincl(&self, i: usize, s: LevelId, t: LevelId) -> Qbf {
        let equal = Self::same(s, t, self.beliefs(i));
        Qbf::and([self.incl(i, s, t), Qbf::not(equal)])
    }

    /// `B_i(s) \ {a} ⊆ B_i(t)`.
    pub fn inclminus(&self, i: usize, a: &Formula, s: LevelId, t: LevelId) -> Qbf {
        let skip = self.member_var(i, a);
        Qbf::and(
            self.beliefs(i)
                .filter(|v| Some(*v) != skip)
                .map(|v| Qbf::implies(Self::x(s, v), Self::x(t, v))),
        )
    }

    /// `B_i(s)` has a model: some level satisfies all of it.
    pub fn cons(&mut self, i: usize, s: LevelId) -> Result<Qbf, TranslateError> {
        let witness = self.fresh();
        let e = self.epistemic_over(i, s, witness, true)?;
        Ok(Qbf::exists(witness, e))
    }

    /// `B_i(m)` is a maximal consistent subset of `B_i(s) ∪ {a}` containing `a`.
    pub fn mcs(
        &mut self,
        i: usize,
        m: LevelId,
        s: LevelId,
        a: &Formula,
    ) -> Result<Qbf, TranslateError> {
        let has_a = match self.member_var(i, a) {
            Some(v) => Self::x(m, v),
            None => Qbf::FALSE,
        };
        let inside = self.inclminus(i, a, m, s);
        let consistent = self.cons(i, m)?;
        let bigger = self.fresh();
        let grows = Qbf::and([self.strincl(i, m, bigger), self.inclminus(i, a, bigger, s)]);
        let maximal = Qbf::forall(bigger, Qbf::implies(grows, Qbf::not(self.cons(i, bigger)?)));
        Ok(Qbf::and([has_a, inside, consistent, maximal]))
    }

    /// `B_i(t)` is the intersection of all `a`-MCS of `B_i(s)`.
    pub fn imcs(
        &mut self,
        i: usize,
        s: LevelId,
        t: LevelId,
        a: &Formula,
    ) -> Result<Qbf, TranslateError> {
        let m = self.fresh();
        let within = Qbf::forall(m, Qbf::implies(self.mcs(i, m, s, a)?, self.incl(i, t, m)));
        let mut parts = vec![within];
        for v in self.beliefs(i) {
            let m = self.fresh();
            let everywhere = Qbf::forall(m, Qbf::implies(self.mcs(i, m, s, a)?, Self::x(m, v)));
            parts.push(Qbf::implies(everywhere, Self::x(t, v)));
        }
        Ok(Qbf::and(parts))
    }
}
