//! Seeded verification suites.
//!
//! Every suite draws its samples from a ChaCha8 stream seeded by the caller,
//! so a `(spec, parameters, seed)` triple always yields a byte-identical
//! [`SuiteReport`]. Each individual check is a [`Check`] value; failures keep
//! the check's name and textual inputs and [`recheck`] replays them.

mod checks;
mod simplicity;
mod suites;

use std::fmt;
use std::time::Duration;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::{AlgebraSpec, BasisIdx, Element, JSpec};
use crate::lattice::{Lattice, Vec2};
use crate::rat::{rat, Rat};

pub use checks::{recheck, Check, Mutation};
pub use simplicity::{simplicity_probe, SimplicityOutcome};
pub use suites::{
    suite_bracket_consistency, suite_derivations, suite_iso, suite_jacobi, suite_locality,
    suite_simplicity, SuiteParams,
};

/// Which bracket the suites exercise. `Corrupt` is a deliberately broken
/// bracket used to test the failure path.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Fault {
    #[default]
    None,
    Corrupt,
}

/// Shared context for running checks.
#[derive(Clone, Copy, Debug)]
pub struct Ctx<'a> {
    pub spec: &'a AlgebraSpec,
    pub fault: Fault,
}

impl<'a> Ctx<'a> {
    pub fn new(spec: &'a AlgebraSpec) -> Ctx<'a> {
        Ctx { spec, fault: Fault::None }
    }

    pub fn with_fault(spec: &'a AlgebraSpec, fault: Fault) -> Ctx<'a> {
        Ctx { spec, fault }
    }

    pub fn bracket(&self, u: &Element, v: &Element) -> Element {
        let mut out = self.spec.bracket(u, v);
        if self.fault == Fault::Corrupt {
            // doubling one half-plane keeps antisymmetry but breaks Jacobi
            let doubled: Vec<(BasisIdx, Rat)> = out
                .terms()
                .filter(|(b, _)| b.alpha.c1.is_positive())
                .map(|(b, c)| (b.clone(), c.clone()))
                .collect();
            for (b, c) in doubled {
                out.add_term(b, c);
            }
        }
        out
    }
}

/// One failed check with everything needed to replay it.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Failure {
    pub check: String,
    pub inputs: Vec<String>,
    pub detail: String,
}

/// Per-check tallies within a suite.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Section {
    pub check: String,
    pub trials: usize,
    pub passes: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub spec: String,
    pub seed: u64,
    pub trials: usize,
    pub passes: usize,
    pub failures: Vec<Failure>,
    pub sections: Vec<Section>,
    /// Excluded from output so reports stay byte-identical across runs.
    #[serde(skip)]
    pub wall_time: Duration,
}

impl SuiteReport {
    pub fn new(suite: &str, spec: &AlgebraSpec, seed: u64) -> SuiteReport {
        SuiteReport {
            suite: suite.to_string(),
            spec: spec.to_string(),
            seed,
            trials: 0,
            passes: 0,
            failures: Vec::new(),
            sections: Vec::new(),
            wall_time: Duration::ZERO,
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    /// Runs a check and tallies it.
    pub fn run(&mut self, ctx: &Ctx<'_>, check: Check) {
        let outcome = check.run(ctx);
        self.record(&check, outcome);
    }

    pub fn record(&mut self, check: &Check, outcome: Result<(), String>) {
        let name = check.name();
        let idx = match self.sections.iter().position(|s| s.check == name) {
            Some(i) => i,
            None => {
                self.sections.push(Section { check: name.to_string(), trials: 0, passes: 0 });
                self.sections.len() - 1
            }
        };
        self.trials += 1;
        self.sections[idx].trials += 1;
        match outcome {
            Ok(()) => {
                self.passes += 1;
                self.sections[idx].passes += 1;
            }
            Err(detail) => self.failures.push(Failure {
                check: name.to_string(),
                inputs: check.inputs(),
                detail,
            }),
        }
    }

    /// Sorts failures by reproduction key; called once a suite finishes.
    pub fn finish(&mut self, wall_time: Duration) {
        self.failures.sort();
        self.wall_time = wall_time;
    }

    pub fn section(&self, check: &str) -> Option<&Section> {
        self.sections.iter().find(|s| s.check == check)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "suite {} | {} | seed {}", self.suite, self.spec, self.seed)?;
        for s in &self.sections {
            writeln!(f, "  {:<28} {}/{}", s.check, s.passes, s.trials)?;
        }
        for fail in &self.failures {
            writeln!(f, "  FAIL {} [{}]: {}", fail.check, fail.inputs.join(" | "), fail.detail)?;
        }
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        write!(f, "{verdict} {}/{}", self.passes, self.trials)
    }
}

const COEFFS: [(i64, i64); 8] = [(1, 1), (-1, 1), (2, 1), (-2, 1), (1, 2), (-1, 2), (3, 2), (-3, 2)];

/// Random elements over a fixed window of basis symbols.
pub struct Sampler {
    rng: ChaCha8Rng,
    window: Vec<BasisIdx>,
}

impl Sampler {
    pub fn new(seed: u64, window: Vec<BasisIdx>) -> Sampler {
        Sampler { rng: ChaCha8Rng::seed_from_u64(seed), window }
    }

    pub fn window(&self) -> &[BasisIdx] {
        &self.window
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn coeff(&mut self) -> Rat {
        let (n, d) = COEFFS[self.rng.gen_range(0..COEFFS.len())];
        rat(n, d)
    }

    pub fn basis(&mut self) -> BasisIdx {
        self.window.choose(&mut self.rng).expect("window is nonempty").clone()
    }

    /// 1 to 4 terms with coefficients in {±1, ±2, ±1/2, ±3/2}.
    pub fn element(&mut self) -> Element {
        let n = self.rng.gen_range(1..=4);
        let mut e = Element::zero();
        for _ in 0..n {
            let b = self.basis();
            let c = self.coeff();
            e.add_term(b, c);
        }
        e
    }

    pub fn nonzero_element(&mut self) -> Element {
        loop {
            let e = self.element();
            if !e.is_zero() {
                return e;
            }
        }
    }

    pub fn pick<'a, T>(&mut self, items: &'a [T]) -> &'a T {
        items.choose(&mut self.rng).expect("nonempty choice")
    }
}

/// The default configuration matrix: every J type over ℤ², ⟨(1/2,0),(0,1)⟩,
/// ⟨(2,3),(0,5)⟩ and ⟨(1,0)⟩, plus ⟨(0,1)⟩ for J₁ = ℕ. 18 specs.
pub fn default_configs() -> Vec<AlgebraSpec> {
    let lattices = [
        Lattice::standard(),
        Lattice::new(vec![Vec2::new(rat(1, 2), 0), Vec2::new(0, 1)]),
        Lattice::new(vec![Vec2::new(2, 3), Vec2::new(0, 5)]),
        Lattice::new(vec![Vec2::new(0, 1)]),
        Lattice::new(vec![Vec2::new(1, 0)]),
    ];
    lattices
        .iter()
        .flat_map(|l| JSpec::ALL.iter().filter_map(move |&j| AlgebraSpec::new(l.clone(), j).ok()))
        .collect()
}
