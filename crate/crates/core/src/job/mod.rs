//! Declarative job files: a field, a presentation, an abelianization, a
//! representation and a list of tasks to run on them.
//!
//! ```text
//! vars t ;
//! extend w : x^2 + x + 1 ;
//! gens x y ; let W = x^-1 y x y^-1 ; rel W x W^-1 y^-1 ;
//! phi x = t ; phi y = t ;
//! rho x = [[1, 1], [0, 1]] ; rho y = [[1, 0], [-w, 1]] ;
//! task wada { remove = y ; }
//! ```

mod parse;
pub mod report;
mod run;

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::group::Presentation;
use crate::rep::{AbelianizationMap, SL2Rep};
use crate::ring::FieldTower;

pub use parse::parse_job;
pub use run::{run_job, run_task, InvariantCheck, JobReport, RunOptions, TaskOutcome, TaskStatus, TaskValue};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TaskKind {
    Wada,
    ComplexTorsion,
    Reciprocity,
    Derivative,
    Covering,
    Fibered,
    Alexander,
    AbelianCheck,
    Naturality,
    Polynomial,
    Multiplicativity,
    Conjugation,
    Validate,
}

impl TaskKind {
    pub const ALL: [TaskKind; 13] = [
        TaskKind::Wada,
        TaskKind::ComplexTorsion,
        TaskKind::Reciprocity,
        TaskKind::Derivative,
        TaskKind::Covering,
        TaskKind::Fibered,
        TaskKind::Alexander,
        TaskKind::AbelianCheck,
        TaskKind::Naturality,
        TaskKind::Polynomial,
        TaskKind::Multiplicativity,
        TaskKind::Conjugation,
        TaskKind::Validate,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TaskKind::Wada => "wada",
            TaskKind::ComplexTorsion => "complex_torsion",
            TaskKind::Reciprocity => "reciprocity",
            TaskKind::Derivative => "derivative",
            TaskKind::Covering => "covering",
            TaskKind::Fibered => "fibered",
            TaskKind::Alexander => "alexander",
            TaskKind::AbelianCheck => "abelian_check",
            TaskKind::Naturality => "naturality",
            TaskKind::Polynomial => "polynomial",
            TaskKind::Multiplicativity => "multiplicativity",
            TaskKind::Conjugation => "conjugation",
            TaskKind::Validate => "validate",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == s)
    }

    /// Option keys accepted in the task block.
    pub fn option_keys(self) -> &'static [&'static str] {
        match self {
            TaskKind::Wada => &["remove", "tau0"],
            TaskKind::ComplexTorsion | TaskKind::Alexander | TaskKind::Polynomial | TaskKind::Validate => &[],
            TaskKind::Reciprocity => &["b", "class"],
            TaskKind::Derivative => &["a_exponents", "reduce"],
            TaskKind::Covering => &["m", "var", "lattice", "order", "characters"],
            TaskKind::Fibered => &["matrix", "phi1", "var"],
            TaskKind::AbelianCheck => &["xi"],
            TaskKind::Naturality => &["exponents", "var"],
            TaskKind::Multiplicativity => &["count", "max_dim"],
            TaskKind::Conjugation => &["count"],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TaskOption {
    pub value: String,
    /// Line and column of the value.
    pub origin: (usize, usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TaskSpec {
    pub kind: TaskKind,
    /// The label, or the kind name when there is none.
    pub name: String,
    pub options: BTreeMap<String, TaskOption>,
    pub origin: (usize, usize),
}

impl TaskSpec {
    pub fn new(kind: TaskKind) -> Self {
        TaskSpec { kind, name: kind.name().to_string(), options: BTreeMap::new(), origin: (0, 0) }
    }

    pub fn option(&self, key: &str) -> Option<&TaskOption> {
        self.options.get(key)
    }
}

#[derive(Clone, Debug)]
pub struct Job {
    pub tower: Arc<FieldTower>,
    pub vars: Arc<Vec<String>>,
    pub presentation: Presentation,
    pub phi: Option<AbelianizationMap>,
    pub rho: Option<SL2Rep>,
    pub tasks: Vec<TaskSpec>,
}
