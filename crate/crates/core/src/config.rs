/// How data-parallel sweeps are executed.
///
/// `Parallel` falls back to sequential execution when the crate is built
/// without the `rayon` feature.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Exec {
    #[default]
    Parallel,
    Sequential,
}

/// Resource bounds shared by every generator and search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bounds {
    /// Largest admissible affine space `|H|^|X|`.
    pub max_points: usize,
    /// Cap on the term depth explored by clone generation; `None` runs to saturation.
    pub max_term_depth: Option<usize>,
    /// Cap on the number of distinct term functions kept per variable set.
    pub max_term_functions: usize,
    /// Largest lattice that is materialized member by member.
    pub max_members: usize,
    /// Node budget for the backtracking search of lattice bijections.
    pub search_budget: u64,
    pub exec: Exec,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            max_points: 1_000_000,
            max_term_depth: None,
            max_term_functions: 1 << 14,
            max_members: 1 << 16,
            search_budget: 5_000_000,
            exec: Exec::Parallel,
        }
    }
}

impl Bounds {
    pub fn with_exec(mut self, exec: Exec) -> Self {
        self.exec = exec;
        self
    }
}
