use serde::Serialize;

/// Everything that determines a verification run. Two runs with the same
/// config produce the same corpus and the same report (timings aside).
#[derive(Clone, Debug, Serialize)]
pub struct SuiteConfig {
    /// Minimal polynomials, lowest degree first; "" or a single entry is ℚ.
    pub fields: Vec<String>,
    /// Cap on deg Y + deg Z of a single-component triple.
    pub max_deg: usize,
    /// Largest number of components in a disjoint union.
    pub max_comps: usize,
    /// Scaling factors a for the maps t ↦ at, as field-element strings.
    /// Empty means 2 plus the field generator when k ≠ ℚ.
    pub multipliers: Vec<String>,
    /// Čech truncation N; None uses deg Y + deg Z + 4 per triple.
    pub truncation: Option<usize>,
    pub torsion_cap: u32,
    pub seed: u64,
    /// Number of composable pairs drawn for the functor-law suite.
    pub pairs: usize,
    /// Number of single-component morphisms drawn from the full map pool.
    pub morphisms: usize,
    /// Number of disjoint unions drawn from the triples.
    pub unions: usize,
    /// n_max for the P_n quiver.
    pub nori_n_max: usize,
    /// Flip one matrix entry per suite to exercise the failure path.
    pub inject_fault: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            fields: vec![String::new(), "-2,0,1".into()],
            max_deg: 6,
            max_comps: 2,
            multipliers: Vec::new(),
            truncation: None,
            torsion_cap: modmot::laumon::TORSION_BOUND,
            seed: 0,
            pairs: 60,
            morphisms: 160,
            unions: 24,
            nori_n_max: 5,
            inject_fault: false,
        }
    }
}

impl SuiteConfig {
    /// A config whose corpus is empty, used to exercise the vacuous path.
    pub fn empty() -> Self {
        SuiteConfig { max_deg: 0, ..Self::default() }
    }
}

/// Worker count from MM_THREADS, if set to a positive integer.
pub fn threads_from_env() -> Option<usize> {
    std::env::var("MM_THREADS").ok()?.trim().parse().ok().filter(|&n| n > 0)
}
