//! Exhaustive and Monte-Carlo checks of the probabilistic tools: the
//! exceptional-outcome concentration inequality, convex distance and
//! Talagrand's inequality, Chernoff, the local lemma condition and the
//! Kővári–Sós–Turán edge bound.

pub mod concentration;
pub mod corpus;
pub mod distance;
pub mod space;
pub mod tools;
pub mod witness;

pub use concentration::{
    exact_tail, mahdian_exceptional_bound, sample_tail, threshold, verify_inequality, InequalityReport,
};
pub use corpus::{
    generate_corpus, random_structure, random_talagrand_case, Corpus, CorpusEntry, Flavor, StructureKind, TalagrandCase,
};
pub use distance::{
    convex_distance, directional_distance, distance_lower_bound, min_norm_point, set_distance, verify_talagrand,
    MinNormPoint, TalagrandReport,
};
pub use space::ProductSpace;
pub use tools::{chernoff_bound, kst_bound, lll_ok, verify_kst, KstReport};
pub use witness::{verify_structure, ClauseStructure, StructureStats, TableStructure, WitnessStructure};
