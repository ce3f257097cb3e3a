//! Mining of all or top-k multiple longest common subsequences (MLCS) through
//! a key-point DAG.
//!
//! Every source-to-sink path of the [`KeyPointDag`] spells one MLCS, so the
//! whole solution set is held in one compact graph. Levels of width one are
//! common patterns shared by every MLCS. Levels can be spilled to disk under a
//! memory budget and reloaded layer by layer.
//!
//! ```
//! use kpmlcs::{mine, MineParams, ProblemInstance};
//!
//! let inst = ProblemInstance::from_strs(&["ABC", "ACB", "ABC"]).unwrap();
//! let out = mine(&inst, &MineParams::topk(1)).unwrap();
//! assert_eq!(out.result.paths[0].text, "AB");
//! ```

pub mod dag;
pub mod error;
pub mod export;
pub mod miner;
pub mod oracle;
pub mod persistence;
pub mod pipeline;
pub mod samples;
pub mod sequence;
pub mod successor;

pub use dag::{common_patterns, count_paths, DagStats, KeyPointDag, PatternSegment};
pub use error::{ExportError, MineError, ParseError, PersistError};
pub use export::{
    export_graph_json, export_graphml, export_stats_json, export_text, GraphDocument,
};
pub use miner::{enumerate_all, gap_score, topk, trace_back_all, MlcsPath, MlcsResult};
pub use persistence::{enforce_budget, LayerStore, MemoryBudget, PagedDag, SpillAction};
pub use pipeline::{
    mine, mine_with, Expansion, MineParams, MiningEvent, MiningMode, MiningOutcome, PruneMode,
};
pub use sequence::{char_composition, parse_input, Alphabet, InputFormat, ProblemInstance, Sequence};
pub use successor::SuccessorTable;
