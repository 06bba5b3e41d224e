//! Analysis toolkit for index coding with security constraints on the
//! receivers: g-partitions, MAIS and S-MAIS bounds, infeasibility
//! certificates, exact LP rate bounds, and construction and verification of
//! secure linear codes over `GF(2^m)`.

pub mod bounds;
pub mod codes;
pub mod error;
pub mod fixtures;
pub mod gf;
pub mod graph;
pub mod lp;
pub mod oracle;
pub mod partition;
pub mod problem;
pub mod random;
pub mod report;
pub mod reproduce;
pub mod rates;
pub mod subset;

pub use bounds::{BoundsReport, RhoState, SmaisResult, Verdict};
pub use codes::{CodeSpec, VerificationReport};
pub use error::{Error, ProblemError, Result};
pub use gf::{FiniteField, GFMatrix};
pub use graph::{kappa, MaisTable, SideInfoGraph};
pub use lp::{LpSolution, LpStatus, RationalLp};
pub use oracle::{ExactMI, OracleVerdict, TruthTableCode};
pub use partition::{GPartition, SeedFamily};
pub use problem::{Problem, Subproblem};
pub use report::{AnalysisReport, AnalyzeOptions};
pub use rates::{FlpccSolution, OuterBound};
pub use subset::SubsetId;
