//! Multi-agent inventory replenishment simulator.
//!
//! The crate is organised around the agents of a replenishment loop:
//!
//! - [`inventory`]: SKUs, supplier offers and the batch-aged ledger every agent reads and writes
//! - [`demand`]: seeded demand traces, supplier disruptions and scenario scaling
//! - [`forecast`]: exponential smoothing, seasonal-naive and rolling error statistics
//! - [`policies`]: monitoring flags, reorder rules (static ROP, 80% rule, (s,Q), newsvendor,
//!   agentic) and the perfect-foresight planner
//! - [`supplier`]: landed-cost scoring and greedy order splitting under MOQ/capacity
//! - [`negotiation`]: alternating-offers price negotiation
//! - [`trend`]: trend scoring, adoption gating and trend ROI
//! - [`coordination`]: per-period budget / warehouse arbitration
//! - [`engine`]: the per-period pipeline, metrics and the comparison / ablation / sweep harness
//! - [`scenario`]: the TOML scenario format and the bundled benchmarks
//!
//! Everything is deterministic given `(scenario, policy, seed)`.

pub mod coordination;
pub mod demand;
pub mod engine;
pub mod forecast;
pub mod inventory;
pub mod negotiation;
pub mod output;
pub mod policies;
pub mod rng;
pub mod scenario;
pub mod stats;
pub mod supplier;
pub mod trend;

pub use engine::{run_episode, AgentToggles, RunConfig, RunReport};
pub use inventory::{Money, Sku, SupplierOffer};
pub use policies::PolicyKind;
pub use scenario::Scenario;
