//! Cumulative (KLM-style) entailment over propositional logics with team
//! semantics.
//!
//! The crate model-checks propositional formulas and dependence atoms on
//! teams, decides entailment over explicit relational models and over models
//! given as pairs of boolean circuits, and ships brute-force reference
//! evaluators used to cross-check the optimized engines.
//!
//! ```
//! use klmteam::{Domain, Formula, Team, semantics};
//!
//! let domain = Domain::parse_list("p,q,r").unwrap();
//! let team = Team::parse_literal(&domain, "100;010").unwrap();
//! let f = Formula::parse("dep(p) | dep(p)").unwrap();
//! assert!(semantics::eval_team(&team, &f).unwrap());
//! ```

pub mod bench;
pub mod error;
pub mod formula;
pub mod gen;
pub mod oracle;
pub mod relmodel;
pub mod report;
pub mod semantics;
pub mod succinct;
pub mod systemc;
pub mod teams;

pub use error::{Error, Result};
pub use formula::{Formula, Var};
pub use relmodel::{RelationalModel, StateId};
pub use report::{VerificationReport, Witness};
pub use semantics::Logic;
pub use succinct::{Circuit, SuccinctModel};
pub use systemc::{EntailmentRelation, Rule};
pub use teams::{Domain, Team, Valuation};
