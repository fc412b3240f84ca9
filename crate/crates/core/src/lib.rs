//! Double categories: checking, derived constructions, and concrete instances
//! drawn from finite sets, spans, bimodules, and cobordisms.

pub mod action;
pub mod bimod;
pub mod category;
pub mod cobord;
pub mod diagram;
pub mod double;
pub mod finset;
pub mod linalg;
pub mod tqft;
