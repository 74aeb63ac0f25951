//! Mixed-action-space gridworld agent training stack.
//!
//! The crate is organized around a deterministic gridworld simulator
//! ([`miniworld`]), a composite action space with a canonical raw-action
//! parser ([`actspace`]), a small autoregressive token policy with exact
//! hand-derived gradients ([`policy`]), group-relative policy optimization
//! ([`grpo`]), scripted-expert dataset construction ([`data`]), the staged
//! training pipeline ([`pipeline`]), and an evaluation harness
//! ([`evalsuite`]). Everything is seeded: identical configuration and seed
//! reproduce identical artifacts byte for byte.

pub mod actspace;
pub mod config;
pub mod data;
pub mod evalsuite;
pub mod grpo;
pub mod miniworld;
pub mod pipeline;
pub mod policy;
pub mod seeding;
