//! Independent oracles and published fixtures shared by the core tests and
//! the workspace acceptance suite.
#![allow(dead_code)]

pub mod agreement;
pub mod augment;
pub mod classifier;
pub mod tables;
pub mod taxonomy;
