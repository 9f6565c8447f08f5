//! Compile Ludii-style game descriptions and generate illustrated manuals.
//!
//! Pipeline: [`sexpr`] parses source text, [`compiler`] validates it against
//! the [`registry`] and builds a [`compiler::GameSpec`], [`engine`] plays it,
//! [`taxonomy`] groups the moves seen, [`render`] draws them, [`english`] and
//! [`strategy`] produce the text, and [`manual`] assembles the page.

pub mod board;
pub mod cli;
pub mod compiler;
pub mod engine;
pub mod english;
pub mod manual;
pub mod registry;
pub mod render;
pub mod sexpr;
pub mod strategy;
pub mod taxonomy;
