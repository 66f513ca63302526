//! Parsing, rendering and command dispatch for the `ultra` binary.
//!
//! The input language is line oriented.  Ultragraph documents:
//!
//! ```text
//! # named vertices, an optional infinite tail, edges and edge families
//! vertices v0 v1
//! tail v[n] for n >= 2
//! edge e : v1 -> ~{ v0 v1 }
//! edge f : v0 -> ~{ v0 }
//! family g[n] for n >= 1 : v[n+1] -> { v[n] }
//! ```
//!
//! `{ … }` is a finite vertex set, `~{ … }` the complement of one (only
//! meaningful with a tail declared).  An indexed reference `v[k]` below
//! the tail start falls back to the declared vertex named `vk`.
//!
//! Matrix documents are either dense rows of 0/1 tokens or a symbolic
//! schema:
//!
//! ```text
//! matrix symbolic
//! first 0
//! tail from 2
//! row 0 : ~{ 0 }
//! row 1 : ~{ 0 1 }
//! row n for n >= 2 : { n-1 }
//! ```

pub mod commands;
pub mod parse;
pub mod render;
pub mod report;
