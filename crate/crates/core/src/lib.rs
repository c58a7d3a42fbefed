//! Context-free families of string diagrams as boundary graph grammars.
//!
//! This crate implements string graphs (graph encodings of string diagrams),
//! edNCE node-replacement grammars with the boundary restriction, decoding
//! systems that expand encoding edges into wire fragments, and double-pushout
//! (DPO) rewriting at two levels: concrete string graphs and the grammars
//! themselves. Grammar-level rewrite rules act as equational schemas; their
//! parallel instantiation produces ordinary string-graph rewrite rules.
//!
//! The crate is `no_std` (it requires `alloc`) and fully deterministic: all
//! collections are ordered and every search enumerates candidates in a fixed
//! order.

#![no_std]

extern crate alloc;

pub mod alphabet;
pub mod besg;
pub mod decode;
pub mod dpo;
pub mod families;
pub mod grammar;
pub mod grammar_rewrite;
pub mod graph;
pub mod morphism;
pub mod schema;
pub mod stringgraph;
pub mod substitute;

pub use alphabet::{Alphabets, Direction, Mode};
pub use besg::BesgGrammar;
pub use decode::{DecodingRule, DecodingSystem};
pub use dpo::{Matching, RuleSpan};
pub use grammar::{DerivationScript, Grammar, GrammarHom, Production, SententialForm};
pub use graph::{ConnectionInstruction, Edge, EdgeLabel, ExtendedGraph, LabeledGraph, VertexId, VertexLabel};
pub use morphism::Morphism;
pub use schema::{BesgRewriteRule, GrammarPattern};
pub use stringgraph::{Classification, StringGraphView};
