//! Finite stratified simplicial sets over finite posets.
//!
//! The crate is organised bottom-up: [`poset`] holds the indexing
//! combinatorics, [`simplicial`] finite simplicial sets and the map-search
//! engine, [`homotopy`] the sound-but-incomplete equivalence checks,
//! [`stratified`] objects over a poset, [`anodyne`] cell certificates and
//! [`decollage`] presheaves on the subdivision. [`corpus`] holds small
//! named fixtures.

pub mod anodyne;
pub mod corpus;
pub mod decollage;
pub mod homotopy;
pub mod poset;
pub mod simplicial;
pub mod stratified;
