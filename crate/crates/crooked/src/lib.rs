//! Crooked planes in anti-de Sitter 3-space and in Minkowski 3-space.
//!
//! Points of AdS³ are elements of PSL(2,R) acting on the upper half-plane; points of
//! Minkowski space are Killing fields of the hyperbolic plane (traceless 2×2 matrices).

pub mod ads;
pub mod hyp2;
pub mod mink;
pub mod render;
pub mod scene;
pub mod schottky;
pub mod transition;
