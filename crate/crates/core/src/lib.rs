pub mod classify;
pub mod diagram;
pub mod grammar;
pub mod invariants;
pub mod pd;
pub mod poly;
pub mod render;
pub mod rewrite;
pub mod tables;
pub mod verify;
