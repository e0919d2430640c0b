pub mod arena;
pub mod eval;
pub mod iso;
pub mod lang;
pub mod plays;
pub mod extract;
pub mod strategy;
