//! Multiple power residue symbols and arithmetic Milnor invariants.
//!
//! * [`magnus`] and [`milnor`]: truncated Magnus expansions over `Z/mZ`, Fox
//!   derivatives, Milnor numbers, indeterminacy and the unipotent
//!   representation for link-type presentations.
//! * [`redei`]: the quadratic triple symbol over `Q`.
//! * [`cubic`]: the triple cubic residue symbol over `Q(w)`, `w^3 = 1`.
//!
//! Every symbol has an independent prime-splitting oracle next to it.

pub mod arith;
pub mod cli;
pub mod cubic;
pub mod eisenstein;
pub mod error;
pub mod magnus;
pub mod milnor;
pub mod poly;
pub mod redei;
mod serde_bigint;
pub mod symbol;

pub use error::Error;


pub use symbol::SymbolValue;
