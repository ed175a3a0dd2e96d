//! Small-cancellation presentations whose relators have doubly-exponential
//! length.
//!
//! Words are stored in run-length (syllable) form with arbitrary-precision
//! exponents, so relators like `[a, b^(2^(2^n))]` products stay small. On top
//! of that sit piece computation and the `C'(λ)` check, majority reduction
//! (Dehn's algorithm), the quotients `G_k` with their residual-finiteness
//! witnesses, and the `k`-relatedness invariant on integer sets.

pub mod budget;
pub mod dehn;
pub mod error;
pub mod families;
pub mod oracles;
pub mod pieces;
pub mod quotients;
pub mod related;
pub mod words;

pub use budget::ExponentBudget;
pub use error::{Error, Result};
pub use families::{FamilyKind, FamilySpec, Presentation, Relator, RelatorSpec, SetPattern, SetSpec};
pub use pieces::{max_piece, verify_c_prime, PieceReport, VerificationReport};
pub use words::{parse_word, Alphabet, CyclicWord, Generator, ParseError, Syllable, Word};
pub use dehn::{dehn_reduce, is_trivial, Decision, ReductionTrace};
pub use quotients::{project, rf_witness, QuotientSpec, RfWitness};
pub use related::{min_witness_k, related_via_k, NatSet, RelatednessFailure, RelatednessWitness};
