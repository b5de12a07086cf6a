//! Reed–Solomon codes that correct adversarial insertions and deletions.
//!
//! The crate covers finite-field arithmetic, edit-distance machinery, the
//! determinant criterion that certifies a set of evaluation points, three
//! ways of producing such points, and a brute-force decoder driven by a
//! simulated adversarial channel.

pub mod field;
pub mod sequence;
pub mod rs_code;
pub mod criterion;
pub mod constructions;
pub mod channel;
