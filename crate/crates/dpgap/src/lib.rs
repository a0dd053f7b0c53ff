//! Gap probabilities of discrete orthogonal polynomial ensembles.
//!
//! `D_s` is computed three ways: from orthogonal polynomials directly ([`oracle`]), from the
//! general Lax-pair recurrence ([`lax`]), and from closed discrete Painlevé forms
//! ([`painleve`]). Everything is generic over [`Real`]; [`BigFloat`] gives configurable
//! precision.

pub mod bigfloat;
pub mod error;
pub mod family;
pub mod lax;
pub mod mat2;
pub mod oracle;
pub mod painleve;
pub mod poly;
pub mod scalar;
pub mod special;
pub mod table;

pub use bigfloat::{BigFloat, DEFAULT_PRECISION};
pub use error::{Error, Result};
pub use family::{make_family, make_family_with, FamilyName, FamilyOptions, FamilySpec};
pub use lax::LaxState;
pub use mat2::Mat2;
pub use poly::Poly;
pub use scalar::Real;
pub use table::{gap_table, GapTable, Method, RunSpec};

pub type Family32 = FamilySpec<f32>;
pub type Family64 = FamilySpec<f64>;
pub type FamilyBig = FamilySpec<BigFloat>;
pub type Table64 = GapTable<f64>;
pub type TableBig = GapTable<BigFloat>;
