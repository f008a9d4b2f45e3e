//! Exact computational homological algebra over Q and Q[x].
//!
//! The crate is organized bottom-up:
//! - [`exactalg`]: exact scalars, sparse matrices, Smith normal form, homology
//!   of bounded complexes of finite-rank free modules;
//! - [`dgcore`]: presentations of finitely generated (possibly curved) dg
//!   algebras, normal forms, Koszul-sign-correct multiplication, derivations;
//! - [`hochschild`]: Hochschild mixed complexes (first and second kind), the
//!   naive variant, negative cyclic complexes, dualization, u-actions;
//! - [`hkr`]: Kähler differentials, (twisted) de Rham complexes, HKR maps,
//!   explicit named complexes, filtered spectral sequences, monomial models;
//! - [`barcobar`]: bar/cobar constructions, Koszul-dual endomorphism algebras,
//!   the Amitsur contracting homotopy, deformed tensor algebras;
//! - [`witt`]: big Witt vectors at finite precision with ghost coordinates.
//!
//! Everything is exact: coefficients are arbitrary-precision rationals or
//! univariate polynomials with rational coefficients. No floating point is
//! used anywhere.

pub mod barcobar;
pub mod dgcore;
pub mod exactalg;
pub mod hkr;
pub mod hochschild;
pub mod witt;
