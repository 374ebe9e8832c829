//! Shared fixtures for the criterion benches.

use uaforge_core::algebra::FiniteAlgebra;
use uaforge_core::catalog;
use uaforge_core::logic::OpDefinition;

/// `A_n`, `B_n` and `phi_{1,n}` for one size.
pub struct Fixture {
    pub an: FiniteAlgebra,
    pub bn: FiniteAlgebra,
    pub phi: OpDefinition,
}

pub fn fixture(n: usize) -> Fixture {
    Fixture {
        an: catalog::build_an(n).expect("catalog size"),
        bn: catalog::build_bn(n).expect("catalog size"),
        phi: catalog::build_phi_kn(1, n).expect("catalog size"),
    }
}
