//! Biactions, two-sided semidirect products, and block-product recognizers.

mod biaction;
mod block;
mod decomposed;

pub use biaction::{sdp, Biaction, SdpMonoid};
pub use block::{
    block_product, block_state_bound, compile_formula, compile_layer, compile_models_dfa,
    validity_dfa, BlockStats,
};
pub use decomposed::{
    check_h, check_t_star_quotient, component_dfa, decompose, eta_quotient, h_morphism,
    t_star_over_m, verify_t2, Component, DecomposedD, EtaQuotient, HMorphism, MonoidVariety,
    TStarElement, TStarOverM,
};
