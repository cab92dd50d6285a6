//! Composite devices built from the optics primitives: parity-check QNDs and
//! SWAP gates, each runnable in ideal or realistic mode.

mod qnd;
mod swap;

pub use qnd::{
    p_qnd, p_qnd_evolve, p_qnd_gates, project_parities, s_qnd, s_qnd_evolve, s_qnd_gates,
    QndBranch, QndOutcome,
};
pub use swap::{
    pf_swap, pp_swap, pp_swap_coherent, pp_swap_corrections, pp_swap_evolve, pp_swap_gates,
    pp_swap_project, ps_swap, pt_swap, SwapBranch, SwapOutcome,
};
