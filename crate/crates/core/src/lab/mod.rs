//! Instance generation and property checks.

pub mod checks;
pub mod gadgets;
pub mod generate;

pub use checks::{
    check_common_neighbor, check_def, check_exp1, check_exp2, check_girth, check_linear, check_reg, ExpansionScan,
    PropertyReport, Verdict, Witness,
};
pub use gadgets::loose_four_cycle;
pub use generate::{gen_linear_regular, gen_linear_regular_with, relabel, GenLimits};
