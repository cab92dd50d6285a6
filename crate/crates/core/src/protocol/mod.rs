//! The two-step purification protocol.
//!
//! Step 1 compares the parities of two noisy pairs AB and CD in all three
//! DOFs and sorts the outcome into one of eight cases. Case 1 keeps AB,
//! case 2 throws both pairs away, and cases 3–8 hand AB to step 2, where it
//! is combined with a pair from the complementary case.

mod case;
mod inventory;
mod reference;
mod run;
mod step1;
mod step2;
mod yields;

pub use case::{classify, CaseId, DofPattern};
pub use inventory::{simulate_inventory, InventoryReport};
pub use reference::{
    derived_kets, derived_table_cell, ket_discrepancies, printed_kets, printed_table_cell,
    table_discrepancies, CellExpr, KetDiscrepancy, KetGroup, TableCell, TableDiscrepancy,
};
pub use run::{run_epp, EppReport, PairReport, RoundReport, REALISTIC_STEP2_FLOOR};
pub use step1::{
    detect_and_correct, party_checks, step1, CaseRecord, Step1Cache, Step1Result, ALICE_UNITS,
    BOB_UNITS,
};
pub use step2::{
    step2_execute, step2_mixed, step2_plan, Step2Outcome, Step2Plan, SwapStage, PP_UNITS,
};
pub use yields::{efficiency_y1, efficiency_y2, iterate_fidelity, purify_once, Iterated};
