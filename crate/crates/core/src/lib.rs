//! Two two-level atoms crossing one cavity in succession and sharing a single
//! photon, with the atoms' motion along the cavity axis quantized.
//!
//! The crate builds the reduced internal state of the atom pair in closed
//! form ([`models`]), tests it for separability and CHSH violation
//! ([`entanglement`]), and cross-checks every closed form against a
//! grid-based simulation of the full state ([`oracle`]).

pub mod entanglement;
pub mod error;
pub mod linalg;
pub mod models;
pub mod oracle;
pub mod wavepackets;

pub use entanglement::{
    closed_form_ppt_eigenvalues, degenerate_m, horodecki_m, jc_separability_value, ppt_report,
    ClosedFormPpt, DegenerateM, EntanglementReport, HorodeckiM, PptReport, DEFAULT_PPT_TOLERANCE,
};
pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, TwoQubitDensityMatrix};
pub use models::{
    build_rho_jc, build_rho_sg, compute_overlap_set, jc_limit_overlap_set, sg_coefficients,
    InitialState, OverlapSet, SgCoefficients,
};
pub use wavepackets::{
    BranchSign, GaussianPacket, PhaseSpaceDisplacement, PhysicalParams, HBAR,
};
