//! Critical-point analysis of solutions: the P-function, critical points of
//! `u` and `P`, local degrees, the auxiliary fields `Z = K(u)` and
//! `W = K(u)` built from Killing fields, and their nodal sets.

pub mod audit;
pub mod auxiliary;
pub mod critical;
pub mod fit;
pub mod nodal;
pub mod pfunction;

pub use audit::{
    coincidence_audit, coincidence_for_field, nondegeneracy_audit, run_audit, z_samples, AuditReport,
    AuxiliaryDiagnostic, CoincidenceReport, NondegeneracyReport, Verdict,
};
pub use auxiliary::{build_auxiliary, AuxiliaryField, AuxiliaryKind, NablaZCheck};
pub use critical::{
    classify, find_critical_points, local_degree, Classification, CriticalPointRecord, FieldKind, DEGENERACY_THRESHOLD,
};
pub use fit::{Jet, JetSampler};
pub use nodal::{trace_nodal_set, trace_zero_set, NodalSet};
pub use pfunction::{
    boundary_identity_check, build_p_function, poincare_hopf_audit, BoundaryIdentityReport, PFunctionField,
    PoincareHopfAudit,
};
