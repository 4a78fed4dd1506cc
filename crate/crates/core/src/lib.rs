//! Computational group theory for surface braid groups: presentations,
//! word problems, the Goldberg quotient, Reidemeister numbers and the
//! R∞ classification of orientable surface braid groups.

pub mod classify;
pub mod enumerate;
pub mod families;
pub mod goldberg;
pub mod matrix;
pub mod presentations;
pub mod rewrite;
pub mod twisted;
pub mod words;

pub use classify::{
    classify, classify_pi1, family_of, table, BraidGroupId, ClassifyError, Family, Flavor, ProofStep, ProofTrace,
    RinfStatus, Rule, StepKind, TableRow, Verdict,
};
pub use enumerate::{todd_coxeter, CosetTable, EnumerateError, DEFAULT_MAX_COSETS};
pub use families::{pure_braid, surface_group, BraidFamily, FamilyError, SurfaceSpec};
pub use goldberg::{
    goldberg_quotient, survivors_census, verify_goldberg, GoldbergCertificate, GoldbergError, GoldbergStatus,
};
pub use matrix::{smith_normal_form, IntMatrix, SmithForm};
pub use presentations::{
    check_hom, AbelianInvariants, GroupHom, HomCertificate, Presentation, PresentationError, WordProblemStrategy,
};
pub use rewrite::{kb_complete, KbBudget, RewriteError, RewriteSystem};
pub use twisted::{
    abelianization_certificate, automorphisms_finite, bounded_census_free, lifted_inequality_check,
    min_reidemeister_finite, reidemeister_abelian, reidemeister_finite_burnside, twisted_classes_finite,
    AbelianizationBound, FiniteEndo, FiniteGroup, FreeEndo, ReidemeisterCount, TwistedError, DEFAULT_AUTOMORPHISM_BOUND,
};
pub use words::{GeneratorSymbol, Letter, Word};
