//! Replays the quotient of a surface pure braid group by the normal closure
//! of its Artin generators and certifies it is a direct power of the
//! surface group with a pair of mutually inverse homomorphisms.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::families::{
    artin_generator_set, copy_symbol, direct_power_presentation, pure_braid, surface_a, surface_group,
    surface_rho, BraidFamily, FamilyError, SurfaceSpec,
};
use crate::presentations::{
    check_hom, FreeFactorization, GroupHom, HomCertificate, Presentation, PresentationError,
    WordProblemStrategy,
};
use crate::rewrite::{kb_complete_ordered, KbBudget, RewriteError};
use crate::words::{GeneratorSymbol, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GoldbergError {
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error("quotient generator {0} is not a surface braid generator")]
    ForeignGenerator(String),
    #[error(transparent)]
    Presentation(#[from] PresentationError),
}

/// Family relators with the Artin generators killed, trivial relators
/// dropped and duplicates merged up to rotation and inversion.
pub fn goldberg_quotient(spec: SurfaceSpec, n: u32) -> Result<Presentation, GoldbergError> {
    if spec.p == 0 {
        return Err(FamilyError::ClosedSurfaceUnsupported.into());
    }
    let full = pure_braid(spec, n)?;
    let killed = artin_generator_set(spec, n)?;
    let generators: Vec<_> = full.generators().iter().filter(|g| !killed.contains(g)).cloned().collect();
    let mut seen = BTreeSet::new();
    let mut relators = Vec::new();
    for r in full.relators() {
        let q = r.substitute_kill(&killed).cyclically_reduce();
        if !q.is_identity() && seen.insert(q.cyclic_canonical()) {
            relators.push(q);
        }
    }
    let kill_list: Vec<_> = killed.iter().map(ToString::to_string).collect();
    let provenance = format!("{} / <<{}>>", full.provenance(), kill_list.join(", "));
    Ok(Presentation::new(generators, relators, provenance)?)
}

/// Survivors split by whether they are commutators of two generators.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SurvivorCensus {
    pub commutators: usize,
    pub other: Vec<Word>,
}

pub fn survivors_census(q: &Presentation) -> SurvivorCensus {
    let mut census = SurvivorCensus::default();
    for r in q.relators() {
        if r.commutator_shape().is_some() {
            census.commutators += 1;
        } else {
            census.other.push(r.clone());
        }
    }
    census
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum GoldbergStatus {
    Verified,
    Unverified { reason: String },
    Refuted { witness: Word, reason: String },
}

impl GoldbergStatus {
    pub fn is_verified(&self) -> bool {
        matches!(self, GoldbergStatus::Verified)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GoldbergParams {
    pub family: BraidFamily,
    pub g: u32,
    pub p: u32,
    pub n: u32,
}

#[derive(Clone, Debug, Serialize)]
pub struct GoldbergCertificate {
    pub params: GoldbergParams,
    pub quotient: Presentation,
    pub target: Presentation,
    pub phi: GroupHom,
    pub psi: GroupHom,
    pub phi_check: Option<HomCertificate>,
    pub psi_check: Option<HomCertificate>,
    pub status: GoldbergStatus,
}

/// Braid strand and surface-group generator that a quotient generator
/// stands for.
fn strand_and_base(spec: SurfaceSpec, sym: &GeneratorSymbol) -> Option<(u32, GeneratorSymbol)> {
    let offset = spec.strand_offset();
    match sym {
        GeneratorSymbol::A { i, j } if *i <= offset && *j > offset => Some((*j - offset, surface_a(*i))),
        GeneratorSymbol::Rho { r, k } if !spec.orientable && *r > offset => Some((*r - offset, surface_rho(*k))),
        _ => None,
    }
}

/// Inverse of [`strand_and_base`].
fn braid_symbol(spec: SurfaceSpec, copy: u32, base: &GeneratorSymbol) -> Option<GeneratorSymbol> {
    let offset = spec.strand_offset();
    match base {
        GeneratorSymbol::Plain { name, index } if name == "A" => Some(GeneratorSymbol::a(*index, copy + offset)),
        GeneratorSymbol::Plain { name, index } if name == "rho" => Some(GeneratorSymbol::rho(copy + offset, *index)),
        _ => None,
    }
}

/// Copy `c` of a base generator, treating `n = 1` as the base itself.
fn target_symbol(n: u32, base: &GeneratorSymbol, c: u32) -> GeneratorSymbol {
    if n == 1 {
        base.clone()
    } else {
        copy_symbol(base, c)
    }
}

/// Factor map of the target; in the non-orientable case the last puncture
/// generator of each copy is eliminated through the surface relator,
/// `A_p = (A_1 ... A_{p-1})^-1 rho_1^2 ... rho_g^2`.
fn target_factorization(spec: SurfaceSpec, n: u32, base: &Presentation) -> FreeFactorization {
    let mut factor_of = BTreeMap::new();
    let mut eliminations = BTreeMap::new();
    let eliminated = (!spec.orientable).then(|| surface_a(spec.p));
    for c in 1..=n {
        let sym = |b: &GeneratorSymbol| target_symbol(n, b, c);
        for b in base.generators() {
            if Some(b) != eliminated.as_ref() {
                factor_of.insert(sym(b), c as usize);
            }
        }
        if let Some(e) = &eliminated {
            let punctures = Word::product(&(1..spec.p).map(|i| Word::gen(&sym(&surface_a(i)))).collect::<Vec<_>>());
            let squares = Word::product(
                &(1..=spec.g)
                    .map(|k| Word::power(&sym(&surface_rho(k)), 2))
                    .collect::<Vec<_>>(),
            );
            eliminations.insert(sym(e), punctures.inverse().mul(&squares));
        }
    }
    FreeFactorization::new(factor_of, eliminations)
}

/// Shortlex precedence grouping generators by braid strand, so that the
/// commutation rules between factors are oriented consistently.
fn strand_major_order(spec: SurfaceSpec, q: &Presentation) -> Vec<GeneratorSymbol> {
    let mut gens: Vec<_> = q.generators().to_vec();
    gens.sort_by_key(|g| (strand_and_base(spec, g), g.clone()));
    gens
}

fn status_from_check(which: &str, cert: &HomCertificate) -> Option<GoldbergStatus> {
    (!cert.well_defined).then(|| GoldbergStatus::Refuted {
        witness: cert.failing_relator.clone().unwrap_or_default(),
        reason: format!("{which} does not respect relator {}", cert.failing_relator.as_ref().map(ToString::to_string).unwrap_or_default()),
    })
}

pub fn verify_goldberg(spec: SurfaceSpec, n: u32, budget: &KbBudget) -> Result<GoldbergCertificate, GoldbergError> {
    let quotient = goldberg_quotient(spec, n)?;
    verify_goldberg_from(spec, n, quotient, budget)
}

/// Certifies an explicitly supplied quotient presentation, e.g. a
/// deliberately corrupted one.
pub fn verify_goldberg_from(
    spec: SurfaceSpec,
    n: u32,
    quotient: Presentation,
    budget: &KbBudget,
) -> Result<GoldbergCertificate, GoldbergError> {
    let base = surface_group(spec)?;
    let target = direct_power_presentation(&base, n)?;

    let phi = GroupHom::from_fn(quotient.clone(), target.clone(), |s| {
        strand_and_base(spec, s)
            .map(|(c, b)| Word::gen(&target_symbol(n, &b, c)))
            .unwrap_or_else(|| Word::gen(s))
    })
    .map_err(|_| {
        let bad = quotient
            .generators()
            .iter()
            .find(|s| strand_and_base(spec, s).is_none_or(|(c, _)| c > n))
            .map(ToString::to_string)
            .unwrap_or_default();
        GoldbergError::ForeignGenerator(bad)
    })?;
    let mut psi_images = Vec::new();
    for c in 1..=n {
        for b in base.generators() {
            let sym = braid_symbol(spec, c, b).expect("surface generators are A or rho");
            psi_images.push(Word::gen(&sym));
        }
    }
    let psi = GroupHom::new(target.clone(), quotient.clone(), psi_images)?;

    let mut cert = GoldbergCertificate {
        params: GoldbergParams {
            family: spec.family(),
            g: spec.g,
            p: spec.p,
            n,
        },
        quotient,
        target,
        phi,
        psi,
        phi_check: None,
        psi_check: None,
        status: GoldbergStatus::Verified,
    };

    let factors = WordProblemStrategy::DirectPowerOfFree(target_factorization(spec, n, &base));
    let phi_check = match check_hom(&cert.phi, &factors) {
        Ok(c) => c,
        Err(e) => {
            cert.status = GoldbergStatus::Unverified { reason: e.to_string() };
            return Ok(cert);
        }
    };
    cert.phi_check = Some(phi_check.clone());
    if let Some(refuted) = status_from_check("phi", &phi_check) {
        cert.status = refuted;
        return Ok(cert);
    }

    let order = strand_major_order(spec, &cert.quotient);
    let rs = match kb_complete_ordered(cert.quotient.relators(), &order, budget) {
        Ok(rs) => rs,
        Err(RewriteError::Exhausted { dimension, .. }) => {
            cert.status = GoldbergStatus::Unverified {
                reason: format!("kb budget exhausted ({dimension})"),
            };
            return Ok(cert);
        }
        Err(e) => {
            cert.status = GoldbergStatus::Unverified { reason: e.to_string() };
            return Ok(cert);
        }
    };
    let quotient_strategy = WordProblemStrategy::RewriteSystem(Arc::new(rs));
    let psi_check = match check_hom(&cert.psi, &quotient_strategy) {
        Ok(c) => c,
        Err(e) => {
            cert.status = GoldbergStatus::Unverified { reason: e.to_string() };
            return Ok(cert);
        }
    };
    cert.psi_check = Some(psi_check.clone());
    if let Some(refuted) = status_from_check("psi", &psi_check) {
        cert.status = refuted;
        return Ok(cert);
    }

    let round_trips = [
        ("phi after psi", cert.psi.then(&cert.phi), &factors),
        ("psi after phi", cert.phi.then(&cert.psi), &quotient_strategy),
    ];
    for (label, composite, strategy) in round_trips {
        for (g, img) in composite.source().generators().iter().zip(composite.images()) {
            let gen = Word::gen(g);
            match strategy.words_equal(img, &gen) {
                Ok(true) => {}
                Ok(false) => {
                    cert.status = GoldbergStatus::Refuted {
                        witness: gen,
                        reason: format!("{label} moves generator {g}"),
                    };
                    return Ok(cert);
                }
                Err(e) => {
                    cert.status = GoldbergStatus::Unverified { reason: e.to_string() };
                    return Ok(cert);
                }
            }
        }
    }
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentations::AbelianInvariants;
    use crate::words::w;

    #[test]
    fn sphere_two_two_by_hand() {
        let q = goldberg_quotient(SurfaceSpec::sphere(2), 2).unwrap();
        let names: Vec<_> = q.generators().iter().map(ToString::to_string).collect();
        assert_eq!(names, ["A[1,2]", "A[1,3]"]);
        assert_eq!(q.relators().len(), 1);
        assert_eq!(
            q.relators()[0].commutator_shape(),
            w("A[1,2]^-1 A[1,3]^-1 A[1,2] A[1,3]").commutator_shape()
        );
        assert_eq!(q.abelian_invariants(), AbelianInvariants::free(2));
        assert_eq!(survivors_census(&q), SurvivorCensus { commutators: 1, other: vec![] });
        assert!(q.provenance().contains("A[2,3]"));
    }

    #[test]
    fn single_strand_quotients_are_free() {
        for p in 1..=4 {
            let q = goldberg_quotient(SurfaceSpec::sphere(p), 1).unwrap();
            assert_eq!(q.generators().len() as u32, p - 1);
            assert!(q.relators().is_empty());
        }
        let disc = goldberg_quotient(SurfaceSpec::sphere(1), 2).unwrap();
        assert!(disc.generators().is_empty() && disc.relators().is_empty());
    }

    #[test]
    fn orientable_survivors_are_cross_commutators() {
        let q = goldberg_quotient(SurfaceSpec::orientable(1, 1), 2).unwrap();
        assert_eq!(q.generators().len(), 4);
        let census = survivors_census(&q);
        assert!(census.other.is_empty());
        assert_eq!(census.commutators, 4);
    }

    #[test]
    fn nonorientable_census_keeps_surface_relator() {
        let q = goldberg_quotient(SurfaceSpec::non_orientable(1, 1).unwrap(), 1).unwrap();
        let census = survivors_census(&q);
        assert_eq!(census.other.len(), 1);
        assert_eq!(census.other[0].cyclic_canonical(), w("rho[2,1]^2 A[1,2]^-1").cyclic_canonical());
    }

    #[test]
    fn verifies_small_cases() {
        let cases = [
            SurfaceSpec::sphere(2),
            SurfaceSpec::orientable(1, 1),
            SurfaceSpec::non_orientable(1, 1).unwrap(),
        ];
        for spec in cases {
            let cert = verify_goldberg(spec, 2, &KbBudget::default()).unwrap();
            assert_eq!(cert.status, GoldbergStatus::Verified, "{spec}");
            assert_eq!(cert.quotient.abelian_invariants(), cert.target.abelian_invariants());
        }
    }

    #[test]
    fn corrupted_quotient_is_not_verified() {
        let spec = SurfaceSpec::sphere(2);
        let q = goldberg_quotient(spec, 2).unwrap();
        let broken = Presentation::new(q.generators().to_vec(), [w("A[1,2]^-1 A[1,3]^-1 A[1,2] A[1,3]^2")], "corrupt").unwrap();
        let cert = verify_goldberg_from(spec, 2, broken, &KbBudget::default()).unwrap();
        assert!(matches!(cert.status, GoldbergStatus::Refuted { .. }), "{:?}", cert.status);
        // A missing commutator breaks psi instead.
        let free = Presentation::free(q.generators().to_vec(), "dropped");
        let cert = verify_goldberg_from(spec, 2, free, &KbBudget::default()).unwrap();
        assert!(matches!(cert.status, GoldbergStatus::Refuted { .. }), "{:?}", cert.status);
        assert!(cert.phi_check.unwrap().well_defined);
        assert!(!cert.psi_check.unwrap().well_defined);
    }

    #[test]
    fn tiny_budget_is_unverified_not_refuted() {
        let budget = KbBudget {
            max_rules: 3,
            ..KbBudget::default()
        };
        let cert = verify_goldberg(SurfaceSpec::orientable(1, 1), 2, &budget).unwrap();
        assert!(matches!(cert.status, GoldbergStatus::Unverified { .. }));
    }

    #[test]
    fn closed_surfaces_rejected() {
        assert!(matches!(
            goldberg_quotient(SurfaceSpec::orientable(2, 0), 2),
            Err(GoldbergError::Family(FamilyError::ClosedSurfaceUnsupported))
        ));
    }
}
