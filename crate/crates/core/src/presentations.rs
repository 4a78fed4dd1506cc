//! Finitely presented groups, homomorphisms defined on generators, and
//! abelian invariants.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::ser::SerializeStruct;
use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

use crate::enumerate::CosetTable;
use crate::matrix::{serialize_bigints, smith_normal_form, IntMatrix};
use crate::rewrite::{RewriteError, RewriteSystem};
use crate::words::{GeneratorSymbol, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PresentationError {
    #[error("relator {relator} uses undeclared generator {symbol}")]
    UndeclaredSymbol { relator: String, symbol: String },
    #[error("generator {0} is listed twice")]
    DuplicateGenerator(String),
    #[error("homomorphism images must cover {expected} generators, got {got}")]
    ImageCount { expected: usize, got: usize },
    #[error("image of {generator} uses {symbol}, which is not a target generator")]
    ImageOutsideTarget { generator: String, symbol: String },
    #[error("word problem strategy unavailable: {0}")]
    StrategyUnavailable(String),
}

/// A finite presentation. Relators are stored freely and cyclically reduced;
/// trivial relators are dropped on construction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawPresentation")]
pub struct Presentation {
    generators: Vec<GeneratorSymbol>,
    relators: Vec<Word>,
    provenance: String,
}

#[derive(Deserialize)]
struct RawPresentation {
    generators: Vec<GeneratorSymbol>,
    #[serde(default)]
    relators: Vec<Word>,
    #[serde(default = "ad_hoc")]
    provenance: String,
}

fn ad_hoc() -> String {
    "ad hoc".to_string()
}

impl TryFrom<RawPresentation> for Presentation {
    type Error = PresentationError;

    fn try_from(raw: RawPresentation) -> Result<Self, Self::Error> {
        Presentation::new(raw.generators, raw.relators, raw.provenance)
    }
}

impl Presentation {
    pub fn new(
        generators: Vec<GeneratorSymbol>,
        relators: impl IntoIterator<Item = Word>,
        provenance: impl Into<String>,
    ) -> Result<Self, PresentationError> {
        let declared: BTreeSet<_> = generators.iter().cloned().collect();
        if declared.len() != generators.len() {
            let mut seen = BTreeSet::new();
            let dup = generators.iter().find(|g| !seen.insert(*g)).expect("duplicate exists");
            return Err(PresentationError::DuplicateGenerator(dup.to_string()));
        }
        let mut kept = Vec::new();
        for r in relators {
            if let Some(sym) = r.symbols().into_iter().find(|s| !declared.contains(s)) {
                return Err(PresentationError::UndeclaredSymbol {
                    relator: r.to_string(),
                    symbol: sym.to_string(),
                });
            }
            let r = r.cyclically_reduce();
            if !r.is_identity() {
                kept.push(r);
            }
        }
        Ok(Presentation {
            generators,
            relators: kept,
            provenance: provenance.into(),
        })
    }

    /// Free group on the given generators.
    pub fn free(generators: Vec<GeneratorSymbol>, provenance: impl Into<String>) -> Self {
        Presentation::new(generators, [], provenance).expect("free presentation is valid")
    }

    pub fn generators(&self) -> &[GeneratorSymbol] {
        &self.generators
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    pub fn with_provenance(mut self, provenance: impl Into<String>) -> Self {
        self.provenance = provenance.into();
        self
    }

    pub fn generator_index(&self, sym: &GeneratorSymbol) -> Option<usize> {
        self.generators.iter().position(|g| g == sym)
    }

    /// Relators up to rotation and inversion.
    pub fn canonical_relators(&self) -> BTreeSet<Word> {
        self.relators.iter().map(Word::cyclic_canonical).collect()
    }

    /// Exponent-sum matrix: one row per relator, one column per generator.
    pub fn abelianization_matrix(&self) -> IntMatrix {
        let entries = self
            .relators
            .iter()
            .flat_map(|r| self.generators.iter().map(move |g| BigInt::from(r.exponent_sum(g))))
            .collect();
        IntMatrix::with_shape(self.relators.len(), self.generators.len(), entries)
    }

    pub fn abelian_invariants(&self) -> AbelianInvariants {
        let s = smith_normal_form(&self.abelianization_matrix());
        let diag = s.d.diagonal();
        let rank = diag.iter().filter(|d| !d.is_zero()).count();
        let torsion = diag
            .into_iter()
            .filter(|d| !d.is_zero() && !d.abs().is_one())
            .collect();
        AbelianInvariants {
            free_rank: self.generators.len() - rank,
            torsion,
        }
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<_> = self.generators.iter().map(ToString::to_string).collect();
        let rels: Vec<_> = self.relators.iter().map(ToString::to_string).collect();
        write!(f, "< {} | {} >", gens.join(", "), rels.join(", "))
    }
}

/// `Z^free_rank + Z/t_1 + ... + Z/t_k` with `t_1 | t_2 | ...`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AbelianInvariants {
    pub free_rank: usize,
    #[serde(serialize_with = "serialize_bigints")]
    pub torsion: Vec<BigInt>,
}

impl AbelianInvariants {
    pub fn free(rank: usize) -> Self {
        AbelianInvariants {
            free_rank: rank,
            torsion: Vec::new(),
        }
    }
}

/// A homomorphism given by the images of the source generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupHom {
    source: Presentation,
    target: Presentation,
    images: Vec<Word>,
}

impl GroupHom {
    /// `images[k]` is the image of `source.generators()[k]`.
    pub fn new(
        source: Presentation,
        target: Presentation,
        images: Vec<Word>,
    ) -> Result<Self, PresentationError> {
        if images.len() != source.generators.len() {
            return Err(PresentationError::ImageCount {
                expected: source.generators.len(),
                got: images.len(),
            });
        }
        let declared: BTreeSet<_> = target.generators.iter().collect();
        for (g, img) in source.generators.iter().zip(&images) {
            if let Some(sym) = img.symbols().iter().find(|s| !declared.contains(s)) {
                return Err(PresentationError::ImageOutsideTarget {
                    generator: g.to_string(),
                    symbol: sym.to_string(),
                });
            }
        }
        Ok(GroupHom {
            source,
            target,
            images,
        })
    }

    /// Build from a closure; generators mapped to `None` are rejected.
    pub fn from_fn<F>(source: Presentation, target: Presentation, mut f: F) -> Result<Self, PresentationError>
    where
        F: FnMut(&GeneratorSymbol) -> Word,
    {
        let images = source.generators.iter().map(&mut f).collect();
        GroupHom::new(source, target, images)
    }

    pub fn source(&self) -> &Presentation {
        &self.source
    }

    pub fn target(&self) -> &Presentation {
        &self.target
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    pub fn image_of(&self, sym: &GeneratorSymbol) -> Option<&Word> {
        self.source.generator_index(sym).map(|k| &self.images[k])
    }

    /// Image of a word over the source generators. Symbols foreign to the
    /// source are passed through unchanged.
    pub fn apply(&self, w: &Word) -> Word {
        w.substitute(|s| self.image_of(s).cloned().unwrap_or_else(|| Word::gen(s)))
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &GroupHom) -> GroupHom {
        GroupHom {
            source: self.source.clone(),
            target: other.target.clone(),
            images: self.images.iter().map(|w| other.apply(w)).collect(),
        }
    }
}

struct ImagePair<'a>(&'a GeneratorSymbol, &'a Word);

impl Serialize for ImagePair<'_> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("Image", 2)?;
        st.serialize_field("generator", self.0)?;
        st.serialize_field("image", self.1)?;
        st.end()
    }
}

impl Serialize for GroupHom {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let images: Vec<_> = self
            .source
            .generators
            .iter()
            .zip(&self.images)
            .map(|(g, w)| ImagePair(g, w))
            .collect();
        let mut st = serializer.serialize_struct("GroupHom", 3)?;
        st.serialize_field("source", &self.source.provenance)?;
        st.serialize_field("target", &self.target.provenance)?;
        st.serialize_field("images", &images)?;
        st.end()
    }
}

/// A direct product of free groups, possibly after eliminating generators
/// that a single relator expresses in terms of the others.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FreeFactorization {
    factor_of: BTreeMap<GeneratorSymbol, usize>,
    eliminations: BTreeMap<GeneratorSymbol, Word>,
}

impl FreeFactorization {
    pub fn new(
        factor_of: BTreeMap<GeneratorSymbol, usize>,
        eliminations: BTreeMap<GeneratorSymbol, Word>,
    ) -> Self {
        FreeFactorization {
            factor_of,
            eliminations,
        }
    }

    pub fn factor_of(&self) -> &BTreeMap<GeneratorSymbol, usize> {
        &self.factor_of
    }

    pub fn eliminations(&self) -> &BTreeMap<GeneratorSymbol, Word> {
        &self.eliminations
    }

    fn eliminate(&self, w: &Word) -> Word {
        w.substitute(|s| self.eliminations.get(s).cloned().unwrap_or_else(|| Word::gen(s)))
    }

    fn is_trivial(&self, w: &Word) -> Result<bool, PresentationError> {
        let w = self.eliminate(w);
        let mut factors: BTreeMap<usize, Vec<_>> = BTreeMap::new();
        for l in w.letters() {
            let f = self.factor_of.get(&l.symbol).ok_or_else(|| {
                PresentationError::StrategyUnavailable(format!("{} has no factor", l.symbol))
            })?;
            factors.entry(*f).or_default().push(l.clone());
        }
        Ok(factors.into_values().all(|ls| Word::reduce(ls).is_identity()))
    }

    /// Confirms the target really is the claimed product of free groups:
    /// every elimination has its defining relator, every relator dies in each
    /// factor projection, and every cross-factor commutator is present.
    fn check_applies(&self, target: &Presentation) -> Result<(), PresentationError> {
        let unavailable = |msg: String| Err(PresentationError::StrategyUnavailable(msg));
        for g in &target.generators {
            let listed = self.factor_of.contains_key(g);
            let eliminated = self.eliminations.contains_key(g);
            if listed == eliminated {
                return unavailable(format!("{g} must be either a free generator or eliminated"));
            }
        }
        let canonical = target.canonical_relators();
        for (e, expr) in &self.eliminations {
            if expr.symbols().iter().any(|s| !self.factor_of.contains_key(s)) {
                return unavailable(format!("elimination of {e} refers to a non-free generator"));
            }
            let defining = Word::gen(e).mul(&expr.inverse()).cyclic_canonical();
            if !canonical.contains(&defining) {
                return unavailable(format!("no defining relator for eliminated {e}"));
            }
        }
        for r in &target.relators {
            if !self.is_trivial(r)? {
                return unavailable(format!("relator {r} survives in a free factor"));
            }
        }
        let present: BTreeSet<_> = target
            .relators
            .iter()
            .filter_map(Word::commutator_shape)
            .collect();
        let free: Vec<_> = self.factor_of.iter().collect();
        for (n, (x, fx)) in free.iter().enumerate() {
            for (y, fy) in &free[n + 1..] {
                if fx != fy && !present.contains(&((*x).clone(), (*y).clone())) {
                    return unavailable(format!("missing commutator [{x}, {y}]"));
                }
            }
        }
        Ok(())
    }
}

/// How equality of words is decided in a target group.
#[derive(Clone, Debug)]
pub enum WordProblemStrategy {
    /// The target is free: free reduction decides.
    FreeReduction,
    /// The target is a direct product of free groups.
    DirectPowerOfFree(FreeFactorization),
    /// A confluent system completed from exactly the target's relators.
    RewriteSystem(Arc<RewriteSystem>),
    /// A closed coset table over the trivial subgroup of the target.
    CosetTable(Arc<CosetTable>),
}

impl WordProblemStrategy {
    pub fn name(&self) -> &'static str {
        match self {
            WordProblemStrategy::FreeReduction => "free-reduction",
            WordProblemStrategy::DirectPowerOfFree(_) => "direct-power-of-free",
            WordProblemStrategy::RewriteSystem(_) => "rewrite-system",
            WordProblemStrategy::CosetTable(_) => "coset-table",
        }
    }

    /// Fails unless the strategy decides the word problem of `target`.
    pub fn check_applies(&self, target: &Presentation) -> Result<(), PresentationError> {
        let unavailable = |msg: &str| Err(PresentationError::StrategyUnavailable(msg.to_string()));
        match self {
            WordProblemStrategy::FreeReduction => {
                if target.relators.is_empty() {
                    Ok(())
                } else {
                    unavailable("target has relators")
                }
            }
            WordProblemStrategy::DirectPowerOfFree(f) => f.check_applies(target),
            WordProblemStrategy::RewriteSystem(rs) => {
                if !rs.is_confluent() {
                    return unavailable("rewrite system is not confluent");
                }
                let alphabet: BTreeSet<_> = rs.alphabet().iter().collect();
                if target.generators.iter().any(|g| !alphabet.contains(g)) {
                    return unavailable("rewrite alphabet misses target generators");
                }
                let own: BTreeSet<_> = rs.relators().iter().map(Word::cyclic_canonical).collect();
                if own != target.canonical_relators() {
                    return unavailable("rewrite system was completed from other relators");
                }
                Ok(())
            }
            WordProblemStrategy::CosetTable(t) => {
                if !t.is_closed() {
                    return unavailable("coset table is not closed");
                }
                let same_relators = t.presentation().canonical_relators() == target.canonical_relators();
                if t.presentation().generators() != target.generators() || !same_relators {
                    return unavailable("coset table belongs to another presentation");
                }
                Ok(())
            }
        }
    }

    /// Whether `w` is the identity. Call [`check_applies`](Self::check_applies) first.
    pub fn is_trivial(&self, w: &Word) -> Result<bool, PresentationError> {
        match self {
            WordProblemStrategy::FreeReduction => Ok(w.is_identity()),
            WordProblemStrategy::DirectPowerOfFree(f) => f.is_trivial(w),
            WordProblemStrategy::RewriteSystem(rs) => rs
                .normal_form(w)
                .map(|nf| nf.is_identity())
                .map_err(|e: RewriteError| PresentationError::StrategyUnavailable(e.to_string())),
            WordProblemStrategy::CosetTable(t) => t
                .acts_trivially(w)
                .map_err(|e| PresentationError::StrategyUnavailable(e.to_string())),
        }
    }

    pub fn words_equal(&self, u: &Word, v: &Word) -> Result<bool, PresentationError> {
        self.is_trivial(&u.mul(&v.inverse()))
    }
}

/// Outcome of checking that a generator map respects the source relators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomCertificate {
    pub well_defined: bool,
    pub failing_relator: Option<Word>,
    pub strategy: String,
}

/// Checks that every source relator maps to the identity of the target.
pub fn check_hom(h: &GroupHom, strategy: &WordProblemStrategy) -> Result<HomCertificate, PresentationError> {
    strategy.check_applies(&h.target)?;
    for r in &h.source.relators {
        if !strategy.is_trivial(&h.apply(r))? {
            return Ok(HomCertificate {
                well_defined: false,
                failing_relator: Some(r.clone()),
                strategy: strategy.name().to_string(),
            });
        }
    }
    Ok(HomCertificate {
        well_defined: true,
        failing_relator: None,
        strategy: strategy.name().to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rewrite::{kb_complete, KbBudget};
    use crate::words::w;

    fn sym(s: &str) -> GeneratorSymbol {
        s.parse().unwrap()
    }

    fn pres(gens: &[&str], rels: &[&str]) -> Presentation {
        Presentation::new(
            gens.iter().map(|g| sym(g)).collect(),
            rels.iter().map(|r| w(r)),
            "ad hoc",
        )
        .unwrap()
    }

    #[test]
    fn construction_normalizes_and_validates() {
        let p = pres(&["a", "b"], &["b a a b^-1", "a a^-1"]);
        assert_eq!(p.relators(), &[w("a a")]);
        assert!(matches!(
            Presentation::new(vec![sym("a")], [w("b")], "x"),
            Err(PresentationError::UndeclaredSymbol { .. })
        ));
        assert!(matches!(
            Presentation::new(vec![sym("a"), sym("a")], [], "x"),
            Err(PresentationError::DuplicateGenerator(_))
        ));
    }

    #[test]
    fn check_hom_examples() {
        let src = pres(&["a"], &["a^2"]);
        let tgt = pres(&["b"], &["b^2"]);
        let rs = kb_complete(tgt.relators(), tgt.generators(), &KbBudget::default()).unwrap();
        let h = GroupHom::new(src.clone(), tgt, vec![w("b")]).unwrap();
        let cert = check_hom(&h, &WordProblemStrategy::RewriteSystem(Arc::new(rs))).unwrap();
        assert!(cert.well_defined);

        let free_xy = pres(&["x", "y"], &[]);
        let h = GroupHom::new(pres(&["a"], &[]), free_xy, vec![w("x y x^-1")]).unwrap();
        assert!(check_hom(&h, &WordProblemStrategy::FreeReduction).unwrap().well_defined);

        let h = GroupHom::new(src, pres(&["x"], &[]), vec![w("x")]).unwrap();
        let cert = check_hom(&h, &WordProblemStrategy::FreeReduction).unwrap();
        assert!(!cert.well_defined);
        assert_eq!(cert.failing_relator, Some(w("a^2")));
    }

    #[test]
    fn strategy_must_match_target() {
        let src = pres(&["a"], &[]);
        let tgt = pres(&["b"], &["b^2"]);
        let h = GroupHom::new(src, tgt.clone(), vec![w("b")]).unwrap();
        assert!(matches!(
            check_hom(&h, &WordProblemStrategy::FreeReduction),
            Err(PresentationError::StrategyUnavailable(_))
        ));
        let other = kb_complete(&[w("b^3")], tgt.generators(), &KbBudget::default()).unwrap();
        assert!(matches!(
            check_hom(&h, &WordProblemStrategy::RewriteSystem(Arc::new(other))),
            Err(PresentationError::StrategyUnavailable(_))
        ));
    }

    #[test]
    fn hom_rejects_bad_images() {
        let src = pres(&["a", "b"], &[]);
        let tgt = pres(&["x"], &[]);
        assert!(matches!(
            GroupHom::new(src.clone(), tgt.clone(), vec![w("x")]),
            Err(PresentationError::ImageCount { .. })
        ));
        assert!(matches!(
            GroupHom::new(src, tgt, vec![w("x"), w("y")]),
            Err(PresentationError::ImageOutsideTarget { .. })
        ));
    }

    #[test]
    fn composite_of_well_defined_homs_is_well_defined() {
        // Z2 -> Z4 (a -> c^2) -> Z2 x Z2 (c -> x), all decided by completions.
        let z2 = pres(&["a"], &["a^2"]);
        let z4 = pres(&["c"], &["c^4"]);
        let klein = pres(&["x", "y"], &["x^2", "y^2", "x^-1 y^-1 x y"]);
        let h1 = GroupHom::new(z2, z4.clone(), vec![w("c^2")]).unwrap();
        let h2 = GroupHom::new(z4.clone(), klein.clone(), vec![w("x")]).unwrap();
        let strat = |p: &Presentation| {
            WordProblemStrategy::RewriteSystem(Arc::new(
                kb_complete(p.relators(), p.generators(), &KbBudget::default()).unwrap(),
            ))
        };
        assert!(check_hom(&h1, &strat(&z4)).unwrap().well_defined);
        assert!(check_hom(&h2, &strat(&klein)).unwrap().well_defined);
        assert!(check_hom(&h1.then(&h2), &strat(&klein)).unwrap().well_defined);
    }

    #[test]
    fn abelianization_examples() {
        let p = pres(&["x", "y"], &["x^-1 y^-1 x y"]);
        assert_eq!(p.abelianization_matrix(), IntMatrix::zeros(1, 2));
        assert_eq!(p.abelian_invariants(), AbelianInvariants::free(2));

        let p = pres(&["A1", "rho1"], &["rho1^2 A1^-1"]);
        assert_eq!(p.abelianization_matrix(), IntMatrix::from_rows(&[vec![-1, 2]]));

        let p = pres(&["a", "b", "c"], &[]);
        let m = p.abelianization_matrix();
        assert_eq!((m.rows(), m.cols()), (0, 3));
        assert_eq!(p.abelian_invariants(), AbelianInvariants::free(3));

        let p = pres(&["a"], &["a^2"]);
        assert_eq!(
            p.abelian_invariants(),
            AbelianInvariants {
                free_rank: 0,
                torsion: vec![BigInt::from(2)]
            }
        );

        let p = pres(&["a", "b"], &["a^2", "b^3"]);
        assert_eq!(p.abelian_invariants().torsion, vec![BigInt::from(6)]);
    }

    #[test]
    fn direct_power_strategy_checks_structure() {
        let f = FreeFactorization::new(
            [(sym("x1[1]"), 1), (sym("x1[2]"), 2)].into(),
            BTreeMap::new(),
        );
        let good = pres(&["x1[1]", "x1[2]"], &["x1[1]^-1 x1[2]^-1 x1[1] x1[2]"]);
        let strat = WordProblemStrategy::DirectPowerOfFree(f);
        strat.check_applies(&good).unwrap();
        assert!(strat.is_trivial(&w("x1[1] x1[2] x1[1]^-1 x1[2]^-1")).unwrap());
        assert!(!strat.is_trivial(&w("x1[1] x1[1]")).unwrap());
        let missing = pres(&["x1[1]", "x1[2]"], &[]);
        assert!(strat.check_applies(&missing).is_err());
        let extra = pres(&["x1[1]", "x1[2]"], &["x1[1]^-1 x1[2]^-1 x1[1] x1[2]", "x1[1]^2"]);
        assert!(strat.check_applies(&extra).is_err());
    }

    #[test]
    fn presentation_json_roundtrip() {
        let p = pres(&["A[1,2]", "rho[2,1]"], &["rho[2,1]^2 A[1,2]^-1"]);
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(
            s,
            r#"{"generators":["A[1,2]","rho[2,1]"],"relators":["rho[2,1] rho[2,1] A[1,2]^-1"],"provenance":"ad hoc"}"#
        );
        let back: Presentation = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
        let bad = r#"{"generators":["a"],"relators":["b"]}"#;
        assert!(serde_json::from_str::<Presentation>(bad).is_err());
    }
}
