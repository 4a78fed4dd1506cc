//! Backward-chaining derivation of the R∞ status of orientable surface braid
//! groups. External theorems enter as cited axioms; statements about small
//! finite or abelian groups are discharged by computation.

use std::collections::HashMap;
use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::enumerate::{todd_coxeter, DEFAULT_MAX_COSETS};
use crate::families::SurfaceSpec;
use crate::matrix::IntMatrix;
use crate::presentations::Presentation;
use crate::twisted::{min_reidemeister_finite, reidemeister_abelian, FiniteGroup, ReidemeisterCount, DEFAULT_AUTOMORPHISM_BOUND};
use crate::words::{GeneratorSymbol, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error("only orientable surfaces are classified")]
    NonOrientableUnsupported,
    #[error("strand count must be >= 1")]
    InvalidStrands,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    F1,
    F2,
    F3,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Flavor {
    Pure,
    Full,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BraidGroupId {
    pub surface: SurfaceSpec,
    pub strands: u32,
    pub flavor: Flavor,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    Yes,
    No,
    Unknown,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Names of the axioms and inference rules of the knowledge base.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Rule {
    HyperbolicAxiom,
    DirectPowerAxiom,
    CharacteristicGoldberg,
    CenterQuotient,
    PantalonAxiom,
    CharacteristicPure,
    SemidirectF2Z,
    SmallGroupIdentification,
    LowStrandIdentity,
    FiniteGroupNo,
    AbelianNo,
    QuotientRule,
    FiniteExtensionRule,
    OpenCase,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum StepKind {
    Axiom,
    Inference,
    Computation,
    Open,
}

/// A machine check attached to a proof step.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Computation {
    pub operation: String,
    pub input: String,
    pub value: ReidemeisterCount,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProofStep {
    pub id: usize,
    pub rule: Rule,
    pub kind: StepKind,
    pub statement: String,
    pub premises: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub citation: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub computation: Option<Computation>,
}

/// Steps in derivation order; every premise refers to an earlier step and
/// the last step carries the conclusion.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct ProofTrace {
    pub steps: Vec<ProofStep>,
}

impl ProofTrace {
    /// Premises point backwards and every leaf is an axiom or computation.
    pub fn is_well_founded(&self) -> bool {
        self.steps.iter().enumerate().all(|(k, s)| {
            s.id == k
                && s.premises.iter().all(|&p| p < k)
                && (!s.premises.is_empty() || matches!(s.kind, StepKind::Axiom | StepKind::Computation | StepKind::Open))
        })
    }

    pub fn rules(&self) -> Vec<Rule> {
        self.steps.iter().map(|s| s.rule).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RinfStatus {
    pub verdict: Verdict,
    pub trace: ProofTrace,
}

pub fn family_of(s: SurfaceSpec) -> Result<Family, ClassifyError> {
    if !s.orientable {
        return Err(ClassifyError::NonOrientableUnsupported);
    }
    Ok(match (s.g, s.p) {
        (0, 0..=2) => Family::F1,
        (1, 0..=1) => Family::F3,
        _ => Family::F2,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Goal {
    Pi1 { g: u32, p: u32 },
    Pure { g: u32, p: u32, n: u32 },
    Full { g: u32, p: u32, n: u32 },
    DirectPower { g: u32, p: u32, n: u32 },
}

impl fmt::Display for Goal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Goal::Pi1 { g, p } => write!(f, "pi1(S_{g},{p})"),
            Goal::Pure { g, p, n } => write!(f, "P_{n}(S_{g},{p})"),
            Goal::Full { g, p, n } => write!(f, "B_{n}(S_{g},{p})"),
            Goal::DirectPower { g, p, n } => write!(f, "pi1(S_{g},{p})^{n}"),
        }
    }
}

fn has(goal: Goal, v: Verdict) -> String {
    match v {
        Verdict::Yes => format!("{goal} has the R-infinity property"),
        Verdict::No => format!("{goal} does not have the R-infinity property"),
        Verdict::Unknown => format!("R-infinity status of {goal} is open"),
    }
}

/// Small groups used as computational witnesses, realized by coset
/// enumeration from presentations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum SmallGroup {
    Trivial,
    Z2,
    Z3RtimesZ4,
}

impl SmallGroup {
    fn name(self) -> &'static str {
        match self {
            SmallGroup::Trivial => "the trivial group",
            SmallGroup::Z2 => "Z_2",
            SmallGroup::Z3RtimesZ4 => "Z_3 x| Z_4",
        }
    }

    fn presentation(self) -> Presentation {
        let a = GeneratorSymbol::plain("a", 0);
        let b = GeneratorSymbol::plain("b", 0);
        let (gens, rels): (Vec<GeneratorSymbol>, Vec<Word>) = match self {
            SmallGroup::Trivial => (vec![], vec![]),
            SmallGroup::Z2 => (vec![a.clone()], vec![Word::power(&a, 2)]),
            SmallGroup::Z3RtimesZ4 => {
                let conj = Word::product(&[Word::power(&b, -1), Word::gen(&a), Word::gen(&b), Word::gen(&a)]);
                (vec![a.clone(), b.clone()], vec![Word::power(&a, 3), Word::power(&b, 4), conj])
            }
        };
        Presentation::new(gens, rels, self.name()).expect("fixture presentation")
    }

    fn table(self) -> &'static FiniteGroup {
        static TABLES: OnceLock<[FiniteGroup; 3]> = OnceLock::new();
        let tables = TABLES.get_or_init(|| {
            [SmallGroup::Trivial, SmallGroup::Z2, SmallGroup::Z3RtimesZ4].map(|s| {
                todd_coxeter(&s.presentation(), DEFAULT_MAX_COSETS)
                    .and_then(|t| t.to_finite_group())
                    .expect("small fixture groups enumerate")
            })
        });
        &tables[self as usize]
    }

    fn min_reidemeister(self) -> ReidemeisterCount {
        static MINS: OnceLock<[ReidemeisterCount; 3]> = OnceLock::new();
        let mins = MINS.get_or_init(|| {
            [SmallGroup::Trivial, SmallGroup::Z2, SmallGroup::Z3RtimesZ4].map(|s| {
                min_reidemeister_finite(s.table(), DEFAULT_AUTOMORPHISM_BOUND)
                    .expect("fixture groups are small")
                    .0
            })
        });
        mins[self as usize].clone()
    }
}

/// A free abelian group and an automorphism with finite Reidemeister number.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum AbelianWitness {
    Z,
    Z2,
}

impl AbelianWitness {
    fn matrix(self) -> IntMatrix {
        match self {
            AbelianWitness::Z => IntMatrix::from_rows(&[vec![-1]]),
            AbelianWitness::Z2 => IntMatrix::from_rows(&[vec![2, 1], vec![1, 1]]),
        }
    }

    fn name(self) -> &'static str {
        match self {
            AbelianWitness::Z => "Z",
            AbelianWitness::Z2 => "Z^2",
        }
    }
}

/// What a small case is isomorphic to, with the source of the identification.
enum Identified {
    Finite(SmallGroup, &'static str),
    Abelian(AbelianWitness, &'static str),
}

fn identify(goal: Goal) -> Option<Identified> {
    use Identified::*;
    match goal {
        Goal::Pi1 { g: 0, p: 0 } => Some(Finite(SmallGroup::Trivial, "the sphere is simply connected")),
        Goal::Pi1 { g: 0, p: 1 } => Some(Finite(SmallGroup::Trivial, "the disc is contractible")),
        Goal::Pi1 { g: 0, p: 2 } => Some(Abelian(AbelianWitness::Z, "the annulus retracts onto a circle")),
        Goal::Pi1 { g: 1, p: 0 } => Some(Abelian(AbelianWitness::Z2, "the torus is a product of two circles")),
        Goal::Pure { g: 0, p: 0, n: 2 } => Some(Finite(SmallGroup::Trivial, "[FvB]")),
        Goal::Pure { g: 0, p: 0, n: 3 } => Some(Finite(SmallGroup::Z2, "[FvB]")),
        Goal::Pure { g: 0, p: 1, n: 2 } => Some(Abelian(AbelianWitness::Z, "classical Artin presentation [A2]")),
        Goal::Full { g: 0, p: 0, n: 2 } => Some(Finite(SmallGroup::Z2, "[FvB]")),
        Goal::Full { g: 0, p: 0, n: 3 } => Some(Finite(SmallGroup::Z3RtimesZ4, "[FvB]")),
        Goal::Full { g: 0, p: 1, n: 2 } => Some(Abelian(AbelianWitness::Z, "classical Artin presentation [A2]")),
        _ => None,
    }
}

struct Deriver {
    steps: Vec<ProofStep>,
    memo: HashMap<Goal, (Verdict, usize)>,
}

impl Deriver {
    fn push(
        &mut self,
        rule: Rule,
        kind: StepKind,
        statement: String,
        premises: Vec<usize>,
        citation: Option<&str>,
        computation: Option<Computation>,
    ) -> usize {
        let id = self.steps.len();
        self.steps.push(ProofStep {
            id,
            rule,
            kind,
            statement,
            premises,
            citation: citation.map(str::to_string),
            computation,
        });
        id
    }

    fn axiom(&mut self, rule: Rule, statement: String, citation: &str) -> usize {
        self.push(rule, StepKind::Axiom, statement, vec![], Some(citation), None)
    }

    fn infer(&mut self, rule: Rule, statement: String, premises: Vec<usize>, citation: Option<&str>) -> usize {
        self.push(rule, StepKind::Inference, statement, premises, citation, None)
    }

    fn derive(&mut self, goal: Goal) -> (Verdict, usize) {
        if let Some(&hit) = self.memo.get(&goal) {
            return hit;
        }
        let out = self.derive_fresh(goal);
        self.memo.insert(goal, out);
        out
    }

    fn derive_identified(&mut self, goal: Goal, id: Identified) -> (Verdict, usize) {
        match id {
            Identified::Finite(group, source) => {
                let iso = self.axiom(
                    Rule::SmallGroupIdentification,
                    format!("{goal} is isomorphic to {}", group.name()),
                    source,
                );
                let value = group.min_reidemeister();
                let check = self.push(
                    Rule::FiniteGroupNo,
                    StepKind::Computation,
                    format!("{} has an automorphism with R = {value}", group.name()),
                    vec![],
                    None,
                    Some(Computation {
                        operation: "min_reidemeister_finite".into(),
                        input: format!("coset enumeration of {}", group.presentation()),
                        value,
                    }),
                );
                let step = self.infer(Rule::FiniteGroupNo, has(goal, Verdict::No), vec![iso, check], None);
                (Verdict::No, step)
            }
            Identified::Abelian(witness, source) => {
                let iso = self.axiom(
                    Rule::SmallGroupIdentification,
                    format!("{goal} is isomorphic to {}", witness.name()),
                    source,
                );
                let m = witness.matrix();
                let value = reidemeister_abelian(&m).expect("square witness matrix");
                debug_assert!(!value.is_infinite());
                let check = self.push(
                    Rule::AbelianNo,
                    StepKind::Computation,
                    format!("the automorphism {m} of {} has R = {value}", witness.name()),
                    vec![],
                    None,
                    Some(Computation {
                        operation: "reidemeister_abelian".into(),
                        input: m.to_string(),
                        value,
                    }),
                );
                let step = self.infer(Rule::AbelianNo, has(goal, Verdict::No), vec![iso, check], None);
                (Verdict::No, step)
            }
        }
    }

    fn open(&mut self, goal: Goal) -> (Verdict, usize) {
        let step = self.push(
            Rule::OpenCase,
            StepKind::Open,
            has(goal, Verdict::Unknown),
            vec![],
            Some("torus and once-punctured torus with n >= 2 are not settled"),
            None,
        );
        (Verdict::Unknown, step)
    }

    /// `G/N` has R∞ and `N` is characteristic, so `G` has R∞.
    fn quotient(&mut self, goal: Goal, char_step: usize, quotient: Goal) -> (Verdict, usize) {
        let (v, q) = self.derive(quotient);
        if v != Verdict::Yes {
            return self.open(goal);
        }
        let step = self.infer(
            Rule::QuotientRule,
            has(goal, Verdict::Yes),
            vec![char_step, q],
            Some("R(a) >= R(a mod N) for an automorphism a preserving N"),
        );
        (Verdict::Yes, step)
    }

    fn derive_fresh(&mut self, goal: Goal) -> (Verdict, usize) {
        if let Some(id) = identify(goal) {
            return self.derive_identified(goal, id);
        }
        match goal {
            Goal::Pi1 { g, p } => {
                if 2 * g as i64 + p as i64 > 2 {
                    let step = self.axiom(
                        Rule::HyperbolicAxiom,
                        format!("{goal} is non-elementary hyperbolic (Euler characteristic {} < 0), so it has the R-infinity property", 2 - 2 * g as i64 - p as i64),
                        "[LL], [F]",
                    );
                    (Verdict::Yes, step)
                } else {
                    unreachable!("every surface with non-negative Euler characteristic is identified")
                }
            }
            Goal::DirectPower { g, p, .. } => {
                let (v, base) = self.derive(Goal::Pi1 { g, p });
                if v != Verdict::Yes {
                    return self.open(goal);
                }
                let ax = self.axiom(
                    Rule::DirectPowerAxiom,
                    format!("{goal} has the R-infinity property whenever pi1(S_{g},{p}) does"),
                    "[S, Cor. 4.5]",
                );
                let step = self.infer(Rule::DirectPowerAxiom, has(goal, Verdict::Yes), vec![base, ax], None);
                (Verdict::Yes, step)
            }
            Goal::Pure { g, p, n } | Goal::Full { g, p, n } if n == 1 => {
                let (v, base) = self.derive(Goal::Pi1 { g, p });
                let step = self.infer(
                    Rule::LowStrandIdentity,
                    format!("{goal} equals pi1(S_{g},{p}); {}", has(goal, v)),
                    vec![base],
                    None,
                );
                (v, step)
            }
            Goal::Pure { g, p, n } => {
                let fam = family_of(SurfaceSpec::orientable(g, p)).expect("orientable");
                match (fam, g, p) {
                    (Family::F3, _, _) => self.open(goal),
                    (Family::F1, 0, 0) => {
                        let ax = self.axiom(
                            Rule::CenterQuotient,
                            format!("{goal} modulo its center Z_2 is P_{}(S_0,3), and the center is characteristic", n - 3),
                            "[GG1, Thm 4], [PR, Prop. 1.6]",
                        );
                        self.quotient(goal, ax, Goal::Pure { g: 0, p: 3, n: n - 3 })
                    }
                    (Family::F1, 0, 1) => {
                        let ax = self.axiom(
                            Rule::CenterQuotient,
                            format!("{goal} modulo its center is P_{}(S_0,3), and the center is characteristic", n - 2),
                            "[GG1, Thm 4], [PR, Prop. 1.6]",
                        );
                        self.quotient(goal, ax, Goal::Pure { g: 0, p: 3, n: n - 2 })
                    }
                    (Family::F1, _, _) => {
                        let ax = self.axiom(
                            Rule::CenterQuotient,
                            format!("{goal} modulo its center is P_{}(S_0,3), and the center is characteristic", n - 1),
                            "[PR, Prop. 4.1], [PR, Prop. 1.6]",
                        );
                        self.quotient(goal, ax, Goal::Pure { g: 0, p: 3, n: n - 1 })
                    }
                    (Family::F2, 0, 3) => {
                        let step = self.axiom(
                            Rule::PantalonAxiom,
                            format!("{goal} is the pure Artin braid group on {} strands modulo its center, which has the R-infinity property", n + 2),
                            "[DGO]",
                        );
                        (Verdict::Yes, step)
                    }
                    (Family::F2, _, _) => {
                        let ax = self.axiom(
                            Rule::CharacteristicGoldberg,
                            format!("the normal closure of the Artin pure braids in {goal} is characteristic with quotient pi1(S_{g},{p})^{n}"),
                            "[G], [GG3]; exactness replayed for punctured surfaces by goldberg-verify",
                        );
                        self.quotient(goal, ax, Goal::DirectPower { g, p, n })
                    }
                }
            }
            Goal::Full { g, p, n } => {
                let fam = family_of(SurfaceSpec::orientable(g, p)).expect("orientable");
                if fam == Family::F3 {
                    return self.open(goal);
                }
                if (g, p, n) == (0, 2, 2) {
                    let step = self.axiom(
                        Rule::SemidirectF2Z,
                        format!("{goal} is F_2 x| Z with theta(x) = y, theta(y) = y^-1 x y, and such products have R-infinity"),
                        "[CrPa, Prop. 2.1], [FGW, Thm 4.4]",
                    );
                    return (Verdict::Yes, step);
                }
                let (v, pure) = self.derive(Goal::Pure { g, p, n });
                if v != Verdict::Yes {
                    return self.open(goal);
                }
                let ax = self.axiom(
                    Rule::CharacteristicPure,
                    format!("P_{n}(S_{g},{p}) is characteristic in {goal} with finite quotient S_{n}"),
                    "[A, Thm 1.5]",
                );
                let step = self.infer(Rule::FiniteExtensionRule, has(goal, Verdict::Yes), vec![ax, pure], Some("[MS, Lemma 6]"));
                (Verdict::Yes, step)
            }
        }
    }
}

/// Derives the verdict for an orientable surface braid group.
pub fn classify(id: BraidGroupId) -> Result<RinfStatus, ClassifyError> {
    family_of(id.surface)?;
    if id.strands == 0 {
        return Err(ClassifyError::InvalidStrands);
    }
    let (g, p, n) = (id.surface.g, id.surface.p, id.strands);
    let goal = match id.flavor {
        Flavor::Pure => Goal::Pure { g, p, n },
        Flavor::Full => Goal::Full { g, p, n },
    };
    let mut d = Deriver {
        steps: Vec::new(),
        memo: HashMap::new(),
    };
    let (verdict, _) = d.derive(goal);
    Ok(RinfStatus {
        verdict,
        trace: ProofTrace { steps: d.steps },
    })
}

/// Verdict of the fundamental group alone.
pub fn classify_pi1(surface: SurfaceSpec) -> Result<RinfStatus, ClassifyError> {
    classify(BraidGroupId {
        surface,
        strands: 1,
        flavor: Flavor::Pure,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TableRow {
    pub g: u32,
    pub p: u32,
    pub family: Family,
    pub pi1: Verdict,
    /// Entry `k` is for `n = k + 1`.
    pub pure: Vec<Verdict>,
    pub full: Vec<Verdict>,
}

/// Verdicts for every orientable `(g, p)` in the grid and `1 <= n <= max_n`.
pub fn table(max_g: u32, max_p: u32, max_n: u32) -> Vec<TableRow> {
    let mut rows = Vec::new();
    for g in 0..=max_g {
        for p in 0..=max_p {
            let surface = SurfaceSpec::orientable(g, p);
            let verdict = |n, flavor| {
                classify(BraidGroupId { surface, strands: n, flavor })
                    .expect("orientable surface")
                    .verdict
            };
            rows.push(TableRow {
                g,
                p,
                family: family_of(surface).expect("orientable"),
                pi1: verdict(1, Flavor::Pure),
                pure: (1..=max_n).map(|n| verdict(n, Flavor::Pure)).collect(),
                full: (1..=max_n).map(|n| verdict(n, Flavor::Full)).collect(),
            });
        }
    }
    rows
}
