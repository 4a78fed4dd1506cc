//! Shortlex Knuth–Bendix completion for group presentations.
//!
//! The monoid alphabet is every generator followed by its formal inverse.
//! Cancellation rules `x x^-1 -> 1` and `x^-1 x -> 1` are seeded, each
//! relator `r` enters as the equation `r = 1`, and pending equations are
//! processed smallest-first so that completion is deterministic.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::words::{GeneratorSymbol, Letter, Word};

type Code = u32;

/// Which limit stopped a completion.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BudgetDimension {
    MaxRules,
    MaxRuleLength,
    MaxSteps,
}

impl fmt::Display for BudgetDimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BudgetDimension::MaxRules => "max_rules",
            BudgetDimension::MaxRuleLength => "max_rule_length",
            BudgetDimension::MaxSteps => "max_steps",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RewriteError {
    #[error("completion exhausted its {dimension} budget after {steps} steps with {rules} rules")]
    Exhausted {
        dimension: BudgetDimension,
        rules: usize,
        steps: u64,
    },
    #[error("rewrite system is not confluent")]
    NotConfluent,
    #[error("symbol {0} is outside the rewrite alphabet")]
    UnknownSymbol(String),
    #[error("generator {0} is listed twice in the ordering")]
    DuplicateGenerator(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct KbBudget {
    pub max_rules: usize,
    pub max_rule_length: usize,
    pub max_steps: u64,
}

impl Default for KbBudget {
    fn default() -> Self {
        KbBudget {
            max_rules: 50_000,
            max_rule_length: 64,
            max_steps: 5_000_000,
        }
    }
}

fn shortlex(a: &[Code], b: &[Code]) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

/// Trie over reversed left-hand sides, for suffix matching while rewriting.
#[derive(Clone, Debug, Default)]
struct SuffixTrie {
    nodes: Vec<TrieNode>,
}

#[derive(Clone, Debug, Default)]
struct TrieNode {
    next: BTreeMap<Code, usize>,
    rule: Option<usize>,
}

impl SuffixTrie {
    fn new() -> Self {
        SuffixTrie {
            nodes: vec![TrieNode::default()],
        }
    }

    fn insert(&mut self, lhs: &[Code], rule: usize) {
        let mut at = 0;
        for &c in lhs.iter().rev() {
            at = match self.nodes[at].next.get(&c) {
                Some(&n) => n,
                None => {
                    self.nodes.push(TrieNode::default());
                    let n = self.nodes.len() - 1;
                    self.nodes[at].next.insert(c, n);
                    n
                }
            };
        }
        self.nodes[at].rule = Some(rule);
    }

    fn remove(&mut self, lhs: &[Code]) {
        let mut at = 0;
        for &c in lhs.iter().rev() {
            match self.nodes[at].next.get(&c) {
                Some(&n) => at = n,
                None => return,
            }
        }
        self.nodes[at].rule = None;
    }

    /// Rule whose left side is a suffix of `buf`, if any.
    fn match_suffix(&self, buf: &[Code]) -> Option<usize> {
        let mut at = 0;
        for &c in buf.iter().rev() {
            at = *self.nodes[at].next.get(&c)?;
            if let Some(r) = self.nodes[at].rule {
                return Some(r);
            }
        }
        None
    }
}

#[derive(Clone, Debug)]
struct Rules {
    lhs: Vec<Vec<Code>>,
    rhs: Vec<Vec<Code>>,
    live: Vec<bool>,
    live_count: usize,
    trie: SuffixTrie,
}

impl Rules {
    fn new() -> Self {
        Rules {
            lhs: Vec::new(),
            rhs: Vec::new(),
            live: Vec::new(),
            live_count: 0,
            trie: SuffixTrie::new(),
        }
    }

    fn live_count(&self) -> usize {
        self.live_count
    }

    fn live_ids(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.lhs.len()).filter(|&i| self.live[i])
    }

    fn push(&mut self, lhs: Vec<Code>, rhs: Vec<Code>) -> usize {
        let id = self.lhs.len();
        self.trie.insert(&lhs, id);
        self.lhs.push(lhs);
        self.rhs.push(rhs);
        self.live.push(true);
        self.live_count += 1;
        id
    }

    fn kill(&mut self, id: usize) {
        self.live[id] = false;
        self.live_count -= 1;
        self.trie.remove(&self.lhs[id]);
    }

    /// Rewrites to an irreducible word, counting rule applications.
    fn reduce(&self, word: &[Code], steps: &mut u64) -> Vec<Code> {
        let mut out: Vec<Code> = Vec::with_capacity(word.len());
        let mut input: Vec<Code> = word.iter().rev().copied().collect();
        while let Some(c) = input.pop() {
            out.push(c);
            if let Some(r) = self.trie.match_suffix(&out) {
                *steps += 1;
                out.truncate(out.len() - self.lhs[r].len());
                input.extend(self.rhs[r].iter().rev());
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Equation {
    big: Vec<Code>,
    small: Vec<Code>,
}

impl Equation {
    fn new(a: Vec<Code>, b: Vec<Code>) -> Self {
        if shortlex(&a, &b) == Ordering::Less {
            Equation { big: b, small: a }
        } else {
            Equation { big: a, small: b }
        }
    }
}

impl Ord for Equation {
    fn cmp(&self, other: &Self) -> Ordering {
        shortlex(&self.big, &other.big).then_with(|| shortlex(&self.small, &other.small))
    }
}

impl PartialOrd for Equation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Overlaps of a suffix of `lhs[a]` with a prefix of `lhs[b]`, resolved
/// both ways and reduced; only non-trivial pairs are queued.
fn critical_pairs(rules: &Rules, a: usize, b: usize, steps: &mut u64, out: &mut BTreeSet<Equation>) {
    let (l1, l2) = (&rules.lhs[a], &rules.lhs[b]);
    for k in 1..l1.len().min(l2.len()) {
        if l1[l1.len() - k..] == l2[..k] {
            let mut left = rules.rhs[a].clone();
            left.extend_from_slice(&l2[k..]);
            let mut right = l1[..l1.len() - k].to_vec();
            right.extend_from_slice(&rules.rhs[b]);
            let left = rules.reduce(&left, steps);
            let right = rules.reduce(&right, steps);
            if left != right {
                out.insert(Equation::new(left, right));
            }
        }
    }
}

/// A shortlex rewriting system for a group presentation.
#[derive(Clone, Debug)]
pub struct RewriteSystem {
    alphabet: Vec<GeneratorSymbol>,
    codes: BTreeMap<GeneratorSymbol, Code>,
    rules: Rules,
    confluent: bool,
    relators: Vec<Word>,
}

impl RewriteSystem {
    /// Generators in precedence order; a generator precedes its inverse.
    pub fn alphabet(&self) -> &[GeneratorSymbol] {
        &self.alphabet
    }

    pub fn is_confluent(&self) -> bool {
        self.confluent
    }

    /// The relators the system was completed from.
    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn rule_count(&self) -> usize {
        self.rules.live_count()
    }

    /// Live rules as letter strings, sorted by left-hand side in shortlex
    /// order. Left sides such as `x x^-1` are not reduced words, so rules are
    /// not expressed as [`Word`]s.
    pub fn rules(&self) -> Vec<(Vec<Letter>, Vec<Letter>)> {
        let mut ids: Vec<_> = self.rules.live_ids().collect();
        ids.sort_by(|&a, &b| shortlex(&self.rules.lhs[a], &self.rules.lhs[b]));
        ids.into_iter()
            .map(|i| (self.letters(&self.rules.lhs[i]), self.letters(&self.rules.rhs[i])))
            .collect()
    }

    /// Rules rendered in the word grammar, `1` for an empty side.
    pub fn rules_rendered(&self) -> Vec<(String, String)> {
        let render = |ls: &[Letter]| {
            if ls.is_empty() {
                "1".to_string()
            } else {
                ls.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
            }
        };
        self.rules()
            .iter()
            .map(|(l, r)| (render(l), render(r)))
            .collect()
    }

    fn letters(&self, codes: &[Code]) -> Vec<Letter> {
        codes
            .iter()
            .map(|&c| Letter::new(self.alphabet[(c / 2) as usize].clone(), c % 2 == 1))
            .collect()
    }

    fn encode(&self, w: &Word) -> Result<Vec<Code>, RewriteError> {
        w.letters()
            .iter()
            .map(|l| {
                self.codes
                    .get(&l.symbol)
                    .map(|c| c * 2 + u32::from(l.inverse))
                    .ok_or_else(|| RewriteError::UnknownSymbol(l.symbol.to_string()))
            })
            .collect()
    }

    /// Normal forms never contain cancelling pairs, so this is lossless on them.
    fn decode(&self, codes: &[Code]) -> Word {
        Word::reduce(self.letters(codes))
    }

    /// Normal form together with the number of rewrite steps taken.
    pub fn normal_form_counted(&self, w: &Word) -> Result<(Word, u64), RewriteError> {
        if !self.confluent {
            return Err(RewriteError::NotConfluent);
        }
        let mut steps = 0;
        let nf = self.rules.reduce(&self.encode(w)?, &mut steps);
        Ok((self.decode(&nf), steps))
    }

    pub fn normal_form(&self, w: &Word) -> Result<Word, RewriteError> {
        self.normal_form_counted(w).map(|(nf, _)| nf)
    }

    pub fn words_equal(&self, u: &Word, v: &Word) -> Result<bool, RewriteError> {
        Ok(self.normal_form(u)? == self.normal_form(v)?)
    }

    /// Every critical pair of the live rules joins.
    fn verify_local_confluence(&self) -> bool {
        let ids: Vec<_> = self.rules.live_ids().collect();
        let mut unresolved = BTreeSet::new();
        let mut steps = 0;
        for &a in &ids {
            for &b in &ids {
                critical_pairs(&self.rules, a, b, &mut steps, &mut unresolved);
            }
        }
        unresolved.is_empty()
    }
}

impl Serialize for RewriteSystem {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let rules: Vec<[String; 2]> = self
            .rules_rendered()
            .into_iter()
            .map(|(l, r)| [l, r])
            .collect();
        let mut st = serializer.serialize_struct("RewriteSystem", 3)?;
        st.serialize_field("ordering", &self.alphabet)?;
        st.serialize_field("confluent", &self.confluent)?;
        st.serialize_field("rules", &rules)?;
        st.end()
    }
}

/// Completion with the default symbol order on `generators`.
pub fn kb_complete(
    relators: &[Word],
    generators: &[GeneratorSymbol],
    budget: &KbBudget,
) -> Result<RewriteSystem, RewriteError> {
    let mut ordering = generators.to_vec();
    ordering.sort();
    ordering.dedup();
    kb_complete_ordered(relators, &ordering, budget)
}

/// Completion with an explicit generator precedence.
pub fn kb_complete_ordered(
    relators: &[Word],
    ordering: &[GeneratorSymbol],
    budget: &KbBudget,
) -> Result<RewriteSystem, RewriteError> {
    let mut codes = BTreeMap::new();
    for (n, g) in ordering.iter().enumerate() {
        if codes.insert(g.clone(), n as Code).is_some() {
            return Err(RewriteError::DuplicateGenerator(g.to_string()));
        }
    }
    let mut sorted_relators = relators.to_vec();
    sorted_relators.sort();
    let mut rs = RewriteSystem {
        alphabet: ordering.to_vec(),
        codes,
        rules: Rules::new(),
        confluent: false,
        relators: sorted_relators,
    };

    let mut pending = BTreeSet::new();
    for g in 0..ordering.len() as Code {
        pending.insert(Equation::new(vec![2 * g, 2 * g + 1], vec![]));
        pending.insert(Equation::new(vec![2 * g + 1, 2 * g], vec![]));
    }
    for r in &rs.relators {
        pending.insert(Equation::new(rs.encode(r)?, vec![]));
    }

    let mut steps: u64 = 0;
    let exhausted = |dimension, rules: &Rules, steps| RewriteError::Exhausted {
        dimension,
        rules: rules.live_count(),
        steps,
    };

    while let Some(eq) = pending.pop_first() {
        steps += 1;
        let a = rs.rules.reduce(&eq.big, &mut steps);
        let b = rs.rules.reduce(&eq.small, &mut steps);
        if steps > budget.max_steps {
            return Err(exhausted(BudgetDimension::MaxSteps, &rs.rules, steps));
        }
        if a == b {
            continue;
        }
        let Equation { big: lhs, small: rhs } = Equation::new(a, b);
        if lhs.len() > budget.max_rule_length {
            return Err(exhausted(BudgetDimension::MaxRuleLength, &rs.rules, steps));
        }

        // Rules whose left side contains the new one go back to the queue.
        let contains = |hay: &[Code]| hay.windows(lhs.len()).any(|win| win == lhs.as_slice());
        let displaced: Vec<_> = rs.rules.live_ids().filter(|&i| contains(&rs.rules.lhs[i])).collect();
        for i in displaced {
            rs.rules.kill(i);
            pending.insert(Equation::new(rs.rules.lhs[i].clone(), rs.rules.rhs[i].clone()));
        }

        let id = rs.rules.push(lhs, rhs);
        if rs.rules.live_count() > budget.max_rules {
            return Err(exhausted(BudgetDimension::MaxRules, &rs.rules, steps));
        }
        let live: Vec<_> = rs.rules.live_ids().collect();
        for other in live {
            critical_pairs(&rs.rules, id, other, &mut steps, &mut pending);
            if other != id {
                critical_pairs(&rs.rules, other, id, &mut steps, &mut pending);
            }
        }
    }

    // Interreduce right-hand sides.
    let live: Vec<_> = rs.rules.live_ids().collect();
    for i in live {
        let rhs = rs.rules.reduce(&rs.rules.rhs[i].clone(), &mut steps);
        rs.rules.rhs[i] = rhs;
    }
    rs.confluent = rs.verify_local_confluence();
    Ok(rs)
}
