//! Twisted conjugacy: `x ~ z x f(z)^-1`.
//!
//! Exact counts on finite groups (orbit partition and Burnside averaging),
//! the cokernel formula on free abelian groups, lower bounds through the
//! abelianization, and a bounded exploration on free groups.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Deserializer};
use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

use crate::matrix::{smith_normal_form, IntMatrix};
use crate::presentations::Presentation;
use crate::words::{GeneratorSymbol, Letter, Word};

pub const DEFAULT_AUTOMORPHISM_BOUND: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TwistedError {
    #[error("not a group: {0}")]
    NotAGroup(String),
    #[error("map is not a homomorphism: {0}")]
    NotHomomorphism(String),
    #[error("group of order {order} exceeds the bound {bound}")]
    TooLarge { order: usize, bound: usize },
    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
    #[error("not supported: {0}")]
    NotSupported(String),
    #[error("subset is not a normal subgroup: {0}")]
    NotNormal(String),
    #[error("endomorphism does not preserve the subgroup")]
    NotInvariant,
    #[error("exploration budget too large: {0}")]
    BudgetTooLarge(String),
}

/// Disjoint-set forest with union by smaller root index, so that the
/// representative of every class is its least element.
#[derive(Clone, Debug)]
pub struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut at = x;
        while self.parent[at] != root {
            let next = self.parent[at];
            self.parent[at] = root;
            at = next;
        }
        root
    }

    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (keep, drop) = (ra.min(rb), ra.max(rb));
        self.parent[drop] = keep;
        true
    }

    /// Classes sorted by least element, each sorted ascending.
    pub fn classes(&mut self) -> Vec<Vec<usize>> {
        let mut by_root: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for x in 0..self.parent.len() {
            let r = self.find(x);
            by_root.entry(r).or_default().push(x);
        }
        by_root.into_values().collect()
    }

    pub fn count(&mut self) -> usize {
        (0..self.parent.len()).filter(|&x| self.find(x) == x).count()
    }
}

/// A group given by its multiplication table: `table[a][b] = a * b`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<Vec<usize>>,
    identity: usize,
    #[serde(skip)]
    inverses: Vec<usize>,
}

#[derive(Deserialize)]
struct RawGroup {
    table: Vec<Vec<usize>>,
    identity: usize,
    order: Option<usize>,
}

impl<'de> Deserialize<'de> for FiniteGroup {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = RawGroup::deserialize(deserializer)?;
        if raw.order.is_some_and(|o| o != raw.table.len()) {
            return Err(de::Error::custom("order does not match the table size"));
        }
        FiniteGroup::new(raw.table, raw.identity).map_err(de::Error::custom)
    }
}

impl FiniteGroup {
    /// Checks closure, identity, inverses and associativity. Associativity
    /// uses Light's test against a generating set, which is exact.
    pub fn new(table: Vec<Vec<usize>>, identity: usize) -> Result<Self, TwistedError> {
        let n = table.len();
        let fail = |m: String| Err(TwistedError::NotAGroup(m));
        if n == 0 {
            return fail("empty table".into());
        }
        if identity >= n {
            return fail(format!("identity {identity} out of range"));
        }
        for (a, row) in table.iter().enumerate() {
            if row.len() != n {
                return fail(format!("row {a} has length {}", row.len()));
            }
            if let Some(&bad) = row.iter().find(|&&x| x >= n) {
                return fail(format!("entry {bad} out of range"));
            }
        }
        for (a, row) in table.iter().enumerate() {
            if table[identity][a] != a || row[identity] != a {
                return fail(format!("{identity} is not an identity for {a}"));
            }
        }
        let mut inverses = vec![usize::MAX; n];
        for a in 0..n {
            match (0..n).find(|&b| table[a][b] == identity) {
                Some(b) if table[b][a] == identity => inverses[a] = b,
                _ => return fail(format!("{a} has no two-sided inverse")),
            }
        }
        let g = FiniteGroup {
            order: n,
            table,
            identity,
            inverses,
        };
        let gens = g.greedy_generators();
        for &c in &gens {
            for a in 0..n {
                for b in 0..n {
                    if g.mul(g.mul(a, b), c) != g.mul(a, g.mul(b, c)) {
                        return fail(format!("({a}*{b})*{c} != {a}*({b}*{c})"));
                    }
                }
            }
        }
        Ok(g)
    }

    pub fn trivial() -> Self {
        FiniteGroup::new(vec![vec![0]], 0).expect("trivial group")
    }

    pub fn cyclic(n: usize) -> Self {
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        FiniteGroup::new(table, 0).expect("cyclic group")
    }

    /// `G x H` with element `(g, h)` numbered `g * |H| + h`.
    pub fn product(&self, other: &FiniteGroup) -> Self {
        let m = other.order;
        let n = self.order * m;
        let table = (0..n)
            .map(|x| {
                (0..n)
                    .map(|y| self.mul(x / m, y / m) * m + other.mul(x % m, y % m))
                    .collect()
            })
            .collect();
        FiniteGroup::new(table, self.identity * m + other.identity).expect("product of groups")
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a]
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// Elements reachable from the identity by right multiplication with `gens`.
    pub fn generated(&self, gens: &[usize]) -> Vec<bool> {
        let mut seen = vec![false; self.order];
        seen[self.identity] = true;
        let mut stack = vec![self.identity];
        while let Some(x) = stack.pop() {
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        seen
    }

    fn greedy_generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut span = self.generated(&gens);
        for a in 0..self.order {
            if !span[a] {
                gens.push(a);
                span = self.generated(&gens);
            }
        }
        gens
    }

    /// Lexicographically first generating sequence of minimum length.
    pub fn minimal_generating_sequence(&self) -> Vec<usize> {
        let greedy = self.greedy_generators();
        for k in 0..greedy.len() {
            let mut pick: Vec<usize> = (0..k).collect();
            loop {
                if self.generated(&pick).iter().all(|&b| b) {
                    return pick;
                }
                if !next_combination(&mut pick, self.order) {
                    break;
                }
            }
        }
        greedy
    }

    pub fn conjugacy_class_count(&self) -> usize {
        let mut uf = UnionFind::new(self.order);
        for g in 0..self.order {
            for x in 0..self.order {
                uf.union(x, self.mul(self.mul(g, x), self.inv(g)));
            }
        }
        uf.count()
    }
}

/// Advances `pick` to the next increasing tuple over `0..n`.
fn next_combination(pick: &mut [usize], n: usize) -> bool {
    let k = pick.len();
    for i in (0..k).rev() {
        if pick[i] < n - (k - i) {
            pick[i] += 1;
            for t in i + 1..k {
                pick[t] = pick[t - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// An endomorphism of a finite group, given on every element.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiniteEndo {
    images: Vec<usize>,
}

impl FiniteEndo {
    pub fn new(group: &FiniteGroup, images: Vec<usize>) -> Result<Self, TwistedError> {
        let n = group.order();
        if images.len() != n || images.iter().any(|&x| x >= n) {
            return Err(TwistedError::NotHomomorphism(format!("need {n} images in range")));
        }
        for a in 0..n {
            for b in 0..n {
                if images[group.mul(a, b)] != group.mul(images[a], images[b]) {
                    return Err(TwistedError::NotHomomorphism(format!("f({a}*{b}) != f({a})*f({b})")));
                }
            }
        }
        Ok(FiniteEndo { images })
    }

    pub fn identity(group: &FiniteGroup) -> Self {
        FiniteEndo {
            images: (0..group.order()).collect(),
        }
    }

    /// Inner automorphism `x -> g x g^-1`.
    pub fn conjugation(group: &FiniteGroup, g: usize) -> Self {
        FiniteEndo {
            images: (0..group.order())
                .map(|x| group.mul(group.mul(g, x), group.inv(g)))
                .collect(),
        }
    }

    pub fn apply(&self, x: usize) -> usize {
        self.images[x]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &FiniteEndo) -> FiniteEndo {
        FiniteEndo {
            images: other.images.iter().map(|&x| self.images[x]).collect(),
        }
    }

    pub fn is_bijective(&self) -> bool {
        let mut hit = vec![false; self.images.len()];
        self.images.iter().all(|&x| !std::mem::replace(&mut hit[x], true))
    }
}

/// A Reidemeister number: a positive integer or infinity.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ReidemeisterCount {
    Finite(BigUint),
    Infinite,
}

impl ReidemeisterCount {
    pub fn finite(n: u64) -> Self {
        ReidemeisterCount::Finite(BigUint::from(n))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ReidemeisterCount::Infinite)
    }

    pub fn as_u64(&self) -> Option<u64> {
        match self {
            ReidemeisterCount::Finite(n) => n.to_u64(),
            ReidemeisterCount::Infinite => None,
        }
    }
}

impl fmt::Display for ReidemeisterCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReidemeisterCount::Finite(n) => write!(f, "{n}"),
            ReidemeisterCount::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for ReidemeisterCount {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            ReidemeisterCount::Infinite => serializer.serialize_str("inf"),
            ReidemeisterCount::Finite(n) => match n.to_u64() {
                Some(v) => serializer.serialize_u64(v),
                None => serializer.serialize_str(&n.to_string()),
            },
        }
    }
}

impl<'de> Deserialize<'de> for ReidemeisterCount {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(u64),
            Text(String),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Num(0) => Err(de::Error::custom("Reidemeister numbers are positive")),
            Raw::Num(n) => Ok(ReidemeisterCount::finite(n)),
            Raw::Text(s) if s == "inf" => Ok(ReidemeisterCount::Infinite),
            Raw::Text(s) => s
                .parse::<BigUint>()
                .ok()
                .filter(|n| !n.is_zero())
                .map(ReidemeisterCount::Finite)
                .ok_or_else(|| de::Error::custom(format!("bad Reidemeister number {s:?}"))),
        }
    }
}

/// Orbits of `z . x = z x f(z)^-1`, sorted by least element.
pub fn twisted_classes_finite(g: &FiniteGroup, f: &FiniteEndo) -> Vec<Vec<usize>> {
    let mut uf = UnionFind::new(g.order());
    for z in 0..g.order() {
        let fz_inv = g.inv(f.apply(z));
        for x in 0..g.order() {
            uf.union(x, g.mul(g.mul(z, x), fz_inv));
        }
    }
    uf.classes()
}

/// Average number of fixed points of the twisted action.
pub fn reidemeister_finite_burnside(g: &FiniteGroup, f: &FiniteEndo) -> ReidemeisterCount {
    let mut fixed = 0u64;
    for z in 0..g.order() {
        let fz_inv = g.inv(f.apply(z));
        fixed += (0..g.order())
            .filter(|&x| g.mul(g.mul(z, x), fz_inv) == x)
            .count() as u64;
    }
    debug_assert_eq!(fixed % g.order() as u64, 0);
    ReidemeisterCount::finite(fixed / g.order() as u64)
}

/// All automorphisms, ordered lexicographically by the images of the
/// minimal generating sequence.
pub fn automorphisms_finite(g: &FiniteGroup, bound: usize) -> Result<Vec<FiniteEndo>, TwistedError> {
    if g.order() > bound {
        return Err(TwistedError::TooLarge {
            order: g.order(),
            bound,
        });
    }
    let gens = g.minimal_generating_sequence();
    // Spanning tree: every element as (parent, generator slot).
    let mut tree: Vec<(usize, usize, usize)> = Vec::new();
    let mut seen = vec![false; g.order()];
    seen[g.identity()] = true;
    let mut queue = VecDeque::from([g.identity()]);
    while let Some(x) = queue.pop_front() {
        for (slot, &c) in gens.iter().enumerate() {
            let y = g.mul(x, c);
            if !seen[y] {
                seen[y] = true;
                tree.push((y, x, slot));
                queue.push_back(y);
            }
        }
    }
    let orders: Vec<usize> = (0..g.order()).map(|a| g.element_order(a)).collect();
    let candidates: Vec<Vec<usize>> = gens
        .iter()
        .map(|&c| (0..g.order()).filter(|&h| orders[h] == orders[c]).collect())
        .collect();

    let mut out = Vec::new();
    let mut pick = vec![0usize; gens.len()];
    loop {
        if candidates.iter().any(Vec::is_empty) {
            break;
        }
        let hs: Vec<usize> = pick.iter().zip(&candidates).map(|(&k, c)| c[k]).collect();
        let mut images = vec![usize::MAX; g.order()];
        images[g.identity()] = g.identity();
        for &(y, x, slot) in &tree {
            images[y] = g.mul(images[x], hs[slot]);
        }
        let endo = FiniteEndo { images };
        if endo.is_bijective() {
            if let Ok(e) = FiniteEndo::new(g, endo.images) {
                out.push(e);
            }
        }
        // Odometer over candidate lists, last slot fastest.
        let mut i = pick.len();
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            pick[i] += 1;
            if pick[i] < candidates[i].len() {
                break;
            }
            pick[i] = 0;
        }
    }
    Ok(out)
}

/// Smallest Reidemeister number over all automorphisms, with a witness.
pub fn min_reidemeister_finite(
    g: &FiniteGroup,
    bound: usize,
) -> Result<(ReidemeisterCount, FiniteEndo), TwistedError> {
    let autos = automorphisms_finite(g, bound)?;
    let best = autos
        .into_iter()
        .map(|f| (twisted_classes_finite(g, &f).len(), f))
        .min_by_key(|(r, _)| *r)
        .expect("the identity is always an automorphism");
    Ok((ReidemeisterCount::finite(best.0 as u64), best.1))
}

/// `R(phi)` for `phi` acting on `Z^k` by the matrix `m`: the order of the
/// cokernel of `m - I`, infinite when `det(m - I) = 0`.
pub fn reidemeister_abelian(m: &IntMatrix) -> Result<ReidemeisterCount, TwistedError> {
    if !m.is_square() {
        return Err(TwistedError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let shifted = m.sub(&IntMatrix::identity(m.rows()));
    let snf = smith_normal_form(&shifted);
    let diag = snf.d.diagonal();
    if diag.len() < m.rows() || diag.iter().any(Zero::is_zero) {
        return Ok(ReidemeisterCount::Infinite);
    }
    let product = diag.iter().fold(BigInt::one(), |acc, d| acc * d.abs());
    Ok(ReidemeisterCount::Finite(product.magnitude().clone()))
}

/// Lower bound for `R(e)` read off the abelianization.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AbelianizationBound {
    /// Matrix of the induced map on the free abelianization, columns being
    /// images of basis vectors.
    pub matrix: IntMatrix,
    pub bound: ReidemeisterCount,
}

impl AbelianizationBound {
    /// The bound is infinite, hence so is `R(e)`.
    pub fn certified_infinite(&self) -> bool {
        self.bound.is_infinite()
    }
}

/// Induced map of a generator-image endomorphism on a torsion-free
/// abelianization, and its Reidemeister number.
pub fn abelianization_certificate(p: &Presentation, images: &[Word]) -> Result<AbelianizationBound, TwistedError> {
    let k = p.generators().len();
    if images.len() != k {
        return Err(TwistedError::NotHomomorphism(format!("need {k} images, got {}", images.len())));
    }
    for img in images {
        if let Some(s) = img.symbols().iter().find(|s| p.generator_index(s).is_none()) {
            return Err(TwistedError::NotHomomorphism(format!("image uses foreign symbol {s}")));
        }
    }
    let invariants = p.abelian_invariants();
    if !invariants.torsion.is_empty() {
        return Err(TwistedError::NotSupported("abelianization has torsion".into()));
    }
    // Row convention: generator i maps to row i of `e`.
    let e = IntMatrix::with_shape(
        k,
        k,
        images
            .iter()
            .flat_map(|img| p.generators().iter().map(move |g| BigInt::from(img.exponent_sum(g))))
            .collect(),
    );
    let snf = smith_normal_form(&p.abelianization_matrix());
    let rank = snf.rank();
    // In the coordinates y = x V the relation lattice is spanned by the
    // first `rank` unit vectors and the map becomes V^-1 E V.
    let g = snf.v_inv.mul(&e).mul(&snf.v);
    for i in 0..rank {
        for j in rank..k {
            if !g[(i, j)].is_zero() {
                return Err(TwistedError::NotHomomorphism("images do not respect the relators".into()));
            }
        }
    }
    let matrix = g.trailing_block(rank).transpose();
    let bound = reidemeister_abelian(&matrix)?;
    Ok(AbelianizationBound { matrix, bound })
}

/// Both sides of `R(f) >= R(f mod N)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LiftReport {
    pub r_group: ReidemeisterCount,
    pub r_quotient: ReidemeisterCount,
    pub quotient_order: usize,
    pub holds: bool,
}

/// Cosets of a normal subgroup `n`, numbered by least element.
fn coset_labels(g: &FiniteGroup, member: &[bool]) -> Vec<usize> {
    let mut label = vec![usize::MAX; g.order()];
    let mut next = 0;
    for a in 0..g.order() {
        if label[a] != usize::MAX {
            continue;
        }
        for x in 0..g.order() {
            if member[x] {
                label[g.mul(a, x)] = next;
            }
        }
        next += 1;
    }
    label
}

pub fn lifted_inequality_check(g: &FiniteGroup, n: &[usize], f: &FiniteEndo) -> Result<LiftReport, TwistedError> {
    let mut member = vec![false; g.order()];
    for &x in n {
        if x >= g.order() {
            return Err(TwistedError::NotNormal(format!("{x} is not an element")));
        }
        member[x] = true;
    }
    if !member[g.identity()] {
        return Err(TwistedError::NotNormal("identity missing".into()));
    }
    for a in 0..g.order() {
        if !member[a] {
            continue;
        }
        for b in 0..g.order() {
            if member[b] && !member[g.mul(a, g.inv(b))] {
                return Err(TwistedError::NotNormal("not closed under products".into()));
            }
        }
        for x in 0..g.order() {
            if !member[g.mul(g.mul(x, a), g.inv(x))] {
                return Err(TwistedError::NotNormal(format!("{a} has a conjugate outside")));
            }
        }
        if !member[f.apply(a)] {
            return Err(TwistedError::NotInvariant);
        }
    }
    let label = coset_labels(g, &member);
    let m = label.iter().max().map_or(0, |x| x + 1);
    let mut rep = vec![usize::MAX; m];
    for a in (0..g.order()).rev() {
        rep[label[a]] = a;
    }
    let table = (0..m)
        .map(|s| (0..m).map(|t| label[g.mul(rep[s], rep[t])]).collect())
        .collect();
    let quotient = FiniteGroup::new(table, label[g.identity()])?;
    let fbar = FiniteEndo::new(&quotient, (0..m).map(|s| label[f.apply(rep[s])]).collect())?;
    let r_group = twisted_classes_finite(g, f).len() as u64;
    let r_quotient = twisted_classes_finite(&quotient, &fbar).len() as u64;
    Ok(LiftReport {
        r_group: ReidemeisterCount::finite(r_group),
        r_quotient: ReidemeisterCount::finite(r_quotient),
        quotient_order: m,
        holds: r_group >= r_quotient,
    })
}

/// Endomorphism of a free group given by the images of its generators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FreeEndo {
    pub generators: Vec<GeneratorSymbol>,
    pub images: Vec<Word>,
}

impl FreeEndo {
    pub fn new(generators: Vec<GeneratorSymbol>, images: Vec<Word>) -> Result<Self, TwistedError> {
        if generators.len() != images.len() {
            return Err(TwistedError::NotHomomorphism("one image per generator".into()));
        }
        for img in &images {
            if let Some(s) = img.symbols().iter().find(|s| !generators.contains(s)) {
                return Err(TwistedError::NotHomomorphism(format!("image uses foreign symbol {s}")));
            }
        }
        Ok(FreeEndo { generators, images })
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn apply(&self, w: &Word) -> Word {
        w.substitute(|s| {
            let k = self.generators.iter().position(|g| g == s).expect("word over the free basis");
            self.images[k].clone()
        })
    }
}

pub const CENSUS_MAX_RANK: usize = 3;
pub const CENSUS_MAX_LENGTH: usize = 8;
pub const CENSUS_MAX_WITNESS: usize = 4;

fn reduced_words(generators: &[GeneratorSymbol], max_len: usize) -> Vec<Word> {
    let letters: Vec<Letter> = generators.iter().flat_map(|g| [g.pos(), g.neg()]).collect();
    let mut out = vec![Word::identity()];
    let mut frontier = vec![Word::identity()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &frontier {
            for l in &letters {
                if w.letters().last().is_some_and(|last| *last == l.inv()) {
                    continue;
                }
                next.push(w.mul(&Word::letter(l.clone())));
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// Classes among reduced words of length `<= max_len` after merging every
/// `x ~ z x e(z)^-1` with `|z| <= max_witness` that stays inside the ball.
/// This over-counts the true classes met by the ball.
pub fn bounded_census_free(e: &FreeEndo, max_len: usize, max_witness: usize) -> Result<usize, TwistedError> {
    if e.rank() > CENSUS_MAX_RANK || max_len > CENSUS_MAX_LENGTH || max_witness > CENSUS_MAX_WITNESS {
        return Err(TwistedError::BudgetTooLarge(format!(
            "rank <= {CENSUS_MAX_RANK}, L <= {CENSUS_MAX_LENGTH}, B <= {CENSUS_MAX_WITNESS} required"
        )));
    }
    let ball = reduced_words(&e.generators, max_len);
    let index: HashMap<&Word, usize> = ball.iter().enumerate().map(|(k, w)| (w, k)).collect();
    let witnesses: Vec<(Word, Word)> = reduced_words(&e.generators, max_witness)
        .into_iter()
        .map(|z| {
            let twisted = e.apply(&z).inverse();
            (z, twisted)
        })
        .collect();
    let mut uf = UnionFind::new(ball.len());
    for (k, x) in ball.iter().enumerate() {
        for (z, fz_inv) in &witnesses {
            let y = Word::product([z, x, fz_inv]);
            if let Some(&j) = index.get(&y) {
                uf.union(k, j);
            }
        }
    }
    Ok(uf.count())
}
