//! Presentations of surface pure braid groups, surface groups and direct
//! powers.
//!
//! Relator instances are produced by iterating over all index tuples and
//! keeping those whose side condition holds and whose symbols are all
//! generators of the presentation.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::presentations::Presentation;
use crate::words::{GeneratorSymbol, Letter, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("closed surfaces (p = 0) are not supported")]
    ClosedSurfaceUnsupported,
}

/// `Sigma_{g,p}` when orientable, `N_{g,p}` otherwise.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SurfaceSpec {
    pub orientable: bool,
    pub g: u32,
    pub p: u32,
}

/// Which of the three pure braid presentations applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BraidFamily {
    Sphere,
    Orientable,
    NonOrientable,
}

impl fmt::Display for BraidFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BraidFamily::Sphere => "sphere",
            BraidFamily::Orientable => "orientable",
            BraidFamily::NonOrientable => "non-orientable",
        })
    }
}

impl SurfaceSpec {
    pub fn sphere(p: u32) -> Self {
        SurfaceSpec { orientable: true, g: 0, p }
    }

    pub fn orientable(g: u32, p: u32) -> Self {
        SurfaceSpec { orientable: true, g, p }
    }

    pub fn non_orientable(g: u32, p: u32) -> Result<Self, FamilyError> {
        if g == 0 {
            return Err(FamilyError::InvalidParams("non-orientable surfaces need g >= 1".into()));
        }
        Ok(SurfaceSpec { orientable: false, g, p })
    }

    pub fn family(&self) -> BraidFamily {
        match (self.orientable, self.g) {
            (true, 0) => BraidFamily::Sphere,
            (true, _) => BraidFamily::Orientable,
            (false, _) => BraidFamily::NonOrientable,
        }
    }

    /// Number of punctures plus handles that index the non-braid strands:
    /// braid strand `j` belongs to factor `j - offset`.
    pub fn strand_offset(&self) -> u32 {
        match self.family() {
            BraidFamily::Sphere => self.p - 1,
            BraidFamily::Orientable => 2 * self.g + self.p - 1,
            BraidFamily::NonOrientable => self.p,
        }
    }

    /// Rank of the surface group when it is free (orientable, punctured).
    pub fn free_rank(&self) -> Option<u32> {
        (self.orientable && self.p >= 1).then(|| 2 * self.g + self.p - 1)
    }
}

impl fmt::Display for SurfaceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family() {
            BraidFamily::Sphere => write!(f, "sphere:{}", self.p),
            BraidFamily::Orientable => write!(f, "o:{},{}", self.g, self.p),
            BraidFamily::NonOrientable => write!(f, "n:{},{}", self.g, self.p),
        }
    }
}

impl FromStr for SurfaceSpec {
    type Err = FamilyError;

    /// Accepts `sphere:p`, `o:g,p` and `n:g,p`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || FamilyError::InvalidParams(format!("cannot parse surface {s:?}; expected sphere:p, o:g,p or n:g,p"));
        let (kind, rest) = s.split_once(':').ok_or_else(bad)?;
        let nums: Vec<u32> = rest
            .split(',')
            .map(|t| t.trim().parse())
            .collect::<Result<_, _>>()
            .map_err(|_| bad())?;
        match (kind.trim(), nums.as_slice()) {
            ("sphere", [p]) => Ok(SurfaceSpec::sphere(*p)),
            ("o", [g, p]) => Ok(SurfaceSpec::orientable(*g, *p)),
            ("n", [g, p]) => SurfaceSpec::non_orientable(*g, *p),
            _ => Err(bad()),
        }
    }
}

fn a(i: u32, j: u32) -> Word {
    Word::gen(&GeneratorSymbol::a(i, j))
}

fn ai(i: u32, j: u32) -> Word {
    a(i, j).inverse()
}

fn rho(r: u32, k: u32) -> Word {
    Word::gen(&GeneratorSymbol::rho(r, k))
}

fn rhoi(r: u32, k: u32) -> Word {
    rho(r, k).inverse()
}

fn prod(parts: &[Word]) -> Word {
    Word::product(parts)
}

/// Collects `L * R^-1` relators, discarding instances that mention a symbol
/// outside the generating set.
struct RelatorSink<'a> {
    generators: &'a BTreeSet<GeneratorSymbol>,
    relators: Vec<Word>,
}

impl<'a> RelatorSink<'a> {
    fn new(generators: &'a BTreeSet<GeneratorSymbol>) -> Self {
        RelatorSink {
            generators,
            relators: Vec::new(),
        }
    }

    fn admissible(&self, i: u32, j: u32) -> bool {
        i >= 1 && i < j && self.generators.contains(&GeneratorSymbol::A { i, j })
    }

    fn push(&mut self, lhs: Word, rhs: Word) {
        let r = lhs.mul(&rhs.inverse());
        debug_assert!(r.symbols().iter().all(|s| self.generators.contains(s)));
        self.relators.push(r);
    }
}

fn a_generators(pairs: impl Iterator<Item = (u32, u32)>) -> Vec<GeneratorSymbol> {
    let mut gens: Vec<_> = pairs.map(|(i, j)| GeneratorSymbol::a(i, j)).collect();
    gens.sort();
    gens
}

/// Shared instances of the conjugation relations of the first two families:
/// `P2`/`PR2` and `P3`/`PR3`.
fn push_common_p2_p3(sink: &mut RelatorSink, top: u32) {
    for i in 1..=top {
        for j in i + 1..=top {
            for s in j + 1..=top {
                if !(sink.admissible(i, j) && sink.admissible(j, s) && sink.admissible(i, s)) {
                    continue;
                }
                let conj = |x: Word| prod(&[ai(i, j), x, a(i, j)]);
                sink.push(conj(a(j, s)), prod(&[a(i, s), a(j, s), ai(i, s)]));
                sink.push(
                    conj(a(i, s)),
                    prod(&[a(i, s), a(j, s), a(i, s), ai(j, s), ai(i, s)]),
                );
            }
        }
    }
}

/// The long right-hand side shared by `P4` and `PR4`.
fn p4_rhs(i: u32, j: u32, r: u32, s: u32) -> Word {
    prod(&[
        a(i, s),
        a(j, s),
        ai(i, s),
        ai(j, s),
        a(r, s),
        a(j, s),
        a(i, s),
        ai(j, s),
        ai(i, s),
    ])
}

fn check_positive(names: &[(&str, u32)]) -> Result<(), FamilyError> {
    for (name, v) in names {
        if *v < 1 {
            return Err(FamilyError::InvalidParams(format!("{name} must be >= 1, got {v}")));
        }
    }
    Ok(())
}

/// Pure braid group of the `p`-punctured sphere on `n` strands.
pub fn pure_braid_punctured_sphere(p: u32, n: u32) -> Result<Presentation, FamilyError> {
    check_positive(&[("p", p), ("n", n)])?;
    let top = p + n - 1;
    let gens = a_generators((1..top).flat_map(|i| (p.max(i + 1)..=top).map(move |j| (i, j))));
    let declared: BTreeSet<_> = gens.iter().cloned().collect();
    let mut sink = RelatorSink::new(&declared);
    for &(i, j) in &pairs_of(&gens) {
        for &(r, s) in &pairs_of(&gens) {
            let conj = prod(&[ai(i, j), a(r, s), a(i, j)]);
            if (i < j && j < r && r < s) || (r < i && i < j && j < s) {
                sink.push(conj, a(r, s));
            } else if i < r && r < j && j < s && sink.admissible(i, s) && sink.admissible(j, s) {
                sink.push(conj, p4_rhs(i, j, r, s));
            }
        }
    }
    push_common_p2_p3(&mut sink, top);
    let relators = sink.relators;
    Ok(Presentation::new(gens, relators, format!("pure braid sphere:{p} n={n}"))
        .expect("family relators use declared generators"))
}

fn pairs_of(gens: &[GeneratorSymbol]) -> Vec<(u32, u32)> {
    gens.iter()
        .filter_map(|g| match g {
            GeneratorSymbol::A { i, j } => Some((*i, *j)),
            _ => None,
        })
        .collect()
}

/// Side condition of `PR1` beyond the two disjointness cases.
fn pr1_adjacent(r: u32, g: u32) -> bool {
    (r.is_multiple_of(2) && r < 2 * g) || r >= 2 * g
}

/// Side condition of `PR4` in the adjacent case `i + 1 = r`.
fn pr4_adjacent(r: u32, g: u32) -> bool {
    (r % 2 == 1 && r < 2 * g) || r > 2 * g
}

/// Pure braid group of `Sigma_{g,p}` on `n` strands, `g >= 1`.
pub fn pure_braid_orientable(g: u32, p: u32, n: u32) -> Result<Presentation, FamilyError> {
    check_positive(&[("g", g), ("p", p), ("n", n)])?;
    let band = 2 * g + p;
    let top = band + n - 1;
    let gens = a_generators((1..top).flat_map(|i| (band.max(i + 1)..=top).map(move |j| (i, j))));
    let declared: BTreeSet<_> = gens.iter().cloned().collect();
    let mut sink = RelatorSink::new(&declared);
    let pairs = pairs_of(&gens);
    for &(i, j) in &pairs {
        for &(r, s) in &pairs {
            let conj = prod(&[ai(i, j), a(r, s), a(i, j)]);
            let pr1 = (i < j && j < r && r < s)
                || (r + 1 < i && i < j && j < s)
                || (i == r + 1 && j < s && pr1_adjacent(r, g));
            if pr1 {
                sink.push(conj.clone(), a(r, s));
            }
            let pr4 = (i + 1 < r && r < j && j < s) || (i + 1 == r && r < j && j < s && pr4_adjacent(r, g));
            if pr4 && sink.admissible(i, s) && sink.admissible(j, s) {
                sink.push(conj, p4_rhs(i, j, r, s));
            }
        }
    }
    push_common_p2_p3(&mut sink, top);
    for r in 1..=2 * g {
        for j in 1..=top {
            for s in j + 1..=top {
                if r % 2 == 1 && r < 2 * g && r + 1 < j {
                    let q = r + 1;
                    if sink.admissible(q, j) && sink.admissible(r, s) && sink.admissible(q, s) && sink.admissible(j, s) {
                        sink.push(
                            prod(&[ai(q, j), a(r, s), a(q, j)]),
                            prod(&[a(r, s), a(q, s), ai(j, s), ai(q, s)]),
                        );
                    }
                }
                if r % 2 == 0 && r <= 2 * g && r - 1 < j {
                    let q = r - 1;
                    if sink.admissible(q, j) && sink.admissible(r, s) && sink.admissible(q, s) && sink.admissible(j, s) {
                        sink.push(
                            prod(&[ai(q, j), a(r, s), a(q, j)]),
                            prod(&[
                                a(q, s),
                                a(j, s),
                                ai(q, s),
                                a(r, s),
                                a(j, s),
                                a(q, s),
                                ai(j, s),
                                ai(q, s),
                            ]),
                        );
                    }
                }
            }
        }
    }
    let relators = sink.relators;
    Ok(Presentation::new(gens, relators, format!("pure braid o:{g},{p} n={n}"))
        .expect("family relators use declared generators"))
}

/// Pure braid group of `N_{g,p}` on `n` strands, `g >= 1`.
pub fn pure_braid_nonorientable(g: u32, p: u32, n: u32) -> Result<Presentation, FamilyError> {
    check_positive(&[("g", g), ("p", p), ("n", n)])?;
    let top = p + n;
    let mut gens = a_generators((p + 1..=top).flat_map(|j| (1..j).map(move |i| (i, j))));
    gens.extend((p + 1..=top).flat_map(|r| (1..=g).map(move |k| GeneratorSymbol::rho(r, k))));
    let declared: BTreeSet<_> = gens.iter().cloned().collect();
    let mut sink = RelatorSink::new(&declared);
    let pairs = pairs_of(&gens);

    for &(r, s) in &pairs {
        for &(i, j) in &pairs {
            let lhs = prod(&[a(r, s), a(i, j), ai(r, s)]);
            let rhs = if (i < r && r < s && s < j) || (r < s && s < i && i < j) {
                a(i, j)
            } else if i == r && r < s && s < j {
                prod(&[ai(s, j), a(i, j), a(s, j)])
            } else if r < i && i == s && s < j {
                prod(&[ai(i, j), ai(r, j), a(i, j), a(r, j), a(i, j)])
            } else if r < i && i < s && s < j {
                prod(&[
                    ai(s, j),
                    ai(r, j),
                    a(s, j),
                    a(r, j),
                    a(i, j),
                    ai(r, j),
                    ai(s, j),
                    a(r, j),
                    a(s, j),
                ])
            } else {
                continue;
            };
            if rhs.symbols().iter().all(|x| declared.contains(x)) {
                sink.push(lhs, rhs);
            }
        }
    }

    for i in p + 1..=top {
        for j in i + 1..=top {
            for k in 1..=g {
                for l in 1..=g {
                    let lhs = prod(&[rho(i, k), rho(j, l), rhoi(i, k)]);
                    let rhs = match k.cmp(&l) {
                        std::cmp::Ordering::Less => rho(j, l),
                        std::cmp::Ordering::Equal => prod(&[rhoi(j, k), ai(i, j), rho(j, k), rho(j, k)]),
                        std::cmp::Ordering::Greater => prod(&[
                            rhoi(j, k),
                            ai(i, j),
                            rho(j, k),
                            ai(i, j),
                            rho(j, l),
                            a(i, j),
                            rhoi(j, k),
                            a(i, j),
                            rho(j, k),
                        ]),
                    };
                    sink.push(lhs, rhs);
                }
            }
        }
    }

    for j in p + 1..=top {
        let lhs = prod(&(1..=g).flat_map(|l| [rho(j, l), rho(j, l)]).collect::<Vec<_>>());
        let rhs = prod(
            &(1..j)
                .map(|i| a(i, j))
                .chain((j + 1..=top).map(|s| a(j, s)))
                .collect::<Vec<_>>(),
        );
        sink.push(lhs, rhs);
    }

    for &(i, j) in &pairs {
        for k in p + 1..=top {
            if k == j {
                continue;
            }
            for l in 1..=g {
                let lhs = prod(&[rho(k, l), a(i, j), rhoi(k, l)]);
                let rhs = if k < i || j < k {
                    a(i, j)
                } else if k == i {
                    prod(&[rhoi(j, l), ai(i, j), rho(j, l)])
                } else {
                    prod(&[
                        rhoi(j, l),
                        ai(k, j),
                        rho(j, l),
                        ai(k, j),
                        a(i, j),
                        a(k, j),
                        rhoi(j, l),
                        a(k, j),
                        rho(j, l),
                    ])
                };
                sink.push(lhs, rhs);
            }
        }
    }

    let relators = sink.relators;
    Ok(Presentation::new(gens, relators, format!("pure braid n:{g},{p} n={n}"))
        .expect("family relators use declared generators"))
}

/// Dispatches on the surface's family.
pub fn pure_braid(spec: SurfaceSpec, n: u32) -> Result<Presentation, FamilyError> {
    match spec.family() {
        BraidFamily::Sphere => pure_braid_punctured_sphere(spec.p, n),
        BraidFamily::Orientable => pure_braid_orientable(spec.g, spec.p, n),
        BraidFamily::NonOrientable => pure_braid_nonorientable(spec.g, spec.p, n),
    }
}

/// Generator `A[i]` of a surface group.
pub fn surface_a(i: u32) -> GeneratorSymbol {
    GeneratorSymbol::plain("A", i)
}

/// Crosscap generator `rho[k]` of a non-orientable surface group.
pub fn surface_rho(k: u32) -> GeneratorSymbol {
    GeneratorSymbol::plain("rho", k)
}

/// Fundamental group of a punctured surface.
pub fn surface_group(spec: SurfaceSpec) -> Result<Presentation, FamilyError> {
    if spec.p == 0 {
        return Err(FamilyError::ClosedSurfaceUnsupported);
    }
    let label = format!("pi1 {spec}");
    if spec.orientable {
        let rank = spec.free_rank().expect("punctured orientable");
        return Ok(Presentation::free((1..=rank).map(surface_a).collect(), label));
    }
    if spec.g == 0 {
        return Err(FamilyError::InvalidParams("non-orientable surfaces need g >= 1".into()));
    }
    let mut gens: Vec<_> = (1..=spec.p).map(surface_a).collect();
    gens.extend((1..=spec.g).map(surface_rho));
    let squares: Vec<Letter> = (1..=spec.g)
        .flat_map(|k| [surface_rho(k).pos(), surface_rho(k).pos()])
        .collect();
    let punctures: Vec<Letter> = (1..=spec.p).rev().map(|i| surface_a(i).neg()).collect();
    let relator = Word::reduce(squares.into_iter().chain(punctures));
    Ok(Presentation::new(gens, [relator], label).expect("surface relator is declared"))
}

/// Copy `c` (1-based) of a base generator inside a direct power.
pub fn copy_symbol(base: &GeneratorSymbol, c: u32) -> GeneratorSymbol {
    GeneratorSymbol::plain(base.stem(), c)
}

/// `n` relabeled copies of `base` that commute with each other.
pub fn direct_power_presentation(base: &Presentation, n: u32) -> Result<Presentation, FamilyError> {
    check_positive(&[("n", n)])?;
    if n == 1 {
        return Ok(base.clone());
    }
    let copies: Vec<Vec<GeneratorSymbol>> = (1..=n)
        .map(|c| base.generators().iter().map(|s| copy_symbol(s, c)).collect())
        .collect();
    let generators: Vec<_> = copies.iter().flatten().cloned().collect();
    let mut relators = Vec::new();
    for c in 1..=n {
        relators.extend(base.relators().iter().map(|r| r.substitute(|s| Word::gen(&copy_symbol(s, c)))));
    }
    for (j, xs) in copies.iter().enumerate() {
        for ys in &copies[j + 1..] {
            for x in xs {
                for y in ys {
                    relators.push(Word::commutator(&Word::gen(x), &Word::gen(y)));
                }
            }
        }
    }
    Presentation::new(generators, relators, format!("({})^{n}", base.provenance()))
        .map_err(|e| FamilyError::InvalidParams(e.to_string()))
}

/// The braid generators supported in a disc: both indices in the braid band.
pub fn artin_generator_set(spec: SurfaceSpec, n: u32) -> Result<BTreeSet<GeneratorSymbol>, FamilyError> {
    check_positive(&[("n", n)])?;
    let (lo, hi) = match spec.family() {
        BraidFamily::Sphere => {
            check_positive(&[("p", spec.p)])?;
            (spec.p, spec.p + n - 1)
        }
        BraidFamily::Orientable => {
            check_positive(&[("p", spec.p)])?;
            (2 * spec.g + spec.p, 2 * spec.g + spec.p + n - 1)
        }
        BraidFamily::NonOrientable => {
            check_positive(&[("p", spec.p)])?;
            (spec.p + 1, spec.p + n)
        }
    };
    Ok((lo..=hi)
        .flat_map(|i| (i + 1..=hi).map(move |j| GeneratorSymbol::a(i, j)))
        .collect())
}
