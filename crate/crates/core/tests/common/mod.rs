#![allow(dead_code)]

use rinf_core::words::w;
use rinf_core::{todd_coxeter, FiniteGroup, GeneratorSymbol, Presentation, DEFAULT_MAX_COSETS};

pub struct Fixture {
    pub name: &'static str,
    pub order: usize,
    pub presentation: Presentation,
}

fn pres(gens: &[&str], rels: &[&str], name: &str) -> Presentation {
    Presentation::new(
        gens.iter().map(|g| GeneratorSymbol::plain(*g, 0)).collect(),
        rels.iter().map(|r| w(r)),
        name,
    )
    .unwrap()
}

/// Finite presentations of every small group used by the integration tests.
pub fn fixtures() -> Vec<Fixture> {
    let list: [(&str, usize, &[&str], &[&str]); 15] = [
        ("trivial", 1, &[], &[]),
        ("Z2", 2, &["a"], &["a^2"]),
        ("Z3", 3, &["a"], &["a^3"]),
        ("Z4", 4, &["a"], &["a^4"]),
        ("V4", 4, &["a", "b"], &["a^2", "b^2", "a^-1 b^-1 a b"]),
        ("Z5", 5, &["a"], &["a^5"]),
        ("S3", 6, &["a", "b"], &["a^3", "b^2", "a b a b"]),
        ("Z6", 6, &["a", "b"], &["a^2", "b^3", "a^-1 b^-1 a b"]),
        ("Z8", 8, &["a"], &["a^8"]),
        ("D4", 8, &["a", "b"], &["a^4", "b^2", "a b a b"]),
        ("Q8", 8, &["a", "b"], &["a^4", "a^2 b^-2", "b^-1 a b a"]),
        ("D5", 10, &["a", "b"], &["a^5", "b^2", "a b a b"]),
        ("Z3:Z4", 12, &["a", "b"], &["a^3", "b^4", "b^-1 a b a"]),
        ("A4", 12, &["a", "b"], &["a^2", "b^3", "a b a b a b"]),
        ("D8", 16, &["a", "b"], &["a^8", "b^2", "a b a b"]),
    ];
    list.into_iter()
        .map(|(name, order, gens, rels)| Fixture {
            name,
            order,
            presentation: pres(gens, rels, name),
        })
        .collect()
}

pub fn group(f: &Fixture) -> FiniteGroup {
    todd_coxeter(&f.presentation, DEFAULT_MAX_COSETS)
        .unwrap()
        .to_finite_group()
        .unwrap()
}

/// Subgroups generated by at most two elements.
pub fn small_subgroups(g: &FiniteGroup) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = Vec::new();
    for a in 0..g.order() {
        for b in a..g.order() {
            let mask = g.generated(&[a, b]);
            let sub: Vec<usize> = (0..g.order()).filter(|&x| mask[x]).collect();
            if !out.contains(&sub) {
                out.push(sub);
            }
        }
    }
    out
}

pub fn is_normal(g: &FiniteGroup, sub: &[usize]) -> bool {
    sub.iter()
        .all(|&a| (0..g.order()).all(|x| sub.contains(&g.mul(g.mul(x, a), g.inv(x)))))
}
