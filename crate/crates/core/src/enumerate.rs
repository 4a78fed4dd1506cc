//! Todd–Coxeter coset enumeration over the trivial subgroup.
//!
//! HLT strategy: cosets are processed in order, every relator is scanned
//! and filled from the current coset, then the coset's row is completed.
//! When the coset budget is hit a lookahead pass scans all relators from
//! every live coset without defining, which may free cosets through
//! coincidences.

use std::collections::VecDeque;

use thiserror::Error;

use crate::presentations::Presentation;
use crate::twisted::{FiniteGroup, TwistedError};
use crate::words::Word;

const NONE: usize = usize::MAX;

pub const DEFAULT_MAX_COSETS: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnumerateError {
    #[error("coset enumeration overflowed {max_cosets} live cosets")]
    Overflow { max_cosets: usize },
    #[error("coset table is not closed")]
    NotClosed,
    #[error("symbol {0} is not a generator of the enumerated presentation")]
    UnknownSymbol(String),
    #[error("table does not define a group: {0}")]
    NotAGroup(#[from] TwistedError),
}

/// A coset table; row 0 is the trivial subgroup. Columns are `2g` for
/// generator `g` and `2g + 1` for its inverse.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetTable {
    presentation: Presentation,
    rows: Vec<Vec<usize>>,
    closed: bool,
}

impl CosetTable {
    /// Table given explicitly, e.g. a partial table for testing.
    /// `None` entries are undefined; the table is closed when complete.
    pub fn from_rows(presentation: Presentation, rows: Vec<Vec<Option<usize>>>) -> Self {
        let closed = rows.iter().all(|r| r.iter().all(Option::is_some));
        CosetTable {
            presentation,
            rows: rows
                .into_iter()
                .map(|r| r.into_iter().map(|e| e.unwrap_or(NONE)).collect())
                .collect(),
            closed,
        }
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn entry(&self, coset: usize, column: usize) -> Option<usize> {
        let e = self.rows[coset][column];
        (e != NONE).then_some(e)
    }

    fn encode(&self, w: &Word) -> Result<Vec<usize>, EnumerateError> {
        encode(&self.presentation, w)
    }

    fn trace_codes(&self, from: usize, codes: &[usize]) -> Option<usize> {
        codes.iter().try_fold(from, |c, &x| self.entry(c, x))
    }

    /// Coset reached from `from` by reading `w`; `None` if undefined.
    pub fn trace(&self, from: usize, w: &Word) -> Result<Option<usize>, EnumerateError> {
        Ok(self.trace_codes(from, &self.encode(w)?))
    }

    /// Over the trivial subgroup, `w` is the identity iff it fixes coset 0.
    pub fn acts_trivially(&self, w: &Word) -> Result<bool, EnumerateError> {
        if !self.closed {
            return Err(EnumerateError::NotClosed);
        }
        Ok(self.trace(0, w)? == Some(0))
    }

    /// Every column is a permutation, inverse columns invert, and every
    /// relator fixes every coset.
    pub fn is_consistent(&self) -> bool {
        if !self.closed {
            return false;
        }
        let n = self.rows.len();
        let cols = 2 * self.presentation.generators().len();
        for x in 0..cols {
            let mut hit = vec![false; n];
            for c in 0..n {
                let d = self.rows[c][x];
                if d >= n || hit[d] || self.rows[d][x ^ 1] != c {
                    return false;
                }
                hit[d] = true;
            }
        }
        let relators: Vec<_> = self
            .presentation
            .relators()
            .iter()
            .map(|r| self.encode(r).expect("relators use declared generators"))
            .collect();
        (0..n).all(|c| relators.iter().all(|r| self.trace_codes(c, r) == Some(c)))
    }

    /// Shortest-path word from coset 0 to every coset, in BFS column order.
    fn representatives(&self) -> Vec<Vec<usize>> {
        let mut reps: Vec<Option<Vec<usize>>> = vec![None; self.rows.len()];
        reps[0] = Some(vec![]);
        let mut queue = VecDeque::from([0]);
        while let Some(c) = queue.pop_front() {
            for (x, &d) in self.rows[c].iter().enumerate() {
                if reps[d].is_none() {
                    let mut w = reps[c].clone().expect("visited");
                    w.push(x);
                    reps[d] = Some(w);
                    queue.push_back(d);
                }
            }
        }
        reps.into_iter().map(|r| r.expect("table is connected")).collect()
    }

    /// Multiplication table of the regular action; coset `k` is element `k`.
    pub fn to_finite_group(&self) -> Result<FiniteGroup, EnumerateError> {
        if !self.closed {
            return Err(EnumerateError::NotClosed);
        }
        let reps = self.representatives();
        let table = (0..self.rows.len())
            .map(|a| {
                reps.iter()
                    .map(|w| self.trace_codes(a, w).expect("closed table"))
                    .collect()
            })
            .collect();
        Ok(FiniteGroup::new(table, 0)?)
    }
}

fn encode(p: &Presentation, w: &Word) -> Result<Vec<usize>, EnumerateError> {
    w.letters()
        .iter()
        .map(|l| {
            p.generator_index(&l.symbol)
                .map(|g| 2 * g + usize::from(l.inverse))
                .ok_or_else(|| EnumerateError::UnknownSymbol(l.symbol.to_string()))
        })
        .collect()
}

struct Overflowed;

struct Enumerator {
    cols: usize,
    table: Vec<Vec<usize>>,
    forward: Vec<usize>,
    live: usize,
    max: usize,
    relators: Vec<Vec<usize>>,
    queue: Vec<usize>,
}

impl Enumerator {
    fn is_live(&self, c: usize) -> bool {
        self.forward[c] == c
    }

    fn new_coset(&mut self) -> usize {
        let c = self.table.len();
        self.table.push(vec![NONE; self.cols]);
        self.forward.push(c);
        self.live += 1;
        c
    }

    fn define(&mut self, a: usize, x: usize) -> Result<(), Overflowed> {
        if self.live >= self.max {
            self.lookahead();
            if self.live >= self.max {
                return Err(Overflowed);
            }
            if !self.is_live(a) || self.table[a][x] != NONE {
                return Ok(());
            }
        }
        let b = self.new_coset();
        self.table[a][x] = b;
        self.table[b][x ^ 1] = a;
        Ok(())
    }

    fn rep(&mut self, c: usize) -> usize {
        let mut root = c;
        while self.forward[root] != root {
            root = self.forward[root];
        }
        let mut at = c;
        while self.forward[at] != root {
            let next = self.forward[at];
            self.forward[at] = root;
            at = next;
        }
        root
    }

    fn merge(&mut self, k: usize, l: usize) {
        let (a, b) = (self.rep(k), self.rep(l));
        if a == b {
            return;
        }
        let (keep, drop) = (a.min(b), a.max(b));
        self.forward[drop] = keep;
        self.live -= 1;
        self.queue.push(drop);
    }

    fn coincidence(&mut self, a: usize, b: usize) {
        self.queue.clear();
        self.merge(a, b);
        let mut i = 0;
        while i < self.queue.len() {
            let g = self.queue[i];
            i += 1;
            for x in 0..self.cols {
                let d = self.table[g][x];
                if d == NONE {
                    continue;
                }
                if self.table[d][x ^ 1] == g {
                    self.table[d][x ^ 1] = NONE;
                }
                let (m, n) = (self.rep(g), self.rep(d));
                if self.table[m][x] != NONE {
                    let t = self.table[m][x];
                    self.merge(n, t);
                } else if self.table[n][x ^ 1] != NONE {
                    let t = self.table[n][x ^ 1];
                    self.merge(m, t);
                } else {
                    self.table[m][x] = n;
                    self.table[n][x ^ 1] = m;
                }
            }
        }
    }

    /// Scans `w` from `a`, filling gaps by definition when `fill` is set.
    fn scan(&mut self, a: usize, w: &[usize], fill: bool) -> Result<(), Overflowed> {
        if w.is_empty() {
            return Ok(());
        }
        let (mut f, mut b) = (a, a);
        let (mut i, mut j) = (0usize, w.len() as isize - 1);
        loop {
            while (i as isize) <= j && self.table[f][w[i]] != NONE {
                f = self.table[f][w[i]];
                i += 1;
            }
            if (i as isize) > j {
                if f != a {
                    self.coincidence(f, a);
                }
                return Ok(());
            }
            while j >= i as isize && self.table[b][w[j as usize] ^ 1] != NONE {
                b = self.table[b][w[j as usize] ^ 1];
                j -= 1;
            }
            if j < i as isize {
                self.coincidence(f, b);
                return Ok(());
            }
            if j == i as isize {
                self.table[f][w[i]] = b;
                self.table[b][w[i] ^ 1] = f;
                return Ok(());
            }
            if !fill {
                return Ok(());
            }
            self.define(f, w[i])?;
            if !self.is_live(a) {
                return Ok(());
            }
            // A lookahead inside `define` may have merged the cosets we hold.
            f = self.rep(f);
            b = self.rep(b);
        }
    }

    fn lookahead(&mut self) {
        let relators = std::mem::take(&mut self.relators);
        for c in 0..self.table.len() {
            for r in &relators {
                if !self.is_live(c) {
                    break;
                }
                let _ = self.scan(c, r, false);
            }
        }
        self.relators = relators;
    }

    fn run(&mut self) -> Result<(), Overflowed> {
        let mut a = 0;
        while a < self.table.len() {
            if self.is_live(a) {
                let relators = self.relators.clone();
                for r in &relators {
                    if !self.is_live(a) {
                        break;
                    }
                    self.scan(a, r, true)?;
                }
                for x in 0..self.cols {
                    if !self.is_live(a) {
                        break;
                    }
                    if self.table[a][x] == NONE {
                        self.define(a, x)?;
                    }
                }
            }
            a += 1;
        }
        Ok(())
    }

    /// Live cosets renumbered in breadth-first order from coset 0.
    fn standardize(&self) -> Vec<Vec<usize>> {
        let mut order = vec![NONE; self.table.len()];
        let mut seq = vec![0];
        order[0] = 0;
        let mut k = 0;
        while k < seq.len() {
            let c = seq[k];
            k += 1;
            for x in 0..self.cols {
                let d = self.table[c][x];
                if order[d] == NONE {
                    order[d] = seq.len();
                    seq.push(d);
                }
            }
        }
        seq.iter()
            .map(|&c| self.table[c].iter().map(|&d| order[d]).collect())
            .collect()
    }
}

/// Enumerates cosets of the trivial subgroup. On success the table has one
/// row per group element, numbered in breadth-first order.
pub fn todd_coxeter(p: &Presentation, max_cosets: usize) -> Result<CosetTable, EnumerateError> {
    let relators = p
        .relators()
        .iter()
        .map(|r| encode(p, r))
        .collect::<Result<Vec<_>, _>>()?;
    let mut e = Enumerator {
        cols: 2 * p.generators().len(),
        table: Vec::new(),
        forward: Vec::new(),
        live: 0,
        max: max_cosets.max(1),
        relators,
        queue: Vec::new(),
    };
    e.new_coset();
    e.run().map_err(|_| EnumerateError::Overflow { max_cosets })?;
    Ok(CosetTable {
        presentation: p.clone(),
        rows: e.standardize(),
        closed: true,
    })
}
