//! Ladder-operator algebra on occupation vectors, independent of the
//! library's matrix builders.
#![allow(dead_code)]

use std::collections::BTreeMap;

use triwell::fock::FockBasis;

pub type Occ = [usize; 3];

/// A term `sign * coeff * sqrt(radicand) |occ>`; the radicand is an exact
/// integer so that the square root is taken once, at the end.
#[derive(Clone, Copy, Debug)]
struct Term {
    occ: Occ,
    coeff: f64,
    radicand: u64,
}

fn annihilate(t: Term, k: usize) -> Option<Term> {
    let n = t.occ[k];
    if n == 0 {
        return None;
    }
    let mut occ = t.occ;
    occ[k] -= 1;
    Some(Term { occ, coeff: t.coeff, radicand: t.radicand * n as u64 })
}

fn create(t: Term, k: usize) -> Term {
    let mut occ = t.occ;
    occ[k] += 1;
    Term { occ, coeff: t.coeff, radicand: t.radicand * (t.occ[k] as u64 + 1) }
}

fn number(t: Term, k: usize) -> Term {
    Term { coeff: t.coeff * t.occ[k] as f64, ..t }
}

/// `a_i^dagger a_j |occ>`.
fn hop(occ: Occ, i: usize, j: usize) -> Option<Term> {
    annihilate(Term { occ, coeff: 1.0, radicand: 1 }, j).map(|t| create(t, i))
}

fn collect(terms: impl IntoIterator<Item = Term>) -> BTreeMap<Occ, f64> {
    let mut out = BTreeMap::new();
    for t in terms {
        *out.entry(t.occ).or_insert(0.0) += t.coeff * (t.radicand as f64).sqrt();
    }
    out
}

pub fn apply_h(occ: Occ, u: f64, j: f64, eps: f64, n_total: usize) -> BTreeMap<Occ, f64> {
    let unit = Term { occ, coeff: 1.0, radicand: 1 };
    let imbalance = number(unit, 0).coeff - number(unit, 1).coeff + number(unit, 2).coeff;
    let mut terms = vec![Term {
        occ,
        coeff: u / n_total as f64 * imbalance * imbalance + eps * (number(unit, 2).coeff - number(unit, 0).coeff),
        radicand: 1,
    }];
    let amp = j / 2f64.sqrt();
    for (a, b) in [(0, 1), (1, 0), (1, 2), (2, 1)] {
        if let Some(t) = hop(occ, a, b) {
            terms.push(Term { coeff: amp, ..t });
        }
    }
    collect(terms)
}

pub fn apply_q(occ: Occ) -> BTreeMap<Occ, f64> {
    let mut terms = vec![Term { occ, coeff: (occ[0] + occ[2]) as f64, radicand: 1 }];
    for (a, b) in [(0, 2), (2, 0)] {
        if let Some(t) = hop(occ, a, b) {
            terms.push(Term { coeff: -1.0, ..t });
        }
    }
    collect(terms)
}

pub fn dense_from<F: Fn(Occ) -> BTreeMap<Occ, f64>>(basis: &FockBasis, op: F) -> Vec<Vec<f64>> {
    let d = basis.dim();
    let mut m = vec![vec![0.0; d]; d];
    for (col, s) in basis.states().iter().enumerate() {
        for (occ, v) in op([s.n1, s.n2, s.n3]) {
            let row = basis.index_of(occ[0], occ[2]).expect("operator left the N sector");
            m[row][col] += v;
        }
    }
    m
}

