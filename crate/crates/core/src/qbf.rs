//! Quantified boolean formulas with the strictly alternating prefix
//! ∃x1 ∀x2 ∃x3 … over a 3-CNF matrix, plus a QDIMACS-subset reader.

use std::fmt;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::QbfError;

/// Variables are numbered from 0; variable `i` is existential iff `i` is even.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Literal {
    pub var: usize,
    pub negated: bool,
}

impl Literal {
    pub fn pos(var: usize) -> Self {
        Self { var, negated: false }
    }

    pub fn neg(var: usize) -> Self {
        Self { var, negated: true }
    }

    pub fn holds(self, assignment: &[bool]) -> bool {
        assignment[self.var] != self.negated
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            write!(f, "¬")?;
        }
        write!(f, "x{}", self.var + 1)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Qbf {
    n: usize,
    clauses: Vec<[Literal; 3]>,
}

impl Qbf {
    pub fn new(n: usize, clauses: Vec<[Literal; 3]>) -> Result<Self, QbfError> {
        if clauses.is_empty() {
            return Err(QbfError::NoClauses);
        }
        for (i, c) in clauses.iter().enumerate() {
            if let Some(l) = c.iter().find(|l| l.var >= n) {
                return Err(QbfError::UndeclaredVariable {
                    clause: i + 1,
                    var: l.var + 1,
                });
            }
        }
        Ok(Self { n, clauses })
    }

    pub fn var_count(&self) -> usize {
        self.n
    }

    pub fn clause_count(&self) -> usize {
        self.clauses.len()
    }

    pub fn clauses(&self) -> &[[Literal; 3]] {
        &self.clauses
    }

    pub fn is_existential(var: usize) -> bool {
        var % 2 == 0
    }

    pub fn satisfied_by(&self, assignment: &[bool]) -> bool {
        self.clauses
            .iter()
            .all(|c| c.iter().any(|l| l.holds(assignment)))
    }

    /// QDIMACS text with one quantifier line per variable.
    pub fn to_qdimacs(&self) -> String {
        let mut s = format!("p cnf {} {}\n", self.n, self.clauses.len());
        for v in 0..self.n {
            let q = if Self::is_existential(v) { 'e' } else { 'a' };
            s.push_str(&format!("{q} {} 0\n", v + 1));
        }
        for c in &self.clauses {
            for l in c {
                let x = l.var as i64 + 1;
                s.push_str(&format!("{} ", if l.negated { -x } else { x }));
            }
            s.push_str("0\n");
        }
        s
    }
}

impl fmt::Display for Qbf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in 0..self.n {
            let q = if Self::is_existential(v) { '∃' } else { '∀' };
            write!(f, "{q}x{}", v + 1)?;
        }
        write!(f, ":")?;
        for (i, c) in self.clauses.iter().enumerate() {
            if i > 0 {
                write!(f, " ∧")?;
            }
            write!(f, " ({} ∨ {} ∨ {})", c[0], c[1], c[2])?;
        }
        Ok(())
    }
}

/// Truth value by brute force over the quantifier tree.
pub fn qbf_eval(phi: &Qbf) -> bool {
    fn go(phi: &Qbf, assignment: &mut Vec<bool>) -> bool {
        let i = assignment.len();
        if i == phi.n {
            return phi.satisfied_by(assignment);
        }
        let mut branch = |b: bool| {
            assignment.push(b);
            let r = go(phi, assignment);
            assignment.pop();
            r
        };
        if Qbf::is_existential(i) {
            branch(false) || branch(true)
        } else {
            branch(false) && branch(true)
        }
    }
    go(phi, &mut Vec::with_capacity(phi.n))
}

/// Reads the QDIMACS subset: `c` comments, one `p cnf n k` header, quantifier
/// lines that alternate strictly starting with `e`, then 3-literal clauses.
/// Each quantifier block must list the next variables in order.
pub fn parse_qdimacs(text: &str) -> Result<Qbf, QbfError> {
    let mut header: Option<(usize, usize)> = None;
    let mut declared = 0usize;
    let mut clauses = Vec::new();
    let parse_err = |line: usize, msg: String| QbfError::Parse { line, msg };

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks[0] == "p" {
            if header.is_some() {
                return Err(parse_err(line_no, "second problem line".into()));
            }
            if toks.len() != 4 || toks[1] != "cnf" {
                return Err(parse_err(line_no, "expected `p cnf <vars> <clauses>`".into()));
            }
            let n = toks[2]
                .parse()
                .map_err(|_| parse_err(line_no, format!("bad variable count `{}`", toks[2])))?;
            let k = toks[3]
                .parse()
                .map_err(|_| parse_err(line_no, format!("bad clause count `{}`", toks[3])))?;
            header = Some((n, k));
            continue;
        }
        let Some((n, _)) = header else {
            return Err(parse_err(line_no, "missing `p cnf` header".into()));
        };
        let nums = |toks: &[&str]| -> Result<Vec<i64>, QbfError> {
            toks.iter()
                .map(|t| {
                    t.parse::<i64>()
                        .map_err(|_| parse_err(line_no, format!("bad integer `{t}`")))
                })
                .collect()
        };
        if toks[0] == "e" || toks[0] == "a" {
            if !clauses.is_empty() {
                return Err(parse_err(line_no, "quantifier after clauses".into()));
            }
            let q = toks[0].chars().next().unwrap_or('e');
            let vars = nums(&toks[1..])?;
            if vars.last() != Some(&0) {
                return Err(parse_err(line_no, "quantifier line must end with 0".into()));
            }
            for &v in &vars[..vars.len() - 1] {
                let expected_q = if declared % 2 == 0 { 'e' } else { 'a' };
                if q != expected_q {
                    return Err(QbfError::Alternation(format!(
                        "line {line_no}: variable {v} is quantified `{q}`, expected `{expected_q}`"
                    )));
                }
                if v != declared as i64 + 1 || v as usize > n {
                    return Err(parse_err(
                        line_no,
                        format!("expected variable {} next in the prefix, found {v}", declared + 1),
                    ));
                }
                declared += 1;
            }
            continue;
        }
        let lits = nums(&toks)?;
        if lits.last() != Some(&0) {
            return Err(parse_err(line_no, "clause must end with 0".into()));
        }
        let body = &lits[..lits.len() - 1];
        let clause_no = clauses.len() + 1;
        if body.len() != 3 {
            return Err(QbfError::Arity {
                clause: clause_no,
                arity: body.len(),
            });
        }
        let mut c = [Literal::pos(0); 3];
        for (slot, &x) in c.iter_mut().zip(body) {
            let var = x.unsigned_abs() as usize;
            if x == 0 || var > declared {
                return Err(QbfError::UndeclaredVariable {
                    clause: clause_no,
                    var,
                });
            }
            *slot = Literal {
                var: var - 1,
                negated: x < 0,
            };
        }
        clauses.push(c);
    }
    let Some((n, k)) = header else {
        return Err(parse_err(0, "missing `p cnf` header".into()));
    };
    if declared != n {
        return Err(parse_err(
            0,
            format!("header declares {n} variables, prefix quantifies {declared}"),
        ));
    }
    if clauses.len() != k {
        return Err(parse_err(
            0,
            format!("header declares {k} clauses, found {}", clauses.len()),
        ));
    }
    Qbf::new(n, clauses)
}

/// Every 3-literal clause over `n` variables, literals sorted, repetition allowed.
fn all_clauses(n: usize) -> Vec<[Literal; 3]> {
    let lits: Vec<Literal> = (0..n).flat_map(|v| [Literal::pos(v), Literal::neg(v)]).collect();
    let mut out = Vec::new();
    for a in 0..lits.len() {
        for b in a..lits.len() {
            for c in b..lits.len() {
                out.push([lits[a], lits[b], lits[c]]);
            }
        }
    }
    out
}

/// Deterministic sample of `count` distinct formulas with exactly `n` variables and
/// `k` clauses (clause multisets, so fewer are returned when the space is smaller).
pub fn sample_formulas(n: usize, k: usize, count: usize, seed: u64) -> Vec<Qbf> {
    let pool = all_clauses(n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = std::collections::BTreeSet::new();
    let total = multiset_count(pool.len(), k);
    let target = count.min(total);
    let mut out = Vec::new();
    if total <= count {
        let mut idx = vec![0usize; k];
        loop {
            out.push(Qbf::new(n, idx.iter().map(|&i| pool[i]).collect()).expect("valid"));
            let Some(pos) = (0..k).rev().find(|&p| idx[p] + 1 < pool.len()) else {
                break;
            };
            idx[pos] += 1;
            for q in pos + 1..k {
                idx[q] = idx[pos];
            }
        }
        return out;
    }
    while out.len() < target {
        let mut idx: Vec<usize> = (0..k).map(|_| rng.gen_range(0..pool.len())).collect();
        idx.sort_unstable();
        if seen.insert(idx.clone()) {
            out.push(Qbf::new(n, idx.iter().map(|&i| pool[i]).collect()).expect("valid"));
        }
    }
    out
}

fn multiset_count(items: usize, k: usize) -> usize {
    // C(items + k - 1, k), saturating
    let mut r: u128 = 1;
    for i in 0..k as u128 {
        r = r * (items as u128 + i) / (i + 1);
    }
    r.min(usize::MAX as u128) as usize
}
