//! Bott–Borel–Weil cohomology of homogeneous bundles on the flag variety `Z`
//! of G2 and its two parabolic quotients `Q` (isotropic lines) and `Y`
//! (anti-self-dual planes).
//!
//! A homogeneous bundle is recorded by its label multiset, where the label of
//! a weight space is minus its fiber weight at the base flag. With this
//! convention a line bundle with dominant label `λ` has `H^0 = V(λ)`.

mod bundle;
mod ledger;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rep::{dominant_conjugate, IrrepSum, Weight, RHO};

pub use bundle::{parse_expr, BundleDesc, BundleExpr, Constituent, Registry};
pub use ledger::{
    long_sequence_exact, run_chain, run_chain_with, BranchReport, BundleReport, Chain, ChainNode, ChainVariable,
    FlagNote, JointSolution, LedgerReport, NodeKind, VariableReport, DEFAULT_CHAIN,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BbwError {
    #[error("label {0} is not dominant for the Levi factor of {1}")]
    NotLeviDominant(Weight, Space),
    #[error("unknown bundle name `{0}` on {1}")]
    UnknownName(String, Space),
    #[error("label multiset does not split into Levi strings (at {0})")]
    NotStringDecomposable(Weight),
    #[error("malformed bundle expression: {0}")]
    Syntax(String),
    #[error("bundle `{0}` is not a subbundle of `{1}`")]
    NotASubbundle(String, String),
    #[error("no branch survives the chain (first contradiction at node `{0}`)")]
    InconsistentChain(String),
    #[error("bad chain definition: {0}")]
    BadChain(String),
    #[error(transparent)]
    Octonion(#[from] crate::octonion::OctonionError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Space {
    Z,
    Q,
    Y,
}

impl Space {
    /// Simple root in the Levi factor of the parabolic; none for the Borel.
    pub fn levi_root(self) -> Option<Weight> {
        match self {
            Space::Z => None,
            Space::Q => Some(crate::rep::BETA),
            Space::Y => Some(crate::rep::ALPHA),
        }
    }

    /// Pairing with the Levi simple coroot.
    pub fn levi_pairing(self, mu: Weight) -> Option<i64> {
        match self {
            Space::Z => None,
            Space::Q => Some(mu.n),
            Space::Y => Some(mu.m),
        }
    }

    /// Grading by the coefficient of the simple root outside the Levi factor
    /// (by height on `Z`). Subbundles sit in lower grades.
    pub fn grade(self, mu: Weight) -> i64 {
        let (a, b) = mu.to_root_coords();
        match self {
            Space::Z => a + b,
            Space::Q => a,
            Space::Y => b,
        }
    }

    pub fn dim(self) -> usize {
        match self {
            Space::Z => 6,
            Space::Q | Space::Y => 5,
        }
    }
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl std::str::FromStr for Space {
    type Err = BbwError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "Z" => Ok(Space::Z),
            "Q" => Ok(Space::Q),
            "Y" => Ok(Space::Y),
            _ => Err(BbwError::Syntax(format!("unknown space `{s}`"))),
        }
    }
}

/// Cohomology of an irreducible homogeneous bundle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "result")]
pub enum LineCohomology {
    AllZero,
    Concentrated { degree: usize, irrep: Weight },
}

/// Borel–Weil–Bott for the line bundle with label `lambda` on `Z`.
pub fn bbw_line(lambda: Weight) -> LineCohomology {
    let shifted = lambda + RHO;
    if !shifted.is_regular() {
        return LineCohomology::AllZero;
    }
    let (d, len) = dominant_conjugate(shifted);
    LineCohomology::Concentrated { degree: len, irrep: d - RHO }
}

/// Cohomology of the Levi-irreducible bundle with highest label `mu`.
pub fn bbw_irred(space: Space, mu: Weight) -> Result<LineCohomology, BbwError> {
    if space.levi_pairing(mu).is_some_and(|p| p < 0) {
        return Err(BbwError::NotLeviDominant(mu, space));
    }
    Ok(bbw_line(mu))
}

/// Cohomology groups by degree; empty degrees are omitted.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct CohProfile(pub BTreeMap<usize, IrrepSum>);

impl CohProfile {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn degree(&self, j: usize) -> IrrepSum {
        self.0.get(&j).cloned().unwrap_or_default()
    }

    pub fn add(&mut self, j: usize, x: Weight, k: i64) {
        let e = self.0.entry(j).or_default();
        e.add(x, k);
        if e.is_empty() {
            self.0.remove(&j);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn max_degree(&self) -> Option<usize> {
        self.0.keys().next_back().copied()
    }

    /// `Σ (−1)^j H^j`.
    pub fn euler(&self) -> IrrepSum {
        let mut out = IrrepSum::new();
        for (j, h) in &self.0 {
            out = out.plus(&h.scaled(if j % 2 == 0 { 1 } else { -1 }));
        }
        out
    }

    /// Multiplicity of `x` in each degree up to `top`.
    pub fn mults(&self, x: Weight, top: usize) -> Vec<i64> {
        (0..=top).map(|j| self.0.get(&j).map_or(0, |h| h.mult(x))).collect()
    }

    /// Every irreducible occurring in some degree.
    pub fn isotypes(&self) -> BTreeSet<Weight> {
        self.0.values().flat_map(|h| h.iter().map(|(x, _)| x)).collect()
    }

    pub fn plus(&self, o: &CohProfile) -> CohProfile {
        let mut out = self.clone();
        for (j, h) in &o.0 {
            for (x, k) in h.iter() {
                out.add(*j, x, k);
            }
        }
        out
    }
}

impl fmt::Display for CohProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.0.iter().map(|(j, h)| format!("H^{j} = {h}")).collect();
        write!(f, "{}", parts.join("; "))
    }
}

impl fmt::Debug for CohProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Possible cohomology profiles of one bundle, sorted and deduplicated.
pub type BranchSet = BTreeSet<CohProfile>;

/// `E1` entries of a single isotype: `(grade, degree) → multiplicity`.
type Entries = BTreeMap<(i64, usize), i64>;

/// All degree vectors reachable from `entries` by cancelling pairs
/// `(g, j)` against `(g', j + 1)` with `g' < g`, in any amount.
fn cancellation_outcomes(entries: &Entries, top: usize) -> BTreeSet<Vec<i64>> {
    let keys: Vec<(i64, usize)> = entries.keys().copied().collect();
    let edges: Vec<(usize, usize)> = (0..keys.len())
        .flat_map(|s| (0..keys.len()).map(move |t| (s, t)))
        .filter(|&(s, t)| keys[t].1 == keys[s].1 + 1 && keys[t].0 < keys[s].0)
        .collect();
    let mut cap: Vec<i64> = keys.iter().map(|k| entries[k]).collect();
    let mut out = BTreeSet::new();
    fn go(
        e: usize,
        edges: &[(usize, usize)],
        keys: &[(i64, usize)],
        cap: &mut Vec<i64>,
        top: usize,
        out: &mut BTreeSet<Vec<i64>>,
    ) {
        if e == edges.len() {
            let mut v = vec![0; top + 1];
            for (k, c) in keys.iter().zip(cap.iter()) {
                v[k.1] += c;
            }
            out.insert(v);
            return;
        }
        let (s, t) = edges[e];
        let most = cap[s].min(cap[t]);
        for x in 0..=most {
            cap[s] -= x;
            cap[t] -= x;
            go(e + 1, edges, keys, cap, top, out);
            cap[s] += x;
            cap[t] += x;
        }
    }
    go(0, &edges, &keys, &mut cap, top, &mut out);
    out
}

/// `E1` page of the filtration spectral sequence, per isotype.
fn e1_page(b: &BundleDesc) -> Result<BTreeMap<Weight, Entries>, BbwError> {
    let mut page: BTreeMap<Weight, Entries> = BTreeMap::new();
    for c in &b.constituents {
        if let LineCohomology::Concentrated { degree, irrep } = bbw_irred(b.space, c.highest)? {
            *page.entry(irrep).or_default().entry((c.grade, degree)).or_insert(0) += 1;
        }
    }
    Ok(page)
}

/// Branch set from the associated graded bundle: every outcome of the legal
/// cancellations between isomorphic summands in adjacent degrees.
pub fn gr_cohomology(b: &BundleDesc) -> Result<BranchSet, BbwError> {
    let top = b.space.dim();
    let mut partial: Vec<CohProfile> = vec![CohProfile::zero()];
    for (x, entries) in e1_page(b)? {
        let outcomes = cancellation_outcomes(&entries, top.max(entries.keys().map(|k| k.1).max().unwrap_or(0)));
        let mut next = Vec::with_capacity(partial.len() * outcomes.len());
        for p in &partial {
            for v in &outcomes {
                let mut q = p.clone();
                for (j, &k) in v.iter().enumerate() {
                    q.add(j, x, k);
                }
                next.push(q);
            }
        }
        partial = next;
    }
    Ok(partial.into_iter().filter(|p| p.max_degree().is_none_or(|d| d <= top)).collect())
}

/// Alternating sum of the constituent cohomologies.
pub fn euler_char(b: &BundleDesc) -> Result<IrrepSum, BbwError> {
    let mut out = IrrepSum::new();
    for c in &b.constituents {
        if let LineCohomology::Concentrated { degree, irrep } = bbw_irred(b.space, c.highest)? {
            out.add(irrep, if degree % 2 == 0 { 1 } else { -1 });
        }
    }
    Ok(out)
}
