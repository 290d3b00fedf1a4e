//! Constraint propagation over short exact sequences of bundles.
//!
//! Each bundle starts with the branch set of its associated graded bundle.
//! Nodes then restrict the admissible combinations: a short exact sequence
//! needs an exact long cohomology sequence in every isotype, an isomorphism
//! needs equal profiles and a splitting needs additive ones. Surviving joint
//! assignments are enumerated by backtracking.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::{euler_char, gr_cohomology, BbwError, BranchSet, CohProfile, Registry, Space};
use crate::rep::{IrrepSum, Weight};

/// The cohomology chain of the quadric shipped with the crate.
pub const DEFAULT_CHAIN: &str = include_str!("../../resources/paper-chain.json");

/// Safety valve on the number of joint assignments enumerated.
const MAX_SOLUTIONS: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NodeKind {
    /// `0 → sub → mid → quot → 0`.
    #[default]
    Ses,
    /// `sub ≅ mid`.
    Iso,
    /// `mid = sub ⊕ quot`.
    Split,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainNode {
    pub name: String,
    #[serde(default)]
    pub kind: NodeKind,
    pub sub: String,
    pub mid: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quot: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub space: Option<Space>,
    /// Profiles fixed by hand, keyed by `sub`, `mid` or `quot`.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub pin: BTreeMap<String, CohProfile>,
    /// Free-text remark carried into the report.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub flag: Option<String>,
}

/// Multiplicity of `irrep` in `H^degree` of `bundle`, reported per branch.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainVariable {
    pub name: String,
    pub bundle: String,
    pub degree: usize,
    pub irrep: Weight,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Chain {
    #[serde(default)]
    pub version: Option<String>,
    #[serde(default = "default_space")]
    pub space: Space,
    #[serde(default)]
    pub variable: Option<ChainVariable>,
    pub nodes: Vec<ChainNode>,
}

fn default_space() -> Space {
    Space::Q
}

#[derive(Deserialize)]
#[serde(untagged)]
enum ChainFile {
    Full(Chain),
    Bare(Vec<ChainNode>),
}

impl Chain {
    /// Accepts either a full chain object or a bare list of nodes on `Q`.
    pub fn from_json(src: &str) -> Result<Self, BbwError> {
        match serde_json::from_str::<ChainFile>(src).map_err(|e| BbwError::BadChain(e.to_string()))? {
            ChainFile::Full(c) => Ok(c),
            ChainFile::Bare(nodes) => Ok(Chain { version: None, space: Space::Q, variable: None, nodes }),
        }
    }

    pub fn standard() -> Self {
        Self::from_json(DEFAULT_CHAIN).expect("shipped chain parses")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BranchReport {
    pub profile: CohProfile,
    /// Values of the chain variable over joint solutions using this profile.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub variable: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BundleReport {
    pub bundle: String,
    pub space: Space,
    pub euler: IrrepSum,
    pub graded_branches: usize,
    pub branches: Vec<BranchReport>,
}

impl BundleReport {
    pub fn profiles(&self) -> BranchSet {
        self.branches.iter().map(|b| b.profile.clone()).collect()
    }

    pub fn is_singleton(&self) -> bool {
        self.branches.len() == 1
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct JointSolution {
    pub profiles: Vec<CohProfile>,
    pub variable: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FlagNote {
    pub node: String,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LedgerReport {
    pub bundles: Vec<BundleReport>,
    pub solutions: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub variable: Option<VariableReport>,
    pub euler_consistent: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub flags: Vec<FlagNote>,
    #[serde(skip)]
    pub joint: Vec<JointSolution>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VariableReport {
    pub name: String,
    pub values: BTreeSet<i64>,
}

impl LedgerReport {
    /// Report for the bundle written as `expr` (canonicalised by parsing).
    pub fn bundle(&self, expr: &str) -> Option<&BundleReport> {
        let key = super::parse_expr(expr).ok()?.to_string();
        self.bundles.iter().find(|b| b.bundle == key)
    }
}

#[derive(Debug, Clone)]
enum Constraint {
    Ses([usize; 3]),
    Iso([usize; 2]),
    Split([usize; 3]),
}

impl Constraint {
    fn ids(&self) -> &[usize] {
        match self {
            Constraint::Ses(v) | Constraint::Split(v) => v,
            Constraint::Iso(v) => v,
        }
    }

    fn holds(&self, p: &[&CohProfile], top: usize) -> bool {
        match self {
            Constraint::Ses(_) => long_sequence_exact(p[0], p[1], p[2], top),
            Constraint::Iso(_) => p[0] == p[1],
            Constraint::Split(_) => p[1] == &p[0].plus(p[2]),
        }
    }
}

/// Integer exactness of `… → H^j(A) → H^j(B) → H^j(C) → H^{j+1}(A) → …` in
/// each isotype: the forced ranks must stay non-negative and end at zero.
pub fn long_sequence_exact(a: &CohProfile, b: &CohProfile, c: &CohProfile, top: usize) -> bool {
    let mut isotypes = a.isotypes();
    isotypes.extend(b.isotypes());
    isotypes.extend(c.isotypes());
    isotypes.into_iter().all(|x| {
        let (ma, mb, mc) = (a.mults(x, top), b.mults(x, top), c.mults(x, top));
        let mut rank = 0i64;
        for j in 0..=top {
            for d in [ma[j], mb[j], mc[j]] {
                rank = d - rank;
                if rank < 0 {
                    return false;
                }
            }
        }
        rank == 0
    })
}

struct Problem {
    keys: Vec<(Space, String)>,
    domains: Vec<Vec<CohProfile>>,
    constraints: Vec<(String, Constraint)>,
    top: usize,
}

impl Problem {
    fn satisfiable(&self, ci: usize, fixed: usize, value: &CohProfile) -> bool {
        let c = &self.constraints[ci].1;
        let ids = c.ids();
        let mut choice: Vec<&CohProfile> = Vec::with_capacity(ids.len());
        fn search<'a>(
            p: &'a Problem,
            c: &Constraint,
            ids: &[usize],
            fixed: usize,
            value: &'a CohProfile,
            choice: &mut Vec<&'a CohProfile>,
        ) -> bool {
            let k = choice.len();
            if k == ids.len() {
                return c.holds(choice, p.top);
            }
            if ids[k] == fixed {
                choice.push(value);
                let ok = search(p, c, ids, fixed, value, choice);
                choice.pop();
                return ok;
            }
            for v in &p.domains[ids[k]] {
                choice.push(v);
                if search(p, c, ids, fixed, value, choice) {
                    choice.pop();
                    return true;
                }
                choice.pop();
            }
            false
        }
        search(self, c, ids, fixed, value, &mut choice)
    }

    /// Removes domain values without support in some constraint, to fixpoint.
    fn prune(&mut self) -> Result<(), BbwError> {
        loop {
            let mut changed = false;
            for ci in 0..self.constraints.len() {
                let ids: Vec<usize> = self.constraints[ci].1.ids().to_vec();
                for &b in &ids {
                    let keep: Vec<CohProfile> =
                        self.domains[b].iter().filter(|v| self.satisfiable(ci, b, v)).cloned().collect();
                    if keep.is_empty() {
                        return Err(BbwError::InconsistentChain(self.constraints[ci].0.clone()));
                    }
                    if keep.len() != self.domains[b].len() {
                        self.domains[b] = keep;
                        changed = true;
                    }
                }
            }
            if !changed {
                return Ok(());
            }
        }
    }

    fn enumerate(&self) -> Result<Vec<Vec<usize>>, BbwError> {
        let n = self.keys.len();
        // A constraint is checked once its last bundle (in order) is assigned.
        let mut due: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (ci, (_, c)) in self.constraints.iter().enumerate() {
            let last = *c.ids().iter().max().expect("constraint has bundles");
            due[last].push(ci);
        }
        let mut out = Vec::new();
        let mut pick = Vec::with_capacity(n);
        self.extend(&due, &mut pick, &mut out)?;
        Ok(out)
    }

    fn extend(&self, due: &[Vec<usize>], pick: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) -> Result<(), BbwError> {
        let k = pick.len();
        if k == self.keys.len() {
            if out.len() >= MAX_SOLUTIONS {
                return Err(BbwError::BadChain(format!("more than {MAX_SOLUTIONS} joint solutions")));
            }
            out.push(pick.clone());
            return Ok(());
        }
        for v in 0..self.domains[k].len() {
            pick.push(v);
            let ok = due[k].iter().all(|&ci| {
                let c = &self.constraints[ci].1;
                let vals: Vec<&CohProfile> = c.ids().iter().map(|&b| &self.domains[b][pick[b]]).collect();
                c.holds(&vals, self.top)
            });
            if ok {
                self.extend(due, pick, out)?;
            }
            pick.pop();
        }
        Ok(())
    }
}

/// Runs the chain over the standard registry.
pub fn run_chain(chain: &Chain) -> Result<LedgerReport, BbwError> {
    run_chain_with(chain, Registry::standard())
}

/// Runs the chain over an explicit registry.
pub fn run_chain_with(chain: &Chain, registry: &Registry) -> Result<LedgerReport, BbwError> {
    let mut keys: Vec<(Space, String)> = Vec::new();
    let mut index: BTreeMap<(Space, String), usize> = BTreeMap::new();
    let mut descs = Vec::new();
    let mut intern = |space: Space, src: &str| -> Result<usize, BbwError> {
        let expr = super::parse_expr(src)?;
        let key = (space, expr.to_string());
        if let Some(&i) = index.get(&key) {
            return Ok(i);
        }
        descs.push(registry.bundle(space, &expr)?);
        keys.push(key.clone());
        index.insert(key, keys.len() - 1);
        Ok(keys.len() - 1)
    };

    let mut constraints = Vec::new();
    let mut pins: Vec<(usize, CohProfile)> = Vec::new();
    let mut flags = Vec::new();
    for node in &chain.nodes {
        let space = node.space.unwrap_or(chain.space);
        let sub = intern(space, &node.sub)?;
        let mid = intern(space, &node.mid)?;
        let quot = node.quot.as_deref().map(|q| intern(space, q)).transpose()?;
        let c = match (node.kind, quot) {
            (NodeKind::Ses, Some(q)) => Constraint::Ses([sub, mid, q]),
            (NodeKind::Split, Some(q)) => Constraint::Split([sub, mid, q]),
            (NodeKind::Iso, None) => Constraint::Iso([sub, mid]),
            _ => return Err(BbwError::BadChain(format!("node `{}` has the wrong number of terms", node.name))),
        };
        for (slot, prof) in &node.pin {
            let id = match slot.as_str() {
                "sub" => sub,
                "mid" => mid,
                "quot" => quot.ok_or_else(|| BbwError::BadChain(format!("node `{}` pins a missing quot", node.name)))?,
                _ => return Err(BbwError::BadChain(format!("node `{}` pins unknown slot `{slot}`", node.name))),
            };
            pins.push((id, prof.clone()));
        }
        if let Some(note) = &node.flag {
            flags.push(FlagNote { node: node.name.clone(), note: note.clone() });
        }
        constraints.push((node.name.clone(), c));
    }
    let var_id = match &chain.variable {
        Some(v) => Some(intern(chain.space, &v.bundle)?),
        None => None,
    };

    let top = Space::Z.dim();
    let mut graded = Vec::with_capacity(descs.len());
    let mut domains = Vec::with_capacity(descs.len());
    for d in &descs {
        let mut set = gr_cohomology(d)?;
        graded.push(set.len());
        if let Some(fiber) = &d.trivial_fiber {
            let known = CohProfile([(0, fiber.clone())].into_iter().collect());
            if !set.contains(&known) {
                return Err(BbwError::InconsistentChain(format!("product bundle {}", d.name)));
            }
            set = [known].into_iter().collect();
        }
        domains.push(set.into_iter().collect::<Vec<_>>());
    }
    for (id, prof) in pins {
        domains[id].retain(|p| *p == prof);
        if domains[id].is_empty() {
            return Err(BbwError::InconsistentChain(format!("pin on {}", keys[id].1)));
        }
    }

    let mut problem = Problem { keys, domains, constraints, top };
    problem.prune()?;
    let picks = problem.enumerate()?;
    if picks.is_empty() {
        return Err(BbwError::InconsistentChain("joint enumeration".into()));
    }

    let var = chain.variable.as_ref().zip(var_id);
    let var_value = |pick: &[usize]| {
        var.map(|(v, id)| problem.domains[id][pick[id]].degree(v.degree).mult(v.irrep))
    };
    let mut used: Vec<BTreeMap<usize, BTreeSet<i64>>> = vec![BTreeMap::new(); problem.keys.len()];
    let mut joint = Vec::with_capacity(picks.len());
    for pick in &picks {
        let value = var_value(pick);
        for (b, &v) in pick.iter().enumerate() {
            let e = used[b].entry(v).or_default();
            e.extend(value);
        }
        joint.push(JointSolution {
            profiles: pick.iter().enumerate().map(|(b, &v)| problem.domains[b][v].clone()).collect(),
            variable: value,
        });
    }

    let mut euler_consistent = true;
    let mut bundles = Vec::with_capacity(descs.len());
    for (b, d) in descs.iter().enumerate() {
        let euler = euler_char(d)?;
        let branches: Vec<BranchReport> = used[b]
            .iter()
            .map(|(&v, vals)| BranchReport { profile: problem.domains[b][v].clone(), variable: vals.iter().copied().collect() })
            .collect();
        euler_consistent &= branches.iter().all(|br| br.profile.euler() == euler);
        bundles.push(BundleReport {
            bundle: d.name.clone(),
            space: d.space,
            euler,
            graded_branches: graded[b],
            branches,
        });
    }
    let variable = var.map(|(v, _)| VariableReport {
        name: v.name.clone(),
        values: joint.iter().filter_map(|j| j.variable).collect(),
    });
    Ok(LedgerReport { bundles, solutions: joint.len(), variable, euler_consistent, flags, joint })
}
