//! Bundle expressions over a registry of named homogeneous bundles.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use serde::{Serialize, Serializer};

use super::{BbwError, Space};
use crate::octonion::{CartanData, Octonions};
use crate::rep::{weight_system, IrrepSum, Weight, WeightMultiset};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BundleExpr {
    Name(String),
    Dual(Box<BundleExpr>),
    Tensor(Vec<BundleExpr>),
    Sum(Vec<BundleExpr>),
    Sym2(Box<BundleExpr>),
    Wedge2(Box<BundleExpr>),
    /// Product bundle with fiber `V(λ)`.
    Trivial(Weight),
    /// Quotient of the first bundle by the second.
    Quot(Box<BundleExpr>, Box<BundleExpr>),
}

impl fmt::Display for BundleExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |f: &mut fmt::Formatter<'_>, head: &str, xs: &[BundleExpr]| {
            let parts: Vec<String> = xs.iter().map(ToString::to_string).collect();
            write!(f, "{head}({})", parts.join(","))
        };
        match self {
            BundleExpr::Name(s) => write!(f, "{s}"),
            BundleExpr::Dual(x) => write!(f, "dual({x})"),
            BundleExpr::Tensor(xs) => list(f, "tensor", xs),
            BundleExpr::Sum(xs) => list(f, "sum", xs),
            BundleExpr::Sym2(x) => write!(f, "sym2({x})"),
            BundleExpr::Wedge2(x) => write!(f, "wedge2({x})"),
            BundleExpr::Trivial(x) => write!(f, "trivial({},{})", x.m, x.n),
            BundleExpr::Quot(a, b) => write!(f, "quot({a},{b})"),
        }
    }
}

impl Serialize for BundleExpr {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, what: &str) -> BbwError {
        BbwError::Syntax(format!("{what} at offset {} in `{}`", self.pos, self.src))
    }

    fn skip_ws(&mut self) {
        while self.src[self.pos..].starts_with(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), BbwError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(&format!("expected `{c}`")))
        }
    }

    fn token(&mut self) -> Result<&str, BbwError> {
        self.skip_ws();
        let start = self.pos;
        let rest = &self.src[start..];
        let len = rest.find(|c: char| !(c.is_ascii_alphanumeric() || c == '_' || c == '-')).unwrap_or(rest.len());
        if len == 0 {
            return Err(self.err("expected a name"));
        }
        self.pos += len;
        Ok(&self.src[start..start + len])
    }

    fn int(&mut self) -> Result<i64, BbwError> {
        let t = self.token()?.to_string();
        t.parse().map_err(|_| self.err(&format!("expected an integer, got `{t}`")))
    }

    fn args(&mut self) -> Result<Vec<BundleExpr>, BbwError> {
        self.expect('(')?;
        let mut out = vec![self.expr()?];
        while self.eat(',') {
            out.push(self.expr()?);
        }
        self.expect(')')?;
        Ok(out)
    }

    fn one(&mut self) -> Result<Box<BundleExpr>, BbwError> {
        let mut a = self.args()?;
        if a.len() != 1 {
            return Err(self.err("expected one argument"));
        }
        Ok(Box::new(a.remove(0)))
    }

    fn expr(&mut self) -> Result<BundleExpr, BbwError> {
        let head = self.token()?.to_string();
        Ok(match head.as_str() {
            "dual" => BundleExpr::Dual(self.one()?),
            "sym2" => BundleExpr::Sym2(self.one()?),
            "wedge2" => BundleExpr::Wedge2(self.one()?),
            "tensor" => BundleExpr::Tensor(self.args()?),
            "sum" => BundleExpr::Sum(self.args()?),
            "quot" => {
                let mut a = self.args()?;
                if a.len() != 2 {
                    return Err(self.err("quot takes two arguments"));
                }
                let b = a.pop().expect("two");
                BundleExpr::Quot(Box::new(a.pop().expect("two")), Box::new(b))
            }
            "trivial" => {
                self.expect('(')?;
                let m = self.int()?;
                self.expect(',')?;
                let n = self.int()?;
                self.expect(')')?;
                BundleExpr::Trivial(crate::rep::w(m, n))
            }
            _ => BundleExpr::Name(head),
        })
    }
}

/// Parses `dual(E)`, `tensor(a, b, ...)`, `sum(...)`, `sym2(...)`,
/// `wedge2(...)`, `quot(a, b)`, `trivial(m, n)` and registered names.
pub fn parse_expr(src: &str) -> Result<BundleExpr, BbwError> {
    let mut p = Parser { src, pos: 0 };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != src.len() {
        return Err(p.err("trailing input"));
    }
    Ok(e)
}

/// Levi-irreducible piece of a bundle: the Levi string below `highest`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Constituent {
    pub highest: Weight,
    pub grade: i64,
    pub labels: Vec<Weight>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BundleDesc {
    pub space: Space,
    pub name: String,
    pub labels: WeightMultiset,
    /// Ordered from the deepest subbundle to the top quotient.
    pub constituents: Vec<Constituent>,
    /// Fiber of a product bundle, whose cohomology is known outright.
    pub trivial_fiber: Option<IrrepSum>,
}

impl BundleDesc {
    pub fn from_labels(space: Space, name: &str, labels: WeightMultiset) -> Result<Self, BbwError> {
        let constituents = restring(space, &labels)?;
        Ok(Self { space, name: name.to_string(), labels, constituents, trivial_fiber: None })
    }

    pub fn rank(&self) -> i64 {
        self.labels.values().sum()
    }

    /// Labels as a sorted list with repetitions.
    pub fn label_list(&self) -> Vec<Weight> {
        self.labels.iter().flat_map(|(x, k)| std::iter::repeat_n(*x, *k as usize)).collect()
    }
}

/// Levi string `μ, μ − r, …, μ − ⟨μ, r∨⟩ r`.
fn levi_string(space: Space, mu: Weight) -> Vec<Weight> {
    match (space.levi_root(), space.levi_pairing(mu)) {
        (Some(r), Some(p)) => (0..=p).map(|k| mu - k * r).collect(),
        _ => vec![mu],
    }
}

/// Greedy decomposition into Levi strings inside each grade.
fn restring(space: Space, labels: &WeightMultiset) -> Result<Vec<Constituent>, BbwError> {
    let mut by_grade: BTreeMap<i64, WeightMultiset> = BTreeMap::new();
    for (x, k) in labels {
        if *k < 0 {
            return Err(BbwError::NotStringDecomposable(*x));
        }
        if *k > 0 {
            by_grade.entry(space.grade(*x)).or_default().insert(*x, *k);
        }
    }
    let mut out = Vec::new();
    for (grade, mut rest) in by_grade {
        while let Some(&top) = rest.keys().max_by_key(|x| (space.levi_pairing(**x).unwrap_or(0), **x)) {
            let string = levi_string(space, top);
            for x in &string {
                match rest.get_mut(x) {
                    Some(k) if *k > 0 => {
                        *k -= 1;
                        if *k == 0 {
                            rest.remove(x);
                        }
                    }
                    _ => return Err(BbwError::NotStringDecomposable(*x)),
                }
            }
            out.push(Constituent { highest: top, grade, labels: string });
        }
    }
    Ok(out)
}

/// Named bundles on each space, as label multisets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Registry {
    entries: BTreeMap<(Space, String), WeightMultiset>,
}

fn multiset(ws: impl IntoIterator<Item = Weight>) -> WeightMultiset {
    let mut out = WeightMultiset::new();
    for x in ws {
        *out.entry(x).or_insert(0) += 1;
    }
    out
}

fn negate(ms: &WeightMultiset) -> WeightMultiset {
    ms.iter().map(|(x, k)| (-*x, *k)).collect()
}

fn union(a: &WeightMultiset, b: &WeightMultiset) -> WeightMultiset {
    let mut out = a.clone();
    for (x, k) in b {
        *out.entry(*x).or_insert(0) += k;
    }
    out
}

fn difference(a: &WeightMultiset, b: &WeightMultiset) -> Option<WeightMultiset> {
    let mut out = a.clone();
    for (x, k) in b {
        let e = out.entry(*x).or_insert(0);
        *e -= k;
        if *e < 0 {
            return None;
        }
        if *e == 0 {
            out.remove(x);
        }
    }
    Some(out)
}

fn product(a: &WeightMultiset, b: &WeightMultiset) -> WeightMultiset {
    crate::rep::character_product(a, b)
}

fn pair_sums(ms: &WeightMultiset, strict: bool) -> WeightMultiset {
    let slots: Vec<Weight> = ms.iter().flat_map(|(x, k)| std::iter::repeat_n(*x, *k as usize)).collect();
    let mut out = WeightMultiset::new();
    for i in 0..slots.len() {
        for j in (if strict { i + 1 } else { i })..slots.len() {
            *out.entry(slots[i] + slots[j]).or_insert(0) += 1;
        }
    }
    out
}

impl Registry {
    /// Registry derived from the weights of the base flag.
    pub fn from_cartan(data: &CartanData) -> Self {
        let label = |rc: &(i64, i64)| -Weight::from_root_coords(rc.0, rc.1);
        let flag = &data.base_flag;
        let l = multiset(flag.line_weights.iter().map(label));
        let e = multiset(flag.associative_weights.iter().map(label));
        let um = multiset(flag.asd_plane_weights.iter().map(label));
        let all = multiset(data.weights.iter().map(|wv| label(&wv.root_coords)));
        let uplus = difference(&e, &l).expect("line inside the associative space");
        // Fiber of E⊥ is U minus the weights of U/E⊥ ≅ E*.
        let eperp = difference(&all, &negate(&e)).expect("E* is a quotient of U");
        let o = multiset([Weight::default()]);
        let lm = multiset([um.iter().fold(Weight::default(), |acc, (x, k)| acc + *k * *x)]);
        let mut entries = BTreeMap::new();
        let mut put = |s: Space, name: &str, ms: &WeightMultiset| {
            entries.insert((s, name.to_string()), ms.clone());
        };
        for s in [Space::Q, Space::Z] {
            put(s, "L", &l);
            put(s, "Uplus", &uplus);
            put(s, "E", &e);
            put(s, "O", &o);
            put(s, "Eperp", &eperp);
        }
        put(Space::Z, "Lp", &l);
        put(Space::Z, "Lm", &lm);
        put(Space::Z, "Uminus", &um);
        put(Space::Y, "Uminus", &um);
        put(Space::Y, "Lm", &lm);
        put(Space::Y, "O", &o);
        Registry { entries }
    }

    /// Registry over the standard multiplication table (computed once).
    pub fn standard() -> &'static Registry {
        static REG: OnceLock<Registry> = OnceLock::new();
        REG.get_or_init(|| {
            let data = Octonions::standard().cartan_weights().expect("standard table has a split Cartan");
            Registry::from_cartan(&data)
        })
    }

    pub fn names(&self, space: Space) -> Vec<&str> {
        self.entries.keys().filter(|(s, _)| *s == space).map(|(_, n)| n.as_str()).collect()
    }

    pub fn labels(&self, space: Space, expr: &BundleExpr) -> Result<WeightMultiset, BbwError> {
        Ok(match expr {
            BundleExpr::Name(n) => self
                .entries
                .get(&(space, n.clone()))
                .cloned()
                .ok_or_else(|| BbwError::UnknownName(n.clone(), space))?,
            BundleExpr::Dual(x) => negate(&self.labels(space, x)?),
            BundleExpr::Tensor(xs) => {
                let mut acc = multiset([Weight::default()]);
                for x in xs {
                    acc = product(&acc, &self.labels(space, x)?);
                }
                acc
            }
            BundleExpr::Sum(xs) => {
                let mut acc = WeightMultiset::new();
                for x in xs {
                    acc = union(&acc, &self.labels(space, x)?);
                }
                acc
            }
            BundleExpr::Sym2(x) => pair_sums(&self.labels(space, x)?, false),
            BundleExpr::Wedge2(x) => pair_sums(&self.labels(space, x)?, true),
            BundleExpr::Trivial(top) => {
                negate(&weight_system(*top).map_err(|_| BbwError::Syntax(format!("trivial({top}) not dominant")))?)
            }
            BundleExpr::Quot(a, b) => difference(&self.labels(space, a)?, &self.labels(space, b)?)
                .ok_or_else(|| BbwError::NotASubbundle(b.to_string(), a.to_string()))?,
        })
    }

    pub fn bundle(&self, space: Space, expr: &BundleExpr) -> Result<BundleDesc, BbwError> {
        let mut b = BundleDesc::from_labels(space, &expr.to_string(), self.labels(space, expr)?)?;
        b.trivial_fiber = trivial_fiber(expr);
        Ok(b)
    }

    pub fn bundle_str(&self, space: Space, src: &str) -> Result<BundleDesc, BbwError> {
        self.bundle(space, &parse_expr(src)?)
    }
}

fn trivial_fiber(expr: &BundleExpr) -> Option<IrrepSum> {
    match expr {
        BundleExpr::Trivial(x) => Some(IrrepSum::single(*x)),
        BundleExpr::Sum(xs) => {
            xs.iter().map(trivial_fiber).try_fold(IrrepSum::new(), |acc, f| f.map(|f| acc.plus(&f)))
        }
        _ => None,
    }
}
