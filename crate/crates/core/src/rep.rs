//! Combinatorial representation theory of G2.
//!
//! Weights are written in the fundamental-weight basis `(m, n) = m·ω1 + n·ω2`
//! where `ω1` is the highest weight of the seven-dimensional representation
//! and `ω2` that of the adjoint. The simple roots are `α = 2ω1 − ω2` (short)
//! and `β = −3ω1 + 2ω2` (long).

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Mutex, OnceLock};

use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RepError {
    #[error("weight {0} is not dominant")]
    NotDominant(Weight),
    #[error("weight multiset is not the character of a representation (at {0})")]
    NotARepresentation(Weight),
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Weight {
    pub m: i64,
    pub n: i64,
}

/// `w(m, n)`.
pub const fn w(m: i64, n: i64) -> Weight {
    Weight { m, n }
}

pub const RHO: Weight = w(1, 1);
pub const ALPHA: Weight = w(2, -1);
pub const BETA: Weight = w(-3, 2);

/// Positive roots `α, β, α+β, 2α+β, 3α+β, 3α+2β`.
pub const POSITIVE_ROOTS: [Weight; 6] = [w(2, -1), w(-3, 2), w(-1, 1), w(1, 0), w(3, -1), w(0, 1)];

impl Weight {
    pub fn is_dominant(self) -> bool {
        self.m >= 0 && self.n >= 0
    }

    /// Coordinates `(a, b)` with `self = a·α + b·β`.
    pub fn to_root_coords(self) -> (i64, i64) {
        (2 * self.m + 3 * self.n, self.m + 2 * self.n)
    }

    pub fn from_root_coords(a: i64, b: i64) -> Self {
        w(2 * a - 3 * b, -a + 2 * b)
    }

    /// Pairings with the positive coroots, in the order of [`POSITIVE_ROOTS`].
    pub fn coroot_pairings(self) -> [i64; 6] {
        let (a, b) = (self.m, self.n);
        [a, b, a + 3 * b, 2 * a + 3 * b, a + b, a + 2 * b]
    }

    /// Height `a + b` in simple-root coordinates; strictly decreases along `≤`.
    pub fn height(self) -> i64 {
        let (a, b) = self.to_root_coords();
        a + b
    }

    /// Invariant form normalised by `(α, α) = 2`.
    pub fn inner(self, o: Weight) -> i64 {
        2 * self.m * o.m + 3 * (self.m * o.n + self.n * o.m) + 6 * self.n * o.n
    }

    pub fn is_regular(self) -> bool {
        self.coroot_pairings().iter().all(|&p| p != 0)
    }
}

impl std::ops::Neg for Weight {
    type Output = Weight;
    fn neg(self) -> Weight {
        w(-self.m, -self.n)
    }
}

impl std::ops::Add for Weight {
    type Output = Weight;
    fn add(self, o: Weight) -> Weight {
        w(self.m + o.m, self.n + o.n)
    }
}

impl std::ops::Sub for Weight {
    type Output = Weight;
    fn sub(self, o: Weight) -> Weight {
        w(self.m - o.m, self.n - o.n)
    }
}

impl std::ops::Mul<Weight> for i64 {
    type Output = Weight;
    fn mul(self, o: Weight) -> Weight {
        w(self * o.m, self * o.n)
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.m, self.n)
    }
}

impl fmt::Debug for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for Weight {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        [self.m, self.n].serialize(s)
    }
}

impl<'de> Deserialize<'de> for Weight {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let [m, n] = <[i64; 2]>::deserialize(d)?;
        Ok(w(m, n))
    }
}

/// Element of the Weyl group as an integer matrix on `(m, n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct WeylElement {
    pub matrix: [[i64; 2]; 2],
    pub length: usize,
}

impl WeylElement {
    pub const IDENTITY: WeylElement = WeylElement { matrix: [[1, 0], [0, 1]], length: 0 };
    pub const S_ALPHA: WeylElement = WeylElement { matrix: [[-1, 0], [1, 1]], length: 1 };
    pub const S_BETA: WeylElement = WeylElement { matrix: [[1, 3], [0, -1]], length: 1 };

    pub fn apply(&self, x: Weight) -> Weight {
        let [[a, b], [c, d]] = self.matrix;
        w(a * x.m + b * x.n, c * x.m + d * x.n)
    }

    /// Composition `self ∘ other` (length not tracked).
    pub fn compose(&self, other: &WeylElement) -> [[i64; 2]; 2] {
        let a = self.matrix;
        let b = other.matrix;
        [
            [a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]],
            [a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]],
        ]
    }

    /// Dotted action `w·λ = w(λ + ρ) − ρ`.
    pub fn dot(&self, x: Weight) -> Weight {
        self.apply(x + RHO) - RHO
    }
}

/// The twelve elements of the Weyl group, generated by the two simple
/// reflections, with lengths from breadth-first search.
pub fn weyl_group() -> Vec<WeylElement> {
    let mut out = vec![WeylElement::IDENTITY];
    let mut frontier = vec![WeylElement::IDENTITY];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for e in &frontier {
            for s in [WeylElement::S_ALPHA, WeylElement::S_BETA] {
                let m = s.compose(e);
                if out.iter().all(|x| x.matrix != m) {
                    let el = WeylElement { matrix: m, length: e.length + 1 };
                    out.push(el);
                    next.push(el);
                }
            }
        }
        frontier = next;
    }
    out
}

/// Dominant Weyl conjugate of `x` and the length of the reflection word used.
pub fn dominant_conjugate(mut x: Weight) -> (Weight, usize) {
    let mut len = 0;
    loop {
        if x.m < 0 {
            x = WeylElement::S_ALPHA.apply(x);
        } else if x.n < 0 {
            x = WeylElement::S_BETA.apply(x);
        } else {
            return (x, len);
        }
        len += 1;
    }
}

/// Weyl dimension polynomial, signed, defined for every integral weight.
pub fn weyl_dim_signed(x: Weight) -> i64 {
    let a = (x.m + 1) as i128;
    let b = (x.n + 1) as i128;
    (a * b * (a + b) * (a + 2 * b) * (a + 3 * b) * (2 * a + 3 * b) / 120) as i64
}

pub fn weyl_dim(x: Weight) -> Result<u64, RepError> {
    if !x.is_dominant() {
        return Err(RepError::NotDominant(x));
    }
    Ok(weyl_dim_signed(x) as u64)
}

/// Formal combination of irreducibles `Σ mult · V(λ)`; multiplicities may be
/// negative only for virtual sums such as Euler characteristics.
#[derive(Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct IrrepSum {
    terms: BTreeMap<Weight, i64>,
}

impl IrrepSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn single(x: Weight) -> Self {
        Self::from_terms([(x, 1)])
    }

    pub fn from_terms<I: IntoIterator<Item = (Weight, i64)>>(terms: I) -> Self {
        let mut s = Self::new();
        for (x, k) in terms {
            s.add(x, k);
        }
        s
    }

    pub fn add(&mut self, x: Weight, k: i64) {
        if k == 0 {
            return;
        }
        let e = self.terms.entry(x).or_insert(0);
        *e += k;
        if *e == 0 {
            self.terms.remove(&x);
        }
    }

    pub fn mult(&self, x: Weight) -> i64 {
        self.terms.get(&x).copied().unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Weight, i64)> + '_ {
        self.terms.iter().map(|(x, k)| (*x, *k))
    }

    pub fn is_effective(&self) -> bool {
        self.terms.values().all(|&k| k > 0)
    }

    pub fn plus(&self, o: &IrrepSum) -> IrrepSum {
        let mut s = self.clone();
        for (x, k) in o.iter() {
            s.add(x, k);
        }
        s
    }

    pub fn minus(&self, o: &IrrepSum) -> IrrepSum {
        self.plus(&o.scaled(-1))
    }

    pub fn scaled(&self, c: i64) -> IrrepSum {
        IrrepSum::from_terms(self.iter().map(|(x, k)| (x, k * c)))
    }

    /// `Σ mult · dim`, using the signed dimension polynomial.
    pub fn dim(&self) -> i64 {
        self.iter().map(|(x, k)| k * weyl_dim_signed(x)).sum()
    }

    /// Terms in display order: by dimension, then by `n`.
    pub fn ordered(&self) -> Vec<(Weight, i64)> {
        let mut v: Vec<_> = self.iter().collect();
        v.sort_by_key(|(x, _)| (weyl_dim_signed(*x), x.n, x.m));
        v
    }
}

impl fmt::Display for IrrepSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .ordered()
            .into_iter()
            .map(|(x, k)| if k == 1 { format!("U{{{},{}}}", x.m, x.n) } else { format!("{k}U{{{},{}}}", x.m, x.n) })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for IrrepSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for IrrepSum {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let ordered = self.ordered();
        let mut map = s.serialize_map(Some(ordered.len()))?;
        for (x, k) in ordered {
            map.serialize_entry(&format!("{},{}", x.m, x.n), &k)?;
        }
        map.end()
    }
}

impl<'de> Deserialize<'de> for IrrepSum {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = BTreeMap::<String, i64>::deserialize(d)?;
        let mut s = IrrepSum::new();
        for (key, k) in raw {
            let (m, n) = key
                .split_once(',')
                .and_then(|(a, b)| Some((a.trim().parse().ok()?, b.trim().parse().ok()?)))
                .ok_or_else(|| serde::de::Error::custom(format!("bad weight key `{key}`")))?;
            s.add(w(m, n), k);
        }
        Ok(s)
    }
}

/// Weights with multiplicities (not necessarily dominant).
pub type WeightMultiset = BTreeMap<Weight, i64>;

fn dominant_weights_below(top: Weight) -> Vec<Weight> {
    let mut out = Vec::new();
    for a in 0..=(2 * top.m + 3 * top.n) {
        for b in 0..=((top.n + a) / 2) {
            let x = top - Weight::from_root_coords(a, b);
            if x.is_dominant() {
                out.push(x);
            }
        }
    }
    out.sort_by_key(|x| std::cmp::Reverse(x.height()));
    out
}

fn below(x: Weight, top: Weight) -> bool {
    let (a, b) = (top - x).to_root_coords();
    a >= 0 && b >= 0
}

/// Freudenthal multiplicities of the dominant weights of `V(top)`.
fn dominant_multiplicities(top: Weight) -> BTreeMap<Weight, i64> {
    let mut mult: BTreeMap<Weight, i64> = BTreeMap::new();
    let lookup = |mult: &BTreeMap<Weight, i64>, x: Weight| -> Option<i64> {
        let (d, _) = dominant_conjugate(x);
        below(d, top).then(|| mult.get(&d).copied().unwrap_or(0))
    };
    let tr = top + RHO;
    let norm_top = tr.inner(tr);
    for mu in dominant_weights_below(top) {
        if mu == top {
            mult.insert(mu, 1);
            continue;
        }
        let mut acc = 0i64;
        for g in POSITIVE_ROOTS {
            let mut k = 1;
            loop {
                let x = mu + k * g;
                match lookup(&mult, x) {
                    Some(mx) => acc += mx * x.inner(g),
                    None => break,
                }
                k += 1;
            }
        }
        let mr = mu + RHO;
        let denom = norm_top - mr.inner(mr);
        debug_assert!(denom > 0 && (2 * acc) % denom == 0);
        let v = 2 * acc / denom;
        if v != 0 {
            mult.insert(mu, v);
        }
    }
    mult
}

fn weight_cache() -> &'static Mutex<HashMap<Weight, WeightMultiset>> {
    static CACHE: OnceLock<Mutex<HashMap<Weight, WeightMultiset>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Full weight multiset of `V(top)` (memoised; recomputation gives the same map).
pub fn weight_system(top: Weight) -> Result<WeightMultiset, RepError> {
    if !top.is_dominant() {
        return Err(RepError::NotDominant(top));
    }
    if let Some(hit) = weight_cache().lock().expect("weight cache poisoned").get(&top) {
        return Ok(hit.clone());
    }
    let group = weyl_group();
    let mut out = WeightMultiset::new();
    for (mu, k) in dominant_multiplicities(top) {
        let mut orbit: Vec<Weight> = group.iter().map(|g| g.apply(mu)).collect();
        orbit.sort();
        orbit.dedup();
        for x in orbit {
            out.insert(x, k);
        }
    }
    weight_cache().lock().expect("weight cache poisoned").entry(top).or_insert_with(|| out.clone());
    Ok(out)
}

/// Decomposition of a character by repeatedly removing the highest weight.
pub fn strip_decompose(ws: &WeightMultiset) -> Result<IrrepSum, RepError> {
    let mut rest: WeightMultiset = ws.iter().filter(|(_, k)| **k != 0).map(|(x, k)| (*x, *k)).collect();
    let mut out = IrrepSum::new();
    while let Some((&top, &k)) = rest.iter().max_by_key(|(x, _)| (x.height(), x.m)) {
        if k < 0 || !top.is_dominant() {
            return Err(RepError::NotARepresentation(top));
        }
        for (x, m) in weight_system(top)? {
            let e = rest.entry(x).or_insert(0);
            *e -= k * m;
            if *e < 0 {
                return Err(RepError::NotARepresentation(x));
            }
            if *e == 0 {
                rest.remove(&x);
            }
        }
        out.add(top, k);
    }
    Ok(out)
}

/// Klimyk's formula: dotted-Weyl correction of `λ + wt(V(μ))`.
pub fn tensor_decompose(lambda: Weight, mu: Weight) -> Result<IrrepSum, RepError> {
    if !lambda.is_dominant() {
        return Err(RepError::NotDominant(lambda));
    }
    let mut out = IrrepSum::new();
    for (nu, k) in weight_system(mu)? {
        let shifted = lambda + nu + RHO;
        if !shifted.is_regular() {
            continue;
        }
        let (d, len) = dominant_conjugate(shifted);
        let sign = if len % 2 == 0 { 1 } else { -1 };
        out.add(d - RHO, sign * k);
    }
    debug_assert!(out.is_effective());
    Ok(out)
}

/// Decomposes `V(λ) ⊗ X` for a sum `X`.
pub fn tensor_with_sum(lambda: Weight, x: &IrrepSum) -> Result<IrrepSum, RepError> {
    let mut out = IrrepSum::new();
    for (mu, k) in x.iter() {
        out = out.plus(&tensor_decompose(lambda, mu)?.scaled(k));
    }
    Ok(out)
}

fn slots(top: Weight) -> Result<Vec<Weight>, RepError> {
    let mut v = Vec::new();
    for (x, k) in weight_system(top)? {
        for _ in 0..k {
            v.push(x);
        }
    }
    Ok(v)
}

/// Sums over pairs of distinct slots (`strict`) or all unordered pairs.
fn pair_sums(top: Weight, strict: bool) -> Result<WeightMultiset, RepError> {
    let s = slots(top)?;
    let mut out = WeightMultiset::new();
    for i in 0..s.len() {
        let start = if strict { i + 1 } else { i };
        for j in start..s.len() {
            *out.entry(s[i] + s[j]).or_insert(0) += 1;
        }
    }
    Ok(out)
}

pub fn lambda2(top: Weight) -> Result<IrrepSum, RepError> {
    strip_decompose(&pair_sums(top, true)?)
}

pub fn sym2(top: Weight) -> Result<IrrepSum, RepError> {
    strip_decompose(&pair_sums(top, false)?)
}

/// Character of a sum of irreducibles.
pub fn character(x: &IrrepSum) -> Result<WeightMultiset, RepError> {
    let mut out = WeightMultiset::new();
    for (top, k) in x.iter() {
        for (mu, m) in weight_system(top)? {
            *out.entry(mu).or_insert(0) += k * m;
        }
    }
    out.retain(|_, k| *k != 0);
    Ok(out)
}

/// Pointwise product of two characters.
pub fn character_product(a: &WeightMultiset, b: &WeightMultiset) -> WeightMultiset {
    let mut out = WeightMultiset::new();
    for (x, k) in a {
        for (y, l) in b {
            *out.entry(*x + *y).or_insert(0) += k * l;
        }
    }
    out.retain(|_, k| *k != 0);
    out
}

/// All dominant weights up to `bound` in each coordinate.
pub fn dominant_box(bound: i64) -> Vec<Weight> {
    (0..=bound).flat_map(|m| (0..=bound).map(move |n| w(m, n))).collect()
}
