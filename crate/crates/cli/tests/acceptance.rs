//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Criteria whose expected values contain known-wrong quoted statements print
//! FAIL; the process still exits 0 when the failing items are exactly the
//! documented ones, and 1 on any other discrepancy.

use std::collections::BTreeSet;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use g2tw_cli::claims::KNOWN_FAILURES;
use g2tw_core::bbw::{bbw_line, gr_cohomology, run_chain, BranchSet, Chain, CohProfile, LineCohomology, Registry, Space};
use g2tw_core::equivariant::{
    admissible_torsion_module, admissible_torsion_module_with, curvature_check, curvature_check_with,
    isotypic_decompose, rep_on, Flag, G2Frame, Model, SpaceSpec,
};
use g2tw_core::linalg;
use g2tw_core::octonion::{ov, span_coordinates, OctVector, Octonions, PlaneClass, Subspace};
use g2tw_core::rep::{
    character_product, dominant_box, lambda2, strip_decompose, tensor_decompose, tensor_with_sum, w, weight_system,
    weyl_dim, IrrepSum, Weight,
};
use g2tw_core::{gq, Gq};
use serde_json::Value;

/// Items that failed, plus a one-line summary.
struct Outcome {
    failed: Vec<String>,
    detail: String,
}

impl Outcome {
    fn new(failed: Vec<String>, detail: impl Into<String>) -> Self {
        Self { failed, detail: detail.into() }
    }
}

struct Checks(Vec<String>);

impl Checks {
    fn check(&mut self, ok: bool, label: impl Into<String>) {
        if !ok {
            self.0.push(label.into());
        }
    }
}

fn pair(a: usize, b: usize, im: i64) -> OctVector {
    ov(&[(a, gq(1, 0)), (b, gq(0, im))])
}

fn span(vs: &[OctVector]) -> Subspace {
    Subspace::span(vs)
}

fn small(seed: u64, k: u64) -> i64 {
    // SplitMix-style scramble, reduced to [-4, 4].
    let mut z = seed.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(k.wrapping_mul(0xbf58_476d_1ce4_e5b9));
    z = (z ^ (z >> 31)).wrapping_mul(0x94d0_49bb_1331_11eb);
    ((z >> 33) % 9) as i64 - 4
}

fn classification_suite() -> Outcome {
    let o = Octonions::standard();
    let mut c = Checks(Vec::new());
    for seed in 0..100 {
        let asd = o.asd_sample(seed).unwrap();
        let sd = o.sd_sample(seed).unwrap();
        let q = o.assoc3_sample(seed).unwrap();
        // Independent criterion: the plane is self-dual exactly when p × p ≠ 0.
        c.check(asd.dim() == 2 && asd.is_isotropic() && o.cross_span(&asd, &asd).dim() == 0, format!("asd {seed}"));
        c.check(sd.dim() == 2 && sd.is_isotropic() && o.cross_span(&sd, &sd).dim() == 1, format!("sd {seed}"));
        c.check(o.classify_plane(&asd) == Ok(PlaneClass::AntiSelfDual), format!("asd class {seed}"));
        c.check(o.classify_plane(&sd) == Ok(PlaneClass::SelfDual), format!("sd class {seed}"));
        let image = o.cross_span(&q, &q);
        c.check(
            q.dim() == 3 && q.is_isotropic() && o.is_closed(&q) && image.dim() == 1 && q.contains_space(&image),
            format!("assoc3 {seed}"),
        );
    }
    let mut embeddings = 0;
    for seed in 0..10 {
        let ell = o.line_sample(seed).unwrap();
        let reference = o.associative_of_line(&ell, 0).unwrap();
        for aux in 0..10 {
            let p = o.nondegenerate_associative_through(&ell, 1000 + aux).unwrap();
            c.check(o.q_embedding(&ell, &p).as_ref() == Ok(&reference), format!("embedding {seed}/{aux}"));
            embeddings += 1;
        }
    }
    let v = span(&(1..=6).map(OctVector::e).collect::<Vec<_>>());
    let eigen = [pair(1, 3, -1), pair(2, 6, -1), pair(4, 5, -1)];
    let base = pair(1, 2, 1);
    let mut lines = Vec::new();
    for s in 0..34u64 {
        lines.push(o.line_sample(s).unwrap());
    }
    for s in 0..33u64 {
        let d = ov(&(1..=6).map(|k| (k, gq(small(s, k as u64), small(s, k as u64 + 7)))).collect::<Vec<_>>());
        let x = base.scale(&d.bilinear(&d)).sub(&d.scale(&(&base.bilinear(&d) * &gq(2, 0))));
        lines.push(span(&[if x.is_zero() { base.clone() } else { x }]));
        let e = eigen.iter().enumerate().fold(OctVector::zero(), |acc, (k, b)| {
            acc.add(&b.scale(&gq(small(s, 20 + k as u64) + 5, small(s, 30 + k as u64))))
        });
        lines.push(span(&[e]));
    }
    let mut cases = BTreeSet::new();
    let mut agreed = 0;
    for (n, ell) in lines.iter().enumerate() {
        match o.hyperplane_trichotomy(ell, &v, 0) {
            Ok(r) => {
                agreed += 1;
                cases.insert(format!("{:?}", r.case));
            }
            Err(e) => c.0.push(format!("trichotomy line {n}: {e}")),
        }
    }
    c.check(cases.len() == 3, format!("trichotomy cases seen: {cases:?}"));
    let detail = format!(
        "300 samples, {embeddings} embeddings, trichotomy criteria agree on {agreed}/{} lines",
        lines.len()
    );
    Outcome::new(c.0, detail)
}

fn derivation_suite() -> Outcome {
    let o = Octonions::standard();
    let mut c = Checks(Vec::new());
    let der = o.derivations_of_cross();
    c.check(der.len() == 14, format!("dimension {}", der.len()));
    for (k, a) in der.iter().enumerate() {
        let at = linalg::transpose(a);
        let anti = a.iter().zip(&at).all(|(r, s)| r.iter().zip(s).all(|(x, y)| x + y == gq(0, 0)));
        c.check(anti, format!("antisymmetry {k}"));
    }
    let bracket = |a: &linalg::DenseMatrix, b: &linalg::DenseMatrix| -> linalg::DenseMatrix {
        let (ab, ba) = (linalg::mat_mul(a, b), linalg::mat_mul(b, a));
        ab.iter().zip(&ba).map(|(r, s)| r.iter().zip(s).map(|(x, y)| x - y).collect()).collect()
    };
    for i in 0..der.len() {
        for j in i + 1..der.len() {
            c.check(span_coordinates(&der, &bracket(&der[i], &der[j])).is_some(), format!("bracket {i},{j}"));
        }
    }
    let data = o.cartan_weights().unwrap();
    let mut expected = vec![(0, 0), (1, 0), (-1, 0), (1, 1), (-1, -1), (2, 1), (-2, -1)];
    expected.sort();
    c.check(data.weight_multiset() == expected, format!("weights {:?}", data.weight_multiset()));
    Outcome::new(c.0, "dimension 14, antisymmetric, bracket-closed, weights {0, ±α, ±(α+β), ±(2α+β)}")
}

fn rep_suite() -> Outcome {
    let mut c = Checks(Vec::new());
    let dims: Vec<u64> = [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (3, 0), (0, 2)]
        .iter()
        .map(|&(m, n)| weyl_dim(w(m, n)).unwrap())
        .collect();
    c.check(dims == [1, 7, 14, 27, 64, 77, 77], format!("weyl dims {dims:?}"));
    let tops: Vec<Weight> = dominant_box(14).into_iter().filter(|x| weyl_dim(*x).unwrap() <= 10_000).collect();
    let mut pairs = 0;
    for &a in &tops {
        for &b in &tops {
            if weyl_dim(a).unwrap() * weyl_dim(b).unwrap() > 10_000 {
                continue;
            }
            let oracle = strip_decompose(&character_product(&weight_system(a).unwrap(), &weight_system(b).unwrap()));
            let klimyk = tensor_decompose(a, b);
            let product = weyl_dim(a).unwrap() * weyl_dim(b).unwrap();
            let ok = matches!((&klimyk, &oracle), (Ok(k), Ok(o)) if k == o && k.dim() as u64 == product);
            c.check(ok, format!("{a} ⊗ {b}"));
            pairs += 1;
        }
    }
    let total = tensor_with_sum(w(1, 0), &lambda2(w(1, 0)).unwrap()).unwrap();
    c.check(
        total.to_string() == "U{0,0} + 2U{1,0} + U{0,1} + 2U{2,0} + U{1,1}" && total.dim() == 147,
        format!("wedge-square tensor {total}"),
    );
    Outcome::new(c.0, format!("weyl dims, {pairs} tensor pairs against stripping, Λ²U⊗U of dim 147"))
}

/// Degree and `((m, n), multiplicity)` terms.
type ProfileTerms<'a> = [(usize, &'a [((i64, i64), i64)])];

fn profile(terms: &ProfileTerms) -> CohProfile {
    let mut p = CohProfile::zero();
    for (j, xs) in terms {
        for ((m, n), k) in *xs {
            p.add(*j, w(*m, *n), *k);
        }
    }
    p
}

fn bbw_suite() -> Outcome {
    let mut c = Checks(Vec::new());
    for x in dominant_box(8) {
        c.check(bbw_line(x) == LineCohomology::Concentrated { degree: 0, irrep: x }, format!("line {x}"));
    }
    let reg = Registry::standard();
    let cases = [
        ("dual(E)", profile(&[(0, &[((1, 0), 1)])])),
        ("dual(Uplus)", CohProfile::zero()),
        ("sym2(dual(Uplus))", profile(&[(1, &[((0, 1), 1)])])),
    ];
    for (expr, expected) in cases {
        let set = gr_cohomology(&reg.bundle_str(Space::Q, expr).unwrap()).unwrap();
        c.check(set == BranchSet::from([expected]), format!("{expr}: {set:?}"));
    }
    Outcome::new(c.0, "dominant lines, E*, U+*, ⊙²U+* as singleton branches")
}

fn ledger_suite() -> Outcome {
    let r = run_chain(&Chain::standard()).unwrap();
    let mut c = Checks(Vec::new());
    let single = |p: CohProfile| BranchSet::from([p]);
    let profiles = |expr: &str| r.bundle(expr).map(|b| b.profiles()).unwrap_or_default();
    // Quoted statements, by the claim id that replays the same statement.
    let singles: [(&str, &str, CohProfile); 11] = [
        ("wedge-dual-sections", "wedge2(dual(E))", profile(&[(0, &[((1, 0), 1), ((0, 1), 1)])])),
        ("wedge-perp-dual-sections", "wedge2(dual(Eperp))", profile(&[(0, &[((1, 0), 2), ((0, 1), 1)])])),
        ("sym-plus-dual", "sym2(dual(Uplus))", profile(&[(1, &[((0, 1), 1)])])),
        ("twisted-line-sections", "tensor(dual(L),dual(E))", profile(&[(0, &[((0, 1), 1), ((2, 0), 1)])])),
        ("twisted-cubic-sections", "tensor(dual(L),dual(L),dual(L),Uplus)", profile(&[(0, &[((1, 1), 1)])])),
        ("twisted-plus-endo-sections", "tensor(dual(L),dual(L),Uplus,dual(Uplus))", profile(&[(0, &[((2, 0), 1)])])),
        ("twisted-plus-endo-first", "tensor(dual(L),dual(L),Uplus,dual(Uplus))", profile(&[(1, &[((0, 0), 1)])])),
        ("twisted-plus-sections", "tensor(dual(L),dual(L),Uplus,dual(E))", profile(&[(0, &[((2, 0), 1), ((1, 1), 1)])])),
        ("twisted-plus-first", "tensor(dual(L),dual(L),Uplus,dual(E))", profile(&[(1, &[((0, 0), 1)])])),
        ("twisted-endo-sections", "tensor(dual(L),dual(L),E,dual(E))", profile(&[(0, &[((0, 1), 1), ((2, 0), 2), ((1, 1), 1)])])),
        ("twisted-endo-first", "tensor(dual(L),dual(L),E,dual(E))", profile(&[(1, &[((0, 0), 1)])])),
    ];
    for (id, expr, quoted) in singles {
        let got = profiles(expr);
        let Some(p) = got.first().filter(|_| got.len() == 1) else {
            c.0.push(format!("{id}: {} branches", got.len()));
            continue;
        };
        // Each statement pins the degrees it names.
        let ok = quoted.0.keys().all(|&j| p.degree(j) == quoted.degree(j));
        c.check(ok, id);
    }
    for (id, expr) in [("wedge-higher-vanishing", "wedge2(dual(E))"), ("wedge-higher-vanishing", "wedge2(dual(Eperp))")] {
        c.check(profiles(expr).iter().all(|p| p.max_degree().unwrap_or(0) == 0), id);
    }
    c.check(profiles("tensor(dual(L),dual(L),E,dual(E))").iter().all(|p| p.max_degree().unwrap_or(0) <= 1), "twisted-endo-higher");
    let sym = BranchSet::from([
        profile(&[(0, &[((2, 0), 1)])]),
        profile(&[(0, &[((0, 1), 1), ((2, 0), 1)]), (1, &[((0, 1), 1)])]),
    ]);
    c.check(profiles("sym2(dual(E))") == sym, "sym-dual-dichotomy");
    let square = BranchSet::from([
        profile(&[(0, &[((1, 0), 1), ((0, 1), 1), ((2, 0), 1)])]),
        profile(&[(0, &[((1, 0), 1), ((0, 1), 2), ((2, 0), 1)]), (1, &[((0, 1), 1)])]),
    ]);
    c.check(profiles("tensor(dual(E),dual(E))") == square, "square-dual-dichotomy");
    c.check(profiles("Eperp") == single(CohProfile::zero()), "perp-vanishes");
    for (id, expr, extra) in [
        ("torsion-sections-line-1", "tensor(dual(E),wedge2(dual(Eperp)))", 0),
        ("torsion-sections-line-2", "tensor(dual(Eperp),wedge2(dual(Eperp)))", 1),
    ] {
        let b = r.bundle(expr).unwrap();
        let mut ks = BTreeSet::new();
        for br in &b.branches {
            for &k in &br.variable {
                ks.insert(k);
                let line = IrrepSum::from_terms([(w(1, 0), 1 + 2 * extra), (w(0, 1), k + extra), (w(2, 0), 3), (w(1, 1), 1)]);
                c.check(br.profile.degree(0) == line, format!("{id} k={k}"));
            }
        }
        c.check(ks == BTreeSet::from([2, 3]), format!("{id} k values {ks:?}"));
    }
    let branched = [
        "sym2(dual(E))",
        "tensor(dual(E),dual(E))",
        "tensor(dual(E),wedge2(dual(Eperp)))",
        "tensor(dual(Eperp),wedge2(dual(Eperp)))",
    ];
    for b in &r.bundles {
        if !branched.contains(&b.bundle.as_str()) {
            c.check(b.is_singleton(), format!("{} not pinned", b.bundle));
        }
        c.check(b.branches.iter().all(|br| br.profile.euler() == b.euler), format!("{} euler", b.bundle));
    }
    c.check(r.euler_consistent, "euler consistency");
    c.check(r.variable.as_ref().map(|v| v.values.clone()) == Some(BTreeSet::from([2, 3])), "k in {2,3}");
    Outcome::new(c.0, format!("{} bundles, {} joint solutions, k in {{2,3}}", r.bundles.len(), r.solutions))
}

fn equivariant_suite() -> Outcome {
    let mut c = Checks(Vec::new());
    let frame = G2Frame::standard();
    let rep = rep_on(SpaceSpec::Torsion(Model::U));
    let dec = isotypic_decompose(&rep, frame).unwrap();
    let mut spectrum: Vec<(i64, usize)> =
        dec.report.components.iter().map(|x| (x.casimir_ratio, x.eigenspace_dim)).collect();
    spectrum.sort();
    c.check(spectrum == [(0, 1), (12, 14), (24, 14), (28, 54), (42, 64)], format!("spectrum {spectrum:?}"));
    for (i, (x, p)) in dec.projectors.iter().enumerate() {
        c.check(p.mul(p) == *p, format!("idempotent {x}"));
        c.check(rep.generators.iter().all(|g| p.commutator(g).is_zero()), format!("equivariant {x}"));
        for (_, q) in &dec.projectors[i + 1..] {
            c.check(p.mul(q).nnz() == 0, format!("orthogonal {x}"));
        }
    }
    let k = |k: i64| IrrepSum::from_terms([(w(0, 0), k), (w(1, 0), k)]);
    for (d, kk) in [(7usize, 1i64), (8, 2)] {
        let m = admissible_torsion_module(d, &Gq::from(1)).unwrap();
        c.check(m.dim == 8 * kk as usize && m.report.as_sum() == k(kk), format!("module dim {d}: {}", m.report.as_sum()));
        let cur = curvature_check(d, &Gq::from(1)).unwrap();
        c.check(cur.kernel_dim == 0 && cur.forces_zero, format!("curvature dim {d}"));
    }
    for s in [gq(2, 0), Gq::from_ratio(-1, 3), gq(1, 1)] {
        let m = admissible_torsion_module(8, &s).unwrap();
        c.check(m.dim == 16 && m.report.as_sum() == k(2), format!("scale {s}"));
    }
    for seed in [1u64, 2] {
        for (model, kk) in [(Model::U, 1), (Model::CU, 2)] {
            let flag = Flag::random(frame, model, seed, &Gq::from(1)).unwrap();
            let m = admissible_torsion_module_with(&flag).unwrap();
            c.check(m.report.as_sum() == k(kk), format!("flag {seed} {model:?}"));
            c.check(curvature_check_with(&flag).unwrap().kernel_dim == 0, format!("flag curvature {seed} {model:?}"));
        }
    }
    Outcome::new(c.0, "Casimir 0:12:24:28:42 (1/14/14/54/64), K = U00+U10 and 2U00+2U10, curvature kernels 0")
}

fn verify_claims_run() -> Outcome {
    let out = Command::new(env!("CARGO_BIN_EXE_g2tw")).arg("verify-paper").output().expect("binary runs");
    let report: Value = serde_json::from_slice(&out.stdout).expect("report JSON");
    let with = |s: &str| -> Vec<String> {
        report["claims"]
            .as_array()
            .unwrap()
            .iter()
            .filter(|c| c["status"] == s)
            .map(|c| c["id"].as_str().unwrap().to_string())
            .collect()
    };
    let mut failed = with("FAIL");
    if out.status.code() != Some(0) {
        failed.push(format!("exit code {:?}", out.status.code()));
    }
    let branched = with("BRANCHED");
    let flagged = with("FLAGGED");
    if branched != ["torsion-sections-line-1", "torsion-sections-line-2"] {
        failed.push(format!("branched {branched:?}"));
    }
    if flagged != ["trivial-quotient-base"] {
        failed.push(format!("flagged {flagged:?}"));
    }
    let detail = format!("{} claims, summary {}", report["claims"].as_array().unwrap().len(), report["summary"]);
    Outcome::new(failed, detail)
}

/// Name, check, runtime budget and the documented failing items.
type Criterion = (&'static str, fn() -> Outcome, Duration, BTreeSet<String>);

fn main() -> ExitCode {
    let known_claims: BTreeSet<String> = KNOWN_FAILURES.iter().map(|s| s.to_string()).collect();
    let known_ledger: BTreeSet<String> = known_claims.iter().filter(|s| s.starts_with("twisted")).cloned().collect();
    let mut known_exit = known_claims.clone();
    known_exit.insert("exit code Some(1)".into());
    let criteria: [Criterion; 7] = [
        ("classification suite", classification_suite, Duration::from_secs(10), BTreeSet::new()),
        ("derivation algebra", derivation_suite, Duration::from_secs(5), BTreeSet::new()),
        ("representation arithmetic", rep_suite, Duration::from_secs(30), BTreeSet::new()),
        ("BBW suite", bbw_suite, Duration::from_secs(5), BTreeSet::new()),
        ("ledger replay", ledger_suite, Duration::from_secs(30), known_ledger),
        ("equivariant suite", equivariant_suite, Duration::from_secs(300), BTreeSet::new()),
        ("verify-paper", verify_claims_run, Duration::from_secs(60), known_exit),
    ];
    let mut unexpected = false;
    for (n, (name, run, budget, known)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let failed: BTreeSet<String> = outcome.failed.iter().cloned().collect();
        let status = if failed.is_empty() { "PASS" } else { "FAIL" };
        let timing = format!("{:.1}s, budget {}s", elapsed.as_secs_f64(), budget.as_secs());
        println!("criterion {} [{name}]: {status} ({}; {timing})", n + 1, outcome.detail);
        if !failed.is_empty() {
            let note = if failed == known { "documented source errors" } else { "UNEXPECTED" };
            println!("    failing ({note}): {}", failed.iter().cloned().collect::<Vec<_>>().join(", "));
        }
        if failed != known {
            unexpected = true;
            if !known.is_empty() {
                println!("    expected failing set: {}", known.iter().cloned().collect::<Vec<_>>().join(", "));
            }
        }
        if elapsed > budget {
            println!("    note: over the runtime budget; timings are informational");
        }
    }
    if unexpected {
        println!("acceptance: unexpected results");
        ExitCode::FAILURE
    } else {
        println!("acceptance: all results as expected");
        ExitCode::SUCCESS
    }
}
