//! End-to-end acceptance suite: one line per criterion, non-zero exit on any failure.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use spectacular::builder::{build_k1, build_k2, build_stage, check_triples, BuildRecipe, BuildStage};
use spectacular::complexes::{
    boundary_pieces, branch_separation, conical_subdivision, subdivide_edges, verify_spectacular, SimpleGraph,
    TwoComplex,
};
use spectacular::finite_geometry::{classes_of_order, make_field};
use spectacular::homology::{
    boundary_matrices, homology, invariant_factors, smith_normal_form, IntMatrix, SparseMatrix,
};
use spectacular::presentations::{
    certify_c16_family, check_c16, materialize_hs, max_piece_length, tautological_labelling, GraphicalPresentation,
    Label, LabelSet, LabeledGraph, Word,
};
use spectacular::wordproblem::{girth_cycle_tuple, kernel_witness_check, r_invariant, Abelianization, DehnReducer};
use spectacular::Length;

type Check = fn() -> Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn default_k1() -> TwoComplex {
    build_k1(&BuildRecipe::default()).expect("default recipe builds")
}

fn default_full() -> TwoComplex {
    build_stage(&BuildRecipe::default(), BuildStage::Full).expect("default recipe builds")
}

fn window() -> Vec<i64> {
    (1..=6).collect()
}

fn c1_k1_counts() -> Result<String, String> {
    let k = default_k1();
    let got = (k.vertex_count(), k.edge_count(), k.polygon_count());
    ensure!(got == (9, 36, 36), "V, E, F = {got:?}, want (9, 36, 36)");
    ensure!(
        k.perimeters().iter().all(|&p| p == 7),
        "perimeters {:?}",
        k.perimeters()
    );
    Ok("V = 9, E = 36, F = 36 heptagons".into())
}

fn c2_k1_homology() -> Result<String, String> {
    let k = default_k1();
    let h = homology(&k);
    ensure!(h.betti == [1, 0, 8], "betti {:?}", h.betti);
    ensure!((0..3).all(|i| h.torsion(i).is_empty()), "torsion {}", h.summary());
    // dense Smith form and a rational rank count must agree
    let (d1, d2) = boundary_matrices(&k);
    let (s1, s2) = (smith_normal_form(&d1), smith_normal_form(&d2));
    ensure!(
        s1.diagonal.iter().chain(&s2.diagonal).all(|d| d.is_one()),
        "non-unit invariant factor"
    );
    ensure!((s1.rank, s2.rank) == (8, 28), "ranks {} {}", s1.rank, s2.rank);
    let oracle = common::rational_betti(&k);
    ensure!(oracle == [1, 0, 8], "oracle betti {oracle:?}");
    Ok(h.summary())
}

fn c3_k2_acyclic() -> Result<String, String> {
    let k1 = default_k1();
    for v0 in 0..k1.vertex_count() {
        let k2 = build_k2(&k1, v0).map_err(|e| e.to_string())?;
        ensure!(k2.polygon_count() == 28, "v0 = {v0}: {} polygons", k2.polygon_count());
        ensure!(
            k2.polygons().iter().all(|p| p.contains(v0)),
            "v0 = {v0}: kept a polygon missing v0"
        );
        let h = homology(&k2);
        ensure!(h.is_acyclic(), "v0 = {v0}: {}", h.summary());
        ensure!(common::rational_betti(&k2) == [1, 0, 0], "v0 = {v0}: oracle disagrees");
    }
    Ok("28 polygons and acyclic for v0 in 0..9".into())
}

fn c4_spectacular() -> Result<String, String> {
    let k = default_full();
    let report = verify_spectacular(&k);
    ensure!(report.spectacular, "failed conditions {:?}", report.failed_conditions());
    ensure!(k.girth() == Length::Finite(15), "girth {}", k.girth());
    ensure!(
        k.perimeters().iter().all(|&p| p == 35),
        "perimeters {:?}",
        k.perimeters()
    );
    ensure!(k.polygon_count() == 28, "{} polygons", k.polygon_count());
    let (sep, _) = branch_separation(&k);
    ensure!(sep == Length::Finite(5), "branch separation {sep}");
    Ok(format!("7/7 conditions, girth 15, perimeters 35, separation {sep}"))
}

type ZooCase = (u64, u32, usize, usize, [usize; 3], Vec<u32>);

fn c5_small_zoo() -> Result<String, String> {
    let cases: [ZooCase; 4] = [
        (3, 2, 1, 3, [1, 0, 0], vec![]),
        (4, 3, 3, 4, [1, 0, 0], vec![2]),
        (3, 4, 10, 3, [1, 0, 4], vec![]),
        (5, 4, 6, 5, [1, 0, 0], vec![]),
    ];
    let mut out = Vec::new();
    for (d, q, faces, perimeter, betti, h1) in cases {
        let r = BuildRecipe::for_order(q, d).map_err(|e| e.to_string())?;
        let k = build_k1(&r).map_err(|e| e.to_string())?;
        ensure!(k.polygon_count() == faces, "({d},{q}): {} polygons", k.polygon_count());
        ensure!(
            k.perimeters().iter().all(|&p| p == perimeter),
            "({d},{q}): perimeters {:?}",
            k.perimeters()
        );
        let h = homology(&k);
        let torsion: Vec<u32> = h.torsion(1).iter().map(|t| u32::try_from(t).unwrap()).collect();
        ensure!(h.betti == betti && torsion == h1, "({d},{q}): {}", h.summary());
        ensure!(h.torsion(2).is_empty(), "({d},{q}): torsion in H2");
        ensure!(common::rational_betti(&k) == betti, "({d},{q}): oracle disagrees");
        if (d, q) == (3, 4) {
            ensure!(k.euler_characteristic() == 5, "chi = {}", k.euler_characteristic());
        }
        out.push(format!("({d},{q}) {faces}"));
    }
    Ok(out.join(", "))
}

fn all_k1() -> Vec<(String, TwoComplex)> {
    let mut out = Vec::new();
    for (d, q) in [(3, 2), (4, 3), (3, 4), (5, 4), (7, 8)] {
        let (p, e) = spectacular::finite_geometry::prime_power(q).unwrap();
        let field = make_field(p, e).unwrap();
        let classes = classes_of_order(&field, d).unwrap().len();
        for class_index in 0..classes {
            let r = BuildRecipe {
                class_index,
                ..BuildRecipe::for_order(q, d).unwrap()
            };
            out.push((format!("({d},{q})#{class_index}"), build_k1(&r).unwrap()));
        }
    }
    out
}

fn c6_triples_and_pieces() -> Result<String, String> {
    let mut pairs = 0;
    let complexes = all_k1();
    for (name, k) in &complexes {
        let report = check_triples(k);
        ensure!(report.holds, "{name}: triple {:?}", report.counterexample);
        // independent recount
        let worst = common::triple_multiplicities(k).into_values().max().unwrap_or(0);
        ensure!(worst <= 1, "{name}: oracle finds a triple in {worst} polygons");
        let ps = k.polygons();
        for i in 0..ps.len() {
            for j in i + 1..ps.len() {
                let pieces = boundary_pieces(&ps[i], &ps[j]).map_err(|e| e.to_string())?;
                ensure!(
                    pieces.iter().all(|b| b.edge_count() <= 1),
                    "{name}: polygons {i}, {j} share a path of {} edges",
                    pieces.iter().map(|b| b.edge_count()).max().unwrap()
                );
                pairs += 1;
            }
        }
    }
    Ok(format!("{} complexes, {pairs} polygon pairs", complexes.len()))
}

fn c7_c16() -> Result<String, String> {
    let k = default_full();
    let mut worst = Vec::new();
    for s in [vec![], vec![2, 5], window()] {
        let p = materialize_hs(&k, &window(), &s).map_err(|e| e.to_string())?;
        let report = check_c16(&p);
        ensure!(report.passed, "S = {s:?}: {} failing pairs", report.failures().count());
        let w = report.worst.expect("pairs exist");
        worst.push(format!("{}/{}", w.piece, w.girths[0].min(w.girths[1])));
    }
    let cert = certify_c16_family(&k).map_err(|e| e.to_string())?;
    ensure!(cert.valid, "certificate invalid for the default complex");
    let girth12 = build_stage(&BuildRecipe::default().with_subdivision(4), BuildStage::Full).unwrap();
    ensure!(
        girth12.girth() == Length::Finite(12),
        "variant girth {}",
        girth12.girth()
    );
    let bad = certify_c16_family(&girth12).map_err(|e| e.to_string())?;
    ensure!(!bad.valid, "certificate valid for girth 12");
    Ok(format!(
        "worst piece/girth {}; certificate valid, girth-12 variant rejected",
        worst.join(" ")
    ))
}

fn subdivided(base: &LabeledGraph, n: i64) -> LabeledGraph {
    base.degree_subdivision(n).unwrap()
}

fn c8_closed_forms() -> Result<String, String> {
    let (_, cycle) = tautological_labelling(&SimpleGraph::cycle(4));
    let degrees: Vec<i64> = (-5..=5).filter(|&n| n != 0).collect();
    let mut checked = 0;
    for &m in &degrees {
        for &n in &degrees {
            let (gm, gn) = (subdivided(&cycle, m), subdivided(&cycle, n));
            let (a, b) = (m.unsigned_abs() as usize, n.unsigned_abs() as usize);
            let expected = if m == n {
                a - 1
            } else if m.signum() == n.signum() {
                2 * a.min(b)
            } else {
                a.min(b)
            };
            let got = max_piece_length(&gm, &gn);
            ensure!(
                got.length == Length::Finite(expected),
                "({m},{n}): piece {}, want {expected}",
                got.length
            );
            let word = got.word.unwrap_or_default();
            ensure!(
                word.len() == expected,
                "({m},{n}): witness word of length {}",
                word.len()
            );
            let oracle = common::piece_by_enumeration(&gm, &gn, m == n, 2 * a.max(b) + 1);
            ensure!(oracle == Some(expected), "({m},{n}): enumeration gives {oracle:?}");
            checked += 1;
        }
    }
    Ok(format!("{checked} degree pairs"))
}

fn c9_r_invariant() -> Result<String, String> {
    let k = default_full();
    let tuple = girth_cycle_tuple(&k).map_err(|e| e.to_string())?;
    ensure!(tuple.len() == 15, "girth tuple of length {}", tuple.len());
    let mut found = Vec::new();
    for s in [vec![], vec![2, 5], window()] {
        let r = r_invariant(&k, &window(), &s, &tuple, (-6, 6), 1024).map_err(|e| e.to_string())?;
        let mut want = s.clone();
        want.push(0);
        want.sort_unstable();
        ensure!(r.members == want, "S = {s:?}: R = {:?}", r.members);
        found.push(format!("{:?}", r.members));
    }
    for (s, t) in [(vec![], vec![2]), (vec![2], vec![2, 3])] {
        let rep = kernel_witness_check(&k, &window(), &s, &t, 1024).map_err(|e| e.to_string())?;
        ensure!(
            rep.passed && !rep.witnesses.is_empty(),
            "witness ({s:?}, {t:?}): {:?}",
            rep.witnesses
        );
    }
    Ok(format!("R = {}; both kernel witnesses hold", found.join(" ")))
}

fn random_matrix(rng: &mut StdRng) -> Vec<Vec<i64>> {
    let (r, c) = (rng.gen_range(1..=6), rng.gen_range(1..=6));
    let zero_bias = rng.gen_bool(0.3);
    (0..r)
        .map(|_| {
            (0..c)
                .map(|_| {
                    if zero_bias && rng.gen_bool(0.5) {
                        0
                    } else {
                        rng.gen_range(-9..=9)
                    }
                })
                .collect()
        })
        .collect()
}

fn snf_property(rows: &[Vec<i64>]) -> Result<(), String> {
    let m = IntMatrix::from_rows(rows);
    let s = smith_normal_form(&m);
    ensure!(s.u.mul(&m).mul(&s.v) == s.diagonal_matrix(), "U M V != D for {rows:?}");
    ensure!(
        s.diagonal.iter().all(|d| d.is_positive()),
        "non-positive factor for {rows:?}"
    );
    ensure!(
        s.diagonal.windows(2).all(|w| (&w[1] % &w[0]).is_zero()),
        "divisibility for {rows:?}"
    );
    let (rank, det) = common::bareiss(&common::big_rows(rows));
    ensure!(s.rank == rank, "rank {} vs oracle {rank} for {rows:?}", s.rank);
    if let Some(det) = det {
        let prod: BigInt = if s.rank == rows.len() {
            s.diagonal.iter().product()
        } else {
            BigInt::zero()
        };
        ensure!(prod == det.abs(), "|det| {det} vs product {prod} for {rows:?}");
        // unimodularity of the transforms
        let (_, du) = common::bareiss(&to_rows(&s.u));
        let (_, dv) = common::bareiss(&to_rows(&s.v));
        ensure!(
            du.unwrap().abs().is_one() && dv.unwrap().abs().is_one(),
            "transforms not unimodular"
        );
    }
    let mut sparse = SparseMatrix::new(m.rows(), m.cols());
    for (i, row) in rows.iter().enumerate() {
        for (j, &x) in row.iter().enumerate() {
            sparse.add(i, j, x);
        }
    }
    ensure!(
        invariant_factors(&sparse) == s.diagonal,
        "sparse route disagrees for {rows:?}"
    );
    Ok(())
}

fn to_rows(m: &IntMatrix) -> Vec<Vec<BigInt>> {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| m[(i, j)].clone()).collect())
        .collect()
}

fn random_word(rng: &mut StdRng, labels: usize, len: usize) -> Word {
    Word((0..len).map(|_| Label(rng.gen_range(0..labels as u32))).collect())
}

fn relator_word(rng: &mut StdRng, g: &LabeledGraph) -> Word {
    let cycle = g.shortest_cycle().expect("relators have cycles");
    let mut w: Vec<Label> = cycle
        .vertices
        .iter()
        .zip(cycle.vertices.iter().cycle().skip(1))
        .map(|(&u, &v)| {
            let d = g.out_edges(u).iter().copied().find(|&d| g.target(d) == v).unwrap();
            g.label(d)
        })
        .collect();
    let shift = rng.gen_range(0..w.len());
    w.rotate_left(shift);
    Word(w)
}

fn c10_properties() -> Result<String, String> {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    for _ in 0..200 {
        snf_property(&random_matrix(&mut rng))?;
    }

    let samples = [
        TwoComplex::single_polygon(5),
        build_k1(&BuildRecipe::for_order(3, 4).unwrap()).unwrap(),
        build_k1(&BuildRecipe::for_order(4, 3).unwrap()).unwrap(),
        build_k2(&default_k1(), 0).unwrap(),
    ];
    for (i, k) in samples.iter().enumerate() {
        let h = homology(k);
        for m in 2..=3 {
            let sub = subdivide_edges(k, m).map_err(|e| e.to_string())?;
            ensure!(homology(&sub) == h, "sample {i}: subdivision by {m} changes homology");
        }
        ensure!(
            homology(&conical_subdivision(k)) == h,
            "sample {i}: conical subdivision changes homology"
        );
    }

    let k = default_full();
    let p = materialize_hs(&k, &[1, 2, 3], &[2]).map_err(|e| e.to_string())?;
    let reducer = DehnReducer::new(&p).map_err(|e| e.to_string())?;
    let ab = Abelianization::of(&p);
    let n = p.labels().len();
    let (mut trivial, mut steps) = (0, 0);
    for i in 0..200 {
        let w = if i % 2 == 0 {
            {
                let len = rng.gen_range(0..40);
                random_word(&mut rng, n, len)
            }
        } else {
            let r = &p.relators()[rng.gen_range(0..p.relators().len())];
            let len = rng.gen_range(0..6);
            let u = random_word(&mut rng, n, len);
            let mut core = relator_word(&mut rng, &r.graph);
            if rng.gen_bool(0.5) {
                core = core.inverse();
            }
            Word([u.0.clone(), core.0, u.inverse().0].concat())
        };
        let trace = reducer.reduce(&w);
        let mut len = w.free_reduce().len();
        for s in &trace.steps {
            ensure!(
                s.result.len() < len,
                "step does not shorten {len} -> {}",
                s.result.len()
            );
            ensure!(s.result.is_reduced(), "step result not freely reduced");
            len = s.result.len();
        }
        steps += trace.steps.len();
        if trace.trivial {
            trivial += 1;
            ensure!(
                ab.kills(&w),
                "reducer says trivial but the abelian image is {:?}",
                ab.image(&w)
            );
        }
        ensure!(reducer.is_trivial(&w.inverse()) == trace.trivial, "inverse disagrees");
        if i % 2 == 1 {
            ensure!(
                trace.trivial,
                "conjugated relator not reduced to 1: {}",
                p.labels().format_word(&w)
            );
        }
    }
    Ok(format!(
        "200 SNF, 12 subdivisions, 200 words ({trivial} trivial, {steps} steps)"
    ))
}

fn genus_two_theta() -> (LabelSet, LabeledGraph) {
    let labels = LabelSet::new(["a", "b", "c", "d", "e", "f"]).unwrap();
    let mut edges = Vec::new();
    let mut next = 2;
    for path in ["a b ~a ~b", "c d ~c ~d", "e f ~e ~f"] {
        let word = labels.parse_word(path).unwrap();
        let mut prev = 0;
        for (i, &l) in word.labels().iter().enumerate() {
            let to = if i == 3 { 1 } else { next };
            if i < 3 {
                next += 1;
            }
            edges.push((prev, to, l));
            prev = to;
        }
    }
    (labels, LabeledGraph::new(next, edges).unwrap())
}

fn c11_genus_two() -> Result<String, String> {
    let (labels, theta) = genus_two_theta();
    let single =
        GraphicalPresentation::from_relators(labels.clone(), vec![theta.clone()]).map_err(|e| e.to_string())?;
    let report = check_c16(&single);
    let worst = report.worst.clone().unwrap();
    ensure!(
        report.passed && worst.piece == Length::Finite(1),
        "theta: piece {}",
        worst.piece
    );
    ensure!(
        common::piece_by_enumeration(&theta, &theta, true, 4) == Some(1),
        "theta oracle"
    );

    let words = [
        labels.parse_word("a b ~a ~b d c ~d ~c").unwrap(),
        labels.parse_word("a b ~a ~b f e ~f ~e").unwrap(),
    ];
    let classical = GraphicalPresentation::from_words(labels, &words).map_err(|e| e.to_string())?;
    let report = check_c16(&classical);
    let worst = report.worst.clone().unwrap();
    ensure!(
        !report.passed && worst.piece == Length::Finite(4),
        "classical: piece {}",
        worst.piece
    );
    let (g0, g1) = (&classical.relators()[0].graph, &classical.relators()[1].graph);
    ensure!(
        common::piece_by_enumeration(g0, g1, false, 8) == Some(4),
        "classical oracle"
    );
    Ok("theta piece 1 passes; two octagons share a piece of 4 and fail".into())
}

fn main() {
    let criteria: [(u8, &str, Check, u64); 11] = [
        (1, "K1 construction", c1_k1_counts, 5),
        (2, "K1 homology", c2_k1_homology, 10),
        (3, "K2 acyclicity", c3_k2_acyclic, 10),
        (4, "spectacular verification", c4_spectacular, 30),
        (5, "small zoo", c5_small_zoo, 5),
        (6, "triples and pieces", c6_triples_and_pieces, 10),
        (7, "graphical C'(1/6)", c7_c16, 60),
        (8, "closed-form pieces", c8_closed_forms, 10),
        (9, "R-invariant separation", c9_r_invariant, 60),
        (10, "property suites", c10_properties, 60),
        (11, "genus-2 fixtures", c11_genus_two, 1),
    ];
    let filter: Vec<u8> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    for (n, name, check, budget) in criteria {
        if !filter.is_empty() && !filter.contains(&n) {
            continue;
        }
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let elapsed = start.elapsed();
        let over = elapsed > Duration::from_secs(budget);
        let (status, detail) = match (&outcome, over) {
            (Ok(d), false) => ("PASS", d.clone()),
            (Ok(d), true) => ("FAIL", format!("{d} (over the {budget} s budget)")),
            (Err(e), _) => ("FAIL", e.clone()),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!(
            "criterion {n:>2}: {status} {name} [{:.2} s / {budget} s] {detail}",
            elapsed.as_secs_f64()
        );
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
