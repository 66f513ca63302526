//! Acceptance suite: one test per acceptance criterion, each printing a
//! pass/fail line (run with `cargo test --test acceptance -- --nocapture`
//! to see them).  Tolerances are exact and timing bounds are asserted.

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use ultragraph::classify::{self, Status, Witness};
use ultragraph::corpus::{random_ultragraph, Rng64};
use ultragraph::ktheory::{
    graph_algebra_rank_obstruction, k_groups, six_term_rank_gap, transpose_minus_identity,
    truncated_kernel_stabilization, EventuallyConstantVector,
};
use ultragraph::model::{find_loops, relabel, DenseZeroOne, Description, LoopMode, Ultragraph};
use ultragraph::setalg::{
    evaluate_atoms, orthogonalize, partition_identity, ProjectionCombo, SetUniverse, VertexSet,
};
use ultragraph::Options;
use ultragraph_cli::parse::{parse_matrix, parse_ultragraph, ZeroOneMatrixKind};

const CORPUS_SEED: u64 = 0xacce972026;
const CORPUS_SIZE: u64 = 1000;

fn fixture(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name);
    std::fs::read_to_string(path).expect("fixture exists")
}

fn corpus() -> impl Iterator<Item = Ultragraph> {
    let mut rng = Rng64::new(CORPUS_SEED);
    (0..CORPUS_SIZE).map(move |_| random_ultragraph(&mut rng, 7, 10))
}

fn conclude(n: u32, slug: &str, ok: bool) {
    println!(
        "criterion {n} ({slug}): {}",
        if ok { "PASS" } else { "FAIL" }
    );
    assert!(ok, "criterion {n} ({slug}) failed");
}

fn within(start: Instant, bound: Duration) -> bool {
    let took = start.elapsed();
    if took > bound {
        eprintln!("time bound exceeded: {took:?} > {bound:?}");
    }
    took <= bound
}

/// The descending-chain fixture is simple by both characterizations, and
/// its condition (L) trail shows every loop passing through the fan edge.
#[test]
fn criterion_1_chain_fixture_is_simple() {
    let start = Instant::now();
    let doc = parse_ultragraph(&fixture("descending_chain.ug")).unwrap();
    let d = doc.build().unwrap();
    let opts = Options::default();

    let (lattice, reach) = classify::simplicity_methods(&d, &opts).unwrap();
    let both = lattice.status == Status::Holds && reach.status == Status::Holds;
    let verdict = classify::is_simple(&d, &opts).unwrap();

    let g = d.as_symbolic().unwrap();
    let window = g.resolve(g.default_horizon()).unwrap();
    let fan = window.graph.edge_named("e").unwrap();
    let loops = find_loops(&window.graph, LoopMode::FirstReturn, 1_000_000).unwrap();
    let trail = !loops.is_empty() && loops.iter().all(|l| l.edges().contains(&fan));
    let condition_l = classify::condition_l(&d, &opts).unwrap().status == Status::Holds;

    let ok = both
        && verdict.status == Status::Holds
        && condition_l
        && trail
        && within(start, Duration::from_secs(1));
    conclude(1, "descending chain simple via both characterizations", ok);
}

/// From one symbolic matrix, the ultragraph is simple while the ordinary
/// graph is not, with the cofinite support excluding v0 as the witness.
#[test]
fn criterion_2_matrix_comparison() {
    let start = Instant::now();
    let doc = parse_matrix(&fixture("descending_chain.mat")).unwrap();
    let ZeroOneMatrixKind::Symbolic(a) = doc.build().unwrap() else {
        panic!("expected a symbolic matrix");
    };
    let opts = Options::default();

    let ga = Description::Symbolic(ultragraph::model::ultragraph_from_symbolic_matrix(&a).unwrap());
    let gr = Description::Symbolic(ultragraph::model::graph_from_symbolic_matrix(&a).unwrap());

    let va = classify::is_simple(&ga, &opts).unwrap();
    let vg = classify::is_simple(&gr, &opts).unwrap();
    let witness_ok = vg.witness
        == Some(Witness::ProperSaturatedHereditary {
            cofinite: true,
            members: vec!["v0".into()],
        });
    let reverifies = classify::verify_witness(&gr, &vg, &opts).is_ok();

    let ok = va.status == Status::Holds
        && vg.status == Status::Fails
        && witness_ok
        && reverifies
        && within(start, Duration::from_secs(1));
    conclude(
        2,
        "ultragraph simple, graph of the same matrix not simple",
        ok,
    );
}

/// Truncated kernels of the shift-by-three matrix stabilize at rank two
/// with the canonical difference basis, and the symbolic product
/// reproduces the point-mass identities exactly.
#[test]
fn criterion_3_kernel_stabilization() {
    let start = Instant::now();
    let doc = parse_matrix(&fixture("shift_by_three.mat")).unwrap();
    let ZeroOneMatrixKind::Symbolic(a) = doc.build().unwrap() else {
        panic!("expected a symbolic matrix");
    };

    let report = truncated_kernel_stabilization(&a, &[12, 24, 36, 48]).unwrap();
    let expected_basis = vec![
        vec![BigInt::from(-1), BigInt::from(1)],
        vec![BigInt::from(-1), BigInt::from(0), BigInt::from(1)],
    ];
    let ranks_ok = report.per_size.iter().all(|&(_, r)| r == 2);
    let stab_ok = report.stabilized && report.rank == Some(2) && report.basis == expected_basis;

    let m = transpose_minus_identity(&a).unwrap();
    // positions are 0-based: the matrix indices start at 1
    let deltas_ok = (0..4).all(|p| {
        m.apply(&EventuallyConstantVector::delta(p + 3)) == EventuallyConstantVector::delta(p)
    });
    let block = EventuallyConstantVector::new(
        vec![BigInt::from(0), BigInt::from(0), BigInt::from(0)],
        BigInt::from(1),
    );
    let block_ok = m.apply(&EventuallyConstantVector::delta(0)) == block;
    let basis_annihilates = report.basis.iter().all(|b| {
        let entries: Vec<i64> = b.iter().map(|x| i64::try_from(x).unwrap()).collect();
        m.apply(&EventuallyConstantVector::from_finite(&entries))
            .is_zero()
    });

    let ok = ranks_ok
        && stab_ok
        && deltas_ok
        && block_ok
        && basis_annihilates
        && within(start, Duration::from_secs(5));
    conclude(3, "interior kernel rank two with the difference basis", ok);
}

/// The six-term bookkeeping for an extension with K-data `(0, ℤ²)` and
/// `(ℤ, 0)` forces `rank K₀ < rank K₁`, which obstructs unital graph
/// algebras.
#[test]
fn criterion_4_rank_obstruction() {
    let ranks = six_term_rank_gap((0, 2), (1, 0));
    let ok =
        ranks.k1_minus_k0 == 1 && ranks.k1_exceeds_k0() && !graph_algebra_rank_obstruction(0, 2);
    conclude(4, "six-term rank gap rules out unital graph algebras", ok);
}

/// On 1000 seeded random ultragraphs, the two simplicity
/// characterizations agree with zero disagreements.
#[test]
fn criterion_5_characterization_equivalence() {
    let start = Instant::now();
    let opts = Options::default();
    let mut disagreements = 0u32;
    let mut count = 0u32;
    for g in corpus() {
        let d = Description::Finite(g);
        let (lattice, reach) = classify::simplicity_methods(&d, &opts).unwrap();
        if lattice.decided() != reach.decided() {
            disagreements += 1;
        }
        count += 1;
    }
    let ok = count == 1000 && disagreements == 0 && within(start, Duration::from_secs(60));
    conclude(
        5,
        "lattice and reachability simplicity agree on 1000 instances",
        ok,
    );
}

/// Every decided-simple instance of the corpus is AF or purely infinite,
/// never both.
#[test]
fn criterion_6_dichotomy() {
    let opts = Options::default();
    let mut simple = 0u32;
    let mut exceptions = 0u32;
    for g in corpus() {
        let d = Description::Finite(g);
        if classify::is_simple(&d, &opts).unwrap().status != Status::Holds {
            continue;
        }
        simple += 1;
        let af = classify::is_af(&d, &opts).unwrap().decided().unwrap();
        let pi = classify::is_purely_infinite(&d, &opts)
            .unwrap()
            .decided()
            .unwrap();
        if af == pi {
            exceptions += 1;
        }
    }
    let ok = simple > 0 && exceptions == 0;
    conclude(6, "simple instances split into AF xor purely infinite", ok);
}

/// Orthogonalization preserves pointwise evaluation with pairwise
/// disjoint atoms on 500 random combinations, and partitions of unity sum
/// to one everywhere, all in exact rational arithmetic.
#[test]
fn criterion_7_projection_calculus() {
    let mut rng = Rng64::new(CORPUS_SEED ^ 0x9);
    let universe_size = 12u32;
    let mut checked = 0;
    for _ in 0..500 {
        let terms = rng.below(7);
        let combo = ProjectionCombo::new((0..terms).map(|_| {
            let coeff = BigRational::new(BigInt::from(rng.below(13) as i64 - 6), BigInt::from(2));
            let bits = 1 + rng.below((1 << universe_size) - 1);
            let set = VertexSet::finite((0..universe_size).filter(|j| bits & (1 << j) != 0));
            (coeff, set)
        }));
        let atoms = orthogonalize(&combo, 1 << 20).unwrap();
        for v in 0..universe_size {
            assert_eq!(evaluate_atoms(&atoms, &v), combo.evaluate(&v));
        }
        for (i, a) in atoms.iter().enumerate() {
            for b in atoms.iter().skip(i + 1) {
                assert!(a.support_set().is_disjoint_from(&b.support_set()));
            }
        }
        checked += 1;
    }

    let universe: BTreeSet<u32> = (0..universe_size).collect();
    for _ in 0..500 {
        let n = rng.below(6);
        let sets: Vec<VertexSet<u32>> = (0..n)
            .map(|_| {
                let bits = 1 + rng.below((1 << universe_size) - 1);
                VertexSet::finite((0..universe_size).filter(|j| bits & (1 << j) != 0))
            })
            .collect();
        let atoms =
            partition_identity(&SetUniverse::Finite(universe.clone()), &sets, 1 << 20).unwrap();
        for v in &universe {
            assert_eq!(evaluate_atoms(&atoms, v), BigRational::one());
        }
    }
    conclude(
        7,
        "orthogonal atoms preserve evaluation and partition unity",
        checked == 500,
    );
}

/// The first-return loop check and the cofinality reduction each agree
/// with their brute-force oracles across the corpus.
#[test]
fn criterion_8_oracle_guards() {
    let mut loop_disagreements = 0u32;
    let mut cofinal_disagreements = 0u32;
    for g in corpus() {
        let bound = 2 * g.vertex_count();
        let fast = classify::finite::first_exitless_loop(&g, 10_000_000)
            .unwrap()
            .is_none();
        let oracle = classify::finite::exitless_loop_within(&g, bound).is_none();
        if fast != oracle {
            loop_disagreements += 1;
        }
        let fast = classify::finite::cofinality_violation(&g).is_none();
        let oracle = classify::finite::cofinality_oracle(&g, 10_000_000).unwrap();
        if fast != oracle {
            cofinal_disagreements += 1;
        }
    }
    let ok = loop_disagreements == 0 && cofinal_disagreements == 0;
    conclude(
        8,
        "loop and cofinality oracles agree with the fast routes",
        ok,
    );
}

/// K-group spot checks and invariance under 100 random relabelings.
#[test]
fn criterion_9_ktheory_spot_checks() {
    let one = DenseZeroOne::from_ints(&[&[1]]).unwrap();
    let k = k_groups(&one);
    let one_ok = k.k0_invariant_factors.is_empty() && k.k0_free_rank == 1 && k.k1_free_rank == 1;

    let full = DenseZeroOne::from_ints(&[&[1, 1], &[1, 1]]).unwrap();
    let k = k_groups(&full);
    let full_ok = k.k0_is_trivial() && k.k1_is_trivial();

    let mut rng = Rng64::new(CORPUS_SEED ^ 0x42);
    let mut relabelings = 0;
    let mut invariant = true;
    while relabelings < 100 {
        let n = 2 + rng.below(4) as usize;
        let rows: Vec<Vec<bool>> = (0..n)
            .map(|_| (0..n).map(|_| rng.below(2) == 1).collect())
            .collect();
        let a = DenseZeroOne::new(rows).unwrap();
        let mut perm: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            perm.swap(i, rng.below(i as u64 + 1) as usize);
        }
        let g = ultragraph::model::graph_from_matrix(&a);
        let h = relabel(&g, &perm).unwrap();
        let mut rows2 = vec![vec![false; n]; n];
        for e in h.edges() {
            for w in &e.range {
                rows2[e.source.index()][w.index()] = true;
            }
        }
        let b = DenseZeroOne::new(rows2).unwrap();
        let (ka, kb) = (k_groups(&a), k_groups(&b));
        invariant &= ka.k0_invariant_factors == kb.k0_invariant_factors
            && ka.k0_free_rank == kb.k0_free_rank
            && ka.k1_free_rank == kb.k1_free_rank;
        relabelings += 1;
    }
    conclude(
        9,
        "k-group spot checks and relabeling invariance",
        one_ok && full_ok && invariant,
    );
}
