//! Acceptance run: one line per criterion, exit status 1 if any criterion fails.
//!
//! Each criterion runs one or more suites at the default profile and at three
//! seeded random specializations that are generic up to the criterion depth.

use std::process::ExitCode;
use std::time::Instant;

use uqsl_shapovalov::suites::{run_suite, specializations, Suite, SuiteConfig, SuiteOutcome};

const SEED: u64 = 20_240_601;
const TRIALS: u32 = 3;

/// One suite at one rank with its limits.
struct Run {
    suite: Suite,
    n: usize,
    depth: u32,
    power: u32,
}

fn run(suite: Suite, n: usize, depth: u32, power: u32) -> Run {
    Run { suite, n, depth, power }
}

struct Criterion {
    /// Printed before the title; supplementary checks are marked `+`.
    label: &'static str,
    title: &'static str,
    runs: Vec<Run>,
}

fn criteria() -> Vec<Criterion> {
    use Suite::*;
    let per_rank = |suite: Suite, depths: [u32; 3], power: u32| -> Vec<Run> {
        (1..=3).map(|n| run(suite, n, depths[n - 1], power)).collect()
    };
    vec![
        Criterion {
            label: "1",
            title: "defining relations as operators (rank 2 to degree 6, rank 3 to degree 4)",
            runs: per_rank(DefiningRelations, [6, 6, 4], 1),
        },
        Criterion {
            label: "2",
            title: "dimension oracle: PBW count equals words minus Serre rank",
            runs: per_rank(DimensionOracle, [6, 6, 4], 1),
        },
        Criterion {
            label: "3",
            title: "dynamical bases are orthogonal with norms B_l (rank 2 to degree 5, rank 3 to degree 4)",
            runs: [CyclicDiagonal, ContravariantDiagonal, RowFactors]
                .into_iter()
                .flat_map(|s| per_rank(s, [5, 5, 4], 1))
                .collect(),
        },
        Criterion {
            label: "4",
            title: "normal and reversed positive dynamical monomials agree",
            runs: per_rank(OrderingIndependence, [4, 4, 4], 1),
        },
        Criterion {
            label: "5",
            title:
                "row commutativity, commutation with the first generators and row-order independence (contents up to 3)",
            runs: [RowCommutativity, OrderingIndependence]
                .into_iter()
                .flat_map(|s| per_rank(s, [3, 3, 3], 1))
                .collect(),
        },
        Criterion {
            label: "6",
            title: "rank-two closed product equals B_l and the engine for m+l+k <= 5",
            runs: vec![run(Sl3ClosedForm, 2, 5, 1)],
        },
        Criterion {
            label: "7",
            title: "root power norms for powers up to 3",
            runs: per_rank(RootPowerNorms, [3, 3, 3], 3),
        },
        Criterion {
            label: "8",
            title: "reduction recursions and the lower-ideal reduction for l up to 4",
            runs: per_rank(ReductionIdentities, [3, 3, 3], 4),
        },
        Criterion {
            label: "9",
            title: "canonical element inverts the Gram matrix",
            runs: per_rank(InversePairing, [4, 4, 4], 1),
        },
        Criterion {
            label: "10",
            title: "singular vector suite (powers up to 3)",
            runs: per_rank(SingularVectors, [4, 4, 4], 3),
        },
        Criterion {
            label: "11",
            title: "flipped dynamical basis and its degeneration",
            runs: vec![run(FlipDegeneration, 2, 4, 1), run(FlipDegeneration, 3, 4, 1)],
        },
        Criterion {
            label: "12",
            title: "root vector commutation and root ideal membership (degrees up to 4)",
            runs: per_rank(RootVectorCommutation, [4, 4, 4], 1),
        },
        Criterion {
            label: "+",
            title: "raising operators on dynamical vectors and alternative expressions",
            runs: [RaisingOnDynamical, AlternativeDisplays]
                .into_iter()
                .flat_map(|s| per_rank(s, [4, 4, 4], 1))
                .collect(),
        },
    ]
}

fn execute(r: &Run) -> Vec<SuiteOutcome> {
    let params = specializations(r.n, TRIALS, SEED, r.depth).expect("specializations");
    let cfg = SuiteConfig { depth: r.depth, power: r.power };
    params.iter().map(|p| run_suite(r.suite, p, &cfg)).collect()
}

fn main() -> ExitCode {
    let start = Instant::now();
    let mut all_ok = true;
    let mut discrepancies = 0u64;
    let mut first_discrepancy = None;
    let list = criteria();
    for c in &list {
        let t = Instant::now();
        let outcomes: Vec<SuiteOutcome> = c.runs.iter().flat_map(execute).collect();
        let checks: u64 = outcomes.iter().map(|o| o.checks).sum();
        let failed: Vec<&SuiteOutcome> = outcomes.iter().filter(|o| !o.passed).collect();
        for o in &outcomes {
            discrepancies += o.discrepancy_count;
            if first_discrepancy.is_none() {
                first_discrepancy = o.discrepancies.first().cloned();
            }
        }
        let ok = failed.is_empty() && checks > 0;
        all_ok &= ok;
        println!(
            "[{}] {:>2}. {} ({} checks, {:.1}s)",
            if ok { "PASS" } else { "FAIL" },
            c.label,
            c.title,
            checks,
            t.elapsed().as_secs_f64()
        );
        for o in failed.iter().take(3) {
            println!(
                "       {} n={} q={} z=({}): {}",
                o.suite,
                o.n,
                o.q,
                o.z.join(","),
                o.counterexample.clone().unwrap_or_else(|| format!("{} formula discrepancies", o.discrepancy_count))
            );
        }
    }
    let ok = discrepancies == 0;
    all_ok &= ok;
    println!(
        "[{}] 13. no formula disagrees with the engine ({discrepancies} discrepancies)",
        if ok { "PASS" } else { "FAIL" }
    );
    if let Some(d) = first_discrepancy {
        println!("       {} at {}: formula {}, engine {}", d.formula, d.point, d.formula_value, d.engine_value);
    }
    println!("acceptance finished in {:.1}s", start.elapsed().as_secs_f64());
    if all_ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
