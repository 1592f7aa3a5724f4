//! Acceptance run: one PASS/FAIL line per criterion. Time limits are wall
//! clock per criterion and are part of each check.
//!
//! Criteria listed in `KNOWN_FAILURES` are expected to fail for the stated
//! reason; they still print FAIL. The run exits non-zero if any other
//! criterion fails, or if a known failure stops failing.

use std::collections::BTreeSet;
use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Stdio};
use std::time::{Duration, Instant};

use bergman::endo::check_fan_compatibility_with;
use bergman::fan::{bergman_fan, chain_span, fine_subdivision, nested_fan};
use bergman::io::{MapDoc, MatroidDoc};
use bergman::tropical::{chain_interior_point, chain_partition, degeneration_matroid, polytope_dim, transversal_bases};
use bergman::verify::{fans_equal_min_vs_bergman, fs_criterion, support_consistency, verify_distinct_spans, verify_distinct_spans_fine, Witness};
use bergman::{
    corpus, generators, is_matroid_automorphism, maps_into_trop, permutation_map, BuildingSet, IntegerLinearMap, LatticeOfFlats, Subset,
    TropicalLinearSpace,
};

const SUPPORT_BOX: u32 = 3;
const SUPPORT_SAMPLES: usize = 1000;
const SUPPORT_SEED: u64 = 20240601;

/// (criterion, reason it cannot pass as stated)
const KNOWN_FAILURES: &[(usize, &str)] = &[(
    1,
    "the expected list holds only the four 3-element circuits; the matroid also has the 4-element circuits \
     {0,1,4,5}, {0,2,3,5}, {1,2,3,4}, and the 3-element list alone violates circuit elimination",
)];

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn s<const N: usize>(e: [usize; N]) -> Subset {
    Subset::from(e)
}

fn binary() -> PathBuf {
    PathBuf::from(env!("CARGO_BIN_EXE_bergman"))
}

/// Runs the binary; returns (exit code, stdout).
fn cli(args: &[&str], stdin: &[u8]) -> (i32, Vec<u8>) {
    let mut child = Command::new(binary())
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::null())
        .spawn()
        .expect("spawn bergman");
    child.stdin.take().expect("stdin").write_all(stdin).expect("write stdin");
    let out = child.wait_with_output().expect("wait for bergman");
    (out.status.code().unwrap_or(-1), out.stdout)
}

fn c1_circuits() -> Outcome {
    let (code, matroid) = cli(&["gen", "braid", "3"], b"");
    ensure(code == 0, || format!("gen exited {code}"))?;
    let (code, out) = cli(&["circuits"], &matroid);
    ensure(code == 0, || format!("circuits exited {code}"))?;
    let got: BTreeSet<Subset> = serde_json::from_slice::<Vec<Subset>>(&out).map_err(|e| e.to_string())?.into_iter().collect();
    let expected: BTreeSet<Subset> = [s([0, 1, 3]), s([0, 2, 4]), s([1, 2, 5]), s([3, 4, 5])].into();
    let triangles: BTreeSet<Subset> = got.iter().copied().filter(|c| c.len() == 3).collect();
    let list = |x: &BTreeSet<Subset>| x.iter().map(ToString::to_string).collect::<Vec<_>>().join(",");
    if got == expected {
        Ok(format!("circuits {{{}}}", list(&got)))
    } else {
        Err(format!(
            "output has {} circuits {{{}}}; its 3-element circuits {} the expected four",
            got.len(),
            list(&got),
            if triangles == expected { "are exactly" } else { "differ from" }
        ))
    }
}

fn c2_a3_census() -> Outcome {
    let m = corpus::m_a3();
    let lattice = LatticeOfFlats::new(&m);
    let fine = fine_subdivision(&m).map_err(|e| e.to_string())?;
    let b = bergman_fan(&m).map_err(|e| e.to_string())?;
    let gmin = BuildingSet::minimal(&m, &lattice).map_err(|e| e.to_string())?;
    let smin = nested_fan(&m, &lattice, &gmin).map_err(|e| e.to_string())?;
    let counts = (fine.cones.len(), b.cones().len(), b.ray_flats().len(), smin.cones.len());
    ensure(counts == (18, 15, 10, 15), || format!("fine/bergman/rays/min = {counts:?}, expected (18, 15, 10, 15)"))?;
    ensure(b.lineality_dim() == 1, || "lineality is not 1".into())?;
    ensure(fans_equal_min_vs_bergman(&m).map_err(|e| e.to_string())?.passed(), || "fans_equal fails".into())?;
    ensure(fs_criterion(&m).map_err(|e| e.to_string())?.passed(), || "fs_criterion fails".into())?;
    Ok("fine 18, Bergman 15 cones / 10 rays, Σ_min 15, fans_equal pass, fs pass".into())
}

fn c3_n5() -> Outcome {
    let m = corpus::n5();
    let fs = fs_criterion(&m).map_err(|e| e.to_string())?;
    ensure(!fs.passed(), || "fs_criterion passes".into())?;
    let Some(Witness::FlatPair { f, g, .. }) = fs.witnesses.first() else {
        return Err("no flat-pair witness".into());
    };
    let g_connected = m.restriction(*g).map_err(|e| e.to_string())?.is_connected();
    let minor_connected = m.minor_interval(*f, *g).map_err(|e| e.to_string())?.is_connected();
    ensure(g_connected && !minor_connected, || format!("witness ({f}, {g}) does not replay"))?;
    let fe = fans_equal_min_vs_bergman(&m).map_err(|e| e.to_string())?;
    ensure(!fe.passed(), || "fans_equal passes".into())?;
    let (nmin, nb) = (fe.stats["nested_cones"], fe.stats["bergman_cones"]);
    ensure(nmin != nb, || format!("cone counts agree ({nmin})"))?;
    Ok(format!("fs fails at F = {f}, G = {g} (replayed); fans_equal fails; Σ_min {nmin} vs Bergman {nb} cones"))
}

fn c4_fano() -> Outcome {
    let m = generators::pg(2, 2).map_err(|e| e.to_string())?;
    let chains = LatticeOfFlats::new(&m).maximal_chains().map_err(|e| e.to_string())?.len();
    ensure(chains == 21, || format!("{chains} maximal chains"))?;
    ensure(fs_criterion(&m).map_err(|e| e.to_string())?.passed(), || "fs_criterion fails".into())?;
    ensure(fans_equal_min_vs_bergman(&m).map_err(|e| e.to_string())?.passed(), || "fans_equal fails".into())?;
    Ok("21 chains, fs pass, fans_equal pass".into())
}

fn c5_distinct_spans() -> Outcome {
    for (name, m) in corpus::theorem_corpus() {
        let r = verify_distinct_spans(&m).map_err(|e| format!("{name}: {e}"))?;
        ensure(r.passed(), || format!("{name}: {} colliding pairs", r.witnesses.len()))?;
    }
    let fine = verify_distinct_spans_fine(&corpus::m_a3()).map_err(|e| e.to_string())?;
    ensure(fine.witnesses.len() == 3, || format!("fine subdivision of M_A3 has {} colliding pairs", fine.witnesses.len()))?;
    let pair_flats: BTreeSet<Subset> = fine
        .witnesses
        .iter()
        .filter_map(|w| match w {
            Witness::SpanCollision { chains, .. } if chains[0].flats()[1] == chains[1].flats()[1] => Some(chains[0].flats()[1]),
            _ => None,
        })
        .collect();
    ensure(pair_flats == [s([0, 5]), s([1, 4]), s([2, 3])].into(), || format!("collisions at {pair_flats:?}"))?;
    Ok(format!("{} corpus matroids pass; fine M_A3 has 3 colliding pairs through {{0,5}}, {{1,4}}, {{2,3}}", corpus::theorem_corpus().len()))
}

fn c6_support() -> Outcome {
    let mut inside = 0;
    for (name, m) in corpus::theorem_corpus() {
        let r = support_consistency(&m, SUPPORT_BOX, SUPPORT_SAMPLES, SUPPORT_SEED).map_err(|e| format!("{name}: {e}"))?;
        ensure(r.passed(), || format!("{name}: {} disagreements", r.witnesses.len()))?;
        inside += r.stats["in_trop"];
    }
    let total = SUPPORT_SAMPLES * corpus::theorem_corpus().len();
    Ok(format!("{total} samples agree ({inside} in trop)"))
}

fn c7_formulas() -> Outcome {
    let mut all = corpus::theorem_corpus();
    all.push(("D22", corpus::d22()));
    for (name, m) in all {
        let dim = polytope_dim(&m).map_err(|e| e.to_string())?;
        ensure(dim == m.size() - m.num_components(), || format!("{name}: polytope dim {dim}"))?;
        let lattice = LatticeOfFlats::new(&m);
        for g in [BuildingSet::minimal(&m, &lattice), BuildingSet::maximal(&m, &lattice)] {
            let g = g.map_err(|e| e.to_string())?;
            let fan = nested_fan(&m, &lattice, &g).map_err(|e| format!("{name}: {e}"))?;
            ensure(fan.cone_dims().iter().all(|&d| d + 1 == m.rank()), || format!("{name}: nested fan not pure"))?;
        }
    }
    Ok("polytope dim = |E| - κ and nested fans pure of dim r-1 on corpus + D22".into())
}

fn c8_chain_pairs() -> Outcome {
    let mut pairs = 0usize;
    for (name, m) in corpus::theorem_corpus() {
        let lattice = LatticeOfFlats::new(&m);
        let fan = bergman_fan(&m).map_err(|e| e.to_string())?;
        let chains = lattice.maximal_chains().map_err(|e| e.to_string())?;
        let mut data = Vec::with_capacity(chains.len());
        for c in &chains {
            let part = chain_partition(&lattice, c).map_err(|e| e.to_string())?;
            let face = degeneration_matroid(&m, &chain_interior_point(m.size(), c)).map_err(|e| e.to_string())?;
            let bases = transversal_bases(&m, &part).map_err(|e| e.to_string())?;
            ensure(face.bases() == bases.as_slice(), || format!("{name}: {c} selects a different face"))?;
            data.push((chain_span(m.size(), c), part.block_set(), fan.cone_of_chain(c)));
        }
        for a in &data {
            for b in &data {
                pairs += 1;
                ensure((a.0 == b.0) == (a.1 == b.1), || format!("{name}: span and block equality disagree"))?;
                ensure(a.1 != b.1 || a.2 == b.2, || format!("{name}: equal blocks in different cones"))?;
            }
        }
    }
    Ok(format!("{pairs} ordered chain pairs checked"))
}

fn c9_endomorphisms() -> Outcome {
    for (name, m) in corpus::theorem_corpus() {
        let id = IntegerLinearMap::identity(m.size());
        ensure(maps_into_trop(&m, &id).map_err(|e| e.to_string())?.passed(), || format!("{name}: identity fails"))?;
    }
    let f7 = corpus::f7();
    let (fan, trop) = (bergman_fan(&f7).map_err(|e| e.to_string())?, TropicalLinearSpace::new(&f7).map_err(|e| e.to_string())?);
    let autos = [corpus::fano_singer_cycle(), corpus::fano_frobenius(), corpus::fano_transvection()];
    for p in &autos {
        ensure(is_matroid_automorphism(&f7, p).map_err(|e| e.to_string())?, || format!("{p:?} is not a Fano automorphism"))?;
        let r = check_fan_compatibility_with(&fan, &trop, &permutation_map(p).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        ensure(r.passed(), || format!("Fano automorphism {p:?} fails"))?;
    }
    let a3 = corpus::m_a3();
    let bad: [[usize; 6]; 3] = [[1, 0, 2, 3, 4, 5], [0, 1, 2, 3, 5, 4], [3, 1, 2, 0, 4, 5]];
    for p in &bad {
        ensure(!is_matroid_automorphism(&a3, p).map_err(|e| e.to_string())?, || format!("{p:?} is an automorphism"))?;
        let r = maps_into_trop(&a3, &permutation_map(p).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        ensure(!r.passed(), || format!("{p:?} passes"))?;
        for w in &r.witnesses {
            ensure(w.replay(&a3).map_err(|e| e.to_string())?, || format!("{p:?}: witness does not replay"))?;
        }
    }
    Ok(format!("identity passes on {} matroids; 3 Fano automorphisms pass; 3 M_A3 non-automorphisms fail with replayed witnesses", corpus::theorem_corpus().len()))
}

fn c10_determinism() -> Outcome {
    let dir = std::env::temp_dir().join(format!("bergman-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let map_path = dir.join("swap.json");
    std::fs::write(&map_path, MapDoc::from_map(&permutation_map(&[1, 0, 2, 3, 4, 5]).unwrap()).to_json()).map_err(|e| e.to_string())?;
    let map = map_path.to_str().expect("utf-8 temp path").to_string();
    let a3 = cli(&["gen", "braid", "3"], b"").1;
    let n5 = MatroidDoc::matrix(corpus::n5_matrix()).to_json().into_bytes();
    let commands: Vec<Vec<&str>> = vec![
        vec!["circuits"],
        vec!["flats"],
        vec!["chains"],
        vec!["nested", "--building", "min"],
        vec!["nested", "--building", "max", "--maximal"],
        vec!["polytope"],
        vec!["fine-fan"],
        vec!["nested-fan", "--building", "min"],
        vec!["bergman"],
        vec!["bergman", "--output", "summary"],
        vec!["verify-spans"],
        vec!["verify-spans", "--fine"],
        vec!["verify-fs"],
        vec!["verify-fans"],
        vec!["verify-support", "--seed", "7", "--samples", "300"],
        vec!["verify-refine"],
        vec!["check-endo", "--map", &map],
    ];
    let mut runs = 0;
    for input in [&a3, &n5] {
        for args in &commands {
            let first = cli(args, input);
            let mut threaded: Vec<&str> = args.clone();
            threaded.extend(["--threads", "3"]);
            for other in [cli(args, input), cli(&threaded, input)] {
                runs += 1;
                ensure(first == other, || format!("`{}` is not reproducible", args.join(" ")))?;
            }
        }
    }
    for args in [vec!["gen", "pg", "2", "2"], vec!["gen", "uniform", "2", "4"], vec!["gen", "braid", "4"]] {
        runs += 1;
        ensure(cli(&args, b"") == cli(&args, b""), || format!("`{}` is not reproducible", args.join(" ")))?;
    }
    let _ = std::fs::remove_dir_all(&dir);
    Ok(format!("{runs} repeated runs byte-identical, including --threads 3"))
}

type Criterion = (usize, &'static str, Duration, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 10] = [
        (1, "circuits of braid(3) via the CLI", Duration::from_secs(1), c1_circuits),
        (2, "fan census for M_A3", Duration::from_secs(5), c2_a3_census),
        (3, "N5 fails the criterion with a replayable witness", Duration::from_secs(5), c3_n5),
        (4, "Fano plane", Duration::from_secs(10), c4_fano),
        (5, "distinct Bergman spans on the corpus", Duration::from_secs(60), c5_distinct_spans),
        (6, "support equivalence on sampled vectors", Duration::from_secs(30), c6_support),
        (7, "polytope dimension and purity", Duration::from_secs(60), c7_formulas),
        (8, "chain spans, block families and faces", Duration::from_secs(60), c8_chain_pairs),
        (9, "endomorphism checks", Duration::from_secs(30), c9_endomorphisms),
        (10, "determinism of CLI output", Duration::from_secs(120), c10_determinism),
    ];
    let mut unexpected = Vec::new();
    for (id, title, limit, check) in criteria {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > limit => Err(format!("{detail}; took {:.2}s, limit {}s", elapsed.as_secs_f64(), limit.as_secs())),
            other => other,
        };
        let known = KNOWN_FAILURES.iter().find(|(k, _)| *k == id);
        match (&outcome, known) {
            (Ok(detail), None) => println!("criterion {id:>2} PASS  {title}: {detail} [{:.2}s]", elapsed.as_secs_f64()),
            (Ok(detail), Some(_)) => {
                println!("criterion {id:>2} PASS  {title}: {detail} [{:.2}s] (listed as a known failure)", elapsed.as_secs_f64());
                unexpected.push(id);
            }
            (Err(why), None) => {
                println!("criterion {id:>2} FAIL  {title}: {why} [{:.2}s]", elapsed.as_secs_f64());
                unexpected.push(id);
            }
            (Err(why), Some((_, reason))) => {
                println!("criterion {id:>2} FAIL  {title}: {why} [{:.2}s] (known: {reason})", elapsed.as_secs_f64())
            }
        }
    }
    if !unexpected.is_empty() {
        eprintln!("unexpected outcome for criteria {unexpected:?}");
        std::process::exit(1);
    }
}
