//! Acceptance suite: one line per criterion, nonzero exit on any failure.
//! Values are re-derived by the oracles in `common` where possible.

mod common;

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::*;
use steiner_core::catalog::{catalog, run_plan, FillMode, Payload, Plan, PlanBase, Selection};
use steiner_core::constructions::{class_permutation_spectrum, Gdd};
use steiner_core::design::{complete_cover, BlockSystem, Design};
use steiner_core::spectrum::{compare, i3 as lib_i3, sum_closure, ClosureSpec, SetLabel, Witness};
use steiner_core::trades::{Budget, SearchOutcome, SearchParams};
use steiner_core::{apply_permutation, extract_trade, search_trade, verify_trade, Permutation};

type Outcome = Result<String, String>;

macro_rules! data {
    ($f:literal) => {
        include_str!(concat!(env!("CARGO_MANIFEST_DIR"), "/data/", $f))
    };
}

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(t: Instant, limit: Duration) -> Result<(), String> {
    ensure(t.elapsed() < limit, format!("took {:.2?}, limit {limit:?}", t.elapsed()))
}

fn set(xs: impl IntoIterator<Item = usize>) -> BTreeSet<usize> {
    xs.into_iter().collect()
}

fn design(id: &str) -> &'static Design {
    catalog().unwrap().design(id).unwrap()
}

fn gdd(id: &str) -> &'static Gdd {
    catalog().unwrap().gdd(id).unwrap()
}

fn c1() -> Outcome {
    let t = Instant::now();
    let cat = catalog().map_err(|e| e.to_string())?;
    let expect = [
        ("s2-4-13.L4.1", 13, 13),
        ("s2-4-16.L4.2", 16, 20),
        ("s2-4-25.L4.3", 25, 50),
        ("s2-4-25.Ex6.1", 25, 50),
        ("s2-4-28.step1", 28, 63),
        ("s2-4-28.step2", 28, 63),
        ("s2-4-37.step1", 37, 111),
        ("s2-4-37.step2", 37, 111),
    ];
    for (id, v, b) in expect {
        let d = cat.design(id).map_err(|e| e.to_string())?;
        let blocks = blocks_of(d);
        ensure(d.v() == v && blocks.len() == b, format!("{id}: v = {}, {} blocks", d.v(), blocks.len()))?;
        ensure(is_steiner(&points_of(d), &blocks, 4), format!("{id} is not an S(2,4,{v})"))?;
    }
    let designs = cat.entries().iter().filter(|e| matches!(e.payload, Payload::Design(_))).count();
    ensure(designs == 6, format!("{designs} design entries"))?;
    within(t, Duration::from_secs(1))?;
    Ok(format!("8 designs verified in {:.2?}", t.elapsed()))
}

fn c2() -> Outcome {
    let got = table_sizes(&blocks_of(design("s2-4-13.L4.1")), data!("s2-4-13.L4.1.perm"));
    let want = set([0, 1, 2, 3, 4, 5, 13]);
    ensure(got == want, format!("got {got:?}"))?;
    let i = i3(13).into_iter().map(|x| x as usize).collect::<BTreeSet<_>>();
    ensure(got == i, "differs from I3[13]")?;
    Ok(format!("{got:?} = I3[13]"))
}

fn c3() -> Outcome {
    let got = table_sizes(&blocks_of(design("s2-4-16.L4.2")), data!("s2-4-16.L4.2.perm"));
    ensure(got == set([0, 1, 2, 3, 4, 5, 6, 8, 20]), format!("got {got:?}"))?;
    let found = steiner_core::SpectrumSet::from_values(
        SetLabel::J3(16),
        got.iter().map(|&x| x as i64),
        Witness::Formula,
    );
    let diff = compare(&found, &lib_i3(16).map_err(|e| e.to_string())?);
    ensure(diff.missing == [7, 9, 10, 11, 12], format!("missing {:?}", diff.missing))?;
    let oracle: Vec<i64> = i3(16).into_iter().filter(|x| !got.contains(&(*x as usize))).collect();
    ensure(oracle == diff.missing, "oracle disagrees on the missing values")?;
    Ok(format!("{got:?}, missing {:?}", diff.missing))
}

fn c4() -> Outcome {
    let got = table_sizes(&blocks_of(design("s2-4-25.L4.3")), data!("s2-4-25.L4.3.perm"));
    ensure(got == set([23, 29, 50]), format!("got {got:?}"))?;
    Ok(format!("{got:?}"))
}

fn group_type(g: &Gdd) -> String {
    let sizes: BTreeSet<usize> = g.groups().iter().map(Vec::len).collect();
    sizes.iter().map(|s| format!("{s}^{}", g.groups().iter().filter(|x| x.len() == *s).count())).collect::<Vec<_>>().join(" ")
}

fn c5() -> Outcome {
    let cases: [(&str, &str, &[usize], &str); 5] = [
        ("gdd-4-4.L4.5", data!("gdd-4-4.L4.5.perm"), &[0, 1, 2, 4, 16], "4^4"),
        ("gdd-3-5.L4.7.delete-0", data!("gdd-3-5.L4.7.delete-0.perm"), &[0, 1, 15], "3^5"),
        ("gdd-3-5.L4.7.delete-d", data!("gdd-3-5.L4.7.delete-d.perm"), &[3], "3^5"),
        ("gdd-3-4.L4.8.delete-0", data!("gdd-3-4.L4.8.delete-0.perm"), &[1, 9], "3^4"),
        ("gdd-3-4.L4.8.delete-8", data!("gdd-3-4.L4.8.delete-8.perm"), &[0], "3^4"),
    ];
    for (id, perm, want, ty) in cases {
        let g = gdd(id);
        ensure(group_type(g) == ty, format!("{id}: type {}", group_type(g)))?;
        let got = table_sizes(&blocks_of(g), perm);
        ensure(got == set(want.iter().copied()), format!("{id}: got {got:?}"))?;
    }
    Ok("4^4 {0,1,2,4,16}; 3^5 {0,1,15}+{3}; 3^4 {1,9}+{0}".into())
}

fn c6() -> Outcome {
    let d = design("s2-4-25.Ex6.1");
    let blocks = blocks_of(d);
    let p = cycles("(1,2,3)(18,17,16,13,12,11)");
    let (b2, b3) = (image(&blocks, &p), image(&blocks, &invert(&p)));
    let sts: BTreeSet<String> = ["1", "2", "3", "5", "6", "8", "9"].iter().map(|s| s.to_string()).collect();
    let in_a = |b: &NBlock| b.intersection(&sts).count() >= 2;
    let part_a: Vec<NBlock> = blocks.iter().filter(|b| in_a(b)).cloned().collect();
    ensure(part_a.len() == 7, format!("part A has {} blocks", part_a.len()))?;
    let total = common(&blocks, &b2, &b3);
    let on_a = blocks.iter().filter(|b| in_a(b) && b2.contains(b) && b3.contains(b)).count();
    ensure(total == 7 && on_a == 1, format!("{total} common, {on_a} on A"))?;
    ensure(same_common(&blocks, &b2, &b3), "pairwise intersections differ")?;
    Ok(format!("7 = {on_a} + {}", total - on_a))
}

fn c7() -> Outcome {
    let t = Instant::now();
    let files = [
        ("s2-4-37.step1", data!("s2-4-37.step1.dev"), 111, true),
        ("s2-4-37.step2", data!("s2-4-37.step2.dev"), 111, true),
        ("s2-4-37.step3", data!("s2-4-37.step3.dev"), 102, false),
    ];
    for (id, text, count, full) in files {
        let (points, oracle) = develop_text(text);
        let d = design(id);
        let mut lib = blocks_of(d);
        lib.sort();
        ensure(lib == oracle, format!("{id}: library and oracle developments differ"))?;
        ensure(oracle.len() == count, format!("{id}: {} blocks", oracle.len()))?;
        ensure(!full || is_steiner(&points, &oracle, 4), format!("{id} is not an S(2,4,37)"))?;
    }
    let partial = design("s2-4-37.step3");
    let comp = complete_cover(partial, 37, 1).map_err(|e| e.to_string())?;
    let first = comp.completions.first().ok_or("no completion")?;
    ensure(first.len() == 9, format!("completion of {} blocks", first.len()))?;
    let full = comp.completed(0).map_err(|e| e.to_string())?;
    ensure(is_steiner(&points_of(&full), &blocks_of(&full), 4), "completed design is not Steiner")?;
    within(t, Duration::from_secs(30))?;
    Ok(format!("111/111/102 blocks, nine-block completion found in {:.2?}", t.elapsed()))
}

fn sel(slot: usize, table: &str, row: usize) -> Selection {
    Selection { slots: Some(vec![slot]), source: table.to_string(), row: Some(row), attach: None }
}

fn c8() -> Outcome {
    let t = Instant::now();
    let g16 = blocks_of(gdd("gdd-4-4.L4.5"));
    let s13 = blocks_of(design("s2-4-13.L4.1"));
    let row_common = |blocks: &[NBlock], text: &str| -> Vec<usize> {
        perm_rows(text).iter().map(|(p2, p3, _)| common(blocks, &image(blocks, p2), &image(blocks, p3))).collect()
    };
    let alpha = row_common(&g16, data!("gdd-4-4.L4.5.perm"));
    let beta = row_common(&s13, data!("s2-4-13.L4.1.perm"));

    let selections: [(Vec<usize>, Vec<usize>); 6] = [
        (vec![0; 9], vec![6; 4]),
        (vec![4; 9], vec![0; 4]),
        (vec![0, 1, 2, 3, 4, 0, 1, 2, 3], vec![1, 2, 3, 5]),
        (vec![3; 9], vec![4; 4]),
        (vec![4, 4, 4, 1, 1, 2, 3, 0, 2], vec![6, 0, 5, 2]),
        (vec![2, 3, 4, 4, 4, 4, 4, 4, 4], vec![1, 1, 1, 0]),
    ];
    let mut seen = BTreeSet::new();
    for (a, bsel) in &selections {
        let plan = Plan {
            base: PlanBase::Gdd("gdd-3-4.L4.8.delete-0".into()),
            weight: 4,
            ingredients: a.iter().enumerate().map(|(i, &r)| sel(i, "gdd-4-4.L4.5.perms", r)).collect(),
            fill: Some(FillMode::PlusOne),
            fillers: bsel.iter().enumerate().map(|(j, &r)| sel(j, "s2-4-13.L4.1.perms", r)).collect(),
        };
        let out = run_plan(&plan).map_err(|e| e.to_string())?;
        let filled = out.filled.ok_or("no fill step")?;
        let ds: Vec<Vec<NBlock>> = filled.designs.iter().map(blocks_of).collect();
        let pts = points_of(&filled.designs[0]);
        ensure(pts.len() == 49, format!("{} points", pts.len()))?;
        for d in &ds {
            ensure(is_steiner(&pts, d, 4), "an output is not an S(2,4,49)")?;
        }
        let sum: usize = a.iter().map(|&i| alpha[i]).sum::<usize>() + bsel.iter().map(|&j| beta[j]).sum::<usize>();
        let measured = common(&ds[0], &ds[1], &ds[2]);
        ensure(measured == sum, format!("measured {measured}, sum of slot counts {sum}"))?;
        seen.insert(measured);
    }
    ensure(seen.len() >= 5, format!("only {} distinct counts", seen.len()))?;
    within(t, Duration::from_secs(10))?;
    Ok(format!("counts {seen:?} match the slot sums in {:.2?}", t.elapsed()))
}

fn raw_rows(text: &str) -> Vec<(String, String)> {
    text.lines()
        .filter_map(|l| l.trim().strip_prefix("row "))
        .map(|r| {
            let c: Vec<&str> = r.split('|').map(str::trim).collect();
            (c[0].to_string(), c[1].to_string())
        })
        .collect()
}

fn c9() -> Outcome {
    let t = Instant::now();
    let lib = |terms: &[(&[i64], usize)], label: SetLabel| -> Result<BTreeSet<i64>, String> {
        let spec = terms.iter().fold(ClosureSpec::new(label), |s, (v, n)| s.term_values(*n, v));
        Ok(sum_closure(&spec).map_err(|e| e.to_string())?.values().collect())
    };
    let oracle = |terms: &[(&[i64], usize)]| {
        let sets: Vec<BTreeSet<i64>> = terms.iter().map(|(v, _)| v.iter().copied().collect()).collect();
        let slots: Vec<(&BTreeSet<i64>, usize)> = sets.iter().zip(terms).map(|(s, (_, n))| (s, *n)).collect();
        sums(&slots, 0)
    };
    let as_i64 = |s: BTreeSet<usize>| s.into_iter().map(|x| x as i64).collect::<Vec<_>>();
    let j13 = as_i64(table_sizes(&blocks_of(design("s2-4-13.L4.1")), data!("s2-4-13.L4.1.perm")));
    let a16 = as_i64(table_sizes(&blocks_of(gdd("gdd-4-4.L4.5")), data!("gdd-4-4.L4.5.perm")));
    let mut a15 = table_sizes(&blocks_of(gdd("gdd-3-5.L4.7.delete-0")), data!("gdd-3-5.L4.7.delete-0.perm"));
    a15.extend(table_sizes(&blocks_of(gdd("gdd-3-5.L4.7.delete-d")), data!("gdd-3-5.L4.7.delete-d.perm")));
    let a15 = as_i64(a15);

    let a: [(&[i64], usize); 2] = [(&a16, 9), (&j13, 4)];
    let got = lib(&a, SetLabel::J3(49))?;
    ensure(got == oracle(&a), "49: library and oracle closures differ")?;
    ensure(i3(49).is_subset(&got), "I3[49] not covered")?;

    let b: [(&[i64], usize); 2] = [(&a15, 24), (&j13, 6)];
    let got = lib(&b, SetLabel::J3(73))?;
    ensure(got == oracle(&b), "73: library and oracle closures differ")?;
    ensure(i3(73).is_subset(&got), "I3[73] not covered")?;

    let bpart: BTreeSet<i64> = moved_counts(9).iter().map(|j| ((9 - j) * 9) as i64).collect();
    let kts9: BTreeSet<i64> = moved_counts(4).iter().map(|j| ((4 - j) * 3) as i64).collect();
    let lib_b: BTreeSet<i64> = class_permutation_spectrum(9, 9).into_iter().map(|x| x as i64).collect();
    let lib_k: BTreeSet<i64> = class_permutation_spectrum(4, 3).into_iter().map(|x| x as i64).collect();
    ensure(bpart == lib_b && kts9 == lib_k, "class spectra differ from the oracle")?;
    let j13s: BTreeSet<i64> = j13.iter().copied().collect();
    let all = sums(&[(&j13s, 1), (&bpart, 1), (&kts9, 3)], 0);
    let missing: Vec<i64> = i3(40).into_iter().filter(|x| !all.contains(x)).collect();
    let b40 = 130;
    ensure(missing == [b40 - 16, b40 - 15, b40 - 14], format!("exceptions {missing:?}"))?;
    let vb: Vec<i64> = lib_b.iter().copied().collect();
    let vk: Vec<i64> = lib_k.iter().copied().collect();
    let spec = ClosureSpec::new(SetLabel::J3(40)).term_values(1, &j13).term_values(1, &vb).term_values(3, &vk);
    let lib40 = sum_closure(&spec).map_err(|e| e.to_string())?;
    let lib_missing = compare(&lib40, &lib_i3(40).map_err(|e| e.to_string())?).missing;
    ensure(lib_missing == missing, format!("library exceptions {lib_missing:?}"))?;
    within(t, Duration::from_secs(5))?;
    Ok(format!("I3[49], I3[73] covered; exceptions at 40 = {missing:?} in {:.2?}", t.elapsed()))
}

/// Independent trade check: disjoint collections, equal pair multisets,
/// each pair at most once per collection.
fn oracle_trade(cols: &[Vec<NBlock>]) -> bool {
    let pairs = |c: &[NBlock]| {
        let mut v: Vec<(String, String)> = Vec::new();
        for b in c {
            let p: Vec<&String> = b.iter().collect();
            for i in 0..p.len() {
                for j in i + 1..p.len() {
                    v.push((p[i].clone(), p[j].clone()));
                }
            }
        }
        v.sort();
        v
    };
    let first = pairs(&cols[0]);
    let steiner = first.windows(2).all(|w| w[0] != w[1]);
    let equal = cols.iter().all(|c| pairs(c) == first);
    let disjoint = (0..cols.len()).all(|i| (i + 1..cols.len()).all(|j| cols[i].iter().all(|b| !cols[j].contains(b))));
    steiner && equal && disjoint && cols.iter().all(|c| c.len() == cols[0].len())
}

fn c10() -> Outcome {
    let t = Instant::now();
    let mut nodes = Vec::new();
    for volume in 1..=4 {
        let params = SearchParams { mu: 3, k: 4, t: 2, volume, steiner: true };
        let budget = if volume == 4 { Budget::extended() } else { Budget::default() };
        match search_trade(params, budget).map_err(|e| e.to_string())? {
            SearchOutcome::Nonexistence(c) => nodes.push(c.nodes),
            other => return Err(format!("volume {volume}: {other:?}")),
        }
        if volume == 3 {
            within(t, Duration::from_secs(120))?;
        }
    }
    let params = SearchParams { mu: 3, k: 4, t: 2, volume: 8, steiner: true };
    let SearchOutcome::Witness { trade, .. } = search_trade(params, Budget::default()).map_err(|e| e.to_string())? else {
        return Err("no volume-8 witness".into());
    };
    ensure(verify_trade(&trade, true).valid, "verify_trade rejects the witness")?;
    let names = |c: &[steiner_core::Block]| -> Vec<NBlock> {
        c.iter().map(|b| b.points().iter().map(|&p| trade.labels().name(p).to_string()).collect()).collect()
    };
    let cols: Vec<Vec<NBlock>> = trade.collections().iter().map(|c| names(c)).collect();
    ensure(oracle_trade(&cols) && cols[0].len() == 8, "oracle rejects the witness")?;

    let s13 = design("s2-4-13.L4.1");
    let row = &raw_rows(data!("s2-4-13.L4.1.perm"))[5];
    let p2 = Permutation::parse(&row.0).map_err(|e| e.to_string())?;
    let p3 = if row.1 == "inv" { p2.inverse() } else { Permutation::parse(&row.1).map_err(|e| e.to_string())? };
    let d2 = apply_permutation(s13, &p2).map_err(|e| e.to_string())?;
    let d3 = apply_permutation(s13, &p3).map_err(|e| e.to_string())?;
    let x = extract_trade(s13, &d2, &d3).map_err(|e| e.to_string())?;
    let rep = verify_trade(&x, true);
    let xcols: Vec<Vec<NBlock>> = x
        .collections()
        .iter()
        .map(|c| c.iter().map(|b| b.points().iter().map(|&p| x.labels().name(p).to_string()).collect()).collect())
        .collect();
    ensure(rep.valid && oracle_trade(&xcols) && xcols[0].len() == 8, "extracted trade is not a volume-8 Steiner trade")?;
    // replication per collection, counted by brute force
    let mut min_rep = usize::MAX;
    for c in &xcols {
        let found: BTreeSet<&String> = c.iter().flatten().collect();
        for p in found {
            min_rep = min_rep.min(c.iter().filter(|b| b.contains(p)).count());
        }
    }
    ensure(min_rep >= 2, format!("a foundation point has replication {min_rep}"))?;
    Ok(format!("volumes 1-4 impossible ({nodes:?} nodes), volume-8 witness and extracted trade verified in {:.2?}", t.elapsed()))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("catalog verification", c1),
        ("S(2,4,13) table replay", c2),
        ("S(2,4,16) table replay", c3),
        ("S(2,4,25) table replay", c4),
        ("GDD tables", c5),
        ("part-wise permutation on S(2,4,25)", c6),
        ("developments over Z9, Z11, Z12", c7),
        ("end-to-end S(2,4,49)", c8),
        ("closure checks", c9),
        ("trade search", c10),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(msg) => println!("criterion {:>2} PASS {name}: {msg}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {:>2} FAIL {name}: {msg}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
