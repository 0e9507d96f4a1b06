//! `steiner`: verify, transform and replay S(2,4,v) designs from files or the
//! embedded catalog.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use steiner_core::actions::{parse_dev, parse_third, same_common_violation};
use steiner_core::catalog::{
    achieved_set, catalog, catalog_get, parse_plan, run_plan, run_reproduction, ClaimStatus, ReproOptions, REPRO_TOKENS,
};
use steiner_core::constructions::{emit_gdd, parse_resolved, verify_gdd};
use steiner_core::design::{complete_cover, delete_point, emit_design, parse_design, BlockSystem, DEFAULT_COMPLETION_LIMIT};
use steiner_core::spectrum::{compare, emit_ledger, format_values, parse_closure_spec};
use steiner_core::trades::{emit_trade, Budget, SearchOutcome, SearchParams};
use steiner_core::{
    apply_permutation, common_blocks, develop, extract_trade, search_trade, spectrum_scan, sum_closure, verify_steiner,
    verify_trade, Design, Permutation,
};

#[derive(Parser)]
#[command(name = "steiner", version, about = "Steiner systems S(2,4,v), GDDs and 3-way trades")]
struct Cli {
    /// Line-oriented key=value output.
    #[arg(long, global = true)]
    machine: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check that a design is an S(2,t,v).
    Verify {
        /// A `.des`, `.dev` or `.res` file, or a catalog id.
        design: String,
        #[arg(long, default_value_t = 2)]
        t: usize,
    },
    /// Mutual intersection of three designs.
    Intersect { d1: String, d2: String, d3: String },
    /// Mutual intersection of (D, π₂D, π₃D).
    Permute {
        design: String,
        #[arg(long)]
        p2: String,
        /// Cycles, or `inv` for the inverse of `--p2`.
        #[arg(long, default_value = "id")]
        p3: String,
        /// Also print the two images.
        #[arg(long)]
        emit: bool,
    },
    /// Develop a base-block spec and print the design.
    Develop { spec: PathBuf },
    /// Replay every row of a permutation table on a catalog design or GDD.
    Scan {
        target: String,
        #[arg(long)]
        table: String,
    },
    /// Delete a point and print the resulting GDD.
    GddDelete { design: String, point: String },
    /// The trade left by three designs after removing their common blocks.
    TradeExtract { d1: String, d2: String, d3: String },
    /// Exhaustive search for a μ-way (v,k,t) trade of one volume.
    TradeSearch {
        #[arg(long, default_value_t = 3)]
        mu: usize,
        #[arg(long, default_value_t = 4)]
        k: usize,
        #[arg(long, default_value_t = 2)]
        t: usize,
        #[arg(long)]
        volume: usize,
        /// Every pair at most once per collection.
        #[arg(long)]
        steiner: bool,
        /// Raise the node and time budget.
        #[arg(long)]
        extended: bool,
    },
    /// Run a construction plan.
    Construct {
        #[arg(long)]
        plan: PathBuf,
        /// Write the three designs to `<prefix>.1.des` etc.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sum closure of a spec file.
    Closure {
        #[arg(long)]
        spec: PathBuf,
        /// Print the witness ledger.
        #[arg(long)]
        ledger: bool,
    },
    /// Complete a partial design to an S(2,4,v) by exact cover.
    Complete {
        design: String,
        #[arg(long)]
        v: usize,
        #[arg(long, default_value_t = DEFAULT_COMPLETION_LIMIT)]
        limit: usize,
    },
    /// Replay a lemma; `all` runs every token.
    Repro {
        token: String,
        #[arg(long)]
        extended: bool,
    },
    /// List or emit catalog entries.
    Catalog {
        #[command(subcommand)]
        action: CatalogCmd,
    },
}

#[derive(Subcommand)]
enum CatalogCmd {
    List,
    Emit { id: String },
}

/// Command output: human text, key=value pairs and a verdict.
struct Out {
    text: String,
    kv: Vec<(String, String)>,
    ok: bool,
}

impl Out {
    fn new() -> Self {
        Out { text: String::new(), kv: Vec::new(), ok: true }
    }

    fn kv(&mut self, k: impl Into<String>, v: impl ToString) {
        self.kv.push((k.into(), v.to_string()));
    }

    fn line(&mut self, s: impl AsRef<str>) {
        self.text.push_str(s.as_ref());
        self.text.push('\n');
    }

    fn both(&mut self, k: &str, v: impl ToString) {
        let v = v.to_string();
        self.line(format!("{k}: {v}"));
        self.kv(k, v);
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(out) => {
            if cli.machine {
                for (k, v) in &out.kv {
                    println!("{k}={}", v.replace('\n', " "));
                }
                println!("result={}", if out.ok { "pass" } else { "fail" });
            } else {
                print!("{}", out.text);
            }
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            if cli.machine {
                println!("error={}", format!("{e:#}").replace('\n', " "));
                println!("result=error");
            } else {
                eprintln!("error: {e:#}");
            }
            ExitCode::from(2)
        }
    }
}

/// A design from a file (by extension) or from the catalog.
fn load_design(arg: &str) -> Result<Design> {
    let path = Path::new(arg);
    if !path.exists() {
        return catalog_get(arg)?
            .design()
            .cloned()
            .with_context(|| format!("catalog entry `{arg}` is not a design"));
    }
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {arg}"))?;
    let d = match path.extension().and_then(|e| e.to_str()) {
        Some("dev") => develop(&parse_dev(&text)?)?,
        Some("res") => parse_resolved(&text)?.0,
        _ => parse_design(&text)?,
    };
    Ok(d)
}

fn run(cmd: Cmd) -> Result<Out> {
    let mut o = Out::new();
    match cmd {
        Cmd::Verify { design, t } => {
            let d = load_design(&design)?;
            let rep = verify_steiner(&d, t)?;
            o.both("v", d.v());
            o.both("k", d.k());
            o.both("blocks", d.block_count());
            o.both("expected_blocks", d.expected_steiner_blocks().map_or("-".into(), |b| b.to_string()));
            o.both("steiner", rep.is_steiner);
            o.kv("violations", rep.violations.len());
            for &((a, b), c) in rep.violations.iter().take(10) {
                o.line(format!("  pair {{{},{}}} covered {c} times", d.labels().name(a), d.labels().name(b)));
            }
            o.ok = rep.is_steiner;
        }
        Cmd::Intersect { d1, d2, d3 } => {
            let ds = [load_design(&d1)?, load_design(&d2)?, load_design(&d3)?];
            intersection(&mut o, &ds)?;
        }
        Cmd::Permute { design, p2, p3, emit } => {
            let d = load_design(&design)?;
            let p2 = Permutation::parse(&p2)?;
            let p3 = parse_third(&p3, &p2)?;
            let ds = [d.clone(), apply_permutation(&d, &p2)?, apply_permutation(&d, &p3)?];
            o.both("p2", &p2);
            o.both("p3", &p3);
            intersection(&mut o, &ds)?;
            if emit {
                o.line(emit_design(&ds[1]));
                o.line(emit_design(&ds[2]));
            }
        }
        Cmd::Develop { spec } => {
            let text = std::fs::read_to_string(&spec).with_context(|| format!("reading {}", spec.display()))?;
            let d = develop(&parse_dev(&text)?)?;
            o.kv("v", d.v());
            o.kv("blocks", d.block_count());
            o.kv("steiner", verify_steiner(&d, 2)?.is_steiner);
            o.text = emit_design(&d);
        }
        Cmd::Scan { target, table } => {
            let cat = catalog()?;
            let t = cat.table(&table)?;
            if t.target != target {
                bail!("table `{table}` acts on `{}`, not `{target}`", t.target);
            }
            let entry = cat.get(&target)?;
            let rep = match (entry.gdd(), entry.design()) {
                (Some(g), _) => spectrum_scan(g, &t.rows, &table, t.label())?,
                (_, Some(d)) => spectrum_scan(d, &t.rows, &table, t.label())?,
                _ => bail!("`{target}` is neither a design nor a GDD"),
            };
            for r in &rep.rows {
                let row = &t.rows[r.row];
                let claim = r.claimed.map_or("-".into(), |c| c.to_string());
                let flags = format!(
                    "{}{}{}",
                    if r.matches_claim() { "" } else { " claim-mismatch" },
                    if r.same_common { "" } else { " not-same-common" },
                    if r.structure_preserved { "" } else { " moves-groups" }
                );
                o.line(format!("row {}: {} | {} -> {} (printed {claim}){flags}", r.row, row.p2, row.p3, r.common));
                o.kv(format!("row.{}.common", r.row), r.common);
                o.kv(format!("row.{}.printed", r.row), &claim);
                o.kv(format!("row.{}.same_common", r.row), r.same_common);
                o.ok &= r.matches_claim() && r.structure_preserved;
            }
            o.both(&t.label().to_string(), format_values(rep.spectrum.values()));
        }
        Cmd::GddDelete { design, point } => {
            let d = load_design(&design)?;
            let g = delete_point(&d, d.point(&point)?)?;
            let rep = verify_gdd(&g);
            o.kv("type", g.group_type());
            o.kv("blocks", g.blocks().len());
            o.kv("valid", rep.valid);
            o.ok = rep.valid;
            o.text = emit_gdd(&g);
        }
        Cmd::TradeExtract { d1, d2, d3 } => {
            let t = extract_trade(&load_design(&d1)?, &load_design(&d2)?, &load_design(&d3)?)?;
            let rep = verify_trade(&t, true);
            o.kv("volume", rep.volume);
            o.kv("foundation", rep.foundation.len());
            o.kv("valid", rep.valid);
            o.kv("steiner", rep.valid);
            o.kv("min_replication", rep.min_replication().unwrap_or(0));
            o.ok = rep.valid;
            let _ = writeln!(o.text, "# volume {} foundation {} valid {}", rep.volume, rep.foundation.len(), rep.valid);
            o.text.push_str(&emit_trade(&t));
        }
        Cmd::TradeSearch { mu, k, t, volume, steiner, extended } => {
            let params = SearchParams { mu, k, t, volume, steiner };
            let budget = if extended { Budget::extended() } else { Budget::default() };
            match search_trade(params, budget)? {
                SearchOutcome::Witness { trade, nodes } => {
                    o.both("outcome", "witness");
                    o.kv("nodes", nodes);
                    o.text.push_str(&emit_trade(&trade));
                }
                SearchOutcome::Nonexistence(cert) => {
                    o.kv("outcome", "nonexistence");
                    o.kv("nodes", cert.nodes);
                    o.line(cert.to_string());
                }
                SearchOutcome::Inconclusive { nodes, reason, smaller } => {
                    o.both("outcome", "inconclusive");
                    o.both("nodes", nodes);
                    o.both("reason", reason);
                    if let Some(s) = smaller {
                        o.text.push_str(&emit_trade(&s));
                    }
                    o.ok = false;
                }
            }
        }
        Cmd::Construct { plan, out } => {
            let text = std::fs::read_to_string(&plan).with_context(|| format!("reading {}", plan.display()))?;
            let res = run_plan(&parse_plan(&text)?)?;
            o.both("base_type", res.base.group_type());
            o.both("alphas", format!("{:?}", res.alphas));
            o.both("betas", format!("{:?}", res.betas));
            o.both("predicted_common", res.predicted_common());
            o.both("measured_common", res.measured_common());
            o.ok = res.predicted_common() == res.measured_common();
            if let Some(f) = &res.filled {
                o.both("v", f.designs[0].v());
                let steiner = f.designs.iter().map(|d| verify_steiner(d, 2).map(|r| r.is_steiner)).collect::<Result<Vec<_>, _>>()?;
                o.both("steiner", steiner.iter().all(|&s| s));
                o.ok &= steiner.iter().all(|&s| s);
                if let Some(prefix) = out {
                    for (i, d) in f.designs.iter().enumerate() {
                        let p = prefix.with_extension(format!("{}.des", i + 1));
                        std::fs::write(&p, emit_design(d)).with_context(|| format!("writing {}", p.display()))?;
                    }
                }
            } else {
                o.both("type", res.weighted.designs[0].group_type());
            }
        }
        Cmd::Closure { spec, ledger } => {
            let text = std::fs::read_to_string(&spec).with_context(|| format!("reading {}", spec.display()))?;
            let resolve = |name: &str| achieved_set(name).ok().flatten();
            let file = parse_closure_spec(&text, &resolve)?;
            let got = sum_closure(&file.spec)?;
            o.both(&got.label.to_string(), format_values(got.values()));
            if let Some(target) = &file.target {
                let diff = compare(&got, target);
                o.both("missing", format_values(diff.missing.iter().copied()));
                o.both("extra", format_values(diff.extra.iter().copied()));
                o.ok = diff.missing.is_empty();
            }
            if ledger {
                let mut reg = steiner_core::spectrum::Registry::new();
                reg.record_set(&got);
                o.text.push_str(&emit_ledger(&reg));
            }
        }
        Cmd::Complete { design, v, limit } => {
            let d = load_design(&design)?;
            let c = complete_cover(&d, v, limit)?;
            o.both("completions", c.completions.len());
            o.both("exhaustive", c.exhaustive);
            o.both("nodes", c.nodes);
            o.ok = !c.completions.is_empty();
            if let Some(first) = c.completions.first() {
                let full = c.completed(0)?;
                o.both("steiner", verify_steiner(&full, 2)?.is_steiner);
                o.line(format!("# first completion, {} blocks", first.len()));
                for b in first {
                    o.line(full.format_block(b));
                }
            }
        }
        Cmd::Repro { token, extended } => {
            let opts = ReproOptions { extended };
            let tokens: Vec<&str> = if token == "all" { REPRO_TOKENS.to_vec() } else { vec![token.as_str()] };
            for tok in tokens {
                let rep = run_reproduction(tok, &opts)?;
                o.line(rep.to_string());
                for (i, c) in rep.claims.iter().enumerate() {
                    let status = match c.status {
                        ClaimStatus::Pass => "pass",
                        ClaimStatus::Fail => "fail",
                        ClaimStatus::NotReplayed => "not-replayed",
                    };
                    o.kv(format!("{tok}.claim.{i}.status"), status);
                    o.kv(format!("{tok}.claim.{i}.text"), &c.claim);
                    if !c.detail.is_empty() {
                        o.kv(format!("{tok}.claim.{i}.detail"), &c.detail);
                    }
                }
                for s in rep.registry.sets() {
                    o.kv(format!("{tok}.set.{}", s.label), format_values(s.values()));
                }
                o.kv(format!("{tok}.passed"), rep.passed());
                o.ok &= rep.passed();
            }
        }
        Cmd::Catalog { action: CatalogCmd::List } => {
            for e in catalog()?.entries() {
                o.line(format!("{:<32} {:<18} {}", e.id, e.kind().as_str(), e.source));
                o.kv(e.id, e.kind().as_str());
            }
        }
        Cmd::Catalog { action: CatalogCmd::Emit { id } } => {
            let e = catalog_get(&id)?;
            o.kv("id", e.id);
            o.kv("kind", e.kind().as_str());
            o.text = e.emit();
        }
    }
    Ok(o)
}

fn intersection(o: &mut Out, ds: &[Design; 3]) -> Result<()> {
    let common = common_blocks(&[&ds[0], &ds[1], &ds[2]])?;
    o.both("common", common.len());
    let split = same_common_violation(&ds[0], &ds[1], &ds[2]);
    o.both("same_common", split.is_none());
    if let Some(b) = split {
        o.both("two_way_block", ds[0].format_block(&b));
    }
    for b in &common {
        o.line(format!("  {}", ds[0].format_block(b)));
    }
    Ok(())
}
