use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::json;

use rac_core::cell24::{adjacency_transport, HurwitzGroup, Psi, TwentyFourCell};
use rac_core::search::{self, RunOptions, SearchSpec};
use rac_core::{classify, count_orientable_classes, Colouring, ColouringFile, F2Matrix, FlatClass, Polytope, PolytopeSpec};

mod golden;
mod report;

use golden::Golden;
use report::{list, Report};

#[derive(Parser)]
#[command(name = "rac-colour", version, about = "Colourings of right-angled polytopes and their manifold covers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate orientable cube colourings and compare the census with the golden counts.
    VerifyCubeCensus {
        /// Only check this rank.
        #[arg(long)]
        rank: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Check the Hantzsche-Wendt colouring of the 24-cell.
    #[command(name = "verify-24cell")]
    Verify24Cell {
        /// Replacement vertex table: JSON array of 24 matrices, each 4 row strings.
        #[arg(long, hide = true)]
        table: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Classify a colouring given as JSON.
    Classify {
        /// Colouring file, or '-' for standard input.
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Betti numbers of the cover defined by a colouring.
    Betti {
        file: PathBuf,
        /// Include the contribution of every row-space vector.
        #[arg(long)]
        per_omega: bool,
        #[arg(long)]
        json: bool,
    },
    /// Enumerate colourings up to DJ-equivalence.
    UniquenessSearch(SearchArgs),
    /// Count orientable colourings up to DJ-equivalence without listing them.
    CountClasses {
        /// Built-in name (cube3, 24cell) or a JSON polytope file.
        #[arg(long, default_value = "24cell")]
        polytope: String,
        /// Defaults to 4 for the 24-cell and to the small-cover rank otherwise.
        #[arg(long)]
        rank: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Print a polytope description as JSON.
    DumpPolytope {
        /// Built-in name (cube3, 24cell) or a JSON file.
        #[arg(default_value = "24cell")]
        polytope: String,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct Common {
    /// Golden values file (defaults to the bundled one).
    #[arg(long)]
    golden: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct SearchArgs {
    /// Built-in name (cube3, 24cell) or a JSON polytope file.
    #[arg(long, default_value = "24cell")]
    polytope: String,
    /// Smallest rank; defaults to 4 for the 24-cell and to the small-cover rank otherwise.
    #[arg(long)]
    rank_min: Option<usize>,
    /// Largest rank; defaults to the smallest.
    #[arg(long)]
    rank_max: Option<usize>,
    /// Only orientable colourings.
    #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
    orientable: bool,
    /// Flat class required at every ideal vertex (F1, F2, F6 or none).
    #[arg(long, default_value = "F6")]
    cusp_class: String,
    /// Disable orbit pruning (oracle mode).
    #[arg(long)]
    no_prune: bool,
    /// Worker threads; 0 picks the number of cores.
    #[arg(long, env = "RAC_COLOUR_JOBS", default_value_t = 0)]
    jobs: usize,
    /// Write the census as JSON to this file.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Report the class count without asserting it.
    #[arg(long)]
    no_assert: bool,
    #[command(flatten)]
    common: Common,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (json, result) = match cli.command {
        Command::VerifyCubeCensus { rank, common } => (common.json, verify_cube_census(rank, &common)),
        Command::Verify24Cell { table, common } => (common.json, verify_24cell(table.as_deref(), &common)),
        Command::Classify { file, json } => (json, cmd_classify(&file, json)),
        Command::Betti { file, per_omega, json } => (json, cmd_betti(&file, per_omega, json)),
        Command::UniquenessSearch(args) => (args.common.json, uniqueness_search(&args)),
        Command::CountClasses { polytope, rank, common } => (common.json, count_classes(&polytope, rank, &common)),
        Command::DumpPolytope { polytope, json } => (json, dump_polytope(&polytope, json)),
    };
    match result {
        Ok(report) => {
            report.print(json);
            if report.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn read_input(path: &Path) -> Result<String> {
    if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).context("reading standard input")?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
    }
}

fn load_colouring(path: &Path) -> Result<(Colouring, String)> {
    let text = read_input(path)?;
    let file: ColouringFile =
        serde_json::from_str(&text).map_err(|e| anyhow!("{}: {e}", path.display()))?;
    let c = file.into_colouring().map_err(|e| anyhow!("{}: {e}", path.display()))?;
    Ok((c, text))
}

fn load_polytope(arg: &str) -> Result<(Arc<Polytope>, String)> {
    if let Ok(p) = Polytope::builtin(arg) {
        return Ok((p, arg.to_string()));
    }
    let path = Path::new(arg);
    if !path.exists() {
        bail!("{arg:?} is neither a built-in polytope (cube3, 24cell) nor a file");
    }
    let text = read_input(path)?;
    let spec: PolytopeSpec = serde_json::from_str(&text).map_err(|e| anyhow!("{arg}: {e}"))?;
    let p = Polytope::from_spec(&spec).map_err(|e| anyhow!("{arg}: {e}"))?;
    Ok((Arc::new(p), text))
}

fn verify_cube_census(rank: Option<usize>, common: &Common) -> Result<Report> {
    let (golden, text) = Golden::load(common.golden.as_deref())?;
    let ranks: Vec<usize> = match rank {
        Some(r) if golden.cube_census.contains_key(&r) => vec![r],
        Some(r) => bail!("no golden census for rank {r}"),
        None => golden.cube_census.keys().copied().collect(),
    };
    let mut report = Report::new("verify-cube-census", &[format!("{rank:?}").as_bytes(), text.as_bytes()]);
    let census = search::enumerate_cube(ranks[0], *ranks.last().expect("nonempty"), true);
    for &r in &ranks {
        let expected = &golden.cube_census[&r];
        let obtained = census.counts.get(&r).cloned().unwrap_or_default();
        report.expect(&format!("rank {r} classes"), fmt_counts(expected), fmt_counts(&obtained), expected == &obtained);
    }
    if rank.is_none() {
        let expected: usize = golden.cube_census.values().flat_map(|m| m.values()).sum();
        report.expect_eq("total classes", expected, census.total());
    }
    report.results = serde_json::to_value(&census)?;
    Ok(report)
}

fn fmt_counts(m: &std::collections::BTreeMap<String, usize>) -> String {
    let parts: Vec<String> = m.iter().map(|(k, v)| format!("{k}: {v}")).collect();
    format!("{{{}}}", parts.join(", "))
}

fn load_table(path: &Path) -> Result<Vec<F2Matrix>> {
    let text = read_input(path)?;
    let raw: Vec<Vec<String>> = serde_json::from_str(&text).map_err(|e| anyhow!("{}: {e}", path.display()))?;
    raw.iter()
        .enumerate()
        .map(|(i, rows)| F2Matrix::from_strings(rows).map_err(|e| anyhow!("{}: entry {i}: {e}", path.display())))
        .collect()
}

fn verify_24cell(table: Option<&Path>, common: &Common) -> Result<Report> {
    let (golden, text) = Golden::load(common.golden.as_deref())?;
    let g = &golden.cell24;
    let custom = table.map(load_table).transpose()?;
    let table_text = custom.as_ref().map(|t| format!("{t:?}")).unwrap_or_default();
    let mut report = Report::new("verify-24cell", &[text.as_bytes(), table_text.as_bytes()]);

    let group = HurwitzGroup::new();
    let presentation = group.presentation_holds() && group.generated_by_s_t();
    report.expect(
        "Hurwitz presentation",
        "s^3 = t^3 = (st)^2 = -1, <s,t> of order 24",
        if presentation { "holds" } else { "fails" },
        presentation,
    );

    let built;
    let cell: &TwentyFourCell = match &custom {
        None => TwentyFourCell::shared(),
        Some(t) => match TwentyFourCell::from_table(t.clone()) {
            Ok(c) => {
                built = c;
                &built
            }
            Err(e) => {
                let obtained = match Psi::standard(&group) {
                    Ok(psi) => transport_summary(&adjacency_transport(&group, &psi, t)),
                    Err(err) => err.to_string(),
                };
                report.expect("psi and adjacency transport", "276/276 pairs agree", obtained, false);
                report.expect("24-cell model", "consistent vertex table", e.to_string(), false);
                return Ok(report);
            }
        },
    };
    let (psi_ok, transport) = match Psi::standard(&group) {
        Ok(psi) => {
            let t = adjacency_transport(&group, &psi, cell.matrices());
            (true, Some(t))
        }
        Err(_) => (false, None),
    };
    let passed = psi_ok && transport.as_ref().is_some_and(|t| t.passed());
    let obtained = match &transport {
        Some(t) => format!("injective homomorphism, {}", transport_summary(t)),
        None => "psi is not an injective homomorphism".into(),
    };
    report.expect("psi and adjacency transport", "injective homomorphism, 276/276 pairs agree", obtained, passed);

    let c = cell.hantzsche_wendt_colouring();
    let violation = c.properness_violation();
    report.expect(
        "properness",
        "proper",
        violation.as_ref().map_or("proper".to_string(), |s| format!("simplex {s:?} has dependent colours")),
        violation.is_none(),
    );
    report.expect_eq("orientability", true, c.is_orientable());
    report.expect_eq("rank", g.rank, c.rank());

    let census = c.cusp_census();
    let copies: Vec<u64> = census.per_vertex.iter().map(|r| r.copies).collect();
    let cusp_ok = census.per_vertex.len() == g.cusps && copies.iter().all(|&x| x == g.cusp_copies);
    report.expect(
        "cusps",
        format!("{} cusps, copy count {} each", g.cusps, g.cusp_copies),
        format!("{} cusps, copy counts {:?}, total {}", census.per_vertex.len(), dedup(&copies), census.total),
        cusp_ok,
    );

    let classes: Vec<String> = c
        .polytope()
        .ideal_vertices()
        .iter()
        .map(|v| match c.restrict_to_vertex_figure(v).classify_flat_cube() {
            Ok(f) => f.label().to_string(),
            Err(e) => e.to_string(),
        })
        .collect();
    let class_ok = classes.len() == g.cusps && classes.iter().all(|x| x == &g.cusp_class);
    report.expect(
        "cusp sections",
        format!("{} x {}", g.cusps, g.cusp_class),
        format!("{:?}", dedup(&classes)),
        class_ok,
    );

    let profile = c.betti_profile();
    report.expect("Betti numbers", list(&g.betti), list(&profile.betti), profile.betti == g.betti);
    report.expect_eq("Euler characteristic", g.euler, profile.euler());

    let sym = c.polytope().symmetry_group().len();
    let structure = cell.admissible_structure(&c).map_err(|e| anyhow!("{e}"))?;
    let adm_ok = structure.holds() && structure.order == g.adm_order && sym == g.symmetry_order;
    report.expect(
        "admissible group",
        format!("|Sym| = {}, |Adm| = {} = H x C3, phi = id on H, trivial on C3", g.symmetry_order, g.adm_order),
        format!(
            "|Sym| = {sym}, |Adm| = {}, H x C3: {}, phi on H: {}, phi on C3 trivial: {}, homomorphism: {}",
            structure.order,
            structure.is_h_times_c3,
            structure.phi_is_h_on_left,
            structure.phi_trivial_on_right,
            structure.closed_homomorphism
        ),
        adm_ok,
    );
    let iso = c.coloured_isometry_order().map_err(|e| anyhow!("{e}"))?;
    report.expect_eq("coloured isometry order", g.coloured_isometry_order, iso);
    Ok(report)
}

fn transport_summary(t: &rac_core::cell24::TransportCheck) -> String {
    if !t.missing.is_empty() {
        return format!("table entries {:?} are not in the image of psi", t.missing);
    }
    format!("{}/{} pairs agree", t.pairs_checked - t.mismatches, t.pairs_checked)
}

fn dedup<T: Clone + Ord>(xs: &[T]) -> Vec<T> {
    let mut v = xs.to_vec();
    v.sort();
    v.dedup();
    v
}

fn cmd_classify(path: &Path, json: bool) -> Result<Report> {
    let (c, text) = load_colouring(path)?;
    let mut report = Report::new("classify", &[text.as_bytes()]);
    let cl = classify(&c);
    if !json {
        println!("polytope: {} (k = {}, rank {})", cl.polytope, cl.k, cl.rank);
        match &cl.violation {
            None => println!("proper: yes"),
            Some(s) => println!("proper: no, facets {s:?} have dependent colours"),
        }
        println!("orientable: {}", if cl.orientable { "yes" } else { "no" });
        if let Some(f) = cl.flat_class {
            println!("flat class: {f}");
        }
        if let Some(inv) = cl.dj_invariants {
            println!(
                "opposite pairs with independent colours: {}; colour sum zero: {}",
                inv.independent_pairs, inv.eps_image_zero
            );
        }
        println!("betti: {} (euler {})", list(&cl.betti), cl.euler);
        if let Some(cusps) = &cl.cusps {
            println!("cusps: {} over {} ideal vertices", cusps.total, cusps.per_vertex.len());
        }
        if let Some(classes) = &cl.cusp_classes {
            let labels: Vec<String> =
                classes.iter().map(|c| c.map_or("unclassified".to_string(), |f| f.to_string())).collect();
            println!("cusp sections: {:?}", dedup(&labels));
        }
        if let Some(n) = cl.adm_order {
            println!("admissible symmetries: {n}");
        }
        println!("DJ canonical form:");
        for row in cl.dj_canonical.to_strings() {
            println!("  {row}");
        }
    }
    report.results = serde_json::to_value(&cl)?;
    Ok(report)
}

fn cmd_betti(path: &Path, per_omega: bool, json: bool) -> Result<Report> {
    let (c, text) = load_colouring(path)?;
    let mut report = Report::new("betti", &[text.as_bytes()]);
    let p = c.betti_profile();
    if !json {
        println!("betti: {}", list(&p.betti));
        println!("euler: {}", p.euler());
        if per_omega {
            for t in &p.per_omega {
                println!("  {}  {}", rac_core::f2::bits_to_string(t.omega, c.polytope().m()), list(&t.reduced));
            }
        }
    }
    let mut v = json!({ "betti": p.betti, "euler": p.euler() });
    if per_omega {
        v["per_omega"] = serde_json::to_value(&p.per_omega)?;
    }
    report.results = v;
    Ok(report)
}

fn uniqueness_search(args: &SearchArgs) -> Result<Report> {
    let (golden, golden_text) = Golden::load(args.common.golden.as_deref())?;
    let (polytope, poly_text) = load_polytope(&args.polytope)?;
    let ideal = !polytope.ideal_vertices().is_empty();
    let rank_min = args.rank_min.unwrap_or_else(|| default_rank(&polytope));
    let rank_max = args.rank_max.unwrap_or(rank_min);
    let cusp_class = match args.cusp_class.to_ascii_lowercase().as_str() {
        "none" => None,
        _ if !ideal => None,
        s => Some(s.parse::<FlatClass>().map_err(|e| anyhow!(e))?),
    };
    let spec = SearchSpec::new(polytope, rank_min, rank_max)
        .orientable(args.orientable)
        .cusp_class(cusp_class)
        .prune(!args.no_prune);
    let echo = serde_json::to_string(&spec.echo())?;
    let mut report = Report::new("uniqueness-search", &[echo.as_bytes(), poly_text.as_bytes(), golden_text.as_bytes()]);

    let start = Instant::now();
    let step = std::sync::atomic::AtomicUsize::new(0);
    let progress = |done: usize, total: usize| {
        let every = (total / 20).max(1);
        if done == total || done.is_multiple_of(every) {
            let prev = step.swap(done, std::sync::atomic::Ordering::Relaxed);
            if prev != done {
                eprintln!("subtrees {done}/{total} ({:.1}s)", start.elapsed().as_secs_f64());
            }
        }
    };
    let opts = RunOptions { jobs: args.jobs, progress: Some(&progress) };
    let census = search::enumerate(&spec, opts).map_err(|e| anyhow!("{e}"))?;
    eprintln!(
        "{} classes, {} leaves, {} nodes in {:.3}s",
        census.total(),
        census.stats.leaves,
        census.stats.nodes,
        census.wall_time.as_secs_f64()
    );
    if let Some(out) = &args.out {
        let body = serde_json::to_string_pretty(&census)? + "\n";
        std::fs::write(out, body).with_context(|| format!("writing {}", out.display()))?;
    }
    if !args.common.json {
        for (rank, labels) in &census.counts {
            for (label, n) in labels {
                println!("rank {rank}  {label}: {n}");
            }
        }
        println!("total: {} DJ classes", census.total());
    }
    let claim = spec.echo() == search::uniqueness_spec().echo();
    if claim && !args.no_assert {
        report.expect_eq("DJ classes", golden.uniqueness.classes, census.total());
    }
    let mut results = serde_json::to_value(&census)?;
    results["wall_time_secs"] = json!(census.wall_time.as_secs_f64());
    report.results = results;
    Ok(report)
}

fn default_rank(p: &Polytope) -> usize {
    if p.name() == "24cell" {
        search::uniqueness_spec().rank_min
    } else if p.ideal_vertices().is_empty() {
        p.dimension()
    } else {
        p.dimension() - 1
    }
}

fn count_classes(arg: &str, rank: Option<usize>, common: &Common) -> Result<Report> {
    let (golden, golden_text) = Golden::load(common.golden.as_deref())?;
    let (p, text) = load_polytope(arg)?;
    let rank = rank.unwrap_or_else(|| default_rank(&p));
    let mut report = Report::new("count-classes", &[text.as_bytes(), &rank.to_le_bytes(), golden_text.as_bytes()]);
    let start = Instant::now();
    let count = count_orientable_classes(&p, rank).map_err(|e| anyhow!("{e}"))?;
    eprintln!("counted in {:.3}s", start.elapsed().as_secs_f64());
    if !common.json {
        println!("polytope: {}  rank: {rank}", count.polytope);
        println!("spanning colourings: {}", count.colourings);
        println!("group order: {}", count.group_order);
        println!("DJ classes: {}", count.classes);
    }
    if p.name() == "24cell" && rank == 4 {
        report.expect_eq("DJ classes without cusp filter", golden.uniqueness.unfiltered_classes as u128, count.classes);
    }
    // counts can exceed 64 bits, so they travel as decimal strings
    report.results = json!({
        "polytope": count.polytope,
        "rank": rank,
        "colourings": count.colourings.to_string(),
        "group_order": count.group_order.to_string(),
        "fixed_total": count.fixed_total.to_string(),
        "classes": count.classes.to_string(),
    });
    Ok(report)
}

fn dump_polytope(arg: &str, json: bool) -> Result<Report> {
    let (p, text) = load_polytope(arg)?;
    let mut report = Report::new("dump-polytope", &[text.as_bytes()]);
    let spec = p.to_spec();
    if !json {
        println!("{}", serde_json::to_string_pretty(&spec)?);
    }
    report.results = json!({
        "spec": spec,
        "counts": p.dual_k().counts(),
        "symmetry_order": p.symmetry_group().len(),
    });
    Ok(report)
}
