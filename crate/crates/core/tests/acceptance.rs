//! Acceptance checks, one line per criterion. Run with
//! `cargo test -p rac-core --test acceptance`.

mod common;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rac_core::cell24::{adjacency_transport, HurwitzGroup, Psi, TwentyFourCell, VERTEX_TABLE};
use rac_core::search::{self, RunOptions};
use rac_core::{cube3, Colouring, F2Matrix, FlagComplex, FlatClass, Symmetry};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 8] = [
        ("cube census", cube_census),
        ("cube matrices and invariants", cube_matrices),
        ("24-cell colouring", cell_colouring),
        ("24-cell Betti numbers", cell_betti),
        ("symmetry groups", symmetry_groups),
        ("Hurwitz model", hurwitz_model),
        ("uniqueness", uniqueness),
        ("property suites", property_suites),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {} {name}: PASS ({detail}) [{secs:.2}s]", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {} {name}: FAIL ({why}) [{secs:.2}s]", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}

fn cube(rows: &[&str]) -> Colouring {
    Colouring::from_matrix(cube3(), &F2Matrix::from_strings(rows).unwrap()).unwrap()
}

fn timed<T>(limit: Duration, what: &str, f: impl FnOnce() -> T) -> Result<T, String> {
    let start = Instant::now();
    let out = f();
    let t = start.elapsed();
    ensure!(t <= limit, "{what} took {t:?}, limit {limit:?}");
    Ok(out)
}

fn cube_census() -> Outcome {
    let census = timed(Duration::from_secs(60), "census", || search::enumerate_cube(3, 6, true))?;
    let expected: [(usize, &[(&str, usize)]); 4] = [
        (3, &[("F1_torus", 1), ("F2_half_twist", 1)]),
        (4, &[("F1_torus", 3), ("F2_half_twist", 2), ("F6_hantzsche_wendt", 1)]),
        (5, &[("F1_torus", 3), ("F2_half_twist", 1)]),
        (6, &[("F1_torus", 1)]),
    ];
    for (rank, labels) in expected {
        let want: BTreeMap<String, usize> = labels.iter().map(|(l, n)| (l.to_string(), *n)).collect();
        let got = census.counts.get(&rank).cloned().unwrap_or_default();
        ensure!(want == got, "rank {rank}: expected {want:?}, got {got:?}");
    }
    ensure!(census.total() == 13, "{} classes", census.total());
    // independent route: orbits of row spaces under the 48 pair-preserving permutations
    for k in 3..=6 {
        let oracle = common::cube_census_oracle(k);
        let mut by_hits = BTreeMap::new();
        for (_, hits) in &oracle {
            let label = match hits {
                3 => "F1_torus",
                1 => "F2_half_twist",
                0 => "F6_hantzsche_wendt",
                _ => return Err(format!("oracle found |Row ∩ T| = {hits}")),
            };
            *by_hits.entry(label.to_string()).or_insert(0usize) += 1;
        }
        ensure!(by_hits == census.counts[&k], "rank {k}: oracle {by_hits:?} vs search {:?}", census.counts[&k]);
    }
    Ok("13 classes: 2 + 6 + 4 + 1, agrees with subspace-orbit oracle".into())
}

struct Printed {
    name: &'static str,
    rows: &'static [&'static str],
    class: FlatClass,
    independent_pairs: Option<usize>,
    eps_zero: Option<bool>,
}

const PRINTED: &[Printed] = &[
    Printed { name: "rank 3 torus", rows: &["110000", "001100", "000011"], class: FlatClass::F1Torus, independent_pairs: None, eps_zero: None },
    Printed { name: "rank 3 half-twist", rows: &["110001", "001101", "000011"], class: FlatClass::F2HalfTwist, independent_pairs: None, eps_zero: None },
    Printed { name: "rank 4 torus (1)", rows: &["100000", "001100", "000011", "010000"], class: FlatClass::F1Torus, independent_pairs: Some(1), eps_zero: None },
    Printed { name: "rank 4 torus (2)", rows: &["100001", "001100", "000011", "010001"], class: FlatClass::F1Torus, independent_pairs: Some(2), eps_zero: None },
    Printed { name: "rank 4 torus (3)", rows: &["100101", "001100", "000011", "010101"], class: FlatClass::F1Torus, independent_pairs: Some(3), eps_zero: None },
    Printed { name: "rank 4 half-twist (1)", rows: &["100000", "001101", "000011", "010001"], class: FlatClass::F2HalfTwist, independent_pairs: Some(2), eps_zero: None },
    Printed { name: "rank 4 half-twist (2)", rows: &["100001", "001100", "000111", "010101"], class: FlatClass::F2HalfTwist, independent_pairs: Some(3), eps_zero: None },
    Printed { name: "rank 4 Hantzsche-Wendt", rows: &["100001", "001101", "000110", "010101"], class: FlatClass::F6HantzscheWendt, independent_pairs: None, eps_zero: None },
    Printed { name: "rank 5 torus (1)", rows: &["100000", "001000", "000011", "010000", "000100"], class: FlatClass::F1Torus, independent_pairs: Some(2), eps_zero: None },
    Printed { name: "rank 5 torus (2)", rows: &["100001", "001000", "000011", "010001", "000100"], class: FlatClass::F1Torus, independent_pairs: Some(3), eps_zero: Some(false) },
    Printed { name: "rank 5 torus (3)", rows: &["100001", "001001", "000011", "010001", "000101"], class: FlatClass::F1Torus, independent_pairs: Some(3), eps_zero: Some(true) },
    Printed { name: "rank 5 half-twist", rows: &["100001", "001001", "000011", "010000", "000100"], class: FlatClass::F2HalfTwist, independent_pairs: None, eps_zero: None },
    Printed { name: "rank 6 torus", rows: &["100000", "010000", "001000", "000100", "000010", "000001"], class: FlatClass::F1Torus, independent_pairs: Some(3), eps_zero: None },
];

fn cube_matrices() -> Outcome {
    let census = search::enumerate_cube(3, 6, true);
    let mut matched = BTreeSet::new();
    for p in PRINTED {
        let c = cube(p.rows);
        let class = c.classify_flat_cube().map_err(|e| format!("{}: {e}", p.name))?;
        ensure!(class == p.class, "{}: classified {class}, expected {}", p.name, p.class);
        let inv = c.dj_invariants().map_err(|e| e.to_string())?;
        if let Some(n) = p.independent_pairs {
            ensure!(inv.independent_pairs == n, "{}: {} independent pairs, expected {n}", p.name, inv.independent_pairs);
        }
        if let Some(z) = p.eps_zero {
            ensure!(inv.eps_image_zero == z, "{}: Λε = 0 is {}, expected {z}", p.name, inv.eps_image_zero);
        }
        let canon = c.dj_canonical_form();
        let hits: Vec<_> = census.classes.iter().filter(|k| k.canonical == canon).collect();
        ensure!(hits.len() == 1, "{}: matches {} census classes", p.name, hits.len());
        ensure!(hits[0].labels.flat_class == Some(p.class), "{}: census label differs", p.name);
        matched.insert(canon);
    }
    ensure!(matched.len() == PRINTED.len(), "printed matrices fall into {} classes", matched.len());
    Ok(format!("{} matrices classified, each in its own census class", PRINTED.len()))
}

fn cell_colouring() -> Outcome {
    let (c, census, classes) = timed(Duration::from_secs(5), "24-cell checks", || {
        let cell = TwentyFourCell::shared();
        let c = cell.hantzsche_wendt_colouring();
        let census = c.cusp_census();
        let classes: Vec<_> =
            c.polytope().ideal_vertices().iter().map(|v| c.restrict_to_vertex_figure(v).classify_flat_cube()).collect();
        (c, census, classes)
    })?;
    ensure!(c.is_proper(), "not proper: {:?}", c.properness_violation());
    ensure!(c.is_orientable(), "not orientable");
    ensure!(c.rank() == 4, "rank {}", c.rank());
    ensure!(census.per_vertex.len() == 24 && census.total == 24, "cusp census {census:?}");
    ensure!(census.per_vertex.iter().all(|r| r.copies == 1 && r.span_dim == 4), "copy counts {census:?}");
    ensure!(classes.iter().all(|k| k == &Ok(FlatClass::F6HantzscheWendt)), "cusp classes {classes:?}");
    // oracle: every dual triangle independent, every figure spanning, no figure row space meets T
    for t in c.polytope().dual_k().simplices(2) {
        let cols: Vec<u64> = t.iter().map(|&f| c.colour(f)).collect();
        ensure!(common::independent(&cols), "triangle {t:?} dependent");
    }
    for v in c.polytope().ideal_vertices() {
        let cols: Vec<u64> = v.facets().iter().map(|&f| c.colour(f)).collect();
        let space = common::span(&common::rows_of(&cols, 4));
        ensure!(common::rank(&cols) == 4, "figure {v:?} spans less");
        ensure!(space.contains(&0b11_1111), "figure {v:?} not orientable");
        ensure!(common::T_SET.iter().all(|t| !space.contains(t)), "figure {v:?} meets T");
    }
    // odd weight of every colour gives orientability directly
    ensure!(c.colours().iter().all(|x| x.count_ones() % 2 == 1), "a colour has even weight");
    Ok("proper, orientable, rank 4, 24 cusps of one copy, all Hantzsche-Wendt".into())
}

fn cell_betti() -> Outcome {
    let c = TwentyFourCell::shared().hantzsche_wendt_colouring();
    let p = timed(Duration::from_secs(10), "Betti numbers", || c.betti_profile())?;
    ensure!(p.betti == vec![1, 0, 38, 23, 0], "betti {:?}", p.betti);
    ensure!(p.euler() == 16, "euler {}", p.euler());
    // orbifold Euler characteristic: each face of codimension c contributes (−½)^c
    let counts = c.polytope().dual_k().counts();
    let orbifold: f64 = 1.0 + counts.iter().enumerate().map(|(d, &n)| n as f64 * (-0.5f64).powi(d as i32 + 1)).sum::<f64>();
    ensure!(orbifold == 1.0, "orbifold Euler characteristic {orbifold}");
    ensure!(p.euler() as f64 == 16.0 * orbifold, "χ ≠ 2^4 · χ_orb");
    ensure!(p.per_omega.len() == 16, "{} row-space vectors", p.per_omega.len());
    Ok("(1, 0, 38, 23, 0), Euler characteristic 16".into())
}

/// Automorphisms of a graph by assigning vertices in index order.
fn naive_automorphisms(adj: &[u64]) -> usize {
    fn rec(adj: &[u64], img: &mut Vec<usize>, used: u64) -> usize {
        let v = img.len();
        if v == adj.len() {
            return 1;
        }
        let mut n = 0;
        for w in 0..adj.len() {
            if used >> w & 1 == 1 || adj[v].count_ones() != adj[w].count_ones() {
                continue;
            }
            let ok = (0..v).all(|u| (adj[v] >> u & 1) == (adj[w] >> img[u] & 1));
            if ok {
                img.push(w);
                n += rec(adj, img, used | 1 << w);
                img.pop();
            }
        }
        n
    }
    rec(adj, &mut Vec::new(), 0)
}

fn symmetry_groups() -> Outcome {
    let cube = cube3();
    let oracle: BTreeSet<Vec<usize>> = common::cube_symmetries().iter().map(|p| p.to_vec()).collect();
    let lib: BTreeSet<Vec<usize>> = cube.symmetry_group().iter().map(|s| s.0.clone()).collect();
    ensure!(lib.len() == 48 && lib == oracle, "cube: {} symmetries, oracle {}", lib.len(), oracle.len());

    let cell = TwentyFourCell::shared();
    let p = cell.polytope();
    let adj: Vec<u64> = (0..24).map(|f| p.neighbours(f)).collect();
    let naive = naive_automorphisms(&adj);
    let sym = p.symmetry_group();
    ensure!(sym.len() == 1152 && naive == 1152, "24-cell: {} symmetries, naive count {naive}", sym.len());
    ensure!(p.graph_automorphisms().len() == sym.len(), "some automorphism moves vertex figures");
    let set: BTreeSet<&Vec<usize>> = sym.iter().map(|s| &s.0).collect();
    for a in sym.iter().step_by(37) {
        for b in sym.iter().step_by(41) {
            ensure!(set.contains(&a.compose(b).0), "symmetry group not closed");
        }
    }

    let c = cell.hantzsche_wendt_colouring();
    let structure = cell.admissible_structure(&c).map_err(|e| e.to_string())?;
    ensure!(structure.holds(), "admissible structure {structure:?}");
    // oracle: s is admissible iff λ∘s = φ∘λ for some φ in GL(4); tabulate φ∘λ over all of GL(4)
    let mut by_image: HashMap<Vec<u64>, F2Matrix> = HashMap::new();
    for bits in 0u64..1 << 16 {
        let rows: Vec<u64> = (0..4).map(|i| bits >> (4 * i) & 0xf).collect();
        let m = F2Matrix::from_rows(rows.clone(), 4);
        if common::rank(&rows) == 4 {
            by_image.insert(c.colours().iter().map(|&x| m.mul_vec(x)).collect(), m);
        }
    }
    ensure!(by_image.len() == 20160, "|GL(4,2)| = {}", by_image.len());
    let adm = c.admissible_group().map_err(|e| e.to_string())?;
    let mut oracle_count = 0;
    for s in sym {
        let img: Vec<u64> = (0..24).map(|f| c.colour(s.apply(f))).collect();
        if let Some(phi) = by_image.get(&img) {
            oracle_count += 1;
            ensure!(adm.find(s).is_some_and(|e| &e.phi == phi), "φ differs for {s:?}");
        }
    }
    ensure!(oracle_count == 72 && adm.order() == 72, "|Adm| = {}, oracle {oracle_count}", adm.order());
    let iso = c.coloured_isometry_order().map_err(|e| e.to_string())?;
    ensure!(iso == 1152, "coloured isometry order {iso}");

    let id = Colouring::new(cube3(), 6, (0..6).map(|i| 1 << i).collect()).unwrap();
    ensure!(id.coloured_isometry_order() == Ok(3072), "identity cube colouring");
    Ok("|Sym(cube)| = 48, |Sym(24-cell)| = 1152 two ways, |Adm| = 72 = H x C3, isometry order 1152".into())
}

fn hurwitz_model() -> Outcome {
    // oracle quaternions in doubled coordinates
    let mut units = BTreeSet::new();
    for i in 0..4 {
        for s in [-2, 2] {
            let mut q = [0; 4];
            q[i] = s;
            units.insert(q);
        }
    }
    for signs in 0..16 {
        units.insert(std::array::from_fn(|i| if signs >> i & 1 == 1 { -1 } else { 1 }));
    }
    ensure!(units.len() == 24, "{} oracle units", units.len());
    let s = [1, 1, 1, 1];
    let t = [1, 1, 1, -1];
    let cube = |q| common::quat_mul(q, common::quat_mul(q, q));
    let st = common::quat_mul(s, t);
    ensure!(cube(s) == [-2, 0, 0, 0] && cube(t) == [-2, 0, 0, 0], "s^3 or t^3 differs from -1");
    ensure!(common::quat_mul(st, st) == [-2, 0, 0, 0], "(st)^2 differs from -1");

    let group = HurwitzGroup::new();
    ensure!(group.presentation_holds() && group.generated_by_s_t(), "library presentation check failed");
    let lib: BTreeSet<[i32; 4]> =
        group.elements().iter().map(|e| e.doubled().map(i32::from)).collect();
    ensure!(lib == units, "library units differ from oracle");

    let psi = Psi::standard(&group).map_err(|e| e.to_string())?;
    let as_bits = |m: &F2Matrix| -> [[u8; 4]; 4] {
        std::array::from_fn(|i| std::array::from_fn(|j| m.get(i, j) as u8))
    };
    let images: BTreeSet<[[u8; 4]; 4]> = (0..24).map(|q| as_bits(psi.image(q))).collect();
    ensure!(images.len() == 24, "ψ is not injective");
    let table: BTreeSet<[[u8; 4]; 4]> = VERTEX_TABLE.iter().map(common::parse4).collect();
    ensure!(images == table, "ψ image differs from the vertex table");
    for a in 0..24 {
        for b in 0..24 {
            let lhs = as_bits(psi.image(group.product(a, b)));
            let rhs = common::mat_mul(&as_bits(psi.image(a)), &as_bits(psi.image(b)));
            ensure!(lhs == rhs, "ψ(ab) ≠ ψ(a)ψ(b) at ({a}, {b})");
        }
    }
    let cell = TwentyFourCell::shared();
    let transport = adjacency_transport(&group, &psi, cell.matrices());
    ensure!(transport.passed(), "transport {transport:?}");
    // oracle adjacency: Re(p q⁻¹) = ½ with conjugate as inverse
    let elems = group.elements();
    for a in 0..24 {
        for b in a + 1..24 {
            let p = elems[a].doubled().map(i32::from);
            let q = elems[b].doubled().map(i32::from);
            let conj = [q[0], -q[1], -q[2], -q[3]];
            let re_half = common::quat_mul(p, conj)[0] == 1;
            let fa = cell.facet_of(psi.image(a)).unwrap();
            let fb = cell.facet_of(psi.image(b)).unwrap();
            ensure!(re_half == cell.polytope().adjacent(fa, fb), "adjacency of {a}, {b}");
        }
    }
    ensure!(transport.pairs_checked == 276, "{} pairs", transport.pairs_checked);

    ensure!(cell.orbit_octahedra() == cell.searched_octahedra(), "octahedra differ");
    // oracle: all 6-subsets inducing K_{2,2,2}, i.e. every member has 4 neighbours inside
    let p = cell.polytope();
    let mut found = BTreeSet::new();
    let mut idx = [0usize, 1, 2, 3, 4, 5];
    loop {
        let mask = idx.iter().fold(0u64, |a, &i| a | 1 << i);
        if idx.iter().all(|&i| (p.neighbours(i) & mask).count_ones() == 4) {
            let mut v = idx.to_vec();
            v.sort_unstable();
            found.insert(v);
        }
        let mut i = 5;
        loop {
            idx[i] += 1;
            if idx[i] <= 18 + i {
                for j in i + 1..6 {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
            if i == 0 {
                break;
            }
            i -= 1;
        }
        if idx[0] > 18 {
            break;
        }
    }
    let lib: BTreeSet<Vec<usize>> = cell
        .orbit_octahedra()
        .iter()
        .map(|o| {
            let mut v = o.facets().to_vec();
            v.sort_unstable();
            v
        })
        .collect();
    ensure!(found.len() == 24 && found == lib, "oracle found {} octahedra", found.len());
    Ok("relations hold, ψ injective onto the table, 276/276 pairs transported, 24 octahedra both ways".into())
}

/// Brute-force count of orientable rank-4 colourings of the 24-cell with every
/// figure Hantzsche-Wendt and facet 0 coloured 0001, colours restricted to odd
/// first coordinate. Returns the colourings.
fn brute_force_hw(cell: &TwentyFourCell) -> Vec<Vec<u64>> {
    let p = cell.polytope();
    let figures: Vec<[usize; 6]> = p.ideal_vertices().iter().map(|v| *v.facets()).collect();
    // visit order: facet 0 first, then repeatedly finish the figure with most facets placed
    let mut order: Vec<usize> = vec![0];
    while order.len() < 24 {
        let best = figures
            .iter()
            .filter(|f| f.iter().any(|x| !order.contains(x)))
            .max_by_key(|f| f.iter().filter(|x| order.contains(x)).count())
            .unwrap();
        for &x in best {
            if !order.contains(&x) {
                order.push(x);
            }
        }
    }
    // figure test over the eight affine points 2x+1, indexed by six 3-bit digits
    let fig_table: Vec<bool> = (0..1usize << 18)
        .map(|idx| {
            let cols: Vec<u64> = (0..6).map(|i| 2 * (idx >> (3 * i) & 7) as u64 + 1).collect();
            let space = common::span(&common::rows_of(&cols, 4));
            common::rank(&cols) == 4 && common::T_SET.iter().all(|t| !space.contains(t))
        })
        .collect();
    let key = |cols: &[u64]| cols.iter().enumerate().fold(0usize, |acc, (i, &c)| acc | ((c >> 1) as usize) << (3 * i));
    struct Ctx<'a> {
        order: &'a [usize],
        p: &'a rac_core::Polytope,
        figures: &'a [[usize; 6]],
        fig_ok: &'a dyn Fn(&[u64]) -> bool,
    }
    fn rec(depth: usize, ctx: &Ctx, colours: &mut [u64; 24], out: &mut Vec<Vec<u64>>) {
        if depth == 24 {
            if common::rank(colours) == 4 {
                out.push(colours.to_vec());
            }
            return;
        }
        let v = ctx.order[depth];
        let choices: Vec<u64> = if v == 0 { vec![1] } else { (0..8).map(|x| 2 * x + 1).collect() };
        for c in choices {
            if ctx.order[..depth].iter().any(|&u| ctx.p.adjacent(u, v) && colours[u] == c) {
                continue;
            }
            colours[v] = c;
            let placed = &ctx.order[..=depth];
            // every figure through v with at most two open facets must still be completable
            let ok = ctx.figures.iter().filter(|f| f.contains(&v)).all(|f| {
                let open: Vec<usize> = (0..6).filter(|&i| !placed.contains(&f[i])).collect();
                if open.len() > 2 {
                    return true;
                }
                let mut cols: Vec<u64> = f.iter().map(|&x| colours[x]).collect();
                (0..1u64 << (3 * open.len())).any(|fill| {
                    for (j, &i) in open.iter().enumerate() {
                        cols[i] = 2 * (fill >> (3 * j) & 7) + 1;
                    }
                    (ctx.fig_ok)(&cols)
                })
            });
            if ok {
                rec(depth + 1, ctx, colours, out);
            }
            colours[v] = 0;
        }
    }
    let fig_ok = |cols: &[u64]| fig_table[key(cols)];
    let ctx = Ctx { order: &order, p, figures: &figures, fig_ok: &fig_ok };
    let mut out = Vec::new();
    rec(0, &ctx, &mut [0u64; 24], &mut out);
    out
}

fn uniqueness() -> Outcome {
    let cell = TwentyFourCell::shared();
    let target = cell.hantzsche_wendt_colouring().dj_canonical_form();
    let r = search::enumerate_24cell_uniqueness(RunOptions { jobs: 0, progress: None });
    ensure!(r.total() == 1, "{} classes", r.total());
    ensure!(r.classes[0].canonical == target, "the class is not that of the first-column colouring");
    let unpruned = search::enumerate(&search::uniqueness_spec().prune(false), RunOptions::default()).unwrap();
    ensure!(
        unpruned.classes.iter().map(|c| &c.canonical).eq(r.classes.iter().map(|c| &c.canonical)),
        "unpruned search disagrees"
    );
    // independent brute force: with one class the orbit-stabiliser count is
    // |AGL(3,2)| · |Sym| / |Adm| / 8 translations = 1344 · 1152 / 72 / 8
    let all = brute_force_hw(cell);
    ensure!(all.len() == 2688, "brute force found {} colourings, expected 2688", all.len());
    let syms = cell.polytope().symmetry_group();
    for cols in all.iter().step_by(97) {
        let canon = rac_core::colouring::canonical_form(syms, cols, 4);
        ensure!(canon == target, "brute-force colouring outside the class");
    }
    Ok(format!(
        "1 class equal to the first-column colouring ({} leaves, {} nodes); brute force finds 2688 = 21504 / 8",
        r.stats.leaves, r.stats.nodes
    ))
}

fn property_suites() -> Outcome {
    let parts = [
        prop_orientability()?,
        prop_betti_vs_tset()?,
        prop_complexes()?,
        prop_prune_identity()?,
        prop_canonical_invariance()?,
    ];
    Ok(parts.join("; "))
}

/// (a) ε ∈ Row(Λ) ⇔ every kernel vector has even weight.
fn prop_orientability() -> Outcome {
    let mut exhaustive = 0u64;
    for m in 1..=12usize {
        for k in 1..=16 / m {
            for bits in 0u64..1 << (k * m) {
                let rows: Vec<u64> = (0..k).map(|i| bits >> (i * m) & ((1 << m) - 1)).collect();
                let lhs = F2Matrix::from_rows(rows.clone(), m).row_space().contains_all_ones();
                let cols = common::cols_of(&rows, m);
                let rhs = common::kernel(&cols).iter().all(|x| x.count_ones() % 2 == 0);
                ensure!(lhs == rhs, "mismatch for rows {rows:?} (m = {m})");
                exhaustive += 1;
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
    for _ in 0..10_000 {
        let m = rng.gen_range(1..=24usize);
        let k = rng.gen_range(m.saturating_sub(14).max(1)..=m);
        let rows: Vec<u64> = (0..k).map(|_| rng.gen::<u64>() & ((1 << m) - 1)).collect();
        let a = F2Matrix::from_rows(rows.clone(), m);
        let lhs = a.row_space().contains_all_ones();
        let basis = common::kernel_basis(&common::cols_of(&rows, m), k);
        // even-weight vectors form a subspace, so the basis decides
        let rhs = basis.iter().all(|x| x.count_ones() % 2 == 0);
        ensure!(basis.len() + a.rank() == m, "kernel dimension disagrees with rank");
        ensure!(lhs == rhs, "random mismatch for rows {rows:?} (m = {m})");
    }
    Ok(format!("(a) {exhaustive} exhaustive + 10000 random"))
}

/// (b) β¹ = |Row ∩ T| and (c) Poincaré duality shape, over every orientable
/// proper cube colouring up to the colour-space action.
fn prop_betti_vs_tset() -> Outcome {
    let mut n = 0;
    for k in 3..=6 {
        for rows in common::subspaces(k, 6) {
            let cols = common::cols_of(&rows, 6);
            if cols.contains(&0) || !common::cube_proper(&cols) {
                continue;
            }
            let space = common::span(&rows);
            if !space.contains(&0b11_1111) {
                continue;
            }
            let c = Colouring::new(cube3(), k, cols).unwrap();
            let b = c.betti_profile().betti;
            let hits = common::T_SET.iter().filter(|t| space.contains(t)).count();
            ensure!(b[1] == hits, "β¹ = {} but |Row ∩ T| = {hits} for {rows:?}", b[1]);
            ensure!(b[0] == 1 && b[3] == 1 && b[1] == b[2], "profile {b:?} for {rows:?}");
            n += 1;
        }
    }
    // literal rank-3 matrices, not only reduced ones
    let mut literal = 0;
    for bits in 0u64..1 << 18 {
        let cols: Vec<u64> = (0..6).map(|j| bits >> (3 * j) & 7).collect();
        if cols.contains(&0) || !common::cube_proper(&cols) {
            continue;
        }
        let rows = common::rows_of(&cols, 3);
        let space = common::span(&rows);
        if !space.contains(&0b11_1111) {
            continue;
        }
        let c = Colouring::new(cube3(), 3, cols).unwrap();
        let b = c.betti_profile().betti;
        let hits = common::T_SET.iter().filter(|t| space.contains(t)).count();
        ensure!(b[1] == hits && b[0] == 1 && b[3] == 1 && b[1] == b[2], "literal {rows:?}: {b:?}");
        literal += 1;
    }
    Ok(format!("(b, c) {n} reduced + {literal} literal colourings"))
}

fn check_complex(k: &FlagComplex) -> Result<(), String> {
    ensure!(k.boundary_squared_vanishes(), "∂² ≠ 0");
    let b = k.reduced_betti();
    let from_betti: i64 = (0..=k.max_dim() as isize + 1)
        .map(|i| if i % 2 == 0 { -(b.get(i - 1) as i64) } else { b.get(i - 1) as i64 })
        .sum::<i64>();
    // Σ (−1)^i β̃_i over i ≥ −1 equals the reduced Euler characteristic
    ensure!(from_betti == common::reduced_euler(&k.counts()), "Euler-Poincaré fails");
    Ok(())
}

/// (d) ∂² = 0 and Euler-Poincaré on every complex built here.
fn prop_complexes() -> Outcome {
    let mut n = 0;
    let cell = TwentyFourCell::shared().polytope().dual_k().clone();
    for k in [cube3().dual_k().clone(), cell.clone()] {
        check_complex(&k)?;
        n += 1;
        for mask in [0u64, 0b111, 0x3f, 0xfff, 0xff_ffff] {
            check_complex(&k.induced_mask(mask & ((1 << k.label_count()) - 1)))?;
            n += 1;
        }
    }
    for mask in 0u64..64 {
        check_complex(&cube3().dual_k().induced_mask(mask))?;
        n += 1;
    }
    let c = TwentyFourCell::shared().hantzsche_wendt_colouring();
    for omega in c.defining_matrix().row_space().iter() {
        check_complex(&cell.induced_mask(omega))?;
        n += 1;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0004);
    for _ in 0..300 {
        let v = rng.gen_range(1..=10usize);
        let mut edges = Vec::new();
        for a in 0..v {
            for b in a + 1..v {
                if rng.gen_bool(0.5) {
                    edges.push([a, b]);
                }
            }
        }
        check_complex(&FlagComplex::clique_complex(v, &edges, 3))?;
        n += 1;
    }
    Ok(format!("(d) {n} complexes"))
}

/// (e) pruned and unpruned cube censuses agree, for every rank, with and
/// without the orientability filter.
fn prop_prune_identity() -> Outcome {
    for orientable in [true, false] {
        for k in 3..=6 {
            let spec = search::SearchSpec::new(cube3(), k, k).orientable(orientable);
            let a = search::enumerate(&spec, RunOptions::default()).unwrap();
            let b = search::enumerate(&spec.clone().prune(false), RunOptions::default()).unwrap();
            let ca: Vec<_> = a.classes.iter().map(|c| &c.canonical).collect();
            let cb: Vec<_> = b.classes.iter().map(|c| &c.canonical).collect();
            ensure!(ca == cb, "rank {k}, orientable {orientable}: {} vs {} classes", ca.len(), cb.len());
        }
    }
    Ok("(e) pruned = unpruned on ranks 3..6".into())
}

fn random_gl(rng: &mut ChaCha8Rng, k: usize) -> F2Matrix {
    loop {
        let rows: Vec<u64> = (0..k).map(|_| rng.gen::<u64>() & ((1 << k) - 1)).collect();
        if common::rank(&rows) == k {
            return F2Matrix::from_rows(rows, k);
        }
    }
}

/// (f) the DJ canonical form is constant on (m, s) orbits.
fn prop_canonical_invariance() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0006);
    let census = search::enumerate_cube(3, 6, true);
    let mut pool: Vec<Colouring> = census.classes.iter().map(|c| c.representative(cube3())).collect();
    pool.push(TwentyFourCell::shared().hantzsche_wendt_colouring());
    for i in 0..10_000 {
        let c = if i % 10 == 0 { pool.last().unwrap() } else { &pool[rng.gen_range(0..pool.len() - 1)] };
        let m = random_gl(&mut rng, c.k());
        let syms = c.polytope().symmetry_group();
        let s: &Symmetry = &syms[rng.gen_range(0..syms.len())];
        let d = c.transform(&m, s);
        ensure!(d.dj_canonical_form() == c.dj_canonical_form(), "canonical form moved under conjugation {i}");
        ensure!(d.is_proper() == c.is_proper() && d.is_orientable() == c.is_orientable(), "invariants moved");
    }
    Ok("(f) 10000 conjugations".into())
}
