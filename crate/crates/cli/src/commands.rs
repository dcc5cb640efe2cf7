use std::error::Error;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};
use turan_core::blowup::{blow_up, minimal_scale, BlowUpScale, WeightMode};
use turan_core::clique::{clique_density, clique_density_with_witnesses, count_near_cliques, NearCliqueQuery};
use turan_core::degree::{codegree_profile, is_strictly_balanced, threshold_check_with};
use turan_core::extremal::{build_extremal_with, check_pos_region, decaen_lift, BaseLayout, PlainHypergraph};
use turan_core::hypergraph::fmt_vertices;
use turan_core::io;
use turan_core::rational::{format_rational, Rational};
use turan_core::search::{
    exhaustive_bound_scan, random_bound_scan, tightness_probe, SearchMode, SearchSpace, WeightScheme,
};
use turan_core::PartiteHypergraph;

use crate::output::{render, Cell, Output, Table};
use crate::{BlowMode, Cli, Command, Layout, ScanMode, VerifyArgs, Weights};

pub enum Status {
    Ok,
    TheoremViolation(String),
}

type CmdResult = Result<(Output, Status), Box<dyn Error>>;

pub fn run(cli: &Cli) -> Result<Status, Box<dyn Error>> {
    let (output, status) = match &cli.command {
        Command::Density { input, subset, .. } => density(input, subset.as_deref())?,
        Command::Cliques { input, witnesses, .. } => cliques(input, *witnesses)?,
        Command::NearCliques { input, k, witnesses, .. } => near_cliques(input, *k, *witnesses)?,
        Command::Construct {
            r,
            rho,
            tolerance,
            layout,
            out,
            recipe,
        } => construct(*r, rho, tolerance, *layout, out.as_deref(), recipe.as_deref())?,
        Command::Lift { input, out } => lift(input, out.as_deref())?,
        Command::Blowup {
            input,
            scale,
            per_class,
            mode,
            out,
        } => blowup(input, *scale, per_class.clone(), *mode, out.as_deref())?,
        Command::Balance { input, tuple_size, .. } => balance(input, *tuple_size)?,
        Command::Threshold { input, k, all_classes, .. } => threshold(input, *k, *all_classes)?,
        Command::VerifyBound(args) => verify_bound(args, cli.jobs)?,
        Command::Tightness { r, rho, .. } => tightness(*r, rho)?,
        Command::PosRegion { a, b, c, .. } => pos_region(a, b, c)?,
    };
    let config = serde_json::to_value(cli)?;
    let report_path = match &cli.command {
        Command::Density { out, .. }
        | Command::Cliques { out, .. }
        | Command::NearCliques { out, .. }
        | Command::Balance { out, .. }
        | Command::Threshold { out, .. }
        | Command::Tightness { out, .. }
        | Command::PosRegion { out, .. } => out.out.as_deref(),
        Command::VerifyBound(args) => args.out.out.as_deref(),
        _ => None,
    };
    match report_path {
        Some(path) => {
            let mut buf = Vec::new();
            render(&output, &config, cli.format, cli.decimal, &mut buf)?;
            fs::write(path, buf).map_err(|e| format!("cannot write {}: {e}", path.display()))?;
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            let written = render(&output, &config, cli.format, cli.decimal, &mut lock).and_then(|()| lock.flush());
            if let Err(e) = written {
                // reader went away (e.g. `| head`)
                if e.kind() != std::io::ErrorKind::BrokenPipe {
                    return Err(e.into());
                }
            }
        }
    }
    Ok(status)
}

fn read(path: &Path) -> Result<PartiteHypergraph, Box<dyn Error>> {
    Ok(io::read_instance(path)?)
}

fn write_instance(g: &PartiteHypergraph, path: &Path) -> Result<(), Box<dyn Error>> {
    Ok(io::write_instance(g, path)?)
}

fn rat_json(x: &Rational) -> Value {
    Value::String(format_rational(x))
}

fn rats_json(xs: &[Rational]) -> Value {
    Value::Array(xs.iter().map(rat_json).collect())
}

/// Instance embedded in the report, or the path it was written to.
fn place_instance(g: &PartiteHypergraph, out: Option<&Path>) -> Result<(String, Value), Box<dyn Error>> {
    Ok(match out {
        Some(path) => {
            write_instance(g, path)?;
            ("instance_path", json!(path.display().to_string()))
        }
        None => ("instance", serde_json::to_value(g)?),
    })
    .map(|(k, v)| (k.to_string(), v))
}

fn density(input: &Path, subset: Option<&[usize]>) -> CmdResult {
    let g = read(input)?;
    if let Some(subset) = subset {
        let d = g.subset_density(subset)?;
        let mut t = Table::new(vec!["deleted_classes", "density"]);
        t.push(vec![format!("{subset:?}").into(), (&d).into()]);
        let result = json!({ "deleted_classes": subset, "density": rat_json(&d) });
        return Ok((Output { result, table: t }, Status::Ok));
    }
    let dv = g.density_vector()?;
    let mut t = Table::new(vec!["class", "rho"]);
    for (i, x) in dv.rho.iter().enumerate() {
        t.push(vec![i.into(), x.into()]);
    }
    let sum = dv.sum();
    let bound = dv.clique_lower_bound(g.r());
    t.push(vec!["sum".into(), (&sum).into()]);
    let result = json!({
        "r": g.r(),
        "rho": rats_json(&dv.rho),
        "sum": rat_json(&sum),
        "lower_bound": rat_json(&bound),
    });
    Ok((Output { result, table: t }, Status::Ok))
}

fn clique_output(g: &PartiteHypergraph, report: turan_core::clique::CliqueReport) -> Result<Output, Box<dyn Error>> {
    let bound = g.density_vector()?.clique_lower_bound(g.r());
    let slack = &report.clique_density - &bound;
    let mut pairs: Vec<(&str, Cell)> = vec![
        ("C", (&report.clique_density).into()),
        ("weighted_count", (&report.weighted_count).into()),
        ("transversals", report.transversals.into()),
        ("max_missing", report.max_missing.into()),
        ("lower_bound", (&bound).into()),
        ("slack", (&slack).into()),
    ];
    if let Some(ws) = &report.witnesses {
        for w in ws {
            pairs.push(("witness", fmt_vertices(w).into()));
        }
    }
    let mut result = serde_json::to_value(&report)?;
    result["lower_bound"] = rat_json(&bound);
    result["slack"] = rat_json(&slack);
    Ok(Output {
        result,
        table: Table::pairs(pairs),
    })
}

fn cliques(input: &Path, witnesses: usize) -> CmdResult {
    let g = read(input)?;
    let report = if witnesses > 0 {
        clique_density_with_witnesses(&g, witnesses)?
    } else {
        clique_density(&g)?
    };
    let out = clique_output(&g, report)?;
    Ok((out, Status::Ok))
}

fn near_cliques(input: &Path, k: usize, witnesses: usize) -> CmdResult {
    let g = read(input)?;
    let q = NearCliqueQuery::new(k, g.r())?;
    let report = count_near_cliques(&g, q, (witnesses > 0).then_some(witnesses))?;
    let out = clique_output(&g, report)?;
    Ok((out, Status::Ok))
}

fn construct(
    r: usize,
    rho: &[Rational],
    tolerance: &Rational,
    layout: Layout,
    out: Option<&Path>,
    recipe_out: Option<&Path>,
) -> CmdResult {
    let layout = match layout {
        Layout::Exact => BaseLayout::Exact,
        Layout::SixVertex => BaseLayout::SixVertex,
    };
    let (g, recipe) = build_extremal_with(r, rho, tolerance, layout)?;
    let c = clique_density(&g)?.clique_density;
    let bound = recipe.achieved_densities.clique_lower_bound(r);
    let slack = &c - &bound;

    let (key, instance) = place_instance(&g, out)?;
    let recipe_path: Option<PathBuf> = recipe_out.map(Path::to_path_buf).or_else(|| {
        out.map(|p| {
            let mut s = p.as_os_str().to_owned();
            s.push(".recipe.json");
            PathBuf::from(s)
        })
    });
    if let Some(path) = &recipe_path {
        fs::write(path, serde_json::to_string_pretty(&recipe)? + "\n")
            .map_err(|e| format!("cannot write {}: {e}", path.display()))?;
    }

    let mut t = Table::new(vec!["class", "target", "achieved", "size"]);
    for (i, target) in rho.iter().enumerate() {
        t.push(vec![
            i.into(),
            target.into(),
            (&recipe.achieved_densities.rho[i]).into(),
            g.class_size(i).into(),
        ]);
    }
    t.push(vec!["C".into(), (&bound).into(), (&c).into(), "".into()]);
    let mut result = json!({
        "C": rat_json(&c),
        "lower_bound": rat_json(&bound),
        "slack": rat_json(&slack),
        "class_sizes": g.class_sizes(),
        "edges": g.num_edges(),
        "recipe_path": recipe_path.map(|p| p.display().to_string()),
        "recipe": serde_json::to_value(&recipe)?,
    });
    result[key] = instance;
    let status = if slack == Rational::from_integer(0.into()) {
        Status::Ok
    } else {
        Status::TheoremViolation(format!("construction has slack {}", format_rational(&slack)))
    };
    Ok((Output { result, table: t }, status))
}

fn lift(input: &Path, out: Option<&Path>) -> CmdResult {
    let text = fs::read_to_string(input).map_err(|e| format!("cannot read {}: {e}", input.display()))?;
    let plain: PlainHypergraph =
        serde_json::from_str(&text).map_err(|e| format!("{}: malformed r-graph: {e}", input.display()))?;
    let h = decaen_lift(&plain)?;
    let balanced = is_strictly_balanced(&h, plain.r - 1)?.balanced;
    let rho = plain.lift_density();
    let (key, instance) = place_instance(&h, out)?;
    let table = Table::pairs(vec![
        ("r", plain.r.into()),
        ("classes", (plain.r + 1).into()),
        ("class_size", plain.n.into()),
        ("edges", h.num_edges().into()),
        ("rho", (&rho).into()),
        ("strictly_balanced", balanced.into()),
    ]);
    let mut result = json!({
        "r": plain.r,
        "edges": h.num_edges(),
        "rho": rat_json(&rho),
        "strictly_balanced": balanced,
    });
    result[key] = instance;
    let status = if balanced {
        Status::Ok
    } else {
        Status::TheoremViolation("lift is not strictly balanced".into())
    };
    Ok((Output { result, table }, status))
}

fn blowup(input: &Path, scale: Option<u64>, per_class: Option<Vec<u64>>, mode: BlowMode, out: Option<&Path>) -> CmdResult {
    let g = read(input)?;
    let mode = match mode {
        BlowMode::Raw => WeightMode::Raw,
        BlowMode::Normalized => WeightMode::Normalized,
    };
    let scale = match (scale, per_class) {
        (Some(s), _) => BlowUpScale::Global(s),
        (None, Some(v)) => BlowUpScale::PerClass(v),
        (None, None) if mode == WeightMode::Raw => minimal_scale(&g, false),
        (None, None) => BlowUpScale::Global(1),
    };
    let h = blow_up(&g, &scale, mode)?;
    let (key, instance) = place_instance(&h, out)?;
    let table = Table::pairs(vec![
        ("scale", serde_json::to_string(&scale)?.into()),
        ("class_sizes", format!("{:?}", h.class_sizes()).into()),
        ("edges", h.num_edges().into()),
    ]);
    let mut result = json!({
        "scale": scale,
        "class_sizes": h.class_sizes(),
        "edges": h.num_edges(),
    });
    result[key] = instance;
    Ok((Output { result, table }, Status::Ok))
}

fn balance(input: &Path, tuple_size: usize) -> CmdResult {
    let g = read(input)?;
    let verdict = is_strictly_balanced(&g, tuple_size)?;
    let codegrees = codegree_profile(&g);
    let mut pairs: Vec<(&str, Cell)> = vec![("balanced", verdict.balanced.into())];
    if let Some(p) = &verdict.violating_tuple {
        pairs.push(("violating_tuple", fmt_vertices(p.tuple.vertices()).into()));
        for s in &p.degrees_by_class_subset {
            pairs.push(("degree", format!("{:?}: {}", s.classes, s.degree).into()));
        }
    }
    pairs.extend([
        ("codegree_tuples", codegrees.tuples.into()),
        ("codegree_min", codegrees.min.into()),
        ("codegree_max", codegrees.max.into()),
        ("codegree_mean", (&codegrees.mean).into()),
    ]);
    let result = json!({ "balance": verdict, "codegrees": codegrees });
    Ok((
        Output {
            result,
            table: Table::pairs(pairs),
        },
        Status::Ok,
    ))
}

fn threshold(input: &Path, k: usize, all_classes: bool) -> CmdResult {
    let g = read(input)?;
    let cert = threshold_check_with(&g, k, all_classes)?;
    let table = Table::pairs(vec![
        ("k", cert.k.into()),
        ("j_star", cert.j_star.into()),
        ("max_sum", (&cert.max_sum).into()),
        ("margin", (&cert.margin).into()),
        ("balanced", cert.balanced.into()),
        ("hypothesis_holds", cert.hypothesis_holds.into()),
        (
            "max_edge_sum",
            cert.max_edge_sum.as_ref().map(Cell::from).unwrap_or_else(|| "-".into()),
        ),
        (
            "witness",
            cert.witness.as_deref().map(fmt_vertices).unwrap_or_else(|| "-".into()).into(),
        ),
        ("theorem_violation", cert.theorem_violation.into()),
    ]);
    let status = if cert.theorem_violation {
        Status::TheoremViolation(format!(
            "margin {} > 0 on a balanced instance but no witness",
            format_rational(&cert.margin)
        ))
    } else {
        Status::Ok
    };
    let result = serde_json::to_value(&cert)?;
    Ok((Output { result, table }, status))
}

fn verify_bound(args: &VerifyArgs, jobs: usize) -> CmdResult {
    let mode = match args.mode {
        ScanMode::Exhaustive => SearchMode::Exhaustive,
        ScanMode::Random => SearchMode::Random {
            seed: args.seed,
            trials: args.trials,
        },
        ScanMode::Constrained => SearchMode::Constrained {
            targets: args
                .targets
                .clone()
                .ok_or("constrained mode needs --targets")?,
        },
    };
    let mut space = SearchSpace::new(args.r, args.sizes.clone(), mode);
    space.budget = args.budget;
    space.jobs = jobs;
    space.max_denominator = args.max_denominator;
    space.edge_probability = args.edge_probability;
    space.weights = match args.weights {
        Weights::Unit => WeightScheme::Unit,
        Weights::Weighted => WeightScheme::Weighted,
        Weights::Mixed => WeightScheme::Mixed,
    };
    let report = match args.mode {
        ScanMode::Random => random_bound_scan(&space)?,
        _ => exhaustive_bound_scan(&space)?,
    };
    let table = Table::pairs(vec![
        ("instances_checked", report.instances_checked.into()),
        (
            "min_slack",
            report.min_slack.as_ref().map(Cell::from).unwrap_or_else(|| "-".into()),
        ),
        (
            "argmin_index",
            report.argmin_index.map(|i| i.to_string()).unwrap_or_else(|| "-".into()).into(),
        ),
        ("tight_instances", report.tight_instances.into()),
        ("violations", report.violations.len().into()),
        ("cross_validation_mismatches", report.cross_validation_mismatches.len().into()),
    ]);
    let status = if report.is_clean() {
        Status::Ok
    } else {
        Status::TheoremViolation(format!(
            "{} violations, {} oracle mismatches",
            report.violations.len(),
            report.cross_validation_mismatches.len()
        ))
    };
    let result = serde_json::to_value(&report)?;
    Ok((Output { result, table }, status))
}

fn tightness(r: usize, grid: &[Vec<Rational>]) -> CmdResult {
    let rows = tightness_probe(r, grid)?;
    let mut t = Table::new(vec!["rho", "C", "lower_bound", "slack", "vertices", "note"]);
    let opt = |x: &Option<Rational>| x.as_ref().map(Cell::from).unwrap_or_else(|| "-".into());
    for row in &rows {
        let rho: Vec<String> = row.rho.iter().map(format_rational).collect();
        t.push(vec![
            rho.join(",").into(),
            opt(&row.clique_density),
            opt(&row.lower_bound),
            opt(&row.slack),
            row.vertices.map(|v| v.to_string()).unwrap_or_else(|| "-".into()).into(),
            row.note.clone().unwrap_or_default().into(),
        ]);
    }
    let loose = rows.iter().filter(|r| r.slack.is_some() && !r.is_tight()).count();
    let status = if loose == 0 {
        Status::Ok
    } else {
        Status::TheoremViolation(format!("{loose} constructed points have nonzero slack"))
    };
    let result = serde_json::to_value(&rows)?;
    Ok((Output { result, table: t }, status))
}

fn pos_region(a: &Rational, b: &Rational, c: &Rational) -> CmdResult {
    let v = check_pos_region(a, b, c)?;
    let table = Table::pairs(vec![
        ("delta", (&v.delta).into()),
        ("sum", (&v.sum).into()),
        ("delta_nonnegative", v.delta_nonnegative.into()),
        ("ab+c>1", v.ab_plus_c.into()),
        ("ac+b>1", v.ac_plus_b.into()),
        ("bc+a>1", v.bc_plus_a.into()),
        ("in_region", v.in_region.into()),
        ("sum>=9/4", v.sum_at_least_nine_quarters.into()),
    ]);
    let result = serde_json::to_value(&v)?;
    Ok((Output { result, table }, Status::Ok))
}
