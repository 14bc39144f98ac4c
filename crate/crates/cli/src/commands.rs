//! Subcommand implementations. Each returns the tables it would print so
//! that the binary and the tests share one code path.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};

use cubifs::{
    build_profiles, fit_items, load_csv, run_pipeline, CubParams, FuzzyProfile, ItemFit, PiSource,
    PipelineRun, RatingMatrix, Variant, WeightMode,
};

use crate::config::{parse_item_params, RunConfig, SimulateArgs};
use crate::error::{CliError, CliResult};
use crate::table::{render, Cell, Table};

/// Tables to print, warnings for stderr, and an error to exit with after
/// printing (used when some items fail but the rest are still reported).
#[derive(Debug, Default)]
pub struct Outcome {
    pub tables: Vec<Table>,
    pub warnings: Vec<String>,
    pub failure: Option<CliError>,
}

fn variant_label(v: Variant) -> &'static str {
    match v {
        Variant::Zani => "zani",
        Variant::CubIfs => "cub",
    }
}

fn mode_label(m: WeightMode) -> &'static str {
    match m {
        WeightMode::MembershipProportions => "mu",
        WeightMode::UncertaintyProportions => "u",
    }
}

fn system_label(run: &PipelineRun) -> String {
    format!("{}/{}", variant_label(run.variant), mode_label(run.mode))
}

fn category_columns(m: usize) -> impl Iterator<Item = String> {
    (1..=m).map(|r| format!("R={r}"))
}

pub fn load(cfg: &RunConfig, path: &Path, warnings: &mut Vec<String>) -> CliResult<RatingMatrix> {
    let loaded = load_csv(path, &cfg.scale, &cfg.load)?;
    let rep = &loaded.report;
    for issue in &rep.issues {
        let action = if rep.coerced_cells > 0 {
            "treated as missing"
        } else {
            "row rejected"
        };
        warnings.push(format!(
            "line {}, item `{}`: rating {} outside 1..={} ({action})",
            issue.line,
            issue.item,
            issue.value,
            cfg.scale.categories()
        ));
    }
    if rep.rejected_rows > 0 {
        warnings.push(format!(
            "{} of {} rows rejected; {} accepted",
            rep.rejected_rows, rep.total_rows, rep.accepted_rows
        ));
    }
    Ok(loaded.matrix)
}

pub fn params_table(fits: &[ItemFit]) -> Table {
    let cols = [
        "item",
        "n",
        "pi",
        "xi",
        "1-pi",
        "1-xi",
        "loglik",
        "iterations",
        "converged",
    ];
    let mut t = Table::new(
        "cub_params",
        "CUB parameter estimates",
        cols.iter().map(|s| s.to_string()).collect(),
    );
    for f in fits {
        let mut row: Vec<Cell> = vec![f.item.as_str().into(), f.n.into()];
        match &f.result {
            Ok(r) => row.extend([
                r.params.pi.into(),
                r.params.xi.into(),
                r.params.uncertainty_share().into(),
                r.params.feeling().into(),
                r.loglik.into(),
                r.iterations.into(),
                r.converged.into(),
            ]),
            Err(_) => row.extend(std::iter::repeat_n(Cell::Missing, 7)),
        }
        t.push(row);
    }
    t
}

fn fit_warnings(fits: &[ItemFit], warnings: &mut Vec<String>) {
    for f in fits {
        match &f.result {
            Ok(r) if !r.converged => warnings.push(format!(
                "item `{}`: EM stopped after {} iterations without converging",
                f.item, r.iterations
            )),
            Ok(_) => {}
            Err(e) => warnings.push(format!("fit failed: {e}")),
        }
    }
}

/// Fits only the items that still need a fitted pi.
fn pi_source(
    cfg: &RunConfig,
    matrix: &RatingMatrix,
    warnings: &mut Vec<String>,
) -> CliResult<PiSource> {
    for item in cfg.pi_overrides.keys() {
        if matrix.item_index(item).is_none() {
            return Err(CliError::usage(format!(
                "--pi-override names unknown item `{item}`"
            )));
        }
    }
    let needs_fit = matrix
        .items()
        .iter()
        .any(|i| !cfg.pi_overrides.contains_key(i));
    let mut pis = if needs_fit {
        let fits = fit_items(matrix, &cfg.em);
        fit_warnings(&fits, warnings);
        PiSource::from_fits(&fits)
    } else {
        PiSource::default()
    };
    pis.overrides = cfg.pi_overrides.clone();
    Ok(pis)
}

fn profile_warnings(profiles: &[FuzzyProfile], warnings: &mut Vec<String>) {
    for p in profiles {
        if p.flat_membership {
            warnings.push(format!(
                "item `{}`: no mass between the indifference point and u_b; membership flattened",
                p.item_id
            ));
        }
        if p.flat_nonmembership {
            warnings.push(format!(
                "item `{}`: no mass between category 1 and l_b; non-membership flattened",
                p.item_id
            ));
        }
    }
}

fn degree_table(
    name: &str,
    title: &str,
    m: usize,
    sets: &[&[FuzzyProfile]],
    pick: fn(&FuzzyProfile) -> &[f64],
) -> Table {
    let cols = ["item".to_string(), "variant".to_string()]
        .into_iter()
        .chain(category_columns(m))
        .collect();
    let mut t = Table::new(name, title, cols);
    let k = sets.first().map_or(0, |s| s.len());
    for i in 0..k {
        for set in sets {
            let p = &set[i];
            let mut row: Vec<Cell> =
                vec![p.item_id.as_str().into(), variant_label(p.variant).into()];
            row.extend(pick(p).iter().map(|&v| Cell::Num(v)));
            t.push(row);
        }
    }
    t
}

/// Membership, non-membership and uncertainty tables, item rows grouped.
pub fn profile_tables(m: usize, sets: &[&[FuzzyProfile]]) -> Vec<Table> {
    vec![
        degree_table("membership", "Membership functions", m, sets, |p| &p.mu),
        degree_table("nonmembership", "Non-membership functions", m, sets, |p| {
            &p.nu
        }),
        degree_table("uncertainty", "Fuzzy uncertainty functions", m, sets, |p| {
            &p.u
        }),
    ]
}

pub fn weights_table(items: &[String], runs: &[PipelineRun], pis: Option<&PiSource>) -> Table {
    let cols = std::iter::once("system".to_string())
        .chain(items.iter().cloned())
        .collect();
    let mut t = Table::new(
        "weights",
        "Item weights from logged inverse fuzzy proportions",
        cols,
    );
    for run in runs {
        let mut row: Vec<Cell> = vec![system_label(run).into()];
        row.extend(
            run.aggregation
                .weights
                .weights
                .iter()
                .map(|&w| Cell::Num(w)),
        );
        t.push(row);
    }
    if let Some(pis) = pis {
        let mut row: Vec<Cell> = vec!["1-pi".into()];
        row.extend(
            items
                .iter()
                .map(|i| pis.get(i).map_or(Cell::Missing, |p| Cell::Num(1.0 - p))),
        );
        t.push(row);
    }
    t
}

pub fn scores_table(runs: &[PipelineRun]) -> Table {
    let cols = [
        "system",
        "mu_bar",
        "nu_bar",
        "u_bar",
        "respondents",
        "dropped_rows",
    ];
    let mut t = Table::new(
        "scores",
        "Membership, non-membership and uncertainty scores",
        cols.iter().map(|s| s.to_string()).collect(),
    );
    for run in runs {
        let a = &run.aggregation;
        t.push(vec![
            system_label(run).into(),
            a.scores.mu_bar.into(),
            a.scores.nu_bar.into(),
            a.scores.u_bar.into(),
            a.respondents.into(),
            a.dropped_rows.into(),
        ]);
    }
    t
}

/// Per-category series of every profile of one item, for plotting.
pub fn profile_series(item: &str, profiles: &[&FuzzyProfile]) -> Table {
    let mut cols = vec!["category".to_string()];
    for p in profiles {
        let v = variant_label(p.variant);
        cols.extend([format!("{v}_mu"), format!("{v}_nu"), format!("{v}_u")]);
    }
    let mut t = Table::new(
        &format!("profile:{item}"),
        &format!("Fuzzy profile of item {item}"),
        cols,
    );
    let m = profiles.first().map_or(0, |p| p.categories());
    for r in 0..m {
        let mut row: Vec<Cell> = vec![(r + 1).into()];
        for p in profiles {
            row.extend([Cell::Num(p.mu[r]), Cell::Num(p.nu[r]), Cell::Num(p.u[r])]);
        }
        t.push(row);
    }
    t
}

fn agg_warnings(runs: &[PipelineRun], items: &[String], warnings: &mut Vec<String>) {
    for run in runs {
        for c in &run.aggregation.clamped {
            warnings.push(format!(
                "{}: fuzzy proportion of `{}` is {} and was clamped to {}",
                system_label(run),
                items[c.index],
                c.original,
                c.clamped
            ));
        }
    }
    if let Some(run) = runs.first() {
        if run.aggregation.dropped_rows > 0 {
            warnings.push(format!(
                "{} respondents with missing ratings left out of aggregation",
                run.aggregation.dropped_rows
            ));
        }
    }
}

fn run_pipelines(
    cfg: &RunConfig,
    matrix: &RatingMatrix,
    pis: &PiSource,
    warnings: &mut Vec<String>,
) -> CliResult<Vec<PipelineRun>> {
    let runs = cfg
        .pipelines()
        .into_iter()
        .map(|(variant, mode)| {
            run_pipeline(matrix, variant, mode, pis, cfg.zero_mass, &cfg.aggregate)
        })
        .collect::<cubifs::Result<Vec<_>>>()?;
    for run in &runs {
        profile_warnings(&run.profiles, warnings);
    }
    agg_warnings(&runs, matrix.items(), warnings);
    Ok(runs)
}

pub fn cmd_fit(cfg: &RunConfig, csv: &Path) -> CliResult<Outcome> {
    let mut out = Outcome::default();
    let matrix = load(cfg, csv, &mut out.warnings)?;
    let fits = fit_items(&matrix, &cfg.em);
    fit_warnings(&fits, &mut out.warnings);
    let failed: Vec<&str> = fits
        .iter()
        .filter(|f| f.result.is_err())
        .map(|f| f.item.as_str())
        .collect();
    if !failed.is_empty() {
        out.failure = Some(CliError::numerical(format!(
            "fit failed for {}",
            failed.join(", ")
        )));
    }
    out.tables.push(params_table(&fits));
    Ok(out)
}

pub fn cmd_fuzzify(cfg: &RunConfig, csv: &Path) -> CliResult<Outcome> {
    let mut out = Outcome::default();
    let matrix = load(cfg, csv, &mut out.warnings)?;
    let variants: Vec<Variant> = cfg.pipelines().into_iter().map(|(v, _)| v).collect();
    let pis = if variants.contains(&Variant::CubIfs) {
        pi_source(cfg, &matrix, &mut out.warnings)?
    } else {
        PiSource::default()
    };
    let sets = variants
        .iter()
        .map(|&v| build_profiles(&matrix, v, &pis, cfg.zero_mass))
        .collect::<cubifs::Result<Vec<_>>>()?;
    for set in &sets {
        profile_warnings(set, &mut out.warnings);
    }
    let refs: Vec<&[FuzzyProfile]> = sets.iter().map(Vec::as_slice).collect();
    out.tables = profile_tables(cfg.scale.len(), &refs);
    Ok(out)
}

fn weighted(
    cfg: &RunConfig,
    csv: &Path,
    out: &mut Outcome,
) -> CliResult<(RatingMatrix, PiSource, Vec<PipelineRun>)> {
    let matrix = load(cfg, csv, &mut out.warnings)?;
    let needs_pi = cfg.pipelines().iter().any(|(v, _)| *v == Variant::CubIfs);
    let pis = if needs_pi {
        pi_source(cfg, &matrix, &mut out.warnings)?
    } else {
        PiSource::default()
    };
    let runs = run_pipelines(cfg, &matrix, &pis, &mut out.warnings)?;
    Ok((matrix, pis, runs))
}

pub fn cmd_weights(cfg: &RunConfig, csv: &Path) -> CliResult<Outcome> {
    let mut out = Outcome::default();
    let (matrix, pis, runs) = weighted(cfg, csv, &mut out)?;
    let has_cub = runs.iter().any(|r| r.variant == Variant::CubIfs);
    out.tables.push(weights_table(
        matrix.items(),
        &runs,
        has_cub.then_some(&pis),
    ));
    Ok(out)
}

pub fn cmd_scores(cfg: &RunConfig, csv: &Path) -> CliResult<Outcome> {
    let mut out = Outcome::default();
    let (matrix, pis, runs) = weighted(cfg, csv, &mut out)?;
    let has_cub = runs.iter().any(|r| r.variant == Variant::CubIfs);
    out.tables.push(weights_table(
        matrix.items(),
        &runs,
        has_cub.then_some(&pis),
    ));
    out.tables.push(scores_table(&runs));
    Ok(out)
}

/// Synthetic rating matrix as CSV text. Item `k` draws from stream `k` of the seed.
pub fn cmd_simulate(cfg: &RunConfig, args: &SimulateArgs) -> CliResult<String> {
    if args.n == 0 {
        return Err(CliError::usage("--n must be at least 1"));
    }
    let mut items = Vec::new();
    let mut columns = Vec::new();
    let mut seen = BTreeSet::new();
    for (k, raw) in args.params.iter().enumerate() {
        let (name, pi, xi) = parse_item_params(raw)?;
        if !seen.insert(name.clone()) {
            return Err(CliError::usage(format!("item `{name}` given twice")));
        }
        let params =
            CubParams::new(pi, xi).map_err(|e| CliError::usage(format!("item `{name}`: {e}")))?;
        columns.push(cubifs::cub::sample_stream(
            &cfg.scale, params, args.n, cfg.seed, k as u64,
        )?);
        items.push(name);
    }
    let matrix = RatingMatrix::from_columns(items, &columns, cfg.scale)?;
    let mut buf = Vec::new();
    matrix.write_csv(&mut buf, &cfg.load.missing_token)?;
    Ok(String::from_utf8(buf).expect("CSV of integers is UTF-8"))
}

fn file_stem(item: &str) -> String {
    item.chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '-' || c == '_' {
                c
            } else {
                '_'
            }
        })
        .collect()
}

/// Writes the six tables and one profile series per item. Returns the
/// written paths in order.
pub fn cmd_report(
    cfg: &RunConfig,
    csv: &Path,
    out_dir: &Path,
) -> CliResult<(Vec<PathBuf>, Vec<String>)> {
    let mut warnings = Vec::new();
    let matrix = load(cfg, csv, &mut warnings)?;
    let fits = fit_items(&matrix, &cfg.em);
    fit_warnings(&fits, &mut warnings);
    let mut pis = PiSource::from_fits(&fits);
    for item in cfg.pi_overrides.keys() {
        if matrix.item_index(item).is_none() {
            return Err(CliError::usage(format!(
                "--pi-override names unknown item `{item}`"
            )));
        }
    }
    pis.overrides = cfg.pi_overrides.clone();

    let compare = RunConfig {
        compare: true,
        ..cfg.clone()
    };
    let runs = run_pipelines(&compare, &matrix, &pis, &mut warnings)?;
    let (zani, cub) = (&runs[0], &runs[1]);

    let m = cfg.scale.len();
    let mut tables = vec![params_table(&fits)];
    let [mu, _, _] = <[Table; 3]>::try_from(profile_tables(m, &[&zani.profiles, &cub.profiles]))
        .expect("three tables");
    let [_, nu, u] =
        <[Table; 3]>::try_from(profile_tables(m, &[&cub.profiles])).expect("three tables");
    tables.extend([mu, nu, u]);
    tables.push(weights_table(matrix.items(), &runs, Some(&pis)));
    tables.push(scores_table(&runs));

    fs::create_dir_all(out_dir)?;
    let ext = cfg.format.extension();
    let mut written = Vec::new();
    for (i, t) in tables.iter().enumerate() {
        let path = out_dir.join(format!("table{}_{}.{ext}", i + 1, t.name));
        fs::write(
            &path,
            render(std::slice::from_ref(t), cfg.format, cfg.digits),
        )?;
        written.push(path);
    }
    let mut stems = BTreeSet::new();
    for (k, item) in matrix.items().iter().enumerate() {
        let mut stem = file_stem(item);
        if !stems.insert(stem.clone()) {
            stem = format!("{stem}_{k}");
            stems.insert(stem.clone());
        }
        let series = profile_series(item, &[&zani.profiles[k], &cub.profiles[k]]);
        let path = out_dir.join(format!("profile_{stem}.{ext}"));
        fs::write(
            &path,
            render(std::slice::from_ref(&series), cfg.format, cfg.digits),
        )?;
        written.push(path);
    }
    Ok((written, warnings))
}
