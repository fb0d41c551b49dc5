//! `mixer`: command-line front end for the group mixing experiments.

mod golden;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use mixer_core::characters::{
    table::SCHEMA_VERSION, verify_orthogonality, witten_zeta, zeta_trend,
};
use mixer_core::groups::{GroupSpec, GroupTable};
use mixer_core::interleave::{
    advantage, deviation_report, exact_advantage, exact_distribution, mc_distribution,
    RectangleProtocol, TupleSet, DEFAULT_INTERLEAVE_BUDGET,
};
use mixer_core::mixing::{
    char_bound_fraction, coverage, coverage_exact, dist_to_uniform, l2_sq, normalized_norm,
    p_brute_with, p_char, survey, thompson_search, Coupling, SurveyOptions, DEFAULT_LOOP_BUDGET,
};
use mixer_core::{exec, Error, Execution, GroupData, Result};

/// Exit status when a golden comparison finds drift.
const EXIT_DRIFT: u8 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "mixer",
    version,
    about = "Character tables and mixing experiments for finite groups"
)]
struct Cli {
    /// Group: A:<n>, S:<n>, SL2:<q>, PSL2:<q>, permgen:<file>, matgen:<file>,q=<q>.
    #[arg(long, global = true)]
    group: Option<String>,
    /// Seed for every random stream (required).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads; 0 uses all cores, 1 runs sequentially.
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    /// Write the report into this directory instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report as a golden file, or compare against one.
    #[arg(long, global = true, value_enum)]
    golden: Option<GoldenMode>,
    #[arg(long, global = true, default_value = "golden")]
    golden_dir: PathBuf,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum GoldenMode {
    Write,
    Compare,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Classes, character table and orthogonality residuals.
    Chartable,
    /// Witten zeta values; with --family, the normalized trend over groups.
    Zeta {
        #[arg(long, value_delimiter = ',', default_value = "2")]
        s: Vec<f64>,
        /// Comma-separated group specs.
        #[arg(long, value_delimiter = ',')]
        family: Vec<String>,
    },
    /// The distribution of x'y' for x' in x^G, y' in y^G.
    Mixpair {
        /// Class index or an element of the class.
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
    },
    /// Coupling-weighted survey of N = |G| ||p_{x,y}||^2.
    Survey {
        /// independent | diagonal | transinv:<element> | bijfile:<path>
        #[arg(long, default_value = "independent")]
        coupling: String,
        #[arg(long, value_delimiter = ',', default_value = "0.01,0.1,0.5,1,inf")]
        thresholds: Vec<f64>,
    },
    /// Classes whose square covers the group.
    Thompson,
    /// Fraction of elements with |chi(x)| <= chi(1)^(s/2) for all chi.
    Charbound {
        #[arg(long, default_value_t = 1.0)]
        s: f64,
    },
    /// Distribution of a_1 b_1 ... a_t b_t over seeded subsets of G^t.
    Interleave {
        #[arg(long)]
        t: usize,
        #[arg(long)]
        alpha: f64,
        /// Density of B; defaults to alpha.
        #[arg(long)]
        beta: Option<f64>,
        /// Exact enumeration (the default unless --mc is given).
        #[arg(long, conflicts_with = "mc")]
        exact: bool,
        /// Monte Carlo with this many samples.
        #[arg(long)]
        mc: Option<u64>,
    },
    /// Distinguishing advantage of a rectangle protocol between g and h.
    Advantage {
        /// Lines `bit,<Afile>,<Bfile>`.
        #[arg(long)]
        protocol: PathBuf,
        #[arg(long)]
        g: String,
        #[arg(long)]
        h: String,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        /// Also compute the exact conditional probabilities.
        #[arg(long)]
        exact: bool,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Chartable => "chartable",
            Command::Zeta { .. } => "zeta",
            Command::Mixpair { .. } => "mixpair",
            Command::Survey { .. } => "survey",
            Command::Thompson => "thompson",
            Command::Charbound { .. } => "charbound",
            Command::Interleave { .. } => "interleave",
            Command::Advantage { .. } => "advantage",
        }
    }
}

/// A finished report: JSON always, CSV where the command has rows.
struct Report {
    json: Value,
    csv: Option<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code() as u8)
        }
    }
}

fn run(cli: &Cli) -> Result<ExitCode> {
    let seed = cli
        .seed
        .ok_or_else(|| Error::InvalidArgument("--seed is required".into()))?;
    if cli.threads > 0 {
        exec::set_threads(cli.threads);
    }
    let exec = if cli.threads == 1 {
        Execution::Sequential
    } else {
        Execution::default()
    };
    let ctx = Ctx {
        group: cli.group.as_deref(),
        seed,
        exec,
        loop_budget: budget_from_env(DEFAULT_LOOP_BUDGET)?,
        interleave_budget: budget_from_env(DEFAULT_INTERLEAVE_BUDGET)?,
    };
    let mut report = dispatch(&cli.command, &ctx)?;
    let obj = report.json.as_object_mut().expect("reports are objects");
    obj.insert("schema_version".into(), SCHEMA_VERSION.into());
    obj.insert("command".into(), cli.command.name().into());
    obj.insert("seed".into(), seed.into());

    let spec_label = cli.group.clone().unwrap_or_else(|| "none".into());
    if let Some(mode) = cli.golden {
        let path = golden::path(&cli.golden_dir, cli.command.name(), &spec_label, seed);
        match mode {
            GoldenMode::Write => golden::write(&path, &report.json)?,
            GoldenMode::Compare => {
                let drift = golden::compare(&path, &report.json)?;
                if !drift.is_empty() {
                    for d in &drift {
                        eprintln!("drift: {d}");
                    }
                    eprintln!("{} value(s) drifted from {}", drift.len(), path.display());
                    return Ok(ExitCode::from(EXIT_DRIFT));
                }
                eprintln!("golden match: {}", path.display());
            }
        }
    }
    emit(cli, &report)?;
    Ok(ExitCode::SUCCESS)
}

fn emit(cli: &Cli, report: &Report) -> Result<()> {
    let text = match cli.format {
        Format::Json => golden::to_text(&report.json),
        Format::Csv => report.csv.clone().ok_or_else(|| {
            Error::InvalidArgument(format!("{} has no CSV output", cli.command.name()))
        })?,
    };
    match &cli.out {
        None => print!("{text}"),
        Some(dir) => {
            std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
            let ext = match cli.format {
                Format::Json => "json",
                Format::Csv => "csv",
            };
            let path = dir.join(format!("{}.{ext}", cli.command.name()));
            std::fs::write(&path, text).map_err(|e| Error::io(&path, e))?;
        }
    }
    Ok(())
}

fn budget_from_env(default: u128) -> Result<u128> {
    match std::env::var("MIXER_LOOP_BUDGET") {
        Ok(v) => v
            .trim()
            .parse::<f64>()
            .ok()
            .filter(|x| *x >= 0.0)
            .map(|x| x as u128)
            .ok_or_else(|| Error::InvalidArgument(format!("MIXER_LOOP_BUDGET={v}"))),
        Err(_) => Ok(default),
    }
}

struct Ctx<'a> {
    group: Option<&'a str>,
    seed: u64,
    exec: Execution,
    loop_budget: u128,
    interleave_budget: u128,
}

impl Ctx<'_> {
    fn spec(&self) -> Result<GroupSpec> {
        let g = self
            .group
            .ok_or_else(|| Error::InvalidArgument("--group is required".into()))?;
        GroupSpec::parse(g)
    }

    fn data(&self) -> Result<GroupData> {
        GroupData::build(&self.spec()?)
    }
}

fn dispatch(cmd: &Command, ctx: &Ctx) -> Result<Report> {
    match cmd {
        Command::Chartable => chartable(ctx),
        Command::Zeta { s, family } => zeta(ctx, s, family),
        Command::Mixpair { x, y } => mixpair(ctx, x, y),
        Command::Survey {
            coupling,
            thresholds,
        } => run_survey(ctx, coupling, thresholds),
        Command::Thompson => thompson(ctx),
        Command::Charbound { s } => charbound(ctx, *s),
        Command::Interleave {
            t,
            alpha,
            beta,
            exact: _,
            mc,
        } => interleave(ctx, *t, *alpha, beta.unwrap_or(*alpha), *mc),
        Command::Advantage {
            protocol,
            g,
            h,
            samples,
            exact,
        } => run_advantage(ctx, protocol, g, h, *samples, *exact),
    }
}

fn json_only(json: Value) -> Report {
    Report { json, csv: None }
}

fn classes_json(d: &GroupData) -> Value {
    let c = &d.classes;
    (0..c.count())
        .map(|k| {
            let rep = c.representatives[k];
            json!({
                "index": k,
                "representative": d.group.render(rep),
                "bytes": d.group.element(rep).hex(),
                "size": c.sizes[k],
                "element_order": c.element_orders[k],
                "centralizer_order": c.centralizer_orders[k],
            })
        })
        .collect()
}

fn chartable(ctx: &Ctx) -> Result<Report> {
    let d = ctx.data()?;
    let check = verify_orthogonality(&d.table, &d.classes);
    let mut json = d.table.to_json();
    json["classes"] = classes_json(&d);
    json["orthogonality"] = serde_json::to_value(check).unwrap();
    let mut csv = String::from("character,degree");
    for k in 0..d.classes.count() {
        csv.push_str(&format!(",class{k}"));
    }
    csv.push('\n');
    for (i, row) in d.table.values.iter().enumerate() {
        csv.push_str(&format!("{i},{}", d.table.degrees[i]));
        for z in row {
            csv.push_str(&format!(",{}", complex_text(z.re, z.im)));
        }
        csv.push('\n');
    }
    Ok(Report {
        json,
        csv: Some(csv),
    })
}

fn complex_text(re: f64, im: f64) -> String {
    let r = |x: f64| {
        let v = (x * 1e12).round() / 1e12;
        if v == 0.0 {
            0.0
        } else {
            v
        }
    };
    let (re, im) = (r(re), r(im));
    if im == 0.0 {
        format!("{re}")
    } else if im > 0.0 {
        format!("{re}+{im}i")
    } else {
        format!("{re}{im}i")
    }
}

fn zeta(ctx: &Ctx, s: &[f64], family: &[String]) -> Result<Report> {
    if family.is_empty() {
        let d = ctx.data()?;
        let values: Vec<Value> = s
            .iter()
            .map(|&s| json!({"s": s, "zeta": witten_zeta(&d.table, s)}))
            .collect();
        return Ok(json_only(json!({
            "group": d.group.label(),
            "degrees": d.table.degrees,
            "values": values,
        })));
    }
    let specs: Vec<GroupSpec> = family
        .iter()
        .map(|g| GroupSpec::parse(g))
        .collect::<Result<_>>()?;
    let mut csv = String::from("s,group,zeta,excess,normalizer,normalized_excess\n");
    let mut trend = Vec::new();
    for &sv in s {
        let rows = zeta_trend(&specs, sv)?;
        for r in &rows {
            csv.push_str(&format!(
                "{sv},{},{},{},{},{}\n",
                r.group, r.zeta, r.excess, r.normalizer, r.normalized_excess
            ));
        }
        trend.push(json!({"s": sv, "rows": rows}));
    }
    Ok(Report {
        json: json!({ "family": family, "trend": trend }),
        csv: Some(csv),
    })
}

/// A class index, or any element of the class.
fn class_arg(d: &GroupData, text: &str) -> Result<usize> {
    if let Ok(k) = text.trim().parse::<usize>() {
        if k < d.classes.count() {
            return Ok(k);
        }
        return Err(Error::InvalidClass(k));
    }
    let g = d.group.parse_element(text)?;
    Ok(d.classes.class_of(g))
}

fn mixpair(ctx: &Ctx, x: &str, y: &str) -> Result<Report> {
    let d = ctx.data()?;
    let (xc, yc) = (class_arg(&d, x)?, class_arg(&d, y)?);
    let pc = p_char(xc, yc, &d.table, &d.classes)?;
    let brute = match p_brute_with(xc, yc, &d.group, &d.classes, ctx.loop_budget, ctx.exec) {
        Ok(p) => Some(p),
        Err(Error::LoopBudgetExceeded { .. }) => None,
        Err(e) => return Err(e),
    };
    let best = brute.as_ref().unwrap_or(&pc);
    let cov = coverage(best);
    Ok(json_only(json!({
        "group": d.group.label(),
        "x_class": xc,
        "y_class": yc,
        "x": d.group.render(d.classes.representatives[xc]),
        "y": d.group.render(d.classes.representatives[yc]),
        "class_sizes": d.classes.sizes,
        "p_char": pc.values,
        "p_brute": brute.as_ref().map(|p| &p.values),
        "pair_counts": brute.as_ref().and_then(|p| p.exact_counts.clone()),
        "clamped": pc.clamped,
        "l2_sq": l2_sq(best),
        "N": normalized_norm(xc, yc, &d.table),
        "distances": dist_to_uniform(best),
        "coverage": cov,
        "coverage_exact": coverage_exact(xc, yc, &d.classes, &d.constants),
    })))
}

fn parse_coupling(d: &GroupData, text: &str) -> Result<Coupling> {
    match text {
        "independent" => Ok(Coupling::Independent),
        "diagonal" => Ok(Coupling::Diagonal),
        _ => {
            if let Some(e) = text.strip_prefix("transinv:") {
                Ok(Coupling::TranslatedInverse(d.group.parse_element(e)?))
            } else if let Some(p) = text.strip_prefix("bijfile:") {
                let path = Path::new(p);
                let body = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
                let table = body
                    .split(|c: char| c == ',' || c.is_whitespace())
                    .filter(|s| !s.is_empty())
                    .map(|s| {
                        s.parse::<u32>()
                            .map_err(|_| Error::InvalidCoupling(format!("bad entry `{s}`")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Coupling::bijection(table)
            } else {
                Err(Error::InvalidCoupling(format!("unknown coupling `{text}`")))
            }
        }
    }
}

fn run_survey(ctx: &Ctx, coupling: &str, thresholds: &[f64]) -> Result<Report> {
    let d = ctx.data()?;
    let c = parse_coupling(&d, coupling)?;
    let opts = SurveyOptions {
        thresholds: thresholds.to_vec(),
        seed: ctx.seed,
        exec: ctx.exec,
        ..SurveyOptions::default()
    };
    let rep = survey(&d, &c, &opts)?;
    Ok(Report {
        json: rep.summary_json(),
        csv: Some(rep.to_csv()),
    })
}

fn thompson(ctx: &Ctx) -> Result<Report> {
    let d = ctx.data()?;
    let r = thompson_search(&d.classes, &d.constants);
    let mut json = serde_json::to_value(&r).unwrap();
    json["group"] = d.group.label().into();
    json["best_representative"] = d
        .group
        .render(d.classes.representatives[r.best_class])
        .into();
    Ok(json_only(json))
}

fn charbound(ctx: &Ctx, s: f64) -> Result<Report> {
    let d = ctx.data()?;
    let r = char_bound_fraction(&d.classes, &d.table, s)?;
    let mut json = serde_json::to_value(r).unwrap();
    json["group"] = d.group.label().into();
    Ok(json_only(json))
}

fn interleave(ctx: &Ctx, t: usize, alpha: f64, beta: f64, mc: Option<u64>) -> Result<Report> {
    let spec = ctx.spec()?;
    let g = mixer_core::groups::group_build(&spec)?;
    let order = g.order() as u32;
    let a = TupleSet::seeded(order, t, alpha, ctx.seed)?;
    let b = TupleSet::seeded(order, t, beta, ctx.seed.wrapping_add(1))?;
    let e = match mc {
        Some(n) => mc_distribution(&g, &a, &b, n, ctx.seed, ctx.exec)?,
        None => exact_distribution(&g, &a, &b, ctx.interleave_budget, ctx.exec)?,
    };
    let mut json = e.to_json(&g);
    json["deviation"] = serde_json::to_value(deviation_report(&e, spec.family())).unwrap();
    Ok(json_only(json))
}

fn run_advantage(
    ctx: &Ctx,
    protocol: &Path,
    x: &str,
    y: &str,
    samples: u64,
    exact: bool,
) -> Result<Report> {
    let spec = ctx.spec()?;
    let g: GroupTable = mixer_core::groups::group_build(&spec)?;
    let (p, named) = RectangleProtocol::read(protocol, g.order() as u32)?;
    if !named.is_empty() && named != spec.label {
        return Err(Error::InvalidProtocol(format!(
            "protocol files name group {named}, run is on {}",
            spec.label
        )));
    }
    let (gx, gy) = (g.parse_element(x)?, g.parse_element(y)?);
    let est = advantage(&p, &g, gx, gy, samples, ctx.seed, ctx.exec)?;
    let mut json = serde_json::to_value(&est).unwrap();
    json["group"] = spec.label.clone().into();
    json["g"] = g.element(gx).hex().into();
    json["h"] = g.element(gy).hex().into();
    json["rectangles"] = p.rectangles().len().into();
    if exact {
        let ex = exact_advantage(&p, &g, gx, gy, ctx.interleave_budget, ctx.exec)?;
        json["exact"] = serde_json::to_value(ex).unwrap();
    }
    Ok(json_only(json))
}
