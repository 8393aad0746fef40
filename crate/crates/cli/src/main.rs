//! Command-line surface: generation, incidence statistics, dependency
//! matrices, scaling reports, and statement verification as reproducible
//! runs.
//!
//! Exit codes: 0 pass/vacuous, 1 genuine fail, 2 inapplicable, 3 usage or
//! parse error, 4 budget-exhausted unknown / non-convergence.

mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num::{BigInt, BigRational};
use serde_json::{json, Value};

use olines::configgen::{self, AnyConfig, ConfigRecipe};
use olines::depmat::{full_dep_matrix, Construction, DepError};
use olines::scalerank::{
    cancellation_functionals_f64, l2_scale, property_s, rank_lower_bound_f64, PropertySVerdict,
    ScaleError, ZeroPattern, DEFAULT_MAX_ITERS,
};
use olines::verify::{
    check_3n2, check_dichotomy, check_higherdim, check_hirzebruch, check_kelly, check_main,
    check_melchior, check_propS_bound, check_removal_lemma, run_prune, PruneFloor, VerdictReport,
};
use olines::with_config;

use report::{fmt_f64, parse_dump_to_complex, resolve_input, RunManifest};

#[derive(Parser)]
#[command(
    name = "olines",
    about = "Exact incidence geometry: ordinary lines, dependency matrices, scaling and rank bounds",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Seed for all randomized constructions.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Scaling slack ε.
    #[arg(long, global = true, default_value_t = 1e-6)]
    epsilon: f64,

    /// Thread cap for internal parallelism.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Exhaustive column budget for the zero-submatrix search.
    #[arg(long = "budget-cols", global = true, default_value_t = 24)]
    budget_cols: usize,

    /// Squares-bound constant c0 (rational, e.g. 1/150).
    #[arg(long, global = true, default_value = "1/150")]
    c0: String,

    /// Refined-bound constant c1 (rational, e.g. 1/1200).
    #[arg(long, global = true, default_value = "1/1200")]
    c1: String,

    /// Retry budget for certified line matrices.
    #[arg(long, global = true, default_value_t = 64)]
    retries: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a configuration file.
    Gen {
        #[command(subcommand)]
        recipe: GenRecipe,
    },
    /// Print the t_r profile of a configuration.
    Stats { config: String },
    /// Build a dependency matrix; dump it and summarize certification.
    Depmat {
        config: String,
        #[arg(long, value_enum, default_value_t = ConstructionArg::V1)]
        construction: ConstructionArg,
        /// Write the matrix dump here (stdout otherwise).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// ℓ2-scale a dumped matrix and report bounds.
    Scale { matrix: String },
    /// Check a statement on a configuration.
    Verify {
        statement: Statement,
        config: String,
        /// Dichotomy split parameter b*.
        #[arg(long)]
        bstar: Option<i64>,
        /// Point index for the removal check.
        #[arg(long)]
        point: Option<usize>,
        /// Subspace floor for the pruning run.
        #[arg(long, value_enum)]
        floor: Option<FloorArg>,
        /// Minimal fitted constant for the rich-lines bound.
        #[arg(long = "c-min", default_value = "0")]
        c_min: String,
    },
    /// Print a Latin square (or its triple system) for inspection.
    Latin {
        r: usize,
        /// Require the skew property (L_ij != L_ji).
        #[arg(long)]
        skew: bool,
        /// Print the derived triple system instead of the square.
        #[arg(long)]
        triples: bool,
    },
}

#[derive(Subcommand)]
enum GenRecipe {
    /// 3k points, three k-point lines, no ordinary lines (planar in C^3).
    Fermat {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Same configuration charted into C^2.
    FermatAffine {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The planar family plus one apex off the plane (3k+1 points).
    FermatApex {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// n-k points on a plane, k generic points off it.
    Coplanar {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        /// Use the 3k'-point no-ordinary-line plane part (requires n = 3k' + k).
        #[arg(long = "fermat-plane")]
        fermat_plane: Option<u32>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// n generic rational points in C^d (no 3 collinear).
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ConstructionArg {
    V1,
    V2,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Statement {
    Melchior,
    Hirzebruch,
    Kelly,
    #[value(name = "3n2")]
    ThreeHalves,
    /// Refined bound from 4-rich lines in C^3.
    Rich,
    /// Quadratic bound in C^4.
    Quad,
    Dichotomy,
    /// Bound under the certified scaling condition.
    Props,
    Removal,
    Prune,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FloorArg {
    Plane,
    Flat3,
}

fn parse_rational_flag(s: &str) -> Result<BigRational, String> {
    let parts: Vec<&str> = s.split('/').collect();
    let parse_int = |t: &str| {
        t.trim()
            .parse::<BigInt>()
            .map_err(|_| format!("invalid rational '{}'", s))
    };
    match parts.as_slice() {
        [a] => Ok(BigRational::from_integer(parse_int(a)?)),
        [a, b] => {
            let den = parse_int(b)?;
            if den == BigInt::from(0) {
                return Err(format!("zero denominator in '{}'", s));
            }
            Ok(BigRational::new(parse_int(a)?, den))
        }
        _ => Err(format!("invalid rational '{}'", s)),
    }
}

fn load_config(path: &str) -> Result<AnyConfig, (u8, String)> {
    let resolved = resolve_input(path).map_err(|e| (3u8, e))?;
    let text = std::fs::read_to_string(&resolved)
        .map_err(|e| (3u8, format!("cannot read {}: {}", resolved.display(), e)))?;
    configgen::parse(&text).map_err(|e| (3u8, format!("{}: {}", resolved.display(), e)))
}

fn emit(value: &Value) {
    println!("{}", serde_json::to_string_pretty(value).expect("valid json"));
}

fn verdict_exit(rep: &VerdictReport) -> u8 {
    if rep.applicable {
        if rep.pass {
            0
        } else {
            1
        }
    } else if rep.notes.iter().any(|n| n.contains("budget exhausted")) {
        4
    } else {
        2
    }
}

fn print_verdict(rep: &VerdictReport, manifest: &RunManifest, format: Format) {
    match format {
        Format::Json => {
            let mut v = rep.to_json();
            v["manifest"] = serde_json::to_value(manifest).expect("manifest");
            emit(&v);
        }
        Format::Text => {
            println!("statement: {}", rep.statement);
            for h in &rep.hypotheses {
                println!(
                    "hypothesis: {} [{}]",
                    h.name,
                    if h.passed { "ok" } else { "failed" }
                );
            }
            println!("applicable: {}", rep.applicable);
            if rep.applicable {
                println!("pass: {}", rep.pass);
            }
            if let (Some(c), Some(o)) = (&rep.claimed, &rep.observed) {
                println!("claimed: {}", olines::verify::rational_str(c));
                println!("observed: {}", olines::verify::rational_str(o));
            }
            if let Some(m) = &rep.margin {
                println!("margin: {}", olines::verify::rational_str(m));
            }
            for w in &rep.witnesses {
                println!("witness: {}", w);
            }
            for n in &rep.notes {
                println!("note: {}", n);
            }
        }
    }
}

struct Ctx {
    seed: u64,
    epsilon: f64,
    threads: usize,
    format: Format,
    budget_cols: usize,
    retries: usize,
    c0: BigRational,
    c1: BigRational,
}

impl Ctx {
    fn manifest(&self, command: &str) -> RunManifest {
        RunManifest {
            command: command.to_string(),
            input: None,
            output: None,
            recipe: None,
            statement: None,
            seed: self.seed,
            epsilon: fmt_f64(self.epsilon),
            threads: self.threads,
            format: match self.format {
                Format::Text => "text".into(),
                Format::Json => "json".into(),
            },
            budget_cols: self.budget_cols,
            retries: self.retries,
            c0: olines::verify::rational_str(&self.c0),
            c1: olines::verify::rational_str(&self.c1),
            b_star: None,
            point: None,
            floor: None,
            construction: None,
        }
    }
}

fn cmd_gen(ctx: &Ctx, recipe: GenRecipe) -> Result<u8, (u8, String)> {
    let (recipe, out) = match recipe {
        GenRecipe::Fermat { k, out } => (ConfigRecipe::Fermat { k }, out),
        GenRecipe::FermatAffine { k, out } => (ConfigRecipe::FermatAffine { k }, out),
        GenRecipe::FermatApex { k, out } => (ConfigRecipe::FermatWithApex { k }, out),
        GenRecipe::Coplanar {
            n,
            k,
            fermat_plane,
            out,
        } => (
            ConfigRecipe::CoplanarPlus {
                n,
                k,
                seed: ctx.seed,
                fermat_plane,
            },
            out,
        ),
        GenRecipe::Random { n, d, out } => (
            ConfigRecipe::RandomGeneric {
                n,
                d,
                seed: ctx.seed,
            },
            out,
        ),
    };
    let config = configgen::generate(&recipe).map_err(|e| (3u8, e.to_string()))?;
    let text = configgen::serialize(&config);
    let info = format!("n={} dim={}", config.len(), config.dim());
    match out {
        Some(path) => {
            std::fs::write(&path, text)
                .map_err(|e| (3u8, format!("cannot write {}: {}", path.display(), e)))?;
            println!("{}", info);
        }
        None => {
            print!("{}", text);
            eprintln!("{}", info);
        }
    }
    Ok(0)
}

fn cmd_stats(ctx: &Ctx, path: &str) -> Result<u8, (u8, String)> {
    let config = load_config(path)?;
    let mut manifest = ctx.manifest("stats");
    manifest.input = Some(path.to_string());
    let (n, dim, mut profile) = with_config!(&config, cfg => {
        let inc = cfg.enumerate_lines();
        (cfg.len(), cfg.dim(), inc.t_profile().clone())
    });
    // The ordinary-line count is the headline statistic; print it even when 0.
    profile.entry(2).or_insert(0);
    match ctx.format {
        Format::Text => {
            println!("n={} dim={}", n, dim);
            let parts: Vec<String> = profile.iter().map(|(r, t)| format!("t{}={}", r, t)).collect();
            println!("{}", parts.join(" "));
        }
        Format::Json => {
            let pairs: Vec<Value> = profile.iter().map(|(r, t)| json!([r, t])).collect();
            emit(&json!({
                "manifest": serde_json::to_value(&manifest).unwrap(),
                "n": n,
                "dim": dim,
                "t_profile": pairs,
            }));
        }
    }
    Ok(0)
}

fn cmd_depmat(
    ctx: &Ctx,
    path: &str,
    construction: ConstructionArg,
    out: Option<PathBuf>,
) -> Result<u8, (u8, String)> {
    let config = load_config(path)?;
    let cons = match construction {
        ConstructionArg::V1 => Construction::V1,
        ConstructionArg::V2 => Construction::V2,
    };
    let mut manifest = ctx.manifest("depmat");
    manifest.input = Some(path.to_string());
    manifest.construction = Some(cons.to_string());
    manifest.output = out.as_ref().map(|p| p.display().to_string());

    let build = with_config!(&config, cfg => {
        let inc = cfg.enumerate_lines();
        full_dep_matrix(cfg, &inc, cons, ctx.seed, ctx.retries).map(|a| {
            let mut dump = a.dump();
            if let AnyConfig::Cyclotomic(c) = &config {
                let order = c.points()[0][0].order();
                let nl = dump.find('\n').expect("header line") + 1;
                dump.insert_str(nl, &format!("cyclotomic {}\n", order));
            }
            let lines: Vec<Value> = a
                .line_certs
                .iter()
                .map(|(id, r, cert)| {
                    json!({
                        "line": id,
                        "r": r,
                        "achieved": cert.achieved,
                        "required": cert.required,
                        "certified": cert.certified,
                        "attempts": cert.attempts_used,
                    })
                })
                .collect();
            (
                dump,
                a.nrows(),
                a.ncols,
                a.certified_fraction(),
                a.all_lines_certified(),
                lines,
            )
        })
    });
    match build {
        Err(DepError::NoSpecialLines) => {
            eprintln!("no special lines: dependency matrix is empty");
            Ok(2)
        }
        Err(e) => Err((3, e.to_string())),
        Ok((dump, m, n, fraction, all_certified, lines)) => {
            match &out {
                Some(p) => std::fs::write(p, &dump)
                    .map_err(|e| (3u8, format!("cannot write {}: {}", p.display(), e)))?,
                None => print!("{}", dump),
            }
            let summary = json!({
                "manifest": serde_json::to_value(&manifest).unwrap(),
                "m": m,
                "n": n,
                "construction": cons.to_string(),
                "certified_fraction": fmt_f64(fraction),
                "all_lines_certified": all_certified,
                "lines": lines,
            });
            match ctx.format {
                Format::Json => {
                    if out.is_some() {
                        emit(&summary);
                    } else {
                        eprintln!("{}", serde_json::to_string(&summary).unwrap());
                    }
                }
                Format::Text => {
                    let text = format!(
                        "m={} n={} construction={} certified_fraction={:.4} all_certified={}",
                        m, n, cons, fraction, all_certified
                    );
                    if out.is_some() {
                        println!("{}", text);
                    } else {
                        eprintln!("{}", text);
                    }
                }
            }
            if all_certified {
                Ok(0)
            } else {
                Ok(4)
            }
        }
    }
}

fn cmd_scale(ctx: &Ctx, path: &str) -> Result<u8, (u8, String)> {
    let resolved = resolve_input(path).map_err(|e| (3u8, e))?;
    let text = std::fs::read_to_string(&resolved)
        .map_err(|e| (3u8, format!("cannot read {}: {}", resolved.display(), e)))?;
    let matrix = parse_dump_to_complex(&text).map_err(|e| (3u8, e))?;
    let mut manifest = ctx.manifest("scale");
    manifest.input = Some(path.to_string());

    let m = matrix.len();
    let n = matrix[0].len();
    let supports: Vec<Vec<usize>> = matrix
        .iter()
        .map(|row| {
            row.iter()
                .enumerate()
                .filter(|(_, z)| z.norm_sqr() > 0.0)
                .map(|(j, _)| j)
                .collect()
        })
        .collect();
    let pattern = ZeroPattern::from_supports(m, n, supports);
    let verdict = property_s(&pattern, ctx.budget_cols, ctx.seed);
    let witness = verdict.witness();

    let (scaled, result, converged_exit) = match l2_scale(&matrix, ctx.epsilon, DEFAULT_MAX_ITERS)
    {
        Ok((scaled, result)) => (scaled, result, 0u8),
        Err(ScaleError::NonConvergence { result, .. }) => {
            let scaled = olines::scalerank::apply_l2(&matrix, &result);
            (scaled, result, 4u8)
        }
        Err(e) => return Err((3, e.to_string())),
    };

    let (d, e) = cancellation_functionals_f64(&scaled);
    let rank_bound = if result.min_col_sum > 0.0 {
        let mut gram = vec![vec![num::complex::Complex64::new(0.0, 0.0); n]; n];
        for (i, row_out) in gram.iter_mut().enumerate() {
            for (j, cell) in row_out.iter_mut().enumerate() {
                let mut acc = num::complex::Complex64::new(0.0, 0.0);
                for row in &scaled {
                    acc += row[i].conj() * row[j];
                }
                *cell = acc;
            }
        }
        rank_lower_bound_f64(&gram, result.min_col_sum)
    } else {
        0.0
    };

    let report = json!({
        "manifest": serde_json::to_value(&manifest).unwrap(),
        "m": m,
        "n": n,
        "rank_bound": fmt_f64(rank_bound),
        "D": fmt_f64(d),
        "E": fmt_f64(e),
        "min_col_sum": fmt_f64(result.min_col_sum),
        "row_sum_target": fmt_f64(1.0 + result.epsilon),
        "iterations": result.iterations,
        "converged": result.converged,
        "monotonicity_ok": result.monotonicity_ok,
        "propertys": match &verdict {
            PropertySVerdict::Satisfied { .. } => "satisfied",
            PropertySVerdict::Violated { .. } => "violated",
            PropertySVerdict::Unknown { .. } => "unknown",
        },
        "witness_rows": witness.rows,
        "witness_cols": witness.cols,
        "score_num": witness.score.numer().to_string(),
        "score_den": witness.score.denom().to_string(),
    });
    match ctx.format {
        Format::Json => emit(&report),
        Format::Text => {
            println!("m={} n={}", m, n);
            println!(
                "converged={} iterations={}",
                result.converged, result.iterations
            );
            println!("min_col_sum={}", fmt_f64(result.min_col_sum));
            println!("rank_bound={}", fmt_f64(rank_bound));
            println!("D={} E={}", fmt_f64(d), fmt_f64(e));
            println!(
                "propertys={} score={}/{}",
                report["propertys"].as_str().unwrap(),
                witness.score.numer(),
                witness.score.denom()
            );
        }
    }
    Ok(converged_exit)
}

#[allow(clippy::too_many_arguments)]
fn cmd_verify(
    ctx: &Ctx,
    statement: Statement,
    path: &str,
    bstar: Option<i64>,
    point: Option<usize>,
    floor: Option<FloorArg>,
    c_min: &str,
) -> Result<u8, (u8, String)> {
    let config = load_config(path)?;
    let mut manifest = ctx.manifest("verify");
    manifest.input = Some(path.to_string());
    manifest.b_star = bstar;
    manifest.point = point;
    manifest.floor = floor.map(|f| {
        match f {
            FloorArg::Plane => "plane",
            FloorArg::Flat3 => "flat3",
        }
        .to_string()
    });
    manifest.statement = Some(
        match statement {
            Statement::Melchior => "melchior",
            Statement::Hirzebruch => "hirzebruch",
            Statement::Kelly => "kelly",
            Statement::ThreeHalves => "3n2",
            Statement::Rich => "rich",
            Statement::Quad => "quad",
            Statement::Dichotomy => "dichotomy",
            Statement::Props => "props",
            Statement::Removal => "removal",
            Statement::Prune => "prune",
        }
        .to_string(),
    );

    let rep = match statement {
        Statement::Melchior => with_config!(&config, cfg => check_melchior(cfg)),
        Statement::Hirzebruch => with_config!(&config, cfg => check_hirzebruch(cfg)),
        Statement::Kelly => with_config!(&config, cfg => check_kelly(cfg)),
        Statement::ThreeHalves => with_config!(&config, cfg => check_3n2(cfg)),
        Statement::Rich => {
            let c_min = parse_rational_flag(c_min).map_err(|e| (3u8, e))?;
            with_config!(&config, cfg => check_main(cfg, &c_min))
        }
        Statement::Quad => with_config!(&config, cfg => check_higherdim(cfg)),
        Statement::Dichotomy => {
            let b = bstar.ok_or((3u8, "--bstar is required for dichotomy".to_string()))?;
            with_config!(&config, cfg => check_dichotomy(cfg, b, ctx.budget_cols, ctx.seed))
        }
        Statement::Props => {
            with_config!(&config, cfg => check_propS_bound(cfg, ctx.budget_cols, ctx.seed))
        }
        Statement::Removal => {
            let i = point.ok_or((3u8, "--point is required for removal".to_string()))?;
            with_config!(&config, cfg => check_removal_lemma(cfg, i))
        }
        Statement::Prune => {
            let floor = match floor.ok_or((3u8, "--floor is required for prune".to_string()))? {
                FloorArg::Plane => PruneFloor::Plane,
                FloorArg::Flat3 => PruneFloor::Flat3,
            };
            let (trace, rep) = with_config!(&config, cfg => run_prune(cfg, floor, &ctx.c1));
            match ctx.format {
                Format::Json => {
                    let mut v = rep.to_json();
                    v["manifest"] = serde_json::to_value(&manifest).unwrap();
                    v["trace"] = trace.to_json();
                    emit(&v);
                }
                Format::Text => {
                    print_verdict(&rep, &manifest, Format::Text);
                    println!("stop: {}", trace.stop);
                    for s in &trace.steps {
                        println!(
                            "pruned point {} with {} ordinary lines ({} remain)",
                            s.removed_original_index, s.ordinary_at_removal, s.remaining_n
                        );
                    }
                }
            }
            return Ok(verdict_exit(&rep));
        }
    };
    print_verdict(&rep, &manifest, ctx.format);
    Ok(verdict_exit(&rep))
}

fn cmd_latin(r: usize, skew: bool, triples: bool) -> Result<u8, (u8, String)> {
    if triples {
        let ts = olines::latin::triple_system(r).map_err(|e| (3u8, e.to_string()))?;
        for t in ts.triples() {
            println!("{} {} {}", t[0], t[1], t[2]);
        }
        return Ok(0);
    }
    let sq = if skew {
        olines::latin::skew_diagonal_square(r).map_err(|e| (3u8, e.to_string()))?
    } else {
        olines::latin::diagonal_square(r).map_err(|e| (3u8, e.to_string()))?
    };
    print!("{}", sq);
    Ok(0)
}

fn run() -> Result<u8, (u8, String)> {
    let cli = Cli::try_parse().map_err(|e| {
        if e.kind() == clap::error::ErrorKind::DisplayHelp
            || e.kind() == clap::error::ErrorKind::DisplayVersion
        {
            let _ = e.print();
            std::process::exit(0);
        }
        (3u8, e.to_string())
    })?;

    let ctx = Ctx {
        seed: cli.seed,
        epsilon: cli.epsilon,
        threads: cli.threads,
        format: cli.format,
        budget_cols: cli.budget_cols,
        retries: cli.retries,
        c0: parse_rational_flag(&cli.c0).map_err(|e| (3u8, e))?,
        c1: parse_rational_flag(&cli.c1).map_err(|e| (3u8, e))?,
    };
    if ctx.threads > 1 {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(ctx.threads)
            .build_global();
    }

    match cli.command {
        Command::Gen { recipe } => cmd_gen(&ctx, recipe),
        Command::Stats { config } => cmd_stats(&ctx, &config),
        Command::Depmat {
            config,
            construction,
            out,
        } => cmd_depmat(&ctx, &config, construction, out),
        Command::Scale { matrix } => cmd_scale(&ctx, &matrix),
        Command::Verify {
            statement,
            config,
            bstar,
            point,
            floor,
            c_min,
        } => cmd_verify(&ctx, statement, &config, bstar, point, floor, &c_min),
        Command::Latin { r, skew, triples } => cmd_latin(r, skew, triples),
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => ExitCode::from(code),
        Err((code, msg)) => {
            eprintln!("error: {}", msg);
            ExitCode::from(code)
        }
    }
}
