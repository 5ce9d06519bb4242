//! `locrich`: command-line front end.
//!
//! Exit status: 0 pass, 1 invalid input, 2 failed certification, 3 budget exhausted.

use clap::{Args, Parser, Subcommand, ValueEnum};
use locrich::config::{ConfigError, Construction, LevelConfig};
use locrich::euclid::io::{read_points_csv, write_points_csv, write_svg};
use locrich::euclid::{
    box_dimension, geometric_grid, hausdorff_distance, harmonic_radii, porosity_profile, tangent_photograph_scan, zoom,
    Cube, EuclidError, PointCloudSet, PorositySettings, WindowGenerator,
};
use locrich::gh::{gh_exact_with, GhError, GhOptions};
use locrich::metric::{random_space, read_matrix_csv, write_matrix_csv, MetricError};
use locrich::pisigma::{separation_check, special_point_coding, verify_pisigma_tangent, PiConfig, PiError, PiSchedule, PiSigma, TangentMode};
use locrich::rational::{fmt_rational, parse_rational, to_f64, Rational};
use locrich::sigma::{build_sigma_with_budget, verify_sigma_tangent, words, ScaleSchedule, SigmaError};
use locrich::zoo::{
    c0_theorem_scan, global_photograph_scan, kinf_cover_sum, kinf_predicted_k, moran_dimension, whitney_decomposition,
    zero_tangent_construction, zero_tangent_scales, C0Generator, GeometricRatios, GlobalMode, GlobalRich, IfsSystem, ZooError,
};
use rand::SeedableRng;
use serde_json::{json, Value};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "locrich", version, about = "Tangents, photographs, dimensions and porosity of finite-depth fractal constructions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Clone)]
struct Common {
    /// construction or schedule JSON
    #[arg(long, global = true, visible_alias = "construction")]
    config: Option<PathBuf>,
    /// directory for CSV/JSON artifacts
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 1 << 20)]
    budget_points: usize,
    #[arg(long, global = true, default_value_t = 5_000_000)]
    budget_gh: u64,
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,
    /// seed for random test corpora
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Exact Gromov–Hausdorff distance of two distance-matrix CSVs
    Gh {
        #[arg(long)]
        a: Option<PathBuf>,
        #[arg(long)]
        b: Option<PathBuf>,
        /// with --seed and no files: random spaces of this size
        #[arg(long, default_value_t = 4)]
        random_points: usize,
    },
    /// Hausdorff distance of two point CSVs
    Hausdorff {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
    },
    /// T_{x,t}(E) of the configured construction
    Zoom {
        #[arg(long, value_parser = parse_point)]
        x: Pt,
        #[arg(long, value_parser = parse_q)]
        t: Rational,
    },
    /// d_H(T_{x,t}(E), F) along a geometric grid of scales
    Scan {
        #[arg(long, value_parser = parse_point)]
        x: Pt,
        /// target point CSV; the origin when omitted
        #[arg(long)]
        target: Option<PathBuf>,
        /// start:ratio:count
        #[arg(long)]
        scales: String,
    },
    /// Run a certificate check
    Verify {
        which: Verify,
        #[arg(long)]
        depth: Option<usize>,
        #[arg(long)]
        level: Option<usize>,
        /// dot- or comma-separated coding
        #[arg(long)]
        word: Option<String>,
        #[arg(long, default_value_t = 0)]
        pattern: usize,
        #[arg(long, value_enum, default_value_t = Mode::Dense)]
        mode: Mode,
        /// label used at the occurrence levels in all-points mode
        #[arg(long)]
        label: Option<usize>,
        #[arg(long, default_value_t = 0.5)]
        t: f64,
        #[arg(long, default_value_t = 1e-6)]
        eps: f64,
        #[arg(long, value_parser = parse_point)]
        x: Option<Pt>,
    },
    /// Materialise a construction as exact points
    Build { which: String },
    /// por(E, x, 1/n) for n in from:to
    Porosity {
        #[arg(long, value_parser = parse_point)]
        x: Pt,
        #[arg(long, default_value = "2:64")]
        radii: String,
    },
    /// Dyadic box counts over k in from:to
    Boxdim {
        #[arg(long, default_value = "4:9")]
        depths: String,
    },
    /// Root of Σ r_i^s = 1
    Moran {
        /// comma-separated ratios
        #[arg(long)]
        ratios: Option<String>,
        /// q:n for r_i = q^i with an analytic tail
        #[arg(long)]
        geometric: Option<String>,
    },
    /// Planar scatter plot of points or a construction
    ExportSvg {
        #[arg(long)]
        points: Option<PathBuf>,
        #[arg(long, default_value = "locrich")]
        title: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Verify {
    SigmaTangent,
    PisigmaSeparation,
    PisigmaTangent,
    C0,
    Cinf,
    Kinf,
    Global,
    Whitney,
    ZeroTangent,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Dense,
    AllPoints,
}

struct Failure {
    code: u8,
    msg: String,
}

type Res<T> = Result<T, Failure>;

fn invalid(msg: impl Into<String>) -> Failure {
    Failure { code: 1, msg: msg.into() }
}

fn budget(msg: impl Into<String>) -> Failure {
    Failure { code: 3, msg: msg.into() }
}

impl From<EuclidError> for Failure {
    fn from(e: EuclidError) -> Self {
        match e {
            EuclidError::BudgetExceeded(..) => budget(e.to_string()),
            _ => invalid(e.to_string()),
        }
    }
}

impl From<PiError> for Failure {
    fn from(e: PiError) -> Self {
        match e {
            PiError::BudgetExceeded(..) => budget(e.to_string()),
            PiError::Euclid(e) => e.into(),
            _ => invalid(e.to_string()),
        }
    }
}

impl From<ZooError> for Failure {
    fn from(e: ZooError) -> Self {
        match e {
            ZooError::BudgetExceeded(..) | ZooError::DecompositionBudget(_) | ZooError::NoConvergence(_) => budget(e.to_string()),
            ZooError::Euclid(e) => e.into(),
            ZooError::Pi(e) => e.into(),
            _ => invalid(e.to_string()),
        }
    }
}

impl From<SigmaError> for Failure {
    fn from(e: SigmaError) -> Self {
        match e {
            SigmaError::BudgetExceeded(..) => budget(e.to_string()),
            _ => invalid(e.to_string()),
        }
    }
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        match e {
            ConfigError::Zoo(z) => z.into(),
            ConfigError::Pi(p) => p.into(),
            ConfigError::Euclid(x) => x.into(),
            other => invalid(other.to_string()),
        }
    }
}

impl From<MetricError> for Failure {
    fn from(e: MetricError) -> Self {
        invalid(e.to_string())
    }
}

fn parse_q(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

/// A comma-separated point; a newtype so clap parses it as one value.
#[derive(Clone)]
struct Pt(Vec<Rational>);

fn parse_point(s: &str) -> Result<Pt, String> {
    s.split(',').map(parse_q).collect::<Result<_, _>>().map(Pt)
}

fn parse_range(s: &str) -> Res<(i64, i64)> {
    let (a, b) = s.split_once(':').ok_or_else(|| invalid(format!("expected from:to, got `{s}`")))?;
    let a = a.trim().parse().map_err(|_| invalid(format!("bad range `{s}`")))?;
    let b = b.trim().parse().map_err(|_| invalid(format!("bad range `{s}`")))?;
    if a > b {
        return Err(invalid(format!("empty range `{s}`")));
    }
    Ok((a, b))
}

fn read(path: &Path) -> Res<String> {
    std::fs::read_to_string(path).map_err(|e| invalid(format!("{}: {e}", path.display())))
}

struct Ctx {
    common: Common,
}

impl Ctx {
    fn config_text(&self) -> Res<String> {
        read(self.common.config.as_deref().ok_or_else(|| invalid("--config is required"))?)
    }

    /// Relative paths inside a config resolve against its directory.
    fn loader(&self) -> impl Fn(&str) -> Result<String, String> + '_ {
        move |p: &str| {
            let base = self.common.config.as_deref().and_then(Path::parent).unwrap_or(Path::new("."));
            let path = base.join(p);
            std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))
        }
    }

    fn construction(&self) -> Res<Construction> {
        Ok(Construction::from_json(&self.config_text()?)?)
    }

    fn generator(&self) -> Res<std::rc::Rc<dyn WindowGenerator>> {
        Ok(self.construction()?.build(&self.loader(), self.common.budget_points)?)
    }

    fn write(&self, name: &str, body: &str) -> Res<()> {
        if let Some(dir) = &self.common.out {
            std::fs::create_dir_all(dir).map_err(|e| invalid(format!("{}: {e}", dir.display())))?;
            let path = dir.join(name);
            std::fs::write(&path, body).map_err(|e| invalid(format!("{}: {e}", path.display())))?;
        }
        Ok(())
    }

    fn write_json(&self, name: &str, v: &Value) -> Res<()> {
        let mut s = serde_json::to_string_pretty(v).expect("JSON values serialise");
        s.push('\n');
        self.write(name, &s)
    }
}

fn verdict(pass: bool, what: &str) -> Res<()> {
    if pass {
        println!("PASS {what}");
        Ok(())
    } else {
        Err(Failure { code: 2, msg: format!("FAIL {what}") })
    }
}

fn q(x: &Rational) -> String {
    fmt_rational(x)
}

fn cmd_gh(ctx: &Ctx, a: &Option<PathBuf>, b: &Option<PathBuf>, random_points: usize) -> Res<()> {
    let (x, y) = match (a, b, ctx.common.seed) {
        (Some(a), Some(b), _) => (read_matrix_csv(&read(a)?)?, read_matrix_csv(&read(b)?)?),
        (None, None, Some(seed)) => {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            (random_space(&mut rng, random_points, 4), random_space(&mut rng, random_points, 4))
        }
        _ => return Err(invalid("give --a and --b, or --seed")),
    };
    let opts = GhOptions { node_budget: ctx.common.budget_gh, seed: None };
    if a.is_none() {
        ctx.write("a.csv", &write_matrix_csv(&x, true))?;
        ctx.write("b.csv", &write_matrix_csv(&y, true))?;
    }
    match gh_exact_with(&x, &y, &opts) {
        Ok(r) => {
            println!("{}", q(&r.value));
            ctx.write_json(
                "gh.json",
                &json!({
                    "value": q(&r.value),
                    "value_f64": to_f64(&r.value),
                    "lower_bound": q(&r.lower_bound),
                    "exact": r.exact,
                    "nodes": r.nodes,
                    "certificate": r.certificate.pairs(),
                }),
            )
        }
        Err(GhError::BudgetExceeded(r)) => {
            ctx.write_json("gh.json", &json!({"value": q(&r.value), "lower_bound": q(&r.lower_bound), "exact": false, "nodes": r.nodes}))?;
            Err(budget(format!("GH search budget exhausted; value in [{}, {}]", q(&r.lower_bound), q(&r.value))))
        }
        Err(e) => Err(invalid(e.to_string())),
    }
}

fn cmd_hausdorff(ctx: &Ctx, a: &Path, b: &Path) -> Res<()> {
    let x = read_points_csv(&read(a)?)?;
    let y = read_points_csv(&read(b)?)?;
    let h = hausdorff_distance(&x, &y)?;
    let exact = h.exact().map(|v| q(&v));
    println!("{}", exact.clone().unwrap_or_else(|| format!("{}", h.value())));
    ctx.write_json(
        "hausdorff.json",
        &json!({"squared": q(&h.squared), "exact": exact, "value_f64": h.value(), "slack": q(&h.slack)}),
    )
}

fn cmd_zoom(ctx: &Ctx, x: &[Rational], t: &Rational) -> Res<()> {
    let g = ctx.generator()?;
    let z = zoom(g.as_ref(), x, t, None)?;
    println!("{} points, resolution {}", z.len(), q(z.resolution()));
    ctx.write("zoom.csv", &write_points_csv(&z, true))
}

fn cmd_scan(ctx: &Ctx, x: &[Rational], target: &Option<PathBuf>, scales: &str) -> Res<()> {
    let g = ctx.generator()?;
    let parts: Vec<&str> = scales.split(':').collect();
    if parts.len() != 3 {
        return Err(invalid("--scales must be start:ratio:count"));
    }
    let start = parse_q(parts[0]).map_err(invalid)?;
    let ratio = parse_q(parts[1]).map_err(invalid)?;
    let count: usize = parts[2].parse().map_err(|_| invalid("bad scale count"))?;
    let f = match target {
        Some(p) => read_points_csv(&read(p)?)?,
        None => PointCloudSet::new(g.dim(), vec![vec![Rational::from_integer(0.into()); g.dim()]], Rational::from_integer(0.into()))?,
    };
    let prof = tangent_photograph_scan(g.as_ref(), x, &f, &geometric_grid(&start, &ratio, count), None)?;
    let best = prof.best_row();
    println!("best t = {} dH = {} (non-increasing: {})", q(&best.t), best.dh.value(), prof.is_non_increasing());
    ctx.write("scan.csv", &prof.to_csv())
}

fn parse_word(s: &str) -> Res<Vec<usize>> {
    s.split(['.', ',']).map(|t| t.trim().parse().map_err(|_| invalid(format!("bad coding `{s}`")))).collect()
}

#[allow(clippy::too_many_arguments)]
fn cmd_verify(
    ctx: &Ctx,
    which: Verify,
    depth: Option<usize>,
    level: Option<usize>,
    word: &Option<String>,
    pattern: usize,
    mode: Mode,
    label: Option<usize>,
    t: f64,
    eps: f64,
    x: &Option<Vec<Rational>>,
) -> Res<()> {
    match which {
        Verify::SigmaTangent => {
            let v: Value = serde_json::from_str(&ctx.config_text()?).map_err(|e| invalid(e.to_string()))?;
            let s = ScaleSchedule::from_json(&v, &ctx.loader())?;
            let depth = depth.unwrap_or(s.levels());
            let sigma = build_sigma_with_budget(&s, depth, ctx.common.budget_points)?;
            let ws = match word {
                Some(w) => vec![parse_word(w)?],
                None => words(&s, depth),
            };
            let levels: Vec<usize> = match level {
                Some(n) => vec![n],
                None => (1..depth).collect(),
            };
            let opts = GhOptions { node_budget: ctx.common.budget_gh, seed: None };
            let mut csv = String::from("word,level,gh,lower,exact,bound,pass\n");
            let mut all = true;
            for w in &ws {
                for &n in &levels {
                    let r = verify_sigma_tangent(&s, &sigma, w, n, &opts)?;
                    all &= r.pass;
                    let _ = writeln!(
                        csv,
                        "{},{},{},{},{},{},{}",
                        locrich::sigma::word_label(w),
                        n,
                        q(&r.gh_value),
                        q(&r.lower_bound),
                        r.exact,
                        q(&r.bound),
                        r.pass
                    );
                }
            }
            ctx.write("sigma_tangent.csv", &csv)?;
            verdict(all, &format!("sigma-tangent: {} words × {} levels, gh ≤ r_(n+1)", ws.len(), levels.len()))
        }
        Verify::PisigmaSeparation => {
            let c: PiConfig = serde_json::from_str(&ctx.config_text()?).map_err(|e| invalid(e.to_string()))?;
            let depth = depth.unwrap_or(c.depth);
            let gen = PiSigma::new(PiSchedule::from_config(&c)?, depth)?.with_budget(ctx.common.budget_points);
            let r = separation_check(&gen, depth)?;
            ctx.write_json(
                "pisigma_separation.json",
                &json!({
                    "depth": r.depth, "points": r.points, "pairs": r.pairs,
                    "nested": r.nested, "injection": r.injection, "continuity": r.continuity,
                    "min_injection_ratio": q(&r.min_injection_ratio),
                }),
            )?;
            verdict(r.nested && r.injection && r.continuity, &format!("pisigma-separation: {} points, {} pairs", r.points, r.pairs))
        }
        Verify::PisigmaTangent => {
            let c: PiConfig = serde_json::from_str(&ctx.config_text()?).map_err(|e| invalid(e.to_string()))?;
            let depth = depth.unwrap_or(c.depth);
            let s = PiSchedule::from_config(&c)?;
            let gen = PiSigma::new(s.clone(), depth)?.with_budget(ctx.common.budget_points);
            let base = match word {
                Some(w) => parse_word(w)?,
                None => special_point_coding(&s, pattern, depth)?,
            };
            let occ: Vec<usize> = match level {
                Some(k) => vec![k],
                None => s.occurrences(pattern, depth),
            };
            if occ.is_empty() {
                return Err(invalid(format!("pattern {pattern} does not occur within depth {depth}")));
            }
            let m = match mode {
                Mode::Dense => TangentMode::Dense,
                Mode::AllPoints => TangentMode::AllPoints,
            };
            let mut csv = String::from("level,scale,dH,slack,bound,lambda,residual,pass\n");
            let mut all = true;
            for &k in &occ {
                let mut coding = base.clone();
                if let (Mode::AllPoints, Some(l)) = (mode, label) {
                    coding[k - 1] = l;
                }
                let r = verify_pisigma_tangent(&gen, &coding, k, m)?;
                all &= r.pass;
                let (lam, res) = r.similarity.as_ref().map_or((String::new(), String::new()), |s| (s.lambda.to_string(), s.residual.to_string()));
                let _ = writeln!(
                    csv,
                    "{},{},{},{},{},{},{},{}",
                    k,
                    q(&r.scale),
                    r.dh.value(),
                    to_f64(&r.dh.slack),
                    to_f64(&r.bound_sq).sqrt(),
                    lam,
                    res,
                    r.pass
                );
            }
            ctx.write("pisigma_tangent.csv", &csv)?;
            verdict(all, &format!("pisigma-tangent: pattern {pattern} at levels {occ:?}"))
        }
        Verify::C0 => {
            let l: LevelConfig = level_config(&ctx.config_text()?)?;
            let c0 = C0Generator::new(l.c0_params())?;
            let levels: Vec<usize> = (1..=c0.params.levels()).collect();
            let rows = c0_theorem_scan(&c0, &levels)?;
            let mut csv = String::from("n,t,dH,slack,bound,pass\n");
            for r in &rows {
                let _ = writeln!(csv, "{},{},{},{},{},{}", r.n, q(&r.t), r.dh.value(), to_f64(&r.dh.slack), q(&r.bound), r.pass);
            }
            ctx.write("c0_scan.csv", &csv)?;
            let monotone = rows.windows(2).all(|w| w[1].dh.squared < w[0].dh.squared);
            println!("observed profile strictly decreasing: {monotone}");
            verdict(rows.iter().all(|r| r.pass), &format!("c0: dH ≤ d·a_n/t_n for n = 1..{}", levels.len()))
        }
        Verify::Cinf => {
            let v = ifs_config(&ctx.config_text()?)?;
            let sys = IfsSystem::cinf(&v.0, v.1)?.with_budget(ctx.common.budget_points);
            let half = Rational::new(1.into(), 2.into());
            let mut csv = String::from("level,index,dH\n");
            let mut all = true;
            for (n, l) in sys.levels.iter().enumerate() {
                for m in 0..l.xi.len() {
                    let dh = sys.self_similarity_check(&[(n + 1, m)], &half)?;
                    all &= dh.squared == Rational::from_integer(0.into());
                    let _ = writeln!(csv, "{},{},{}", n + 1, m, dh.value());
                }
            }
            ctx.write("cinf_self_similarity.csv", &csv)?;
            verdict(all, "cinf: cylinders disjoint and every first-level cylinder reproduces the set")
        }
        Verify::Kinf => {
            let v = ifs_config(&ctx.config_text()?)?;
            let sys = IfsSystem::kinf(&v.0, v.1)?;
            let k_pred = kinf_predicted_k(&sys, t, eps);
            let top = k_pred.max(6);
            let mut csv = String::from("k,sum\n");
            let mut sums = Vec::new();
            for k in 1..=top {
                let s = kinf_cover_sum(&sys, k, t)?;
                let _ = writeln!(csv, "{k},{s:e}");
                sums.push(s);
            }
            ctx.write("kinf_cover.csv", &csv)?;
            let dec = sums.windows(2).all(|w| w[1] < w[0]);
            let below = sums[k_pred - 1] < eps;
            println!("predicted k = {k_pred}, sum there = {:e}", sums[k_pred - 1]);
            verdict(dec && below, &format!("kinf: cover sums decreasing and below {eps:e} at k = {k_pred}"))
        }
        Verify::Global => {
            let c = ctx.construction()?;
            let (levels, composite) = match c {
                Construction::Global { levels, composite } => (levels, composite),
                _ => return Err(invalid("verify global needs a \"global\" config")),
            };
            let mode = if composite { GlobalMode::default_composite(levels.dim)? } else { GlobalMode::Points };
            let g = GlobalRich::new(levels.global_params(), mode)?;
            let ns: Vec<usize> = (1..=g.params.levels()).collect();
            let rows = global_photograph_scan(&g, &ns)?;
            let mut csv = String::from("n,t,dH,slack,bound,target,pass\n");
            for r in &rows {
                let _ = writeln!(csv, "{},{},{},{},{},{},{}", r.n, q(&r.t), r.dh.value(), to_f64(&r.dh.slack), q(&r.bound), q(&r.target), r.pass);
            }
            ctx.write("global_photographs.csv", &csv)?;
            verdict(rows.iter().all(|r| r.pass), &format!("global: photographs within d/(1+n) for n = 1..{}", ns.len()))
        }
        Verify::Whitney => {
            let c = ctx.construction()?;
            let (f, max_level) = match c {
                Construction::Whitney { f, max_level, .. } => (f, max_level),
                _ => return Err(invalid("verify whitney needs a \"whitney\" config")),
            };
            let fset = f.cloud(&ctx.loader(), ctx.common.budget_points)?;
            let cubes = whitney_decomposition(&fset, max_level, ctx.common.budget_points)?;
            let mut csv = String::from("level,center,side,dist_sq,certified\n");
            for w in &cubes {
                let c: Vec<String> = w.center.iter().map(q).collect();
                let _ = writeln!(csv, "{},{},{},{},{}", w.level, c.join(" "), q(&w.side), q(&w.dist_sq), w.certified());
            }
            ctx.write("whitney_cubes.csv", &csv)?;
            verdict(cubes.iter().all(|w| w.certified()), &format!("whitney: {} cubes with diam ≤ dist ≤ 4·diam", cubes.len()))
        }
        Verify::ZeroTangent => {
            let c = ctx.construction()?;
            let (dim, s, depth) = match c {
                Construction::ZeroTangent { dim, s, depth } => (dim, s, depth),
                _ => return Err(invalid("verify zero-tangent needs a \"zero_tangent\" config")),
            };
            let e = zero_tangent_construction(s, dim, depth)?;
            let x = x.clone().unwrap_or_else(|| vec![Rational::from_integer(0.into()); dim]);
            let scales = zero_tangent_scales(&e, &x)?;
            let origin = PointCloudSet::new(dim, vec![vec![Rational::from_integer(0.into()); dim]], Rational::from_integer(0.into()))?;
            let prof = tangent_photograph_scan(&e, &x, &origin, &scales, None)?;
            ctx.write("zero_tangent_scan.csv", &prof.to_csv())?;
            println!("last dH = {}", prof.rows.last().map_or(0.0, |r| r.dh.value()));
            verdict(prof.is_non_increasing(), "zero-tangent: dH(T_{x,t}(E), {0}) non-increasing along the scales")
        }
    }
}

/// Accepts either a bare level block or a tagged "c0"/"cinf"/"kinf" construction.
fn level_config(text: &str) -> Res<LevelConfig> {
    match Construction::from_json(text) {
        Ok(Construction::C0(l)) => Ok(l),
        Ok(Construction::Cinf(c)) | Ok(Construction::Kinf(c)) => Ok(c.levels),
        _ => serde_json::from_str(text).map_err(|e| invalid(e.to_string())),
    }
}

fn ifs_config(text: &str) -> Res<(locrich::zoo::C0Params, usize)> {
    match Construction::from_json(text) {
        Ok(Construction::Cinf(c)) | Ok(Construction::Kinf(c)) => Ok((c.levels.c0_params(), c.depth)),
        Ok(other) => Err(invalid(format!("expected a cinf or kinf config, got {}", other.kind()))),
        Err(e) => Err(invalid(e.to_string())),
    }
}

fn cmd_build(ctx: &Ctx, which: &str) -> Res<()> {
    let c = ctx.construction()?;
    if c.kind() != which.replace('-', "_") {
        return Err(invalid(format!("config is a {} construction, not {which}", c.kind())));
    }
    let g = c.build(&ctx.loader(), ctx.common.budget_points)?;
    let zero = Rational::from_integer(0.into());
    let window = match &c {
        Construction::Global { levels, .. } => {
            let p = levels.global_params();
            let far = &p.a[p.levels()] - Rational::from_integer(1.into());
            Cube::new(vec![zero.clone(); g.dim()], far)
        }
        _ => Cube::unit(g.dim()),
    };
    let s = g.sample(&window, &zero)?;
    let set = PointCloudSet::new(g.dim(), s.points, s.resolution).or_else(|e| match e {
        EuclidError::OutsideCube(_) => Err(invalid("points outside Q; use zoom or verify for unbounded frames")),
        e => Err(e.into()),
    });
    let set = match set {
        Ok(s) => s,
        Err(_) if matches!(c, Construction::Global { .. }) => {
            let s = g.sample(&window, &zero)?;
            let mut csv = format!("# resolution={}\n", q(&s.resolution));
            let mut pts = s.points;
            pts.sort();
            for p in &pts {
                let row: Vec<String> = p.iter().map(q).collect();
                let _ = writeln!(csv, "{}", row.join(","));
            }
            ctx.write("points.csv", &csv)?;
            ctx.write_json("build.json", &json!({"kind": c.kind(), "points": pts.len(), "resolution": q(&s.resolution)}))?;
            println!("{} points", pts.len());
            return Ok(());
        }
        Err(e) => return Err(e),
    };
    ctx.write("points.csv", &write_points_csv(&set, true))?;
    let mut meta = json!({"kind": c.kind(), "points": set.len(), "resolution": q(set.resolution())});
    if let Some(p) = c.cantor_params()? {
        if g.dim() == 1 {
            let depth = match &c {
                Construction::Cantor { depth, .. } | Construction::Ternary { depth, .. } | Construction::PowerCantor { depth, .. } => *depth,
                _ => unreachable!(),
            };
            let iv = locrich::zoo::cantor_build(&p, depth)?;
            let mut csv = String::from("left,right\n");
            for i in &iv {
                let _ = writeln!(csv, "{},{}", q(&i.left), q(&i.right()));
            }
            ctx.write("intervals.csv", &csv)?;
            meta["intervals"] = json!(iv.len());
        }
    }
    ctx.write_json("build.json", &meta)?;
    println!("{} points, resolution {}", set.len(), q(set.resolution()));
    Ok(())
}

fn cmd_porosity(ctx: &Ctx, x: &[Rational], radii: &str) -> Res<()> {
    let g = ctx.generator()?;
    let (a, b) = parse_range(radii)?;
    if a < 1 {
        return Err(invalid("radii 1/n need n ≥ 1"));
    }
    let p = porosity_profile(g.as_ref(), x, &harmonic_radii(a, b), &PorositySettings::default())?;
    println!("upper estimate {} lower estimate {}", p.upper_est, p.lower_est);
    ctx.write("porosity.csv", &p.to_csv())
}

fn cmd_boxdim(ctx: &Ctx, depths: &str) -> Res<()> {
    let g = ctx.generator()?;
    let (a, b) = parse_range(depths)?;
    if a < 0 || b > 30 {
        return Err(invalid("depths must lie in 0..=30"));
    }
    let r = box_dimension(g.as_ref(), a as u32, b as u32)?;
    print!("{}", r.to_csv());
    ctx.write("boxdim.csv", &r.to_csv())
}

fn cmd_moran(ctx: &Ctx, ratios: &Option<String>, geometric: &Option<String>) -> Res<()> {
    let tol = ctx.common.tol;
    if !(tol > 0.0 && tol < 1.0) {
        return Err(invalid("--tol must lie in (0, 1)"));
    }
    let r = match (ratios, geometric) {
        (Some(list), None) => {
            let v: Vec<f64> = list
                .split(',')
                .map(|t| parse_q(t).map(|x| to_f64(&x)).map_err(invalid))
                .collect::<Res<_>>()?;
            if v.iter().any(|r| !(*r > 0.0 && *r < 1.0)) {
                return Err(invalid("ratios must lie in (0, 1)"));
            }
            moran_dimension(&v, tol)?
        }
        (None, Some(spec)) => {
            let (qs, n) = spec.split_once(':').ok_or_else(|| invalid("--geometric must be q:n"))?;
            let qv = to_f64(&parse_q(qs).map_err(invalid)?);
            let n: usize = n.parse().map_err(|_| invalid("bad term count"))?;
            if !(qv > 0.0 && qv < 1.0) {
                return Err(invalid("q must lie in (0, 1)"));
            }
            moran_dimension(&GeometricRatios::new(qv, n), tol)?
        }
        _ => return Err(invalid("give exactly one of --ratios and --geometric")),
    };
    println!("{}", r.s);
    ctx.write_json("moran.json", &json!({"s": r.s, "sum_lower": r.sum_lower, "sum_upper": r.sum_upper, "evaluations": r.trace.len()}))
}

fn cmd_svg(ctx: &Ctx, points: &Option<PathBuf>, title: &str) -> Res<()> {
    let set = match points {
        Some(p) => read_points_csv(&read(p)?)?,
        None => ctx.construction()?.cloud(&ctx.loader(), ctx.common.budget_points)?,
    };
    let svg = write_svg(&set, title)?;
    match &ctx.common.out {
        Some(_) => ctx.write("plot.svg", &svg),
        None => {
            print!("{svg}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Res<()> {
    let ctx = Ctx { common: cli.common };
    if ctx.common.budget_points == 0 || ctx.common.budget_gh == 0 {
        return Err(invalid("budgets must be positive"));
    }
    if !(ctx.common.tol > 0.0 && ctx.common.tol < 1.0) {
        return Err(invalid("--tol must lie in (0, 1)"));
    }
    match &cli.command {
        Command::Gh { a, b, random_points } => cmd_gh(&ctx, a, b, *random_points),
        Command::Hausdorff { a, b } => cmd_hausdorff(&ctx, a, b),
        Command::Zoom { x, t } => cmd_zoom(&ctx, &x.0, t),
        Command::Scan { x, target, scales } => cmd_scan(&ctx, &x.0, target, scales),
        Command::Verify { which, depth, level, word, pattern, mode, label, t, eps, x } => {
            cmd_verify(&ctx, *which, *depth, *level, word, *pattern, *mode, *label, *t, *eps, &x.as_ref().map(|p| p.0.clone()))
        }
        Command::Build { which } => cmd_build(&ctx, which),
        Command::Porosity { x, radii } => cmd_porosity(&ctx, &x.0, radii),
        Command::Boxdim { depths } => cmd_boxdim(&ctx, depths),
        Command::Moran { ratios, geometric } => cmd_moran(&ctx, ratios, geometric),
        Command::ExportSvg { points, title } => cmd_svg(&ctx, points, title),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("{}", f.msg);
            ExitCode::from(f.code)
        }
    }
}
