use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lietrace::estimates::{
    annuli_integral_check, fit_h1_envelope, gaussian_envelope, h1_point, h1_quasi_norm,
    GaussianParams, VolumeModel,
};
use lietrace::forms::{adjoint, cq, is_symmetric, principal_part, sublaplacian_form, Form};
use lietrace::rockland::{heisenberg_rockland_check_with, RocklandWitness, ScreenOptions};
use lietrace::spectral::{
    h1_heat_kernel, heat_trace_l2, heat_trace_stieltjes, log_grid, lp_lq_exponent, sup_functional,
    torus_embedding_witness, verify_growth, BackendKind, EmbeddingParams, MultiplierSpec,
    SpectralBackend, DEFAULT_EXPONENT_TOL,
};
use lietrace::weighted::{
    build_filtration, check_grading, classify_low_dim, contract, heisenberg_normal_form,
    homogeneous_dimension, is_reduced, reduce, WeightedBasis,
};
use lietrace::{MultiIndex, Vector, Q};
use num_traits::ToPrimitive;

use crate::report::{fmt_f64, CommandReport, Format, Table, Verdict};
use crate::spec::{load_algebra, parse_rational, AlgebraSpec, LoadedAlgebra};
use crate::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "lietrace",
    version,
    about = "Weighted Lie algebras, contractions and spectral asymptotics"
)]
pub struct Cli {
    /// Seed for randomized commands.
    #[arg(long, global = true, env = crate::SEED_ENV, default_value_t = 0)]
    pub seed: u64,
    /// Tolerance for the command's verdict (command-specific default).
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Output file (stdout when omitted).
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Graded contraction of an algebra with respect to a weighted basis.
    Contract {
        #[command(flatten)]
        algebra: AlgebraArgs,
        /// Write the contraction as an algebra spec file.
        #[arg(long)]
        spec_out: Option<PathBuf>,
    },
    /// Filtration levels at their jumps.
    Filtration(AlgebraArgs),
    /// Reduced basis generating the same filtration.
    Reduce(AlgebraArgs),
    /// Homogeneous dimension of the contraction.
    Dimension(AlgebraArgs),
    /// Forms on the H1 basis: build, adjoint, principal part, Rockland screen.
    Form(FormArgs),
    /// Power-law fit of the spectral counting function.
    VerifyGrowth {
        backend: BackendKind,
        #[arg(long, default_value_t = 1e3)]
        from: f64,
        #[arg(long, default_value_t = 1e6)]
        to: f64,
        #[arg(long, default_value_t = 20)]
        per_decade: usize,
    },
    /// Heat traces from the spectral data and from the counting function.
    HeatTrace {
        backend: BackendKind,
        #[arg(long = "t", value_delimiter = ',', default_value = "0.001,0.01,0.1")]
        times: Vec<f64>,
    },
    /// `sup_λ φ(λ) λ^a` for a spectral multiplier.
    MultiplierBound(MultiplierArgs),
    /// Random lower bounds for the Sobolev embedding constant on the torus.
    EmbeddingWitness {
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long, default_value_t = 2.0)]
        p: f64,
        #[arg(long, default_value_t = 4.0)]
        q: f64,
        #[arg(long, default_value_t = 0.25)]
        gamma: f64,
        #[arg(long, value_delimiter = ',', default_value = "64,128,256")]
        cutoffs: Vec<usize>,
        #[arg(long, default_value_t = 256)]
        trials: usize,
    },
    /// Gaussian envelope fitted above the H1 heat kernel.
    Envelope {
        #[arg(long, default_value_t = 1e-2)]
        t_from: f64,
        #[arg(long, default_value_t = 1.0)]
        t_to: f64,
        #[arg(long, default_value_t = 20)]
        nt: usize,
        #[arg(long, default_value_t = 3.0)]
        rho_max: f64,
        #[arg(long, default_value_t = 20)]
        nrho: usize,
        #[arg(long, default_value_t = 0.05)]
        slack: f64,
    },
    /// Dyadic annuli integral `I(t)` against a volume model.
    Annuli {
        #[arg(long, default_value_t = 2.0)]
        m: f64,
        #[arg(long, default_value_t = 4.0)]
        q_star: f64,
        #[arg(long, default_value_t = 1.0)]
        b: f64,
        #[arg(long, default_value_t = 1.0)]
        c: f64,
        #[arg(long, default_value_t = 0.0)]
        omega: f64,
        #[arg(long, default_value_t = 1.0)]
        beta: f64,
        #[arg(long = "t", value_delimiter = ',', default_value = "0.01,0.001,0.0001")]
        times: Vec<f64>,
    },
}

#[derive(Debug, Args)]
pub struct AlgebraArgs {
    /// Catalog name (su2, heisenberg2, ...) or algebra spec file.
    pub algebra: String,
    /// 1-based indices of the basis vectors forming the weighted basis.
    #[arg(long, value_delimiter = ',')]
    pub basis: Vec<usize>,
    /// Weights as rationals `p/q`.
    #[arg(long, value_delimiter = ',')]
    pub weights: Vec<String>,
    /// Named basis from the spec file.
    #[arg(long)]
    pub basis_name: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormAction {
    Build,
    Adjoint,
    Principal,
    RocklandCheck,
}

#[derive(Debug, Args)]
pub struct FormArgs {
    pub action: FormAction,
    /// Weights of the basis, default `1,1,2` (H1).
    #[arg(long, value_delimiter = ',', default_value = "1,1,2")]
    pub weights: Vec<String>,
    /// Term `i.j.k:re[:im]` with 1-based indices, e.g. `1.1:-1`; `:c` is the constant term.
    #[arg(long = "term", allow_hyphen_values = true)]
    pub terms: Vec<String>,
    /// Use the sub-Laplacian `-(X_1² + ... + X_k²)` instead of explicit terms.
    #[arg(long)]
    pub sublaplacian: Option<usize>,
    /// Hermite truncation size.
    #[arg(long, default_value_t = 16)]
    pub size: usize,
    #[arg(
        long,
        value_delimiter = ',',
        allow_negative_numbers = true,
        default_value = "-2,-1,-0.5,0.5,1,2"
    )]
    pub lambdas: Vec<f64>,
    #[arg(long, default_value_t = 64)]
    pub characters: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PhiKind {
    Exponential,
    InversePower,
    Grid,
}

#[derive(Debug, Args)]
pub struct MultiplierArgs {
    #[arg(long, value_enum, default_value_t = PhiKind::Exponential)]
    pub phi: PhiKind,
    /// Decay rate of `e^{-sλ}`.
    #[arg(long, default_value_t = 1.0)]
    pub s: f64,
    /// Power of `(1 + λ)^{-k}`.
    #[arg(long, default_value_t = 2.0)]
    pub k: f64,
    /// CSV file with columns `lambda,value`.
    #[arg(long)]
    pub grid_file: Option<PathBuf>,
    /// Exponent `a`; otherwise `(Q*/m)(1/p - 1/q)` of the backend.
    #[arg(long)]
    pub a: Option<f64>,
    #[arg(long, default_value_t = 2.0)]
    pub p: f64,
    #[arg(long, default_value_t = 2.0)]
    pub q: f64,
    #[arg(long, default_value = "heisenberg")]
    pub backend: BackendKind,
}

fn join<T: ToString>(items: &[T], sep: &str) -> String {
    items
        .iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(sep)
}

fn fmt_vector(v: &Vector) -> String {
    join(v.coords(), " ")
}

fn resolve_basis(loaded: &LoadedAlgebra, a: &AlgebraArgs) -> Result<WeightedBasis, CliError> {
    let alg = &loaded.algebra;
    let weights = a
        .weights
        .iter()
        .map(|w| parse_rational(w))
        .collect::<Result<Vec<_>, _>>()?;
    if !a.basis.is_empty() {
        let idx = a
            .basis
            .iter()
            .map(|&i| {
                if (1..=alg.dim()).contains(&i) {
                    Ok(i - 1)
                } else {
                    Err(CliError::Usage(format!("basis index {i}")))
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        let w = if weights.is_empty() {
            vec![Q::from_integer(1.into()); idx.len()]
        } else {
            weights
        };
        return Ok(WeightedBasis::from_indices(alg, &idx, w)?);
    }
    let named = match &a.basis_name {
        Some(name) => Some(
            loaded
                .bases
                .iter()
                .find(|(n, _)| n == name)
                .map(|(_, b)| b)
                .ok_or_else(|| CliError::Usage(format!("no basis named \"{name}\"")))?,
        ),
        None => loaded.bases.first().map(|(_, b)| b),
    };
    let all: Vec<usize> = (0..alg.dim()).collect();
    match named {
        Some(b) if weights.is_empty() => Ok(b.clone()),
        Some(b) if weights.len() == b.len() => Ok(WeightedBasis::new(
            alg.dim(),
            b.elements().to_vec(),
            weights,
        )?),
        _ if weights.len() == alg.dim() => Ok(WeightedBasis::from_indices(alg, &all, weights)?),
        None if weights.is_empty() => Ok(WeightedBasis::from_indices(
            alg,
            &all,
            vec![Q::from_integer(1.into()); all.len()],
        )?),
        _ => Err(CliError::Usage(format!(
            "{} weights match neither the default basis nor the dimension",
            weights.len()
        ))),
    }
}

fn basis_table(basis: &WeightedBasis) -> Table {
    let mut t = Table::new("basis", &["index", "weight", "element"]);
    for (n, (v, w)) in basis.elements().iter().zip(basis.weights()).enumerate() {
        t.push(vec![(n + 1).to_string(), w.to_string(), fmt_vector(v)]);
    }
    t
}

fn parse_term(s: &str, dim: usize) -> Result<(MultiIndex, lietrace::forms::CQ), CliError> {
    let mut parts = s.split(':');
    let alpha = parts.next().unwrap_or_default().trim();
    let re = parts
        .next()
        .ok_or_else(|| CliError::Parse(format!("term \"{s}\" lacks a coefficient")))?;
    let im = parts.next().unwrap_or("0");
    if parts.next().is_some() {
        return Err(CliError::Parse(format!("term \"{s}\" has too many fields")));
    }
    let entries = if alpha.is_empty() {
        Vec::new()
    } else {
        alpha
            .split('.')
            .map(|i| match i.trim().parse::<usize>() {
                Ok(i) if (1..=dim).contains(&i) => Ok(i - 1),
                _ => Err(CliError::Parse(format!(
                    "term \"{s}\": index \"{i}\" outside 1..={dim}"
                ))),
            })
            .collect::<Result<Vec<_>, _>>()?
    };
    Ok((
        MultiIndex::new(entries),
        cq(parse_rational(re)?, parse_rational(im)?),
    ))
}

fn build_form(a: &FormArgs) -> Result<Form, CliError> {
    let weights = a
        .weights
        .iter()
        .map(|w| parse_rational(w))
        .collect::<Result<Vec<_>, _>>()?;
    match (a.sublaplacian, a.terms.is_empty()) {
        (Some(k), true) => {
            let sub = sublaplacian_form(k)?;
            if k > weights.len() {
                return Err(CliError::Usage(format!(
                    "sub-Laplacian on {k} generators needs {k} weights"
                )));
            }
            Ok(Form::new(
                weights,
                sub.terms().map(|(a, c)| (a.clone(), c.clone())),
            )?)
        }
        (None, false) => {
            let terms = a
                .terms
                .iter()
                .map(|t| parse_term(t, weights.len()))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(Form::new(weights, terms)?)
        }
        _ => Err(CliError::Usage(
            "give either --sublaplacian or at least one --term".into(),
        )),
    }
}

fn form_table(f: &Form) -> Table {
    let mut t = Table::new("form", &["alpha", "re", "im"]);
    for (alpha, c) in f.terms() {
        let idx: Vec<String> = alpha
            .entries()
            .iter()
            .map(|i| (i + 1).to_string())
            .collect();
        t.push(vec![idx.join("."), c.re.to_string(), c.im.to_string()]);
    }
    t
}

fn read_grid(path: &PathBuf) -> Result<MultiplierSpec, CliError> {
    let mut reader = csv::Reader::from_path(path)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let (mut lambdas, mut values) = (Vec::new(), Vec::new());
    for (n, rec) in reader.records().enumerate() {
        let rec = rec.map_err(|e| CliError::Parse(e.to_string()))?;
        let field = |k: usize| -> Result<f64, CliError> {
            rec.get(k)
                .and_then(|s| s.trim().parse().ok())
                .ok_or_else(|| {
                    CliError::Parse(format!(
                        "{}: row {} column {}",
                        path.display(),
                        n + 2,
                        k + 1
                    ))
                })
        };
        lambdas.push(field(0)?);
        values.push(field(1)?);
    }
    Ok(MultiplierSpec::Grid { lambdas, values })
}

/// Executes one parsed command line.
pub fn run(cli: &Cli, argv: Vec<String>) -> Result<CommandReport, CliError> {
    let mut r = CommandReport::new(argv);
    match &cli.command {
        Command::Contract { algebra, spec_out } => {
            let loaded = load_algebra(&algebra.algebra)?;
            let basis = resolve_basis(&loaded, algebra)?;
            let g = contract(&loaded.algebra, &basis)?;
            let grading = check_grading(&g);
            r.normalization
                .push("contraction in an adapted basis, brackets truncated to top weight".into());
            r.set("q_star", g.q_star());
            r.set("grade_weights", join(g.grade_weights(), ","));
            r.set(
                "class",
                format!("{:?}", classify_low_dim(g.algebra())).to_lowercase(),
            );
            r.set("grading_law", grading.grading_law);
            r.set("jacobi", grading.jacobi);
            r.set("nilpotent", grading.nilpotent);
            if let Some(h) = heisenberg_normal_form(&g) {
                r.normalization
                    .push("heisenberg normal form [X, Y] = Z".into());
                r.set(
                    "heisenberg_normal_form",
                    h.nonzero_brackets()
                        .map(|(i, j, v)| format!("[{},{}]={}", i + 1, j + 1, fmt_vector(v)))
                        .collect::<Vec<_>>()
                        .join(";"),
                );
            }
            let mut t = Table::new("brackets", &["i", "j", "coefficients"]);
            for (i, j, v) in g.algebra().nonzero_brackets() {
                t.push(vec![
                    (i + 1).to_string(),
                    (j + 1).to_string(),
                    fmt_vector(v),
                ]);
            }
            r.tables.push(t);
            let mut layers = Table::new("layers", &["weight", "dim"]);
            for (w, range) in g.layers() {
                layers.push(vec![w.to_string(), range.len().to_string()]);
            }
            r.tables.push(layers);
            let mut adapted = Table::new("adapted_basis", &["index", "weight", "element"]);
            for (n, (v, w)) in g.adapted_basis().iter().zip(g.grade_weights()).enumerate() {
                adapted.push(vec![(n + 1).to_string(), w.to_string(), fmt_vector(v)]);
            }
            r.tables.push(adapted);
            if let Some(path) = spec_out {
                let d = g.algebra().dim();
                let spec = AlgebraSpec::from_algebra(
                    g.algebra(),
                    &[(
                        "grading".into(),
                        (0..d).collect(),
                        g.grade_weights().to_vec(),
                    )],
                );
                std::fs::write(path, spec.to_toml())
                    .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            }
            r.verdict = Verdict::from_bool(grading.ok());
        }
        Command::Filtration(a) => {
            let loaded = load_algebra(&a.algebra)?;
            let basis = resolve_basis(&loaded, a)?;
            let f = build_filtration(&loaded.algebra, &basis)?;
            let mut t = Table::new("filtration", &["weight", "dim", "rows"]);
            for (w, s) in f.levels() {
                t.push(vec![
                    w.to_string(),
                    s.dim().to_string(),
                    s.rows()
                        .iter()
                        .map(fmt_vector)
                        .collect::<Vec<_>>()
                        .join(";"),
                ]);
            }
            r.tables.push(t);
            r.tables.push(basis_table(&basis));
            let law = f.satisfies_bracket_law(&loaded.algebra)?;
            r.set("jumps", join(&f.jumps(), ","));
            r.set("bracket_law", law);
            r.verdict = Verdict::from_bool(law);
        }
        Command::Reduce(a) => {
            let loaded = load_algebra(&a.algebra)?;
            let basis = resolve_basis(&loaded, a)?;
            let before = is_reduced(&loaded.algebra, &basis)?;
            let reduced = reduce(&loaded.algebra, &basis)?;
            r.set("input_reduced", before.reduced);
            if let Some((w, v)) = before.witness {
                r.set("witness_weight", w);
                r.set("witness", fmt_vector(&v));
            }
            let same = build_filtration(&loaded.algebra, &reduced)?
                == build_filtration(&loaded.algebra, &basis)?;
            r.set("filtration_preserved", same);
            r.tables.push(basis_table(&reduced));
            r.verdict = Verdict::from_bool(same && is_reduced(&loaded.algebra, &reduced)?.reduced);
        }
        Command::Dimension(a) => {
            let loaded = load_algebra(&a.algebra)?;
            let basis = resolve_basis(&loaded, a)?;
            let g = contract(&loaded.algebra, &basis)?;
            r.set("q_star", homogeneous_dimension(&g));
            let mut t = Table::new("layers", &["weight", "dim"]);
            for (w, range) in g.layers() {
                t.push(vec![w.to_string(), range.len().to_string()]);
            }
            r.tables.push(t);
        }
        Command::Form(a) => run_form(a, &mut r)?,
        Command::VerifyGrowth {
            backend,
            from,
            to,
            per_decade,
        } => {
            let b = SpectralBackend::new(*backend)?;
            let grid = log_grid(*from, *to, *per_decade)?;
            let g = verify_growth(&b, &grid, cli.tol.unwrap_or(DEFAULT_EXPONENT_TOL))?;
            r.normalization.push(g.normalization.clone());
            r.normalization
                .push("counting function tau(E_(0,s)) over the open interval".into());
            r.verdict = Verdict::from_bool(g.passed);
            let mut t = Table::new(
                "growth",
                &["s", "value", "fitted", "target", "residual", "verdict"],
            );
            for &(s, v) in &g.samples {
                let resid = v.ln() - g.log_intercept - g.fitted_exponent * s.ln();
                t.push(vec![
                    fmt_f64(s),
                    fmt_f64(v),
                    fmt_f64(g.fitted_exponent),
                    g.target.clone(),
                    fmt_f64(resid),
                    r.verdict.as_str().into(),
                ]);
            }
            r.tables.push(t);
            r.set("backend", &g.backend);
            r.set("fitted_exponent", fmt_f64(g.fitted_exponent));
            r.set("target", &g.target);
            r.set("tolerance", fmt_f64(g.tolerance));
            r.set("max_log_residual", fmt_f64(g.residual));
        }
        Command::HeatTrace { backend, times } => {
            let b = SpectralBackend::new(*backend)?;
            let tol = cli.tol.unwrap_or(1e-4);
            r.normalization.push(b.normalization.into());
            let mut t = Table::new(
                "heat_trace",
                &["t", "l2", "stieltjes", "kernel_2t_e", "relative_gap"],
            );
            let mut ok = true;
            for &time in times {
                let l2 = heat_trace_l2(&b, time)?;
                let st = heat_trace_stieltjes(&b, time)?;
                let kernel = match backend {
                    BackendKind::Heisenberg => Some(h1_heat_kernel(2.0 * time, (0.0, 0.0, 0.0))?),
                    _ => None,
                };
                let mut gap = ((st - l2) / l2).abs();
                if let Some(k) = kernel {
                    gap = gap.max(((st - k) / k).abs());
                }
                ok &= gap <= tol;
                t.push(vec![
                    fmt_f64(time),
                    fmt_f64(l2),
                    fmt_f64(st),
                    kernel.map(fmt_f64).unwrap_or_default(),
                    fmt_f64(gap),
                ]);
            }
            r.tables.push(t);
            r.set("tolerance", fmt_f64(tol));
            r.verdict = Verdict::from_bool(ok);
        }
        Command::MultiplierBound(a) => {
            let phi = match a.phi {
                PhiKind::Exponential => MultiplierSpec::Exponential { s: a.s },
                PhiKind::InversePower => MultiplierSpec::InversePower { k: a.k },
                PhiKind::Grid => read_grid(
                    a.grid_file
                        .as_ref()
                        .ok_or_else(|| CliError::Usage("--phi grid needs --grid-file".into()))?,
                )?,
            };
            let exponent = match a.a {
                Some(x) => x,
                None => {
                    let b = SpectralBackend::new(a.backend)?;
                    r.set("backend", b.kind);
                    r.set("q_star", &b.q_star);
                    r.set("m", &b.m);
                    lp_lq_exponent(a.p, a.q, q_to_f64(&b.q_star), q_to_f64(&b.m))?
                }
            };
            let bound = sup_functional(&phi, exponent)?;
            let mut t = Table::new("bound", &["exponent", "value", "maximizer"]);
            t.push(vec![
                fmt_f64(bound.exponent),
                fmt_f64(bound.value),
                fmt_f64(bound.maximizer),
            ]);
            r.tables.push(t);
        }
        Command::EmbeddingWitness {
            n,
            p,
            q,
            gamma,
            cutoffs,
            trials,
        } => {
            r.seed = Some(cli.seed);
            r.normalization.push(
                "torus with Laplacian eigenvalues 4pi^2|xi|^2; norms on the unit-volume torus"
                    .into(),
            );
            let mut t = Table::new(
                "witness",
                &[
                    "cutoff",
                    "grid_size",
                    "max_ratio",
                    "best_trial",
                    "best_bandwidth",
                ],
            );
            let mut ratios = Vec::new();
            for &cutoff in cutoffs {
                let w = torus_embedding_witness(EmbeddingParams {
                    n: *n,
                    p: *p,
                    q: *q,
                    gamma: *gamma,
                    trials: *trials,
                    freq_cutoff: cutoff,
                    seed: cli.seed,
                })?;
                ratios.push(w.max_ratio);
                t.push(vec![
                    cutoff.to_string(),
                    w.grid_size.to_string(),
                    fmt_f64(w.max_ratio),
                    w.best_trial.to_string(),
                    w.best_bandwidth.to_string(),
                ]);
            }
            r.tables.push(t);
            if let (Some(first), Some(last)) = (ratios.first(), ratios.last()) {
                let variation = (last - first).abs() / first;
                r.set("variation", fmt_f64(variation));
                r.set("growth", fmt_f64(last / first));
                if let Some(tol) = cli.tol {
                    r.verdict = Verdict::from_bool(variation < tol);
                }
            }
        }
        Command::Envelope {
            t_from,
            t_to,
            nt,
            rho_max,
            nrho,
            slack,
        } => {
            if *nt < 2 || *nrho < 2 || !(*t_to > *t_from && *t_from > 0.0) || !(*rho_max > 0.0) {
                return Err(CliError::Usage(
                    "need nt, nrho >= 2, 0 < t-from < t-to and rho-max > 0".into(),
                ));
            }
            let ts: Vec<f64> = (0..*nt)
                .map(|i| t_from * (t_to / t_from).powf(i as f64 / (*nt - 1) as f64))
                .collect();
            let directions = envelope_directions();
            let points: Vec<_> = (0..*nrho)
                .map(|i| {
                    h1_point(
                        rho_max * i as f64 / (*nrho - 1) as f64,
                        directions[i % directions.len()],
                    )
                })
                .collect();
            let fit = fit_h1_envelope(&ts, &points, *slack)?;
            let mut t = Table::new("envelope", &["t", "x", "u", "rho", "kernel", "envelope"]);
            for &time in &ts {
                for &g in &points {
                    let rho = h1_quasi_norm(g);
                    t.push(vec![
                        fmt_f64(time),
                        fmt_f64(g.0),
                        fmt_f64(g.2),
                        fmt_f64(rho),
                        fmt_f64(h1_heat_kernel(time, g)?),
                        fmt_f64(gaussian_envelope(time, rho, &fit.params)?),
                    ]);
                }
            }
            r.tables.push(t);
            r.normalization
                .push("quasi-norm proxy (|x|^4 + u^2)^(1/4) for the control modulus".into());
            r.set("c", fmt_f64(fit.params.c));
            r.set("b", fmt_f64(fit.params.b));
            r.set("b_max", fmt_f64(fit.b_max));
            r.set("margin", fmt_f64(fit.margin));
            r.set("violations", fit.violations);
            r.verdict = Verdict::from_bool(fit.violations == 0);
        }
        Command::Annuli {
            m,
            q_star,
            b,
            c,
            omega,
            beta,
            times,
        } => {
            let p = GaussianParams {
                c: *c,
                b: *b,
                omega: *omega,
                m: *m,
                q_star: *q_star,
            };
            let v = VolumeModel {
                q_star: *q_star,
                beta: *beta,
            };
            let report = annuli_integral_check(times, &p, &v)?;
            let tol = cli.tol.unwrap_or(0.1);
            let ok = report.all_certified && report.monotone && report.max_relative_gap <= tol;
            r.verdict = Verdict::from_bool(ok);
            let mut t = Table::new(
                "annuli",
                &["t", "I(t)", "ratio", "certified_tail", "verdict"],
            );
            for s in &report.samples {
                let row_ok = s.certified && ((s.ratio / report.small_t_limit) - 1.0).abs() <= tol;
                t.push(vec![
                    fmt_f64(s.t),
                    fmt_f64(s.integral),
                    fmt_f64(s.ratio),
                    fmt_f64(s.tail_bound),
                    Verdict::from_bool(row_ok).as_str().into(),
                ]);
            }
            r.tables.push(t);
            r.normalization.push(
                "I(t) without the factor c^2 t^(-2Q*/m) e^(2 omega t); ratio = I(t)/t^(Q*/m)"
                    .into(),
            );
            r.set("small_t_limit", fmt_f64(report.small_t_limit));
            r.set("monotone", report.monotone);
            r.set("max_relative_gap", fmt_f64(report.max_relative_gap));
        }
    }
    Ok(r)
}

/// Directions cycled through by the envelope grid.
pub fn envelope_directions() -> [f64; 5] {
    use std::f64::consts::PI;
    [0.0, PI / 2.0, -PI / 4.0, PI / 6.0, PI / 3.0]
}

fn q_to_f64(q: &Q) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

fn run_form(a: &FormArgs, r: &mut CommandReport) -> Result<(), CliError> {
    let form = build_form(a)?;
    let out = match a.action {
        FormAction::Build | FormAction::RocklandCheck => form.clone(),
        FormAction::Adjoint => adjoint(&form),
        FormAction::Principal => principal_part(&form),
    };
    r.set("order", out.order());
    r.set("homogeneous", out.is_homogeneous());
    r.set("symmetric", is_symmetric(&out));
    r.set("form", &out);
    if a.action == FormAction::RocklandCheck {
        r.normalization.push(
            "dpi_lambda(X) = d/dxi, dpi_lambda(Y) = i lambda xi, dpi_lambda(Z) = i lambda".into(),
        );
        let opts = ScreenOptions {
            characters: a.characters,
            ..ScreenOptions::default()
        };
        let rep = heisenberg_rockland_check_with(&form, a.size, &a.lambdas, opts)?;
        let mut t = Table::new("hermite", &["lambda", "min_singular_value"]);
        for h in &rep.hermite {
            t.push(vec![fmt_f64(h.lambda), fmt_f64(h.min_singular_value)]);
        }
        r.tables.push(t);
        r.set("truncation", rep.truncation);
        r.set("min_character_modulus", fmt_f64(rep.min_character_modulus));
        match rep.witness {
            Some(RocklandWitness::Character {
                a,
                b,
                symbol_modulus,
            }) => r.set(
                "witness",
                format!(
                    "character ({}, {}) with |symbol| = {}",
                    fmt_f64(a),
                    fmt_f64(b),
                    fmt_f64(symbol_modulus)
                ),
            ),
            Some(RocklandWitness::Schrodinger {
                lambda,
                min_singular_value,
            }) => r.set(
                "witness",
                format!(
                    "schrodinger lambda = {} with min singular value {}",
                    fmt_f64(lambda),
                    fmt_f64(min_singular_value)
                ),
            ),
            None => {}
        }
        r.verdict = Verdict::from_bool(rep.passed);
    } else {
        r.tables.push(form_table(&out));
    }
    Ok(())
}
