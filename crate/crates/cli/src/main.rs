use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::Parser;
use robust_rank::io::{
    ingest, locate_input, parse_pairwise_csv, parse_ranking_csv, ranking_from_labels, read_text,
    resolve_preference_order, write_decision_csv, Artifact, CriterionRef, IngestOptions, ReportBundle, RunConfig,
    DATA_DIR_ENV,
};
use robust_rank::pipeline::{
    gaii, run_methodology_1, run_methodology_2, run_methodology_3, FittedInteractions, SmaaSettings,
    WeightMode as PipelineWeights,
};
use robust_rank::smaa::{run_smaa, SmaaConfig, WeightSampler, DEFAULT_SAMPLES, DEFAULT_SEED};
use robust_rank::{
    choquet_2additive_score, condorcet_ranking, kendall_tau_distance, pearson_matrix, ranking_from_scores,
    weighted_sum_score, DecisionMatrix, Error, WeightVector,
};

mod args;
mod report;

use args::{parse_choice, Agg, Cli, Command, Common, FitArgs, Method, SmaaArgs, WeightMode};

/// Error with the process exit code it maps to.
#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

const USAGE: u8 = 1;
const DATA: u8 = 2;
const NUMERICAL: u8 = 3;

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self { code: USAGE, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            _ if e.is_numerical() => NUMERICAL,
            Error::InvalidConfig(_) => USAGE,
            _ => DATA,
        };
        Self { code, message: e.to_string() }
    }
}

type Result<T> = std::result::Result<T, Failure>;

/// Flags and config file merged; flags win.
struct Session {
    common: Common,
    config: RunConfig,
}

impl Session {
    fn new(common: Common) -> Result<Self> {
        let config = match &common.config {
            Some(path) => {
                RunConfig::load(path).map_err(|e| Failure::usage(format!("config {}: {e}", path.display())))?
            }
            None => RunConfig::default(),
        };
        Ok(Self { common, config })
    }

    fn matrix(&self) -> Result<DecisionMatrix> {
        let data_dir = std::env::var_os(DATA_DIR_ENV).map(PathBuf::from);
        let explicit = self.common.data.as_deref().or(self.config.data.as_deref());
        let path = locate_input(explicit, data_dir.as_deref(), gaii::DATASET_FILE).ok_or_else(|| {
            Failure::usage(format!("no input: pass --data, set `data` in the config, or set {DATA_DIR_ENV}"))
        })?;
        let normalize = self.common.normalize || self.config.normalize.unwrap_or(false);
        ingest(&path, IngestOptions { normalize }).map_err(|e| {
            let mut f = Failure::from(e);
            f.message = format!("{}: {}", path.display(), f.message);
            f
        })
    }

    /// Deterministic weights: flag, then config, then `fallback`.
    fn weights(&self, flag: Option<&Vec<f64>>, dm: &DecisionMatrix, fallback: Fallback) -> Result<WeightVector> {
        let n = dm.num_criteria();
        let w = match flag.or(self.config.weights.as_ref()) {
            Some(w) => w.clone(),
            None => match fallback {
                Fallback::Equal => return Ok(WeightVector::uniform(n)),
                Fallback::Reference if n == gaii::WEIGHTS.len() => gaii::WEIGHTS.to_vec(),
                Fallback::Reference => {
                    return Err(Failure::usage(format!(
                        "the reference weights cover {} criteria but the data has {n}; pass --weights",
                        gaii::WEIGHTS.len()
                    )))
                }
            },
        };
        if w.len() != n {
            return Err(Failure::usage(format!("{} weights given for {n} criteria", w.len())));
        }
        WeightVector::new(w).map_err(|e| Failure::usage(e.to_string()))
    }

    fn u1_tol(&self, flag: Option<f64>) -> f64 {
        flag.or(self.config.u1_tol).unwrap_or(robust_rank::capfit::DEFAULT_U1_TOL)
    }

    fn weight_mode(&self, args: &SmaaArgs) -> Result<WeightMode> {
        match (args.weights, &self.config.weight_mode) {
            (Some(m), _) => Ok(m),
            (None, Some(s)) => parse_choice("weight_mode", s).map_err(Failure::usage),
            (None, None) => Ok(WeightMode::Uniform),
        }
    }

    fn aggregator(&self, flag: Option<Agg>) -> Result<Option<Agg>> {
        match (flag, &self.config.aggregator) {
            (Some(a), _) => Ok(Some(a)),
            (None, Some(s)) => parse_choice("aggregator", s).map(Some).map_err(Failure::usage),
            (None, None) => Ok(None),
        }
    }

    /// SMAA settings; the ordinal order defaults to decreasing reference weight.
    fn smaa_settings(&self, args: &SmaaArgs, dm: &DecisionMatrix, reference: &WeightVector) -> Result<SmaaSettings> {
        let weights = match self.weight_mode(args)? {
            WeightMode::Uniform => PipelineWeights::Uniform,
            WeightMode::Ordinal => {
                let order = match (&args.order, &self.config.preference_order) {
                    (Some(flag), _) => {
                        let refs: Vec<CriterionRef> = flag
                            .iter()
                            .map(|s| s.parse().map_or_else(|_| CriterionRef::Name(s.clone()), CriterionRef::Position))
                            .collect();
                        resolve_preference_order(&refs, dm.criteria())?
                    }
                    (None, Some(refs)) => resolve_preference_order(refs, dm.criteria())?,
                    (None, None) => {
                        let mut order: Vec<usize> = (0..reference.len()).collect();
                        order.sort_by(|&a, &b| reference[b].total_cmp(&reference[a]));
                        order
                    }
                };
                PipelineWeights::Ordinal(order)
            }
        };
        let samples = args.samples.or(self.config.samples).unwrap_or(DEFAULT_SAMPLES);
        if samples == 0 {
            return Err(Failure::usage("--samples must be at least 1"));
        }
        Ok(SmaaSettings {
            samples,
            seed: args.seed.or(self.config.seed).unwrap_or(DEFAULT_SEED),
            weights,
            u1_tol: self.u1_tol(args.u1_tol),
        })
    }

    fn emit(&self, bundle: &ReportBundle) -> Result<()> {
        let format = self.common.format.into();
        match &self.common.out {
            Some(dir) => {
                let written = bundle.emit(format, dir).map_err(|e| Failure { code: DATA, message: e.to_string() })?;
                let mut stdout = std::io::stdout().lock();
                for p in written {
                    let _ = writeln!(stdout, "{}", p.display());
                }
            }
            None => {
                let _ = std::io::stdout().lock().write_all(bundle.render(format).as_bytes());
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy)]
enum Fallback {
    Equal,
    Reference,
}

fn weight_label(settings: &SmaaSettings) -> &'static str {
    match settings.weights {
        PipelineWeights::Ordinal(_) => "ordinal",
        _ => "uniform",
    }
}

fn learn(s: &Session, method: Option<Method>, fit: &FitArgs) -> Result<ReportBundle> {
    let method = match (method, &s.config.method) {
        (Some(m), _) => m,
        (None, Some(m)) => parse_choice("method", m).map_err(Failure::usage)?,
        (None, None) => return Err(Failure::usage("learn needs --method u1|u2")),
    };
    let dm = s.matrix()?;
    let w = s.weights(fit.weights.as_ref(), &dm, Fallback::Equal)?;
    let fits = FittedInteractions::learn(&dm, &w, s.u1_tol(fit.u1_tol))?;
    let mut bundle = ReportBundle::new();
    report::correlation(&mut bundle, &dm, &fits);
    match method {
        Method::U1 => report::fit(&mut bundle, &dm, "u1", &fits.u1),
        Method::U2 => report::fit(&mut bundle, &dm, "u2", &fits.u2),
    }
    Ok(bundle)
}

fn score(s: &Session, agg: Option<Agg>, fit: &FitArgs) -> Result<ReportBundle> {
    let agg = s.aggregator(agg)?.ok_or_else(|| Failure::usage("score needs --agg ws|ci-u1|ci-u2"))?;
    let dm = s.matrix()?;
    let w = s.weights(fit.weights.as_ref(), &dm, Fallback::Equal)?;
    let mut bundle = ReportBundle::new();
    let scores = match agg {
        Agg::Ws => weighted_sum_score(&dm, &w)?,
        Agg::CiU1 | Agg::CiU2 => {
            let fits = FittedInteractions::learn(&dm, &w, s.u1_tol(fit.u1_tol))?;
            let (name, report) = if agg == Agg::CiU1 { ("u1", &fits.u1) } else { ("u2", &fits.u2) };
            report::fit(&mut bundle, &dm, name, report);
            choquet_2additive_score(&dm, &report.capacity)?
        }
    };
    let ranking = ranking_from_scores(&scores);
    report::ranking(&mut bundle, dm.alternatives(), agg.family().ranking_name(), &ranking, Some(&scores));
    Ok(bundle)
}

fn smaa(s: &Session, args: &SmaaArgs) -> Result<(DecisionMatrix, ReportBundle, robust_rank::SmaaOutcome)> {
    let dm = s.matrix()?;
    let agg = s.aggregator(args.agg)?.unwrap_or(Agg::Ws);
    let reference = s.weights(args.reference_weights.as_ref(), &dm, Fallback::Equal)?;
    let settings = s.smaa_settings(args, &dm, &reference)?;
    let mut bundle = ReportBundle::new();
    let aggregator = if agg == Agg::Ws {
        robust_rank::Aggregator::WeightedSum
    } else {
        let fits = FittedInteractions::learn(&dm, &reference, settings.u1_tol)?;
        let (name, report) = if agg == Agg::CiU1 { ("u1", &fits.u1) } else { ("u2", &fits.u2) };
        report::fit(&mut bundle, &dm, name, report);
        fits.aggregator(agg.family())
    };
    let sampler = match &settings.weights {
        PipelineWeights::Ordinal(order) => WeightSampler::Ordinal(order.clone()),
        _ => WeightSampler::Uniform,
    };
    let cfg = SmaaConfig { samples: settings.samples, seed: settings.seed, ..SmaaConfig::new(sampler, aggregator) };
    let out = run_smaa(&dm, &cfg)?;
    report::smaa(&mut bundle, &dm, agg.family(), &out);
    report::smaa_meta(
        &mut bundle,
        settings.samples,
        settings.seed,
        weight_label(&settings),
        out.central_weights.confidence_is_indicator,
    );
    Ok((dm, bundle, out))
}

fn condorcet(s: &Session, pairwise: Option<&PathBuf>, args: &SmaaArgs) -> Result<ReportBundle> {
    if let Some(path) = pairwise {
        let (labels, c) = parse_pairwise_csv(&read_text(path)?)?;
        let out = condorcet_ranking(&c)?;
        let mut bundle = ReportBundle::new();
        report::condorcet(&mut bundle, &labels, "Cond", "input", &out);
        return Ok(bundle);
    }
    let agg = s.aggregator(args.agg)?.unwrap_or(Agg::Ws);
    let (dm, mut bundle, out) = smaa(s, args)?;
    let cond = condorcet_ranking(&out.pairwise)?;
    report::condorcet(&mut bundle, dm.alternatives(), agg.family().condorcet_name(), report::slug(agg.family()), &cond);
    Ok(bundle)
}

fn compare(first: &Path, second: &Path) -> Result<ReportBundle> {
    let a = parse_ranking_csv(&read_text(first)?)?;
    let b = parse_ranking_csv(&read_text(second)?)?;
    let ra = ranking_from_labels(&a, &a)?;
    let rb = ranking_from_labels(&b, &a)?;
    let tau = kendall_tau_distance(&ra, &rb)?;
    let mut bundle = ReportBundle::new();
    bundle.insert("kendall-tau", Artifact::Scalars([("tau".to_owned(), tau)].into()));
    Ok(bundle)
}

fn reproduce(s: &Session, methodology: Option<u8>, raw_tau: bool, args: &SmaaArgs) -> Result<ReportBundle> {
    let methodology =
        methodology.or(s.config.methodology).ok_or_else(|| Failure::usage("reproduce needs --methodology 1|2|3"))?;
    let dm = s.matrix()?;
    let reference = s.weights(args.reference_weights.as_ref(), &dm, Fallback::Reference)?;
    let mut bundle = ReportBundle::new();
    let families = robust_rank::pipeline::AggregatorFamily::ALL;
    match methodology {
        1 => {
            let m1 = run_methodology_1(&dm, &reference, s.u1_tol(args.u1_tol))?;
            report::methodology_1(&mut bundle, &dm, &m1);
        }
        2 | 3 => {
            let settings = s.smaa_settings(args, &dm, &reference)?;
            let raw_tau = raw_tau || s.config.raw_tau.unwrap_or(false);
            report::smaa_meta(&mut bundle, settings.samples, settings.seed, weight_label(&settings), true);
            if methodology == 2 {
                report::methodology_2(&mut bundle, &dm, &run_methodology_2(&dm, &reference, &families, &settings)?);
            } else {
                report::methodology_3(
                    &mut bundle,
                    &dm,
                    &run_methodology_3(&dm, &reference, &families, &settings)?,
                    raw_tau,
                );
            }
        }
        other => return Err(Failure::usage(format!("methodology must be 1, 2 or 3, got {other}"))),
    }
    Ok(bundle)
}

fn run(cli: Cli) -> Result<()> {
    let session = Session::new(cli.common)?;
    let bundle = match &cli.command {
        Command::IngestCheck { write } => {
            let dm = session.matrix()?;
            if let Some(path) = write {
                std::fs::write(path, write_decision_csv(&dm))
                    .map_err(|e| Failure { code: DATA, message: format!("{}: {e}", path.display()) })?;
            }
            let mut bundle = ReportBundle::new();
            bundle.insert(
                "matrix",
                Artifact::Notes(
                    [
                        ("alternatives".to_owned(), dm.num_alternatives().to_string()),
                        ("criteria".to_owned(), dm.criteria().join(";")),
                        ("status".to_owned(), "ok".to_owned()),
                    ]
                    .into(),
                ),
            );
            bundle
        }
        Command::Correlate => {
            let dm = session.matrix()?;
            let mut bundle = ReportBundle::new();
            bundle.insert("correlation", Artifact::square("criterion", dm.criteria(), pearson_matrix(&dm)?.matrix()));
            bundle
        }
        Command::Learn { method, fit } => learn(&session, *method, fit)?,
        Command::Score { agg, fit } => score(&session, *agg, fit)?,
        Command::Smaa(args) => smaa(&session, args)?.1,
        Command::Condorcet { pairwise, smaa } => condorcet(&session, pairwise.as_ref(), smaa)?,
        Command::Compare { first, second } => compare(first, second)?,
        Command::Reproduce { methodology, raw_tau, smaa } => reproduce(&session, *methodology, *raw_tau, smaa)?,
    };
    session.emit(&bundle)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(USAGE) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
