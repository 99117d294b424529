//! Turns analysis results into named report items.

use std::collections::BTreeMap;

use robust_rank::io::{Artifact, LabelledTable, ReportBundle};
use robust_rank::pipeline::{
    AggregatorFamily, FittedInteractions, Methodology1, Methodology2, Methodology3, CI_U1, CI_U2, GAII,
};
use robust_rank::smaa::SmaaOutcome;
use robust_rank::social::CondorcetOutcome;
use robust_rank::{DecisionMatrix, FitReport, Ranking};

const ALTERNATIVE: &str = "alternative";
const CRITERION: &str = "criterion";

pub fn slug(family: AggregatorFamily) -> &'static str {
    match family {
        AggregatorFamily::Ws => "ws",
        AggregatorFamily::CiU1 => "ci-u1",
        AggregatorFamily::CiU2 => "ci-u2",
    }
}

pub fn correlation(bundle: &mut ReportBundle, dm: &DecisionMatrix, fits: &FittedInteractions) {
    bundle.insert("correlation", Artifact::square(CRITERION, dm.criteria(), fits.correlation.matrix()));
}

pub fn fit(bundle: &mut ReportBundle, dm: &DecisionMatrix, name: &str, report: &FitReport) {
    bundle.insert(
        format!("interaction-{name}"),
        Artifact::square(CRITERION, dm.criteria(), report.capacity.interaction()),
    );
    bundle.insert(
        format!("shapley-{name}"),
        Artifact::Table(LabelledTable {
            corner: CRITERION.into(),
            row_labels: dm.criteria().to_vec(),
            col_labels: vec!["shapley".into()],
            values: report.capacity.phi().iter().map(|&v| vec![v]).collect(),
        }),
    );
    let mut scalars = BTreeMap::new();
    if let Some(t) = report.ratio_t {
        scalars.insert("ratio_t".to_owned(), t);
    }
    if let Some(obj) = report.objective {
        scalars.insert("objective".to_owned(), obj);
    }
    scalars.insert("active_constraints".to_owned(), report.active_constraints.len() as f64);
    bundle.insert(format!("fit-{name}"), Artifact::Scalars(scalars));
    let active: Vec<&str> = report.active_constraints.iter().map(|&j| dm.criteria()[j].as_str()).collect();
    bundle.insert(
        format!("active-{name}"),
        Artifact::Notes(BTreeMap::from([("active_constraints".to_owned(), active.join(";"))])),
    );
}

pub fn fits(bundle: &mut ReportBundle, dm: &DecisionMatrix, fits: &FittedInteractions) {
    correlation(bundle, dm, fits);
    fit(bundle, dm, "u1", &fits.u1);
    fit(bundle, dm, "u2", &fits.u2);
}

pub fn ranking(bundle: &mut ReportBundle, alternatives: &[String], name: &str, r: &Ranking, scores: Option<&[f64]>) {
    bundle.insert(format!("ranking-{name}"), Artifact::ranking(alternatives, r, scores));
}

pub fn methodology_1(bundle: &mut ReportBundle, dm: &DecisionMatrix, m1: &Methodology1) {
    fits(bundle, dm, &m1.fits);
    let alts = dm.alternatives();
    ranking(bundle, alts, GAII, &m1.gaii, Some(&m1.scores_ws));
    ranking(bundle, alts, CI_U1, &m1.ci_u1, Some(&m1.scores_u1));
    ranking(bundle, alts, CI_U2, &m1.ci_u2, Some(&m1.scores_u2));
    bundle.insert(
        "tau",
        Artifact::Scalars(BTreeMap::from([
            ("GAII vs CI_u1".to_owned(), m1.tau_gaii_u1),
            ("GAII vs CI_u2".to_owned(), m1.tau_gaii_u2),
        ])),
    );
}

pub fn smaa(bundle: &mut ReportBundle, dm: &DecisionMatrix, family: AggregatorFamily, out: &SmaaOutcome) {
    let s = slug(family);
    let m = dm.num_alternatives();
    bundle.insert(
        format!("acceptability-{s}"),
        Artifact::Table(LabelledTable {
            corner: ALTERNATIVE.into(),
            row_labels: dm.alternatives().to_vec(),
            col_labels: (1..=m).map(|r| format!("rank{r}")).collect(),
            values: out.acceptability.matrix().to_rows(),
        }),
    );
    bundle.insert(format!("pairwise-{s}"), Artifact::square(ALTERNATIVE, dm.alternatives(), out.pairwise.matrix()));

    let mut central = LabelledTable {
        corner: ALTERNATIVE.into(),
        row_labels: Vec::new(),
        col_labels: dm.criteria().to_vec(),
        values: Vec::new(),
    };
    let mut confidence = LabelledTable {
        corner: ALTERNATIVE.into(),
        row_labels: dm.alternatives().to_vec(),
        col_labels: vec!["confidence".into()],
        values: Vec::with_capacity(m),
    };
    for (i, entry) in out.central_weights.entries.iter().enumerate() {
        if let Some(w) = &entry.central_weight {
            central.row_labels.push(dm.alternatives()[i].clone());
            central.values.push(w.to_vec());
        }
        confidence.values.push(vec![entry.confidence]);
    }
    bundle.insert(format!("central-weights-{s}"), Artifact::Table(central));
    bundle.insert(format!("confidence-{s}"), Artifact::Table(confidence));
}

pub fn smaa_meta(bundle: &mut ReportBundle, samples: usize, seed: u64, weights: &str, indicator: bool) {
    bundle.insert(
        "smaa-settings",
        Artifact::Notes(BTreeMap::from([
            ("samples".to_owned(), samples.to_string()),
            ("seed".to_owned(), seed.to_string()),
            ("weights".to_owned(), weights.to_owned()),
            // deterministic criteria: confidence factors degenerate to 0/1
            ("confidence_is_indicator".to_owned(), indicator.to_string()),
        ])),
    );
}

pub fn methodology_2(bundle: &mut ReportBundle, dm: &DecisionMatrix, m2: &Methodology2) {
    fits(bundle, dm, &m2.fits);
    for (family, out) in &m2.runs {
        smaa(bundle, dm, *family, out);
    }
}

pub fn condorcet(bundle: &mut ReportBundle, alternatives: &[String], name: &str, key: &str, out: &CondorcetOutcome) {
    ranking(bundle, alternatives, name, &out.ranking, None);
    bundle.insert(format!("strengths-{key}"), Artifact::square(ALTERNATIVE, alternatives, &out.strengths));
    let winner = out.condorcet_winner.map_or_else(String::new, |w| alternatives[w].clone());
    bundle.insert(
        format!("condorcet-{key}"),
        Artifact::Notes(BTreeMap::from([
            ("cycle".to_owned(), out.cycle.to_string()),
            ("condorcet_winner".to_owned(), winner),
        ])),
    );
}

pub fn methodology_3(bundle: &mut ReportBundle, dm: &DecisionMatrix, m3: &Methodology3, raw_tau: bool) {
    methodology_1(bundle, dm, &m3.deterministic);
    methodology_2(bundle, dm, &m3.smaa);
    for (family, out) in &m3.condorcet {
        condorcet(bundle, dm.alternatives(), family.condorcet_name(), slug(*family), out);
    }
    bundle.insert("tau-table", Artifact::square("ranking", &m3.names, &m3.tau_table));
    for d in &m3.tau_distributions {
        bundle.insert(
            format!("tau-samples-{}", d.ranking),
            Artifact::TauDistribution {
                count: d.values.len(),
                summary: d.summary,
                values: raw_tau.then(|| d.values.clone()),
            },
        );
    }
}
