use std::time::Instant;

use cadi::baseline::{ari, cluster_distance_score, davies_bouldin, nmi, silhouette, MetricKind};
use cadi::metric::{adi_sampled, cadi_sampled};
use cadi::sampling::{DEFAULT_ADI_MULTIPLIER, DEFAULT_CADI_MULTIPLIER, RNG_ALGORITHM};
use cadi::{CadiScore, Dataset, MetricResult, Projection, TripletBudget};

use crate::args::BudgetArgs;
use crate::usage;

pub fn parse_metric(name: &str) -> anyhow::Result<MetricKind> {
    MetricKind::parse(name).ok_or_else(|| {
        let known: Vec<&str> = MetricKind::ALL.iter().map(|m| m.name()).collect();
        usage(format!(
            "unknown metric `{name}` (expected one of {})",
            known.join(", ")
        ))
    })
}

fn budget(args: &BudgetArgs, default_mult: f64) -> TripletBudget {
    if args.exact {
        TripletBudget::exhaustive()
    } else if let Some(k) = args.k_abs {
        TripletBudget::absolute(k, args.seed)
    } else {
        TripletBudget::multiplier(args.k_mult.unwrap_or(default_mult), args.seed)
    }
}

fn with_budget(
    mut r: MetricResult,
    args: &BudgetArgs,
    score: &CadiScore<f64>,
    default_mult: f64,
) -> MetricResult {
    let mode = if args.exact { "exact" } else { "sampled" };
    r = r.with_param("mode", mode).with_param(
        "triplets",
        u64::try_from(score.triplet_count)
            .map(serde_json::Value::from)
            .unwrap_or_else(|_| score.triplet_count.to_string().into()),
    );
    if !args.exact {
        r = r
            .with_param("seed", args.seed)
            .with_param("rng", RNG_ALGORITHM);
        match args.k_abs {
            Some(k) => r = r.with_param("k_abs", k),
            None => r = r.with_param("k_mult", args.k_mult.unwrap_or(default_mult)),
        }
    }
    r
}

/// Outcome of one metric evaluation; `CadiScore` is kept for callers that
/// want the class-pair breakdown.
pub struct Evaluation {
    pub result: MetricResult,
    pub score: Option<CadiScore<f64>>,
}

pub fn evaluate(
    kind: MetricKind,
    data: &Dataset<f64>,
    proj: &Projection<f64>,
    clusters: Option<&[usize]>,
    args: &BudgetArgs,
) -> anyhow::Result<Evaluation> {
    proj.check_aligned(data)?;
    let (x, y, labels) = (data.points(), proj.points(), data.labels());
    let start = Instant::now();
    let mut score = None;
    let mut result = match kind {
        MetricKind::Cadi => {
            let s = cadi_sampled(
                x,
                y,
                data.partition(),
                &budget(args, DEFAULT_CADI_MULTIPLIER),
            )?;
            let r = with_budget(
                MetricResult::new(kind.name(), s.value),
                args,
                &s,
                DEFAULT_CADI_MULTIPLIER,
            );
            score = Some(s);
            r
        }
        MetricKind::Adi => {
            let s = adi_sampled(x, y, &budget(args, DEFAULT_ADI_MULTIPLIER))?;
            with_budget(
                MetricResult::new(kind.name(), s.value),
                args,
                &s,
                DEFAULT_ADI_MULTIPLIER,
            )
        }
        MetricKind::Silhouette => MetricResult::new(kind.name(), silhouette(y, labels)?),
        MetricKind::Dbi => {
            let v = davies_bouldin(y, labels)?;
            if v.is_finite() {
                MetricResult::new(kind.name(), v)
            } else {
                MetricResult::new(kind.name(), f64::MAX)
                    .with_param("sentinel", true)
                    .with_param("status", "coincident_centroids")
            }
        }
        MetricKind::Cds => MetricResult::new(kind.name(), cluster_distance_score(x, y, labels)?),
        MetricKind::Nmi | MetricKind::Ari => {
            let clusters = clusters.ok_or_else(|| {
                usage(format!(
                    "{} needs cluster labels of the projection (--labels)",
                    kind.name()
                ))
            })?;
            if clusters.len() != data.n() {
                return Err(cadi::Error::Alignment {
                    dataset: data.n(),
                    projection: clusters.len(),
                }
                .into());
            }
            let v = if kind == MetricKind::Nmi {
                nmi(labels, clusters)?
            } else {
                ari(labels, clusters)?
            };
            MetricResult::new(kind.name(), v)
        }
    };
    result.elapsed_seconds = start.elapsed().as_secs_f64();
    Ok(Evaluation { result, score })
}
