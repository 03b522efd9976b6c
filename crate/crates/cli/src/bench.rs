use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use cadi::baseline::{spearman, Direction, MetricKind};
use cadi::data::{load_dataset, load_labels, load_projection_for};
use cadi::{Dataset, Projection};
use serde::{Deserialize, Serialize};

use crate::args::{BenchmarkArgs, ReportArgs};
use crate::commands::write_file;
use crate::evaluate::{evaluate, parse_metric};
use crate::usage;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub technique: String,
    pub metric: String,
    pub direction: String,
    pub value: Option<f64>,
    /// `ok`, `sentinel`, `degenerate`, `failed` or `skipped`.
    pub status: String,
    pub detail: String,
}

impl ResultRow {
    fn rankable(&self) -> Option<f64> {
        matches!(self.status.as_str(), "ok" | "sentinel")
            .then_some(self.value)
            .flatten()
            .filter(|v| !v.is_nan())
    }

    fn higher_is_better(&self) -> bool {
        self.direction == "higher"
    }
}

fn direction_name(kind: MetricKind) -> &'static str {
    match kind.direction() {
        Direction::HigherIsBetter => "higher",
        Direction::LowerIsBetter => "lower",
    }
}

/// Splits `name=path`; a bare path is named after its file stem.
fn named_path(spec: &str) -> anyhow::Result<(String, PathBuf)> {
    if let Some((name, path)) = spec.split_once('=') {
        if name.is_empty() || path.is_empty() {
            return Err(usage(format!("expected name=path, got `{spec}`")));
        }
        return Ok((name.to_string(), PathBuf::from(path)));
    }
    let path = PathBuf::from(spec);
    let name = path
        .file_stem()
        .and_then(|s| s.to_str())
        .ok_or_else(|| usage(format!("cannot name projection `{spec}`")))?
        .to_string();
    Ok((name, path))
}

pub fn benchmark(a: BenchmarkArgs) -> anyhow::Result<()> {
    let data: Dataset<f64> = load_dataset(&a.input)?;
    let mut projections: Vec<(String, Projection<f64>)> = Vec::new();
    for spec in &a.proj {
        let (name, path) = named_path(spec)?;
        if projections.iter().any(|(n, _)| *n == name) {
            return Err(usage(format!("projection name `{name}` given twice")));
        }
        projections.push((name, load_projection_for(&path, &data)?));
    }
    let mut clusters: BTreeMap<String, Vec<usize>> = BTreeMap::new();
    for spec in &a.clusters {
        let (name, path) = named_path(spec)?;
        if !projections.iter().any(|(n, _)| *n == name) {
            return Err(usage(format!(
                "cluster labels for unknown projection `{name}`"
            )));
        }
        clusters.insert(name, load_labels(&path)?);
    }
    let metrics: Vec<MetricKind> = if a.metric.is_empty() {
        MetricKind::ALL
            .into_iter()
            .filter(|k| !k.needs_clustering() || !clusters.is_empty())
            .collect()
    } else {
        a.metric
            .iter()
            .map(|m| parse_metric(m))
            .collect::<anyhow::Result<_>>()?
    };

    let mut rows = Vec::new();
    let mut timings = String::from("technique,metric,elapsed_seconds\n");
    for (name, proj) in &projections {
        for &kind in &metrics {
            let mut row = ResultRow {
                technique: name.clone(),
                metric: kind.name().to_string(),
                direction: direction_name(kind).to_string(),
                value: None,
                status: "ok".into(),
                detail: String::new(),
            };
            let labels = clusters.get(name).map(Vec::as_slice);
            if kind.needs_clustering() && labels.is_none() {
                row.status = "skipped".into();
                row.detail = "no cluster labels for this projection".into();
                rows.push(row);
                continue;
            }
            match evaluate(kind, &data, proj, labels, &a.budget) {
                Ok(eval) => {
                    row.value = Some(eval.result.value);
                    if eval.result.params.contains_key("sentinel") {
                        row.status = "sentinel".into();
                        row.detail = "coincident centroids".into();
                    }
                    timings.push_str(&format!(
                        "{name},{},{}\n",
                        kind.name(),
                        eval.result.elapsed_seconds
                    ));
                }
                Err(err) => {
                    let numerical = err
                        .downcast_ref::<cadi::Error>()
                        .is_some_and(|e| e.is_numerical());
                    row.status = if numerical { "degenerate" } else { "failed" }.into();
                    row.detail = format!("{err:#}");
                }
            }
            rows.push(row);
        }
    }
    fs::create_dir_all(&a.out)?;
    write_rows(&a.out.join("results.csv"), &rows)?;
    write_file(&a.out.join("timings.csv"), &timings)?;
    write_report(&rows, &a.out)
}

pub fn report(a: ReportArgs) -> anyhow::Result<()> {
    let rows = read_rows(&a.results)?;
    fs::create_dir_all(&a.out)?;
    write_report(&rows, &a.out)
}

fn write_rows(path: &Path, rows: &[ResultRow]) -> anyhow::Result<()> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    write_file(path, &String::from_utf8(w.into_inner()?)?)
}

fn read_rows(path: &Path) -> anyhow::Result<Vec<ResultRow>> {
    let text = fs::read_to_string(path).map_err(|e| cadi::Error::io(path, e))?;
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for (i, rec) in rdr.deserialize().enumerate() {
        let row: ResultRow = rec.map_err(|e| cadi::Error::Parse {
            line: i + 2,
            message: e.to_string(),
        })?;
        if row.direction != "higher" && row.direction != "lower" {
            return Err(cadi::Error::Parse {
                line: i + 2,
                message: format!(
                    "direction must be `higher` or `lower`, got `{}`",
                    row.direction
                ),
            }
            .into());
        }
        rows.push(row);
    }
    Ok(rows)
}

/// Metric names in first-appearance order.
fn metric_order(rows: &[ResultRow]) -> Vec<String> {
    let mut names: Vec<String> = Vec::new();
    for r in rows {
        if !names.contains(&r.metric) {
            names.push(r.metric.clone());
        }
    }
    names
}

/// Techniques ordered best first; ties share the lower rank.
pub fn rank_metric(rows: &[&ResultRow]) -> Vec<(usize, String, f64)> {
    let mut scored: Vec<(String, f64, f64)> = rows
        .iter()
        .filter_map(|r| {
            let v = r.rankable()?;
            let quality = if r.higher_is_better() { v } else { -v };
            Some((r.technique.clone(), v, quality))
        })
        .collect();
    scored.sort_by(|a, b| b.2.total_cmp(&a.2).then_with(|| a.0.cmp(&b.0)));
    let mut ranked = Vec::with_capacity(scored.len());
    for (pos, (tech, v, q)) in scored.iter().enumerate() {
        let rank = if pos > 0 && scored[pos - 1].2 == *q {
            ranked.last().map(|(r, _, _)| *r).unwrap()
        } else {
            pos + 1
        };
        ranked.push((rank, tech.clone(), *v));
    }
    ranked
}

/// Spearman correlation of direction-adjusted scores over the techniques
/// scored by both metrics; NaN when undefined.
fn metric_correlation(a: &[&ResultRow], b: &[&ResultRow]) -> f64 {
    let quality = |r: &ResultRow| {
        r.rankable()
            .map(|v| if r.higher_is_better() { v } else { -v })
    };
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for ra in a {
        if let Some(qa) = quality(ra) {
            if let Some(qb) = b
                .iter()
                .find(|rb| rb.technique == ra.technique)
                .and_then(|rb| quality(rb))
            {
                xs.push(qa);
                ys.push(qb);
            }
        }
    }
    spearman(&xs, &ys).unwrap_or(f64::NAN)
}

fn write_report(rows: &[ResultRow], dir: &Path) -> anyhow::Result<()> {
    let metrics = metric_order(rows);
    let by_metric: Vec<Vec<&ResultRow>> = metrics
        .iter()
        .map(|m| rows.iter().filter(|r| &r.metric == m).collect())
        .collect();

    let mut ranks = String::from("metric,direction,rank,technique,value\n");
    for (m, group) in metrics.iter().zip(&by_metric) {
        let direction = group.first().map_or("lower", |r| r.direction.as_str());
        for (rank, tech, v) in rank_metric(group) {
            ranks.push_str(&format!("{m},{direction},{rank},{tech},{v}\n"));
        }
    }
    write_file(&dir.join("ranks.csv"), &ranks)?;

    let mut corr = format!("metric,{}\n", metrics.join(","));
    for (i, m) in metrics.iter().enumerate() {
        corr.push_str(m);
        for j in 0..metrics.len() {
            let r = if i == j {
                1.0
            } else {
                metric_correlation(&by_metric[i], &by_metric[j])
            };
            corr.push_str(&format!(",{r}"));
        }
        corr.push('\n');
    }
    write_file(&dir.join("spearman.csv"), &corr)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(tech: &str, metric: &str, dir: &str, v: f64) -> ResultRow {
        ResultRow {
            technique: tech.into(),
            metric: metric.into(),
            direction: dir.into(),
            value: Some(v),
            status: "ok".into(),
            detail: String::new(),
        }
    }

    #[test]
    fn lower_is_better_ranks_ascending() {
        let rows = [
            row("a", "cadi", "lower", 0.3),
            row("b", "cadi", "lower", 0.1),
            row("c", "cadi", "lower", 0.2),
        ];
        let refs: Vec<&ResultRow> = rows.iter().collect();
        let names: Vec<String> = rank_metric(&refs).into_iter().map(|r| r.1).collect();
        assert_eq!(names, ["b", "c", "a"]);
    }

    #[test]
    fn negating_and_flipping_direction_keeps_order() {
        let lower = [
            row("a", "m", "lower", 0.3),
            row("b", "m", "lower", 0.1),
            row("c", "m", "lower", 0.2),
        ];
        let higher: Vec<ResultRow> = lower
            .iter()
            .map(|r| row(&r.technique, "m", "higher", -r.value.unwrap()))
            .collect();
        let order = |rows: &[ResultRow]| -> Vec<(usize, String)> {
            let refs: Vec<&ResultRow> = rows.iter().collect();
            rank_metric(&refs).into_iter().map(|r| (r.0, r.1)).collect()
        };
        assert_eq!(order(&lower), order(&higher));
    }

    #[test]
    fn ties_share_rank_and_skipped_rows_are_unranked() {
        let mut rows = vec![
            row("a", "m", "higher", 1.0),
            row("b", "m", "higher", 1.0),
            row("c", "m", "higher", 0.5),
        ];
        rows.push(ResultRow {
            status: "degenerate".into(),
            value: None,
            ..row("d", "m", "higher", 0.0)
        });
        let refs: Vec<&ResultRow> = rows.iter().collect();
        let ranks: Vec<usize> = rank_metric(&refs).into_iter().map(|r| r.0).collect();
        assert_eq!(ranks, [1, 1, 3]);
    }

    #[test]
    fn agreeing_metrics_correlate_perfectly() {
        let a = [
            row("p", "cadi", "lower", 0.1),
            row("q", "cadi", "lower", 0.2),
            row("r", "cadi", "lower", 0.3),
        ];
        let b = [
            row("p", "sil", "higher", 0.9),
            row("q", "sil", "higher", 0.5),
            row("r", "sil", "higher", 0.1),
        ];
        let (ra, rb): (Vec<&ResultRow>, Vec<&ResultRow>) = (a.iter().collect(), b.iter().collect());
        assert!((metric_correlation(&ra, &rb) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn named_paths() {
        assert_eq!(
            named_path("pca=out/p.csv").unwrap(),
            ("pca".into(), PathBuf::from("out/p.csv"))
        );
        assert_eq!(named_path("dir/umap.csv").unwrap().0, "umap");
        assert!(named_path("=x.csv").is_err());
    }
}
