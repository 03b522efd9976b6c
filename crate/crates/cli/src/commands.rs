use std::fs;
use std::path::Path;

use anyhow::Context;
use cadi::data::{load_dataset, load_labels, load_projection_for, save_dataset, save_projection};
use cadi::embed::{angle_embedding, pca_project, random_project, TrainConfig, TrainMode};
use cadi::metric::stability_study;
use cadi::synthetic::{generate as generate_dataset, SyntheticName};
use cadi::{CadiScore, Dataset, Projection};

use crate::args::{EmbedArgs, GenerateArgs, Method, MetricArgs, Mode, StabilityArgs};
use crate::evaluate::{evaluate, parse_metric};
use crate::usage;

pub fn write_file(path: &Path, body: &str) -> anyhow::Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    fs::write(path, body).map_err(|e| cadi::Error::io(path, e).into())
}

pub fn generate(a: GenerateArgs) -> anyhow::Result<()> {
    let name: SyntheticName = a
        .name
        .parse()
        .map_err(|e: cadi::Error| usage(e.to_string()))?;
    let data = generate_dataset(name, a.seed, a.fraction)?;
    if let Some(dir) = a.out.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    save_dataset(&data, &a.out)?;
    eprintln!(
        "wrote {} ({} points, {} dims, {} classes)",
        a.out.display(),
        data.n(),
        data.d(),
        data.m()
    );
    Ok(())
}

fn breakdown_csv(data: &Dataset<f64>, score: &CadiScore<f64>) -> String {
    let mut out =
        String::from("reference_class,pair_class,reference_label,pair_label,mean,count\n");
    if let Some(b) = &score.breakdown {
        for (&(ca, cb), stat) in &b.entries {
            let names = data.label_names();
            out.push_str(&format!(
                "{ca},{cb},{},{},{},{}\n",
                names[ca], names[cb], stat.mean, stat.count
            ));
        }
    }
    out
}

pub fn metric(a: MetricArgs) -> anyhow::Result<()> {
    let kind = parse_metric(&a.metric)?;
    let data: Dataset<f64> = load_dataset(&a.input)?;
    let proj = load_projection_for(&a.proj, &data)?;
    let clusters = a.labels.as_ref().map(load_labels).transpose()?;
    if a.breakdown.is_some() && kind != cadi::baseline::MetricKind::Cadi {
        return Err(usage("--breakdown is only available for cadi"));
    }
    let eval = evaluate(kind, &data, &proj, clusters.as_deref(), &a.budget)?;
    if let (Some(path), Some(score)) = (&a.breakdown, &eval.score) {
        write_file(path, &breakdown_csv(&data, score))?;
    }
    let json = eval.result.to_json();
    match &a.out {
        Some(path) => write_file(path, &format!("{json}\n"))?,
        None => println!("{json}"),
    }
    Ok(())
}

pub fn embed(a: EmbedArgs) -> anyhow::Result<()> {
    let data: Dataset<f64> = load_dataset(&a.input)?;
    let (proj, trace): (Projection<f64>, Option<Vec<f64>>) = match a.method {
        Method::Angle => {
            let cfg = TrainConfig {
                output_dim: a.dim,
                epochs: a.epochs,
                batch_size: a.batch_size,
                learning_rate: a.lr,
                seed: a.seed,
                mode: match a.mode {
                    Mode::Parametric => TrainMode::Parametric,
                    Mode::Nonparametric => TrainMode::Nonparametric,
                },
                ..TrainConfig::default()
            };
            let out = angle_embedding(&data, &cfg)?;
            (out.projection, Some(out.loss_trace))
        }
        Method::Pca => (pca_project(data.points(), a.dim)?.projection, None),
        Method::Random => (random_project(data.n(), a.dim, a.seed)?, None),
    };
    if let Some(dir) = a.out.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    save_projection(&proj, Some(&data), &a.out)?;
    match (&a.trace, trace) {
        (Some(path), Some(trace)) => {
            let mut body = String::from("epoch,loss\n");
            for (e, l) in trace.iter().enumerate() {
                body.push_str(&format!("{},{l}\n", e + 1));
            }
            write_file(path, &body)?;
        }
        (Some(_), None) => return Err(usage("--trace is only produced by --method angle")),
        _ => {}
    }
    Ok(())
}

pub fn stability(a: StabilityArgs) -> anyhow::Result<()> {
    let data: Dataset<f64> = load_dataset(&a.input)?;
    let proj = load_projection_for(&a.proj, &data)?;
    let rows = stability_study(
        data.points(),
        proj.points(),
        data.partition(),
        &a.mults,
        a.reps,
        a.seed,
    )?;
    let mut body = String::from("multiplier,k,repetitions,min,q1,median,q3,max,iqr,mean,stddev\n");
    for r in &rows {
        let s = &r.summary;
        body.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{}\n",
            r.multiplier,
            r.k,
            r.repetitions,
            s.min,
            s.q1,
            s.median,
            s.q3,
            s.max,
            s.iqr(),
            s.mean,
            s.stddev
        ));
    }
    write_file(&a.out, &body)
}
