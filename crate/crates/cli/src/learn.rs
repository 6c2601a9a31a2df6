use bssteg::classify::{all_pairs, grid_search_pca_pair, kfold_cv, score_table_csv, svm_fit_raw, CvConfig, GridItem, SvmParams};
use bssteg::corpus::{load_model, read_features, save_model, FeatureRecord};
use bssteg::Label;

use crate::args::{CvArgs, EvalArgs, GridArgs, SvmArgs, TrainArgs};
use crate::error::{CliError, CliResult};
use crate::extract::{ica_params, prepare_all, Skips};
use crate::io::{load_manifest, write_run_log, write_text};

fn svm_params(a: &SvmArgs) -> CliResult<SvmParams<f64>> {
    let p = SvmParams::new(a.c, a.gamma);
    p.validate()?;
    Ok(p)
}

fn cv_config(a: &CvArgs) -> CliResult<CvConfig<f64>> {
    if a.k < 2 {
        return Err(CliError::Usage(format!("--k must be at least 2, got {}", a.k)));
    }
    Ok(CvConfig { k: a.k, seed: a.seed, svm: svm_params(&a.svm)?, tune: a.tune })
}

fn load_rows(path: &std::path::Path) -> CliResult<(Vec<Vec<f64>>, Vec<Label>)> {
    let records = read_features(path)?;
    if records.is_empty() {
        return Err(CliError::Data(format!("{} has no feature rows", path.display())));
    }
    Ok(records.into_iter().map(|FeatureRecord { features, label, .. }| (features.to_vec(), label)).unzip())
}

/// Table-1 style summary line; inputs are fractions.
pub fn format_accuracy(mean: f64, std: f64) -> String {
    format!("Acc (%) {:.2}  Std (±%) {:.2}", 100.0 * mean, 100.0 * std)
}

pub fn cmd_train(args: &TrainArgs) -> CliResult<()> {
    let params = svm_params(&args.svm)?;
    let (rows, labels) = load_rows(&args.features)?;
    let y: Vec<i8> = labels.iter().map(|l| l.sign()).collect();
    let fit = svm_fit_raw(&rows, &y, &params)?;
    if !fit.converged {
        log::warn!("SMO stopped after {} iterations without converging", fit.iterations);
    }
    save_model(&fit.model, &args.out)?;
    write_run_log(&args.out, "train", args)?;
    println!(
        "trained on {} rows: {} support vectors, {} iterations",
        rows.len(),
        fit.model.support_vectors.len(),
        fit.iterations
    );
    Ok(())
}

pub fn cmd_eval(args: &EvalArgs) -> CliResult<String> {
    let (rows, labels) = load_rows(&args.features)?;
    let line = match &args.model {
        Some(path) => {
            let model = load_model::<f64>(path)?;
            let mut correct = 0usize;
            for (x, &l) in rows.iter().zip(&labels) {
                if model.predict(x)?.0 == l {
                    correct += 1;
                }
            }
            format_accuracy(correct as f64 / rows.len() as f64, 0.0)
        }
        None => {
            let report = kfold_cv(&rows, &labels, &cv_config(&args.cv)?)?;
            for (f, a) in report.fold_accuracies.iter().enumerate() {
                log::info!("fold {}: accuracy {a:.4}", f + 1);
            }
            format_accuracy(report.mean_accuracy, report.std_accuracy)
        }
    };
    println!("{line}");
    Ok(line)
}

pub fn cmd_gridsearch(args: &GridArgs) -> CliResult<(usize, usize)> {
    let cv = cv_config(&args.cv)?;
    let manifest = load_manifest(&args.manifest)?;
    let prepared = prepare_all(&args.manifest, &manifest);
    let mut skips = Skips::default();
    let mut items = Vec::with_capacity(prepared.len());
    for (i, (e, p)) in manifest.entries.iter().zip(&prepared).enumerate() {
        match p {
            Ok(image) => items.push(GridItem { image, label: e.label, ica_seed: ica_params(args.cv.seed, i).seed }),
            Err(err) => skips.record(&e.path, err),
        }
    }
    let result = grid_search_pca_pair(&items, &all_pairs(12), &cv)?;
    write_text(&args.out, &score_table_csv(&result))?;
    write_run_log(&args.out, "gridsearch", args)?;
    let best = result.table.iter().find(|s| (s.i, s.j) == result.best).expect("best pair is in the table");
    println!("best pair {},{}  {}", best.i, best.j, format_accuracy(best.mean_acc, best.std_acc));
    skips.into_result(manifest.len())?;
    Ok(result.best)
}
