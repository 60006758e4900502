use std::fs;
use std::path::Path;

use atmoturb::datagen::{
    generate_dataset_with_workers, sample_params, DatasetConfig, Manifest, OrderChoice,
    DEFAULT_IMAGE_SIZE,
};
use atmoturb::metrics::evaluate_pairs_with_workers;
use atmoturb::rng::{stream, Stream};
use atmoturb::turbsim::{accumulate_field, degrade, visualize_field, DegradationParams};
use atmoturb::{load_png, save_png};

use crate::args::{DegradeArgs, EvaluateArgs, FieldArgs, GenDatasetArgs, VizFieldArgs};
use crate::config::DatasetFile;
use crate::CliError;

const DEFAULT_VIZ_M_POINTS: usize = 10_000;

fn field_defaults(field: &FieldArgs, config: &mut DatasetConfig) {
    if let Some(v) = field.eta {
        config.eta = v;
    }
    if let Some(v) = field.patch_n {
        config.patch_n = v;
    }
    if let Some(v) = field.field_sigma {
        config.field_sigma = v;
    }
}

fn usage<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Usage(e.to_string())
}

fn runtime<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Runtime(e.to_string())
}

fn check_workers(workers: Option<usize>) -> Result<(), CliError> {
    match workers {
        Some(0) => Err(CliError::Usage("--workers must be at least 1".into())),
        _ => Ok(()),
    }
}

/// Resolves the parameters for `degrade`: explicit flags are used as given and
/// anything left unset is drawn from the seed's parameter stream.
pub fn degrade_params(args: &DegradeArgs) -> Result<DegradationParams, CliError> {
    let seed = args.seed.unwrap_or(0);
    let mut config = DatasetConfig::new("", "");
    field_defaults(&args.field, &mut config);
    if let Some(m) = args.m_points {
        config.m_choices = vec![m];
    }
    if let Some(b) = args.blur_sigma {
        config.blur_choices = vec![b];
    }
    config.noise_sigma = args.noise_sigma.unwrap_or(0.0);
    config.order = args.order.unwrap_or(OrderChoice::Random);
    let params = DegradationParams {
        seed,
        ..sample_params(&mut stream(seed, Stream::Params), &config)
    };
    params.validate().map_err(usage)?;
    Ok(params)
}

pub fn run_degrade(args: DegradeArgs) -> Result<(), CliError> {
    let params = degrade_params(&args)?;
    if !args.input.is_file() {
        return Err(CliError::Usage(format!(
            "input file {} does not exist",
            args.input.display()
        )));
    }
    let clean = load_png(&args.input).map_err(runtime)?;
    let quad = degrade(&clean, &params).map_err(runtime)?;
    let out = &args.output_dir;
    fs::create_dir_all(out).map_err(|e| runtime(format!("{}: {e}", out.display())))?;
    for (name, img) in [
        ("clean.png", &quad.clean),
        ("blur.png", &quad.blurred),
        ("deform.png", &quad.deformed),
        ("distort.png", &quad.distorted),
    ] {
        save_png(img, out.join(name)).map_err(runtime)?;
    }
    let json = serde_json::to_string_pretty(&params).map_err(runtime)?;
    let path = out.join("params.json");
    fs::write(&path, format!("{json}\n")).map_err(|e| runtime(format!("{}: {e}", path.display())))?;
    println!("{}", serde_json::to_string(&params).map_err(runtime)?);
    Ok(())
}

/// Merges the optional config file with the flags, flags taking precedence.
pub fn dataset_config(args: &GenDatasetArgs) -> Result<(DatasetConfig, Option<usize>), CliError> {
    let file = match &args.config {
        Some(path) => DatasetFile::load(path).map_err(CliError::Usage)?,
        None => DatasetFile::default(),
    };
    let input = args
        .input_dir
        .clone()
        .or(file.input_dir)
        .ok_or_else(|| CliError::Usage("--input-dir is required (flag or config key input-dir)".into()))?;
    let output = args
        .output_dir
        .clone()
        .or(file.output_dir)
        .ok_or_else(|| CliError::Usage("--output-dir is required (flag or config key output-dir)".into()))?;

    let mut config = DatasetConfig::new(input, output);
    let merged = FieldArgs {
        eta: args.field.eta.or(file.eta),
        patch_n: args.field.patch_n.or(file.patch_n),
        field_sigma: args.field.field_sigma.or(file.field_sigma),
    };
    field_defaults(&merged, &mut config);
    if let Some(v) = args.seed.or(file.seed) {
        config.master_seed = v;
    }
    if let Some(v) = args.m_points.clone().or(file.m_points.map(|m| m.into_vec())) {
        config.m_choices = v;
    }
    if let Some(v) = args.blur_sigma.clone().or(file.blur_sigma.map(|b| b.into_vec())) {
        config.blur_choices = v;
    }
    if let Some(v) = args.noise_sigma.or(file.noise_sigma) {
        config.noise_sigma = v;
    }
    if let Some(v) = args.order.or(file.order) {
        config.order = v;
    }
    if let Some(v) = args.width.or(file.width) {
        config.image_width = v;
    }
    if let Some(v) = args.height.or(file.height) {
        config.image_height = v;
    }
    config.center_crop = args.center_crop || file.center_crop.unwrap_or(false);
    config.limit = args.limit.or(file.limit);
    let workers = args.workers.or(file.workers);

    config.validate().map_err(usage)?;
    check_workers(workers)?;
    if !config.input_dir.is_dir() {
        return Err(CliError::Usage(format!(
            "input directory {} does not exist",
            config.input_dir.display()
        )));
    }
    Ok((config, workers))
}

pub fn run_gen_dataset(args: GenDatasetArgs) -> Result<(), CliError> {
    let (config, workers) = dataset_config(&args)?;
    let outcome = generate_dataset_with_workers(&config, workers).map_err(runtime)?;
    for (path, reason) in &outcome.skipped {
        eprintln!("skipped {}: {reason}", path.display());
    }
    println!(
        "{} rows written to {}",
        outcome.manifest.rows.len(),
        outcome.manifest_path.display()
    );
    let b = &outcome.baseline;
    let fmt = |v: Option<f64>, digits: usize| v.map_or("n/a".to_string(), |x| format!("{x:.digits$}"));
    println!(
        "baseline distorted vs clean: mean PSNR {} dB, mean SSIM {}",
        fmt(b.mean_psnr, 2),
        fmt(b.mean_ssim, 4)
    );
    Ok(())
}

pub fn run_evaluate(args: EvaluateArgs) -> Result<(), CliError> {
    check_workers(args.workers)?;
    if !args.manifest.is_file() {
        return Err(CliError::Usage(format!(
            "manifest {} does not exist",
            args.manifest.display()
        )));
    }
    let manifest = Manifest::load(&args.manifest).map_err(runtime)?;
    let report = evaluate_pairs_with_workers(&manifest, &args.restored_dir, args.workers);
    write_text(&args.report, &report.to_jsonl())?;
    print!("{}", report.to_table());
    for f in &report.failures {
        eprintln!("{}: {}", f.id, f.reason);
    }
    if report.failures.is_empty() {
        Ok(())
    } else {
        Err(CliError::Runtime(format!(
            "{} of {} items could not be evaluated",
            report.failures.len(),
            manifest.rows.len()
        )))
    }
}

pub fn run_viz_field(args: VizFieldArgs) -> Result<(), CliError> {
    let defaults = DegradationParams::default();
    let params = DegradationParams {
        eta: args.field.eta.unwrap_or(defaults.eta),
        patch_n: args.field.patch_n.unwrap_or(defaults.patch_n),
        field_sigma: args.field.field_sigma.unwrap_or(defaults.field_sigma),
        m_points: args.m_points.unwrap_or(DEFAULT_VIZ_M_POINTS),
        seed: args.seed.unwrap_or(0),
        ..defaults
    };
    params.validate().map_err(usage)?;
    let w = args.width.unwrap_or(DEFAULT_IMAGE_SIZE);
    let h = args.height.unwrap_or(DEFAULT_IMAGE_SIZE);
    let field = accumulate_field(w, h, &params, &mut stream(params.seed, Stream::Field)).map_err(usage)?;
    let img = visualize_field(&field).map_err(runtime)?;
    if let Some(parent) = args.output.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|e| runtime(format!("{}: {e}", parent.display())))?;
    }
    save_png(&img, &args.output).map_err(runtime)?;
    let max = field
        .dx()
        .iter()
        .zip(field.dy())
        .map(|(x, y)| x.hypot(*y))
        .fold(0.0, f64::max);
    println!("wrote {} ({w}x{h}, max displacement {max:.4} px)", args.output.display());
    Ok(())
}

fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|e| runtime(format!("{}: {e}", parent.display())))?;
    }
    fs::write(path, text).map_err(|e| runtime(format!("{}: {e}", path.display())))
}
