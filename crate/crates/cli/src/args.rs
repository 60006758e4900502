use std::path::PathBuf;

use atmoturb::datagen::OrderChoice;
use clap::{Args, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(
    name = "atmoturb",
    version,
    about = "Simulate turbulence-degraded images and score restorations",
    after_help = "Exit status: 0 on success, 1 on usage errors, 2 on runtime errors."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Degrade one image and write clean/blur/deform/distort PNGs plus params.json.
    Degrade(DegradeArgs),
    /// Degrade every PNG in a directory into a dataset with a manifest.
    GenDataset(GenDatasetArgs),
    /// Score restored images against the clean images of a dataset.
    Evaluate(EvaluateArgs),
    /// Render the magnitude of a random motion field as a grayscale PNG.
    VizField(VizFieldArgs),
}

/// Motion-field flags shared by every subcommand that builds a field.
#[derive(Args, Debug, Default, Clone)]
pub struct FieldArgs {
    /// Field strength [default: 0.13]
    #[arg(long)]
    pub eta: Option<f64>,
    /// Side of each random patch in pixels [default: 4]
    #[arg(long)]
    pub patch_n: Option<usize>,
    /// Std of the Gaussian smoothing the patch noise [default: 16]
    #[arg(long)]
    pub field_sigma: Option<f64>,
}

#[derive(Args, Debug)]
pub struct DegradeArgs {
    /// Input PNG (8 or 16 bit, grayscale or RGB)
    #[arg(long)]
    pub input: PathBuf,
    /// Directory for clean.png, blur.png, deform.png, distort.png and params.json
    #[arg(long)]
    pub output_dir: PathBuf,
    /// Seed for the field, noise and any sampled parameters [default: 0]
    #[arg(long)]
    pub seed: Option<u64>,
    #[command(flatten)]
    pub field: FieldArgs,
    /// Number of patches in the field [default: sampled from 1000,3000,7000,10000]
    #[arg(long)]
    pub m_points: Option<usize>,
    /// Blur std in pixels, 0 disables blur [default: sampled from 1,2,3,4]
    #[arg(long)]
    pub blur_sigma: Option<f64>,
    /// Std of additive Gaussian noise [default: 0]
    #[arg(long)]
    pub noise_sigma: Option<f64>,
    /// Composition order of blur and warp [default: random]
    #[arg(long, value_parser = parse_order)]
    pub order: Option<OrderChoice>,
}

#[derive(Args, Debug)]
pub struct GenDatasetArgs {
    /// TOML file whose keys are these flag names without the leading dashes
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Directory of input PNGs
    #[arg(long)]
    pub input_dir: Option<PathBuf>,
    /// Output directory
    #[arg(long)]
    pub output_dir: Option<PathBuf>,
    /// Master seed [default: 0]
    #[arg(long)]
    pub seed: Option<u64>,
    #[command(flatten)]
    pub field: FieldArgs,
    /// Comma-separated patch counts sampled per image [default: 1000,3000,7000,10000]
    #[arg(long, value_delimiter = ',')]
    pub m_points: Option<Vec<usize>>,
    /// Comma-separated blur stds sampled per image [default: 1,2,3,4]
    #[arg(long, value_delimiter = ',')]
    pub blur_sigma: Option<Vec<f64>>,
    /// Std of additive Gaussian noise [default: 0]
    #[arg(long)]
    pub noise_sigma: Option<f64>,
    /// Composition order of blur and warp [default: random]
    #[arg(long, value_parser = parse_order)]
    pub order: Option<OrderChoice>,
    /// Required image width [default: 112]
    #[arg(long)]
    pub width: Option<usize>,
    /// Required image height [default: 112]
    #[arg(long)]
    pub height: Option<usize>,
    /// Center-crop larger inputs instead of skipping them [default: off]
    #[arg(long)]
    pub center_crop: bool,
    /// Use only the first N inputs in filename order [default: all]
    #[arg(long)]
    pub limit: Option<usize>,
    /// Worker threads [default: number of cores]
    #[arg(long)]
    pub workers: Option<usize>,
}

#[derive(Args, Debug)]
pub struct EvaluateArgs {
    /// manifest.jsonl of the dataset
    #[arg(long)]
    pub manifest: PathBuf,
    /// Directory holding <id>.png restorations
    #[arg(long)]
    pub restored_dir: PathBuf,
    /// Where to write the JSON Lines report
    #[arg(long)]
    pub report: PathBuf,
    /// Worker threads [default: number of cores]
    #[arg(long)]
    pub workers: Option<usize>,
}

#[derive(Args, Debug)]
pub struct VizFieldArgs {
    /// Output PNG
    #[arg(long)]
    pub output: PathBuf,
    /// Field width in pixels [default: 112]
    #[arg(long)]
    pub width: Option<usize>,
    /// Field height in pixels [default: 112]
    #[arg(long)]
    pub height: Option<usize>,
    /// Field seed [default: 0]
    #[arg(long)]
    pub seed: Option<u64>,
    #[command(flatten)]
    pub field: FieldArgs,
    /// Number of patches in the field [default: 10000]
    #[arg(long)]
    pub m_points: Option<usize>,
}

fn parse_order(s: &str) -> Result<OrderChoice, String> {
    s.parse::<OrderChoice>()
        .map_err(|_| format!("expected one of blur-warp, warp-blur, random; got {s:?}"))
}
