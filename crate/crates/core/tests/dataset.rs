mod common;

use std::fs;
use std::path::Path;

use atmoturb::datagen::{
    generate_dataset_with_workers, params_for_index, DatasetConfig, Manifest, ManifestRow,
    BASELINE_FILE, DISTORT_DIR, MANIFEST_FILE,
};
use atmoturb::metrics::{evaluate_pairs, MetricReport};
use atmoturb::turbsim::degrade;
use atmoturb::{load_png, save_png, synth, Error, Image};
use common::{snapshot, write_faces};

fn config(input: &Path, output: &Path) -> DatasetConfig {
    let mut c = DatasetConfig::new(input, output);
    c.master_seed = 7;
    c
}

fn images_only(root: &Path) -> Vec<(String, Vec<u8>)> {
    snapshot(root).into_iter().filter(|(p, _)| p.ends_with(".png")).collect()
}

#[test]
fn single_item_matches_standalone_degrade() {
    let tmp = tempfile::tempdir().unwrap();
    let input = tmp.path().join("in");
    write_faces(&input, 3, 1);
    let mut cfg = config(&input, &tmp.path().join("out"));
    cfg.limit = Some(1);
    let outcome = generate_dataset_with_workers(&cfg, Some(1)).unwrap();
    assert_eq!(outcome.manifest.rows.len(), 1);

    let row = &outcome.manifest.rows[0];
    assert_eq!(row.source, "face_0000.png");
    assert_eq!(row.params, params_for_index(&cfg, 0));
    let clean = load_png(outcome.manifest.resolve(&row.clean_path)).unwrap();
    let quad = degrade(&clean, &row.params).unwrap();
    for (rel, img) in [
        (&row.clean_path, &quad.clean),
        (&row.blurred_path, &quad.blurred),
        (&row.deformed_path, &quad.deformed),
        (&row.distorted_path, &quad.distorted),
    ] {
        assert_eq!(&load_png(outcome.manifest.resolve(rel)).unwrap(), &img.quantized(), "{rel}");
    }
}

#[test]
fn runs_are_reproducible_across_dirs_and_workers() {
    let tmp = tempfile::tempdir().unwrap();
    let input = tmp.path().join("in");
    write_faces(&input, 6, 2);
    let a = tmp.path().join("a");
    let b = tmp.path().join("b");
    let ra = generate_dataset_with_workers(&config(&input, &a), Some(1)).unwrap();
    let rb = generate_dataset_with_workers(&config(&input, &b), Some(4)).unwrap();
    assert_eq!(images_only(&a), images_only(&b));
    assert_eq!(ra.manifest.rows, rb.manifest.rows);
    assert_eq!(fs::read(a.join(BASELINE_FILE)).unwrap(), fs::read(b.join(BASELINE_FILE)).unwrap());

    // Regenerating into the same directory overwrites with identical content.
    let before = snapshot(&a);
    generate_dataset_with_workers(&config(&input, &a), Some(2)).unwrap();
    assert_eq!(snapshot(&a), before);
}

#[test]
fn master_seed_changes_output() {
    let tmp = tempfile::tempdir().unwrap();
    let input = tmp.path().join("in");
    write_faces(&input, 2, 3);
    let a = tmp.path().join("a");
    let b = tmp.path().join("b");
    generate_dataset_with_workers(&config(&input, &a), Some(1)).unwrap();
    let mut other = config(&input, &b);
    other.master_seed = 8;
    generate_dataset_with_workers(&other, Some(1)).unwrap();
    let da = fs::read(a.join(DISTORT_DIR).join("000000.png")).unwrap();
    let db = fs::read(b.join(DISTORT_DIR).join("000000.png")).unwrap();
    assert_ne!(da, db);
}

#[test]
fn empty_input_is_an_error() {
    let tmp = tempfile::tempdir().unwrap();
    let input = tmp.path().join("in");
    fs::create_dir_all(&input).unwrap();
    fs::write(input.join("notes.txt"), "x").unwrap();
    let err = generate_dataset_with_workers(&config(&input, &tmp.path().join("out")), Some(1));
    assert!(matches!(err, Err(Error::EmptyInput(_))));
}

#[test]
fn wrong_sizes_are_skipped_or_cropped() {
    let tmp = tempfile::tempdir().unwrap();
    let input = tmp.path().join("in");
    write_faces(&input, 2, 4);
    save_png(&synth::face(130, 4, 8), input.join("face_big.png")).unwrap();
    save_png(&synth::face(64, 4, 9), input.join("face_small.png")).unwrap();

    let out = tmp.path().join("strict");
    let strict = generate_dataset_with_workers(&config(&input, &out), Some(1)).unwrap();
    assert_eq!(strict.manifest.rows.len(), 2);
    assert_eq!(strict.skipped.len(), 2);

    let mut cfg = config(&input, &tmp.path().join("crop"));
    cfg.center_crop = true;
    let cropped = generate_dataset_with_workers(&cfg, Some(1)).unwrap();
    assert_eq!(cropped.manifest.rows.len(), 3);
    assert_eq!(cropped.skipped.len(), 1);
    let big = cropped.manifest.rows.iter().find(|r| r.source == "face_big.png").unwrap();
    let clean = load_png(cropped.manifest.resolve(&big.clean_path)).unwrap();
    assert_eq!(clean.shape(), (112, 112, 3));
    let expected = synth::face(130, 4, 8).quantized().center_crop(112, 112).unwrap();
    assert_eq!(clean, expected);
}

#[test]
fn evaluation_round_trips() {
    let tmp = tempfile::tempdir().unwrap();
    let input = tmp.path().join("in");
    write_faces(&input, 5, 5);
    let out = tmp.path().join("out");
    let outcome = generate_dataset_with_workers(&config(&input, &out), Some(2)).unwrap();
    let manifest = Manifest::load(out.join(MANIFEST_FILE)).unwrap();
    assert_eq!(manifest.rows, outcome.manifest.rows);

    let perfect = evaluate_pairs(&manifest, &out.join("clean"));
    assert_eq!(perfect.count, 5);
    assert_eq!(perfect.max_psnr_count, 5);
    assert_eq!(perfect.mean_ssim, Some(1.0));
    assert_eq!(perfect.mean_psnr, None);

    let replay = evaluate_pairs(&manifest, &out.join(DISTORT_DIR));
    assert_eq!(replay, outcome.baseline);
    assert_eq!(replay.to_jsonl(), fs::read_to_string(out.join(BASELINE_FILE)).unwrap());

    fs::remove_file(out.join(DISTORT_DIR).join("000002.png")).unwrap();
    let partial = evaluate_pairs(&manifest, &out.join(DISTORT_DIR));
    assert_eq!(partial.count, 4);
    assert_eq!(partial.failures.len(), 1);
    assert_eq!(partial.failures[0].id, "000002");
}

#[test]
fn empty_manifest_gives_empty_report() {
    let manifest = Manifest {
        root: "/nowhere".into(),
        config: DatasetConfig::new("/in", "/out"),
        rows: Vec::new(),
    };
    let report = evaluate_pairs(&manifest, Path::new("/nowhere"));
    assert_eq!(report, MetricReport::from_items(Vec::new(), Vec::new()));
    assert_eq!(report.count, 0);
    assert_eq!(report.mean_psnr, None);
}

#[test]
fn manifest_text_round_trips_and_rejects_duplicates() {
    let tmp = tempfile::tempdir().unwrap();
    let input = tmp.path().join("in");
    write_faces(&input, 2, 6);
    let out = tmp.path().join("out");
    let outcome = generate_dataset_with_workers(&config(&input, &out), Some(1)).unwrap();
    let text = outcome.manifest.to_jsonl();
    let parsed = Manifest::parse(&text, &out).unwrap();
    assert_eq!(parsed.rows, outcome.manifest.rows);
    assert_eq!(parsed.config, outcome.manifest.config);
    assert_eq!(parsed.to_jsonl(), text);

    let mut rows: Vec<ManifestRow> = outcome.manifest.rows.clone();
    rows[1].id = rows[0].id.clone();
    let dup = Manifest { rows, ..outcome.manifest.clone() };
    assert!(Manifest::parse(&dup.to_jsonl(), &out).is_err());
}

#[test]
fn quantized_clean_is_a_fixed_point_of_storage() {
    let img = synth::face(40, 1, 0).quantized();
    let tmp = tempfile::tempdir().unwrap();
    let p = tmp.path().join("q.png");
    save_png(&img, &p).unwrap();
    let back: Image = load_png(&p).unwrap();
    assert_eq!(back, img);
}
