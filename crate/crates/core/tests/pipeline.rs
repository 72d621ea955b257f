use std::fs;

use anomeval::data::{
    check_label_consistency, generate_synthetic, generate_training, labels_from_events,
    load_events, load_frame, AnomalySignal, SyntheticSpec,
};
use anomeval::pca::{self, PcaConfig, ScoredModel};
use anomeval::protocols::score_all;
use anomeval::{PredictionSeries, Protocol};
use tempfile::TempDir;

fn spec(signal: AnomalySignal) -> SyntheticSpec {
    SyntheticSpec {
        total_points: 4000,
        event_lengths: vec![60, 120, 40, 80],
        channels: 6,
        anomaly_signal: signal,
        min_gap: 10,
        magnitude: 3.0,
        seed: 17,
    }
}

#[test]
fn files_to_report() {
    let tmp = TempDir::new().unwrap();
    let s = spec(AnomalySignal::MeanShift);
    let test_path = tmp.path().join("test.csv");
    let train_path = tmp.path().join("train.csv");
    generate_synthetic(&s)
        .unwrap()
        .write_csv(fs::File::create(&test_path).unwrap())
        .unwrap();
    generate_training(&s, 4000)
        .unwrap()
        .write_csv(fs::File::create(&train_path).unwrap())
        .unwrap();

    let train = load_frame(&train_path).unwrap();
    let test = load_frame(&test_path).unwrap();
    assert!(train.labels().is_none());
    let labels = test.labels().unwrap().clone();
    assert_eq!(labels.events().len(), 4);

    let model = pca::fit(&train, &PcaConfig::default()).unwrap();
    let model_path = tmp.path().join("model.json");
    model.save(&model_path).unwrap();
    let reloaded = ScoredModel::load(&model_path).unwrap();
    let scores = reloaded.score(&test).unwrap();
    assert_eq!(scores.scores, model.score(&test).unwrap().scores);

    let choice = pca::sweep_threshold(&scores, &labels, Protocol::PointWise).unwrap();
    let preds = PredictionSeries::from_scores(&scores.scores, choice.threshold);
    let reports = score_all(&labels, &preds, &Protocol::ALL).unwrap();
    assert_eq!(reports[0], choice.report);
    // Point-adjust can only inflate the point-wise score.
    assert!(reports[1].f1 >= reports[0].f1);
    assert!(reports.iter().all(|r| (0.0..=1.0).contains(&r.f1)));
}

#[test]
fn every_signal_is_detectable() {
    for signal in [
        AnomalySignal::MeanShift,
        AnomalySignal::VarianceBurst,
        AnomalySignal::ChannelDrift,
    ] {
        let s = spec(signal);
        let test = generate_synthetic(&s).unwrap();
        let model = pca::fit(&generate_training(&s, 4000).unwrap(), &PcaConfig::default()).unwrap();
        let scores = model.score(&test).unwrap();
        let labels = test.labels().unwrap();
        let choice = pca::sweep_threshold(&scores, labels, Protocol::EventWise).unwrap();
        assert!(
            choice.report.recall > 0.0,
            "{signal:?} left every event undetected"
        );
    }
}

#[test]
fn event_file_reconstruction() {
    let tmp = TempDir::new().unwrap();
    let test = generate_synthetic(&spec(AnomalySignal::ChannelDrift)).unwrap();
    let labels = test.labels().unwrap();
    let mut text = String::from("start,end\n");
    for e in labels.events() {
        text.push_str(&format!("{},{}\n", e.start, e.end + 1));
    }
    let path = tmp.path().join("events.csv");
    fs::write(&path, text).unwrap();

    let rebuilt = labels_from_events(&load_events(&path, true).unwrap(), labels.len()).unwrap();
    assert!(check_label_consistency(labels, &rebuilt)
        .unwrap()
        .is_empty());
    // Reading exclusive ends as inclusive adds one point after every event.
    let shifted = labels_from_events(&load_events(&path, false).unwrap(), labels.len()).unwrap();
    let diff = check_label_consistency(labels, &shifted).unwrap();
    assert_eq!(diff.reconstructed_only, labels.events().len());
    assert_eq!(diff.integrated_only, 0);
}
