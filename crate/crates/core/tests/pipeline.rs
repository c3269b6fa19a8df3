use opbit::fec::Codec;
use opbit::harness::{
    run_ber, run_roundtrip, snr_grid, write_csv, CodeChoice, ExperimentConfig, CSV_HEADER,
};
use opbit::receiver::receive_stream;
use opbit::fec::pack_frames;
use opbit::falling_storage::RandomBuSource;
use opbit::{FallingStorage, Scheme, SchemeParams, SnrConvention, SnrSpec};

fn config(code: CodeChoice, n_bus: u64) -> ExperimentConfig {
    ExperimentConfig {
        scheme: Scheme::Proposed,
        params: SchemeParams::new(36, 4, 64).unwrap(),
        snr_grid: snr_grid(2.0, 6.0, 2.0, SnrConvention::EbN0Info).unwrap(),
        code,
        n_bus,
        master_seed: 11,
        min_errors: 50,
        paired_noise: false,
    }
}

#[test]
fn stream_survives_storage_and_receiver() {
    let params = SchemeParams::new(20, 3, 40).unwrap();
    let mut src = RandomBuSource::new(params, 5, Some(1_000));
    let mut sent = Vec::new();
    let mut storage = FallingStorage::new(params);
    let mut rec = RecordingIter { inner: &mut src, log: &mut sent };
    storage.accumulate(&mut rec).unwrap();
    let mut frames = Vec::new();
    while storage.occupancy() > 0 {
        frames.push(storage.inject_round(&mut rec).unwrap());
    }
    let packed = pack_frames(&frames, 17);
    let flat: Vec<u8> = packed.blocks.concat();
    let got = receive_stream(&flat, &params, packed.pad_len).unwrap();
    let genuine: Vec<_> = frames
        .iter()
        .flat_map(|f| f.origins().iter().copied())
        .zip(got.iter())
        .filter_map(|(o, bu)| o.map(|o| (o, bu.clone())))
        .collect();
    assert_eq!(genuine.len(), 1_000);
    for (ordinal, bu) in genuine {
        assert_eq!(sent[ordinal as usize].bits(), bu.bits());
    }
}

struct RecordingIter<'a> {
    inner: &'a mut RandomBuSource,
    log: &'a mut Vec<opbit::BitUnit>,
}

impl opbit::falling_storage::BuSource for RecordingIter<'_> {
    fn next_bu(&mut self) -> Option<opbit::BitUnit> {
        let bu = self.inner.next_bu()?;
        self.log.push(bu.clone());
        Some(bu)
    }
}

#[test]
fn noiseless_roundtrip_with_ldpc() {
    let codec = CodeChoice::shipped_ldpc().build().unwrap();
    let params = SchemeParams::new(36, 4, 32).unwrap();
    let report = run_roundtrip(params, 500, 3, &codec).unwrap();
    assert!(report.passed(), "{report:?}");
    assert_eq!(report.symbols % 1296, 0);
}

#[test]
fn rate1_roundtrip_other_shapes() {
    for (n, k, m) in [(8, 1, 1), (8, 3, 5), (12, 0, 4), (33, 5, 100)] {
        let params = SchemeParams::new(n, k, m).unwrap();
        let report = run_roundtrip(params, 700, 9, &Codec::Rate1).unwrap();
        assert!(report.passed(), "n={n} k={k} m={m}: {report:?}");
    }
}

#[test]
fn ber_sweep_is_deterministic_and_monotone() {
    let cfg = config(CodeChoice::Rate1, 200_000);
    let a = run_ber(&cfg).unwrap();
    let b = run_ber(&cfg).unwrap();
    let (mut x, mut y) = (Vec::new(), Vec::new());
    write_csv(&[&a], &mut x).unwrap();
    write_csv(&[&b], &mut y).unwrap();
    assert_eq!(x, y);
    assert!(String::from_utf8(x).unwrap().starts_with(CSV_HEADER));
    let ber: Vec<f64> = a.points.iter().map(|p| p.ber()).collect();
    assert!(ber.windows(2).all(|w| w[1] < w[0]), "{ber:?}");
}

#[test]
fn noiseless_point_has_no_errors() {
    let mut cfg = config(CodeChoice::Rate1, 5_000);
    cfg.snr_grid = vec![SnrSpec::new(f64::INFINITY, SnrConvention::EsN0)];
    for scheme in [Scheme::Proposed, Scheme::Conventional] {
        let r = run_ber(&cfg.with_scheme(scheme)).unwrap();
        assert_eq!(r.points[0].errors, 0);
        assert_eq!(r.points[0].bus, 5_000);
    }
}

#[test]
fn rejects_bad_configs() {
    let mut cfg = config(CodeChoice::Rate1, 10);
    assert!(run_ber(&cfg).is_err());
    cfg.n_bus = 1_000;
    cfg.snr_grid.push(SnrSpec::new(1.0, SnrConvention::EsN0));
    assert!(run_ber(&cfg).is_err());
}
