use std::collections::BTreeSet;
use std::path::Path;

use faceflow::featio::{decode_feature, encode_feature};
use faceflow::flo::{decode_flo, encode_flo, read_flo, write_flo};
use faceflow::imageio::{save_image, RasterFormat};
use faceflow::landmarks::{parse_landmark_csv, write_landmark_csv, CsvSchema};
use faceflow::manifest::{build_manifest, split_counts, Split};
use faceflow::Error;
use faceflow_core::ingest::LANDMARK_COUNT;
use faceflow_core::viz::{colorize, Normalization};
use faceflow_core::{FlowField, Image, LandmarkFrame, Point2};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_f32_flow(rng: &mut ChaCha8Rng) -> FlowField {
    let (h, w) = (rng.gen_range(1..=128), rng.gen_range(1..=128));
    FlowField::from_fn(h, w, |_, _| {
        // Arbitrary finite f32 bit patterns, not just "nice" values.
        let mut f = || loop {
            let v = f32::from_bits(rng.gen());
            if v.is_finite() {
                return v as f64;
            }
        };
        [f(), f()]
    })
    .unwrap()
}

#[test]
fn thousand_flo_round_trips_are_bit_exact() {
    let dir = tempfile::tempdir().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1000);
    for i in 0..1000 {
        let f = random_f32_flow(&mut rng);
        let bytes = encode_flo(&f);
        assert_eq!(bytes.len(), 12 + 8 * f.height() * f.width());
        let back = decode_flo(&bytes, Path::new("mem")).unwrap();
        assert_eq!(encode_flo(&back), bytes);
        assert!(back
            .data()
            .iter()
            .flatten()
            .zip(f.data().iter().flatten())
            .all(|(a, b)| a.to_bits() == b.to_bits()));
        if i % 100 == 0 {
            let p = dir.path().join(format!("{i}.flo"));
            write_flo(&p, &f).unwrap();
            assert_eq!(std::fs::read(&p).unwrap(), bytes);
            assert_eq!(read_flo(&p).unwrap(), f);
        }
    }
}

#[test]
fn large_field_survives_the_file_system() {
    let dir = tempfile::tempdir().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let f = FlowField::from_fn(384, 512, |_, _| {
        [
            rng.gen_range(-20.0..20.0f32) as f64,
            rng.gen_range(-20.0..20.0f32) as f64,
        ]
    })
    .unwrap();
    let p = dir.path().join("big.flo");
    write_flo(&p, &f).unwrap();
    assert_eq!(read_flo(&p).unwrap(), f);
}

#[test]
fn corrupt_flo_files_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let good = encode_flo(&FlowField::constant(4, 5, 1.0, 2.0).unwrap());
    let p = dir.path().join("bad.flo");
    let mut bad = good.clone();
    bad[..4].copy_from_slice(&202021.0f32.to_le_bytes());
    std::fs::write(&p, &bad).unwrap();
    assert!(matches!(read_flo(&p), Err(Error::BadMagic { .. })));
    std::fs::write(&p, &good[..good.len() - 4]).unwrap();
    assert!(matches!(read_flo(&p), Err(Error::TruncatedFile { .. })));
    assert!(matches!(
        read_flo(&dir.path().join("missing.flo")),
        Err(Error::Io { .. })
    ));
}

fn landmark_frames() -> impl Strategy<Value = Vec<LandmarkFrame>> {
    prop::collection::vec(
        prop::collection::vec((-1e4..1e4f64, -1e4..1e4f64), LANDMARK_COUNT),
        1..4,
    )
    .prop_map(|rows| {
        rows.into_iter()
            .enumerate()
            .map(|(i, pts)| {
                LandmarkFrame::new(
                    i as u64,
                    pts.into_iter().map(|(x, y)| Point2::new(x, y)).collect(),
                    None,
                )
                .unwrap()
            })
            .collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn landmark_csv_round_trips(frames in landmark_frames(), interleaved in any::<bool>()) {
        let schema = if interleaved { CsvSchema::Interleaved } else { CsvSchema::XThenY };
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("t.csv");
        write_landmark_csv(&p, &frames, schema).unwrap();
        let back = parse_landmark_csv(&p, schema).unwrap();
        prop_assert_eq!(back.len(), frames.len());
        for (a, b) in back.iter().zip(&frames) {
            for (p, q) in a.points().iter().zip(b.points()) {
                prop_assert!((p.x - q.x).abs() <= 1e-9 && (p.y - q.y).abs() <= 1e-9);
            }
        }
    }

    #[test]
    fn feature_round_trips(h in 1usize..30, w in 1usize..30, c in 1usize..4, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let img = Image::from_fn(h, w, c, |_, _, _| rng.gen_range(-5.0..5.0f32) as f64);
        prop_assert_eq!(decode_feature(&encode_feature(&img), Path::new("m")).unwrap(), img);
    }

    #[test]
    fn per_image_colorize_ignores_positive_scaling(seed in any::<u64>(), h in 1usize..24, w in 1usize..24) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = FlowField::from_fn(h, w, |_, _| [rng.gen_range(-9.0..9.0), rng.gen_range(-9.0..9.0)]).unwrap();
        let a = colorize(&f, Normalization::PerImage);
        let b = colorize(&f.scaled(3.0, 3.0), Normalization::PerImage);
        prop_assert_eq!(a.rgb, b.rgb);
    }
}

#[test]
fn uniform_field_is_a_single_saturated_hue() {
    let v = colorize(
        &FlowField::constant(6, 9, 1.0, 0.0).unwrap(),
        Normalization::PerImage,
    );
    let first = &v.rgb[..3];
    assert!(v.rgb.chunks(3).all(|px| px == first));
    // Full saturation: a pure wheel colour has a 255 channel and a 0 channel.
    assert!(first.contains(&255) && first.contains(&0), "{first:?}");
    assert_eq!(v.max_magnitude_used, 1.0);
    let zero = colorize(&FlowField::zeros(4, 4).unwrap(), Normalization::PerImage);
    assert!(zero.rgb.iter().all(|&c| c == 255));
}

/// Dataset directory with one track per id and a frame image per track.
fn dataset(ids: &[String]) -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    let pts: Vec<Point2> = (0..LANDMARK_COUNT)
        .map(|i| Point2::new(i as f64, (i * 2) as f64))
        .collect();
    let frames: Vec<_> = (0..2)
        .map(|k| LandmarkFrame::new(k, pts.clone(), None).unwrap())
        .collect();
    for id in ids {
        write_landmark_csv(
            &dir.path().join(format!("{id}.csv")),
            &frames,
            CsvSchema::XThenY,
        )
        .unwrap();
        std::fs::create_dir(dir.path().join(id)).unwrap();
        save_image(
            &dir.path().join(id).join("0001.png"),
            &Image::zeros(6, 8, 3),
            RasterFormat::Png,
        )
        .unwrap();
    }
    dir
}

#[test]
fn manifest_splits_are_subject_disjoint_and_seeded() {
    let ids: Vec<String> = (0..41)
        .flat_map(|s| (0..2).map(move |t| format!("P{s:03}_T{t}")))
        .collect();
    let dir = dataset(&ids);
    let fr = [0.7, 0.2, 0.1];
    let a = build_manifest(dir.path(), fr, CsvSchema::XThenY, 42).unwrap();
    assert_eq!(
        a,
        build_manifest(dir.path(), fr, CsvSchema::XThenY, 42).unwrap()
    );
    assert_ne!(
        a,
        build_manifest(dir.path(), fr, CsvSchema::XThenY, 43).unwrap()
    );
    assert_eq!(a.entries.len(), 82);
    assert!(a
        .entries
        .iter()
        .all(|e| e.frame_count == 2 && e.image_size.height == 6 && e.image_size.width == 8));

    let sets: Vec<BTreeSet<&str>> = Split::ALL.iter().map(|s| a.subjects(*s)).collect();
    let sizes: Vec<usize> = sets.iter().map(|s| s.len()).collect();
    // Counting oracle: 41 subjects at 70/20/10 is 28.7/8.2/4.1.
    for (got, want) in sizes.iter().zip([28.7f64, 8.2, 4.1]) {
        assert!((*got as f64 - want).abs() <= 1.0, "{sizes:?}");
    }
    assert_eq!(sizes, split_counts(41, fr));
    for i in 0..3 {
        for j in i + 1..3 {
            assert!(sets[i].is_disjoint(&sets[j]));
        }
    }
    let union: BTreeSet<&str> = a.entries.iter().map(|e| e.sequence_id.as_str()).collect();
    assert_eq!(union.len(), ids.len());
}

#[test]
fn single_subject_lands_in_one_split() {
    let ids: Vec<String> = (0..3).map(|t| format!("F001_T{t}")).collect();
    let dir = dataset(&ids);
    let m = build_manifest(dir.path(), [0.8, 0.1, 0.1], CsvSchema::XThenY, 0).unwrap();
    let splits: BTreeSet<Split> = m.entries.iter().map(|e| e.split).collect();
    assert_eq!(splits.len(), 1);
}

#[test]
fn manifest_building_errors() {
    let dir = tempfile::tempdir().unwrap();
    assert!(matches!(
        build_manifest(dir.path(), [0.8, 0.1, 0.1], CsvSchema::XThenY, 0),
        Err(Error::EmptyDataset(_))
    ));
    assert!(matches!(
        build_manifest(dir.path(), [0.8, 0.1, 0.2], CsvSchema::XThenY, 0),
        Err(Error::BadFractions(_))
    ));
}
