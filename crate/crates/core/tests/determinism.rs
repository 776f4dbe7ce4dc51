//! Seed-stream reproducibility and independence from block boundaries.

use proptest::prelude::*;
use slln_core::generators::{sample_x_block, sample_y_block};
use slln_core::{BaseDist, Error, SeedStream, StreamTag, XModel, XVariant, YModel, YVariant};

fn x_models() -> Vec<XModel> {
    vec![
        XModel::iid(BaseDist::Normal { sigma: 1.0 }).unwrap(),
        XModel::new(XVariant::WalshRademacher { generators: 12 }, 1).unwrap(),
        XModel::new(XVariant::Congruential { modulus: 4099 }, 1).unwrap(),
        XModel::new(
            XVariant::Cyclic(vec![BaseDist::Rademacher, BaseDist::Normal { sigma: 2.0 }]),
            1,
        )
        .unwrap(),
    ]
}

fn y_models() -> Vec<YModel> {
    vec![
        YModel::new(YVariant::IidPareto { beta: 0.8 }, 0.5, 0.0).unwrap(),
        YModel::new(YVariant::IidCauchy, 0.5, 0.0).unwrap(),
        YModel::new(
            YVariant::ComonotoneScaled {
                beta: 0.8,
                scale_exponent: 0.3,
            },
            0.5,
            0.6,
        )
        .unwrap(),
    ]
}

#[test]
fn same_seed_same_samples() {
    let seed = SeedStream::new(99, 4, StreamTag::X);
    for m in x_models() {
        assert_eq!(
            sample_x_block(&m, 1..2001, seed).unwrap(),
            sample_x_block(&m, 1..2001, seed).unwrap()
        );
    }
}

#[test]
fn streams_differ_by_replica_and_tag() {
    let m = XModel::iid(BaseDist::Normal { sigma: 1.0 }).unwrap();
    let a = sample_x_block(&m, 1..101, SeedStream::new(1, 0, StreamTag::X)).unwrap();
    let b = sample_x_block(&m, 1..101, SeedStream::new(1, 1, StreamTag::X)).unwrap();
    let c = sample_x_block(&m, 1..101, SeedStream::new(1, 0, StreamTag::Y)).unwrap();
    assert_ne!(a, b);
    assert_ne!(a, c);
}

#[test]
fn capacity_and_range_errors() {
    let w = XModel::new(XVariant::WalshRademacher { generators: 3 }, 1).unwrap();
    let s = SeedStream::new(1, 0, StreamTag::X);
    assert!(sample_x_block(&w, 1..8, s).is_ok());
    assert!(matches!(
        sample_x_block(&w, 1..9, s),
        Err(Error::Capacity { limit: 7, .. })
    ));
    assert!(sample_x_block(&w, 0..3, s).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn block_splits_do_not_change_values(
        seed in any::<u64>(),
        replica in 0u64..1000,
        start in 1u64..2000,
        len in 1u64..700,
        cut_frac in 0.0f64..1.0,
    ) {
        let cut = start + ((len as f64) * cut_frac) as u64;
        let sx = SeedStream::new(seed, replica, StreamTag::X);
        for m in x_models() {
            let whole = sample_x_block(&m, start..start + len, sx).unwrap();
            let mut parts = sample_x_block(&m, start..cut, sx).unwrap();
            parts.extend(sample_x_block(&m, cut..start + len, sx).unwrap());
            prop_assert_eq!(whole, parts);
        }
        let sy = SeedStream::new(seed, replica, StreamTag::Y);
        for m in y_models() {
            let whole = sample_y_block(&m, start..start + len, sy).unwrap();
            let mut parts = sample_y_block(&m, start..cut, sy).unwrap();
            parts.extend(sample_y_block(&m, cut..start + len, sy).unwrap());
            prop_assert_eq!(whole, parts);
        }
    }
}
