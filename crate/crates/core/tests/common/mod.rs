#![allow(dead_code)]

use std::sync::OnceLock;

use crystalline::build::{assemble, BuildConfig, CrystallineMeasure};
use crystalline::meyer::{build_meyer, Method, MeyerCoefficients, WindowSpec, DEFAULT_SEED};
use crystalline::rational::ratio;

pub fn default_build() -> &'static CrystallineMeasure {
    static FM: OnceLock<CrystallineMeasure> = OnceLock::new();
    FM.get_or_init(|| assemble(&BuildConfig::default()).expect("default build"))
}

pub fn single_level_build() -> &'static CrystallineMeasure {
    static FM: OnceLock<CrystallineMeasure> = OnceLock::new();
    FM.get_or_init(|| {
        assemble(&BuildConfig {
            levels: vec![1],
            ..BuildConfig::default()
        })
        .expect("single-level build")
    })
}

pub fn meyer(m: u64) -> MeyerCoefficients {
    let w = WindowSpec::new(m, ratio(1, 8)).unwrap();
    build_meyer(&w, Method::AlternatingProjection, DEFAULT_SEED, 1e-9).unwrap()
}

pub fn sigma32() -> &'static MeyerCoefficients {
    static S: OnceLock<MeyerCoefficients> = OnceLock::new();
    S.get_or_init(|| meyer(32))
}
