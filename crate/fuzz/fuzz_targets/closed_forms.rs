#![no_main]

use libfuzzer_sys::fuzz_target;
use qcorr::channels::{evolve_params, ChannelKind};
use qcorr::measures::{discord_bd, discord_filtered, one_norm_gqd_bd, one_norm_gqd_filtered};
use qcorr::states::order_correlations;
use qcorr::{BellDiagonalParams, FilterSetting};

// Five little-endian f64s (c1, c2, c3, k, p) followed by a channel byte.
fuzz_target!(|data: &[u8]| {
    if data.len() < 41 {
        return;
    }
    let v: Vec<f64> = data[..40]
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    let Ok(params) = BellDiagonalParams::new(v[0], v[1], v[2]) else {
        return;
    };
    let kind = ChannelKind::ALL[data[40] as usize % 3];
    let Ok(evolved) = evolve_params(kind, v[4], &params) else {
        return;
    };
    let q = discord_bd(&evolved);
    assert!(q.discord.is_finite() && q.discord >= -1e-9 && q.discord <= 1.0 + 1e-9);
    let g = one_norm_gqd_bd(&evolved).value;
    assert!((0.0..=0.5 + 1e-12).contains(&g));
    if let Ok(f) = FilterSetting::new(v[3]) {
        let qk = discord_filtered(&f, &evolved);
        assert!(qk.discord.is_finite() && qk.discord >= -1e-9);
        let gk = one_norm_gqd_filtered(&f, &order_correlations(&evolved)).value;
        assert!(gk.is_finite() && (0.0..=0.5 + 1e-9).contains(&gk));
    }
});
