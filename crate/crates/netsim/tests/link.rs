mod support;

use yagi_antenna::{
    evaluate_beam, AntennaLayout, AntennaModel, BeamConfig, Direction, OperatingPoint,
};
use yagi_netsim::{
    damc_select, estimate_distance, path_gain, select_channel, snr_at, DamcLink, GainTable,
    LinkChannel, NetsimError, SimScenario,
};

const ORIGIN: [f64; 2] = [0.0, 0.0];

#[test]
fn doubling_distance_costs_six_db() {
    let g = GainTable::isotropic();
    let o = BeamConfig::Omni;
    let a = path_gain(&g, ORIGIN, o, [1.5, 0.0], o, 1e12, 0.0).unwrap();
    let b = path_gain(&g, ORIGIN, o, [3.0, 0.0], o, 1e12, 0.0).unwrap();
    assert!((a - b - 20.0 * 2f64.log10()).abs() < 1e-12);
    assert!((a - b - 6.02).abs() < 0.001);
    assert!(path_gain(&g, ORIGIN, o, ORIGIN, o, 1e12, 0.0).is_err());
}

#[test]
fn absorption_adds_on_top_of_spreading() {
    let g = GainTable::isotropic();
    let o = BeamConfig::Omni;
    let clear = path_gain(&g, ORIGIN, o, [10.0, 0.0], o, 1e12, 0.0).unwrap();
    let wet = path_gain(&g, ORIGIN, o, [10.0, 0.0], o, 1e12, 0.23).unwrap();
    // 0.23 / m over 10 m
    assert!((clear - wet - 10.0).abs() < 0.02);
}

#[test]
fn turning_the_receiver_away_costs_front_to_back() {
    let (env, _) = support::reference();
    let point = OperatingPoint::HIGH_BAND;
    let ev = evaluate_beam(
        &AntennaModel::reference(),
        &AntennaLayout::cross(),
        BeamConfig::Directional(Direction::PosY),
        &point,
        1.0,
    )
    .unwrap();
    let o = BeamConfig::Omni;
    let src = [0.0, 2.0];
    let facing = path_gain(
        &env.gains,
        src,
        o,
        ORIGIN,
        BeamConfig::Directional(Direction::PosY),
        1e12,
        0.0,
    )
    .unwrap();
    let away = path_gain(
        &env.gains,
        src,
        o,
        ORIGIN,
        BeamConfig::Directional(Direction::NegY),
        1e12,
        0.0,
    )
    .unwrap();
    assert!((facing - away - ev.metrics.front_to_back_db).abs() < 1e-9);
    assert!(facing > away);
}

fn iso_link() -> DamcLink {
    DamcLink {
        tx_power_dbm: 20.0,
        gain_tx_dbi: 0.0,
        gain_rx_dbi: 0.0,
        noise_dbm: -130.0,
        snr_threshold_db: 10.0,
    }
}

fn table() -> Vec<LinkChannel> {
    // channel 3 sits on an absorption line
    [0.5e12, 0.6e12, 0.7e12, 0.8e12, 0.9e12]
        .iter()
        .enumerate()
        .map(|(i, &f)| LinkChannel {
            f_center: f,
            k_abs: if i == 3 { 2.0 } else { 0.01 },
            rate: 1e10,
        })
        .collect()
}

#[test]
fn noiseless_isotropic_inversion_is_exact() {
    let chans = table();
    for d in [0.01, 0.3, 1.0, 7.5, 20.0] {
        let rx = iso_link().received_dbm(&chans[0], d);
        let est = estimate_distance(rx, &chans[0], &iso_link()).unwrap();
        assert!((est / d - 1.0).abs() < 1e-9);
    }
}

#[test]
fn absorbing_channel_avoided_where_it_fails() {
    let chans = table();
    let link = iso_link();
    let mut checked = 0;
    for k in 1..=400 {
        let d = 0.05 * k as f64;
        let rx = link.received_dbm(&chans[0], d);
        match select_channel(rx, 0, &chans, &link) {
            Ok(choice) => {
                // brute-force the best SNR over the candidates
                let best = (1..chans.len())
                    .map(|i| snr_at(&link, &chans[i], d))
                    .fold(f64::NEG_INFINITY, f64::max);
                assert!((choice.snr_db - best).abs() < 1e-9);
                if snr_at(&link, &chans[3], d) < link.snr_threshold_db {
                    assert_ne!(choice.channel, 3, "d = {d}");
                }
                checked += 1;
            }
            Err(NetsimError::NoViableChannel { .. }) => {}
            Err(e) => panic!("{e}"),
        }
    }
    assert!(checked > 100);
    let at_ten = select_channel(link.received_dbm(&chans[0], 10.0), 0, &chans, &link).unwrap();
    assert_ne!(at_ten.channel, 3);
}

#[test]
fn short_range_prefers_lowest_loss() {
    let chans = table();
    let link = iso_link();
    let c = select_channel(link.received_dbm(&chans[0], 1e-4), 0, &chans, &link).unwrap();
    // spreading loss grows with f, absorption is negligible
    assert_eq!(c.channel, 1);
}

#[test]
fn ties_go_to_lower_frequency() {
    let mut chans = table();
    // SNRs differ by ~1e-14 dB, well inside the tie window
    chans[2] = LinkChannel {
        f_center: 0.6e12 * (1.0 - 1e-15),
        ..chans[2]
    };
    let link = iso_link();
    let c = select_channel(link.received_dbm(&chans[0], 0.5), 0, &chans, &link).unwrap();
    assert_eq!(c.channel, 2);
}

#[test]
fn too_far_is_not_viable() {
    let chans = table();
    let link = iso_link();
    let r = select_channel(link.received_dbm(&chans[0], 5000.0), 0, &chans, &link);
    assert!(matches!(r, Err(NetsimError::NoViableChannel { .. })));
}

#[test]
fn scenario_pair_selection() {
    let mut sc = SimScenario::ring(1, 2.0, table(), 1e-6);
    sc.channels = table();
    let c = damc_select(&sc, &GainTable::isotropic(), 1, 0, 0).unwrap();
    assert!((c.distance / 2.0 - 1.0).abs() < 1e-9);
    assert!(damc_select(&sc, &GainTable::isotropic(), 1, 1, 0).is_err());
}
