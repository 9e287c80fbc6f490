//! Prints metrics for every beam state at both operating points and the
//! residual-conductivity sweep.

use yagi_antenna::*;

fn main() -> Result<(), AntennaError> {
    let model = AntennaModel::reference();
    for (name, layout, point) in [
        ("2.3 THz", AntennaLayout::cross(), OperatingPoint::HIGH_BAND),
        (
            "1.5 THz",
            AntennaLayout::cross_with_third_ring(),
            OperatingPoint::LOW_BAND,
        ),
    ] {
        println!("{name}");
        for beam in BeamConfig::ALL {
            let m = evaluate_beam(&model, &layout, beam, &point, 1.0)?.metrics;
            println!(
                "  {beam:>5}: gain {:8.4} dBi  D_beam {:7.4}  D_max {:7.4}  phi {:5.1}  bw {:6.2}  F/B {:7.4} dB  eff {:.4}",
                m.gain_dbi, m.beam_directivity_dbi, m.peak_directivity_dbi, m.beam_direction.1,
                m.beamwidth_3db, m.front_to_back_db, m.efficiency
            );
        }
    }
    println!("residual sweep (+y, 2.3 THz)");
    let rho = [0.0, 1.0 / 15.0, 0.1, 0.2];
    let sweep = residual_conductivity_sweep(
        &model,
        &AntennaLayout::cross(),
        BeamConfig::Directional(Direction::PosY),
        &OperatingPoint::HIGH_BAND,
        &rho,
        1.0,
    )?;
    for (r, m) in rho.iter().zip(sweep) {
        println!(
            "  rho {r:.4}: gain {:9.5} dBi  bw {:7.3}  phi {:5.1}  F/B {:7.4}",
            m.gain_dbi, m.beamwidth_3db, m.beam_direction.1, m.front_to_back_db
        );
    }
    Ok(())
}
