use yagi_physics::BiasStack;
use yagi_rf::ChannelPlanner;

fn main() {
    let mut p = ChannelPlanner::reference();
    for floor in [None, Some(0.05)] {
        p.e_f_floor = floor;
        let plan = p.plan(35.0, &BiasStack::default()).unwrap();
        println!("floor {:.4} eV: {} channels", p.floor(), plan.len());
        for c in &plan.channels {
            println!(
                "  {} {:.4e} {:.4e} {:.4} {:.3}",
                c.index, c.f_center, c.bandwidth, c.e_f, c.v_gate
            );
        }
    }
}
