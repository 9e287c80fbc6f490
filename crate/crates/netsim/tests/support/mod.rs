use std::sync::OnceLock;

use yagi_netsim::{GainTable, LinkChannel, MacEnv};

/// Reference controller and antenna gains, built once per test binary.
pub fn reference() -> &'static (MacEnv, Vec<LinkChannel>) {
    static ENV: OnceLock<(MacEnv, Vec<LinkChannel>)> = OnceLock::new();
    ENV.get_or_init(|| {
        let (env, plan) = MacEnv::reference().unwrap();
        (env, LinkChannel::from_plan(&plan))
    })
}

#[allow(dead_code)]
pub fn isotropic() -> MacEnv {
    MacEnv {
        controller: reference().0.controller.clone(),
        gains: GainTable::isotropic(),
    }
}
