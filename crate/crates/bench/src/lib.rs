//! Parameter fixtures shared by the benchmarks.

use osg::PhysicalParams;

/// Reference geometry at `epsilon = 1e6 s^-1` with interaction time `t_rabi`
/// Rabi periods.
pub fn fixture(t_rabi: f64) -> PhysicalParams {
    let p = PhysicalParams::figure1(1e6);
    let t = t_rabi * p.rabi_period();
    p.with_interaction_time(t)
}
