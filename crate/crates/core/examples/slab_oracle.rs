//! Reference solutions: a symmetric slab by transfer matrices, the
//! separable rectangle estimate, and the same rectangle solved by the FEM
//! with a step profile.
//!
//! cargo run --release --example slab_oracle

use qpmshg::materials::{Cover, DepthProfile, IndexProfile, Polarization, Waveguide};
use qpmshg::modes::ModeSolver;
use qpmshg::oracles::{marcatili_rect_index, slab_modes, SlabStack};

fn main() -> qpmshg::Result<()> {
    let slab = SlabStack::symmetric(1.86, 1.845, 5.0);
    for pol in Polarization::BOTH {
        let n = slab_modes(&slab, 800.0, pol)?;
        println!("slab 5 µm {pol}: {} modes, n_eff {:?}", n.len(), n);
    }

    // step-index channel buried in substrate, compared with the rectangle estimate
    let mut wg = Waveguide::default();
    wg.profile = IndexProfile {
        depth: DepthProfile::Step,
        cover: Cover::Substrate,
    };
    let s = wg.sampler(800.0)?;
    let axis = Polarization::Te.electric_axis();
    let (core, clad) = (s.peak_index(axis), s.substrate_index(axis));
    let g = &wg.geometry;
    let est = marcatili_rect_index(g.width_um, g.depth_um, core, clad, 800.0, (0, 0))?;
    let fem = ModeSolver::default().solve_top(&wg, 800.0, Polarization::Te, 2)?;
    println!("step channel TE(0,0): rectangle estimate {est:?}, FEM {:.6}", fem.modes[0].n_eff);
    Ok(())
}
