//! TE and TM second-harmonic power as the linear pump polarization is
//! rotated from the TE axis.
//!
//! cargo run --release --example polarization_response

use qpmshg::shg::{polarization_response, TypeWeights};

fn main() -> qpmshg::Result<()> {
    let alpha: Vec<f64> = (0..=18).map(|k| 10.0 * k as f64).collect();
    let r = polarization_response(&alpha, &TypeWeights::default())?;
    println!("  α°     TE      TM");
    for i in 0..alpha.len() {
        println!("{:5.0}  {:.3}  {:.3}", r.alpha_deg[i], r.te[i], r.tm[i]);
    }
    Ok(())
}
