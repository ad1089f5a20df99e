//! The interference kernel Z(τ, α, B̂) three ways: adaptive quadrature,
//! the hypergeometric form, and (for α = 4) the arctangent.

use hetnet::specfun::{z_kernel, z_kernel_hypergeometric};
use hetnet::QuadratureSettings;

fn main() -> hetnet::Result<()> {
    let q = QuadratureSettings::default();
    println!("{:>6} {:>6} {:>6} {:>18} {:>18}", "alpha", "tau", "b_hat", "quadrature", "2F1");
    for &alpha in &[3.0, 3.5, 4.0, 5.0] {
        for &tau in &[0.1, 1.0, 10.0] {
            for &b in &[0.1, 1.0, 10.0] {
                let z = z_kernel(tau, alpha, b, &q)?;
                let h = z_kernel_hypergeometric(tau, alpha, b)?;
                println!("{alpha:>6} {tau:>6} {b:>6} {z:>18.12} {h:>18.12}");
            }
        }
    }
    let tau: f64 = 1.0;
    println!(
        "alpha=4, unbiased, tau=1: Z = {:.15}, sqrt(tau) atan(sqrt(tau)) = {:.15}",
        z_kernel(tau, 4.0, 1.0, &q)?,
        tau.sqrt() * tau.sqrt().atan()
    );
    Ok(())
}
