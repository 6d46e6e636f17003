// Shared across several integration-test binaries; each compiles this module
// separately, so any one binary sees some items as unused.
#![allow(dead_code)]

pub mod oracle;

use ech_kit::exactnum::PerturbedRational;

/// Every reduced fraction a/b with 1 <= b <= max_den and 0 <= a/b < 1,
/// decorated with the requested infinitesimal offsets (-1, 0, +1).
pub fn rotation_grid(max_den: u64, eps_offsets: &[i8]) -> Vec<PerturbedRational> {
    let mut out = Vec::new();
    for b in 1..=max_den {
        for a in 0..b {
            if num_integer::Integer::gcd(&a, &b) != 1 {
                continue;
            }
            for &e in eps_offsets {
                let suffix = match e {
                    -1 => "-e",
                    0 => "",
                    1 => "+e",
                    _ => panic!("eps offset must be -1, 0, or 1"),
                };
                out.push(format!("{a}/{b}{suffix}").parse().unwrap());
            }
        }
    }
    out
}
