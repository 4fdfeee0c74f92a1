//! Critical activity and critical density of the hard-core model per degree
//! bound, printed both as exact rationals and decimals.
//!
//! ```bash
//! cargo run --release -p kslice --example thresholds
//! ```

use kslice::hardcore::{critical_activity, critical_density};
use kslice::numeric::{rat_string, rat_to_f64};

fn main() {
    println!("delta\tlambda_c\tlambda_c_dec\talpha_c\talpha_c_dec\talpha_c*nfrac");
    for delta in 3..=8 {
        let lc = critical_activity(delta).unwrap();
        let ac = critical_density(delta).unwrap();
        println!(
            "{delta}\t{}\t{:.6}\t{}\t{:.6}\t1/{:.2}",
            rat_string(&lc),
            rat_to_f64(&lc),
            rat_string(&ac),
            rat_to_f64(&ac),
            1.0 / rat_to_f64(&ac),
        );
    }
}
