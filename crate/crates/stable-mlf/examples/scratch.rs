use stable_mlf::checks::*;
use stable_mlf::densities::*;
use stable_mlf::index::StabilityIndex;
use std::time::Instant;

fn main() {
    let t0 = Instant::now();
    let i = StabilityIndex::new(1.5).unwrap();

    let art = Artifacts::new(i).unwrap();
    println!("[{:6.2}s] artifacts built, t1 mass {}", t0.elapsed().as_secs_f64(), art.t1_cdf().total_mass());

    // Where does the table CDF disagree with direct quadrature?
    let fhat = art.fhat();
    for &t in &[0.05, 0.3, 1.0, 3.0, 10.0, 100.0, 1e4] {
        let tab = art.t1_cdf().cdf(t);
        let direct = if t <= 3.0 {
            cdf_t1(i, t, 1e-10, &fhat).unwrap().value
        } else {
            1.0 - survival_t1(i, t, 1e-10, &fhat).unwrap().value
        };
        println!("t={t}: table {tab:.9} direct {direct:.9} diff {:+.3e}", tab - direct);
    }

    let t1 = Instant::now();
    let r = check_laplace_identities(&art, &[(1.0, 2.0), (2.0, 2.0), (0.5, 1.0)], &[0.1, 0.5, 1.0, 3.0, 10.0], 1e-6).unwrap();
    println!("[{:6.2}s] laplace stat {:.3e} passed {}", t1.elapsed().as_secs_f64(), r.statistic, r.passed);
    for (k, v) in &r.details {
        if k.starts_with("t1_transform") || k.starts_with("ml_transform") {
            println!("    {k} = {v}");
        }
    }

    let t2 = Instant::now();
    let r = check_convex_decomposition(&art, &stable_mlf::GridSpec::log(1e-2, 1e2, 9).unwrap().points()).unwrap();
    println!("[{:6.2}s] convex stat {:.3e} passed {}", t2.elapsed().as_secs_f64(), r.statistic, r.passed);
    for (k, v) in &r.details {
        println!("    {k} = {v}");
    }
}
