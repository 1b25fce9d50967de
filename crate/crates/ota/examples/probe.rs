// Scratch probe: criterion-1 with anchor-rich sampling (not shipped).
use ota::cost::{CostMatrix, SupplyDemand};
use ota::matrix::Matrix;
use ota::rng::CounterRng;
use ota::sinkhorn::{self, SinkhornConfig};

fn detection_instance(seed: u64, m: usize, n: usize) -> (CostMatrix, SupplyDemand) {
    let mut rng = CounterRng::new(seed);
    let mut values = Matrix::zeros(m + 1, n);
    for i in 0..m {
        for j in 0..n {
            let candidate = rng.next_f64() < 0.12;
            let c = if candidate { rng.next_range(0.0, 2.0) } else { rng.next_range(2.0, 5.0) };
            values.set(i, j, c);
        }
    }
    for j in 0..n {
        values.set(m, j, rng.next_range(0.0, 0.5));
    }
    let cap = (n as u64 / (10 * m as u64)).clamp(1, 10);
    let k = 1 + rng.next_below(cap);
    let mut counts = vec![k; m];
    counts.push(n as u64 - k * m as u64);
    (
        CostMatrix::new(m, n, values).unwrap(),
        SupplyDemand::from_counts(&counts, n).unwrap(),
    )
}

fn main() {
    let started = std::time::Instant::now();
    let mut ok = 0;
    let mut worst = 0.0f64;
    for seed in 0..200u64 {
        let mut rng = CounterRng::new(seed ^ 0xC1);
        let m = 1 + rng.next_below(8) as usize;
        let n_lo = (20 * m).max(16);
        let n = n_lo + rng.next_below((257 - n_lo as u64).max(1)) as usize;
        let (cost, sd) = detection_instance(seed, m, n);
        let plan = sinkhorn::solve(&cost, &sd, &SinkhornConfig::default()).unwrap();
        worst = worst.max(plan.marginal_residual);
        if plan.marginal_residual <= 1e-3 {
            ok += 1;
        }
    }
    println!("anchor-rich detection: ok={ok}/200 worst={worst:.2e} in {:?}", started.elapsed());
}
