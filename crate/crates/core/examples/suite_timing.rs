use kostant_toda::{build_lie_algebra, build_root_system, verify_algebra};
use std::time::Instant;

fn main() {
    for name in ["A1", "A2", "A3", "A4", "B2", "C3", "D4", "G2", "F4"] {
        let t0 = Instant::now();
        let rs = build_root_system(name.parse().unwrap()).unwrap();
        let lie = build_lie_algebra(rs).unwrap();
        let built = t0.elapsed();
        let t1 = Instant::now();
        let rep = verify_algebra(&lie);
        println!(
            "{}: dim={} build={:?} verify={:?} passed={} jacobi_triples={}",
            name,
            lie.dim,
            built,
            t1.elapsed(),
            rep.passed(),
            rep.jacobi_triples
        );
        assert!(rep.passed());
    }
}
