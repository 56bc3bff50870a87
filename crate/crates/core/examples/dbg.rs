use cantor_base::automaton::{build_lazy_automaton, factor_oracle, validate_against_oracle};
use cantor_base::bases::CantorBase;
use std::time::Instant;

fn main() {
    let base: CantorBase = "alt: (3+1*sqrt(5))/2 , (3+1*sqrt(5))/1".parse().unwrap();
    let t0 = Instant::now();
    let aut = build_lazy_automaton(&base, 10_000).unwrap();
    println!("build: {:?}", t0.elapsed());
    let t0 = Instant::now();
    for _ in 0..1000 {
        let _ = factor_oracle(&base, &[0, 2, 3, 1, 2, 0]).unwrap();
    }
    println!("1000 oracle calls: {:?}", t0.elapsed());
    for len in 1..=6 {
        let t0 = Instant::now();
        validate_against_oracle(&base, &aut, len).unwrap();
        println!("validate len {len}: {:?}", t0.elapsed());
    }
}
