//! Convex distance by the minimum-norm point, checked from below by
//! directions, and Talagrand's inequality on random event pairs.

use nibble::lab::{convex_distance, distance_lower_bound, random_talagrand_case, verify_talagrand, ProductSpace};

fn main() -> nibble::Result<()> {
    let x = vec![0, 0, 0, 0];
    let set = vec![vec![1, 1, 0, 0], vec![0, 0, 1, 1], vec![1, 0, 1, 0]];
    let d = convex_distance(&x, &set)?;
    let lb = distance_lower_bound(&x, &set, 1000, 1)?;
    println!("dist = {d:.9}, best direction found {lb:.9}");

    let r = verify_talagrand(&ProductSpace::fair_coins(6), &[vec![0; 6]], &[vec![1; 6]])?;
    println!("opposite corners of 6 coins: {r:?}");

    let mut held = 0;
    for seed in 0..50 {
        let c = random_talagrand_case(seed, 10);
        let r = verify_talagrand(&c.space, &c.a, &c.b)?;
        held += usize::from(r.holds);
        if seed < 5 {
            println!(
                "m={:<2} Pr(A)Pr(B)={:.4e} exp(−dist²/4)={:.4e} dist={:.4}",
                c.space.m(),
                r.pr_a * r.pr_b,
                r.bound,
                r.dist
            );
        }
    }
    println!("{held}/50 random pairs satisfy the inequality");
    Ok(())
}
