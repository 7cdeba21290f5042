//! Exhaustive check of the Kővári–Sós–Turán edge bound on small bipartite graphs.

use nibble::lab::{kst_bound, verify_kst};

fn main() {
    let report = verify_kst(4, 3);
    println!("{} bipartite graphs, {} violations", report.graphs, report.violations());
    for r in report.rows.iter().filter(|r| r.m == r.n) {
        println!(
            "{}×{} K_{{{},{}}}-free: max edges {} < bound {:.3}",
            r.m, r.n, r.s, r.t, r.max_free_edges, r.bound
        );
    }
    println!("bound for 100×100, s=t=2: {:.1}", kst_bound(100, 100, 2, 2));
}
