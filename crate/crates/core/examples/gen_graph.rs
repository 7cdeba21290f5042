//! Generate graphs from each family and print their degree and codegree.

use nibble::generators::{fixture, generate, generate_lists, Family, GenSpec, ListSpec, FIXTURES};
use nibble::graph::{max_metrics, max_s_codegree};

fn main() -> nibble::Result<()> {
    for name in FIXTURES {
        let g = fixture(name)?;
        println!("{name:>10}: n={} m={} Δ={} codegree={}", g.n(), g.m(), g.max_degree(), max_s_codegree(&g, 2));
    }

    let families = [Family::Gnp, Family::BipartiteRandom, Family::BlowupCycle, Family::KstFreeSample];
    for family in families {
        let spec = GenSpec {
            family,
            n: 400,
            target_degree: 30.0,
            p: None,
            codegree_cap: (family == Family::KstFreeSample).then_some(2),
            s: 2,
            seed: 7,
            fixture: None,
            lists: Some(ListSpec { q: 60, ell: 40 }),
        };
        let g = generate(&spec)?;
        let l = generate_lists(&spec, g.n())?.expect("spec has lists");
        let m = max_metrics(&g, &l, 2);
        println!(
            "{family:?}: n={} m={} Δ={} max color-degree={} max color-codegree={} min |L|={}",
            g.n(),
            g.m(),
            g.max_degree(),
            m.max_color_degree,
            m.max_codegree,
            m.min_list_size
        );
    }

    println!("{}", serde_json::to_string_pretty(&GenSpec::gnp(100, 0.1, 1)).unwrap());
    Ok(())
}
