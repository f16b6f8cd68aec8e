//! Characters of the sections of every BMP sheaf on `W^J`, next to the canonical
//! basis element computed by the Hecke-module recursion.
//!
//! `cargo run --release --example bmp_table -- B2 1`

use std::time::Instant;

use mg_core::{zmod, ParabolicModule, Setting, WeylGroup};

fn main() -> mg_core::Result<()> {
    let mut args = std::env::args().skip(1);
    let label = args.next().unwrap_or_else(|| "A2".into());
    let j: Vec<usize> = args.filter_map(|a| a.parse::<usize>().ok()).map(|k| k - 1).collect();
    let g = WeylGroup::from_label(&label)?;
    let pd = g.parabolic(&j)?;
    let set = Setting::new(&g, &pd);
    let pm = ParabolicModule::new(&g, &pd);
    let start = Instant::now();
    for &w in &pd.reps {
        let t = Instant::now();
        let (_, m) = zmod::bmp_module(&set, w)?;
        let ch = zmod::character(&set, &m.shifted(g.length(w) as i32))?;
        let agrees = ch.data == pm.deodhar_basis(w)?;
        println!(
            "{:>12}  rank {:>3}  {}  {:>8.1?}  {}",
            g.word_string(w),
            m.rank(),
            if agrees { "=" } else { "!" },
            t.elapsed(),
            ch.data.render(&g)
        );
    }
    println!("{} elements in {:.2?}", pd.reps.len(), start.elapsed());
    Ok(())
}
