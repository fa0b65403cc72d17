//! Running means `N(k)` of a few gain candidates. Only gains whose swings
//! grow in both directions qualify.

use lieadapt::analysis::nussbaum_type_check;

fn main() -> lieadapt::error::Result<()> {
    let candidates: [(&str, fn(f64) -> f64); 4] = [
        ("s·cos s", |s| s * s.cos()),
        ("s²·sin s", |s| s * s * s.sin()),
        ("1", |_| 1.0),
        ("cos s", |s| s.cos()),
    ];
    for (name, h) in candidates {
        let r = nussbaum_type_check(h, 0.0, 50.0, 10_000)?;
        println!(
            "{name:<9} sup {:>10.3} inf {:>10.3} crossings {:>3} | doubled sup {:>10.3} inf {:>10.3} | passed {}",
            r.running_sup, r.running_inf, r.crossings, r.doubled.running_sup, r.doubled.running_inf, r.passed
        );
    }
    Ok(())
}
