//! Composite Simpson rule on uniform panels.

/// Integrates `f` over `[a, b]` with `panels` Simpson panels, each panel
/// spanning two sub-intervals (so `2·panels + 1` evaluations).
pub fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, panels: usize) -> f64 {
    assert!(panels > 0, "simpson needs at least one panel");
    let n = 2 * panels;
    let h = (b - a) / n as f64;
    let mut odd = 0.0;
    let mut even = 0.0;
    for i in 1..n {
        let x = a + h * i as f64;
        if i % 2 == 1 {
            odd += f(x);
        } else {
            even += f(x);
        }
    }
    h / 3.0 * (f(a) + f(b) + 4.0 * odd + 2.0 * even)
}
