//! Pass/fail bookkeeping for the acceptance suite in `tests/acceptance.rs`.
//!
//! Every check prints one line, `PASS [id] name: measured …, want …`, and a
//! criterion passes only if all of its lines do.

#[derive(Debug)]
pub struct Report {
    id: &'static str,
    results: Vec<bool>,
}

impl Report {
    pub fn new(id: &'static str) -> Report {
        Report { id, results: Vec::new() }
    }

    fn push(&mut self, ok: bool, name: &str, detail: String) {
        let tag = if ok { "PASS" } else { "FAIL" };
        println!("{tag} [{}] {name}: {detail}", self.id);
        self.results.push(ok);
    }

    /// |measured/expected − 1| ≤ tol.
    pub fn rel(&mut self, name: &str, measured: f64, expected: f64, tol: f64) {
        let dev = (measured / expected - 1.0).abs();
        self.push(
            dev <= tol,
            name,
            format!("measured {measured:.6e}, want {expected:.6e} ± {tol:e} rel (off by {dev:.2e})"),
        );
    }

    /// |measured − expected| ≤ tol.
    pub fn abs(&mut self, name: &str, measured: f64, expected: f64, tol: f64) {
        let dev = (measured - expected).abs();
        self.push(
            dev <= tol,
            name,
            format!("measured {measured:.6e}, want {expected:.6e} ± {tol:e} abs (off by {dev:.2e})"),
        );
    }

    pub fn at_most(&mut self, name: &str, measured: f64, bound: f64) {
        self.push(measured <= bound, name, format!("measured {measured:.6e}, want <= {bound:e}"));
    }

    pub fn at_least(&mut self, name: &str, measured: f64, bound: f64) {
        self.push(measured >= bound, name, format!("measured {measured:.6e}, want >= {bound:e}"));
    }

    pub fn within(&mut self, name: &str, measured: f64, lo: f64, hi: f64) {
        self.push(
            (lo..=hi).contains(&measured),
            name,
            format!("measured {measured:.6e}, want in [{lo:e}, {hi:e}]"),
        );
    }

    pub fn holds(&mut self, name: &str, ok: bool, detail: impl Into<String>) {
        self.push(ok, name, detail.into());
    }

    /// Printed but never failing.
    pub fn info(&mut self, name: &str, measured: f64) {
        println!("INFO [{}] {name}: measured {measured:.6e}", self.id);
    }

    pub fn id(&self) -> &'static str {
        self.id
    }

    pub fn passed(&self) -> bool {
        self.results.iter().all(|&ok| ok)
    }
}

/// Least-squares slope of ln y against ln x.
pub fn log_log_slope(x: &[f64], y: &[f64]) -> f64 {
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let (mx, my) = (lx.iter().sum::<f64>() / n, ly.iter().sum::<f64>() / n);
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_of_power_law() {
        let x = [1.0, 2.0, 4.0];
        let y: Vec<f64> = x.iter().map(|v: &f64| 3.0 * v.powf(-1.5)).collect();
        assert!((log_log_slope(&x, &y) + 1.5).abs() < 1e-12);
    }

    #[test]
    fn report_tracks_failures() {
        let mut r = Report::new("t");
        r.rel("a", 1.0, 1.0, 1e-9);
        r.info("b", 2.0);
        assert!(r.passed());
        r.at_most("c", 2.0, 1.0);
        assert!(!r.passed());
    }
}
