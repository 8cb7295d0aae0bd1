/// Smooth non-decreasing switch `ρ` with `ρ = −1` on `(−∞, c−ε]` and
/// `ρ = 0` on `[c+ε, ∞)`, built from the quintic smoothstep (C²).
///
/// `sup |ρ′| = 15/(16ε) ≤ 1/ε` and `∫|ρ′| = 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SwitchFunction {
    half_width: f64,
    center: f64,
}

impl SwitchFunction {
    pub fn new(half_width: f64, center: f64) -> Self {
        assert!(half_width > 0.0, "switch half-width must be positive");
        Self { half_width, center }
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn center(&self) -> f64 {
        self.center
    }

    fn local(&self, x: f64) -> f64 {
        ((x - self.center + self.half_width) / (2.0 * self.half_width)).clamp(0.0, 1.0)
    }

    pub fn eval(&self, x: f64) -> f64 {
        let t = self.local(x);
        t * t * t * (t * (t * 6.0 - 15.0) + 10.0) - 1.0
    }

    pub fn derivative(&self, x: f64) -> f64 {
        let t = self.local(x);
        30.0 * t * t * (t - 1.0) * (t - 1.0) / (2.0 * self.half_width)
    }

    /// `∫|ρ′| = ρ(∞) − ρ(−∞)`.
    pub fn total_variation(&self) -> f64 {
        1.0
    }
}
