//! Discrete-time realizations of the continuous actuator and compensator
//! filters, via the bilinear transform with corner prewarping.
//!
//! Bilinear keeps every stable prototype stable at any step size, which is
//! what the resonant piezo section needs.

/// Prewarped corner: the analog frequency the bilinear transform must be fed
/// so the digital corner lands exactly at `w`.
fn prewarp(w: f64, dt: f64) -> f64 {
    (2.0 / dt) * (w * dt / 2.0).tan()
}

/// First-order low-pass, unity DC gain, cutoff `f_c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OnePoleLp {
    b0: f64,
    a1: f64,
    x1: f64,
    y1: f64,
}

impl OnePoleLp {
    pub fn new(f_c: f64, dt: f64) -> Self {
        let wc = prewarp(2.0 * std::f64::consts::PI * f_c, dt);
        let k = 2.0 / (wc * dt);
        Self {
            b0: 1.0 / (1.0 + k),
            a1: (1.0 - k) / (1.0 + k),
            x1: 0.0,
            y1: 0.0,
        }
    }

    pub fn step(&mut self, x: f64) -> f64 {
        let y = self.b0 * (x + self.x1) - self.a1 * self.y1;
        self.x1 = x;
        self.y1 = y;
        y
    }
}

/// Lead (phase-advance) section `(1 + s*tau1) / (1 + s*tau2)`, `tau1 > tau2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LeadFilter {
    b0: f64,
    b1: f64,
    a1: f64,
    x1: f64,
    y1: f64,
}

impl LeadFilter {
    pub fn new(tau1: f64, tau2: f64, dt: f64) -> Self {
        let t1 = 1.0 / prewarp(1.0 / tau1, dt);
        let t2 = 1.0 / prewarp(1.0 / tau2, dt);
        let c = 2.0 / dt;
        let a0 = 1.0 + c * t2;
        Self {
            b0: (1.0 + c * t1) / a0,
            b1: (1.0 - c * t1) / a0,
            a1: (1.0 - c * t2) / a0,
            x1: 0.0,
            y1: 0.0,
        }
    }

    pub fn step(&mut self, x: f64) -> f64 {
        let y = self.b0 * x + self.b1 * self.x1 - self.a1 * self.y1;
        self.x1 = x;
        self.y1 = y;
        y
    }
}

/// Second-order resonant low-pass `w0^2 / (s^2 + s*w0/q + w0^2)`, unity DC
/// gain, resonance `f0`, quality factor `q`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResonantLowPass {
    b0: f64,
    b1: f64,
    b2: f64,
    a1: f64,
    a2: f64,
    x1: f64,
    x2: f64,
    y1: f64,
    y2: f64,
}

impl ResonantLowPass {
    pub fn new(f0: f64, q: f64, dt: f64) -> Self {
        let k = (std::f64::consts::PI * f0 * dt).tan();
        let norm = k * k + k / q + 1.0;
        Self {
            b0: k * k / norm,
            b1: 2.0 * k * k / norm,
            b2: k * k / norm,
            a1: 2.0 * (k * k - 1.0) / norm,
            a2: (k * k - k / q + 1.0) / norm,
            x1: 0.0,
            x2: 0.0,
            y1: 0.0,
            y2: 0.0,
        }
    }

    pub fn step(&mut self, x: f64) -> f64 {
        let y = self.b0 * x + self.b1 * self.x1 + self.b2 * self.x2
            - self.a1 * self.y1
            - self.a2 * self.y2;
        self.x2 = self.x1;
        self.x1 = x;
        self.y2 = self.y1;
        self.y1 = y;
        y
    }
}
