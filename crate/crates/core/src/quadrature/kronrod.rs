//! The 15-point Kronrod rule with its embedded 7-point Gauss–Legendre rule.

/// Positive Kronrod abscissae, outermost first; odd indices are the Gauss
/// nodes.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

pub const N_NODES: usize = 15;

/// All 15 abscissae on `[−1, 1]` in increasing order.
pub const NODES: [f64; N_NODES] = {
    let mut x = [0.0; N_NODES];
    let mut i = 0;
    while i < 7 {
        x[i] = -XGK[i];
        x[N_NODES - 1 - i] = XGK[i];
        i += 1;
    }
    x
};

/// Kronrod weights aligned with [`NODES`].
pub const KRONROD_WEIGHTS: [f64; N_NODES] = {
    let mut w = [0.0; N_NODES];
    let mut i = 0;
    while i < 7 {
        w[i] = WGK[i];
        w[N_NODES - 1 - i] = WGK[i];
        i += 1;
    }
    w[7] = WGK[7];
    w
};

/// Gauss weights aligned with [`NODES`] (zero at Kronrod-only nodes).
pub const GAUSS_WEIGHTS: [f64; N_NODES] = {
    let mut w = [0.0; N_NODES];
    let mut i = 0;
    while i < 3 {
        w[2 * i + 1] = WG[i];
        w[N_NODES - 2 - 2 * i] = WG[i];
        i += 1;
    }
    w[7] = WG[3];
    w
};

/// Outcome of one application of the rule on a panel.
#[derive(Debug, Clone, Copy)]
pub struct RuleResult {
    pub kronrod: f64,
    pub gauss: f64,
    /// `∫|f|` estimate
    pub resabs: f64,
    /// `∫|f − mean|` estimate
    pub resasc: f64,
}

impl RuleResult {
    /// QUADPACK's scaled estimate of the error in `kronrod`.
    pub fn error(&self) -> f64 {
        let mut err = (self.kronrod - self.gauss).abs();
        if self.resasc != 0.0 && err != 0.0 {
            let scale = (200.0 * err / self.resasc).powf(1.5);
            err = if scale < 1.0 {
                self.resasc * scale
            } else {
                self.resasc
            };
        }
        if self.resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
            err = err.max(50.0 * f64::EPSILON * self.resabs);
        }
        err
    }
}

/// Applies the rule to `values[i] = f(c + h·NODES[i])`.
pub fn apply(values: &[f64; N_NODES], h: f64) -> RuleResult {
    let mut kronrod = 0.0;
    let mut gauss = 0.0;
    let mut resabs = 0.0;
    for i in 0..N_NODES {
        kronrod += KRONROD_WEIGHTS[i] * values[i];
        gauss += GAUSS_WEIGHTS[i] * values[i];
        resabs += KRONROD_WEIGHTS[i] * values[i].abs();
    }
    let mean = 0.5 * kronrod;
    let mut resasc = 0.0;
    for i in 0..N_NODES {
        resasc += KRONROD_WEIGHTS[i] * (values[i] - mean).abs();
    }
    let h = h.abs();
    RuleResult {
        kronrod: kronrod * h,
        gauss: gauss * h,
        resabs: resabs * h,
        resasc: resasc * h,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_integrate_constants_and_polynomials() {
        let k: f64 = KRONROD_WEIGHTS.iter().sum();
        let g: f64 = GAUSS_WEIGHTS.iter().sum();
        assert!((k - 2.0).abs() < 1e-15);
        assert!((g - 2.0).abs() < 1e-15);
        // Gauss-7 is exact to degree 13, Kronrod-15 to degree 22
        let g12: f64 = NODES
            .iter()
            .zip(GAUSS_WEIGHTS)
            .map(|(x, w)| w * x.powi(12))
            .sum();
        assert!((g12 - 2.0 / 13.0).abs() < 1e-15);
        let k22: f64 = NODES
            .iter()
            .zip(KRONROD_WEIGHTS)
            .map(|(x, w)| w * x.powi(22))
            .sum();
        assert!((k22 - 2.0 / 23.0).abs() < 1e-15);
    }

    #[test]
    fn quadpack_reference_case() {
        // ∫₀¹ x^2.6 ln(1/x) dx, QUADPACK qk15 reference output
        let (a, b) = (0.0, 1.0);
        let c = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        let vals: [f64; N_NODES] = std::array::from_fn(|i| {
            let x: f64 = c + h * NODES[i];
            x.powf(2.6) * x.recip().ln()
        });
        let r = apply(&vals, h);
        assert!((r.kronrod / 7.716_049_357_767_090_777e-2 - 1.0).abs() < 1e-14);
        assert!((r.error() / 2.990_224_871_000_550_874e-6 - 1.0).abs() < 1e-7);
        assert!((r.resasc / 4.434_273_814_139_995_384e-2 - 1.0).abs() < 1e-14);
    }
}
