//! Piecewise-smooth symbols on the unit circle of the form
//!
//! f(e^{iθ}) = e^{V(e^{iθ})} · e^{iθ Σ_j β_j} · Π_j |2 sin((θ−θ_j)/2)|^{2α_j}
//!             · g_{β_j}(θ) · e^{−iθ_j β_j},
//!
//! where V is a trigonometric polynomial, each θ_j carries an algebraic root
//! of exponent 2α_j (Re α_j > −1/2 keeps f integrable) and a jump factor
//!
//! g_{β_j}(θ) = e^{iπβ_j} for 0 ≤ θ < θ_j,  e^{−iπβ_j} for θ_j ≤ θ < 2π,
//!
//! so that f jumps by the ratio e^{2πiβ_j} across θ_j. The first singular
//! angle is always θ_0 = 0, possibly with α_0 = β_0 = 0 when the point z = 1
//! is actually regular. Everything downstream (moments, determinants,
//! asymptotics) consumes symbols through this module.

use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::collections::BTreeMap;
use std::f64::consts::PI;
use thiserror::Error;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// One singular point z_j = e^{iθ_j} with its root exponent α_j and jump
/// exponent β_j.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Singularity {
    pub theta: f64,
    pub alpha: Complex64,
    pub beta: Complex64,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SymbolError {
    #[error("Re α = {re_alpha} at θ = {theta} violates integrability (need Re α > −1/2)")]
    IntegrabilityViolation { theta: f64, re_alpha: f64 },
    #[error("singular angles must start at 0 and increase strictly within [0, 2π): {detail}")]
    OrderingViolation { detail: String },
    #[error("singularity #{index} has α = β = 0; only the θ = 0 record may be trivial")]
    EmptySingularity { index: usize },
    #[error("value not defined at singular angle θ = {theta} (α ≠ 0 there)")]
    EvaluationAtSingularity { theta: f64 },
    #[error("singularity #{index} has α ≠ 0, so its one-sided limits are not both finite")]
    NotAJumpOnlySingularity { index: usize },
    #[error("symbol description rejected: {0}")]
    Json(String),
}

/// Values of the Wiener–Hopf factors of e^{V} at one singular point:
/// e^{V(z)} = b_+(z) e^{V_0} b_−(z) with b_+(z) = exp(Σ_{k≥1} V_k z^k) and
/// b_−(z) = exp(Σ_{k≤−1} V_k z^k), both exact finite sums here.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WienerHopfData {
    pub v0: Complex64,
    pub b_plus_at: Complex64,
    pub b_minus_at: Complex64,
}

/// A weight on the unit circle as quadrature consumers see it: the angles
/// where it is singular or jumps, the algebraic exponent governing its decay
/// at each such angle, and evaluation addressed by (nearest anchor, signed
/// offset) so the singular factor never suffers cancellation.
pub trait CircleWeight {
    /// Splitting angles, strictly increasing, starting at 0.
    fn anchors(&self) -> Vec<f64>;
    /// p_k such that |weight| ~ C·|θ−θ_k|^{p_k} near anchor k.
    fn endpoint_exponent(&self, k: usize) -> f64;
    /// Whether quadrature must grade its nodes into anchor k. True whenever
    /// the modulus exponent is nonzero, but also when the weight carries a
    /// log-oscillatory phase |θ−θ_k|^{iω} of unit modulus there (purely
    /// imaginary root exponents), which uniform panels cannot resolve.
    fn endpoint_needs_cap(&self, k: usize) -> bool {
        self.endpoint_exponent(k) != 0.0
    }
    /// Value at θ = anchors(k) + delta (delta < 0 at anchor 0 wraps to 2π+delta).
    fn eval_offset(&self, anchor: usize, delta: f64) -> Complex64;
}

/// A validated symbol: singular data plus the trigonometric polynomial V.
#[derive(Debug, Clone, PartialEq)]
pub struct FhSymbol {
    singularities: Vec<Singularity>,
    v_coeffs: BTreeMap<i32, Complex64>,
}

impl FhSymbol {
    /// Build and validate. The singularity list must be sorted by angle,
    /// start at θ = 0, respect Re α > −1/2, and contain no trivial records
    /// beyond the mandatory θ = 0 one.
    pub fn new(
        singularities: Vec<Singularity>,
        v_coeffs: BTreeMap<i32, Complex64>,
    ) -> Result<Self, SymbolError> {
        let sym = FhSymbol {
            singularities,
            v_coeffs,
        };
        sym.validate()?;
        Ok(sym)
    }

    /// The constant symbol f ≡ 1 (one trivial record at θ = 0, V ≡ 0).
    pub fn identity() -> Self {
        FhSymbol {
            singularities: vec![Singularity {
                theta: 0.0,
                alpha: ZERO,
                beta: ZERO,
            }],
            v_coeffs: BTreeMap::new(),
        }
    }

    /// One singularity at θ = 0 with the given exponents, V ≡ 0.
    pub fn single(alpha: Complex64, beta: Complex64) -> Result<Self, SymbolError> {
        FhSymbol::new(
            vec![Singularity {
                theta: 0.0,
                alpha,
                beta,
            }],
            BTreeMap::new(),
        )
    }

    fn validate(&self) -> Result<(), SymbolError> {
        let s = &self.singularities;
        if s.is_empty() || s[0].theta != 0.0 {
            return Err(SymbolError::OrderingViolation {
                detail: "the list must begin with a θ = 0 record".into(),
            });
        }
        for w in s.windows(2) {
            if !(w[0].theta < w[1].theta) {
                return Err(SymbolError::OrderingViolation {
                    detail: format!("θ = {} does not exceed its predecessor {}", w[1].theta, w[0].theta),
                });
            }
        }
        if !(s[s.len() - 1].theta < 2.0 * PI) {
            return Err(SymbolError::OrderingViolation {
                detail: format!("θ = {} lies outside [0, 2π)", s[s.len() - 1].theta),
            });
        }
        for rec in s {
            if !(rec.alpha.re > -0.5) {
                return Err(SymbolError::IntegrabilityViolation {
                    theta: rec.theta,
                    re_alpha: rec.alpha.re,
                });
            }
        }
        for (index, rec) in s.iter().enumerate().skip(1) {
            if rec.alpha == ZERO && rec.beta == ZERO {
                return Err(SymbolError::EmptySingularity { index });
            }
        }
        Ok(())
    }

    pub fn singularities(&self) -> &[Singularity] {
        &self.singularities
    }

    pub fn v_coeffs(&self) -> &BTreeMap<i32, Complex64> {
        &self.v_coeffs
    }

    /// True when V has no nonzero coefficient.
    pub fn v_is_zero(&self) -> bool {
        self.v_coeffs.values().all(|c| *c == ZERO)
    }

    pub fn sum_alpha(&self) -> Complex64 {
        self.singularities.iter().map(|s| s.alpha).sum()
    }

    pub fn sum_beta(&self) -> Complex64 {
        self.singularities.iter().map(|s| s.beta).sum()
    }

    /// z_j = e^{iθ_j}.
    pub fn z_at(&self, j: usize) -> Complex64 {
        Complex64::from_polar(1.0, self.singularities[j].theta)
    }

    /// V(z) = Σ_k V_k z^k at an arbitrary complex point.
    pub fn v_at(&self, z: Complex64) -> Complex64 {
        let mut acc = ZERO;
        for (&k, &c) in &self.v_coeffs {
            acc += c * z.powi(k);
        }
        acc
    }

    /// V(e^{iθ}) as a finite Fourier sum.
    pub fn v_at_theta(&self, theta: f64) -> Complex64 {
        let mut acc = ZERO;
        for (&k, &c) in &self.v_coeffs {
            acc += c * Complex64::from_polar(1.0, k as f64 * theta);
        }
        acc
    }

    /// ln b_+(z) = Σ_{k≥1} V_k z^k (analytic inside the circle).
    pub fn log_b_plus(&self, z: Complex64) -> Complex64 {
        let mut acc = ZERO;
        for (&k, &c) in self.v_coeffs.range(1..) {
            acc += c * z.powi(k);
        }
        acc
    }

    /// ln b_−(z) = Σ_{k≤−1} V_k z^k (analytic outside the circle).
    pub fn log_b_minus(&self, z: Complex64) -> Complex64 {
        let mut acc = ZERO;
        for (&k, &c) in self.v_coeffs.range(..0) {
            acc += c * z.powi(k);
        }
        acc
    }

    /// Wiener–Hopf values at singularity j.
    pub fn wiener_hopf_at(&self, j: usize) -> WienerHopfData {
        let z = self.z_at(j);
        WienerHopfData {
            v0: self.v_coeffs.get(&0).copied().unwrap_or(ZERO),
            b_plus_at: self.log_b_plus(z).exp(),
            b_minus_at: self.log_b_minus(z).exp(),
        }
    }

    /// ln f at the angle `theta` ∈ [0, 2π). When `offset` is supplied as
    /// (anchor k, δ), the |2 sin| factor of anchor k is computed from δ
    /// directly and the side of its jump factor is chosen by the sign of δ;
    /// `omit_g_of` drops one jump factor entirely (used for the jump's
    /// continuous prefactor).
    fn log_f_inner(
        &self,
        theta: f64,
        offset: Option<(usize, f64)>,
        omit_g_of: Option<usize>,
    ) -> Complex64 {
        let mut acc = self.v_at_theta(theta) + I * theta * self.sum_beta();
        for (k, s) in self.singularities.iter().enumerate() {
            if s.alpha != ZERO {
                let half = match offset {
                    Some((j, d)) if j == k => d / 2.0,
                    _ => (theta - s.theta) / 2.0,
                };
                acc += 2.0 * s.alpha * (2.0 * half.sin().abs()).ln();
            }
            if omit_g_of != Some(k) {
                let below = match offset {
                    // anchor 0 approached from below lives at θ = 2π+δ ≥ 0,
                    // which is *above* θ_0 = 0.
                    Some((j, d)) if j == k => k != 0 && d < 0.0,
                    _ => theta < s.theta,
                };
                acc += if below { I * PI * s.beta } else { -I * PI * s.beta };
            }
            acc -= I * s.theta * s.beta;
        }
        acc
    }

    /// f(e^{iθ}). θ is reduced modulo 2π first. At an angle carrying α ≠ 0
    /// the symbol vanishes or diverges and no value is returned; at a
    /// jump-only angle the value on the θ ≥ θ_j side is returned (the same
    /// half-open convention the jump factors use).
    pub fn evaluate(&self, theta: f64) -> Result<Complex64, SymbolError> {
        let t = theta.rem_euclid(2.0 * PI);
        for s in &self.singularities {
            if t == s.theta && s.alpha != ZERO {
                return Err(SymbolError::EvaluationAtSingularity { theta: s.theta });
            }
        }
        Ok(self.log_f_inner(t, None, None).exp())
    }

    /// |||β|||: the spread max |Re β_j − Re β_k| over singular points, with
    /// the θ = 0 record left out when it is trivial (α_0 = β_0 = 0). Fewer
    /// than two participating points give 0.
    pub fn seminorm(&self) -> f64 {
        let parts: Vec<f64> = self
            .singularities
            .iter()
            .enumerate()
            .filter(|(j, s)| *j != 0 || s.alpha != ZERO || s.beta != ZERO)
            .map(|(_, s)| s.beta.re)
            .collect();
        if parts.len() < 2 {
            return 0.0;
        }
        let hi = parts.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let lo = parts.iter().cloned().fold(f64::INFINITY, f64::min);
        hi - lo
    }

    /// The jump f(θ_j−0) − f(θ_j+0) at a jump-only singularity (α_j = 0),
    /// in closed form: C_j · (e^{iπβ_j} − e^{−iπβ_j}) where C_j collects every
    /// factor of f except g_{β_j}, evaluated at θ_j. (For j = 0 the phase
    /// factor e^{iθΣβ} contributes e^{i·0} = 1 on the θ→0+ side, and its own
    /// wrap across θ = 0 is what turns the naive g-jump into this expression.)
    pub fn jump_delta_f(&self, j: usize) -> Result<Complex64, SymbolError> {
        let s = self.singularities[j];
        if s.alpha != ZERO {
            return Err(SymbolError::NotAJumpOnlySingularity { index: j });
        }
        let c = self.log_f_inner(s.theta, None, Some(j)).exp();
        Ok(c * ((I * PI * s.beta).exp() - (-I * PI * s.beta).exp()))
    }

    /// Copy with α_j replaced (re-validated).
    pub fn with_alpha(&self, j: usize, alpha: Complex64) -> Result<Self, SymbolError> {
        let mut s = self.singularities.clone();
        s[j].alpha = alpha;
        FhSymbol::new(s, self.v_coeffs.clone())
    }

    /// Copy with β_j replaced (re-validated).
    pub fn with_beta(&self, j: usize, beta: Complex64) -> Result<Self, SymbolError> {
        let mut s = self.singularities.clone();
        s[j].beta = beta;
        FhSymbol::new(s, self.v_coeffs.clone())
    }

    /// Parse the JSON symbol description (see the serde impls for the schema).
    pub fn from_json_str(text: &str) -> Result<Self, SymbolError> {
        serde_json::from_str(text).map_err(|e| SymbolError::Json(e.to_string()))
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("symbol serialization cannot fail")
    }
}

impl CircleWeight for FhSymbol {
    fn anchors(&self) -> Vec<f64> {
        self.singularities.iter().map(|s| s.theta).collect()
    }

    fn endpoint_exponent(&self, k: usize) -> f64 {
        2.0 * self.singularities[k].alpha.re
    }

    fn endpoint_needs_cap(&self, k: usize) -> bool {
        // any nonzero α, including purely imaginary ones whose modulus
        // exponent is 0, twists the phase like e^{2i·Im α·ln|θ−θ_k|}
        self.singularities[k].alpha != ZERO
    }

    fn eval_offset(&self, anchor: usize, delta: f64) -> Complex64 {
        let base = self.singularities[anchor].theta;
        let theta = if anchor == 0 && delta < 0.0 {
            2.0 * PI + delta
        } else {
            base + delta
        };
        self.log_f_inner(theta, Some((anchor, delta)), None).exp()
    }
}

// ---------------------------------------------------------------------------
// JSON schema:
// {
//   "singularities": [ { "theta": 0.0, "alpha": [re, im], "beta": [re, im] } ],
//   "v": { "-1": [re, im], "1": [re, im] }
// }
// Angles in radians; the θ = 0 record is mandatory; "v" may be omitted.
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct SingularityRepr {
    theta: f64,
    alpha: [f64; 2],
    beta: [f64; 2],
}

#[derive(Serialize, Deserialize)]
struct SymbolRepr {
    singularities: Vec<SingularityRepr>,
    #[serde(default)]
    v: BTreeMap<String, [f64; 2]>,
}

impl Serialize for FhSymbol {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let repr = SymbolRepr {
            singularities: self
                .singularities
                .iter()
                .map(|s| SingularityRepr {
                    theta: s.theta,
                    alpha: [s.alpha.re, s.alpha.im],
                    beta: [s.beta.re, s.beta.im],
                })
                .collect(),
            v: self
                .v_coeffs
                .iter()
                .map(|(k, c)| (k.to_string(), [c.re, c.im]))
                .collect(),
        };
        repr.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for FhSymbol {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = SymbolRepr::deserialize(deserializer)?;
        let singularities = repr
            .singularities
            .into_iter()
            .map(|s| Singularity {
                theta: s.theta,
                alpha: Complex64::new(s.alpha[0], s.alpha[1]),
                beta: Complex64::new(s.beta[0], s.beta[1]),
            })
            .collect();
        let mut v_coeffs = BTreeMap::new();
        for (key, val) in repr.v {
            let k: i32 = key
                .parse()
                .map_err(|_| D::Error::custom(format!("non-integer Fourier index {key:?}")))?;
            v_coeffs.insert(k, Complex64::new(val[0], val[1]));
        }
        FhSymbol::new(singularities, v_coeffs).map_err(D::Error::custom)
    }
}
