//! Closed-form background metrics.
//!
//! Every component is assembled from hand-differentiated univariate
//! derivative lists `(f, f', f'', f''')`, so the chart hands out exact
//! partials of `g_{αβ}` through third order. Signature is `(+,−,−,−)`.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::jet::{Jet, MAX_ORDER};
use crate::tensor::{Point, TensorJet};

pub const SIGNATURE: [i8; 4] = [1, -1, -1, -1];

/// Anything that can hand out a metric jet of order 3 at a point.
pub trait Chart: Send + Sync {
    fn label(&self) -> String;

    /// Fails with [`Error::Domain`] outside the chart's valid region.
    fn check_point(&self, point: &Point) -> Result<()>;

    /// Metric components `g_{αβ}` with partials through order 3.
    fn metric_jet(&self, point: &Point) -> Result<TensorJet>;
}

#[derive(Clone, Debug, PartialEq)]
pub enum MetricKind {
    /// Cartesian `(t, x, y, z)`.
    Minkowski,
    /// Schwarzschild coordinates `(t, r, θ, φ)`.
    Schwarzschild {
        mass: f64,
        horizon_margin: f64,
        theta_margin: f64,
    },
    /// Flat slicing `(t, x, y, z)`, `a(t) = e^{Ht}`.
    DeSitter { hubble: f64 },
    /// Spatially flat FRW `(t, x, y, z)`, `a(t) = t^q`.
    Frw { exponent: f64, t_min: f64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct MetricChart {
    kind: MetricKind,
}

pub const DEFAULT_MASS: f64 = 1.0;
pub const DEFAULT_HORIZON_MARGIN: f64 = 0.5;
pub const DEFAULT_THETA_MARGIN: f64 = 0.1;
pub const DEFAULT_HUBBLE: f64 = 0.1;
pub const DEFAULT_FRW_EXPONENT: f64 = 2.0 / 3.0;
pub const DEFAULT_FRW_T_MIN: f64 = 0.1;

pub const CATALOG: [&str; 4] = ["minkowski", "schwarzschild", "de_sitter", "frw"];

fn invalid(name: &str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name: name.to_string(),
        reason: reason.into(),
    }
}

fn positive(name: &str, v: f64) -> Result<f64> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(invalid(name, format!("must be finite and > 0, got {v}")))
    }
}

impl MetricChart {
    pub fn new(kind: MetricKind) -> Result<Self> {
        match &kind {
            MetricKind::Minkowski => {}
            MetricKind::Schwarzschild {
                mass,
                horizon_margin,
                theta_margin,
            } => {
                positive("M", *mass)?;
                positive("eps", *horizon_margin)?;
                positive("theta_margin", *theta_margin)?;
                if *theta_margin >= PI / 2.0 {
                    return Err(invalid("theta_margin", "must be < π/2"));
                }
            }
            MetricKind::DeSitter { hubble } => {
                positive("H", *hubble)?;
            }
            MetricKind::Frw { exponent, t_min } => {
                if !exponent.is_finite() {
                    return Err(invalid("q", "must be finite"));
                }
                positive("t_min", *t_min)?;
            }
        }
        Ok(MetricChart { kind })
    }

    pub fn minkowski() -> Self {
        MetricChart {
            kind: MetricKind::Minkowski,
        }
    }

    pub fn schwarzschild(mass: f64) -> Result<Self> {
        MetricChart::new(MetricKind::Schwarzschild {
            mass,
            horizon_margin: DEFAULT_HORIZON_MARGIN,
            theta_margin: DEFAULT_THETA_MARGIN,
        })
    }

    pub fn de_sitter(hubble: f64) -> Result<Self> {
        MetricChart::new(MetricKind::DeSitter { hubble })
    }

    pub fn frw(exponent: f64) -> Result<Self> {
        MetricChart::new(MetricKind::Frw {
            exponent,
            t_min: DEFAULT_FRW_T_MIN,
        })
    }

    /// Looks up a catalog entry by name, filling unspecified parameters
    /// with defaults. Unknown parameter names are rejected.
    pub fn from_name(name: &str, params: &BTreeMap<String, f64>) -> Result<Self> {
        let allowed: &[&str] = match name {
            "minkowski" => &[],
            "schwarzschild" => &["M", "eps", "theta_margin"],
            "de_sitter" => &["H"],
            "frw" => &["q", "t_min"],
            other => return Err(Error::UnknownMetric(other.to_string())),
        };
        if let Some(bad) = params.keys().find(|k| !allowed.contains(&k.as_str())) {
            return Err(invalid(
                bad,
                format!("not a parameter of {name} (allowed: {allowed:?})"),
            ));
        }
        let get = |k: &str, default: f64| params.get(k).copied().unwrap_or(default);
        let kind = match name {
            "minkowski" => MetricKind::Minkowski,
            "schwarzschild" => MetricKind::Schwarzschild {
                mass: get("M", DEFAULT_MASS),
                horizon_margin: get("eps", DEFAULT_HORIZON_MARGIN),
                theta_margin: get("theta_margin", DEFAULT_THETA_MARGIN),
            },
            "de_sitter" => MetricKind::DeSitter {
                hubble: get("H", DEFAULT_HUBBLE),
            },
            _ => MetricKind::Frw {
                exponent: get("q", DEFAULT_FRW_EXPONENT),
                t_min: get("t_min", DEFAULT_FRW_T_MIN),
            },
        };
        MetricChart::new(kind)
    }

    pub fn kind(&self) -> &MetricKind {
        &self.kind
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            MetricKind::Minkowski => "minkowski",
            MetricKind::Schwarzschild { .. } => "schwarzschild",
            MetricKind::DeSitter { .. } => "de_sitter",
            MetricKind::Frw { .. } => "frw",
        }
    }

    pub fn coords(&self) -> [&'static str; 4] {
        match self.kind {
            MetricKind::Schwarzschild { .. } => ["t", "r", "theta", "phi"],
            _ => ["t", "x", "y", "z"],
        }
    }

    pub fn signature(&self) -> [i8; 4] {
        SIGNATURE
    }

    /// All parameters with defaults filled in.
    pub fn params(&self) -> BTreeMap<String, f64> {
        let pairs: Vec<(&str, f64)> = match self.kind {
            MetricKind::Minkowski => vec![],
            MetricKind::Schwarzschild {
                mass,
                horizon_margin,
                theta_margin,
            } => vec![("M", mass), ("eps", horizon_margin), ("theta_margin", theta_margin)],
            MetricKind::DeSitter { hubble } => vec![("H", hubble)],
            MetricKind::Frw { exponent, t_min } => vec![("q", exponent), ("t_min", t_min)],
        };
        pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
    }

    /// Vacuum solutions: Ricci vanishes identically.
    pub fn is_ricci_flat(&self) -> bool {
        matches!(self.kind, MetricKind::Minkowski | MetricKind::Schwarzschild { .. })
    }

    pub fn is_flat(&self) -> bool {
        matches!(self.kind, MetricKind::Minkowski)
    }

    /// Default sampling box, one `[lo, hi]` interval per coordinate, well
    /// inside the valid region.
    pub fn default_region(&self) -> [[f64; 2]; 4] {
        match self.kind {
            MetricKind::Minkowski => [[-2.0, 2.0]; 4],
            MetricKind::Schwarzschild { mass, theta_margin, .. } => [
                [0.0, 1.0],
                [3.0 * mass, 10.0 * mass],
                [theta_margin.max(0.3), PI - theta_margin.max(0.3)],
                [0.0, 2.0 * PI],
            ],
            MetricKind::DeSitter { .. } => [[-1.0, 1.0], [-2.0, 2.0], [-2.0, 2.0], [-2.0, 2.0]],
            MetricKind::Frw { t_min, .. } => [
                [t_min.max(0.5), t_min.max(0.5) + 1.5],
                [-2.0, 2.0],
                [-2.0, 2.0],
                [-2.0, 2.0],
            ],
        }
    }

    /// Metric components at a point.
    pub fn g(&self, point: &Point) -> Result<[[f64; 4]; 4]> {
        let jet = self.metric_jet_of_order(point, 0)?;
        Ok(std::array::from_fn(|a| std::array::from_fn(|b| jet.value(&[a, b]))))
    }

    /// `∂_μ g_{αβ}` indexed `[μ][α][β]`.
    pub fn dg(&self, point: &Point) -> Result<[[[f64; 4]; 4]; 4]> {
        let jet = self.metric_jet_of_order(point, 1)?;
        Ok(std::array::from_fn(|m| {
            std::array::from_fn(|a| std::array::from_fn(|b| jet.get(&[a, b]).partial(&[m]).unwrap()))
        }))
    }

    /// `∂_μ ∂_ν g_{αβ}` indexed `[μ][ν][α][β]`.
    pub fn d2g(&self, point: &Point) -> Result<[[[[f64; 4]; 4]; 4]; 4]> {
        let jet = self.metric_jet_of_order(point, 2)?;
        Ok(std::array::from_fn(|m| {
            std::array::from_fn(|n| {
                std::array::from_fn(|a| std::array::from_fn(|b| jet.get(&[a, b]).partial(&[m, n]).unwrap()))
            })
        }))
    }

    /// `∂_μ ∂_ν ∂_λ g_{αβ}` indexed `[μ][ν][λ][α][β]`.
    #[allow(clippy::type_complexity)]
    pub fn d3g(&self, point: &Point) -> Result<[[[[[f64; 4]; 4]; 4]; 4]; 4]> {
        let jet = self.metric_jet_of_order(point, 3)?;
        Ok(std::array::from_fn(|m| {
            std::array::from_fn(|n| {
                std::array::from_fn(|l| {
                    std::array::from_fn(|a| std::array::from_fn(|b| jet.get(&[a, b]).partial(&[m, n, l]).unwrap()))
                })
            })
        }))
    }

    pub fn metric_jet_of_order(&self, point: &Point, order: u8) -> Result<TensorJet> {
        self.check_point(point)?;
        let diag: [Jet; 4] = match self.kind {
            MetricKind::Minkowski => SIGNATURE.map(|s| Jet::constant(f64::from(s), order)),
            MetricKind::Schwarzschild { mass: m, .. } => {
                let r = point[1];
                let u = r - 2.0 * m;
                let f = [
                    1.0 - 2.0 * m / r,
                    2.0 * m / (r * r),
                    -4.0 * m / r.powi(3),
                    12.0 * m / r.powi(4),
                ];
                // -1/f = -r/(r-2M) = -1 - 2M/(r-2M)
                let grr = [-r / u, 2.0 * m / (u * u), -4.0 * m / u.powi(3), 12.0 * m / u.powi(4)];
                let r2 = [r * r, 2.0 * r, 2.0, 0.0];
                let th = point[2];
                let (s2, c2) = (2.0 * th).sin_cos();
                let sin_sq = [th.sin().powi(2), s2, 2.0 * c2, -4.0 * s2];
                let r2_jet = Jet::univariate(1, &r2, order);
                [
                    Jet::univariate(1, &f, order),
                    Jet::univariate(1, &grr, order),
                    -r2_jet,
                    -(r2_jet * Jet::univariate(2, &sin_sq, order)),
                ]
            }
            MetricKind::DeSitter { hubble: h } => {
                let e = (2.0 * h * point[0]).exp();
                let k = 2.0 * h;
                let a2 = [e, k * e, k * k * e, k * k * k * e];
                let s = -Jet::univariate(0, &a2, order);
                [Jet::constant(1.0, order), s, s, s]
            }
            MetricKind::Frw { exponent: q, .. } => {
                let t = point[0];
                let p = 2.0 * q;
                let a2 = [
                    t.powf(p),
                    p * t.powf(p - 1.0),
                    p * (p - 1.0) * t.powf(p - 2.0),
                    p * (p - 1.0) * (p - 2.0) * t.powf(p - 3.0),
                ];
                let s = -Jet::univariate(0, &a2, order);
                [Jet::constant(1.0, order), s, s, s]
            }
        };
        Ok(TensorJet::from_fn(0, 2, order, *point, |i| {
            if i[0] == i[1] {
                diag[i[0]]
            } else {
                Jet::zero(order)
            }
        }))
    }
}

impl Chart for MetricChart {
    fn label(&self) -> String {
        let params: Vec<String> = self.params().iter().map(|(k, v)| format!("{k}={v}")).collect();
        if params.is_empty() {
            self.name().to_string()
        } else {
            format!("{}({})", self.name(), params.join(", "))
        }
    }

    fn check_point(&self, point: &Point) -> Result<()> {
        let domain = |bound: String| Error::Domain {
            chart: self.name().to_string(),
            point: *point,
            bound,
        };
        if point.iter().any(|c| !c.is_finite()) {
            return Err(domain("coordinates must be finite".into()));
        }
        match self.kind {
            MetricKind::Minkowski | MetricKind::DeSitter { .. } => Ok(()),
            MetricKind::Schwarzschild {
                mass,
                horizon_margin,
                theta_margin,
            } => {
                let r_min = (2.0 + horizon_margin) * mass;
                if point[1] < r_min {
                    return Err(domain(format!("r = {} < (2+ε)M = {r_min}", point[1])));
                }
                let th = point[2];
                if th < theta_margin || th > PI - theta_margin {
                    return Err(domain(format!(
                        "θ = {th} outside [{theta_margin}, π − {theta_margin}] (polar axis)"
                    )));
                }
                Ok(())
            }
            MetricKind::Frw { t_min, .. } => {
                if point[0] < t_min {
                    return Err(domain(format!("t = {} < t_min = {t_min}", point[0])));
                }
                Ok(())
            }
        }
    }

    fn metric_jet(&self, point: &Point) -> Result<TensorJet> {
        self.metric_jet_of_order(point, MAX_ORDER)
    }
}
