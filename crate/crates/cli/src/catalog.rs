//! Named models with their parameters, and evaluation of one parameter point.

use std::collections::BTreeMap;

use dissipstab::hurwitz::{classify, hurwitz_h, StabilityClass};
use dissipstab::krein::{energy_form, krein_spectrum, IndefiniteMetric, KreinEntry};
use dissipstab::models::*;
use dissipstab::msystem::{char_quartic, leading_eigenvalue, spectrum, spectrum_abscissa, MechanicalSystem, QuarticPoly};
use dissipstab::smallalg::{max_real, poly_roots, SmallMatrix};
use dissipstab::{tol, Complex64};

use crate::error::{CliError, CliResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Model {
    Quartic,
    Ziegler,
    Brouwer,
    Maclaurin,
    MaclaurinViscous,
    MaclaurinRadiative,
    Sobolev,
    Combres,
}

pub struct ParamSpec {
    pub name: &'static str,
    pub default: f64,
    pub unit: &'static str,
    pub doc: &'static str,
}

const fn p(name: &'static str, default: f64, unit: &'static str, doc: &'static str) -> ParamSpec {
    ParamSpec { name, default, unit, doc }
}

const QUARTIC: &[ParamSpec] = &[
    p("a1", 4.0, "1", "coefficient of lambda^3"),
    p("a2", 6.0, "1", "coefficient of lambda^2"),
    p("a3", 4.0, "1", "coefficient of lambda"),
    p("a4", 1.0, "1", "constant term"),
];
const ZIEGLER: &[ParamSpec] = &[
    p("m", 1.0, "mass", "mass of the outer rod (inner rod carries 2m)"),
    p("c", 1.0, "torque/rad", "joint stiffness"),
    p("l", 1.0, "length", "rod length"),
    p("p", 0.0, "force", "follower load"),
    p("b", 0.0, "torque*time/rad", "joint damping"),
];
const BROUWER: &[ParamSpec] = &[
    p("g", 1.0, "length/time^2", "gravity"),
    p("k1", 1.0, "1/length", "first principal curvature"),
    p("k2", 1.0, "1/length", "second principal curvature"),
    p("omega", 0.0, "1/time", "angular velocity of the vessel"),
    p("c1", 0.0, "1/time", "friction along x"),
    p("c2", 0.0, "1/time", "friction along y"),
];
const MACLAURIN: &[ParamSpec] = &[p("e", 0.5, "1", "eccentricity")];
const MACLAURIN_VISCOUS: &[ParamSpec] = &[
    p("e", 0.5, "1", "eccentricity"),
    p("mu", 0.01, "sqrt(pi G rho)", "viscosity"),
];
const MACLAURIN_RADIATIVE: &[ParamSpec] = &[
    p("e", 0.5, "1", "eccentricity"),
    p("delta", 0.01, "1", "radiation-reaction strength"),
    p("q1", 0.0, "1", "radiation coefficient q1 (constant in e)"),
    p("q2", 0.0, "1", "radiation coefficient q2 (constant in e)"),
];
const SOBOLEV: &[ParamSpec] = &[
    p("a", 1.0, "length", "equatorial semi-axis of the cavity"),
    p("c", 2.0, "length", "polar semi-axis of the cavity"),
    p("a1", 0.0, "mass*length^2", "transverse moment of inertia of the shell"),
    p("c1", 0.0, "mass*length^2", "axial moment of inertia of the shell"),
    p("m1", 0.0, "mass", "shell mass"),
    p("l1", 0.0, "length", "support to shell centre of mass"),
    p("m2", 0.0, "mass", "fluid mass"),
    p("l2", 0.0, "length", "support to fluid centre of mass"),
    p("rho", 1.0, "mass/length^3", "fluid density"),
    p("omega", 1.0, "1/time", "spin rate"),
    p("g", 0.0, "length/time^2", "gravity"),
];
const COMBRES: &[ParamSpec] = &[
    p("omega", 0.5, "1/time", "rotation rate of the coupled oscillators"),
    p("eps", 0.05, "1", "forcing amplitude"),
    p("mu", 0.0, "1", "damping (scaled by eps)"),
    p("delta_plus", 0.0, "1", "detuning of the forcing from the sum frequency"),
];

impl Model {
    pub const ALL: [Model; 8] = [
        Model::Quartic,
        Model::Ziegler,
        Model::Brouwer,
        Model::Maclaurin,
        Model::MaclaurinViscous,
        Model::MaclaurinRadiative,
        Model::Sobolev,
        Model::Combres,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Model::Quartic => "quartic",
            Model::Ziegler => "ziegler",
            Model::Brouwer => "brouwer",
            Model::Maclaurin => "maclaurin",
            Model::MaclaurinViscous => "maclaurin-viscous",
            Model::MaclaurinRadiative => "maclaurin-radiative",
            Model::Sobolev => "sobolev",
            Model::Combres => "combres",
        }
    }

    pub fn parse(name: &str) -> Option<Model> {
        Model::ALL.into_iter().find(|m| m.name() == name)
    }

    pub fn names() -> String {
        Model::ALL.iter().map(|m| m.name()).collect::<Vec<_>>().join(", ")
    }

    pub fn params(&self) -> &'static [ParamSpec] {
        match self {
            Model::Quartic => QUARTIC,
            Model::Ziegler => ZIEGLER,
            Model::Brouwer => BROUWER,
            Model::Maclaurin => MACLAURIN,
            Model::MaclaurinViscous => MACLAURIN_VISCOUS,
            Model::MaclaurinRadiative => MACLAURIN_RADIATIVE,
            Model::Sobolev => SOBOLEV,
            Model::Combres => COMBRES,
        }
    }

    pub fn describe(&self) -> &'static str {
        match self {
            Model::Quartic => "raw quartic lambda^4 + a1 lambda^3 + a2 lambda^2 + a3 lambda + a4",
            Model::Ziegler => "double pendulum under a follower load with equal joint damping",
            Model::Brouwer => "point mass in a rotating vessel with two principal curvatures",
            Model::Maclaurin => "inviscid Maclaurin spheroid, ellipsoidal perturbations",
            Model::MaclaurinViscous => "Maclaurin spheroid with viscous dissipation",
            Model::MaclaurinRadiative => "Maclaurin spheroid with radiation reaction (user-supplied q1, q2)",
            Model::Sobolev => "top with a fluid-filled ellipsoidal cavity (three-mode reduction)",
            Model::Combres => "rotating coupled oscillators with periodic stiffness (Floquet)",
        }
    }

    pub fn unit(&self, param: &str) -> &'static str {
        self.params().iter().find(|s| s.name == param).map_or("", |s| s.unit)
    }
}

/// Full parameter set of a model: defaults overridden by `values`.
#[derive(Clone, Debug, PartialEq)]
pub struct Params(BTreeMap<&'static str, f64>);

impl Params {
    pub fn defaults(model: Model) -> Self {
        Params(model.params().iter().map(|s| (s.name, s.default)).collect())
    }

    pub fn resolve(model: Model, values: &BTreeMap<String, f64>) -> std::result::Result<Self, String> {
        let mut out = Params::defaults(model);
        for (k, v) in values {
            out.set(model, k, *v)?;
        }
        Ok(out)
    }

    pub fn set(&mut self, model: Model, name: &str, value: f64) -> std::result::Result<(), String> {
        let spec = model.params().iter().find(|s| s.name == name).ok_or_else(|| {
            let known: Vec<&str> = model.params().iter().map(|s| s.name).collect();
            format!("model {} has no parameter '{name}' (known: {})", model.name(), known.join(", "))
        })?;
        if !value.is_finite() {
            return Err(format!("parameter '{name}' must be finite"));
        }
        self.0.insert(spec.name, value);
        Ok(())
    }

    pub fn get(&self, name: &str) -> f64 {
        self.0[name]
    }
}

/// Parse `name=value` assignments from the command line.
pub fn parse_assignments(model: Model, items: &[String]) -> CliResult<Params> {
    let mut params = Params::defaults(model);
    for item in items {
        let (k, v) = item
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("expected name=value, got '{item}'")))?;
        let v: f64 = v.trim().parse().map_err(|_| CliError::Usage(format!("'{v}' is not a number")))?;
        params.set(model, k.trim(), v).map_err(CliError::Usage)?;
    }
    Ok(params)
}

/// Quantities reported for one parameter point.
#[derive(Clone, Debug, PartialEq)]
pub struct PointResult {
    pub class: StabilityClass,
    /// Largest real part of the growth exponents.
    pub abscissa: f64,
    pub leading: Complex64,
    pub h: Option<f64>,
    pub krein: Option<Vec<i8>>,
}

pub fn krein_string(signs: &[i8]) -> String {
    signs.iter().map(|s| format!("{s:+}")).collect::<Vec<_>>().join(" ")
}

fn expand_signs(entries: &[KreinEntry]) -> Vec<i8> {
    entries.iter().flat_map(|e| std::iter::repeat_n(e.sign, e.alg_mult)).collect()
}

fn krein_of(form: dissipstab::Result<(SmallMatrix, IndefiniteMetric)>) -> Option<Vec<i8>> {
    let (a, g) = form.ok()?;
    krein_spectrum(&a, &g, tol::EIG).ok().map(|s| expand_signs(&s))
}

fn eval_mechanical(sys: &MechanicalSystem, tol: f64, krein: Option<Vec<i8>>) -> dissipstab::Result<PointResult> {
    let s = spectrum(sys, tol::EIG)?;
    let q = char_quartic(sys)?;
    Ok(PointResult {
        class: classify(&q, tol)?.class,
        abscissa: spectrum_abscissa(&s),
        leading: leading_eigenvalue(&s).unwrap_or_default(),
        h: Some(hurwitz_h(&q)),
        krein,
    })
}

pub fn build_system(model: Model, p: &Params) -> dissipstab::Result<MechanicalSystem> {
    match model {
        Model::Ziegler => build_ziegler(&ZieglerParams { m: p.get("m"), c: p.get("c"), l: p.get("l"), p: p.get("p"), b: p.get("b") }),
        Model::Brouwer => build_brouwer(&brouwer_params(p)),
        Model::Maclaurin => build_maclaurin(&MaclaurinParams::new(p.get("e")), MaclaurinVariant::Inviscid),
        Model::MaclaurinViscous => build_maclaurin(&MaclaurinParams { mu: p.get("mu"), ..MaclaurinParams::new(p.get("e")) }, MaclaurinVariant::Viscous),
        Model::MaclaurinRadiative => build_maclaurin(
            &MaclaurinParams {
                delta: p.get("delta"),
                q1: Some(RadCoeff::Const(p.get("q1"))),
                q2: Some(RadCoeff::Const(p.get("q2"))),
                ..MaclaurinParams::new(p.get("e"))
            },
            MaclaurinVariant::Radiative,
        ),
        _ => Err(dissipstab::Error::InvalidParameter(format!("{} is not a second-order system", model.name()))),
    }
}

pub fn brouwer_params(p: &Params) -> BrouwerParams {
    BrouwerParams { g: p.get("g"), k1: p.get("k1"), k2: p.get("k2"), omega: p.get("omega"), c1: p.get("c1"), c2: p.get("c2") }
}

pub fn sobolev_params(p: &Params) -> SobolevParams {
    SobolevParams {
        a: p.get("a"),
        c: p.get("c"),
        a1: p.get("a1"),
        c1: p.get("c1"),
        m1: p.get("m1"),
        l1: p.get("l1"),
        m2: p.get("m2"),
        l2: p.get("l2"),
        rho: p.get("rho"),
        omega: p.get("omega"),
        g: p.get("g"),
    }
}

/// Self-adjoint form `(B, G)` of a model with a metric, if it has one.
pub fn metric_form(model: Model, p: &Params) -> dissipstab::Result<(SmallMatrix, IndefiniteMetric)> {
    match model {
        Model::Sobolev => build_sobolev(&sobolev_params(p)).map(|m| (m.b, m.metric)),
        Model::Maclaurin => maclaurin_energy_form(p.get("e")),
        Model::Brouwer => energy_form(&build_brouwer(&brouwer_params(p))?),
        _ => Err(dissipstab::Error::InvalidParameter(format!("{} has no indefinite metric", model.name()))),
    }
}

const FLOQUET_STEPS: usize = 2000;

pub fn evaluate(model: Model, p: &Params, tol: f64) -> dissipstab::Result<PointResult> {
    match model {
        Model::Quartic => {
            let q = QuarticPoly::new(p.get("a1"), p.get("a2"), p.get("a3"), p.get("a4"));
            let roots = poly_roots(&q.to_poly(), tol::EIG)?;
            let leading = roots
                .iter()
                .map(|r| r.value)
                .max_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)))
                .unwrap_or_default();
            Ok(PointResult { class: classify(&q, tol)?.class, abscissa: max_real(&roots), leading, h: Some(hurwitz_h(&q)), krein: None })
        }
        Model::Ziegler | Model::MaclaurinViscous | Model::MaclaurinRadiative => eval_mechanical(&build_system(model, p)?, tol, None),
        Model::Maclaurin => eval_mechanical(&build_system(model, p)?, tol, krein_of(metric_form(model, p))),
        Model::Brouwer => {
            let sys = build_system(model, p)?;
            let krein = if sys.d.is_zero() { krein_of(energy_form(&sys)) } else { None };
            eval_mechanical(&sys, tol, krein)
        }
        Model::Sobolev => {
            // x' = iΩBx: the growth exponents are iΩλ
            let (b, g) = metric_form(model, p)?;
            let s = krein_spectrum(&b, &g, tol::EIG)?;
            let i_omega = Complex64::new(0.0, p.get("omega"));
            let leading = s
                .iter()
                .map(|e| i_omega * e.value)
                .max_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)))
                .unwrap_or_default();
            let real_semisimple = s.iter().all(|e| e.value.im == 0.0 && e.geom_mult == e.alg_mult);
            Ok(PointResult {
                class: if real_semisimple { StabilityClass::MarginallyStable } else { StabilityClass::Unstable },
                abscissa: leading.re,
                leading,
                h: None,
                krein: Some(expand_signs(&s)),
            })
        }
        Model::Combres => {
            let params = CombResParams::at_detuning(p.get("omega"), p.get("eps"), p.get("mu"), p.get("delta_plus"));
            let sys = build_combres(&params)?;
            let m = monodromy(&sys, FLOQUET_STEPS)?;
            let t = sys.period();
            let leading = m
                .multipliers
                .iter()
                .max_by(|a, b| a.norm().total_cmp(&b.norm()).then(a.arg().total_cmp(&b.arg())))
                .map(|z| z.ln() / t)
                .unwrap_or_default();
            let r = m.max_modulus();
            let class = if r > 1.0 + tol::FLOQUET {
                StabilityClass::Unstable
            } else if r < 1.0 - tol::FLOQUET {
                StabilityClass::AsymptoticallyStable
            } else {
                StabilityClass::MarginallyStable
            };
            Ok(PointResult { class, abscissa: r.ln() / t, leading, h: None, krein: None })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_model_evaluates_at_defaults() {
        for m in Model::ALL {
            let r = evaluate(m, &Params::defaults(m), 1e-12).unwrap();
            assert!(r.abscissa.is_finite(), "{}", m.name());
            assert_eq!(Model::parse(m.name()), Some(m));
        }
    }

    #[test]
    fn unknown_parameter_is_rejected() {
        let mut v = BTreeMap::new();
        v.insert("zeta".to_string(), 1.0);
        assert!(Params::resolve(Model::Ziegler, &v).unwrap_err().contains("zeta"));
        assert!(parse_assignments(Model::Ziegler, &["p=2.2".into()]).is_ok());
        assert!(parse_assignments(Model::Ziegler, &["p".into()]).is_err());
    }

    #[test]
    fn sobolev_zone_is_unstable() {
        let mut p = Params::defaults(Model::Sobolev);
        p.set(Model::Sobolev, "c", 2.0).unwrap();
        let r = evaluate(Model::Sobolev, &p, 1e-12).unwrap();
        assert_eq!(r.class, StabilityClass::Unstable);
        assert!(r.abscissa > 0.0);
        p.set(Model::Sobolev, "c", 0.5).unwrap();
        let r = evaluate(Model::Sobolev, &p, 1e-12).unwrap();
        assert_eq!(r.class, StabilityClass::MarginallyStable);
        assert_eq!(r.krein, Some(vec![1, 1, 1]));
    }
}
