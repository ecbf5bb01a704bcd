//! Sectioned key-value scenario files.
//!
//! ```text
//! [scenario]
//! name = terzaghi
//! [solid]
//! lambda = 64e6
//! [fluid.water]
//! model = compressible_liquid
//! [bc.top]
//! traction = 0, -10000
//! ```

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::constitutive::{
    CompressibleLiquidParams, FluidModel, IdealGasParams, IncompressibleLiquidParams, MixtureModel,
    NeoHookeanParams, PermeabilityParams, SmallStrainParams, SolidModel, VdWParams,
};
use crate::error::{Error, Result};
use crate::fem::BoundaryCondition;
use crate::kinematics::VolumeFractionModel;

pub const STANDARD_GRAVITY: f64 = 9.81;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verification {
    None,
    Terzaghi,
    Mandel,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Geometry {
    pub lx: f64,
    pub ly: f64,
    pub nx: usize,
    pub ny: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolidKind {
    NeoHookean,
    SmallStrain,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FractionKind {
    IncompressibleSolid,
    AffineSolid,
    Unsaturated,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolidConfig {
    pub kind: SolidKind,
    pub lambda: f64,
    pub mu: f64,
    pub phi0: f64,
    pub fractions: FractionKind,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FluidConfig {
    pub name: String,
    pub model: FluidModel<f64>,
    pub phi0: f64,
    pub permeability: PermeabilityParams<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FluxConfig {
    pub fluid: String,
    /// Inward mass flux, kg/(m²·s).
    pub rate: f64,
    pub center: Option<f64>,
    pub width: Option<f64>,
}

/// Everything prescribed on one boundary tag.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct BoundaryConfig {
    pub tag: String,
    pub traction: Option<[f64; 2]>,
    pub displacement: [Option<f64>; 2],
    pub plate: [bool; 2],
    /// `(fluid, pressure)` pairs.
    pub drained: Vec<(String, f64)>,
    pub flux: Vec<FluxConfig>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TimeConfig {
    pub t_end: f64,
    pub dt: f64,
    /// Length of the first step, when it differs from `dt`.
    pub dt0: Option<f64>,
    /// Explicit output times; when empty, `n_outputs` evenly spaced times.
    pub output_times: Vec<f64>,
    pub n_outputs: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Probe {
    pub name: String,
    pub point: [f64; 2],
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub name: String,
    pub verification: Verification,
    pub gravity: bool,
    pub geometry: Geometry,
    pub solid: SolidConfig,
    pub fluids: Vec<FluidConfig>,
    /// Initial pore pressure of the compressible fluids, Pa.
    pub initial_pressure: f64,
    pub boundaries: Vec<BoundaryConfig>,
    pub time: TimeConfig,
    pub probes: Vec<Probe>,
}

impl ScenarioConfig {
    pub fn fluid_index(&self, name: &str) -> Result<usize> {
        self.fluids
            .iter()
            .position(|f| f.name == name)
            .ok_or_else(|| Error::validation("fluid", format!("no fluid named `{name}`")))
    }

    pub fn validate(&self) -> Result<()> {
        let g = &self.geometry;
        if !(g.lx > 0.0 && g.ly > 0.0) || g.nx == 0 || g.ny == 0 {
            return Err(Error::validation("geometry", "lengths and element counts must be positive"));
        }
        let total: f64 = self.solid.phi0 + self.fluids.iter().map(|f| f.phi0).sum::<f64>();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::validation("phi0", format!("volume fractions sum to {total}, expected 1")));
        }
        if self.fluids.iter().any(|f| !(f.phi0 >= 0.0)) {
            return Err(Error::validation("phi0", "fluid fractions must be non-negative"));
        }
        for (k, f) in self.fluids.iter().enumerate() {
            if self.fluids[..k].iter().any(|o| o.name == f.name) {
                return Err(Error::validation("fluid", format!("duplicate fluid `{}`", f.name)));
            }
        }
        let t = &self.time;
        if !(t.t_end > 0.0 && t.dt > 0.0) || t.dt0.is_some_and(|d| !(d > 0.0)) {
            return Err(Error::validation("time", "t_end, dt and dt0 must be positive"));
        }
        if t.output_times.iter().any(|&o| !(o > 0.0 && o <= t.t_end)) {
            return Err(Error::validation("output_times", "must lie in (0, t_end]"));
        }
        if t.output_times.is_empty() && t.n_outputs == 0 {
            return Err(Error::validation("n_outputs", "must be positive"));
        }
        for b in &self.boundaries {
            if !matches!(b.tag.as_str(), "left" | "right" | "top" | "bottom") {
                return Err(Error::UnknownBoundaryTag(b.tag.clone()));
            }
            for (fluid, _) in &b.drained {
                self.fluid_index(fluid)?;
            }
            for f in &b.flux {
                self.fluid_index(&f.fluid)?;
            }
        }
        self.mixture()?.validate()?;
        for f in &self.fluids {
            f.permeability.validate()?;
        }
        Ok(())
    }

    pub fn mixture(&self) -> Result<MixtureModel<f64>> {
        let s = &self.solid;
        let solid = match s.kind {
            SolidKind::NeoHookean => SolidModel::NeoHookean(NeoHookeanParams { lambda: s.lambda, mu: s.mu }),
            SolidKind::SmallStrain => SolidModel::SmallStrain(SmallStrainParams { lambda: s.lambda, mu: s.mu }),
        };
        let volume_fractions = match s.fractions {
            FractionKind::IncompressibleSolid => VolumeFractionModel::IncompressibleSolid { phi0s: s.phi0 },
            FractionKind::AffineSolid => VolumeFractionModel::AffineSolid { phi0s: s.phi0 },
            FractionKind::Unsaturated => {
                let rho = self
                    .fluids
                    .iter()
                    .find_map(|f| match f.model {
                        FluidModel::IncompressibleLiquid(l) => Some(l.rho_tilde),
                        _ => None,
                    })
                    .ok_or_else(|| Error::validation("fractions", "unsaturated model needs an incompressible liquid"))?;
                VolumeFractionModel::UnsaturatedMixed { phi0s: s.phi0, rho_i_tilde: rho }
            }
        };
        Ok(MixtureModel { solid, volume_fractions, fluids: self.fluids.iter().map(|f| f.model).collect() })
    }

    /// Boundary conditions in discretization form. Flux segments default to
    /// the whole tag, or to two elements around `center` when only the
    /// center is given.
    pub fn boundary_conditions(&self) -> Result<Vec<BoundaryCondition>> {
        let mut out = Vec::new();
        for b in &self.boundaries {
            let tag = b.tag.clone();
            if let Some(t) = b.traction {
                out.push(BoundaryCondition::Traction { tag: tag.clone(), traction: t });
            }
            for c in 0..2 {
                if let Some(v) = b.displacement[c] {
                    out.push(BoundaryCondition::Displacement { tag: tag.clone(), component: c, value: v });
                }
                if b.plate[c] {
                    out.push(BoundaryCondition::RigidPlate { tag: tag.clone(), component: c });
                }
            }
            for (fluid, p) in &b.drained {
                out.push(BoundaryCondition::Drained { tag: tag.clone(), fluid: self.fluid_index(fluid)?, pressure: *p });
            }
            for f in &b.flux {
                let h = match tag.as_str() {
                    "top" | "bottom" => self.geometry.lx / self.geometry.nx as f64,
                    _ => self.geometry.ly / self.geometry.ny as f64,
                };
                let segment = f.center.map(|c| (c, f.width.unwrap_or(2.0 * h)));
                out.push(BoundaryCondition::MassFlux {
                    tag: tag.clone(),
                    fluid: self.fluid_index(&f.fluid)?,
                    rate: f.rate,
                    segment,
                });
            }
        }
        Ok(out)
    }
}

fn perr(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

struct Entry {
    line: usize,
    value: String,
}

/// Section name to ordered `key → value` entries.
struct Sections {
    order: Vec<(String, usize)>,
    map: BTreeMap<String, Vec<(String, Entry)>>,
}

fn lex(text: &str) -> Result<Sections> {
    let mut order = Vec::new();
    let mut map: BTreeMap<String, Vec<(String, Entry)>> = BTreeMap::new();
    let mut current: Option<String> = None;
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        if let Some(name) = body.strip_prefix('[') {
            let name = name
                .strip_suffix(']')
                .ok_or_else(|| perr(line, "unterminated section header"))?
                .trim()
                .to_string();
            if map.contains_key(&name) {
                return Err(perr(line, format!("duplicate section [{name}]")));
            }
            order.push((name.clone(), line));
            map.insert(name.clone(), Vec::new());
            current = Some(name);
            continue;
        }
        let Some((key, value)) = body.split_once('=') else {
            return Err(perr(line, "expected `key = value`"));
        };
        let Some(section) = &current else {
            return Err(perr(line, "key outside of any section"));
        };
        let key = key.trim().to_string();
        let entries = map.get_mut(section).expect("section registered");
        if entries.iter().any(|(k, _)| *k == key) {
            return Err(perr(line, format!("duplicate key `{key}`")));
        }
        entries.push((key, Entry { line, value: value.trim().to_string() }));
    }
    Ok(Sections { order, map })
}

/// Typed access to one section; every key must be consumed.
struct Reader<'a> {
    header: usize,
    entries: &'a [(String, Entry)],
    used: Vec<bool>,
}

impl<'a> Reader<'a> {
    fn new(header: usize, entries: &'a [(String, Entry)]) -> Self {
        Self { header, entries, used: vec![false; entries.len()] }
    }

    fn raw(&mut self, key: &str) -> Option<&'a Entry> {
        let i = self.entries.iter().position(|(k, _)| k == key)?;
        self.used[i] = true;
        Some(&self.entries[i].1)
    }

    fn string(&mut self, key: &str) -> Option<String> {
        self.raw(key).map(|e| e.value.clone())
    }

    fn f64(&mut self, key: &str) -> Result<Option<f64>> {
        self.raw(key)
            .map(|e| e.value.parse::<f64>().map_err(|_| perr(e.line, format!("`{key}` expects a number, got `{}`", e.value))))
            .transpose()
    }

    fn req_f64(&mut self, key: &str) -> Result<f64> {
        self.f64(key)?.ok_or_else(|| self.missing(key))
    }

    /// Blames a misspelling of `key` when there is one.
    fn missing(&self, key: &str) -> Error {
        let typo = self
            .entries
            .iter()
            .zip(&self.used)
            .find(|((k, _), used)| !**used && strsim::damerau_levenshtein(k, key) <= 2);
        match typo {
            Some(((k, e), _)) => perr(e.line, format!("unknown key `{k}` (did you mean `{key}`?)")),
            None => perr(self.header, format!("missing key `{key}`")),
        }
    }

    fn usize(&mut self, key: &str) -> Result<Option<usize>> {
        self.raw(key)
            .map(|e| e.value.parse::<usize>().map_err(|_| perr(e.line, format!("`{key}` expects a count, got `{}`", e.value))))
            .transpose()
    }

    fn bool(&mut self, key: &str) -> Result<Option<bool>> {
        self.raw(key)
            .map(|e| match e.value.as_str() {
                "true" => Ok(true),
                "false" => Ok(false),
                v => Err(perr(e.line, format!("`{key}` expects true or false, got `{v}`"))),
            })
            .transpose()
    }

    fn list(&mut self, key: &str) -> Result<Option<Vec<f64>>> {
        self.raw(key)
            .map(|e| {
                e.value
                    .split(',')
                    .map(|s| s.trim())
                    .filter(|s| !s.is_empty())
                    .map(|s| s.parse::<f64>().map_err(|_| perr(e.line, format!("`{key}`: bad number `{s}`"))))
                    .collect()
            })
            .transpose()
    }

    fn pair(&mut self, key: &str) -> Result<Option<[f64; 2]>> {
        let line = self.entries.iter().find(|(k, _)| k == key).map(|(_, e)| e.line);
        match self.list(key)? {
            None => Ok(None),
            Some(v) if v.len() == 2 => Ok(Some([v[0], v[1]])),
            Some(_) => Err(perr(line.unwrap_or(self.header), format!("`{key}` expects two numbers"))),
        }
    }

    /// Keys of the form `prefix.name`, in file order.
    fn prefixed(&mut self, prefix: &str) -> Vec<(String, &'a Entry)> {
        let mut out = Vec::new();
        for (i, (k, e)) in self.entries.iter().enumerate() {
            if let Some(name) = k.strip_prefix(prefix).and_then(|r| r.strip_prefix('.')) {
                self.used[i] = true;
                out.push((name.to_string(), e));
            }
        }
        out
    }

    fn finish(self) -> Result<()> {
        match self.used.iter().position(|u| !u) {
            Some(i) => {
                let (k, e) = &self.entries[i];
                Err(perr(e.line, format!("unknown key `{k}`")))
            }
            None => Ok(()),
        }
    }
}

fn parse_fluid(name: &str, mut r: Reader) -> Result<FluidConfig> {
    let header = r.header;
    let kind = r.string("model").ok_or_else(|| r.missing("model"))?;
    let model = match kind.as_str() {
        "ideal_gas" => FluidModel::IdealGas(IdealGasParams {
            r: r.req_f64("r")?,
            t: r.req_f64("temperature")?,
            xi: r.f64("xi")?.unwrap_or(1.0),
            molar_mass: r.req_f64("molar_mass")?,
        }),
        "van_der_waals" => FluidModel::VanDerWaals(VdWParams {
            a: r.req_f64("a")?,
            b: r.req_f64("b")?,
            c: r.req_f64("c")?,
            r: r.req_f64("r")?,
            t: r.req_f64("temperature")?,
            molar_mass: r.req_f64("molar_mass")?,
        }),
        "compressible_liquid" => FluidModel::CompressibleLiquid(CompressibleLiquidParams {
            bulk_modulus: r.req_f64("bulk_modulus")?,
            rho_ref: r.req_f64("rho_ref")?,
        }),
        "incompressible_liquid" => FluidModel::IncompressibleLiquid(IncompressibleLiquidParams { rho_tilde: r.req_f64("rho")? }),
        other => return Err(perr(header, format!("unknown fluid model `{other}`"))),
    };
    let g = r.f64("g")?.unwrap_or(STANDARD_GRAVITY);
    let permeability = match (r.f64("k_tilde")?, r.f64("kappa")?, r.f64("gamma")?) {
        (Some(k_tilde), None, None) => PermeabilityParams::Conductivity { k_tilde, g },
        (None, Some(kappa), Some(gamma)) => PermeabilityParams::Intrinsic { kappa, gamma, g },
        _ => return Err(perr(header, "give either `k_tilde` or both `kappa` and `gamma`")),
    };
    let phi0 = r.req_f64("phi0")?;
    r.finish()?;
    Ok(FluidConfig { name: name.to_string(), model, phi0, permeability })
}

fn parse_boundary(tag: &str, mut r: Reader) -> Result<BoundaryConfig> {
    let mut b = BoundaryConfig { tag: tag.to_string(), ..Default::default() };
    b.traction = r.pair("traction")?;
    b.displacement = [r.f64("ux")?, r.f64("uy")?];
    if let Some(e) = r.raw("plate") {
        match e.value.as_str() {
            "x" => b.plate[0] = true,
            "y" => b.plate[1] = true,
            v => return Err(perr(e.line, format!("`plate` expects x or y, got `{v}`"))),
        }
    }
    for (fluid, e) in r.prefixed("drained") {
        let p = e.value.parse().map_err(|_| perr(e.line, format!("drained pressure `{}` is not a number", e.value)))?;
        b.drained.push((fluid, p));
    }
    let center = r.f64("flux_center")?;
    let width = r.f64("flux_width")?;
    for (fluid, e) in r.prefixed("flux") {
        let rate = e.value.parse().map_err(|_| perr(e.line, format!("flux rate `{}` is not a number", e.value)))?;
        b.flux.push(FluxConfig { fluid, rate, center, width });
    }
    if b.flux.is_empty() && (center.is_some() || width.is_some()) {
        return Err(perr(r.header, "`flux_center`/`flux_width` given without a flux"));
    }
    r.finish()?;
    Ok(b)
}

/// Parses and validates a scenario file.
pub fn parse_config(text: &str) -> Result<ScenarioConfig> {
    let sections = lex(text)?;
    let get = |name: &str| -> Result<Reader> {
        let header = sections.order.iter().find(|(n, _)| n == name).map(|(_, l)| *l);
        match header {
            Some(h) => Ok(Reader::new(h, &sections.map[name])),
            None => Err(perr(0, format!("missing section [{name}]"))),
        }
    };
    for (name, line) in &sections.order {
        let known = matches!(name.as_str(), "scenario" | "geometry" | "solid" | "initial" | "time" | "output")
            || name.starts_with("fluid.")
            || name.starts_with("bc.");
        if !known {
            return Err(perr(*line, format!("unknown section [{name}]")));
        }
    }

    let mut s = get("scenario")?;
    let name = s.string("name").unwrap_or_else(|| "scenario".to_string());
    let verification = match s.raw("verification").map(|e| (e.line, e.value.as_str())) {
        None | Some((_, "none")) => Verification::None,
        Some((_, "terzaghi")) => Verification::Terzaghi,
        Some((_, "mandel")) => Verification::Mandel,
        Some((line, v)) => return Err(perr(line, format!("unknown verification `{v}`"))),
    };
    let gravity = s.bool("gravity")?.unwrap_or(false);
    s.finish()?;

    let mut g = get("geometry")?;
    let geometry = Geometry {
        lx: g.req_f64("lx")?,
        ly: g.req_f64("ly")?,
        nx: g.usize("nx")?.ok_or_else(|| g.missing("nx"))?,
        ny: g.usize("ny")?.ok_or_else(|| g.missing("ny"))?,
    };
    g.finish()?;

    let mut so = get("solid")?;
    let kind = match so.raw("model").map(|e| (e.line, e.value.as_str())) {
        None | Some((_, "neo_hookean")) => SolidKind::NeoHookean,
        Some((_, "small_strain")) => SolidKind::SmallStrain,
        Some((line, v)) => return Err(perr(line, format!("unknown solid model `{v}`"))),
    };
    let fractions = match so.raw("fractions").map(|e| (e.line, e.value.as_str())) {
        None | Some((_, "incompressible_solid")) => FractionKind::IncompressibleSolid,
        Some((_, "affine_solid")) => FractionKind::AffineSolid,
        Some((_, "unsaturated")) => FractionKind::Unsaturated,
        Some((line, v)) => return Err(perr(line, format!("unknown fraction model `{v}`"))),
    };
    let solid = SolidConfig { kind, lambda: so.req_f64("lambda")?, mu: so.req_f64("mu")?, phi0: so.req_f64("phi0")?, fractions };
    so.finish()?;

    let mut fluids = Vec::new();
    let mut boundaries = Vec::new();
    for (name, line) in &sections.order {
        let r = Reader::new(*line, &sections.map[name]);
        if let Some(f) = name.strip_prefix("fluid.") {
            fluids.push(parse_fluid(f, r)?);
        } else if let Some(tag) = name.strip_prefix("bc.") {
            boundaries.push(parse_boundary(tag, r)?);
        }
    }

    let initial_pressure = match sections.map.contains_key("initial") {
        true => {
            let mut i = get("initial")?;
            let p = i.f64("pressure")?.unwrap_or(0.0);
            i.finish()?;
            p
        }
        false => 0.0,
    };

    let mut t = get("time")?;
    let time = TimeConfig {
        t_end: t.req_f64("t_end")?,
        dt: t.req_f64("dt")?,
        dt0: t.f64("dt0")?,
        output_times: t.list("output_times")?.unwrap_or_default(),
        n_outputs: t.usize("n_outputs")?.unwrap_or(50),
    };
    t.finish()?;

    let mut probes = Vec::new();
    if sections.map.contains_key("output") {
        let mut o = get("output")?;
        for (name, e) in o.prefixed("probe") {
            let v: Vec<f64> = e
                .value
                .split(',')
                .map(|s| s.trim().parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| perr(e.line, "probe expects `x, y`"))?;
            if v.len() != 2 {
                return Err(perr(e.line, "probe expects `x, y`"));
            }
            probes.push(Probe { name, point: [v[0], v[1]] });
        }
        o.finish()?;
    }

    let config = ScenarioConfig {
        name,
        verification,
        gravity,
        geometry,
        solid,
        fluids,
        initial_pressure,
        boundaries,
        time,
        probes,
    };
    config.validate()?;
    Ok(config)
}

fn list(v: &[f64]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}

/// Canonical text form; `parse_config(&serialize_config(c)) == c`.
pub fn serialize_config(c: &ScenarioConfig) -> String {
    let mut s = String::new();
    let verification = match c.verification {
        Verification::None => "none",
        Verification::Terzaghi => "terzaghi",
        Verification::Mandel => "mandel",
    };
    let _ = writeln!(s, "[scenario]\nname = {}\nverification = {verification}\ngravity = {}\n", c.name, c.gravity);
    let g = &c.geometry;
    let _ = writeln!(s, "[geometry]\nlx = {}\nly = {}\nnx = {}\nny = {}\n", g.lx, g.ly, g.nx, g.ny);
    let so = &c.solid;
    let kind = match so.kind {
        SolidKind::NeoHookean => "neo_hookean",
        SolidKind::SmallStrain => "small_strain",
    };
    let fractions = match so.fractions {
        FractionKind::IncompressibleSolid => "incompressible_solid",
        FractionKind::AffineSolid => "affine_solid",
        FractionKind::Unsaturated => "unsaturated",
    };
    let _ = writeln!(
        s,
        "[solid]\nmodel = {kind}\nfractions = {fractions}\nlambda = {}\nmu = {}\nphi0 = {}\n",
        so.lambda, so.mu, so.phi0
    );
    for f in &c.fluids {
        let _ = writeln!(s, "[fluid.{}]", f.name);
        match f.model {
            FluidModel::IdealGas(p) => {
                let _ = writeln!(s, "model = ideal_gas\nr = {}\ntemperature = {}\nxi = {}\nmolar_mass = {}", p.r, p.t, p.xi, p.molar_mass);
            }
            FluidModel::VanDerWaals(p) => {
                let _ = writeln!(
                    s,
                    "model = van_der_waals\na = {}\nb = {}\nc = {}\nr = {}\ntemperature = {}\nmolar_mass = {}",
                    p.a, p.b, p.c, p.r, p.t, p.molar_mass
                );
            }
            FluidModel::CompressibleLiquid(p) => {
                let _ = writeln!(s, "model = compressible_liquid\nbulk_modulus = {}\nrho_ref = {}", p.bulk_modulus, p.rho_ref);
            }
            FluidModel::IncompressibleLiquid(p) => {
                let _ = writeln!(s, "model = incompressible_liquid\nrho = {}", p.rho_tilde);
            }
        }
        match f.permeability {
            PermeabilityParams::Conductivity { k_tilde, g } => {
                let _ = writeln!(s, "k_tilde = {k_tilde}\ng = {g}");
            }
            PermeabilityParams::Intrinsic { kappa, gamma, g } => {
                let _ = writeln!(s, "kappa = {kappa}\ngamma = {gamma}\ng = {g}");
            }
        }
        let _ = writeln!(s, "phi0 = {}\n", f.phi0);
    }
    let _ = writeln!(s, "[initial]\npressure = {}\n", c.initial_pressure);
    for b in &c.boundaries {
        let _ = writeln!(s, "[bc.{}]", b.tag);
        if let Some(t) = b.traction {
            let _ = writeln!(s, "traction = {}", list(&t));
        }
        for (k, name) in ["ux", "uy"].iter().enumerate() {
            if let Some(v) = b.displacement[k] {
                let _ = writeln!(s, "{name} = {v}");
            }
        }
        for (k, axis) in ["x", "y"].iter().enumerate() {
            if b.plate[k] {
                let _ = writeln!(s, "plate = {axis}");
            }
        }
        for (fluid, p) in &b.drained {
            let _ = writeln!(s, "drained.{fluid} = {p}");
        }
        if let Some(f) = b.flux.first() {
            if let Some(c) = f.center {
                let _ = writeln!(s, "flux_center = {c}");
            }
            if let Some(w) = f.width {
                let _ = writeln!(s, "flux_width = {w}");
            }
        }
        for f in &b.flux {
            let _ = writeln!(s, "flux.{} = {}", f.fluid, f.rate);
        }
        s.push('\n');
    }
    let t = &c.time;
    let _ = writeln!(s, "[time]\nt_end = {}\ndt = {}", t.t_end, t.dt);
    if let Some(d) = t.dt0 {
        let _ = writeln!(s, "dt0 = {d}");
    }
    if !t.output_times.is_empty() {
        let _ = writeln!(s, "output_times = {}", list(&t.output_times));
    }
    let _ = writeln!(s, "n_outputs = {}\n", t.n_outputs);
    if !c.probes.is_empty() {
        s.push_str("[output]\n");
        for p in &c.probes {
            let _ = writeln!(s, "probe.{} = {}", p.name, list(&p.point));
        }
    }
    s
}
