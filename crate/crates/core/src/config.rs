//! JSON construction configs, tagged by "kind".

use crate::euclid::io::read_points_csv;
use crate::euclid::{EuclidError, FullCube, Point, PointCloudSet, WindowGenerator};
use crate::pisigma::{PiConfig, PiError, PiSchedule, PiSigma};
use crate::rational::{serde_rational, Rational};
use crate::zoo::{
    zero_tangent_construction, whitney_decomposition, whitney_glue, C0Generator, C0Params, CantorGenerator, CantorParams,
    GlobalMode, GlobalParams, GlobalRich, IfsSystem, ZooError, DEFAULT_ZOO_BUDGET,
};
use serde::{Deserialize, Serialize};
use std::rc::Rc;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("bad config: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Load(String),
    #[error(transparent)]
    Zoo(#[from] ZooError),
    #[error(transparent)]
    Pi(#[from] PiError),
    #[error(transparent)]
    Euclid(#[from] EuclidError),
}

/// Rational written as "p/q", an integer or a decimal.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Q(#[serde(with = "serde_rational")] pub Rational);

fn unwrap_points(ps: &[Vec<Q>]) -> Vec<Point> {
    ps.iter().map(|p| p.iter().map(|q| q.0.clone()).collect()).collect()
}

fn one() -> usize {
    1
}

fn two() -> u32 {
    2
}

fn two_points() -> usize {
    2
}

/// Sequences a_n, λ_n and patterns γ_n; omitted parts take the construction's defaults,
/// with patterns cycling through the K₀⁺ enumerator.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelConfig {
    #[serde(default = "one")]
    pub dim: usize,
    pub levels: usize,
    #[serde(default = "two")]
    pub gamma_denominator: u32,
    #[serde(default = "two_points")]
    pub max_points: usize,
    #[serde(default)]
    pub gammas: Option<Vec<Vec<Vec<Q>>>>,
    #[serde(default)]
    pub a: Option<Vec<Q>>,
    #[serde(default)]
    pub lam: Option<Vec<Q>>,
}

impl LevelConfig {
    fn gammas(&self) -> Vec<Vec<Point>> {
        match &self.gammas {
            Some(g) => g.iter().map(|p| unwrap_points(p)).collect(),
            None => C0Params::default_gammas(self.dim, self.levels, self.gamma_denominator, self.max_points),
        }
    }

    fn override_seqs(&self, a: &mut Vec<Rational>, lam: &mut Vec<Rational>) {
        if let Some(v) = &self.a {
            *a = v.iter().map(|q| q.0.clone()).collect();
        }
        if let Some(v) = &self.lam {
            *lam = v.iter().map(|q| q.0.clone()).collect();
        }
    }

    pub fn c0_params(&self) -> C0Params {
        let mut p = C0Params::defaults(self.dim, self.gammas());
        self.override_seqs(&mut p.a, &mut p.lam);
        p
    }

    pub fn global_params(&self) -> GlobalParams {
        let mut p = GlobalParams::defaults(self.dim, self.gammas());
        self.override_seqs(&mut p.a, &mut p.lam);
        p
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IfsConfig {
    #[serde(flatten)]
    pub levels: LevelConfig,
    pub depth: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Construction {
    /// Inline points or a CSV path.
    Points {
        #[serde(default = "one")]
        dim: usize,
        #[serde(default)]
        points: Option<Vec<Vec<Q>>>,
        #[serde(default)]
        path: Option<String>,
        #[serde(default)]
        resolution: Option<Q>,
    },
    FullCube {
        #[serde(default = "one")]
        dim: usize,
        max_level: u32,
    },
    Cantor {
        #[serde(default = "one")]
        dim: usize,
        depth: usize,
        m: Vec<u32>,
        lam: Vec<Q>,
    },
    Ternary {
        #[serde(default = "one")]
        dim: usize,
        depth: usize,
    },
    /// m_j = j+1, λ_j = (j+1)^{−1/s}
    PowerCantor {
        #[serde(default = "one")]
        dim: usize,
        depth: usize,
        s: f64,
    },
    C0(LevelConfig),
    Cinf(IfsConfig),
    Kinf(IfsConfig),
    Global {
        #[serde(flatten)]
        levels: LevelConfig,
        #[serde(default)]
        composite: bool,
    },
    Pisigma(PiConfig),
    ZeroTangent {
        #[serde(default = "one")]
        dim: usize,
        s: f64,
        depth: usize,
    },
    Whitney {
        f: Box<Construction>,
        k: Box<Construction>,
        max_level: u32,
    },
}

impl Construction {
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Construction::Points { .. } => "points",
            Construction::FullCube { .. } => "full_cube",
            Construction::Cantor { .. } => "cantor",
            Construction::Ternary { .. } => "ternary",
            Construction::PowerCantor { .. } => "power_cantor",
            Construction::C0(_) => "c0",
            Construction::Cinf(_) => "cinf",
            Construction::Kinf(_) => "kinf",
            Construction::Global { .. } => "global",
            Construction::Pisigma(_) => "pisigma",
            Construction::ZeroTangent { .. } => "zero_tangent",
            Construction::Whitney { .. } => "whitney",
        }
    }

    pub fn cantor_params(&self) -> Result<Option<CantorParams>, ConfigError> {
        Ok(match self {
            Construction::Cantor { m, lam, .. } => Some(CantorParams::new(m.clone(), lam.iter().map(|q| q.0.clone()).collect())?),
            Construction::Ternary { depth, .. } => Some(CantorParams::ternary(*depth)),
            Construction::PowerCantor { depth, s, .. } => Some(CantorParams::power_family(*s, *depth)?),
            _ => None,
        })
    }

    /// The set as a finite point cloud; only for constructions inside Q.
    pub fn cloud(&self, load: &dyn Fn(&str) -> Result<String, String>, budget: usize) -> Result<PointCloudSet, ConfigError> {
        let g = self.build(load, budget)?;
        let s = g.sample(&crate::euclid::Cube::unit(g.dim()), &Rational::from_integer(0.into()))?;
        Ok(PointCloudSet::new(g.dim(), s.points, s.resolution)?)
    }

    pub fn build(&self, load: &dyn Fn(&str) -> Result<String, String>, budget: usize) -> Result<Rc<dyn WindowGenerator>, ConfigError> {
        let budget = if budget == 0 { DEFAULT_ZOO_BUDGET } else { budget };
        Ok(match self {
            Construction::Points { dim, points, path, resolution } => {
                let res = resolution.as_ref().map(|q| q.0.clone());
                let set = match (points, path) {
                    (Some(p), None) => PointCloudSet::new(*dim, unwrap_points(p), res.unwrap_or_else(|| Rational::from_integer(0.into())))?,
                    (None, Some(path)) => {
                        let s = read_points_csv(&load(path).map_err(ConfigError::Load)?)?;
                        match res {
                            Some(r) => s.with_resolution(r),
                            None => s,
                        }
                    }
                    _ => return Err(ConfigError::Load("points need exactly one of \"points\" and \"path\"".into())),
                };
                Rc::new(set)
            }
            Construction::FullCube { dim, max_level } => Rc::new(FullCube::new(*dim, *max_level)),
            Construction::Cantor { dim, depth, .. } | Construction::Ternary { dim, depth } | Construction::PowerCantor { dim, depth, .. } => {
                let p = self.cantor_params()?.expect("Cantor kinds carry parameters");
                Rc::new(CantorGenerator::new(p, *dim, *depth)?.with_budget(budget))
            }
            Construction::C0(l) => Rc::new(C0Generator::new(l.c0_params())?),
            Construction::Cinf(c) => Rc::new(IfsSystem::cinf(&c.levels.c0_params(), c.depth)?.with_budget(budget)),
            Construction::Kinf(c) => Rc::new(IfsSystem::kinf(&c.levels.c0_params(), c.depth)?.with_budget(budget)),
            Construction::Global { levels, composite } => {
                let mode = if *composite { GlobalMode::default_composite(levels.dim)? } else { GlobalMode::Points };
                Rc::new(GlobalRich::new(levels.global_params(), mode)?)
            }
            Construction::Pisigma(c) => Rc::new(PiSigma::new(PiSchedule::from_config(c)?, c.depth)?.with_budget(budget)),
            Construction::ZeroTangent { dim, s, depth } => Rc::new(zero_tangent_construction(*s, *dim, *depth)?),
            Construction::Whitney { f, k, max_level } => {
                let fset = f.cloud(load, budget)?;
                let cubes = whitney_decomposition(&fset, *max_level, budget)?;
                Rc::new(whitney_glue(&fset, k.build(load, budget)?, &cubes)?)
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn no_files(p: &str) -> Result<String, String> {
        Err(format!("no file {p}"))
    }

    #[test]
    fn parses_every_kind() {
        let texts = [
            r#"{"kind":"points","points":[["0"],["1/2"]]}"#,
            r#"{"kind":"full_cube","dim":2,"max_level":3}"#,
            r#"{"kind":"cantor","depth":2,"m":[2,2],"lam":["1/3","1/3"]}"#,
            r#"{"kind":"ternary","depth":5}"#,
            r#"{"kind":"power_cantor","depth":4,"s":0.5}"#,
            r#"{"kind":"c0","levels":4}"#,
            r#"{"kind":"cinf","levels":3,"depth":2}"#,
            r#"{"kind":"kinf","levels":3,"depth":2}"#,
            r#"{"kind":"global","levels":3}"#,
            r#"{"kind":"pisigma","dim":1,"gamma_denominator":2,"max_points":3,"depth":3}"#,
            r#"{"kind":"zero_tangent","s":0.5,"depth":4}"#,
            r#"{"kind":"whitney","f":{"kind":"points","points":[["0"]]},"k":{"kind":"ternary","depth":3},"max_level":4}"#,
        ];
        for t in texts {
            let c = Construction::from_json(t).unwrap();
            let g = c.build(&no_files, 0).unwrap();
            assert_eq!(g.dim(), if c.kind() == "full_cube" { 2 } else { 1 }, "{t}");
        }
    }

    #[test]
    fn explicit_sequences_override_defaults() {
        let c = Construction::from_json(r#"{"kind":"c0","levels":1,"gammas":[[["0"]]],"a":["1/2","1/16"],"lam":["1/2","1/8"]}"#).unwrap();
        match c {
            Construction::C0(l) => {
                let p = l.c0_params();
                assert_eq!(p.lam[1], rat(1, 8));
                p.check().unwrap();
            }
            _ => unreachable!(),
        }
    }

    #[test]
    fn bad_kind_is_an_error() {
        assert!(Construction::from_json(r#"{"kind":"nope"}"#).is_err());
    }
}
