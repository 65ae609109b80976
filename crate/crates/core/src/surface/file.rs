//! TOML surface-definition files.
//!
//! ```toml
//! name = "sphere"
//! X = ["sin(u)", "cos(u)*sin(v)", "cos(u)*cos(v)"]
//! v = ["1", "sin(v)", "cos(v)"]
//! w = ["1", "-sin(v)", "-cos(v)"]
//!
//! [domain]
//! u = ["-pi/2", "pi/2"]
//! v = [0, "2*pi"]
//! ```
//!
//! Domain bounds may be numbers or constant expressions.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use super::{as_strs, Domain, SurfaceDef};
use crate::error::{Error, Result};
use crate::expr::parse;

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum Bound {
    Num(f64),
    Expr(String),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDomain {
    u: [Bound; 2],
    v: [Bound; 2],
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceFile {
    name: Option<String>,
    #[serde(rename = "X")]
    x: [String; 3],
    v: [String; 3],
    w: [String; 3],
    domain: RawDomain,
}

fn bound_value(b: &Bound) -> std::result::Result<f64, String> {
    match b {
        Bound::Num(x) => Ok(*x),
        Bound::Expr(s) => {
            let e = parse(s).map_err(|e| format!("bound \"{s}\": {e}"))?;
            e.eval_const().map_err(|_| format!("bound \"{s}\" is not a constant"))
        }
    }
}

impl SurfaceFile {
    pub fn from_str(text: &str, path: &Path) -> Result<SurfaceFile> {
        toml::from_str(text).map_err(|e| Error::SurfaceFile {
            path: path.to_path_buf(),
            message: e.to_string(),
        })
    }

    pub fn into_surface(self, path: &Path) -> Result<SurfaceDef> {
        let located = |message: String| Error::SurfaceFile {
            path: path.to_path_buf(),
            message,
        };
        let pair = |bs: &[Bound; 2]| -> Result<(f64, f64)> {
            Ok((
                bound_value(&bs[0]).map_err(located)?,
                bound_value(&bs[1]).map_err(located)?,
            ))
        };
        let domain = Domain::new(pair(&self.domain.u)?, pair(&self.domain.v)?)?;
        let name = self.name.unwrap_or_else(|| {
            path.file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "surface".into())
        });
        SurfaceDef::new(name, as_strs(&self.x), as_strs(&self.v), as_strs(&self.w), domain)
    }
}

impl SurfaceDef {
    /// Parses a surface file held in memory; `path` is used for messages only.
    pub fn from_toml(text: &str, path: impl Into<PathBuf>) -> Result<SurfaceDef> {
        let path = path.into();
        SurfaceFile::from_str(text, &path)?.into_surface(&path)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<SurfaceDef> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        SurfaceDef::from_toml(&text, path)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    const SPHERE: &str = include_str!("../../surfaces/sphere.surf");

    #[test]
    fn bundled_sphere_parses() {
        let s = SurfaceDef::from_toml(SPHERE, "sphere.surf").unwrap();
        assert_eq!(s.name(), "sphere");
        assert_eq!(s.domain().u, (-PI / 2.0, PI / 2.0));
        assert_eq!(s.domain().v, (0.0, 2.0 * PI));
    }

    #[test]
    fn numeric_bounds_and_default_name() {
        let text = r#"
X = ["u", "v", "0"]
v = ["1", "0", "1"]
w = ["1", "0", "-1"]
[domain]
u = [0, 1.5]
v = [-1, "2^2"]
"#;
        let s = SurfaceDef::from_toml(text, "dir/flat.surf").unwrap();
        assert_eq!(s.name(), "flat");
        assert_eq!(s.domain().v, (-1.0, 4.0));
    }

    #[test]
    fn rejects_malformed_files() {
        let missing_w = "X = [\"u\",\"v\",\"0\"]\nv = [\"1\",\"0\",\"1\"]\n[domain]\nu=[0,1]\nv=[0,1]\n";
        let e = SurfaceDef::from_toml(missing_w, "a.surf").unwrap_err();
        assert!(e.to_string().contains("a.surf"), "{e}");

        let bad_bound = r#"
X = ["u", "v", "0"]
v = ["1", "0", "1"]
w = ["1", "0", "-1"]
[domain]
u = [0, "u+1"]
v = [0, 1]
"#;
        let e = SurfaceDef::from_toml(bad_bound, "b.surf").unwrap_err();
        assert!(e.to_string().contains("not a constant"), "{e}");

        let two_components = r#"
X = ["u", "v"]
v = ["1", "0", "1"]
w = ["1", "0", "-1"]
[domain]
u = [0, 1]
v = [0, 1]
"#;
        assert!(SurfaceDef::from_toml(two_components, "c.surf").is_err());
    }
}
