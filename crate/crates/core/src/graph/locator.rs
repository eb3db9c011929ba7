use std::fmt;
use std::str::FromStr;

/// Special labels, kept as Greek letters so they never collide with EO
/// names (which start with an ASCII lowercase letter).
pub const RHO: &str = "ρ";
pub const PHI: &str = "φ";
pub const DELTA: &str = "Δ";
pub const SIGMA: &str = "σ";
pub const NU: &str = "ν";
/// Far edge of a DOT split.
pub const DOT_T: &str = "τ";

/// Label as written in trace text.
pub fn label_text(label: &str) -> &str {
    match label {
        RHO => "rho",
        PHI => "phi",
        DELTA => "Delta",
        SIGMA => "sigma",
        NU => "nu",
        DOT_T => "t",
        other => other,
    }
}

pub fn label_from_text(text: &str) -> String {
    match text {
        "rho" | "^" => RHO,
        "phi" | "@" => PHI,
        "Delta" => DELTA,
        "sigma" | "&" => SIGMA,
        "nu" | "<" => NU,
        other => other,
    }
    .to_string()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Root {
    Xi,
    Rho,
    Sigma,
    Phi,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Locator {
    pub root: Root,
    pub segments: Vec<String>,
}

impl Locator {
    pub fn new(root: Root, segments: Vec<String>) -> Self {
        Locator { root, segments }
    }

    pub fn phi(segments: &[&str]) -> Self {
        Locator::new(Root::Phi, segments.iter().map(|s| s.to_string()).collect())
    }

    pub fn push(mut self, seg: impl Into<String>) -> Self {
        self.segments.push(seg.into());
        self
    }

    /// The same object seen from a vertex one level down, whose ρ is the
    /// vertex this locator was relative to.
    pub fn from_child(&self) -> Locator {
        match self.root {
            Root::Phi => self.clone(),
            Root::Xi => Locator::new(Root::Rho, self.segments.clone()),
            Root::Rho => {
                let mut segs = vec![RHO.to_string()];
                segs.extend(self.segments.iter().cloned());
                Locator::new(Root::Rho, segs)
            }
            Root::Sigma => {
                let mut segs = vec![SIGMA.to_string()];
                segs.extend(self.segments.iter().cloned());
                Locator::new(Root::Rho, segs)
            }
        }
    }
}

impl fmt::Display for Locator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self.root {
            Root::Xi => "xi",
            Root::Rho => "rho",
            Root::Sigma => "sigma",
            Root::Phi => "Phi",
        })?;
        for s in &self.segments {
            write!(f, ".{}", label_text(s))?;
        }
        Ok(())
    }
}

impl FromStr for Locator {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let mut parts = s.trim().split('.');
        let root = match parts.next() {
            Some("xi") | Some("$") => Root::Xi,
            Some("rho") | Some("^") => Root::Rho,
            Some("sigma") | Some("&") => Root::Sigma,
            Some("Phi") | Some("Q") => Root::Phi,
            other => return Err(format!("bad locator root {other:?}")),
        };
        let segments = parts
            .map(|p| {
                if p.is_empty() {
                    Err(format!("empty segment in locator '{s}'"))
                } else {
                    Ok(label_from_text(p))
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Locator { root, segments })
    }
}
