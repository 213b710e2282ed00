//! Homology jobs on standard spaces and JSON presentations.

use crate::{Format, Method};
use cobar_core::barcobar::{adams_cobar, DgCoalgebra};
use cobar_core::chain::{AbGroup, ChainComplex};
use cobar_core::doldkan::chains_of;
use cobar_core::loopgroup::{chains, kan_loop_group};
use cobar_core::sset::{standard, SSetPresentation};
use cobar_core::{Error, Result};
use serde_json::{json, Value};
use std::path::Path;

/// Upper bound on `--dim` and `--deg`.
pub const MAX_DEGREE: usize = 8;

pub fn default_size(suite: &str) -> usize {
    match suite {
        "ez-aw" | "shih" => 4,
        "dold-kan" | "stasheff" => 50,
        "szczarba-cancel" | "shih-szczarba" => 2,
        "duskin" => 4,
        _ => 3,
    }
}

/// A homology table `H_0..H_n`.
#[derive(Clone, Debug)]
pub struct Table {
    pub title: String,
    pub groups: Vec<AbGroup>,
    /// Set when chains were computed on words of bounded length.
    pub word_bound: Option<usize>,
}

impl Table {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Table => {
                let mut s = format!("{}\n", self.title);
                if let Some(l) = self.word_bound {
                    s += &format!("(words of length <= {l})\n");
                }
                for (n, g) in self.groups.iter().enumerate() {
                    s += &format!("H_{n}\t{g}\n");
                }
                s
            }
            Format::Json => {
                let hs: Vec<Value> = self.groups.iter().map(|g| json!(g.to_string())).collect();
                format!("{:#}\n", json!({"space": self.title, "homology": hs, "word_bound": self.word_bound}))
            }
        }
    }
}

fn check_bound(n: usize, what: &str) -> Result<()> {
    if n > MAX_DEGREE {
        return Err(Error::Invalid(format!("{what} {n} exceeds the maximum {MAX_DEGREE}")));
    }
    Ok(())
}

/// Loads a JSON presentation when `space` names an existing file, otherwise a standard space
/// truncated at `dim`.
pub fn load_space(space: &str, dim: usize) -> Result<SSetPresentation> {
    let path = Path::new(space);
    if path.is_file() || space.ends_with(".json") {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Invalid(format!("{space}: {e}")))?;
        let v: Value = serde_json::from_str(&text).map_err(|e| Error::Invalid(format!("{space}: {e}")))?;
        SSetPresentation::from_json(&v)
    } else {
        standard(space, dim)
    }
}

fn require_dim(x: &SSetPresentation, need: usize) -> Result<()> {
    if x.dim() < need {
        return Err(Error::Truncation { need, have: x.dim() });
    }
    Ok(())
}

pub fn homology(space: &str, dim: usize) -> Result<Table> {
    check_bound(dim, "--dim")?;
    let x = load_space(space, dim + 1)?;
    require_dim(&x, dim + 1)?;
    let c = chains_of(&x);
    let groups = (0..=dim).map(|n| c.homology(n as i64)).collect::<Result<_>>()?;
    Ok(Table { title: space.to_string(), groups, word_bound: None })
}

fn groups_of(c: &ChainComplex, deg: usize) -> Result<Vec<AbGroup>> {
    (0..=deg).map(|n| c.homology(n as i64)).collect()
}

pub fn loop_homology(space: &str, method: Method, deg: usize, fuel: usize) -> Result<Table> {
    check_bound(deg, "--deg")?;
    let x = load_space(space, deg + 2)?;
    if !x.is_reduced() {
        return Err(Error::Invalid(format!("{space} has more than one vertex")));
    }
    require_dim(&x, deg + 2)?;
    let (groups, word_bound) = match method {
        Method::Adams => {
            let c = DgCoalgebra::of_sset(&x, deg + 2);
            let maxlen = (c.rank(1) > 0).then_some(fuel);
            (groups_of(&adams_cobar(&c, deg + 1, maxlen)?.complex, deg)?, maxlen)
        }
        Method::Kan => {
            let g = kan_loop_group(&x, deg + 1)?;
            (groups_of(&chains(&g, deg + 1, fuel)?, deg)?, Some(fuel))
        }
    };
    let m = match method {
        Method::Adams => "adams",
        Method::Kan => "kan",
    };
    Ok(Table { title: format!("loop {space} ({m})"), groups, word_bound })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn strings(t: &Table) -> Vec<String> {
        t.groups.iter().map(|g| g.to_string()).collect()
    }

    #[test]
    fn small_tables() {
        assert_eq!(strings(&homology("S2", 3).unwrap()), ["Z", "0", "Z", "0"]);
        assert_eq!(strings(&homology("point", 2).unwrap()), ["Z", "0", "0"]);
        assert_eq!(strings(&homology("S1", 2).unwrap()), ["Z", "Z", "0"]);
        assert!(matches!(homology("S2", 99), Err(Error::Invalid(_))));
        assert!(matches!(homology("torus", 2), Err(Error::Invalid(_))));
    }

    #[test]
    fn loop_tables() {
        assert_eq!(strings(&loop_homology("S2", Method::Adams, 4, 3).unwrap()), ["Z"; 5]);
        assert_eq!(strings(&loop_homology("S2", Method::Kan, 2, 3).unwrap()), ["Z"; 3]);
        assert_eq!(strings(&loop_homology("point", Method::Kan, 2, 3).unwrap()), ["Z", "0", "0"]);
        assert_eq!(strings(&loop_homology("point", Method::Adams, 2, 3).unwrap()), ["Z", "0", "0"]);
        assert!(matches!(loop_homology("delta1", Method::Kan, 1, 3), Err(Error::Invalid(_))));
    }

    #[test]
    fn json_render() {
        let t = homology("S1", 1).unwrap();
        let v: Value = serde_json::from_str(&t.render(Format::Json)).unwrap();
        assert_eq!(v["homology"], json!(["Z", "Z"]));
    }
}
