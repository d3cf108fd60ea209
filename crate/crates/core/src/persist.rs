//! Plain-text model files.
//!
//! ```text
//! gpc-surrogate model 1
//! config_hash <hex>
//! budget <N>
//! realized_cost <Σ|Λ_j|>
//! basis <dim> <max_mode> <s0> <t0>
//! domain <r> <s> <n_act> <weight power>
//! nodes <count> <grid resolution>
//! <χ_0>
//! …
//! outputs <J>
//! output <rank> <j_1 … j_d> <|Λ_j|>
//! <value> | <multi-index>
//! …
//! end
//! ```
//!
//! Floats use Rust's shortest round-trip formatting, so a save/load cycle
//! reproduces every bit.

use std::path::Path;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::multiindex::MultiIndex;
use crate::spaces::{CubeDomain, FourierBasisSpec, WeightSequence};
use crate::surrogate::{ModelMeta, SurrogateModel};
use crate::univariate::LejaSequence;

const MAGIC: &str = "gpc-surrogate model 1";

pub fn model_to_string(model: &SurrogateModel) -> String {
    let b = model.basis();
    let d = model.domain();
    let meta = model.meta();
    let mut out = String::new();
    out.push_str(MAGIC);
    out.push('\n');
    let hash = if meta.config_hash.is_empty() {
        "-"
    } else {
        &meta.config_hash
    };
    out.push_str(&format!("config_hash {hash}\n"));
    out.push_str(&format!("budget {}\n", meta.budget));
    out.push_str(&format!("realized_cost {}\n", model.realized_cost()));
    out.push_str(&format!(
        "basis {} {} {:e} {:e}\n",
        b.dim(),
        b.max_mode(),
        b.s0(),
        b.t0()
    ));
    out.push_str(&format!(
        "domain {:e} {:e} {} {:e}\n",
        d.r(),
        d.s(),
        d.n_act(),
        d.weights().power
    ));
    let nodes = model.nodes();
    out.push_str(&format!("nodes {} {}\n", nodes.len(), nodes.grid_resolution()));
    for x in nodes.points() {
        out.push_str(&format!("{x:e}\n"));
    }
    out.push_str(&format!("outputs {}\n", model.output_count()));
    for j in 0..model.output_count() {
        let mode: Vec<String> = b.mode(j).iter().map(|v| v.to_string()).collect();
        out.push_str(&format!("output {j} {} {}\n", mode.join(" "), model.set_size(j)));
        for (v, nu) in model.observations(j).iter().zip(model.grid_indices()) {
            out.push_str(&format!("{v:e} | {nu}\n"));
        }
    }
    out.push_str("end\n");
    out
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
    line: usize,
}

impl<'a> Lines<'a> {
    fn next(&mut self) -> Result<&'a str> {
        let (k, l) = self
            .inner
            .next()
            .ok_or_else(|| Error::parse(self.line + 1, "unexpected end of model file"))?;
        self.line = k + 1;
        Ok(l)
    }

    fn keyed(&mut self, key: &str) -> Result<Vec<&'a str>> {
        let l = self.next()?;
        let mut it = l.split_whitespace();
        if it.next() != Some(key) {
            return Err(Error::parse(self.line, format!("expected `{key}`")));
        }
        Ok(it.collect())
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::parse(self.line, msg)
    }
}

fn num<T: std::str::FromStr>(lines: &Lines<'_>, s: Option<&&str>) -> Result<T> {
    s.ok_or_else(|| lines.err("missing field"))?
        .parse()
        .map_err(|_| lines.err(format!("bad number `{}`", s.unwrap())))
}

pub fn model_from_str(text: &str) -> Result<SurrogateModel> {
    let mut lines = Lines {
        inner: text.lines().enumerate(),
        line: 0,
    };
    if lines.next()? != MAGIC {
        return Err(lines.err("not a surrogate model file"));
    }
    let h = lines.keyed("config_hash")?;
    let config_hash = match h.first() {
        Some(&"-") | None => String::new(),
        Some(s) => s.to_string(),
    };
    let f = lines.keyed("budget")?;
    let budget: usize = num(&lines, f.first())?;
    let f = lines.keyed("realized_cost")?;
    let realized_cost: usize = num(&lines, f.first())?;
    let f = lines.keyed("basis")?;
    let basis = FourierBasisSpec::new(
        num(&lines, f.first())?,
        num(&lines, f.get(1))?,
        num(&lines, f.get(2))?,
        num(&lines, f.get(3))?,
    )?;
    let f = lines.keyed("domain")?;
    let weights = WeightSequence {
        power: num(&lines, f.get(3))?,
    };
    let domain = CubeDomain::new(
        num(&lines, f.first())?,
        num(&lines, f.get(1))?,
        num(&lines, f.get(2))?,
        weights,
        &basis,
    )?;
    let f = lines.keyed("nodes")?;
    let count: usize = num(&lines, f.first())?;
    let resolution: usize = num(&lines, f.get(1))?;
    let mut pts = Vec::with_capacity(count);
    for _ in 0..count {
        let l = lines.next()?;
        pts.push(num(&lines, Some(&l.trim()))?);
    }
    let nodes = Arc::new(LejaSequence::from_points(pts, resolution)?);
    let f = lines.keyed("outputs")?;
    let n_out: usize = num(&lines, f.first())?;
    let mut enumeration: Vec<MultiIndex> = Vec::new();
    let mut observations = Vec::with_capacity(n_out);
    for j in 0..n_out {
        let f = lines.keyed("output")?;
        if f.len() != basis.dim() + 2 {
            return Err(lines.err("output line needs rank, mode and set size"));
        }
        let rank: usize = num(&lines, f.first())?;
        let mode: Vec<usize> = (0..basis.dim())
            .map(|k| num(&lines, f.get(k + 1)))
            .collect::<Result<_>>()?;
        if rank != j || basis.rank_of(&mode) != Some(j) {
            return Err(lines.err(format!("output {j} has unexpected rank or mode")));
        }
        let size: usize = num(&lines, f.last())?;
        let mut obs = Vec::with_capacity(size);
        for i in 0..size {
            let l = lines.next()?;
            let (v, idx) = l.split_once('|').ok_or_else(|| lines.err("expected `value | index`"))?;
            let v: f64 = num(&lines, Some(&v.trim()))?;
            let nu: MultiIndex = idx.trim().parse().map_err(|e: Error| lines.err(e.to_string()))?;
            if j == 0 {
                enumeration.push(nu);
            } else if enumeration.get(i) != Some(&nu) {
                return Err(lines.err(format!("index set of output {j} is not a prefix of the first")));
            }
            obs.push(v);
        }
        observations.push(obs);
    }
    if lines.next()? != "end" {
        return Err(lines.err("expected `end`"));
    }
    let meta = ModelMeta {
        budget,
        realized_cost,
        config_hash,
    };
    let mut model = SurrogateModel::assemble(basis, domain, nodes, enumeration, observations, meta.clone())?;
    if model.realized_cost() != realized_cost {
        return Err(Error::parse(0, "realized cost does not match the stored observations"));
    }
    model.set_meta(meta);
    Ok(model)
}

pub fn save_model(model: &SurrogateModel, path: &Path) -> Result<()> {
    std::fs::write(path, model_to_string(model))?;
    Ok(())
}

pub fn load_model(path: &Path) -> Result<SurrogateModel> {
    model_from_str(&std::fs::read_to_string(path)?)
}
