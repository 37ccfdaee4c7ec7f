//! Lower bounds on `ω(F_≤k)` from constructions and search, upper bounds on
//! `χ(F_≤k)` from line colorings.

use std::time::Duration;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::clique::{search_growing, verify_clique, WindowPolicy};
use crate::dual::{construct_r, construct_s, construct_t, incident_vertices, ConstructionTag, DualSubgraph};
use crate::error::{Error, Result};
use crate::projline::{min_line_count_above, next_prime};
use crate::vertex::FareyVertex;

/// A clique of `F_≤k` read off a dual-tree construction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub k: u64,
    pub tag: ConstructionTag,
    pub witness: Vec<FareyVertex>,
}

impl Certificate {
    pub fn size(&self) -> usize {
        self.witness.len()
    }
}

fn certificate(k: u64, sub: DualSubgraph) -> Result<Certificate> {
    let inc = incident_vertices(&sub).centered()?;
    if inc.i_k > k {
        return Err(Error::invalid(format!("construction has I = {} > {k}", inc.i_k)));
    }
    verify_clique(k, &inc.v_k)?;
    Ok(Certificate { k, tag: sub.tag().unwrap_or(ConstructionTag::Custom), witness: inc.v_k })
}

/// Every construction certificate that applies to `k`.
pub fn construction_certificates(k: u64) -> Result<Vec<Certificate>> {
    if k == 0 {
        return Err(Error::invalid("k must be at least 1"));
    }
    let mut out = vec![certificate(k, construct_r(k + 1)?)?];
    if k % 2 == 1 && k >= 3 {
        out.push(certificate(k, construct_s(k.div_ceil(2))?)?);
    }
    if k % 12 == 8 {
        out.push(certificate(k, construct_t((k + 4) / 12)?)?);
    }
    Ok(out)
}

/// The largest construction certificate for `k`.
pub fn lower_bound_from_construction(k: u64) -> Result<Certificate> {
    let certs = construction_certificates(k)?;
    Ok(certs.into_iter().max_by_key(Certificate::size).expect("R always applies"))
}

/// Where a bound came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    Construction,
    Search,
}

/// One row of the bounds table. Flat so that it writes as CSV.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundsRow {
    pub k: u64,
    pub lower: usize,
    pub lower_source: Provenance,
    /// The construction behind the best certificate.
    pub construction: String,
    pub construction_size: usize,
    pub search_size: usize,
    /// Largest window searched, e.g. `denom<=32`.
    pub search_window: String,
    pub search_optimal_within_window: bool,
    /// `min |L_r|` over `r > k`.
    pub upper: u64,
    pub upper_modulus: u64,
    /// `1 + p(k)`, `p(k)` the least prime above `k`.
    pub agol_bound: u64,
    pub gap_closed: bool,
}

#[derive(Clone, Copy, Debug)]
pub struct TableOptions {
    pub max_window: u64,
    pub budget_per_k: Duration,
}

pub fn bounds_row(k: u64, opts: TableOptions) -> Result<BoundsRow> {
    let cert = lower_bound_from_construction(k)?;
    let p = next_prime(k);
    let (upper_modulus, upper) = min_line_count_above(k, p)?;
    let (best, tried) = search_growing(
        k,
        WindowPolicy::doubling_for(k, opts.max_window),
        opts.budget_per_k,
        &cert.witness,
        Some(upper as usize),
    )?;
    let last = tried.last().expect("at least one window");
    let (lower, lower_source) = if best.size > cert.size() {
        (best.size, Provenance::Search)
    } else {
        (cert.size(), Provenance::Construction)
    };
    Ok(BoundsRow {
        k,
        lower,
        lower_source,
        construction: cert.tag.to_string(),
        construction_size: cert.size(),
        search_size: best.size,
        search_window: last.window.to_string(),
        search_optimal_within_window: last.optimal_within_window,
        upper,
        upper_modulus,
        agol_bound: 1 + p,
        gap_closed: lower as u64 == upper,
    })
}

/// Rows for every `k` in `ks`, computed in parallel and returned in order.
pub fn bounds_table(ks: impl IntoIterator<Item = u64>, opts: TableOptions) -> Result<Vec<BoundsRow>> {
    let ks: Vec<u64> = ks.into_iter().collect();
    ks.par_iter().map(|&k| bounds_row(k, opts)).collect()
}

pub fn rows_to_csv(rows: &[BoundsRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| Error::invalid(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::invalid(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::invalid(e.to_string()))
}
