use anyhow::Result;
use serde_json::json;

use flatrank::bounds::{f_image_dim, reference_bounds, ReferenceBound, ReferenceKind};
use flatrank::partitions::candidate_image_with_dropped;
use flatrank::pipeline::{compute_bound, BoundRequest};

use crate::{Format, RunConfig};

fn reference_json(refs: &[ReferenceBound]) -> serde_json::Value {
    refs.iter().map(|r| r.to_json()).collect()
}

fn print_references(refs: &[ReferenceBound]) {
    if refs.is_empty() {
        return;
    }
    println!("reference values:");
    for r in refs {
        let kind = match r.kind {
            ReferenceKind::Lower => ">=",
            ReferenceKind::Upper => "<=",
            ReferenceKind::Estimate => "~",
        };
        let value = match &r.exact {
            Some(v) if v.is_integer() => v.to_string(),
            Some(v) => format!("{v} ({:.3})", r.approx),
            None => format!("{:.1}", r.approx),
        };
        println!("  {:<22} {:<12} {kind} {value}", r.name, r.quantity);
    }
}

pub fn bound(req: &BoundRequest, config: &RunConfig) -> Result<()> {
    let out = compute_bound(req, &config.run)?;
    let c = &out.certificate;
    let poly_name = c.poly.split(':').next().unwrap_or_default();
    let refs = reference_bounds(c.n, poly_name);
    match config.format {
        Format::Json => {
            let v = json!({
                "certificate": c,
                "matrix": { "rows": out.rows, "cols": out.cols, "nnz": out.nnz },
                "references": reference_json(&refs),
            });
            println!("{}", serde_json::to_string_pretty(&v)?);
        }
        Format::Table => {
            println!("polynomial   {} (n = {})", c.poly, c.n);
            println!("flattening   {} d={} p={}", c.method, c.d, c.p);
            println!("matrix       {} x {}, {} nonzeros", out.rows, out.cols, out.nnz);
            match c.prime {
                Some(p) => println!("rank         {} (mod {p})", c.rank),
                None => println!("rank         {} (over Q)", c.rank),
            }
            println!("t            {}", c.t);
            println!("bound        {}", c.bound);
            println!("time         {} ms", c.elapsed_ms);
            print_references(&refs);
        }
    }
    if out.cache_hit {
        log::info!("matrix loaded from cache");
    }
    Ok(())
}

pub fn decompose(n: usize, d: usize, p: usize, config: &RunConfig) -> Result<()> {
    let (image, dropped) = candidate_image_with_dropped(n, d, p)?;
    let total = image.total_dimension(n);
    let f_total = (p == 2 && d + 2 <= n)
        .then(|| f_image_dim(n, d))
        .transpose()?;
    match config.format {
        Format::Json => {
            let v = json!({
                "n": n,
                "d": d,
                "p": p,
                "modules": image.to_json(n),
                "total_dim": total as u64,
                "dropped": dropped.iter().map(|e| json!({"a": e.a.parts(), "b": e.b.parts()})).collect::<Vec<_>>(),
                "f_formula_total": f_total.as_ref().map(|v| v.to_string()),
            });
            println!("{}", serde_json::to_string_pretty(&v)?);
        }
        Format::Table => {
            println!("image of the minor flattening, n={n} d={d} p={p}:");
            for e in image.entries() {
                let (da, db) = (e.a.schur_dim(n), e.b.schur_dim(n));
                let mult = if e.mult > 1 { format!("{} x ", e.mult) } else { String::new() };
                println!(
                    "  {mult}S{} A (x) S{} B    {da} x {db} = {}",
                    e.a,
                    e.b,
                    e.mult as u128 * da * db
                );
            }
            println!("modules      {}", image.len());
            println!("total        {total}");
            if let Some(v) = &f_total {
                println!("f(n,d) C(n,d)^2 = {v}");
            }
            if !dropped.is_empty() {
                println!(
                    "note: {} module(s) omitted because a partition has more than {n} rows",
                    dropped.len()
                );
                for e in &dropped {
                    println!("  S{} A (x) S{} B", e.a, e.b);
                }
            }
        }
    }
    Ok(())
}
