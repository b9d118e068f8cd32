use std::fmt::Write;
use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde_json::{json, Value};
use spancalc_core::fock::{annihilation_span, build_e, colored_sets, format_power_series, normal_ordered_power, verify_ccr};
use spancalc_core::hall::{HallAlgebra, Quiver};
use spancalc_core::hecke::{enumerate_flags, hecke_structure_constants, verify_hecke_relations, BruhatCell};
use spancalc_core::rational::to_pq;
use spancalc_core::span::{adjoint, degroupoidify_vector};
use spancalc_core::Alpha;

use crate::engine::matrix_report;
use crate::{status_line, Report};

pub fn fock(n: usize, check_ccr: bool, colors: Option<usize>, power: Option<usize>, alpha: &str) -> Result<Report> {
    let alpha = Alpha::parse(alpha)?;
    let e = build_e(n)?;
    let mut text = String::new();
    let mut json = json!({ "truncation": n, "alpha": alpha.to_string() });
    let mut passed = true;

    if check_ccr {
        let report = verify_ccr(&e)?;
        passed = report.holds_below_truncation();
        let block = if n == 0 { "the empty block".to_string() } else { format!("{{0..{}}}^2", n - 1) };
        writeln!(text, "{}", status_line(passed, &format!("AA* - A*A = 1 on {block}"))).unwrap();
        for (i, j, v) in &report.discrepancies {
            writeln!(text, "  truncation edge: entry ({i}, {j}) of AA* - A*A is {}", to_pq(v)).unwrap();
        }
        json["ccr"] = json!({
            "passed": passed,
            "commutator": report.commutator.to_pq_rows(),
            "discrepancies": report.discrepancies.iter().map(|(i, j, v)| json!([i, j, to_pq(v)])).collect::<Vec<_>>(),
        });
    }
    if let Some(k) = colors {
        let psi = colored_sets(k, &e)?;
        let v = degroupoidify_vector(&psi, &Alpha::integer(0))?;
        let series = format_power_series(&v);
        writeln!(text, "{k}-colored sets: {series}").unwrap();
        json["colored_sets"] = json!({ "colors": k, "series": series, "coefficients": v.iter().map(to_pq).collect::<Vec<_>>() });
    }
    if let Some(p) = power {
        let (t, m, _) = matrix_report(&normal_ordered_power(p, &e)?, &alpha, None)?;
        write!(text, ":Phi^{p}:\n{t}").unwrap();
        json["normal_ordered_power"] = json!({ "n": p, "matrix": m });
    }
    if !check_ccr && colors.is_none() && power.is_none() {
        let a = annihilation_span(&e)?;
        let (ta, ma, _) = matrix_report(&a, &alpha, None)?;
        let (tc, mc, _) = matrix_report(&adjoint(&a), &alpha, None)?;
        write!(text, "A\n{ta}A*\n{tc}").unwrap();
        json["annihilation"] = ma;
        json["creation"] = mc;
    }
    Ok(Report { text, json, passed })
}

pub fn hecke(q: u64, verify: bool, constants: Option<&Path>, alpha: &str) -> Result<Report> {
    let alpha = Alpha::parse(alpha)?;
    let geom = enumerate_flags(q)?;
    let mut text = String::new();
    let mut json = json!({ "q": q, "points": geom.points.len(), "lines": geom.lines.len(), "flags": geom.num_flags() });
    let mut passed = true;
    if verify {
        let report = verify_hecke_relations(q)?;
        for c in &report.checks {
            let name = if c.name.starts_with("PLP") { format!("{} (Yang-Baxter)", c.name) } else { c.name.clone() };
            writeln!(text, "{}", status_line(c.passed, &name)).unwrap();
        }
        passed = report.all_passed();
        json["relations"] = serde_json::to_value(&report.checks)?;
    }
    if let Some(path) = constants {
        let s = hecke_structure_constants(q, &alpha)?;
        let out = s.to_json();
        fs::write(path, serde_json::to_string_pretty(&out)?).with_context(|| format!("writing {}", path.display()))?;
        writeln!(text, "structure constants at alpha = {alpha} written to {}", path.display()).unwrap();
        writeln!(text, "basis: {}", out.basis).unwrap();
        for p in out.products.iter().filter(|p| p.left != "e" && p.right != "e") {
            let terms: Vec<String> = p.terms.iter().map(|(l, c)| format!("{c} {l}")).collect();
            writeln!(text, "  {}*{} = {}", p.left, p.right, terms.join(" + ")).unwrap();
        }
        let checks = s.relation_checks();
        if verify {
            for c in &checks {
                writeln!(text, "{}", status_line(c.passed, &format!("{} (multiplication span)", c.name))).unwrap();
            }
            passed &= checks.iter().all(|c| c.passed);
        }
        json["structure"] = serde_json::to_value(&out)?;
        json["structure_relations"] = serde_json::to_value(&checks)?;
    }
    if !verify && constants.is_none() {
        writeln!(text, "q = {q}: {} points, {} lines, {} flags", geom.points.len(), geom.lines.len(), geom.num_flags()).unwrap();
        let labels: Vec<&str> = BruhatCell::ALL.iter().map(|c| c.label()).collect();
        writeln!(text, "orbit labels: {}", labels.join(", ")).unwrap();
    }
    Ok(Report { text, json, passed })
}

pub fn hall(quiver: &str, q: u64, dmax: &[usize], table: Option<&Path>, verify: bool) -> Result<Report> {
    let quiver = Quiver::parse(quiver)?;
    if dmax.len() != quiver.vertices {
        bail!("--dmax needs {} entries for {}, got {}", quiver.vertices, quiver.name, dmax.len());
    }
    let alg = HallAlgebra::new(&quiver, q, dmax)?;
    let t = &alg.table;
    let out = alg.to_json();
    let mut text = format!("{} over F_{q}, alpha = 1; {}\n", quiver.name, out.convention);
    writeln!(text, "classes:").unwrap();
    for c in &t.classes {
        writeln!(text, "  {}  |Aut| = {}  class size = {}", c.label, c.aut_order, c.class_size).unwrap();
    }
    writeln!(text, "products:").unwrap();
    for (&(m, n), p) in &alg.products {
        if m != t.zero() && n != t.zero() {
            writeln!(text, "  {} * {} = {}", t.classes[m].label, t.classes[n].label, p.display(t)).unwrap();
        }
    }
    let mut json: Value = serde_json::to_value(&out)?;
    let mut passed = true;
    if verify {
        let assoc = alg.check_associativity();
        let span = alg.check_against_span()?;
        let nonneg = alg.all_nonnegative();
        writeln!(text, "{}", status_line(assoc.passed(), &format!("associativity ({} triples)", assoc.triples_checked))).unwrap();
        writeln!(text, "{}", status_line(span.is_empty(), &format!("span route = counting formula ({} pairs)", alg.products.len()))).unwrap();
        writeln!(text, "{}", status_line(nonneg, "nonnegative coefficients")).unwrap();
        passed = assoc.passed() && span.is_empty() && nonneg;
        json["verify"] = json!({ "associativity": assoc, "span_mismatches": span.len(), "nonnegative": nonneg });
    }
    if let Some(path) = table {
        fs::write(path, serde_json::to_string_pretty(&out)?).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(Report { text, json, passed })
}
