//! Byte-deterministic exports: Cayley tables, presentations and a GAP script.

use std::fmt::Write as _;
use std::path::Path;

use serde_json::json;

use super::{CliError, FamilyArgs, Outcome, RunConfig};
use crate::error::Result;
use crate::family::{build_family_with_guard, FamilyInstance, FamilyParams};
use crate::group::{FiniteGroup, IndexedGroup, TableGroup};

/// Cayley table as CSV of element indices, one row per left factor, no header.
pub fn table_csv(group: &FiniteGroup) -> String {
    let table = TableGroup::from_group(group);
    let n = table.size();
    let mut out = String::with_capacity(n * n * 4);
    for a in 0..n {
        for (j, v) in table.row(a).iter().enumerate() {
            if j > 0 {
                out.push(',');
            }
            let _ = write!(out, "{v}");
        }
        out.push('\n');
    }
    out
}

/// Index and normal form of every element, in table order.
pub fn elements_text(group: &FiniteGroup) -> String {
    let amb = group.ambient();
    let mut out = String::new();
    for (i, g) in group.elements().iter().enumerate() {
        let _ = writeln!(out, "{i},{}", amb.format(g));
    }
    out
}

/// `(sigma, carry)` with `r^t = r^sigma` and `t² = r^carry`.
fn k_relations(inst: &FamilyInstance) -> (u32, u32) {
    let amb = &inst.ambient;
    let (t, r) = (amb.t(), amb.r());
    (amb.conjugate(&r, &t).kappa, amb.pow(&t, 2).kappa)
}

/// Plain-text presentations of `P`, `G` and `H`.
pub fn presentation_text(inst: &FamilyInstance) -> Result<String> {
    let amb = &inst.ambient;
    let FamilyParams { variant, n, m, k, .. } = inst.params;
    let (sigma, carry) = k_relations(inst);
    let (x, y, z) = (inst.x, inst.y, inst.z()?);
    let (ug, uh) = (amb.commutator(&y, &x), amb.commutator(&z, &x));
    let (en, em, ek, ek1) = (1u64 << n, 1u64 << m, 1u64 << k, 1u64 << (k - 1));
    let mut out = String::new();
    let _ = writeln!(out, "# variant {variant}, (n, m, k) = ({n}, {m}, {k})");
    let _ = writeln!(out, "K = < t, r | r^{ek} = 1, t^2 = r^{carry}, r^t = r^{sigma} >");
    let _ = writeln!(out, "C = < c | c^{en} = 1 >");
    let _ = writeln!(out, "D = < d | d^{em} = 1 >");
    let _ = writeln!(out, "P = K x C x D");
    let _ = writeln!(out, "x = t c = {}", amb.format(&x));
    let _ = writeln!(out, "y = t^-1 r d = {}", amb.format(&y));
    let _ = writeln!(out, "z = r d = {}", amb.format(&z));
    let _ = writeln!(out, "G: u = [y, x] = {}", amb.format(&ug));
    let _ = writeln!(out, "H: u = [z, x] = {}", amb.format(&uh));
    let _ = writeln!(
        out,
        "G = < x, y, u | x^{en} = y^{em} = u^{ek1} = 1, y^x = y u, u^x = u^{{-1}}, u^y = u^{{-1}} >"
    );
    let _ = writeln!(
        out,
        "H = < x, z, u | x^{en} = z^{em} = u^{ek1} = 1, z^x = z u, u^x = u^{{-1}}, u^z = u >"
    );
    Ok(out)
}

/// GAP script rebuilding `P`, `G`, `H`, `M` and checking the structural
/// clauses against the values computed here.
pub fn gap_script(inst: &FamilyInstance) -> Result<String> {
    let FamilyParams { variant, n, m, k, .. } = inst.params;
    let (sigma, carry) = k_relations(inst);
    let g = &inst.g;
    let h = inst.h()?;
    let mm = inst.m_group.as_ref().expect("2-case has M");
    let g_derived = g.derived_subgroup();
    let h_derived = h.derived_subgroup();
    let exp_gm = g.intersection(mm)?.exponent();
    let exp_hm = h.intersection(mm)?.exponent();
    let (ek, en, em) = (1u64 << k, 1u64 << n, 1u64 << m);
    let b = |v: bool| if v { "true" } else { "false" };
    let mut s = String::new();
    let _ = writeln!(s, "# variant {variant}, (n, m, k) = ({n}, {m}, {k})");
    let _ = writeln!(s, "F := FreeGroup(\"t\", \"r\", \"c\", \"d\");;");
    let _ = writeln!(s, "rels := [ F.2^{ek}, F.1^2 * F.2^-{carry}, F.2^F.1 * F.2^-{sigma}, F.3^{en}, F.4^{em},");
    let _ = writeln!(s, "  Comm(F.1, F.3), Comm(F.1, F.4), Comm(F.2, F.3), Comm(F.2, F.4), Comm(F.3, F.4) ];;");
    let _ = writeln!(s, "P := F / rels;;");
    let _ = writeln!(s, "iso := IsomorphismPcGroup(P);;");
    let _ = writeln!(s, "Q := Image(iso);;");
    let _ = writeln!(s, "t := Image(iso, P.1);; r := Image(iso, P.2);; c := Image(iso, P.3);; d := Image(iso, P.4);;");
    let _ = writeln!(s, "x := t * c;; y := t^-1 * r * d;; z := r * d;;");
    let _ = writeln!(s, "G := Subgroup(Q, [x, y]);;");
    let _ = writeln!(s, "H := Subgroup(Q, [x, z]);;");
    let _ = writeln!(s, "M := Subgroup(Q, [r, c, d]);;");
    let _ = writeln!(s, "results := [");
    let checks = [
        format!("[\"order_g\", Size(G) = {}]", g.order()),
        format!("[\"order_h\", Size(H) = {}]", h.order()),
        format!("[\"derived_g\", Size(DerivedSubgroup(G)) = {}]", g_derived.order()),
        format!("[\"derived_h\", Size(DerivedSubgroup(H)) = {}]", h_derived.order()),
        format!("[\"derived_g_cyclic\", IsCyclic(DerivedSubgroup(G)) = {}]", b(g_derived.is_cyclic())),
        format!("[\"derived_h_cyclic\", IsCyclic(DerivedSubgroup(H)) = {}]", b(h_derived.is_cyclic())),
        format!("[\"class_g\", NilpotencyClassOfGroup(G) = {}]", g.nilpotency_class()),
        format!("[\"class_h\", NilpotencyClassOfGroup(H) = {}]", h.nilpotency_class()),
        "[\"frattini_g\", FrattiniSubgroup(G) = FrattiniSubgroup(Q)]".to_string(),
        "[\"frattini_h\", FrattiniSubgroup(H) = FrattiniSubgroup(Q)]".to_string(),
        format!("[\"exp_g_meet_m\", Exponent(Intersection(G, M)) = {exp_gm}]"),
        format!("[\"exp_h_meet_m\", Exponent(Intersection(H, M)) = {exp_hm}]"),
        "[\"non_isomorphic\", IsomorphismGroups(G, H) = fail]".to_string(),
    ];
    let _ = writeln!(s, "  {}", checks.join(",\n  "));
    let _ = writeln!(s, "];;");
    let _ = writeln!(s, "for e in results do Print(e[1], \" \", e[2], \"\\n\"); od;");
    let _ = writeln!(s, "if ForAll(results, e -> e[2]) then Print(\"ALL PASS\\n\"); else Print(\"FAIL\\n\"); fi;");
    let _ = writeln!(s, "QUIT;");
    Ok(s)
}

pub fn cmd_export(cfg: &RunConfig, args: &FamilyArgs, dir: &Path) -> std::result::Result<Outcome, CliError> {
    if args.p != 2 {
        return Err(CliError::Usage("export supports the 2-case only".into()));
    }
    let params = FamilyParams { p: args.p, variant: args.variant, n: args.n, m: args.m, k: args.k };
    let inst = build_family_with_guard(params, cfg.guard)?;
    let h = inst.h()?;
    let files = [
        ("g_table.csv", table_csv(&inst.g)),
        ("h_table.csv", table_csv(h)),
        ("g_elements.txt", elements_text(&inst.g)),
        ("h_elements.txt", elements_text(h)),
        ("presentation.txt", presentation_text(&inst)?),
        ("verify.g", gap_script(&inst)?),
    ];
    std::fs::create_dir_all(dir)?;
    let mut listing = Vec::new();
    for (name, text) in &files {
        std::fs::write(dir.join(name), text)?;
        listing.push(json!({"file": name, "bytes": text.len()}));
    }
    Ok(Outcome { pass: true, body: json!({"files": listing}) })
}
