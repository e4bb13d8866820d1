//! The `family`, `witness` and `invariants` commands.

use std::sync::Arc;

use serde_json::{json, Value};

use super::{CliError, FamilyArgs, Outcome, RunConfig};
use crate::algebra::GroupAlgebra;
use crate::family::{
    build_family_table, build_family_with_guard, compare_variants, verify_structure, verify_odd, FamilyInstance,
    FamilyParams,
};
use crate::group::{KTable, Variant};
use crate::invariants::{pth_power_classes_by_centralizers, proposition_report, reports_invariant_equal};
use crate::witness::{
    beta_square_fixed_by_x, build_beta, build_beta_general, build_beta_k3, commutator_check, power_formula_check,
    verify_witness, WitnessConfig, WitnessSetup,
};

/// Largest `|G|` for which exhaustive multiplicativity is run.
pub const EXHAUSTIVE_LIMIT: usize = 512;

fn params(args: &FamilyArgs) -> FamilyParams {
    FamilyParams { p: args.p, variant: args.variant, n: args.n, m: args.m, k: args.k }
}

fn build(cfg: &RunConfig, args: &FamilyArgs) -> Result<FamilyInstance, CliError> {
    Ok(build_family_with_guard(params(args), cfg.guard)?)
}

pub fn cmd_family(cfg: &RunConfig, args: &FamilyArgs, variants: bool) -> Result<Outcome, CliError> {
    let inst = build(cfg, args)?;
    if !inst.is_two_case() {
        let report = verify_odd(&inst);
        return Ok(Outcome { pass: report.all_pass(), body: json!({"odd_p": report}) });
    }
    let report = verify_structure(&inst, cfg.oracle_bound)?;
    let mut pass = report.all_pass();
    let mut body = json!({"clauses": report});
    if variants {
        let v = compare_variants(args.n, args.m, args.k, cfg.oracle_bound)?;
        pass &= v.all_pass();
        body["variants"] = serde_json::to_value(&v).expect("report serializes");
    }
    Ok(Outcome { pass, body })
}

fn parse_index(spec: &str, what: &str, bound: usize) -> Result<usize, CliError> {
    let i: usize = spec
        .strip_prefix("index:")
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| CliError::Usage(format!("unrecognized {what} `{spec}`")))?;
    if i >= bound {
        return Err(CliError::Usage(format!("{what} index {i} out of range (|H| = {bound})")));
    }
    Ok(i)
}

pub fn cmd_witness(
    cfg: &RunConfig,
    args: &FamilyArgs,
    beta_kind: &str,
    zeta: &str,
    x_tilde: &str,
) -> Result<Outcome, CliError> {
    if args.p != 2 {
        return Err(CliError::Usage("the witness exists only for p = 2".into()));
    }
    let inst = build(cfg, args)?;
    let setup = WitnessSetup::new(inst)?;
    let fh = &setup.fh;
    let amb = setup.inst.ambient.clone();
    let (x, z) = (setup.inst.x, setup.inst.z()?);
    let beta = match beta_kind {
        "standard" => build_beta(fh, &x, &z)?,
        "k3" => build_beta_k3(fh, &setup.inst)?,
        "general" => {
            let zeta = match zeta {
                "one" => fh.one(),
                "c-top" => fh.embed(&amb.pow(&amb.c(), 1 << (args.n - 1)))?,
                other => fh.basis(parse_index(other, "zeta", fh.dim())?),
            };
            let xt = match x_tilde {
                "x" => x,
                other => fh.group().element(parse_index(other, "x-tilde", fh.dim())?),
            };
            build_beta_general(fh, &zeta, &xt, &z, 1 << args.m)?
        }
        other => return Err(CliError::Usage(format!("unknown beta `{other}` (standard | k3 | general)"))),
    };
    let g_order = setup.inst.g.order();
    let exhaustive = cfg.exhaustive && g_order <= EXHAUSTIVE_LIMIT;
    let wcfg = WitnessConfig { seed: cfg.seed, sample_size: cfg.sample_size, exhaustive, ..Default::default() };
    let cert = verify_witness(&setup, &beta, &wcfg)?;
    let mut body = json!({
        "beta": {"kind": beta_kind, "support": beta.support()},
        "certificate": cert,
    });
    if cfg.exhaustive && !exhaustive {
        body["notes"] = json!([format!("exhaustive multiplicativity needs |G| <= {EXHAUSTIVE_LIMIT}; sampled instead")]);
    }
    if beta_kind == "standard" {
        let mut checks = commutator_check(&setup, &beta)?;
        checks.extend(power_formula_check(&setup, &beta)?);
        checks.push(
            "beta_squared_fixed_by_x",
            "(beta^2)^x = beta^2",
            beta_square_fixed_by_x(&setup, &beta)?,
            Value::Null,
        );
        body["beta_checks"] = serde_json::to_value(&checks).expect("report serializes");
    }
    Ok(Outcome { pass: cert.valid, body })
}

fn parse_table(spec: &str, p: u32, gens: Option<&[u32]>) -> Result<KTable, CliError> {
    if let Some(rest) = spec.strip_prefix("maxclass:") {
        let parts: Vec<&str> = rest.split(':').collect();
        let nums: Option<Vec<u32>> = parts.iter().map(|s| s.parse().ok()).collect();
        return match nums.as_deref() {
            Some([p, k]) => Ok(KTable::split_maximal_class(*p, *k)?),
            _ => Err(CliError::Usage(format!("expected maxclass:P:K, got `{spec}`"))),
        };
    }
    let gens = gens.ok_or_else(|| CliError::Usage("a CSV table needs --table-gens S,S1".into()))?;
    let [s, s1] = gens else {
        return Err(CliError::Usage("--table-gens takes exactly two indices".into()));
    };
    let text = std::fs::read_to_string(spec)?;
    Ok(KTable::from_csv(p, &text, *s, *s1)?)
}

pub fn cmd_invariants(
    cfg: &RunConfig,
    args: &FamilyArgs,
    pair: bool,
    table: Option<&str>,
    table_gens: Option<&[u32]>,
) -> Result<Outcome, CliError> {
    let inst = match table {
        Some(spec) => {
            let t = parse_table(spec, args.p, table_gens)?;
            build_family_table(Arc::new(t), args.n, args.m, cfg.guard)?
        }
        None => {
            if args.p != 2 && args.variant != Variant::Heisenberg {
                return Err(CliError::Usage("odd p needs --variant heisenberg or --table".into()));
            }
            build(cfg, args)?
        }
    };
    if pair && !inst.is_two_case() {
        return Err(CliError::Usage("--pair needs a 2-case instance".into()));
    }
    let fg = GroupAlgebra::new(inst.g.clone());
    let rg = proposition_report("G", &fg)?;
    let mut body = json!({
        "reports": [rg],
        "class_sum_count_by_centralizers": [pth_power_classes_by_centralizers(&inst.g)],
    });
    let mut pass = true;
    let mut notes = Vec::new();
    if !rg.proposition_applicable {
        notes.push(format!(
            "N has order {} and index {} in G; the abelian-index-p hypothesis does not hold",
            rg.n_order, rg.n_index
        ));
    }
    if !inst.is_two_case() {
        let odd = verify_odd(&inst);
        pass &= odd.all_pass();
        body["odd_p"] = serde_json::to_value(&odd).expect("report serializes");
    }
    if pair {
        let h = inst.h()?.clone();
        let fh = GroupAlgebra::new(h.clone());
        let rh = proposition_report("H", &fh)?;
        let equal = reports_invariant_equal(&rg, &rh);
        pass &= equal;
        body["reports"] = json!([rg, rh]);
        body["class_sum_count_by_centralizers"] =
            json!([pth_power_classes_by_centralizers(&inst.g), pth_power_classes_by_centralizers(&h)]);
        body["invariant_equal"] = json!(equal);
    }
    body["notes"] = json!(notes);
    Ok(Outcome { pass, body })
}
