use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::Serialize;
use serde_json::{json, Value};

use super::instance::{Instance, Item};
use super::{budget, Command, Computed, Status};
use crate::duality::{cosupport_inside_max, DualModule};
use crate::error::{Error, Result};
use crate::homalg::{ext, tor, FGModule};
use crate::homology::{homology_finiteness_profile, verify_inclusions, verify_theorem_equivalences, ClauseStatus, SliceOptions};
use crate::integer::{oracle_attached_primes, oracle_tor, tor_resolution_route, AbelianCanonical};
use crate::primes::{associated_primes, is_associated, minimal_primes};
use crate::ring::{Ideal, RingRef};
use crate::sequence::{extend_coregular_sequence, fdepth, fwidth, GradedWorld, IntegerWorld, Width, WidthResult};

const NON_GRADED: &str =
    "non-graded input: converse finiteness criteria are only guaranteed for graded instances; forward directions still hold";

fn value<T: Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("results serialize")
}

fn ok(result: Value) -> Computed {
    Computed { result, status: Status::Ok, warnings: Vec::new() }
}

fn graded(inst: &Instance) -> Result<GradedWorld> {
    let r = ring(inst)?;
    Ok(GradedWorld::new(r).with_budget(budget()))
}

fn ring(inst: &Instance) -> Result<&RingRef> {
    inst.poly_ring().ok_or_else(|| Error::UnsupportedModuleClass("this command needs a polynomial ring".into()))
}

fn integer_world() -> IntegerWorld {
    IntegerWorld { budget: budget() }
}

fn int_canonical(inst: &Instance, name: &str) -> Result<AbelianCanonical> {
    match inst.item(name)? {
        Item::IntModule(g) => Ok(AbelianCanonical::FinitelyGenerated(g.clone())),
        Item::IntArtinian(g) => Ok(AbelianCanonical::Artinian(g.clone())),
        _ => Err(Error::InvalidArgument(format!("'{name}' is not a group"))),
    }
}

fn format_int_primes(ps: &[u64]) -> Vec<String> {
    ps.iter().map(|p| format!("({p})")).collect()
}

fn width_value<E>(w: &WidthResult<E>) -> Value {
    json!({
        "fwidth": w.value,
        "obstruction": w.sequence.obstruction,
        "sequence": w.sequence.formatted(),
        "steps": value(&w.sequence.steps),
        "certificate": value(&w.witness),
    })
}

fn width_status(w: Width) -> Status {
    if w == Width::Undetermined {
        Status::Undetermined
    } else {
        Status::Ok
    }
}

fn warn_if_non_graded(inst: &Instance, c: &mut Computed) {
    if inst.has_non_graded_input() {
        c.warnings.push(NON_GRADED.into());
    }
}

pub(super) fn run(command: &Command, inst: &Instance) -> Result<Computed> {
    use Command::*;
    match command {
        Gb { ideal, .. } => {
            if inst.is_integer() {
                let g = inst.int_ideal(ideal)?.abs();
                return Ok(ok(json!({"ideal": ideal, "groebner_basis": [g.to_string()], "unit": g == BigInt::from(1)})));
            }
            let i = inst.ideal(ideal)?;
            let r = i.ring();
            let basis: Vec<String> = i.groebner().iter().map(|p| r.format(p)).collect();
            Ok(ok(json!({
                "ideal": ideal,
                "generators": i.gens().iter().map(|p| r.format(p)).collect::<Vec<_>>(),
                "groebner_basis": basis,
                "unit": i.is_unit(),
                "basis_self_check": i.verify_basis(),
            })))
        }
        Nf { ideal, poly, .. } => {
            if inst.is_integer() {
                let g = inst.int_ideal(ideal)?;
                let x: BigInt = poly.trim().parse().map_err(|_| Error::InvalidArgument(format!("'{poly}' is not an integer")))?;
                let r = if g.is_zero() { x.clone() } else { x.mod_floor(&g.abs()) };
                return Ok(ok(json!({"normal_form": r.to_string(), "member": r.is_zero()})));
            }
            let i = inst.ideal(ideal)?;
            let r = i.ring();
            let p = r.parse(poly)?;
            let nf = i.normal_form(&p)?;
            Ok(ok(json!({"poly": r.format(&p), "normal_form": r.format(&nf), "member": nf.is_zero()})))
        }
        Tor { m, n, index, .. } => {
            if inst.is_integer() {
                let a = int_canonical(inst, m)?;
                let b = int_canonical(inst, n)?;
                let t = oracle_tor(&a, &b, *index)?;
                return Ok(ok(json!({"tor": t.to_string(), "length": t.length(), "group": value(&t)})));
            }
            let mm = inst.module(m)?;
            match inst.item(n)? {
                Item::DualOf(_) => {
                    let d = inst.artinian(n)?.tor_with(&mm, *index)?;
                    let cos = d.cosupport()?;
                    Ok(ok(json!({
                        "tor": d.to_string(),
                        "length": d.length(),
                        "annihilator": cos.annihilator.format(),
                        "cosupport_inside_max": cos.inside_max,
                    })))
                }
                _ => {
                    let t = tor(&mm, &inst.module(n)?, *index)?;
                    Ok(ok(json!({"tor": t.to_string(), "length": t.length(), "annihilator": t.annihilator().format()})))
                }
            }
        }
        Ext { m, l, index, .. } => {
            ring(inst)?;
            let e = ext(&inst.module(m)?, &inst.module(l)?, *index)?;
            Ok(ok(json!({"ext": e.to_string(), "length": e.length(), "annihilator": e.annihilator().format()})))
        }
        Ass { m, .. } => {
            if inst.is_integer() {
                let ps = inst.int_module(m)?.associated_primes()?;
                return Ok(ok(json!({"primes": format_int_primes(&ps), "provenance": "computed"})));
            }
            let list = associated_primes(&inst.module(m)?)?;
            Ok(ok(json!({"primes": list.formatted(), "provenance": list.provenance()})))
        }
        Att { n, .. } => {
            if inst.is_integer() {
                let g = inst.int_artinian(n)?;
                return Ok(ok(json!({"primes": format_int_primes(&g.attached_primes()), "provenance": "computed"})));
            }
            let list = inst.artinian(n)?.attached_primes()?;
            Ok(ok(json!({"primes": list.formatted(), "provenance": list.provenance(), "all_maximal": list.all_maximal()})))
        }
        Cosupp { n, .. } => {
            if inst.is_integer() {
                let g = inst.int_artinian(n)?;
                let c = g.cosupport();
                return Ok(ok(json!({
                    "annihilator": format!("({})", g.annihilator()),
                    "whole_spectrum": c.whole_spectrum,
                    "primes": format_int_primes(&c.primes.iter().copied().collect::<Vec<_>>()),
                    "inside_max": c.inside_max(),
                })));
            }
            let c = inst.artinian(n)?.cosupport()?;
            Ok(ok(json!({"annihilator": c.annihilator.format(), "inside_max": c.inside_max})))
        }
        Length { of, .. } => {
            let (shown, length) = match inst.item(of)? {
                Item::Module { .. } => {
                    let m = inst.module(of)?;
                    (m.to_string(), m.length())
                }
                Item::DualOf(_) => {
                    let d = inst.artinian(of)?;
                    (d.to_string(), d.length())
                }
                Item::IntModule(g) => (g.to_string(), g.length()),
                Item::IntArtinian(g) => (g.to_string(), g.length()),
                _ => return Err(Error::InvalidArgument(format!("'{of}' is not a module"))),
            };
            Ok(ok(json!({"module": shown, "length": length})))
        }
        Fseq { ideal, n, seq, length, .. } => {
            let first = |_: usize| 0;
            let s = if inst.is_integer() {
                let prefix = seq.as_ref().map(|s| inst.int_sequence(s)).transpose()?.unwrap_or_default();
                let target = length.unwrap_or(prefix.len() + 1);
                value(&extend_coregular_sequence(&integer_world(), &inst.int_artinian(n)?, &inst.int_ideal(ideal)?, &prefix, target, &first)?)
            } else {
                let prefix = seq.as_ref().map(|s| inst.sequence(s)).transpose()?.unwrap_or_default();
                let target = length.unwrap_or(prefix.len() + 1);
                value(&extend_coregular_sequence(&graded(inst)?, &inst.artinian(n)?, &inst.ideal(ideal)?, &prefix, target, &first)?)
            };
            let len = s["steps"].as_array().map(Vec::len).unwrap_or(0);
            let mut out = s;
            out["length"] = json!(len);
            Ok(ok(out))
        }
        Fwidth { ideal, n, .. } => {
            let (v, w) = if inst.is_integer() {
                let r = fwidth(&integer_world(), &inst.int_ideal(ideal)?, &inst.int_artinian(n)?)?;
                (width_value(&r), r.value)
            } else {
                let r = fwidth(&graded(inst)?, &inst.ideal(ideal)?, &inst.artinian(n)?)?;
                (width_value(&r), r.value)
            };
            Ok(Computed { result: v, status: width_status(w), warnings: Vec::new() })
        }
        Fdepth { ideal, m, .. } => {
            ring(inst)?;
            let r = fdepth(&inst.ideal(ideal)?, &inst.module(m)?, budget())?;
            let mut v = width_value(&r);
            let obj = v.as_object_mut().unwrap();
            let w = obj.remove("fwidth").unwrap();
            obj.insert("fdepth".into(), w);
            Ok(Computed { result: v, status: width_status(r.value), warnings: Vec::new() })
        }
        Profile { m, n, ideal, imax, slices, nmax, .. } => {
            let opts = slices.then_some(SliceOptions { n_max: *nmax, n_cap: SliceOptions::default().n_cap.max(*nmax) });
            let p = if inst.is_integer() {
                homology_finiteness_profile(&integer_world(), &inst.int_module(m)?, &inst.int_artinian(n)?, &inst.int_ideal(ideal)?, *imax, opts)?
            } else {
                homology_finiteness_profile(&graded(inst)?, &inst.module(m)?, &inst.artinian(n)?, &inst.ideal(ideal)?, *imax, opts)?
            };
            let mut c = Computed { result: value(&p), status: width_status(p.first_non_finitely_generated), warnings: Vec::new() };
            warn_if_non_graded(inst, &mut c);
            Ok(c)
        }
        VerifyTheorem { m, n, ideal, index, .. } => {
            let rep = if inst.is_integer() {
                verify_theorem_equivalences(&integer_world(), &inst.int_module(m)?, &inst.int_artinian(n)?, &inst.int_ideal(ideal)?, *index)?
            } else {
                verify_theorem_equivalences(&graded(inst)?, &inst.module(m)?, &inst.artinian(n)?, &inst.ideal(ideal)?, *index)?
            };
            let status = if !rep.agreement {
                Status::Counterexample
            } else if rep.clauses.iter().all(|c| matches!(c.status, ClauseStatus::Undetermined | ClauseStatus::Vacuous)) {
                Status::Undetermined
            } else {
                Status::Ok
            };
            let mut c = Computed { result: value(&rep), status, warnings: Vec::new() };
            warn_if_non_graded(inst, &mut c);
            Ok(c)
        }
        VerifyInclusions { m, n, seq, imax, .. } => {
            let rep = if inst.is_integer() {
                let xs = inst.int_sequence(seq)?;
                let i_max = imax.unwrap_or(xs.len() + 1);
                verify_inclusions(&integer_world(), &inst.int_module(m)?, &inst.int_artinian(n)?, &xs, i_max)?
            } else {
                let xs = inst.sequence(seq)?;
                let i_max = imax.unwrap_or(xs.len() + 1);
                verify_inclusions(&graded(inst)?, &inst.module(m)?, &inst.artinian(n)?, &xs, i_max)?
            };
            let status = if rep.passes() { Status::Ok } else { Status::Counterexample };
            let mut out = value(&rep);
            out["pass"] = json!(rep.passes());
            Ok(Computed { result: out, status, warnings: Vec::new() })
        }
        OracleTor { m, n, index, .. } => {
            if inst.is_integer() {
                let a = int_canonical(inst, m)?;
                let b = int_canonical(inst, n)?;
                let closed = oracle_tor(&a, &b, *index)?;
                let route = tor_resolution_route(&a, &b, *index)?;
                let agree = closed.isomorphic(&route);
                let result = json!({"closed_form": closed.to_string(), "resolution_route": route.to_string(), "agree": agree});
                return Ok(Computed { result, status: if agree { Status::Ok } else { Status::Counterexample }, warnings: Vec::new() });
            }
            let a = inst.module(m)?;
            let b = match inst.item(n)? {
                Item::DualOf(_) => inst.artinian(n)?.predual().clone(),
                _ => inst.module(n)?,
            };
            let left = tor(&a, &b, *index)?;
            let right = tor(&b, &a, *index)?;
            let agree = left.isomorphic_hint(&right);
            let result = json!({"tor_mn": left.to_string(), "tor_nm": right.to_string(), "agree": agree});
            Ok(Computed { result, status: if agree { Status::Ok } else { Status::Counterexample }, warnings: Vec::new() })
        }
        OracleAtt { n, .. } => {
            if inst.is_integer() {
                let g = inst.int_artinian(n)?;
                let closed = g.attached_primes();
                let enumerated = oracle_attached_primes(&g)?;
                let agree = closed == enumerated;
                let result = json!({
                    "closed_form": format_int_primes(&closed),
                    "enumerated": format_int_primes(&enumerated),
                    "agree": agree,
                });
                return Ok(Computed { result, status: if agree { Status::Ok } else { Status::Counterexample }, warnings: Vec::new() });
            }
            let d = inst.artinian(n)?;
            oracle_att_graded(&d)
        }
        OracleWidth { ideal, n, .. } => {
            let w = graded(inst)?;
            let a = inst.ideal(ideal)?;
            let d = inst.artinian(n)?;
            let width = fwidth(&w, &a, &d)?;
            let depth = fdepth(&a, d.predual(), budget())?;
            let agree = width.value == depth.value;
            let status = if width.value == Width::Undetermined || depth.value == Width::Undetermined {
                Status::Undetermined
            } else if agree {
                Status::Ok
            } else {
                Status::Counterexample
            };
            let result = json!({"fwidth": width.value, "fdepth": depth.value, "agree": agree});
            Ok(Computed { result, status, warnings: Vec::new() })
        }
    }
}

/// `Att(D(L)) = Ass(L)`: every computed prime passes the direct membership
/// test, and every minimal prime of the annihilator is among them.
fn oracle_att_graded(d: &DualModule) -> Result<Computed> {
    let l: &FGModule = d.predual();
    let att = d.attached_primes()?;
    let mut failures = Vec::new();
    for p in att.primes() {
        if !is_associated(l, p.ideal())? {
            failures.push(format!("{p} fails the associated-prime test"));
        }
    }
    let ann: Ideal = l.annihilator();
    if !ann.is_unit() {
        for p in minimal_primes(&ann)?.primes() {
            if !att.contains_prime(p) {
                failures.push(format!("minimal prime {p} of the annihilator is missing"));
            }
        }
    }
    let agree = failures.is_empty();
    let result = json!({
        "primes": att.formatted(),
        "all_maximal": att.all_maximal(),
        "cosupport_inside_max": cosupport_inside_max(&ann)?,
        "failures": failures,
        "agree": agree,
    });
    Ok(Computed { result, status: if agree { Status::Ok } else { Status::Counterexample }, warnings: Vec::new() })
}
