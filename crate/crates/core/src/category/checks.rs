use std::sync::Arc;

use crate::algebra::{compose_subst, substitutions_up_to_depth, Model, Substitution};
use crate::category::objects::cl_with_map;
use crate::category::{
    ct_morphism, ct_object, is_admissible_cont, is_admissible_desc, AdmissibleDescMorphism, KnowledgeBase,
};
use crate::config::Bounds;
use crate::error::Result;
use crate::par;
use crate::report::CheckReport;
use crate::semantics::{val, PointMap};

pub(crate) const HOM_SET_NOTE: &str =
    "hom-sets restricted to least assignments (s_*T)^LL; other admissible targets are checked, not stored";

/// One-line description of a model for report headers.
pub fn describe_model(m: &Model) -> String {
    format!("carrier {{{}}}; {}", m.carrier().join(","), m.signature())
}

/// Checks that `Ct` is a dual isomorphism on every object with `|X| ≤ n_max`
/// and on the least morphisms generated by depth-1 substitutions.
pub fn check_duality(model: &Arc<Model>, n_max: usize, bounds: &Bounds) -> Result<CheckReport> {
    let depth = 1;
    let kb = KnowledgeBase::build(model, n_max, bounds)?;
    let mut report = CheckReport::new("duality", &describe_model(model), n_max, depth);
    report.exact = kb.exact();
    report.notes.push(HOM_SET_NOTE.to_string());
    for obj in kb.description() {
        let lat = obj.lattice();
        let content = ct_object(obj);
        report.sizes.push(lat.len().to_string());
        let space = obj.space();
        for i in 0..lat.len() {
            let t = lat.filter(i);
            let a = content.member(i);
            let back = content.filter_of(&a);
            report.record(match back {
                Ok(b) if b == t => Ok(()),
                _ => Err(format!("Ct is not invertible at {}", space.format_set(t.points()))),
            });
        }
        let witness_vals = par::map_range(bounds.exec, lat.len(), |i| val(lat.filter(i).witness(), space));
        let witness_vals = witness_vals.into_iter().collect::<Result<Vec<_>>>()?;
        for i in 0..lat.len() {
            for j in 0..lat.len() {
                // T_i ⊆ T_j as formula sets iff the generator of T_i holds on points(T_j)
                let filters_included = lat.members()[j].is_subset(&witness_vals[i]);
                let duals_reversed = content.member(j).points().is_subset(content.member(i).points());
                report.record(if filters_included == duals_reversed {
                    Ok(())
                } else {
                    Err(format!(
                        "order not reversed between {} and {} over {}",
                        space.format_set(&lat.members()[i]),
                        space.format_set(&lat.members()[j]),
                        obj.vars()
                    ))
                });
            }
        }
    }

    let objects = kb.description();
    let mut morphisms: Vec<Vec<Vec<AdmissibleDescMorphism>>> = Vec::new();
    for x in objects {
        let mut row = Vec::new();
        for y in objects {
            let subs = substitutions_up_to_depth(model.signature(), x.vars(), y.vars(), depth);
            let ms = subs
                .into_iter()
                .map(|s| AdmissibleDescMorphism::least(s, Arc::clone(x.lattice()), Arc::clone(y.lattice())))
                .collect::<Result<Vec<_>>>()?;
            for m in &ms {
                check_hom_pairs(&mut report, m, x.space(), y.space())?;
            }
            row.push(ms);
        }
        morphisms.push(row);
    }
    for (xi, row) in morphisms.iter().enumerate() {
        for (yi, m1s) in row.iter().enumerate() {
            for zi in 0..objects.len() {
                for m1 in m1s {
                    for m2 in &morphisms[yi][zi] {
                        report.record(
                            check_composite(m1, m2)
                                .map_err(|e| format!("composite over {}->{}->{}: {e}", xi + 1, yi + 1, zi + 1)),
                        );
                    }
                }
            }
        }
    }
    Ok(report)
}

fn check_hom_pairs(
    report: &mut CheckReport,
    m: &AdmissibleDescMorphism,
    x: &crate::semantics::AffineSpace,
    y: &crate::semantics::AffineSpace,
) -> Result<()> {
    report.record(ct_morphism(m).map(|_| ()).map_err(|e| e.to_string()));
    let (src, tgt) = (m.source(), m.target());
    let s = m.substitution();
    for i in 0..src.len() {
        let t1 = src.filter(i);
        for j in 0..tgt.len() {
            let t2 = tgt.filter(j);
            let desc = is_admissible_desc(s, &t1, &t2, x, y)?;
            let cont = is_admissible_cont(s, t2.dual(), t1.dual(), x, y)?;
            report.record(if desc == cont {
                Ok(())
            } else {
                Err(format!(
                    "hom-set mismatch for {s}: {} -> {} desc={desc} cont={cont}",
                    x.format_set(t1.points()),
                    y.format_set(t2.points())
                ))
            });
        }
    }
    Ok(())
}

fn check_composite(m1: &AdmissibleDescMorphism, m2: &AdmissibleDescMorphism) -> Result<(), String> {
    let composite = m1.then(m2).map_err(|e| e.to_string())?;
    let whole = ct_morphism(&composite).map_err(|e| e.to_string())?;
    let c1 = ct_morphism(m1).map_err(|e| e.to_string())?;
    let c2 = ct_morphism(m2).map_err(|e| e.to_string())?;
    let mut chained: Vec<(usize, usize)> = c2
        .pairs()
        .iter()
        .flat_map(|&(k, j)| c1.pairs().iter().filter(move |p| p.0 == j).map(move |&(_, i)| (k, i)))
        .collect();
    chained.sort_unstable();
    chained.dedup();
    if chained == whole.pairs() {
        Ok(())
    } else {
        Err("Ct does not preserve composition".into())
    }
}

/// Checks `Cl(s²∘s¹) = Cl(s²)∘Cl(s¹)` for every pair of substitutions of term
/// depth at most `depth` between canonical variable sets of size at most
/// `n_max`, on every filter of the source lattice.
pub fn verify_cl_functoriality(model: &Arc<Model>, depth: usize, n_max: usize, bounds: &Bounds) -> Result<CheckReport> {
    let kb = KnowledgeBase::build(model, n_max, bounds)?;
    let mut report = CheckReport::new("functoriality", &describe_model(model), n_max, depth);
    report.exact = kb.exact();
    report.notes.push(HOM_SET_NOTE.to_string());
    let objects = kb.description();
    report.sizes = objects.iter().map(|o| o.lattice().len().to_string()).collect();
    let sig = model.signature();

    let subs: Vec<Vec<Vec<(Substitution, PointMap)>>> = objects
        .iter()
        .map(|x| {
            objects
                .iter()
                .map(|y| {
                    substitutions_up_to_depth(sig, x.vars(), y.vars(), depth)
                        .into_iter()
                        .map(|s| {
                            let map = PointMap::new(&s, x.space(), y.space())?;
                            Ok((s, map))
                        })
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;

    for (xi, x) in objects.iter().enumerate() {
        for (s, map) in subs[xi].iter().flat_map(|row| row.iter()) {
            let pre = map.star(&x.space().full())?;
            report.record(if pre.is_full() {
                Ok(())
            } else {
                Err(format!("{s} does not preserve the bottom filter"))
            });
        }
        let id = Substitution::identity(x.vars());
        let map = PointMap::new(&id, x.space(), x.space())?;
        for i in 0..x.lattice().len() {
            let t = x.lattice().filter(i);
            report.record(match cl_with_map(&map, &t, x.lattice()) {
                Ok(u) if u == t => Ok(()),
                _ => Err(format!("identity is not preserved over {}", x.vars())),
            });
        }
    }

    let mut jobs: Vec<(usize, usize, usize, usize, usize)> = Vec::new();
    for xi in 0..objects.len() {
        for yi in 0..objects.len() {
            for zi in 0..objects.len() {
                for a in 0..subs[xi][yi].len() {
                    for b in 0..subs[yi][zi].len() {
                        jobs.push((xi, yi, zi, a, b));
                    }
                }
            }
        }
    }
    let partials = par::map(bounds.exec, &jobs, |&(xi, yi, zi, a, b)| {
        let mut part = CheckReport::new("", "", 0, 0);
        let (s1, m1) = &subs[xi][yi][a];
        let (s2, m2) = &subs[yi][zi][b];
        let (x, y, z) = (&objects[xi], &objects[yi], &objects[zi]);
        let composed = match compose_subst(s1, s2).and_then(|s| {
            let map = PointMap::new(&s, x.space(), z.space())?;
            Ok((s, map))
        }) {
            Ok(c) => c,
            Err(e) => {
                part.record(Err(e.to_string()));
                return part;
            }
        };
        for i in 0..x.lattice().len() {
            let t = x.lattice().filter(i);
            let direct = cl_with_map(&composed.1, &t, z.lattice());
            let stepwise = cl_with_map(m1, &t, y.lattice()).and_then(|u| cl_with_map(m2, &u, z.lattice()));
            part.record(match (direct, stepwise) {
                (Ok(d), Ok(w)) if d.points() == w.points() => Ok(()),
                (d, w) => Err(format!(
                    "Cl({}) differs from Cl({s2}) Cl({s1}) at {}: {:?} vs {:?}",
                    composed.0,
                    x.space().format_set(t.points()),
                    d.map(|f| z.space().format_set(f.points())),
                    w.map(|f| z.space().format_set(f.points()))
                )),
            });
        }
        part
    });
    for p in partials {
        report.absorb(p);
    }
    Ok(report)
}
