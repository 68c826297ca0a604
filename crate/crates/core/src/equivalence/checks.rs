use std::sync::Arc;

use crate::algebra::{substitutions_up_to_depth, Substitution};
use crate::category::{AdmissibleDescMorphism, HOM_SET_NOTE};
use crate::equivalence::{FunctorIso, IsoMethod};
use crate::error::{Error, Result};
use crate::lattice::FilterLattice;
use crate::par;
use crate::report::CheckReport;
use crate::semantics::{val, PointMap};

fn object_text(iso: &FunctorIso) -> String {
    format!("phi: {}; alpha: {}", iso.phi(), iso.method().as_str())
}

fn check_bounds(iso: &FunctorIso, n_max: usize, depth: usize) -> Result<()> {
    if n_max == 0 || n_max > iso.n_max() || depth > iso.depth() {
        return Err(Error::BoundExceeded(format!(
            "sample n_max={n_max}, depth={depth} lies outside the witness (n_max={}, depth={})",
            iso.n_max(),
            iso.depth()
        )));
    }
    Ok(())
}

/// Checks, for every substitution `s` of depth `≤ depth` between canonical
/// objects of size `≤ n_max` and every pair of filters, that `(s, T₁, T₂)` is
/// admissible over `𝓗₁` exactly when `(φ(s), αT₁, αT₂)` is over `𝓗₂`.
pub fn verify_admissibility_transfer(iso: &FunctorIso, n_max: usize, depth: usize) -> Result<CheckReport> {
    check_bounds(iso, n_max, depth)?;
    let mut report = CheckReport::new("admissibility transfer", &object_text(iso), n_max, depth);
    let sig = iso.left(1).space().model().signature().clone();
    for i in 1..=n_max {
        report.sizes.push(iso.left(i).lattice().len().to_string());
        for j in 1..=n_max {
            let (l1, l2) = (iso.left(i).lattice(), iso.left(j).lattice());
            let (r1, r2) = (iso.right(i).lattice(), iso.right(j).lattice());
            let (ai, aj) = (iso.alpha(i), iso.alpha(j));
            for s in substitutions_up_to_depth(&sig, iso.left(i).vars(), iso.left(j).vars(), depth) {
                let ps = iso.phi().morphism(&s);
                let map1 = PointMap::new(&s, l1.algebra().space(), l2.algebra().space())?;
                let map2 = PointMap::new(&ps, r1.algebra().space(), r2.algebra().space())?;
                for t1 in 0..l1.len() {
                    let pre1 = map1.star(&l1.members()[t1])?;
                    let pre2 = map2.star(&r1.members()[ai[t1]])?;
                    for t2 in 0..l2.len() {
                        let adm1 = l2.members()[t2].is_subset(&pre1);
                        let adm2 = r2.members()[aj[t2]].is_subset(&pre2);
                        report.record(if adm1 == adm2 {
                            Ok(())
                        } else {
                            Err(format!(
                                "{s}: {} -> {} admissible={adm1}, image admissible={adm2}",
                                l1.algebra().space().format_set(&l1.members()[t1]),
                                l2.algebra().space().format_set(&l2.members()[t2]),
                            ))
                        });
                    }
                }
            }
        }
    }
    Ok(report)
}

/// `𝓕(s, f) = (φ(s), α_Y ∘ f ∘ α_X⁻¹)`.
fn forward(
    s: &Substitution,
    assignment: &[usize],
    a_src: &[usize],
    a_dst: &[usize],
    phi_s: Substitution,
    src: &Arc<FilterLattice>,
    dst: &Arc<FilterLattice>,
) -> Result<AdmissibleDescMorphism> {
    let mut image = vec![0; assignment.len()];
    for (i, &j) in assignment.iter().enumerate() {
        image[a_src[i]] = a_dst[j];
    }
    AdmissibleDescMorphism::new(phi_s, Arc::clone(src), Arc::clone(dst), image)
        .map_err(|e| Error::Verification(format!("image of a morphism over {s} is not admissible: {e}")))
}

fn same_morphism(a: &AdmissibleDescMorphism, b: &AdmissibleDescMorphism) -> bool {
    a.substitution() == b.substitution() && a.assignment() == b.assignment()
}

fn constant_top(s: Substitution, src: &Arc<FilterLattice>, dst: &Arc<FilterLattice>) -> Result<AdmissibleDescMorphism> {
    let top = dst.require_index(dst.top().points())?;
    AdmissibleDescMorphism::new(s, Arc::clone(src), Arc::clone(dst), vec![top; src.len()])
}

/// Materializes the functor `𝓕` induced by the witness and its inverse `𝓕′`
/// built from `φ⁻¹` and `α⁻¹`, and checks the functor laws on the generated
/// family: least and constant-top morphisms for every substitution of
/// depth `≤ iso.depth()` between canonical objects.
pub fn build_description_iso(iso: &FunctorIso) -> Result<CheckReport> {
    let n_max = iso.n_max();
    let mut report = CheckReport::new("description isomorphism", &object_text(iso), n_max, iso.depth());
    report.notes.push(HOM_SET_NOTE.to_string());
    let sig = iso.left(1).space().model().signature().clone();
    let inv_phi = iso.phi().inverse();
    let inv_alpha: Vec<Vec<usize>> = (1..=n_max).map(|n| iso.alpha_inverse(n)).collect();

    for n in 1..=n_max {
        let (l, r) = (iso.left(n).lattice(), iso.right(n).lattice());
        let a = iso.alpha(n);
        report.sizes.push(format!("{}->{}", l.len(), r.len()));
        let mut sorted = a.to_vec();
        sorted.sort_unstable();
        report.record(if l.len() == r.len() && sorted.iter().copied().eq(0..r.len()) {
            Ok(())
        } else {
            Err(format!("alpha is not a bijection over {}", iso.left(n).vars()))
        });
        if report.failure_count > 0 {
            return Ok(report);
        }
        for i in 0..l.len() {
            for j in 0..l.len() {
                report.record(if l.le(i, j) == r.le(a[i], a[j]) {
                    Ok(())
                } else {
                    Err(format!(
                        "alpha does not preserve order between {} and {}",
                        l.algebra().space().format_set(&l.members()[i]),
                        l.algebra().space().format_set(&l.members()[j])
                    ))
                });
            }
        }
        let id1 = AdmissibleDescMorphism::identity(Arc::clone(l));
        let image = forward(
            id1.substitution(),
            id1.assignment(),
            a,
            a,
            iso.phi().morphism(id1.substitution()),
            r,
            r,
        )?;
        report.record(
            if same_morphism(&image, &AdmissibleDescMorphism::identity(Arc::clone(r))) {
                Ok(())
            } else {
                Err(format!("identity on {} is not preserved", iso.left(n).vars()))
            },
        );
        if iso.method() == IsoMethod::Coherent {
            let rspace = r.algebra().space();
            for i in 0..l.len() {
                let translated = iso.phi().formula(l.filter(i).witness());
                let pts = val(&translated, rspace)?;
                report.record(if pts == r.members()[a[i]] {
                    Ok(())
                } else {
                    Err(format!(
                        "phi does not carry the witness {} to its image",
                        l.filter(i).witness()
                    ))
                });
            }
        }
    }

    // morphisms[i][j]: the generated family from object i+1 to object j+1
    let mut family: Vec<Vec<Vec<AdmissibleDescMorphism>>> = Vec::new();
    let mut images: Vec<Vec<Vec<AdmissibleDescMorphism>>> = Vec::new();
    for i in 1..=n_max {
        let (mut frow, mut irow) = (Vec::new(), Vec::new());
        for j in 1..=n_max {
            let (l1, l2) = (iso.left(i).lattice(), iso.left(j).lattice());
            let (r1, r2) = (iso.right(i).lattice(), iso.right(j).lattice());
            let (mut fs, mut is) = (Vec::new(), Vec::new());
            for s in substitutions_up_to_depth(&sig, iso.left(i).vars(), iso.left(j).vars(), iso.depth()) {
                let ps = iso.phi().morphism(&s);
                let least1 = AdmissibleDescMorphism::least(s.clone(), Arc::clone(l1), Arc::clone(l2))?;
                let least2 = AdmissibleDescMorphism::least(ps.clone(), Arc::clone(r1), Arc::clone(r2))?;
                for (least, m) in [(true, least1), (false, constant_top(s.clone(), l1, l2)?)] {
                    match forward(&s, m.assignment(), iso.alpha(i), iso.alpha(j), ps.clone(), r1, r2) {
                        Ok(fm) => {
                            if least {
                                report.record(if same_morphism(&fm, &least2) {
                                    Ok(())
                                } else {
                                    Err(format!("diagram does not commute for {s}"))
                                });
                            } else {
                                report.record(Ok(()));
                            }
                            let back = forward(
                                &ps,
                                fm.assignment(),
                                &inv_alpha[i - 1],
                                &inv_alpha[j - 1],
                                inv_phi.morphism(&ps),
                                l1,
                                l2,
                            );
                            report.record(match back {
                                Ok(b) if same_morphism(&b, &m) => Ok(()),
                                _ => Err(format!("F'F is not the identity on a morphism over {s}")),
                            });
                            fs.push(m);
                            is.push(fm);
                        }
                        Err(e) => report.fail(e.to_string()),
                    }
                }
                let back = forward(
                    &ps,
                    least2.assignment(),
                    &inv_alpha[i - 1],
                    &inv_alpha[j - 1],
                    inv_phi.morphism(&ps),
                    l1,
                    l2,
                );
                let again = back.and_then(|b| {
                    forward(
                        b.substitution(),
                        b.assignment(),
                        iso.alpha(i),
                        iso.alpha(j),
                        iso.phi().morphism(b.substitution()),
                        r1,
                        r2,
                    )
                });
                report.record(match again {
                    Ok(m2) if same_morphism(&m2, &least2) => Ok(()),
                    _ => Err(format!("FF' is not the identity on a morphism over {ps}")),
                });
            }
            frow.push(fs);
            irow.push(is);
        }
        family.push(frow);
        images.push(irow);
    }

    let mut jobs = Vec::new();
    for i in 0..n_max {
        for j in 0..n_max {
            for k in 0..n_max {
                for a in 0..family[i][j].len() {
                    for b in 0..family[j][k].len() {
                        jobs.push((i, j, k, a, b));
                    }
                }
            }
        }
    }
    let outcomes = par::map(
        iso.exec(),
        &jobs,
        |&(i, j, k, a, b)| -> Result<std::result::Result<(), String>> {
            let composite = family[i][j][a].then(&family[j][k][b])?;
            let ps = iso.phi().morphism(composite.substitution());
            let image = forward(
                composite.substitution(),
                composite.assignment(),
                iso.alpha(i + 1),
                iso.alpha(k + 1),
                ps,
                iso.right(i + 1).lattice(),
                iso.right(k + 1).lattice(),
            )?;
            let composed = images[i][j][a].then(&images[j][k][b])?;
            Ok(if same_morphism(&image, &composed) {
                Ok(())
            } else {
                Err(format!(
                    "composition of {} and {} is not preserved",
                    family[i][j][a].substitution(),
                    family[j][k][b].substitution()
                ))
            })
        },
    );
    for o in outcomes {
        report.record(o?);
    }
    Ok(report)
}
