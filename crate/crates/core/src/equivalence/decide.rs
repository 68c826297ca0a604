use std::fmt;
use std::sync::Arc;

use crate::algebra::iso::same_signature;
use crate::algebra::{model_isomorphisms, Model};
use crate::category::{describe_model, KnowledgeBase};
use crate::config::Bounds;
use crate::equivalence::checks::build_description_iso;
use crate::equivalence::functor_iso::{coherent_iso, searched_iso, transported_iso, Setup};
use crate::equivalence::{enumerate_phis, FunctorIso, PhiAutomorphism};
use crate::error::Result;
use crate::lattice::LatticeInvariants;
use crate::par;

/// Largest number of automorphisms tried by the informational decider.
pub const PHI_LIMIT: usize = 256;

pub(crate) const CLASS_NOTE: &str = "automorphism class: relation permutations and variable renamings; \
UNKNOWN means no witness in this class within bounds";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    EquivalentWitnessed,
    Inequivalent,
    Unknown,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::EquivalentWitnessed => "EQUIVALENT_WITNESSED",
            Verdict::Inequivalent => "INEQUIVALENT",
            Verdict::Unknown => "UNKNOWN",
        })
    }
}

/// Which equivalence a report decides.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Isomorphism,
    AutomorphicEquivalence,
    Informational,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Isomorphism => "iso",
            Mode::AutomorphicEquivalence => "lae",
            Mode::Informational => "info",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub kind: String,
    pub model_map: Option<String>,
    pub phi: Option<String>,
    pub alpha: Option<String>,
    /// Lattice sizes per `|X|`, as `left->right`.
    pub sizes: Vec<String>,
    pub laws_checked: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Refutation {
    pub vars: String,
    pub invariant: String,
    pub left: String,
    pub right: String,
}

impl fmt::Display for Refutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.vars.is_empty() {
            write!(f, "{} {} vs {}", self.invariant, self.left, self.right)
        } else {
            let n = self.vars.matches(',').count() + 1;
            write!(
                f,
                "{} {} vs {} at X={} (|X|={n})",
                self.invariant, self.left, self.right, self.vars
            )
        }
    }
}

/// Outcome of one of the equivalence deciders.
#[derive(Debug, Clone)]
pub struct EquivReport {
    pub mode: Mode,
    pub verdict: Verdict,
    pub left: String,
    pub right: String,
    pub n_max: usize,
    pub depth: usize,
    pub exact: bool,
    pub witness: Option<Witness>,
    pub refutation: Option<Refutation>,
    pub notes: Vec<String>,
    /// The functor isomorphism behind a witness, when there is one.
    pub iso: Option<FunctorIso>,
}

impl EquivReport {
    fn new(mode: Mode, m1: &Model, m2: &Model, n_max: usize, depth: usize) -> Self {
        EquivReport {
            mode,
            verdict: Verdict::Unknown,
            left: describe_model(m1),
            right: describe_model(m2),
            n_max,
            depth,
            exact: true,
            witness: None,
            refutation: None,
            notes: Vec::new(),
            iso: None,
        }
    }

    fn refute(&mut self, r: Refutation) {
        self.verdict = Verdict::Inequivalent;
        self.refutation = Some(r);
    }

    fn witnessed(&mut self, iso: FunctorIso, laws_checked: u64, model_map: Option<String>) {
        self.verdict = Verdict::EquivalentWitnessed;
        self.witness = Some(Witness {
            kind: if model_map.is_some() {
                "model isomorphism"
            } else {
                "functor isomorphism"
            }
            .to_string(),
            model_map,
            phi: Some(iso.phi().to_string()),
            alpha: Some(iso.method().as_str().to_string()),
            sizes: (1..=iso.n_max())
                .map(|n| format!("{}->{}", iso.left(n).lattice().len(), iso.right(n).lattice().len()))
                .collect(),
            laws_checked,
        });
        self.iso = Some(iso);
    }
}

/// Decides model isomorphism exactly by exhausting carrier bijections.
pub fn check_isomorphic(m1: &Arc<Model>, m2: &Arc<Model>) -> Result<EquivReport> {
    let mut report = EquivReport::new(Mode::Isomorphism, m1, m2, 0, 0);
    let maps = model_isomorphisms(m1, m2)?;
    match maps.first() {
        Some(h) => {
            report.verdict = Verdict::EquivalentWitnessed;
            report.witness = Some(Witness {
                kind: "model isomorphism".to_string(),
                model_map: Some(h.describe(m1, m2)),
                phi: None,
                alpha: None,
                sizes: Vec::new(),
                laws_checked: (m1.size() as u64).pow(2),
            });
        }
        None => report.refute(Refutation {
            vars: String::new(),
            invariant: "model isomorphisms".to_string(),
            left: format!("{} carrier bijections tried", (1..=m1.size() as u64).product::<u64>()),
            right: "0 preserving".to_string(),
        }),
    }
    Ok(report)
}

fn first_difference(
    vars: &str,
    a: &LatticeInvariants,
    b: &LatticeInvariants,
    la: usize,
    lb: usize,
) -> Option<Refutation> {
    let r = |invariant: &str, left: String, right: String| Refutation {
        vars: vars.to_string(),
        invariant: invariant.to_string(),
        left,
        right,
    };
    let degrees = |d: &[(usize, u128)]| d.iter().map(|(k, c)| format!("{k}:{c}")).collect::<Vec<_>>().join(" ");
    if la != lb {
        Some(r("lattice size", la.to_string(), lb.to_string()))
    } else if a.hasse_degrees != b.hasse_degrees {
        Some(r("Hasse degrees", degrees(&a.hasse_degrees), degrees(&b.hasse_degrees)))
    } else if a.height != b.height {
        Some(r("lattice height", a.height.to_string(), b.height.to_string()))
    } else {
        None
    }
}

/// Compares the order invariants of `F^X` on both sides for every `|X| ≤ n_max`.
fn refute_by_invariants(kb1: &KnowledgeBase, kb2: &KnowledgeBase) -> Option<Refutation> {
    kb1.description().iter().zip(kb2.description()).find_map(|(o1, o2)| {
        let (l1, l2) = (o1.lattice(), o2.lattice());
        first_difference(
            &o1.vars().to_string(),
            &l1.invariants(),
            &l2.invariants(),
            l1.len(),
            l2.len(),
        )
    })
}

fn prepare(
    mode: Mode,
    m1: &Arc<Model>,
    m2: &Arc<Model>,
    n_max: usize,
    depth: usize,
    bounds: &Bounds,
) -> Result<(EquivReport, Option<KnowledgeBase>)> {
    same_signature(m1, m2)?;
    let mut report = EquivReport::new(mode, m1, m2, n_max, depth);
    report.notes.push(CLASS_NOTE.to_string());
    report.notes.push(format!(
        "bounds: max_points={}, max_members={}, search_budget={}",
        bounds.max_points, bounds.max_members, bounds.search_budget
    ));
    let kb1 = KnowledgeBase::build(m1, n_max, bounds)?;
    let kb2 = KnowledgeBase::build(m2, n_max, bounds)?;
    report.exact = kb1.exact() && kb2.exact();
    if report.exact {
        if let Some(r) = refute_by_invariants(&kb1, &kb2) {
            report.refute(r);
            return Ok((report, None));
        }
    }
    Ok((report, Some(kb1)))
}

/// Accepts a candidate only when the functor laws hold on it.
fn accept(iso: FunctorIso) -> Result<Option<(FunctorIso, u64)>> {
    let laws = build_description_iso(&iso)?;
    Ok(laws.passed().then_some((iso, laws.checked)))
}

/// Looks for a witness of logical automorphic equivalence for a fixed `φ`.
pub fn check_automorphic_equivalence(
    m1: &Arc<Model>,
    m2: &Arc<Model>,
    phi: &PhiAutomorphism,
    n_max: usize,
    depth: usize,
    bounds: &Bounds,
) -> Result<EquivReport> {
    let (mut report, kb1) = prepare(Mode::AutomorphicEquivalence, m1, m2, n_max, depth, bounds)?;
    let Some(kb1) = kb1 else {
        return Ok(report);
    };
    let left = kb1.description();
    let setup = Setup::new(left, m2, phi, depth, bounds)?;
    let mut found = coherent_iso(setup, bounds)?;
    if found.is_none() {
        found = searched_iso(Setup::new(left, m2, phi, depth, bounds)?, bounds.search_budget)?;
    }
    if let Some(iso) = found {
        match accept(iso)? {
            Some((iso, laws)) if report.exact => report.witnessed(iso, laws, None),
            Some(_) => report
                .notes
                .push("witness found over partial lattices; not reported".to_string()),
            None => report
                .notes
                .push("candidate witness failed the functor laws".to_string()),
        }
    }
    Ok(report)
}

/// Bounded, tri-state decision of informational equivalence: invariants
/// may refute, a model isomorphism or a functor isomorphism in the
/// supported class may witness, and otherwise the verdict is unknown.
pub fn check_informational_equivalence(
    m1: &Arc<Model>,
    m2: &Arc<Model>,
    n_max: usize,
    depth: usize,
    bounds: &Bounds,
) -> Result<EquivReport> {
    let (mut report, kb1) = prepare(Mode::Informational, m1, m2, n_max, depth, bounds)?;
    let Some(kb1) = kb1 else {
        return Ok(report);
    };
    if !report.exact {
        report
            .notes
            .push("some clone was capped; no verdict beyond UNKNOWN".to_string());
        return Ok(report);
    }
    let left = kb1.description();
    let identity = PhiAutomorphism::identity();
    if let Some(h) = model_isomorphisms(m1, m2)?.first() {
        let setup = Setup::new(left, m2, &identity, depth, bounds)?;
        if let Some((iso, laws)) = transported_iso(setup, h)?.map(accept).transpose()?.flatten() {
            report.witnessed(iso, laws, Some(h.describe(m1, m2)));
            return Ok(report);
        }
    }
    let phis = enumerate_phis(m1.signature(), n_max, PHI_LIMIT);
    let coherent = par::find_first(bounds.exec, &phis, |phi| {
        let attempt = || -> Result<Option<(FunctorIso, u64)>> {
            let setup = Setup::new(left, m2, phi, depth, bounds)?;
            coherent_iso(setup, bounds)?
                .map(accept)
                .transpose()
                .map(Option::flatten)
        };
        attempt().transpose()
    });
    if let Some((_, found)) = coherent {
        let (iso, laws) = found?;
        report.witnessed(iso, laws, None);
        return Ok(report);
    }
    let relation_phis: Vec<PhiAutomorphism> = phis.into_iter().filter(|p| p.fixes_relations()).collect();
    let searched = par::find_first(bounds.exec, &relation_phis, |phi| {
        let attempt = || -> Result<Option<(FunctorIso, u64)>> {
            let setup = Setup::new(left, m2, phi, depth, bounds)?;
            searched_iso(setup, bounds.search_budget)?
                .map(accept)
                .transpose()
                .map(Option::flatten)
        };
        attempt().transpose()
    });
    if let Some((_, found)) = searched {
        let (iso, laws) = found?;
        report.witnessed(iso, laws, None);
    }
    Ok(report)
}
