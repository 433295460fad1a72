//! Class lists of the tilting modules attached to a consistent dimer model
//! and their classification (steady / semi-steady / neither).
//!
//! For a base vertex `i`, the module is the direct sum over vertices `j` of
//! the divisorial ideals labeled by evaluating one path from `i` to `j`
//! against the cyclically ordered extremal matchings. All membership tests
//! happen at the level of divisor classes: summands are rank one and
//! pairwise non-isomorphic, so additive closure reduces to class equality.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::graph::DimerModel;
use crate::lattice::GroupElement;
use crate::matchings::{pm_polygon, MatchingError, PerfectMatching};
use crate::quiver::{dualize, evaluate_pm, Quiver, QuiverPath};
use crate::toric::{DivClass, ToricData};
use crate::zigzag::is_consistent;

#[derive(Debug, Error)]
pub enum NccrError {
    #[error("model is not consistent: {0}")]
    InconsistentModel(String),
    #[error("matching polygon: {0}")]
    Matching(#[from] MatchingError),
    #[error("theorem cross-check failed: {0}")]
    CrossCheckFailure(String),
}

/// The classes `[T_ij]` for a fixed base vertex `i`, indexed by `j`.
#[derive(Debug, Clone)]
pub struct ModuleList {
    pub td: ToricData,
    pub base: usize,
    pub classes: Vec<DivClass>,
}

impl ModuleList {
    pub fn from_classes(td: ToricData, base: usize, classes: Vec<DivClass>) -> ModuleList {
        ModuleList { td, base, classes }
    }

    pub fn class_set(&self) -> BTreeSet<GroupElement> {
        self.classes.iter().map(|c| c.coords.clone()).collect()
    }

    pub fn dual_class_set(&self) -> BTreeSet<GroupElement> {
        self.classes
            .iter()
            .map(|c| self.td.dual_class(c).coords)
            .collect()
    }
}

/// Shared computation for the per-vertex tilting modules of one model.
pub struct NccrContext {
    pub quiver: Quiver,
    pub extremals: Vec<PerfectMatching>,
    pub td: ToricData,
}

impl NccrContext {
    pub fn new(model: &DimerModel) -> Result<NccrContext, NccrError> {
        let consistency = is_consistent(model);
        if !consistency.holds {
            return Err(NccrError::InconsistentModel(
                consistency.violation.unwrap_or_default(),
            ));
        }
        let poly = pm_polygon(model, None)?;
        let extremals: Vec<PerfectMatching> = poly
            .extremal()?
            .into_iter()
            .map(|(_, m)| m.clone())
            .collect();
        let td = ToricData::from_polygon(poly.hull.clone());
        let (quiver, _) = dualize(model);
        Ok(NccrContext {
            quiver,
            extremals,
            td,
        })
    }

    /// Label vector of a path: its evaluation against each extremal
    /// matching, in cyclic order.
    pub fn label_of_path(&self, path: &QuiverPath) -> Vec<i64> {
        self.extremals
            .iter()
            .map(|p| evaluate_pm(&self.quiver, path, p))
            .collect()
    }

    pub fn tilting_at(&self, base: usize) -> ModuleList {
        let classes: Vec<DivClass> = (0..self.quiver.vertex_count)
            .map(|j| {
                let path = self.quiver.find_path(base, j);
                self.td
                    .class_of(&self.label_of_path(&path))
                    .expect("label length matches ray count")
            })
            .collect();
        debug_assert!(classes[base].coords.is_identity());
        ModuleList {
            td: self.td.clone(),
            base,
            classes,
        }
    }
}

pub fn tilting_module(model: &DimerModel, base: usize) -> Result<ModuleList, NccrError> {
    Ok(NccrContext::new(model)?.tilting_at(base))
}

/// All summand classes pairwise distinct.
pub fn is_basic(ml: &ModuleList) -> bool {
    ml.class_set().len() == ml.classes.len()
}

/// Steady: a generator whose endomorphism ring stays inside its own
/// additive closure; at class level, the class set is closed under
/// subtracting any member.
pub fn is_steady(ml: &ModuleList) -> bool {
    let s = ml.class_set();
    let g = &ml.td.class_group;
    if !s.contains(&g.identity()) {
        return false;
    }
    ml.classes.iter().all(|ci| {
        ml.classes
            .iter()
            .all(|cj| s.contains(&g.sub(&cj.coords, &ci.coords)))
    })
}

/// Outcome of the semi-steady test, with the index sets of summands whose
/// shifted class set lands in the module itself (`plain`) or in its dual
/// (`dual`).
#[derive(Debug, Clone)]
pub struct SemiSteady {
    pub holds: bool,
    pub plain: Vec<usize>,
    pub dual: Vec<usize>,
}

pub fn is_semi_steady(ml: &ModuleList) -> SemiSteady {
    let s = ml.class_set();
    let s_star = ml.dual_class_set();
    let g = &ml.td.class_group;
    let mut plain = Vec::new();
    let mut dual = Vec::new();
    let mut holds = s.contains(&g.identity());
    for (i, ci) in ml.classes.iter().enumerate() {
        let shifts: BTreeSet<GroupElement> = ml
            .classes
            .iter()
            .map(|cj| g.sub(&cj.coords, &ci.coords))
            .collect();
        let in_plain = shifts.is_subset(&s);
        let in_dual = shifts.is_subset(&s_star);
        if in_plain {
            plain.push(i);
        }
        if in_dual {
            dual.push(i);
        }
        if !in_plain && !in_dual {
            holds = false;
        }
    }
    SemiSteady { holds, plain, dual }
}

/// Whether the additive closure of the endomorphism ring equals that of
/// the module plus its dual: all pairwise class differences lie in
/// `S ∪ S*`, and conversely.
pub fn end_add_equals(ml: &ModuleList) -> bool {
    let s = ml.class_set();
    let s_star = ml.dual_class_set();
    let g = &ml.td.class_group;
    let mut diffs = BTreeSet::new();
    for ci in &ml.classes {
        for cj in &ml.classes {
            diffs.insert(g.sub(&cj.coords, &ci.coords));
        }
    }
    let union: BTreeSet<GroupElement> = s.union(&s_star).cloned().collect();
    diffs == union
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Steady,
    SemiSteadyNotSteady,
    Neither,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Verdict::Steady => write!(f, "steady"),
            Verdict::SemiSteadyNotSteady => write!(f, "semi-steady (not steady)"),
            Verdict::Neither => write!(f, "neither"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Classification {
    pub verdict: Verdict,
    pub generator: bool,
    pub basic: bool,
    pub splitting: bool,
    pub steady: bool,
    pub semi_steady: bool,
    /// Lemma-style partition of the base-vertex list when semi-steady.
    pub plain: Vec<usize>,
    pub dual: Vec<usize>,
    pub base_list: ModuleList,
    pub cross_checks: Vec<String>,
}

/// Classifies the tilting module of a consistent model, verifying the
/// base-vertex independence of the verdict and the structural consequences
/// of a semi-steady-not-steady outcome.
pub fn classify(model: &DimerModel) -> Result<Classification, NccrError> {
    let ctx = NccrContext::new(model)?;
    let n = ctx.quiver.vertex_count;
    let base_list = ctx.tilting_at(0);
    let basic = is_basic(&base_list);
    let steady = is_steady(&base_list);
    let semi = is_semi_steady(&base_list);
    let verdict = if steady {
        Verdict::Steady
    } else if semi.holds {
        Verdict::SemiSteadyNotSteady
    } else {
        Verdict::Neither
    };

    let mut cross_checks = Vec::new();

    let base_set = base_list.class_set();
    let base_dual = base_list.dual_class_set();
    for i in 1..n {
        let ml = ctx.tilting_at(i);
        let s = is_steady(&ml);
        let ss = is_semi_steady(&ml);
        if s != steady || ss.holds != semi.holds || is_basic(&ml) != basic {
            return Err(NccrError::CrossCheckFailure(format!(
                "verdict differs at base vertex {i}"
            )));
        }
        if semi.holds {
            let set = ml.class_set();
            if set != base_set && set != base_dual {
                return Err(NccrError::CrossCheckFailure(format!(
                    "class list at vertex {i} is neither the base list nor its dual"
                )));
            }
        }
    }
    if n > 1 && semi.holds {
        cross_checks.push("per-vertex lists agree with the base list or its dual".into());
    }

    if verdict == Verdict::SemiSteadyNotSteady {
        if semi.plain.len() != semi.dual.len() {
            return Err(NccrError::CrossCheckFailure(format!(
                "partition sizes differ: {} vs {}",
                semi.plain.len(),
                semi.dual.len()
            )));
        }
        if n % 2 != 0 {
            return Err(NccrError::CrossCheckFailure(format!(
                "semi-steady-not-steady with an odd number of vertices ({n})"
            )));
        }
        let g = &ctx.td.class_group;
        if g.free_rank != 1 {
            return Err(NccrError::CrossCheckFailure(format!(
                "class group free rank {} != 1",
                g.free_rank
            )));
        }
        let torsion_order: i64 = g.torsion.iter().product();
        if torsion_order != (n as i64) / 2 {
            return Err(NccrError::CrossCheckFailure(format!(
                "torsion order {torsion_order} != half the vertex count {}",
                n / 2
            )));
        }
        cross_checks.push(format!(
            "class group Z x A with |A| = {torsion_order} = {n}/2"
        ));
        let iso = crate::zigzag::is_isoradial(model);
        if iso.holds {
            if !ctx.td.polygon.is_parallelogram() {
                return Err(NccrError::CrossCheckFailure(
                    "isoradial semi-steady-not-steady model with non-parallelogram diagram"
                        .into(),
                ));
            }
            cross_checks.push("toric diagram is a parallelogram".into());
        }
    }

    Ok(Classification {
        verdict,
        generator: true,
        basic,
        splitting: true,
        steady,
        semi_steady: semi.holds,
        plain: semi.plain,
        dual: semi.dual,
        base_list,
        cross_checks,
    })
}

/// The tilting classes of the color-swapped model at the corresponding
/// vertex are the duals of the original classes.
pub fn opposite_check(model: &DimerModel, base: usize) -> Result<bool, NccrError> {
    let ctx = NccrContext::new(model)?;
    let ml = ctx.tilting_at(base);

    let swapped = model.color_swapped();
    let base_edges = model.faces()[base].edge_set();
    let op_base = swapped
        .faces()
        .iter()
        .position(|f| f.edge_set() == base_edges)
        .expect("color swap preserves face boundaries");
    let op_ctx = NccrContext::new(&swapped)?;
    let op_ml = op_ctx.tilting_at(op_base);

    // Ray correspondence: the swapped polygon is the point reflection of
    // the original up to translation; match vertex cycles.
    let vs = ml.td.polygon.vertices();
    let ws = op_ml.td.polygon.vertices();
    if vs.len() != ws.len() {
        return Ok(false);
    }
    let n = vs.len();
    // Point reflection preserves orientation, so both cycles run
    // counterclockwise: sigma(k) = (j + k) mod n for some alignment j.
    let sigma_at = |j: usize, k: usize| (j + k) % n;
    let mut alignment: Option<usize> = None;
    for j in 0..n {
        let t = ws[0] + vs[j];
        if (0..n).all(|k| ws[k] + vs[sigma_at(j, k)] == t) {
            alignment = Some(j);
            break;
        }
    }
    let Some(j) = alignment else {
        return Err(NccrError::CrossCheckFailure(
            "swapped polygon is not a reflected translate".into(),
        ));
    };

    let mapped: BTreeSet<GroupElement> = op_ml
        .classes
        .iter()
        .map(|c| {
            let mut u = vec![0i64; n];
            for (k, &val) in c.repr.iter().enumerate() {
                u[sigma_at(j, k)] = val;
            }
            ml.td.class_of(&u).expect("length matches").coords
        })
        .collect();
    Ok(mapped == ml.dual_class_set())
}
