//! Classification drivers: canonical tensor decompositions of quasifinite
//! highest/lowest-weight data, and shape profiles of sampled weight tables.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::algebra::{
    ideal_closure, quotient_algebra, Algebra, AlgebraElement, AlgebraKind, Ideal, LocalFactor, Quotient,
};
use crate::error::{Error, Result};
use crate::evalmod::{weight_multiplicities, IntSeriesSpec, ModuleHandle, Multiplicity};
use crate::poly::Poly;
use crate::scalar::Scalar;
use crate::verma::{check_quasifinite, largest_vanishing_ideal, split_phi, Functional, QuasifiniteStatus};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    Highest,
    Lowest,
}

#[derive(Debug, Clone)]
pub enum Descriptor {
    Functional { phi: Functional, orientation: Orientation, bound: usize, assume_exact: bool },
    IntSeries { alg: Arc<Algebra>, spec: IntSeriesSpec, point: Scalar },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    IntSeriesSinglePoint,
    HwTensorOfGeneralizedEvals,
    LwTensorOfGeneralizedEvals,
    NotQuasifinite,
    UndeterminedAtBound,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::IntSeriesSinglePoint => "int_series_single_point",
            Verdict::HwTensorOfGeneralizedEvals => "hw_tensor_of_generalized_evals",
            Verdict::LwTensorOfGeneralizedEvals => "lw_tensor_of_generalized_evals",
            Verdict::NotQuasifinite => "not_quasifinite",
            Verdict::UndeterminedAtBound => "undetermined_at_bound",
        }
    }
}

#[derive(Debug, Clone)]
pub enum ComponentData {
    /// Functional on the local algebra `Q[t]/((t - point)^order)`.
    Local(Functional),
    IntSeries { a: Scalar, b: Scalar },
}

#[derive(Debug, Clone)]
pub struct Component {
    /// `None` for the one-point algebra `Q`.
    pub point: Option<Scalar>,
    pub order: u32,
    pub data: ComponentData,
    /// The component as a functional on the reduced algebra `B = A/J`
    /// (`φ̄` twisted by the idempotent); these sum to `φ̄`.
    pub on_reduced: Option<Functional>,
    pub idempotent: Option<AlgebraElement>,
}

#[derive(Debug, Clone)]
pub struct ClassificationRecord {
    pub input: String,
    pub verdict: Verdict,
    pub components: Vec<Component>,
    /// Ideal `J ⊆ A` through which the (highest-weight form of the) functional factors.
    pub witness: Option<Ideal>,
    /// Reduced algebra `A/J` and its projection.
    pub reduced: Option<Quotient>,
    /// Least `N` with `rad(J)^N ⊆ J`.
    pub radical_power: Option<u32>,
    pub notes: Vec<String>,
}

pub fn classify_module(desc: &Descriptor) -> Result<ClassificationRecord> {
    match desc {
        Descriptor::IntSeries { alg, spec, point } => {
            ModuleHandle::int_series_eval(alg, spec.clone(), point.clone())?;
            Ok(ClassificationRecord {
                input: format!("int_series(a={}, b={}) at t={} over {}", spec.a, spec.b, point, alg.describe()),
                verdict: Verdict::IntSeriesSinglePoint,
                components: vec![Component {
                    point: Some(point.clone()),
                    order: 1,
                    data: ComponentData::IntSeries { a: spec.a.clone(), b: spec.b.clone() },
                    on_reduced: None,
                    idempotent: None,
                }],
                witness: None,
                reduced: None,
                radical_power: Some(1),
                notes: vec![format!("exponent window [{}, {}]", spec.window.0, spec.window.1)],
            })
        }
        Descriptor::Functional { phi, orientation, bound, assume_exact } => {
            classify_functional(phi, *orientation, *bound, *assume_exact)
        }
    }
}

fn classify_functional(
    phi: &Functional,
    orientation: Orientation,
    bound: usize,
    assume_exact: bool,
) -> Result<ClassificationRecord> {
    let alg = phi.algebra();
    let (hw, verdict_ok) = match orientation {
        Orientation::Highest => (phi.clone(), Verdict::HwTensorOfGeneralizedEvals),
        Orientation::Lowest => (phi.involution(), Verdict::LwTensorOfGeneralizedEvals),
    };
    let mut notes = vec![format!("algebra {}; basis order: {}", alg.describe(), alg.basis_order())];
    if orientation == Orientation::Lowest {
        notes.push("lowest-weight input: classified through d_n -> -d_(-n), c -> -c; components are mapped back".into());
    }
    let input = format!(
        "{} functional over {}",
        match orientation {
            Orientation::Highest => "highest-weight",
            Orientation::Lowest => "lowest-weight",
        },
        alg.describe()
    );
    let undetermined = |verdict, notes| ClassificationRecord {
        input: input.clone(),
        verdict,
        components: vec![],
        witness: None,
        reduced: None,
        radical_power: None,
        notes,
    };

    let qf = check_quasifinite(&hw, bound, assume_exact);
    notes.extend(qf.notes.iter().cloned());
    if qf.status != QuasifiniteStatus::Certified {
        let verdict = if assume_exact && qf.candidate.is_none() {
            notes.push("declared exact and no recurrence exists on the window".into());
            Verdict::NotQuasifinite
        } else {
            Verdict::UndeterminedAtBound
        };
        return Ok(undetermined(verdict, notes));
    }

    if alg.dim() == 1 {
        let data = match orientation {
            Orientation::Highest => hw.clone(),
            Orientation::Lowest => hw.involution(),
        };
        return Ok(ClassificationRecord {
            input,
            verdict: verdict_ok,
            components: vec![Component {
                point: None,
                order: 1,
                data: ComponentData::Local(data),
                on_reduced: None,
                idempotent: None,
            }],
            witness: Some(Ideal::zero(alg)),
            reduced: None,
            radical_power: Some(1),
            notes,
        });
    }
    if !alg.has_monomial_basis() {
        return Err(Error::UnsupportedKind(
            "classification needs a presentation Q[t]/(p) or a polynomial/Laurent window".into(),
        ));
    }

    let g = if alg.is_finite() {
        largest_vanishing_ideal(&hw)?.generator().expect("monomial-basis ideal")
    } else {
        qf.witness.as_ref().and_then(|w| w.generator()).expect("certified windowed witness")
    };
    let g = match alg.kind() {
        // t is a unit in a Laurent algebra
        AlgebraKind::Laurent => g.split_t_power().1,
        _ => g,
    }
    .monic();

    if g.degree() == Some(0) {
        notes.push("functional vanishes identically: the one-dimensional trivial module".into());
        return Ok(ClassificationRecord {
            input,
            verdict: verdict_ok,
            components: vec![],
            witness: Some(Ideal::whole(alg)),
            reduced: None,
            radical_power: Some(0),
            notes,
        });
    }

    let (roots, rest) = g.rational_roots();
    if rest.degree().unwrap_or(0) > 0 {
        return Err(Error::UnsupportedKind(format!(
            "support factor {rest} has no rational roots; only rational points are handled"
        )));
    }
    let witness = if alg.is_finite() {
        ideal_closure(&[AlgebraElement::from_poly(alg, &g)?])?
    } else {
        Ideal::principal(alg, &g)?
    };
    let q = quotient_algebra(alg, &witness)?;
    let phi_bar = hw.descend(&q.projection)?;
    let mut components = Vec::new();
    for (local, part) in split_phi(&phi_bar)? {
        let local_alg = Algebra::product_local(vec![LocalFactor { point: local.point.clone(), order: local.order }])?;
        let mut d0 = Vec::new();
        let mut c = Vec::new();
        for j in 0..local.order as usize {
            let tj = AlgebraElement::from_poly(&q.algebra, &Poly::monomial(j, Scalar::from_integer(1.into())))?;
            d0.push(part.d0_value(&tj)?);
            c.push(part.c_value(&tj)?);
        }
        let mut restricted = Functional::new(&local_alg, d0, c)?;
        let mut on_reduced = part;
        if orientation == Orientation::Lowest {
            restricted = restricted.involution();
            on_reduced = on_reduced.involution();
        }
        components.push(Component {
            point: Some(local.point),
            order: local.order,
            data: ComponentData::Local(restricted),
            on_reduced: Some(on_reduced),
            idempotent: Some(local.idempotent),
        });
    }
    let radical_power = roots.iter().map(|(_, k)| *k).max();
    Ok(ClassificationRecord {
        input,
        verdict: verdict_ok,
        components,
        witness: Some(witness),
        reduced: Some(q),
        radical_power,
        notes,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shape {
    Bounded(u64),
    TruncatedAbove,
    TruncatedBelow,
    UnboundedBoth,
}

impl Shape {
    pub fn name(self) -> String {
        match self {
            Shape::Bounded(n) => format!("bounded({n})"),
            Shape::TruncatedAbove => "truncated_above".into(),
            Shape::TruncatedBelow => "truncated_below".into(),
            Shape::UnboundedBoth => "unbounded_both".into(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct TrichotomyProfile {
    pub base: Scalar,
    pub window: (i64, i64),
    pub samples: BTreeMap<i64, Multiplicity>,
    pub shape: Shape,
    /// Some sample depends on a finite basis or exponent window.
    pub window_truncated: bool,
}

/// Shape of the weight table on `window` (offsets from the base weight).
/// The window should reach past both ends of the expected support, e.g.
/// above 0 for highest-weight modules.
pub fn trichotomy_profile(handle: &ModuleHandle, window: (i64, i64)) -> Result<TrichotomyProfile> {
    let table = weight_multiplicities(handle, window)?;
    let shape = shape_of(&table.entries, window);
    Ok(TrichotomyProfile {
        base: table.base.clone(),
        window,
        samples: table.entries,
        shape,
        window_truncated: table.truncated,
    })
}

fn shape_of(samples: &BTreeMap<i64, Multiplicity>, (lo, hi): (i64, i64)) -> Shape {
    let nonzero: Vec<i64> = samples.iter().filter(|(_, m)| m.value() > 0).map(|(o, _)| *o).collect();
    let (Some(&bot), Some(&top)) = (nonzero.first(), nonzero.last()) else {
        return Shape::Bounded(0);
    };
    let max = samples.values().map(|m| m.value()).max().unwrap_or(0);
    match (top < hi, bot > lo) {
        (true, false) => Shape::TruncatedAbove,
        (false, true) => Shape::TruncatedBelow,
        (true, true) => Shape::Bounded(max),
        (false, false) => {
            let at = |o| samples.get(&o).map_or(0, |m: &Multiplicity| m.value());
            let interior = samples
                .iter()
                .filter(|(o, _)| **o != lo && **o != hi)
                .map(|(_, m)| m.value())
                .max()
                .unwrap_or(0);
            if hi - lo >= 2 && at(lo) > interior && at(hi) > interior {
                Shape::UnboundedBoth
            } else {
                Shape::Bounded(max)
            }
        }
    }
}
