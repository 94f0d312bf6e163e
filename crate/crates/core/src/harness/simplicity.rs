//! One-sided simplicity probe: closes the span of a seed under bracketing
//! with window symbols and asks whether the whole window was reached.

use serde::Serialize;

use crate::algebra::{AlgebraSpec, BasisIdx, Element};
use crate::derivations::Echelon;
use crate::Error;

/// How far past the window intermediate brackets may wander.
const MARGIN: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum SimplicityOutcome {
    ReachedFullWindow { rounds: u32, dim: usize },
    /// Window symbols outside the computed span. Says nothing about simplicity.
    Inconclusive { missed: Vec<BasisIdx> },
}

fn inside(spec: &AlgebraSpec, e: &Element, k: u32, l: u32) -> bool {
    let bound = crate::rat::Rat::from(k + MARGIN);
    e.support().all(|b| {
        b.idx.level() <= l + MARGIN
            && spec
                .gamma()
                .coordinates(&b.alpha)
                .is_some_and(|c| c.iter().all(|x| crate::rat::Rat::from(x.clone()).abs() <= bound))
    })
}

/// Brackets the frontier with every window symbol for up to `depth` rounds,
/// keeping results whose support stays within the window widened by one.
pub fn simplicity_probe(
    spec: &AlgebraSpec,
    seed: &Element,
    k: u32,
    l: u32,
    depth: u32,
) -> Result<SimplicityOutcome, Error> {
    probe_with(spec, |u, v| spec.bracket(u, v), seed, k, l, depth)
}

pub(super) fn probe_with<F>(
    spec: &AlgebraSpec,
    bracket: F,
    seed: &Element,
    k: u32,
    l: u32,
    depth: u32,
) -> Result<SimplicityOutcome, Error>
where
    F: Fn(&Element, &Element) -> Element,
{
    let seed = spec.reduce(seed)?;
    if seed.is_zero() {
        return Err(Error::ZeroSeed);
    }
    let window = spec.enumerate_window(k, l);
    let targets: Vec<Element> = window.iter().cloned().map(Element::basis).collect();
    let mut span = Echelon::new();
    span.insert(&seed);
    let mut frontier = vec![seed];
    let missing = |span: &Echelon| -> Vec<BasisIdx> {
        window.iter().zip(&targets).filter(|(_, t)| !span.contains(t)).map(|(b, _)| b.clone()).collect()
    };
    for round in 1..=depth {
        let mut next = Vec::new();
        for f in &frontier {
            for t in &targets {
                let r = bracket(t, f);
                if !r.is_zero() && inside(spec, &r, k, l) && span.insert(&r) {
                    next.push(r);
                }
            }
        }
        if missing(&span).is_empty() {
            return Ok(SimplicityOutcome::ReachedFullWindow { rounds: round, dim: span.dim() });
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    Ok(SimplicityOutcome::Inconclusive { missed: missing(&span) })
}
