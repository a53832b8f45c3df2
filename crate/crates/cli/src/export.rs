//! CSV tables of the family closed forms and the Platonic solids.

use anyhow::Result;
use hyperstate::entanglement::{
    dicke_gamma, family_closed_form, node_entanglement, FamilyClosedForm,
};
use hyperstate::families::{platonic, FamilySpec, PlatonicMode, Solid};

use crate::io::{csv_string, fmt6};

/// Largest N in the comparison table.
pub const COMPARISON_MAX_N: usize = 64;
/// Orthoplex sizes m in the polytope table.
pub const POLYTOPE_M: std::ops::RangeInclusive<usize> = 3..=31;
/// N range of the tangle curve.
pub const FIGZ_N: std::ops::RangeInclusive<usize> = 3..=20;

/// One row per Platonic edge state, ordered by vertex count: the largest pair
/// concurrence of a vertex and its entanglement ratio.
pub fn table1() -> Result<String> {
    let mut rows = Vec::new();
    for solid in Solid::ALL {
        let g = platonic(solid, PlatonicMode::Edges)?;
        let node = node_entanglement(&g, 0)?;
        let c12 = node
            .pairwise
            .iter()
            .map(|r| r.concurrence)
            .fold(0.0, f64::max);
        rows.push(vec![
            solid.name().to_string(),
            g.n().to_string(),
            fmt6(c12),
            fmt6(node.gamma),
        ]);
    }
    csv_string(&["solid", "n", "c12", "gamma"], &rows)
}

fn opt(x: Option<f64>) -> String {
    x.map(fmt6).unwrap_or_default()
}

/// A honeycomb torus with `n` vertices, if the brick-wall cut allows one.
fn hex_cut(n: usize) -> Option<(usize, usize)> {
    (6..=n)
        .step_by(2)
        .find(|&r| n.is_multiple_of(r) && (n / r).is_multiple_of(2) && n / r >= 4)
        .map(|r| (r, n / r))
}

fn gamma_of(spec: FamilySpec) -> Result<f64> {
    Ok(family_closed_form(&spec)?.gamma)
}

/// Entanglement ratio per family against the party count. Cells are empty
/// where the family has no member of that size.
pub fn fig_comparison() -> Result<String> {
    let mut rows = Vec::new();
    for n in 3..=COMPARISON_MAX_N {
        let dicke = Some(dicke_gamma(n, 2)?);
        let orthoplex = match n % 2 == 0 && n >= 6 {
            true => Some(gamma_of(FamilySpec::Orthoplex { m: n / 2, k: 2 })?),
            false => None,
        };
        let hypercube = match n.is_power_of_two() && n >= 4 {
            true => Some(gamma_of(FamilySpec::Hypercube {
                m: n.trailing_zeros() as usize,
            })?),
            false => None,
        };
        let cycle = Some(gamma_of(FamilySpec::Cycle { n })?);
        let hexagonal = match hex_cut(n) {
            Some((rows, cols)) => Some(gamma_of(FamilySpec::HexTorus { rows, cols })?),
            None => None,
        };
        let platonic_gamma = match Solid::ALL.into_iter().find(|s| s.vertex_count() == n) {
            Some(solid) => {
                Some(node_entanglement(&platonic(solid, PlatonicMode::Edges)?, 0)?.gamma)
            }
            None => None,
        };
        rows.push(vec![
            n.to_string(),
            opt(dicke),
            opt(orthoplex),
            opt(hypercube),
            opt(cycle),
            opt(hexagonal),
            opt(platonic_gamma),
        ]);
    }
    csv_string(
        &[
            "n",
            "dicke",
            "orthoplex",
            "hypercube",
            "cycle",
            "hexagonal",
            "platonic",
        ],
        &rows,
    )
}

/// Share of the ratio carried by pairs at the given distance.
pub fn distance_share(form: &FamilyClosedForm, distance: usize) -> f64 {
    let total = form.c_v_rest * form.c_v_rest;
    form.classes
        .iter()
        .filter(|c| c.distance == distance)
        .map(|c| c.count as f64 * c.concurrence * c.concurrence / total)
        .sum()
}

/// Orthoplex ratio split into its distance-1 and distance-2 parts.
pub fn fig_polytope() -> Result<String> {
    let mut rows = Vec::new();
    for m in POLYTOPE_M {
        let form = family_closed_form(&FamilySpec::Orthoplex { m, k: 2 })?;
        rows.push(vec![
            (2 * m).to_string(),
            fmt6(form.gamma),
            fmt6(distance_share(&form, 1)),
            fmt6(distance_share(&form, 2)),
        ]);
    }
    csv_string(&["n", "gamma", "distance1", "distance2"], &rows)
}

/// Squared generalized concurrence of a vertex in a regular 2-uniform state.
pub fn fig_figz() -> Result<String> {
    let mut rows = Vec::new();
    for n in FIGZ_N {
        let form = family_closed_form(&FamilySpec::Dicke { n, k: 2 })?;
        rows.push(vec![n.to_string(), fmt6(form.c_v_rest * form.c_v_rest)]);
    }
    csv_string(&["n", "c_v_rest_sq"], &rows)
}
