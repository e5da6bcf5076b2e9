//! Scenario sets for the point-source tables and the default volume sources.

use std::f64::consts::PI;

use crate::bandwidth::{Scenario, SourceSpec};
use crate::error::{Error, Result};
use crate::helmholtz::{Cell, VolumeSource};
use crate::multiplier::helmholtz_bound_exponents;
use crate::trace::CircleSpec;

pub const K: f64 = 2.0 * PI;
pub const POINT_M_MAX: usize = 100;
pub const PLANE_M_MAX: usize = 50;
pub const SPACE_M_MAX: usize = 30;

fn axis_point(n: usize, dist: f64) -> Vec<f64> {
    let mut y = vec![0.0; n];
    y[0] = dist;
    y
}

/// (n, predicted, measured) rows of a reference table.
pub fn expected(which: u32) -> Result<Vec<(usize, i64, i64)>> {
    Ok(match which {
        1 => vec![(2, 29, 29), (3, 30, 30), (4, 30, 29), (5, 30, 29)],
        2 => vec![(6, 30, 29), (7, 30, 29), (8, 30, 28), (9, 30, 28)],
        3 => (2..=5).map(|n| (n, 31, 29)).collect(),
        _ => return Err(Error::Domain(format!("no table {which}"))),
    })
}

/// Point-source scenario set 1, 2 or 3. The circle lies in the
/// (x_1, x_2) plane; the source sits on the x_1 axis and is differentiated along x_1.
pub fn table(which: u32) -> Result<Vec<Scenario>> {
    let (radius, dist, nu) = match which {
        1 => (5.01, 5.0, 0),
        2 => (5.0, 10.0, 0),
        3 => (5.0, 10.0, 5),
        _ => return Err(Error::Domain(format!("no table {which}"))),
    };
    expected(which)?
        .into_iter()
        .map(|(n, _, _)| {
            Scenario::point(
                &format!("table{which}-n{n}"),
                n,
                K,
                radius,
                axis_point(n, dist),
                1,
                nu,
                POINT_M_MAX,
            )
        })
        .collect()
}

/// Two unit-amplitude squares inside {|x| ≤ 5}.
pub fn plane_source() -> VolumeSource {
    VolumeSource::new(
        2,
        vec![
            Cell::new(vec![-1.0, 1.0], vec![1.5, 1.5], 1.0),
            Cell::new(vec![2.5, -2.5], vec![1.0, 1.0], 1.0),
        ],
    )
    .expect("default plane source is valid")
}

/// Two boxes of opposite sign inside the unit ball, straddling the
/// (x_1, x_3) plane and displaced along x_1 away from the (x_2, x_3) plane.
pub fn space_source() -> VolumeSource {
    VolumeSource::new(
        3,
        vec![
            Cell::new(vec![0.5, 0.3, 0.3], vec![0.2, 0.15, 0.2], 1.0),
            Cell::new(vec![0.6, -0.3, 0.0], vec![0.2, 0.2, 0.2], -0.7),
        ],
    )
    .expect("default space source is valid")
}

/// Volume-source scenario on R = 5.01.
pub fn plane_scenario() -> Result<Scenario> {
    Ok(Scenario {
        name: "pcsource-2d".into(),
        n: 2,
        k: K,
        circle: CircleSpec::axes(2, 5.01, 0, 1, 256)?,
        source: SourceSpec::Volume { source: plane_source() },
        m_max: PLANE_M_MAX,
        d: helmholtz_bound_exponents(2, 0)?,
        bracket: Some(false),
    })
}

/// Volume-source scenarios on the circles in the (x_1,x_2), (x_1,x_3)
/// and (x_2,x_3) planes, R = 1.01.
pub fn space_scenarios() -> Result<Vec<Scenario>> {
    [(0, 1), (0, 2), (1, 2)]
        .iter()
        .enumerate()
        .map(|(i, &(a, b))| {
            Ok(Scenario {
                name: format!("pcsource-3d-c{}", i + 1),
                n: 3,
                k: K,
                circle: CircleSpec::axes(3, 1.01, a, b, 256)?,
                source: SourceSpec::Volume { source: space_source() },
                m_max: SPACE_M_MAX,
                d: helmholtz_bound_exponents(3, 0)?,
                bracket: Some(true),
            })
        })
        .collect()
}

pub fn pcsource(dim: usize) -> Result<Vec<Scenario>> {
    match dim {
        2 => Ok(vec![plane_scenario()?]),
        3 => space_scenarios(),
        _ => Err(Error::Domain(format!("no volume-source experiment in dimension {dim}"))),
    }
}
