use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Vec2 = nalgebra::Vector2<f64>;
pub type Vec3 = nalgebra::Vector3<f64>;

/// A point in the plane or in space. Serializes as a bare coordinate array.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Point {
    D2([f64; 2]),
    D3([f64; 3]),
}

impl Point {
    pub fn new2(x: f64, y: f64) -> Self {
        Point::D2([x, y])
    }

    pub fn new3(x: f64, y: f64, z: f64) -> Self {
        Point::D3([x, y, z])
    }

    pub fn from_slice(c: &[f64]) -> Result<Self> {
        let p = match c.len() {
            2 => Point::D2([c[0], c[1]]),
            3 => Point::D3([c[0], c[1], c[2]]),
            n => {
                return Err(Error::WrongDimension {
                    expected: 2,
                    got: n,
                })
            }
        };
        if c.iter().all(|v| v.is_finite()) {
            Ok(p)
        } else {
            Err(Error::InvalidSpec(format!("non-finite coordinates {c:?}")))
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Point::D2(_) => 2,
            Point::D3(_) => 3,
        }
    }

    pub fn coords(&self) -> &[f64] {
        match self {
            Point::D2(c) => c,
            Point::D3(c) => c,
        }
    }

    pub fn v2(&self) -> Result<Vec2> {
        match self {
            Point::D2(c) => Ok(Vec2::new(c[0], c[1])),
            Point::D3(_) => Err(Error::WrongDimension {
                expected: 2,
                got: 3,
            }),
        }
    }

    pub fn v3(&self) -> Result<Vec3> {
        match self {
            Point::D3(c) => Ok(Vec3::new(c[0], c[1], c[2])),
            Point::D2(_) => Err(Error::WrongDimension {
                expected: 3,
                got: 2,
            }),
        }
    }

    pub fn distance(&self, other: &Point) -> f64 {
        self.coords()
            .iter()
            .zip(other.coords())
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }

    pub fn norm(&self) -> f64 {
        self.coords().iter().map(|a| a * a).sum::<f64>().sqrt()
    }
}

impl From<Vec2> for Point {
    fn from(v: Vec2) -> Self {
        Point::D2([v.x, v.y])
    }
}

impl From<Vec3> for Point {
    fn from(v: Vec3) -> Self {
        Point::D3([v.x, v.y, v.z])
    }
}
