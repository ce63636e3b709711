//! Minimal 3D vector math used by contact search, surface areas and embeddings.

use serde::{Deserialize, Serialize};
use std::ops::{Add, Mul, Neg, Sub};

/// A point or direction in 3D space, in Angstroms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const ZERO: Vec3 = Vec3 { x: 0.0, y: 0.0, z: 0.0 };

    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Vec3 { x, y, z }
    }

    pub fn dot(self, other: Vec3) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn cross(self, other: Vec3) -> Vec3 {
        Vec3 {
            x: self.y * other.z - self.z * other.y,
            y: self.z * other.x - self.x * other.z,
            z: self.x * other.y - self.y * other.x,
        }
    }

    pub fn norm_squared(self) -> f64 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        self.norm_squared().sqrt()
    }

    pub fn distance_squared(self, other: Vec3) -> f64 {
        (self - other).norm_squared()
    }

    pub fn distance(self, other: Vec3) -> f64 {
        self.distance_squared(other).sqrt()
    }

    pub fn normalized(self) -> Vec3 {
        let n = self.norm();
        Vec3::new(self.x / n, self.y / n, self.z / n)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, s: f64) -> Vec3 {
        Vec3::new(self.x * s, self.y * s, self.z * s)
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}

/// A 3x3 rotation matrix in row-major order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rotation {
    pub rows: [[f64; 3]; 3],
}

impl Rotation {
    pub const IDENTITY: Rotation = Rotation {
        rows: [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
    };

    /// Rodrigues rotation about a unit axis by `angle` radians.
    pub fn from_axis_angle(axis: Vec3, angle: f64) -> Rotation {
        let u = axis.normalized();
        let (s, c) = angle.sin_cos();
        let t = 1.0 - c;
        Rotation {
            rows: [
                [c + u.x * u.x * t, u.x * u.y * t - u.z * s, u.x * u.z * t + u.y * s],
                [u.y * u.x * t + u.z * s, c + u.y * u.y * t, u.y * u.z * t - u.x * s],
                [u.z * u.x * t - u.y * s, u.z * u.y * t + u.x * s, c + u.z * u.z * t],
            ],
        }
    }

    pub fn apply(&self, v: Vec3) -> Vec3 {
        Vec3::new(
            self.rows[0][0] * v.x + self.rows[0][1] * v.y + self.rows[0][2] * v.z,
            self.rows[1][0] * v.x + self.rows[1][1] * v.y + self.rows[1][2] * v.z,
            self.rows[2][0] * v.x + self.rows[2][1] * v.y + self.rows[2][2] * v.z,
        )
    }
}

/// A rigid motion: rotation followed by translation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RigidMotion {
    pub rotation: Rotation,
    pub translation: Vec3,
}

impl RigidMotion {
    pub fn apply(&self, v: Vec3) -> Vec3 {
        self.rotation.apply(v) + self.translation
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rotation_preserves_distances() {
        let r = Rotation::from_axis_angle(Vec3::new(1.0, 2.0, -0.5), 1.234);
        let a = Vec3::new(1.0, -2.0, 3.0);
        let b = Vec3::new(-4.0, 0.5, 2.0);
        let d0 = a.distance(b);
        let d1 = r.apply(a).distance(r.apply(b));
        assert!((d0 - d1).abs() < 1e-12);
    }

    #[test]
    fn rotation_preserves_norm_and_orientation() {
        let r = Rotation::from_axis_angle(Vec3::new(0.0, 0.0, 1.0), std::f64::consts::FRAC_PI_2);
        let v = r.apply(Vec3::new(1.0, 0.0, 0.0));
        assert!((v.x - 0.0).abs() < 1e-12);
        assert!((v.y - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rigid_motion_preserves_distances() {
        let m = RigidMotion {
            rotation: Rotation::from_axis_angle(Vec3::new(1.0, 1.0, 1.0), 2.5),
            translation: Vec3::new(10.0, -3.0, 7.0),
        };
        let a = Vec3::new(0.1, 0.2, 0.3);
        let b = Vec3::new(5.0, -1.0, 2.0);
        assert!((a.distance(b) - m.apply(a).distance(m.apply(b))).abs() < 1e-12);
    }
}
