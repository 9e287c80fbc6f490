use serde::Deserialize;

use crate::AntennaError;

/// Arm of the cross on which an element sits. The dipole itself is
/// oriented perpendicular to its arm, so a Y-arm element is an X-directed
/// dipole and beams along +-Y.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Deserialize)]
pub enum Arm {
    X,
    Y,
}

impl Arm {
    /// Unit vector along the arm.
    pub fn axis(self) -> [f64; 3] {
        match self {
            Arm::X => [1.0, 0.0, 0.0],
            Arm::Y => [0.0, 1.0, 0.0],
        }
    }

    /// Unit vector along the dipole.
    pub fn dipole(self) -> [f64; 3] {
        match self {
            Arm::X => [0.0, 1.0, 0.0],
            Arm::Y => [1.0, 0.0, 0.0],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Driver,
    Parasitic,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Element {
    /// 1-based element number.
    pub index: usize,
    pub arm: Arm,
    /// Signed distance from the centre along the arm (m).
    pub offset: f64,
    /// Dipole length (m).
    pub length: f64,
    pub role: Role,
}

impl Element {
    pub fn position(&self) -> [f64; 3] {
        let a = self.arm.axis();
        [a[0] * self.offset, a[1] * self.offset, 0.0]
    }
}

/// Geometry used for the default layouts (m).
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Geometry {
    pub length: f64,
    /// Offsets of the parasitic ring closest to the driver.
    pub near: f64,
    pub far: f64,
    /// Optional third ring; `None` leaves it out.
    pub third: Option<f64>,
}

impl Default for Geometry {
    fn default() -> Self {
        Self {
            length: 25e-6,
            near: 25e-6,
            far: 40e-6,
            third: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AntennaLayout {
    pub elements: Vec<Element>,
}

impl AntennaLayout {
    /// Ten-element cross: elements 1-5 on the Y arm (driver, +near, +far,
    /// -near, -far), 6-10 the same on the X arm.
    pub fn cross() -> Self {
        Self::from_geometry(&Geometry::default()).expect("default geometry is valid")
    }

    /// The cross with a third parasitic ring at +-75 um appended as
    /// elements 11 (Y +), 12 (Y -), 13 (X +), 14 (X -).
    pub fn cross_with_third_ring() -> Self {
        Self::from_geometry(&Geometry {
            third: Some(75e-6),
            ..Geometry::default()
        })
        .expect("default geometry is valid")
    }

    pub fn from_geometry(g: &Geometry) -> Result<Self, AntennaError> {
        let mut elements = Vec::new();
        let mut push = |arm, offset, role| {
            elements.push(Element {
                index: elements.len() + 1,
                arm,
                offset,
                length: g.length,
                role,
            })
        };
        for arm in [Arm::Y, Arm::X] {
            push(arm, 0.0, Role::Driver);
            for off in [g.near, g.far, -g.near, -g.far] {
                push(arm, off, Role::Parasitic);
            }
        }
        if let Some(t) = g.third {
            for arm in [Arm::Y, Arm::X] {
                push(arm, t, Role::Parasitic);
                push(arm, -t, Role::Parasitic);
            }
        }
        let layout = Self { elements };
        layout.validate()?;
        Ok(layout)
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn element(&self, index: usize) -> Option<&Element> {
        self.elements.get(index.checked_sub(1)?)
    }

    /// The driver on `arm`.
    pub fn driver(&self, arm: Arm) -> Option<&Element> {
        self.elements
            .iter()
            .find(|e| e.arm == arm && e.role == Role::Driver)
    }

    /// Element on `arm` at `offset`, matched to 1 nm.
    pub fn at(&self, arm: Arm, offset: f64) -> Option<&Element> {
        self.elements
            .iter()
            .find(|e| e.arm == arm && (e.offset - offset).abs() < 1e-9)
    }

    pub fn validate(&self) -> Result<(), AntennaError> {
        let bad = |m: String| Err(AntennaError::InvalidConfig(m));
        for (i, e) in self.elements.iter().enumerate() {
            if e.index != i + 1 {
                return bad(format!("element {} listed at position {}", e.index, i + 1));
            }
            if !(e.length > 0.0 && e.length.is_finite() && e.offset.is_finite()) {
                return bad(format!("element {} has invalid geometry", e.index));
            }
        }
        let drivers: Vec<_> = self
            .elements
            .iter()
            .filter(|e| e.role == Role::Driver)
            .collect();
        if drivers.len() != 2 || drivers[0].arm == drivers[1].arm {
            return bad("layout needs exactly one driver per arm".into());
        }
        if drivers.iter().any(|d| d.offset != 0.0) {
            return bad("drivers must sit at the centre".into());
        }
        if self.element(1).map(|e| e.role) != Some(Role::Driver)
            || self.element(6).map(|e| e.role) != Some(Role::Driver)
        {
            return bad("drivers must be elements 1 and 6".into());
        }
        for (i, a) in self.elements.iter().enumerate() {
            for b in &self.elements[i + 1..] {
                if a.arm == b.arm && (a.offset - b.offset).abs() < 1e-9 {
                    return bad(format!(
                        "elements {} and {} share a position",
                        a.index, b.index
                    ));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cross_numbering() {
        let l = AntennaLayout::cross();
        assert_eq!(l.len(), 10);
        let e = |i| *l.element(i).unwrap();
        assert_eq!(
            (e(1).arm, e(1).offset, e(1).role),
            (Arm::Y, 0.0, Role::Driver)
        );
        assert_eq!((e(3).arm, e(3).offset), (Arm::Y, 40e-6));
        assert_eq!((e(4).arm, e(4).offset), (Arm::Y, -25e-6));
        assert_eq!((e(6).arm, e(6).role), (Arm::X, Role::Driver));
        assert_eq!((e(8).arm, e(8).offset), (Arm::X, 40e-6));
        assert_eq!((e(9).arm, e(9).offset), (Arm::X, -25e-6));
        assert_eq!(e(3).position(), [0.0, 40e-6, 0.0]);
        assert_eq!(e(8).position(), [40e-6, 0.0, 0.0]);
    }

    #[test]
    fn third_ring_appends_four() {
        let l = AntennaLayout::cross_with_third_ring();
        assert_eq!(l.len(), 14);
        assert_eq!(l.at(Arm::Y, 75e-6).unwrap().index, 11);
        assert_eq!(l.at(Arm::X, -75e-6).unwrap().index, 14);
    }

    #[test]
    fn rejects_duplicates_and_missing_drivers() {
        let mut l = AntennaLayout::cross();
        l.elements[2].offset = 25e-6;
        assert!(l.validate().is_err());
        let mut l = AntennaLayout::cross();
        l.elements[5].role = Role::Parasitic;
        assert!(l.validate().is_err());
    }
}
