use std::fmt;

use super::divisor::Divisor;
use super::map::CurveMap;
use super::GeomError;

/// (X, Y, Z) with X a disjoint union of `comps` copies of ℙ¹.
#[derive(Clone, PartialEq, Debug)]
pub struct ModulusTriple {
    pub comps: usize,
    pub y: Divisor,
    pub z: Divisor,
}

impl ModulusTriple {
    pub fn new(comps: usize, y: Divisor, z: Divisor) -> Result<Self, GeomError> {
        for d in [&y, &z] {
            if let Some(c) = d.max_comp() {
                if c >= comps {
                    return Err(GeomError::BadComponent(format!("place on component {} of {}", c, comps)));
                }
            }
        }
        if !y.disjoint(&z) {
            return Err(GeomError::SupportsOverlap);
        }
        Ok(ModulusTriple { comps, y, z })
    }

    pub fn p1(y: Divisor, z: Divisor) -> Result<Self, GeomError> {
        Self::new(1, y, z)
    }

    pub fn red(&self) -> Self {
        ModulusTriple { comps: self.comps, y: self.y.red(), z: self.z.red() }
    }

    pub fn with_z_red(&self) -> Self {
        ModulusTriple { comps: self.comps, y: self.y.clone(), z: self.z.red() }
    }

    pub fn with_y_red(&self) -> Self {
        ModulusTriple { comps: self.comps, y: self.y.red(), z: self.z.clone() }
    }

    /// (X, Z, Y)
    pub fn swap(&self) -> Self {
        ModulusTriple { comps: self.comps, y: self.z.clone(), z: self.y.clone() }
    }

    pub fn is_reduced(&self) -> bool {
        self.y.is_reduced() && self.z.is_reduced()
    }

    /// Single-component piece, relabeled to component 0.
    pub fn component(&self, c: usize) -> ModulusTriple {
        ModulusTriple { comps: 1, y: self.y.on_comp(c).relabel(0), z: self.z.on_comp(c).relabel(0) }
    }

    /// Disjoint union: the components of `o` are appended after those of self.
    pub fn disjoint_union(&self, o: &ModulusTriple) -> ModulusTriple {
        let shift = |d: &Divisor| {
            let mut acc = Divisor::zero();
            for c in 0..o.comps {
                acc = acc.add(&d.on_comp(c).relabel(c + self.comps));
            }
            acc
        };
        ModulusTriple { comps: self.comps + o.comps, y: self.y.add(&shift(&o.y)), z: self.z.add(&shift(&o.z)) }
    }
}

impl fmt::Display for ModulusTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let x = if self.comps == 1 { "P1".to_string() } else { format!("{}xP1", self.comps) };
        write!(f, "({}, Y = {}, Z = {})", x, self.y, self.z)
    }
}

/// Which divisor inequality of a morphism condition failed.
#[derive(Clone, Debug, PartialEq)]
pub struct Violation {
    pub condition: u8,
    pub inequality: &'static str,
}

fn check(f: &CurveMap, src: &ModulusTriple, dst: &ModulusTriple) -> Result<(), GeomError> {
    if f.src_comps != src.comps || f.dst_comps != dst.comps {
        return Err(GeomError::BadComponent("map and triples disagree on components".into()));
    }
    Ok(())
}

/// Conditions for a morphism of the category with Y contravariant-bounded and Z pole-bounded.
pub fn bar_violations(f: &CurveMap, src: &ModulusTriple, dst: &ModulusTriple) -> Result<Vec<Violation>, GeomError> {
    check(f, src, dst)?;
    let mut out = Vec::new();
    if !src.y.leq(&f.pullback(&dst.y)) {
        out.push(Violation { condition: 1, inequality: "Y <= f*Y'" });
    }
    let zn = dst.z.checked_sub(&dst.z.red()).expect("Z' >= Z'_red");
    let lhs = src.z.checked_sub(&src.z.red()).expect("Z >= Z_red");
    if !f.pullback(&zn).leq(&lhs) {
        out.push(Violation { condition: 2, inequality: "Z - Z_red >= f*(Z' - Z'_red)" });
    }
    if !f.pullback(&dst.z).red().leq(&src.z.red()) {
        out.push(Violation { condition: 3, inequality: "Z_red >= (f*Z')_red" });
    }
    Ok(out)
}

/// The mirror conditions with the roles of Y and Z exchanged.
pub fn under_violations(f: &CurveMap, src: &ModulusTriple, dst: &ModulusTriple) -> Result<Vec<Violation>, GeomError> {
    check(f, src, dst)?;
    let mut out = Vec::new();
    let yn = dst.y.checked_sub(&dst.y.red()).expect("Y' >= Y'_red");
    let lhs = src.y.checked_sub(&src.y.red()).expect("Y >= Y_red");
    if !f.pullback(&yn).leq(&lhs) {
        out.push(Violation { condition: 1, inequality: "Y - Y_red >= f*(Y' - Y'_red)" });
    }
    if !f.pullback(&dst.y).red().leq(&src.y.red()) {
        out.push(Violation { condition: 2, inequality: "Y_red >= (f*Y')_red" });
    }
    if !src.z.leq(&f.pullback(&dst.z)) {
        out.push(Violation { condition: 3, inequality: "Z <= f*Z'" });
    }
    Ok(out)
}

pub fn is_morphism_bar(f: &CurveMap, src: &ModulusTriple, dst: &ModulusTriple) -> bool {
    bar_violations(f, src, dst).map_or(false, |v| v.is_empty())
}

pub fn is_morphism_under(f: &CurveMap, src: &ModulusTriple, dst: &ModulusTriple) -> bool {
    under_violations(f, src, dst).map_or(false, |v| v.is_empty())
}
