//! A divide together with its dense samples, crossings and planar map.

use crate::crossings::{detect_crossings, Crossing};
use crate::divide::{Divide, Polyline};
use crate::error::Result;
use crate::planar::{build_planar_map, counts, Counts, PlanarMap};

#[derive(Clone, Debug)]
pub struct Analysis {
    pub divide: Divide,
    pub polylines: Vec<Polyline>,
    pub crossings: Vec<Crossing>,
    pub map: PlanarMap,
}

impl Analysis {
    pub fn new(divide: Divide) -> Result<Analysis> {
        let polylines = divide.polylines()?;
        let crossings = detect_crossings(&divide, &polylines)?;
        let map = build_planar_map(&divide, &polylines, &crossings)?;
        Ok(Analysis { divide, polylines, crossings, map })
    }

    pub fn counts(&self) -> Counts {
        counts(&self.map)
    }
}
