use std::collections::HashSet;
use std::f64::consts::PI;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::compose::CompositeDeformation;
use crate::error::{Error, Result};
use crate::mechanics::QuadratureDomain;
use crate::Point3;

const HEADER: &str = "id,x,y,z";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NodeRole {
    Reference,
    Deformed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NodeSource {
    Fem,
    Primitive,
    Experiment,
}

/// Labelled node positions, either reference (`oᵢ`) or deformed (`aᵢ`, `fᵢ`).
#[derive(Clone, Debug, PartialEq)]
pub struct NodeSet {
    pub ids: Vec<u64>,
    pub points: Vec<Point3>,
    pub role: NodeRole,
    pub source: NodeSource,
}

impl NodeSet {
    pub fn new(
        ids: Vec<u64>,
        points: Vec<Point3>,
        role: NodeRole,
        source: NodeSource,
    ) -> Result<Self> {
        if ids.len() != points.len() {
            return Err(Error::DimensionMismatch {
                expected: ids.len(),
                got: points.len(),
            });
        }
        let mut seen = HashSet::new();
        for (line, id) in ids.iter().enumerate() {
            if !seen.insert(*id) {
                return Err(Error::DuplicateId {
                    id: *id,
                    line: line + 2,
                });
            }
        }
        Ok(Self {
            ids,
            points,
            role,
            source,
        })
    }

    /// Ids `1..=n` for a plain point list.
    pub fn numbered(points: Vec<Point3>, role: NodeRole, source: NodeSource) -> Self {
        let ids = (1..=points.len() as u64).collect();
        Self {
            ids,
            points,
            role,
            source,
        }
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    /// Evaluates `comp` at every node, keeping the ids.
    pub fn deform(&self, comp: &CompositeDeformation) -> Result<NodeSet> {
        let points = self
            .points
            .iter()
            .map(|p| comp.apply(p))
            .collect::<Result<Vec<_>>>()?;
        Ok(NodeSet {
            ids: self.ids.clone(),
            points,
            role: NodeRole::Deformed,
            source: NodeSource::Primitive,
        })
    }

    /// The subset with the given ids, in this set's order.
    pub fn filtered(&self, keep: &HashSet<u64>) -> NodeSet {
        let (ids, points) = self
            .ids
            .iter()
            .zip(&self.points)
            .filter(|(id, _)| keep.contains(id))
            .map(|(id, p)| (*id, *p))
            .unzip();
        NodeSet {
            ids,
            points,
            role: self.role,
            source: self.source,
        }
    }
}

/// Parses node CSV text: a `id,x,y,z` header, then one node per line.
pub fn parse_nodes(text: &str, role: NodeRole, source: NodeSource) -> Result<NodeSet> {
    let body = text.strip_suffix('\n').unwrap_or(text);
    let mut lines = body.split('\n');
    let header = lines.next().unwrap_or("");
    if header != HEADER {
        return Err(Error::Parse {
            line: 1,
            message: format!("expected header `{HEADER}`"),
        });
    }
    let mut ids = Vec::new();
    let mut points = Vec::new();
    let mut seen = HashSet::new();
    for (i, line) in lines.enumerate() {
        let line_no = i + 2;
        if line.is_empty() {
            return Err(Error::Parse {
                line: line_no,
                message: "empty line".into(),
            });
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 4 {
            return Err(Error::Parse {
                line: line_no,
                message: format!("expected 4 fields, got {}", fields.len()),
            });
        }
        let id: u64 = fields[0].parse().map_err(|_| Error::Parse {
            line: line_no,
            message: format!("bad id `{}`", fields[0]),
        })?;
        let mut xyz = [0.0; 3];
        for (k, f) in fields[1..].iter().enumerate() {
            let v: f64 = f.parse().map_err(|_| Error::Parse {
                line: line_no,
                message: format!("bad coordinate `{f}`"),
            })?;
            if !v.is_finite() {
                return Err(Error::NonFinite(line_no));
            }
            xyz[k] = v;
        }
        if !seen.insert(id) {
            return Err(Error::DuplicateId { id, line: line_no });
        }
        ids.push(id);
        points.push(Point3::new(xyz[0], xyz[1], xyz[2]));
    }
    Ok(NodeSet {
        ids,
        points,
        role,
        source,
    })
}

pub fn ingest_nodes(path: &Path, role: NodeRole, source: NodeSource) -> Result<NodeSet> {
    parse_nodes(&fs::read_to_string(path)?, role, source)
}

/// Node CSV text. Floats use the shortest representation that parses back
/// to the same value.
pub fn format_nodes(nodes: &NodeSet) -> String {
    let mut out = String::with_capacity(32 * (nodes.len() + 1));
    out.push_str(HEADER);
    out.push('\n');
    for (id, p) in nodes.ids.iter().zip(&nodes.points) {
        let _ = writeln!(out, "{id},{},{},{}", p.x, p.y, p.z);
    }
    out
}

pub fn write_nodes(path: &Path, nodes: &NodeSet) -> Result<()> {
    fs::write(path, format_nodes(nodes))?;
    Ok(())
}

/// Structured `nu × nv` surface grid, `u` fastest. Closed directions repeat
/// the seam so quads tile the whole surface.
#[derive(Clone, Debug, PartialEq)]
pub struct SurfaceGrid {
    pub nu: usize,
    pub nv: usize,
    pub points: Vec<Point3>,
}

impl SurfaceGrid {
    fn build(nu: usize, nv: usize, h: f64, ring: impl Fn(f64) -> (f64, f64)) -> Result<Self> {
        if nu < 2 || nv < 2 {
            return Err(Error::Invalid(
                "surface grid needs at least 2×2 points".into(),
            ));
        }
        let mut points = Vec::with_capacity(nu * nv);
        for j in 0..nv {
            let z = h * j as f64 / (nv - 1) as f64;
            for i in 0..nu {
                let (x, y) = ring(i as f64 / (nu - 1) as f64);
                points.push(Point3::new(x, y, z));
            }
        }
        Ok(Self { nu, nv, points })
    }

    /// Lateral surface of a cylinder of radius `r` about the z-axis.
    pub fn cylinder(r: f64, h: f64, nu: usize, nv: usize) -> Result<Self> {
        Self::build(nu, nv, h, |s| {
            let (sn, cs) = (2.0 * PI * s).sin_cos();
            (r * cs, r * sn)
        })
    }

    /// Side faces of a centered `wx × wy` block, walked around the perimeter.
    pub fn block_sides(wx: f64, wy: f64, h: f64, nu: usize, nv: usize) -> Result<Self> {
        let (a, b) = (0.5 * wx, 0.5 * wy);
        let perimeter = 2.0 * (wx + wy);
        Self::build(nu, nv, h, |s| {
            let d = s * perimeter;
            if d <= wx {
                (-a + d, -b)
            } else if d <= wx + wy {
                (a, -b + (d - wx))
            } else if d <= 2.0 * wx + wy {
                (a - (d - wx - wy), b)
            } else {
                (-a, b - (d - 2.0 * wx - wy))
            }
        })
    }

    /// Quads as zero-based vertex indices, counter-clockwise in `(u, v)`.
    pub fn faces(&self) -> Vec<[usize; 4]> {
        let mut faces = Vec::with_capacity((self.nu - 1) * (self.nv - 1));
        for j in 0..self.nv - 1 {
            for i in 0..self.nu - 1 {
                let k = j * self.nu + i;
                faces.push([k, k + 1, k + 1 + self.nu, k + self.nu]);
            }
        }
        faces
    }
}

#[derive(Clone, Debug)]
pub enum Sampling {
    Domain(QuadratureDomain),
    Surface(SurfaceGrid),
}

impl Sampling {
    pub fn reference_points(&self) -> Vec<Point3> {
        match self {
            Sampling::Domain(d) => d.points().into_iter().map(|(p, _)| p).collect(),
            Sampling::Surface(g) => g.points.clone(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExportFormat {
    Csv,
    Obj,
}

impl std::str::FromStr for ExportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Self::Csv),
            "obj" => Ok(Self::Obj),
            _ => Err(Error::Invalid(format!("unknown export format `{s}`"))),
        }
    }
}

/// OBJ text: `v` lines, then `f` quads when the sampling is a surface grid.
pub fn format_obj(points: &[Point3], faces: &[[usize; 4]]) -> String {
    let mut out = String::new();
    for p in points {
        let _ = writeln!(out, "v {} {} {}", p.x, p.y, p.z);
    }
    for f in faces {
        let _ = writeln!(out, "f {} {} {} {}", f[0] + 1, f[1] + 1, f[2] + 1, f[3] + 1);
    }
    out
}

/// Writes the deformed sampling points of `comp`; returns them as a node set.
pub fn export_points(
    comp: &CompositeDeformation,
    sampling: &Sampling,
    path: &Path,
    format: ExportFormat,
) -> Result<NodeSet> {
    let reference = NodeSet::numbered(
        sampling.reference_points(),
        NodeRole::Reference,
        NodeSource::Primitive,
    );
    let deformed = reference.deform(comp)?;
    match format {
        ExportFormat::Csv => write_nodes(path, &deformed)?,
        ExportFormat::Obj => {
            let faces = match sampling {
                Sampling::Surface(g) => g.faces(),
                Sampling::Domain(_) => Vec::new(),
            };
            fs::write(path, format_obj(&deformed.points, &faces))?;
        }
    }
    Ok(deformed)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NodeError {
    pub id: u64,
    /// `‖aᵢ − fᵢ‖`
    pub e: f64,
    /// `‖aᵢ − oᵢ‖`
    pub d: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ErrorReport {
    pub value: f64,
    pub nodes: Vec<NodeError>,
}

fn check_ids(a: &NodeSet, b: &NodeSet, what: &str) -> Result<()> {
    if a.ids != b.ids {
        let first = a
            .ids
            .iter()
            .zip(&b.ids)
            .position(|(x, y)| x != y)
            .unwrap_or(a.len().min(b.len()));
        return Err(Error::IdMismatch(format!(
            "{what}: node sets differ at row {}",
            first + 1
        )));
    }
    Ok(())
}

/// `E = (Σ‖aᵢ − fᵢ‖² / Σ‖aᵢ − oᵢ‖²)^½` over id-aligned nodes, where `a` is
/// the reference solution (FEM or experiment), `f` the model, `o` the rest
/// configuration.
pub fn error_metric(reference: &NodeSet, a: &NodeSet, f: &NodeSet) -> Result<ErrorReport> {
    check_ids(reference, a, "reference vs target")?;
    check_ids(reference, f, "reference vs model")?;
    let nodes: Vec<NodeError> = reference
        .ids
        .iter()
        .enumerate()
        .map(|(i, id)| NodeError {
            id: *id,
            e: (a.points[i] - f.points[i]).norm(),
            d: (a.points[i] - reference.points[i]).norm(),
        })
        .collect();
    let num: f64 = nodes.iter().map(|n| n.e * n.e).sum();
    let den: f64 = nodes.iter().map(|n| n.d * n.d).sum();
    if !(den > 0.0) {
        return Err(Error::ZeroDisplacement);
    }
    Ok(ErrorReport {
        value: (num / den).sqrt(),
        nodes,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SurfaceShape {
    /// Faces of the bounding box.
    Box,
    /// End planes plus the innermost and outermost distance from the z-axis.
    Tube,
}

/// Ids of reference nodes lying on the boundary of `shape`.
pub fn surface_ids(reference: &NodeSet, shape: SurfaceShape) -> HashSet<u64> {
    if reference.is_empty() {
        return HashSet::new();
    }
    let mut lo = reference.points[0];
    let mut hi = lo;
    for p in &reference.points {
        lo = lo.inf(p);
        hi = hi.sup(p);
    }
    let tol = 1e-6 * (hi - lo).norm().max(1.0);
    let radius = |p: &Point3| p.x.hypot(p.y);
    let (r_min, r_max) = reference
        .points
        .iter()
        .map(radius)
        .fold((f64::INFINITY, 0.0_f64), |(a, b), r| (a.min(r), b.max(r)));
    let near = |a: f64, b: f64| (a - b).abs() < tol;
    reference
        .ids
        .iter()
        .zip(&reference.points)
        .filter(|(_, p)| match shape {
            SurfaceShape::Box => (0..3).any(|k| near(p[k], lo[k]) || near(p[k], hi[k])),
            SurfaceShape::Tube => {
                near(p.z, lo.z)
                    || near(p.z, hi.z)
                    || near(radius(p), r_max)
                    || near(radius(p), r_min)
            }
        })
        .map(|(id, _)| *id)
        .collect()
}
