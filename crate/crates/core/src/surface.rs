//! Z₂ surface codes on combinatorial maps.
//!
//! Rectangular lattices carry rough boundaries at the top and bottom (edges
//! dangling from a single vertex) and smooth boundaries on the left and right
//! (edges bounding a single face). Closed maps are given by an explicit face
//! list and have a two-dimensional representation kernel, so the stabilizer
//! code keeps an independent subset of the vertex and plaquette operators.
//!
//! Indexing of an `L × H` rectangle is row-major with vertical edges before
//! horizontal ones. Band `b ∈ 0..=H` holds the vertical edges `(b, c)` for
//! `c ∈ 0..=L`, followed by the horizontal edges of vertex row `b` (absent
//! for `b = H`). Vertex `(r, c)` is `r·(L+1) + c` and face `(b, c)` is
//! `b·L + c`, where face band `b` sits above vertex row `b`.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::dense::{self, c, DenseState, STATE_CAP};
use crate::duality::DualRep;
use crate::error::{Error, Result};
use crate::gf2::{coset_canonical, BitMatrix, BitVec};
use crate::group::Character;
use crate::pauli::PauliOperator;
use crate::stabilizer::{build_code, build_code_with_logicals, StabilizerCode};

/// Largest quotient rank for which [`forest_dual_rep`] tabulates all `2^m` operators.
pub const FOREST_REP_MAX_M: usize = 16;
/// Largest qubit count for the dense isotype-dimension trace.
pub const ISOTYPE_DENSE_CAP: usize = 10;

/// Indexing convention recorded in serialized rectangular lattices.
pub const RECT_INDEXING: &str =
    "row-major bands; band b lists vertical edges (b,0..=L) then horizontal edges (b,0..L); \
vertex (r,c) = r*(L+1)+c; face (b,c) = b*L+c";

/// Which operator type a string carries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum StringKind {
    Z,
    X,
}

/// Boundary classification of a planar edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryKind {
    Rough,
    Smooth,
}

/// Shape of a map.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum MapShape {
    Rect {
        #[serde(rename = "L")]
        l: usize,
        #[serde(rename = "H")]
        h: usize,
    },
    Closed {
        genus: usize,
    },
}

/// Lattice description accepted on input.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum LatticeSpec {
    Rect {
        #[serde(rename = "L")]
        l: usize,
        #[serde(rename = "H")]
        h: usize,
    },
    Closed {
        vertices: usize,
        edges: Vec<[usize; 2]>,
        faces: Vec<Vec<usize>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        genus: Option<usize>,
    },
}

impl LatticeSpec {
    /// Parses JSON or the shorthands `rect:LxH` and `torus:AxB`.
    pub fn parse(text: &str) -> Result<Self> {
        let t = text.trim();
        let dims = |rest: &str| -> Result<(usize, usize)> {
            let (a, b) = rest
                .split_once(['x', 'X'])
                .ok_or_else(|| Error::Lattice(format!("expected AxB dimensions, got '{rest}'")))?;
            let p =
                |s: &str| s.trim().parse::<usize>().map_err(|e| Error::Lattice(format!("bad dimension '{s}': {e}")));
            Ok((p(a)?, p(b)?))
        };
        if let Some(rest) = t.strip_prefix("rect:") {
            let (l, h) = dims(rest)?;
            return Ok(LatticeSpec::Rect { l, h });
        }
        if let Some(rest) = t.strip_prefix("torus:") {
            let (a, b) = dims(rest)?;
            return Ok(torus_spec(a, b));
        }
        Ok(serde_json::from_str(t)?)
    }

    pub fn build(&self) -> Result<CombinatorialMap> {
        match self {
            LatticeSpec::Rect { l, h } => build_rect_lattice(*l, *h),
            LatticeSpec::Closed { .. } => build_closed_map(self),
        }
    }
}

/// A cellulation given by edge endpoints and face edge lists.
#[derive(Clone, Debug, Serialize)]
pub struct CombinatorialMap {
    shape: MapShape,
    vertices: usize,
    edges: Vec<Vec<usize>>,
    faces: Vec<Vec<usize>>,
    boundary: Vec<Option<BoundaryKind>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    indexing: Option<&'static str>,
}

/// Vertical edge `(b, c)` of an `L`-wide rectangle.
pub fn rect_vertical_edge(l: usize, b: usize, c: usize) -> usize {
    b * (2 * l + 1) + c
}

/// Horizontal edge `(r, c)` of an `L`-wide rectangle.
pub fn rect_horizontal_edge(l: usize, r: usize, c: usize) -> usize {
    r * (2 * l + 1) + l + 1 + c
}

/// Vertex `(r, c)` of an `L`-wide rectangle.
pub fn rect_vertex(l: usize, r: usize, c: usize) -> usize {
    r * (l + 1) + c
}

/// Face `(b, c)` of an `L`-wide rectangle.
pub fn rect_face(l: usize, b: usize, c: usize) -> usize {
    b * l + c
}

pub fn build_rect_lattice(l: usize, h: usize) -> Result<CombinatorialMap> {
    if l == 0 || h == 0 {
        return Err(Error::Lattice(format!("rectangle needs L, H >= 1, got {l}x{h}")));
    }
    let n_edges = 2 * l * h + l + h + 1;
    let mut edges = vec![Vec::new(); n_edges];
    for b in 0..=h {
        for col in 0..=l {
            let e = rect_vertical_edge(l, b, col);
            if b > 0 {
                edges[e].push(rect_vertex(l, b - 1, col));
            }
            if b < h {
                edges[e].push(rect_vertex(l, b, col));
            }
        }
    }
    for r in 0..h {
        for col in 0..l {
            edges[rect_horizontal_edge(l, r, col)] = vec![rect_vertex(l, r, col), rect_vertex(l, r, col + 1)];
        }
    }
    let mut faces = Vec::with_capacity(l * (h + 1));
    for b in 0..=h {
        for col in 0..l {
            let mut f = vec![rect_vertical_edge(l, b, col), rect_vertical_edge(l, b, col + 1)];
            if b > 0 {
                f.push(rect_horizontal_edge(l, b - 1, col));
            }
            if b < h {
                f.push(rect_horizontal_edge(l, b, col));
            }
            f.sort_unstable();
            faces.push(f);
        }
    }
    let face_count = face_multiplicity(n_edges, &faces);
    let boundary = (0..n_edges)
        .map(|e| {
            if edges[e].len() == 1 {
                Some(BoundaryKind::Rough)
            } else if face_count[e] == 1 {
                Some(BoundaryKind::Smooth)
            } else {
                None
            }
        })
        .collect();
    Ok(CombinatorialMap {
        shape: MapShape::Rect { l, h },
        vertices: h * (l + 1),
        edges,
        faces,
        boundary,
        indexing: Some(RECT_INDEXING),
    })
}

/// Closed `a × b` torus: vertex `(r, c) = r·b + c`, row `r` lists vertical
/// edges `(r, 0..b)` then horizontal edges `(r, 0..b)`.
pub fn torus_spec(a: usize, b: usize) -> LatticeSpec {
    let v = |r: usize, col: usize| (r % a) * b + (col % b);
    let vert = |r: usize, col: usize| (r % a) * 2 * b + (col % b);
    let horiz = |r: usize, col: usize| (r % a) * 2 * b + b + (col % b);
    let mut edges = Vec::with_capacity(2 * a * b);
    for r in 0..a {
        for col in 0..b {
            edges.push([v(r, col), v(r + 1, col)]);
        }
        for col in 0..b {
            edges.push([v(r, col), v(r, col + 1)]);
        }
    }
    let mut faces = Vec::with_capacity(a * b);
    for r in 0..a {
        for col in 0..b {
            faces.push(vec![vert(r, col), horiz(r + 1, col), vert(r, col + 1), horiz(r, col)]);
        }
    }
    LatticeSpec::Closed { vertices: a * b, edges, faces, genus: Some(1) }
}

pub fn build_torus(a: usize, b: usize) -> Result<CombinatorialMap> {
    if a == 0 || b == 0 {
        return Err(Error::Lattice(format!("torus needs positive dimensions, got {a}x{b}")));
    }
    build_closed_map(&torus_spec(a, b))
}

fn face_multiplicity(n_edges: usize, faces: &[Vec<usize>]) -> Vec<usize> {
    let mut count = vec![0usize; n_edges];
    for f in faces {
        for &e in f {
            count[e] += 1;
        }
    }
    count
}

pub fn build_closed_map(spec: &LatticeSpec) -> Result<CombinatorialMap> {
    let LatticeSpec::Closed { vertices, edges, faces, genus } = spec else {
        return Err(Error::Lattice("expected a closed map description".into()));
    };
    let (nv, ne, nf) = (*vertices, edges.len(), faces.len());
    if nv == 0 || ne == 0 || nf == 0 {
        return Err(Error::Lattice("closed map needs vertices, edges and faces".into()));
    }
    for (i, e) in edges.iter().enumerate() {
        if e.iter().any(|&v| v >= nv) {
            return Err(Error::Lattice(format!("edge {i} has an endpoint outside 0..{nv}")));
        }
    }
    for (i, f) in faces.iter().enumerate() {
        if f.is_empty() {
            return Err(Error::Lattice(format!("face {i} is empty")));
        }
        if let Some(&e) = f.iter().find(|&&e| e >= ne) {
            return Err(Error::Lattice(format!("face {i} lists edge {e} outside 0..{ne}")));
        }
    }
    let count = face_multiplicity(ne, faces);
    if let Some(e) = count.iter().position(|&k| k != 2) {
        return Err(Error::Lattice(format!("dangling edge {e}: it borders {} face sides instead of 2", count[e])));
    }
    let edge_lists: Vec<Vec<usize>> = edges.iter().map(|e| e.to_vec()).collect();
    if !connected(nv, &edge_lists) {
        return Err(Error::Lattice("map is not connected".into()));
    }
    let euler = nv as i64 - ne as i64 + nf as i64;
    if euler > 2 || euler % 2 != 0 {
        return Err(Error::Lattice(format!("Euler characteristic {euler} is not 2 - 2g")));
    }
    let g = ((2 - euler) / 2) as usize;
    if let Some(stated) = genus {
        if *stated != g {
            return Err(Error::Lattice(format!("Euler relation fails: 2 - 2*{stated} != {nf} - {ne} + {nv}")));
        }
    }
    Ok(CombinatorialMap {
        shape: MapShape::Closed { genus: g },
        vertices: nv,
        edges: edge_lists,
        faces: faces.clone(),
        boundary: vec![None; ne],
        indexing: None,
    })
}

fn connected(nv: usize, edges: &[Vec<usize>]) -> bool {
    let mut adj = vec![Vec::new(); nv];
    for e in edges {
        if let [a, b] = e[..] {
            adj[a].push(b);
            adj[b].push(a);
        }
    }
    let mut seen = vec![false; nv];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(u) = stack.pop() {
        for &w in &adj[u] {
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

impl CombinatorialMap {
    pub fn shape(&self) -> MapShape {
        self.shape
    }

    pub fn is_closed(&self) -> bool {
        matches!(self.shape, MapShape::Closed { .. })
    }

    pub fn genus(&self) -> Option<usize> {
        match self.shape {
            MapShape::Closed { genus } => Some(genus),
            MapShape::Rect { .. } => None,
        }
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn num_faces(&self) -> usize {
        self.faces.len()
    }

    /// Endpoints of edge `e`; rough edges have one.
    pub fn endpoints(&self, e: usize) -> &[usize] {
        &self.edges[e]
    }

    pub fn face(&self, f: usize) -> &[usize] {
        &self.faces[f]
    }

    pub fn boundary_kind(&self, e: usize) -> Option<BoundaryKind> {
        self.boundary[e]
    }

    /// `|F| − |E| + |V|`.
    pub fn euler_characteristic(&self) -> i64 {
        self.num_faces() as i64 - self.num_edges() as i64 + self.num_vertices() as i64
    }

    /// Rough boundary component of a dangling edge: 0 for the top, 1 for the bottom.
    pub fn rough_component(&self, e: usize) -> Option<usize> {
        match self.shape {
            MapShape::Rect { l, .. } if self.boundary[e] == Some(BoundaryKind::Rough) => {
                Some(usize::from(e >= rect_vertical_edge(l, 1, 0)))
            }
            _ => None,
        }
    }

    /// Edges at vertex `v`, with self-loops cancelled mod 2.
    pub fn vertex_star(&self, v: usize) -> Vec<usize> {
        self.vertex_edge_row(v).ones().collect()
    }

    /// Row `v` of the vertex–edge incidence matrix over GF(2).
    fn vertex_edge_row(&self, v: usize) -> BitVec {
        let mut row = BitVec::zeros(self.num_edges());
        for (e, ends) in self.edges.iter().enumerate() {
            for &w in ends {
                if w == v {
                    row.flip(e);
                }
            }
        }
        row
    }

    fn face_edge_row(&self, f: usize) -> BitVec {
        let mut row = BitVec::zeros(self.num_edges());
        for &e in &self.faces[f] {
            row.flip(e);
        }
        row
    }

    /// ∂₁ as a `|V| × |E|` matrix: vertex `v` maps to its incident edges.
    pub fn vertex_edge_incidence(&self) -> BitMatrix {
        let rows = (0..self.vertices).map(|v| self.vertex_edge_row(v)).collect();
        BitMatrix::from_rows(self.num_edges(), rows).expect("row widths match")
    }

    /// Face–edge incidence, `|F| × |E|`; its transpose is ∂₂.
    pub fn face_edge_incidence(&self) -> BitMatrix {
        let rows = (0..self.num_faces()).map(|f| self.face_edge_row(f)).collect();
        BitMatrix::from_rows(self.num_edges(), rows).expect("row widths match")
    }
}

/// Matrix product over GF(2).
fn gf2_mul(a: &BitMatrix, b: &BitMatrix) -> BitMatrix {
    let bt = b.transpose();
    let rows = a
        .rows()
        .iter()
        .map(|r| BitVec::from_bools(&bt.rows().iter().map(|col| r.dot(col)).collect::<Vec<_>>()))
        .collect();
    BitMatrix::from_rows(b.ncols(), rows).expect("row widths match")
}

/// `∂₂∘∂₁` as a `|V| × |F|` matrix; zero on every valid map.
pub fn boundary_composition(map: &CombinatorialMap) -> BitMatrix {
    gf2_mul(&map.vertex_edge_incidence(), &map.face_edge_incidence().transpose())
}

/// `δ₂∘δ₁` as a `|F| × |V|` matrix; zero on every valid map.
pub fn coboundary_composition(map: &CombinatorialMap) -> BitMatrix {
    gf2_mul(&map.face_edge_incidence(), &map.vertex_edge_incidence().transpose())
}

/// `dim ker ∂₂ / im ∂₁ = |E| − rank ∂₂ − rank ∂₁`.
pub fn homology_rank(map: &CombinatorialMap) -> usize {
    map.num_edges() - map.face_edge_incidence().rank() - map.vertex_edge_incidence().rank()
}

/// `S^Z(t) = Π_{e∈t} Z_e` or `S^X(t′) = Π_{e∈t′} X_e`; repeated edges cancel.
pub fn string_operator(map: &CombinatorialMap, path: &[usize], kind: StringKind) -> Result<PauliOperator> {
    let n = map.num_edges();
    let mut bits = BitVec::zeros(n);
    for &e in path {
        if e >= n {
            return Err(Error::IndexOutOfRange { index: e, n });
        }
        bits.flip(e);
    }
    let zero = BitVec::zeros(n);
    match kind {
        StringKind::Z => PauliOperator::from_xz(zero, bits, 0),
        StringKind::X => PauliOperator::from_xz(bits, zero, 0),
    }
}

/// Canonical representative of a string modulo plaquette boundaries (Z) or
/// vertex stars (X).
pub fn homotopy_canonical(map: &CombinatorialMap, path: &[usize], kind: StringKind) -> Result<Vec<usize>> {
    let n = map.num_edges();
    let mut bits = BitVec::zeros(n);
    for &e in path {
        if e >= n {
            return Err(Error::IndexOutOfRange { index: e, n });
        }
        bits.flip(e);
    }
    let subspace = match kind {
        StringKind::Z => map.face_edge_incidence(),
        StringKind::X => map.vertex_edge_incidence(),
    };
    Ok(coset_canonical(&bits, &subspace)?.ones().collect())
}

/// Vertex and plaquette operators with the stabilizer code they generate.
#[derive(Clone, Debug)]
pub struct SurfaceCode {
    map: CombinatorialMap,
    full: Vec<PauliOperator>,
    kept: Vec<usize>,
    expansions: Vec<Vec<usize>>,
    kernel: Vec<BitVec>,
    code: StabilizerCode,
}

/// Builds `{X_v} ∪ {Z_f}` and keeps a greedy independent subset as the
/// stabilizer generators. Planar maps keep everything; closed maps drop the
/// last vertex and the last face.
pub fn vertex_plaquette_code(map: &CombinatorialMap) -> Result<SurfaceCode> {
    let (nv, nf, ne) = (map.num_vertices(), map.num_faces(), map.num_edges());
    let zero = BitVec::zeros(ne);
    let mut full = Vec::with_capacity(nv + nf);
    for v in 0..nv {
        full.push(PauliOperator::from_xz(map.vertex_edge_row(v), zero.clone(), 0)?);
    }
    for f in 0..nf {
        full.push(PauliOperator::from_xz(zero.clone(), map.face_edge_row(f), 0)?);
    }
    for v in 0..nv {
        for f in 0..nf {
            if !full[v].commutes(&full[nv + f])? {
                return Err(Error::NonCommuting(v, nv + f));
            }
        }
    }
    let mut kept = Vec::new();
    let mut span = BitMatrix::new(2 * ne);
    for (i, g) in full.iter().enumerate() {
        let s = g.symplectic();
        if span.solve_combination(&s)?.is_none() {
            span.push_row(s)?;
            kept.push(i);
        }
    }
    let mut expansions = Vec::with_capacity(full.len());
    for g in &full {
        let combo = span.solve_combination(&g.symplectic())?.expect("every generator lies in the span");
        expansions.push(combo.ones().collect());
    }
    let full_matrix = BitMatrix::from_rows(2 * ne, full.iter().map(|g| g.symplectic()).collect())?;
    let kernel = full_matrix.transpose().kernel();
    let generators: Vec<PauliOperator> = kept.iter().map(|&i| full[i].clone()).collect();
    let code = match map.shape() {
        MapShape::Rect { l, h } => {
            let column: Vec<usize> = (0..=h).map(|b| rect_vertical_edge(l, b, 0)).collect();
            let top: Vec<usize> = (0..=l).map(|col| rect_vertical_edge(l, 0, col)).collect();
            build_code_with_logicals(
                ne,
                generators,
                vec![string_operator(map, &column, StringKind::Z)?],
                vec![string_operator(map, &top, StringKind::X)?],
            )?
            .with_name(format!("surface-rect-{l}x{h}"))
        }
        MapShape::Closed { genus } => build_code(ne, generators)?.with_name(format!("surface-genus-{genus}")),
    };
    Ok(SurfaceCode { map: map.clone(), full, kept, expansions, kernel, code })
}

impl SurfaceCode {
    pub fn map(&self) -> &CombinatorialMap {
        &self.map
    }

    pub fn code(&self) -> &StabilizerCode {
        &self.code
    }

    /// All vertex operators followed by all plaquette operators.
    pub fn full_generators(&self) -> &[PauliOperator] {
        &self.full
    }

    pub fn vertex_operator(&self, v: usize) -> &PauliOperator {
        &self.full[v]
    }

    pub fn plaquette_operator(&self, f: usize) -> &PauliOperator {
        &self.full[self.map.num_vertices() + f]
    }

    /// Indices into [`Self::full_generators`] of the code generators.
    pub fn kept(&self) -> &[usize] {
        &self.kept
    }

    /// Basis of relations among the full generators.
    pub fn kernel_basis(&self) -> &[BitVec] {
        &self.kernel
    }

    /// All relations, as `(V, F)` pairs of vertex and face sets.
    pub fn kernel_elements(&self) -> Vec<(Vec<usize>, Vec<usize>)> {
        let nv = self.map.num_vertices();
        let j = self.full.len();
        (0..1usize << self.kernel.len())
            .map(|mask| {
                let mut acc = BitVec::zeros(j);
                for (i, b) in self.kernel.iter().enumerate() {
                    if mask >> i & 1 == 1 {
                        acc.xor_assign(b);
                    }
                }
                let (vs, fs): (Vec<usize>, Vec<usize>) = acc.ones().partition(|&i| i < nv);
                (vs, fs.into_iter().map(|i| i - nv).collect())
            })
            .collect()
    }

    pub fn quotient_rank(&self) -> usize {
        self.kept.len()
    }

    /// Full syndrome `(V̂, F̂)` of a Pauli error.
    pub fn defects_of(&self, e: &PauliOperator) -> Result<(Vec<usize>, Vec<usize>)> {
        let nv = self.map.num_vertices();
        let mut vs = Vec::new();
        let mut fs = Vec::new();
        for (i, g) in self.full.iter().enumerate() {
            if !g.commutes(e)? {
                if i < nv {
                    vs.push(i);
                } else {
                    fs.push(i - nv);
                }
            }
        }
        Ok((vs, fs))
    }

    /// Code character of a defect configuration; closed maps need even counts.
    pub fn character_of(&self, vhat: &[usize], fhat: &[usize]) -> Result<Character> {
        let full = self.full_bits(vhat, fhat)?;
        for rel in &self.kernel {
            if rel.dot(&full) {
                return Err(Error::Invalid(format!(
                    "defect set V={vhat:?} F={fhat:?} violates a relation; closed maps need even vertex and face counts"
                )));
            }
        }
        let bits: Vec<bool> = self.kept.iter().map(|&i| full.get(i)).collect();
        Ok(Character(BitVec::from_bools(&bits)))
    }

    /// Defect configuration `(V̂, F̂)` of a code character.
    pub fn defects_of_character(&self, chi: &Character) -> (Vec<usize>, Vec<usize>) {
        let nv = self.map.num_vertices();
        let mut vs = Vec::new();
        let mut fs = Vec::new();
        for (i, exp) in self.expansions.iter().enumerate() {
            if exp.iter().filter(|&&j| chi.0.get(j)).count() % 2 == 1 {
                if i < nv {
                    vs.push(i);
                } else {
                    fs.push(i - nv);
                }
            }
        }
        (vs, fs)
    }

    fn full_bits(&self, vhat: &[usize], fhat: &[usize]) -> Result<BitVec> {
        let (nv, nf) = (self.map.num_vertices(), self.map.num_faces());
        let mut full = BitVec::zeros(nv + nf);
        for &v in vhat {
            if v >= nv {
                return Err(Error::IndexOutOfRange { index: v, n: nv });
            }
            full.flip(v);
        }
        for &f in fhat {
            if f >= nf {
                return Err(Error::IndexOutOfRange { index: f, n: nf });
            }
            full.flip(nv + f);
        }
        Ok(full)
    }

    /// Exact dimension of the isotype `(V̂, F̂)` from the relations.
    pub fn isotype_dimension(&self, vhat: &[usize], fhat: &[usize]) -> Result<u128> {
        let full = self.full_bits(vhat, fhat)?;
        if self.kernel.iter().any(|rel| rel.dot(&full)) {
            return Ok(0);
        }
        let exp = self.map.num_edges() + self.kernel.len() - self.full.len();
        if exp >= 128 {
            return Err(Error::CapExceeded { n: exp, cap: 127 });
        }
        Ok(1u128 << exp)
    }

    /// Trace of `Π_i (I ± G_i)/2` over all full generators, summed over basis states.
    pub fn isotype_dimension_dense(&self, vhat: &[usize], fhat: &[usize]) -> Result<f64> {
        let n = self.map.num_edges();
        dense::check_cap(n, ISOTYPE_DENSE_CAP)?;
        let full = self.full_bits(vhat, fhat)?;
        let mut total = 0.0;
        for b in 0..1usize << n {
            let mut v = dense::basis_state(n, b);
            for (i, g) in self.full.iter().enumerate() {
                let sign = if full.get(i) { -0.5 } else { 0.5 };
                v = &v * c(0.5, 0.0) + dense::apply_pauli(g, &v)? * c(sign, 0.0);
            }
            total += v[b].re;
        }
        Ok(total)
    }

    /// Full defect configuration of a state, read from generator expectation values.
    pub fn defect_sector(&self, state: &DenseState, tol: f64) -> Result<(Vec<usize>, Vec<usize>)> {
        let n = self.map.num_edges();
        dense::check_cap(n, STATE_CAP)?;
        if state.len() != 1 << n {
            return Err(Error::Dimension { expected: 1 << n, got: state.len() });
        }
        let norm = state.norm_squared();
        let nv = self.map.num_vertices();
        let (mut vs, mut fs) = (Vec::new(), Vec::new());
        for (i, g) in self.full.iter().enumerate() {
            let ev = dense::inner_product(state, &dense::apply_pauli(g, state)?).re / norm;
            if (ev.abs() - 1.0).abs() > tol {
                return Err(Error::AmbiguousSector(format!(
                    "generator {i} has expectation {ev:.6}, the state mixes defect sectors"
                )));
            }
            if ev < 0.0 {
                if i < nv {
                    vs.push(i);
                } else {
                    fs.push(i - nv);
                }
            }
        }
        Ok((vs, fs))
    }

    /// `(|0̄⟩, |1̄⟩)` from the uniform superposition over vertex-set boundaries,
    /// with `|1̄⟩ = S^X(t′)|0̄⟩` for the top-row smooth-to-smooth dual string.
    pub fn homological_codewords(&self) -> Result<(DenseState, DenseState)> {
        let MapShape::Rect { l, .. } = self.map.shape() else {
            return Err(Error::Lattice("homological codewords are built for rectangular lattices".into()));
        };
        let n = self.map.num_edges();
        dense::check_cap(n, STATE_CAP)?;
        let nv = self.map.num_vertices();
        let stars: Vec<usize> =
            (0..nv).map(|v| self.map.vertex_star(v).iter().fold(0usize, |acc, &e| acc | 1 << (n - 1 - e))).collect();
        let mut zero = dense::zero_state(n);
        for subset in 0..1usize << nv {
            let idx = stars.iter().enumerate().filter(|(v, _)| subset >> v & 1 == 1).fold(0, |acc, (_, s)| acc ^ s);
            zero[idx] += c(1.0, 0.0);
        }
        let zero = &zero / c(zero.norm(), 0.0);
        let top: Vec<usize> = (0..=l).map(|col| rect_vertical_edge(l, 0, col)).collect();
        let one = dense::apply_pauli(&string_operator(&self.map, &top, StringKind::X)?, &zero)?;
        Ok((zero, one))
    }
}

/// Disjoint primal and dual spanning trees with their tree paths.
#[derive(Clone, Debug, Serialize)]
pub struct ForestPair {
    tree: Vec<usize>,
    dual_tree: Vec<usize>,
    leftover: Vec<usize>,
    vertex_paths: Vec<Vec<usize>>,
    face_paths: Vec<Vec<usize>>,
    root_vertex: Option<usize>,
    root_face: Option<usize>,
}

impl ForestPair {
    pub fn tree(&self) -> &[usize] {
        &self.tree
    }

    pub fn dual_tree(&self) -> &[usize] {
        &self.dual_tree
    }

    /// Edges in neither tree.
    pub fn leftover(&self) -> &[usize] {
        &self.leftover
    }

    /// `γ_v`: tree path from `v` to the rough boundary or to the root vertex.
    pub fn vertex_path(&self, v: usize) -> &[usize] {
        &self.vertex_paths[v]
    }

    /// `γ′_f`: dual tree path from `f` to the smooth boundary or to the root face.
    pub fn face_path(&self, f: usize) -> &[usize] {
        &self.face_paths[f]
    }

    /// `None` on planar maps, where paths end on the boundary.
    pub fn root_vertex(&self) -> Option<usize> {
        self.root_vertex
    }

    pub fn root_face(&self) -> Option<usize> {
        self.root_face
    }
}

/// BFS tree over `nodes` from `root`, scanning edges in index order.
/// Returns parent edges, or `None` if some node is unreachable.
fn bfs_tree(nodes: usize, root: usize, ends: &[Option<(usize, usize)>]) -> Option<Vec<Option<usize>>> {
    let mut adj = vec![Vec::new(); nodes];
    for (e, end) in ends.iter().enumerate() {
        if let Some((a, b)) = *end {
            if a != b {
                adj[a].push((e, b));
                adj[b].push((e, a));
            }
        }
    }
    let mut parent = vec![None; nodes];
    let mut seen = vec![false; nodes];
    seen[root] = true;
    let mut queue = VecDeque::from([root]);
    while let Some(u) = queue.pop_front() {
        for &(e, w) in &adj[u] {
            if !seen[w] {
                seen[w] = true;
                parent[w] = Some((e, u));
                queue.push_back(w);
            }
        }
    }
    if !seen.iter().all(|&s| s) {
        return None;
    }
    Some(parent.into_iter().map(|p| p.map(|(e, _)| e)).collect())
}

fn tree_paths(nodes: usize, parent: &[Option<usize>], ends: &[Option<(usize, usize)>]) -> Vec<Vec<usize>> {
    (0..nodes)
        .map(|mut u| {
            let mut path = Vec::new();
            while let Some(e) = parent[u] {
                path.push(e);
                let (a, b) = ends[e].expect("tree edges have two ends");
                u = if a == u { b } else { a };
            }
            path.sort_unstable();
            path
        })
        .collect()
}

/// Spanning trees built by BFS in edge-index order. Planar maps get a sink
/// vertex joined to the rough edges and a sink face joined to the smooth ones;
/// closed maps root the trees at vertex 0 and face 0.
pub fn spanning_forests(map: &CombinatorialMap) -> Result<ForestPair> {
    let (nv, nf, ne) = (map.num_vertices(), map.num_faces(), map.num_edges());
    let closed = map.is_closed();
    let (pv, pf) = if closed { (nv, nf) } else { (nv + 1, nf + 1) };
    let (root_v, root_f) = if closed { (0, 0) } else { (nv, nf) };
    let primal: Vec<Option<(usize, usize)>> = (0..ne)
        .map(|e| match map.endpoints(e) {
            [a] => Some((*a, nv)),
            [a, b] => Some((*a, *b)),
            _ => None,
        })
        .collect();
    let parent = bfs_tree(pv, root_v, &primal)
        .ok_or_else(|| Error::Lattice("primal graph is not connected to its root".into()))?;
    let mut in_tree = vec![false; ne];
    for e in parent.iter().flatten() {
        in_tree[*e] = true;
    }
    let mut incident = vec![Vec::new(); ne];
    for f in 0..nf {
        for &e in map.face(f) {
            incident[e].push(f);
        }
    }
    let dual: Vec<Option<(usize, usize)>> = (0..ne)
        .map(|e| {
            if in_tree[e] {
                return None;
            }
            match incident[e][..] {
                [a] => Some((a, nf)),
                [a, b] => Some((a, b)),
                _ => None,
            }
        })
        .collect();
    let dual_parent = bfs_tree(pf, root_f, &dual)
        .ok_or_else(|| Error::Lattice("dual graph minus the primal tree is disconnected".into()))?;
    let mut tree: Vec<usize> = parent.iter().flatten().copied().collect();
    let mut dual_tree: Vec<usize> = dual_parent.iter().flatten().copied().collect();
    tree.sort_unstable();
    dual_tree.sort_unstable();
    let leftover = (0..ne).filter(|e| !tree.contains(e) && !dual_tree.contains(e)).collect();
    let mut vertex_paths = tree_paths(pv, &parent, &primal);
    let mut face_paths = tree_paths(pf, &dual_parent, &dual);
    vertex_paths.truncate(nv);
    face_paths.truncate(nf);
    Ok(ForestPair {
        tree,
        dual_tree,
        leftover,
        vertex_paths,
        face_paths,
        root_vertex: closed.then_some(root_v),
        root_face: closed.then_some(root_f),
    })
}

/// `Π_{v∈V̂} S^Z(γ_v) Π_{f∈F̂} S^X(γ′_f)`.
pub fn forest_operator(
    surface: &SurfaceCode,
    forests: &ForestPair,
    vhat: &[usize],
    fhat: &[usize],
) -> Result<PauliOperator> {
    let map = surface.map();
    let mut z = Vec::new();
    let mut x = Vec::new();
    for &v in vhat {
        if v >= map.num_vertices() {
            return Err(Error::IndexOutOfRange { index: v, n: map.num_vertices() });
        }
        z.extend_from_slice(forests.vertex_path(v));
    }
    for &f in fhat {
        if f >= map.num_faces() {
            return Err(Error::IndexOutOfRange { index: f, n: map.num_faces() });
        }
        x.extend_from_slice(forests.face_path(f));
    }
    string_operator(map, &z, StringKind::Z)?.multiply(&string_operator(map, &x, StringKind::X)?)
}

/// Dual representation `Û^χ` over all code characters, built from the tree
/// paths of the basis characters and multiplied out along lowest set bits.
pub fn forest_dual_rep(surface: &SurfaceCode, forests: &ForestPair) -> Result<DualRep> {
    let code = surface.code();
    let m = code.m();
    if m > FOREST_REP_MAX_M {
        return Err(Error::CapExceeded { n: m, cap: FOREST_REP_MAX_M });
    }
    let basis = (0..m)
        .map(|j| {
            let (vs, fs) = surface.defects_of_character(&Character::from_index(m, 1 << j));
            forest_operator(surface, forests, &vs, &fs)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut ops = Vec::with_capacity(1 << m);
    ops.push(PauliOperator::identity(code.n()));
    for chi in 1usize..1 << m {
        let rest = chi & (chi - 1);
        let low = chi.trailing_zeros() as usize;
        let next = ops[rest].multiply(&basis[low])?;
        ops.push(next);
    }
    DualRep::from_paulis(code, ops)
}

/// Outcome of dressing a single-defect error with its tree-path correction.
#[derive(Clone, Debug, Serialize)]
pub struct Dressing {
    pub vertices: Vec<usize>,
    pub faces: Vec<usize>,
    pub correction: PauliOperator,
    pub combined: PauliOperator,
    /// The corrected error acts as a nontrivial logical operator.
    pub logical_failure: bool,
}

fn check_single_defect(surface: &SurfaceCode, vs: &[usize], fs: &[usize]) -> Result<()> {
    let single = if surface.map().is_closed() {
        (vs.len() == 2 && fs.is_empty()) || (vs.is_empty() && fs.len() == 2)
    } else {
        vs.len() + fs.len() == 1
    };
    if single {
        Ok(())
    } else {
        Err(Error::Invalid(format!("expected a single defect (a single pair on closed maps), found V={vs:?} F={fs:?}")))
    }
}

/// Applies the tree-path correction to a single-defect Pauli error and
/// reports whether the combined string is a logical operator.
pub fn dress_single_defect(surface: &SurfaceCode, forests: &ForestPair, error: &PauliOperator) -> Result<Dressing> {
    let (vs, fs) = surface.defects_of(error)?;
    check_single_defect(surface, &vs, &fs)?;
    let correction = forest_operator(surface, forests, &vs, &fs)?;
    let combined = correction.multiply(error)?;
    let logical_failure = surface.code().is_nontrivial_logical(&combined)?;
    Ok(Dressing { vertices: vs, faces: fs, correction, combined, logical_failure })
}

/// Result of correcting a dense single-defect state.
#[derive(Clone, Debug)]
pub struct DefectCorrection {
    pub vertices: Vec<usize>,
    pub faces: Vec<usize>,
    pub correction: PauliOperator,
    pub corrected: DenseState,
}

/// Reads the defect sector of `state` and applies `S^Z(γ_v)` or `S^X(γ′_f)`.
pub fn correct_single_defect(
    surface: &SurfaceCode,
    forests: &ForestPair,
    state: &DenseState,
    tol: f64,
) -> Result<DefectCorrection> {
    let (vs, fs) = surface.defect_sector(state, tol)?;
    check_single_defect(surface, &vs, &fs)?;
    let correction = forest_operator(surface, forests, &vs, &fs)?;
    let corrected = dense::apply_pauli(&correction, state)?;
    Ok(DefectCorrection { vertices: vs, faces: fs, correction, corrected })
}

/// Vertical path from vertex `(r, c)` up to the top rough boundary.
pub fn rect_path_up(l: usize, r: usize, col: usize) -> Vec<usize> {
    (0..=r).map(|b| rect_vertical_edge(l, b, col)).collect()
}

/// Vertical path from vertex `(r, c)` down to the bottom rough boundary.
pub fn rect_path_down(l: usize, h: usize, r: usize, col: usize) -> Vec<usize> {
    (r + 1..=h).map(|b| rect_vertical_edge(l, b, col)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::duality::check_duality;
    use crate::stabilizer::{code_projector, codewords};

    fn rect(l: usize, h: usize) -> SurfaceCode {
        vertex_plaquette_code(&build_rect_lattice(l, h).unwrap()).unwrap()
    }

    #[test]
    fn rect_counts() {
        for (l, h, e, v, f) in [(1, 1, 5, 2, 2), (2, 2, 13, 6, 6), (3, 2, 18, 8, 9)] {
            let map = build_rect_lattice(l, h).unwrap();
            assert_eq!((map.num_edges(), map.num_vertices(), map.num_faces()), (e, v, f));
            assert_eq!(e, 2 * l * h + l + h + 1);
        }
        let s = rect(1, 1);
        assert_eq!((s.code().n(), s.code().k()), (5, 1));
        assert!(s.kernel_basis().is_empty());
        let p = code_projector(s.code()).unwrap();
        assert_eq!(dense::projector_rank(&p), 2);
        assert_eq!(rect(2, 2).code().m(), 12);
    }

    #[test]
    fn rect_1x1_layout() {
        let map = build_rect_lattice(1, 1).unwrap();
        assert_eq!(map.face(0), &[0, 1, 2]);
        assert_eq!(map.face(1), &[2, 3, 4]);
        assert_eq!(map.vertex_star(0), vec![0, 2, 3]);
        let kinds: Vec<_> = (0..5).map(|e| map.boundary_kind(e)).collect();
        assert_eq!(kinds[2], None);
        assert_eq!(kinds[0], Some(BoundaryKind::Rough));
        assert_eq!(map.rough_component(0), Some(0));
        assert_eq!(map.rough_component(4), Some(1));
        assert_eq!(
            rect(1, 1).full_generators().iter().map(|g| g.string()).collect::<Vec<_>>(),
            ["XIXXI", "IXXIX", "ZZZII", "IIZZZ"]
        );
    }

    #[test]
    fn torus_quotient() {
        let map = build_torus(2, 2).unwrap();
        assert_eq!((map.num_edges(), map.num_vertices(), map.num_faces()), (8, 4, 4));
        assert_eq!(map.euler_characteristic(), 0);
        assert_eq!(map.genus(), Some(1));
        let s = vertex_plaquette_code(&map).unwrap();
        assert_eq!((s.code().m(), s.code().k()), (6, 2));
        assert_eq!(s.kept(), &[0, 1, 2, 4, 5, 6]);
        let mut ker = s.kernel_elements();
        ker.sort();
        assert_eq!(
            ker,
            vec![
                (vec![], vec![]),
                (vec![], vec![0, 1, 2, 3]),
                (vec![0, 1, 2, 3], vec![]),
                (vec![0, 1, 2, 3], vec![0, 1, 2, 3]),
            ]
        );
        assert_eq!(s.isotype_dimension(&[], &[]).unwrap(), 4);
        assert_eq!(s.isotype_dimension(&[0], &[]).unwrap(), 0);
        assert!((s.isotype_dimension_dense(&[], &[]).unwrap() - 4.0).abs() < 1e-9);
        assert!((s.isotype_dimension_dense(&[1], &[2]).unwrap()).abs() < 1e-9);
        assert_eq!(homology_rank(&map), 2);
    }

    #[test]
    fn malformed_closed_maps_rejected() {
        let bad = LatticeSpec::Closed { vertices: 2, edges: vec![[0, 1]], faces: vec![vec![0]], genus: None };
        assert!(matches!(build_closed_map(&bad), Err(Error::Lattice(_))));
        let LatticeSpec::Closed { vertices, edges, faces, .. } = torus_spec(2, 2) else { unreachable!() };
        let wrong = LatticeSpec::Closed { vertices, edges, faces, genus: Some(2) };
        assert!(matches!(build_closed_map(&wrong), Err(Error::Lattice(_))));
    }

    #[test]
    fn forests_and_leftovers() {
        let map = build_rect_lattice(1, 1).unwrap();
        let fp = spanning_forests(&map).unwrap();
        assert_eq!(fp.tree(), &[0, 1]);
        assert_eq!(fp.dual_tree(), &[2, 3]);
        assert_eq!(fp.leftover(), &[4]);
        let torus = build_torus(2, 2).unwrap();
        assert_eq!(spanning_forests(&torus).unwrap().leftover().len(), 2);
        let big = build_torus(3, 4).unwrap();
        assert_eq!(spanning_forests(&big).unwrap().leftover().len(), 2);
    }

    #[test]
    fn forest_reps_satisfy_duality() {
        for map in [build_rect_lattice(1, 1).unwrap(), build_rect_lattice(2, 2).unwrap(), build_torus(2, 2).unwrap()] {
            let s = vertex_plaquette_code(&map).unwrap();
            let rep = forest_dual_rep(&s, &spanning_forests(&map).unwrap()).unwrap();
            assert!(check_duality(s.code(), &rep, 1e-10).unwrap().passed);
        }
    }

    #[test]
    fn boundary_maps_compose_to_zero() {
        for map in [build_rect_lattice(2, 3).unwrap(), build_torus(3, 3).unwrap()] {
            assert!(boundary_composition(&map).rows().iter().all(|r| r.is_zero()));
            assert!(coboundary_composition(&map).rows().iter().all(|r| r.is_zero()));
        }
        assert_eq!(homology_rank(&build_rect_lattice(2, 2).unwrap()), 1);
    }

    #[test]
    fn strings_and_codewords() {
        let s = rect(1, 1);
        let map = s.map();
        let z = string_operator(
            map,
            &rect_path_up(1, 0, 0).into_iter().chain(rect_path_down(1, 1, 0, 0)).collect::<Vec<_>>(),
            StringKind::Z,
        )
        .unwrap();
        let x = string_operator(map, &[0, 1], StringKind::X).unwrap();
        assert!(!z.commutes(&x).unwrap());
        assert!(s.code().is_nontrivial_logical(&z).unwrap());
        assert!(s.code().is_nontrivial_logical(&x).unwrap());
        assert_eq!(string_operator(map, map.face(1), StringKind::Z).unwrap(), *s.plaquette_operator(1));
        assert!(matches!(string_operator(map, &[5], StringKind::Z), Err(Error::IndexOutOfRange { .. })));
        let (zero, one) = s.homological_codewords().unwrap();
        let cw = codewords(s.code()).unwrap();
        for (a, b) in [(&zero, &cw[0]), (&one, &cw[1])] {
            assert!((dense::inner_product(a, b).norm() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn single_defect_dressing() {
        let s = rect(2, 2);
        let fp = spanning_forests(s.map()).unwrap();
        let v = rect_vertex(2, 0, 1);
        let up = string_operator(s.map(), &rect_path_up(2, 0, 1), StringKind::Z).unwrap();
        let down = string_operator(s.map(), &rect_path_down(2, 2, 0, 1), StringKind::Z).unwrap();
        let a = dress_single_defect(&s, &fp, &up).unwrap();
        let b = dress_single_defect(&s, &fp, &down).unwrap();
        assert_eq!(a.vertices, vec![v]);
        assert_ne!(a.logical_failure, b.logical_failure);
        let (zero, _) = s.homological_codewords().unwrap();
        let hit = dense::apply_pauli(&up, &zero).unwrap();
        assert_eq!(s.defect_sector(&hit, 1e-10).unwrap(), (vec![v], vec![]));
        let fixed = correct_single_defect(&s, &fp, &hit, 1e-10).unwrap();
        assert_eq!(s.defect_sector(&fixed.corrected, 1e-10).unwrap(), (vec![], vec![]));
    }
}
