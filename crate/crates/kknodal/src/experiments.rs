//! The experiments behind each subcommand. Every function returns a
//! serializable report with a `passed()` verdict.

use std::collections::BTreeMap;
use std::f64::consts::TAU;

use kknodal_core::fields::{BasePoint, ChartId, EquivariantField};
use kknodal_core::modular::{
    delta_coeffs, front_face_check, ladder_identity_residual, maass_scan, power_series, required_truncation,
    side_face_check, FaceCheck, FrontCheck, PlaneGrid, QSeries, TAIL_TOL,
};
use kknodal_core::nodal::{
    base_zero_cells, fiber_zero_count, winding_index, zero_clusters, Cell, ChartGrid, GridParams, ManifoldTag,
    NodalCount, PlaneLattice, Sampler, SignLabeling,
};
use kknodal_core::partition_graph::{
    build_graph, count_via_graph, crossing_witness, generic_pair_diagnostic, graph_components, partitions_from_field,
    Genericity, LayeredGraph,
};
use kknodal_core::sphere::{alpha_factor_zeros, s3_laplace_residual, HopfEigenfunction, HopfGrid};
use kknodal_core::torus_basis::{enumerate_basis, gram_matrix};
use kknodal_core::{Complex64, Error};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::io::{element_expression, CountDto, FaceRow};
use crate::par::{self, Parallelism};
use crate::random::{CosSinField, TrigField};

/// `(n_pos, n_neg, total)` of a count, with both passes.
fn dto(c: &NodalCount) -> CountDto {
    CountDto::from(c)
}

// ---------------------------------------------------------------- torus

#[derive(Debug, Clone, Serialize)]
pub struct ElementCount {
    pub index: usize,
    pub case: &'static str,
    pub expression: String,
    pub eigenvalue: f64,
    #[serde(flatten)]
    pub count: CountDto,
}

#[derive(Debug, Clone, Serialize)]
pub struct TorusCountReport {
    pub max_freq: u32,
    pub resolution: [usize; 3],
    pub elements: Vec<ElementCount>,
    /// Non-constant elements whose count is not a converged 2.
    pub failures: Vec<usize>,
}

impl TorusCountReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn converged(&self) -> bool {
        self.elements.iter().all(|e| e.count.converged)
    }
}

pub fn torus_count(
    max_freq: u32,
    resolution: [usize; 3],
    zero_tol: f64,
    par: &Parallelism,
) -> anyhow::Result<TorusCountReport> {
    let basis = enumerate_basis(max_freq)?;
    let mut elements = Vec::with_capacity(basis.len());
    let mut failures = Vec::new();
    for (index, e) in basis.iter().enumerate() {
        let f = |p: [f64; 3]| e.eval(p);
        let c = par::count_nodal_domains(
            Sampler::Scalar(&f),
            ManifoldTag::Torus3,
            resolution,
            GridParams::default(),
            zero_tol,
            par,
        )?;
        if !e.is_constant() && !(c.converged && c.total() == 2) {
            failures.push(index);
        }
        elements.push(ElementCount {
            index,
            case: e.case.name(),
            expression: element_expression(e),
            eigenvalue: e.eigenvalue(),
            count: dto(&c),
        });
    }
    Ok(TorusCountReport {
        max_freq,
        resolution,
        elements,
        failures,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct BasisEntry {
    pub index: usize,
    pub case: &'static str,
    pub sign: i8,
    pub frequencies: [u32; 3],
    pub eigenvalue: f64,
    pub expression: String,
}

pub fn torus_basis(max_freq: u32) -> anyhow::Result<Vec<BasisEntry>> {
    Ok(enumerate_basis(max_freq)?
        .iter()
        .enumerate()
        .map(|(index, e)| BasisEntry {
            index,
            case: e.case.name(),
            sign: e.sign,
            frequencies: e.frequencies,
            eigenvalue: e.eigenvalue(),
            expression: element_expression(e),
        })
        .collect())
}

#[derive(Debug, Clone, Serialize)]
pub struct GramReport {
    pub size: usize,
    pub max_off_diagonal: f64,
    /// `max |G_ii - ‖e_i‖²|`.
    pub max_diagonal_error: f64,
}

impl GramReport {
    pub fn passed(&self, tol: f64) -> bool {
        self.max_off_diagonal <= tol && self.max_diagonal_error <= tol
    }
}

pub fn gram_report(max_freq: u32) -> anyhow::Result<GramReport> {
    let basis = enumerate_basis(max_freq)?;
    let g = gram_matrix(&basis, (4 * max_freq as usize).max(8))?;
    let mut off: f64 = 0.0;
    let mut diag: f64 = 0.0;
    for (i, row) in g.iter().enumerate() {
        for (k, &v) in row.iter().enumerate() {
            if i == k {
                diag = diag.max((v - basis[i].norm().powi(2)).abs());
            } else {
                off = off.max(v.abs());
            }
        }
    }
    Ok(GramReport {
        size: basis.len(),
        max_off_diagonal: off,
        max_diagonal_error: diag,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct T2Entry {
    pub m: u32,
    pub expected: usize,
    #[serde(flatten)]
    pub count: CountDto,
}

impl T2Entry {
    pub fn passed(&self) -> bool {
        self.count.converged && self.count.total == self.expected
    }
}

/// `sin(2πmx)·sin(2πmy)` on the flat two-torus.
pub fn t2_count(ms: &[u32], resolution: [usize; 2], zero_tol: f64, par: &Parallelism) -> anyhow::Result<Vec<T2Entry>> {
    ms.iter()
        .map(|&m| {
            let f = move |p: [f64; 3]| (TAU * m as f64 * p[0]).sin() * (TAU * m as f64 * p[1]).sin();
            let c = par::count_nodal_domains(
                Sampler::Scalar(&f),
                ManifoldTag::Torus2,
                [resolution[0], resolution[1], 1],
                GridParams::default(),
                zero_tol,
                par,
            )?;
            Ok(T2Entry {
                m,
                expected: 4 * (m * m) as usize,
                count: dto(&c),
            })
        })
        .collect()
}

// -------------------------------------------------------------- modular

pub fn tau(n: usize) -> anyhow::Result<Vec<BigInt>> {
    Ok(delta_coeffs(n)?.coeffs)
}

/// `Δ²` through the order that keeps the relative tail below [`TAIL_TOL`]
/// everywhere on the fundamental domain.
pub fn delta_squared() -> anyhow::Result<QSeries> {
    let y_min = 3f64.sqrt() / 2.0;
    let n = required_truncation(24.0, 2, y_min, TAIL_TOL);
    let d = delta_coeffs(n)?;
    Ok(power_series(&d, 2, n)?)
}

#[derive(Debug, Clone, Serialize)]
pub struct ModularReport {
    pub resolution: [usize; 3],
    pub y_max: f64,
    pub truncation: usize,
    pub relative_tail_bound: f64,
    #[serde(flatten)]
    pub count: CountDto,
    pub expected_total: usize,
    pub side: FaceDto,
    pub front: FrontDto,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct FaceDto {
    pub compared: usize,
    pub skipped: usize,
    pub mismatches: usize,
    pub passed: bool,
}

impl From<FaceCheck> for FaceDto {
    fn from(f: FaceCheck) -> Self {
        Self {
            compared: f.compared,
            skipped: f.skipped,
            mismatches: f.mismatches,
            passed: f.passed(),
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct FrontDto {
    #[serde(flatten)]
    pub face: FaceDto,
    pub offset: f64,
    pub offset_spread: f64,
    pub offset_constant: bool,
}

/// Largest variation of the front phase offset accepted as constant.
pub const OFFSET_TOL: f64 = 1e-6;

impl From<FrontCheck> for FrontDto {
    fn from(f: FrontCheck) -> Self {
        Self {
            face: f.face.into(),
            offset: f.offset,
            offset_spread: f.offset_spread,
            offset_constant: f.offset_spread <= OFFSET_TOL,
        }
    }
}

impl ModularReport {
    pub fn count_passed(&self) -> bool {
        self.count.converged
            && self.count.total == self.expected_total
            && self.count.n_pos == 2
            && self.count.n_neg == 2
    }

    pub fn faces_passed(&self) -> bool {
        self.side.passed && self.front.face.passed && self.front.offset_constant
    }

    pub fn passed(&self) -> bool {
        self.count_passed() && self.faces_passed()
    }
}

pub struct ModularRun {
    pub report: ModularReport,
    /// Grid and labeling at the base resolution, for CSV export.
    pub grid: ChartGrid,
    pub labeling: SignLabeling,
    pub series: QSeries,
}

/// Nodal domains of `Re(y¹²Δ(z)²e^{-24iθ})` on the fundamental solid, plus the
/// side and front face restrictions.
pub fn modular_count(
    resolution: [usize; 3],
    y_max: f64,
    zero_tol: f64,
    par: &Parallelism,
) -> anyhow::Result<ModularRun> {
    let series = delta_squared()?;
    let field = series.clone().lift_field();
    let params = GridParams {
        y_max,
        ..GridParams::default()
    };
    let sampler = Sampler::Equivariant(&field);
    let (grid, coarse) = par::label_at(sampler, ManifoldTag::ModularSolid, resolution, params, zero_tol, par)?;
    let (_, fine) = par::label_at(
        sampler,
        ManifoldTag::ModularSolid,
        kknodal_core::nodal::doubled(resolution),
        params,
        zero_tol,
        par,
    )?;
    let count = NodalCount::from_passes(resolution, (coarse.n_pos, coarse.n_neg), (fine.n_pos, fine.n_neg));
    let [nu, nv, nt] = resolution;
    let report = ModularReport {
        resolution,
        y_max,
        truncation: series.truncation(),
        relative_tail_bound: series.relative_tail_bound(3f64.sqrt() / 2.0),
        count: dto(&count),
        expected_total: 4,
        side: side_face_check(&series, y_max, nv, nt).into(),
        front: front_face_check(&series, nu, nt).into(),
    };
    Ok(ModularRun {
        report,
        grid,
        labeling: coarse,
        series,
    })
}

/// Face samples for plotting: side (`x = -½`), front (`|z| = 1`) and top
/// (`y = y_max`), each labeled with the component of the adjacent cell.
pub fn face_rows(run: &ModularRun) -> Vec<FaceRow> {
    let g = &run.grid;
    let [nu, nv, nt] = g.dims;
    let s = &run.series;
    let solid = kknodal_core::modular::FundamentalSolid {
        y_max: g.params.y_max,
        resolution: g.dims,
    };
    let label = |i: usize, j: usize, k: usize| run.labeling.labels[g.index(i, j, k)];
    let mut rows = Vec::with_capacity(nt * (nv + 2 * nu));
    let mut push = |face: &'static str, x: f64, y: f64, cell: (usize, usize)| {
        let base = s.lift_base(x, y);
        for k in 0..nt {
            let theta = g.fiber_angle(k);
            let value = kknodal_core::fields::real_part(base, s.weight as i32, theta);
            rows.push(FaceRow {
                face,
                x,
                y,
                theta,
                value,
                sign: if value > 0.0 {
                    1
                } else if value < 0.0 {
                    -1
                } else {
                    0
                },
                label: label(cell.0, cell.1, k),
            });
        }
    };
    for j in 0..nv {
        let (x, y) = solid.chart(0.0, solid.v_center(j));
        push("side", x, y, (0, j));
    }
    for i in 0..nu {
        let (x, y) = solid.chart(solid.u_center(i), 0.0);
        push("front", x, y, (i, 0));
    }
    for i in 0..nu {
        let (x, y) = solid.chart(solid.u_center(i), 1.0);
        push("top", x, y, (i, nv - 1));
    }
    debug_assert!(matches!(g.cell(g.index(nu - 1, nv - 1, nt - 1)), Cell::Lattice { .. }));
    rows
}

// --------------------------------------------------------------- sphere

#[derive(Debug, Clone, Serialize)]
pub struct HopfCheck {
    pub degree: u32,
    pub m1: i32,
    pub m2: i32,
    pub eigenvalue: f64,
    pub residual: f64,
    pub coarse: bool,
    pub alpha_zeros: Vec<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct MaassDto {
    pub weight: i32,
    pub eigenvalue: f64,
    pub residual: f64,
    pub coarse: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct LadderDto {
    pub k: i32,
    pub residual: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SphereReport {
    pub h: f64,
    pub hopf: Vec<HopfCheck>,
    pub maass: MaassDto,
    pub ladder: Vec<LadderDto>,
}

pub const HOPF_TOL: f64 = 1e-4;
pub const MAASS_TOL: f64 = 1e-5;
pub const LADDER_TOL: f64 = 1e-4;

impl SphereReport {
    pub fn hopf_passed(&self) -> bool {
        self.hopf.iter().all(|c| c.residual < HOPF_TOL)
    }

    pub fn maass_passed(&self) -> bool {
        self.maass.weight == 6 && (self.maass.eigenvalue - 30.0).abs() < 1e-3 && self.maass.residual < MAASS_TOL
    }

    pub fn ladder_passed(&self) -> bool {
        self.ladder.iter().all(|l| l.residual < LADDER_TOL)
    }

    pub fn passed(&self) -> bool {
        self.hopf_passed() && self.maass_passed() && self.ladder_passed()
    }
}

pub const HOPF_CASES: [(u32, i32, i32); 3] = [(2, 0, 1), (4, 1, 1), (6, 1, 2)];

/// `y⁶Δ(z)` sampled on a 41×41 square with corner `-0.05 + 0.95i`.
pub fn delta_lift_grid(h: f64) -> anyhow::Result<PlaneGrid> {
    let d = delta_coeffs(60)?;
    Ok(PlaneGrid::sample(-0.05, 0.95, h, 41, 41, |x, y| {
        d.eval_unchecked(Complex64::new(x, y)) * y.powi(6)
    }))
}

pub fn sphere_check(h: f64) -> anyhow::Result<SphereReport> {
    let grid = HopfGrid::interior(0.1, 9, 4, 4);
    let mut hopf = Vec::new();
    for (n, m1, m2) in HOPF_CASES {
        let e = HopfEigenfunction::new(n, m1, m2)?;
        let r = s3_laplace_residual(&e, &grid, h)?;
        hopf.push(HopfCheck {
            degree: n,
            m1,
            m2,
            eigenvalue: e.eigenvalue(),
            residual: r.value,
            coarse: r.coarse,
            alpha_zeros: alpha_factor_zeros(&e),
        });
    }
    let g = delta_lift_grid(h)?;
    let fit = maass_scan(&[6, -6, 12, -12], &g)?;
    let ladder = [6, 0, 12]
        .into_iter()
        .map(|k| {
            Ok(LadderDto {
                k,
                residual: ladder_identity_residual(k, &g)?,
            })
        })
        .collect::<Result<Vec<_>, Error>>()?;
    Ok(SphereReport {
        h,
        hopf,
        maass: MaassDto {
            weight: fit.weight,
            eigenvalue: fit.eigenvalue,
            residual: fit.residual,
            coarse: fit.coarse,
        },
        ladder,
    })
}

// ---------------------------------------------------------------- fibers

#[derive(Debug, Clone, Serialize)]
pub struct FiberReport {
    pub m: u32,
    pub samples: usize,
    pub n_theta: usize,
    pub failures: usize,
}

/// Sign changes around `count` random regular fibers of weight `m`: the
/// `Δ²` lift for `m = 24`, random trigonometric fields otherwise.
pub fn fiber_counts(ms: &[u32], count: usize, seed: u64) -> anyhow::Result<Vec<FiberReport>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d2 = delta_squared()?;
    let mut out = Vec::new();
    for &m in ms {
        let n_theta = (48 * m as usize).max(64);
        let mut failures = 0;
        let mut samples = 0;
        while samples < count {
            let (field, point) = if m == 24 {
                let x: f64 = rng.gen_range(-0.5..0.5);
                let y: f64 = rng.gen_range((1.0 - x * x).sqrt()..2.0);
                (d2.clone().lift_field(), BasePoint::new(ChartId::UpperHalfPlane, x, y))
            } else {
                let t = TrigField::random(&mut rng, 2);
                let p = BasePoint::new(ChartId::Plane, rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5));
                (EquivariantField::new(m as i32, ChartId::Plane, move |x| t.eval(x)), p)
            };
            match fiber_zero_count(&field, &point, n_theta) {
                Ok(n) => {
                    samples += 1;
                    if n != 2 * m as usize {
                        failures += 1;
                    }
                }
                // a base zero: not a regular fiber, draw again
                Err(Error::SingularFiber { .. }) => continue,
                Err(e) => return Err(e.into()),
            }
        }
        out.push(FiberReport {
            m,
            samples,
            n_theta,
            failures,
        });
    }
    Ok(out)
}

// ----------------------------------------------------------------- index

#[derive(Debug, Clone, Serialize)]
pub struct ZeroIndex {
    pub center: [f64; 2],
    pub degree: i64,
    pub index: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct IndexField {
    pub field: CosSinField,
    pub expected_zeros: usize,
    pub zeros: Vec<ZeroIndex>,
    pub degree_sum: i64,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct IndexReport {
    pub m: u32,
    pub lattice: usize,
    pub fields: Vec<IndexField>,
}

impl IndexReport {
    pub fn passed(&self) -> bool {
        self.fields.iter().all(|f| f.passed)
    }
}

/// Winding indices of the zeros of random `cos·cos + i·sin·sin` torus fields.
pub fn index_experiment(count: usize, m: u32, lattice: usize, seed: u64) -> anyhow::Result<IndexReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // offsets keep zeros off lattice nodes
    let lat = PlaneLattice::unit_torus(lattice, [0.3731, 0.2113]);
    let mut fields = Vec::with_capacity(count);
    for _ in 0..count {
        let field = CosSinField::random(&mut rng);
        let f = move |x: [f64; 2]| field.eval(x);
        let centers = zero_clusters(&base_zero_cells(&f, &lat), &lat);
        let radius = 0.25 * field.min_zero_spacing();
        let mut zeros = Vec::with_capacity(centers.len());
        let mut ok = centers.len() == field.zero_count();
        for c in centers {
            match winding_index(&f, c, radius, 64, m) {
                Ok(w) => {
                    ok &= w.degree.abs() == 1;
                    zeros.push(ZeroIndex {
                        center: c,
                        degree: w.degree,
                        index: w.value(),
                    });
                }
                Err(_) => ok = false,
            }
        }
        let degree_sum = zeros.iter().map(|z| z.degree).sum();
        fields.push(IndexField {
            field,
            expected_zeros: field.zero_count(),
            passed: ok && degree_sum == 0,
            zeros,
            degree_sum,
        });
    }
    Ok(IndexReport { m, lattice, fields })
}

// ----------------------------------------------------------------- graph

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum FieldKind {
    /// `x + iy`, one simple zero.
    Linear,
    /// A unit-modulus plane wave, no zeros.
    Strip,
    /// Two simple zeros.
    TwoZeros,
    /// Seeded random trigonometric polynomials.
    Random,
}

pub fn fixed_field(kind: FieldKind) -> Option<fn([f64; 2]) -> Complex64> {
    fn linear(p: [f64; 2]) -> Complex64 {
        Complex64::new(p[0] + 0.013, p[1] - 0.007)
    }
    fn strip(p: [f64; 2]) -> Complex64 {
        Complex64::from_polar(1.0, 5.0 * (p[0] + 0.05))
    }
    fn two(p: [f64; 2]) -> Complex64 {
        Complex64::new(p[0] + 0.011, p[1] - 0.013) * Complex64::new(p[0] - 0.3, p[1] - 0.013)
    }
    match kind {
        FieldKind::Linear => Some(linear),
        FieldKind::Strip => Some(strip),
        FieldKind::TwoZeros => Some(two),
        FieldKind::Random => None,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GraphComparison {
    pub m: usize,
    /// Graph component counts at the base and doubled disc resolution.
    pub graph: [usize; 2],
    pub grid: CountDto,
    /// Two regions of each partition meet pairwise with complementary
    /// colors, which forces exactly two domains.
    pub crossing: bool,
    pub within_2m: bool,
    /// `!crossing` or the graph count is 2.
    pub crossing_ok: bool,
    pub agree: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct GraphField {
    pub seed_index: usize,
    pub comparisons: Vec<GraphComparison>,
}

#[derive(Debug, Clone, Serialize)]
pub struct GraphReport {
    pub resolution: [usize; 3],
    pub fields: Vec<GraphField>,
    /// Random draws rejected by the genericity check.
    pub rejected_non_generic: usize,
    /// Rejections by reason: `degenerate`, `extended`, `loop`, or
    /// `refined` (generic at the base resolution but not when doubled).
    pub rejections: BTreeMap<&'static str, usize>,
}

impl GraphReport {
    pub fn comparisons(&self) -> impl Iterator<Item = &GraphComparison> {
        self.fields.iter().flat_map(|f| f.comparisons.iter())
    }

    pub fn mismatches(&self) -> usize {
        self.comparisons().filter(|c| !c.agree).count()
    }

    pub fn passed(&self) -> bool {
        self.comparisons().all(|c| c.agree && c.within_2m && c.crossing_ok)
    }
}

fn disc_grid(n: usize) -> kknodal_core::Result<ChartGrid> {
    ChartGrid::disc_base(GridParams::default(), n)
}

/// Graph count against the grid count for one field, or the reason the field
/// was rejected as non-generic.
pub fn compare_field<F>(
    f: F,
    ms: &[usize],
    resolution: [usize; 3],
    par: &Parallelism,
) -> anyhow::Result<Result<Vec<GraphComparison>, &'static str>>
where
    F: Fn([f64; 2]) -> Complex64 + Clone + Send + Sync + 'static,
{
    let [n, _, _] = resolution;
    let coarse_disc = disc_grid(n)?;
    let fine_disc = disc_grid(2 * n)?;
    let pp = match partitions_from_field(&f, &coarse_disc, 0.0, true) {
        Ok(pp) => pp,
        Err(Error::DegenerateField(_)) => return Ok(Err("degenerate")),
        Err(e) => return Err(e.into()),
    };
    match generic_pair_diagnostic(&pp) {
        Genericity::Generic => {}
        Genericity::Extended { .. } => return Ok(Err("extended")),
        Genericity::Loop => return Ok(Err("loop")),
    }
    let crossing = crossing_witness(&pp).is_some();
    let mut out = Vec::with_capacity(ms.len());
    for &m in ms {
        let g0 = graph_components(&build_graph(&pp, m));
        let g1 = match count_via_graph(&f, m, &fine_disc) {
            Ok(c) => c,
            Err(Error::NonGeneric(_)) => return Ok(Err("refined")),
            Err(e) => return Err(e.into()),
        };
        let field = EquivariantField::new(m as i32, ChartId::Plane, f.clone());
        let sampler = Sampler::Equivariant(&field);
        let params = GridParams::default();
        let mut res = resolution;
        let mut c = par::count_nodal_domains(sampler, ManifoldTag::Disc2xCircle, res, params, 0.0, par)?;
        if !c.converged {
            // one more doubling before giving up
            res = kknodal_core::nodal::doubled(res);
            c = par::count_nodal_domains(sampler, ManifoldTag::Disc2xCircle, res, params, 0.0, par)?;
        }
        let agree = c.converged && g0 == g1 && g1 == c.total();
        out.push(GraphComparison {
            m,
            graph: [g0, g1],
            grid: dto(&c),
            crossing,
            within_2m: g0 <= 2 * m && g1 <= 2 * m,
            crossing_ok: !crossing || g0 == 2,
            agree,
        });
    }
    Ok(Ok(out))
}

/// Partition-graph counts against the grid on `count` generic random fields
/// (or one fixed field), for each weight in `ms`.
pub fn graph_experiment(
    kind: FieldKind,
    ms: &[usize],
    count: usize,
    seed: u64,
    resolution: [usize; 3],
    par: &Parallelism,
) -> anyhow::Result<GraphReport> {
    let mut fields = Vec::new();
    let mut rejections = BTreeMap::new();
    if let Some(f) = fixed_field(kind) {
        let comparisons = compare_field(f, ms, resolution, par)?
            .map_err(|why| anyhow::anyhow!("the {kind:?} field failed the genericity check ({why})"))?;
        fields.push(GraphField {
            seed_index: 0,
            comparisons,
        });
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut draw = 0;
        while fields.len() < count {
            if draw >= 20 * count.max(1) {
                anyhow::bail!(
                    "only {} of {count} random fields passed the genericity check",
                    fields.len()
                );
            }
            let t = TrigField::random(&mut rng, 2);
            let f = move |p: [f64; 2]| t.eval(p);
            match compare_field(f, ms, resolution, par)? {
                Ok(comparisons) => fields.push(GraphField {
                    seed_index: draw,
                    comparisons,
                }),
                Err(why) => *rejections.entry(why).or_insert(0) += 1,
            }
            draw += 1;
        }
    }
    Ok(GraphReport {
        resolution,
        fields,
        rejected_non_generic: rejections.values().sum(),
        rejections,
    })
}

/// Graph of a fixed field at the base resolution, for export.
pub fn fixed_graph(kind: FieldKind, m: usize, n: usize) -> anyhow::Result<LayeredGraph> {
    let f = fixed_field(kind).ok_or_else(|| anyhow::anyhow!("graph export needs a fixed field"))?;
    let pp = partitions_from_field(&f, &disc_grid(n)?, 0.0, true)?;
    Ok(build_graph(&pp, m))
}
