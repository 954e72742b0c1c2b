//! POVMs, their decomposition in the operator basis, the stacked design
//! matrix with its left inverse, Born-rule probabilities, and a seeded
//! count simulator.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Result, TomoError};
use crate::operator::{hermitian_eig, ComplexMatrix, DensityMatrix, OperatorBasis};

/// Tolerance on effect positivity and completeness.
pub const POVM_TOL: f64 = 1e-10;

/// Condition number of `AᵀA` above which a measurement set is rejected.
pub const MAX_CONDITION: f64 = 1e12;

/// One measurement setting: PSD effects summing to the identity.
#[derive(Debug, Clone, PartialEq)]
pub struct Povm {
    dim: usize,
    effects: Vec<ComplexMatrix>,
}

impl Povm {
    pub fn new(effects: Vec<ComplexMatrix>) -> Result<Self> {
        let first = effects
            .first()
            .ok_or_else(|| TomoError::InvalidArgument("POVM needs at least one effect".into()))?;
        let dim = first.dim()?;
        let mut sum = ComplexMatrix::zeros(dim, dim);
        for e in &effects {
            if e.dim()? != dim {
                return Err(TomoError::DimensionMismatch {
                    context: "POVM effect",
                    expected: dim,
                    found: e.rows(),
                });
            }
            let deviation = e.hermiticity_error();
            if deviation > POVM_TOL {
                return Err(TomoError::NotHermitian { deviation });
            }
            let min_eigenvalue = hermitian_eig(e)?.min_value();
            if min_eigenvalue < -POVM_TOL {
                return Err(TomoError::NotPositive { min_eigenvalue });
            }
            sum += e;
        }
        let deviation = sum.max_abs_diff(&ComplexMatrix::identity(dim));
        if deviation > POVM_TOL {
            return Err(TomoError::NotComplete { deviation });
        }
        Ok(Self { dim, effects })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn effects(&self) -> &[ComplexMatrix] {
        &self.effects
    }

    pub fn num_outcomes(&self) -> usize {
        self.effects.len()
    }

    /// `U† Π U` applied to every effect.
    pub fn rotated(&self, u: &ComplexMatrix) -> Result<Self> {
        let adj = u.adjoint();
        Povm::new(self.effects.iter().map(|e| e.conjugate_by(&adj)).collect())
    }
}

/// Ordered, nonempty list of measurement settings of a common dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct PovmSet {
    povms: Vec<Povm>,
}

impl PovmSet {
    pub fn new(povms: Vec<Povm>) -> Result<Self> {
        let dim = povms
            .first()
            .ok_or_else(|| TomoError::InvalidArgument("POVM set is empty".into()))?
            .dim;
        if let Some(p) = povms.iter().find(|p| p.dim != dim) {
            return Err(TomoError::DimensionMismatch {
                context: "POVM set",
                expected: dim,
                found: p.dim,
            });
        }
        Ok(Self { povms })
    }

    pub fn dim(&self) -> usize {
        self.povms[0].dim
    }

    pub fn povms(&self) -> &[Povm] {
        &self.povms
    }

    pub fn len(&self) -> usize {
        self.povms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.povms.is_empty()
    }

    pub fn outcome_counts(&self) -> Vec<usize> {
        self.povms.iter().map(Povm::num_outcomes).collect()
    }
}

/// Identity coefficient and basis coefficients of one effect:
/// `Π = a0·I + Σ_i a_i λ_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct EffectDecomposition {
    pub a0: f64,
    pub a: Vec<f64>,
}

pub fn povm_decompose(povm: &Povm, basis: &OperatorBasis) -> Result<Vec<EffectDecomposition>> {
    if povm.dim != basis.dim() {
        return Err(TomoError::DimensionMismatch {
            context: "POVM vs basis",
            expected: basis.dim(),
            found: povm.dim,
        });
    }
    let d = povm.dim as f64;
    Ok(povm
        .effects
        .iter()
        .map(|e| EffectDecomposition {
            a0: e.trace().re / d,
            a: basis.coordinates(e).into_iter().map(|v| v / 2.0).collect(),
        })
        .collect())
}

/// Stacked decompositions of a POVM set and the least-squares left inverse
/// `A_L = (AᵀA)⁻¹Aᵀ`.
///
/// Rows are flattened as settings in order, outcomes in order within each
/// setting.
#[derive(Debug, Clone)]
pub struct DesignMatrix {
    dim: usize,
    a0: Vec<f64>,
    a: DMatrix<f64>,
    left_inverse: DMatrix<f64>,
    row_index: Vec<(usize, usize)>,
    offsets: Vec<usize>,
    condition: f64,
}

impl DesignMatrix {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn a0(&self) -> &[f64] {
        &self.a0
    }

    pub fn a(&self) -> &DMatrix<f64> {
        &self.a
    }

    pub fn left_inverse(&self) -> &DMatrix<f64> {
        &self.left_inverse
    }

    /// `(setting, outcome)` for every flattened row.
    pub fn row_index(&self) -> &[(usize, usize)] {
        &self.row_index
    }

    /// Flat row of `(setting, outcome)`.
    pub fn flat_row(&self, setting: usize, outcome: usize) -> usize {
        self.offsets[setting] + outcome
    }

    pub fn num_settings(&self) -> usize {
        self.offsets.len()
    }

    pub fn num_outcomes(&self, setting: usize) -> usize {
        let end = self
            .offsets
            .get(setting + 1)
            .copied()
            .unwrap_or(self.row_index.len());
        end - self.offsets[setting]
    }

    /// Flat rows belonging to one setting.
    pub fn setting_rows(&self, setting: usize) -> std::ops::Range<usize> {
        let start = self.offsets[setting];
        start..start + self.num_outcomes(setting)
    }

    /// Condition number of `AᵀA`.
    pub fn condition(&self) -> f64 {
        self.condition
    }
}

pub fn build_design(povms: &PovmSet, basis: &OperatorBasis) -> Result<DesignMatrix> {
    let dim = povms.dim();
    let params = basis.len();
    let mut a0 = Vec::new();
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut row_index = Vec::new();
    let mut offsets = Vec::with_capacity(povms.len());
    for (j, povm) in povms.povms().iter().enumerate() {
        offsets.push(rows.len());
        for (m, dec) in povm_decompose(povm, basis)?.into_iter().enumerate() {
            a0.push(dec.a0);
            rows.push(dec.a);
            row_index.push((j, m));
        }
    }
    let a = DMatrix::from_fn(rows.len(), params, |r, c| rows[r][c]);

    let normal = a.transpose() * &a;
    let eig = normal.clone().symmetric_eigen();
    let max = eig.eigenvalues.max();
    let min = eig.eigenvalues.min();
    let condition = if min > 0.0 { max / min } else { f64::INFINITY };
    if params == 0 || condition.is_nan() || condition > MAX_CONDITION {
        return Err(TomoError::NotInformationallyComplete { condition });
    }
    let inv_values = DVector::from_iterator(params, eig.eigenvalues.iter().map(|w| 1.0 / w));
    let normal_inv =
        &eig.eigenvectors * DMatrix::from_diagonal(&inv_values) * eig.eigenvectors.transpose();
    let left_inverse = normal_inv * a.transpose();

    Ok(DesignMatrix {
        dim,
        a0,
        a,
        left_inverse,
        row_index,
        offsets,
        condition,
    })
}

/// `p_m = tr(ρ Π_m)`, clipped to `[0, 1]`.
pub fn born_probabilities(rho: &DensityMatrix, povm: &Povm) -> Result<Vec<f64>> {
    if rho.dim() != povm.dim {
        return Err(TomoError::DimensionMismatch {
            context: "state vs POVM",
            expected: povm.dim,
            found: rho.dim(),
        });
    }
    Ok(povm
        .effects
        .iter()
        .map(|e| rho.matrix().trace_product(e).re.clamp(0.0, 1.0))
        .collect())
}

/// Exact outcome frequencies for every setting (the infinite-shot limit).
pub fn exact_frequencies(rho: &DensityMatrix, povms: &PovmSet) -> Result<Vec<Vec<f64>>> {
    povms
        .povms()
        .iter()
        .map(|p| born_probabilities(rho, p))
        .collect()
}

/// Outcome counts `n_m^(j)` per setting with shot totals `n^(j)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "CountsFile", into = "CountsFile")]
pub struct MeasurementRecord {
    shots: Vec<u64>,
    counts: Vec<Vec<u64>>,
}

#[derive(Serialize, Deserialize)]
struct CountsFile {
    shots: Vec<u64>,
    counts: Vec<Vec<u64>>,
}

impl TryFrom<CountsFile> for MeasurementRecord {
    type Error = TomoError;

    fn try_from(f: CountsFile) -> Result<Self> {
        MeasurementRecord::new(f.shots, f.counts)
    }
}

impl From<MeasurementRecord> for CountsFile {
    fn from(r: MeasurementRecord) -> Self {
        CountsFile {
            shots: r.shots,
            counts: r.counts,
        }
    }
}

impl MeasurementRecord {
    pub fn new(shots: Vec<u64>, counts: Vec<Vec<u64>>) -> Result<Self> {
        if shots.len() != counts.len() {
            return Err(TomoError::MisalignedRecord(format!(
                "{} shot totals for {} settings",
                shots.len(),
                counts.len()
            )));
        }
        if shots.is_empty() {
            return Err(TomoError::MisalignedRecord("record has no settings".into()));
        }
        for (j, (&n, c)) in shots.iter().zip(&counts).enumerate() {
            if n == 0 {
                return Err(TomoError::ZeroShots { setting: j });
            }
            let total: u64 = c.iter().sum();
            if total != n {
                return Err(TomoError::MisalignedRecord(format!(
                    "setting {j}: counts sum to {total}, shots are {n}"
                )));
            }
        }
        Ok(Self { shots, counts })
    }

    pub fn shots(&self) -> &[u64] {
        &self.shots
    }

    pub fn counts(&self) -> &[Vec<u64>] {
        &self.counts
    }

    pub fn total_shots(&self) -> u64 {
        self.shots.iter().sum()
    }

    /// `f_(j,m) = n_m^(j) / n^(j)`
    pub fn frequencies(&self) -> Vec<Vec<f64>> {
        self.counts
            .iter()
            .zip(&self.shots)
            .map(|(c, &n)| c.iter().map(|&k| k as f64 / n as f64).collect())
            .collect()
    }

    /// Checks that the record's shape matches the design's settings/outcomes.
    pub fn check_aligned(&self, design: &DesignMatrix) -> Result<()> {
        check_shape(&self.counts, design)
    }
}

pub(crate) fn check_shape<T>(rows: &[Vec<T>], design: &DesignMatrix) -> Result<()> {
    if rows.len() != design.num_settings() {
        return Err(TomoError::MisalignedRecord(format!(
            "{} settings in data, {} in the measurement set",
            rows.len(),
            design.num_settings()
        )));
    }
    for (j, r) in rows.iter().enumerate() {
        if r.len() != design.num_outcomes(j) {
            return Err(TomoError::MisalignedRecord(format!(
                "setting {j}: {} outcomes in data, {} effects in the POVM",
                r.len(),
                design.num_outcomes(j)
            )));
        }
    }
    Ok(())
}

/// Draws `shots[j]` categorical samples for each setting `j`.
///
/// Generator: ChaCha8 seeded with `seed_from_u64(seed)`, stream number `j`
/// selected with `set_stream(j)`. Each sample takes one `f64` uniform in
/// `[0, 1)` and picks the first outcome whose cumulative probability
/// exceeds it. Settings use independent streams, so results do not depend
/// on evaluation order.
pub fn simulate_counts(
    rho: &DensityMatrix,
    povms: &PovmSet,
    shots: &[u64],
    seed: u64,
) -> Result<MeasurementRecord> {
    if shots.len() != povms.len() {
        return Err(TomoError::MisalignedRecord(format!(
            "{} shot totals for {} settings",
            shots.len(),
            povms.len()
        )));
    }
    if let Some(j) = shots.iter().position(|&n| n == 0) {
        return Err(TomoError::ZeroShots { setting: j });
    }
    let mut counts = Vec::with_capacity(povms.len());
    for (j, (povm, &n)) in povms.povms().iter().zip(shots).enumerate() {
        let probs = born_probabilities(rho, povm)?;
        counts.push(sample_categorical(&probs, n, seed, j as u64));
    }
    MeasurementRecord::new(shots.to_vec(), counts)
}

fn sample_categorical(probs: &[f64], shots: u64, seed: u64, stream: u64) -> Vec<u64> {
    let mut cdf = Vec::with_capacity(probs.len());
    let mut acc = 0.0;
    for &p in probs {
        acc += p;
        cdf.push(acc);
    }
    // Roundoff can leave the total a hair below 1; such draws go to the last
    // outcome with nonzero probability.
    let fallback = probs
        .iter()
        .rposition(|&p| p > 0.0)
        .unwrap_or(probs.len() - 1);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let mut counts = vec![0u64; probs.len()];
    for _ in 0..shots {
        let u: f64 = rng.random();
        let m = cdf.iter().position(|&c| u < c).unwrap_or(fallback);
        counts[m] += 1;
    }
    counts
}

#[derive(Serialize, Deserialize)]
struct PovmJson {
    effects: Vec<ComplexMatrix>,
}

#[derive(Serialize, Deserialize)]
struct PovmSetJson {
    povms: Vec<PovmJson>,
}

impl Serialize for PovmSet {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        PovmSetJson {
            povms: self
                .povms
                .iter()
                .map(|p| PovmJson {
                    effects: p.effects.clone(),
                })
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for PovmSet {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        use serde::de::Error;
        let raw = PovmSetJson::deserialize(deserializer)?;
        let povms = raw
            .povms
            .into_iter()
            .map(|p| Povm::new(p.effects))
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        PovmSet::new(povms).map_err(D::Error::custom)
    }
}
