"""Wave-coherence simulator for phase-controlled Hong-Ou-Mandel interference."""

from .analysis import (CurveMetrics, DegenerateCurveError, FitResult, curve_metrics,
                       fit_gaussian_envelope)
from .correlation import (CorrelationCurve, XiSweep, analytic_coincidence, analytic_curve,
                          analytic_filtered_coincidence, ensemble_coincidence,
                          filtered_coincidence, noon_correlation, pair_coincidence, xi_sweep)
from .csvio import CsvFormatError, read_csv, write_csv
from .ensemble import (BandPass, GaussianSpectrum, MonteCarlo, PairSamples, Quadrature,
                       mean_port_intensities, sample_detunings, single_term_intensity)
from .model import (FieldQuad, IntensityQuad, PairSample, PhaseConfig, bs_transform,
                    detuning_phase, output_fields, output_intensities, phase_ledger)

__version__ = "0.1.0"
