"""Polarization-to-entanglement conversion on truncated Fock spaces."""

from .fock import (
    ModeOperator,
    TruncatedState,
    TruncationError,
    TwoModeDensityMatrix,
    default_cutoff,
    hermitian_eigenvalues,
    make_operator,
    partial_trace_y,
    partial_transpose_x,
    tensor,
)
from .states import QuadSuperposition, coherent, displaced_fock, quad_superposition
from .optics import (
    ClosedFormPsi3,
    PdcConfig,
    PipelineInput,
    beam_splitter_5050,
    pdc_herald,
    relabel_polarization,
    run_pipeline,
)
from .metrics import (
    MetricsReport,
    SchmidtReport,
    WignerGrid,
    compute_metrics,
    extrema_cell,
    field_expectation,
    mandel_q,
    negativity_4x4,
    negativity_closed_form,
    negativity_numeric,
    schmidt_number,
    wigner_numeric,
    wigner_quad_superposition,
    wigner_reduced_x,
)
from .homodyne import quadrature_marginal, sample, validate_moments

__version__ = "0.1.0"
