"""Golay complementary pulse trains with jointly designed transmit/receive sequences."""

from .golay import (
    ChipWaveform,
    GolayPair,
    autocorrelation,
    generate_golay_pair,
    sample_waveform,
    verify_complementary,
)
from .search import max_snr_exact, max_snr_search, maxsnr_design
from .seqdesign import (
    DesignReport,
    InfeasibleSearchError,
    PQDesign,
    alternating_sequence,
    binomial_design,
    binomial_weights,
    conventional_design,
    difference_basis,
    null_order,
    output_noise_power,
    ptm_design,
    ptm_sequence,
    snr_ratio,
    vandermonde_check,
)

__version__ = "0.1.0"
