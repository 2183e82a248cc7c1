"""Surface-EMG processing toolkit."""
from .core import (
    ChannelSignal,
    ComputationError,
    EmgError,
    Envelope,
    Epoch,
    EpochSeries,
    FeatureTable,
    PowerSpectrum,
    Recording,
    TestResult,
    ValidationError,
    make_recording,
)

__version__ = "0.1.0"

__all__ = [
    "ChannelSignal",
    "ComputationError",
    "EmgError",
    "Envelope",
    "Epoch",
    "EpochSeries",
    "FeatureTable",
    "PowerSpectrum",
    "Recording",
    "TestResult",
    "ValidationError",
    "make_recording",
]
