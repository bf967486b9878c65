"""frame-extractor: speech encoder frame embeddings -> .gsf corpus."""

from .alignments import interior_boundaries, read_alignments
from .audio import TARGET_SAMPLE_RATE, load_waveform
from .errors import DataError, ExtractorError, FormatError, UsageError
from .extract import MANIFEST_NAME, ExtractionJob, ExtractionResult, FileFailure, extract
from .gsf import MAGIC, write_features

__version__ = "0.1.0"

__all__ = [
    "DataError",
    "ExtractionJob",
    "ExtractionResult",
    "ExtractorError",
    "FileFailure",
    "FormatError",
    "MAGIC",
    "MANIFEST_NAME",
    "TARGET_SAMPLE_RATE",
    "UsageError",
    "extract",
    "interior_boundaries",
    "load_waveform",
    "read_alignments",
    "write_features",
    "__version__",
]
