"""Cross-spectral radiance fields: one scene representation jointly fitted to
cameras of different spectra, resolutions and fields of view."""

__version__ = "0.1.0"
