"""KMF data-completion toolkit source package."""

__version__ = "0.1.0"
