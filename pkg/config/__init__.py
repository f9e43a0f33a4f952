"""Configuration module for the KMF data-completion toolkit."""

from .settings import Settings, get_settings, reset_settings

__all__ = ["Settings", "get_settings", "reset_settings"]
