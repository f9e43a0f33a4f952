"""Test suite for the KMF data-completion toolkit."""
