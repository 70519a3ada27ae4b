"""Alerting-authority assurance scanner and CT history analytics."""

__version__ = "0.1.0"
