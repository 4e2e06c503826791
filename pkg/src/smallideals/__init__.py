"""Schlumprecht and Schreier norms, core trees with tower-size parameters, and
certified checks for operators built from block sequences."""

__version__ = "0.1.0"
