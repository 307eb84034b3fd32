"""Camera-trap monitoring platform.

Ingests images from field cameras over SMTP or REST, runs them through a
pluggable object detector, persists detections, raises species alerts, and
ships the dataset-preparation and evaluation tooling used to build and
assess the detector.
"""

__version__ = "0.1.0"
