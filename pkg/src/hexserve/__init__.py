"""Urban micro-region delivery service-time toolkit.

Tessellates cities into hexagonal cells, counts OpenStreetMap tags per cell,
fits a probabilistic (log-normal) service-time model with natural-gradient
boosting, evaluates it with k-fold cross-validation, clusters cells by their
significant tags, and exports results as GeoJSON.
"""

__version__ = "0.1.0"
