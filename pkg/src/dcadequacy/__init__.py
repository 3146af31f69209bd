"""Grid resource adequacy for datacenter load growth.

Computes loss-of-load expectation from annual traces and resource plans, the
largest datacenter load a grid can admit under reliable or curtailable power
contracts, the resulting datacenter outage statistics, and AI-driven
datacenter demand projections.
"""

__version__ = "0.1.0"
