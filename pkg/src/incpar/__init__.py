"""Sequential and parallel randomized incremental algorithms with dependence metering."""

__version__ = "0.1.0"
