# discbound - bracketing covers and star-discrepancy bounds
__version__ = "0.1.0"
