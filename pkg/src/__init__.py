"""
DoS Impact Simulator
Economic impact of denial-of-service attacks from time-preference dynamics
"""

__version__ = "1.0.0"
