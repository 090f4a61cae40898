"""
legendre-ep: Associated Legendre functions at the exceptional orders mu = -1/2 - K.

Precision P and Q evaluation, exceptional-point pole scans, normalization
integrals of the conical functions, and an identity verification suite.
"""
