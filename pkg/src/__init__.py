# RootBound source package
"""
Certified spectral radius bounds through rooted matrices, and the extremal
(0,1)-matrix search built on them.
"""
