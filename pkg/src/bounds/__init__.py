# Bound modules
"""
Partition bounds, comparison certificates, closed-form bound families and
the randomized property suites that exercise them.
"""
