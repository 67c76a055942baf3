# Tests package for RootBound
