# Data package for mdresolve
