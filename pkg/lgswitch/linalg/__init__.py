"""
The `linalg` app is the numerical substrate of all other apps: small dense complex
matrices and vectors stored as ``numpy`` arrays, with the few operations the
Leggett-Garg and interferometer computations need.

All functions are pure. They validate their inputs, raise one of the errors defined
in `core` on malformed operators, and never mutate their arguments.
"""
