"""
The `switch` app simulates the quantum-switch Mach-Zehnder interferometer in which a
polarizing beam splitter coherently superposes the two orders of two measurements.

Three registers are tracked as one vector ``system ⊗ path ⊗ polarization``:

-   the measured system, prepared in the reference state ``|s⟩`` (the system input),
-   the path, ``ψ_H``/``ψ_V`` inside the interferometer and ``ψ₃``/``ψ₄`` after the
    recombining beam splitter,
-   the polarization, ``H``/``V`` before and ``+``/``-`` after the final rebasing.

The measurements enter as Kraus operators (projectors, or ``√E`` for unsharp ones).
Branch amplitudes are the overlaps of the system register with ``|s⟩``, so that the
post-selected amplitude at ``(ψ₃, +)`` reveals the two-time quasiprobability with its
sign. The building blocks live in `config`, the simulation in `simulate`.
"""
