"""
The `harness` app is the command-line front end of the package.

Run configurations are YAML files whose sections are validated by the Django forms in
`forms`. Every error is reported with its line number before any computation starts.
The management commands ``quasiprob``, ``lgi``, ``switch``, ``sweep`` and ``verify``
turn a validated `forms.RunConfig` into results, which `ioports` writes as
``result.json``, ``table.csv`` and ``manifest.json`` into the run directory. The
invariant suite behind ``verify`` lives in `checks`.

Exit codes: 0 on success, 1 when an invariant fails, 2 for an invalid configuration.
"""
