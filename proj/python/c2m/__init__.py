"""C-subset to temporal-logic translation with differential checking.

Thin re-export of the native module `_c2m`:

- translate(source, canonical=True) -> {ok, translated, diagnostics}
- run_c(source, fuel=1000000, externs="{}") -> run result for the C side
- run_m(source, fuel=1000000, externs="{}") -> run result for the target side
- diff(source, fuel=1000000, externs="{}") -> equivalence verdict
"""

from _c2m import diff, run_c, run_m, translate

__all__ = ["translate", "run_c", "run_m", "diff"]
