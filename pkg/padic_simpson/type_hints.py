"""Flag for imports only needed by type comments.
Type checkers treat it as True, so `typing` is never imported at runtime.
"""

TYPE_CHECKING = False
