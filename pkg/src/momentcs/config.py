"""``key = value`` configuration files.

Blank lines and ``#`` comments are ignored. Keys are case-insensitive and
dashes are treated as underscores, so ``patch-size = 8`` and
``patch_size = 8`` are equivalent.
"""

from momentcs.errors import InvalidArgument


def read_config(path):
    values = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise InvalidArgument(f"{path}:{lineno}: expected 'key = value', got {raw.strip()!r}")
            key, value = (part.strip() for part in line.split("=", 1))
            if not key:
                raise InvalidArgument(f"{path}:{lineno}: empty key")
            values[key.lower().replace("-", "_")] = value
    return values


def parse_bool(text):
    lowered = str(text).strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise InvalidArgument(f"expected a boolean, got {text!r}")


def parse_list(text, cast=str):
    if isinstance(text, (list, tuple)):
        return [cast(v) for v in text]
    return [cast(v.strip()) for v in str(text).split(",") if v.strip()]
