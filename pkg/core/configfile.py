# core/configfile.py
"""
Flat ``key = value`` files with ``[section]`` headers.

    # comment
    [detector]
    eta_c = 0.3
    nu = 1.7e-5     # inline comment

Only the syntax lives here: every value stays a string together with the
line it came from. Typing and validation are done by the forms of the app
that owns the section, which report problems against these line numbers.
"""

from dataclasses import dataclass, field

from core.exceptions import ConfigError

COMMENT_PREFIXES = ("#", ";")


@dataclass
class ConfigEntry:
    value: str
    line: int


@dataclass
class ConfigSection:
    name: str
    line: int
    entries: dict = field(default_factory=dict)

    def values(self):
        return {key: entry.value for key, entry in self.entries.items()}

    def line_of(self, key):
        entry = self.entries.get(key)
        return entry.line if entry else self.line


def _strip_inline_comment(text):
    for marker in (" #", "\t#", " ;", "\t;"):
        position = text.find(marker)
        if position != -1:
            text = text[:position]
    return text.strip()


def parse_sections(text):
    """
    Parse configuration text into an ordered ``{name: ConfigSection}`` map.

    Raises
    ------
    ConfigError
        On malformed lines, keys outside a section, duplicate sections or
        duplicate keys.
    """
    sections = {}
    current = None

    for number, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()

        if not stripped or stripped.startswith(COMMENT_PREFIXES):
            continue

        if stripped.startswith("["):
            if not stripped.endswith("]") or len(stripped) < 3:
                raise ConfigError(f"malformed section header {stripped!r}", line=number)
            name = stripped[1:-1].strip()
            if name in sections:
                raise ConfigError(f"duplicate section [{name}]", line=number)
            current = ConfigSection(name=name, line=number)
            sections[name] = current
            continue

        if "=" not in stripped:
            raise ConfigError(f"expected 'key = value', got {stripped!r}", line=number)

        key, value = stripped.split("=", 1)
        key = key.strip()
        value = _strip_inline_comment(value)

        if current is None:
            raise ConfigError(f"key {key!r} appears before any [section]", line=number)
        if not key:
            raise ConfigError("empty key", line=number)
        if key in current.entries:
            raise ConfigError(
                "duplicate key", line=number, key=f"{current.name}.{key}"
            )
        if not value:
            raise ConfigError("empty value", line=number, key=f"{current.name}.{key}")

        current.entries[key] = ConfigEntry(value=value, line=number)

    return sections


def render_sections(sections):
    """
    Inverse of parse_sections for ``{name: {key: value}}`` mappings.
    """
    blocks = []
    for name, entries in sections.items():
        lines = [f"[{name}]"]
        lines.extend(f"{key} = {value}" for key, value in entries.items())
        blocks.append("\n".join(lines))
    return "\n\n".join(blocks) + "\n"
