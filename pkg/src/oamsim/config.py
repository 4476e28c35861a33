"""Strict key/value scenario configuration with nested sections.

Format: `[section]` or `[section.subsection]` headers, `key = value` entries,
`#` comments, blank lines ignored. Unknown sections or keys are errors (typo
protection), as are missing required entries. All physical quantities are SI:
frequencies in Hz, lengths in meters, angles in radians.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ConfigError


@dataclass(frozen=True)
class Entry:
    value: str
    line: int


@dataclass(frozen=True)
class ParsedConfig:
    sections: dict[str, dict[str, Entry]]
    section_lines: dict[str, int]

    def has(self, name: str) -> bool:
        return name in self.sections


def parse_config(text: str) -> ParsedConfig:
    """Parse the raw document into sections, preserving line numbers."""
    sections: dict[str, dict[str, Entry]] = {}
    section_lines: dict[str, int] = {}
    current = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("[") and line.endswith("]"):
            name = line[1:-1].strip()
            if not name:
                raise ConfigError("empty section name", line=lineno)
            if name in sections:
                raise ConfigError(f"duplicate section [{name}]", line=lineno)
            sections[name] = {}
            section_lines[name] = lineno
            current = name
            continue
        if "=" not in line:
            raise ConfigError(f"expected 'key = value', got {line!r}", line=lineno)
        if current is None:
            raise ConfigError("entry before any [section] header", line=lineno)
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if not key:
            raise ConfigError("empty key", line=lineno)
        if key in sections[current]:
            raise ConfigError(f"duplicate key '{key}' in [{current}]", line=lineno, field=key)
        sections[current][key] = Entry(value=value, line=lineno)
    return ParsedConfig(sections=sections, section_lines=section_lines)


@dataclass(frozen=True)
class Field:
    """Schema entry: kind in {'float','int','str','bool','floats','ints','enum'}."""

    kind: str
    required: bool = False
    default: object = None
    choices: tuple[str, ...] = ()


def _convert(field: Field, raw: str, line: int, key: str):
    try:
        if field.kind == "float":
            return float(raw)
        if field.kind == "int":
            v = float(raw)
            if v != int(v):
                raise ValueError("not an integer")
            return int(v)
        if field.kind == "str":
            return raw
        if field.kind == "bool":
            if raw.lower() in ("true", "yes", "on", "1"):
                return True
            if raw.lower() in ("false", "no", "off", "0"):
                return False
            raise ValueError("not a boolean")
        if field.kind == "floats":
            return [float(p) for p in raw.replace(",", " ").split()]
        if field.kind == "ints":
            return [int(p) for p in raw.replace(",", " ").split()]
        if field.kind == "enum":
            if raw not in field.choices:
                raise ValueError(f"must be one of {', '.join(field.choices)}")
            return raw
    except ValueError as exc:
        raise ConfigError(f"bad {field.kind} value {raw!r} ({exc})", line=line, field=key) from exc
    raise ConfigError(f"unknown schema kind {field.kind!r}", field=key)


def validate_config(parsed: ParsedConfig, schema: dict[str, dict[str, Field]],
                    required_sections: tuple[str, ...] = ()) -> dict[str, dict]:
    """Check sections/keys against the schema and return typed values.

    Unknown sections and keys are hard errors. Optional entries pick up their
    schema defaults; absent optional sections appear with all defaults.
    """
    for name in parsed.sections:
        if name not in schema:
            raise ConfigError(f"unknown section [{name}]", line=parsed.section_lines.get(name))
    for name in required_sections:
        if name not in parsed.sections:
            raise ConfigError(f"missing required section [{name}]")
    out: dict[str, dict] = {}
    for name, fields in schema.items():
        present = parsed.sections.get(name, {})
        for key, entry in present.items():
            if key not in fields:
                raise ConfigError(f"unknown key '{key}' in [{name}]",
                                  line=entry.line, field=key)
        section_out = {}
        for key, field in fields.items():
            if key in present:
                section_out[key] = _convert(field, present[key].value, present[key].line, key)
            elif field.required:
                if name in parsed.sections:
                    raise ConfigError(f"missing required key '{key}' in [{name}]", field=key)
                raise ConfigError(f"missing required section [{name}] (needs '{key}')")
            else:
                section_out[key] = field.default
        out[name] = section_out
    return out
