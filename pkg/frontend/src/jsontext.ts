/**
 * JSON text helpers matching the server's serialization conventions:
 * ASCII-only string escaping, recursively sorted object keys, compact
 * separators. Wire bodies and the canonical scene text both build on
 * these primitives.
 */

const SHORT_ESCAPES: Record<number, string> = {
  0x08: "\\b",
  0x09: "\\t",
  0x0a: "\\n",
  0x0c: "\\f",
  0x0d: "\\r",
  0x22: '\\"',
  0x5c: "\\\\",
};

/** Quote a string, escaping everything outside printable ASCII as \uXXXX. */
export function jsonString(value: string): string {
  let out = '"';
  for (let i = 0; i < value.length; i++) {
    const unit = value.charCodeAt(i);
    const short = SHORT_ESCAPES[unit];
    if (short !== undefined) {
      out += short;
    } else if (unit >= 0x20 && unit <= 0x7e) {
      out += value[i];
    } else {
      // Non-BMP characters fall out as two escaped surrogate halves,
      // matching the server's ensure-ASCII behaviour.
      out += "\\u" + unit.toString(16).padStart(4, "0");
    }
  }
  return out + '"';
}

/**
 * Compare strings by Unicode code point, the order the server sorts keys
 * in. Plain `<` on JS strings compares UTF-16 units, which disagrees once
 * astral-plane characters meet the U+E000..U+FFFF range.
 */
export function codePointCompare(a: string, b: string): number {
  let i = 0;
  let j = 0;
  while (i < a.length && j < b.length) {
    const ca = a.codePointAt(i)!;
    const cb = b.codePointAt(j)!;
    if (ca !== cb) return ca < cb ? -1 : 1;
    i += ca > 0xffff ? 2 : 1;
    j += cb > 0xffff ? 2 : 1;
  }
  return a.length - i === b.length - j ? 0 : a.length - i < b.length - j ? -1 : 1;
}

/** Serialize a number as JSON, keeping the sign of negative zero. */
export function jsonNumber(value: number): string {
  if (!Number.isFinite(value)) {
    throw new RangeError(`cannot serialize non-finite number ${value}`);
  }
  if (Object.is(value, -0)) return "-0.0";
  return JSON.stringify(value);
}

export type JsonValue =
  | string
  | number
  | boolean
  | null
  | JsonValue[]
  | { [key: string]: JsonValue };

/**
 * Compact JSON with recursively sorted keys and ASCII-escaped strings —
 * the shape every wire body uses, so peers can compare documents
 * textually.
 */
export function jsonCompact(value: unknown): string {
  if (value === null) return "null";
  switch (typeof value) {
    case "string":
      return jsonString(value);
    case "number":
      return jsonNumber(value);
    case "boolean":
      return value ? "true" : "false";
    case "object":
      break;
    default:
      throw new TypeError(`cannot serialize ${typeof value}`);
  }
  if (Array.isArray(value)) {
    return "[" + value.map(jsonCompact).join(",") + "]";
  }
  const record = value as Record<string, unknown>;
  const keys = Object.keys(record).sort(codePointCompare);
  const parts = keys.map((k) => `${jsonString(k)}:${jsonCompact(record[k])}`);
  return "{" + parts.join(",") + "}";
}
