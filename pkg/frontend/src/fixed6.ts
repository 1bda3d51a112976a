/**
 * Fixed 6-decimal formatting with round-half-even, exact over all finite
 * doubles.
 *
 * The canonical scene text fixes every real to 6 decimals, and replica
 * hashes are SHA-256 of that text — so this formatter must agree with the
 * server byte for byte on every input. `Number.prototype.toFixed` does
 * not: it resolves exact ties away from zero (e.g. `(0.0078125).toFixed(6)`
 * is `"0.007813"`, where the server emits `"0.007812"`), which would fork
 * hashes. Instead we expand the IEEE-754 value exactly with BigInt and
 * round once, half to even.
 */

const VIEW = new DataView(new ArrayBuffer(8));
const MANTISSA_MASK = 0xf_ffff_ffff_ffffn;
const IMPLICIT_BIT = 1n << 52n;
const MICRO = 1_000_000n;

/**
 * Format a finite double as `[-]digits.dddddd` (six decimals, half-even).
 * Negative zero keeps its sign: `fixed6(-0) === "-0.000000"`.
 */
export function fixed6(value: number): string {
  if (!Number.isFinite(value)) {
    throw new RangeError(`cannot fix non-finite value ${value}`);
  }
  VIEW.setFloat64(0, value);
  const bits = VIEW.getBigUint64(0);
  const negative = bits >> 63n === 1n;
  const biasedExp = Number((bits >> 52n) & 0x7ffn);
  const fraction = bits & MANTISSA_MASK;

  // |value| = mantissa * 2^exp, exactly.
  let mantissa: bigint;
  let exp: number;
  if (biasedExp === 0) {
    mantissa = fraction; // subnormal (or zero)
    exp = -1074;
  } else {
    mantissa = fraction | IMPLICIT_BIT;
    exp = biasedExp - 1075;
  }

  // micros = round_half_even(|value| * 10^6), via exact integer division.
  const scaled = mantissa * MICRO;
  let micros: bigint;
  if (exp >= 0) {
    micros = scaled << BigInt(exp);
  } else {
    const den = 1n << BigInt(-exp);
    const q = scaled / den;
    const twiceRemainder = (scaled % den) * 2n;
    const roundUp =
      twiceRemainder > den || (twiceRemainder === den && (q & 1n) === 1n);
    micros = roundUp ? q + 1n : q;
  }

  const digits = micros.toString().padStart(7, "0");
  const whole = digits.slice(0, -6);
  const frac = digits.slice(-6);
  return `${negative ? "-" : ""}${whole}.${frac}`;
}
